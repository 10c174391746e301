//! Line-based `key = value` run configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gme_core::{ExperimentParams, QuadSettings, Source};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    FieldGrid,
    IntegrandGrid,
    Phase,
    Witness,
    Sweep,
    Estimate,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::FieldGrid,
        Mode::IntegrandGrid,
        Mode::Phase,
        Mode::Witness,
        Mode::Sweep,
        Mode::Estimate,
    ];

    /// Name used both as the `mode` value and as the subcommand.
    pub fn name(self) -> &'static str {
        match self {
            Mode::FieldGrid => "field-grid",
            Mode::IntegrandGrid => "integrand-grid",
            Mode::Phase => "phase",
            Mode::Witness => "witness",
            Mode::Sweep => "sweep",
            Mode::Estimate => "estimate",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// Sample grid for the two grid modes. The field grid uses all ranges; the
/// integrand grid ignores the `x` range and samples `t` uniformly over
/// `[0, τ]` unless `t_values` is given.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x_range: Option<(f64, f64)>,
    pub z_range: Option<(f64, f64)>,
    pub n_points: usize,
    pub t_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Power,
    Travel,
    Separation,
    DeltaX,
    PulseLength,
    Loops,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Power => "power",
            SweepVar::Travel => "D",
            SweepVar::Separation => "d",
            SweepVar::DeltaX => "delta_x",
            SweepVar::PulseLength => "L",
            SweepVar::Loops => "loops",
        }
    }

    pub fn from_name(s: &str) -> Option<SweepVar> {
        [
            SweepVar::Power,
            SweepVar::Travel,
            SweepVar::Separation,
            SweepVar::DeltaX,
            SweepVar::PulseLength,
            SweepVar::Loops,
        ]
        .into_iter()
        .find(|v| v.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Sweep {
    /// Linearly spaced points from `min` to `max` inclusive.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: ExperimentParams,
    pub grid: Option<Grid>,
    pub sweep: Option<Sweep>,
    pub output: Option<PathBuf>,
    pub quad: QuadSettings,
}

const KEYS: [&str; 22] = [
    "mode", "D_m", "L_m", "d_m", "delta_x_m", "lambda_m", "power_W", "kappa0", "tau_s", "loops",
    "rel_tol", "x_min", "x_max", "z_min", "z_max", "n_points", "t_values", "sweep_var",
    "sweep_min", "sweep_max", "sweep_steps", "output",
];

struct Entry {
    line: usize,
    value: String,
}

struct Entries(Vec<Option<Entry>>);

impl Entries {
    fn slot(key: &str) -> usize {
        KEYS.iter().position(|k| *k == key).expect("known key")
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.0[Self::slot(key)].as_ref()
    }

    fn has(&self, key: &str) -> bool {
        self.raw(key).is_some()
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(CliError::parse(e.line, format!("{key}: expected a finite number, got `{}`", e.value))),
        }
    }

    fn need_f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64(key)?.ok_or_else(|| CliError::Validation(format!("missing required key `{key}`")))
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::parse(e.line, format!("{key}: expected a non-negative integer, got `{}`", e.value)))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|item| match item.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::parse(e.line, format!("{key}: bad list item `{}`", item.trim()))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

fn tokenize(text: &str) -> Result<Entries, CliError> {
    let mut entries = Entries((0..KEYS.len()).map(|_| None).collect());
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CliError::parse(line, format!("expected `key = value`, got `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(slot) = KEYS.iter().position(|k| *k == key) else {
            return Err(CliError::parse(line, format!("unknown key `{key}`")));
        };
        if value.is_empty() {
            return Err(CliError::parse(line, format!("empty value for `{key}`")));
        }
        if let Some(prev) = &entries.0[slot] {
            return Err(CliError::parse(line, format!("duplicate key `{key}` (first set on line {})", prev.line)));
        }
        entries.0[slot] = Some(Entry {
            line,
            value: value.to_string(),
        });
    }
    Ok(entries)
}

/// Parses and validates a configuration from its text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let e = tokenize(text)?;

    let mode = match e.raw("mode") {
        None => return Err(CliError::Validation("missing required key `mode`".into())),
        Some(m) => Mode::from_name(&m.value)
            .ok_or_else(|| CliError::parse(m.line, format!("unknown mode `{}`", m.value)))?,
    };

    let source = match (e.raw("power_W"), e.raw("kappa0")) {
        (Some(_), Some(k)) => {
            return Err(CliError::parse(
                k.line,
                "both power_W and kappa0 given; units are ambiguous".to_string(),
            ))
        }
        (Some(_), None) => Source::PowerW(e.need_f64("power_W")?),
        (None, Some(_)) => Source::Kappa0(e.need_f64("kappa0")?),
        (None, None) => Source::Kappa0(1.0),
    };
    let si = matches!(source, Source::PowerW(_));

    let mut params = ExperimentParams::natural(
        e.need_f64("D_m")?,
        e.need_f64("L_m")?,
        e.need_f64("d_m")?,
        e.need_f64("delta_x_m")?,
        1.0,
    )
    .with_source(source);
    params.wavelength = e.f64("lambda_m")?;
    params.tau = e.f64("tau_s")?;
    if let Some(l) = e.usize("loops")? {
        params.loops = u32::try_from(l).map_err(|_| CliError::Validation(format!("loops too large: {l}")))?;
    }
    if params.wavelength.is_some() && !si {
        return Err(CliError::Validation("lambda_m needs SI units (power_W)".into()));
    }

    let mut quad = QuadSettings::default();
    if let Some(r) = e.f64("rel_tol")? {
        quad.rel_tol = r;
    }
    quad.validate().map_err(|err| CliError::Validation(err.to_string()))?;

    let is_grid = matches!(mode, Mode::FieldGrid | Mode::IntegrandGrid);
    for key in ["x_min", "x_max", "z_min", "z_max", "n_points", "t_values"] {
        let allowed = match key {
            "x_min" | "x_max" => mode == Mode::FieldGrid,
            _ => is_grid,
        };
        if e.has(key) && !allowed {
            return Err(CliError::Validation(format!("`{key}` is only valid in grid modes that use it, not {}", mode.name())));
        }
    }
    for key in ["sweep_var", "sweep_min", "sweep_max", "sweep_steps"] {
        if e.has(key) && mode != Mode::Sweep {
            return Err(CliError::Validation(format!("`{key}` is only valid in sweep mode")));
        }
    }

    let range = |lo: &str, hi: &str| -> Result<Option<(f64, f64)>, CliError> {
        match (e.f64(lo)?, e.f64(hi)?) {
            (None, None) => Ok(None),
            (Some(a), Some(b)) if a < b => Ok(Some((a, b))),
            (Some(a), Some(b)) => Err(CliError::Validation(format!("{lo} = {a} must be < {hi} = {b}"))),
            _ => Err(CliError::Validation(format!("{lo} and {hi} must be given together"))),
        }
    };
    let grid = if is_grid {
        let n_points = e
            .usize("n_points")?
            .ok_or_else(|| CliError::Validation("missing required key `n_points`".into()))?;
        if n_points < 2 {
            return Err(CliError::Validation(format!("n_points must be >= 2, got {n_points}")));
        }
        let g = Grid {
            x_range: range("x_min", "x_max")?,
            z_range: range("z_min", "z_max")?,
            n_points,
            t_values: e.list("t_values")?,
        };
        if mode == Mode::FieldGrid {
            for (what, missing) in [
                ("x_min/x_max", g.x_range.is_none()),
                ("z_min/z_max", g.z_range.is_none()),
                ("t_values", g.t_values.is_none()),
            ] {
                if missing {
                    return Err(CliError::Validation(format!("field-grid needs {what}")));
                }
            }
        }
        if let Some(ts) = &g.t_values {
            if ts.iter().any(|t| *t < 0.0) {
                return Err(CliError::Validation("t_values must be >= 0".into()));
            }
        }
        Some(g)
    } else {
        None
    };

    let sweep = if mode == Mode::Sweep {
        let var_entry = e
            .raw("sweep_var")
            .ok_or_else(|| CliError::Validation("missing required key `sweep_var`".into()))?;
        let var = SweepVar::from_name(&var_entry.value)
            .ok_or_else(|| CliError::parse(var_entry.line, format!("unknown sweep_var `{}`", var_entry.value)))?;
        let steps = e
            .usize("sweep_steps")?
            .ok_or_else(|| CliError::Validation("missing required key `sweep_steps`".into()))?;
        let s = Sweep {
            var,
            min: e.need_f64("sweep_min")?,
            max: e.need_f64("sweep_max")?,
            steps,
        };
        if steps == 0 {
            return Err(CliError::Validation("sweep_steps must be >= 1".into()));
        }
        if s.min > s.max || (steps > 1 && s.min == s.max) {
            return Err(CliError::Validation(format!("sweep range [{}, {}] is degenerate", s.min, s.max)));
        }
        if var == SweepVar::Power && !si {
            return Err(CliError::Validation("a power sweep needs SI units (power_W)".into()));
        }
        if var == SweepVar::Loops && s.points().iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(CliError::Validation("loops sweep points must be non-negative integers".into()));
        }
        for v in s.points() {
            apply_sweep(&params, var, v)
                .validate()
                .map_err(|err| CliError::Validation(format!("sweep point {} = {v}: {err}", var.name())))?;
        }
        Some(s)
    } else {
        None
    };

    if mode == Mode::Estimate && (!si || params.wavelength.is_none()) {
        return Err(CliError::Validation("estimate mode needs SI units: power_W and lambda_m".into()));
    }
    params.validate().map_err(|err| CliError::Validation(err.to_string()))?;

    Ok(RunConfig {
        mode,
        params,
        grid,
        sweep,
        output: e.raw("output").map(|o| PathBuf::from(&o.value)),
        quad,
    })
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|err| CliError::Io(format!("{}: {err}", path.display())))?;
    parse_config(&text)
}

/// Parameters of one sweep point.
pub fn apply_sweep(base: &ExperimentParams, var: SweepVar, v: f64) -> ExperimentParams {
    let mut p = *base;
    match var {
        SweepVar::Power => p.source = Source::PowerW(v),
        SweepVar::Travel => p.travel = v,
        SweepVar::Separation => p.separation = v,
        SweepVar::DeltaX => p.delta_x = v,
        SweepVar::PulseLength => p.pulse_length = v,
        SweepVar::Loops => p.loops = v as u32,
    }
    p
}

/// Serializes a configuration in the format read by [`parse_config`].
pub fn write_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    let p = &cfg.params;
    put("mode", cfg.mode.name().into());
    put("D_m", num(p.travel));
    put("L_m", num(p.pulse_length));
    put("d_m", num(p.separation));
    put("delta_x_m", num(p.delta_x));
    if let Some(l) = p.wavelength {
        put("lambda_m", num(l));
    }
    match p.source {
        Source::PowerW(w) => put("power_W", num(w)),
        Source::Kappa0(k) => put("kappa0", num(k)),
    }
    if let Some(t) = p.tau {
        put("tau_s", num(t));
    }
    put("loops", p.loops.to_string());
    put("rel_tol", num(cfg.quad.rel_tol));
    if let Some(g) = &cfg.grid {
        if let Some((a, b)) = g.x_range {
            put("x_min", num(a));
            put("x_max", num(b));
        }
        if let Some((a, b)) = g.z_range {
            put("z_min", num(a));
            put("z_max", num(b));
        }
        put("n_points", g.n_points.to_string());
        if let Some(ts) = &g.t_values {
            put("t_values", ts.iter().map(|t| num(*t)).collect::<Vec<_>>().join(", "));
        }
    }
    if let Some(s) = &cfg.sweep {
        put("sweep_var", s.var.name().into());
        put("sweep_min", num(s.min));
        put("sweep_max", num(s.max));
        put("sweep_steps", s.steps.to_string());
    }
    if let Some(o) = &cfg.output {
        put("output", o.display().to_string());
    }
    out
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
# two-pulse field snapshot
mode = field-grid
D_m = 5
L_m = 1
d_m = 2
delta_x_m = 1
x_min = 0
x_max = 3
z_min = -1
z_max = 6
n_points = 31
t_values = 2, 4
";

    #[test]
    fn minimal_natural_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.mode, Mode::FieldGrid);
        let u = cfg.params.units();
        assert_eq!((u.kappa0, u.c_value), (1.0, 1.0));
        assert_eq!(cfg.grid.unwrap().t_values, Some(vec![2.0, 4.0]));
    }

    #[test]
    fn overlapping_branches_fail_validation() {
        let text = MINIMAL.replace("d_m = 2", "d_m = 1");
        assert!(matches!(parse_config(&text), Err(CliError::Validation(_))));
    }

    #[test]
    fn both_unit_sources_is_a_parse_error() {
        let text = format!("{MINIMAL}power_W = 1e15\nkappa0 = 1\n");
        match parse_config(&text) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        for (text, line) in [
            ("mode = phase\nbogus = 1\n", 2),
            ("mode = phase\n\nD_m 5\n", 3),
            ("mode = phase\nD_m = 5\nD_m = 6\n", 3),
            ("mode = phase\nD_m = five\nL_m = 1\nd_m = 2\ndelta_x_m = 1\n", 2),
        ] {
            match parse_config(text) {
                Err(CliError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn keys_outside_their_mode_are_rejected() {
        let text = "mode = phase\nD_m = 5\nL_m = 1\nd_m = 2\ndelta_x_m = 1\nsweep_steps = 3\n";
        assert!(matches!(parse_config(text), Err(CliError::Validation(_))));
        let text = "mode = integrand-grid\nD_m = 5\nL_m = 1\nd_m = 2\ndelta_x_m = 1\nn_points = 5\nx_min = 0\nx_max = 1\n";
        assert!(matches!(parse_config(text), Err(CliError::Validation(_))));
    }

    #[test]
    fn sweep_points_are_inclusive_and_ascending() {
        let s = Sweep {
            var: SweepVar::Power,
            min: 1e14,
            max: 1e15,
            steps: 4,
        };
        assert_eq!(s.points(), vec![1e14, 4e14, 7e14, 1e15]);
    }

    #[test]
    fn writes_what_it_reads() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(parse_config(&write_config(&cfg)).unwrap(), cfg);
    }
}
