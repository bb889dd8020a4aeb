//! Command-line front end for `softmode-core`: parameter files, presets,
//! overrides and CSV/JSON/text output.

pub mod args;
pub mod error;
pub mod output;
pub mod paramfile;

use std::f64::consts::TAU;

use softmode_core::{
    classify, optimal_power, run_frequency_sweep, run_map, run_power_sweep, solve_steady_state, sql_bound,
    steady_state_residual, Axis, AxisVar, Detuning, EvalFrequency, Formula, Preset, Scale, SweepKind, SweepResult,
    SweepSpec, SystemParams,
};

use crate::args::{Cli, Command, GridArgs, OptimalPowerArgs, PowerSweepArgs, SpectrumArgs, SqlArgs};
use crate::error::CliError;
use crate::output::{Cell, Format, Record, Report, Table};

/// Resolved inputs shared by every subcommand.
struct Context {
    preset: Option<Preset>,
    params: SystemParams,
    formula: Formula,
    hz: bool,
}

impl Context {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let preset = match &cli.preset {
            None => None,
            Some(name) => Some(Preset::from_name(name).ok_or_else(|| {
                let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                CliError::invalid(format!("unknown preset `{name}` (available: {})", known.join(", ")))
            })?),
        };
        let base = preset.map_or_else(SystemParams::baseline, |p| p.base_params());

        let mut settings = Vec::new();
        if let Some(path) = &cli.config {
            settings.extend(paramfile::parse_file(path)?);
        }
        for o in &cli.overrides {
            settings.push(paramfile::parse_override(o)?);
        }
        let params = paramfile::apply(base, &settings)?;
        let formula = if cli.full_formula { Formula::Full } else { Formula::Resonant };
        Ok(Context { preset, params, formula, hz: cli.hz })
    }

    fn freq(&self, v: f64) -> f64 {
        if self.hz {
            TAU * v
        } else {
            v
        }
    }

    fn eval_frequency(&self, omega: Option<f64>) -> EvalFrequency {
        omega.map_or(EvalFrequency::SoftModeResonance, |w| EvalFrequency::Fixed(self.freq(w)))
    }

    /// The preset's own sweep when it matches `kind`, otherwise `fallback`'s.
    fn preset_spec(&self, kind: SweepKind, fallback: Preset) -> SweepSpec {
        match self.preset {
            Some(p) if p.sweep_spec().kind == kind => p.sweep_spec(),
            _ => fallback.sweep_spec(),
        }
    }
}

/// Runs the invocation and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let ctx = Context::from_cli(cli)?;
    let report = match &cli.command {
        Command::Steady => steady(&ctx)?,
        Command::Stability => stability(&ctx)?,
        Command::StabilityMap(a) => stability_map(&ctx, a)?,
        Command::Spectrum(a) => spectrum(&ctx, a)?,
        Command::Powersweep(a) => powersweep(&ctx, a)?,
        Command::Map(a) => map(&ctx, a)?,
        Command::Sql(a) => sql(&ctx, a)?,
        Command::OptimalPower(a) => optimal(&ctx, a)?,
    };
    let format = if cli.json { Format::Json } else { cli.format.unwrap_or(report.default_format()) };
    report.render(format)
}

/// Runs the invocation and writes to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = execute(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}

fn params_record(p: &SystemParams, r: &mut Record) {
    r.push("omega_m", p.omega_m);
    r.push("gamma_m", p.gamma_m);
    r.push("g_l", p.g_l);
    r.push("g_q", p.g_q);
    r.push("kappa", p.kappa);
    r.push("power", p.power);
    r.push("wavelength", p.wavelength);
    r.push("temperature", p.temperature);
    let (mode, delta) = match p.detuning {
        Detuning::Bare(d) => ("bare", d),
        Detuning::Effective(d) => ("effective", d),
    };
    r.push("detuning_mode", mode);
    r.push("detuning", delta);
    r.push("mass", p.mass);
}

fn axis_record(prefix: &str, a: &Axis, r: &mut Record) {
    r.push(&format!("{prefix}_var"), a.var.as_str());
    r.push(&format!("{prefix}_min"), a.min);
    r.push(&format!("{prefix}_max"), a.max);
    r.0.push((format!("{prefix}_points"), Cell::Int(a.n_points as u64)));
    r.push(&format!("{prefix}_scale"), if a.scale == Scale::Log { "log" } else { "linear" });
}

fn metadata(command: &str, ctx: &Context, spec: &SweepSpec) -> Record {
    let mut r = Record::default();
    r.push("command", command);
    r.push("preset", ctx.preset.map_or("", |p| p.name()));
    r.push("formula", spec.formula.as_str());
    match spec.eval_frequency {
        EvalFrequency::Fixed(w) => r.push("eval_frequency", w),
        EvalFrequency::SoftModeResonance => r.push("eval_frequency", "soft_mode_resonance"),
    }
    params_record(&spec.base, &mut r);
    axis_record("axis1", &spec.axis1, &mut r);
    if let Some(a) = &spec.axis2 {
        axis_record("axis2", a, &mut r);
    }
    r
}

fn steady(ctx: &Context) -> Result<Report, CliError> {
    let p = &ctx.params;
    let ss = solve_steady_state(p).map_err(|e| with_point(e.into(), p))?;
    let (r1, r2) = steady_state_residual(p, &ss);
    let mut r = Record::default();
    r.push("x_s", ss.x_s);
    r.push("c_s_re", ss.c_s.re);
    r.push("c_s_im", ss.c_s.im);
    r.push("photon_number", ss.photon_number);
    r.push("omega_m_eff", ss.omega_m_eff);
    r.push("omega_m_eff_over_omega_m", ss.omega_m_eff / p.omega_m);
    r.push("g_eff", ss.g_eff);
    r.push("delta_eff", ss.delta_eff);
    r.push("x_quad", ss.x_quad);
    r.push("p_quad", ss.p_quad);
    r.push("residual_displacement", r1);
    r.push("residual_amplitude", r2);
    Ok(Report::Single(r))
}

fn stability(ctx: &Context) -> Result<Report, CliError> {
    let report = classify(&ctx.params)?;
    let mut r = Record::default();
    r.push("status", report.status.as_str());
    r.push("routh_hurwitz_stable", report.routh_hurwitz_stable);
    r.push("eigen_stable", report.eigen_stable);
    r.push("physical", report.physical);
    r.push("max_real_part", report.max_real_part);
    for i in 0..5 {
        r.push(&format!("a{i}"), report.char_poly.map(|c| c[i]));
    }
    Ok(Report::Single(r))
}

fn grid_spec(ctx: &Context, a: &GridArgs) -> SweepSpec {
    let spec = ctx.preset_spec(SweepKind::Map2D, Preset::Fig4);
    let mut power = spec.axis1;
    let mut ratio = spec.axis2.expect("map preset has two axes");
    power.min = a.p_min_uw.map_or(power.min, |v| v / 1e6);
    power.max = a.p_max_uw.map_or(power.max, |v| v / 1e6);
    power.n_points = a.power_points.unwrap_or(power.n_points);
    ratio.min = a.ratio_min.unwrap_or(ratio.min);
    ratio.max = a.ratio_max.unwrap_or(ratio.max);
    ratio.n_points = a.ratio_points.unwrap_or(ratio.n_points);
    SweepSpec {
        axis1: power,
        axis2: Some(ratio),
        eval_frequency: ctx.eval_frequency(a.omega),
        base: ctx.params,
        formula: ctx.formula,
        ..spec
    }
}

fn stability_map(ctx: &Context, a: &GridArgs) -> Result<Report, CliError> {
    let spec = grid_spec(ctx, a);
    let ratio_axis = spec.axis2.expect("grid spec has two axes");
    spec.axis1.validate()?;
    ratio_axis.validate()?;
    let ratios = ratio_axis.values();
    let mut rows = Vec::with_capacity(spec.axis1.n_points * ratios.len());
    for power in spec.axis1.values() {
        for &ratio in &ratios {
            let report = classify(&spec.base.with_power(power).with_gq_ratio(ratio))?;
            rows.push(vec![Cell::Num(power), Cell::Num(ratio), report.status.as_str().into()]);
        }
    }
    Ok(Report::Table(Table {
        metadata: metadata("stability-map", ctx, &spec),
        columns: vec!["power", "gq_over_gl", "status"],
        rows,
    }))
}

fn noise_cells(row: &softmode_core::SweepRow) -> Vec<Cell> {
    match row.outcome.breakdown() {
        Some(b) => vec![
            row.outcome.status().as_str().into(),
            b.omega.into(),
            row.omega_m_eff.into(),
            b.thermal.into(),
            b.backaction.into(),
            b.shot.into(),
            b.total.into(),
            b.formula.as_str().into(),
        ],
        None => {
            let mut cells = vec![row.outcome.status().as_str().into(), Cell::Empty, row.omega_m_eff.into()];
            cells.extend(std::iter::repeat_n(Cell::Empty, 5));
            cells
        }
    }
}

const NOISE_COLUMNS: [&str; 8] =
    ["status", "omega_rad_s", "omega_m_eff", "thermal", "backaction", "shot", "total", "formula"];

fn sweep_table(command: &str, ctx: &Context, result: &SweepResult, leading: &[&'static str]) -> Report {
    let rows = result
        .rows
        .iter()
        .map(|row| {
            let mut cells = vec![Cell::Num(row.axis1)];
            if let Some(v) = row.axis2 {
                cells.push(Cell::Num(v));
            }
            cells.extend(noise_cells(row));
            cells
        })
        .collect();
    let mut columns = leading.to_vec();
    columns.extend(NOISE_COLUMNS);
    Report::Table(Table { metadata: metadata(command, ctx, &result.spec), columns, rows })
}

fn spectrum(ctx: &Context, a: &SpectrumArgs) -> Result<Report, CliError> {
    let wm = ctx.params.omega_m;
    let preset = ctx.preset_spec(SweepKind::FrequencySweep, Preset::Fig2).axis1;
    let axis = Axis::linear(
        AxisVar::Omega,
        a.omega_min.map_or(0.1 * wm, |w| ctx.freq(w)),
        a.omega_max.map_or(2.0 * wm, |w| ctx.freq(w)),
        a.points.unwrap_or(preset.n_points),
    );
    let spec = SweepSpec {
        kind: SweepKind::FrequencySweep,
        axis1: axis,
        axis2: None,
        eval_frequency: EvalFrequency::Fixed(wm),
        base: ctx.params,
        formula: ctx.formula,
    };
    let result = run_frequency_sweep(&spec).map_err(|e| with_point(e.into(), &ctx.params))?;
    let rows = result
        .rows
        .iter()
        .map(|row| {
            let b = row.outcome.breakdown().expect("frequency sweep rows carry noise");
            vec![
                b.omega.into(),
                (b.omega / wm).into(),
                b.thermal.into(),
                b.backaction.into(),
                b.shot.into(),
                b.total.into(),
                b.formula.as_str().into(),
            ]
        })
        .collect();
    Ok(Report::Table(Table {
        metadata: metadata("spectrum", ctx, &spec),
        columns: vec!["omega_rad_s", "omega_over_omega_m", "thermal", "backaction", "shot", "total", "formula"],
        rows,
    }))
}

fn powersweep(ctx: &Context, a: &PowerSweepArgs) -> Result<Report, CliError> {
    let spec = ctx.preset_spec(SweepKind::PowerSweep, Preset::Fig3);
    let mut axis = spec.axis1;
    axis.min = a.p_min_uw.map_or(axis.min, |v| v / 1e6);
    axis.max = a.p_max_uw.map_or(axis.max, |v| v / 1e6);
    axis.n_points = a.points.unwrap_or(axis.n_points);
    let spec = SweepSpec {
        axis1: axis,
        eval_frequency: ctx.eval_frequency(a.omega),
        base: ctx.params,
        formula: ctx.formula,
        ..spec
    };
    let result = run_power_sweep(&spec)?;
    Ok(sweep_table("powersweep", ctx, &result, &["power"]))
}

fn map(ctx: &Context, a: &GridArgs) -> Result<Report, CliError> {
    let spec = grid_spec(ctx, a);
    let result = run_map(&spec)?;
    Ok(sweep_table("map", ctx, &result, &["power", "gq_over_gl"]))
}

fn sql(ctx: &Context, a: &SqlArgs) -> Result<Report, CliError> {
    let p = &ctx.params;
    let omega = a.omega.map_or(p.omega_m, |w| ctx.freq(w));
    let ss = solve_steady_state(p).map_err(|e| with_point(e.into(), p))?;
    let mut r = Record::default();
    r.push("omega_rad_s", omega);
    r.push("omega_m_eff", ss.omega_m_eff);
    r.push("sql", sql_bound(p, omega, ss.omega_m_eff));
    Ok(Report::Single(r))
}

fn optimal(ctx: &Context, a: &OptimalPowerArgs) -> Result<Report, CliError> {
    if ctx.formula == Formula::Full {
        return Err(CliError::invalid("optimal-power minimises the closed-form spectrum; drop --full-formula"));
    }
    let p = &ctx.params;
    let eval = ctx.eval_frequency(a.omega);
    let opt = optimal_power(p, eval, (a.p_min_uw / 1e6, a.p_max_uw / 1e6))?;
    let at = p.with_power(opt.power);
    let ss = solve_steady_state(&at)?;
    let zeta = 4.0 * at.g_l * at.g_l * ss.photon_number / at.kappa;
    let mut r = Record::default();
    r.push("power", opt.power);
    r.push("power_uW", opt.power * 1e6);
    r.push("total", opt.s_min);
    r.push("omega_rad_s", opt.omega);
    r.push("omega_m_eff", ss.omega_m_eff);
    r.push("zeta_over_gamma_m", zeta / at.gamma_m);
    r.push("constrained", opt.constrained);
    Ok(Report::Single(r))
}

/// Adds the operating point to a physics diagnostic.
fn with_point(e: CliError, p: &SystemParams) -> CliError {
    match e {
        CliError::Physics(msg) => CliError::Physics(format!(
            "{msg} (power = {:e} W, g_q/g_l = {}, detuning = {:e} rad/s)",
            p.power,
            p.gq_ratio(),
            p.detuning.value()
        )),
        other => other,
    }
}
