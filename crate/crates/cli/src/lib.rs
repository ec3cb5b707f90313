//! Command-line driver: argument parsing, config files, seeding and output.

pub mod config;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};

use d4nlse::dynamics::{self, IntegratorConfig};
use d4nlse::grid::{complex_grid, Range1};
use d4nlse::stationary::{self, classify, SelfConsistentConfig};
use d4nlse::{continuum, edge_modes, floquet, stability, Boundary, Error, LatticeState, ModelParams, C64};

use table::{Cell, Format, Table};

/// Exit code for numeric failures.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "D4NLSE_SEED";

#[derive(Debug, Parser)]
#[command(name = "d4nlse", version, about = "Density-difference-dependent lattice NLSE solvers")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Hopping amplitude J.
    #[arg(long = "J", default_value_t = 1.0)]
    #[serde(rename = "J")]
    pub hopping: f64,
    /// Real part of the coupling γ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_re: f64,
    /// Imaginary part of the coupling γ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_im: f64,
    /// Number of lattice sites.
    #[arg(long = "L", default_value_t = 29)]
    #[serde(rename = "L")]
    pub len: usize,
    /// Time step, in units of 1/J.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Stationarity tolerance on the residual.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Random seed; falls back to D4NLSE_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent random restarts for ground-state searches.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for sweeps; defaults to available parallelism.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// TOML file whose keys mirror the flags; explicit flags win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlaneGrid {
    /// Real-part grid, start:end:count.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_re: Option<Range1>,
    /// Imaginary-part grid, start:end:count.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_im: Option<Range1>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest-energy stationary state by imaginary-time restarts.
    Ground {
        #[command(flatten)]
        common: Common,
        /// Emit the site-resolved profile instead of the summary row.
        #[arg(long)]
        profile: bool,
    },
    /// Highest-energy stationary state by energy ascent.
    Highest {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        profile: bool,
    },
    /// Soliton branch continuation towards small |γ|.
    Branch {
        #[command(flatten)]
        common: Common,
        /// arg γ in degrees.
        #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
        gamma_phase: f64,
        /// |γ| grid, start:end:count; the larger end is traced first.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<Range1>,
    },
    /// Bogoliubov spectrum of a plane-wave condensate.
    Stability {
        #[command(flatten)]
        common: Common,
        /// Condensate momentum; uses the arbitrary-k spectrum when given.
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Condensate density for the arbitrary-k spectrum; defaults to 1/L.
        #[arg(long)]
        n_k: Option<f64>,
        /// Also diagonalize the full linearization around the k = 0 state.
        #[arg(long)]
        numeric: bool,
    },
    /// Ground-state class, energies and condensate stability over a γ grid.
    PhaseDiagram {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: PlaneGrid,
    },
    /// Zero-energy edge mode on an open chain.
    Zeromode {
        #[command(flatten)]
        common: Common,
    },
    /// Edge-mode localization ratio over a γ grid.
    ZeromodeScan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: PlaneGrid,
    },
    /// Driven lattice against the effective model over an ω ladder.
    Floquet {
        #[command(flatten)]
        common: Common,
        /// Drive frequencies, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = floquet::DEFAULT_LADDER.to_vec())]
        omegas: Vec<f64>,
        /// Physical evolution time.
        #[arg(long, default_value_t = 2.0)]
        time: f64,
        /// Integration steps per drive period.
        #[arg(long, default_value_t = floquet::DEFAULT_SUBSTEPS)]
        substeps: usize,
        /// Coefficient of the effective coupling.
        #[arg(long, value_enum, default_value_t = Variant::Plus27)]
        variant: Variant,
    },
    /// Gaussian variational energy of the continuum limit.
    Continuum {
        #[command(flatten)]
        common: Common,
        /// Lattice spacing.
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        /// Grid of the width parameter a, start:end:count.
        #[arg(long, allow_hyphen_values = true)]
        a_grid: Option<Range1>,
    },
    /// Real-time evolution with conserved-quantity monitoring.
    Evolve {
        #[command(flatten)]
        common: Common,
        /// Number of time steps.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Record every this many steps.
        #[arg(long, default_value_t = 100)]
        sample_every: usize,
        #[arg(long, value_enum, default_value_t = Initial::PlaneWave)]
        init: Initial,
        /// Plane-wave index m, k = 2πm/L.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[value(name = "plus27")]
    Plus27,
    #[value(name = "minus27")]
    Minus27,
    #[value(name = "plus9")]
    Plus9,
    #[value(name = "minus9")]
    Minus9,
}

impl From<Variant> for floquet::CoefficientVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Plus27 => Self::Plus27,
            Variant::Minus27 => Self::Minus27,
            Variant::Plus9 => Self::Plus9,
            Variant::Minus9 => Self::Minus9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Initial {
    PlaneWave,
    Random,
    Soliton,
}

/// Failure of a run, mapped onto an exit code.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Numeric(Error),
    Io(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Numeric(e)
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Numeric(_) | RunError::Io(_) => EXIT_FAILURE,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            RunError::Usage(_) => "usage",
            RunError::Numeric(e) => e.category(),
            RunError::Io(_) => "io",
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) | RunError::Io(m) => f.write_str(m),
            RunError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::splice_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error[usage]: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Ground { common, .. }
        | Command::Highest { common, .. }
        | Command::Branch { common, .. }
        | Command::Stability { common, .. }
        | Command::PhaseDiagram { common, .. }
        | Command::Zeromode { common }
        | Command::ZeromodeScan { common, .. }
        | Command::Floquet { common, .. }
        | Command::Continuum { common, .. }
        | Command::Evolve { common, .. } => common,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Ground { .. } => "ground",
        Command::Highest { .. } => "highest",
        Command::Branch { .. } => "branch",
        Command::Stability { .. } => "stability",
        Command::PhaseDiagram { .. } => "phase-diagram",
        Command::Zeromode { .. } => "zeromode",
        Command::ZeromodeScan { .. } => "zeromode-scan",
        Command::Floquet { .. } => "floquet",
        Command::Continuum { .. } => "continuum",
        Command::Evolve { .. } => "evolve",
    }
}

/// Seed from the flag, else the environment, else 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, RunError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| RunError::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

struct Output {
    meta: Map<String, Value>,
    table: Table,
}

impl Output {
    fn new(cmd: &Command, seed: u64, extra: Value, columns: &[&str]) -> Self {
        let common = common_of(cmd);
        let mut config = match to_value(common) {
            Value::Object(m) => m,
            _ => unreachable!("struct serializes to an object"),
        };
        config.insert("seed".into(), Value::from(seed));
        config.remove("out");
        if let Value::Object(m) = extra {
            config.extend(m);
        }
        let mut meta = Map::new();
        meta.insert("program".into(), Value::from("d4nlse"));
        meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        meta.insert("command".into(), Value::from(command_name(cmd)));
        meta.insert("config".into(), Value::Object(config));
        Self { meta, table: Table::new(columns) }
    }

    fn note(&mut self, key: &str, v: Value) {
        self.meta.insert(key.into(), v);
    }

    fn finish(self, common: &Common) -> Result<(), RunError> {
        table::write_table(&self.table, &self.meta, common.format, common.out.as_deref()).map_err(RunError::Io)
    }
}

fn params_of(c: &Common) -> Result<ModelParams, RunError> {
    Ok(ModelParams::new(c.hopping, C64::new(c.gamma_re, c.gamma_im))?)
}

fn integrator_of(c: &Common, seed: u64) -> IntegratorConfig {
    let mut cfg = IntegratorConfig::imaginary_time().with_seed(seed);
    cfg.dt = c.dt;
    cfg.tol = c.tol;
    cfg
}

fn validate(c: &Common) -> Result<(), RunError> {
    if c.len < 3 {
        return Err(RunError::Usage(format!("--L must be at least 3, got {}", c.len)));
    }
    if !(c.dt > 0.0) || !(c.tol > 0.0) {
        return Err(RunError::Usage("--dt and --tol must be positive".into()));
    }
    if c.restarts == 0 {
        return Err(RunError::Usage("--restarts must be at least 1".into()));
    }
    if c.jobs == Some(0) {
        return Err(RunError::Usage("--jobs must be at least 1".into()));
    }
    Ok(())
}

fn grid_meta(g: &PlaneGrid) -> Value {
    serde_json::json!({
        "grid_re": g.grid_re.map(|r| r.to_string()),
        "grid_im": g.grid_im.map(|r| r.to_string()),
    })
}

fn plane_grid(g: &PlaneGrid, c: &Common) -> Result<Vec<C64>, RunError> {
    let re = g.grid_re.unwrap_or(Range1::single(c.gamma_re));
    let im = g.grid_im.unwrap_or(Range1::single(c.gamma_im));
    Ok(complex_grid(&re, &im))
}

fn execute(cmd: &Command) -> Result<(), RunError> {
    let common = common_of(cmd);
    validate(common)?;
    let seed = resolve_seed(common.seed)?;
    let jobs = common.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| RunError::Io(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cmd, common, seed))
}

const STATE_COLUMNS: [&str; 10] = [
    "gamma_re", "gamma_im", "L", "energy", "mu", "residual", "converged", "class", "three_site_weight",
    "participation_ratio",
];

fn dispatch(cmd: &Command, common: &Common, seed: u64) -> Result<(), RunError> {
    match cmd {
        Command::Ground { profile, .. } | Command::Highest { profile, .. } => {
            let params = params_of(common)?;
            let cfg = integrator_of(common, seed);
            let s = if matches!(cmd, Command::Ground { .. }) {
                dynamics::find_ground_state(&params, common.len, &cfg, common.restarts)?
            } else {
                dynamics::find_highest_state(&params, common.len, &cfg, common.restarts)?
            };
            let class = classify(&s.state);
            let extra = serde_json::json!({ "profile": profile });
            if *profile {
                let mut out = Output::new(cmd, seed, extra, &["site", "re", "im", "density"]);
                out.note("energy", Value::from(s.energy));
                out.note("mu", Value::from(s.mu));
                for (j, a) in s.state.amplitudes().iter().enumerate() {
                    out.table.push(vec![(j + 1).into(), a.re.into(), a.im.into(), a.norm_sqr().into()]);
                }
                out.finish(common)
            } else {
                let mut out = Output::new(cmd, seed, extra, &STATE_COLUMNS);
                out.table.push(vec![
                    common.gamma_re.into(),
                    common.gamma_im.into(),
                    common.len.into(),
                    s.energy.into(),
                    s.mu.into(),
                    s.residual.into(),
                    s.converged.into(),
                    class.kind.as_str().into(),
                    class.three_site_weight.into(),
                    class.participation_ratio.into(),
                ]);
                out.finish(common)
            }
        }
        Command::Branch { gamma_phase, grid, .. } => {
            let phase = gamma_phase.to_radians();
            let points = match grid {
                Some(r) => {
                    let (lo, hi) = (r.start.min(r.end), r.start.max(r.end));
                    stationary::uniform_branch_grid(lo, hi, r.count)
                }
                None => stationary::default_branch_grid(1.5, 6.0),
            };
            let mut sc = SelfConsistentConfig::default();
            sc.residual_tol = common.tol.max(1e-12);
            let trace = stationary::soliton_branch_trace(phase, common.hopping, common.len, &points, &sc)?;
            let extra = serde_json::json!({ "gamma_phase_deg": gamma_phase, "grid": grid.map(|g| g.to_string()) });
            let mut out = Output::new(
                cmd,
                seed,
                extra,
                &["gamma_abs", "gamma_re", "gamma_im", "energy", "mu", "residual", "converged", "class", "three_site_weight"],
            );
            if let Some(t) = &trace.termination {
                out.note("termination_gamma_abs", Value::from(t.gamma_abs));
                out.note("termination_energy", Value::from(t.energy));
                out.note("termination_mu", Value::from(t.mu));
            }
            for p in &trace.points {
                out.table.push(vec![
                    p.gamma_abs.into(),
                    (p.gamma_abs * phase.cos()).into(),
                    (p.gamma_abs * phase.sin()).into(),
                    p.energy.into(),
                    p.mu.into(),
                    p.residual.into(),
                    p.converged.into(),
                    p.class.kind.as_str().into(),
                    p.class.three_site_weight.into(),
                ]);
            }
            out.finish(common)
        }
        Command::Stability { k, n_k, numeric, .. } => {
            let params = params_of(common)?;
            let len = common.len;
            let extra = serde_json::json!({ "k": k, "n_k": n_k, "numeric": numeric });
            let mut columns = vec!["k", "p", "eps_squared", "stable", "growth_rate"];
            if *numeric {
                columns.push("numeric_eps_abs");
            }
            let mut out = Output::new(cmd, seed, extra, &columns);
            out.note("threshold_gamma_im", Value::from(stability::instability_threshold(common.hopping, len)));
            out.note("condensate_stable", Value::from(stability::condensate_stable_k0(&params, len)));
            let numeric_modes = if *numeric {
                let pw = LatticeState::uniform(len, Boundary::Periodic)?;
                let s = d4nlse::StationaryState::evaluate(pw, &params, true)?;
                let mut w: Vec<f64> = stability::numeric_linearization(&s, &params)?
                    .frequencies
                    .iter()
                    .map(|z| z.norm())
                    .collect();
                w.sort_by(f64::total_cmp);
                Some(w)
            } else {
                None
            };
            for p in d4nlse::lattice::momentum_grid(len) {
                let r = match k {
                    Some(k) => stability::dispersion_arbitrary_k(*k, p, n_k.unwrap_or(1.0 / len as f64), &params),
                    None => stability::dispersion_k0(p, &params, len),
                };
                let mut row: Vec<Cell> =
                    vec![r.k.into(), p.into(), r.eps_squared.into(), r.stable.into(), r.growth_rate().into()];
                if let Some(w) = &numeric_modes {
                    // closest numeric mode to the analytic |ε|
                    let target = r.eps().norm();
                    let best = w.iter().copied().min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
                    row.push(best.into());
                }
                out.table.push(row);
            }
            out.finish(common)
        }
        Command::PhaseDiagram { grid, .. } => {
            let points = plane_grid(grid, common)?;
            let cfg = integrator_of(common, seed);
            let recs = stability::phase_diagram_sweep(&points, common.hopping, common.len, &cfg, common.restarts)?;
            let mut out = Output::new(
                cmd,
                seed,
                grid_meta(grid),
                &[
                    "gamma_re", "gamma_im", "ground_class", "e_ground", "e_plane_wave", "e_soliton_candidate",
                    "condensate_stable", "soliton_exists", "e_soliton", "error",
                ],
            );
            for r in recs {
                out.table.push(vec![
                    r.gamma.re.into(),
                    r.gamma.im.into(),
                    r.ground_kind().map(|k| k.as_str()).into(),
                    r.e_ground.into(),
                    r.e_plane_wave.into(),
                    r.e_soliton_candidate.into(),
                    r.condensate_stable.into(),
                    r.soliton_exists.into(),
                    r.e_soliton.into(),
                    r.error.into(),
                ]);
            }
            out.finish(common)
        }
        Command::Zeromode { .. } => {
            let params = params_of(common)?;
            let z = edge_modes::build_zero_mode(&params, common.len)?;
            let mut out = Output::new(
                cmd,
                seed,
                Value::Null,
                &["gamma_re", "gamma_im", "L", "localization_ratio", "residual", "seed_amplitude", "mirrored"],
            );
            out.table.push(vec![
                common.gamma_re.into(),
                common.gamma_im.into(),
                common.len.into(),
                z.localization_ratio.into(),
                z.residual.into(),
                z.seed.into(),
                z.mirrored.into(),
            ]);
            out.finish(common)
        }
        Command::ZeromodeScan { grid, .. } => {
            let points = plane_grid(grid, common)?;
            let rows = edge_modes::gamma_plane_scan(&points, common.hopping, common.len)?;
            let mut out =
                Output::new(cmd, seed, grid_meta(grid), &["gamma_re", "gamma_im", "localization_ratio", "residual", "error"]);
            for r in rows {
                out.table.push(vec![
                    r.gamma.re.into(),
                    r.gamma.im.into(),
                    r.localization_ratio.into(),
                    r.residual.into(),
                    r.error.into(),
                ]);
            }
            out.finish(common)
        }
        Command::Floquet { omegas, time, substeps, variant, .. } => {
            if omegas.is_empty() || omegas.iter().any(|w| !(*w > 0.0)) {
                return Err(RunError::Usage("--omegas must be positive".into()));
            }
            let target = C64::new(common.gamma_re, common.gamma_im);
            let len = common.len;
            let state = floquet::gaussian_packet(len, 0.5 * (len as f64 - 1.0), 2f64.sqrt(), 0.3, Boundary::Periodic)?;
            let v: floquet::CoefficientVariant = (*variant).into();
            let ladder = floquet::floquet_ladder(&state, target, v, common.hopping, omegas, *time, *substeps)?;
            let arb_omega = if omegas.contains(&100.0) { 100.0 } else { omegas[omegas.len() / 2] };
            let drive = floquet::drive_for_gamma(target, v, common.hopping, arb_omega)?;
            let arb = floquet::arbitrate_variants(&state, &drive, *time, *substeps)?;
            let extra = serde_json::json!({ "omegas": omegas, "time": time, "substeps": substeps, "variant": variant });
            let mut out = Output::new(
                cmd,
                seed,
                extra,
                &[
                    "omega", "periods", "time", "U", "J1_abs", "gamma_eff_re", "gamma_eff_im", "infidelity",
                    "dressed_infidelity", "u_over_omega", "j1_over_omega", "high_frequency_warning",
                ],
            );
            out.note("arbitration_best", Value::from(arb.best.as_str()));
            for (variant, score) in &arb.scores {
                out.note(&format!("arbitration_{}", variant.as_str()), Value::from(*score));
            }
            for (r, w) in ladder.rungs.iter().zip(omegas) {
                let fp = floquet::drive_for_gamma(target, v, common.hopping, *w)?;
                out.table.push(vec![
                    r.omega.into(),
                    r.periods.into(),
                    r.time.into(),
                    fp.u.into(),
                    fp.j1.norm().into(),
                    r.gamma_eff.re.into(),
                    r.gamma_eff.im.into(),
                    r.infidelity.into(),
                    r.dressed_infidelity.into(),
                    r.u_over_omega.into(),
                    r.j1_over_omega.into(),
                    r.high_frequency_warning.into(),
                ]);
            }
            out.finish(common)
        }
        Command::Continuum { spacing, a_grid, .. } => {
            let g0 = continuum::GaussianAnsatz::new(1.0, 0.0, *spacing, common.gamma_im)?;
            let a_star = if common.gamma_im != 0.0 {
                Some(continuum::reduced_energy_maximizer(&g0, common.hopping))
            } else {
                None
            };
            let grid = a_grid.unwrap_or_else(|| {
                let top = a_star.map_or(10.0, |a| 16.0 * a);
                Range1::new(top / 64.0, top, 64)
            });
            if grid.start <= 0.0 || grid.end <= 0.0 {
                return Err(RunError::Usage("--a-grid must be positive".into()));
            }
            let extra = serde_json::json!({ "spacing": spacing, "a_grid": grid.to_string() });
            let mut out = Output::new(cmd, seed, extra, &["a", "b_opt", "reduced_energy", "energy_b0"]);
            out.note("a_star", a_star.map_or(Value::Null, Value::from));
            for a in grid.points() {
                let b = continuum::optimal_b(a, &g0, common.hopping);
                let e0 = continuum::gaussian_energy(&continuum::GaussianAnsatz::new(a, 0.0, *spacing, common.gamma_im)?, common.hopping);
                out.table.push(vec![
                    a.into(),
                    b.into(),
                    continuum::reduced_energy(a, &g0, common.hopping).into(),
                    e0.into(),
                ]);
            }
            out.finish(common)
        }
        Command::Evolve { steps, sample_every, init, m, .. } => {
            let params = params_of(common)?;
            let len = common.len;
            let state = match init {
                Initial::PlaneWave => LatticeState::plane_wave(len, *m, Boundary::Periodic)?,
                Initial::Random => {
                    dynamics::random_state(len, Boundary::Periodic, seed, 0, dynamics::InitialProfile::Extended)?
                }
                Initial::Soliton => {
                    let cfg = integrator_of(common, seed);
                    dynamics::find_ground_state(&params, len, &cfg, common.restarts)?.state
                }
            };
            let mut cfg = IntegratorConfig::real_time(common.dt, *steps);
            cfg.sample_every = *sample_every;
            let traj = dynamics::evolve_real(&state, &params, &cfg)?;
            let extra = serde_json::json!({ "steps": steps, "sample_every": sample_every, "init": init, "m": m });
            let mut out = Output::new(cmd, seed, extra, &["t", "norm", "energy", "mu"]);
            out.note("max_norm_drift", Value::from(traj.max_norm_drift()));
            out.note("max_energy_drift", Value::from(traj.max_energy_drift()));
            for (t, o) in traj.times.iter().zip(&traj.observables) {
                out.table.push(vec![(*t).into(), o.norm.into(), o.energy.into(), o.mu.into()]);
            }
            out.finish(common)
        }
    }
}

