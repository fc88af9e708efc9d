//! `ptseries`: spectra, scans, nodes and expectation values of
//! `-psi'' - (iz)^N psi = E psi` from the command line.

mod selfcheck;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use ptseries::io::{self, RunParams};
use ptseries::nodes::{find_nodes, log_modulus_grid, Region};
use ptseries::observables::{
    build_contour, expectation_values, identity_check, identity_moments, ContourStyle, QuadratureRule,
};
use ptseries::precision::{PrecisionContext, Real};
use ptseries::quantize::{health_check, quantize_p_symmetric, scan_im_c, spectrum, EnergyLevel, Parity, SearchOptions};
use ptseries::series::{CoefficientTable, SeriesEvaluator, TruncationParams};
use ptseries::wedges::{pt_pairs, Side, WedgePair};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ptseries", version, about = "High-precision spectra of -psi'' - (iz)^N psi = E psi")]
struct Cli {
    /// Exponent N of the potential (integer >= 2).
    #[arg(long = "N", global = true)]
    n: Option<u32>,
    /// Antidiagonal truncation P (terms with p + q <= P are kept).
    #[arg(long, global = true, default_value_t = 100)]
    pmax: u32,
    /// Radius at which the connection coefficient is evaluated.
    #[arg(long, global = true, default_value_t = 8.0)]
    radius: f64,
    /// Decimal digits of precision.
    #[arg(long, global = true, env = "PTSERIES_DIGITS", default_value_t = 40)]
    digits: u32,
    /// Wedge pair index, as listed by `wedges`.
    #[arg(long, global = true, default_value_t = 0)]
    pair: usize,
    /// Contour half-length for expectation values.
    #[arg(long, global = true, default_value_t = 5.0)]
    lambda: f64,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Continue even if the truncation health check fails.
    #[arg(long, global = true)]
    force: bool,
    /// Run the Wronskian, PT-reflection and N = 2 oracle checks first.
    #[arg(long, global = true)]
    selfcheck: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WedgeSide {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ContourArg {
    RealLine,
    WedgeRays,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First eigenvalues and connection coefficients of a wedge pair.
    Spectrum {
        #[arg(long, default_value_t = 8)]
        levels: usize,
        /// Energy at which the truncation health check is run.
        #[arg(long, default_value = "30")]
        emax: String,
    },
    /// `c(E)` on a uniform energy grid (CSV by default).
    Scan {
        #[arg(long)]
        emin: String,
        #[arg(long)]
        emax: String,
        #[arg(long, default_value = "0.05")]
        step: String,
        #[arg(long, value_enum, default_value_t = WedgeSide::Right)]
        side: WedgeSide,
    },
    /// Complex zeros of an eigenfunction.
    Nodes {
        #[arg(long)]
        level: usize,
        /// `x0,x1,y0,y1`; defaults to a box below the real axis that holds the arch.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        /// Emit the `ln |psi|` grid as CSV instead of the nodes.
        #[arg(long)]
        grid: bool,
    },
    /// PT expectation values `<z^m>` with Ehrenfest and virial residuals.
    Expect {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value = "1,2,3,4")]
        moments: String,
        #[arg(long, value_enum, default_value_t = ContourArg::RealLine)]
        contour: ContourArg,
        /// Gauss-Legendre panels per contour segment.
        #[arg(long, default_value_t = 16)]
        panels: usize,
        /// Nodes per panel.
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// PT-symmetric wedge pairs for N.
    Wedges,
    /// An eigenfunction sampled on the real axis (CSV by default).
    Wavefunction {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        xmax: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Dump the exact coefficient table, or check a dumped one.
    Table {
        #[arg(long)]
        check: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<ptseries::Error> for Failure {
    fn from(e: ptseries::Error) -> Self {
        use ptseries::Error as E;
        match e {
            E::Parameter(_) | E::Parse(_) | E::Geometry(_) => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<ptseries::ParseError> for Failure {
    fn from(e: ptseries::ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

struct Run {
    ctx: PrecisionContext,
    n: u32,
    trunc: TruncationParams,
    pair: WedgePair,
    params: RunParams,
}

impl Run {
    fn new(cli: &Cli) -> Outcome<Self> {
        let n = cli.n.ok_or_else(|| Failure::Usage("--N is required".into()))?;
        if !(cli.lambda.is_finite() && cli.lambda > 0.0) {
            return Err(Failure::Usage(format!("--lambda must be positive, got {}", cli.lambda)));
        }
        let ctx = PrecisionContext::new(cli.digits)?;
        let pairs = pt_pairs(n)?;
        let pair = *pairs.get(cli.pair).ok_or_else(|| {
            Failure::Usage(format!("--pair {} out of range: N = {n} has {} pairs", cli.pair, pairs.len()))
        })?;
        let trunc = TruncationParams::new(cli.pmax, cli.radius)?;
        let params = RunParams { n, pmax: cli.pmax, radius: cli.radius, digits: cli.digits };
        Ok(Self { ctx, n, trunc, pair, params })
    }

    fn evaluator(&self) -> Outcome<Arc<SeriesEvaluator>> {
        Ok(SeriesEvaluator::shared(self.n, self.trunc.pmax, self.ctx)?)
    }

    fn real(&self, flag: &str, s: &str) -> Outcome<Real> {
        self.ctx.parse_real(s).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
    }

    fn header(&self) -> Value {
        let mut p = self.params.to_json();
        p["pair"] = json!(self.pair_index());
        p
    }

    fn pair_index(&self) -> usize {
        pt_pairs(self.n)
            .ok()
            .and_then(|v| v.iter().position(|p| *p == self.pair))
            .unwrap_or(0)
    }

    /// The lowest `count` levels; P-symmetric pairs merge both parities.
    fn levels(&self, ev: &SeriesEvaluator, count: usize) -> Outcome<Vec<EnergyLevel>> {
        let opts = SearchOptions::new(&self.ctx);
        if !self.pair.p_symmetric {
            return Ok(spectrum(ev, &self.pair, count, &self.trunc, &opts)?);
        }
        let mut all = quantize_p_symmetric(ev, &self.pair, Parity::Even, count, &self.trunc, &opts)?;
        all.extend(quantize_p_symmetric(ev, &self.pair, Parity::Odd, count, &self.trunc, &opts)?);
        all.sort_by(|a, b| a.energy.clone().abs().total_cmp(&b.energy.clone().abs()));
        all.truncate(count);
        for (i, l) in all.iter_mut().enumerate() {
            l.n = i;
        }
        Ok(all)
    }

    fn level(&self, ev: &SeriesEvaluator, index: usize) -> Outcome<EnergyLevel> {
        Ok(self.levels(ev, index + 1)?.remove(index))
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn emit(cli: &Cli, text: &str) -> Outcome<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Numeric(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn cmd_spectrum(cli: &Cli, levels: usize, emax: &str) -> Outcome<String> {
    let run = Run::new(cli)?;
    if levels == 0 {
        return Err(Failure::Usage("--levels must be at least 1".into()));
    }
    let ev = run.evaluator()?;
    let e_max = run.real("emax", emax)?;
    let health = health_check(&ev, &run.pair, &run.trunc, &e_max)?;
    if !health.pass && !cli.force {
        eprintln!("{}", json_text(&io::health_json(&health)).trim_end());
        return Err(Failure::Numeric(format!(
            "health check failed: tail ratio {} exceeds {} (use --force to continue)",
            io::format_error(health.tail_ratio),
            io::format_error(health.threshold)
        )));
    }
    let found = run.levels(&ev, levels)?;
    let sig = run.ctx.digits();
    Ok(match cli.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "params": run.header(),
            "health": io::health_json(&health),
            "levels": io::spectrum_json(&found, sig),
        })),
        Format::Csv => {
            let mut out = String::from("n,E,c,parity,est_error\n");
            for l in &found {
                let v = io::level_json(l, sig);
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    l.n,
                    v["E"].as_str().unwrap_or(""),
                    v["c"].as_str().unwrap_or(""),
                    v["parity"].as_str().unwrap_or(""),
                    v["est_error"].as_str().unwrap_or("")
                ));
            }
            out
        }
    })
}

fn cmd_scan(cli: &Cli, emin: &str, emax: &str, step: &str, side: WedgeSide) -> Outcome<String> {
    let run = Run::new(cli)?;
    let (lo, hi, h) = (run.real("emin", emin)?, run.real("emax", emax)?, run.real("step", step)?);
    if lo >= hi {
        return Err(Failure::Usage(format!("empty energy window: --emin {emin} is not below --emax {emax}")));
    }
    let side = match side {
        WedgeSide::Right => Side::Right,
        WedgeSide::Left => Side::Left,
    };
    let ev = run.evaluator()?;
    let points = scan_im_c(&ev, &run.pair, side, &lo, &hi, &h, &run.trunc)?;
    let decimals = run.ctx.digits();
    Ok(match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => io::scan_csv(&points, decimals),
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|p| {
                    json!({
                        "E": ptseries::precision::format_fixed(&p.energy, decimals),
                        "c": p.c.as_ref().map(|c| json!({
                            "re": ptseries::precision::format_sci(c.real(), decimals),
                            "im": ptseries::precision::format_sci(c.imag(), decimals),
                        })),
                    })
                })
                .collect();
            json_text(&json!({ "params": run.header(), "points": rows }))
        }
    })
}

fn cmd_nodes(cli: &Cli, level: usize, region: Option<&str>, grid_step: f64, grid: bool) -> Outcome<String> {
    let run = Run::new(cli)?;
    let region = region.map(io::parse_region).transpose()?;
    let ev = run.evaluator()?;
    let lvl = run.level(&ev, level)?;
    let region = region.unwrap_or_else(|| Region::below_axis(&lvl));
    if grid {
        let (nx, _, values) = log_modulus_grid(&ev, &lvl, &region, grid_step)?;
        return Ok(io::grid_csv(&region, grid_step, nx, &values));
    }
    let tol = run.ctx.ten_pow_neg(run.ctx.digits() as i32 - 5);
    let set = find_nodes(&ev, &lvl, &region, grid_step, &tol, &run.trunc)?;
    let mut report = io::nodes_json(&set, run.ctx.digits());
    report["params"] = run.header();
    report["region"] = json!([region.x0, region.x1, region.y0, region.y1]);
    Ok(json_text(&report))
}

fn cmd_expect(cli: &Cli, level: usize, moments: &str, contour: ContourArg, rule: QuadratureRule) -> Outcome<String> {
    let run = Run::new(cli)?;
    let ms = io::parse_moments(moments)?;
    if rule.panels == 0 || rule.order == 0 {
        return Err(Failure::Usage("--panels and --order must be positive".into()));
    }
    let style = match contour {
        ContourArg::RealLine => ContourStyle::RealLine,
        ContourArg::WedgeRays => ContourStyle::WedgeRays,
    };
    let path = build_contour(&run.pair, cli.lambda, style, &run.ctx)?;
    let ev = run.evaluator()?;
    let lvl = run.level(&ev, level)?;
    let mut all = ms.clone();
    all.extend(identity_moments(run.n).into_iter().filter(|m| !ms.contains(m)));
    let values = expectation_values(&ev, &lvl, &all, &path, rule)?;
    let identity = identity_check(&lvl, &values).expect("identity moments requested");
    let requested: Vec<_> = values.into_iter().filter(|r| ms.contains(&r.m)).collect();
    let sig = run.ctx.digits();
    Ok(match cli.format.unwrap_or(Format::Json) {
        Format::Csv => io::expectations_csv(&requested, sig),
        Format::Json => json_text(&json!({
            "params": run.header(),
            "contour": { "style": style, "lambda": cli.lambda.to_string(), "panels": rule.panels, "order": rule.order },
            "level": io::level_json(&lvl, sig),
            "expectations": io::expectations_json(&requested, sig),
            "identities": io::identity_json(std::slice::from_ref(&identity)),
        })),
    })
}

fn cmd_wedges(cli: &Cli) -> Outcome<String> {
    let n = cli.n.ok_or_else(|| Failure::Usage("--N is required".into()))?;
    let pairs = pt_pairs(n)?;
    Ok(match cli.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({ "N": n, "pairs": io::wedges_json(&pairs) })),
        Format::Csv => io::wedges_table(&pairs),
    })
}

fn cmd_wavefunction(cli: &Cli, level: usize, xmin: f64, xmax: f64, samples: usize) -> Outcome<String> {
    let run = Run::new(cli)?;
    if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) || samples < 2 {
        return Err(Failure::Usage("need xmin < xmax and at least two samples".into()));
    }
    if xmin.abs().max(xmax.abs()) > run.trunc.radius {
        return Err(Failure::Numeric(format!("samples leave the validated disk |z| <= {}", run.trunc.radius)));
    }
    let ev = run.evaluator()?;
    let lvl = run.level(&ev, level)?;
    let (a, b) = (run.ctx.real(xmin), run.ctx.real(xmax));
    let span = rug::Float::with_val(run.ctx.bits(), &b - &a);
    let points: Vec<(Real, _)> = (0..samples)
        .map(|j| {
            let mut x = rug::Float::with_val(run.ctx.bits(), &span * j as u32) / (samples - 1) as u32;
            x += &a;
            let psi = lvl.psi(&ev, &run.ctx.complex(&x), 0).value;
            (x, psi)
        })
        .collect();
    let sig = run.ctx.digits();
    Ok(match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => io::wavefunction_csv(&points, sig),
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|(x, p)| {
                    json!({
                        "x": ptseries::precision::format_sci(x, sig),
                        "re": ptseries::precision::format_sci(p.real(), sig),
                        "im": ptseries::precision::format_sci(p.imag(), sig),
                    })
                })
                .collect();
            json_text(&json!({ "params": run.header(), "level": io::level_json(&lvl, sig), "samples": rows }))
        }
    })
}

fn cmd_table(cli: &Cli, check: Option<&PathBuf>) -> Outcome<String> {
    match check {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let t = CoefficientTable::from_text(&text)?;
            Ok(json_text(&json!({ "N": t.n(), "pmax": t.pmax(), "entries": t.len(), "verified": true })))
        }
        None => {
            let n = cli.n.ok_or_else(|| Failure::Usage("--N is required".into()))?;
            Ok(CoefficientTable::build(n, cli.pmax)?.to_text())
        }
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    if cli.selfcheck {
        let report = selfcheck::run(cli.n.unwrap_or(3), cli.pmax, cli.digits)?;
        let ok = report.pass();
        if cli.command.is_none() {
            emit(cli, &json_text(&report.to_json()))?;
        } else {
            eprint!("{}", report.summary());
        }
        if !ok {
            return Err(Failure::Numeric("self-check failed".into()));
        }
    }
    let Some(command) = &cli.command else {
        if cli.selfcheck {
            return Ok(());
        }
        return Err(Failure::Usage("no subcommand given (see --help)".into()));
    };
    let text = match command {
        Command::Spectrum { levels, emax } => cmd_spectrum(cli, *levels, emax)?,
        Command::Scan { emin, emax, step, side } => cmd_scan(cli, emin, emax, step, *side)?,
        Command::Nodes { level, region, grid_step, grid } => {
            cmd_nodes(cli, *level, region.as_deref(), *grid_step, *grid)?
        }
        Command::Expect { level, moments, contour, panels, order } => {
            cmd_expect(cli, *level, moments, *contour, QuadratureRule { panels: *panels, order: *order })?
        }
        Command::Wedges => cmd_wedges(cli)?,
        Command::Wavefunction { level, xmin, xmax, samples } => cmd_wavefunction(cli, *level, *xmin, *xmax, *samples)?,
        Command::Table { check } => cmd_table(cli, check.as_ref())?,
    };
    emit(cli, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
