//! Command-line front end: compute hybrid constants, sample level curves,
//! generate and verify crossbred equation families, and tabulate ladder
//! diagnostics.
//!
//! Outputs are deterministic: identical configuration produces byte-identical
//! text, JSON and CSV (no timestamps, no environment dependence), including
//! under `--jobs` parallelism.

use clap::{Args, Parser, Subcommand, ValueEnum};
use metafunc_core::crossbreed::{
    FamilyContext, MetaEquation, PairFailure, Scheme, TranscriptionDiff,
};
use metafunc_core::hybrid::{compute_hybrid_constants, HybridConstants, HybridError};
use metafunc_core::ladder::{LadderModel, OmegaVariant, SegmentInterval, EULER_GAMMA};
use metafunc_core::levelset::{build_locus_family_with, trace_locus, LocusPoint};
use metafunc_core::{render, verify_mother};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod config;
use config::{parse_cells, parse_range, FileConfig};

#[derive(Parser)]
#[command(
    name = "metafunc",
    version,
    about = "hybrid-formula constants, level curves and crossbred equation families"
)]
struct Cli {
    /// Optional key=value configuration file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the hybrid constants c1..c4, lambda and their residual.
    Hybrid(CommonArgs),
    /// Sample the four level-curve points per row; CSV polylines with --trace.
    Levelset(LevelsetArgs),
    /// Generate and verify crossbred equation families.
    Generate(GenerateArgs),
    /// Re-verify a serialized equations artifact.
    Verify(VerifyArgs),
    /// Ladder diagnostics: round trips and the gap law.
    Ladder(LadderArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OmegaArg {
    Leading,
    Calibrated,
}

impl From<OmegaArg> for OmegaVariant {
    fn from(v: OmegaArg) -> Self {
        match v {
            OmegaArg::Leading => OmegaVariant::LeadingLog,
            OmegaArg::Calibrated => OmegaVariant::Calibrated,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Simple,
    Cyclic,
}

impl From<SchemeArg> for Scheme {
    fn from(v: SchemeArg) -> Self {
        match v {
            SchemeArg::Simple => Scheme::Simple,
            SchemeArg::Cyclic => Scheme::Cyclic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Args)]
struct CommonArgs {
    /// Segment index (base segment [pi L, pi L + U]).
    #[arg(long = "L")]
    l: Option<u32>,
    /// Segment length, inside (0, pi/2).
    #[arg(long = "U")]
    u: Option<f64>,
    #[arg(long)]
    omega: Option<OmegaArg>,
    /// Squared modulus of cn, inside (0, 1).
    #[arg(long)]
    k2: Option<f64>,
    /// Bessel order.
    #[arg(long)]
    p: Option<i32>,
    #[arg(long)]
    format: Option<Format>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verification tolerance (relative).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct LevelsetArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    scheme: Option<SchemeArg>,
    /// Row range A..B (inclusive).
    #[arg(long = "n")]
    n_range: Option<String>,
    /// Trace a polyline of this many continuation points from the first
    /// locus point.
    #[arg(long)]
    trace: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    scheme: Option<SchemeArg>,
    /// First-row range A..B for simple-scheme pairs.
    #[arg(long = "m")]
    m_range: Option<String>,
    /// Second-row range A..B (simple pairs) or the cyclic row range.
    #[arg(long = "n")]
    n_range: Option<String>,
    /// Cyclic cells, e.g. 0,1 (cell c covers rows 4c+1..4c+4).
    #[arg(long)]
    cells: Option<String>,
    /// Worker threads for the crossbreed grid (row search stays sequential).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Artifact produced by `generate --format json`.
    path: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct LadderArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// Fully resolved run configuration; serialized into every JSON artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub l: u32,
    pub u: f64,
    pub omega: OmegaVariant,
    pub k_sq: f64,
    pub p: i32,
    pub scheme: Scheme,
    pub tol: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Artifact {
    config: RunConfig,
    hybrid: HybridConstants,
    #[serde(default)]
    equations: Vec<MetaEquation>,
    #[serde(default)]
    failures: Vec<PairFailure>,
    #[serde(default)]
    transcription_diffs: Vec<TranscriptionDiff>,
}

fn resolve(common: &CommonArgs, file: &FileConfig) -> RunConfig {
    RunConfig {
        l: common.l.or(file.l).unwrap_or(50),
        u: common.u.or(file.u).unwrap_or(1.0),
        omega: common
            .omega
            .map(OmegaVariant::from)
            .or(file.omega)
            .unwrap_or(OmegaVariant::Calibrated),
        k_sq: common.k2.or(file.k2).unwrap_or(0.5),
        p: common.p.or(file.p).unwrap_or(0),
        scheme: Scheme::Simple,
        tol: common.tol.or(file.tol).unwrap_or(1e-8),
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn build_model(cfg: &RunConfig) -> Result<LadderModel, String> {
    let t_needed = std::f64::consts::PI * cfg.l as f64 + cfg.u;
    LadderModel::new(cfg.omega, 1.25 * t_needed + 64.0).map_err(|e| e.to_string())
}

fn validated_constants(cfg: &RunConfig) -> Result<(LadderModel, HybridConstants), (u8, String)> {
    if !(cfg.k_sq > 0.0 && cfg.k_sq < 1.0) {
        return Err((2, format!("k2 = {} outside (0, 1)", cfg.k_sq)));
    }
    let model = build_model(cfg).map_err(|e| (2, e))?;
    match compute_hybrid_constants(cfg.l, cfg.u, &model) {
        Ok(h) => Ok((model, h)),
        Err(e @ HybridError::DegenerateConstant { .. }) => Err((2, e.to_string())),
        Err(e) => Err((2, e.to_string())),
    }
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_hybrid(args: &CommonArgs, file: &FileConfig) -> Result<(), (u8, String)> {
    let cfg = resolve(args, file);
    let (model, h) = validated_constants(&cfg)?;
    let fresh = verify_mother(&h, &model).map_err(|e| (2, e.to_string()))?;
    let format = args.format.or(file.format).unwrap_or(Format::Text);
    let body = match format {
        Format::Json => {
            let artifact = Artifact {
                config: cfg.clone(),
                hybrid: h,
                equations: vec![],
                failures: vec![],
                transcription_diffs: vec![],
            };
            json_string(&artifact)
        }
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "L = {}  U = {}", h.l, h.u);
            let _ = writeln!(s, "base segment    [{}, {}]", h.base_seg.a, h.base_seg.b);
            let _ = writeln!(s, "reverse segment [{}, {}]", h.rev_seg.a, h.rev_seg.b);
            let _ = writeln!(s, "alpha0 = [{}, {}]", h.alpha0[0], h.alpha0[1]);
            let _ = writeln!(s, "alpha1 = [{}, {}]", h.alpha1[0], h.alpha1[1]);
            let _ = writeln!(s, "beta1  = {}", h.beta1);
            let _ = writeln!(s, "c1 = {}", h.c1);
            let _ = writeln!(s, "c2 = {}", h.c2);
            let _ = writeln!(s, "c3 = {}", h.c3);
            let _ = writeln!(s, "c4 = {}", h.c4);
            let _ = writeln!(s, "lambda = {}", h.lambda);
            let _ = writeln!(
                s,
                "residual = {:e}  (budget {:e})",
                h.residual,
                cfg.tol * h.c4
            );
            let _ = writeln!(s, "fresh residual = {fresh:e}");
            s
        }
    };
    emit(args.out.as_deref(), &body).map_err(|e| (2, e))
}

fn cmd_levelset(args: &LevelsetArgs, file: &FileConfig) -> Result<(), (u8, String)> {
    let cfg = resolve(&args.common, file);
    let scheme: Scheme = args
        .scheme
        .map(Scheme::from)
        .or(file.scheme)
        .unwrap_or(Scheme::Simple);
    let rows = parse_range(
        args.n_range
            .as_deref()
            .or(file.n.as_deref())
            .unwrap_or("1..1"),
    )
    .map_err(|e| (3, e))?;
    let (_, h) = validated_constants(&cfg).map_err(|(_, e)| (3, e))?;
    let mut points: Vec<LocusPoint> = Vec::new();
    for &row in &rows {
        let family = build_locus_family_with(&h, scheme, row, cfg.k_sq, cfg.p)
            .map_err(|e| (3, e.to_string()))?;
        points.extend(family);
    }
    if let Some(steps) = args.trace {
        let start = points[0].clone();
        let traced = trace_locus(&start, steps, 0.05).map_err(|e| (3, e.to_string()))?;
        points.extend(traced);
    }
    let format = args.common.format.or(file.format).unwrap_or(Format::Csv);
    let body = match format {
        Format::Json => json_string(&points),
        _ => render::locus_csv(&points),
    };
    emit(args.common.out.as_deref(), &body).map_err(|e| (3, e))
}

fn pair_list(
    scheme: Scheme,
    args: &GenerateArgs,
    file: &FileConfig,
) -> Result<Vec<(u32, u32)>, String> {
    if scheme == Scheme::Cyclic {
        if let Some(cells) = args.cells.as_deref().or(file.cells.as_deref()) {
            let cells = parse_cells(cells)?;
            let mut rows: Vec<u32> = Vec::new();
            for c in cells {
                rows.extend(4 * c + 1..=4 * c + 4);
            }
            let mut pairs = Vec::new();
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    pairs.push((rows[i], rows[j]));
                }
            }
            return Ok(pairs);
        }
    }
    let m = parse_range(
        args.m_range
            .as_deref()
            .or(file.m.as_deref())
            .unwrap_or("1..3"),
    )?;
    let n = parse_range(
        args.n_range
            .as_deref()
            .or(file.n.as_deref())
            .unwrap_or("1..3"),
    )?;
    let mut pairs = BTreeSet::new();
    for &a in &m {
        for &b in &n {
            if a != b {
                pairs.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    Ok(pairs.into_iter().collect())
}

fn cmd_generate(args: &GenerateArgs, file: &FileConfig) -> Result<(), (u8, String)> {
    let mut cfg = resolve(&args.common, file);
    cfg.scheme = args
        .scheme
        .map(Scheme::from)
        .or(file.scheme)
        .unwrap_or(Scheme::Simple);
    let pairs = pair_list(cfg.scheme, args, file).map_err(|e| (2, e))?;
    let jobs = args.jobs.or(file.jobs).unwrap_or(1).max(1);
    let (_, h) = validated_constants(&cfg)?;
    let mut ctx = FamilyContext::with_params(&h, cfg.k_sq, cfg.p);

    // row construction is sequential and cached; the crossbreeds are pure
    // and order-independent, so results are identical for any job count
    let mut failures: Vec<PairFailure> = Vec::new();
    let mut rows: BTreeSet<u32> = BTreeSet::new();
    for &(a, b) in &pairs {
        rows.insert(a);
        rows.insert(b);
    }
    let mut bad_rows: BTreeSet<u32> = BTreeSet::new();
    for &row in &rows {
        if let Err(e) = ctx.row(cfg.scheme, row) {
            bad_rows.insert(row);
            failures.push(PairFailure {
                pair: (row, row),
                error: format!("row {row}: {e}"),
            });
        }
    }
    let live_pairs: Vec<(usize, (u32, u32))> = pairs
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, (a, b))| !bad_rows.contains(a) && !bad_rows.contains(b))
        .collect();

    let mut results: Vec<Option<MetaEquation>> = vec![None; pairs.len()];
    if jobs <= 1 {
        for &(idx, (a, b)) in &live_pairs {
            match ctx.cross(cfg.scheme, a, b) {
                Ok(eq) => results[idx] = Some(eq),
                Err(e) => failures.push(PairFailure {
                    pair: (a, b),
                    error: e.to_string(),
                }),
            }
        }
    } else {
        let ctx_ref = &ctx;
        let chunk = live_pairs.len().div_ceil(jobs);
        let mut collected: Vec<(usize, Result<MetaEquation, String>)> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for piece in live_pairs.chunks(chunk.max(1)) {
                handles.push(scope.spawn(move || {
                    let mut local = Vec::with_capacity(piece.len());
                    for &(idx, (a, b)) in piece {
                        // rows are prebuilt; clone the equations and cross
                        let ra = ctx_ref.cached_row(cfg.scheme, a).expect("prebuilt");
                        let rb = ctx_ref.cached_row(cfg.scheme, b).expect("prebuilt");
                        let r = metafunc_core::crossbreed::crossbreed(ra, rb)
                            .map_err(|e| e.to_string());
                        local.push((idx, r));
                    }
                    local
                }));
            }
            for hnd in handles {
                collected.extend(hnd.join().expect("worker panicked"));
            }
        });
        collected.sort_by_key(|(idx, _)| *idx);
        for (idx, r) in collected {
            match r {
                Ok(eq) => results[idx] = Some(eq),
                Err(e) => failures.push(PairFailure {
                    pair: pairs[idx],
                    error: e,
                }),
            }
        }
    }
    let equations: Vec<MetaEquation> = results.into_iter().flatten().collect();
    let diffs = if cfg.scheme == Scheme::Cyclic {
        metafunc_core::transcription_diffs(&equations)
    } else {
        Vec::new()
    };

    let format = args.common.format.or(file.format).unwrap_or(Format::Text);
    let report = metafunc_core::crossbreed::FamilyReport {
        scheme: cfg.scheme,
        equations,
        failures,
    };
    let body = match format {
        Format::Json => {
            let artifact = Artifact {
                config: cfg.clone(),
                hybrid: h.clone(),
                equations: report.equations,
                failures: report.failures,
                transcription_diffs: diffs,
            };
            json_string(&artifact)
        }
        Format::Csv => render::residual_csv(&report),
        Format::Latex => render::latex_family(&report),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "scheme {}  L = {}  U = {}  pairs = {}",
                cfg.scheme,
                cfg.l,
                cfg.u,
                report.equations.len() + report.failures.len()
            );
            for eq in &report.equations {
                let _ = writeln!(
                    s,
                    "{} x {}  class {}  lhs {}  rhs {}  residual {:e}  {}",
                    eq.parents[0],
                    eq.parents[1],
                    eq.class,
                    eq.lhs_value,
                    eq.rhs_value,
                    eq.residual,
                    if eq.residual <= cfg.tol * eq.lhs_value.max(eq.rhs_value) {
                        "ok"
                    } else {
                        "FAIL"
                    }
                );
            }
            for f in &report.failures {
                let _ = writeln!(s, "pair {:?} failed: {}", f.pair, f.error);
            }
            if !diffs.is_empty() {
                let _ = writeln!(s, "transcription diffs: {}", diffs.len());
                for d in &diffs {
                    let _ = writeln!(
                        s,
                        "  pair {:?} {} term {}: printed {:?} canonical {:?}",
                        d.pair,
                        d.side,
                        d.term,
                        d.printed.iter().map(|f| f.symbol()).collect::<Vec<_>>(),
                        d.canonical.iter().map(|f| f.symbol()).collect::<Vec<_>>()
                    );
                }
            }
            s
        }
    };
    emit(args.common.out.as_deref(), &body).map_err(|e| (2, e))
}

fn cmd_verify(args: &VerifyArgs, file: &FileConfig) -> Result<(), (u8, String)> {
    let raw = std::fs::read_to_string(&args.path)
        .map_err(|e| (2, format!("reading {}: {e}", args.path.display())))?;
    let artifact: Artifact =
        serde_json::from_str(&raw).map_err(|e| (2, format!("parsing artifact: {e}")))?;
    let tol = args.tol.or(file.tol).unwrap_or(artifact.config.tol);

    let mut failures = 0usize;
    let mut lines = String::new();
    // mother formula from stored points, fresh evaluation
    let model = build_model(&artifact.config).map_err(|e| (2, e))?;
    let mother = verify_mother(&artifact.hybrid, &model).map_err(|e| (2, e.to_string()))?;
    let mother_ok = mother <= tol * artifact.hybrid.c4;
    if !mother_ok {
        failures += 1;
    }
    let _ = writeln!(
        lines,
        "mother residual {:e} (budget {:e}) {}",
        mother,
        tol * artifact.hybrid.c4,
        if mother_ok { "ok" } else { "FAIL" }
    );
    for eq in &artifact.equations {
        let fresh = |terms: &[Vec<metafunc_core::FactorRef>; 2]| -> Result<f64, String> {
            let mut total = 0.0;
            for term in terms {
                let mut prod = 1.0;
                for f in term {
                    prod *= f.evaluate().map_err(|e| e.to_string())?;
                }
                total += prod;
            }
            Ok(total)
        };
        let lhs = fresh(&eq.lhs_factors).map_err(|e| (2, e))?;
        let rhs = fresh(&eq.rhs_factors).map_err(|e| (2, e))?;
        let residual = (lhs - rhs).abs();
        let drift = (lhs - eq.lhs_value).abs().max((rhs - eq.rhs_value).abs());
        let scale = lhs.abs().max(rhs.abs());
        let ok = residual <= tol * scale && drift <= tol * scale;
        if !ok {
            failures += 1;
        }
        let _ = writeln!(
            lines,
            "{} x {}  residual {:e}  drift {:e}  {}",
            eq.parents[0],
            eq.parents[1],
            residual,
            drift,
            if ok { "ok" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        lines,
        "verified {} equations, {} failures",
        artifact.equations.len(),
        failures
    );
    print!("{lines}");
    if failures > 0 {
        Err((1, format!("{failures} residuals above tolerance")))
    } else {
        Ok(())
    }
}

fn cmd_ladder(args: &LadderArgs, file: &FileConfig) -> Result<(), (u8, String)> {
    let cfg = resolve(&args.common, file);
    let l_max = cfg.l.max(100);
    let mut ls: Vec<u32> = [100u32, 1000, 10_000]
        .iter()
        .copied()
        .filter(|&x| x <= l_max)
        .collect();
    if !ls.contains(&l_max) {
        ls.push(l_max);
    }
    let t_needed = std::f64::consts::PI * l_max as f64 + cfg.u;
    let model =
        LadderModel::new(cfg.omega, 1.25 * t_needed + 64.0).map_err(|e| (2, e.to_string()))?;
    let mut rows = Vec::new();
    for &l in &ls {
        let t = std::f64::consts::PI * l as f64;
        let seg = SegmentInterval::new(t, t + cfg.u).map_err(|e| (2, e.to_string()))?;
        let phi = model.phi1(t).map_err(|e| (2, e.to_string()))?;
        let inv = model.phi1_inverse(t).map_err(|e| (2, e.to_string()))?;
        let roundtrip = (model.phi1(inv).map_err(|e| (2, e.to_string()))? - t).abs() / t;
        let rho = model.rho_distance(seg).map_err(|e| (2, e.to_string()))?;
        let lf = l as f64;
        let predicted = std::f64::consts::PI * (1.0 - EULER_GAMMA) * lf / lf.ln();
        rows.push((l, phi, inv - t, rho, predicted, rho / predicted, roundtrip));
    }
    let format = args.common.format.or(file.format).unwrap_or(Format::Text);
    let body = match format {
        Format::Csv | Format::Json => {
            let mut s =
                String::from("L,phi1_of_piL,inverse_gap,rho,predicted_gap,ratio,roundtrip\n");
            for (l, phi, gap, rho, predicted, ratio, roundtrip) in &rows {
                let _ = writeln!(s, "{l},{phi},{gap},{rho},{predicted},{ratio},{roundtrip}");
            }
            s
        }
        _ => {
            let mut s = String::from(
                "     L        phi1(piL)      inv_gap          rho    predicted    ratio   roundtrip\n",
            );
            for (l, phi, gap, rho, predicted, ratio, roundtrip) in &rows {
                let _ = writeln!(
                    s,
                    "{l:>6} {phi:>16.6} {gap:>12.4} {rho:>12.4} {predicted:>12.4} {ratio:>8.3} {roundtrip:>11.3e}"
                );
            }
            s
        }
    };
    emit(args.common.out.as_deref(), &body).map_err(|e| (2, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.cmd {
        Cmd::Hybrid(args) => cmd_hybrid(args, &file),
        Cmd::Levelset(args) => cmd_levelset(args, &file),
        Cmd::Generate(args) => cmd_generate(args, &file),
        Cmd::Verify(args) => cmd_verify(args, &file),
        Cmd::Ladder(args) => cmd_ladder(args, &file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
