mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seqembed::audit::{run_audits, AuditSuite, DEFAULT_CASES};
use seqembed::noncompactness::{
    alpha_bracket, build_constant_cover, signflip_witness, span_estimate, span_upper_bound,
    spike_witness, spread_witness, verify_cover, weighted_axis_cover, weighted_five_ball_cover,
    CoverCheck, Refutation, SpanBound,
};
use seqembed::space::parse_exponent;
use seqembed::{
    classify, convergence_study, distribution, estimate_operator_norm, norm, rearrange, series_norm, Cover,
    Error, SearchConfig, Search, Sequence, Space, Spec,
};

use report::{emit, to_csv, to_json, Report, RunManifest};

const INVALID: u8 = 2;
const HYPOTHESIS: u8 = 3;
const BREACH: u8 = 4;

/// Lorentz sequence space norms, embedding constants and non-compactness
/// certificates.
///
/// Spaces are written `lorentz:p,q` (`inf` for ∞), `c0`, `linf` or `wlp:p`.
/// Sequences are JSON arrays, given inline or as `@path`.
#[derive(Parser)]
#[command(name = "seqembed", version)]
struct Cli {
    /// write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// seed for every stochastic step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of a finite sequence
    Norm(NormArgs),
    /// Decreasing rearrangement, and the distribution function at `--omega`
    Rearrange(RearrangeArgs),
    /// Embedding constant, exact norm and non-compactness verdict
    Classify(PairArgs),
    /// Bracket for `(Σ n^{q2/p2 − q2/p1 − 1})^{1/q2}`
    SeriesNorm(SeriesArgs),
    /// Lower bound on the embedding norm by search over the unit ball
    EstimateNorm(SearchArgs),
    /// Search at several truncations against the exact norm (CSV rows)
    Converge(ConvergeArgs),
    /// Span bound of a unit ball and a sampled estimate
    Span(SpanArgs),
    /// Build a finite cover of the unit-ball image and check it by sampling
    Cover(CoverArgs),
    /// Unit-ball element far from every given center (spread construction)
    RefuteSpread(SpreadArgs),
    /// Sign-flip element far from every given center in `ℓ∞`
    RefuteSignflip(SignflipArgs),
    /// Bracket for the ball measure of non-compactness
    Alpha(AlphaArgs),
    /// Randomized audits of every proved inequality
    Audit(AuditArgs),
}

fn exponent(s: &str) -> Result<f64, String> {
    parse_exponent::<f64>(s).map_err(|e| e.to_string())
}

#[derive(Args, Serialize)]
struct NormArgs {
    #[arg(long)]
    space: Space,
    /// JSON array or `@path`
    #[arg(long)]
    seq: String,
}

#[derive(Args, Serialize)]
struct RearrangeArgs {
    #[arg(long)]
    seq: String,
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Args, Serialize)]
struct PairArgs {
    #[arg(long)]
    source: Space,
    #[arg(long)]
    target: Space,
}

#[derive(Args, Serialize)]
struct SeriesArgs {
    #[arg(long, value_parser = exponent)]
    p1: f64,
    #[arg(long, value_parser = exponent)]
    p2: f64,
    #[arg(long, value_parser = exponent)]
    q2: f64,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
}

#[derive(Args, Serialize)]
struct SearchFlags {
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    step_tol: f64,
    /// accept searches on pairs with no proved constant
    #[arg(long)]
    exploratory: bool,
}

impl SearchFlags {
    fn config(&self, truncation: usize, seed: u64) -> SearchConfig {
        SearchConfig {
            truncation,
            restarts: self.restarts,
            seed,
            max_iters: self.max_iters,
            step_tolerance: self.step_tol,
            exploratory: self.exploratory,
        }
    }
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairArgs,
    #[arg(long = "L", default_value_t = 1000)]
    #[serde(rename = "L")]
    truncation: usize,
    #[command(flatten)]
    #[serde(flatten)]
    search: SearchFlags,
}

#[derive(Args, Serialize)]
struct ConvergeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairArgs,
    /// comma-separated truncations
    #[arg(long = "L", value_delimiter = ',', default_value = "10,100,1000")]
    #[serde(rename = "L")]
    truncations: Vec<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    search: SearchFlags,
    /// CSV destination; defaults to the `--out` path with extension `csv`
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SpanArgs {
    #[arg(long)]
    space: Space,
    #[arg(long = "L", default_value_t = 64)]
    #[serde(rename = "L")]
    truncation: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CoverKind {
    /// constant sequences, for targets with the sup norm
    Lattice,
    /// multiples of e¹, for `ℓ_p → wlp:p`
    Axis,
    /// `{0, ±e¹, ±(1/2)^{1/p} e¹}` at radius `(1/2)^{1/p}`
    FiveBall,
}

#[derive(Args, Serialize)]
struct CoverArgs {
    /// source space
    #[arg(long)]
    space: Space,
    #[arg(long, default_value = "linf")]
    target: Space,
    /// defaults to `axis` for a `wlp` target and `lattice` otherwise
    #[arg(long, value_enum)]
    construction: Option<CoverKind>,
    /// required except for `five-ball`
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long = "L", default_value_t = 64)]
    #[serde(rename = "L")]
    truncation: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Args, Serialize)]
struct SpreadArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairArgs,
    /// JSON array of center sequences, or `@path`
    #[arg(long)]
    centers: String,
    #[arg(long)]
    rho: f64,
    /// unit-ball element to spread; defaults to e¹
    #[arg(long)]
    x: Option<String>,
    /// defaults to `(1 − rho/‖x‖)/2`
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "L", default_value_t = 256)]
    #[serde(rename = "L")]
    truncation: usize,
}

#[derive(Args, Serialize)]
struct SignflipArgs {
    #[arg(long)]
    centers: String,
    #[arg(long)]
    rho: f64,
}

#[derive(Args, Serialize)]
struct AlphaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairArgs,
    #[arg(long = "L", default_value_t = 64)]
    #[serde(rename = "L")]
    truncation: usize,
    /// sampled points for checking covers; 0 skips the check
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

#[derive(Args, Serialize)]
struct AuditArgs {
    #[arg(long, default_value_t = DEFAULT_CASES)]
    cases: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => INVALID,
            Error::InvariantBreach(_) => BREACH,
            Error::HypothesisViolation(_)
            | Error::Infeasible(_)
            | Error::UnsupportedPair(_)
            | Error::Unsupported(_)
            | Error::UnsupportedStudy(_)
            | Error::DivergentSeries { .. }
            | Error::NotConverged { .. }
            | Error::TruncationTooSmall { .. } => HYPOTHESIS,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

struct Ctx<'a> {
    out: Option<&'a Path>,
    seed: u64,
}

impl Ctx<'_> {
    fn write<P: Serialize, T: Serialize>(&self, command: &str, params: &P, result: &T) -> Result<(), Failure> {
        let manifest = RunManifest::new(command, params, self.seed);
        to_json(&Report {
            manifest: &manifest,
            result,
        })
        .and_then(|text| emit(&text, self.out))
        .map_err(|e| Failure::new(BREACH, format!("cannot write report: {e}")))
    }
}

fn read_inline(raw: &str) -> Result<String, Failure> {
    match raw.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::new(INVALID, format!("cannot read {path}: {e}"))),
        None => Ok(raw.to_string()),
    }
}

fn parse_sequence(raw: &str) -> Result<Sequence, Failure> {
    let values: Vec<f64> = serde_json::from_str(&read_inline(raw)?)
        .map_err(|e| Failure::new(INVALID, format!("sequence must be a JSON array of numbers: {e}")))?;
    Ok(Sequence::new(values)?)
}

fn parse_centers(raw: &str) -> Result<Vec<Sequence>, Failure> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(&read_inline(raw)?)
        .map_err(|e| Failure::new(INVALID, format!("centers must be a JSON array of arrays: {e}")))?;
    rows.into_iter()
        .map(|r| Sequence::new(r).map_err(Failure::from))
        .collect()
}

fn cmd_norm(ctx: &Ctx, a: &NormArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out<'a> {
        space: &'a Space,
        sequence: &'a Sequence,
        value: f64,
    }
    let seq = parse_sequence(&a.seq)?;
    let value = norm(&seq, &a.space);
    ctx.write("norm", a, &Out { space: &a.space, sequence: &seq, value })?;
    Ok(0)
}

fn cmd_rearrange(ctx: &Ctx, a: &RearrangeArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        rearrangement: Vec<f64>,
        support_len: usize,
        distribution: Option<usize>,
    }
    let seq = parse_sequence(&a.seq)?;
    let r = rearrange(&seq);
    let distribution = a.omega.map(|w| distribution(&seq, w)).transpose()?;
    let out = Out {
        rearrangement: r.values().to_vec(),
        support_len: r.support_len(),
        distribution,
    };
    ctx.write("rearrange", a, &out)?;
    Ok(0)
}

fn cmd_classify(ctx: &Ctx, a: &PairArgs) -> Outcome {
    let verdict = classify(&Spec::new(a.source, a.target))?;
    ctx.write("classify", a, &verdict)?;
    Ok(0)
}

fn cmd_series(ctx: &Ctx, a: &SeriesArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        exponent: f64,
        lo: f64,
        hi: f64,
    }
    let b = series_norm(a.p1, a.p2, a.q2, a.rel_tol)?;
    let exponent = 1.0 + a.q2 / a.p1 - a.q2 / a.p2;
    ctx.write("series-norm", a, &Out { exponent, lo: b.lo, hi: b.hi })?;
    Ok(0)
}

fn cmd_estimate(ctx: &Ctx, a: &SearchArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        search: Search,
        /// proved upper bound, when the pair is classified
        norm_upper: Option<f64>,
    }
    let spec = Spec::new(a.pair.source, a.pair.target);
    let search = estimate_operator_norm(&spec, &a.search.config(a.truncation, ctx.seed))?;
    let norm_upper = classify(&spec).ok().and_then(|v| v.norm_upper());
    if let Some(up) = norm_upper {
        if search.best_value > up * (1.0 + 1e-9) {
            ctx.write("estimate-norm", a, &Out { search, norm_upper })?;
            return Ok(BREACH);
        }
    }
    ctx.write("estimate-norm", a, &Out { search, norm_upper })?;
    Ok(0)
}

fn cmd_converge(ctx: &Ctx, a: &ConvergeArgs) -> Outcome {
    if a.truncations.is_empty() {
        return Err(Failure::new(INVALID, "--L needs at least one truncation"));
    }
    let spec = Spec::new(a.pair.source, a.pair.target);
    let rows = convergence_study(&spec, &a.truncations, &a.search.config(a.truncations[0], ctx.seed))?;
    let csv = to_csv(&rows).map_err(|e| Failure::new(BREACH, format!("cannot format CSV: {e}")))?;
    let csv_path = a
        .csv
        .clone()
        .or_else(|| ctx.out.map(|p| p.with_extension("csv")));
    match csv_path {
        Some(path) => {
            fs::write(&path, csv)
                .map_err(|e| Failure::new(BREACH, format!("cannot write {}: {e}", path.display())))?;
            ctx.write("converge", a, &rows)?;
        }
        // nowhere to put both, so stdout gets the table alone
        None => emit(&csv, None).map_err(|e| Failure::new(BREACH, e.to_string()))?,
    }
    Ok(0)
}

fn cmd_span(ctx: &Ctx, a: &SpanArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        bound: SpanBound<f64>,
        estimate: f64,
    }
    let bound = span_upper_bound(&a.space)?;
    let estimate = span_estimate(&a.space, a.truncation, a.samples, ctx.seed)?;
    let breach = estimate > bound.value * (1.0 + 1e-9);
    ctx.write("span", a, &Out { bound, estimate })?;
    Ok(if breach { BREACH } else { 0 })
}

fn cmd_cover(ctx: &Ctx, a: &CoverArgs) -> Outcome {
    #[derive(Serialize)]
    struct Refuted<'a> {
        certificate: &'a Cover,
        refutation: Refutation<f64>,
    }
    let need_rho = || a.rho.ok_or_else(|| Failure::new(INVALID, "--rho is required for this construction"));
    let kind = a.construction.unwrap_or(match a.target {
        Space::WeightedLp { .. } => CoverKind::Axis,
        _ => CoverKind::Lattice,
    });
    let cert = match kind {
        CoverKind::Lattice => {
            if !a.target.has_sup_norm() {
                return Err(Failure::new(INVALID, "lattice covers need a target with the sup norm"));
            }
            build_constant_cover(&a.space, need_rho()?, a.truncation)?
        }
        CoverKind::Axis | CoverKind::FiveBall => {
            let p = match a.target {
                Space::WeightedLp { p } => p,
                _ => return Err(Failure::new(INVALID, "axis and five-ball covers need a wlp:p target")),
            };
            if a.space.lorentz_params().map(|lp| (lp.p(), lp.q())) != Some((p, p)) {
                return Err(Failure::new(HYPOTHESIS, format!("source must be lorentz:{p},{p}")));
            }
            match kind {
                CoverKind::Axis => weighted_axis_cover(p, need_rho()?, a.truncation)?,
                _ => weighted_five_ball_cover(p, a.truncation)?,
            }
        }
    };
    match verify_cover(&cert, a.samples, ctx.seed)? {
        CoverCheck::Covered(c) => {
            ctx.write("cover", a, &c)?;
            Ok(0)
        }
        CoverCheck::Refuted(refutation) => {
            ctx.write("cover", a, &Refuted { certificate: &cert, refutation })?;
            Ok(BREACH)
        }
    }
}

fn cmd_spread(ctx: &Ctx, a: &SpreadArgs) -> Outcome {
    let centers = parse_centers(&a.centers)?;
    let (source, target) = (&a.pair.source, &a.pair.target);
    let report = match &a.x {
        None if a.lambda.is_none() => spike_witness(&centers, source, target, a.rho, a.truncation)?,
        x => {
            let x = match x {
                Some(raw) => parse_sequence(raw)?,
                None => Sequence::unit_vector(1, 1)?,
            };
            let lambda = match a.lambda {
                Some(l) => l,
                None => {
                    let size = norm(&x, target);
                    if size <= a.rho {
                        return Err(Failure::new(
                            HYPOTHESIS,
                            format!("‖x‖ = {size} in the target must exceed rho = {}", a.rho),
                        ));
                    }
                    (1.0 - a.rho / size) / 2.0
                }
            };
            spread_witness(&centers, source, target, a.rho, lambda, &x, a.truncation)?
        }
    };
    ctx.write("refute-spread", a, &report)?;
    Ok(0)
}

fn cmd_signflip(ctx: &Ctx, a: &SignflipArgs) -> Outcome {
    let centers = parse_centers(&a.centers)?;
    let report = signflip_witness(&centers, a.rho)?;
    ctx.write("refute-signflip", a, &report)?;
    Ok(0)
}

fn cmd_alpha(ctx: &Ctx, a: &AlphaArgs) -> Outcome {
    let spec = Spec::new(a.pair.source, a.pair.target);
    let bracket = alpha_bracket(&spec, a.truncation, a.samples, ctx.seed)?;
    let upper = bracket.exact_norm.map_or(bracket.hi, |n| n.hi);
    let breach = !bracket.is_consistent(upper);
    ctx.write("alpha", a, &bracket)?;
    Ok(if breach { BREACH } else { 0 })
}

fn cmd_audit(ctx: &Ctx, a: &AuditArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        suites: Vec<AuditSuite>,
        total_violations: usize,
    }
    let suites = run_audits(a.cases, ctx.seed)?;
    let total_violations = suites.iter().map(|s| s.violations).sum();
    ctx.write("audit", a, &Out { suites, total_violations })?;
    Ok(if total_violations == 0 { 0 } else { BREACH })
}

fn run(cli: &Cli) -> Outcome {
    let ctx = Ctx {
        out: cli.out.as_deref(),
        seed: cli.seed,
    };
    match &cli.command {
        Command::Norm(a) => cmd_norm(&ctx, a),
        Command::Rearrange(a) => cmd_rearrange(&ctx, a),
        Command::Classify(a) => cmd_classify(&ctx, a),
        Command::SeriesNorm(a) => cmd_series(&ctx, a),
        Command::EstimateNorm(a) => cmd_estimate(&ctx, a),
        Command::Converge(a) => cmd_converge(&ctx, a),
        Command::Span(a) => cmd_span(&ctx, a),
        Command::Cover(a) => cmd_cover(&ctx, a),
        Command::RefuteSpread(a) => cmd_spread(&ctx, a),
        Command::RefuteSignflip(a) => cmd_signflip(&ctx, a),
        Command::Alpha(a) => cmd_alpha(&ctx, a),
        Command::Audit(a) => cmd_audit(&ctx, a),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 on --help
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
