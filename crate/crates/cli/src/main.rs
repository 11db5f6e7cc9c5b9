//! `relent`: command-line front end for relent-core.
//!
//! Every run prints one report (JSON by default) on standard output.
//! Exit codes: 0 success, 1 numerical failure, 2 invalid input, 3 I/O.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relent::factor::{bound_n, periodic_growth_rate, relative_entropy_over_nu, IMAGE_CHECK_LENGTH};
use relent::hidden::HiddenChain;
use relent::joining::{
    empirical_entropy, interleave_stream, posterior, posterior_exact, relative_markov_diagnostic,
    sample_joining, NuSampler,
};
use relent::measures::{block_entropy_bounds, parry_measure};
use relent::relmax::{
    abramov_entropy, build_induced, cylinder_probability_exact, fiber_entropy_optimizer,
    fiber_periodic, homclump_family, maximal_induced_measure, DEFAULT_RESTARTS,
    DEFAULT_RETAINED_THRESHOLD, DEFAULT_TRUNCATION,
};
use relent::{gallery, rational, text, FactorCode, MarkovMeasure, Measure, PeriodicOrbit};
use serde::Serialize;
use serde_json::{json, Value};

use input::{markov, measure, parse_count, word, Inputs};
use report::{envelope, render, CliError, CliResult, Format, Units};

#[derive(Parser, Debug)]
#[command(name = "relent", version, about = "Relative entropy and relatively maximal measures over factor maps of shifts of finite type")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Serialize)]
struct Seed {
    /// Master seed for sampling.
    #[arg(long, env = "RELENT_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Side {
    X,
    Y,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a system (and code, if given) for malformed or stranded input.
    Validate(Plain),
    /// Parry measure of X (or Y with `--side y`).
    Parry(ParryArgs),
    /// Entropy of a measure on X, and the entropy bracket of its image.
    Entropy(EntropyArgs),
    /// Block distribution of the image of a measure on X.
    Pushforward(PushforwardArgs),
    /// Exact number of X-words over a Y-word.
    Count(CountArgs),
    /// Clump structure of the code, including higher-block singletons.
    Clumps(ClumpArgs),
    /// The bound N_ν(π) on the number of relatively orthogonal lifts.
    Bound(BoundArgs),
    /// Relative pressure of 0: growth rate of fiber counts.
    Relpressure(RelpressureArgs),
    #[command(subcommand)]
    Relmax(Relmax),
    #[command(subcommand)]
    Join(Join),
    #[command(subcommand)]
    Gallery(GalleryCmd),
}

#[derive(Args, Debug, Serialize)]
struct Plain {
    #[command(flatten)]
    inputs: Inputs,
}

#[derive(Args, Debug, Serialize)]
struct ParryArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value_t = Side::X)]
    side: Side,
}

#[derive(Args, Debug, Serialize)]
struct EntropyArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Measure on X: a measure file or `parry`.
    #[arg(long, default_value = "parry")]
    mu: String,
    /// Block length for the image entropy bracket (needs a code).
    #[arg(long)]
    image_n: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct PushforwardArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value = "parry")]
    mu: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Y-word, e.g. `ababba` or `a b a b b a`.
    #[arg(long)]
    word: String,
}

#[derive(Args, Debug, Serialize)]
struct ClumpArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Largest block order searched for singleton clumps.
    #[arg(long, default_value_t = 6)]
    k_max: usize,
}

#[derive(Args, Debug, Serialize)]
struct BoundArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Measure on Y: a measure file (Markov or periodic) or `parry`.
    #[arg(long, default_value = "parry")]
    nu: String,
}

#[derive(Args, Debug, Serialize)]
struct RelpressureArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Block of a periodic point of Y; gives the exact growth rate.
    #[arg(long, conflicts_with = "nu")]
    word: Option<String>,
    /// Measure on Y to average over.
    #[arg(long)]
    nu: Option<String>,
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    seed: Seed,
}

#[derive(Subcommand, Debug)]
enum Relmax {
    /// Relatively maximal lift over a singleton clump, via the induced system.
    Singleton(SingletonArgs),
    /// Fiber over a periodic point and its maximal components.
    Periodic(PeriodicArgs),
    /// Closed-form maximal lift for the homogeneous-clump example.
    Homclump(HomclumpArgs),
    /// Local search for a maximal Markov lift over a Markov ν.
    Optimize(OptimizeArgs),
}

#[derive(Args, Debug, Serialize)]
struct SingletonArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    nu: String,
    /// The singleton-clump symbol of Y.
    #[arg(long)]
    symbol: String,
    /// Longest return loop kept.
    #[arg(long = "truncation", short = 'L', default_value_t = DEFAULT_TRUNCATION)]
    truncation: usize,
    /// Minimum retained loop mass.
    #[arg(long, default_value_t = DEFAULT_RETAINED_THRESHOLD)]
    threshold: f64,
    /// X-word from the clump symbol back to it; reports its exact measure.
    #[arg(long)]
    cylinder: Option<String>,
    /// Number of loops listed in the report.
    #[arg(long, default_value_t = 10)]
    show_loops: usize,
}

#[derive(Args, Debug, Serialize)]
struct PeriodicArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Repeating block of the periodic point, e.g. `ab`.
    #[arg(long)]
    orbit: String,
}

#[derive(Args, Debug, Serialize)]
struct HomclumpArgs {
    /// K = ν[aa]/ν[aba], positive.
    #[arg(long = "k", short = 'K')]
    k: f64,
}

#[derive(Args, Debug, Serialize)]
struct OptimizeArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    nu: String,
    /// Block order of the lift (1 to 3).
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[command(flatten)]
    #[serde(flatten)]
    seed: Seed,
}

#[derive(Subcommand, Debug)]
enum Join {
    /// Coincidence rate of the relatively independent joining.
    Orthogonality(OrthogonalityArgs),
    /// Entropy of the interleaved process.
    InterleaveEntropy(InterleaveArgs),
    /// Posterior marginals of a lift given a Y-word.
    Posterior(PosteriorArgs),
    /// Conditional block-entropy gaps of a lift.
    MarkovGap(MarkovGapArgs),
}

#[derive(Args, Debug, Serialize)]
struct OrthogonalityArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    mu1: String,
    #[arg(long)]
    mu2: String,
    /// Markov measure on Y; defaults to the image of mu1.
    #[arg(long)]
    nu: Option<String>,
    /// Window lengths; comma separated.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    n: Vec<usize>,
    #[arg(long, default_value = "10^4", value_parser = parse_count)]
    trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    seed: Seed,
}

#[derive(Args, Debug, Serialize)]
struct InterleaveArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    mu1: String,
    #[arg(long)]
    mu2: String,
    #[arg(long)]
    nu: Option<String>,
    /// Stream length, e.g. `10^7`.
    #[arg(long, default_value = "10^6", value_parser = parse_count)]
    length: usize,
    /// Longest context in the plug-in estimate.
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[command(flatten)]
    #[serde(flatten)]
    seed: Seed,
}

#[derive(Args, Debug, Serialize)]
struct PosteriorArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value = "parry")]
    mu: String,
    #[arg(long)]
    word: String,
}

#[derive(Args, Debug, Serialize)]
struct MarkovGapArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value = "parry")]
    mu: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    m: usize,
}

#[derive(Subcommand, Debug)]
enum GalleryCmd {
    /// Names and notes of the built-in systems.
    List,
    /// Re-derive the documented facts of one or all entries.
    Check(GalleryCheck),
    /// Print an entry in its text format, or write X, Y and code files.
    Export(GalleryExport),
}

#[derive(Args, Debug, Serialize)]
struct GalleryCheck {
    name: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct GalleryExport {
    name: String,
    /// Directory for `x.sft`, `y.sft` and `code.map`.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Parry(_) => "parry",
            Command::Entropy(_) => "entropy",
            Command::Pushforward(_) => "pushforward",
            Command::Count(_) => "count",
            Command::Clumps(_) => "clumps",
            Command::Bound(_) => "bound",
            Command::Relpressure(_) => "relpressure",
            Command::Relmax(Relmax::Singleton(_)) => "relmax singleton",
            Command::Relmax(Relmax::Periodic(_)) => "relmax periodic",
            Command::Relmax(Relmax::Homclump(_)) => "relmax homclump",
            Command::Relmax(Relmax::Optimize(_)) => "relmax optimize",
            Command::Join(Join::Orthogonality(_)) => "join orthogonality",
            Command::Join(Join::InterleaveEntropy(_)) => "join interleave-entropy",
            Command::Join(Join::Posterior(_)) => "join posterior",
            Command::Join(Join::MarkovGap(_)) => "join markov-gap",
            Command::Gallery(GalleryCmd::List) => "gallery list",
            Command::Gallery(GalleryCmd::Check(_)) => "gallery check",
            Command::Gallery(GalleryCmd::Export(_)) => "gallery export",
        }
    }
}

/// A finished run: the report and its exit code.
struct Outcome {
    report: Value,
    code: u8,
    /// Raw text printed instead of the report.
    raw: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0, raw: None }
    }
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn run(command: &Command, u: Units) -> CliResult<Outcome> {
    let name = command.name();
    let out = |p: Value, r: Value| Ok(Outcome::ok(envelope(name, p, u, r)));
    match command {
        Command::Validate(a) => validate(name, a, u),
        Command::Parry(a) => {
            let sft = match a.side {
                Side::X => a.inputs.system()?,
                Side::Y if a.inputs.has_code() => a.inputs.code()?.codomain().clone(),
                Side::Y => return Err(CliError::Usage("--side y needs a code".into())),
            };
            let m = parry_measure(&sft)?;
            let lambda = relent::measures::perron(&sft.adjacency_matrix())?.lambda;
            out(
                params(a),
                json!({
                    "alphabet": sft.names(),
                    "lambda": lambda,
                    "entropy": u.h(m.entropy()),
                    "log_lambda": u.h(lambda.ln()),
                    "matrix": m.transition(),
                    "stationary": m.stationary(),
                }),
            )
        }
        Command::Entropy(a) => {
            let x = a.inputs.system()?;
            let mu = measure(&a.mu, &x)?;
            let h = match &mu {
                Measure::Markov(m) => m.entropy(),
                Measure::Periodic(_) => 0.0,
            };
            let mut result = json!({ "entropy": u.h(h) });
            if let Some(n) = a.image_n {
                let Measure::Markov(m) = &mu else {
                    return Err(CliError::Usage("--image-n needs a Markov measure".into()));
                };
                if n == 0 {
                    return Err(CliError::Usage("--image-n must be at least 1".into()));
                }
                let code = a.inputs.code()?;
                let b = block_entropy_bounds(&code.tagged_pushforward(m, n)?, &code.tagged_pushforward(m, n + 1)?)?;
                result["image_bounds"] = json!({
                    "n": b.n,
                    "upper": u.h(b.upper),
                    "lower": u.h(b.lower),
                    "width": u.h(b.width()),
                });
            }
            out(params(a), result)
        }
        Command::Pushforward(a) => {
            let code = a.inputs.code()?;
            let mu = markov(&a.mu, code.domain(), "--mu")?;
            let y = code.codomain();
            let dist: serde_json::Map<String, Value> = if mu.is_exact() {
                code.pushforward_blocks_exact(&mu, a.n)?
                    .into_iter()
                    .map(|(w, p)| (y.format_word(&w), json!(rational::format(&p))))
                    .collect()
            } else {
                code.pushforward_blocks(&mu, a.n)?
                    .into_iter()
                    .map(|(w, p)| (y.format_word(&w), json!(p)))
                    .collect()
            };
            out(params(a), json!({ "exact": mu.is_exact(), "n": a.n, "blocks": dist }))
        }
        Command::Count(a) => {
            let code = a.inputs.code()?;
            let w = word(code.codomain(), &a.word)?;
            let count = code.count_preimages(&w)?;
            out(
                params(a),
                json!({
                    "word": code.codomain().format_word(&w),
                    "length": w.len(),
                    "count": count.to_string(),
                }),
            )
        }
        Command::Clumps(a) => {
            let code = a.inputs.code()?;
            out(params(a), serde_json::to_value(code.clump_analysis(a.k_max)?).unwrap())
        }
        Command::Bound(a) => {
            let code = a.inputs.code()?;
            let nu = measure(&a.nu, code.codomain())?;
            out(params(a), json!({ "bound": bound_n(&code, &nu)? }))
        }
        Command::Relpressure(a) => relpressure(name, a, u),
        Command::Relmax(r) => relmax(name, r, u),
        Command::Join(j) => join(name, j, u),
        Command::Gallery(g) => gallery_cmd(name, g, u),
    }
}

fn validate(name: &str, a: &Plain, u: Units) -> CliResult<Outcome> {
    let x = a.inputs.system()?;
    let comps: Vec<Value> = x
        .strongly_connected_components()
        .iter()
        .map(|c| {
            json!({
                "vertices": c.vertices.iter().map(|&v| x.name(v)).collect::<Vec<_>>(),
                "trivial": c.trivial,
            })
        })
        .collect();
    let sd = x.validate();
    let mut valid = sd.is_valid();
    let mut result = json!({
        "system": {
            "diagnostics": sd,
            "irreducible": x.is_irreducible().unwrap_or(false),
            "components": comps,
        }
    });
    if a.inputs.has_code() {
        let code = a.inputs.code()?;
        let cd = code.validate();
        valid &= cd.is_valid();
        result["codomain"] = json!({ "diagnostics": code.codomain().validate() });
        result["code"] = json!({
            "diagnostics": cd,
            "image_check": code.image_subshift_check(IMAGE_CHECK_LENGTH),
        });
    }
    result["valid"] = json!(valid);
    Ok(Outcome {
        report: envelope(name, params(a), u, result),
        code: if valid { 0 } else { 2 },
        raw: None,
    })
}

fn relpressure(name: &str, a: &RelpressureArgs, u: Units) -> CliResult<Outcome> {
    let code = a.inputs.code()?;
    let result = match (&a.word, &a.nu) {
        (Some(w), _) => {
            let w = word(code.codomain(), w)?;
            PeriodicOrbit::new(code.codomain(), w.clone())?;
            json!({
                "orbit": code.codomain().format_word(&w),
                "exact": true,
                "relative_pressure": u.h(periodic_growth_rate(&code, w.symbols())?),
            })
        }
        (None, Some(nu)) => {
            let nu = measure(nu, code.codomain())?;
            let e = relative_entropy_over_nu(&code, &nu, a.n, a.trials, a.seed.seed)?;
            json!({
                "exact": e.limit.is_some(),
                "seed": e.seed,
                "trials": e.trials,
                "n": e.n,
                "relative_entropy": u.h(e.increment),
                "std_err": u.h(e.increment_std_err),
                "ci95": u.pair(e.ci95()),
                "average": u.h(e.value),
                "average_std_err": u.h(e.std_err),
                "average_ci95": u.pair((e.value - 1.96 * e.std_err, e.value + 1.96 * e.std_err)),
                "limit": e.limit.map(|l| u.h(l)),
            })
        }
        (None, None) => return Err(CliError::Usage("pass --word or --nu".into())),
    };
    Ok(Outcome::ok(envelope(name, params(a), u, result)))
}

fn relmax(name: &str, r: &Relmax, u: Units) -> CliResult<Outcome> {
    let (p, result) = match r {
        Relmax::Singleton(a) => {
            let code = a.inputs.code()?;
            let nu = markov(&a.nu, code.codomain(), "--nu")?;
            let sym = code.codomain().index_of(&a.symbol)?;
            let induced = build_induced(&code, &nu, sym, a.truncation)?;
            let m = maximal_induced_measure(&induced);
            let ab = abramov_entropy(&m, a.threshold)?;
            let (x, y) = (code.domain(), code.codomain());
            let loops: Vec<Value> = m
                .induced
                .loops
                .iter()
                .zip(&m.weights)
                .take(a.show_loops)
                .map(|(l, w)| {
                    json!({
                        "word": y.format_word(&l.word),
                        "probability": l.probability,
                        "exact": l.exact.as_ref().map(rational::format),
                        "bands": l.bands.iter().map(|b| x.format_word(b)).collect::<Vec<_>>(),
                        "band_weight": w.first(),
                    })
                })
                .collect();
            let mut result = json!({
                "clump_mass": ab.clump_mass,
                "induced_entropy": u.h(ab.induced_entropy),
                "h_mu": u.h(ab.h_mu),
                "h_nu": u.h(ab.nu_entropy),
                "h_rel": u.h(ab.h_rel),
                "fiber_entropy": u.h(ab.fiber_entropy),
                "retained_mass": ab.retained_mass,
                "retained_mass_exact": m.induced.retained_mass_exact.as_ref().map(rational::format),
                "loops_total": m.induced.loops.len(),
                "loops": loops,
            });
            if let Some(c) = &a.cylinder {
                let w = word(x, c)?;
                result["cylinder"] = json!({
                    "word": x.format_word(&w),
                    "probability": rational::format(&cylinder_probability_exact(&m, &w)?),
                });
            }
            (params(a), result)
        }
        Relmax::Periodic(a) => {
            let code = a.inputs.code()?;
            let w = word(code.codomain(), &a.orbit)?;
            let orbit = PeriodicOrbit::new(code.codomain(), w)?;
            let mut f = serde_json::to_value(fiber_periodic(&code, &orbit)?).unwrap();
            f["max_entropy"] = json!(u.h(f["max_entropy"].as_f64().unwrap_or(0.0)));
            if let Some(cs) = f["components"].as_array_mut() {
                for c in cs {
                    c["entropy"] = json!(u.h(c["entropy"].as_f64().unwrap_or(0.0)));
                }
            }
            (params(a), f)
        }
        Relmax::Homclump(a) => (params(a), serde_json::to_value(homclump_family(a.k)?).unwrap()),
        Relmax::Optimize(a) => {
            let code = a.inputs.code()?;
            let nu = markov(&a.nu, code.codomain(), "--nu")?;
            let o = fiber_entropy_optimizer(&code, &nu, a.order, a.restarts, a.seed.seed)?;
            let x = code.domain();
            let blocks: Vec<String> = o.blocks.iter().map(|b| x.format_word(b)).collect();
            (
                params(a),
                json!({
                    "seed": a.seed.seed,
                    "order": o.order,
                    "heuristic": o.heuristic,
                    "entropy": u.h(o.entropy),
                    "nu_entropy": u.h(o.nu_entropy),
                    "relative_entropy": u.h(o.relative_entropy),
                    "constraint_deviation": o.constraint_deviation,
                    "blocks": blocks,
                    "matrix": o.measure.transition(),
                    "stationary": o.measure.stationary(),
                    "best_restart": o.best_restart,
                    "restarts": o.restarts,
                }),
            )
        }
    };
    Ok(Outcome::ok(envelope(name, p, u, result)))
}

fn nu_sampler(arg: &Option<String>, code: &FactorCode, mu1: &MarkovMeasure) -> CliResult<NuSampler> {
    Ok(match arg {
        Some(s) => NuSampler::Markov(markov(s, code.codomain(), "--nu")?),
        None => NuSampler::Image { code: code.clone(), mu: mu1.clone() },
    })
}

fn join(name: &str, j: &Join, u: Units) -> CliResult<Outcome> {
    let (p, result) = match j {
        Join::Orthogonality(a) => {
            let code = a.inputs.code()?;
            let mu1 = markov(&a.mu1, code.domain(), "--mu1")?;
            let mu2 = markov(&a.mu2, code.domain(), "--mu2")?;
            let nu = nu_sampler(&a.nu, &code, &mu1)?;
            let rows = a
                .n
                .iter()
                .map(|&n| {
                    let r = sample_joining(&mu1, &mu2, &code, &nu, n, a.trials, a.seed.seed)?;
                    Ok(json!({
                        "n": r.n,
                        "center": r.center,
                        "coincidence": r.coincidence.mean,
                        "coincidence_std_err": r.coincidence.std_err,
                        "coincidence_ci95": [r.coincidence.ci95.0, r.coincidence.ci95.1],
                        "overlap": r.overlap.mean,
                        "overlap_std_err": r.overlap.std_err,
                        "overlap_ci95": [r.overlap.ci95.0, r.overlap.ci95.1],
                        "pushforward_checked": r.pushforward_checked,
                    }))
                })
                .collect::<CliResult<Vec<Value>>>()?;
            (params(a), json!({ "seed": a.seed.seed, "trials": a.trials, "windows": rows }))
        }
        Join::InterleaveEntropy(a) => {
            let code = a.inputs.code()?;
            let mu1 = markov(&a.mu1, code.domain(), "--mu1")?;
            let mu2 = markov(&a.mu2, code.domain(), "--mu2")?;
            let nu = nu_sampler(&a.nu, &code, &mu1)?;
            let stream = interleave_stream(&mu1, &mu2, &code, &nu, a.length, a.seed.seed)?;
            let e = empirical_entropy(&stream.w, code.domain().len(), a.n_max)?;
            let nu_h = match &nu {
                NuSampler::Markov(m) => Some(u.h(m.entropy())),
                NuSampler::Image { .. } => None,
            };
            (
                params(a),
                json!({
                    "seed": a.seed.seed,
                    "length": e.length,
                    "coincidences": stream.coincidences,
                    "estimate": u.h(e.estimate()),
                    "estimate_ci95": u.pair(e.conditional_ci[a.n_max]),
                    "conditional": u.hs(&e.conditional),
                    "conditional_ci95": e.conditional_ci.iter().map(|&c| u.pair(c)).collect::<Vec<_>>(),
                    "block_rate": u.hs(&e.block_rate),
                    "block_rate_ci95": e.block_rate_ci.iter().map(|&c| u.pair(c)).collect::<Vec<_>>(),
                    "bootstrap": e.bootstrap,
                    "mu1_entropy": u.h(mu1.entropy()),
                    "mu2_entropy": u.h(mu2.entropy()),
                    "nu_entropy": nu_h,
                }),
            )
        }
        Join::Posterior(a) => {
            let code = a.inputs.code()?;
            let mu = markov(&a.mu, code.domain(), "--mu")?;
            let y = word(code.codomain(), &a.word)?;
            let t = posterior(&mu, &code, &y)?;
            let x = code.domain();
            let named = |row: &[f64]| -> serde_json::Map<String, Value> {
                row.iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(s, &p)| (x.name(s).to_string(), json!(p)))
                    .collect()
            };
            let mut result = json!({
                "word": code.codomain().format_word(&y),
                "log_probability": t.log_probability,
                "marginals": t.marginals.iter().map(|r| named(r)).collect::<Vec<_>>(),
            });
            if mu.is_exact() {
                let e = posterior_exact(&mu, &code, &y)?;
                result["exact"] = json!({
                    "probability": rational::format(&e.probability),
                    "marginals": e.marginals.iter().map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(_, p)| **p != rational::ratio(0, 1))
                            .map(|(s, p)| (x.name(s).to_string(), json!(rational::format(p))))
                            .collect::<serde_json::Map<_, _>>()
                    }).collect::<Vec<_>>(),
                });
            }
            (params(a), result)
        }
        Join::MarkovGap(a) => {
            let code = a.inputs.code()?;
            let mu = markov(&a.mu, code.domain(), "--mu")?;
            let r = relative_markov_diagnostic(&HiddenChain::from_markov(&mu), &code, a.n, a.m)?;
            (
                params(a),
                json!({
                    "n": r.n,
                    "m": r.m,
                    "conditional": u.hs(&r.conditional),
                    "gaps": u.hs(&r.gaps),
                    "terminal_gap": u.h(r.terminal_gap),
                }),
            )
        }
    };
    Ok(Outcome::ok(envelope(name, p, u, result)))
}

fn gallery_cmd(name: &str, g: &GalleryCmd, u: Units) -> CliResult<Outcome> {
    match g {
        GalleryCmd::List => {
            let entries = gallery::load_all()?
                .into_iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "x": e.x.names(),
                        "y": e.y.names(),
                        "notes": e.notes,
                    })
                })
                .collect::<Vec<_>>();
            Ok(Outcome::ok(envelope(name, json!({}), u, json!({ "entries": entries }))))
        }
        GalleryCmd::Check(a) => {
            let names: Vec<String> = match &a.name {
                Some(n) => vec![n.clone()],
                None => gallery::NAMES.iter().map(|s| s.to_string()).collect(),
            };
            let reports = names
                .iter()
                .map(|n| Ok(gallery::self_check(&gallery::load(n)?)))
                .collect::<CliResult<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            Ok(Outcome {
                report: envelope(name, params(a), u, json!({ "passed": passed, "entries": reports })),
                code: if passed { 0 } else { 1 },
                raw: None,
            })
        }
        GalleryCmd::Export(a) => {
            let entry = gallery::load(&a.name)?;
            let Some(dir) = &a.out else {
                return Ok(Outcome {
                    report: Value::Null,
                    code: 0,
                    raw: Some(gallery::export(&entry)),
                });
            };
            let files = [
                ("x.sft", text::format_sft(&entry.x)),
                ("y.sft", text::format_sft(&entry.y)),
                ("code.map", text::format_code(&entry.code)),
            ];
            let io = |path: &std::path::Path, e: std::io::Error| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            };
            std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
            let mut written = Vec::new();
            for (file, body) in files {
                let path = dir.join(file);
                std::fs::write(&path, body).map_err(|e| io(&path, e))?;
                written.push(path.display().to_string());
            }
            Ok(Outcome::ok(envelope(name, params(a), u, json!({ "files": written }))))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            let guess = std::env::args().skip(1).find(|a| !a.starts_with('-')).unwrap_or_default();
            print!("{}", render(&err.to_json(&guess), Format::Json));
            return ExitCode::from(2);
        }
    };
    let units = Units { bits: cli.bits };
    let name = cli.command.name();
    match run(&cli.command, units) {
        Ok(Outcome { raw: Some(text), code, .. }) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Ok(o) => {
            print!("{}", render(&o.report, cli.format));
            ExitCode::from(o.code)
        }
        Err(e) => {
            print!("{}", render(&e.to_json(name), cli.format));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_version_is_pinned() {
        assert_eq!(report::report_schema_version(), "1.0.0");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

}
