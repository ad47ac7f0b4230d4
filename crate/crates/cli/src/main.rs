//! Command-line driver: builds representations, runs the arithmeticity and
//! Klein-combination tests, reproduces the candidate table and finiteness
//! bounds, verifies the figure relators, and plots invariant circles.

mod output;
mod svg;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Rational;
use serde_json::{json, Value};

use trihalf_core::arith::{arithmeticity_test, COVOLUME_NOTE};
use trihalf_core::ball::{ComplexBall, RealBall};
use trihalf_core::enumerate::{
    diff_against_reference, enumerate_quadratic_candidates, filter_nearly_arithmetic,
    bound_report,
};
use trihalf_core::error::Error;
use trihalf_core::klein::{
    circle_disjointness, compute_split_constants, conjecture_scan, rho_star_rounded,
    RhoStarChoice, Sampler, ScanRegion,
};
use trihalf_core::parse::{parse_complex, parse_decimal, parse_element, parse_field};
use trihalf_core::poly::IntPolynomial;
use trihalf_core::relators::{
    is_relator, relator_order, search_short_relators, verify_presentation, GroupWord,
    Presentation, FIGURE4_CORRECTED, FIGURE4_LITERAL, FIGURE5, FIGURE6,
};
use trihalf_core::rep::{
    build_regular, build_representation, diameter_circle, BallMatrix2, HalfTurnTriple, Params,
};
use trihalf_core::Precision;

#[derive(Parser)]
#[command(
    name = "trihalf",
    about = "Kleinian groups generated by three half-turns: representations, arithmeticity, Klein combination",
    version
)]
struct Cli {
    /// Working precision in bits
    #[arg(long, global = true, env = "TRIHALF_PRECISION", default_value_t = 128)]
    precision: u32,

    /// Escalation cap in bits
    #[arg(long, global = true, default_value_t = 8192)]
    precision_cap: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: output::Format,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix representation construction
    Rep {
        #[command(subcommand)]
        sub: RepCommand,
    },
    /// Arithmeticity testing
    Arith {
        #[command(subcommand)]
        sub: ArithCommand,
    },
    /// Klein-combination circle tests and constants
    Klein {
        #[command(subcommand)]
        sub: KleinCommand,
    },
    /// Candidate enumeration
    Enumerate {
        #[command(subcommand)]
        sub: EnumerateCommand,
    },
    /// Finiteness-bound constants of the discriminant estimate
    Bounds {
        /// Splitting constant: `6.4` (the traditional rounded constant) or `computed`
        #[arg(long, default_value = "6.4")]
        rho_star: String,
    },
    /// Word evaluation and relator verification
    Relators {
        #[command(subcommand)]
        sub: RelatorsCommand,
    },
    /// Static SVG plots
    Plot {
        #[command(subcommand)]
        sub: PlotCommand,
    },
}

#[derive(Subcommand)]
enum RepCommand {
    /// Build the SL(2, C) representation from (rho0, rho1, rho2)
    Build(ParamArgs),
}

#[derive(Subcommand)]
enum ArithCommand {
    /// Run the intrinsic arithmeticity test on exact parameters
    Test {
        #[command(flatten)]
        params: ParamArgs,
        /// Splitting constant: `6.4` or `computed`
        #[arg(long, default_value = "6.4")]
        rho_star: String,
    },
}

#[derive(Subcommand)]
enum KleinCommand {
    /// Circle disjointness test for given parameters
    Check(ParamArgs),
    /// Certified splitting constants beta* and rho*
    Constants,
    /// Sample parameter triples hunting for splitting-conjecture counterexamples
    Scan {
        #[arg(long, default_value_t = -10.0)]
        re_min: f64,
        #[arg(long, default_value_t = 10.0)]
        re_max: f64,
        #[arg(long, default_value_t = -10.0)]
        im_min: f64,
        #[arg(long, default_value_t = 10.0)]
        im_max: f64,
        /// Random samples (exclusive with --grid)
        #[arg(long, conflicts_with = "grid")]
        samples: Option<usize>,
        /// Grid points per axis
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Keep only samples with all |rho_i| at or above this threshold
        #[arg(long, default_value_t = 6.4)]
        threshold: f64,
    },
}

#[derive(Subcommand)]
enum EnumerateCommand {
    /// Regular-group candidates over imaginary quadratic fields
    Regular {
        /// Norm bound on |rho| (decimal, parsed exactly)
        #[arg(long, default_value = "6.4")]
        bound: String,
    },
}

#[derive(Subcommand)]
enum RelatorsCommand {
    /// Verify the figure presentations (or a custom word)
    Verify {
        /// Figure number: 4, 5, or 6
        #[arg(long, conflicts_with = "word")]
        figure: Option<u32>,
        /// Custom word, e.g. `c^-1 b^-1 a^-1 b c a`
        #[arg(long, requires = "rho0")]
        word: Option<String>,
        #[command(flatten)]
        params: OptionalParamArgs,
    },
    /// Breadth-first search for short relators
    Search {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
    },
}

#[derive(Subcommand)]
enum PlotCommand {
    /// SVG plot of the three invariant circles
    Circles(ParamArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Ambient field as a monic integer polynomial in t, e.g. `t^2+3`
    /// (exact mode); omit for numeric mode with decimal complex literals
    #[arg(long)]
    field: Option<String>,

    /// rho0; field-element grammar in exact mode (e.g. `(-1+t)/2`),
    /// decimal complex literal `a+bi` in numeric mode
    #[arg(long, allow_hyphen_values = true)]
    rho0: String,

    /// rho1 (defaults to rho0: regular case)
    #[arg(long, allow_hyphen_values = true)]
    rho1: Option<String>,

    /// rho2 (defaults to rho0: regular case)
    #[arg(long, allow_hyphen_values = true)]
    rho2: Option<String>,
}

#[derive(Args)]
struct OptionalParamArgs {
    #[arg(long)]
    field: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rho0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rho1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rho2: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let precision = Precision::new(cli.precision, cli.precision_cap.max(cli.precision));
    match run(&cli, &precision) {
        Ok(report) => {
            // a bare string result (SVG document) bypasses report formatting
            let text = match &report {
                Value::String(doc) => doc.clone(),
                _ => output::emit(&report, cli.format),
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Invalid(_) => 2,
        Error::PrecisionExhausted(_) => 3,
        _ => 1,
    }
}

fn run(cli: &Cli, precision: &Precision) -> Result<Value, Error> {
    let config = json!({
        "precision_bits": precision.bits,
        "precision_cap": precision.cap,
        "format": format!("{:?}", cli.format).to_lowercase(),
    });
    match &cli.command {
        Command::Rep { sub: RepCommand::Build(p) } => {
            let params = parse_params(p, precision)?;
            let t = build_triple(&params, precision)?;
            Ok(output::report("rep build", config, rep_json(&t)))
        }
        Command::Arith { sub: ArithCommand::Test { params, rho_star } } => {
            let p = parse_params(params, precision)?;
            let choice = parse_rho_star(rho_star)?;
            let r = arithmeticity_test(&p, choice, precision)?;
            Ok(output::report(
                "arith test",
                config,
                json!({
                    "verdict": r.verdict.as_str(),
                    "integers_ok": r.integers_ok,
                    "trace_field": {
                        "degree": r.trace_field.degree(),
                        "defining_polynomial": poly_string(r.trace_field.field.min_poly()),
                    },
                    "invariant_trace_field": {
                        "degree": r.invariant_field.degree(),
                        "defining_polynomial": poly_string(r.invariant_field.field.min_poly()),
                    },
                    "signature": {
                        "real_places": r.signature.real_places,
                        "complex_places": r.signature.complex_places,
                    },
                    "real_place_signs": r.real_place_signs
                        .iter()
                        .map(|(i, a, b)| json!([i, a, b]))
                        .collect::<Vec<_>>(),
                    "ramified_at_all_real_places": r.ramified_all_real,
                    "free_product_status": r.free_product_status.as_str(),
                    "covolume_note": COVOLUME_NOTE,
                }),
            ))
        }
        Command::Klein { sub } => run_klein(sub, config, precision),
        Command::Enumerate { sub: EnumerateCommand::Regular { bound } } => {
            let bound = parse_decimal(bound)?;
            let cands = enumerate_quadratic_candidates(&bound);
            let table = filter_nearly_arithmetic(&cands, &rho_star_rounded(), precision)?;
            let diff = diff_against_reference(&table);
            let rows: Vec<Value> = table
                .surviving()
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    json!({
                        "n": i + 1,
                        "rho": r.cand.rho_string(),
                        "field": r.cand.field_label(),
                    })
                })
                .collect();
            Ok(output::report(
                "enumerate regular",
                config,
                json!({
                    "bound": bound.to_string(),
                    "candidates_total": cands.len(),
                    "surviving": rows.len(),
                    "rows": rows,
                    "reference_diff": {
                        "missing": diff.missing,
                        "extra": diff.extra,
                    },
                }),
            ))
        }
        Command::Bounds { rho_star } => {
            let star = match rho_star.as_str() {
                "computed" => {
                    // bounds arithmetic is exact; use a certified rational
                    // upper bound of the computed constant
                    let c = compute_split_constants(precision)?;
                    float_to_rational_upper(&c.rho_star_computed)
                }
                s => parse_decimal(s)?,
            };
            let r = bound_report(&star)?;
            Ok(output::report(
                "bounds",
                config,
                json!({
                    "rho_star": r.rho_star.to_string(),
                    "K": r.k.to_string(),
                    "K_decimal": r.k.to_f64(),
                    "m_values": r.m_values
                        .iter()
                        .map(|(n, m)| json!([n, m.to_string()]))
                        .collect::<Vec<_>>(),
                    "n0": r.n0,
                    "bound_values": r.bound_values
                        .iter()
                        .map(|(n, b)| json!([n, b.to_f64()]))
                        .collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Relators { sub } => run_relators(sub, config, precision),
        Command::Plot { sub: PlotCommand::Circles(p) } => {
            let params = parse_params(p, precision)?;
            let t = build_triple(&params, precision)?;
            // raw document, not a structured report: --out gets a valid SVG file
            let doc = svg::plot_circles(&t)?;
            Ok(Value::String(doc))
        }
    }
}

fn run_klein(sub: &KleinCommand, config: Value, precision: &Precision) -> Result<Value, Error> {
    match sub {
        KleinCommand::Check(p) => {
            let params = parse_params(p, precision)?;
            let t = build_triple(&params, precision)?;
            let r = circle_disjointness(&t)?;
            Ok(output::report(
                "klein check",
                config,
                json!({
                    "status": r.status.as_str(),
                    "disjoint_witness": r.disjoint_witness.map(|w| {
                        w.iter().map(|s| format!("{s:?}").to_lowercase()).collect::<Vec<_>>()
                    }),
                    "intersecting_pairs": r.intersecting_pairs
                        .iter()
                        .map(|&(i, j)| json!([i, j]))
                        .collect::<Vec<_>>(),
                }),
            ))
        }
        KleinCommand::Constants => {
            let c = compute_split_constants(precision)?;
            Ok(output::report(
                "klein constants",
                config,
                json!({
                    "beta_star": rball_json(&c.beta_star),
                    "rho_star_computed": rball_json(&c.rho_star_computed),
                    "rho_star_rounded": rho_star_rounded().to_string(),
                    "rho_star_rounded_decimal": rho_star_rounded().to_f64(),
                }),
            ))
        }
        KleinCommand::Scan {
            re_min,
            re_max,
            im_min,
            im_max,
            samples,
            grid,
            seed,
            threshold,
        } => {
            let region = ScanRegion {
                re_min: *re_min,
                re_max: *re_max,
                im_min: *im_min,
                im_max: *im_max,
            };
            let sampler = match (samples, grid) {
                (_, Some(per_axis)) => Sampler::Grid { per_axis: *per_axis },
                (Some(count), None) => Sampler::Random {
                    count: *count,
                    seed: *seed,
                },
                (None, None) => Sampler::Random {
                    count: 100,
                    seed: *seed,
                },
            };
            let hits = conjecture_scan(&region, sampler, *threshold, precision);
            Ok(output::report(
                "klein scan",
                config,
                json!({
                    "threshold": threshold,
                    "non_disjoint_samples": hits
                        .iter()
                        .map(|s| json!({
                            "rho": s.rho.iter().map(|&(re, im)| json!([re, im])).collect::<Vec<_>>(),
                            "status": s.status.as_str(),
                        }))
                        .collect::<Vec<_>>(),
                    "count": hits.len(),
                }),
            ))
        }
    }
}

fn run_relators(
    sub: &RelatorsCommand,
    config: Value,
    precision: &Precision,
) -> Result<Value, Error> {
    match sub {
        RelatorsCommand::Verify { figure, word, params } => {
            if let Some(word_text) = word {
                let p = parse_params(
                    &ParamArgs {
                        field: params.field.clone(),
                        rho0: params
                            .rho0
                            .clone()
                            .ok_or_else(|| Error::Invalid("--word needs --rho0".into()))?,
                        rho1: params.rho1.clone(),
                        rho2: params.rho2.clone(),
                    },
                    precision,
                )?;
                let w = GroupWord::parse(word_text)?;
                let check = is_relator(&w, &p, precision)?;
                let order = relator_order(&w, &p, precision, 6)?;
                return Ok(output::report(
                    "relators verify",
                    config,
                    json!({
                        "word": w.to_string(),
                        "verdict": check.verdict.as_str(),
                        "max_radius": check.max_radius,
                        "bits": check.bits,
                        "order": order.as_ref().map(|(e, _)| e),
                    }),
                ));
            }
            let presentations: Vec<&Presentation> = match figure {
                Some(4) => vec![&FIGURE4_LITERAL, &FIGURE4_CORRECTED],
                Some(5) => vec![&FIGURE5],
                Some(6) => vec![&FIGURE6],
                Some(n) => {
                    return Err(Error::Invalid(format!("no figure {n}; use 4, 5, or 6")))
                }
                None => vec![&FIGURE4_LITERAL, &FIGURE4_CORRECTED, &FIGURE5, &FIGURE6],
            };
            let mut out = Vec::new();
            for pres in presentations {
                let results = verify_presentation(pres, precision)?;
                out.push(json!({
                    "presentation": pres.name,
                    "template": pres.template,
                    "rho": format!("{}/2 + sqrt(-3)/2", pres.k),
                    "words": results
                        .iter()
                        .map(|r| json!({
                            "word": r.word.to_string(),
                            "word_verdict": r.base.verdict.as_str(),
                            "order": r.order,
                            "relator_verdict": r.power_check
                                .as_ref()
                                .map(|c| c.verdict.as_str()),
                            "relator_radius": r.power_check.as_ref().map(|c| c.max_radius),
                        }))
                        .collect::<Vec<_>>(),
                }));
            }
            Ok(output::report(
                "relators verify",
                config,
                json!({ "presentations": out }),
            ))
        }
        RelatorsCommand::Search { params, max_length } => {
            let p = parse_params(params, precision)?;
            let t = build_triple(&p, precision)?;
            let found = search_short_relators(&t, *max_length)?;
            Ok(output::report(
                "relators search",
                config,
                json!({
                    "max_length": max_length,
                    "relators": found.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                }),
            ))
        }
    }
}

fn parse_rho_star(text: &str) -> Result<RhoStarChoice, Error> {
    match text {
        "6.4" | "rounded" => Ok(RhoStarChoice::Rounded),
        "computed" => Ok(RhoStarChoice::Computed),
        other => Err(Error::Invalid(format!(
            "--rho-star accepts `6.4` or `computed`, got {other:?}"
        ))),
    }
}

fn parse_params(args: &ParamArgs, precision: &Precision) -> Result<Params, Error> {
    let rho1 = args.rho1.as_deref().unwrap_or(&args.rho0);
    let rho2 = args.rho2.as_deref().unwrap_or(&args.rho0);
    match &args.field {
        Some(decl) => {
            let field = parse_field(decl, precision)?;
            Params::exact(
                parse_element(&args.rho0, &field)?,
                parse_element(rho1, &field)?,
                parse_element(rho2, &field)?,
            )
        }
        None => {
            let mk = |text: &str| -> Result<ComplexBall, Error> {
                let (re, im) = parse_complex(text)?;
                Ok(ComplexBall::from_rationals(&re, &im, precision.bits))
            };
            Ok(Params::numeric(mk(&args.rho0)?, mk(rho1)?, mk(rho2)?))
        }
    }
}

fn build_triple(p: &Params, precision: &Precision) -> Result<HalfTurnTriple, Error> {
    if p.is_regular() {
        build_regular(p, precision)
    } else {
        build_representation(p, precision)
    }
}

fn rep_json(t: &HalfTurnTriple) -> Value {
    let mat = |m: &BallMatrix2| {
        json!([
            [cball_json(&m.e[0][0]), cball_json(&m.e[0][1])],
            [cball_json(&m.e[1][0]), cball_json(&m.e[1][1])]
        ])
    };
    let tr = |x: &trihalf_core::rep::LineMatrix, y: &trihalf_core::rep::LineMatrix| {
        cball_json(&x.matrix().mul(y.matrix()).trace())
    };
    let circle = |g: &trihalf_core::rep::LineMatrix| match diameter_circle(g, t.bits) {
        Ok(c) => json!({
            "center": cball_json(&c.center),
            "radius": c.radius.to_f64(),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    json!({
        "mode": if t.params.is_exact() { "exact" } else { "numeric" },
        "regular": t.params.is_regular(),
        "beta": cball_json(&t.beta),
        "matrices": {
            "a": mat(t.a.matrix()),
            "b": mat(t.b.matrix()),
            "c": mat(t.c.matrix()),
        },
        "traces": {
            "tr_ab": tr(&t.a, &t.b),
            "tr_ac": tr(&t.a, &t.c),
            "tr_bc": tr(&t.b, &t.c),
        },
        "circles": {
            "a": circle(&t.a),
            "b": circle(&t.b),
            "c": circle(&t.c),
        },
        "precision_bits": t.bits,
    })
}

fn cball_json(b: &ComplexBall) -> Value {
    let (re, im) = b.to_f64_pair();
    json!({ "re": re, "im": im, "radius": b.rad().to_f64() })
}

fn rball_json(b: &RealBall) -> Value {
    json!({
        "mid": b.mid().to_f64(),
        "radius": b.rad().to_f64(),
        "lower": b.lower_bound().to_f64(),
        "upper": b.upper_bound().to_f64(),
    })
}

fn poly_string(p: &IntPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        let body = if i == 0 {
            c.to_string()
        } else if *c == 1u32 {
            var
        } else if *c == -1i32 {
            format!("-{var}")
        } else {
            format!("{c}{var}")
        };
        parts.push(body);
    }
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(part);
        } else if let Some(stripped) = part.strip_prefix('-') {
            out.push_str(&format!("-{stripped}"));
        } else {
            out.push_str(&format!("+{part}"));
        }
    }
    out
}

/// Exact rational upper bound of a real ball (for feeding the certified
/// constant into exact bound arithmetic).
fn float_to_rational_upper(b: &RealBall) -> Rational {
    b.upper_bound()
        .to_rational()
        .unwrap_or_else(|| Rational::from((32, 5)))
}
