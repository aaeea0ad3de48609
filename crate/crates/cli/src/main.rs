//! Command-line front end: expansions, cycle detection, form orbits,
//! circle classification, and approximation-quality probes, emitted as
//! versioned JSON/CSV artifacts.
//!
//! Exit codes: 0 success, 2 chooser failure, 3 precision cap exceeded,
//! 64 usage or input errors, 1 anything else.

use ccf_core::algebraic::SurdSpec;
use ccf_core::artifact::{
    parse_rational, probe_csv, CircleDoc, CycleDoc, ExpansionDoc, OrbitDoc,
};
use ccf_core::cf::{detect_cycle, expand_with_prec, neat_indices, Chooser, Script};
use ccf_core::diophantine::{classify_circle, CircleSpec};
use ccf_core::forms::{orbit, FormMatrix, Sigma};
use ccf_core::rings::{covering_radius, KElt, RingElt, RingId};
use ccf_core::Error;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ccf", version, about = "Exact continued fractions over the Euclidean subrings of C")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Ring: G, R2, E3, E7 or E11 (w = i, sqrt(2)i, (1+sqrt(j)i)/2)
    #[arg(long, default_value = "G")]
    ring: String,
    /// Working precision in bits (>= 64)
    #[arg(long, default_value_t = 128)]
    prec: u64,
    /// Write the artifact here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for sampling commands (reserved; recorded only)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct SurdArgs {
    /// Quadratic coefficients A,B,C in ring-element syntax (a+b*w)
    #[arg(long)]
    poly: String,
    /// Select the other root of the polynomial
    #[arg(long, default_value_t = false)]
    other_root: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a continued-fraction expansion and emit its full trace
    Expand {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        surd: SurdArgs,
        /// nearest | farthest:R | nearest-even | script:a;b;c
        #[arg(long, default_value = "nearest")]
        chooser: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Detect the eventual period of an expansion
    Cycle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        surd: SurdArgs,
        #[arg(long, default_value = "nearest")]
        chooser: String,
        #[arg(long, default_value_t = 1000)]
        depth: usize,
    },
    /// Orbit of a sigma-form along an expansion, over its neat indices
    Orbit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        surd: SurdArgs,
        /// hermitian:A,B,C,D or quadratic:A,B,C,D (entries over the denom)
        #[arg(long)]
        form: String,
        /// Common denominator k of the form entries
        #[arg(long, default_value_t = 1)]
        form_denom: u64,
        #[arg(long, default_value_t = 1000)]
        depth: usize,
        /// Distance bound for the neat index set (default (r0+1)/2)
        #[arg(long)]
        neat_r: Option<String>,
    },
    /// Classify a circle |z - center|^2 = r2
    Circle {
        #[command(flatten)]
        common: Common,
        /// Center in K: `a+b*w`, optionally `(...)/d`
        #[arg(long, default_value = "0")]
        center: String,
        /// Squared radius, a positive rational m/n
        #[arg(long)]
        r2: String,
    },
    /// CSV of (n, |q_n|^2, |delta_n| bounds) along an expansion
    Probe {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        surd: SurdArgs,
        #[arg(long, default_value = "nearest")]
        chooser: String,
        #[arg(long, default_value_t = 50)]
        depth: usize,
        /// csv (default) or json for the full expansion document
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

fn parse_ring(s: &str) -> Result<RingId, Error> {
    s.parse()
}

fn parse_poly(ring: RingId, s: &str) -> Result<[RingElt; 3], Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected three comma-separated coefficients, got '{s}'"
        )));
    }
    Ok([
        RingElt::parse(ring, parts[0])?,
        RingElt::parse(ring, parts[1])?,
        RingElt::parse(ring, parts[2])?,
    ])
}

fn parse_surd(ring: RingId, args: &SurdArgs) -> Result<SurdSpec, Error> {
    let [a, b, c] = parse_poly(ring, &args.poly)?;
    let branch = if args.other_root { -1 } else { 1 };
    SurdSpec::with_branch(ring, a, b, c, branch)
}

fn parse_chooser(ring: RingId, s: &str) -> Result<Chooser, Error> {
    if s == "nearest" {
        return Ok(Chooser::NearestInteger);
    }
    if s == "nearest-even" {
        return Ok(Chooser::NearestEven);
    }
    if let Some(r) = s.strip_prefix("farthest:") {
        return Ok(Chooser::FarthestWithin(parse_rational(r)?));
    }
    if let Some(body) = s.strip_prefix("script:") {
        let entries = body
            .split(';')
            .map(|e| RingElt::parse(ring, e))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Chooser::Script(Script::finite(entries)));
    }
    Err(Error::InvalidInput(format!("unknown chooser '{s}'")))
}

fn parse_form(ring: RingId, s: &str, denom: u64) -> Result<FormMatrix, Error> {
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput("form must be kind:entries".into()))?;
    let sigma = match kind {
        "hermitian" => Sigma::Conjugation,
        "quadratic" => Sigma::Identity,
        _ => {
            return Err(Error::InvalidInput(format!(
                "form kind must be hermitian or quadratic, got '{kind}'"
            )))
        }
    };
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidInput("form needs four entries A,B,C,D".into()));
    }
    let e: Vec<RingElt> = parts
        .iter()
        .map(|p| RingElt::parse(ring, p))
        .collect::<Result<_, _>>()?;
    FormMatrix::new(
        sigma,
        BigUint::from(denom),
        e[0].clone(),
        e[1].clone(),
        e[2].clone(),
        e[3].clone(),
    )
}

fn default_neat_r(ring: RingId) -> BigRational {
    let hi = covering_radius(ring).hi().to_rational();
    (hi + BigRational::from_integer(1.into())) / BigRational::from_integer(2.into())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
    }
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Expand { common, surd, chooser, depth } => {
            let ring = parse_ring(&common.ring)?;
            let spec = parse_surd(ring, &surd)?;
            let ch = parse_chooser(ring, &chooser)?;
            let e = expand_with_prec(&spec, &ch, depth, common.prec.max(64))?;
            let doc = ExpansionDoc::from_expansion(&e, &ch.describe());
            emit(&common.out, &doc.to_json())
        }
        Cmd::Cycle { common, surd, chooser, depth } => {
            let ring = parse_ring(&common.ring)?;
            let spec = parse_surd(ring, &surd)?;
            let ch = parse_chooser(ring, &chooser)?;
            let report = detect_cycle(&spec, &ch, depth)?;
            let doc = CycleDoc::new(
                ring,
                spec.coeffs(),
                spec.branch(),
                &ch.describe(),
                depth,
                &report,
            );
            emit(&common.out, &doc.to_json())
        }
        Cmd::Orbit { common, surd, form, form_denom, depth, neat_r } => {
            let ring = parse_ring(&common.ring)?;
            let spec = parse_surd(ring, &surd)?;
            let x = parse_form(ring, &form, form_denom)?;
            let e = expand_with_prec(&spec, &Chooser::NearestInteger, depth, common.prec.max(64))?;
            let r = match neat_r {
                Some(s) => parse_rational(&s)?,
                None => default_neat_r(ring),
            };
            let neat = neat_indices(&e, &r);
            let rep = orbit(&x, &e, &neat)?;
            let doc = OrbitDoc::from_report(&x, &rep, ring);
            emit(&common.out, &doc.to_json())
        }
        Cmd::Circle { common, center, r2 } => {
            let ring = parse_ring(&common.ring)?;
            let c = KElt::parse(ring, &center)?;
            let r = parse_rational(&r2)?;
            let spec = CircleSpec::new(c, r)?;
            let verdict = classify_circle(ring, &spec)?;
            let doc = CircleDoc::new(ring, &spec, &verdict);
            emit(&common.out, &doc.to_json())
        }
        Cmd::Probe { common, surd, chooser, depth, format } => {
            let ring = parse_ring(&common.ring)?;
            let spec = parse_surd(ring, &surd)?;
            let ch = parse_chooser(ring, &chooser)?;
            let e = expand_with_prec(&spec, &ch, depth, common.prec.max(64))?;
            match format.as_str() {
                "csv" => emit(&common.out, &probe_csv(&e)),
                "json" => {
                    let doc = ExpansionDoc::from_expansion(&e, &ch.describe());
                    emit(&common.out, &doc.to_json())
                }
                other => Err(Error::InvalidInput(format!("unknown format '{other}'"))),
            }
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ChooserFailed { .. } => 2,
        Error::PrecisionCapExceeded(_) => 3,
        Error::InvalidInput(_)
        | Error::ReducibleOverK
        | Error::AmbiguousSelector
        | Error::SelectorMissesRoots => 64,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
