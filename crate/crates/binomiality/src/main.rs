//! Command-line front door: parse inputs, dispatch to the detector, the
//! simplification pipeline, the reaction-network frontend, or the Gröbner
//! oracle, and render text or JSON reports.
//!
//! Exit codes: 0 = binomial / yes, 1 = not binomial / proven no,
//! 2 = inconclusive, 3 = usage, input, or guard errors.
//!
//! The `BINOMIALITY_ORDER` environment variable sets the default monomial
//! order; an `--order` flag beats the environment, and an `order:` header in
//! the input file beats both.

use std::path::PathBuf;
use std::process::ExitCode;

use binomiality::certificate::Certificate;
use binomiality::crn::parse_network;
use binomiality::detect::{detect_binomial_homogeneous, DetectionResult, Verdict, Witness};
use binomiality::groebner::{buchberger_certified, GbGuard};
use binomiality::report::{
    certificate_file_from_json, certificate_file_to_json, detection_to_json,
    parse_system_with_default_order, pipeline_to_json, system_to_text, verdict_name,
};
use binomiality::simplify::{run_recipe, PipelineReport, PipelineVerdict, RecipeOptions};
use binomiality::{Context, MonomialOrder, PolySystem};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_NOT_BINOMIAL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "binomiality",
    about = "Decide binomiality of polynomial ideals with exact linear algebra",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Grevlex,
    Grlex,
    Lex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Grevlex => MonomialOrder::Grevlex,
            OrderArg::Grlex => MonomialOrder::Grlex,
            OrderArg::Lex => MonomialOrder::Lex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CommonInput {
    /// System file: `vars:` header, optional `params:`/`order:` headers, one
    /// generator per line.
    input: PathBuf,
    /// Monomial order when the input file does not pin one.
    #[arg(long)]
    order: Option<OrderArg>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide binomiality of a homogeneous system degree by degree.
    Detect(CommonInput),
    /// Run the full heuristic pipeline on any system.
    Recipe {
        #[command(flatten)]
        common: CommonInput,
        /// Maximum substitution-search depth.
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        /// Branching factor of the substitution search.
        #[arg(long, default_value_t = 16)]
        branch: usize,
        /// Total node budget of the substitution search.
        #[arg(long, default_value_t = 1500)]
        node_budget: usize,
        /// Consult the Gröbner oracle when everything else is inconclusive.
        #[arg(long)]
        enable_gb_oracle: bool,
        /// Retry the exact detector on the homogenized system.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        homogenize_retry: bool,
        /// Write the equivalence certificate to this JSON file.
        #[arg(long)]
        emit_certificates: Option<PathBuf>,
    },
    /// Convert a mass-action reaction network to its steady-state system.
    Crn {
        /// Network file: one reaction per line, e.g. `A + 2 B -> C ; k1`.
        input: PathBuf,
        /// Write the system file here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compute a reduced Gröbner basis (slow reference oracle, size-guarded).
    OracleGb {
        #[command(flatten)]
        common: CommonInput,
        /// Override the instance-size guard.
        #[arg(long)]
        i_know_this_is_slow: bool,
    },
    /// Replay an equivalence certificate file; exit 0 iff all identities hold.
    Certify {
        /// Certificate JSON file as written by `recipe --emit-certificates`.
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version are not usage errors.
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Detect(common) => {
            let sys = load_system(&common)?;
            let r = detect_binomial_homogeneous(&sys).map_err(|e| e.to_string())?;
            match common.format {
                Format::Json => println!("{}", detection_to_json(&r, &sys)),
                Format::Text => print_detection(&r, &sys),
            }
            Ok(match r.verdict {
                Verdict::Yes => 0,
                Verdict::No => EXIT_NOT_BINOMIAL,
            })
        }
        Cmd::Recipe {
            common,
            max_depth,
            branch,
            node_budget,
            enable_gb_oracle,
            homogenize_retry,
            emit_certificates,
        } => {
            let sys = load_system(&common)?;
            let opts = RecipeOptions {
                max_depth,
                branch,
                node_budget,
                enable_gb_oracle,
                homogenize_retry,
                ..RecipeOptions::default()
            };
            let r = run_recipe(&sys, &opts);
            if let Some(path) = emit_certificates {
                let cert = r
                    .certificate
                    .as_ref()
                    .ok_or("this verdict carries no certificate to emit")?;
                write_certificate_file(&path, &sys, &r.system, cert)?;
            }
            match common.format {
                Format::Json => println!("{}", pipeline_to_json(&r)),
                Format::Text => print_pipeline(&r),
            }
            Ok(match r.verdict {
                PipelineVerdict::Binomial => 0,
                PipelineVerdict::NotBinomialProven => EXIT_NOT_BINOMIAL,
                PipelineVerdict::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Cmd::Crn { input, output } => {
            let src = read_file(&input)?;
            let net = parse_network(&src).map_err(|e| e.to_string())?;
            let sys = net.steady_state_system();
            let mut out = String::new();
            for (species, var) in net.species_map() {
                out.push_str(&format!("# {species} -> {var}\n"));
            }
            out.push_str(&sys.to_text());
            match output {
                Some(path) => std::fs::write(&path, out)
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{out}"),
            }
            Ok(0)
        }
        Cmd::OracleGb {
            common,
            i_know_this_is_slow,
        } => {
            let sys = load_system(&common)?;
            let guard = if i_know_this_is_slow {
                GbGuard::disabled()
            } else {
                GbGuard::default()
            };
            let (gb, cert) = buchberger_certified(&sys, sys.ctx.order, &guard)
                .map_err(|e| e.to_string())?;
            let binomial = gb.is_binomial();
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "order": sys.ctx.order.name(),
                        "basis": gb.elements.iter()
                            .map(|g| g.to_text(&sys.ctx)).collect::<Vec<_>>(),
                        "binomial": binomial,
                        "certificate": cert.to_json(&sys.ctx),
                    })
                ),
                Format::Text => {
                    println!("reduced basis ({} order):", sys.ctx.order.name());
                    for g in &gb.elements {
                        println!("  {}", g.to_text(&sys.ctx));
                    }
                    println!("binomial: {binomial}");
                }
            }
            Ok(if binomial { 0 } else { EXIT_NOT_BINOMIAL })
        }
        Cmd::Certify { input } => {
            let src = read_file(&input)?;
            let v: serde_json::Value =
                serde_json::from_str(&src).map_err(|e| format!("{}: {e}", input.display()))?;
            let (sys, derived, cert) = certificate_file_from_json(&v)?;
            if cert.verify(&sys.gens, &derived) {
                println!(
                    "certificate verified: {} original and {} derived generators",
                    sys.gens.len(),
                    derived.len()
                );
                Ok(0)
            } else {
                println!("certificate INVALID: some identity fails to replay");
                Ok(EXIT_NOT_BINOMIAL)
            }
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_system(common: &CommonInput) -> Result<PolySystem, String> {
    let src = read_file(&common.input)?;
    let default = match (&common.order, std::env::var("BINOMIALITY_ORDER")) {
        (Some(o), _) => Some(MonomialOrder::from(*o)),
        (None, Ok(name)) => Some(
            MonomialOrder::parse(&name)
                .ok_or_else(|| format!("BINOMIALITY_ORDER: unknown order {name:?}"))?,
        ),
        (None, Err(_)) => None,
    };
    parse_system_with_default_order(&src, default)
        .map_err(|e| format!("{}: {e}", common.input.display()))
}

fn write_certificate_file(
    path: &PathBuf,
    originals: &PolySystem,
    derived: &PolySystem,
    cert: &Certificate,
) -> Result<(), String> {
    let v = certificate_file_to_json(originals, &derived.gens, cert);
    std::fs::write(path, format!("{v:#}\n")).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_witness(w: &Witness, ctx: &Context) {
    println!("witness (degree {}):", w.degree);
    let row: Vec<String> = w
        .row
        .iter()
        .map(|(m, c)| format!("{}·{}", c.to_text(&ctx.params), m.to_text(&ctx.vars)))
        .collect();
    println!("  row over class representatives: {}", row.join(" + "));
    println!("  lifted polynomial: {}", w.polynomial.to_text(ctx));
    println!("  it lies in the input ideal as:");
    for (i, p) in &w.membership.terms {
        println!("    ({}) · generator #{}", p.to_text(ctx), i + 1);
    }
}

fn print_detection(r: &DetectionResult, sys: &PolySystem) {
    let ctx = &sys.ctx;
    for log in &r.trace {
        let absorbed: Vec<String> = log
            .absorbed
            .iter()
            .map(|i| format!("f{}", i + 1))
            .collect();
        println!(
            "degree {}: |Fmin| = {}, rank = {}, binomials found = {}{}",
            log.degree,
            log.fmin_size,
            log.rank,
            log.binomials_found,
            if absorbed.is_empty() {
                String::new()
            } else {
                format!(", absorbed: {}", absorbed.join(" "))
            }
        );
    }
    match r.verdict {
        Verdict::Yes => {
            println!("verdict: yes — the ideal is binomial");
            println!("B = {{");
            for b in &r.binomials {
                println!("  {}", b.to_text(ctx));
            }
            println!("}}");
        }
        Verdict::No => {
            println!("verdict: no — the ideal is not binomial");
            if let Some(w) = &r.witness {
                print_witness(w, ctx);
            }
        }
    }
}

fn print_pipeline(r: &PipelineReport) {
    for s in &r.stages {
        println!("{}: {}", s.stage, s.outcome);
    }
    println!("verdict: {}", verdict_name(r.verdict));
    println!("final generators:");
    for g in &r.system.gens {
        println!(
            "  [{}] {}",
            if g.is_binomial() { "binomial" } else { "general " },
            g.to_text(&r.system.ctx)
        );
    }
    if let Some(w) = &r.witness {
        print_witness(w, &r.system.ctx);
    }
    // The system alone is reparseable output for downstream runs.
    print!("{}", system_to_text(&r.system));
}
