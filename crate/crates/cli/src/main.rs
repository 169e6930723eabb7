use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcstar::bidiff::Weights;
use gcstar::gc::{classical_hamiltonian, derive_hamiltonian, landau_levels, JPolynomial};
use gcstar::numeric::{compare_symbolic_numeric, monomial_pairs, CompareOptions, FieldModel};
use gcstar::text::{parse_series, render, to_json, RenderStyle};
use gcstar::{poisson, Error, GradedSeries, StarProduct, Truncation};

#[derive(Parser)]
#[command(
    name = "gcstar",
    version,
    about = "Gauge-invariant star products and guiding-center Hamiltonians"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Copy)]
struct Window {
    #[arg(long, default_value_t = 2)]
    max_hbar: u32,
    #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
    min_eps: i32,
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    max_eps: i32,
}

impl Window {
    fn truncation(self) -> Truncation {
        Truncation::new(self.max_hbar, self.min_eps, self.max_eps)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BracketKind {
    Moyal,
    Poisson,
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two symbols.
    Star {
        a: String,
        b: String,
        #[command(flatten)]
        window: Window,
    },
    /// Moyal or Poisson bracket of two symbols.
    Bracket {
        #[arg(long = "type", value_enum)]
        kind: BracketKind,
        a: String,
        b: String,
        #[command(flatten)]
        window: Window,
    },
    /// Guiding-center reduction.
    #[command(subcommand)]
    Derive(Derive),
    /// Built-in verification suites.
    #[command(subcommand)]
    Verify(Verify),
    /// Compare symbolic and numeric star products on a field model.
    Oracle {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum Derive {
    /// Weyl symbol of the Hamiltonian as a polynomial in J.
    Hamiltonian {
        /// Use the spin coupling -mu_z B as the potential.
        #[arg(long)]
        spin: bool,
    },
    /// The classical part of the Hamiltonian.
    Classical,
    /// Energy of the n-th level without electric field.
    Levels {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Run the full verification battery.
    Appendix {
        /// Flip the sign of the weight W(n,k).
        #[arg(long, hide = true, value_parser = parse_pair)]
        mutate_weight: Option<(u32, u32)>,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (n, k) = s.split_once(',').ok_or("expected n,k")?;
    Ok((
        n.trim().parse().map_err(|e| format!("{e}"))?,
        k.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

/// Outcome of a command: text for stdout and whether it verified.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn series_out(s: &GradedSeries, format: Format) -> String {
    match format {
        Format::Text => render(s, RenderStyle::Canonical),
        Format::Json => to_json(s),
    }
}

fn j_out(h: &JPolynomial, format: Format) -> String {
    match format {
        Format::Text => h.render(RenderStyle::Canonical),
        Format::Json => serde_json::to_string_pretty(&h.to_structured()).expect("serializable"),
    }
}

fn run(cli: Cli) -> Result<Output, Error> {
    let f = cli.format;
    match cli.command {
        Command::Star { a, b, window } => {
            let t = window.truncation();
            let engine = StarProduct::new(t)?;
            Ok(Output::ok(series_out(
                &engine.star(&parse_series(&a, t)?, &parse_series(&b, t)?)?,
                f,
            )))
        }
        Command::Bracket { kind, a, b, window } => {
            let t = window.truncation();
            let (a, b) = (parse_series(&a, t)?, parse_series(&b, t)?);
            let r = match kind {
                BracketKind::Moyal => StarProduct::new(t)?.moyal(&a, &b)?,
                BracketKind::Poisson => poisson(&a, &b)?,
            };
            Ok(Output::ok(series_out(&r, f)))
        }
        Command::Derive(Derive::Hamiltonian { spin }) => {
            Ok(Output::ok(j_out(&derive_hamiltonian(spin)?, f)))
        }
        Command::Derive(Derive::Classical) => Ok(Output::ok(j_out(&classical_hamiltonian()?, f))),
        Command::Derive(Derive::Levels { n }) => Ok(Output::ok(series_out(&landau_levels(n)?, f))),
        Command::Verify(Verify::Appendix { mutate_weight }) => {
            let weights =
                mutate_weight.map_or(Weights::standard(), |(n, k)| Weights::with_flip(n, k));
            let checks = gcstar::verify::run_all(&weights)?;
            let ok = checks.iter().all(|c| c.passed);
            let text = match f {
                Format::Json => serde_json::to_string_pretty(&checks).expect("serializable"),
                Format::Text => {
                    let mut lines = Vec::new();
                    for c in &checks {
                        lines.push(format!(
                            "{} {}",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name
                        ));
                        lines.extend(c.detail.iter().map(|d| format!("    {d}")));
                    }
                    lines.join("\n")
                }
            };
            Ok(Output { text, ok })
        }
        Command::Oracle {
            model,
            points,
            seed,
            tol,
        } => {
            let src = std::fs::read_to_string(&model)
                .map_err(|e| Error::Model(format!("cannot read {}: {e}", model.display())))?;
            let m = FieldModel::parse(&src)?;
            let opts = CompareOptions {
                points,
                seed,
                tol,
                ..CompareOptions::default()
            };
            let pairs = monomial_pairs(3, opts.trunc)?;
            let r = compare_symbolic_numeric(&pairs, &m, &opts)?;
            let text = match f {
                Format::Json => serde_json::to_string_pretty(&r).expect("serializable"),
                Format::Text => format!(
                    "{} max discrepancy {:.3e} over {} pairs x {} points (seed {}, tol {:e})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.max_discrepancy,
                    r.pairs,
                    r.points,
                    r.seed,
                    r.tol
                ),
            };
            Ok(Output { text, ok: r.passed })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::EpsUnderflow { .. } => 3,
        Error::Parse { .. }
        | Error::ChartMixing { .. }
        | Error::NegativePower { .. }
        | Error::Model(_)
        | Error::Domain(_)
        | Error::DomainViolation(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
