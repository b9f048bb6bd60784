use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exceptional::helix::{mutate_pair, PairMutation};
use exceptional::p2::{certified_delta, epsilon_p2_inverse, slope_data, stability_p2, Stability};
use exceptional::rational::{self, Rational};
use exceptional::{
    apply_move, audit_table, build_tree, delta_of_mu, epsilon_p2, euler_chi, euler_pair, generate_table, left_mutation,
    name_or_ch, parse_bundle, perp, right_mutation, run_verification, ChernCharacter, DyadicRational, Epsilon, Error,
    Foundation, MutationMove, TableFormat, ThreeAdicRational,
};
use serde_json::json;

const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "exceptional", version, about = "Exact invariants of constructive exceptional bundles on P3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFmt {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFmt {
    Dot,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full record of the bundle ε(t) for a 3-adic index such as 1/9 or 4/3^2
    Eval {
        #[arg(allow_hyphen_values = true)]
        index: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Catalog of every index in (0, 1) up to an order
    Table {
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFmt,
    },
    /// The tree of admissible mutations to a depth
    Tree {
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, value_enum, default_value = "dot")]
        format: TreeFmt,
    },
    /// Run the verification suite; exits 1 if any check fails
    Verify {
        #[arg(long, default_value_t = 6)]
        max_order: u32,
        #[arg(long, default_value_t = 4)]
        tree_depth: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// χ(A) or the Euler pairing χ(A, B); bundles are Chern characters like
    /// "(1,0,0,0)" or names like O(2), T(-1), E[2/9]
    Chi {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// The exceptional character orthogonal to three bundles
    Perp {
        #[arg(allow_hyphen_values = true)]
        e: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// Mutate a pair (`left E F`, `right E F`) or apply a move R0..L2 to a
    /// foundation given as four bundles (default (O(-1), O, O(1), O(2)))
    Mutate {
        kind: String,
        #[arg(allow_hyphen_values = true)]
        bundles: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The two standard resolutions of ε(t)
    Resolve {
        #[arg(allow_hyphen_values = true)]
        index: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Indices of the foundation neighbours of ε(t)
    Parents {
        index: String,
    },
    /// Compare every row of the printed table with the computation; exits 1
    /// on discrepancies outside the documented misprints
    Audit {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exceptional slopes and stability on P2
    P2 {
        #[command(subcommand)]
        command: P2Command,
    },
}

#[derive(Subcommand)]
enum P2Command {
    /// The exceptional slope ε(t) for a dyadic t
    Eval {
        #[arg(allow_hyphen_values = true)]
        index: String,
    },
    /// δ(μ), with the first cutoff at which it is certified
    Delta {
        #[arg(allow_hyphen_values = true)]
        mu: String,
        /// Highest dyadic order of exceptional slopes to enumerate; the cost
        /// roughly triples per step
        #[arg(long, default_value_t = 8)]
        max_cutoff: u32,
    },
    /// Whether (r, μ, Δ) is the character of a stable bundle
    Stable {
        r: String,
        #[arg(allow_hyphen_values = true)]
        mu: String,
        #[arg(allow_hyphen_values = true)]
        delta: String,
        /// Dyadic order of exceptional slopes to enumerate
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
    },
}

/// A failure to report: runtime errors exit 2, failed checks exit 1,
/// arguments that parse but do not fit the command exit 64.
enum Failure {
    Runtime(Error),
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type Out = Result<String, Failure>;

fn index(s: &str) -> Result<ThreeAdicRational, Error> {
    s.parse()
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn foundation_names(f: &Foundation, eps: &Epsilon) -> String {
    let names: Vec<_> = f.bundles().iter().map(|b| name_or_ch(b, eps)).collect();
    format!("({})", names.join(", "))
}

fn run(cli: Cli) -> Out {
    let eps = Epsilon::global();
    match cli.command {
        Command::Eval { index: t, format } => {
            let rec = eps.record(index(&t)?)?;
            Ok(match format {
                Format::Json => pretty(&rec),
                Format::Text => format!(
                    "ε({}) = {}\norder {}, rank {}, slope {}, χ = {}\nc = ({}, {}, {})\nfoundation {} (mark {})\nconjectured cohomology: h{} = {}\n",
                    rec.index,
                    rec.ch,
                    rec.order,
                    rec.rank,
                    rational::format(&rec.slope),
                    rec.chi,
                    rec.c.c1,
                    rec.c.c2,
                    rec.c.c3,
                    foundation_names(&rec.foundation, eps),
                    rec.mark,
                    rec.wbn.i,
                    rec.wbn.h
                ),
            })
        }
        Command::Table { max_order, format } => {
            let f = match format {
                TableFmt::Json => TableFormat::Json,
                TableFmt::Csv => TableFormat::Csv,
                TableFmt::Md => TableFormat::Md,
            };
            Ok(generate_table(max_order, f, eps)?)
        }
        Command::Tree { depth, format } => {
            let tree = build_tree(depth)?;
            Ok(match format {
                TreeFmt::Dot => tree.to_dot(),
                TreeFmt::Json => tree.to_json() + "\n",
                TreeFmt::Text => {
                    let mut out = String::new();
                    let mut stack = vec![0usize];
                    while let Some(i) = stack.pop() {
                        let v = &tree.vertices[i];
                        let indent = "  ".repeat(v.depth as usize);
                        match (v.index, v.incoming_move, v.new_slope()) {
                            (Some(t), Some(m), Some(s)) => out.push_str(&format!(
                                "{indent}{m} {t}  μ = {}  {}\n",
                                rational::format(&s),
                                foundation_names(&v.foundation, eps)
                            )),
                            _ => out.push_str(&format!("root {}\n", foundation_names(&v.foundation, eps))),
                        }
                        stack.extend(v.children.iter().rev());
                    }
                    out
                }
            })
        }
        Command::Verify { max_order, tree_depth, format } => {
            let report = run_verification(eps, max_order, tree_depth);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            if report.passed() {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Check)
            }
        }
        Command::Chi { a, b } => {
            let a = parse_bundle(&a, eps)?;
            let chi = match b {
                Some(b) => euler_pair(&a, &parse_bundle(&b, eps)?),
                None => euler_chi(&a),
            };
            Ok(format!("{}\n", rational::format(&chi)))
        }
        Command::Perp { e, g, h } => {
            let v = perp(&parse_bundle(&e, eps)?, &parse_bundle(&g, eps)?, &parse_bundle(&h, eps)?)?;
            Ok(format!("{v}  {}\n", name_or_ch(&v, eps)))
        }
        Command::Mutate { kind, bundles, format } => mutate(&kind, &bundles, format, eps),
        Command::Resolve { index: t, format } => {
            let rs = eps.standard_resolutions(index(&t)?)?;
            Ok(match format {
                Format::Json => pretty(&rs),
                Format::Text => rs
                    .iter()
                    .map(|r| {
                        format!(
                            "{} -> {}^{} -> {}\n",
                            name_or_ch(&r.sub, eps),
                            name_or_ch(&r.middle, eps),
                            r.multiplicity,
                            name_or_ch(&r.quotient, eps)
                        )
                    })
                    .collect(),
            })
        }
        Command::Parents { index: t } => {
            let (l, r) = eps.parents(index(&t)?)?;
            Ok(format!("{l} {r}\n"))
        }
        Command::Audit { format } => {
            let report = audit_table(eps);
            let text = match format {
                Format::Json => pretty(&report),
                Format::Text => report.to_text(),
            };
            if report.passed() {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Check)
            }
        }
        Command::P2 { command } => p2(command),
    }
}

fn mutate(kind: &str, bundles: &[String], format: Format, eps: &Epsilon) -> Out {
    let parsed = bundles.iter().map(|b| parse_bundle(b, eps)).collect::<Result<Vec<_>, _>>()?;
    let usage = |msg: &str| Failure::Usage(msg.into());
    let show = |v: &ChernCharacter| match format {
        Format::Json => pretty(v),
        Format::Text => format!("{v}  {}\n", name_or_ch(v, eps)),
    };
    match kind {
        "left" | "right" => {
            let [e, f] = parsed.as_slice() else {
                return Err(usage("a pair mutation takes two bundles"));
            };
            let v = if kind == "left" { left_mutation(e, f)? } else { right_mutation(e, f)? };
            Ok(show(&v))
        }
        _ => {
            let foundation = match parsed.len() {
                0 => Foundation::standard(),
                4 => Foundation::new(parsed.try_into().expect("four bundles"))?,
                _ => return Err(usage("a foundation has four bundles")),
            };
            let out = match kind.parse::<MutationMove>() {
                Ok(m) => apply_move(&foundation, m)?,
                Err(_) => {
                    let m: PairMutation = kind.parse()?;
                    mutate_pair(&foundation, m)?
                }
            };
            Ok(match format {
                Format::Json => pretty(&out),
                Format::Text => format!("{}\n{}\n", foundation_names(&out, eps), out),
            })
        }
    }
}

fn p2(command: P2Command) -> Out {
    match command {
        P2Command::Eval { index } => {
            let t: DyadicRational = index.parse()?;
            let alpha = epsilon_p2(t);
            Ok(pretty(&json!({ "index": t, "slope": slope_data(&alpha) })))
        }
        P2Command::Delta { mu, max_cutoff } => {
            let mu = rational::parse(&mu)?;
            match certified_delta(&mu, max_cutoff) {
                Some(r) => Ok(pretty(&r)),
                None => {
                    print!("{}", pretty(&delta_of_mu(&mu, max_cutoff)));
                    Err(Failure::Check)
                }
            }
        }
        P2Command::Stable { r, mu, delta, cutoff } => {
            let r = r.trim().parse().map_err(|_| Error::Parse(format!("rank {r:?} is not an integer")))?;
            let mu: Rational = rational::parse(&mu)?;
            let delta: Rational = rational::parse(&delta)?;
            let report = stability_p2(&r, &mu, &delta, cutoff)?;
            let exceptional_index = (report.verdict == Stability::Exceptional).then(|| epsilon_p2_inverse(&mu, cutoff)).flatten();
            Ok(pretty(&json!({ "verdict": report.verdict, "chi": rational::format(&report.chi), "exceptional_index": exceptional_index, "delta": report.delta })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
