use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use staircase::bijection::{verify_bijection, BijectionTheorem};
use staircase::enumerator::{Enumerator, Trace};
use staircase::mesh::{contains_mesh, MeshPattern};
use staircase::perm::ClassOracle;
use staircase::sampler::Sampler;
use staircase::{Basis, Error, Permutation};

#[derive(Parser)]
#[command(name = "staircase", version, about = "Permutation classes through staircase encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Start coefficient lists at c_1.
    #[arg(long, global = true)]
    positive: bool,
    /// Treat the mesh conditions of the merged-core theorems as satisfied.
    #[arg(long, global = true)]
    assume_mesh_conditions: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the theorems that apply to a basis.
    Detect {
        #[arg(long)]
        basis: Basis,
    },
    /// Coefficients c_0..c_N of the generating function, with its derivation.
    Gf {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        terms: usize,
    },
    /// Brute-force counts up to a size.
    Count {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_size: usize,
    },
    /// Compare the generating function with brute-force counts.
    Verify {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_size: usize,
    },
    /// Check a structural bijection exhaustively.
    VerifyBijection {
        #[arg(long)]
        theorem: BijectionTheorem,
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_size: usize,
    },
    /// Uniform random members of a class.
    Sample {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Compare two classes term by term.
    Wilf {
        #[arg(long)]
        basis1: Basis,
        #[arg(long)]
        basis2: Basis,
        #[arg(long)]
        terms: usize,
    },
    /// Whether a permutation contains a mesh pattern.
    Mesh {
        #[arg(long = "perm")]
        sigma: Permutation,
        #[arg(long)]
        pattern: Permutation,
        /// Shaded boxes as "x,y;x,y", 0-based from the bottom left.
        #[arg(long, default_value = "")]
        shading: String,
    },
}

/// Output and whether the check it reports succeeded.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

#[derive(Serialize)]
struct GfOutput<'a> {
    basis: String,
    terms: usize,
    first_index: usize,
    coefficients: Vec<String>,
    trace: &'a Trace,
    oracle_backed: bool,
}

#[derive(Serialize)]
struct CountOutput {
    basis: String,
    max_size: usize,
    first_index: usize,
    counts: Vec<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    basis: String,
    max_size: usize,
    equal: bool,
    first_difference: Option<usize>,
    gf: Vec<String>,
    oracle: Vec<String>,
    oracle_backed: bool,
}

#[derive(Serialize)]
struct SampleOutput {
    basis: String,
    size: usize,
    seed: u64,
    samples: Vec<String>,
}

#[derive(Serialize)]
struct MeshOutput {
    perm: String,
    pattern: String,
    shading: String,
    contains: bool,
}

fn json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn strings<T: ToString>(v: &[T], from: usize) -> Vec<String> {
    v.iter().skip(from).map(T::to_string).collect()
}

fn render_trace(t: &Trace, depth: usize, out: &mut String) {
    let p = if t.p.is_empty() { "∅".to_string() } else { format!("{{{}}}", t.p.join(",")) };
    let _ = writeln!(out, "{}{} on {} (symmetry: {}, P={})", "  ".repeat(depth), t.theorem, t.basis, t.symmetry, p);
    for c in &t.children {
        render_trace(c, depth + 1, out);
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let opts = cli.opts;
    let enumerator =
        if opts.assume_mesh_conditions { Enumerator::new().assume_mesh_conditions() } else { Enumerator::new() };
    let first = usize::from(opts.positive);
    match cli.command {
        Command::Detect { basis } => {
            let matches = enumerator.detect(&basis);
            if opts.json {
                return Ok(Outcome::pass(json(&matches)));
            }
            if matches.is_empty() {
                return Ok(Outcome::pass("no theorem applies".into()));
            }
            Ok(Outcome::pass(matches.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n")))
        }
        Command::Gf { basis, terms } => {
            let (series, trace) = enumerator.class_gf(&basis, terms)?;
            let coefficients = strings(&series.to_integers()?, first);
            if opts.json {
                return Ok(Outcome::pass(json(&GfOutput {
                    basis: basis.to_string(),
                    terms,
                    first_index: first,
                    coefficients,
                    oracle_backed: trace.oracle_backed,
                    trace: &trace,
                })));
            }
            let mut text = coefficients.join(", ");
            text.push('\n');
            render_trace(&trace, 0, &mut text);
            let _ = write!(text, "oracle_backed: {}", trace.oracle_backed);
            Ok(Outcome::pass(text))
        }
        Command::Count { basis, max_size } => {
            let counts = strings(&ClassOracle::new(basis.clone()).counts(max_size), first);
            if opts.json {
                return Ok(Outcome::pass(json(&CountOutput { basis: basis.to_string(), max_size, first_index: first, counts })));
            }
            Ok(Outcome::pass(counts.join(", ")))
        }
        Command::Verify { basis, max_size } => {
            let (series, trace) = enumerator.class_gf(&basis, max_size)?;
            let gf = strings(&series.to_integers()?, 0);
            let oracle = strings(&ClassOracle::new(basis.clone()).counts(max_size), 0);
            let first_difference = gf.iter().zip(&oracle).position(|(a, b)| a != b);
            let equal = first_difference.is_none();
            let text = if opts.json {
                json(&VerifyOutput {
                    basis: basis.to_string(),
                    max_size,
                    equal,
                    first_difference,
                    gf: gf[first..].to_vec(),
                    oracle: oracle[first..].to_vec(),
                    oracle_backed: trace.oracle_backed,
                })
            } else {
                let verdict = match first_difference {
                    None => format!("equal up to x^{max_size}"),
                    Some(k) => format!("differ at x^{k}: {} vs {}", gf[k], oracle[k]),
                };
                let backed = if trace.oracle_backed { " (generating function is oracle-backed)" } else { "" };
                format!("gf:     {}\noracle: {}\n{verdict} via {}{backed}", gf[first..].join(", "), oracle[first..].join(", "), trace.theorem)
            };
            Ok(Outcome { text, ok: equal })
        }
        Command::VerifyBijection { theorem, basis, max_size } => {
            let report = verify_bijection(theorem, &basis, max_size)?;
            let text = if opts.json { json(&report) } else { report.to_string().trim_end().to_string() };
            Ok(Outcome { text, ok: report.pass })
        }
        Command::Sample { basis, size, count, seed } => {
            let samples = strings(&Sampler::new(&basis, size)?.sample_many(size, count, seed)?, 0);
            if opts.json {
                return Ok(Outcome::pass(json(&SampleOutput { basis: basis.to_string(), size, seed, samples })));
            }
            Ok(Outcome::pass(samples.join("\n")))
        }
        Command::Wilf { basis1, basis2, terms } => {
            let report = enumerator.wilf_check(&basis1, &basis2, terms)?;
            let text = if opts.json { json(&report) } else { report.to_string() };
            Ok(Outcome { text, ok: report.equal })
        }
        Command::Mesh { sigma, pattern, shading } => {
            let p = MeshPattern::parse(pattern.clone(), &shading)?;
            let contains = contains_mesh(&sigma, &p);
            if opts.json {
                return Ok(Outcome::pass(json(&MeshOutput {
                    perm: sigma.to_string(),
                    pattern: pattern.to_string(),
                    shading,
                    contains,
                })));
            }
            Ok(Outcome::pass(contains.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
