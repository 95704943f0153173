use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freeconv::catalan::{catalan_iso, named_bijection, bijection_families, enumerate_family, Family, FamilyId, Payload};
use freeconv::freeprob::{
    cumulants_from_moments, moments_from_cumulants, product_cumulants_oracle, search_reverse_implication,
};
use freeconv::partitions::{enumerate_ncp, kreweras, Partition};
use freeconv::report::series_witness;
use freeconv::transforms::{boxconv, s_prime, s_transform, u_transform, BoxVariant};
use freeconv::trees::{enumerate_trees, rmap};
use freeconv::verify::{run_suite, Suite};
use freeconv::{Error, TruncSeries};

#[derive(Parser)]
#[command(name = "freeconv", version, about = "Catalan combinatorics and operator-valued boxed convolutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Trees,
    Ncp,
    Pt,
    Rst,
    Lst,
    Ndpf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Transforms,
    Freeprob,
    Bijections,
    Operad,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// List a Catalan family at one size.
    Enumerate {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Apply a named bijection or the isomorphism between two families.
    Map {
        #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present = "from")]
        name: Option<String>,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
        #[arg(long)]
        input: String,
    },
    /// The size-doubling map R on a binary tree.
    Rmap {
        #[arg(long)]
        input: String,
    },
    /// Kreweras complement of a noncrossing partition.
    Kreweras {
        #[arg(long)]
        input: String,
    },
    /// A boxed convolution of two series.
    Convolve {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// S-transform of a series in G^I.
    Stransform {
        #[arg(long)]
        f: PathBuf,
    },
    /// U-transform of a series in G^I.
    Utransform {
        #[arg(long)]
        f: PathBuf,
    },
    /// The transform S′ of a series in G^I.
    Sprime {
        #[arg(long)]
        f: PathBuf,
    },
    /// Free cumulants from a moment series.
    Cumulants {
        #[arg(long)]
        moments: PathBuf,
    },
    /// Moments from a free cumulant series.
    Moments {
        #[arg(long)]
        cumulants: PathBuf,
    },
    /// Cumulants of the product of two free elements.
    Product {
        #[arg(long)]
        ka: PathBuf,
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        order: usize,
        /// Also compute the tree-sum oracle and compare.
        #[arg(long)]
        check: bool,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, env = "FREECONV_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Search random free pairs with S_{ab} = S_b·S_a outside the known special cases.
    SearchReverse {
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, env = "FREECONV_SEED", default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read_series(path: &Path) -> Result<TruncSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(TruncSeries::parse(&text)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn ok(v: Value) -> Outcome {
    Ok((v.to_string(), true))
}

fn family_for(kind: Kind) -> FamilyId {
    FamilyId::new(match kind {
        Kind::Trees => Family::Y,
        Kind::Ncp => Family::Ncp1,
        Kind::Pt => Family::Pt1,
        Kind::Rst => Family::Rst1,
        Kind::Lst => Family::Lst1,
        Kind::Ndpf => Family::Ndpf,
    })
}

fn enumerate(kind: Kind, n: usize, format: Format) -> Outcome {
    let items: Vec<Payload> = match kind {
        Kind::Trees => enumerate_trees(n).into_iter().map(Payload::Tree).collect(),
        Kind::Ncp => enumerate_ncp(n).into_iter().map(Payload::Partition).collect(),
        other => enumerate_family(family_for(other), n),
    };
    let text = match format {
        Format::Count => items.len().to_string(),
        Format::Json => to_value(&items).to_string(),
        Format::Ascii => items
            .iter()
            .map(|x| match x {
                Payload::Partition(p) => p.render_ascii(),
                other => format!("{other}\n"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok((text, true))
}

fn map(name: Option<String>, from: Option<String>, to: Option<String>, input: &str) -> Outcome {
    let (src, dst) = match (name.as_deref(), from, to) {
        (Some(n), _, _) => bijection_families(n)?,
        (None, Some(a), Some(b)) => (a.parse::<FamilyId>()?, b.parse::<FamilyId>()?),
        _ => return Err(Failure::Usage("give --name, or both --from and --to".into())),
    };
    let x = Payload::parse(src.carrier(), input)?;
    let y = match name {
        Some(n) => named_bijection(&n, &x)?,
        None => catalan_iso(src, dst, &x)?,
    };
    ok(to_value(&y))
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Enumerate { kind, n, format } => enumerate(kind, n, format),
        Command::Map { name, from, to, input } => map(name, from, to, &input),
        Command::Rmap { input } => {
            let t = match Payload::parse(freeconv::catalan::Carrier::BinaryTrees, &input)? {
                Payload::Tree(t) => t,
                _ => unreachable!("parsed as a tree"),
            };
            ok(to_value(&rmap(&t)))
        }
        Command::Kreweras { input } => {
            let p: Partition = serde_json::from_str(&input).map_err(|e| Error::Parse(e.to_string()))?;
            ok(to_value(&kreweras(&p)?))
        }
        Command::Convolve { variant, f, g, order } => {
            let variant: BoxVariant = variant.parse()?;
            let (mut f, mut g) = (read_series(&f)?, read_series(&g)?);
            if let Some(n) = order {
                // one extra degree of g is consumed by the red-red variant
                f = f.truncate(n.min(f.order()));
                g = g.truncate((n + 1).min(g.order()));
            }
            let mut h = boxconv(variant, &f, &g)?;
            if let Some(n) = order {
                h = h.truncate(n.min(h.order()));
            }
            ok(h.to_json())
        }
        Command::Stransform { f } => ok(s_transform(&read_series(&f)?)?.to_json()),
        Command::Utransform { f } => ok(u_transform(&read_series(&f)?)?.to_json()),
        Command::Sprime { f } => ok(s_prime(&read_series(&f)?)?.to_json()),
        Command::Cumulants { moments } => ok(cumulants_from_moments(&read_series(&moments)?)?.to_json()),
        Command::Moments { cumulants } => ok(moments_from_cumulants(&read_series(&cumulants)?)?.to_json()),
        Command::Product { ka, kb, order, check } => {
            let (ka, kb) = (read_series(&ka)?, read_series(&kb)?);
            let n = order.min(ka.order()).min(kb.order());
            let (ka, kb) = (ka.truncate(n), kb.truncate(n));
            let kab = boxconv(BoxVariant::Box, &ka, &kb)?;
            if !check {
                return ok(kab.to_json());
            }
            let oracle = product_cumulants_oracle(&ka, &kb, n)?;
            let witness = series_witness("oracle vs ⊡", &oracle, &kab, n);
            let status = if witness.is_none() { "pass" } else { "fail" };
            let mut check = json!({"status": status, "order": n});
            if let Some(w) = witness {
                check["witness"] = json!(w);
            }
            let passed = status == "pass";
            Ok((json!({"kab": kab.to_json(), "check": check}).to_string(), passed))
        }
        Command::Verify { suite, order, dim, trials, seed } => {
            let suite = match suite {
                SuiteArg::Transforms => Suite::Transforms,
                SuiteArg::Freeprob => Suite::Freeprob,
                SuiteArg::Bijections => Suite::Bijections,
                SuiteArg::Operad => Suite::Operad,
                SuiteArg::All => Suite::All,
            };
            let rep = run_suite(suite, order, dim, trials, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((pretty(&rep.to_json()), rep.passed()))
        }
        Command::SearchReverse { order, dim, trials, seed } => {
            if order < 2 {
                return Err(Failure::Usage("order must be at least 2".into()));
            }
            let found = search_reverse_implication(order, dim, trials, seed)?;
            let pairs: Vec<Value> = found.iter().map(|(a, b)| json!({"ka": a.to_json(), "kb": b.to_json()})).collect();
            ok(json!({"order": order, "dim": dim, "trials": trials, "seed": seed, "found": pairs}))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok((text, passed)) => {
            println!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
