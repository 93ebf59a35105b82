//! `cochar`: posets of cocharacter pairs, Kottwitz sets, signed sums and
//! their verification sweeps from the command line.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cochar::groth::{evaluate_m, parse_rep};
use cochar::kottwitz::enumerate_b;
use cochar::mant_sum::{rel_set, MantContext};
use cochar::pair_poset::{down_set, hasse_dot, is_sd};
use cochar::rational::{fmt_q, fmt_qvec, parse_q};
use cochar::sweep::{self, group_instances, group_label, instances, Instance, Report, SweepClass};
use cochar::{build_root_datum, CocharacterPair, FormalRep, GroupSpec, IsocrystalClass, LeviSet, RootDatum, Q};
use serde_json::{json, Value};
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cochar", version, about = "Cocharacter pairs, Kottwitz sets and Mantovan sums for EL-type groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairs below (G, μ), or below (M_S, μ) with --levi, and their covers.
    Poset {
        #[command(flatten)]
        input: Input,
        /// Start from the pair at this Levi instead of G.
        #[arg(long)]
        levi: Option<String>,
    },
    /// The Kottwitz set B(G, μ).
    Bset {
        #[command(flatten)]
        input: Input,
    },
    /// The signed sum attached to each b, evaluated on --rep when given.
    Mant {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        select: Select,
        /// Representation: a JSON file, inline JSON or a fixture name such as `gl4:[111]`.
        #[arg(long)]
        rep: Option<String>,
    },
    /// The Rel set of a Levi inside each M_b containing it.
    Rel {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        select: Select,
        /// Simple-root indices of the Levi, comma separated (may be empty).
        #[arg(long, allow_hyphen_values = true)]
        levi: String,
    },
    /// Run a verification over a sweep of groups and cocharacters.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Input {
    /// Group: a JSON file, inline JSON, or a label such as `GL4`, `Res2GL3`, `GL2xGL3`.
    #[arg(long)]
    group: String,
    /// Cocharacter, comma separated integers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    mu: Vec<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Select {
    /// Restrict to the class with this Newton point, comma separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    /// Bound on the rank of the sweep.
    #[arg(long)]
    max_rank: Option<usize>,
    /// Restrict the sweep to one group.
    #[arg(long)]
    group: Option<String>,
    /// With --group, restrict to one cocharacter.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<i64>>,
    /// Random samples for the randomized targets.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Sum,
    Induction,
    Itrans,
    Sumrel,
    Question,
    #[value(name = "appendixB", alias = "relative-weyl")]
    RelativeWeyl,
    Transtwist,
    Kottwitz,
    Harris,
    Consistency,
}

enum Failure {
    Input(String),
    Verification,
}

impl From<cochar::Error> for Failure {
    fn from(e: cochar::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Poset { input, levi } => cmd_poset(&input, levi.as_deref()),
        Command::Bset { input } => cmd_bset(&input),
        Command::Mant { input, select, rep } => cmd_mant(&input, &select, rep.as_deref()),
        Command::Rel { input, select, levi } => cmd_rel(&input, &select, &levi),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_arg(text: &str) -> Result<String, Failure> {
    let path = Path::new(text);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{text}: {e}")))
    } else {
        Ok(text.to_string())
    }
}

fn load_group(text: &str) -> Result<GroupSpec, Failure> {
    let body = read_arg(text)?;
    let spec = if body.trim_start().starts_with('{') {
        GroupSpec::from_json(&body)?
    } else {
        GroupSpec::from_label(body.trim())?
    };
    spec.validate()?;
    Ok(spec)
}

/// The datum and the dominant representative of `--mu`.
fn load_input(input: &Input) -> Result<(GroupSpec, RootDatum, Vec<i64>), Failure> {
    let spec = load_group(&input.group)?;
    let rd = build_root_datum(&spec)?;
    rd.check_cocharacter(&input.mu)?;
    let mu = rd.dominant_rep(rd.delta(), &input.mu);
    Ok((spec, rd, mu))
}

fn parse_levi(rd: &RootDatum, text: &str) -> Result<LeviSet, Failure> {
    let mut idx = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        idx.push(part.parse::<usize>().map_err(|_| Failure::Input(format!("bad Levi index {part:?}")))?);
    }
    if idx.iter().any(|&i| i >= rd.num_roots()) {
        return Err(Failure::Input(format!("Levi indices must be below {}", rd.num_roots())));
    }
    let s = LeviSet::from_indices(idx);
    rd.check_levi(s)?;
    if !rd.is_gamma_stable(s) {
        return Err(Failure::Input(format!("{s} is not Galois-stable")));
    }
    Ok(s)
}

fn parse_newton(rd: &RootDatum, text: &str) -> Result<Vec<Q>, Failure> {
    let nu = text.split(',').map(|p| parse_q(p.trim())).collect::<cochar::Result<Vec<Q>>>()?;
    if nu.len() != rd.rank() {
        return Err(Failure::Input(format!("--b has {} entries, expected {}", nu.len(), rd.rank())));
    }
    Ok(nu)
}

fn selected(rd: &RootDatum, classes: Vec<IsocrystalClass>, select: &Select) -> Result<Vec<IsocrystalClass>, Failure> {
    match &select.b {
        None => Ok(classes),
        Some(text) => {
            let nu = parse_newton(rd, text)?;
            Ok(classes.into_iter().filter(|b| b.newton == nu).collect())
        }
    }
}

fn no_dot(format: Format) -> Outcome {
    if format == Format::Dot {
        return Err(Failure::Input("dot output is only available for poset".into()));
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn class_json(rd: &RootDatum, b: &IsocrystalClass) -> Value {
    json!({
        "newton": b.newton.iter().map(fmt_q).collect::<Vec<_>>(),
        "kappa": b.kappa,
        "levi": b.levi,
        "basic": b.is_basic(rd),
    })
}

fn pair_json(rd: &RootDatum, p: &CocharacterPair) -> Value {
    json!({
        "levi": p.levi,
        "mu": p.mu,
        "label": p.label(rd),
        "theta": p.theta(rd).iter().map(fmt_q).collect::<Vec<_>>(),
    })
}

fn cmd_poset(input: &Input, levi: Option<&str>) -> Outcome {
    let (_, rd, mu) = load_input(input)?;
    let top = match levi {
        None => CocharacterPair::top(&rd, &mu),
        Some(text) => {
            let s = parse_levi(&rd, text)?;
            let p = CocharacterPair::new(s, rd.dominant_rep(s, &input.mu));
            p.validate(&rd)?;
            p
        }
    };
    let poset = down_set(&rd, &top);
    match input.format {
        Format::Dot => print!("{}", hasse_dot(&rd, &poset)),
        Format::Json => {
            let nodes: Vec<Value> = poset
                .nodes
                .iter()
                .map(|p| {
                    let mut v = pair_json(&rd, p);
                    v["strictly_decreasing"] = json!(is_sd(&rd, p));
                    v
                })
                .collect();
            let edges: Vec<Value> = poset.edges.iter().map(|&(lo, hi)| json!({"upper": hi, "lower": lo})).collect();
            print_json(&json!({"nodes": nodes, "edges": edges}));
        }
        Format::Text => {
            println!("{} pairs, {} covers", poset.nodes.len(), poset.edges.len());
            for p in &poset.nodes {
                let mark = if is_sd(&rd, p) { "  [SD]" } else { "" };
                println!("  {}  theta={}{mark}", p.label(&rd), fmt_qvec(&p.theta(&rd)));
            }
            let mut edges = poset.edges.clone();
            edges.sort_by_key(|&(lo, hi)| (hi, lo));
            for (lo, hi) in edges {
                println!("  {} > {}", poset.nodes[hi].label(&rd), poset.nodes[lo].label(&rd));
            }
        }
    }
    Ok(())
}

fn cmd_bset(input: &Input) -> Outcome {
    no_dot(input.format)?;
    let (_, rd, mu) = load_input(input)?;
    let classes = enumerate_b(&rd, &mu)?;
    match input.format {
        Format::Json => print_json(&Value::Array(classes.iter().map(|b| class_json(&rd, b)).collect())),
        _ => {
            println!("{} classes", classes.len());
            for b in &classes {
                let mark = if b.is_basic(&rd) { "  basic" } else { "" };
                println!("  nu={} kappa={:?} levi={}{mark}", fmt_qvec(&b.newton), b.kappa, b.levi);
            }
        }
    }
    Ok(())
}

fn cmd_mant(input: &Input, select: &Select, rep: Option<&str>) -> Outcome {
    no_dot(input.format)?;
    let (_, rd, mu) = load_input(input)?;
    let rep: Option<FormalRep> = match rep {
        Some(text) => Some(parse_rep(&rd, &read_arg(text)?)?),
        None => None,
    };
    let ctx = MantContext::new(&rd, &mu)?;
    let classes = selected(&rd, ctx.classes.clone(), select)?;
    let mut rows = Vec::new();
    for b in &classes {
        let sum = ctx.m_sum(b);
        let value = match &rep {
            Some(r) => Some(evaluate_m(&rd, b, &mu, r)?),
            None => None,
        };
        rows.push((b, sum, value));
    }
    match input.format {
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|(b, sum, value)| {
                    let mut v = json!({"b": class_json(&rd, b), "sum": sum});
                    if let Some(value) = value {
                        v["value"] = serde_json::to_value(value).expect("json");
                    }
                    v
                })
                .collect();
            print_json(&Value::Array(out));
        }
        _ => {
            for (b, sum, value) in &rows {
                println!("b: nu={} kappa={:?}", fmt_qvec(&b.newton), b.kappa);
                println!("  M = {}", sum.render(&rd));
                if let Some(value) = value {
                    for line in value.render(&rd).lines() {
                        println!("  {line}");
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_rel(input: &Input, select: &Select, levi: &str) -> Outcome {
    no_dot(input.format)?;
    let (_, rd, mu) = load_input(input)?;
    let s = parse_levi(&rd, levi)?;
    let classes = selected(&rd, enumerate_b(&rd, &mu)?, select)?;
    let mut rows = Vec::new();
    for b in classes.into_iter().filter(|b| s.is_subset(b.levi)) {
        let pairs = rel_set(&rd, s, &b, &mu)?;
        rows.push((b, pairs));
    }
    match input.format {
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|(b, pairs)| {
                    json!({"b": class_json(&rd, b), "pairs": pairs.iter().map(|p| pair_json(&rd, p)).collect::<Vec<_>>()})
                })
                .collect();
            print_json(&Value::Array(out));
        }
        _ => {
            for (b, pairs) in &rows {
                println!("b: nu={} kappa={:?} ({} pairs)", fmt_qvec(&b.newton), b.kappa, pairs.len());
                for p in pairs {
                    println!("  {}", p.label(&rd));
                }
            }
        }
    }
    Ok(())
}

fn sweep_items(args: &VerifyArgs, default_rank: usize) -> Result<Vec<Instance>, Failure> {
    let max_rank = args.max_rank.unwrap_or(default_rank);
    match (&args.group, &args.mu) {
        (None, Some(_)) => Err(Failure::Input("--mu needs --group".into())),
        (None, None) => Ok(instances(SweepClass::full(max_rank))),
        (Some(g), None) => Ok(group_instances(&load_group(g)?)?),
        (Some(g), Some(mu)) => {
            let spec = load_group(g)?;
            let rd = build_root_datum(&spec)?;
            rd.check_cocharacter(mu)?;
            let mu = rd.dominant_rep(rd.delta(), mu);
            Ok(vec![Instance { group: group_label(&spec), rd, mu }])
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    no_dot(args.format)?;
    let reports: Vec<Report> = match args.target {
        Target::Sum => vec![sweep::verify_sum(&sweep_items(args, 6)?)],
        Target::Induction => vec![sweep::verify_induction(&sweep_items(args, 6)?)],
        Target::Itrans => vec![sweep::verify_itrans(&sweep_items(args, 6)?)],
        Target::Sumrel => vec![sweep::verify_sumrel(&sweep_items(args, 6)?)],
        Target::Question => vec![sweep::verify_question(&sweep_items(args, 6)?)],
        Target::Transtwist => vec![sweep::verify_transtwist(&sweep_items(args, 6)?)],
        Target::Kottwitz => vec![sweep::verify_kottwitz(&sweep_items(args, 6)?)],
        Target::Harris => vec![sweep::verify_harris(&sweep_items(args, 5)?)],
        Target::Consistency => {
            if args.group.is_some() {
                return Err(Failure::Input("consistency samples GL_n; --group is not used".into()));
            }
            vec![sweep::verify_consistency(args.samples, args.max_rank.unwrap_or(4), args.seed)]
        }
        Target::RelativeWeyl => match &args.group {
            Some(g) => vec![sweep::verify_relative_weyl(&load_group(g)?, args.samples, args.seed)],
            None => {
                let top = args.max_rank.unwrap_or(4).min(4);
                let mut out = Vec::new();
                for d in 2..=3 {
                    for n in 1..=top {
                        out.push(sweep::verify_relative_weyl(&GroupSpec::res(d, n), args.samples, args.seed));
                    }
                }
                out
            }
        },
    };
    match args.format {
        Format::Json => {
            let out: Vec<Value> = reports
                .iter()
                .map(|r| json!({"name": r.name, "cases": r.cases, "passed": r.passed(), "failures": r.failures}))
                .collect();
            print_json(&Value::Array(out));
        }
        _ => {
            for r in &reports {
                print!("{r}");
            }
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
