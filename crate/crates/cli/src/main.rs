use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use chowglue::cherncalc::{infer_table, parse_bundle, total_class};
use chowglue::equilocal::{invariant_ideal_generators_check, invariant_subring_check, localized_integral, GroupAction, ProjectiveRep};
use chowglue::genus3::{builtin_resolver, run_pipeline, verify, ConstantSet, PipelineSpec, VerifyOptions, RELATIONS_TXT, STRATA_TXT};
use chowglue::gluecore::GlueOptions;
use chowglue::gradedring::PresentationJson;
use chowglue::idealengine::{ideal_equal_report, kernel, member, nzd_check, Ideal};
use chowglue::{Error, GradedPoly, RingMap, RingPresentation, VarTable};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::BadDenominator(_)
            | Error::UnknownVariable(_)
            | Error::TableMismatch
            | Error::Inhomogeneous(_)
            | Error::DegreeBound { .. }
            | Error::Json(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json: {e}"))
    }
}

type CliResult = Result<bool, CliError>;

#[derive(Parser)]
#[command(name = "chowglue", version, about = "Exact Chow ring computations by stratification gluing")]
struct Cli {
    /// Working degree bound for every bounded certificate.
    #[arg(long, global = true, env = "CHOWGLUE_MAX_DEGREE", default_value_t = 12)]
    max_degree: u32,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress the human-readable summary.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive every stratum, run the gluing pipeline and compare with the
    /// reference relations.
    Verify(VerifyArgs),
    /// Run a single stratum derivation and check it against the reference values.
    Derive {
        /// hyperelliptic, open, delta1, delta11 or delta111
        stratum: String,
        /// Reference stratum values (defaults to the shipped file)
        #[arg(long)]
        strata: Option<PathBuf>,
    },
    /// Run a gluing pipeline described by a JSON file.
    Glue {
        /// Pipeline JSON: an open presentation and a list of steps.
        #[arg(long)]
        datum: PathBuf,
        /// Write the glued presentation here as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Ideal queries over Z[1/6].
    #[command(subcommand)]
    Ideal(IdealCommand),
    /// Chern class of a bundle expression in one degree.
    Chern {
        /// Bundle expression, e.g. `sym2(E{c1,c2})`.
        #[arg(long)]
        expr: String,
        /// Degree of the Chern class to print.
        #[arg(long)]
        degree: u32,
    },
    /// Integral over a projective space by torus localization.
    Localize {
        /// JSON list of torus weights, one per coordinate.
        #[arg(long)]
        weights: String,
        /// JSON list of class restrictions, one per fixed point; the
        /// hyperplane class is `h`.
        #[arg(long)]
        values: String,
        /// Variables as `x:1,y:2`; by default every name has degree 1.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Certify invariant generators of a finite group action.
    Invariants {
        /// `swap:a,b` or `sym:a,b,c`
        #[arg(long)]
        group: String,
        /// JSON list of claimed generators.
        #[arg(long)]
        gens: String,
        /// JSON list of generators of a stable ideal; when given, `gens` are
        /// checked as generators of its invariant part.
        #[arg(long)]
        ideal: Option<String>,
        /// Variables as `x:1,y:2`; by default every name has degree 1.
        #[arg(long)]
        vars: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Reference relation list (defaults to the shipped file).
    #[arg(long)]
    relations: Option<PathBuf>,
    /// Reference stratum values (defaults to the shipped file).
    #[arg(long)]
    strata: Option<PathBuf>,
    /// Pipeline description (defaults to the shipped file).
    #[arg(long)]
    pipeline: Option<PathBuf>,
    /// Include wall-clock runtimes in the report.
    #[arg(long)]
    timings: bool,
    /// Perturb chosen lifts with this seed.
    #[arg(long)]
    perturb: Option<u64>,
}

#[derive(Subcommand)]
enum IdealCommand {
    /// Membership of a polynomial, with verified cofactors.
    Member {
        /// Polynomial to test.
        #[arg(long)]
        poly: String,
        /// JSON list of generators.
        #[arg(long)]
        gens: String,
        /// Variables as `x:1,y:2`; by default every name has degree 1.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Equality of two ideals by two-way membership.
    Equal {
        /// JSON list of generators.
        #[arg(long)]
        left: String,
        /// JSON list of generators.
        #[arg(long)]
        right: String,
        /// Variables as `x:1,y:2`; by default every name has degree 1.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Kernel generators of a ring map up to the degree bound.
    Kernel {
        /// Source variables as `x:1,y:2`.
        #[arg(long)]
        source_vars: String,
        /// Target variables as `a:1,b:1`.
        #[arg(long)]
        target_vars: String,
        /// JSON list of target relations.
        #[arg(long, default_value = "[]")]
        target_relations: String,
        /// JSON list of images, one per source variable.
        #[arg(long)]
        images: String,
    },
    /// Bounded non-zero-divisor certificate.
    Nzd {
        /// Class to certify.
        #[arg(long)]
        class: String,
        /// JSON list of relations of the presented ring.
        #[arg(long, default_value = "[]")]
        relations: String,
        /// Variables as `x:1,y:2`; by default every name has degree 1.
        #[arg(long)]
        vars: Option<String>,
    },
}

/// `x:1,y:2` into a table.
fn parse_vars(s: &str) -> Result<Arc<VarTable>, CliError> {
    let mut vars = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (n, d) = item.split_once(':').unwrap_or((item, "1"));
        let d: u32 = d.trim().parse().map_err(|_| CliError::Usage(format!("bad degree in {item:?}")))?;
        vars.push((n.trim().to_string(), d));
    }
    Ok(VarTable::new(&vars)?)
}

/// Identifiers in the expressions, each of degree 1, in order of appearance.
fn infer_vars(exprs: &[&str]) -> Result<Arc<VarTable>, CliError> {
    let mut names: Vec<String> = Vec::new();
    for e in exprs {
        let b = e.as_bytes();
        let mut i = 0;
        while i < b.len() {
            if b[i].is_ascii_alphabetic() || b[i] == b'_' {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                let n = &e[start..i];
                if !names.iter().any(|x| x == n) {
                    names.push(n.to_string());
                }
            } else if b[i].is_ascii_digit() {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
    }
    let vars: Vec<(String, u32)> = names.into_iter().map(|n| (n, 1)).collect();
    Ok(VarTable::new(&vars)?)
}

fn json_list(s: &str) -> Result<Vec<String>, CliError> {
    Ok(serde_json::from_str(s)?)
}

fn table_for(vars: &Option<String>, exprs: &[&str]) -> Result<Arc<VarTable>, CliError> {
    match vars {
        Some(v) => parse_vars(v),
        None => infer_vars(exprs),
    }
}

fn parse_all(t: &Arc<VarTable>, xs: &[String]) -> Result<Vec<GradedPoly>, CliError> {
    Ok(xs.iter().map(|x| GradedPoly::parse(t, x)).collect::<chowglue::Result<_>>()?)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_verify(cli: &Cli, a: &VerifyArgs) -> CliResult {
    if cli.max_degree < 9 {
        return Err(CliError::Usage(format!("--max-degree must be at least 9, got {}", cli.max_degree)));
    }
    let rel_text = a.relations.as_deref().map(read).transpose()?.unwrap_or_else(|| RELATIONS_TXT.to_string());
    let strata_text = a.strata.as_deref().map(read).transpose()?.unwrap_or_else(|| STRATA_TXT.to_string());
    let spec = match &a.pipeline {
        Some(p) => PipelineSpec::from_json(&read(p)?)?,
        None => PipelineSpec::builtin(),
    };
    let relations = ConstantSet::parse(&rel_text)?;
    let strata = ConstantSet::parse(&strata_text)?;
    let opts = VerifyOptions { glue: GlueOptions { perturb: a.perturb, ..Default::default() }, timings: a.timings };
    let report = verify(&relations, &strata, &spec, cli.max_degree, opts)?;
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    if !cli.quiet {
        print!("{}", report.summary());
    }
    Ok(report.passed())
}

fn run_derive(cli: &Cli, stratum: &str, strata: &Option<PathBuf>) -> CliResult {
    let text = strata.as_deref().map(read).transpose()?.unwrap_or_else(|| STRATA_TXT.to_string());
    let reference = ConstantSet::parse(&text)?;
    let name = match stratum {
        "open" | "quartic" => "quartic",
        "hyperelliptic" | "delta1" | "delta11" | "delta111" => stratum,
        other => return Err(CliError::Usage(format!("unknown stratum {other:?}"))),
    };
    let resolver = builtin_resolver(&reference, cli.max_degree);
    let pres = resolver(name)?;
    if !cli.quiet {
        println!("generators: {}", pres.presentation.table.names().join(", "));
        for (n, r) in pres.names.iter().zip(&pres.presentation.relations) {
            println!("{n} = {r}");
        }
        println!("PASS {stratum}");
    }
    Ok(true)
}

#[derive(Serialize)]
struct GlueOutput {
    presentation: PresentationJson,
    labels: Vec<String>,
}

fn run_glue(cli: &Cli, datum: &Path, output: &Option<PathBuf>) -> CliResult {
    let spec = PipelineSpec::from_json(&read(datum)?)?;
    let reference = ConstantSet::parse(STRATA_TXT)?;
    let resolver = builtin_resolver(&reference, cli.max_degree);
    let outcome = run_pipeline(&spec, cli.max_degree, GlueOptions::default(), &resolver)?;
    let ok = outcome.steps.iter().all(|s| s.certificate.nzd && s.certificate.restriction_vanishes && s.certificate.restricts_to_open);
    let out = GlueOutput { presentation: outcome.presentation().to_json(), labels: outcome.labels() };
    if let Some(p) = output {
        write_json(p, &out)?;
    }
    if !cli.quiet {
        for s in &outcome.steps {
            let c = &s.certificate;
            println!(
                "{} {}: {} relations, nzd {}, vanishes on closed {}, truncation {}",
                verdict(c.nzd && c.restriction_vanishes && c.restricts_to_open),
                s.name,
                s.output.relations.len(),
                c.nzd,
                c.restriction_vanishes,
                c.restricts_to_open
            );
        }
        for (l, r) in out.labels.iter().zip(&outcome.presentation().relations) {
            println!("{l} = {r}");
        }
    }
    Ok(ok)
}

fn run_ideal(cli: &Cli, cmd: &IdealCommand) -> CliResult {
    match cmd {
        IdealCommand::Member { poly, gens, vars } => {
            let gens = json_list(gens)?;
            let mut exprs: Vec<&str> = gens.iter().map(String::as_str).collect();
            exprs.push(poly);
            let t = table_for(vars, &exprs)?;
            let g = parse_all(&t, &gens)?;
            let p = GradedPoly::parse(&t, poly)?;
            let m = member(&p, &g, cli.max_degree)?;
            if !cli.quiet {
                println!("{}", verdict(m.member));
                if m.member {
                    for (gen, c) in g.iter().zip(&m.cofactors) {
                        println!("  ({c}) * ({gen})");
                    }
                } else {
                    println!("  residual {}", m.residual);
                }
            }
            Ok(m.member)
        }
        IdealCommand::Equal { left, right, vars } => {
            let l = json_list(left)?;
            let r = json_list(right)?;
            let exprs: Vec<&str> = l.iter().chain(&r).map(String::as_str).collect();
            let t = table_for(vars, &exprs)?;
            let li = Ideal::new(&t, &parse_all(&t, &l)?)?;
            let ri = Ideal::new(&t, &parse_all(&t, &r)?)?;
            let rep = ideal_equal_report(&li, &ri, true)?;
            if !cli.quiet {
                println!("{}", verdict(rep.equal));
                for k in &rep.missing_in_second {
                    println!("  left {} not in right", l[*k]);
                }
                for k in &rep.missing_in_first {
                    println!("  right {} not in left", r[*k]);
                }
            }
            Ok(rep.equal)
        }
        IdealCommand::Kernel { source_vars, target_vars, target_relations, images } => {
            let st = parse_vars(source_vars)?;
            let tt = parse_vars(target_vars)?;
            let rels = parse_all(&tt, &json_list(target_relations)?)?;
            let imgs = parse_all(&tt, &json_list(images)?)?;
            let map = RingMap::new(RingPresentation::free(st), RingPresentation::new(tt, rels)?, imgs)?;
            let ker = kernel(&map, cli.max_degree)?;
            if !cli.quiet {
                println!("{} kernel generators up to degree {}", ker.len(), cli.max_degree);
                for k in &ker {
                    println!("{k}");
                }
            }
            Ok(true)
        }
        IdealCommand::Nzd { class, relations, vars } => {
            let rels = json_list(relations)?;
            let mut exprs: Vec<&str> = rels.iter().map(String::as_str).collect();
            exprs.push(class);
            let t = table_for(vars, &exprs)?;
            let pres = RingPresentation::new(t.clone(), parse_all(&t, &rels)?)?;
            let c = GradedPoly::parse(&t, class)?;
            let rep = nzd_check(&c, &pres, cli.max_degree)?;
            if !cli.quiet {
                println!("{} up to degree {}", verdict(rep.nonzero_divisor), rep.bound);
                if let Some((d, w)) = &rep.witness {
                    println!("  annihilates {w} in degree {d}");
                }
            }
            Ok(rep.nonzero_divisor)
        }
    }
}

fn run_chern(cli: &Cli, expr: &str, degree: u32) -> CliResult {
    let t = infer_table(expr)?;
    let e = parse_bundle(&t, expr)?;
    let c = total_class(&t, &e, degree)?;
    let piece = c.piece(degree).cloned().unwrap_or_else(|| GradedPoly::zero(&t));
    if !cli.quiet {
        println!("{piece}");
    }
    Ok(true)
}

fn run_localize(cli: &Cli, weights: &str, values: &str, vars: &Option<String>) -> CliResult {
    let w = json_list(weights)?;
    let v = json_list(values)?;
    let t = match vars {
        Some(s) => parse_vars(s)?,
        None => {
            let exprs: Vec<&str> = w.iter().chain(&v).map(String::as_str).collect();
            let inferred = infer_vars(&exprs)?;
            let mut names: Vec<(String, u32)> =
                inferred.names().iter().filter(|n| *n != "h").map(|n| (n.clone(), 1)).collect();
            names.push(("h".into(), 1));
            VarTable::new(&names)?
        }
    };
    let rep = ProjectiveRep::new(parse_all(&t, &w)?, "h")?;
    let h = t.position("h").ok_or_else(|| CliError::Usage("the hyperplane variable h is required".into()))?;
    // restrict each value to its fixed point before integrating
    let nodes = rep.nodes();
    let vals = parse_all(&t, &v)?
        .into_iter()
        .zip(&nodes)
        .map(|(val, node)| {
            let imgs: Vec<GradedPoly> =
                (0..t.len()).map(|i| if i == h { node.clone() } else { GradedPoly::var(&t, t.name(i)).unwrap() }).collect();
            chowglue::gradedring::substitute_images(&val, &t, &t, &imgs)
        })
        .collect::<chowglue::Result<Vec<_>>>()?;
    let out = localized_integral(&rep, &vals)?;
    if !cli.quiet {
        println!("{out}");
    }
    Ok(true)
}

fn run_invariants(cli: &Cli, group: &str, gens: &str, ideal: &Option<String>, vars: &Option<String>) -> CliResult {
    let (kind, names) = group.split_once(':').ok_or_else(|| CliError::Usage(format!("bad group {group:?}")))?;
    let names: Vec<&str> = names.split(',').map(str::trim).collect();
    let gens = json_list(gens)?;
    let ideal = ideal.as_deref().map(json_list).transpose()?;
    let mut exprs: Vec<&str> = names.clone();
    exprs.extend(gens.iter().map(String::as_str));
    if let Some(i) = &ideal {
        exprs.extend(i.iter().map(String::as_str));
    }
    let t = table_for(vars, &exprs)?;
    let g = match (kind, names.as_slice()) {
        ("swap", [a, b]) => GroupAction::swap(&t, a, b)?,
        ("sym", _) => GroupAction::symmetric(&t, &names)?,
        _ => return Err(CliError::Usage(format!("bad group {group:?}"))),
    };
    let claimed = parse_all(&t, &gens)?;
    let ok = match &ideal {
        Some(i) => invariant_ideal_generators_check(&parse_all(&t, i)?, &claimed, &g, cli.max_degree)?,
        None => invariant_subring_check(&claimed, &g, cli.max_degree)?,
    };
    if !cli.quiet {
        println!("{} up to degree {}", verdict(ok), cli.max_degree);
    }
    Ok(ok)
}

fn run(cli: &Cli) -> CliResult {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Verify(a) => run_verify(cli, a),
        Command::Derive { stratum, strata } => run_derive(cli, stratum, strata),
        Command::Glue { datum, output } => run_glue(cli, datum, output),
        Command::Ideal(cmd) => run_ideal(cli, cmd),
        Command::Chern { expr, degree } => run_chern(cli, expr, *degree),
        Command::Localize { weights, values, vars } => run_localize(cli, weights, values, vars),
        Command::Invariants { group, gens, ideal, vars } => run_invariants(cli, group, gens, ideal, vars),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(CliError::Failed(m)) => {
            eprintln!("FAIL: {m}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
