//! The `edf` command-line tool.
//!
//! Exit codes: 0 success (verified, witness found, solutions found), 1 a
//! negative answer (verification failed, search exhausted, no witness),
//! 2 usage or parse errors, 3 unsupported parameters.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use edf_core::constructions::{self, ConstructionResult};
use edf_core::diffcore::verify_variant;
use edf_core::groups::{cyclotomic_classes, Decoded};
use edf_core::{
    cedf_equivalent, emit_family_file, parse_family_file, search, verify_h_edf, DisjointMode, EquivalenceOptions,
    EquivalenceWitness, Error, FamilyFile, FieldTable, Group, GroupSpec, LabelledDigraph, SearchOptions,
    SymmetryBreaking, Variant, VerificationReport, VerifyOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "edf",
    version,
    about = "Construct, verify and search for digraph-defined external difference families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named construction and print the verified family.
    Construct(ConstructArgs),
    /// Verify a family file against a digraph or variant.
    Verify(VerifyArgs),
    /// Backtracking search for families in a group.
    Search(SearchArgs),
    /// Decide whether two families are equivalent.
    Equiv(EquivArgs),
    /// Print the cyclotomic classes of order e in GF(q).
    Cyclotomy(CyclotomyArgs),
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// cyclotomic-edf, cyclotomic-cedf, tournament-edf, noncyclic-cedf, m4-cedf,
    /// gsedf-two-set, sedf-squares, kab-star, kab-undirected, cycle-non-cedf
    name: String,
    params: Vec<u32>,
    /// Write the family to this file.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Shuffle seed for constructions that allow any partition.
    #[arg(long)]
    seed: Option<u64>,
    /// Tournament orientation for tournament-edf, e.g. `tournament:3:101`.
    #[arg(long)]
    orientation: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    family: PathBuf,
    /// Digraph spec; overrides the file's `digraph` line.
    #[arg(long)]
    digraph: Option<String>,
    /// Classical variant such as `sedf` or `cedf:2`; overrides the file's `variant` line.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    lambda: Option<u32>,
    #[arg(long)]
    adjacent_disjoint: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Group spec, e.g. `--group cyclic 19`.
    #[arg(long, num_args = 1.., required = true)]
    group: Vec<String>,
    #[arg(long)]
    digraph: String,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    lambda: u32,
    #[arg(long)]
    max_solutions: Option<usize>,
    #[arg(long)]
    adjacent_disjoint: bool,
    /// none, translation or translation+automorphism.
    #[arg(long, default_value = "translation")]
    symmetry: String,
    /// Stop after this many seconds and report a partial certificate.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Shuffle the candidate order with this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    parallel: bool,
}

#[derive(Args, Debug)]
struct EquivArgs {
    #[arg(long)]
    family_a: PathBuf,
    #[arg(long)]
    family_b: PathBuf,
    /// Also try the reversed cyclic order.
    #[arg(long)]
    reverse: bool,
    /// Disable the fingerprint prefilter.
    #[arg(long)]
    no_prefilter: bool,
}

#[derive(Args, Debug)]
struct CyclotomyArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    e: u32,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::BadElement { .. }
        | Error::InvalidDigraph(_)
        | Error::InvalidGroup(_)
        | Error::ElementOutOfRange { .. }
        | Error::DuplicateElement(_)
        | Error::EmptySet
        | Error::SizeMismatch { .. }
        | Error::NonUniformSizes(_) => EXIT_USAGE,
        _ => EXIT_UNSUPPORTED,
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Construct(a) => construct(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Search(a) => search_cmd(a, out),
        Command::Equiv(a) => equiv(a, out),
        Command::Cyclotomy(a) => cyclotomy(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn arity(name: &str, params: &[u32], n: usize) -> std::result::Result<(), Failure> {
    if params.len() == n {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "{name} takes {n} parameters, got {}",
            params.len()
        )))
    }
}

fn build(a: &ConstructArgs) -> std::result::Result<(ConstructionResult, Option<Variant>), Failure> {
    let p = &a.params;
    let name = a.name.as_str();
    let r = match name {
        "cyclotomic-edf" => {
            arity(name, p, 2)?;
            (constructions::cyclotomic_edf(p[0], p[1])?, None)
        }
        "cyclotomic-cedf" => {
            arity(name, p, 2)?;
            (constructions::cyclotomic_cedf(p[0], p[1])?, None)
        }
        "tournament-edf" => {
            arity(name, p, 2)?;
            let t = match &a.orientation {
                Some(spec) => LabelledDigraph::parse(spec)?,
                None => LabelledDigraph::tournament(p[1] as usize)?,
            };
            (constructions::tournament_edf(p[0], p[1], &t)?, None)
        }
        "noncyclic-cedf" => {
            arity(name, p, 1)?;
            (constructions::noncyclic_cedf(p[0])?, None)
        }
        "m4-cedf" => {
            arity(name, p, 2)?;
            (constructions::m4_cedf(p[0], p[1])?, None)
        }
        "gsedf-two-set" => {
            arity(name, p, 2)?;
            (constructions::gsedf_two_set(p[0], p[1])?, Some(Variant::Gsedf))
        }
        "sedf-squares" => {
            arity(name, p, 1)?;
            (constructions::sedf_squares(p[0])?, Some(Variant::Sedf))
        }
        "kab-star" => {
            arity(name, p, 3)?;
            (constructions::kab_star_edf(p[0], p[1], p[2], a.seed)?, None)
        }
        "kab-undirected" => {
            arity(name, p, 3)?;
            (constructions::kab_undirected_edf(p[0], p[1], p[2])?, None)
        }
        "cycle-non-cedf" => {
            arity(name, p, 2)?;
            (constructions::cycle_non_cedf(p[0], p[1])?, None)
        }
        other => return Err(Failure::Usage(format!("unknown construction `{other}`"))),
    };
    Ok(r)
}

fn construct(a: ConstructArgs, out: &mut (dyn Write + Send)) -> Outcome {
    let (r, variant) = build(&a)?;
    writeln!(out, "{} VERIFIED", r.label)?;
    writeln!(out, "group {}", r.group.spec())?;
    for (i, s) in r.family.sets().iter().enumerate() {
        let items: Vec<String> = s.iter().map(|&e| r.group.format_element(e)).collect();
        writeln!(out, "A{i} = {{{}}}", items.join(", "))?;
    }
    if let Some(c) = &r.non_cedf {
        let g = &r.group;
        for (dir, (x, cx, y, cy)) in [("forward", c.forward), ("reverse", c.reverse)] {
            writeln!(
                out,
                "not a CEDF ({dir}): {} occurs {cx} times, {} occurs {cy} times",
                g.format_element(x),
                g.format_element(y)
            )?;
        }
    }
    if let Some(path) = &a.emit {
        let single = r.checks.len() == 1 && r.checks[0].vertex_map.iter().enumerate().all(|(i, &j)| i == j);
        let ff = FamilyFile {
            group: r.group.clone(),
            digraph: if variant.is_none() && single {
                Some(r.digraph().clone())
            } else {
                None
            },
            mode: None,
            variant,
            family: r.family.clone(),
        };
        fs::write(path, emit_family_file(&ff))?;
    }
    Ok(EXIT_OK)
}

fn read_family(path: &Path) -> std::result::Result<FamilyFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_family_file(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Failure::Usage(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => Failure::Core(other),
    })
}

fn print_report(out: &mut (dyn Write + Send), g: &Group, label: &str, rep: &VerificationReport) -> std::io::Result<()> {
    writeln!(out, "{label}{rep}")?;
    for w in &rep.witnesses {
        writeln!(
            out,
            "  witness: {} occurs {} times, expected {}",
            g.format_element(w.element),
            w.actual,
            w.expected
        )?;
    }
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut (dyn Write + Send)) -> Outcome {
    let ff = read_family(&a.family)?;
    let g = &ff.group;
    let mode = if a.adjacent_disjoint {
        DisjointMode::AdjacentDisjoint
    } else {
        ff.mode.unwrap_or_default()
    };
    let digraph = a.digraph.as_deref().map(LabelledDigraph::parse).transpose()?;
    let variant = a.variant.as_deref().map(str::parse::<Variant>).transpose()?;
    let ok = if let Some(h) = digraph.or(if variant.is_none() { ff.digraph.clone() } else { None }) {
        let opts = VerifyOptions {
            expected_lambda: a.lambda,
            mode,
            allow_nonuniform: false,
        };
        let rep = verify_h_edf(g, &h, &ff.family, &opts)?;
        print_report(out, g, &format!("{h}: "), &rep)?;
        rep.is_verified()
    } else if let Some(v) = variant.or(ff.variant) {
        let reps = verify_variant(g, &ff.family, v, a.lambda)?;
        for (i, rep) in reps.iter().enumerate() {
            print_report(out, g, &format!("{v} check {i}: "), rep)?;
        }
        let ok = reps.iter().all(VerificationReport::is_verified);
        writeln!(out, "{v}: {}", if ok { "VERIFIED" } else { "FAILED" })?;
        ok
    } else {
        return Err(Failure::Usage(
            "no digraph: pass --digraph or --variant, or add a `digraph` line".into(),
        ));
    };
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn search_cmd(a: SearchArgs, out: &mut (dyn Write + Send)) -> Outcome {
    let g = Group::new(GroupSpec::parse(&a.group.join(" "))?)?;
    let h = LabelledDigraph::parse(&a.digraph)?;
    let opts = SearchOptions {
        mode: if a.adjacent_disjoint {
            DisjointMode::AdjacentDisjoint
        } else {
            DisjointMode::Disjoint
        },
        max_solutions: a.max_solutions,
        symmetry: a.symmetry.parse::<SymmetryBreaking>()?,
        time_budget: match a.time_budget {
            Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(Failure::Usage(format!("bad time budget {s}"))),
            None => None,
        },
        shuffle_seed: a.seed,
        parallel: a.parallel,
    };
    let mut io_err = None;
    let cert = search::search_h_edf_streaming(&g, &h, a.l, a.lambda, &opts, |f| {
        if let Err(e) = writeln!(out, "solution {}", f.format(&g)) {
            io_err.get_or_insert(e);
        }
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    writeln!(out, "{cert}")?;
    Ok(if cert.solutions > 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

fn describe_sigma(g: &Group, w: &EquivalenceWitness) -> String {
    if let Some(u) = w.sigma.multiplier() {
        return format!("x -> {u}x");
    }
    let basis: Vec<Decoded> = match g.spec() {
        GroupSpec::Product(ns) => (0..ns.len())
            .map(|i| Decoded::Tuple((0..ns.len()).map(|j| u32::from(i == j)).collect()))
            .collect(),
        GroupSpec::FieldAdditive(_) => {
            let k = FieldTable::new(g.order()).map(|f| f.degree()).unwrap_or(1) as usize;
            (0..k)
                .map(|i| Decoded::FieldVector((0..k).map(|j| u32::from(i == j)).collect()))
                .collect()
        }
        _ => Vec::new(),
    };
    basis
        .iter()
        .filter_map(|d| g.encode(d).ok())
        .map(|e| format!("{} -> {}", g.format_element(e), g.format_element(w.sigma.apply(e))))
        .collect::<Vec<_>>()
        .join(", ")
}

fn equiv(a: EquivArgs, out: &mut (dyn Write + Send)) -> Outcome {
    let fa = read_family(&a.family_a)?;
    let fb = read_family(&a.family_b)?;
    if fa.group.spec() != fb.group.spec() {
        return Err(Failure::Usage("the two families live in different groups".into()));
    }
    let g = &fa.group;
    let opts = EquivalenceOptions {
        prefilter: !a.no_prefilter,
        try_reversal: a.reverse,
        parallel: false,
    };
    let res = cedf_equivalent(g, &fa.family, &fb.family, &opts)?;
    match res.witness {
        Some(w) => {
            writeln!(
                out,
                "EQUIVALENT sigma: {}; beta = {}; c = {}{}",
                describe_sigma(g, &w),
                g.format_element(w.beta),
                w.c,
                if w.reversed { " (reversed)" } else { "" }
            )?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "NONE ({} candidates)", res.candidates)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cyclotomy(a: CyclotomyArgs, out: &mut (dyn Write + Send)) -> Outcome {
    let ft = FieldTable::new(a.q)?;
    let classes = cyclotomic_classes(&ft, a.e)?;
    let g = ft.additive_group();
    writeln!(
        out,
        "GF({}) primitive element {}",
        a.q,
        g.format_element(g.element(ft.alpha())?)
    )?;
    for (i, c) in classes.iter().enumerate() {
        let items: Vec<String> = c.iter().map(|&x| g.format_element(x)).collect();
        writeln!(out, "C_{i} = {{{}}}", items.join(", "))?;
    }
    Ok(EXIT_OK)
}
