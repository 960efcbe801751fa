mod schema;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use qboson::currents::{check_ope_formula, fmt_quarter};
use qboson::fock::Sector;
use qboson::qseries::{check_jacobi_step, check_s, check_star_identity};
use qboson::repcheck::linalg::RankConfig;
use qboson::repcheck::{
    check_drinfeld, check_screening, check_xplus_forms, clifford_check, hw_verify, kernel_character, AlgebraAction,
    Relation,
};
use qboson::report::{Status, VerificationReport};
use qboson::vertexops::{
    check_intertwining, check_screening_anticommute, normalization_check, two_point, Condition, VertexPair,
    VertexSystem, VoType,
};

#[derive(Parser, Debug)]
#[command(name = "qboson", version, about = "Exact checks of a two-boson realization of quantum affine sl2 at level -1/2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Specialization point for u used by rank computations, e.g. u=3/2 (repeatable).
    #[arg(long = "specialize", value_name = "u=P/Q")]
    specialize: Vec<String>,
    /// Always compute ranks symbolically in u.
    #[arg(long)]
    symbolic: bool,
    /// Write JSON lines here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, env = "QBOSON_WORKERS", default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Drinfeld relations R1-R7 on basis vectors of the given sectors.
    VerifyRelations {
        /// R1..R7 (repeatable, default all).
        #[arg(long)]
        relation: Vec<String>,
        /// l1,l2 with halves as fractions, e.g. -1/2,0 (repeatable, default the highest-weight sectors).
        #[arg(long, allow_hyphen_values = true)]
        sector: Vec<String>,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        window: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Commutation of the algebra with the screening charge, and its square.
    VerifyScreening {
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Largest |k| of the modes tested.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        window: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Ghost zero-mode algebra.
    Clifford {
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Kernel dimensions of the screening charge against the product forms.
    KernelCharacter {
        /// 1..4 (repeatable, default all).
        #[arg(long)]
        family: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Sectors l in 2Z with |l| <= window.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        window: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Highest-weight vectors and their weights.
    HwCheck {
        #[arg(long)]
        family: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// q-series identities.
    SeriesIdentity {
        /// star, s, jacobi or all.
        #[arg(long, default_value = "all")]
        which: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Operator product expansions of the generating currents.
    Ope {
        /// 1..8 (repeatable, default all).
        #[arg(long)]
        formula: Vec<u32>,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Equality of the two builders of X+.
    XplusForms {
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        window: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Intertwining relations, screening anticommutation and normalization of
    /// the vertex operators.
    Intertwining {
        /// 1->2, 2->1, 3->4 or 4->3 (repeatable, default all).
        #[arg(long)]
        pair: Vec<String>,
        /// I or II (repeatable, default both).
        #[arg(long = "type")]
        ty: Vec<String>,
        /// V1..V10, A, B (repeatable, default all).
        #[arg(long)]
        condition: Vec<String>,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        window: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Two-point function of the type I vertex operators.
    TwoPoint {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Every check at the acceptance bounds.
    All {
        #[command(flatten)]
        common: Common,
    },
    /// JSON schema of the emitted lines.
    Schema,
}

struct UsageError(String);

type Job = Box<dyn Fn(&Ctx) -> Vec<Value> + Send + Sync>;

struct Ctx {
    act: Arc<AlgebraAction>,
    vo: Arc<VertexSystem>,
    rank: RankConfig,
}

fn report(r: VerificationReport) -> Vec<Value> {
    vec![serde_json::to_value(r).expect("serializable")]
}

fn parse_sector(s: &str) -> Result<Sector, UsageError> {
    s.parse::<Sector>().map_err(|e| UsageError(format!("--sector {s:?}: {e}")))
}

/// `u=P/Q` or `P/Q`.
fn parse_point(s: &str) -> Result<BigRational, UsageError> {
    let t = s.trim();
    let t = t.strip_prefix("u=").unwrap_or(t);
    match t.parse::<BigRational>() {
        Ok(a) if !a.is_zero() => Ok(a),
        _ => Err(UsageError(format!("--specialize {s:?}: expected u=P/Q with P, Q nonzero integers"))),
    }
}

fn rank_config(c: &Common) -> Result<RankConfig, UsageError> {
    let mut cfg = RankConfig { force_symbolic: c.symbolic, ..RankConfig::default() };
    if !c.specialize.is_empty() {
        let pts = c.specialize.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
        for (i, a) in pts.iter().enumerate() {
            if pts[..i].contains(a) {
                return Err(UsageError(format!("--specialize: point {a} given twice")));
            }
        }
        cfg.points = pts;
    }
    Ok(cfg)
}

fn families(f: &[u32]) -> Result<Vec<u32>, UsageError> {
    if f.is_empty() {
        return Ok(vec![1, 2, 3, 4]);
    }
    match f.iter().find(|i| !(1..=4).contains(*i)) {
        Some(i) => Err(UsageError(format!("--family {i}: expected 1..4"))),
        None => Ok(f.to_vec()),
    }
}

fn hw_sectors() -> Vec<Sector> {
    vec![Sector::new(0, 0), Sector::new(2, 1), Sector::new(-1, 0), Sector::new(-3, -1)]
}

fn relation_jobs(rels: &[Relation], sectors: &[Sector], degree: u32, window: u32) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for &s in sectors {
        for &rel in rels {
            jobs.push(Box::new(move |c: &Ctx| report(check_drinfeld(&c.act, rel, s, degree, window))));
        }
    }
    jobs
}

fn kernel_jobs(fams: &[u32], degree: u32, window: u32) -> Vec<Job> {
    fams.iter()
        .map(|&i| -> Job {
            Box::new(move |c: &Ctx| {
                let k = kernel_character(&c.act, i, degree, window, &c.rank).expect("validated family");
                let dims: Vec<Value> =
                    k.dims.iter().map(|(s, d, n)| json!({"sector": s.to_string(), "degree": d, "dim": n})).collect();
                vec![
                    serde_json::to_value(&k.report).expect("serializable"),
                    json!({"series": format!("character-F{i}"), "prefactor": k.prefactor, "dims": dims, "data": k.series.to_json()}),
                ]
            })
        })
        .collect()
}

fn series_jobs(which: &str, order: u32) -> Result<Vec<Job>, UsageError> {
    let mut jobs: Vec<Job> = Vec::new();
    let all = which == "all";
    if !matches!(which, "all" | "star" | "s" | "jacobi") {
        return Err(UsageError(format!("--which {which:?}: expected star, s, jacobi or all")));
    }
    if all || which == "star" {
        jobs.push(Box::new(move |_: &Ctx| report(check_star_identity(order))));
    }
    if all || which == "s" {
        for l in -5..=5 {
            jobs.push(Box::new(move |_: &Ctx| report(check_s(l, order))));
        }
    }
    if all || which == "jacobi" {
        for l in 0..=2 {
            jobs.push(Box::new(move |_: &Ctx| report(check_jacobi_step(l, order))));
        }
    }
    Ok(jobs)
}

fn ope_jobs(formulas: &[u32], order: u32) -> Result<Vec<Job>, UsageError> {
    let ids = if formulas.is_empty() { (1..=8).collect() } else { formulas.to_vec() };
    if let Some(i) = ids.iter().find(|i| !(1..=8).contains(*i)) {
        return Err(UsageError(format!("--formula {i}: expected 1..8")));
    }
    Ok(ids.into_iter().map(|id| -> Job { Box::new(move |_: &Ctx| report(check_ope_formula(id, order))) }).collect())
}

fn intertwining_jobs(pairs: &[VertexPair], conds: &[Condition], degree: u32, window: u32) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for &p in pairs {
        jobs.push(Box::new(move |c: &Ctx| report(normalization_check(&c.vo, p))));
        for &cond in conds {
            jobs.push(Box::new(move |c: &Ctx| report(check_intertwining(&c.vo, p, cond, degree, window))));
        }
        jobs.push(Box::new(move |c: &Ctx| report(check_screening_anticommute(&c.vo, p, degree, window))));
    }
    jobs
}

fn two_point_job(order: u32) -> Job {
    Box::new(move |c: &Ctx| {
        let tp = two_point(&c.vo, order);
        let mut out = vec![serde_json::to_value(&tp.report).expect("serializable")];
        for ((e2, e1), s) in &tp.components {
            out.push(json!({"series": format!("F{e2}{e1}"), "z2_power": fmt_quarter(tp.z2_power4), "data": s.to_json()}));
        }
        out.push(json!({"series": "F+- normalized", "data": tp.normalized.to_json()}));
        out
    })
}

fn hw_jobs(fams: &[u32]) -> Vec<Job> {
    fams.iter()
        .map(|&i| -> Job { Box::new(move |c: &Ctx| report(hw_verify(&c.act, i).expect("validated family"))) })
        .collect()
}

fn plan(cmd: &Command) -> Result<(Vec<Job>, Common), UsageError> {
    Ok(match cmd {
        Command::VerifyRelations { relation, sector, degree, window, common } => {
            let rels = if relation.is_empty() {
                Relation::ALL.to_vec()
            } else {
                relation
                    .iter()
                    .map(|r| r.parse::<Relation>().map_err(|e| UsageError(format!("--relation: {e}"))))
                    .collect::<Result<_, _>>()?
            };
            let sectors =
                if sector.is_empty() { hw_sectors() } else { sector.iter().map(|s| parse_sector(s)).collect::<Result<_, _>>()? };
            (relation_jobs(&rels, &sectors, *degree, *window), common.clone())
        }
        Command::VerifyScreening { degree, window, common } => {
            let (d, w) = (*degree, *window);
            (vec![Box::new(move |c: &Ctx| report(check_screening(&c.act, w, d))) as Job], common.clone())
        }
        Command::Clifford { degree, common } => {
            let d = *degree;
            (vec![Box::new(move |c: &Ctx| report(clifford_check(&c.act, d))) as Job], common.clone())
        }
        Command::KernelCharacter { family, degree, window, common } => {
            (kernel_jobs(&families(family)?, *degree, *window), common.clone())
        }
        Command::HwCheck { family, common } => (hw_jobs(&families(family)?), common.clone()),
        Command::SeriesIdentity { which, order, common } => (series_jobs(which, *order)?, common.clone()),
        Command::Ope { formula, order, common } => (ope_jobs(formula, *order)?, common.clone()),
        Command::XplusForms { degree, window, common } => {
            let (d, w) = (*degree, *window);
            (vec![Box::new(move |_: &Ctx| report(check_xplus_forms(d, w))) as Job], common.clone())
        }
        Command::Intertwining { pair, ty, condition, degree, window, common } => {
            let types = if ty.is_empty() {
                vec![VoType::I, VoType::II]
            } else {
                ty.iter().map(|t| t.parse::<VoType>().map_err(|e| UsageError(format!("--type: {e}")))).collect::<Result<_, _>>()?
            };
            let names: Vec<String> =
                if pair.is_empty() { ["1->2", "2->1", "3->4", "4->3"].map(String::from).to_vec() } else { pair.clone() };
            let mut pairs = Vec::new();
            for t in &types {
                for n in &names {
                    pairs.push(VertexPair::parse(*t, n).map_err(|e| UsageError(format!("--pair: {e}")))?);
                }
            }
            let conds = if condition.is_empty() {
                Condition::ALL.to_vec()
            } else {
                condition
                    .iter()
                    .map(|c| c.parse::<Condition>().map_err(|e| UsageError(format!("--condition: {e}"))))
                    .collect::<Result<_, _>>()?
            };
            (intertwining_jobs(&pairs, &conds, *degree, *window), common.clone())
        }
        Command::TwoPoint { order, common } => (vec![two_point_job(*order)], common.clone()),
        Command::All { common } => {
            let mut jobs = relation_jobs(&Relation::ALL, &hw_sectors(), 3, 2);
            jobs.push(Box::new(|c: &Ctx| report(check_screening(&c.act, 3, 4))));
            jobs.push(Box::new(|c: &Ctx| report(clifford_check(&c.act, 5))));
            jobs.extend(kernel_jobs(&[1, 2, 3, 4], 4, 2));
            jobs.extend(series_jobs("all", 8)?);
            jobs.extend(ope_jobs(&[], 8)?);
            jobs.extend(hw_jobs(&[1, 2, 3, 4]));
            jobs.push(Box::new(|_: &Ctx| report(check_xplus_forms(2, 2))));
            let pairs = VertexPair::all();
            jobs.extend(intertwining_jobs(&pairs, &Condition::ALL, 2, 2));
            jobs.push(two_point_job(3));
            (jobs, common.clone())
        }
        Command::Schema => unreachable!("handled before planning"),
    })
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    if let Command::Schema = cli.command {
        println!("{}", serde_json::to_string_pretty(&schema::report_schema()).expect("serializable"));
        return Ok(true);
    }
    let (jobs, common) = plan(&cli.command)?;
    if common.workers == 0 {
        return Err(UsageError("--workers must be positive".into()));
    }
    let ctx = Ctx { act: Arc::new(AlgebraAction::default()), vo: Arc::new(VertexSystem::default()), rank: rank_config(&common)? };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.workers)
        .build()
        .map_err(|e| UsageError(format!("cannot start workers: {e}")))?;
    // results are gathered in job order, independent of completion order
    let results: Vec<Vec<Value>> = pool.install(|| jobs.par_iter().map(|j| j(&ctx)).collect());
    let mut sink: Box<dyn Write> = match &common.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| UsageError(format!("--out {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut ok = true;
    for line in results.iter().flatten() {
        if line.get("status") == Some(&serde_json::to_value(Status::Fail).expect("serializable")) {
            ok = false;
        }
        writeln!(sink, "{line}").map_err(|e| UsageError(format!("write failed: {e}")))?;
    }
    sink.flush().map_err(|e| UsageError(format!("write failed: {e}")))?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("qboson: {msg}");
            ExitCode::from(2)
        }
    }
}
