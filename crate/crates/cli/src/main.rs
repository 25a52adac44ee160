//! `isospec`: spectra, isometry and isospectrality of spherical space forms
//! and orbifolds from the command line.
//!
//! Exit codes: 0 success, 1 a checked claim failed (or an internal error),
//! 2 usage or input error, 3 coefficient budget exceeded.

mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use isospec::lens::LensParams;
use isospec::molien::{fingerprint_to, is_isospectral, SpectrumFingerprint};
use isospec::notation::{parse_lens, SpaceSpec};
use isospec::orbifolds::{class_fingerprints, enumerate_classes, verify_rigidity, MAX_SMALL_ORDER};
use isospec::search::{find_isospectral_pairs, rigidity_sweep, SearchConfig};
use isospec::spaceforms::{verify_errata_lemma, FpfGroup};
use isospec::Error;

use output::{Format, Report};
use reproduce::TableId;

#[derive(Parser)]
#[command(name = "isospec", version, about = "Exact spectra of spherical space forms and orbifolds")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// JSON-lines fingerprint cache used by searches (no cache if unset).
    #[arg(long, env = "ISOSPEC_CACHE", global = true)]
    cache: Option<PathBuf>,
    /// Number of series coefficients; defaults to the sufficient N(d+1)+2.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cap on newly computed series coefficients in searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print d, |Γ|, the first coefficients and the numerator of F_Γ.
    Fingerprint { spec: String },
    /// Decide whether two lens spaces are isometric.
    Isometric { a: String, b: String },
    /// Decide whether two spaces are isospectral.
    Isospectral { a: String, b: String },
    /// Append r full unit bases to a lens space.
    Extend {
        lens: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Isospectral non-isometric lens spaces of order q in dimension 2n-1.
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
    },
    /// All cells q_min <= q <= q_max, 1 <= n <= n_max.
    Sweep {
        #[arg(long, default_value_t = 1)]
        q_min: u32,
        #[arg(long)]
        q_max: u32,
        #[arg(long)]
        n_max: u32,
    },
    /// Run a pinned computation and print PASS/FAIL per claim.
    Reproduce {
        #[arg(value_enum)]
        table: TableId,
    },
    /// Small orbifold groups of order <= 7 in dimension d.
    Orbifolds {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = MAX_SMALL_ORDER)]
        max_order: u32,
        /// List every class instead of the per-order summary.
        #[arg(long)]
        list: bool,
    },
    /// Non-isospectrality of the space forms with group Q16 or P20.
    Errata {
        #[arg(long)]
        group: FpfGroup,
        #[arg(long)]
        m: u32,
    },
    /// Eigenvalue roster of the group of a space.
    Roster { spec: String },
}

enum Failure {
    Claims,
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            log::warn!("could not configure {j} worker threads: {e}");
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } => 3,
                Error::InternalInconsistency(_) | Error::RelationCheckFailed(_) | Error::Io(_) => 1,
                _ => 2,
            })
        }
    }
}

fn search_config(g: &Global) -> SearchConfig {
    SearchConfig {
        cache: g.cache.clone(),
        budget: g.budget,
        trunc: g.trunc,
    }
}

fn fingerprint_of(spec: &SpaceSpec, trunc: Option<usize>) -> Result<SpectrumFingerprint, Error> {
    let g = spec.to_group()?;
    let sufficient = isospec::molien::default_truncation(g.order(), g.dim());
    let k = trunc.unwrap_or(sufficient);
    if k < sufficient {
        log::warn!("--trunc {k} is below the sufficient {sufficient}; equality of truncations does not imply isospectrality");
        eprintln!("warning: --trunc {k} is below the sufficient truncation {sufficient}");
    }
    fingerprint_to(&g, k)
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let fmt = g.format;
    match &cli.command {
        Command::Fingerprint { spec } => {
            let s = SpaceSpec::parse(spec)?;
            let f = fingerprint_of(&s, g.trunc)?;
            let mut r = Report::new(vec!["spec", "d", "N", "K", "coeffs", "numerator"]);
            let mut obj = serde_json::to_value(&f).expect("fingerprints serialize");
            obj["spec"] = json!(s.to_string());
            let head = &f.coeffs[..f.coeffs.len().min(20)];
            r.push(
                vec![
                    s.to_string(),
                    f.d.to_string(),
                    f.order.to_string(),
                    f.trunc.to_string(),
                    join(head, " "),
                    f.numerator.to_string(),
                ],
                obj,
            );
            r.emit(fmt)?;
        }
        Command::Isometric { a, b } => {
            let (la, lb) = (parse_lens(a)?, parse_lens(b)?);
            let iso = la.is_isometric(&lb);
            let (ca, cb) = (la.canonicalize().to_string(), lb.canonicalize().to_string());
            let mut r = Report::new(vec!["a", "b", "isometric", "canonical_a", "canonical_b"]);
            r.push(
                vec![la.to_string(), lb.to_string(), iso.to_string(), ca.clone(), cb.clone()],
                json!({"a": la.to_string(), "b": lb.to_string(), "isometric": iso,
                       "canonical_a": ca, "canonical_b": cb}),
            );
            r.emit(fmt)?;
        }
        Command::Isospectral { a, b } => {
            let (sa, sb) = (SpaceSpec::parse(a)?, SpaceSpec::parse(b)?);
            let (ga, gb) = (sa.to_group()?, sb.to_group()?);
            let k = g.trunc.unwrap_or_else(|| {
                isospec::molien::default_truncation(ga.order().max(gb.order()), ga.dim().max(gb.dim()))
            });
            let iso = is_isospectral(&fingerprint_to(&ga, k)?, &fingerprint_to(&gb, k)?)?;
            let mut r = Report::new(vec!["a", "b", "isospectral"]);
            r.push(
                vec![sa.to_string(), sb.to_string(), iso.to_string()],
                json!({"a": sa.to_string(), "b": sb.to_string(), "isospectral": iso}),
            );
            r.emit(fmt)?;
        }
        Command::Extend { lens, r: reps } => {
            let l: LensParams = parse_lens(lens)?;
            let e = l.extend(*reps)?;
            let mut r = Report::new(vec!["lens", "r", "extended", "d"]);
            r.push(
                vec![l.to_string(), reps.to_string(), e.to_string(), e.d().to_string()],
                json!({"lens": l.to_string(), "r": reps, "extended": e.to_string(), "d": e.d()}),
            );
            r.emit(fmt)?;
        }
        Command::Search { q, n } => {
            let rep = find_isospectral_pairs(*q, *n, &search_config(g))?;
            let mut r = Report::new(vec!["q", "n", "classes", "group"]);
            let cells: Vec<String> = if rep.groups.is_empty() {
                vec!["-".into()]
            } else {
                rep.groups.iter().map(|grp| grp.join(" ~ ")).collect()
            };
            for cell in cells {
                r.rows.push(vec![q.to_string(), n.to_string(), rep.classes.to_string(), cell]);
            }
            r.json.push(serde_json::to_value(&rep).expect("reports serialize"));
            r.emit(fmt)?;
            if !rep.verified {
                return Err(Failure::Claims);
            }
        }
        Command::Sweep { q_min, q_max, n_max } => {
            let (rep, stats) = rigidity_sweep(*q_min, *q_max, *n_max, &search_config(g))?;
            log::info!("{stats:?}");
            let mut r = Report::new(vec!["q", "n", "classes", "groups", "verified"]);
            for c in &rep.cells {
                r.push(
                    vec![
                        c.q.to_string(),
                        c.n.to_string(),
                        c.classes.to_string(),
                        join(&c.groups.iter().map(|g| g.join(" ~ ")).collect::<Vec<_>>(), "; "),
                        c.verified.to_string(),
                    ],
                    serde_json::to_value(c).expect("reports serialize"),
                );
            }
            r.emit(fmt)?;
            for (q, n) in &rep.violations {
                eprintln!("rigidity violated at q={q}, n={n}");
            }
            if !rep.passed() {
                return Err(Failure::Claims);
            }
        }
        Command::Reproduce { table } => {
            let claims = reproduce::run(*table, &search_config(g))?;
            let mut r = Report::new(vec!["table", "result", "claim", "detail"]);
            for c in &claims {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                r.push(
                    vec![c.table.clone(), verdict.into(), c.claim.clone(), c.detail.clone()],
                    json!({"table": c.table, "result": verdict, "claim": c.claim, "detail": c.detail}),
                );
            }
            r.emit(fmt)?;
            if claims.iter().any(|c| !c.passed) {
                return Err(Failure::Claims);
            }
        }
        Command::Orbifolds { d, max_order, list } => {
            if *list {
                let classes = enumerate_classes(*d, *max_order)?;
                let prints = class_fingerprints(&classes)?;
                let mut r = Report::new(vec!["class", "N", "coeffs"]);
                for (c, f) in classes.iter().zip(&prints) {
                    let head = &f.coeffs[..f.coeffs.len().min(12)];
                    r.push(
                        vec![c.to_string(), c.order().to_string(), join(head, " ")],
                        json!({"class": c.to_string(), "N": c.order(),
                               "numerator": serde_json::to_value(&f.numerator).expect("serializes")}),
                    );
                }
                r.emit(fmt)?;
            } else {
                let rep = verify_rigidity(*d, *max_order)?;
                let mut r = Report::new(vec!["d", "N", "classes"]);
                for (order, count) in &rep.classes_per_order {
                    r.push(
                        vec![d.to_string(), order.to_string(), count.to_string()],
                        json!({"d": d, "N": order, "classes": count}),
                    );
                }
                r.emit(fmt)?;
                eprintln!(
                    "{} classes, injective: {} ({} ms)",
                    rep.total,
                    rep.injective(),
                    rep.elapsed_ms
                );
                if !rep.injective() {
                    for (a, b) in &rep.violations {
                        eprintln!("isospectral: {a} and {b}");
                    }
                    return Err(Failure::Claims);
                }
            }
        }
        Command::Errata { group, m } => {
            let rep = verify_errata_lemma(*group, *m)?;
            let mut r = Report::new(vec!["group", "m", "h", "d", "pole_order", "expected"]);
            let show = |x: Option<u32>| x.map_or("-".to_string(), |v| v.to_string());
            for c in &rep.classes {
                r.push(
                    vec![
                        group.to_string(),
                        m.to_string(),
                        c.h.to_string(),
                        rep.d.to_string(),
                        show(c.pole_order),
                        show(c.expected_pole_order),
                    ],
                    serde_json::to_value(c).expect("serializes"),
                );
            }
            r.emit(fmt)?;
            eprintln!("pairwise distinct: {}, poles match: {}", rep.pairwise_distinct, rep.poles_match);
            if !rep.passed() {
                return Err(Failure::Claims);
            }
        }
        Command::Roster { spec } => {
            let s = SpaceSpec::parse(spec)?;
            let grp = s.to_group()?;
            let mut r = Report::new(vec!["order", "eigenvalues"]);
            for (e, o) in grp.elements().iter().zip(grp.element_orders()) {
                let eig: Vec<String> = e
                    .iter()
                    .map(|&(x, mult)| format!("{x}/{}:{mult}", grp.conductor()))
                    .collect();
                r.push(
                    vec![o.to_string(), eig.join(" ")],
                    json!({"order": o, "conductor": grp.conductor(), "eigenvalues": e}),
                );
            }
            r.emit(fmt)?;
        }
    }
    Ok(())
}
