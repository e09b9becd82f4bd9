//! Command-line interface: parsing, invariants, moves, certificate checking,
//! generation, ruling enumeration, and corpus verification.
//!
//! Exit codes: 0 success, 1 input/usage error, 2 certificate step failure,
//! 3 theorem violation.

use clap::{Args, Parser, Subcommand};
use legcalc_core::cobordism::{
    check, parse_lcob, serialize_lcob, session_consistency, CertSummary, CobordismCertificate,
};
use legcalc_core::construct::{
    between_stabilized, endocobordism, reverse_to_stabilized, stabilize, to_unknot, KnotPathData,
    Sign, StabSite,
};
use legcalc_core::families::{fill_family, make_family, FamilyParams};
use legcalc_core::front::{parse_front, serialize_front, FrontDiagram, OrientedDiagram};
use legcalc_core::moves::{
    apply_move, enumerate_moves, node_budget_from_env, parse_move, search_isotopy, SearchOutcome,
};
use legcalc_core::rulings::{enumerate_rulings, fillability_report};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "legcalc", version, about = "Legendrian front calculus", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a front file
    Validate { file: PathBuf },
    /// Classical invariants of a front
    Inv { file: PathBuf },
    /// List applicable moves, or apply one with --apply
    Move {
        file: PathBuf,
        /// Move in wire form, e.g. "R2 la 3 fwd"
        #[arg(long)]
        apply: Option<String>,
    },
    /// Bounded search for an isotopy certificate between two fronts
    Search {
        start: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Verify a cobordism certificate file
    Check { file: PathBuf },
    /// Certificate generators; output is re-verified before being written
    #[command(subcommand)]
    Gen(GenCmd),
    /// Normal ruling enumeration
    #[command(subcommand)]
    Rulings(RulingsCmd),
    /// Corpus verification
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Non-orientable endocobordism of crosscap genus 4k for a stabilized knot
    Endo(GenEndo),
    /// Descent certificate to a stabilized unknot
    Tounknot(GenSimple),
    /// Reverse an existing descent certificate
    Reverse(GenSimple),
    /// Stabilize a front at a site
    Stab(GenStab),
    /// Cobordism between stabilized knots
    Between(GenBetween),
    /// Parametric family fronts and their fillings
    Family(GenFamily),
}

#[derive(Args)]
struct GenEndo {
    file: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenSimple {
    file: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenStab {
    file: PathBuf,
    #[arg(long, default_value_t = 1)]
    gap: usize,
    #[arg(long, default_value_t = 1)]
    strand: usize,
    /// plus or minus
    #[arg(long, default_value = "minus")]
    sign: String,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenBetween {
    top: PathBuf,
    bottom: PathBuf,
    /// Descent seed front whose reversed descent joins the ends
    #[arg(long)]
    seed: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    depth: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenFamily {
    /// twist | negtorus
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, default_value_t = 0)]
    variant: u8,
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, default_value_t = 0)]
    n1: u64,
    #[arg(long, default_value_t = 0)]
    n2: u64,
    /// Also emit the filling certificate next to the front
    #[arg(long)]
    fill: bool,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum RulingsCmd {
    /// Count rulings of a front, optionally graded
    Count {
        file: PathBuf,
        #[arg(long)]
        graded: bool,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Validate every front and certificate under a directory and run the
    /// cross-certificate consistency checks
    Verify {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn load_front(path: &Path) -> Result<FrontDiagram, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    parse_front(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn load_cert(path: &Path) -> Result<CobordismCertificate, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    parse_lcob(&text, path.parent()).map_err(|e| format!("{}: {}", path.display(), e))
}

fn write_cert(path: &Path, cert: &CobordismCertificate) -> Result<(), String> {
    // re-verify before anything reaches disk
    check(cert).map_err(|e| format!("self-verification failed: {}", e))?;
    std::fs::write(path, serialize_lcob(cert))
        .map_err(|e| format!("cannot write {}: {}", path.display(), e))
}

fn print_report(r: &legcalc_core::cobordism::CobordismReport) {
    let orient = if r.orientable { "orientable" } else { "non-orientable" };
    let genus = match (r.genus, r.crosscap_genus) {
        (Some(g), _) => format!("genus={}", g),
        (_, Some(k)) => format!("crosscap={}", k),
        _ => "genus=n/a".to_string(),
    };
    println!(
        "euler={} pinches={} cups={} {} {} exact={} filling={}",
        r.euler, r.pinches, r.cups, orient, genus, r.exact, r.is_filling
    );
    for p in &r.pinch_records {
        let class = match p.class {
            legcalc_core::cobordism::PinchClass::Orientable => "orientable",
            legcalc_core::cobordism::PinchClass::NonOrientable => "non-orientable",
        };
        println!(
            "pinch step={} gap={} pos={} {} d(w-rc)={}",
            p.step_index, p.gap, p.pos, class, p.delta_w_minus_rc
        );
    }
    for f in &r.flags {
        println!("{}", f);
    }
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Validate { file } => {
            let d = load_front(&file)?;
            println!("ok events={} components={}", d.len(), d.components());
            Ok(0)
        }
        Cmd::Inv { file } => {
            let d = load_front(&file)?;
            let o = OrientedDiagram::default_orientation(d);
            let i = o.invariants();
            if i.components == 1 {
                println!("tb={} rot={} components=1", i.tb[0], i.rot[0]);
            } else {
                let tb: Vec<String> = i.tb.iter().map(|t| t.to_string()).collect();
                let rot: Vec<String> = i.rot.iter().map(|r| r.to_string()).collect();
                println!(
                    "tb={} rot={} components={} linking={}",
                    tb.join(","),
                    rot.join(","),
                    i.components,
                    i.linking
                );
            }
            println!("w-rc={}", i.w_minus_rc);
            Ok(0)
        }
        Cmd::Move { file, apply } => {
            let d = load_front(&file)?;
            match apply {
                None => {
                    for m in enumerate_moves(&d) {
                        println!("{}", m);
                    }
                    Ok(0)
                }
                Some(text) => {
                    let toks: Vec<&str> = text.split_whitespace().collect();
                    let m = parse_move(&toks).ok_or_else(|| format!("bad move `{}`", text))?;
                    let next = apply_move(&d, &m).map_err(|e| e.to_string())?;
                    println!("{}", serialize_front(&next));
                    Ok(0)
                }
            }
        }
        Cmd::Search { start, target, depth } => {
            let a = load_front(&start)?;
            let b = load_front(&target)?;
            match search_isotopy(&a, &b, depth, node_budget_from_env()) {
                SearchOutcome::Found(cert) => {
                    for m in &cert.moves {
                        println!("MOVE {}", m);
                    }
                    Ok(0)
                }
                SearchOutcome::NotFound => {
                    println!("NOT-FOUND depth={}", depth);
                    Ok(1)
                }
                SearchOutcome::BudgetExceeded => {
                    println!("BUDGET-EXCEEDED");
                    Ok(1)
                }
            }
        }
        Cmd::Check { file } => {
            let cert = load_cert(&file)?;
            match check(&cert) {
                Ok(r) => {
                    print_report(&r);
                    if r.flags.iter().any(|f| f.is_theorem_violation()) {
                        Ok(3)
                    } else {
                        Ok(0)
                    }
                }
                Err(e) => {
                    println!("step-failure: {}", e);
                    Ok(2)
                }
            }
        }
        Cmd::Gen(g) => run_gen(g),
        Cmd::Rulings(RulingsCmd::Count { file, graded }) => {
            let d = load_front(&file)?;
            let ungraded = enumerate_rulings(&d, false);
            let graded_sets =
                if d.components() == 1 { Some(enumerate_rulings(&d, true)) } else { None };
            for s in &ungraded {
                let items: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                println!("ruling switches=[{}]", items.join(","));
            }
            if graded {
                if let Some(gs) = &graded_sets {
                    for s in gs {
                        let items: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                        println!("graded ruling switches=[{}]", items.join(","));
                    }
                }
            }
            let g = graded_sets.as_ref().map(|g| g.len().to_string()).unwrap_or_else(|| "-".into());
            println!("RULINGS {} {}", ungraded.len(), g);
            Ok(0)
        }
        Cmd::Corpus(CorpusCmd::Verify { dir, jobs }) => corpus_verify(&dir, jobs),
    }
}

fn run_gen(g: GenCmd) -> Result<u8, String> {
    match g {
        GenCmd::Endo(a) => {
            let d = load_front(&a.file)?;
            let cert = endocobordism(&d, a.k).map_err(|e| e.to_string())?;
            write_cert(&a.out, &cert)?;
            let r = check(&cert).map_err(|e| e.to_string())?;
            print_report(&r);
            Ok(0)
        }
        GenCmd::Tounknot(a) => {
            let d = load_front(&a.file)?;
            let cert = to_unknot(&d).map_err(|e| e.to_string())?;
            write_cert(&a.out, &cert)?;
            let r = check(&cert).map_err(|e| e.to_string())?;
            print_report(&r);
            Ok(0)
        }
        GenCmd::Reverse(a) => {
            let down = load_cert(&a.file)?;
            let up = reverse_to_stabilized(&down).map_err(|e| e.to_string())?;
            write_cert(&a.out, &up)?;
            let r = check(&up).map_err(|e| e.to_string())?;
            print_report(&r);
            Ok(0)
        }
        GenCmd::Stab(a) => {
            let d = load_front(&a.file)?;
            let sign = match a.sign.as_str() {
                "plus" | "+" => Sign::Plus,
                "minus" | "-" => Sign::Minus,
                other => return Err(format!("bad sign `{}`", other)),
            };
            let out = stabilize(&d, StabSite { gap: a.gap, strand: a.strand, sign })
                .map_err(|e| e.to_string())?;
            std::fs::write(&a.out, format!("{}\n", serialize_front(&out)))
                .map_err(|e| e.to_string())?;
            println!("{}", serialize_front(&out));
            Ok(0)
        }
        GenCmd::Between(a) => {
            let d1 = load_front(&a.top)?;
            let d2 = load_front(&a.bottom)?;
            let ft = match &a.seed {
                Some(p) => Some(KnotPathData { seed: load_front(p)? }),
                None => None,
            };
            let cert = between_stabilized(&d1, &d2, ft.as_ref(), a.depth, node_budget_from_env())
                .map_err(|e| e.to_string())?;
            write_cert(&a.out, &cert)?;
            let r = check(&cert).map_err(|e| e.to_string())?;
            print_report(&r);
            Ok(0)
        }
        GenCmd::Family(a) => {
            let params = match a.family.as_str() {
                "twist" => FamilyParams::TwistKnot { m: a.m, variant: a.variant },
                "negtorus" => FamilyParams::NegTorus { p: a.p, k: a.k, n1: a.n1, n2: a.n2 },
                other => return Err(format!("unknown family `{}`", other)),
            };
            let d = make_family(&params).map_err(|e| e.to_string())?;
            std::fs::write(&a.out, format!("{}\n", serialize_front(&d)))
                .map_err(|e| e.to_string())?;
            println!("{}", serialize_front(&d));
            if a.fill {
                let cert = fill_family(&params).map_err(|e| e.to_string())?;
                let fill_path = a.out.with_extension("lcob");
                write_cert(&fill_path, &cert)?;
                let r = check(&cert).map_err(|e| e.to_string())?;
                print_report(&r);
            }
            Ok(0)
        }
    }
}

fn corpus_verify(dir: &Path, jobs: usize) -> Result<u8, String> {
    let mut fronts = Vec::new();
    let mut certs = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let mut entries: Vec<_> = std::fs::read_dir(&d)
            .map_err(|e| format!("cannot read {}: {}", d.display(), e))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|e| e == "front") {
                fronts.push(p);
            } else if p.extension().is_some_and(|e| e == "lcob") {
                certs.push(p);
            }
        }
    }
    fronts.sort();
    certs.sort();

    for f in &fronts {
        let d = load_front(f)?;
        println!("front {} events={} components={}", f.display(), d.len(), d.components());
    }

    type Verified =
        Result<(String, CobordismCertificate, legcalc_core::cobordism::CobordismReport), String>;
    let verify_one = |p: &PathBuf| -> Verified {
        let cert = load_cert(p)?;
        let r = check(&cert).map_err(|e| format!("{}: {}", p.display(), e))?;
        Ok((p.display().to_string(), cert, r))
    };

    let results: Vec<Verified> = if jobs > 1 && !certs.is_empty() {
        std::thread::scope(|scope| {
            let chunk = certs.len().div_ceil(jobs).max(1);
            let handles: Vec<_> = certs
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(verify_one).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        })
    } else {
        certs.iter().map(verify_one).collect()
    };

    let mut summaries = Vec::new();
    let mut violation = false;
    for res in results {
        let (name, cert, report) = res?;
        let orient = if report.orientable { "orientable" } else { "non-orientable" };
        println!(
            "cert {} pinches={} cups={} {} flags={}",
            name,
            report.pinches,
            report.cups,
            orient,
            report.flags.len()
        );
        if report.flags.iter().any(|f| f.is_theorem_violation()) {
            violation = true;
        }
        summaries.push(CertSummary::from_report(&name, &cert, &report));
    }

    let flags = session_consistency(&summaries);
    for f in &flags {
        println!("{}", f);
        if f.is_theorem_violation() {
            violation = true;
        }
    }

    // fillability cross-check for every corpus front
    for f in &fronts {
        let d = load_front(f)?;
        let rep = fillability_report(&d, &summaries);
        let graded = rep.graded.map(|g| g.to_string()).unwrap_or_else(|| "-".into());
        println!(
            "rulings {} ungraded={} graded={} filling={}",
            f.display(),
            rep.ungraded,
            graded,
            rep.has_filling
        );
        for flag in &rep.flags {
            println!("{}", flag);
            if flag.is_theorem_violation() {
                violation = true;
            }
        }
    }

    if violation {
        Ok(3)
    } else {
        println!("corpus ok: {} fronts, {} certificates", fronts.len(), certs.len());
        Ok(0)
    }
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}
