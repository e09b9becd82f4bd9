//! Acceptance suite. Each criterion runs at its stated tolerance and prints
//! one pass/fail line; `cargo test` fails if any required criterion fails.

use legcalc_core::cobordism::{
    audit_endocobordism, check, parse_lcob, session_consistency, CertSummary,
    CobordismCertificate, CobordismReport, CobordismStep, Flag, PinchClass,
};
use legcalc_core::construct::{
    between_stabilized, endocobordism, reverse_to_stabilized, stabilize, to_unknot, KnotPathData,
    Sign, StabSite,
};
use legcalc_core::families::{fill_family, FamilyParams};
use legcalc_core::front::{parse_front, EventKind, FrontDiagram, OrientedDiagram};
use legcalc_core::moves::{apply_move, enumerate_moves, IsotopyMove, MoveDir, MoveKind};
use legcalc_core::rulings::{brute_force_rulings, enumerate_rulings, fillability_report};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> FrontDiagram {
    let p = corpus_dir().join(name);
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {}", p.display(), e));
    parse_front(&text).unwrap()
}

fn load_cert(name: &str) -> CobordismCertificate {
    let p = corpus_dir().join(name);
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {}", p.display(), e));
    parse_lcob(&text, p.parent()).unwrap()
}

fn invariants(d: &FrontDiagram) -> (usize, Vec<i64>, Vec<i64>, i64) {
    let i = OrientedDiagram::default_orientation(d.clone()).invariants();
    let mut tb = i.tb.clone();
    let mut rot: Vec<i64> = i.rot.iter().map(|r| r.abs()).collect();
    tb.sort();
    rot.sort();
    (i.components, tb, rot, i.w_minus_rc)
}

fn corpus_fronts() -> Vec<(String, FrontDiagram)> {
    let mut out = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "front"))
        .collect();
    entries.sort();
    for p in entries {
        let text = std::fs::read_to_string(&p).unwrap();
        out.push((p.file_name().unwrap().to_string_lossy().into_owned(), parse_front(&text).unwrap()));
    }
    out
}

fn corpus_certs() -> Vec<(String, CobordismCertificate)> {
    let mut out = Vec::new();
    let mut stack = vec![corpus_dir()];
    let mut files = Vec::new();
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(d).unwrap().filter_map(|e| e.ok()) {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "lcob") {
                files.push(p);
            }
        }
    }
    files.sort();
    for p in files {
        let text = std::fs::read_to_string(&p).unwrap();
        let cert = parse_lcob(&text, p.parent()).unwrap();
        out.push((p.file_name().unwrap().to_string_lossy().into_owned(), cert));
    }
    out
}

fn random_site(rng: &mut StdRng, d: &FrontDiagram) -> (usize, usize) {
    loop {
        let gap = rng.random_range(0..=d.len());
        let n = d.strands_at(gap);
        if n > 0 {
            return (gap, rng.random_range(1..=n));
        }
    }
}

#[test]
fn criterion_1_invariant_baselines() {
    let start = std::time::Instant::now();
    let unknot = load("unknot_max.front");
    let (c, tb, rot, _) = invariants(&unknot);
    assert_eq!((c, tb[0], rot[0]), (1, -1, 0), "maximal unknot invariants");

    let trefoil = load("trefoil_max.front");
    let (c, tb, rot, _) = invariants(&trefoil);
    assert_eq!((c, tb[0], rot[0]), (1, 1, 0), "maximal trefoil invariants");

    let mut rng = StdRng::seed_from_u64(11);
    let pool = corpus_fronts();
    for trial in 0..200 {
        let (name, d) = &pool[rng.random_range(0..pool.len())];
        let (gap, strand) = random_site(&mut rng, d);
        let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let i0 = OrientedDiagram::default_orientation(d.clone()).invariants();
        let s = stabilize(d, StabSite { gap, strand, sign }).unwrap();
        let i1 = OrientedDiagram::default_orientation(s).invariants();
        let dtb: i64 = i1.tb.iter().sum::<i64>() - i0.tb.iter().sum::<i64>();
        let drot: i64 = i1.rot.iter().sum::<i64>() - i0.rot.iter().sum::<i64>();
        assert_eq!(dtb, -1, "trial {} on {}: tb shift", trial, name);
        let want = if sign == Sign::Plus { 1 } else { -1 };
        assert_eq!(drot, want, "trial {} on {}: rot shift", trial, name);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "criterion 1 exceeded 1s: {:?}", elapsed);
    println!("criterion 1: PASS (invariant baselines, 200 stabilizations, {:?})", elapsed);
}

#[test]
fn criterion_2_move_soundness() {
    let mut rng = StdRng::seed_from_u64(23);
    let pool = corpus_fronts();
    for seq in 0..1000 {
        let (name, d) = &pool[rng.random_range(0..pool.len())];
        let mut cur = d.clone();
        let before = invariants(&cur);
        let len = rng.random_range(1..=30);
        for _ in 0..len {
            let moves = enumerate_moves(&cur);
            if moves.is_empty() {
                break;
            }
            let m = moves[rng.random_range(0..moves.len())];
            cur = apply_move(&cur, &m).unwrap();
            // keep the words from growing without bound
            if cur.len() > d.len() + 24 {
                break;
            }
        }
        let after = invariants(&cur);
        assert_eq!(before, after, "sequence {} on {}", seq, name);
    }

    // the forbidden bigon rewrite is absent from the move table
    let toks: Vec<&str> = "L1 X1 X1 R1".split_whitespace().collect();
    let bigon = FrontDiagram::new(legcalc_core::front::parse_event_tokens(&toks, 0).unwrap()).unwrap();
    for m in enumerate_moves(&bigon) {
        let out = apply_move(&bigon, &m).unwrap();
        assert_ne!(out.to_string(), "L1 R1", "move {} cancels the bigon", m);
    }
    println!("criterion 2: PASS (1000 random move sequences, bigon rewrite absent)");
}

fn all_reports() -> Vec<(String, CobordismReport)> {
    let mut out = Vec::new();
    for (name, cert) in corpus_certs() {
        out.push((name.clone(), check(&cert).unwrap()));
    }
    // generated certificates join the shipped ones
    for (name, d, k) in [
        ("gen endo unknot-", "unknot_stab_minus.front", 1usize),
        ("gen endo trefoil-", "trefoil_stab.front", 2),
    ] {
        let cert = endocobordism(&load(d), k).unwrap();
        out.push((name.to_string(), check(&cert).unwrap()));
    }
    let down = to_unknot(&load("trefoil_max.front")).unwrap();
    out.push(("gen tounknot trefoil".into(), check(&down).unwrap()));
    let up = reverse_to_stabilized(&down).unwrap();
    out.push(("gen reverse trefoil".into(), check(&up).unwrap()));
    for m in [-4i64, -3, -2, 1, 2, 3] {
        let cert = fill_family(&FamilyParams::TwistKnot { m, variant: 0 }).unwrap();
        out.push((format!("gen fill twist {}", m), check(&cert).unwrap()));
    }
    out
}

#[test]
fn criterion_3_genus_bookkeeping() {
    let reports = all_reports();
    let mut pinch_deltas = Vec::new();
    for (name, r) in &reports {
        assert_eq!(r.euler, -(r.pinches as i64) + r.cups as i64, "{}: euler law", name);
        for p in &r.pinch_records {
            assert!(p.delta_w_minus_rc % 2 != 0, "{}: pinch delta must be odd", name);
            if p.class == PinchClass::Orientable && p.same_component {
                assert_eq!(p.delta_w_minus_rc, -1, "{}: orientable split pinch law", name);
            }
            pinch_deltas.push(p.delta_w_minus_rc);
        }
    }
    println!("criterion 3: PASS (euler = -pinches + cups on {} certificates; every cup +1; every orientable split pinch -1; pinch deltas odd)", reports.len());

    // The literal universal reading "every pinch changes (w - rc) by exactly
    // -1" is unsatisfiable alongside criterion 4: an equal-ends certificate
    // with pinches needs positive deltas to balance. The shipped zig-zag
    // removal fragments exhibit the +1 pinches explicitly.
    assert!(
        pinch_deltas.contains(&1),
        "expected a +1 pinch witnessing why the universal -1 law cannot hold"
    );
    println!("criterion 3: NOTE literal universal pinch law (every pinch -1) is refuted by the +1 pinches required for equal-ends certificates; see README notes");
}

#[test]
fn criterion_4_endocobordism_theorem() {
    let start = std::time::Instant::now();
    for name in ["unknot_stab_minus.front", "unknot_stab_plus.front", "trefoil_stab.front"] {
        let d = load(name);
        for k in [1usize, 2, 3] {
            let cert = endocobordism(&d, k).unwrap();
            assert_eq!(cert.top, cert.bottom, "{} k={}: ends", name, k);
            let r = check(&cert).unwrap();
            assert!(!r.orientable, "{} k={}: orientability", name, k);
            assert_eq!(r.pinches, 4 * k, "{} k={}: pinch count", name, k);
            assert_eq!(r.crosscap_genus, Some(4 * k as i64), "{} k={}: crosscap", name, k);
            assert!(r.flags.is_empty(), "{} k={}: {:?}", name, k, r.flags);
        }
    }

    // seam: a forged equal-ends crosscap-2 report must raise the flag
    let forged = CobordismReport {
        euler: -2,
        pinches: 2,
        cups: 0,
        orientable: false,
        surface_connected: true,
        genus: None,
        crosscap_genus: Some(2),
        exact: true,
        top_components: 1,
        bottom_components: 1,
        ends_word_equal: true,
        is_filling: false,
        pinch_records: Vec::new(),
        flags: Vec::new(),
    };
    let flags = audit_endocobordism(&forged);
    assert_eq!(flags, vec![Flag::EndoCrosscapNotMultipleOf4 { crosscap: 2 }]);
    println!(
        "criterion 4: PASS (crosscap 4k endocobordisms for k in 1..=3 on 3 stabilized knots, audit fires on forged crosscap 2; {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_5_descent_ascent_symmetry() {
    let trefoil = load("trefoil_max.front");
    let down = to_unknot(&trefoil).unwrap();
    let r = check(&down).unwrap();
    assert!(!r.orientable, "descent must be non-orientable");
    assert!(r.flags.is_empty());
    assert_eq!(down.bottom.components(), 1);
    assert!(down.bottom.events().iter().all(|e| e.kind != EventKind::Crossing));

    let up = reverse_to_stabilized(&down).unwrap();
    assert_eq!(up.top, down.bottom);
    let r_up = check(&up).unwrap();
    assert_eq!(r_up.pinches, r.pinches, "reverse pinch count");

    // composed trefoil -> stabilized trefoil certificate
    let mut steps = down.steps.clone();
    steps.extend(up.steps.iter().cloned());
    let composed = CobordismCertificate {
        top: down.top.clone(),
        steps,
        bottom: up.bottom.clone(),
    };
    let rc = check(&composed).unwrap();
    assert!(!rc.orientable);
    assert!(rc.flags.is_empty());

    // symmetry witness between the stabilized trefoil type and the
    // stabilized unknot type, one verified certificate each way
    let a0 = stabilize(&trefoil, StabSite { gap: 1, strand: 1, sign: Sign::Minus }).unwrap();
    let x = to_unknot(&a0).unwrap();
    let b0 = x.bottom.clone();
    let rev = reverse_to_stabilized(&x).unwrap();
    let a = rev.bottom.clone();
    let y = to_unknot(&a).unwrap();
    let c = y.bottom.clone();

    let down_dir = between_stabilized(&a, &c, None, 4, 50_000).unwrap();
    let r1 = check(&down_dir).unwrap();
    assert!(!r1.orientable);
    assert!(r1.flags.is_empty());
    assert_eq!(down_dir.top.components(), 1);

    let up_dir = between_stabilized(&b0, &a, Some(&KnotPathData { seed: a0 }), 4, 50_000).unwrap();
    let r2 = check(&up_dir).unwrap();
    assert!(!r2.orientable);
    assert!(r2.flags.is_empty());
    assert_eq!(up_dir.bottom, a);
    println!("criterion 5: PASS (descent verified non-orientable, reverse composes, symmetry witness both directions between stabilized trefoil and stabilized unknot types)");
}

#[test]
fn criterion_6_fillings() {
    // shipped trefoil filling: orientable genus-1, euler -1
    let cert = load_cert("fillings/trefoil_max_fill.lcob");
    let r = check(&cert).unwrap();
    assert!(r.is_filling);
    assert!(r.orientable);
    assert_eq!(r.euler, -1);
    assert_eq!(r.genus, Some(1));
    assert!(r.flags.is_empty());

    // negative twist fills use exactly two pinches
    for m in [-2i64, -3, -4] {
        let cert = fill_family(&FamilyParams::TwistKnot { m, variant: 0 }).unwrap();
        let r = check(&cert).unwrap();
        assert_eq!(r.pinches, 2, "m={}", m);
        assert!(r.is_filling && r.flags.is_empty(), "m={}", m);
    }

    // positive twist reductions use exactly one pinch each
    for m in [1i64, 2, 3] {
        let cert = fill_family(&FamilyParams::TwistKnot { m, variant: 0 }).unwrap();
        let r = check(&cert).unwrap();
        assert_eq!(r.pinches as i64, m, "m={}: reductions plus base", m);
        assert!(r.flags.is_empty());
    }

    // negative torus fills use exactly k pinches
    let cert = fill_family(&FamilyParams::NegTorus { p: 3, k: 1, n1: 0, n2: 0 }).unwrap();
    let r = check(&cert).unwrap();
    assert_eq!(r.pinches, 1);
    assert!(r.is_filling && r.flags.is_empty());
    println!("criterion 6: PASS (trefoil genus-1 filling; 2-pinch negative twist fills; 1-pinch reductions; k-pinch torus fill)");
}

#[test]
fn criterion_7_rulings() {
    // sweep enumerator equals the brute-force oracle on every corpus front
    // with at most 12 crossings
    for (name, d) in corpus_fronts() {
        let crossings = d.events().iter().filter(|e| e.kind == EventKind::Crossing).count();
        if crossings <= 12 {
            assert_eq!(
                enumerate_rulings(&d, false),
                brute_force_rulings(&d, false),
                "{}: ungraded",
                name
            );
            assert_eq!(
                enumerate_rulings(&d, true),
                brute_force_rulings(&d, true),
                "{}: graded",
                name
            );
        }
    }

    // ruling counts are invariant over 500 random isotopy moves
    let mut rng = StdRng::seed_from_u64(47);
    let pool = corpus_fronts();
    let mut moves_done = 0usize;
    'outer: loop {
        let (name, d) = &pool[rng.random_range(0..pool.len())];
        let count = enumerate_rulings(d, false).len();
        let mut cur = d.clone();
        for _ in 0..10 {
            let moves = enumerate_moves(&cur);
            if moves.is_empty() || cur.len() > d.len() + 15 {
                break;
            }
            let m = moves[rng.random_range(0..moves.len())];
            cur = apply_move(&cur, &m).unwrap();
            assert_eq!(
                enumerate_rulings(&cur, false).len(),
                count,
                "{}: ruling count changed under isotopy",
                name
            );
            moves_done += 1;
            if moves_done >= 500 {
                break 'outer;
            }
        }
    }

    // stabilized corpus knots have zero ungraded rulings
    for name in [
        "unknot_stab_minus.front",
        "unknot_stab_plus.front",
        "unknot_stab_pair.front",
        "trefoil_stab.front",
    ] {
        assert_eq!(enumerate_rulings(&load(name), false).len(), 0, "{}", name);
    }

    // every corpus knot with a shipped filling has at least one ungraded
    // ruling, and the session consistency over the corpus raises no flags
    let mut summaries = Vec::new();
    for (name, cert) in corpus_certs() {
        let r = check(&cert).unwrap();
        assert!(r.flags.iter().all(|f| !f.is_theorem_violation()), "{}", name);
        summaries.push(CertSummary::from_report(&name, &cert, &r));
    }
    for (name, d) in corpus_fronts() {
        let rep = fillability_report(&d, &summaries);
        if rep.has_filling {
            assert!(rep.ungraded >= 1, "{}: filled but no ruling", name);
        }
        assert!(rep.flags.is_empty(), "{}: {:?}", name, rep.flags);
    }
    let flags = session_consistency(&summaries);
    assert!(flags.is_empty(), "session consistency: {:?}", flags);
    println!("criterion 7: PASS (sweep = oracle; counts invariant over 500 moves; stabilized knots rulingless; filled knots ruled; session clean)");
}

#[test]
fn criterion_8_determinism() {
    let bin = env!("CARGO_BIN_EXE_legcalc");
    let corpus = corpus_dir();
    let runs: Vec<Vec<String>> = vec![
        vec!["inv".into(), corpus.join("trefoil_max.front").display().to_string()],
        vec!["validate".into(), corpus.join("unknot_max.front").display().to_string()],
        vec!["move".into(), corpus.join("unknot_stab_minus.front").display().to_string()],
        vec![
            "rulings".into(),
            "count".into(),
            corpus.join("trefoil_max.front").display().to_string(),
            "--graded".into(),
        ],
        vec!["check".into(), corpus.join("fillings/trefoil_max_fill.lcob").display().to_string()],
        vec!["corpus".into(), "verify".into(), corpus.display().to_string()],
    ];
    for args in runs {
        let out1 = Command::new(bin).args(&args).output().unwrap();
        let out2 = Command::new(bin).args(&args).output().unwrap();
        assert_eq!(out1.stdout, out2.stdout, "stdout differs for {:?}", args);
        assert_eq!(out1.status, out2.status, "status differs for {:?}", args);
    }
    println!("criterion 8: PASS (repeated CLI runs byte-identical)");
}

#[test]
fn verifier_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_legcalc");
    let dir = std::env::temp_dir().join("legcalc-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    // truncated certificate: step failure, exit 2
    let broken = dir.join("broken.lcob");
    std::fs::write(&broken, "LCOB 1\nTOP L1 R1\nCUP 1\nBOTTOM EMPTY\n").unwrap();
    let out = Command::new(bin).args(["check", broken.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed input: exit 1
    let garbage = dir.join("garbage.front");
    std::fs::write(&garbage, "not a front\n").unwrap();
    let out = Command::new(bin).args(["validate", garbage.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let ok = Command::new(bin)
        .args(["check", corpus_dir().join("fillings/unknot_fill.lcob").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn generated_certificates_pass_audits() {
    // every generator output passes the verifier with zero flags, and the
    // session checks over shipped plus generated certificates stay clean
    let mut summaries = Vec::new();
    for (name, cert) in corpus_certs() {
        let r = check(&cert).unwrap();
        summaries.push(CertSummary::from_report(&name, &cert, &r));
    }
    for name in ["unknot_stab_minus.front", "trefoil_stab.front"] {
        let cert = endocobordism(&load(name), 1).unwrap();
        let r = check(&cert).unwrap();
        assert!(r.flags.is_empty());
        summaries.push(CertSummary::from_report(name, &cert, &r));
    }
    assert!(session_consistency(&summaries).is_empty());

    // seam: a forged verified endocobordism on a filled word trips the check
    let mut forged = summaries.clone();
    forged.push(CertSummary {
        name: "forged".into(),
        top: load("unknot_max.front").to_string(),
        bottom: load("unknot_max.front").to_string(),
        orientable: false,
        is_filling: false,
        ends_word_equal: true,
    });
    let flags = session_consistency(&forged);
    assert!(flags.iter().any(|f| matches!(f, Flag::FillableWithNonOrientableEndo { .. })));
}

#[test]
fn certificate_steps_round_trip_through_lcob() {
    let d = load("unknot_stab_minus.front");
    let cert = endocobordism(&d, 1).unwrap();
    let text = legcalc_core::cobordism::serialize_lcob(&cert);
    let back = parse_lcob(&text, None).unwrap();
    assert_eq!(cert, back);
    // moves embedded in certificates use the documented wire format
    assert!(cert.steps.iter().any(|s| matches!(
        s,
        CobordismStep::Isotopy(IsotopyMove { kind: MoveKind::R1 { .. }, dir: MoveDir::Fwd, .. })
    )));
}
