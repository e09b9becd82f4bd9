//! Development tool: bounded breadth-first search for certificate fragments.
//!
//! Searches over isotopy moves plus (optionally) pinch steps from a start
//! word to a target word, printing the step list in LCOB line format.
//!
//! Usage: discover "<start word>" "<target word>" <max_pinches> <max_len> [budget]

use legcalc_core::cobordism::{replay, CobordismCertificate, CobordismStep};
use legcalc_core::front::{parse_event_tokens, FrontDiagram};
use legcalc_core::moves::{
    apply_move, commutation_normal_form, enumerate_moves, IsotopyMove, MoveDir, MoveKind,
};
use std::collections::{HashMap, VecDeque};

fn front(word: &str) -> FrontDiagram {
    if word.trim().is_empty() {
        return FrontDiagram::empty();
    }
    let toks: Vec<&str> = word.split_whitespace().collect();
    FrontDiagram::new(parse_event_tokens(&toks, 0).unwrap()).unwrap()
}

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    let local = if let Some(i) = args.iter().position(|a| a == "--local") {
        args.remove(i);
        true
    } else {
        false
    };
    if args.len() < 5 {
        eprintln!("usage: discover [--local] <start> <target> <max_pinches> <max_len> [budget]");
        std::process::exit(1);
    }
    let start = front(&args[1]);
    let target = front(&args[2]);
    let max_pinches: usize = args[3].parse().unwrap();
    let max_len: usize = args[4].parse().unwrap();
    let budget: usize = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(2_000_000);

    // with --local the first and last event are ambient and must never be
    // rewritten, so discovered fragments transpose to arbitrary sites
    let window_of = |m: &IsotopyMove| -> (usize, usize) {
        match (m.kind, m.dir) {
            (MoveKind::R1 { .. }, MoveDir::Fwd) => (m.gap, 0),
            (MoveKind::R1 { .. }, MoveDir::Inv) => (m.gap, 3),
            (MoveKind::R2(_), MoveDir::Fwd) => (m.gap, 1),
            (MoveKind::R2(_), MoveDir::Inv) => (m.gap, 3),
            (MoveKind::R3, _) => (m.gap, 3),
            (MoveKind::Commute, _) => (m.gap, 2),
        }
    };
    let move_ok = |m: &IsotopyMove, len: usize| -> bool {
        if !local {
            return true;
        }
        let (at, k) = window_of(m);
        at >= 1 && at + k <= len.saturating_sub(1)
    };
    let pinch_ok = |gap: usize, len: usize| -> bool { !local || (gap >= 1 && gap < len) };

    // canonical pruning would commute ambient events, so in local mode states
    // are raw words
    let canonicalize = |d: &FrontDiagram| -> (FrontDiagram, Vec<IsotopyMove>) {
        if local {
            (d.clone(), Vec::new())
        } else {
            commutation_normal_form(d)
        }
    };
    let (cs, start_norm) = canonicalize(&start);
    let (ct, target_norm) = canonicalize(&target);

    type State = (FrontDiagram, usize);
    let mut seen: HashMap<State, Option<(State, Vec<CobordismStep>)>> = HashMap::new();
    let s0 = (cs.clone(), 0usize);
    seen.insert(s0.clone(), None);
    let mut queue = VecDeque::new();
    queue.push_back(s0);
    let mut found: Option<State> = None;

    'outer: while let Some(state) = queue.pop_front() {
        let (word, pinches) = &state;
        // isotopy edges
        let mut edges: Vec<(FrontDiagram, usize, Vec<CobordismStep>)> = Vec::new();
        for m in enumerate_moves(word) {
            if !move_ok(&m, word.len()) {
                continue;
            }
            if let Ok(next) = apply_move(word, &m) {
                if next.len() > max_len {
                    continue;
                }
                let (canon, norm) = canonicalize(&next);
                let mut steps = vec![CobordismStep::Isotopy(m)];
                steps.extend(norm.into_iter().map(CobordismStep::Isotopy));
                edges.push((canon, *pinches, steps));
            }
        }
        // pinch edges
        if *pinches < max_pinches {
            let counts = word.slab_counts();
            for (gap, &width) in counts.iter().enumerate() {
                if !pinch_ok(gap, word.len()) {
                    continue;
                }
                for pos in 1..width.max(1) {
                    let step = CobordismStep::Pinch { gap, pos };
                    let mut events = word.events().to_vec();
                    events.splice(
                        gap..gap,
                        [
                            legcalc_core::front::Event::right(pos),
                            legcalc_core::front::Event::left(pos),
                        ],
                    );
                    if let Ok(next) = FrontDiagram::new(events) {
                        if next.len() > max_len {
                            continue;
                        }
                        let (canon, norm) = canonicalize(&next);
                        let mut steps = vec![step];
                        steps.extend(norm.into_iter().map(CobordismStep::Isotopy));
                        edges.push((canon, pinches + 1, steps));
                    }
                }
            }
        }
        for (canon, p, steps) in edges {
            let key = (canon.clone(), p);
            if seen.contains_key(&key) {
                continue;
            }
            seen.insert(key.clone(), Some((state.clone(), steps)));
            if canon == ct && p == max_pinches {
                found = Some(key);
                break 'outer;
            }
            if seen.len() > budget {
                eprintln!("budget exceeded ({} states)", seen.len());
                std::process::exit(2);
            }
            queue.push_back(key);
        }
    }

    let Some(goal) = found else {
        eprintln!("not found ({} states explored)", seen.len());
        std::process::exit(3);
    };

    // reconstruct
    let mut steps: Vec<CobordismStep> = Vec::new();
    let mut cur = goal;
    while let Some(Some((parent, edge))) = seen.get(&cur).cloned() {
        let mut e = edge;
        e.extend(steps);
        steps = e;
        cur = parent;
    }
    let mut all = Vec::new();
    all.extend(start_norm.into_iter().map(CobordismStep::Isotopy));
    all.extend(steps);
    for m in target_norm.iter().rev() {
        all.push(CobordismStep::Isotopy(m.inverse()));
    }

    // verify and print
    let cert = CobordismCertificate { top: start.clone(), steps: all.clone(), bottom: target.clone() };
    match replay(&cert) {
        Ok(_) => {
            println!("# {} -> {}", start, target);
            for s in &all {
                println!("{}", s);
            }
            let kinds: Vec<String> = all
                .iter()
                .map(|s| match s {
                    CobordismStep::Isotopy(IsotopyMove { kind: MoveKind::Commute, .. }) => "c".into(),
                    CobordismStep::Isotopy(m) => {
                        if m.dir == MoveDir::Fwd { "I".into() } else { "i".into() }
                    }
                    CobordismStep::Pinch { .. } => "P".into(),
                    CobordismStep::Cup { .. } => "C".into(),
                })
                .collect();
            eprintln!("steps: {} [{}], states: {}", all.len(), kinds.join(""), seen.len());
        }
        Err(e) => {
            eprintln!("internal error: reconstructed fragment does not replay: {}", e);
            std::process::exit(4);
        }
    }
}
