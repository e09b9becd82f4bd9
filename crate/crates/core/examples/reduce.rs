//! Dev tool: iteratively shorten a word by bounded searches for any strictly
//! shorter isotopic word, printing the full move list.
use legcalc_core::front::*;
use legcalc_core::moves::*;
use std::collections::{HashMap, VecDeque};

fn front(w: &str) -> FrontDiagram {
    let t: Vec<&str> = w.split_whitespace().collect();
    FrontDiagram::new(parse_event_tokens(&t, 0).unwrap()).unwrap()
}

fn shorten(d: &FrontDiagram, depth: usize, budget: usize) -> Option<Vec<IsotopyMove>> {
    let (c0, n0) = commutation_normal_form(d);
    let mut seen: HashMap<FrontDiagram, Option<(FrontDiagram, Vec<IsotopyMove>)>> = HashMap::new();
    seen.insert(c0.clone(), None);
    let mut q = VecDeque::new();
    q.push_back((c0.clone(), 0usize));
    while let Some((w, dist)) = q.pop_front() {
        if dist >= depth {
            continue;
        }
        for (rep, commutes) in commutation_closure(&w, 4, 64) {
            for m in enumerate_moves(&rep) {
                if m.kind == MoveKind::Commute {
                    continue;
                }
                let Ok(next) = apply_move(&rep, &m) else { continue };
                let (canon, norm) = commutation_normal_form(&next);
                if seen.contains_key(&canon) {
                    continue;
                }
                let mut edge = commutes.clone();
                edge.push(m);
                edge.extend(norm);
                seen.insert(canon.clone(), Some((w.clone(), edge)));
                if canon.len() < d.len() {
                    let mut path = Vec::new();
                    let mut cur = canon;
                    while let Some(Some((parent, e))) = seen.get(&cur).cloned() {
                        let mut ee = e;
                        ee.extend(path);
                        path = ee;
                        cur = parent;
                    }
                    let mut all = n0.clone();
                    all.extend(path);
                    return Some(all);
                }
                if seen.len() > budget {
                    return None;
                }
                q.push_back((canon, dist + 1));
            }
        }
    }
    None
}

fn main() {
    let a: Vec<String> = std::env::args().collect();
    let mut cur = front(&a[1]);
    let depth: usize = a.get(2).map(|s| s.parse().unwrap()).unwrap_or(5);
    let budget: usize = a.get(3).map(|s| s.parse().unwrap()).unwrap_or(300_000);
    let mut all: Vec<IsotopyMove> = Vec::new();
    while cur.len() > 2 {
        match shorten(&cur, depth, budget) {
            Some(moves) => {
                for m in moves {
                    cur = apply_move(&cur, &m).unwrap();
                    all.push(m);
                }
                eprintln!("-> {} ({} events)", cur, cur.len());
            }
            None => break,
        }
    }
    for m in &all {
        println!("MOVE {}", m);
    }
    eprintln!("final: {}", cur);
}
