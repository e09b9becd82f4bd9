//! Parametric knot families and their filling schedules.
//!
//! Twist knots come in two shapes: the positive-box form (plain crossings in
//! the box) for m >= 1 and the cusped-tangle form for m <= -2. The negative
//! torus family ships its smallest member. Fillings are assembled from fixed
//! pinch sites plus a bounded word-shortening search, and every emitted
//! certificate is expected to be re-verified by the caller.

use crate::cobordism::{replay, CobordismCertificate, CobordismStep};
use crate::front::{Event, FrontDiagram, OrientedDiagram};
use crate::moves::{
    apply_move, commutation_closure, commutation_normal_form, enumerate_moves, IsotopyMove,
    MoveDir, MoveKind,
};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyParams {
    /// Twist knot with `m` half twists in the box; `m = 0, -1` are unknots
    /// and rejected. `variant 1` is the vertical mirror (rotation negated).
    TwistKnot { m: i64, variant: u8 },
    /// Negative torus knot T(-p, 2k) with p odd, p > 2k > 0 and
    /// p = (1 + n1 + n2)(2k) + e, 0 < e < 2k.
    NegTorus { p: u64, k: u64, n1: u64, n2: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("family member not constructible in this tool: {0}")]
    Unsupported(String),
    #[error("fill schedule search exhausted: {0}")]
    SearchBound(String),
    #[error("internal: {0}")]
    Internal(String),
}

fn word(tokens: &[Event]) -> Result<FrontDiagram, FamilyError> {
    FrontDiagram::new(tokens.to_vec()).map_err(|e| FamilyError::Internal(e.to_string()))
}

/// Flip a word upside down; tb is unchanged and rotation negates.
pub fn vertical_flip(d: &FrontDiagram) -> FrontDiagram {
    let mut out = Vec::with_capacity(d.len());
    let mut n = 0usize;
    for ev in d.events() {
        let p = ev.pos;
        let flipped = match ev.kind {
            crate::front::EventKind::LeftCusp => Event::left(n + 2 - p),
            crate::front::EventKind::RightCusp => Event::right(n - p),
            crate::front::EventKind::Crossing => Event::crossing(n - p),
        };
        n = (n as isize + ev.delta()) as usize;
        out.push(flipped);
    }
    FrontDiagram::new(out).expect("flip preserves validity")
}

fn twist_pos_word(m: u64) -> Vec<Event> {
    // clasp frame with m plain crossings in the box
    let mut evs = vec![
        Event::left(1),
        Event::left(2),
        Event::crossing(1),
        Event::left(2),
        Event::crossing(1),
    ];
    for _ in 0..m {
        evs.push(Event::crossing(3));
    }
    evs.extend([Event::right(2), Event::right(2), Event::right(1)]);
    evs
}

fn twist_neg_word(j: u64) -> Vec<Event> {
    // clasp frame with j cusped half-twist tangles in the box
    let mut evs = vec![Event::left(1), Event::left(3), Event::crossing(2)];
    for _ in 0..j {
        evs.extend([Event::left(5), Event::crossing(4), Event::right(3)]);
    }
    evs.extend([
        Event::crossing(2),
        Event::crossing(2),
        Event::right(1),
        Event::right(1),
    ]);
    evs
}

pub fn make_family(params: &FamilyParams) -> Result<FrontDiagram, FamilyError> {
    let base = match params {
        FamilyParams::TwistKnot { m, variant } => {
            if *m == 0 || *m == -1 {
                return Err(FamilyError::InvalidParams(format!("K_{} is an unknot", m)));
            }
            if *variant > 1 {
                return Err(FamilyError::InvalidParams("variant must be 0 or 1".into()));
            }
            let d = if *m >= 1 {
                word(&twist_pos_word(*m as u64))?
            } else {
                word(&twist_neg_word((m.unsigned_abs()) - 2))?
            };
            if *variant == 1 {
                vertical_flip(&d)
            } else {
                d
            }
        }
        FamilyParams::NegTorus { p, k, n1, n2 } => {
            let two_k = 2 * k;
            if *k == 0 || *p <= two_k || p % 2 == 0 {
                return Err(FamilyError::InvalidParams(
                    "need p odd and p > 2k > 0".into(),
                ));
            }
            let m = 1 + n1 + n2;
            let e = p.checked_sub(m * two_k).unwrap_or(0);
            if e == 0 || e >= two_k {
                return Err(FamilyError::InvalidParams(format!(
                    "p = (1+n1+n2)(2k)+e requires 0 < e < 2k, got e = {}",
                    *p as i64 - (m * two_k) as i64
                )));
            }
            if (*p, *k) == (3, 1) {
                word(&twist_pos_word(1))?
            } else {
                return Err(FamilyError::Unsupported(format!(
                    "no verified front for T(-{}, {}) at this scale",
                    p, two_k
                )));
            }
        }
    };
    Ok(base)
}

fn apply_steps(
    d: &FrontDiagram,
    steps: &[CobordismStep],
) -> Result<FrontDiagram, FamilyError> {
    let mut cur = d.clone();
    for s in steps {
        let cert = CobordismCertificate {
            top: cur.clone(),
            steps: vec![*s],
            bottom: FrontDiagram::empty(),
        };
        cur = match replay(&cert) {
            Err(crate::cobordism::ReplayError::WrongBottom { got, .. }) => {
                let toks: Vec<&str> = got.split_whitespace().collect();
                let evs = crate::front::parse_event_tokens(&toks, 0)
                    .map_err(|e| FamilyError::Internal(e.to_string()))?;
                FrontDiagram::new(evs).map_err(|e| FamilyError::Internal(e.to_string()))?
            }
            Ok(ds) => ds.last().unwrap().clone(),
            Err(e) => return Err(FamilyError::Internal(e.to_string())),
        };
    }
    Ok(cur)
}

/// Bounded search for a strictly shorter isotopic word; used to normalize
/// split unknot components down to literal circles.
pub fn shorten_once(
    d: &FrontDiagram,
    depth: usize,
    budget: usize,
) -> Option<Vec<IsotopyMove>> {
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

/// Repeated shortening plus greedy cups, emptying a diagram whose components
/// are all maximal-tb unknots. Returns the steps or None when the search
/// bound is hit.
pub fn empty_by_cups(
    d: &FrontDiagram,
    depth: usize,
    budget: usize,
) -> Option<Vec<CobordismStep>> {
    let mut steps = Vec::new();
    let mut cur = d.clone();
    loop {
        if cur.is_empty() {
            return Some(steps);
        }
        // cup every literal circle available
        let ev = cur.events();
        let site = (0..ev.len().saturating_sub(1)).find(|&i| {
            ev[i].kind == crate::front::EventKind::LeftCusp
                && ev[i + 1].kind == crate::front::EventKind::RightCusp
                && ev[i].pos == ev[i + 1].pos
        });
        if let Some(i) = site {
            steps.push(CobordismStep::Cup { gap: i });
            let mut evs = ev.to_vec();
            evs.drain(i..i + 2);
            cur = FrontDiagram::new(evs).ok()?;
            continue;
        }
        let moves = shorten_once(&cur, depth, budget)?;
        for m in moves {
            cur = apply_move(&cur, &m).ok()?;
            steps.push(CobordismStep::Isotopy(m));
        }
    }
}

/// The 2-step reduction from the positive twist box: one pinch beside the
/// last box crossing plus a kink cancellation.
fn reduce_pos_twist_steps(m: u64) -> Vec<CobordismStep> {
    // box crossings occupy [5, 5+m); pinch before the last one
    let last = 5 + m as usize - 1;
    vec![
        CobordismStep::Pinch { gap: last, pos: 2 },
        CobordismStep::Isotopy(IsotopyMove {
            kind: MoveKind::R1 { side: crate::moves::R1Side::Above, strand: 2 },
            gap: last + 1,
            dir: MoveDir::Inv,
        }),
    ]
}

pub fn fill_family(params: &FamilyParams) -> Result<CobordismCertificate, FamilyError> {
    let top = make_family(params)?;
    let depth = 6;
    let budget = 400_000;
    let steps: Vec<CobordismStep> = match params {
        FamilyParams::TwistKnot { m, variant } => {
            if *variant != 0 {
                return Err(FamilyError::Unsupported(
                    "fill schedules ship for variant 0".into(),
                ));
            }
            if *m >= 1 {
                // reduce the box one crossing at a time, then fill the base
                let mut steps = Vec::new();
                let mut cur = top.clone();
                for j in (2..=*m as u64).rev() {
                    let frag = reduce_pos_twist_steps(j);
                    cur = apply_steps(&cur, &frag)?;
                    steps.extend(frag);
                }
                let base = fill_neg_torus_base()?;
                let base_top = apply_steps(&cur, &[])?;
                debug_assert_eq!(base_top.to_string(), make_family(&FamilyParams::TwistKnot { m: 1, variant: 0 })?.to_string());
                steps.extend(base);
                steps
            } else {
                fill_neg_twist(&top, (m.unsigned_abs()) - 2, depth, budget)?
            }
        }
        FamilyParams::NegTorus { .. } => fill_neg_torus_base()?,
    };
    let bottom = FrontDiagram::empty();
    let cert = CobordismCertificate { top, steps, bottom };
    replay(&cert).map_err(|e| FamilyError::Internal(e.to_string()))?;
    Ok(cert)
}

/// One surgery then cups for the smallest negative torus knot; the schedule
/// found once by bounded search and frozen.
fn fill_neg_torus_base() -> Result<Vec<CobordismStep>, FamilyError> {
    let mv = |kind, gap, dir| CobordismStep::Isotopy(IsotopyMove { kind, gap, dir });
    use crate::moves::R1Side::*;
    use MoveDir::*;
    use MoveKind::*;
    Ok(vec![
        CobordismStep::Pinch { gap: 5, pos: 2 },
        mv(Commute, 5, Fwd),
        mv(Commute, 4, Fwd),
        mv(Commute, 3, Fwd),
        mv(R1 { side: Below, strand: 1 }, 4, Inv),
        mv(R1 { side: Above, strand: 2 }, 3, Inv),
        mv(R1 { side: Below, strand: 1 }, 1, Inv),
        CobordismStep::Cup { gap: 0 },
    ])
}

/// Two surgeries then cups for the negative twist form: pinch the clasp
/// region, pinch the resulting split link back together, then normalize the
/// maximal unknot down to a literal circle by bounded shortening.
fn fill_neg_twist(
    top: &FrontDiagram,
    j: u64,
    depth: usize,
    budget: usize,
) -> Result<Vec<CobordismStep>, FamilyError> {
    let mut steps: Vec<CobordismStep> = Vec::new();
    if j == 0 {
        // trefoil base: the two marked surgeries of the shipped filling
        steps.push(CobordismStep::Pinch { gap: 3, pos: 1 });
        steps.push(CobordismStep::Pinch { gap: 6, pos: 1 });
    } else {
        steps.push(CobordismStep::Pinch { gap: 3, pos: 3 });
        // the merge site: after the first crossing of the tail
        let tail_x = 3 + 3 * j as usize + 2 + 1;
        steps.push(CobordismStep::Pinch { gap: tail_x, pos: 1 });
    }
    let after = apply_steps(top, &steps)?;
    {
        let inv = OrientedDiagram::default_orientation(after.clone()).invariants();
        if inv.tb.iter().any(|&t| t != -1) {
            return Err(FamilyError::Internal(format!(
                "pinch schedule missed the trivial link: tb {:?}",
                inv.tb
            )));
        }
    }
    let cups = empty_by_cups(&after, depth, budget)
        .ok_or_else(|| FamilyError::SearchBound("trivial-link normalization".into()))?;
    steps.extend(cups);
    Ok(steps)
}
