//! Legendrian Reidemeister moves and planar commutations as word rewrites.
//!
//! The move table lives in this file. Each (family, variant) is a fixed pair
//! of word templates with explicit position arithmetic; applicability is a
//! pattern match at the anchor gap. Correctness is established by the
//! invariance test suite (components, tb, rot preserved), not by trusting the
//! table.
//!
//! Families:
//! * `R1` - swallowtail kink on a strand: inserting `L p+1, X p, R p+1`
//!   (kink below) or `L p, X p+1, R p` (kink above) is an isotopy; the new
//!   crossing is positive and cancels the new right cusp in `w - rc`.
//! * `R2` - a strand passes through a cusp point, trading zero crossings for
//!   two. Four variants: left/right cusp x strand above/below.
//! * `R3` - the braid-like triple point `X i, X i+1, X i <-> X i+1, X i, X i+1`.
//! * `Commute` - two adjacent events with disjoint support swap, with index
//!   shifts. The plain bigon rewrite `X i X i <-> (nothing)` is deliberately
//!   absent: a front tangency is a self-intersection of the Legendrian.

use crate::front::{Event, EventKind, FrontDiagram};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum R1Side {
    /// Kink loop dips below the strand: `L p+1, X p, R p+1`.
    Below,
    /// Kink loop rises above the strand: `L p, X p+1, R p`.
    Above,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum R2Kind {
    /// `L j <-> L j-1, X j, X j-1` (strand just above a left cusp).
    LeftAbove,
    /// `L j <-> L j+1, X j, X j+1` (strand pushed below a left cusp).
    LeftBelow,
    /// `R j <-> X j-1, X j, R j-1` (strand just above a right cusp).
    RightAbove,
    /// `R j <-> X j+1, X j, R j+1` (strand below a right cusp).
    RightBelow,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum MoveKind {
    R1 { side: R1Side, strand: usize },
    R2(R2Kind),
    R3,
    Commute,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum MoveDir {
    Fwd,
    Inv,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct IsotopyMove {
    pub kind: MoveKind,
    pub gap: usize,
    pub dir: MoveDir,
}

impl IsotopyMove {
    pub fn inverse(&self) -> IsotopyMove {
        let dir = match self.dir {
            MoveDir::Fwd => MoveDir::Inv,
            MoveDir::Inv => MoveDir::Fwd,
        };
        IsotopyMove { kind: self.kind, gap: self.gap, dir }
    }

    fn family_rank(&self) -> u8 {
        match self.kind {
            MoveKind::R1 { .. } => 0,
            MoveKind::R2(_) => 1,
            MoveKind::R3 => 2,
            MoveKind::Commute => 3,
        }
    }

    fn variant_rank(&self) -> (u8, usize) {
        match self.kind {
            MoveKind::R1 { side, strand } => (if side == R1Side::Below { 0 } else { 1 }, strand),
            MoveKind::R2(v) => (v as u8, 0),
            MoveKind::R3 => (0, 0),
            MoveKind::Commute => (0, 0),
        }
    }

    pub fn sort_key(&self) -> (usize, u8, (u8, usize), u8) {
        (self.gap, self.family_rank(), self.variant_rank(), if self.dir == MoveDir::Fwd { 0 } else { 1 })
    }
}

impl fmt::Display for IsotopyMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (family, variant) = match self.kind {
            MoveKind::R1 { side, strand } => (
                "R1",
                match side {
                    R1Side::Below => format!("b{}", strand),
                    R1Side::Above => format!("a{}", strand),
                },
            ),
            MoveKind::R2(v) => (
                "R2",
                match v {
                    R2Kind::LeftAbove => "la".to_string(),
                    R2Kind::LeftBelow => "lb".to_string(),
                    R2Kind::RightAbove => "ra".to_string(),
                    R2Kind::RightBelow => "rb".to_string(),
                },
            ),
            MoveKind::R3 => ("R3", "-".to_string()),
            MoveKind::Commute => ("COMM", "-".to_string()),
        };
        let dir = match self.dir {
            MoveDir::Fwd => "fwd",
            MoveDir::Inv => "inv",
        };
        write!(f, "{} {} {} {}", family, variant, self.gap, dir)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move {mv} not applicable: {reason}")]
    NotApplicable { mv: String, reason: String },
    #[error("move produced an invalid word: {0}")]
    InvalidResult(String),
}

fn not_applicable(mv: &IsotopyMove, reason: impl Into<String>) -> MoveError {
    MoveError::NotApplicable { mv: mv.to_string(), reason: reason.into() }
}

/// Parse a move from its wire form `<family> <variant> <gap> <fwd|inv>`.
pub fn parse_move(tokens: &[&str]) -> Option<IsotopyMove> {
    if tokens.len() != 4 {
        return None;
    }
    let gap: usize = tokens[2].parse().ok()?;
    let dir = match tokens[3] {
        "fwd" => MoveDir::Fwd,
        "inv" => MoveDir::Inv,
        _ => return None,
    };
    let kind = match tokens[0] {
        "R1" => {
            let v = tokens[1];
            let side = match v.chars().next()? {
                'b' => R1Side::Below,
                'a' => R1Side::Above,
                _ => return None,
            };
            let strand: usize = v[1..].parse().ok()?;
            MoveKind::R1 { side, strand }
        }
        "R2" => MoveKind::R2(match tokens[1] {
            "la" => R2Kind::LeftAbove,
            "lb" => R2Kind::LeftBelow,
            "ra" => R2Kind::RightAbove,
            "rb" => R2Kind::RightBelow,
            _ => return None,
        }),
        "R3" => MoveKind::R3,
        "COMM" => MoveKind::Commute,
        _ => return None,
    };
    Some(IsotopyMove { kind, gap, dir })
}

fn r1_pattern(side: R1Side, p: usize) -> [Event; 3] {
    match side {
        R1Side::Below => [Event::left(p + 1), Event::crossing(p), Event::right(p + 1)],
        R1Side::Above => [Event::left(p), Event::crossing(p + 1), Event::right(p)],
    }
}

/// Commutation of two adjacent events `(a, b)` with disjoint supports.
/// Returns the swapped pair `(b', a')`, or `None` when the events interact.
/// The table is an involution: commuting the result returns `(a, b)`.
pub fn commute_pair(a: Event, b: Event) -> Option<(Event, Event)> {
    use EventKind::*;
    let p = a.pos;
    let q = b.pos;
    match (a.kind, b.kind) {
        (Crossing, Crossing) => {
            if q >= p + 2 || q + 2 <= p {
                Some((b, a))
            } else {
                None
            }
        }
        (Crossing, LeftCusp) => {
            if q >= p + 2 {
                Some((b, a))
            } else if q <= p {
                Some((Event::left(q), Event::crossing(p + 2)))
            } else {
                None
            }
        }
        (Crossing, RightCusp) => {
            if q >= p + 2 {
                Some((b, a))
            } else if q + 2 <= p {
                Some((Event::right(q), Event::crossing(p - 2)))
            } else {
                None
            }
        }
        (LeftCusp, Crossing) => {
            if q >= p + 2 {
                Some((Event::crossing(q - 2), a))
            } else if q + 2 <= p {
                Some((b, a))
            } else {
                None
            }
        }
        (LeftCusp, LeftCusp) => {
            if q >= p + 2 {
                Some((Event::left(q - 2), a))
            } else if q <= p {
                Some((b, Event::left(p + 2)))
            } else {
                None
            }
        }
        (LeftCusp, RightCusp) => {
            if q >= p + 3 {
                Some((Event::right(q - 2), a))
            } else if q + 2 <= p {
                Some((b, Event::left(p - 2)))
            } else {
                None
            }
        }
        (RightCusp, Crossing) => {
            if q >= p {
                Some((Event::crossing(q + 2), a))
            } else if q + 2 <= p {
                Some((b, a))
            } else {
                None
            }
        }
        (RightCusp, LeftCusp) => {
            if q >= p {
                Some((Event::left(q + 2), a))
            } else {
                Some((b, Event::right(p + 2)))
            }
        }
        (RightCusp, RightCusp) => {
            if q >= p {
                Some((Event::right(q + 2), a))
            } else if q + 2 <= p {
                Some((b, Event::right(p - 2)))
            } else {
                None
            }
        }
    }
}

fn splice(events: &[Event], at: usize, remove: usize, insert: &[Event]) -> Vec<Event> {
    let mut out = Vec::with_capacity(events.len() - remove + insert.len());
    out.extend_from_slice(&events[..at]);
    out.extend_from_slice(insert);
    out.extend_from_slice(&events[at + remove..]);
    out
}

/// Apply a single move, checking applicability at the anchor.
pub fn apply_move(d: &FrontDiagram, m: &IsotopyMove) -> Result<FrontDiagram, MoveError> {
    let events = d.events();
    let n = events.len();
    let new_events: Vec<Event> = match (m.kind, m.dir) {
        (MoveKind::R1 { side, strand }, MoveDir::Fwd) => {
            if m.gap > n {
                return Err(not_applicable(m, "gap out of range"));
            }
            let width = d.strands_at(m.gap);
            if strand < 1 || strand > width {
                return Err(not_applicable(m, format!("no strand {} in a {}-strand slab", strand, width)));
            }
            splice(events, m.gap, 0, &r1_pattern(side, strand))
        }
        (MoveKind::R1 { side, strand }, MoveDir::Inv) => {
            if m.gap + 3 > n {
                return Err(not_applicable(m, "word too short for pattern"));
            }
            let pat = r1_pattern(side, strand);
            if events[m.gap..m.gap + 3] != pat {
                return Err(not_applicable(m, "kink pattern not present"));
            }
            splice(events, m.gap, 3, &[])
        }
        (MoveKind::R2(v), MoveDir::Fwd) => {
            if m.gap >= n {
                return Err(not_applicable(m, "gap out of range"));
            }
            let ev = events[m.gap];
            let width = d.strands_at(m.gap);
            let repl: [Event; 3] = match v {
                R2Kind::LeftAbove => {
                    if ev.kind != EventKind::LeftCusp || ev.pos < 2 {
                        return Err(not_applicable(m, "needs a left cusp with a strand above"));
                    }
                    let j = ev.pos;
                    [Event::left(j - 1), Event::crossing(j), Event::crossing(j - 1)]
                }
                R2Kind::LeftBelow => {
                    if ev.kind != EventKind::LeftCusp || ev.pos > width {
                        return Err(not_applicable(m, "needs a left cusp with a strand at its position"));
                    }
                    let j = ev.pos;
                    [Event::left(j + 1), Event::crossing(j), Event::crossing(j + 1)]
                }
                R2Kind::RightAbove => {
                    if ev.kind != EventKind::RightCusp || ev.pos < 2 {
                        return Err(not_applicable(m, "needs a right cusp with a strand above"));
                    }
                    let j = ev.pos;
                    [Event::crossing(j - 1), Event::crossing(j), Event::right(j - 1)]
                }
                R2Kind::RightBelow => {
                    if ev.kind != EventKind::RightCusp || width < ev.pos + 2 {
                        return Err(not_applicable(m, "needs a right cusp with a strand below"));
                    }
                    let j = ev.pos;
                    [Event::crossing(j + 1), Event::crossing(j), Event::right(j + 1)]
                }
            };
            splice(events, m.gap, 1, &repl)
        }
        (MoveKind::R2(v), MoveDir::Inv) => {
            if m.gap + 3 > n {
                return Err(not_applicable(m, "word too short for pattern"));
            }
            let w = &events[m.gap..m.gap + 3];
            let single: Event = match v {
                R2Kind::LeftAbove => {
                    let a = w[0].pos;
                    if w[0].kind != EventKind::LeftCusp
                        || w[1] != Event::crossing(a + 1)
                        || w[2] != Event::crossing(a)
                    {
                        return Err(not_applicable(m, "pattern mismatch"));
                    }
                    Event::left(a + 1)
                }
                R2Kind::LeftBelow => {
                    let a = w[0].pos;
                    if w[0].kind != EventKind::LeftCusp
                        || a < 2
                        || w[1] != Event::crossing(a - 1)
                        || w[2] != Event::crossing(a)
                    {
                        return Err(not_applicable(m, "pattern mismatch"));
                    }
                    Event::left(a - 1)
                }
                R2Kind::RightAbove => {
                    let a = w[0].pos;
                    if w[0].kind != EventKind::Crossing
                        || w[1] != Event::crossing(a + 1)
                        || w[2] != Event::right(a)
                    {
                        return Err(not_applicable(m, "pattern mismatch"));
                    }
                    Event::right(a + 1)
                }
                R2Kind::RightBelow => {
                    let a = w[0].pos;
                    if w[0].kind != EventKind::Crossing
                        || a < 2
                        || w[1] != Event::crossing(a - 1)
                        || w[2] != Event::right(a)
                    {
                        return Err(not_applicable(m, "pattern mismatch"));
                    }
                    Event::right(a - 1)
                }
            };
            splice(events, m.gap, 3, &[single])
        }
        (MoveKind::R3, dir) => {
            if m.gap + 3 > n {
                return Err(not_applicable(m, "word too short for pattern"));
            }
            let w = &events[m.gap..m.gap + 3];
            if w.iter().any(|e| e.kind != EventKind::Crossing) {
                return Err(not_applicable(m, "needs three crossings"));
            }
            let a = w[0].pos;
            let repl: [Event; 3] = match dir {
                MoveDir::Fwd => {
                    if w[1].pos != a + 1 || w[2].pos != a {
                        return Err(not_applicable(m, "pattern mismatch"));
                    }
                    [Event::crossing(a + 1), Event::crossing(a), Event::crossing(a + 1)]
                }
                MoveDir::Inv => {
                    if a < 2 || w[1].pos != a - 1 || w[2].pos != a {
                        return Err(not_applicable(m, "pattern mismatch"));
                    }
                    [Event::crossing(a - 1), Event::crossing(a), Event::crossing(a - 1)]
                }
            };
            splice(events, m.gap, 3, &repl)
        }
        (MoveKind::Commute, _) => {
            if m.gap + 2 > n {
                return Err(not_applicable(m, "gap out of range"));
            }
            match commute_pair(events[m.gap], events[m.gap + 1]) {
                Some((b2, a2)) => splice(events, m.gap, 2, &[b2, a2]),
                None => return Err(not_applicable(m, "events interact")),
            }
        }
    };
    FrontDiagram::new(new_events).map_err(|e| MoveError::InvalidResult(e.to_string()))
}

/// All moves applicable to `d`, in (gap, family, variant, direction) order.
pub fn enumerate_moves(d: &FrontDiagram) -> Vec<IsotopyMove> {
    let mut out = Vec::new();
    let counts = d.slab_counts();
    let n = d.len();
    for (gap, &width) in counts.iter().enumerate() {
        // R1 forward insertions on each strand of this slab.
        for strand in 1..=width {
            for side in [R1Side::Below, R1Side::Above] {
                out.push(IsotopyMove { kind: MoveKind::R1 { side, strand }, gap, dir: MoveDir::Fwd });
            }
        }
        // Pattern-anchored moves.
        if gap + 3 <= n {
            for side in [R1Side::Below, R1Side::Above] {
                for strand in 1..=counts[gap] {
                    let mv = IsotopyMove { kind: MoveKind::R1 { side, strand }, gap, dir: MoveDir::Inv };
                    if d.events()[gap..gap + 3] == r1_pattern(side, strand) {
                        out.push(mv);
                    }
                }
            }
            for v in [R2Kind::LeftAbove, R2Kind::LeftBelow, R2Kind::RightAbove, R2Kind::RightBelow] {
                let mv = IsotopyMove { kind: MoveKind::R2(v), gap, dir: MoveDir::Inv };
                if apply_move(d, &mv).is_ok() {
                    out.push(mv);
                }
            }
            for dir in [MoveDir::Fwd, MoveDir::Inv] {
                let mv = IsotopyMove { kind: MoveKind::R3, gap, dir };
                if apply_move(d, &mv).is_ok() {
                    out.push(mv);
                }
            }
        }
        if gap < n {
            for v in [R2Kind::LeftAbove, R2Kind::LeftBelow, R2Kind::RightAbove, R2Kind::RightBelow] {
                let mv = IsotopyMove { kind: MoveKind::R2(v), gap, dir: MoveDir::Fwd };
                if apply_move(d, &mv).is_ok() {
                    out.push(mv);
                }
            }
        }
        if gap + 2 <= n && commute_pair(d.events()[gap], d.events()[gap + 1]).is_some() {
            out.push(IsotopyMove { kind: MoveKind::Commute, gap, dir: MoveDir::Fwd });
        }
    }
    out.sort_by_key(|m| m.sort_key());
    out
}

/// An ordered list of moves replaying from a start diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsotopyCertificate {
    pub moves: Vec<IsotopyMove>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsotopyFailure {
    #[error("move {index} failed: {error}")]
    Step { index: usize, error: MoveError },
    #[error("replay ended at `{got}`, expected `{want}`")]
    WrongTarget { got: String, want: String },
}

/// Accepts iff every move applies in order and the final word equals the
/// target word exactly.
pub fn verify_isotopy(
    start: &FrontDiagram,
    target: &FrontDiagram,
    cert: &IsotopyCertificate,
) -> Result<(), IsotopyFailure> {
    let mut cur = start.clone();
    for (i, m) in cert.moves.iter().enumerate() {
        cur = apply_move(&cur, m).map_err(|error| IsotopyFailure::Step { index: i, error })?;
    }
    if cur != *target {
        return Err(IsotopyFailure::WrongTarget { got: cur.to_string(), want: target.to_string() });
    }
    Ok(())
}

/// Deterministic commutation normal form: greedily swaps commutable adjacent
/// events whenever the swap is lexicographically smaller. Returns the normal
/// form and the commutation moves performed.
pub fn commutation_normal_form(d: &FrontDiagram) -> (FrontDiagram, Vec<IsotopyMove>) {
    let mut events = d.events().to_vec();
    let mut moves = Vec::new();
    loop {
        let mut changed = false;
        for g in 0..events.len().saturating_sub(1) {
            if let Some((b2, a2)) = commute_pair(events[g], events[g + 1]) {
                if (b2, a2) < (events[g], events[g + 1]) {
                    events[g] = b2;
                    events[g + 1] = a2;
                    moves.push(IsotopyMove { kind: MoveKind::Commute, gap: g, dir: MoveDir::Fwd });
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let nf = FrontDiagram::new(events).expect("commutation preserves validity");
    (nf, moves)
}

/// Token equality after commutation normal form.
pub fn words_equal_modulo_commutation(a: &FrontDiagram, b: &FrontDiagram) -> bool {
    commutation_normal_form(a).0 == commutation_normal_form(b).0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IsotopyCertificate),
    NotFound,
    BudgetExceeded,
}

/// Default node budget for bounded searches; override with the
/// `LEGCALC_NODE_BUDGET` environment variable.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

pub fn node_budget_from_env() -> usize {
    std::env::var("LEGCALC_NODE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

/// Commutation-class representatives of a word, reachable by at most `k`
/// commutes, capped at `cap` entries; each with the commute path from `d`.
pub fn commutation_closure(
    d: &FrontDiagram,
    k: usize,
    cap: usize,
) -> Vec<(FrontDiagram, Vec<IsotopyMove>)> {
    use std::collections::HashMap;
    let mut out = vec![(d.clone(), Vec::new())];
    let mut seen: HashMap<FrontDiagram, ()> = HashMap::new();
    seen.insert(d.clone(), ());
    let mut layer_start = 0;
    for _ in 0..k {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            let (w, path) = out[i].clone();
            for g in 0..w.len().saturating_sub(1) {
                let m = IsotopyMove { kind: MoveKind::Commute, gap: g, dir: MoveDir::Fwd };
                if let Ok(next) = apply_move(&w, &m) {
                    if !seen.contains_key(&next) {
                        seen.insert(next.clone(), ());
                        let mut p = path.clone();
                        p.push(m);
                        out.push((next, p));
                        if out.len() >= cap {
                            return out;
                        }
                    }
                }
            }
        }
        layer_start = layer_end;
    }
    out
}

/// Breadth-first search for an isotopy certificate from `start` to `target`.
///
/// States are commutation normal forms; each state is expanded through a
/// bounded set of commutation-class representatives so that pattern moves
/// hidden behind lex-increasing commutations stay reachable. `depth` counts
/// non-commutation moves; at most `budget` distinct canonical words are kept.
pub fn search_isotopy(
    start: &FrontDiagram,
    target: &FrontDiagram,
    depth: usize,
    budget: usize,
) -> SearchOutcome {
    use std::collections::hash_map::Entry;
    use std::collections::{HashMap, VecDeque};

    let (cs, start_norm) = commutation_normal_form(start);
    let (ct, target_norm) = commutation_normal_form(target);

    let finish = |path: Vec<IsotopyMove>| {
        let mut moves = start_norm.clone();
        moves.extend(path);
        for m in target_norm.iter().rev() {
            moves.push(m.inverse());
        }
        let cert = IsotopyCertificate { moves };
        debug_assert!(verify_isotopy(start, target, &cert).is_ok());
        SearchOutcome::Found(cert)
    };

    if cs == ct {
        return finish(Vec::new());
    }

    // parent map: canonical word -> (parent canonical word, moves for the edge)
    let mut seen: HashMap<FrontDiagram, Option<(FrontDiagram, Vec<IsotopyMove>)>> = HashMap::new();
    seen.insert(cs.clone(), None);
    let mut queue = VecDeque::new();
    queue.push_back((cs.clone(), 0usize));

    while let Some((word, dist)) = queue.pop_front() {
        if dist >= depth {
            continue;
        }
        for (rep, commutes) in commutation_closure(&word, 4, 64) {
            for m in enumerate_moves(&rep) {
                if m.kind == MoveKind::Commute {
                    continue;
                }
                let next = match apply_move(&rep, &m) {
                    Ok(n) => n,
                    Err(_) => continue,
                };
                let (canon, norm_moves) = commutation_normal_form(&next);
                match seen.entry(canon.clone()) {
                    Entry::Occupied(_) => continue,
                    Entry::Vacant(v) => {
                        let mut edge = commutes.clone();
                        edge.push(m);
                        edge.extend(norm_moves);
                        v.insert(Some((word.clone(), edge)));
                    }
                }
                if canon == ct {
                    let mut path = Vec::new();
                    let mut cur = canon.clone();
                    while let Some(Some((parent, edge))) = seen.get(&cur).cloned() {
                        let mut e = edge;
                        e.extend(path);
                        path = e;
                        cur = parent;
                    }
                    return finish(path);
                }
                if seen.len() > budget {
                    return SearchOutcome::BudgetExceeded;
                }
                queue.push_back((canon, dist + 1));
            }
        }
    }
    SearchOutcome::NotFound
}
