//! Front diagrams as words of Morse events.
//!
//! A front is encoded as an ordered sequence of events over 1-based strand
//! positions counted from the top. A left cusp at position `i` inserts two
//! strands at positions `i, i+1`; a right cusp merges the strands at `i, i+1`;
//! a crossing swaps them. The running strand count starts and ends at zero.

use std::fmt;
use thiserror::Error;

/// File format version emitted in the `LFRONT` header.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Event {
    pub kind: EventKind,
    /// 1-based strand position, counted from the top of the front.
    pub pos: usize,
}

impl Event {
    pub fn left(pos: usize) -> Self {
        Event { kind: EventKind::LeftCusp, pos }
    }
    pub fn right(pos: usize) -> Self {
        Event { kind: EventKind::RightCusp, pos }
    }
    pub fn crossing(pos: usize) -> Self {
        Event { kind: EventKind::Crossing, pos }
    }

    /// Change in strand count caused by this event.
    pub fn delta(&self) -> isize {
        match self.kind {
            EventKind::LeftCusp => 2,
            EventKind::RightCusp => -2,
            EventKind::Crossing => 0,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            EventKind::LeftCusp => 'L',
            EventKind::RightCusp => 'R',
            EventKind::Crossing => 'X',
        };
        write!(f, "{}{}", c, self.pos)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontError {
    #[error("syntax error at token {index}: {message}")]
    Syntax { index: usize, message: String },
    #[error("invalid event at column {index}: {message}")]
    Validity { index: usize, message: String },
}

/// A validated front diagram.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FrontDiagram {
    events: Vec<Event>,
}

impl FrontDiagram {
    /// Build a diagram from an event word, validating strand counts and
    /// position ranges. The empty word is the empty link.
    pub fn new(events: Vec<Event>) -> Result<Self, FrontError> {
        let mut n: usize = 0;
        for (i, ev) in events.iter().enumerate() {
            match ev.kind {
                EventKind::LeftCusp => {
                    if ev.pos < 1 || ev.pos > n + 1 {
                        return Err(FrontError::Validity {
                            index: i,
                            message: format!(
                                "left cusp at position {} needs 1 <= pos <= {} (strands: {})",
                                ev.pos,
                                n + 1,
                                n
                            ),
                        });
                    }
                    n += 2;
                }
                EventKind::RightCusp | EventKind::Crossing => {
                    if n < 2 || ev.pos < 1 || ev.pos > n - 1 {
                        return Err(FrontError::Validity {
                            index: i,
                            message: format!(
                                "event at position {} needs 1 <= pos <= strands-1 (strands: {})",
                                ev.pos, n
                            ),
                        });
                    }
                    if ev.kind == EventKind::RightCusp {
                        n -= 2;
                    }
                }
            }
        }
        if n != 0 {
            return Err(FrontError::Validity {
                index: events.len(),
                message: format!("word ends with {} open strands", n),
            });
        }
        Ok(FrontDiagram { events })
    }

    pub fn empty() -> Self {
        FrontDiagram { events: Vec::new() }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Strand count in the gap before event `gap` (0..=len gaps).
    pub fn strands_at(&self, gap: usize) -> usize {
        let mut n: isize = 0;
        for ev in &self.events[..gap] {
            n += ev.delta();
        }
        n as usize
    }

    /// Strand counts at every gap, `len + 1` entries.
    pub fn slab_counts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut n: isize = 0;
        out.push(0);
        for ev in &self.events {
            n += ev.delta();
            out.push(n as usize);
        }
        out
    }

    /// Replace the event word wholesale; revalidates.
    pub fn with_events(events: Vec<Event>) -> Result<Self, FrontError> {
        Self::new(events)
    }

    pub fn trace(&self) -> Trace {
        Trace::build(self)
    }

    /// Number of link components.
    pub fn components(&self) -> usize {
        self.trace().component_count
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ev in &self.events {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", ev)?;
            first = false;
        }
        Ok(())
    }
}

/// Identifier of a strand segment: a maximal arc between two cusp endpoints.
pub type SegId = usize;

/// A cusp join between two segments. `upper` is the branch at the smaller
/// position (higher in the front).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspJoin {
    pub upper: SegId,
    pub lower: SegId,
    pub event: usize,
    pub kind: EventKind,
}

/// A crossing with the segment descending from position `pos` to `pos+1`
/// and the segment ascending the other way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingInfo {
    pub descending: SegId,
    pub ascending: SegId,
    pub event: usize,
    pub pos: usize,
}

/// Segment-level incidence structure of a front diagram.
#[derive(Clone, Debug)]
pub struct Trace {
    pub seg_count: usize,
    pub joins: Vec<CuspJoin>,
    pub crossings: Vec<CrossingInfo>,
    /// Component id per segment, numbered by smallest member segment.
    pub component_of: Vec<usize>,
    pub component_count: usize,
    /// For each gap, the segments occupying positions 1.. (index 0 is position 1).
    pub slabs: Vec<Vec<SegId>>,
}

impl Trace {
    pub fn build(d: &FrontDiagram) -> Trace {
        let mut current: Vec<SegId> = Vec::new();
        let mut seg_count = 0usize;
        let mut joins = Vec::new();
        let mut crossings = Vec::new();
        let mut slabs = Vec::with_capacity(d.len() + 1);
        slabs.push(current.clone());
        for (i, ev) in d.events().iter().enumerate() {
            let p = ev.pos;
            match ev.kind {
                EventKind::LeftCusp => {
                    let upper = seg_count;
                    let lower = seg_count + 1;
                    seg_count += 2;
                    current.insert(p - 1, lower);
                    current.insert(p - 1, upper);
                    joins.push(CuspJoin { upper, lower, event: i, kind: EventKind::LeftCusp });
                }
                EventKind::RightCusp => {
                    let upper = current.remove(p - 1);
                    let lower = current.remove(p - 1);
                    joins.push(CuspJoin { upper, lower, event: i, kind: EventKind::RightCusp });
                }
                EventKind::Crossing => {
                    let descending = current[p - 1];
                    let ascending = current[p];
                    crossings.push(CrossingInfo { descending, ascending, event: i, pos: p });
                    current.swap(p - 1, p);
                }
            }
            slabs.push(current.clone());
        }
        debug_assert!(current.is_empty());

        // Each segment has exactly two cusp incidences; the join graph is a
        // disjoint union of cycles whose cycles are the link components.
        let mut uf = UnionFind::new(seg_count);
        for j in &joins {
            uf.union(j.upper, j.lower);
        }
        let mut component_of = vec![usize::MAX; seg_count];
        let mut component_count = 0;
        // components numbered in order of their smallest member segment
        let mut root_to_comp = std::collections::BTreeMap::new();
        for (s, comp) in component_of.iter_mut().enumerate() {
            let r = uf.find(s);
            let next = root_to_comp.len();
            let id = *root_to_comp.entry(r).or_insert(next);
            if id == component_count {
                component_count += 1;
            }
            *comp = id;
        }
        Trace { seg_count, joins, crossings, component_of, component_count, slabs }
    }

    /// Segments of one component, ascending.
    pub fn component_segments(&self, comp: usize) -> Vec<SegId> {
        (0..self.seg_count).filter(|&s| self.component_of[s] == comp).collect()
    }
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }
    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // union by smaller root id so roots stay the least member
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        let _ = &mut self.rank;
        true
    }
}

/// Traversal direction of a segment along increasing x.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dir {
    Right,
    Left,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Right => Dir::Left,
            Dir::Left => Dir::Right,
        }
    }
    pub fn sign(self) -> i64 {
        match self {
            Dir::Right => 1,
            Dir::Left => -1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientError {
    #[error("expected {expected} orientation choices, got {got}")]
    WrongChoiceCount { expected: usize, got: usize },
}

/// A front diagram with a traversal orientation chosen per component.
///
/// The reference segment of each component is its smallest segment id; choice
/// `false` sends it rightward. Directions reverse exactly at cusps.
#[derive(Clone, Debug)]
pub struct OrientedDiagram {
    pub diagram: FrontDiagram,
    pub trace: Trace,
    pub choices: Vec<bool>,
    pub dirs: Vec<Dir>,
}

impl OrientedDiagram {
    pub fn new(diagram: FrontDiagram, choices: Vec<bool>) -> Result<Self, OrientError> {
        let trace = diagram.trace();
        if choices.len() != trace.component_count {
            return Err(OrientError::WrongChoiceCount {
                expected: trace.component_count,
                got: choices.len(),
            });
        }
        let dirs = propagate_dirs(&trace, &choices);
        Ok(OrientedDiagram { diagram, trace, choices, dirs })
    }

    /// Default orientation: every component's reference segment rightward.
    pub fn default_orientation(diagram: FrontDiagram) -> Self {
        let trace = diagram.trace();
        let choices = vec![false; trace.component_count];
        let dirs = propagate_dirs(&trace, &choices);
        OrientedDiagram { diagram, trace, choices, dirs }
    }

    /// Direction of the strand occupying `pos` in the slab before `gap`.
    pub fn dir_at(&self, gap: usize, pos: usize) -> Option<Dir> {
        let slab = self.trace.slabs.get(gap)?;
        let seg = *slab.get(pos - 1)?;
        Some(self.dirs[seg])
    }

    pub fn invariants(&self) -> ClassicalInvariants {
        compute_invariants(self)
    }
}

fn propagate_dirs(trace: &Trace, choices: &[bool]) -> Vec<Dir> {
    // adjacency via cusp joins; direction flips across each join
    let mut adj: Vec<Vec<SegId>> = vec![Vec::new(); trace.seg_count];
    for j in &trace.joins {
        adj[j.upper].push(j.lower);
        adj[j.lower].push(j.upper);
    }
    let mut dirs = vec![None; trace.seg_count];
    for s in 0..trace.seg_count {
        if dirs[s].is_some() {
            continue;
        }
        let comp = trace.component_of[s];
        // s is the smallest segment of its component by construction order
        let start_dir = if choices[comp] { Dir::Left } else { Dir::Right };
        dirs[s] = Some(start_dir);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let dv = dirs[v].unwrap();
            for &w in &adj[v] {
                if dirs[w].is_none() {
                    dirs[w] = Some(dv.flip());
                    stack.push(w);
                }
            }
        }
    }
    dirs.into_iter().map(|d| d.unwrap()).collect()
}

/// Classical invariants of an oriented front diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalInvariants {
    /// Per-component Thurston-Bennequin numbers (self-crossings minus right cusps).
    pub tb: Vec<i64>,
    /// Per-component rotation numbers.
    pub rot: Vec<i64>,
    pub components: usize,
    /// Total writhe over all crossings minus all right cusps.
    pub w_minus_rc: i64,
    /// Signed count of inter-component crossings (orientation dependent).
    pub linking: i64,
}

fn compute_invariants(o: &OrientedDiagram) -> ClassicalInvariants {
    invariants_from_dirs(&o.trace, &o.dirs)
}

/// The front's over-strand at a crossing is the descending one; the crossing
/// sign then reduces to the product of the two traversal x-directions.
pub fn crossing_sign_from_dirs(dirs: &[Dir], c: &CrossingInfo) -> i64 {
    dirs[c.descending].sign() * dirs[c.ascending].sign()
}

/// Classical invariants from a trace plus an explicit direction assignment.
pub fn invariants_from_dirs(t: &Trace, dirs: &[Dir]) -> ClassicalInvariants {
    let nc = t.component_count;
    let mut w = vec![0i64; nc];
    let mut rc = vec![0i64; nc];
    let mut down = vec![0i64; nc];
    let mut up = vec![0i64; nc];
    let mut linking = 0i64;
    let mut total_w = 0i64;

    for c in &t.crossings {
        let s = crossing_sign_from_dirs(dirs, c);
        total_w += s;
        let ca = t.component_of[c.descending];
        let cb = t.component_of[c.ascending];
        if ca == cb {
            w[ca] += s;
        } else {
            linking += s;
        }
    }
    let mut total_rc = 0i64;
    for j in &t.joins {
        let comp = t.component_of[j.upper];
        if j.kind == EventKind::RightCusp {
            rc[comp] += 1;
            total_rc += 1;
        }
        // A cusp is a "down" cusp when the traversal enters on the upper
        // branch: for a left cusp that means the upper branch runs leftward,
        // for a right cusp rightward.
        let enters_upper = match j.kind {
            EventKind::LeftCusp => dirs[j.upper] == Dir::Left,
            EventKind::RightCusp => dirs[j.upper] == Dir::Right,
            EventKind::Crossing => unreachable!(),
        };
        if enters_upper {
            down[comp] += 1;
        } else {
            up[comp] += 1;
        }
    }

    let tb: Vec<i64> = (0..nc).map(|i| w[i] - rc[i]).collect();
    let rot: Vec<i64> = (0..nc).map(|i| (down[i] - up[i]) / 2).collect();
    ClassicalInvariants { tb, rot, components: nc, w_minus_rc: total_w - total_rc, linking }
}

/// Orientation-free invariant summary used by the cobordism bookkeeping:
/// `w - rc` computed with the default orientation.
pub fn w_minus_rc_default(d: &FrontDiagram) -> i64 {
    OrientedDiagram::default_orientation(d.clone()).invariants().w_minus_rc
}

// ---------------------------------------------------------------------------
// LFRONT text format
// ---------------------------------------------------------------------------

/// Parse the LFRONT format: header `LFRONT 1`, then whitespace-separated
/// tokens `L<i>`, `R<i>`, `X<i>`; `#` starts a comment to end of line.
pub fn parse_front(text: &str) -> Result<FrontDiagram, FrontError> {
    let mut tokens: Vec<&str> = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        tokens.extend(line.split_whitespace());
    }
    if tokens.len() < 2 || tokens[0] != "LFRONT" {
        return Err(FrontError::Syntax { index: 0, message: "missing LFRONT header".into() });
    }
    if tokens[1] != "1" {
        return Err(FrontError::Syntax {
            index: 1,
            message: format!("unsupported format version {}", tokens[1]),
        });
    }
    let events = parse_event_tokens(&tokens[2..], 2)?;
    FrontDiagram::new(events)
}

/// Parse bare event tokens (no header); `offset` shifts reported indices.
pub fn parse_event_tokens(tokens: &[&str], offset: usize) -> Result<Vec<Event>, FrontError> {
    let mut events = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let idx = i + offset;
        let (kind, rest) = match tok.chars().next() {
            Some('L') => (EventKind::LeftCusp, &tok[1..]),
            Some('R') => (EventKind::RightCusp, &tok[1..]),
            Some('X') => (EventKind::Crossing, &tok[1..]),
            _ => {
                return Err(FrontError::Syntax {
                    index: idx,
                    message: format!("token `{}` is not L/R/X + integer", tok),
                })
            }
        };
        let pos: usize = rest.parse().map_err(|_| FrontError::Syntax {
            index: idx,
            message: format!("token `{}` has no valid position", tok),
        })?;
        if pos == 0 {
            return Err(FrontError::Syntax {
                index: idx,
                message: format!("token `{}`: positions are 1-based", tok),
            });
        }
        events.push(Event { kind, pos });
    }
    Ok(events)
}

/// Canonical one-event-per-token serialization, round-trips with `parse_front`.
pub fn serialize_front(d: &FrontDiagram) -> String {
    if d.is_empty() {
        return format!("LFRONT {}", FORMAT_VERSION);
    }
    format!("LFRONT {}\n{}", FORMAT_VERSION, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn front(word: &str) -> FrontDiagram {
        let toks: Vec<&str> = word.split_whitespace().collect();
        FrontDiagram::new(parse_event_tokens(&toks, 0).unwrap()).unwrap()
    }

    #[test]
    fn unknot_parses() {
        let d = front("L1 R1");
        assert_eq!(d.len(), 2);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn empty_word_is_valid() {
        let d = FrontDiagram::empty();
        assert_eq!(d.components(), 0);
        assert_eq!(serialize_front(&d), "LFRONT 1");
    }

    #[test]
    fn nonzero_terminal_count_rejected() {
        let toks: Vec<&str> = "L1 X1".split_whitespace().collect();
        let evs = parse_event_tokens(&toks, 0).unwrap();
        let err = FrontDiagram::new(evs).unwrap_err();
        match err {
            FrontError::Validity { index, .. } => assert_eq!(index, 2),
            _ => panic!("wrong error kind"),
        }
    }

    #[test]
    fn position_violation_rejected() {
        let toks: Vec<&str> = "L1 X2 R1".split_whitespace().collect();
        let evs = parse_event_tokens(&toks, 0).unwrap();
        let err = FrontDiagram::new(evs).unwrap_err();
        match err {
            FrontError::Validity { index, .. } => assert_eq!(index, 1),
            _ => panic!("wrong error kind"),
        }
    }

    #[test]
    fn two_circles() {
        assert_eq!(front("L1 R1 L1 R1").components(), 2);
    }

    #[test]
    fn seven_event_knot_single_component() {
        assert_eq!(front("L1 L3 X2 X2 X2 R2 R1").components(), 1);
        assert_eq!(front("L1 L3 X2 X2 X2 R1 R1").components(), 1);
    }

    #[test]
    fn unknot_invariants() {
        let o = OrientedDiagram::default_orientation(front("L1 R1"));
        let inv = o.invariants();
        assert_eq!(inv.tb, vec![-1]);
        assert_eq!(inv.rot, vec![0]);
        assert_eq!(inv.w_minus_rc, -1);
    }

    #[test]
    fn stabilized_unknot_invariants() {
        let o = OrientedDiagram::default_orientation(front("L1 L1 R2 R1"));
        let inv = o.invariants();
        assert_eq!(inv.tb, vec![-2]);
        assert_eq!(inv.rot[0].abs(), 1);
    }

    #[test]
    fn trefoil_max_invariants() {
        // Maximal-tb positive trefoil: stacked right cusps close the twist
        // region without creating removable curls.
        let o = OrientedDiagram::default_orientation(front("L1 L3 X2 X2 X2 R1 R1"));
        let inv = o.invariants();
        assert_eq!(inv.tb, vec![1]);
        assert_eq!(inv.rot, vec![0]);
    }

    #[test]
    fn kinked_word_is_stabilized_unknot() {
        // A single-crossing closed front is an unknot with one kink; the kink
        // is a stabilization, not an isotopy.
        let o = OrientedDiagram::default_orientation(front("L1 X1 R1"));
        let inv = o.invariants();
        assert_eq!(inv.tb, vec![-2]);
        assert_eq!(inv.rot[0].abs(), 1);
    }

    #[test]
    fn clasp_word_is_doubly_stabilized_unknot() {
        let o = OrientedDiagram::default_orientation(front("L1 L3 X2 X2 R2 R1"));
        let inv = o.invariants();
        assert_eq!(inv.components, 1);
        assert_eq!(inv.tb, vec![-4]);
    }

    #[test]
    fn orientation_reversal_negates_rot_fixes_tb() {
        for word in ["L1 R1", "L1 L1 R2 R1", "L1 L3 X2 X2 X2 R1 R1", "L1 X1 R1"] {
            let d = front(word);
            let a = OrientedDiagram::new(d.clone(), vec![false]).unwrap().invariants();
            let b = OrientedDiagram::new(d, vec![true]).unwrap().invariants();
            assert_eq!(a.tb, b.tb, "tb changed for {}", word);
            assert_eq!(a.rot[0], -b.rot[0], "rot not negated for {}", word);
        }
    }

    #[test]
    fn cusp_counts_balance() {
        for word in ["L1 R1", "L1 L3 X2 X2 X2 R1 R1", "L1 L1 R2 R1"] {
            let d = front(word);
            let l = d.events().iter().filter(|e| e.kind == EventKind::LeftCusp).count();
            let r = d.events().iter().filter(|e| e.kind == EventKind::RightCusp).count();
            assert_eq!(l, r);
            let total: isize = d.events().iter().map(|e| e.delta()).sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn serialize_round_trip() {
        for word in ["L1 R1", "L1 L3 X2 X2 X2 R1 R1", "L1 L1 R2 R1"] {
            let d = front(word);
            let text = serialize_front(&d);
            let back = parse_front(&text).unwrap();
            assert_eq!(d, back);
        }
        assert_eq!(serialize_front(&front("L1 R1")), "LFRONT 1\nL1 R1");
    }

    #[test]
    fn parse_with_comments() {
        let d = parse_front("LFRONT 1 # header\n# a comment line\nL1 R1 # tail").unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn bad_token_reports_index() {
        let err = parse_front("LFRONT 1\nL1 Q3").unwrap_err();
        match err {
            FrontError::Syntax { index, .. } => assert_eq!(index, 3),
            _ => panic!(),
        }
    }
}
