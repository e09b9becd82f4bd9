//! Cobordism certificates and their verifier.
//!
//! A certificate is a movie read from the top diagram down: isotopy moves,
//! pinches (a 0-tangle replaced by the two cusps `R i, L i`, the saddle of the
//! cobordism), and cups (deletion of a literal `L i, R i` circle, the disk
//! filling of a maximal-tb unknot). Every certificate built from these steps
//! is an exact cobordism; non-exact constructions are not representable.
//!
//! The verifier computes the Euler characteristic `-#pinch + #cup`, decides
//! orientability of the whole surface by transporting orientation parities
//! through the movie, derives genus or crosscap genus from the ends, and
//! raises theorem-violation flags that encode facts the calculus must never
//! contradict. A raised flag always signals a bug or a forged input, never
//! acceptable output.

use crate::front::{
    invariants_from_dirs, parse_event_tokens, Dir, Event, EventKind, FrontDiagram, Trace,
};
use crate::moves::{apply_move, parse_move, IsotopyMove, MoveDir, MoveKind};
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CobordismStep {
    Isotopy(IsotopyMove),
    /// Insert `R pos, L pos` at `gap`: the saddle move.
    Pinch { gap: usize, pos: usize },
    /// Delete the adjacent pair `L i, R i` starting at event index `gap`.
    Cup { gap: usize },
}

impl fmt::Display for CobordismStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CobordismStep::Isotopy(m) => write!(f, "MOVE {}", m),
            CobordismStep::Pinch { gap, pos } => write!(f, "PINCH {} {}", gap, pos),
            CobordismStep::Cup { gap } => write!(f, "CUP {}", gap),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismCertificate {
    pub top: FrontDiagram,
    pub steps: Vec<CobordismStep>,
    pub bottom: FrontDiagram,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {index} ({step}) failed: {reason}")]
    Step { index: usize, step: String, reason: String },
    #[error("replay ended at `{got}` but certificate declares bottom `{want}`")]
    WrongBottom { got: String, want: String },
}

/// Rewrite window of a step: `removed` events at `at` replaced by `inserted`.
#[derive(Clone, Copy, Debug)]
struct Window {
    at: usize,
    removed: usize,
    inserted: usize,
}

fn isotopy_window(m: &IsotopyMove) -> Window {
    let (removed, inserted) = match (m.kind, m.dir) {
        (MoveKind::R1 { .. }, MoveDir::Fwd) => (0, 3),
        (MoveKind::R1 { .. }, MoveDir::Inv) => (3, 0),
        (MoveKind::R2(_), MoveDir::Fwd) => (1, 3),
        (MoveKind::R2(_), MoveDir::Inv) => (3, 1),
        (MoveKind::R3, _) => (3, 3),
        (MoveKind::Commute, _) => (2, 2),
    };
    Window { at: m.gap, removed, inserted }
}

fn apply_step(
    d: &FrontDiagram,
    step: &CobordismStep,
) -> Result<(FrontDiagram, Window), String> {
    match step {
        CobordismStep::Isotopy(m) => {
            let next = apply_move(d, m).map_err(|e| e.to_string())?;
            Ok((next, isotopy_window(m)))
        }
        CobordismStep::Pinch { gap, pos } => {
            if *gap > d.len() {
                return Err("gap out of range".into());
            }
            let n = d.strands_at(*gap);
            if *pos < 1 || pos + 1 > n {
                return Err(format!("pinch position {} invalid in a {}-strand slab", pos, n));
            }
            let mut events = d.events().to_vec();
            events.splice(gap..gap, [Event::right(*pos), Event::left(*pos)]);
            let next = FrontDiagram::new(events).map_err(|e| e.to_string())?;
            Ok((next, Window { at: *gap, removed: 0, inserted: 2 }))
        }
        CobordismStep::Cup { gap } => {
            let ev = d.events();
            if gap + 2 > ev.len() {
                return Err("gap out of range".into());
            }
            let (a, b) = (ev[*gap], ev[gap + 1]);
            if a.kind != EventKind::LeftCusp || b.kind != EventKind::RightCusp || a.pos != b.pos {
                return Err(format!(
                    "cup needs adjacent `L i R i`, found `{} {}`",
                    a, b
                ));
            }
            let mut events = ev.to_vec();
            events.drain(*gap..gap + 2);
            let next = FrontDiagram::new(events).map_err(|e| e.to_string())?;
            Ok((next, Window { at: *gap, removed: 2, inserted: 0 }))
        }
    }
}

/// Replays a certificate, returning every intermediate diagram
/// (`steps.len() + 1` entries). Fails at the first bad step.
pub fn replay(cert: &CobordismCertificate) -> Result<Vec<FrontDiagram>, ReplayError> {
    let mut out = Vec::with_capacity(cert.steps.len() + 1);
    out.push(cert.top.clone());
    for (index, step) in cert.steps.iter().enumerate() {
        let (next, _) = apply_step(out.last().unwrap(), step).map_err(|reason| {
            ReplayError::Step { index, step: step.to_string(), reason }
        })?;
        out.push(next);
    }
    if *out.last().unwrap() != cert.bottom {
        return Err(ReplayError::WrongBottom {
            got: out.last().unwrap().to_string(),
            want: cert.bottom.to_string(),
        });
    }
    Ok(out)
}

/// Classification of a single pinch site under a given orientation.
pub fn classify_pinch(
    d: &crate::front::OrientedDiagram,
    gap: usize,
    pos: usize,
) -> Option<PinchClass> {
    let a = d.dir_at(gap, pos)?;
    let b = d.dir_at(gap, pos + 1)?;
    Some(if a != b { PinchClass::Orientable } else { PinchClass::NonOrientable })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PinchClass {
    Orientable,
    NonOrientable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinchRecord {
    pub step_index: usize,
    pub gap: usize,
    pub pos: usize,
    /// Whether the two pinched strands belonged to the same component.
    pub same_component: bool,
    /// Classification under the orientation transported from the top.
    pub class: PinchClass,
    /// Change of total (writhe - right cusps) across this step, with
    /// transported orientations.
    pub delta_w_minus_rc: i64,
}

/// Theorem-violation and note flags. A theorem violation firing means an
/// internal bug or a forged certificate, never acceptable output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flag {
    /// Equal-ends non-orientable certificate whose crosscap genus is not a
    /// positive multiple of 4.
    EndoCrosscapNotMultipleOf4 { crosscap: i64 },
    /// Equal-ends orientable certificate with pinches: orientable
    /// endocobordisms must be concordances.
    EndoOrientableNotConcordance { pinches: usize },
    /// A word admits both a verified filling and a verified non-orientable
    /// endocobordism.
    FillableWithNonOrientableEndo { word: String },
    /// Non-orientable cobordisms both ways between words, one of which has a
    /// verified filling: anti-symmetry on fillables is violated.
    NonOrientableLoopThroughFillable { word_a: String, word_b: String },
    /// A word with a verified filling has no ungraded ruling.
    FillingWithoutRuling { word: String },
    /// Informational note.
    Note(String),
}

impl Flag {
    pub fn is_theorem_violation(&self) -> bool {
        !matches!(self, Flag::Note(_))
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::EndoCrosscapNotMultipleOf4 { crosscap } => write!(
                f,
                "THEOREM-VIOLATION equal-ends non-orientable certificate with crosscap genus {} (must be a positive multiple of 4)",
                crosscap
            ),
            Flag::EndoOrientableNotConcordance { pinches } => write!(
                f,
                "THEOREM-VIOLATION equal-ends orientable certificate with {} pinches (must be a concordance)",
                pinches
            ),
            Flag::FillableWithNonOrientableEndo { word } => write!(
                f,
                "THEOREM-VIOLATION `{}` has both a filling and a non-orientable endocobordism",
                word
            ),
            Flag::NonOrientableLoopThroughFillable { word_a, word_b } => write!(
                f,
                "THEOREM-VIOLATION non-orientable cobordisms both ways between `{}` and `{}` with a filling present",
                word_a, word_b
            ),
            Flag::FillingWithoutRuling { word } => write!(
                f,
                "THEOREM-VIOLATION `{}` has a verified filling but no ungraded ruling",
                word
            ),
            Flag::Note(s) => write!(f, "NOTE {}", s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismReport {
    pub euler: i64,
    pub pinches: usize,
    pub cups: usize,
    /// Orientability of the whole cobordism surface.
    pub orientable: bool,
    pub surface_connected: bool,
    /// Genus when orientable and connected.
    pub genus: Option<i64>,
    /// Crosscap genus when non-orientable and connected.
    pub crosscap_genus: Option<i64>,
    /// Certificates built from isotopy, pinch, and cup steps are exact.
    pub exact: bool,
    pub top_components: usize,
    pub bottom_components: usize,
    pub ends_word_equal: bool,
    pub is_filling: bool,
    pub pinch_records: Vec<PinchRecord>,
    pub flags: Vec<Flag>,
}

struct ParityUf {
    parent: Vec<usize>,
    /// parity of the path to the parent
    par: Vec<u8>,
    consistent: bool,
}

impl ParityUf {
    fn new(n: usize) -> Self {
        ParityUf { parent: (0..n).collect(), par: vec![0; n], consistent: true }
    }
    fn find(&mut self, x: usize) -> (usize, u8) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.par[x] ^= p;
        (root, self.par[x])
    }
    fn union(&mut self, a: usize, b: usize, parity: u8) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != parity {
                self.consistent = false;
            }
            return;
        }
        self.parent[ra] = rb;
        self.par[ra] = pa ^ pb ^ parity;
    }
}

/// Transported direction assignment for the next diagram, seeded from the
/// previous one through the step's rewrite window.
fn transport_dirs(
    prev: &Trace,
    prev_dirs: &[Dir],
    next: &Trace,
    window: Window,
    prev_len: usize,
) -> Vec<Dir> {
    // Seed each new component from the first positional correspondence
    // outside the rewrite window, scanning gaps left to right.
    let delta = window.inserted as isize - window.removed as isize;
    let mut seeded: Vec<Option<(usize, Dir)>> = vec![None; next.component_count];
    let link = |old_gap: usize, new_gap: usize, seeded: &mut Vec<Option<(usize, Dir)>>| {
        let old_slab = &prev.slabs[old_gap];
        let new_slab = &next.slabs[new_gap];
        debug_assert_eq!(old_slab.len(), new_slab.len());
        for (o, n) in old_slab.iter().zip(new_slab.iter()) {
            let comp = next.component_of[*n];
            if seeded[comp].is_none() {
                seeded[comp] = Some((*n, prev_dirs[*o]));
            }
        }
    };
    for gap in 0..=window.at {
        link(gap, gap, &mut seeded);
    }
    for old_gap in (window.at + window.removed)..=prev_len {
        let new_gap = (old_gap as isize + delta) as usize;
        link(old_gap, new_gap, &mut seeded);
    }

    // propagate around each component from its seeded segment; a component
    // with no outside presence defaults to rightward on its least segment
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); next.seg_count];
    for j in &next.joins {
        adj[j.upper].push(j.lower);
        adj[j.lower].push(j.upper);
    }
    let mut dirs: Vec<Option<Dir>> = vec![None; next.seg_count];
    for (comp, seed) in seeded.iter().enumerate() {
        let (start, d0) = match seed {
            Some(s) => *s,
            None => {
                let least = (0..next.seg_count).find(|&s| next.component_of[s] == comp).unwrap();
                (least, Dir::Right)
            }
        };
        if dirs[start].is_some() {
            continue;
        }
        dirs[start] = Some(d0);
        let mut stack = vec![start];
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

/// Full verification: replay, bookkeeping, orientability, genus, audits.
pub fn check(cert: &CobordismCertificate) -> Result<CobordismReport, ReplayError> {
    let diagrams = replay(cert)?;
    let traces: Vec<Trace> = diagrams.iter().map(|d| d.trace()).collect();

    let mut pinches = 0usize;
    let mut cups = 0usize;
    let mut pinch_records = Vec::new();

    // movie graph with orientation parity: node = (epoch offset + segment)
    let mut offsets = Vec::with_capacity(traces.len());
    let mut total = 0usize;
    for t in &traces {
        offsets.push(total);
        total += t.seg_count;
    }
    let mut uf = ParityUf::new(total);
    for (e, t) in traces.iter().enumerate() {
        for j in &t.joins {
            uf.union(offsets[e] + j.upper, offsets[e] + j.lower, 1);
        }
    }

    // transported orientation, for the per-step bookkeeping records
    let mut dirs: Vec<Dir> =
        crate::front::OrientedDiagram::default_orientation(cert.top.clone()).dirs;

    for (i, step) in cert.steps.iter().enumerate() {
        let prev = &traces[i];
        let next = &traces[i + 1];
        let prev_len = diagrams[i].len();
        let (_, window) = apply_step(&diagrams[i], step).expect("replay already validated");

        // cross-epoch positional links, parity 0
        let delta = window.inserted as isize - window.removed as isize;
        for gap in 0..=window.at {
            let (os, ns) = (&prev.slabs[gap], &next.slabs[gap]);
            for (o, n) in os.iter().zip(ns.iter()) {
                uf.union(offsets[i] + o, offsets[i + 1] + n, 0);
            }
        }
        for old_gap in (window.at + window.removed)..=prev_len {
            let new_gap = (old_gap as isize + delta) as usize;
            let (os, ns) = (&prev.slabs[old_gap], &next.slabs[new_gap]);
            for (o, n) in os.iter().zip(ns.iter()) {
                uf.union(offsets[i] + o, offsets[i + 1] + n, 0);
            }
        }

        let next_dirs = transport_dirs(prev, &dirs, next, window, prev_len);

        match step {
            CobordismStep::Pinch { gap, pos } => {
                pinches += 1;
                let slab = &prev.slabs[*gap];
                let (sa, sb) = (slab[pos - 1], slab[*pos]);
                let same_component = prev.component_of[sa] == prev.component_of[sb];
                let class = if dirs[sa] != dirs[sb] {
                    PinchClass::Orientable
                } else {
                    PinchClass::NonOrientable
                };
                let before = invariants_from_dirs(prev, &dirs).w_minus_rc;
                let after = invariants_from_dirs(next, &next_dirs).w_minus_rc;
                pinch_records.push(PinchRecord {
                    step_index: i,
                    gap: *gap,
                    pos: *pos,
                    same_component,
                    class,
                    delta_w_minus_rc: after - before,
                });
            }
            CobordismStep::Cup { .. } => {
                cups += 1;
            }
            CobordismStep::Isotopy(_) => {}
        }
        dirs = next_dirs;
    }

    let orientable = uf.consistent;
    // surface components: distinct UF roots over all epochs
    let mut roots = std::collections::BTreeSet::new();
    for n in 0..total {
        roots.insert(uf.find(n).0);
    }
    let surface_connected = roots.len() <= 1;

    let euler = cups as i64 - pinches as i64;
    let top_components = traces[0].component_count;
    let bottom_components = traces.last().unwrap().component_count;
    let boundary = (top_components + bottom_components) as i64;

    let (genus, crosscap_genus) = if total == 0 || !surface_connected {
        (None, None)
    } else if orientable {
        let g2 = 2 - boundary - euler;
        if g2 >= 0 && g2 % 2 == 0 {
            (Some(g2 / 2), None)
        } else {
            (None, None)
        }
    } else {
        let k = 2 - boundary - euler;
        if k >= 1 {
            (None, Some(k))
        } else {
            (None, None)
        }
    };

    let ends_word_equal = cert.top == cert.bottom && !cert.top.is_empty();
    let is_filling = cert.bottom.is_empty() && !cert.top.is_empty();

    let mut report = CobordismReport {
        euler,
        pinches,
        cups,
        orientable,
        surface_connected,
        genus,
        crosscap_genus,
        exact: true,
        top_components,
        bottom_components,
        ends_word_equal,
        is_filling,
        pinch_records,
        flags: Vec::new(),
    };
    report.flags = audit_endocobordism(&report);
    Ok(report)
}

/// Endocobordism theorem audit. Operates on a report so tests can exercise
/// the assertions directly; `check` calls it on every verified certificate.
///
/// For word-equal ends: a non-orientable certificate must have crosscap genus
/// a positive multiple of 4; an orientable one must have no pinches at all.
pub fn audit_endocobordism(report: &CobordismReport) -> Vec<Flag> {
    let mut flags = Vec::new();
    if !report.ends_word_equal {
        return flags;
    }
    if report.orientable {
        if report.pinches != 0 {
            flags.push(Flag::EndoOrientableNotConcordance { pinches: report.pinches });
        }
    } else {
        let k = report.crosscap_genus.unwrap_or(-1);
        if k <= 0 || k % 4 != 0 {
            flags.push(Flag::EndoCrosscapNotMultipleOf4 { crosscap: k });
        }
    }
    flags
}

/// Summary of a verified certificate for cross-certificate consistency checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertSummary {
    pub name: String,
    pub top: String,
    pub bottom: String,
    pub orientable: bool,
    pub is_filling: bool,
    pub ends_word_equal: bool,
}

impl CertSummary {
    pub fn from_report(name: &str, cert: &CobordismCertificate, report: &CobordismReport) -> Self {
        CertSummary {
            name: name.to_string(),
            top: cert.top.to_string(),
            bottom: cert.bottom.to_string(),
            orientable: report.orientable,
            is_filling: report.is_filling,
            ends_word_equal: report.ends_word_equal,
        }
    }
}

/// Cross-certificate store checks:
/// a word with a verified filling must not also have a verified
/// non-orientable endocobordism, and non-orientable cobordisms both ways
/// between two words are impossible when either is exactly fillable.
pub fn session_consistency(store: &[CertSummary]) -> Vec<Flag> {
    let mut flags = Vec::new();
    let fillings: Vec<&CertSummary> = store.iter().filter(|c| c.is_filling).collect();
    let fillable = |w: &str| fillings.iter().any(|f| f.top == w);

    for c in store {
        if c.ends_word_equal && !c.orientable && fillable(&c.top) {
            let flag = Flag::FillableWithNonOrientableEndo { word: c.top.clone() };
            if !flags.contains(&flag) {
                flags.push(flag);
            }
        }
    }
    for a in store {
        if a.orientable || a.is_filling || a.ends_word_equal {
            continue;
        }
        for b in store {
            if b.orientable || b.is_filling || b.ends_word_equal {
                continue;
            }
            if a.top == b.bottom && a.bottom == b.top && (fillable(&a.top) || fillable(&a.bottom))
            {
                let (wa, wb) = if a.top <= a.bottom {
                    (a.top.clone(), a.bottom.clone())
                } else {
                    (a.bottom.clone(), a.top.clone())
                };
                let flag = Flag::NonOrientableLoopThroughFillable { word_a: wa, word_b: wb };
                if !flags.contains(&flag) {
                    flags.push(flag);
                }
            }
        }
    }
    flags
}

// ---------------------------------------------------------------------------
// LCOB text format
// ---------------------------------------------------------------------------

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LcobError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("could not load referenced front `{path}`: {message}")]
    FrontRef { path: String, message: String },
}

fn parse_word_or_path(
    rest: &str,
    base: Option<&Path>,
    line: usize,
) -> Result<FrontDiagram, LcobError> {
    let rest = rest.trim();
    if rest == "EMPTY" {
        return Ok(FrontDiagram::empty());
    }
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if let Ok(events) = parse_event_tokens(&tokens, 0) {
        return FrontDiagram::new(events)
            .map_err(|e| LcobError::Parse { line, message: e.to_string() });
    }
    // otherwise a single token naming an LFRONT file
    if tokens.len() != 1 {
        return Err(LcobError::Parse { line, message: format!("cannot parse `{}`", rest) });
    }
    let path = match base {
        Some(b) => b.join(tokens[0]),
        None => Path::new(tokens[0]).to_path_buf(),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| LcobError::FrontRef {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    crate::front::parse_front(&text).map_err(|e| LcobError::FrontRef {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Parse the LCOB format. `base` resolves `TOP`/`BOTTOM` lines that name a
/// front file instead of giving an inline word.
pub fn parse_lcob(text: &str, base: Option<&Path>) -> Result<CobordismCertificate, LcobError> {
    let mut top: Option<FrontDiagram> = None;
    let mut bottom: Option<FrontDiagram> = None;
    let mut steps = Vec::new();
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(j) => &raw[..j],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != "LCOB 1" {
                return Err(LcobError::Parse {
                    line: line_no,
                    message: "expected header `LCOB 1`".into(),
                });
            }
            saw_header = true;
            continue;
        }
        let (kw, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match kw {
            "TOP" => top = Some(parse_word_or_path(rest, base, line_no)?),
            "BOTTOM" => bottom = Some(parse_word_or_path(rest, base, line_no)?),
            "MOVE" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let m = parse_move(&toks).ok_or_else(|| LcobError::Parse {
                    line: line_no,
                    message: format!("bad move `{}`", rest),
                })?;
                steps.push(CobordismStep::Isotopy(m));
            }
            "PINCH" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(LcobError::Parse { line: line_no, message: "PINCH <gap> <pos>".into() });
                }
                let gap = toks[0].parse().map_err(|_| LcobError::Parse {
                    line: line_no,
                    message: "bad gap".into(),
                })?;
                let pos = toks[1].parse().map_err(|_| LcobError::Parse {
                    line: line_no,
                    message: "bad pos".into(),
                })?;
                steps.push(CobordismStep::Pinch { gap, pos });
            }
            "CUP" => {
                let gap = rest.trim().parse().map_err(|_| LcobError::Parse {
                    line: line_no,
                    message: "CUP <gap>".into(),
                })?;
                steps.push(CobordismStep::Cup { gap });
            }
            _ => {
                return Err(LcobError::Parse {
                    line: line_no,
                    message: format!("unknown keyword `{}`", kw),
                })
            }
        }
    }
    let top = top.ok_or(LcobError::Parse { line: 0, message: "missing TOP".into() })?;
    let bottom = bottom.ok_or(LcobError::Parse { line: 0, message: "missing BOTTOM".into() })?;
    Ok(CobordismCertificate { top, steps, bottom })
}

pub fn serialize_lcob(cert: &CobordismCertificate) -> String {
    let mut out = String::from("LCOB 1\n");
    if cert.top.is_empty() {
        out.push_str("TOP EMPTY\n");
    } else {
        out.push_str(&format!("TOP {}\n", cert.top));
    }
    for s in &cert.steps {
        out.push_str(&format!("{}\n", s));
    }
    if cert.bottom.is_empty() {
        out.push_str("BOTTOM EMPTY\n");
    } else {
        out.push_str(&format!("BOTTOM {}\n", cert.bottom));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::parse_event_tokens;

    fn front(word: &str) -> FrontDiagram {
        if word.is_empty() {
            return FrontDiagram::empty();
        }
        let toks: Vec<&str> = word.split_whitespace().collect();
        FrontDiagram::new(parse_event_tokens(&toks, 0).unwrap()).unwrap()
    }

    fn cert(top: &str, steps: Vec<CobordismStep>, bottom: &str) -> CobordismCertificate {
        CobordismCertificate { top: front(top), steps, bottom: front(bottom) }
    }

    #[test]
    fn pinch_on_unknot_splits() {
        let c = cert("L1 R1", vec![CobordismStep::Pinch { gap: 1, pos: 1 }], "L1 R1 L1 R1");
        let ds = replay(&c).unwrap();
        assert_eq!(ds[1].to_string(), "L1 R1 L1 R1");
        assert_eq!(ds[1].components(), 2);
    }

    #[test]
    fn cup_on_unknot_empties() {
        let c = cert("L1 R1", vec![CobordismStep::Cup { gap: 0 }], "");
        let ds = replay(&c).unwrap();
        assert!(ds[1].is_empty());
    }

    #[test]
    fn cup_requires_literal_circle() {
        let c = cert("L1 X1 R1", vec![CobordismStep::Cup { gap: 0 }], "");
        match replay(&c) {
            Err(ReplayError::Step { index: 0, .. }) => {}
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn unknot_disk_filling() {
        let c = cert(
            "L1 R1",
            vec![
                CobordismStep::Pinch { gap: 1, pos: 1 },
                CobordismStep::Cup { gap: 0 },
                CobordismStep::Cup { gap: 0 },
            ],
            "",
        );
        let r = check(&c).unwrap();
        assert_eq!(r.euler, 1);
        assert!(r.orientable);
        assert!(r.surface_connected);
        assert_eq!(r.genus, Some(0));
        assert!(r.exact);
        assert!(r.flags.is_empty());
        // the one pinch is an orientable split of a knot: its bookkeeping law
        assert_eq!(r.pinch_records[0].class, PinchClass::Orientable);
        assert_eq!(r.pinch_records[0].delta_w_minus_rc, -1);
        // cups: -1 -1 then +1 +1 back to 0 for the empty word
        assert!(r.is_filling);
    }

    #[test]
    fn trivial_certificate_is_cylinder() {
        let c = cert("L1 R1", vec![], "L1 R1");
        let r = check(&c).unwrap();
        assert_eq!(r.euler, 0);
        assert!(r.orientable);
        assert_eq!(r.genus, Some(0));
        assert!(r.ends_word_equal);
        assert!(r.flags.is_empty());
    }

    #[test]
    fn forged_crosscap_two_report_is_flagged() {
        // unit-test seam: inject a fake equal-ends report and audit it
        let fake = CobordismReport {
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
        let flags = audit_endocobordism(&fake);
        assert_eq!(flags, vec![Flag::EndoCrosscapNotMultipleOf4 { crosscap: 2 }]);
        assert!(flags[0].is_theorem_violation());
    }

    #[test]
    fn orientable_endo_with_pinches_is_flagged() {
        let fake = CobordismReport {
            euler: -2,
            pinches: 2,
            cups: 0,
            orientable: true,
            surface_connected: true,
            genus: Some(1),
            crosscap_genus: None,
            exact: true,
            top_components: 1,
            bottom_components: 1,
            ends_word_equal: true,
            is_filling: false,
            pinch_records: Vec::new(),
            flags: Vec::new(),
        };
        let flags = audit_endocobordism(&fake);
        assert_eq!(flags, vec![Flag::EndoOrientableNotConcordance { pinches: 2 }]);
    }

    #[test]
    fn differing_ends_not_audited() {
        let fake = CobordismReport {
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
            ends_word_equal: false,
            is_filling: false,
            pinch_records: Vec::new(),
            flags: Vec::new(),
        };
        assert!(audit_endocobordism(&fake).is_empty());
    }

    #[test]
    fn session_consistency_rules() {
        let filling = CertSummary {
            name: "fill".into(),
            top: "L1 R1".into(),
            bottom: String::new(),
            orientable: true,
            is_filling: true,
            ends_word_equal: false,
        };
        let forged_endo = CertSummary {
            name: "endo".into(),
            top: "L1 R1".into(),
            bottom: "L1 R1".into(),
            orientable: false,
            is_filling: false,
            ends_word_equal: true,
        };
        let unrelated_endo = CertSummary {
            name: "endo2".into(),
            top: "L1 L1 R2 R1".into(),
            bottom: "L1 L1 R2 R1".into(),
            orientable: false,
            is_filling: false,
            ends_word_equal: true,
        };
        assert!(session_consistency(&[]).is_empty());
        assert!(session_consistency(&[filling.clone(), unrelated_endo]).is_empty());
        let flags = session_consistency(&[filling.clone(), forged_endo]);
        assert_eq!(flags.len(), 1);
        assert!(matches!(flags[0], Flag::FillableWithNonOrientableEndo { .. }));

        // anti-symmetry: non-orientable certs both ways through a fillable word
        let ab = CertSummary {
            name: "ab".into(),
            top: "L1 R1".into(),
            bottom: "L1 L1 R2 R1".into(),
            orientable: false,
            is_filling: false,
            ends_word_equal: false,
        };
        let ba = CertSummary {
            name: "ba".into(),
            top: "L1 L1 R2 R1".into(),
            bottom: "L1 R1".into(),
            orientable: false,
            is_filling: false,
            ends_word_equal: false,
        };
        let flags = session_consistency(&[filling, ab, ba]);
        assert_eq!(flags.len(), 1);
        assert!(matches!(flags[0], Flag::NonOrientableLoopThroughFillable { .. }));
    }

    #[test]
    fn classify_pinch_examples() {
        use crate::front::OrientedDiagram;
        // a closed curve's two slice strands are anti-parallel
        let u = OrientedDiagram::default_orientation(front("L1 R1"));
        assert_eq!(classify_pinch(&u, 1, 1), Some(PinchClass::Orientable));

        // freshly pinched configuration: same-direction segments
        let w = OrientedDiagram::default_orientation(front("L1 L3 X2 X2 X2 R1 R1"));
        // the twist strands run the same way at gap 3
        assert_eq!(classify_pinch(&w, 3, 2), Some(PinchClass::NonOrientable));

        // pinch joining two components: classification depends on the free
        // orientation choice of the second component
        let two = front("L1 L2 R2 R1"); // nested circles
        assert_eq!(two.components(), 2);
        let a = OrientedDiagram::new(two.clone(), vec![false, false]).unwrap();
        let b = OrientedDiagram::new(two, vec![false, true]).unwrap();
        let ca = classify_pinch(&a, 2, 1).unwrap();
        let cb = classify_pinch(&b, 2, 1).unwrap();
        assert_ne!(ca, cb, "both classifications reachable by orientation flip");
        assert!(classify_pinch(&a, 2, 9).is_none());
    }

    #[test]
    fn lcob_round_trip() {
        let c = cert(
            "L1 R1",
            vec![
                CobordismStep::Pinch { gap: 1, pos: 1 },
                CobordismStep::Isotopy(IsotopyMove {
                    kind: MoveKind::Commute,
                    gap: 1,
                    dir: MoveDir::Fwd,
                }),
                CobordismStep::Cup { gap: 2 },
            ],
            "L1 R1",
        );
        let text = serialize_lcob(&c);
        let back = parse_lcob(&text, None).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn lcob_empty_bottom() {
        let text = "LCOB 1\nTOP L1 R1\nCUP 0\nBOTTOM EMPTY\n";
        let c = parse_lcob(text, None).unwrap();
        assert!(c.bottom.is_empty());
        assert!(replay(&c).is_ok());
    }

    #[test]
    fn wrong_bottom_rejected() {
        let c = cert("L1 R1", vec![], "L1 L1 R2 R1");
        match replay(&c) {
            Err(ReplayError::WrongBottom { .. }) => {}
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn euler_always_matches_counts() {
        let c = cert(
            "L1 R1",
            vec![
                CobordismStep::Pinch { gap: 1, pos: 1 },
                CobordismStep::Pinch { gap: 1, pos: 1 },
                CobordismStep::Cup { gap: 2 },
            ],
            "L1 R1 L1 R1",
        );
        let r = check(&c).unwrap();
        assert_eq!(r.euler, -(r.pinches as i64) + r.cups as i64);
        assert_eq!(r.pinches, 2);
        assert_eq!(r.cups, 1);
    }

    #[test]
    fn isotopy_steps_in_certificates() {
        use crate::moves::R1Side;
        let kink = IsotopyMove {
            kind: MoveKind::R1 { side: R1Side::Below, strand: 1 },
            gap: 1,
            dir: MoveDir::Fwd,
        };
        let c = cert(
            "L1 R1",
            vec![CobordismStep::Isotopy(kink), CobordismStep::Isotopy(kink.inverse())],
            "L1 R1",
        );
        let r = check(&c).unwrap();
        assert!(r.orientable);
        assert_eq!(r.genus, Some(0));
        assert!(r.flags.is_empty());
    }
}
