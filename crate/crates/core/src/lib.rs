//! Combinatorial calculus for Legendrian front diagrams: event-word fronts,
//! Reidemeister move rewriting, Lagrangian cobordism certificates with a
//! verifier, certificate generators, and normal ruling enumeration.

pub mod cobordism;
pub mod construct;
pub mod families;
pub mod front;
pub mod moves;
pub mod rulings;

pub use cobordism::{
    check, classify_pinch, parse_lcob, replay, serialize_lcob, CertSummary, CobordismCertificate,
    CobordismReport, CobordismStep, Flag, PinchClass, ReplayError,
};
pub use construct::{
    add_zigzag_pair, between_stabilized, endocobordism, remove_zigzag, resolve_crossing,
    reverse_to_stabilized, stabilize, to_unknot, ConstructError, KnotPathData, Sign, StabSite,
};
pub use families::{fill_family, make_family, FamilyError, FamilyParams};
pub use front::{
    parse_front, serialize_front, ClassicalInvariants, Dir, Event, EventKind, FrontDiagram,
    FrontError, OrientedDiagram, Trace,
};
pub use moves::{
    apply_move, commutation_normal_form, enumerate_moves, search_isotopy, verify_isotopy,
    IsotopyCertificate, IsotopyMove, MoveDir, MoveError, MoveKind, R1Side, R2Kind, SearchOutcome,
};
pub use rulings::{enumerate_rulings, fillability_report, maslov_potential, MaslovPotential};
