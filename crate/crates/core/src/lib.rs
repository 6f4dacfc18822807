//! Certainty-factor reasoning over AND/OR graphs with nonmonotonic
//! antecedents.
//!
//! A [`PrimoGraph`] is built from a rule file ([`parser::parse`]) or a
//! [`GraphBuilder`]. [`BoundsState`] propagates certainty intervals to a
//! fixpoint; [`enumerate`] lists admissible labelings; [`optimize`] picks the
//! labeling closest to the propagated information content via weighted
//! satisfiability, and [`solve_by_components`] does the same one strongly
//! connected component at a time.
//!
//! Everything is generic over the scalar type (`f64` or `f32`); the aliases
//! at the crate root fix it to `f64`.

pub mod components;
pub mod extensions;
pub mod fixtures;
pub mod graph;
pub mod optimize;
pub mod parser;
pub mod propagate;
pub mod scalar;
pub mod scc;
pub mod tnorm;
pub mod validate;

pub use components::{solve_by_components, ComponentError, ComponentPlan, ComponentSolution, Method};
pub use extensions::{check_admissible, enumerate, find_starters, Enumeration, ExtensionError, Labeling};
pub use graph::{GraphBuilder, GraphError, JustId, Justification, Literal, LiteralId, PrimoGraph, Vertex};
pub use optimize::{
    decode, encode, objective, solve_exact, solve_heuristic, Assignment, Heuristic, SolveError, WcnfInstance,
};
pub use propagate::{BoundsState, CertaintyInterval, Force, Inconsistency};
pub use scalar::Scalar;
pub use scc::{condense, Condensation};
pub use tnorm::TNormFamily;
pub use validate::{detect_odd_loops, has_odd_loop, validate_graph, OddLoop, ValidationReport};

pub type Graph = PrimoGraph<f64>;
pub type Interval = CertaintyInterval<f64>;
pub type Bounds<'g> = BoundsState<'g, f64>;
pub type Instance = WcnfInstance<f64>;
pub type Spec = parser::PrimoSpec<f64>;
