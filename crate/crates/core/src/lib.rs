//! A model checker and rewriting toolkit for a multi-agent logic of
//! knowledge, topological interior, public announcements, and arbitrary
//! public announcements, interpreted on finite topological spaces with
//! neighbourhood function sets.
//!
//! The crate provides:
//! - [`formula`]: the AST, concrete syntax, complexity measures, and
//!   necessity forms;
//! - [`topology`]: finite topologies generated from subbases, with
//!   interior and base checking;
//! - [`model`]: neighbourhood functions, topo-frames/models, structural
//!   validation, and the JSON model format;
//! - [`semantics`]: the satisfaction relation, updates, definable-open
//!   families, and validity checking, with an exact arbitrary-announcement
//!   box and an effort-style variant;
//! - [`reduce`]: rewriting of announcement formulas into the epistemic
//!   fragment via the reduction axioms, with a measure-checked trace;
//! - [`testkit`]: random models and formulas, axiom-schema instantiation,
//!   the soundness suite, and a bounded-enumeration oracle for the box.

pub mod formula;
pub mod model;
pub mod reduce;
pub mod semantics;
pub mod testkit;
pub mod topology;

pub use formula::{compare, parse, print, Formula, NecessityForm};
pub use model::{jewel_model, load_model, NeighbourhoodFunction, Situation, TopoModel};
pub use semantics::{evaluate, valid_in_model, BoxMode, Evaluator};
pub use reduce::{reduce_to_el, reduction_trace};
