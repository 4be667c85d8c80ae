//! Exact computations in quiver Hecke (KLR) algebras, their extension by
//! dashed strands, and thick-strand subalgebras.

pub mod cartan;
pub mod config;
pub mod expr;
pub mod graded;
pub mod klr;
pub mod rational;
pub mod suites;
pub mod symgroup;
pub mod thick;

pub use cartan::{CartanDatum, CartanError, ExtendedDatum, LabelId, LabelName, ScalarParams, SKey};
pub use klr::{BasisDiagram, Element, Gen, KlrAlgebra, KlrError, NotHomogeneous};
pub use rational::Coeff;
pub use symgroup::{Perm, PermError};
pub use thick::{Multiplicity, ThickContext, ThickElement, ThickError, ThickLabel, ThickSeq};
