//! Random group presentations in the density model.
//!
//! The crate computes the combinatorial invariants behind phase transitions
//! of random groups: reduction degree and complexity of van Kampen
//! 2-complexes, density and critical density of geometric forms, fillings of
//! subdivided complexes by relator sets, and small-cancellation conditions.
//! Samplers for the Bernoulli and fixed-count density models and a seeded
//! sweep harness tie them together.
//!
//! ```
//! use randgroups::forms::Builtin;
//! use num_rational::Rational64;
//!
//! let wheel = "wheel(3)".parse::<Builtin>()?.build()?;
//! let dc = wheel.critical_density()?;
//! assert_eq!(dc.value, Rational64::new(3, 4));
//! # Ok::<(), randgroups::forms::FormError>(())
//! ```

pub mod complex;
pub mod experiments;
pub mod filling;
pub mod forms;
pub mod sampler;
pub mod smallcancel;
pub mod text;
pub mod words;

pub use complex::{AbstractLabeling, Complex2, Edge, Face, FaceLabel, OrientedEdge};
pub use forms::{Builtin, GeometricForm, SubdivisionMode};
pub use words::{Letter, Word};
