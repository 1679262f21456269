//! Exact computations for the filtered chain model of star-shaped toric
//! domains in C².
//!
//! A domain is described by its moment region `Ω ⊂ (R≥0)²`, here always a
//! rational star-shaped polygon ([`ToricProfile`]). Everything downstream is
//! exact rational arithmetic:
//!
//! * [`boundary`] walks the extended boundary curve `∂₊Ω` (the boundary arc
//!   plus the two axis rays), finds critical points of the linear forms
//!   `A_{m₁,m₂}` along it and enumerates the action spectrum with indices.
//! * [`sublevel`] decomposes sublevel sets `{A < a}` of `∂₊Ω` into open
//!   intervals and computes relative homology of sublevel pairs together
//!   with the maps induced by inclusions.
//! * [`homology`] assembles the two-row E¹ page of the filtration by
//!   `m₁ + m₂` and reads off window homology, window maps and the shift-sum
//!   `u` map.
//! * [`capacity`] computes the capacities `c_k(Ω)` by the general algorithm
//!   and by the closed forms available for concave and convex regions.

pub mod boundary;
pub mod capacity;
pub mod domain;
pub mod error;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod rational;
pub mod samples;
pub mod sublevel;

pub use boundary::{
    check_nice, corner_slopes, critical_points, min_spec, spectrum, BoundaryCurve,
    CriticalKind, CriticalPoint, NicenessReport, SpectrumEntry, Violation,
};
pub use capacity::{
    asymptotic_limit, c_k_concave, c_k_convex, c_k_general, capacity, verify_properties,
    CapacityMethod, CapacityResult, MethodChoice, PropertyReport, Witness,
};
pub use domain::{includes, DomainClass, LinearForm, Point, ToricProfile};
pub use error::{Error, Result};
pub use homology::{
    assemble_e1, betti, differential, u_map_rank, window_map, BettiTable, DifferentialMatrix,
    E1Page, Window,
};
pub use rational::Q;
pub use sublevel::{
    decompose, inclusion_map, relative_homology, threshold_map, DegeneracyPolicy, InclusionMap,
    RelativeHomology, SublevelDecomposition, SublevelInterval, Threshold,
};
