//! Generalized Bajraktarević decision-making means.
//!
//! A weighted profile of decisions is aggregated through an admissible
//! generator map `f`: the aggregated decision is the extended inverse of the
//! weighted image sum, and the aggregated effort is the scale of that sum
//! along its ray. The pair satisfies the five decision-making axioms and the
//! five effort axioms, delegates over subgroups, and is casuative: an added
//! opinion leaves the outcome fixed only when it already agrees with it.
//!
//! The crate provides:
//!
//! - [`profiles`]: validated weighted profiles and the axiom-level
//!   normalizations (elimination, reduction, signed-weight splitting);
//! - [`maps`]: the [`maps::AdmissibleMap`] abstraction, ratio maps over an
//!   interval with bracketed monotone inversion, planar admissibility
//!   certificates, and linear post-composition;
//! - [`families`]: Gini means and efforts in both parameter branches, power
//!   and quasi-arithmetic means, and the hyperboloid mean;
//! - [`means`]: aggregation, delegation (group and matrix form) and
//!   casuativity checks;
//! - [`selective`]: the four conservative aggregators and the arithmetic
//!   effort;
//! - [`synergy`]: effort synergy, the Gini synergy-sign law, the
//!   null-synergy characterization and threshold coalition games;
//! - [`convexity`]: f-convex hull membership, hull sampling and sampled
//!   f-convexity checks;
//! - [`equality`]: deciding `B_f = B_g` by fitting a linear map between
//!   generators;
//! - [`axioms`]: seeded property suites behind the CLI `check` subcommand;
//! - [`registry`]: map construction from spec strings such as `gini:2,-1`.
//!
//! ```
//! use bajra::{aggregate, build_map, DecisionProfile};
//!
//! let map = build_map("gini:1,-1")?;
//! let profile = DecisionProfile::from_scalars(&[1.0, 2.0], &[1.0, 1.0])?;
//! let out = aggregate(map.as_ref(), &profile)?;
//!
//! // decision is sqrt(2), effort is sqrt(4.5): more effort than the
//! // plain weight sum, a positive synergy
//! assert!((out.decision[0] - 2.0f64.sqrt()).abs() < 1e-10);
//! assert!((out.effort - 4.5f64.sqrt()).abs() < 1e-10);
//! assert!(out.effort > profile.weight_sum());
//! # Ok::<(), bajra::Error>(())
//! ```

pub mod axioms;
pub mod convexity;
pub mod equality;
pub mod error;
pub mod expr;
pub mod families;
pub mod linalg;
pub mod maps;
pub mod means;
pub mod numeric;
pub mod profiles;
pub mod registry;
pub mod rootfind;
pub mod sampling;
pub mod selective;
pub mod synergy;

pub use error::{Error, Result};
pub use families::{gini_effort, gini_mean, GiniParams};
pub use maps::{AdmissibleMap, Domain};
pub use means::{aggregate, AggregationOutcome};
pub use numeric::Tolerance;
pub use profiles::{split_signed_weights, DecisionProfile, Point, SignedWeightSplit};
pub use registry::build_map;
