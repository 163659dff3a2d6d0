//! Exact computation of topological-recursion correlators on rational
//! spectral curves and verification of their x-y swap functional relations.
//!
//! Everything is computed over the exact rationals: correlator densities,
//! recursion kernels and tree weights are multivariate rational functions,
//! residues are extracted from truncated Laurent expansions with explicit
//! truncation bookkeeping, and every identity check is an exact equality of
//! canonical forms.
//!
//! The crate is `no_std` (with `alloc`); all values are immutable after
//! construction and freely shareable across threads.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod curve;
pub mod freeprob;
pub mod genus1;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod stirling;
pub mod tr;
pub mod trees;
pub mod xy;

pub use curve::{CurveError, RamificationSet, Side, SpectralCurve};
pub use poly::{Int, MultiPoly, Rat, Var};
pub use ratfunc::{rational_roots, CasError, RationalFunction};
pub use xy::{tree_weight, verify_xy, wn1_partition, xy_w0m, xy_wnm, IdentityCheck, MixedVars, XyError, XyReport};
pub use trees::{bell, enumerate_trees, grow_box, grow_circle, set_partitions, DoubleSet, Tree, TreeError};
pub use series::LocalSeries;
pub use tr::{bergman_density, Correlator, Engine, KernelSeries, Provenance, TrError};
