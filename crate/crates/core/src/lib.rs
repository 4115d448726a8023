//! Verification workbench for the discrete symmetries of Poincaré-invariant
//! four- and eight-component wave equations for massive particles.
//!
//! The crate builds gamma-matrix bases and spin tensors ([`clifford`]), a
//! small symbolic algebra of momentum-space operators ([`expr`],
//! [`operator`]), the five Poincaré generator sets ([`poincare`]), and then
//! decides invariance under P, T, C and mass-inversion operators by solving
//! for constant intertwining matrices ([`symmetry`]). Label-level
//! representation bookkeeping lives in [`rep_calculus`].

pub mod clifford;
pub mod expr;
pub mod linalg;
pub mod matrix;
pub mod operator;
pub mod poincare;
pub mod rep_calculus;
pub mod samples;
pub mod symmetry;
