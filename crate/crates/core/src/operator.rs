//! Linear operators in momentum space: finite sums of matrix-valued
//! coefficients times partial derivatives `∂^α = ∂₁^α₁ ∂₂^α₂ ∂₃^α₃` in `p`.
//!
//! The position operator is `x̂_a = i ∂/∂p_a`. Composition applies the full
//! Leibniz rule, so brackets such as `[x̂_a, E]₋ = i p_a/E` come out exactly.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Sample, ScalarExpr, Var};
use crate::matrix::{c64, ComplexMatrix, I};

/// Highest derivative order an operator may carry.
pub const MAX_ORDER: u8 = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("operator product has derivative order {0}, above the supported maximum {MAX_ORDER}")]
    OrderExceeded(u8),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Derivative multi-index over `(∂/∂p₁, ∂/∂p₂, ∂/∂p₃)`.
pub type MultiIndex = [u8; 3];

pub fn order(alpha: &MultiIndex) -> u8 {
    alpha.iter().sum()
}

pub fn unit_index(a: usize) -> MultiIndex {
    let mut alpha = [0; 3];
    alpha[a] = 1;
    alpha
}

/// Matrix whose entries are scalar expressions, stored as `Σ_j f_j · M_j` with
/// constant matrices `M_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixExpr {
    dim: usize,
    terms: Vec<(ScalarExpr, ComplexMatrix)>,
}

impl MatrixExpr {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(matrix: ComplexMatrix) -> Self {
        Self::term(ScalarExpr::one(), matrix)
    }

    /// `f · 1`.
    pub fn scalar(f: ScalarExpr, dim: usize) -> Self {
        Self::term(f, ComplexMatrix::identity(dim))
    }

    pub fn term(f: ScalarExpr, matrix: ComplexMatrix) -> Self {
        let mut out = Self::zero(matrix.dim());
        out.push(f, matrix);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(ScalarExpr, ComplexMatrix)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, f: ScalarExpr, matrix: ComplexMatrix) {
        if f.is_zero() || matrix.is_zero() {
            return;
        }
        if let Some(k) = self.terms.iter().position(|(g, _)| *g == f) {
            let merged = &self.terms[k].1 + &matrix;
            if merged.is_zero() {
                self.terms.remove(k);
            } else {
                self.terms[k].1 = merged;
            }
            return;
        }
        if let Some(k) = self.terms.iter().position(|(_, m)| *m == matrix) {
            let merged = self.terms[k].0.clone() + f;
            if merged.is_zero() {
                self.terms.remove(k);
            } else {
                self.terms[k].0 = merged;
            }
            return;
        }
        self.terms.push((f, matrix));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, m) in &other.terms {
            out.push(f.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_const(c64(-1.0, 0.0)))
    }

    pub fn scale_const(&self, z: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.clone(), m.scale(z));
        }
        out
    }

    pub fn scale(&self, g: &ScalarExpr) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.clone() * g.clone(), m.clone());
        }
        out
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                out.push(f.clone() * g.clone(), a * b);
            }
        }
        out
    }

    pub fn left_mul_const(&self, matrix: &ComplexMatrix) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.clone(), matrix * m);
        }
        out
    }

    pub fn right_mul_const(&self, matrix: &ComplexMatrix) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.clone(), m * matrix);
        }
        out
    }

    pub fn differentiate(&self, var: Var) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.differentiate(var), m.clone());
        }
        out
    }

    /// `∂^α` applied entrywise.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (a, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                out = out.differentiate(Var::p(a));
            }
        }
        out
    }

    pub fn flip(&self, eta_p: i8, eta_m: i8, eta_t: i8) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.flip(eta_p, eta_m, eta_t), m.clone());
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.conj(), m.conj());
        }
        out
    }

    /// Entrywise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, m) in &self.terms {
            out.push(f.conj(), m.adjoint());
        }
        out
    }

    pub fn eval(&self, at: &Sample) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (f, m) in &self.terms {
            out += &m.scale(f.eval(at));
        }
        out
    }

    /// The `(i, j)` entry as a single scalar expression.
    pub fn entry(&self, i: usize, j: usize) -> ScalarExpr {
        ScalarExpr::sum(self.terms.iter().map(|(f, m)| f.clone().scale(m.get(i, j))))
    }
}

/// Momentum-space shadow of a discrete substitution `Φ ↦ Φ(η_p p, η_t t, η_m m)`,
/// optionally followed by complex conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagTransform {
    pub eta_p: i8,
    pub eta_t: i8,
    pub eta_m: i8,
    pub conj: bool,
}

impl FlagTransform {
    pub const IDENTITY: FlagTransform = FlagTransform { eta_p: 1, eta_t: 1, eta_m: 1, conj: false };

    pub fn new(eta_p: i8, eta_t: i8, eta_m: i8, conj: bool) -> Self {
        Self { eta_p, eta_t, eta_m, conj }
    }

    pub fn compose(&self, other: &FlagTransform) -> FlagTransform {
        FlagTransform {
            eta_p: self.eta_p * other.eta_p,
            eta_t: self.eta_t * other.eta_t,
            eta_m: self.eta_m * other.eta_m,
            conj: self.conj ^ other.conj,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

/// `Σ_α C_α(p, m, t) ∂^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumOperator {
    dim: usize,
    terms: BTreeMap<MultiIndex, MatrixExpr>,
}

/// Outcome of [`MomentumOperator::equal_at`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equality {
    pub equal: bool,
    pub residual: f64,
}

impl MomentumOperator {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::multiplication(MatrixExpr::constant(ComplexMatrix::identity(dim)))
    }

    /// Order-zero operator: multiplication by a matrix-valued function.
    pub fn multiplication(coefficient: MatrixExpr) -> Self {
        let mut out = Self::zero(coefficient.dim());
        out.add_term([0; 3], coefficient);
        out
    }

    pub fn constant(matrix: ComplexMatrix) -> Self {
        Self::multiplication(MatrixExpr::constant(matrix))
    }

    /// `f · 1`.
    pub fn scalar(f: ScalarExpr, dim: usize) -> Self {
        Self::multiplication(MatrixExpr::scalar(f, dim))
    }

    /// `x̂_a = i ∂/∂p_a`.
    pub fn position(a: usize, dim: usize) -> Self {
        Self::derivative(unit_index(a), dim).scale_const(I)
    }

    /// `P_a = p_a · 1`.
    pub fn momentum(a: usize, dim: usize) -> Self {
        Self::scalar(ScalarExpr::p(a), dim)
    }

    /// Pure derivative `∂^α` with identity coefficient.
    pub fn derivative(alpha: MultiIndex, dim: usize) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(alpha, MatrixExpr::constant(ComplexMatrix::identity(dim)));
        out
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, MatrixExpr)>) -> Self {
        let mut out = Self::zero(dim);
        for (alpha, c) in terms {
            out.add_term(alpha, c);
        }
        out
    }

    fn add_term(&mut self, alpha: MultiIndex, coefficient: MatrixExpr) {
        if coefficient.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&alpha) {
            Some(existing) => existing.add(&coefficient),
            None => coefficient,
        };
        if !merged.is_zero() {
            self.terms.insert(alpha, merged);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, MatrixExpr> {
        &self.terms
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&MatrixExpr> {
        self.terms.get(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order with a structurally nonzero coefficient.
    pub fn order(&self) -> u8 {
        self.terms.keys().map(order).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.add_term(*alpha, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_const(c64(-1.0, 0.0)))
    }

    pub fn scale_const(&self, z: Complex64) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(a, c)| (*a, c.scale_const(z))))
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul_const(&self, matrix: &ComplexMatrix) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(a, c)| (*a, c.left_mul_const(matrix))))
    }

    /// Right multiplication by a constant matrix (commutes with `∂`).
    pub fn right_mul_const(&self, matrix: &ComplexMatrix) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(a, c)| (*a, c.right_mul_const(matrix))))
    }

    /// Operator product `A ∘ B` with the Leibniz rule
    /// `∂^α (B_β ∂^β) = Σ_{γ≤α} C(α,γ) (∂^γ B_β) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &Self) -> Result<Self, OperatorError> {
        if self.dim != other.dim {
            return Err(OperatorError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = Self::zero(self.dim);
        for (alpha, a_coef) in &self.terms {
            for (beta, b_coef) in &other.terms {
                for gamma in sub_indices(alpha) {
                    let weight = binomial_index(alpha, &gamma);
                    let target = [
                        alpha[0] - gamma[0] + beta[0],
                        alpha[1] - gamma[1] + beta[1],
                        alpha[2] - gamma[2] + beta[2],
                    ];
                    let db = b_coef.derivative(&gamma);
                    if db.is_zero() {
                        continue;
                    }
                    let term = a_coef.mul(&db).scale_const(c64(weight as f64, 0.0));
                    out.add_term(target, term);
                }
            }
        }
        let ord = out.order();
        if ord > MAX_ORDER {
            return Err(OperatorError::OrderExceeded(ord));
        }
        Ok(out)
    }

    /// `AB − BA` or `AB + BA`.
    pub fn bracket(&self, other: &Self, kind: BracketKind) -> Result<Self, OperatorError> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(match kind {
            BracketKind::Commutator => ab.sub(&ba),
            BracketKind::Anticommutator => ab.add(&ba),
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, OperatorError> {
        self.bracket(other, BracketKind::Commutator)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self, OperatorError> {
        self.bracket(other, BracketKind::Anticommutator)
    }

    /// `R G R⁻¹` for the substitution map `R` described by `flags`: coefficients
    /// are substituted, each `∂^α` picks up `η_p^{|α|}`, and an antilinear `R`
    /// conjugates every coefficient.
    pub fn apply_flags(&self, flags: &FlagTransform) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().map(|(alpha, c)| {
                let mut c = c.flip(flags.eta_p, flags.eta_m, flags.eta_t);
                if flags.conj {
                    c = c.conj();
                }
                if flags.eta_p == -1 && order(alpha) % 2 == 1 {
                    c = c.scale_const(c64(-1.0, 0.0));
                }
                (*alpha, c)
            }),
        )
    }

    /// Formal adjoint with respect to the L² product in `p`:
    /// `(C ∂^α)† = (−1)^{|α|} ∂^α ∘ C†`.
    pub fn formal_adjoint(&self) -> Result<Self, OperatorError> {
        let mut out = Self::zero(self.dim);
        for (alpha, c) in &self.terms {
            let sign = if order(alpha) % 2 == 1 { -1.0 } else { 1.0 };
            let piece = Self::derivative(*alpha, self.dim)
                .compose(&Self::multiplication(c.adjoint()))?
                .scale_const(c64(sign, 0.0));
            out = out.add(&piece);
        }
        Ok(out)
    }

    /// Coefficient matrices at one sample, keyed by multi-index.
    pub fn eval(&self, at: &Sample) -> BTreeMap<MultiIndex, ComplexMatrix> {
        self.terms.iter().map(|(a, c)| (*a, c.eval(at))).collect()
    }

    /// Largest entrywise coefficient modulus over all samples.
    pub fn max_abs_at(&self, samples: &[Sample]) -> f64 {
        samples
            .iter()
            .flat_map(|s| self.terms.values().map(move |c| c.eval(s).max_abs()))
            .fold(0.0, f64::max)
    }

    /// Compares coefficients multi-index by multi-index at each sample.
    pub fn equal_at(&self, other: &Self, samples: &[Sample], tol: f64) -> Equality {
        let residual = self.sub(other).max_abs_at(samples);
        Equality { equal: residual < tol, residual }
    }
}

fn sub_indices(alpha: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for a in 0..=alpha[0] {
        for b in 0..=alpha[1] {
            for c in 0..=alpha[2] {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn binomial(n: u8, k: u8) -> u64 {
    (0..k as u64).fold(1, |acc, j| acc * (n as u64 - j) / (j + 1))
}

fn binomial_index(alpha: &MultiIndex, gamma: &MultiIndex) -> u64 {
    (0..3).map(|i| binomial(alpha[i], gamma[i])).product()
}
