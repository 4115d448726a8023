//! Discrete operators (space and time reflections, their antilinear
//! variants, mass inversion, and products) and the intertwiner test deciding
//! whether a generator set is invariant under them.
//!
//! An operator acts on wave functions as `q·Φ(η_x x, η_t t, η_m m)`, possibly
//! conjugated. It is a symmetry of a generator set when a constant invertible
//! `q` satisfies `q·R(G) = s_G·G·q` for every generator `G`, where `R(G)` is the
//! flagged substitution of [`MomentumOperator::apply_flags`] and `s_G = ±1`
//! comes from the operator's sign table.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_basis, spectral_projector, spin_tensor};
use crate::expr::Sample;
use crate::linalg::{sylvester_block, unvectorize, vectorize, RankDecision, RowCompressor};
use crate::matrix::{c64, ComplexMatrix};
use crate::operator::{FlagTransform, MomentumOperator};
use crate::poincare::{build_generators, GeneratorClass, GeneratorSet, RepId, RepKind};

pub const DEFAULT_RANK_TOL: f64 = 1e-8;
pub const WITNESS_TOL: f64 = 1e-9;
pub const MIN_DETERMINANT: f64 = 1e-6;
const RANDOM_TRIALS: usize = 64;
const RANDOM_SEED: u64 = 0xC0FFEE;

/// Commute (+1) or anticommute (−1) per generator class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignTable {
    pub p0: i8,
    pub pa: i8,
    pub jab: i8,
    pub j0a: i8,
}

impl SignTable {
    pub fn get(&self, class: GeneratorClass) -> i8 {
        match class {
            GeneratorClass::P0 => self.p0,
            GeneratorClass::Pa => self.pa,
            GeneratorClass::Jab => self.jab,
            GeneratorClass::J0a => self.j0a,
        }
    }

    fn times(&self, other: &SignTable) -> SignTable {
        SignTable {
            p0: self.p0 * other.p0,
            pa: self.pa * other.pa,
            jab: self.jab * other.jab,
            j0a: self.j0a * other.j0a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscreteOpSpec {
    pub name: String,
    pub eta_x: i8,
    pub eta_t: i8,
    pub eta_m: i8,
    pub conj: bool,
    pub signs: SignTable,
}

const fn signs(p0: i8, pa: i8, jab: i8, j0a: i8) -> SignTable {
    SignTable { p0, pa, jab, j0a }
}

impl DiscreteOpSpec {
    fn new(name: &str, eta_x: i8, eta_t: i8, eta_m: i8, conj: bool, signs: SignTable) -> Self {
        Self { name: name.to_string(), eta_x, eta_t, eta_m, conj, signs }
    }

    pub fn p1() -> Self {
        Self::new("P1", -1, 1, 1, false, signs(1, -1, 1, -1))
    }

    pub fn p2() -> Self {
        Self::new("P2", -1, 1, 1, true, signs(-1, 1, -1, 1))
    }

    pub fn t1() -> Self {
        Self::new("T1", 1, -1, 1, false, signs(-1, 1, 1, -1))
    }

    pub fn t2() -> Self {
        Self::new("T2", 1, -1, 1, true, signs(1, -1, -1, 1))
    }

    pub fn m() -> Self {
        Self::new("M", 1, 1, -1, false, signs(1, 1, 1, 1))
    }

    pub fn mt() -> Self {
        Self::new("Mt", 1, -1, -1, false, signs(-1, 1, 1, -1))
    }

    pub fn mx() -> Self {
        Self::new("Mx", -1, 1, -1, false, signs(1, -1, 1, -1))
    }

    pub fn c() -> Self {
        compose_ops(&Self::t1(), &Self::t2()).renamed("C")
    }

    pub fn p1t2() -> Self {
        compose_ops(&Self::p1(), &Self::t2())
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// The seven operators with their own sign tables.
    pub fn primitives() -> Vec<Self> {
        vec![Self::p1(), Self::p2(), Self::t1(), Self::t2(), Self::m(), Self::mt(), Self::mx()]
    }

    /// Table columns: P1, P2, T1, T2, C, M, Mt, Mx, P1T2.
    pub fn table_ops() -> Vec<Self> {
        vec![
            Self::p1(),
            Self::p2(),
            Self::t1(),
            Self::t2(),
            Self::c(),
            Self::m(),
            Self::mt(),
            Self::mx(),
            Self::p1t2(),
        ]
    }

    /// Case-insensitive lookup among [`Self::table_ops`].
    pub fn by_name(name: &str) -> Option<Self> {
        Self::table_ops().into_iter().find(|op| op.name.eq_ignore_ascii_case(name.trim()))
    }
}

impl fmt::Display for DiscreteOpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Flags compose and sign tables multiply.
pub fn compose_ops(a: &DiscreteOpSpec, b: &DiscreteOpSpec) -> DiscreteOpSpec {
    DiscreteOpSpec {
        name: format!("{}{}", a.name, b.name),
        eta_x: a.eta_x * b.eta_x,
        eta_t: a.eta_t * b.eta_t,
        eta_m: a.eta_m * b.eta_m,
        conj: a.conj ^ b.conj,
        signs: a.signs.times(&b.signs),
    }
}

/// `η_p = η_x` for linear operators and `−η_x` for antilinear ones.
pub fn momentum_action(op: &DiscreteOpSpec) -> FlagTransform {
    let eta_p = if op.conj { -op.eta_x } else { op.eta_x };
    FlagTransform::new(eta_p, op.eta_t, op.eta_m, op.conj)
}

/// One generator prepared for constraint assembly.
struct Prepared<'a> {
    original: &'a MomentumOperator,
    flagged: MomentumOperator,
    sign: f64,
}

fn prepare<'a>(g: &'a GeneratorSet, op: &DiscreteOpSpec) -> Vec<Prepared<'a>> {
    let flags = momentum_action(op);
    g.named()
        .into_iter()
        .map(|(name, original)| Prepared {
            original,
            flagged: original.apply_flags(&flags),
            sign: op.signs.get(name.class()) as f64,
        })
        .collect()
}

/// Calls `f(A, B, s)` for each coefficient pair of the constraint
/// `q·A = s·B·q` (flagged coefficient `A`, original `B`).
fn for_each_constraint(prepared: &[Prepared], samples: &[Sample], mut f: impl FnMut(&ComplexMatrix, &ComplexMatrix, f64)) {
    for s in samples {
        for p in prepared {
            let a = p.flagged.eval(s);
            let b = p.original.eval(s);
            let mut keys: Vec<_> = a.keys().chain(b.keys()).copied().collect();
            keys.sort();
            keys.dedup();
            let zero = ComplexMatrix::zeros(p.original.dim());
            for alpha in keys {
                f(a.get(&alpha).unwrap_or(&zero), b.get(&alpha).unwrap_or(&zero), p.sign);
            }
        }
    }
}

/// The stacked linear system on `vec(q)` (row-major).
pub fn build_constraints(g: &GeneratorSet, op: &DiscreteOpSpec, samples: &[Sample]) -> DMatrix<Complex64> {
    let n = g.dim();
    let mut blocks = Vec::new();
    for_each_constraint(&prepare(g, op), samples, |a, b, s| blocks.push(sylvester_block(a, b, s)));
    let mut out = DMatrix::zeros(blocks.len() * n * n, n * n);
    for (k, block) in blocks.iter().enumerate() {
        out.rows_mut(k * n * n, n * n).copy_from(block);
    }
    out
}

/// Largest entry of `q·A − s·B·q` over all constraints.
pub fn constraint_residual(g: &GeneratorSet, op: &DiscreteOpSpec, samples: &[Sample], q: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for_each_constraint(&prepare(g, op), samples, |a, b, s| {
        let r = &(q * a) - &(b * q).scale_real(s);
        worst = worst.max(r.max_abs());
    });
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Invariant,
    Noninvariant,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Invariant => "invariant",
            Verdict::Noninvariant => "noninvariant",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub rep: RepId,
    pub op: String,
    pub verdict: Verdict,
    pub nullspace_dim: usize,
    /// Normalised to unit largest entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplexMatrix>,
    /// Constraint violation of the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant_abs: Option<f64>,
    /// `λ` with `witness² = λ·1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution_scale: Option<Complex64>,
    pub smallest_singular_value: f64,
    /// Smallest singular value counted as nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smallest_retained: Option<f64>,
    pub threshold: f64,
}

impl ClassificationResult {
    pub fn is_invariant(&self) -> bool {
        self.verdict == Verdict::Invariant
    }
}

fn normalize(q: ComplexMatrix) -> ComplexMatrix {
    let scale = q.max_abs();
    if scale == 0.0 {
        q
    } else {
        q.scale_real(1.0 / scale)
    }
}

fn involution_scale(q: &ComplexMatrix) -> Option<Complex64> {
    let (lambda, residual) = (q * q).scalar_part();
    (residual < WITNESS_TOL && lambda.norm() > 0.0).then_some(lambda)
}

fn in_nullspace(rank: &RankDecision, v: &DVector<Complex64>) -> bool {
    let norm = v.norm();
    norm > 0.0 && (v - rank.project(v)).norm() < WITNESS_TOL * norm
}

/// Candidates in order of preference: Clifford monomials lying in the
/// nullspace (invertible, and squaring to ±1), then nullspace basis vectors
/// by `|det|`, then seeded random combinations.
fn find_witness(rank: &RankDecision, dim: usize) -> Option<ComplexMatrix> {
    if rank.nullity == 0 {
        return None;
    }
    if let Ok(basis) = build_basis(dim) {
        let hit = basis.monomials().into_iter().find(|m| in_nullspace(rank, &vectorize(m)));
        if let Some(m) = hit {
            return Some(m);
        }
    }
    let det = |q: &ComplexMatrix| q.determinant().norm();
    let best = rank
        .null_basis
        .iter()
        .map(|v| normalize(unvectorize(dim, v)))
        .max_by(|a, b| det(a).total_cmp(&det(b)))?;
    if det(&best) > MIN_DETERMINANT {
        return Some(best);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for _ in 0..RANDOM_TRIALS {
        let mut v = DVector::zeros(dim * dim);
        for b in &rank.null_basis {
            v += b * c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let q = normalize(unvectorize(dim, &v));
        if det(&q) > MIN_DETERMINANT {
            return Some(q);
        }
    }
    None
}

/// Decides invariance of `g` under `op` with relative rank threshold `rank_tol`.
pub fn classify(g: &GeneratorSet, op: &DiscreteOpSpec, samples: &[Sample], rank_tol: f64) -> ClassificationResult {
    let n = g.dim();
    let mut compressor = RowCompressor::new(n * n);
    for_each_constraint(&prepare(g, op), samples, |a, b, s| compressor.push(sylvester_block(a, b, s)));
    let rank = compressor.decide(rank_tol);
    let witness = find_witness(&rank, n);
    let residual = witness.as_ref().map(|q| constraint_residual(g, op, samples, q));
    let determinant_abs = witness.as_ref().map(|q| q.determinant().norm());
    let verdict = if rank.indeterminate {
        Verdict::Indeterminate
    } else if residual.is_some_and(|r| r < WITNESS_TOL) && determinant_abs.is_some_and(|d| d > MIN_DETERMINANT) {
        Verdict::Invariant
    } else {
        Verdict::Noninvariant
    };
    ClassificationResult {
        rep: g.rep,
        op: op.name.clone(),
        verdict,
        nullspace_dim: rank.nullity,
        involution_scale: witness.as_ref().and_then(involution_scale),
        witness,
        residual,
        determinant_abs,
        smallest_singular_value: rank.singular_values.last().copied().unwrap_or(0.0),
        smallest_retained: rank.smallest_retained(),
        threshold: rank.threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Invariant,
    Noninvariant,
    Unstated,
}

/// The published verdicts for the three four-component sets (ε = +1).
pub fn paper_expectation(rep: RepId, op: &str) -> Expectation {
    let (yes, no): (&[&str], &[&str]) = match (rep.kind, rep.energy_sign) {
        (RepKind::Rep1, 1) => (&["C", "Mx", "Mt", "P1T2"], &["P1", "P2", "T2", "M"]),
        (RepKind::Rep2, 1) => (&["P2", "T1", "Mx", "P1T2"], &["P1", "T2", "C", "M", "Mt"]),
        (RepKind::Rep3, 1) => (&["P1", "T2", "M", "Mx", "P1T2"], &["T1", "C", "P2", "Mt"]),
        _ => (&[], &[]),
    };
    if yes.contains(&op) {
        Expectation::Invariant
    } else if no.contains(&op) {
        Expectation::Noninvariant
    } else {
        Expectation::Unstated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub result: ClassificationResult,
    pub expectation: Expectation,
}

impl TableEntry {
    /// `None` when the operator has no published verdict.
    pub fn agrees(&self) -> Option<bool> {
        match self.expectation {
            Expectation::Unstated => None,
            Expectation::Invariant => Some(self.result.verdict == Verdict::Invariant),
            Expectation::Noninvariant => Some(self.result.verdict == Verdict::Noninvariant),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub rep: RepId,
    pub entries: Vec<TableEntry>,
}

impl ClassificationTable {
    pub fn entry(&self, op: &str) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.result.op == op)
    }

    pub fn invariant_ops(&self) -> Vec<&str> {
        self.ops_with(Verdict::Invariant)
    }

    pub fn noninvariant_ops(&self) -> Vec<&str> {
        self.ops_with(Verdict::Noninvariant)
    }

    fn ops_with(&self, verdict: Verdict) -> Vec<&str> {
        self.entries.iter().filter(|e| e.result.verdict == verdict).map(|e| e.result.op.as_str()).collect()
    }

    /// True when every stated verdict is reproduced.
    pub fn matches_paper(&self) -> bool {
        self.entries.iter().all(|e| e.agrees() != Some(false))
    }
}

pub fn full_table(rep: RepId, samples: &[Sample], rank_tol: f64) -> ClassificationTable {
    let g = build_generators(rep);
    let entries = DiscreteOpSpec::table_ops()
        .iter()
        .map(|op| TableEntry { result: classify(&g, op, samples, rank_tol), expectation: paper_expectation(rep, &op.name) })
        .collect();
    ClassificationTable { rep, entries }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

impl RelationCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.residual.is_some_and(|r| r < tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwiningReport {
    pub relations: Vec<RelationCheck>,
    /// `‖r₁ Π_S r₁⁻¹ − Π_T‖` for the Casimir eigenprojectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swap_residual: Option<f64>,
    /// `max_a ‖S_a − T_a‖`; must be clearly nonzero.
    pub identity_control: f64,
}

impl IntertwiningReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.relations.iter().all(|r| r.passed(tol))
            && self.swap_residual.is_some_and(|r| r < tol)
            && self.identity_control > 0.1
    }
}

/// Checks the spin-level relations of the eight-component witnesses:
/// `r₁S_a = T_a r₁`, `r_m S_a = T_a r_m`, `t₁S_a = S_a t₁`.
pub fn intertwining_check(samples: &[Sample], rank_tol: f64) -> IntertwiningReport {
    let g = build_generators(RepId::canonical8());
    let spin = spin_tensor(&build_basis(8).expect("dim 8 is supported"));
    let relation = |op: DiscreteOpSpec, swaps: bool| {
        let label = format!("{}: q S_a = {} q", op.name, if swaps { "T_a" } else { "S_a" });
        let result = classify(&g, &op, samples, rank_tol);
        match result.witness {
            Some(q) if result.is_invariant() => {
                let residual = (0..3)
                    .map(|a| {
                        let target = if swaps { spin.t(a) } else { spin.s(a) };
                        (&(&q * spin.s(a)) - &(target * &q)).max_abs()
                    })
                    .fold(0.0, f64::max);
                (RelationCheck { relation: label, residual: Some(residual), unavailable: None }, Some(q))
            }
            _ => (
                RelationCheck { relation: label, residual: None, unavailable: Some(format!("no witness ({})", result.verdict)) },
                None,
            ),
        }
    };
    let (r1, q1) = relation(DiscreteOpSpec::p1(), true);
    let (rm, _) = relation(DiscreteOpSpec::m(), true);
    let (t1, _) = relation(DiscreteOpSpec::t1(), false);
    let swap_residual = q1.and_then(|q| {
        let inv = q.try_inverse()?;
        let ps = spectral_projector(&spin.s_squared(), 0.75, 1e-9).ok()?;
        let pt = spectral_projector(&spin.t_squared(), 0.75, 1e-9).ok()?;
        Some((&(&(&q * &ps) * &inv) - &pt).max_abs())
    });
    let identity_control = (0..3).map(|a| (spin.s(a) - spin.t(a)).max_abs()).fold(0.0, f64::max);
    IntertwiningReport { relations: vec![r1, rm, t1], swap_residual, identity_control }
}

/// Position-operator conditions for a primitive operator: with any constant
/// `q`, `q·R(x̂_a) − η_x·x̂_a·q` vanishes identically. Returns the largest
/// coefficient of that difference over the samples, for all three `a`.
pub fn position_condition_residual(op: &DiscreteOpSpec, q: &ComplexMatrix, samples: &[Sample]) -> f64 {
    let flags = momentum_action(op);
    let dim = q.dim();
    let qop = MomentumOperator::constant(q.clone());
    (0..3)
        .map(|a| {
            let x = MomentumOperator::position(a, dim);
            let lhs = qop.compose(&x.apply_flags(&flags)).expect("first order");
            let rhs = x.compose(&qop).expect("first order").scale_const(c64(op.eta_x as f64, 0.0));
            lhs.sub(&rhs).max_abs_at(samples)
        })
        .fold(0.0, f64::max)
}
