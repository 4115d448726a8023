//! The five generator sets of the Poincaré algebra used here: the
//! eight-component Dirac-type set, its canonical (block-diagonal Hamiltonian)
//! form, and the three inequivalent four-component sets.
//!
//! All generators are momentum-space operators:
//!
//! ```text
//! P₀ = H,  P_a = p_a,  J_ab = x_a p_b − x_b p_a + S_ab,
//! J_0a = t p_a − ½[x_a, H]₊ − Λ (S_ab p_b + B_a m)/E
//! ```
//!
//! where `Λ = H/E` is `Γ₀`, `εγ₀` or `ε` and `B_a` is `S_a4` except for the
//! second four-component set, which uses the rotation generator `½ε_abc S_bc`.
//! The Dirac-type set is `U⁻¹ G U` for each canonical generator `G`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_basis, spectral_projector, spin_tensor, CliffordBasis, SpinGenerators};
use crate::expr::{Sample, ScalarExpr};
use crate::matrix::{c64, ComplexMatrix};
use crate::operator::{MatrixExpr, MomentumOperator};
use crate::rep_calculus::{EnergySign, Half, IrrepLabel};
use crate::samples::default_samples;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RepKind {
    Dirac8,
    Canonical8,
    Rep1,
    Rep2,
    Rep3,
    /// Spinless reference set (dim 1, `P₀ = E`) used to fix structure constants.
    ScalarOrbital,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepId {
    pub kind: RepKind,
    /// ε = ±1; always +1 for the eight-component and scalar sets.
    pub energy_sign: i8,
}

impl RepId {
    pub fn dirac8() -> Self {
        Self { kind: RepKind::Dirac8, energy_sign: 1 }
    }

    pub fn canonical8() -> Self {
        Self { kind: RepKind::Canonical8, energy_sign: 1 }
    }

    pub fn rep1(energy_sign: i8) -> Self {
        Self { kind: RepKind::Rep1, energy_sign }
    }

    pub fn rep2(energy_sign: i8) -> Self {
        Self { kind: RepKind::Rep2, energy_sign }
    }

    pub fn rep3(energy_sign: i8) -> Self {
        Self { kind: RepKind::Rep3, energy_sign }
    }

    pub fn scalar() -> Self {
        Self { kind: RepKind::ScalarOrbital, energy_sign: 1 }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            RepKind::Dirac8 | RepKind::Canonical8 => 8,
            RepKind::Rep1 | RepKind::Rep2 | RepKind::Rep3 => 4,
            RepKind::ScalarOrbital => 1,
        }
    }

    /// The five physical sets with ε = +1.
    pub fn all_positive() -> [RepId; 5] {
        [RepId::dirac8(), RepId::canonical8(), RepId::rep1(1), RepId::rep2(1), RepId::rep3(1)]
    }
}

impl fmt::Display for RepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.energy_sign < 0 { "-" } else { "" };
        match self.kind {
            RepKind::Dirac8 => write!(f, "dirac8"),
            RepKind::Canonical8 => write!(f, "canonical8"),
            RepKind::Rep1 => write!(f, "rep1{sign}"),
            RepKind::Rep2 => write!(f, "rep2{sign}"),
            RepKind::Rep3 => write!(f, "rep3{sign}"),
            RepKind::ScalarOrbital => write!(f, "scalar"),
        }
    }
}

impl FromStr for RepId {
    type Err = String;

    /// Accepts `dirac8`, `canonical8`, `rep1`..`rep3`, with an optional `-`
    /// suffix on the four-component sets for ε = −1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let (base, sign) = match lower.strip_suffix('-') {
            Some(b) => (b, -1),
            None => (lower.strip_suffix('+').unwrap_or(&lower), 1),
        };
        let id = match base {
            "dirac8" => RepId::dirac8(),
            "canonical8" => RepId::canonical8(),
            "rep1" => RepId::rep1(sign),
            "rep2" => RepId::rep2(sign),
            "rep3" => RepId::rep3(sign),
            _ => return Err(format!("unknown representation '{s}'")),
        };
        if sign < 0 && id.dim() == 8 {
            return Err(format!("energy sign suffix not allowed on '{base}'"));
        }
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorClass {
    P0,
    Pa,
    Jab,
    J0a,
}

/// Spatial indices are 0-based internally and printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorName {
    P0,
    P(usize),
    J(usize, usize),
    Boost(usize),
}

impl GeneratorName {
    pub fn class(&self) -> GeneratorClass {
        match self {
            GeneratorName::P0 => GeneratorClass::P0,
            GeneratorName::P(_) => GeneratorClass::Pa,
            GeneratorName::J(..) => GeneratorClass::Jab,
            GeneratorName::Boost(_) => GeneratorClass::J0a,
        }
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorName::P0 => write!(f, "P0"),
            GeneratorName::P(a) => write!(f, "P{}", a + 1),
            GeneratorName::J(a, b) => write!(f, "J{}{}", a + 1, b + 1),
            GeneratorName::Boost(a) => write!(f, "J0{}", a + 1),
        }
    }
}

pub const ROTATION_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub rep: RepId,
    pub p0: MomentumOperator,
    pub p: [MomentumOperator; 3],
    /// J₁₂, J₁₃, J₂₃ in [`ROTATION_PAIRS`] order.
    pub j: [MomentumOperator; 3],
    pub boost: [MomentumOperator; 3],
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.p0.dim()
    }

    /// All ten generators in the order P₀, P_a, J_ab, J_0a.
    pub fn named(&self) -> Vec<(GeneratorName, &MomentumOperator)> {
        let mut out = vec![(GeneratorName::P0, &self.p0)];
        out.extend((0..3).map(|a| (GeneratorName::P(a), &self.p[a])));
        out.extend(ROTATION_PAIRS.iter().zip(&self.j).map(|(&(a, b), g)| (GeneratorName::J(a, b), g)));
        out.extend((0..3).map(|a| (GeneratorName::Boost(a), &self.boost[a])));
        out
    }

    pub fn map(&self, rep: RepId, f: impl Fn(&MomentumOperator) -> MomentumOperator) -> GeneratorSet {
        GeneratorSet {
            rep,
            p0: f(&self.p0),
            p: [f(&self.p[0]), f(&self.p[1]), f(&self.p[2])],
            j: [f(&self.j[0]), f(&self.j[1]), f(&self.j[2])],
            boost: [f(&self.boost[0]), f(&self.boost[1]), f(&self.boost[2])],
        }
    }
}

fn orbital_rotation(a: usize, b: usize, dim: usize) -> MomentumOperator {
    let x = MomentumOperator::position;
    let p = MomentumOperator::momentum;
    let ab = x(a, dim).compose(&p(b, dim)).expect("first-order product");
    let ba = x(b, dim).compose(&p(a, dim)).expect("first-order product");
    ab.sub(&ba)
}

/// `t p_a − ½[x_a, H]₊`.
fn orbital_boost(a: usize, hamiltonian: &MomentumOperator) -> MomentumOperator {
    let dim = hamiltonian.dim();
    let tp = MomentumOperator::scalar(ScalarExpr::time() * ScalarExpr::p(a), dim);
    let anti = MomentumOperator::position(a, dim).anticommutator(hamiltonian).expect("first-order product");
    tp.sub(&anti.scale_const(c64(0.5, 0.0)))
}

/// `Λ (S_ab p_b + B_a m) / E`.
fn spin_boost(a: usize, spin: &SpinGenerators, lambda: &ComplexMatrix, mass_term: &ComplexMatrix) -> MomentumOperator {
    let inv_e = ScalarExpr::energy().recip();
    let mut coef = MatrixExpr::zero(spin.dim());
    for b in 0..3 {
        if b != a {
            coef = coef.add(&MatrixExpr::term(ScalarExpr::p(b) * inv_e.clone(), spin.get(a + 1, b + 1).clone()));
        }
    }
    coef = coef.add(&MatrixExpr::term(ScalarExpr::mass() * inv_e, mass_term.clone()));
    MomentumOperator::multiplication(coef.left_mul_const(lambda))
}

fn basis_for(dim: usize) -> CliffordBasis {
    build_basis(dim).expect("dimensions 4 and 8 are supported")
}

/// Builds the generator set for `rep`.
pub fn build_generators(rep: RepId) -> GeneratorSet {
    if rep.kind == RepKind::Dirac8 {
        let canonical = build_generators(RepId::canonical8());
        let u = canonical_transform();
        let u_inv = canonical_transform_inverse();
        return canonical.map(rep, |g| {
            u_inv.compose(&g.compose(&u).expect("order ≤ 1")).expect("order ≤ 1")
        });
    }
    let dim = rep.dim();
    let eps = rep.energy_sign as f64;
    let energy = ScalarExpr::energy();
    let p = [0, 1, 2].map(|a| MomentumOperator::momentum(a, dim));

    if rep.kind == RepKind::ScalarOrbital {
        let p0 = MomentumOperator::scalar(energy, 1);
        let j = ROTATION_PAIRS.map(|(a, b)| orbital_rotation(a, b, 1));
        let boost = [0, 1, 2].map(|a| orbital_boost(a, &p0));
        return GeneratorSet { rep, p0, p, j, boost };
    }

    let basis = basis_for(dim);
    let spin = spin_tensor(&basis);
    // Λ = H/E
    let lambda = match rep.kind {
        RepKind::Rep3 => ComplexMatrix::identity(dim).scale_real(eps),
        _ => basis.gamma0().scale_real(eps),
    };
    let p0 = MomentumOperator::multiplication(MatrixExpr::term(energy, lambda.clone()));
    let j = ROTATION_PAIRS.map(|(a, b)| {
        orbital_rotation(a, b, dim).add(&MomentumOperator::constant(spin.get(a + 1, b + 1).clone()))
    });
    let boost = [0, 1, 2].map(|a| {
        let mass_term = match rep.kind {
            RepKind::Rep2 => spin.rotation(a),
            _ => spin.get(a + 1, 4).clone(),
        };
        orbital_boost(a, &p0).sub(&spin_boost(a, &spin, &lambda, &mass_term))
    });
    GeneratorSet { rep, p0, p, j, boost }
}

/// `ℋ⁽⁸⁾ = Γ₀Γ_k p_k` (k = 1..4, `p₄ ≡ m`) as an order-zero operator.
pub fn dirac_hamiltonian() -> MomentumOperator {
    let basis = basis_for(8);
    MomentumOperator::multiplication(slash(&basis, 1.0).left_mul_const(basis.gamma0()))
}

/// `Σ_k c·p_k Γ_k` with `p₄ ≡ m`.
fn slash(basis: &CliffordBasis, factor: f64) -> MatrixExpr {
    let mut out = MatrixExpr::zero(basis.dim());
    for k in 1..=4 {
        let pk = if k == 4 { ScalarExpr::mass() } else { ScalarExpr::p(k - 1) };
        out = out.add(&MatrixExpr::term(pk.scale(c64(factor, 0.0)), basis.gamma(k).clone()));
    }
    out
}

/// `U = (1 + Γ₀ℋ⁽⁸⁾/E)/√2`, mapping the Dirac-type set to the canonical one.
pub fn canonical_transform() -> MomentumOperator {
    transform_with_sign(1.0)
}

/// `U⁻¹ = U† = (1 − Γ₀ℋ⁽⁸⁾/E)/√2`.
pub fn canonical_transform_inverse() -> MomentumOperator {
    transform_with_sign(-1.0)
}

fn transform_with_sign(sign: f64) -> MomentumOperator {
    let basis = basis_for(8);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    // Γ₀ℋ⁽⁸⁾ = Γ_k p_k because Γ₀² = 1.
    let generator = slash(&basis, sign * inv_sqrt2).scale(&ScalarExpr::energy().recip());
    let coef = MatrixExpr::constant(basis.identity().scale_real(inv_sqrt2)).add(&generator);
    MomentumOperator::multiplication(coef)
}

/// `exp[(π/4) Γ₀ℋ⁽⁸⁾/E]` evaluated numerically at one sample.
pub fn canonical_transform_exponential(at: &Sample) -> ComplexMatrix {
    let basis = basis_for(8);
    let e = at.energy();
    let arg = (basis.gamma0() * &basis.hamiltonian_at(at.p, at.m)).scale_real(std::f64::consts::FRAC_PI_4 / e);
    ComplexMatrix::from_inner(arg.into_inner().exp())
}

/// `U₁ = (m + E + γ₄γ_a p_a) / √(2E(E+m))` on the four-component space.
pub fn fs_transform() -> MomentumOperator {
    fs_with_sign(1.0)
}

/// `U₁⁻¹ = U₁†`.
pub fn fs_transform_inverse() -> MomentumOperator {
    fs_with_sign(-1.0)
}

fn fs_with_sign(sign: f64) -> MomentumOperator {
    let basis = basis_for(4);
    let e = ScalarExpr::energy();
    let m = ScalarExpr::mass();
    let norm = (ScalarExpr::real(2.0) * e.clone() * (e.clone() + m.clone())).sqrt().recip();
    let mut coef = MatrixExpr::scalar(m + e, 4);
    for a in 0..3 {
        let g = basis.gamma(4) * basis.gamma(a + 1);
        coef = coef.add(&MatrixExpr::term(ScalarExpr::p(a).scale(c64(sign, 0.0)), g));
    }
    MomentumOperator::multiplication(coef.scale(&norm))
}

fn order_zero_at(op: &MomentumOperator, at: &Sample) -> ComplexMatrix {
    op.eval(at).remove(&[0, 0, 0]).unwrap_or_else(|| ComplexMatrix::zeros(op.dim()))
}

/// Largest Frobenius norm of `A A† − 1` over the samples.
pub fn unitarity_residual(op: &MomentumOperator, samples: &[Sample]) -> f64 {
    samples
        .iter()
        .map(|s| {
            let u = order_zero_at(op, s);
            (&(&u * &u.adjoint()) - &ComplexMatrix::identity(u.dim())).frobenius_norm()
        })
        .fold(0.0, f64::max)
}

/// Largest Frobenius norm of `U ℋ⁽⁸⁾ U† − Γ₀E`.
pub fn diagonalization_residual(samples: &[Sample]) -> f64 {
    let basis = basis_for(8);
    let u = canonical_transform();
    samples
        .iter()
        .map(|s| {
            let um = order_zero_at(&u, s);
            let h = basis.hamiltonian_at(s.p, s.m);
            let lhs = &(&um * &h) * &um.adjoint();
            (&lhs - &basis.gamma0().scale_real(s.energy())).frobenius_norm()
        })
        .fold(0.0, f64::max)
}

/// Largest Frobenius distance between the exponential and closed forms of `U`.
pub fn exponential_form_residual(samples: &[Sample]) -> f64 {
    let u = canonical_transform();
    samples
        .iter()
        .map(|s| (&canonical_transform_exponential(s) - &order_zero_at(&u, s)).frobenius_norm())
        .fold(0.0, f64::max)
}

/// Structure constants `[G_i, G_j] = Σ_k c_ijk G_k`, indexed in
/// [`GeneratorSet::named`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    /// Sparse expansion for each `i < j`.
    pub expansions: Vec<((usize, usize), Vec<(usize, Complex64)>)>,
}

impl StructureConstants {
    pub fn expansion(&self, i: usize, j: usize) -> &[(usize, Complex64)] {
        &self.expansions.iter().find(|(ij, _)| *ij == (i, j)).expect("i < j pair present").1
    }
}

/// Derives structure constants from the spinless orbital representation by
/// fitting each bracket against the ten generators at sample points and
/// snapping the coefficients to integers (times 1 or i).
pub fn derive_structure_constants(samples: &[Sample]) -> StructureConstants {
    let set = build_generators(RepId::scalar());
    let named = set.named();
    let n = named.len();
    let mut expansions = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let bracket = named[i].1.commutator(named[j].1).expect("scalar brackets stay within order 2");
            let mut indices: Vec<[u8; 3]> = bracket.terms().keys().copied().collect();
            for (_, g) in &named {
                indices.extend(g.terms().keys().copied());
            }
            indices.sort();
            indices.dedup();
            let rows = samples.len() * indices.len();
            let mut design = DMatrix::<Complex64>::zeros(rows, n);
            let mut rhs = DVector::<Complex64>::zeros(rows);
            for (si, s) in samples.iter().enumerate() {
                let b = bracket.eval(s);
                let gs: Vec<_> = named.iter().map(|(_, g)| g.eval(s)).collect();
                for (ai, alpha) in indices.iter().enumerate() {
                    let r = si * indices.len() + ai;
                    rhs[r] = b.get(alpha).map(|m| m.get(0, 0)).unwrap_or_default();
                    for k in 0..n {
                        design[(r, k)] = gs[k].get(alpha).map(|m| m.get(0, 0)).unwrap_or_default();
                    }
                }
            }
            let svd = design.svd(true, true);
            let coeffs = svd.solve(&rhs, 1e-10).expect("SVD solve with both factors");
            let snapped: Vec<(usize, Complex64)> = coeffs
                .iter()
                .enumerate()
                .map(|(k, z)| (k, c64(z.re.round(), z.im.round())))
                .filter(|(_, z)| z.norm() > 0.0)
                .collect();
            let mut fitted = MomentumOperator::zero(1);
            for (k, c) in &snapped {
                fitted = fitted.add(&named[*k].1.scale_const(*c));
            }
            let residual = bracket.sub(&fitted).max_abs_at(samples);
            assert!(
                residual < 1e-9,
                "scalar bracket [{}, {}] is not a constant combination of generators (residual {residual})",
                named[i].0,
                named[j].0
            );
            expansions.push(((i, j), snapped));
        }
    }
    StructureConstants { expansions }
}

/// Structure constants from the default sample set, computed once.
pub fn structure_constants() -> &'static StructureConstants {
    static CONSTANTS: OnceLock<StructureConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| derive_structure_constants(&default_samples()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketResidual {
    pub left: GeneratorName,
    pub right: GeneratorName,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub rep: RepId,
    pub brackets: Vec<BracketResidual>,
    pub max_residual: f64,
    pub passed: bool,
}

impl AlgebraReport {
    pub fn failures(&self, tol: f64) -> impl Iterator<Item = &BracketResidual> {
        self.brackets.iter().filter(move |b| b.residual >= tol)
    }
}

/// Checks all 45 brackets of `gens` against the scalar-oracle constants.
pub fn check_algebra(gens: &GeneratorSet, samples: &[Sample], tol: f64) -> AlgebraReport {
    let constants = structure_constants();
    let named = gens.named();
    let mut brackets = Vec::new();
    for ((i, j), expansion) in &constants.expansions {
        let lhs = named[*i].1.commutator(named[*j].1).expect("generator brackets stay within order 2");
        let mut rhs = MomentumOperator::zero(gens.dim());
        for (k, c) in expansion {
            rhs = rhs.add(&named[*k].1.scale_const(*c));
        }
        let residual = lhs.sub(&rhs).max_abs_at(samples);
        brackets.push(BracketResidual { left: named[*i].0, right: named[*j].0, residual });
    }
    let max_residual = brackets.iter().map(|b| b.residual).fold(0.0, f64::max);
    AlgebraReport { rep: gens.rep, brackets, max_residual, passed: max_residual < tol }
}

/// Residual of `G − G†` (formal adjoint) per generator.
pub fn hermiticity_residuals(gens: &GeneratorSet, samples: &[Sample]) -> Vec<(GeneratorName, f64)> {
    gens.named()
        .into_iter()
        .map(|(name, g)| {
            let adj = g.formal_adjoint().expect("first-order generators");
            (name, g.sub(&adj).max_abs_at(samples))
        })
        .collect()
}

/// An invariant subspace of the canonical eight-component space.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub projector: ComplexMatrix,
    pub label: IrrepLabel,
    pub rank: usize,
}

fn label(sign: EnergySign, s_active: bool) -> IrrepLabel {
    if s_active {
        IrrepLabel::new(sign, Half::HALF, Half::ZERO)
    } else {
        IrrepLabel::new(sign, Half::ZERO, Half::HALF)
    }
}

/// Four rank-2 projectors `Π(Γ₀ = ±1) · Π(S² or T² = 3/4)` with their labels,
/// in the order `D⁺(½,0), D⁻(0,½), D⁻(½,0), D⁺(0,½)`.
pub fn subspace_decomposition() -> Vec<Subspace> {
    let basis = basis_for(8);
    let spin = spin_tensor(&basis);
    let energy = |sign: f64| spectral_projector(basis.gamma0(), sign, 1e-9).expect("Γ₀ has eigenvalues ±1");
    let s_proj = spectral_projector(&spin.s_squared(), 0.75, 1e-9).expect("S² has eigenvalue 3/4");
    let t_proj = spectral_projector(&spin.t_squared(), 0.75, 1e-9).expect("T² has eigenvalue 3/4");
    [(1.0, true), (-1.0, false), (-1.0, true), (1.0, false)]
        .into_iter()
        .map(|(sign, s_active)| {
            let casimir = if s_active { &s_proj } else { &t_proj };
            let projector = &energy(sign) * casimir;
            let rank = projector.trace().re.round() as usize;
            let sign = if sign > 0.0 { EnergySign::Plus } else { EnergySign::Minus };
            Subspace { projector, label: label(sign, s_active), rank }
        })
        .collect()
}

/// Largest `[Π, G]` over all subspace projectors and canonical generators.
pub fn subspace_commutation_residual(gens: &GeneratorSet, samples: &[Sample]) -> f64 {
    subspace_decomposition()
        .iter()
        .flat_map(|sub| {
            let pi = MomentumOperator::constant(sub.projector.clone());
            gens.named()
                .into_iter()
                .map(move |(_, g)| pi.commutator(g).expect("order preserved").max_abs_at(samples))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// Content of the three four-component equations as label multisets.
pub fn equation_content(kind: RepKind) -> Vec<IrrepLabel> {
    use EnergySign::{Minus, Plus};
    match kind {
        RepKind::Rep1 => vec![label(Plus, true), label(Minus, false)],
        RepKind::Rep2 => vec![label(Plus, true), label(Minus, true)],
        RepKind::Rep3 => vec![label(Plus, true), label(Plus, false)],
        _ => crate::rep_calculus::canonical_massive_content(),
    }
}

/// Projector onto the canonical subspace carrying [`equation_content`]: the
/// projections onto the three four-component manifolds.
pub fn equation_projector(kind: RepKind) -> ComplexMatrix {
    let content = equation_content(kind);
    subspace_decomposition()
        .into_iter()
        .filter(|s| content.contains(&s.label))
        .fold(ComplexMatrix::zeros(8), |acc, s| &acc + &s.projector)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeReport {
    pub residuals: Vec<(GeneratorName, f64)>,
    pub max_residual: f64,
    pub passed: bool,
}

/// Checks that `Q = γ₀` commutes with all ten generators of the third
/// four-component set.
pub fn charge_check(gens: &GeneratorSet, samples: &[Sample], tol: f64) -> ChargeReport {
    let q = MomentumOperator::constant(basis_for(gens.dim()).gamma0().clone());
    let residuals: Vec<_> = gens
        .named()
        .into_iter()
        .map(|(name, g)| (name, q.commutator(g).expect("order preserved").max_abs_at(samples)))
        .collect();
    let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    ChargeReport { residuals, max_residual, passed: max_residual < tol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    fn few() -> Vec<Sample> {
        crate::samples::massive(7, 5)
    }

    #[test]
    fn rep_id_parsing() {
        assert_eq!("rep1".parse::<RepId>(), Ok(RepId::rep1(1)));
        assert_eq!("Rep2-".parse::<RepId>(), Ok(RepId::rep2(-1)));
        assert_eq!("canonical8".parse::<RepId>(), Ok(RepId::canonical8()));
        assert!("dirac8-".parse::<RepId>().is_err());
        assert!("rep4".parse::<RepId>().is_err());
        assert_eq!(RepId::rep3(-1).to_string(), "rep3-");
    }

    #[test]
    fn hamiltonians() {
        let s = few();
        let b8 = basis_for(8);
        let c = build_generators(RepId::canonical8());
        let expected = MomentumOperator::multiplication(MatrixExpr::term(ScalarExpr::energy(), b8.gamma0().clone()));
        assert_eq!(c.p0, expected);

        let r3 = build_generators(RepId::rep3(1));
        for at in &s {
            let h = order_zero_at(&r3.p0, at);
            assert!((&h - &ComplexMatrix::identity(4).scale_real(at.energy())).max_abs() < 1e-15);
            assert!(crate::clifford::spectrum(&h).iter().all(|(v, _)| *v > 0.0));
        }

        let r1m = build_generators(RepId::rep1(-1));
        let g0 = basis_for(4).gamma0().scale_real(-1.0);
        let expected = MomentumOperator::multiplication(MatrixExpr::term(ScalarExpr::energy(), g0));
        assert!(r1m.p0.equal_at(&expected, &s, 1e-15).equal);
    }

    #[test]
    fn momentum_generators_are_scalar_and_first_order() {
        for rep in RepId::all_positive() {
            let g = build_generators(rep);
            for a in 0..3 {
                assert!(g.p[a].equal_at(&MomentumOperator::momentum(a, rep.dim()), &few(), 1e-13).equal);
            }
            for (name, op) in g.named() {
                assert!(op.order() <= 1, "{rep} {name} has order {}", op.order());
            }
        }
    }

    #[test]
    fn transform_at_rest() {
        let at = Sample::new([0.0, 0.0, 0.0], 1.0, 0.0);
        let b = basis_for(8);
        let u = order_zero_at(&canonical_transform(), &at);
        let expected = (&b.identity() + b.gamma(4)).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!((&u - &expected).max_abs() < 1e-15);
        let u1 = order_zero_at(&fs_transform(), &at);
        assert!((&u1 - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
    }

    #[test]
    fn exponent_squares_to_minus_one() {
        let b = basis_for(8);
        for at in few() {
            let a = (b.gamma0() * &b.hamiltonian_at(at.p, at.m)).scale_real(1.0 / at.energy());
            assert!((&(&a * &a) + &b.identity()).max_abs() < 1e-14);
        }
        assert!(exponential_form_residual(&few()) < 1e-12);
    }

    #[test]
    fn transforms_are_unitary() {
        let s = crate::samples::massive(11, 100);
        assert!(unitarity_residual(&canonical_transform(), &s) < 1e-10);
        assert!(unitarity_residual(&fs_transform(), &s) < 1e-10);
        assert!(diagonalization_residual(&s) < 1e-10);
        let uinv = canonical_transform_inverse();
        for at in s.iter().take(5) {
            let lhs = order_zero_at(&uinv, at);
            let rhs = order_zero_at(&canonical_transform(), at).adjoint();
            assert!((&lhs - &rhs).max_abs() < 1e-15);
        }
    }

    #[test]
    fn dirac_hamiltonian_matches_conjugated_canonical() {
        let d = build_generators(RepId::dirac8());
        assert!(d.p0.equal_at(&dirac_hamiltonian(), &few(), 1e-12).equal);
    }

    #[test]
    fn fs_transform_preserves_first_order_part_of_boosts() {
        let r1 = build_generators(RepId::rep1(1));
        let u1 = fs_transform();
        let u1_inv = fs_transform_inverse();
        let s = few();
        for boost in &r1.boost {
            let conj = u1.compose(&boost.compose(&u1_inv).unwrap()).unwrap();
            for alpha in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
                let lhs = conj.coefficient(&alpha).cloned().unwrap_or(MatrixExpr::zero(4));
                let rhs = boost.coefficient(&alpha).cloned().unwrap_or(MatrixExpr::zero(4));
                for at in &s {
                    assert!((&lhs.eval(at) - &rhs.eval(at)).max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scalar_oracle_constants_are_sensible() {
        let c = structure_constants();
        assert_eq!(c.expansions.len(), 45);
        // [P_a, P_b] = 0 and [P0, P_a] = 0.
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!(c.expansion(i, j).is_empty());
            }
        }
        // [J12, P1] is ±i P2.
        let e = c.expansion(1, 4);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].0, 2);
        assert_eq!(e[0].1.norm(), 1.0);
        assert_eq!(e[0].1.re, 0.0);
    }

    /// `[G_x, G_y]` expansion regardless of index order.
    fn bracket_of(x: usize, y: usize) -> Vec<(usize, Complex64)> {
        let c = structure_constants();
        if x < y {
            c.expansion(x, y).to_vec()
        } else {
            c.expansion(y, x).iter().map(|(k, z)| (*k, -z)).collect()
        }
    }

    #[test]
    fn oracle_constants() {
        let i = c64(0.0, 1.0);
        for a in 0..3 {
            // [J0a, P0] = −i P_a and [J0a, P_a] = −i P0 with x̂ = i∂/∂p.
            assert_eq!(bracket_of(7 + a, 0), vec![(1 + a, -i)]);
            assert_eq!(bracket_of(7 + a, 1 + a), vec![(0, -i)]);
        }
        for (k, &(a, b)) in ROTATION_PAIRS.iter().enumerate() {
            assert_eq!(bracket_of(4 + k, 1 + a), vec![(1 + b, i)]);
            assert_eq!(bracket_of(4 + k, 1 + b), vec![(1 + a, -i)]);
            assert_eq!(bracket_of(7 + a, 7 + b), vec![(4 + k, -i)]);
        }
    }

    #[test]
    fn third_set_boost_matches_unsymmetrized_form() {
        // t p_a − x_a E + S_0a ℋ/E with ℋ = γ₀γ_k p_k, k = 1..4.
        let b = basis_for(4);
        let spin = spin_tensor(&b);
        let g = build_generators(RepId::rep3(1));
        let h = slash(&b, 1.0).left_mul_const(b.gamma0());
        let energy = MomentumOperator::scalar(ScalarExpr::energy(), 4);
        for a in 0..3 {
            let spin_term = h.left_mul_const(spin.get(0, a + 1)).scale(&ScalarExpr::energy().recip());
            let printed = MomentumOperator::scalar(ScalarExpr::time() * ScalarExpr::p(a), 4)
                .sub(&MomentumOperator::position(a, 4).compose(&energy).unwrap())
                .add(&MomentumOperator::multiplication(spin_term));
            assert!(g.boost[a].equal_at(&printed, &few(), 1e-12).equal);
        }
    }

    #[test]
    fn scalar_set_closes() {
        let g = build_generators(RepId::scalar());
        assert!(check_algebra(&g, &few(), 1e-9).passed);
    }

    #[test]
    fn four_component_sets_close() {
        for rep in [RepId::rep1(1), RepId::rep2(1), RepId::rep3(1), RepId::rep1(-1), RepId::rep2(-1), RepId::rep3(-1)] {
            let report = check_algebra(&build_generators(rep), &few(), 1e-9);
            let worst: Vec<_> = report.failures(1e-9).map(|b| format!("[{}, {}] {}", b.left, b.right, b.residual)).collect();
            assert!(report.passed, "{rep}: {worst:?}");
        }
    }

    #[test]
    fn generators_are_formally_self_adjoint() {
        for rep in [RepId::canonical8(), RepId::rep1(1), RepId::rep2(1), RepId::rep3(1)] {
            for (name, r) in hermiticity_residuals(&build_generators(rep), &few()) {
                assert!(r < 1e-12, "{rep} {name}: {r}");
            }
        }
    }

    #[test]
    fn subspaces() {
        let subs = subspace_decomposition();
        assert_eq!(subs.len(), 4);
        assert_eq!(subs[0].label.to_string(), "D+(1/2,0)");
        let total = subs.iter().fold(ComplexMatrix::zeros(8), |acc, s| &acc + &s.projector);
        assert!((&total - &ComplexMatrix::identity(8)).max_abs() < 1e-12);
        assert!(subs.iter().all(|s| s.rank == 2));
        let c = build_generators(RepId::canonical8());
        assert!(subspace_commutation_residual(&c, &few()) < 1e-9);
        for kind in [RepKind::Rep1, RepKind::Rep2, RepKind::Rep3] {
            assert_eq!(equation_projector(kind).trace().re.round(), 4.0);
        }
    }

    #[test]
    fn charge_commutes_with_third_set() {
        let g = build_generators(RepId::rep3(1));
        let r = charge_check(&g, &few(), 1e-10);
        assert!(r.passed, "{r:?}");
        // Control: γ₀ does not commute with the first set's boosts' spin part? It does
        // commute with its Hamiltonian; the second set's Hamiltonian too. Check a
        // genuinely failing operator instead: γ₁.
        let b = basis_for(4);
        let q = MomentumOperator::constant(b.gamma(1).clone());
        assert!(q.commutator(&g.j[0]).unwrap().max_abs_at(&few()) > 0.1);
        let _ = ONE;
    }
}
