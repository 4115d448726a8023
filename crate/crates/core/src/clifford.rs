//! Gamma-matrix bases in 4 and 8 dimensions, the so(4) spin tensor with its
//! su(2) ⊕ su(2) split, Casimir spectra, spectral projectors and the
//! commutant scan of the canonical Hamiltonian.
//!
//! Construction: five mutually anticommuting hermitian 4×4 matrices
//!
//! ```text
//! Δ₁ = σ₁⊗σ₁  Δ₂ = σ₁⊗σ₂  Δ₃ = σ₁⊗σ₃  Δ₄ = σ₂⊗1  Δ₅ = σ₃⊗1
//! ```
//!
//! give `γ₀ = Δ₅ = diag(1, 1, −1, −1)` and `γ_k = iΔ_k` (k = 1..4). The 8×8 set is
//! `Γ₀ = σ₃⊗1₄`, `Γ_k = σ₁⊗γ_k`. All entries are exact small integers times
//! powers of `i`, so every identity below is checked with zero tolerance.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::linalg::{cluster_values, hermitian_eigen};
use crate::matrix::{c64, pauli, ComplexMatrix, I};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("unsupported Clifford basis dimension {0} (expected 4 or 8)")]
    UnsupportedDimension(usize),
    #[error("eigenvalue {requested} is not in the spectrum (nearest eigenvalue {nearest})")]
    EigenvalueNotInSpectrum { requested: f64, nearest: f64 },
    #[error("spectral projector requires a hermitian matrix")]
    NotHermitian,
    #[error("Clifford invariant violated: {0}")]
    InvariantViolated(String),
}

/// Fully antisymmetric ε_abc over a, b, c ∈ {0, 1, 2} (i.e. spatial 1..3).
pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Metric signature diag(+1, −1, −1, −1, −1) over μ = 0..4.
pub fn metric(mu: usize) -> f64 {
    if mu == 0 {
        1.0
    } else {
        -1.0
    }
}

fn delta4(k: usize) -> ComplexMatrix {
    match k {
        1 => pauli(1).kron(&pauli(1)),
        2 => pauli(1).kron(&pauli(2)),
        3 => pauli(1).kron(&pauli(3)),
        4 => pauli(2).kron(&pauli(0)),
        5 => pauli(3).kron(&pauli(0)),
        _ => unreachable!("Δ index {k}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordBasis {
    dim: usize,
    gamma0: ComplexMatrix,
    /// γ₁..γ₄; index 4 pairs with `p₄ ≡ m`.
    spatial: [ComplexMatrix; 4],
}

/// Builds the canonical 4×4 or 8×8 basis.
pub fn build_basis(dim: usize) -> Result<CliffordBasis, CliffordError> {
    let gamma4 = |k: usize| delta4(k).scale(I);
    match dim {
        4 => Ok(CliffordBasis {
            dim,
            gamma0: delta4(5),
            spatial: [gamma4(1), gamma4(2), gamma4(3), gamma4(4)],
        }),
        8 => {
            let lift = |k: usize| pauli(1).kron(&gamma4(k));
            Ok(CliffordBasis {
                dim,
                gamma0: pauli(3).kron(&ComplexMatrix::identity(4)),
                spatial: [lift(1), lift(2), lift(3), lift(4)],
            })
        }
        other => Err(CliffordError::UnsupportedDimension(other)),
    }
}

impl CliffordBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.dim)
    }

    /// γ_μ for μ ∈ 0..=4.
    pub fn gamma(&self, mu: usize) -> &ComplexMatrix {
        if mu == 0 {
            &self.gamma0
        } else {
            &self.spatial[mu - 1]
        }
    }

    pub fn gamma0(&self) -> &ComplexMatrix {
        &self.gamma0
    }

    /// The largest mutually anticommuting set available in this dimension:
    /// γ₀..γ₄ for dim 4; Γ₀..Γ₄ plus `Γ₅ = σ₁⊗(iΔ₅)` and `Γ₆ = iσ₂⊗1₄` for dim 8.
    /// All but the first square to −1.
    pub fn extended_set(&self) -> Vec<ComplexMatrix> {
        let mut set: Vec<ComplexMatrix> = (0..=4).map(|mu| self.gamma(mu).clone()).collect();
        if self.dim == 8 {
            set.push(pauli(1).kron(&delta4(5).scale(I)));
            set.push(pauli(2).kron(&ComplexMatrix::identity(4)).scale(I));
        }
        set
    }

    /// Products of subsets of the first `log₂(dim²)` gammas. These form a
    /// linear basis of all dim×dim matrices, and each one squares to ±1.
    pub fn monomials(&self) -> Vec<ComplexMatrix> {
        let generators: Vec<ComplexMatrix> = match self.dim {
            4 => (0..4).map(|mu| self.gamma(mu).clone()).collect(),
            _ => self.extended_set().into_iter().take(6).collect(),
        };
        let count = 1usize << generators.len();
        (0..count)
            .map(|mask| {
                generators
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .fold(self.identity(), |acc, (_, g)| &acc * g)
            })
            .collect()
    }

    /// `γ₀ γ_k p_k` summed over k = 1..4 with `p₄ ≡ m`.
    pub fn hamiltonian_at(&self, p: [f64; 3], m: f64) -> ComplexMatrix {
        let mut slash = ComplexMatrix::zeros(self.dim);
        for (k, pk) in p.iter().chain(std::iter::once(&m)).enumerate() {
            slash += &self.spatial[k].scale_real(*pk);
        }
        &self.gamma0 * &slash
    }

    /// Checks hermiticity, squares and the anticommutation table with zero
    /// tolerance.
    pub fn validate(&self) -> Result<(), CliffordError> {
        let id = self.identity();
        let fail = |msg: String| Err(CliffordError::InvariantViolated(msg));
        if !self.gamma0.is_hermitian(0.0) {
            return fail("γ₀ is not hermitian".into());
        }
        for k in 1..=4 {
            if !self.gamma(k).is_anti_hermitian(0.0) {
                return fail(format!("γ_{k} is not anti-hermitian"));
            }
        }
        for mu in 0..=4 {
            for nu in mu..=4 {
                let anti = self.gamma(mu).anticommutator(self.gamma(nu));
                let expected = if mu == nu { id.scale_real(2.0 * metric(mu)) } else { ComplexMatrix::zeros(self.dim) };
                if anti != expected {
                    return fail(format!("{{γ_{mu}, γ_{nu}}} ≠ 2g_{mu}{nu}"));
                }
            }
        }
        Ok(())
    }
}

/// `S_μν = (i/4)(γ_μγ_ν − γ_νγ_μ)` over μ, ν ∈ 0..4 plus the split
/// `S_a = ½(½ε_abc S_bc + S_4a)`, `T_a = ½(½ε_abc S_bc − S_4a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinGenerators {
    dim: usize,
    table: Vec<Vec<ComplexMatrix>>,
    s: [ComplexMatrix; 3],
    t: [ComplexMatrix; 3],
}

pub fn spin_tensor(basis: &CliffordBasis) -> SpinGenerators {
    let dim = basis.dim();
    let table: Vec<Vec<ComplexMatrix>> = (0..=4)
        .map(|mu| {
            (0..=4)
                .map(|nu| basis.gamma(mu).commutator(basis.gamma(nu)).scale(c64(0.0, 0.25)))
                .collect()
        })
        .collect();
    let split = |a: usize, sign: f64| {
        let mut rotation = ComplexMatrix::zeros(dim);
        for b in 0..3 {
            for c in 0..3 {
                let e = levi_civita(a, b, c);
                if e != 0.0 {
                    rotation += &table[b + 1][c + 1].scale_real(0.5 * e);
                }
            }
        }
        (&rotation + &table[4][a + 1].scale_real(sign)).scale_real(0.5)
    };
    let s = [split(0, 1.0), split(1, 1.0), split(2, 1.0)];
    let t = [split(0, -1.0), split(1, -1.0), split(2, -1.0)];
    SpinGenerators { dim, table, s, t }
}

impl SpinGenerators {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// S_μν for μ, ν ∈ 0..=4.
    pub fn get(&self, mu: usize, nu: usize) -> &ComplexMatrix {
        &self.table[mu][nu]
    }

    /// S_a for a ∈ 0..3 (spatial 1..3).
    pub fn s(&self, a: usize) -> &ComplexMatrix {
        &self.s[a]
    }

    pub fn t(&self, a: usize) -> &ComplexMatrix {
        &self.t[a]
    }

    /// `½ ε_abc S_bc`, the ordinary spin vector.
    pub fn rotation(&self, a: usize) -> ComplexMatrix {
        &self.s[a] + &self.t[a]
    }

    pub fn s_squared(&self) -> ComplexMatrix {
        self.s.iter().fold(ComplexMatrix::zeros(self.dim), |acc, m| &acc + &(m * m))
    }

    pub fn t_squared(&self) -> ComplexMatrix {
        self.t.iter().fold(ComplexMatrix::zeros(self.dim), |acc, m| &acc + &(m * m))
    }

    /// Largest deviation from `[S_a,S_b] = iε_abc S_c`, `[T_a,T_b] = iε_abc T_c`,
    /// `[S_a,T_b] = 0`.
    pub fn su2_bracket_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let mut es = ComplexMatrix::zeros(self.dim);
                let mut et = ComplexMatrix::zeros(self.dim);
                for c in 0..3 {
                    let e = levi_civita(a, b, c);
                    if e != 0.0 {
                        es += &self.s[c].scale(c64(0.0, e));
                        et += &self.t[c].scale(c64(0.0, e));
                    }
                }
                worst = worst
                    .max((self.s[a].commutator(&self.s[b]) - es).max_abs())
                    .max((self.t[a].commutator(&self.t[b]) - et).max_abs())
                    .max(self.s[a].commutator(&self.t[b]).max_abs());
            }
        }
        worst
    }
}

/// Eigenvalue histogram of a Casimir: `(value, multiplicity)` ascending.
pub type Spectrum = Vec<(f64, usize)>;

#[derive(Debug, Clone, PartialEq)]
pub struct CasimirSpectrum {
    pub s_squared: Spectrum,
    pub t_squared: Spectrum,
}

const SPECTRUM_CLUSTER_TOL: f64 = 1e-9;

pub fn spectrum(matrix: &ComplexMatrix) -> Spectrum {
    let (values, _) = hermitian_eigen(matrix);
    cluster_values(&values, SPECTRUM_CLUSTER_TOL)
}

pub fn casimir_spectrum(gens: &SpinGenerators) -> CasimirSpectrum {
    CasimirSpectrum { s_squared: spectrum(&gens.s_squared()), t_squared: spectrum(&gens.t_squared()) }
}

/// `s(s+1)`.
pub fn casimir_value(spin: f64) -> f64 {
    spin * (spin + 1.0)
}

/// Inverts `s(s+1) = value` for the non-negative root.
pub fn spin_from_casimir(value: f64) -> f64 {
    0.5 * ((1.0 + 4.0 * value).max(0.0).sqrt() - 1.0)
}

/// Orthogonal projector onto the eigenspace of a hermitian `matrix` for every
/// eigenvalue within `tol` of `eigenvalue`.
pub fn spectral_projector(
    matrix: &ComplexMatrix,
    eigenvalue: f64,
    tol: f64,
) -> Result<ComplexMatrix, CliffordError> {
    if !matrix.is_hermitian(1e-12 * matrix.max_abs().max(1.0)) {
        return Err(CliffordError::NotHermitian);
    }
    let (values, vectors) = hermitian_eigen(matrix);
    let n = matrix.dim();
    let mut projector = ComplexMatrix::zeros(n);
    let mut hit = false;
    for (value, v) in values.iter().zip(&vectors) {
        if (value - eigenvalue).abs() <= tol {
            hit = true;
            projector += &ComplexMatrix::from_inner(v * v.adjoint());
        }
    }
    if !hit {
        let nearest = values
            .iter()
            .copied()
            .min_by(|a, b| (a - eigenvalue).abs().total_cmp(&(b - eigenvalue).abs()))
            .unwrap_or(f64::NAN);
        return Err(CliffordError::EigenvalueNotInSpectrum { requested: eigenvalue, nearest });
    }
    Ok(projector)
}

/// Real part of `tr(P)`, i.e. the rank of an orthogonal projector.
pub fn projector_rank(projector: &ComplexMatrix) -> usize {
    projector.trace().re.round() as usize
}

/// Bilinears `Γ_AΓ_B` (A < B over [`CliffordBasis::extended_set`]) that commute
/// with every supplied Hamiltonian sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantScan {
    pub scanned: usize,
    pub commuting: Vec<(usize, usize)>,
}

impl CommutantScan {
    pub fn count(&self) -> usize {
        self.commuting.len()
    }
}

pub fn commutant_scan(hamiltonians: &[ComplexMatrix], basis: &CliffordBasis, tol: f64) -> CommutantScan {
    let set = basis.extended_set();
    let mut commuting = Vec::new();
    let mut scanned = 0;
    for a in 0..set.len() {
        for b in (a + 1)..set.len() {
            scanned += 1;
            let bilinear = &set[a] * &set[b];
            if hamiltonians.iter().all(|h| bilinear.commutator(h).max_abs() <= tol) {
                commuting.push((a, b));
            }
        }
    }
    CommutantScan { scanned, commuting }
}

/// Index pairs `(k, l)` with `1 ≤ k < l ≤ 4`: the six independent `S_kl`.
pub fn so4_pairs() -> BTreeSet<(usize, usize)> {
    (1..=4).flat_map(|k| ((k + 1)..=4).map(move |l| (k, l))).collect()
}
