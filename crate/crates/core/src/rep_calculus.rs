//! Label-level algebra of the representations `D^±(s, τ)`: P,T,C-completeness,
//! spin content of a `(s, τ)` multiplet, the massless helicity decomposition
//! and the helicity-operator check on the canonical generators at `m = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{build_basis, spectral_projector, spin_tensor};
use crate::expr::{Sample, ScalarExpr};
use crate::linalg::hermitian_eigen;
use crate::matrix::ComplexMatrix;
use crate::operator::{MatrixExpr, MomentumOperator};
use crate::poincare::{build_generators, RepId};

/// Non-negative half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Half(u32);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);

    pub fn from_twice(twice: u32) -> Self {
        Half(twice)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `2j + 1`.
    pub fn multiplicity(self) -> u32 {
        self.0 + 1
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Half {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_u32 = |t: &str| t.parse::<u32>().map_err(|_| format!("malformed half-integer '{s}'"));
        match s.split_once('/') {
            None => Ok(Half(2 * parse_u32(s)?)),
            Some((num, "2")) => Ok(Half(parse_u32(num)?)),
            Some(_) => Err(format!("malformed half-integer '{s}' (denominator must be 2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EnergySign {
    Plus,
    Minus,
}

impl EnergySign {
    pub fn flipped(self) -> Self {
        match self {
            EnergySign::Plus => EnergySign::Minus,
            EnergySign::Minus => EnergySign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EnergySign::Plus => '+',
            EnergySign::Minus => '-',
        }
    }
}

/// `D^±(s, τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub sign: EnergySign,
    pub s: Half,
    pub tau: Half,
}

impl IrrepLabel {
    pub fn new(sign: EnergySign, s: Half, tau: Half) -> Self {
        Self { sign, s, tau }
    }

    /// `(2s + 1)(2τ + 1)`.
    pub fn dimension(&self) -> u32 {
        self.s.multiplicity() * self.tau.multiplicity()
    }

    pub fn swapped(&self) -> Self {
        Self { sign: self.sign, s: self.tau, tau: self.s }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}({},{})", self.sign.symbol(), self.s, self.tau)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("label parse error at position {position}: {message}")]
pub struct LabelParseError {
    pub position: usize,
    pub message: String,
}

/// Parses `D+(1/2,0)+D-(0,1/2)`. `⊕` is accepted as a separator and
/// whitespace is ignored.
pub fn parse_labels(input: &str) -> Result<Vec<IrrepLabel>, LabelParseError> {
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    let err = |position: usize, message: String| LabelParseError { position, message };
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };
    let offset = |pos: usize| chars.get(pos).map(|c| c.0).unwrap_or(input.len());
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            return Err(err(offset(pos), "expected a label 'D±(s,τ)'".into()));
        }
        if chars[pos].1 != 'D' {
            return Err(err(offset(pos), format!("expected 'D', found '{}'", chars[pos].1)));
        }
        pos += 1;
        let sign = match chars.get(pos).map(|c| c.1) {
            Some('+') => EnergySign::Plus,
            Some('-') | Some('−') => EnergySign::Minus,
            _ => return Err(err(offset(pos), "expected energy sign '+' or '-'".into())),
        };
        pos += 1;
        skip_ws(&mut pos);
        if chars.get(pos).map(|c| c.1) != Some('(') {
            return Err(err(offset(pos), "expected '('".into()));
        }
        pos += 1;
        let mut parts = Vec::new();
        for terminator in [',', ')'] {
            let start = pos;
            while pos < chars.len() && chars[pos].1 != terminator && chars[pos].1 != ')' {
                pos += 1;
            }
            if chars.get(pos).map(|c| c.1) != Some(terminator) {
                return Err(err(offset(pos), format!("expected '{terminator}'")));
            }
            let text: String = chars[start..pos].iter().map(|c| c.1).collect();
            let value = text.parse::<Half>().map_err(|m| err(offset(start), m))?;
            parts.push(value);
            pos += 1;
        }
        out.push(IrrepLabel::new(sign, parts[0], parts[1]));
        skip_ws(&mut pos);
        match chars.get(pos).map(|c| c.1) {
            None => return Ok(out),
            Some('+') | Some('⊕') => pos += 1,
            Some(c) => return Err(err(offset(pos), format!("expected '+' between labels, found '{c}'"))),
        }
    }
}

pub fn format_labels(labels: &[IrrepLabel]) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("+")
}

/// True iff the multiset splits into quadruples `D±(s,τ) ⊕ D±(τ,s)` for
/// `s ≠ τ` and pairs `D±(s,s)`.
pub fn ptc_complete(labels: &[IrrepLabel]) -> bool {
    if labels.is_empty() {
        return false;
    }
    let mut counts: BTreeMap<IrrepLabel, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(*l).or_default() += 1;
    }
    let count = |l: &IrrepLabel| counts.get(l).copied().unwrap_or(0);
    labels.iter().all(|l| {
        let n = count(l);
        let conjugate = IrrepLabel { sign: l.sign.flipped(), ..*l };
        n == count(&conjugate) && (l.s == l.tau || (n == count(&l.swapped()) && n == count(&conjugate.swapped())))
    })
}

/// Spins `|s − τ|, |s − τ| + 1, …, s + τ`.
pub fn spin_content(s: Half, tau: Half) -> Vec<Half> {
    let low = s.twice().abs_diff(tau.twice());
    let high = s.twice() + tau.twice();
    (low..=high).step_by(2).map(Half::from_twice).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn value(self) -> f64 {
        match self {
            Helicity::Plus => 0.5,
            Helicity::Minus => -0.5,
        }
    }
}

/// A one-dimensional massless summand: energy sign plus the eigenvalue of
/// `S_a p_a/E` (when the S-spin is active) or of `T_a p_a/E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MasslessLabel {
    pub sign: EnergySign,
    pub s_helicity: Option<Helicity>,
    pub t_helicity: Option<Helicity>,
}

impl MasslessLabel {
    pub fn dimension(&self) -> u32 {
        1
    }
}

impl fmt::Display for MasslessLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |x: Option<Helicity>| match x {
            None => "0",
            Some(Helicity::Plus) => "1/2",
            Some(Helicity::Minus) => "-1/2",
        };
        write!(f, "D{}({},{})", self.sign.symbol(), h(self.s_helicity), h(self.t_helicity))
    }
}

/// Massive content of the canonical eight-component space, in the order
/// `D⁺(½,0) ⊕ D⁻(0,½) ⊕ D⁻(½,0) ⊕ D⁺(0,½)`.
pub fn canonical_massive_content() -> Vec<IrrepLabel> {
    use EnergySign::{Minus, Plus};
    vec![
        IrrepLabel::new(Plus, Half::HALF, Half::ZERO),
        IrrepLabel::new(Minus, Half::ZERO, Half::HALF),
        IrrepLabel::new(Minus, Half::HALF, Half::ZERO),
        IrrepLabel::new(Plus, Half::ZERO, Half::HALF),
    ]
}

/// Splits each massive summand into its two helicity pieces.
pub fn massless_decompose() -> Vec<MasslessLabel> {
    canonical_massive_content()
        .into_iter()
        .flat_map(|label| {
            [Helicity::Plus, Helicity::Minus].into_iter().map(move |h| {
                if label.s != Half::ZERO {
                    MasslessLabel { sign: label.sign, s_helicity: Some(h), t_helicity: None }
                } else {
                    MasslessLabel { sign: label.sign, s_helicity: None, t_helicity: Some(h) }
                }
            })
        })
        .collect()
}

/// Unordered pairs of distinct summands: `n(n − 1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Result of [`helicity_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelicityReport {
    /// `(generator, residual of [S·p/E, G], residual of [T·p/E, G])`.
    pub commutators: Vec<(String, f64, f64)>,
    pub max_residual: f64,
    /// Eigenvalues of `S_a p_a/E` restricted to the `S² = 3/4` subspace at the
    /// first sample.
    pub s_helicities: Vec<f64>,
    pub t_helicities: Vec<f64>,
    pub passed: bool,
}

/// `S_a p_a/E` (or `T_a p_a/E`) on the eight-component space.
pub fn helicity_operator(use_t: bool) -> MomentumOperator {
    let g = spin_tensor(&build_basis(8).expect("dim 8 is supported"));
    let inv_e = ScalarExpr::energy().recip();
    let mut coef = MatrixExpr::zero(8);
    for a in 0..3 {
        let m = if use_t { g.t(a) } else { g.s(a) };
        coef = coef.add(&MatrixExpr::term(ScalarExpr::p(a) * inv_e.clone(), m.clone()));
    }
    MomentumOperator::multiplication(coef)
}

fn restricted_eigenvalues(op: &MomentumOperator, casimir: &ComplexMatrix, at: &Sample) -> Vec<f64> {
    let projector = spectral_projector(casimir, 0.75, 1e-9).expect("3/4 is in the Casimir spectrum");
    let (values, vectors) = hermitian_eigen(&projector);
    let basis: Vec<_> = values.iter().zip(&vectors).filter(|(v, _)| **v > 0.5).map(|(_, v)| v.clone()).collect();
    let h = op.eval(at)[&[0, 0, 0]].clone();
    let k = basis.len();
    let restricted = ComplexMatrix::from_fn(k, |i, j| basis[i].dotc(&(h.inner() * &basis[j])));
    hermitian_eigen(&restricted).0
}

/// Checks that the helicity operators commute with every canonical generator
/// at the given samples (which should have `m = 0`), and that their
/// eigenvalues on the spin-½ subspaces are ±½.
pub fn helicity_check(samples: &[Sample], tol: f64) -> HelicityReport {
    let gens = build_generators(RepId::canonical8());
    let hs = helicity_operator(false);
    let ht = helicity_operator(true);
    let mut commutators = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (name, g) in gens.named() {
        let rs = hs.commutator(g).expect("order stays within the cap").max_abs_at(samples);
        let rt = ht.commutator(g).expect("order stays within the cap").max_abs_at(samples);
        max_residual = max_residual.max(rs).max(rt);
        commutators.push((name.to_string(), rs, rt));
    }
    let spin = spin_tensor(&build_basis(8).expect("dim 8 is supported"));
    let first = samples.first().copied().unwrap_or(Sample::new([0.3, -0.4, 1.2], 0.0, 0.0));
    let s_helicities = restricted_eigenvalues(&hs, &spin.s_squared(), &first);
    let t_helicities = restricted_eigenvalues(&ht, &spin.t_squared(), &first);
    let half_ok = |v: &[f64]| v.iter().all(|x| (x.abs() - 0.5).abs() < 1e-9);
    let passed = max_residual < tol && half_ok(&s_helicities) && half_ok(&t_helicities);
    HelicityReport { commutators, max_residual, s_helicities, t_helicities, passed }
}
