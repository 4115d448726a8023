//! Scalar expression trees over `p₁, p₂, p₃, m, t` and the derived energy
//! `E = √(p² + m²)`, with exact symbolic differentiation.
//!
//! Nodes are hash-consed lightly: every node caches a structural hash, sums
//! and products keep their children in hash order, and constructors fold
//! constants, merge like terms and collect repeated factors into integer
//! powers. That is enough to keep operator products from growing without
//! bound; full canonicalisation is not attempted.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::c64;

/// Independent variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    P1,
    P2,
    P3,
    M,
    T,
}

impl Var {
    /// Momentum component for a ∈ 0..3.
    pub fn p(a: usize) -> Var {
        [Var::P1, Var::P2, Var::P3][a]
    }

    pub fn momentum_index(self) -> Option<usize> {
        match self {
            Var::P1 => Some(0),
            Var::P2 => Some(1),
            Var::P3 => Some(2),
            _ => None,
        }
    }
}

/// A point `(p, m, t)` at which expressions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub p: [f64; 3],
    pub m: f64,
    pub t: f64,
}

impl Sample {
    pub fn new(p: [f64; 3], m: f64, t: f64) -> Self {
        Self { p, m, t }
    }

    /// Positive root `√(p² + m²)`.
    pub fn energy(&self) -> f64 {
        (self.p.iter().map(|x| x * x).sum::<f64>() + self.m * self.m).sqrt()
    }

    pub fn momentum_norm(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn value(&self, var: Var) -> f64 {
        match var {
            Var::P1 => self.p[0],
            Var::P2 => self.p[1],
            Var::P3 => self.p[2],
            Var::M => self.m,
            Var::T => self.t,
        }
    }

    pub fn with(&self, var: Var, value: f64) -> Sample {
        let mut s = *self;
        match var {
            Var::P1 => s.p[0] = value,
            Var::P2 => s.p[1] = value,
            Var::P3 => s.p[2] = value,
            Var::M => s.m = value,
            Var::T => s.t = value,
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Const(Complex64),
    Var(Var),
    Energy,
    Add(Vec<ScalarExpr>),
    Mul(Vec<ScalarExpr>),
    Pow(ScalarExpr, i32),
    Sqrt(ScalarExpr),
}

#[derive(Debug)]
struct Node {
    hash: u64,
    kind: Kind,
}

#[derive(Clone)]
pub struct ScalarExpr(Arc<Node>);

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for ScalarExpr {}

impl Hash for ScalarExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

fn hash_kind(kind: &Kind) -> u64 {
    let mut h = DefaultHasher::new();
    match kind {
        Kind::Const(z) => {
            0u8.hash(&mut h);
            // +0.0 and −0.0 must hash alike.
            (z.re + 0.0).to_bits().hash(&mut h);
            (z.im + 0.0).to_bits().hash(&mut h);
        }
        Kind::Var(v) => {
            1u8.hash(&mut h);
            v.hash(&mut h);
        }
        Kind::Energy => 2u8.hash(&mut h),
        Kind::Add(xs) => {
            3u8.hash(&mut h);
            for x in xs {
                x.0.hash.hash(&mut h);
            }
        }
        Kind::Mul(xs) => {
            4u8.hash(&mut h);
            for x in xs {
                x.0.hash.hash(&mut h);
            }
        }
        Kind::Pow(x, n) => {
            5u8.hash(&mut h);
            x.0.hash.hash(&mut h);
            n.hash(&mut h);
        }
        Kind::Sqrt(x) => {
            6u8.hash(&mut h);
            x.0.hash.hash(&mut h);
        }
    }
    h.finish()
}

fn node(kind: Kind) -> ScalarExpr {
    let hash = hash_kind(&kind);
    ScalarExpr(Arc::new(Node { hash, kind }))
}

impl ScalarExpr {
    pub fn constant(z: Complex64) -> Self {
        node(Kind::Const(z + c64(0.0, 0.0)))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(c64(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn var(v: Var) -> Self {
        node(Kind::Var(v))
    }

    /// Momentum component `p_a`, a ∈ 0..3.
    pub fn p(a: usize) -> Self {
        Self::var(Var::p(a))
    }

    pub fn mass() -> Self {
        Self::var(Var::M)
    }

    pub fn time() -> Self {
        Self::var(Var::T)
    }

    pub fn energy() -> Self {
        node(Kind::Energy)
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match &self.0.kind {
            Kind::Const(z) => Some(*z),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(c64(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        self.as_constant() == Some(c64(1.0, 0.0))
    }

    /// Sum with constant folding and like-term merging.
    pub fn sum(terms: impl IntoIterator<Item = ScalarExpr>) -> Self {
        let mut constant = c64(0.0, 0.0);
        // (coefficient, monomial) with monomial free of a leading constant.
        let mut collected: Vec<(Complex64, ScalarExpr)> = Vec::new();
        let push = |coef: Complex64, rest: ScalarExpr, collected: &mut Vec<(Complex64, ScalarExpr)>| {
            if let Some(slot) = collected.iter_mut().find(|(_, r)| *r == rest) {
                slot.0 += coef;
            } else {
                collected.push((coef, rest));
            }
        };
        for t in terms {
            match &t.0.kind {
                Kind::Const(z) => constant += z,
                Kind::Add(xs) => {
                    for x in xs {
                        match x.as_constant() {
                            Some(z) => constant += z,
                            None => {
                                let (c, r) = x.split_coefficient();
                                push(c, r, &mut collected);
                            }
                        }
                    }
                }
                _ => {
                    let (c, r) = t.split_coefficient();
                    push(c, r, &mut collected);
                }
            }
        }
        let mut children: Vec<ScalarExpr> = collected
            .into_iter()
            .filter(|(c, _)| *c != c64(0.0, 0.0))
            .map(|(c, r)| Self::product([Self::constant(c), r]))
            .collect();
        if constant != c64(0.0, 0.0) {
            children.push(Self::constant(constant));
        }
        match children.len() {
            0 => Self::zero(),
            1 => children.pop().unwrap(),
            _ => {
                children.sort_by_key(|c| c.0.hash);
                node(Kind::Add(children))
            }
        }
    }

    /// Product with constant folding and collection of repeated factors.
    pub fn product(factors: impl IntoIterator<Item = ScalarExpr>) -> Self {
        let mut constant = c64(1.0, 0.0);
        let mut powers: Vec<(ScalarExpr, i32)> = Vec::new();
        let push = |base: ScalarExpr, n: i32, powers: &mut Vec<(ScalarExpr, i32)>| {
            if let Some(slot) = powers.iter_mut().find(|(b, _)| *b == base) {
                slot.1 += n;
            } else {
                powers.push((base, n));
            }
        };
        for f in factors {
            match &f.0.kind {
                Kind::Const(z) => constant *= z,
                Kind::Mul(xs) => {
                    for x in xs {
                        match &x.0.kind {
                            Kind::Const(z) => constant *= z,
                            Kind::Pow(b, n) => push(b.clone(), *n, &mut powers),
                            _ => push(x.clone(), 1, &mut powers),
                        }
                    }
                }
                Kind::Pow(b, n) => push(b.clone(), *n, &mut powers),
                _ => push(f.clone(), 1, &mut powers),
            }
        }
        if constant == c64(0.0, 0.0) {
            return Self::zero();
        }
        let mut children: Vec<ScalarExpr> = powers
            .into_iter()
            .filter(|(_, n)| *n != 0)
            .map(|(b, n)| if n == 1 { b } else { node(Kind::Pow(b, n)) })
            .collect();
        children.sort_by_key(|c| c.0.hash);
        if constant != c64(1.0, 0.0) || children.is_empty() {
            children.insert(0, Self::constant(constant));
        }
        match children.len() {
            1 => children.pop().unwrap(),
            _ => node(Kind::Mul(children)),
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        match (&self.0.kind, n) {
            (_, 0) => Self::one(),
            (_, 1) => self.clone(),
            (Kind::Const(z), _) => Self::constant(z.powi(n)),
            (Kind::Pow(b, k), _) => Self::product([node(Kind::Pow(b.clone(), k * n))]),
            (Kind::Mul(xs), _) => Self::product(xs.iter().map(|x| x.powi(n))),
            _ => node(Kind::Pow(self.clone(), n)),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        match &self.0.kind {
            Kind::Const(z) => Self::constant(z.sqrt()),
            _ => node(Kind::Sqrt(self.clone())),
        }
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::product([Self::constant(z), self.clone()])
    }

    /// Splits off a leading constant factor: `c·rest`.
    fn split_coefficient(&self) -> (Complex64, ScalarExpr) {
        match &self.0.kind {
            Kind::Const(z) => (*z, Self::one()),
            Kind::Mul(xs) => match xs[0].as_constant() {
                Some(z) => {
                    let rest = if xs.len() == 2 { xs[1].clone() } else { node(Kind::Mul(xs[1..].to_vec())) };
                    (z, rest)
                }
                None => (c64(1.0, 0.0), self.clone()),
            },
            _ => (c64(1.0, 0.0), self.clone()),
        }
    }

    pub fn eval(&self, at: &Sample) -> Complex64 {
        match &self.0.kind {
            Kind::Const(z) => *z,
            Kind::Var(v) => c64(at.value(*v), 0.0),
            Kind::Energy => c64(at.energy(), 0.0),
            Kind::Add(xs) => xs.iter().map(|x| x.eval(at)).sum(),
            Kind::Mul(xs) => xs.iter().map(|x| x.eval(at)).product(),
            Kind::Pow(b, n) => b.eval(at).powi(*n),
            Kind::Sqrt(x) => x.eval(at).sqrt(),
        }
    }

    /// Exact derivative; `∂E/∂p_a = p_a/E`, `∂E/∂m = m/E`, `∂E/∂t = 0`.
    pub fn differentiate(&self, var: Var) -> Self {
        match &self.0.kind {
            Kind::Const(_) => Self::zero(),
            Kind::Var(v) => {
                if *v == var {
                    Self::one()
                } else {
                    Self::zero()
                }
            }
            Kind::Energy => match var {
                Var::T => Self::zero(),
                v => Self::product([Self::var(v), Self::energy().recip()]),
            },
            Kind::Add(xs) => Self::sum(xs.iter().map(|x| x.differentiate(var))),
            Kind::Mul(xs) => Self::sum((0..xs.len()).map(|k| {
                let d = xs[k].differentiate(var);
                if d.is_zero() {
                    return Self::zero();
                }
                Self::product(
                    xs.iter().enumerate().map(|(j, x)| if j == k { d.clone() } else { x.clone() }),
                )
            })),
            Kind::Pow(b, n) => {
                let d = b.differentiate(var);
                if d.is_zero() {
                    return Self::zero();
                }
                Self::product([Self::real(*n as f64), b.powi(n - 1), d])
            }
            Kind::Sqrt(x) => {
                let d = x.differentiate(var);
                if d.is_zero() {
                    return Self::zero();
                }
                Self::product([Self::real(0.5), d, self.recip()])
            }
        }
    }

    /// Substitutes `p → η_p p`, `m → η_m m`, `t → η_t t`. `E` is left alone: it
    /// depends on `p²` and `m²` only.
    pub fn flip(&self, eta_p: i8, eta_m: i8, eta_t: i8) -> Self {
        if eta_p == 1 && eta_m == 1 && eta_t == 1 {
            return self.clone();
        }
        match &self.0.kind {
            Kind::Const(_) | Kind::Energy => self.clone(),
            Kind::Var(v) => {
                let eta = match v {
                    Var::M => eta_m,
                    Var::T => eta_t,
                    _ => eta_p,
                };
                if eta == 1 {
                    self.clone()
                } else {
                    self.scale(c64(-1.0, 0.0))
                }
            }
            Kind::Add(xs) => Self::sum(xs.iter().map(|x| x.flip(eta_p, eta_m, eta_t))),
            Kind::Mul(xs) => Self::product(xs.iter().map(|x| x.flip(eta_p, eta_m, eta_t))),
            Kind::Pow(b, n) => b.flip(eta_p, eta_m, eta_t).powi(*n),
            Kind::Sqrt(x) => x.flip(eta_p, eta_m, eta_t).sqrt(),
        }
    }

    /// Complex conjugate (all variables are real).
    pub fn conj(&self) -> Self {
        match &self.0.kind {
            Kind::Const(z) => Self::constant(z.conj()),
            Kind::Var(_) | Kind::Energy => self.clone(),
            Kind::Add(xs) => Self::sum(xs.iter().map(|x| x.conj())),
            Kind::Mul(xs) => Self::product(xs.iter().map(|x| x.conj())),
            Kind::Pow(b, n) => b.conj().powi(*n),
            Kind::Sqrt(x) => x.conj().sqrt(),
        }
    }

    /// Number of nodes in the tree (shared subtrees counted each time).
    pub fn size(&self) -> usize {
        match &self.0.kind {
            Kind::Const(_) | Kind::Var(_) | Kind::Energy => 1,
            Kind::Add(xs) | Kind::Mul(xs) => 1 + xs.iter().map(|x| x.size()).sum::<usize>(),
            Kind::Pow(b, _) | Kind::Sqrt(b) => 1 + b.size(),
        }
    }
}

impl std::ops::Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::sum([self, rhs])
    }
}

impl std::ops::Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::sum([self, rhs.scale(c64(-1.0, 0.0))])
    }
}

impl std::ops::Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::product([self, rhs])
    }
}

impl std::ops::Div for ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::product([self, rhs.recip()])
    }
}

impl std::ops::Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scale(c64(-1.0, 0.0))
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Const(z) if z.im == 0.0 => write!(f, "{}", z.re),
            Kind::Const(z) if z.re == 0.0 => write!(f, "{}i", z.im),
            Kind::Const(z) => write!(f, "({}{:+}i)", z.re, z.im),
            Kind::Var(v) => write!(
                f,
                "{}",
                match v {
                    Var::P1 => "p1",
                    Var::P2 => "p2",
                    Var::P3 => "p3",
                    Var::M => "m",
                    Var::T => "t",
                }
            ),
            Kind::Energy => write!(f, "E"),
            Kind::Add(xs) => {
                write!(f, "(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Kind::Mul(xs) => {
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Kind::Pow(b, n) => write!(f, "{b}^{n}"),
            Kind::Sqrt(x) => write!(f, "sqrt({x})"),
        }
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}
