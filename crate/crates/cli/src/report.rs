//! JSON report shapes (schema 1) and their aligned-text renderings.

use std::fmt::{self, Write as _};
use std::marker::PhantomData;

use poincare_ptc::matrix::ComplexMatrix;
use poincare_ptc::symmetry::{ClassificationResult, Expectation, TableEntry, Verdict};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SCHEMA: u32 = 1;

/// A JSON object whose keys keep insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ordered<T>(pub Vec<(String, T)>);

impl<T> Ordered<T> {
    pub fn get(&self, key: &str) -> Option<&T> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl<T> FromIterator<(String, T)> for Ordered<T> {
    fn from_iter<I: IntoIterator<Item = (String, T)>>(iter: I) -> Self {
        Ordered(iter.into_iter().collect())
    }
}

impl<T: Serialize> Serialize for Ordered<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Ordered<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct OrderedVisitor<T>(PhantomData<T>);

        impl<'de, T: Deserialize<'de>> Visitor<'de> for OrderedVisitor<T> {
            type Value = Ordered<T>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = access.next_entry()? {
                    out.push(entry);
                }
                Ok(Ordered(out))
            }
        }

        deserializer.deserialize_map(OrderedVisitor(PhantomData))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub rank_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: u32,
    pub command: String,
    pub config: ConfigEcho,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestBody {
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraEntry {
    pub max_residual: f64,
    pub passed: bool,
    pub brackets: Ordered<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraBody {
    pub reps: Ordered<AlgebraEntry>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub verdict: Verdict,
    pub nullspace_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution_scale: Option<[f64; 2]>,
    pub smallest_singular_value: f64,
    pub paper_expectation: Expectation,
}

impl EntryJson {
    pub fn new(result: &ClassificationResult, expectation: Expectation) -> Self {
        Self {
            verdict: result.verdict,
            nullspace_dim: result.nullspace_dim,
            residual: result.residual,
            witness: result.witness.clone(),
            involution_scale: result.involution_scale.map(|z| [z.re, z.im]),
            smallest_singular_value: result.smallest_singular_value,
            paper_expectation: expectation,
        }
    }

    pub fn from_entry(entry: &TableEntry) -> Self {
        Self::new(&entry.result, entry.expectation)
    }

    pub fn agrees(&self) -> Option<bool> {
        match self.paper_expectation {
            Expectation::Unstated => None,
            Expectation::Invariant => Some(self.verdict == Verdict::Invariant),
            Expectation::Noninvariant => Some(self.verdict == Verdict::Noninvariant),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyBody {
    pub rep: String,
    pub op: String,
    pub result: EntryJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableBody {
    pub tables: Ordered<Ordered<EntryJson>>,
    pub matches_paper: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MasslessBody {
    /// Generator → [residual with S·p/E, residual with T·p/E].
    pub commutators: Ordered<[f64; 2]>,
    pub max_residual: f64,
    pub s_helicities: Vec<f64>,
    pub t_helicities: Vec<f64>,
    pub labels: Vec<String>,
    pub pair_count: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtcBody {
    pub labels: String,
    pub complete: bool,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sci(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.2e}")).unwrap_or_else(|| "-".into())
}

fn header(out: &mut String, title: &str, c: &ConfigEcho) {
    let _ = writeln!(out, "{title}  (seed {:#x}, {} samples, tol {:e}, rank tol {:e})", c.seed, c.samples, c.tol, c.rank_tol);
}

pub fn render_selftest(e: &Envelope<SelftestBody>) -> String {
    let mut out = String::new();
    header(&mut out, "selftest", &e.config);
    let width = e.body.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &e.body.checks {
        let _ = writeln!(out, "  {:<width$}  {:<4}  {:.2e}", c.name, if c.passed { "ok" } else { "FAIL" }, c.residual);
    }
    let _ = writeln!(out, "passed: {}", yes_no(e.body.passed));
    out
}

pub fn render_algebra(e: &Envelope<AlgebraBody>) -> String {
    let mut out = String::new();
    header(&mut out, "algebra", &e.config);
    for (rep, entry) in &e.body.reps.0 {
        let _ = writeln!(out, "  {rep:<11} 45 brackets  max residual {:.2e}  {}", entry.max_residual, if entry.passed { "ok" } else { "FAIL" });
        for (bracket, r) in &entry.brackets.0 {
            if *r >= e.config.tol {
                let _ = writeln!(out, "      {bracket} {r:.2e}");
            }
        }
    }
    let _ = writeln!(out, "passed: {}", yes_no(e.body.passed));
    out
}

fn expectation(x: Expectation) -> &'static str {
    match x {
        Expectation::Invariant => "invariant",
        Expectation::Noninvariant => "noninvariant",
        Expectation::Unstated => "unstated",
    }
}

fn entry_line(out: &mut String, op: &str, e: &EntryJson) {
    let scale = e.involution_scale.map(|[re, im]| {
        if im == 0.0 {
            format!("{re:+}")
        } else {
            format!("{re:+}{im:+}i")
        }
    });
    let mark = match e.agrees() {
        Some(true) => "",
        Some(false) => "  MISMATCH",
        None => "",
    };
    let _ = writeln!(
        out,
        "  {op:<5} {:<13} {:>4}  {:>9}  {:>9}  {:>5}  {}{mark}",
        e.verdict.to_string(),
        e.nullspace_dim,
        sci(e.residual),
        sci(Some(e.smallest_singular_value)),
        scale.unwrap_or_else(|| "-".into()),
        expectation(e.paper_expectation),
    );
}

const TABLE_HEAD: &str = "  op    verdict       null   residual   min sing     q²  published";

pub fn render_classify(e: &Envelope<ClassifyBody>) -> String {
    let mut out = String::new();
    header(&mut out, &format!("classify {} {}", e.body.rep, e.body.op), &e.config);
    let _ = writeln!(out, "{TABLE_HEAD}");
    entry_line(&mut out, &e.body.op, &e.body.result);
    if let Some(w) = &e.body.result.witness {
        let _ = writeln!(out, "witness:");
        out.push_str(&render_matrix(w));
    }
    out
}

pub fn render_table(e: &Envelope<TableBody>) -> String {
    let mut out = String::new();
    header(&mut out, "table", &e.config);
    for (rep, entries) in &e.body.tables.0 {
        let _ = writeln!(out, "\n{rep}");
        let _ = writeln!(out, "{TABLE_HEAD}");
        for (op, entry) in &entries.0 {
            entry_line(&mut out, op, entry);
        }
    }
    let _ = writeln!(out, "\nmatches published verdicts: {}", yes_no(e.body.matches_paper));
    out
}

pub fn render_massless(e: &Envelope<MasslessBody>) -> String {
    let mut out = String::new();
    header(&mut out, "massless", &e.config);
    let _ = writeln!(out, "  generator  [S·p/E, G]  [T·p/E, G]");
    for (name, [s, t]) in &e.body.commutators.0 {
        let _ = writeln!(out, "  {name:<9}  {s:>10.2e}  {t:>10.2e}");
    }
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:+.3}")).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "S·p/E on S²=3/4: {}", fmt(&e.body.s_helicities));
    let _ = writeln!(out, "T·p/E on T²=3/4: {}", fmt(&e.body.t_helicities));
    let _ = writeln!(out, "labels: {}", e.body.labels.join(" "));
    let _ = writeln!(out, "pairs: {}", e.body.pair_count);
    let _ = writeln!(out, "passed: {}", yes_no(e.body.passed));
    out
}

pub fn render_ptc(e: &Envelope<PtcBody>) -> String {
    format!("{}\ncomplete: {}\n", e.body.labels, yes_no(e.body.complete))
}

pub fn render_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for row in m.to_row_major().chunks(m.dim()) {
        let cells: Vec<String> = row
            .iter()
            .map(|z| match (z.re == 0.0, z.im == 0.0) {
                (true, true) => "0".into(),
                (false, true) => format!("{:+}", z.re),
                (true, false) => format!("{:+}i", z.im),
                (false, false) => format!("{:+}{:+}i", z.re, z.im),
            })
            .collect();
        let _ = writeln!(out, "  [{}]", cells.iter().map(|c| format!("{c:>6}")).collect::<Vec<_>>().join(" "));
    }
    out
}
