//! Row equations with a shared neutral factor, their crossbreeding
//! (elimination of the neutral factor between two rows), the resulting
//! equation families, and the commutativity checks.
//!
//! Every row has the shape A + lambda B = D with A a product of two moduli,
//! B and D single moduli, and lambda the neutral factor shared by all rows
//! of one constant set. Eliminating lambda between rows a and b gives
//!
//! ```text
//! A_a B_b + D_b B_a = A_b B_a + D_a B_b
//! ```
//!
//! which holds exactly whenever both rows do; numerically the residual is
//! bounded by the locus tolerances alone. Factor lists are symbolic
//! (function tag, multiplier, slot, point), so structural identities are
//! decidable and every numeric value is recomputed fresh, never cached.

use crate::hybrid::HybridConstants;
use crate::levelset::{self, LocusError, LocusPoint};
use crate::specfun::{complex_pair, Complex, FunctionTag, SpecFunError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default cn squared modulus when a family does not specify one.
pub const DEFAULT_K_SQ: f64 = 0.5;
/// Default Bessel order when a family does not specify one.
pub const DEFAULT_P: i32 = 0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrossbreedError {
    #[error("residue {0} outside 1..=4")]
    BadResidue(u8),
    #[error("row index {0} is 1-based")]
    BadRow(u32),
    #[error("rows must differ")]
    SameRow,
    #[error("neutral factors differ: {a} vs {b}")]
    NeutralFactorMismatch { a: f64, b: f64 },
    #[error("locus slot {slot} was built for target {got:e}, expected {want:e}")]
    ProvenanceMismatch { slot: usize, want: f64, got: f64 },
    #[error("rows {a} and {b} have different residues ({qa} vs {qb})")]
    ResidueMismatch { a: u32, b: u32, qa: u8, qb: u8 },
    #[error("locus failure: {0}")]
    Locus(#[from] LocusError),
    #[error("evaluator failure: {0}")]
    SpecFun(#[from] SpecFunError),
}

/// Simple keeps one function order for every row; Cyclic rotates the order
/// left by one with each row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Simple,
    Cyclic,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Simple => "simple",
            Scheme::Cyclic => "cyclic",
        })
    }
}

/// Function order for residue q: the base tuple (zeta, gamma, cn, besselj)
/// rotated left by q - 1, with explicit parameters.
pub fn row_assignment_with(q: u8, k_sq: f64, p: i32) -> Result<[FunctionTag; 4], CrossbreedError> {
    if !(1..=4).contains(&q) {
        return Err(CrossbreedError::BadResidue(q));
    }
    let base = [
        FunctionTag::Zeta,
        FunctionTag::Gamma,
        FunctionTag::JacobiCn { k_sq },
        FunctionTag::BesselJ { p },
    ];
    let mut out = [base[0]; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = base[(i + (q as usize - 1)) % 4];
    }
    Ok(out)
}

/// [`row_assignment_with`] at the default parameters.
pub fn row_assignment(q: u8) -> Result<[FunctionTag; 4], CrossbreedError> {
    row_assignment_with(q, DEFAULT_K_SQ, DEFAULT_P)
}

/// Identity of one row equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowKey {
    pub scheme: Scheme,
    pub row: u32,
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.scheme, self.row)
    }
}

/// One symbolic factor |F(n s)|: everything needed to recompute the modulus
/// fresh and to compare factors structurally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorRef {
    pub tag: FunctionTag,
    /// Multiplier (= parent row index).
    pub n: u32,
    /// Which constant the factor realizes (1..=4).
    pub slot: u8,
    #[serde(with = "complex_pair")]
    pub s: Complex,
}

impl FactorRef {
    pub fn evaluate(&self) -> Result<f64, SpecFunError> {
        crate::specfun::eval_abs(self.tag, self.n, self.s)
    }

    /// Structural label: function kind and constant slot, with the row index
    /// deliberately excluded so families related by index relabeling compare
    /// equal.
    fn label(&self) -> (u8, u8) {
        (self.tag.kind(), self.slot)
    }
}

fn from_locus(p: &LocusPoint, slot: u8) -> FactorRef {
    FactorRef {
        tag: p.tag,
        n: p.n,
        slot,
        s: p.s,
    }
}

/// One row A + lambda B = D with its factor provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowEquation {
    pub key: RowKey,
    /// Residue class 1..=4 of the function rotation.
    pub residue_q: u8,
    pub points: [LocusPoint; 4],
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub lambda: f64,
    pub a_factors: [FactorRef; 2],
    pub b_factor: FactorRef,
    pub d_factor: FactorRef,
}

impl RowEquation {
    /// |A + lambda B - D|.
    pub fn residual(&self) -> f64 {
        (self.a + self.lambda * self.b - self.d).abs()
    }
}

/// Assemble a row equation from the four loci built for the same scheme,
/// row and constant set.
pub fn build_row_equation(
    scheme: Scheme,
    row: u32,
    h: &HybridConstants,
    loci: &[LocusPoint; 4],
) -> Result<RowEquation, CrossbreedError> {
    if row == 0 {
        return Err(CrossbreedError::BadRow(row));
    }
    let targets = h.targets();
    for (i, p) in loci.iter().enumerate() {
        if p.target_c != targets[i] {
            return Err(CrossbreedError::ProvenanceMismatch {
                slot: i + 1,
                want: targets[i],
                got: p.target_c,
            });
        }
    }
    let residue_q = match scheme {
        Scheme::Simple => 1,
        Scheme::Cyclic => ((row - 1) % 4 + 1) as u8,
    };
    Ok(RowEquation {
        key: RowKey { scheme, row },
        residue_q,
        points: loci.clone(),
        a: loci[0].achieved * loci[1].achieved,
        b: loci[2].achieved,
        d: loci[3].achieved,
        lambda: h.lambda,
        a_factors: [from_locus(&loci[0], 1), from_locus(&loci[1], 2)],
        b_factor: from_locus(&loci[2], 3),
        d_factor: from_locus(&loci[3], 4),
    })
}

/// The crossbred identity of two rows: factor lists on both sides plus the
/// freshly evaluated values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaEquation {
    pub parents: [RowKey; 2],
    /// Unordered residue pair, e.g. "q1xq4" (the shape class); "q=2" style
    /// for same-residue external pairs.
    pub class: String,
    /// Cyclic scheme only: "internal" when both rows lie in one cell of
    /// four consecutive rows, "external" across cells. Report metadata; the
    /// distinction carries no separate mathematics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction: Option<String>,
    pub lhs_factors: [Vec<FactorRef>; 2],
    pub rhs_factors: [Vec<FactorRef>; 2],
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub residual: f64,
}

impl MetaEquation {
    /// Structural signature: the multiset of term labels on each side,
    /// ignoring row indices.
    pub fn signature(&self) -> Vec<Vec<(u8, u8)>> {
        let mut sides: Vec<Vec<(u8, u8)>> = self
            .lhs_factors
            .iter()
            .chain(self.rhs_factors.iter())
            .map(|term| {
                let mut labels: Vec<_> = term.iter().map(FactorRef::label).collect();
                labels.sort_unstable();
                labels
            })
            .collect();
        sides.sort();
        sides
    }
}

/// Pure elimination algebra on the row numbers (A, B, D) of two rows
/// sharing a neutral factor: returns (lhs, rhs) of the crossbred identity.
pub fn eliminate(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64) {
    let (aa, ba, da) = a;
    let (ab, bb, db) = b;
    (aa * bb + db * ba, ab * ba + da * bb)
}

fn product(fs: &[FactorRef]) -> Result<f64, SpecFunError> {
    let mut acc = 1.0;
    for f in fs {
        acc *= f.evaluate()?;
    }
    Ok(acc)
}

/// Crossbreed two rows sharing the neutral factor.
pub fn crossbreed(a: &RowEquation, b: &RowEquation) -> Result<MetaEquation, CrossbreedError> {
    if a.key == b.key {
        return Err(CrossbreedError::SameRow);
    }
    if a.lambda != b.lambda {
        return Err(CrossbreedError::NeutralFactorMismatch {
            a: a.lambda,
            b: b.lambda,
        });
    }
    let lhs_factors = [
        vec![a.a_factors[0], a.a_factors[1], b.b_factor],
        vec![b.d_factor, a.b_factor],
    ];
    let rhs_factors = [
        vec![b.a_factors[0], b.a_factors[1], a.b_factor],
        vec![a.d_factor, b.b_factor],
    ];
    // fresh evaluation of every factor; the row caches are never trusted
    let lhs_value = product(&lhs_factors[0])? + product(&lhs_factors[1])?;
    let rhs_value = product(&rhs_factors[0])? + product(&rhs_factors[1])?;
    let class = if a.key.scheme == Scheme::Simple {
        "simple".to_string()
    } else if a.residue_q == b.residue_q {
        format!("q={}", a.residue_q)
    } else {
        let (lo, hi) = if a.residue_q <= b.residue_q {
            (a.residue_q, b.residue_q)
        } else {
            (b.residue_q, a.residue_q)
        };
        format!("q{lo}xq{hi}")
    };
    // cell metadata for the cyclic scheme: rows 4c+1..4c+4 form cell c, and
    // a pair is an internal interaction when both rows share a cell
    let interaction = if a.key.scheme == Scheme::Cyclic {
        Some(if (a.key.row - 1) / 4 == (b.key.row - 1) / 4 {
            "internal".to_string()
        } else {
            "external".to_string()
        })
    } else {
        None
    };
    Ok(MetaEquation {
        parents: [a.key, b.key],
        class,
        interaction,
        lhs_factors,
        rhs_factors,
        lhs_value,
        rhs_value,
        residual: (lhs_value - rhs_value).abs(),
    })
}

/// Locus and row-equation cache for one constant set; rows are built once
/// (write-once) and read afterwards.
#[derive(Debug, Clone)]
pub struct FamilyContext<'a> {
    h: &'a HybridConstants,
    k_sq: f64,
    p: i32,
    rows: BTreeMap<RowKey, RowEquation>,
}

impl<'a> FamilyContext<'a> {
    pub fn new(h: &'a HybridConstants) -> Self {
        Self::with_params(h, DEFAULT_K_SQ, DEFAULT_P)
    }

    pub fn with_params(h: &'a HybridConstants, k_sq: f64, p: i32) -> Self {
        FamilyContext {
            h,
            k_sq,
            p,
            rows: BTreeMap::new(),
        }
    }

    pub fn constants(&self) -> &HybridConstants {
        self.h
    }

    pub fn row(&mut self, scheme: Scheme, row: u32) -> Result<&RowEquation, CrossbreedError> {
        let key = RowKey { scheme, row };
        if !self.rows.contains_key(&key) {
            let loci = levelset::build_locus_family_with(self.h, scheme, row, self.k_sq, self.p)?;
            let eq = build_row_equation(scheme, row, self.h, &loci)?;
            self.rows.insert(key, eq);
        }
        Ok(self.rows.get(&key).expect("inserted above"))
    }

    /// Read-only lookup of an already built row (for parallel consumers).
    pub fn cached_row(&self, scheme: Scheme, row: u32) -> Option<&RowEquation> {
        self.rows.get(&RowKey { scheme, row })
    }

    pub fn cross(
        &mut self,
        scheme: Scheme,
        row_a: u32,
        row_b: u32,
    ) -> Result<MetaEquation, CrossbreedError> {
        let a = self.row(scheme, row_a)?.clone();
        let b = self.row(scheme, row_b)?.clone();
        crossbreed(&a, &b)
    }

    /// Commutative-law value built from two Simple rows.
    pub fn k_value(&mut self, m: u32, n: u32) -> Result<f64, CrossbreedError> {
        Ok(self.cross_parts(Scheme::Simple, m, n)?.0)
    }

    /// Commutative-law value for two Cyclic rows of the same residue.
    pub fn g_value(&mut self, row_a: u32, row_b: u32) -> Result<f64, CrossbreedError> {
        let qa = ((row_a - 1) % 4 + 1) as u8;
        let qb = ((row_b - 1) % 4 + 1) as u8;
        if qa != qb {
            return Err(CrossbreedError::ResidueMismatch {
                a: row_a,
                b: row_b,
                qa,
                qb,
            });
        }
        Ok(self.cross_parts(Scheme::Cyclic, row_a, row_b)?.0)
    }

    /// The two-term combination shared by both commutative laws:
    /// term1 = (both A factors of row a) * (B factor of row b),
    /// term2 = (D factor of row b) * (B factor of row a).
    fn cross_parts(
        &mut self,
        scheme: Scheme,
        row_a: u32,
        row_b: u32,
    ) -> Result<(f64, [Vec<FactorRef>; 2]), CrossbreedError> {
        let a = self.row(scheme, row_a)?.clone();
        let b = self.row(scheme, row_b)?.clone();
        let terms = [
            vec![a.a_factors[0], a.a_factors[1], b.b_factor],
            vec![b.d_factor, a.b_factor],
        ];
        let value = product(&terms[0])? + product(&terms[1])?;
        Ok((value, terms))
    }

    /// Re-evaluate every cached locus point; used by the symmetry report to
    /// catch stale or corrupted samples.
    fn revalidate_rows(&self, keys: &[RowKey]) -> Result<bool, CrossbreedError> {
        for key in keys {
            if let Some(row) = self.rows.get(key) {
                for p in &row.points {
                    let fresh = p.revalidate()?;
                    if (fresh - p.achieved).abs() > 1e-10 * p.target_c {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    K,
    G,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryEntry {
    pub pair: (u32, u32),
    pub forward: f64,
    pub reverse: f64,
    pub rel_deviation: f64,
    pub structural_equal: bool,
    pub points_valid: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub kind: SymmetryKind,
    pub entries: Vec<SymmetryEntry>,
    pub max_rel_deviation: f64,
    pub all_structural: bool,
    pub all_points_valid: bool,
}

fn term_multiset(terms: &[Vec<FactorRef>; 2]) -> Vec<Vec<(u8, u8)>> {
    let mut sides: Vec<Vec<(u8, u8)>> = terms
        .iter()
        .map(|t| {
            let mut labels: Vec<_> = t.iter().map(FactorRef::label).collect();
            labels.sort_unstable();
            labels
        })
        .collect();
    sides.sort();
    sides
}

/// Evaluate both orders of each index pair and report the numeric deviation,
/// the structural factor-multiset comparison, and a fresh revalidation of
/// every involved locus point.
pub fn check_symmetry(
    ctx: &mut FamilyContext<'_>,
    kind: SymmetryKind,
    grid: &[(u32, u32)],
) -> Result<SymmetryReport, CrossbreedError> {
    let scheme = match kind {
        SymmetryKind::K => Scheme::Simple,
        SymmetryKind::G => Scheme::Cyclic,
    };
    let mut entries = Vec::with_capacity(grid.len());
    for &(m, n) in grid {
        if kind == SymmetryKind::G {
            let (qa, qb) = (((m - 1) % 4 + 1) as u8, ((n - 1) % 4 + 1) as u8);
            if qa != qb {
                return Err(CrossbreedError::ResidueMismatch { a: m, b: n, qa, qb });
            }
        }
        let (fw, tfw) = ctx.cross_parts(scheme, m, n)?;
        let (rv, trv) = ctx.cross_parts(scheme, n, m)?;
        let keys = [RowKey { scheme, row: m }, RowKey { scheme, row: n }];
        let points_valid = ctx.revalidate_rows(&keys)?;
        entries.push(SymmetryEntry {
            pair: (m, n),
            forward: fw,
            reverse: rv,
            rel_deviation: (fw - rv).abs() / fw.abs().max(rv.abs()).max(1e-300),
            structural_equal: term_multiset(&tfw) == term_multiset(&trv),
            points_valid,
        });
    }
    let max_rel_deviation = entries.iter().map(|e| e.rel_deviation).fold(0.0, f64::max);
    let all_structural = entries.iter().all(|e| e.structural_equal);
    let all_points_valid = entries.iter().all(|e| e.points_valid);
    Ok(SymmetryReport {
        kind,
        entries,
        max_rel_deviation,
        all_structural,
        all_points_valid,
    })
}

/// A pair that failed during family generation; reported, not fatal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFailure {
    pub pair: (u32, u32),
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyReport {
    pub scheme: Scheme,
    pub equations: Vec<MetaEquation>,
    pub failures: Vec<PairFailure>,
}

/// Build loci, row equations and crossbreeds for every pair; failed pairs
/// are collected, not fatal.
pub fn generate_family(
    ctx: &mut FamilyContext<'_>,
    scheme: Scheme,
    pairs: &[(u32, u32)],
) -> FamilyReport {
    let mut equations = Vec::with_capacity(pairs.len());
    let mut failures = Vec::new();
    for &(ra, rb) in pairs {
        match ctx.cross(scheme, ra, rb) {
            Ok(eq) => equations.push(eq),
            Err(e) => failures.push(PairFailure {
                pair: (ra, rb),
                error: e.to_string(),
            }),
        }
    }
    FamilyReport {
        scheme,
        equations,
        failures,
    }
}

// ---------------------------------------------------------------------------
// reference transcriptions of the six within-cell identities
// ---------------------------------------------------------------------------

/// A factor as printed in the hand-transcribed reference rendering:
/// (function kind, multiplier, point slot subscript, point row superscript).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorSig {
    pub kind: u8,
    pub multiplier: u32,
    pub slot: u8,
    pub sup: u32,
}

impl FactorSig {
    pub fn symbol(&self) -> &'static str {
        match self.kind {
            0 => "zeta",
            1 => "gamma",
            2 => "cn",
            _ => "besselj",
        }
    }
}

/// One disagreement between the derived canonical form and the reference
/// transcription.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptionDiff {
    pub pair: (u32, u32),
    pub side: String,
    pub term: usize,
    pub printed: Vec<FactorSig>,
    pub canonical: Vec<FactorSig>,
}

const Z: u8 = 0;
const GA: u8 = 1;
const CN: u8 = 2;
const J: u8 = 3;

fn sig(kind: u8, multiplier: u32, slot: u8, sup: u32) -> FactorSig {
    FactorSig {
        kind,
        multiplier,
        slot,
        sup,
    }
}

/// Hand-transcribed reference renderings of the six crossbreeds of rows
/// 1..4 (cell 0), kept verbatim including their typographical slips; the
/// derived canonical forms are diffed against these.
#[allow(clippy::type_complexity)]
fn reference_forms() -> Vec<((u32, u32), [Vec<FactorSig>; 4])> {
    vec![
        (
            (1, 2),
            [
                vec![sig(Z, 1, 1, 1), sig(GA, 1, 2, 1), sig(J, 2, 3, 2)],
                vec![sig(Z, 2, 4, 2), sig(CN, 1, 3, 1)],
                vec![sig(GA, 2, 1, 2), sig(CN, 2, 2, 2), sig(CN, 1, 3, 1)],
                vec![sig(J, 1, 4, 1), sig(J, 2, 3, 2)],
            ],
        ),
        (
            (1, 3),
            [
                vec![sig(Z, 1, 1, 1), sig(Z, 3, 3, 3), sig(GA, 1, 2, 1)],
                vec![sig(GA, 3, 4, 3), sig(CN, 1, 3, 1)],
                vec![sig(CN, 1, 3, 1), sig(CN, 3, 1, 3), sig(J, 3, 2, 3)],
                vec![sig(J, 1, 4, 1), sig(Z, 3, 3, 3)],
            ],
        ),
        (
            (1, 4),
            [
                vec![sig(Z, 1, 1, 1), sig(GA, 1, 2, 1), sig(GA, 4, 3, 4)],
                vec![sig(CN, 1, 3, 1), sig(CN, 4, 4, 4)],
                vec![sig(Z, 4, 2, 4), sig(J, 4, 1, 4), sig(CN, 1, 3, 1)],
                vec![sig(J, 1, 4, 1), sig(GA, 4, 3, 4)],
            ],
        ),
        (
            (2, 3),
            [
                vec![sig(Z, 3, 3, 3), sig(GA, 2, 1, 2), sig(CN, 2, 2, 2)],
                // printed slip: the gamma factor carries s_3^4 instead of s_4^3
                vec![sig(GA, 3, 3, 4), sig(J, 2, 3, 2)],
                vec![sig(CN, 3, 1, 3), sig(J, 2, 3, 2), sig(J, 3, 2, 3)],
                vec![sig(Z, 3, 3, 3), sig(Z, 2, 4, 2)],
            ],
        ),
        (
            (2, 4),
            [
                vec![sig(GA, 2, 1, 2), sig(GA, 4, 3, 4), sig(CN, 2, 2, 2)],
                vec![sig(CN, 4, 4, 4), sig(J, 2, 3, 2)],
                vec![sig(J, 2, 3, 2), sig(J, 4, 1, 4), sig(Z, 4, 2, 4)],
                // printed slip: zeta in place of the gamma factor
                vec![sig(Z, 2, 4, 2), sig(Z, 4, 3, 4)],
            ],
        ),
        (
            (3, 4),
            [
                vec![sig(CN, 3, 1, 3), sig(J, 3, 2, 3), sig(GA, 4, 3, 4)],
                vec![sig(CN, 4, 4, 4), sig(Z, 3, 3, 3)],
                vec![sig(J, 4, 1, 4), sig(Z, 3, 3, 3), sig(Z, 4, 2, 4)],
                // printed slip: the gamma factor carries s_3^4 instead of s_4^3
                vec![sig(GA, 3, 3, 4), sig(GA, 4, 3, 4)],
            ],
        ),
    ]
}

fn canonical_sigs(term: &[FactorRef]) -> Vec<FactorSig> {
    let mut v: Vec<FactorSig> = term
        .iter()
        .map(|f| sig(f.tag.kind(), f.n, f.slot, f.n))
        .collect();
    v.sort();
    v
}

/// Diff the derived within-cell equations (rows 1..4) against the reference
/// transcriptions. The generator derives canonical forms from the
/// elimination algebra; this records where the transcription disagrees.
pub fn transcription_diffs(equations: &[MetaEquation]) -> Vec<TranscriptionDiff> {
    let mut out = Vec::new();
    for ((ra, rb), printed_terms) in reference_forms() {
        let Some(eq) = equations.iter().find(|e| {
            e.parents[0].row == ra
                && e.parents[1].row == rb
                && e.parents[0].scheme == Scheme::Cyclic
        }) else {
            continue;
        };
        let canonical: [Vec<FactorSig>; 4] = [
            canonical_sigs(&eq.lhs_factors[0]),
            canonical_sigs(&eq.lhs_factors[1]),
            canonical_sigs(&eq.rhs_factors[0]),
            canonical_sigs(&eq.rhs_factors[1]),
        ];
        for (idx, printed) in printed_terms.iter().enumerate() {
            let mut printed_sorted = printed.clone();
            printed_sorted.sort();
            if printed_sorted != canonical[idx] {
                out.push(TranscriptionDiff {
                    pair: (ra, rb),
                    side: if idx < 2 { "lhs" } else { "rhs" }.to_string(),
                    term: idx % 2 + 1,
                    printed: printed_sorted,
                    canonical: canonical[idx].clone(),
                });
            }
        }
    }
    out
}
