//! Exact-integer DKP β-matrix representations in 2+1 dimensions.
//!
//! The scalar sector uses 4×4 matrices and the vector sector 6×6 ones. All
//! arithmetic here is on `i64`, so the trilinear algebra check
//!
//! ```text
//! β^μ β^λ β^ν + β^ν β^λ β^μ = β^μ η^{λν} + β^ν η^{λμ}
//! ```
//!
//! is bit-exact. The metric η = diag(+1, −1, −1) indexes (t, x, y).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lorentz metric diagonal, g⁰⁰ = −g¹¹ = −g²² = 1.
pub const METRIC: [i64; 3] = [1, -1, -1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Scalar,
    Vector,
}

impl Sector {
    pub fn dim(self) -> usize {
        match self {
            Sector::Scalar => 4,
            Sector::Vector => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Scalar => "scalar",
            Sector::Vector => "vector",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense square matrix over `i64`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples; unlisted entries are zero.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::zeros(dim);
        for &(r, c, v) in entries {
            m.set(r, c, v);
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Structural(format!(
                "rows must all have length {dim} for a square matrix"
            )));
        }
        Ok(Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn nonzero(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for r in 0..self.dim {
            for c in 0..self.dim {
                let v = self.get(r, c);
                if v != 0 {
                    out.push((r, c, v));
                }
            }
        }
        out
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| match self.get(r, c) {
                    0 => "  .".to_string(),
                    v => format!("{v:3}"),
                })
                .collect();
            writeln!(f, "  [{}]", row.join(""))?;
        }
        Ok(())
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        self.scale(-1)
    }
}

/// The three β matrices of one sector together with the metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaRepresentation {
    pub sector: Sector,
    pub beta: [IntMatrix; 3],
    pub metric: [i64; 3],
}

impl BetaRepresentation {
    /// Matrix dimension of β⁰.
    pub fn dim(&self) -> usize {
        self.beta[0].dim()
    }

    /// Checks the shape invariants: consistent square dimensions matching the
    /// sector, and every entry in {−1, 0, +1}.
    pub fn validate(&self) -> Result<()> {
        self.check_dims()?;
        if self.dim() != self.sector.dim() {
            return Err(Error::Structural(format!(
                "{} sector requires {}x{} matrices, got {}x{}",
                self.sector,
                self.sector.dim(),
                self.sector.dim(),
                self.dim(),
                self.dim()
            )));
        }
        for (mu, b) in self.beta.iter().enumerate() {
            if let Some(v) = b.entries().iter().find(|v| v.abs() > 1) {
                return Err(Error::Structural(format!(
                    "beta^{mu} has entry {v} outside {{-1, 0, 1}}"
                )));
            }
        }
        Ok(())
    }

    fn check_dims(&self) -> Result<()> {
        let d = self.beta[0].dim();
        for (mu, b) in self.beta.iter().enumerate().skip(1) {
            if b.dim() != d {
                return Err(Error::Structural(format!(
                    "beta^{mu} is {}x{} but beta^0 is {d}x{d}",
                    b.dim(),
                    b.dim()
                )));
            }
        }
        Ok(())
    }

    /// Copy with entry `(row, col)` of β^μ replaced by `value`.
    pub fn with_entry(&self, mu: usize, row: usize, col: usize, value: i64) -> Self {
        let mut out = self.clone();
        out.beta[mu].set(row, col, value);
        out
    }
}

/// Builds the representation of the requested sector.
pub fn build_representation(sector: Sector) -> BetaRepresentation {
    let beta = match sector {
        Sector::Scalar => [
            IntMatrix::from_entries(4, &[(0, 3, 1), (3, 0, 1)]),
            IntMatrix::from_entries(4, &[(1, 3, 1), (3, 1, -1)]),
            IntMatrix::from_entries(4, &[(2, 3, 1), (3, 2, -1)]),
        ],
        Sector::Vector => [
            IntMatrix::from_entries(6, &[(0, 3, -1), (1, 4, -1), (3, 0, -1), (4, 1, -1)]),
            IntMatrix::from_entries(6, &[(0, 5, 1), (2, 4, 1), (4, 2, -1), (5, 0, -1)]),
            IntMatrix::from_entries(6, &[(1, 5, 1), (2, 3, -1), (3, 2, 1), (5, 1, -1)]),
        ],
    };
    BetaRepresentation {
        sector,
        beta,
        metric: METRIC,
    }
}

/// One index triple at which the trilinear relation fails, with `L − R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleFailure {
    pub mu: usize,
    pub lambda: usize,
    pub nu: usize,
    pub difference: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub sector: Sector,
    pub triples_checked: usize,
    pub failures: Vec<TripleFailure>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn triples_passed(&self) -> usize {
        self.triples_checked - self.failures.len()
    }
}

fn metric_entry(metric: &[i64; 3], a: usize, b: usize) -> i64 {
    if a == b {
        metric[a]
    } else {
        0
    }
}

/// Evaluates the trilinear relation on all 27 index triples and lists every failure.
pub fn check_algebra(rep: &BetaRepresentation) -> Result<AlgebraReport> {
    rep.check_dims()?;
    let b = &rep.beta;
    let mut failures = Vec::new();
    let mut checked = 0;
    for mu in 0..3 {
        for lambda in 0..3 {
            for nu in 0..3 {
                checked += 1;
                let lhs = &(&(&b[mu] * &b[lambda]) * &b[nu]) + &(&(&b[nu] * &b[lambda]) * &b[mu]);
                let rhs = &b[mu].scale(metric_entry(&rep.metric, lambda, nu))
                    + &b[nu].scale(metric_entry(&rep.metric, lambda, mu));
                let difference = &lhs - &rhs;
                if !difference.is_zero() {
                    failures.push(TripleFailure {
                        mu,
                        lambda,
                        nu,
                        difference,
                    });
                }
            }
        }
    }
    Ok(AlgebraReport {
        sector: rep.sector,
        triples_checked: checked,
        failures,
    })
}

/// η⁰ = 2(β⁰)² − 𝟙, the matrix entering the oscillator coupling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eta0 {
    pub matrix: IntMatrix,
}

impl Eta0 {
    pub fn is_involution(&self) -> bool {
        let n = self.matrix.dim();
        &self.matrix * &self.matrix == IntMatrix::identity(n)
    }

    pub fn commutes_with(&self, m: &IntMatrix) -> bool {
        &self.matrix * m == m * &self.matrix
    }
}

pub fn build_eta0(rep: &BetaRepresentation) -> Eta0 {
    let b0 = &rep.beta[0];
    let sq = b0 * b0;
    Eta0 {
        matrix: &sq.scale(2) - &IntMatrix::identity(b0.dim()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    SignFlip,
    ZeroOut,
}

/// A single-entry edit of one β matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub mu: usize,
    pub row: usize,
    pub col: usize,
    pub kind: PerturbationKind,
}

impl Perturbation {
    pub fn apply(&self, rep: &BetaRepresentation) -> BetaRepresentation {
        let v = rep.beta[self.mu].get(self.row, self.col);
        let new = match self.kind {
            PerturbationKind::SignFlip => -v,
            PerturbationKind::ZeroOut => 0,
        };
        rep.with_entry(self.mu, self.row, self.col, new)
    }
}

/// Every sign flip and every zero-out of a nonzero entry of `rep`.
pub fn single_entry_perturbations(rep: &BetaRepresentation) -> Vec<Perturbation> {
    let mut out = Vec::new();
    for (mu, b) in rep.beta.iter().enumerate() {
        for (row, col, _) in b.nonzero() {
            for kind in [PerturbationKind::SignFlip, PerturbationKind::ZeroOut] {
                out.push(Perturbation { mu, row, col, kind });
            }
        }
    }
    out
}

/// Result of running the algebra check against every single-entry perturbation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSummary {
    pub sector: Sector,
    pub total: usize,
    /// Perturbations that still satisfy the algebra (should be empty).
    pub undetected: Vec<Perturbation>,
}

impl PerturbationSummary {
    pub fn detected(&self) -> usize {
        self.total - self.undetected.len()
    }

    pub fn passed(&self) -> bool {
        self.undetected.is_empty()
    }
}

pub fn perturbation_sweep(rep: &BetaRepresentation) -> Result<PerturbationSummary> {
    let perts = single_entry_perturbations(rep);
    let mut undetected = Vec::new();
    for p in &perts {
        if check_algebra(&p.apply(rep))?.passed() {
            undetected.push(*p);
        }
    }
    Ok(PerturbationSummary {
        sector: rep.sector,
        total: perts.len(),
        undetected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_beta0_has_two_unit_entries() {
        let rep = build_representation(Sector::Scalar);
        assert_eq!(rep.beta[0].nonzero(), vec![(0, 3, 1), (3, 0, 1)]);
    }

    #[test]
    fn vector_beta0_has_four_negative_entries() {
        let rep = build_representation(Sector::Vector);
        assert_eq!(
            rep.beta[0].nonzero(),
            vec![(0, 3, -1), (1, 4, -1), (3, 0, -1), (4, 1, -1)]
        );
    }

    #[test]
    fn scalar_beta2_entries() {
        let rep = build_representation(Sector::Scalar);
        assert_eq!(rep.beta[2].nonzero(), vec![(2, 3, 1), (3, 2, -1)]);
    }

    #[test]
    fn shipped_representations_are_well_formed() {
        for s in [Sector::Scalar, Sector::Vector] {
            let rep = build_representation(s);
            rep.validate().unwrap();
            assert_eq!(rep.dim(), s.dim());
        }
    }

    #[test]
    fn both_sectors_satisfy_all_27_triples() {
        for s in [Sector::Scalar, Sector::Vector] {
            let report = check_algebra(&build_representation(s)).unwrap();
            assert_eq!(report.triples_checked, 27);
            assert!(report.passed(), "{s}: {:?}", report.failures);
        }
    }

    #[test]
    fn flipped_vector_beta1_entry_fails() {
        let rep = build_representation(Sector::Vector);
        assert_eq!(rep.beta[1].get(0, 5), 1);
        let bad = rep.with_entry(1, 0, 5, -1);
        let report = check_algebra(&bad).unwrap();
        assert!(!report.failures.is_empty());
        // β¹β¹β¹ = −β¹ must break: (1,1,1) is among the failures.
        assert!(report
            .failures
            .iter()
            .any(|f| (f.mu, f.lambda, f.nu) == (1, 1, 1)));
    }

    #[test]
    fn mismatched_dimensions_are_structural() {
        let mut rep = build_representation(Sector::Scalar);
        rep.beta[2] = IntMatrix::identity(6);
        assert!(matches!(check_algebra(&rep), Err(Error::Structural(_))));
    }

    #[test]
    fn validate_rejects_out_of_range_entry() {
        let rep = build_representation(Sector::Scalar).with_entry(0, 0, 3, 2);
        assert!(matches!(rep.validate(), Err(Error::Structural(_))));
    }

    #[test]
    fn scalar_eta0_is_diag_plus_minus_minus_plus() {
        let eta = build_eta0(&build_representation(Sector::Scalar));
        let expected = IntMatrix::from_entries(4, &[(0, 0, 1), (1, 1, -1), (2, 2, -1), (3, 3, 1)]);
        assert_eq!(eta.matrix, expected);
        assert_eq!(eta.matrix.transpose(), eta.matrix);
    }

    #[test]
    fn eta0_involution_and_commutes_with_beta0() {
        for s in [Sector::Scalar, Sector::Vector] {
            let rep = build_representation(s);
            let eta = build_eta0(&rep);
            assert!(eta.is_involution(), "{s}");
            assert!(eta.commutes_with(&rep.beta[0]), "{s}");
        }
    }

    #[test]
    fn every_single_entry_perturbation_is_detected() {
        for s in [Sector::Scalar, Sector::Vector] {
            let summary = perturbation_sweep(&build_representation(s)).unwrap();
            assert!(summary.total > 0);
            assert!(summary.passed(), "{s}: {:?}", summary.undetected);
        }
    }

    #[test]
    fn from_rows_rejects_ragged_input() {
        assert!(IntMatrix::from_rows(&[&[1, 0], &[0]]).is_err());
        let m = IntMatrix::from_rows(&[&[0, 1], &[-1, 0]]).unwrap();
        assert_eq!(&m * &m, (&IntMatrix::identity(2)).neg());
    }
}
