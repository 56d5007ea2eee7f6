//! Sorted-multiset graph certificates built from walk evolutions.
//!
//! Values are binned to the nearest multiple of the spec's bin width and kept
//! as sorted `(bin, count)` runs, so large runs of structural zeros cost one
//! entry.

mod build;
mod io;
mod spec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::WalkError;

pub use build::{
    build_certificate, build_l0, build_l1_ct, build_l1_dt, build_l2_ct, build_l2_dt, build_l2tilde_dt2,
    dt_position_marginals, graph_hash, EvolutionMatrix, MAX_CERTIFICATE_LEN,
};
pub use io::{CertificateFile, CERTIFICATE_SCHEMA};
pub use spec::{CertificateSpec, Kind, Walk, WalkTime, DEFAULT_BIN_WIDTH, DEFAULT_TOLERANCE};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("invalid certificate spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("evolution is not unitary: a column norm is off by {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("certificates have different specs ({left} vs {right}) and cannot be compared")]
    SpecMismatch { left: String, right: String },
    #[error("certificate would hold {len} entries, above the ceiling of {max}")]
    TooLarge { len: u128, max: u128 },
    #[error("malformed certificate file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A sorted, binned multiset of nonnegative reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec: CertificateSpec,
    /// SHA-256 of the graph's graph6 encoding, when built from a graph.
    pub graph_hash: Option<String>,
    len: u64,
    runs: Vec<(i64, u64)>,
}

impl Certificate {
    /// Bins, sorts and run-length encodes `values`, then adds `zeros`
    /// additional zero entries.
    pub fn from_values(spec: CertificateSpec, values: &[f64], zeros: u64) -> Self {
        let mut bins: Vec<i64> = values.iter().map(|&v| spec.bin(v)).collect();
        bins.sort_unstable();
        let mut runs: Vec<(i64, u64)> = Vec::new();
        for b in bins {
            match runs.last_mut() {
                Some((last, count)) if *last == b => *count += 1,
                _ => runs.push((b, 1)),
            }
        }
        let mut cert = Certificate { spec, graph_hash: None, len: values.len() as u64, runs };
        cert.add_zeros(zeros);
        cert
    }

    /// Builds from runs, which must be strictly increasing with positive counts.
    pub fn from_runs(spec: CertificateSpec, runs: Vec<(i64, u64)>) -> Result<Self, CertificateError> {
        if runs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(CertificateError::Malformed("runs are not strictly increasing".into()));
        }
        if runs.iter().any(|&(_, c)| c == 0) {
            return Err(CertificateError::Malformed("run with zero count".into()));
        }
        let len = runs.iter().map(|&(_, c)| c).sum();
        Ok(Certificate { spec, graph_hash: None, len, runs })
    }

    fn add_zeros(&mut self, zeros: u64) {
        if zeros == 0 {
            return;
        }
        self.len += zeros;
        match self.runs.binary_search_by_key(&0, |&(b, _)| b) {
            Ok(pos) => self.runs[pos].1 += zeros,
            Err(pos) => self.runs.insert(pos, (0, zeros)),
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `(bin, multiplicity)` runs in increasing order.
    pub fn runs(&self) -> &[(i64, u64)] {
        &self.runs
    }

    /// `(value, multiplicity)` pairs in increasing order.
    pub fn value_runs(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.runs.iter().map(|&(b, c)| (b as f64 * self.spec.bin_width, c))
    }

    /// Number of entries whose bin is the bin of `value`.
    pub fn multiplicity(&self, value: f64) -> u64 {
        let b = self.spec.bin(value);
        self.runs.binary_search_by_key(&b, |&(x, _)| x).map(|p| self.runs[p].1).unwrap_or(0)
    }

    pub fn max_value(&self) -> Option<f64> {
        self.runs.last().map(|&(b, _)| b as f64 * self.spec.bin_width)
    }

    pub fn min_value(&self) -> Option<f64> {
        self.runs.first().map(|&(b, _)| b as f64 * self.spec.bin_width)
    }

    /// Bin-for-bin equality of the multisets (specs are not compared).
    pub fn same_bins(&self, other: &Certificate) -> bool {
        self.runs == other.runs
    }
}

/// Outcome of [`compare`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Comparison {
    Equal,
    LengthMismatch {
        left: u64,
        right: u64,
    },
    /// First sorted position whose values differ by more than the tolerance.
    ValueMismatch {
        index: u64,
        difference: f64,
    },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

/// Elementwise comparison of two sorted certificates.
pub fn compare(a: &Certificate, b: &Certificate, tol: f64) -> Result<Comparison, CertificateError> {
    if a.spec != b.spec {
        return Err(CertificateError::SpecMismatch { left: a.spec.to_string(), right: b.spec.to_string() });
    }
    if a.len != b.len {
        return Ok(Comparison::LengthMismatch { left: a.len, right: b.len });
    }
    let w = a.spec.bin_width;
    let (mut ia, mut ib) = (0, 0);
    let (mut ra, mut rb) = (a.runs.first().map_or(0, |r| r.1), b.runs.first().map_or(0, |r| r.1));
    let mut index = 0u64;
    while ia < a.runs.len() && ib < b.runs.len() {
        let difference = (a.runs[ia].0 - b.runs[ib].0) as f64 * w;
        if difference.abs() > tol {
            return Ok(Comparison::ValueMismatch { index, difference });
        }
        let step = ra.min(rb);
        index += step;
        ra -= step;
        rb -= step;
        if ra == 0 {
            ia += 1;
            ra = a.runs.get(ia).map_or(0, |r| r.1);
        }
        if rb == 0 {
            ib += 1;
            rb = b.runs.get(ib).map_or(0, |r| r.1);
        }
    }
    Ok(Comparison::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> CertificateSpec {
        CertificateSpec::dt(Kind::L1, 1, 1).unwrap()
    }

    #[test]
    fn binning_and_runs() {
        let c = Certificate::from_values(spec(), &[0.5, 0.25, 0.5 + 1e-12, 0.0], 3);
        assert_eq!(c.len(), 7);
        assert_eq!(c.runs(), &[(0, 4), (2_500_000_000, 1), (5_000_000_000, 2)]);
        assert_eq!(c.multiplicity(0.5), 2);
        assert_eq!(c.multiplicity(0.0), 4);
        assert_eq!(c.multiplicity(0.3), 0);
        assert_eq!(c.max_value(), Some(0.5));
        let empty = Certificate::from_values(spec(), &[], 0);
        assert!(empty.is_empty());
    }

    #[test]
    fn from_runs_validates() {
        assert!(Certificate::from_runs(spec(), vec![(1, 1), (1, 2)]).is_err());
        assert!(Certificate::from_runs(spec(), vec![(1, 0)]).is_err());
        assert_eq!(Certificate::from_runs(spec(), vec![(1, 2), (4, 3)]).unwrap().len(), 5);
    }

    #[test]
    fn comparisons() {
        let a = Certificate::from_values(spec(), &[0.1, 0.2, 0.2, 0.7], 0);
        assert_eq!(compare(&a, &a, 1e-8).unwrap(), Comparison::Equal);
        let b = Certificate::from_values(spec(), &[0.1, 0.2, 0.2], 0);
        assert_eq!(compare(&a, &b, 1e-8).unwrap(), Comparison::LengthMismatch { left: 4, right: 3 });
        let c = Certificate::from_values(spec(), &[0.1, 0.2, 0.3, 0.7], 0);
        match compare(&a, &c, 1e-8).unwrap() {
            Comparison::ValueMismatch { index, difference } => {
                assert_eq!(index, 2);
                assert!((difference + 0.1).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        // One bin apart is within the default tolerance.
        let d = Certificate::from_values(spec(), &[0.1, 0.2, 0.2, 0.7 + 1e-10], 0);
        assert!(!a.same_bins(&d));
        assert!(compare(&a, &d, DEFAULT_TOLERANCE).unwrap().is_equal());
        let other = Certificate::from_values(CertificateSpec::dt(Kind::L1, 1, 2).unwrap(), &[0.1], 0);
        assert!(matches!(compare(&a, &other, 1e-8), Err(CertificateError::SpecMismatch { .. })));
    }
}
