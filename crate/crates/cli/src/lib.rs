//! Library side of the `qwalk` command: family scans, certificate caching and
//! report types. The binary in `main.rs` is a thin argument layer over this.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use qwalk::analytics::AnalyticsError;
use qwalk::certificates::{build_certificate, compare, Certificate, CertificateError, CertificateSpec};
use qwalk::graph::{detect_srg, read_graph6_file, CatalogError, NotStronglyRegular};
use qwalk::{Graph, SrgParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Version of the scan report layout.
pub const SCAN_SCHEMA: u32 = 1;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "QWALK_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("graph {index} is not strongly regular: {source}")]
    NotStronglyRegular {
        index: usize,
        #[source]
        source: NotStronglyRegular,
    },
    #[error("mixed-family catalog: graph {index} is {found}, graph 0 is {expected}")]
    MixedFamily { index: usize, expected: SrgParams, found: SrgParams },
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("graph index {index} out of range for a catalog of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid {var}: {value:?} is not a positive integer")]
    BadThreadCount { var: &'static str, value: String },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Sizes the global rayon pool from `QWALK_THREADS` when it is set.
pub fn init_thread_pool() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = match value.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(CliError::BadThreadCount { var: THREADS_ENV, value }),
    };
    // A pool that is already initialised keeps its size; not an error for us.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Loads a catalog and checks that every member shares one SRG parameter set.
pub fn load_family(path: impl AsRef<Path>) -> Result<(Vec<Graph>, SrgParams), CliError> {
    let graphs = read_graph6_file(path)?;
    let params = family_params(&graphs)?;
    Ok((graphs, params))
}

pub fn family_params(graphs: &[Graph]) -> Result<SrgParams, CliError> {
    let first = graphs.first().ok_or(CliError::EmptyCatalog)?;
    let expected = detect_srg(first).map_err(|source| CliError::NotStronglyRegular { index: 0, source })?;
    for (index, g) in graphs.iter().enumerate().skip(1) {
        let found = detect_srg(g).map_err(|source| CliError::NotStronglyRegular { index, source })?;
        if found != expected {
            return Err(CliError::MixedFamily { index, expected, found });
        }
    }
    Ok(expected)
}

/// Certificates keyed by `(graph index, spec)`, each computed at most once.
#[derive(Debug, Default)]
pub struct CertificateCache {
    entries: BTreeMap<(usize, String), Certificate>,
}

impl CertificateCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize, spec: &CertificateSpec) -> Option<&Certificate> {
        self.entries.get(&(index, spec.to_string()))
    }

    /// Computes the missing certificates of `spec` for all graphs in parallel.
    pub fn fill(&mut self, graphs: &[Graph], spec: &CertificateSpec) -> Result<(), CertificateError> {
        let key = spec.to_string();
        let missing: Vec<usize> =
            (0..graphs.len()).filter(|&i| !self.entries.contains_key(&(i, key.clone()))).collect();
        let built = missing
            .par_iter()
            .map(|&i| build_certificate(&graphs[i], spec).map(|c| (i, c)))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, c) in built {
            self.entries.insert((i, key.clone()), c);
        }
        Ok(())
    }
}

/// Pair counts for one spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecOutcome {
    pub spec: String,
    pub undistinguished: usize,
    /// Index pairs `(a, b)`, `a < b`, whose certificates compare equal.
    pub undistinguished_pairs: Vec<(usize, usize)>,
}

/// Deterministic part of a scan: contains no timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: u32,
    pub family: SrgParams,
    pub graphs: usize,
    pub pairs: usize,
    pub tolerance: f64,
    pub specs: Vec<SpecOutcome>,
}

impl ScanReport {
    pub fn outcome(&self, spec: &str) -> Option<&SpecOutcome> {
        self.specs.iter().find(|o| o.spec == spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecTiming {
    pub spec: String,
    pub seconds: f64,
}

/// Run-dependent information kept apart from the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub threads: usize,
    pub timings: Vec<SpecTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub report: ScanReport,
    pub metadata: ScanMetadata,
}

/// Reads a catalog and scans it.
pub fn scan_family(path: impl AsRef<Path>, specs: &[CertificateSpec], tol: f64) -> Result<ScanOutput, CliError> {
    let (graphs, _) = load_family(path)?;
    scan_graphs(&graphs, specs, tol)
}

/// Compares every pair of graphs under each spec. Certificates are built once
/// per `(graph, spec)`; comparisons run after all of a spec's certificates exist.
pub fn scan_graphs(graphs: &[Graph], specs: &[CertificateSpec], tol: f64) -> Result<ScanOutput, CliError> {
    let family = family_params(graphs)?;
    let mut cache = CertificateCache::new();
    let mut outcomes = Vec::with_capacity(specs.len());
    let mut timings = Vec::with_capacity(specs.len());
    for spec in specs {
        let start = Instant::now();
        cache.fill(graphs, spec)?;
        let mut pairs = Vec::new();
        for a in 0..graphs.len() {
            for b in a + 1..graphs.len() {
                let (ca, cb) = (cache.get(a, spec).expect("filled"), cache.get(b, spec).expect("filled"));
                if compare(ca, cb, tol)?.is_equal() {
                    pairs.push((a, b));
                }
            }
        }
        outcomes.push(SpecOutcome {
            spec: spec.to_string(),
            undistinguished: pairs.len(),
            undistinguished_pairs: pairs,
        });
        timings.push(SpecTiming { spec: spec.to_string(), seconds: start.elapsed().as_secs_f64() });
    }
    let n = graphs.len();
    Ok(ScanOutput {
        report: ScanReport {
            schema: SCAN_SCHEMA,
            family,
            graphs: n,
            pairs: n * n.saturating_sub(1) / 2,
            tolerance: tol,
            specs: outcomes,
        },
        metadata: ScanMetadata { threads: rayon::current_num_threads(), timings },
    })
}
