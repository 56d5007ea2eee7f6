use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    clique_amplitude_t4, clique_value_multiplicity, m_t1_closed, multiplicity_histogram, quadruple_clique_count,
};
use crate::certificates::{build_certificate, dt_position_marginals, CertificateError, CertificateSpec};
use crate::dt_walk::{
    build_step_operator, dt_element_t1_closed, dt_element_t4_closed, l1_t3_closed, l1_t3_split, TripleRelations,
};
use crate::graph::{common_neighbors_triple, detect_srg, NotStronglyRegular};
use crate::{Graph, SrgParams, Statistics, WalkError};

/// Version of the verification report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("graph {index} is not strongly regular: {source}")]
    NotStronglyRegular {
        index: usize,
        #[source]
        source: NotStronglyRegular,
    },
    #[error("graph {index} has parameters {found}, but graph 0 has {expected}")]
    ParamsMismatch { index: usize, expected: SrgParams, found: SrgParams },
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// Knobs for [`verify_family_predictions_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Times for the continuous-time controls (also the `dt` of the `L2` grid).
    pub ct_times: Vec<f64>,
    /// Number of grid points in the continuous-time `L2` control.
    pub ct_l2_steps: u32,
    /// Tolerance for the floating-point closed forms.
    pub tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { ct_times: vec![0.5, 1.0, 2.0], ct_l2_steps: 3, tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    /// The statement being checked.
    pub anchor: String,
    pub status: ClaimStatus,
    pub max_deviation: f64,
    pub wall_time_s: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub family: SrgParams,
    pub graphs: usize,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.status == ClaimStatus::Pass)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }
}

struct Outcome {
    pass: bool,
    deviation: f64,
    detail: String,
}

type Check<'a> = Box<dyn Fn() -> Result<Outcome, AnalyticsError> + Send + Sync + 'a>;

struct Job<'a> {
    id: String,
    anchor: String,
    check: Check<'a>,
}

fn within(deviation: f64, tol: f64, detail: String) -> Outcome {
    Outcome { pass: deviation <= tol, deviation, detail }
}

/// Checks that every graph is strongly regular with the same parameters.
fn family_params(family: &[Graph]) -> Result<SrgParams, AnalyticsError> {
    let first = family.first().ok_or(AnalyticsError::EmptyFamily)?;
    let expected = detect_srg(first).map_err(|source| AnalyticsError::NotStronglyRegular { index: 0, source })?;
    for (index, g) in family.iter().enumerate().skip(1) {
        let found = detect_srg(g).map_err(|source| AnalyticsError::NotStronglyRegular { index, source })?;
        if found != expected {
            return Err(AnalyticsError::ParamsMismatch { index, expected, found });
        }
    }
    Ok(expected)
}

fn t1_closed_form(family: &[Graph]) -> Result<Outcome, AnalyticsError> {
    let mut worst = 0.0f64;
    let mut checked = 0u64;
    for g in family {
        let op = build_step_operator(g)?;
        let u = op.dense();
        let arcs = op.basis().arcs();
        for (c, &init) in arcs.iter().enumerate() {
            for (r, &fin) in arcs.iter().enumerate() {
                worst = worst.max((u[(r, c)] - dt_element_t1_closed(g, fin, init)?).abs());
                checked += 1;
            }
        }
    }
    Ok(Outcome { pass: worst == 0.0, deviation: worst, detail: format!("{checked} arc pairs, exact comparison") })
}

fn t1_multiplicities(family: &[Graph], p: &SrgParams) -> Result<Outcome, AnalyticsError> {
    let (transmit, reflect) = m_t1_closed(p);
    let d = p.d as f64;
    let mut worst = 0u64;
    let mut seen = Vec::new();
    for g in family {
        let u = build_step_operator(g)?.dense();
        let h = multiplicity_histogram(u.as_slice(), 1e-10);
        let got = (h.count(2.0 / d), h.count(2.0 / d - 1.0));
        worst = worst.max(got.0.abs_diff(transmit)).max(got.1.abs_diff(reflect));
        seen.push(got);
    }
    seen.dedup();
    Ok(Outcome {
        pass: worst == 0,
        deviation: worst as f64,
        detail: format!("predicted ({transmit}, {reflect}); enumerated {seen:?}"),
    })
}

fn t4_closed_form(family: &[Graph], p: &SrgParams, tol: f64) -> Result<Outcome, AnalyticsError> {
    let mut worst = 0.0f64;
    for g in family {
        let op = build_step_operator(g)?;
        let u4 = op.power(4);
        let arcs = op.basis().arcs();
        for (c, &init) in arcs.iter().enumerate() {
            for (r, &fin) in arcs.iter().enumerate() {
                worst = worst.max((u4[(r, c)] - dt_element_t4_closed(g, p, fin, init)?).abs());
            }
        }
    }
    Ok(within(worst, tol, format!("all arc pairs on {} graphs", family.len())))
}

fn clique_multiplicity(family: &[Graph], p: &SrgParams) -> Result<Outcome, AnalyticsError> {
    let value = clique_amplitude_t4(p);
    let mut worst = 0u64;
    let mut pairs = Vec::new();
    for g in family {
        let u4 = build_step_operator(g)?.power(4);
        let found = multiplicity_histogram(u4.as_slice(), 1e-10).count(value);
        let predicted = clique_value_multiplicity(g, p);
        worst = worst.max(found.abs_diff(predicted));
        pairs.push((found, predicted, quadruple_clique_count(g)));
    }
    let note = if p.lambda == p.mu { "; λ = μ, so ordered 4-cycles also reach this value" } else { "" };
    Ok(Outcome {
        pass: worst == 0,
        deviation: worst as f64,
        detail: format!(
            "clique amplitude {value:.12}; (entries, predicted, ordered 4-cliques) per graph {pairs:?}{note}"
        ),
    })
}

fn l1_t3_closed_form(family: &[Graph], p: &SrgParams, tol: f64) -> Result<Outcome, AnalyticsError> {
    let mut worst = 0.0f64;
    for g in family {
        let n = g.n();
        let op = build_step_operator(g)?;
        let marginals = dt_position_marginals(&op, 3);
        let arcs = op.basis().arcs();
        for (c, &(k, l)) in arcs.iter().enumerate() {
            for i in 0..n {
                worst = worst.max((marginals[c][2 * n + i] - l1_t3_closed(g, p, i, k, l)?).abs());
            }
        }
        // Non-edges (k, l) must give zero.
        for k in 0..n {
            for l in 0..n {
                if !g.adjacent(k, l) {
                    for i in 0..n {
                        worst = worst.max(l1_t3_closed(g, p, i, k, l)?.abs());
                    }
                }
            }
        }
    }
    Ok(within(worst, tol, format!("all (i, k, l) on {} graphs", family.len())))
}

fn l1_t3_split_constancy(family: &[Graph], p: &SrgParams, tol: f64) -> Result<Outcome, AnalyticsError> {
    // Per relation class: range of (simulated - h * triple) and its offset from g.
    let mut classes: BTreeMap<TripleRelations, (f64, f64, f64)> = BTreeMap::new();
    let mut triple_values: BTreeMap<TripleRelations, (usize, usize)> = BTreeMap::new();
    for g in family {
        let n = g.n();
        let op = build_step_operator(g)?;
        let marginals = dt_position_marginals(&op, 3);
        for (c, &(k, l)) in op.basis().arcs().iter().enumerate() {
            for i in 0..n {
                let r = TripleRelations::of(g, i, k, l)?;
                let (g0, h) = l1_t3_split(p, &r)?;
                let triple = common_neighbors_triple(g, i, k, l).map_err(WalkError::from)?;
                let residual = marginals[c][2 * n + i] - h * triple as f64;
                let e = classes.entry(r).or_insert((f64::INFINITY, f64::NEG_INFINITY, 0.0));
                e.0 = e.0.min(residual);
                e.1 = e.1.max(residual);
                e.2 = f64::max(e.2, (residual - g0).abs());
                let t = triple_values.entry(r).or_insert((usize::MAX, 0));
                t.0 = t.0.min(triple);
                t.1 = t.1.max(triple);
            }
        }
    }
    let spread = classes.values().map(|&(lo, hi, _)| hi - lo).fold(0.0, f64::max);
    let offset = classes.values().map(|&(_, _, o)| o).fold(0.0, f64::max);
    let varying = triple_values.values().filter(|(lo, hi)| lo != hi).count();
    let h = l1_t3_split(
        p,
        &TripleRelations { i_eq_k: false, k_eq_l: false, i_eq_l: false, a_ik: false, a_kl: true, a_il: false },
    )?
    .1;
    Ok(within(
        spread.max(offset),
        tol,
        format!(
            "{} relation classes, {varying} with a varying triple count; h = {h:.6e}; max spread {spread:.3e}",
            classes.len()
        ),
    ))
}

fn l1_normalisation(family: &[Graph]) -> Result<Outcome, AnalyticsError> {
    let steps = 4;
    let mut worst = 0.0f64;
    for g in family {
        let n = g.n();
        let op = build_step_operator(g)?;
        for m in dt_position_marginals(&op, steps) {
            for t in 0..steps as usize {
                worst = worst.max((m[t * n..(t + 1) * n].iter().sum::<f64>() - 1.0).abs());
            }
        }
    }
    Ok(within(worst, 1e-10, format!("every initial arc, t = 1..={steps}")))
}

/// All same-family pairs must give bin-for-bin identical certificates.
fn negative_control(family: &[Graph], spec: &CertificateSpec) -> Result<Outcome, AnalyticsError> {
    let certs = family.iter().map(|g| build_certificate(g, spec)).collect::<Result<Vec<_>, _>>()?;
    let mut distinguished = Vec::new();
    let mut worst = 0.0f64;
    for a in 0..certs.len() {
        for b in a + 1..certs.len() {
            if !certs[a].same_bins(&certs[b]) {
                distinguished.push((a, b));
                if let crate::certificates::Comparison::ValueMismatch { difference, .. } =
                    crate::certificates::compare(&certs[a], &certs[b], 0.0)?
                {
                    worst = worst.max(difference.abs());
                } else {
                    worst = f64::INFINITY;
                }
            }
        }
    }
    let pairs = family.len() * (family.len().saturating_sub(1)) / 2;
    Ok(Outcome {
        pass: distinguished.is_empty(),
        deviation: worst,
        detail: format!("{} of {pairs} pairs distinguished {distinguished:?}", distinguished.len()),
    })
}

fn control_specs(opts: &VerifyOptions) -> Vec<(CertificateSpec, &'static str)> {
    let dt = |s: &str| s.parse::<CertificateSpec>().expect("valid built-in spec");
    let mut specs = vec![
        (dt("L0,DT,1,t=1"), "one-step amplitudes and multiplicities depend only on the family"),
        (dt("L0,DT,1,t=2"), "two-step amplitudes and multiplicities depend only on the family"),
        (dt("L0,DT,1,t=3"), "three-step amplitudes and multiplicities depend only on the family"),
        (dt("L1,DT,1,t=1"), "one-step position probabilities depend only on the family"),
        (dt("L1,DT,1,t=2"), "two-step position probabilities depend only on the family"),
        (dt("L2,DT,1,T=1"), "L2 with T = 1 equals L1 at t = 1"),
        (dt("L2,DT,1,T=2"), "L2 with T = 2 sums family-determined L1 values"),
    ];
    for &t in &opts.ct_times {
        let ct = |kind, p, time| CertificateSpec::ct(kind, p, Statistics::Boson, time).expect("valid built-in spec");
        use crate::certificates::{Kind, WalkTime};
        specs.push((
            ct(Kind::L1, 1, WalkTime::Continuous(t)),
            "single-particle continuous walks lie in the span of 1, J and A",
        ));
        specs.push((ct(Kind::L1, 2, WalkTime::Continuous(t)), "two-boson continuous L1 depends only on the family"));
        specs.push((
            ct(Kind::L2, 2, WalkTime::Grid { steps: opts.ct_l2_steps, dt: t }),
            "two-boson continuous L2 depends only on the family",
        ));
    }
    specs
}

/// [`verify_family_predictions_with`] using [`VerifyOptions::default`].
pub fn verify_family_predictions(family: &[Graph]) -> Result<VerificationReport, AnalyticsError> {
    verify_family_predictions_with(family, &VerifyOptions::default())
}

/// Runs the closed-form oracles and the negative controls on one SRG family.
/// Parameter consistency is checked before any walk is run.
pub fn verify_family_predictions_with(
    family: &[Graph],
    opts: &VerifyOptions,
) -> Result<VerificationReport, AnalyticsError> {
    let p = family_params(family)?;
    let tol = opts.tolerance;
    let mut jobs: Vec<Job> = vec![
        Job {
            id: "dt.closed-form.t1".into(),
            anchor: "<ij|U|kl> = A_ij A_kl δ_jk (2/d - δ_il)".into(),
            check: Box::new(|| t1_closed_form(family)),
        },
        Job {
            id: "dt.multiplicity.t1".into(),
            anchor: "M(2/d) = Nμ(N-d-1) + Nλd and M(-1+2/d) = Nd".into(),
            check: Box::new(move || t1_multiplicities(family, &p)),
        },
        Job {
            id: "dt.closed-form.t4".into(),
            anchor: "four-step amplitude from the six pairwise relations and (N,d,λ,μ)".into(),
            check: Box::new(move || t4_closed_form(family, &p, tol)),
        },
        Job {
            id: "dt.clique-multiplicity.t4".into(),
            anchor: "the mutually-adjacent four-step amplitude occurs once per ordered 4-clique (per ordered 4-cycle when λ = μ)".into(),
            check: Box::new(move || clique_multiplicity(family, &p)),
        },
        Job {
            id: "dt.closed-form.l1-t3".into(),
            anchor: "three-step coin-summed probability in closed form".into(),
            check: Box::new(move || l1_t3_closed_form(family, &p, tol)),
        },
        Job {
            id: "dt.l1-t3-split".into(),
            anchor: "three-step probability = g(i,k,l) + h(i,k,l) Σ_j A_ij A_jl A_jk".into(),
            check: Box::new(move || l1_t3_split_constancy(family, &p, tol)),
        },
        Job {
            id: "dt.l1-normalisation".into(),
            anchor: "Σ_i of the coin-summed probabilities is 1".into(),
            check: Box::new(|| l1_normalisation(family)),
        },
    ];
    for (spec, anchor) in control_specs(opts) {
        jobs.push(Job {
            id: format!("control.{spec}"),
            anchor: anchor.into(),
            check: Box::new(move || negative_control(family, &spec)),
        });
    }
    let mut claims = jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let outcome = (job.check)()?;
            Ok(ClaimResult {
                id: job.id.clone(),
                anchor: job.anchor.clone(),
                status: if outcome.pass { ClaimStatus::Pass } else { ClaimStatus::Fail },
                max_deviation: outcome.deviation,
                wall_time_s: start.elapsed().as_secs_f64(),
                detail: outcome.detail,
            })
        })
        .collect::<Result<Vec<_>, AnalyticsError>>()?;
    claims.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerificationReport { schema: REPORT_SCHEMA, family: p, graphs: family.len(), claims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::read_graph6_file;

    fn family(name: &str) -> Vec<Graph> {
        read_graph6_file(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    #[test]
    fn rook_family_passes() {
        let report = verify_family_predictions(&family("srg_16_6_2_2.g6")).unwrap();
        for c in &report.claims {
            assert_eq!(c.status, ClaimStatus::Pass, "{c:?}");
        }
        assert!(report.all_passed());
        assert_eq!(report.claims.len(), 7 + 7 + 9);
        assert!(report.claims.windows(2).all(|w| w[0].id < w[1].id));
        assert!(report.claim("dt.multiplicity.t1").unwrap().detail.contains("(480, 96)"));
    }

    #[test]
    fn corrupted_member_is_rejected() {
        let mut fam = family("srg_16_6_2_2.g6");
        let g = &fam[0];
        let (i, j) = g.edges().next().unwrap();
        let mut edges: Vec<_> = g.edges().filter(|&e| e != (i, j)).collect();
        let k = (0..16).find(|&k| k != i && !g.adjacent(i, k)).unwrap();
        edges.push((i.min(k), i.max(k)));
        fam.push(Graph::from_edges(16, &edges).unwrap());
        assert!(matches!(verify_family_predictions(&fam), Err(AnalyticsError::NotStronglyRegular { index: 2, .. })));
        let mixed = vec![fam[0].clone(), Graph::petersen()];
        assert!(matches!(verify_family_predictions(&mixed), Err(AnalyticsError::ParamsMismatch { index: 1, .. })));
        assert!(matches!(verify_family_predictions(&[]), Err(AnalyticsError::EmptyFamily)));
    }
}
