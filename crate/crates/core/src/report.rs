//! The full analysis pipeline for one action and its JSON report.
//!
//! Reports are rendered through `serde_json::Value`, whose maps are sorted,
//! with two-space indentation, so equal inputs give byte-identical output.
//! Wall-clock timings are only included on request.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionSpec;
use crate::canonical::{canonical_comparison, canonical_invariants, finite_part_pseudo_reflections, CanonicalComparison};
use crate::error::{Error, Result};
use crate::invariant::{hilbert_basis, hilbert_basis_certificate, FormModule, MonoidBasis};
use crate::piece::invariant_monomials;
use crate::poly::Polynomial;
use crate::pullback::{compare, torsion_free_rank, CokernelRow, Surjectivity, SurjectivityCheck};
use crate::smoothness::{
    codimension_profile, combine_routes, quotient_dimension, shephard_todd_route, singular_locus, RouteVerdict,
    SingularLocus, SmoothnessVerdict,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// How total degrees of forms are matched with monomial degrees.
pub const DEGREE_CONVENTION: &str = "total degree: f*dx_I counts in degree deg(f) + |I|";

/// `max(2 |G|, 12)` for the finite part `G`.
pub fn default_max_degree(action: &ActionSpec) -> u32 {
    let g = action.finite_order().unwrap_or(u64::MAX);
    g.saturating_mul(2).max(12).min(u32::MAX as u64) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormDegrees {
    All,
    Only(usize),
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub max_degree: Option<u32>,
    pub form_degrees: FormDegrees,
    pub timings: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            max_degree: None,
            form_degrees: FormDegrees::All,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    pub max_degree: u32,
    pub form_degrees: Vec<usize>,
    pub hilbert_basis_certificate: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientSummary {
    pub dimension: usize,
    /// `None` when the Hilbert basis is not certified.
    pub singular_locus: Option<SingularLocus>,
    /// Pseudo-reflections of the finite part as residue vectors.
    pub pseudo_reflections: Option<Vec<Vec<u64>>>,
    /// Element counts by fixed-locus codimension (finite actions only).
    pub codimension_profile: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertBasisReport {
    pub generators: Vec<String>,
    pub exponents: Vec<Vec<u32>>,
    pub complete: bool,
    pub search_bound: u32,
    pub certificate_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub degree: u32,
    pub form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub k: usize,
    pub verdict: Surjectivity,
    pub cokernel: Vec<CokernelRow>,
    pub witnesses: Vec<WitnessReport>,
    pub target_generator_degrees: Vec<u32>,
    pub target_certified: bool,
    pub torsion_free_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalReport {
    pub form_degree: usize,
    pub generators: Vec<String>,
    pub forms: Vec<usize>,
    pub toric: Vec<usize>,
    pub matches: bool,
    pub certified: bool,
    /// The finite part has no pseudo-reflections, so the series must agree.
    pub small_group: Option<bool>,
    pub degree_convention: String,
}

/// Consistency checks between independent computations. `None` means the
/// check does not apply or its inputs are not certified.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConsistencyChecks {
    /// Smoothness routes agree.
    pub route_agreement: bool,
    /// Smooth quotients have onto pullbacks in every computed form degree.
    pub smooth_implies_onto: Option<bool>,
    /// On isolated singularities, onto in degree `dim Y - 1` forces onto in
    /// degree `dim Y`.
    pub top_degree_implication: Option<bool>,
    /// Canonical series agree for small finite parts.
    pub canonical_duality: Option<bool>,
}

impl ConsistencyChecks {
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.route_agreement {
            out.push("route_agreement");
        }
        if self.smooth_implies_onto == Some(false) {
            out.push("smooth_implies_onto");
        }
        if self.top_degree_implication == Some(false) {
            out.push("top_degree_implication");
        }
        if self.canonical_duality == Some(false) {
            out.push("canonical_duality");
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InconclusiveFlag {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub engine_version: String,
    pub action: ActionSpec,
    pub bounds: Bounds,
    pub quotient: QuotientSummary,
    pub hilbert_basis: HilbertBasisReport,
    /// Dimensions of the invariant ring by degree.
    pub hilbert_series: Vec<usize>,
    pub surjectivity: Vec<SurjectivityReport>,
    pub smoothness: SmoothnessVerdict,
    pub canonical: Option<CanonicalReport>,
    pub checks: ConsistencyChecks,
    pub caveats: Vec<String>,
    pub inconclusive: Vec<InconclusiveFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl AnalysisReport {
    pub fn is_inconclusive(&self) -> bool {
        !self.inconclusive.is_empty()
    }

    pub fn surjectivity_for(&self, k: usize) -> Option<&SurjectivityReport> {
        self.surjectivity.iter().find(|s| s.k == k)
    }

    pub fn to_json(&self) -> String {
        render_json(self)
    }
}

/// Sorted keys, two-space indentation, trailing newline.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value renders");
    s.push('\n');
    s
}

fn monomial_string(n: usize, e: &[u32]) -> String {
    Polynomial::monomial(n, e.to_vec(), num_rational::BigRational::from_integer(1.into())).to_string()
}

struct Clock {
    on: bool,
    laps: BTreeMap<String, u64>,
    last: Instant,
}

impl Clock {
    fn lap(&mut self, stage: &str) {
        if self.on {
            let now = Instant::now();
            self.laps
                .insert(stage.to_string(), now.duration_since(self.last).as_millis() as u64);
            self.last = now;
        }
    }
}

fn form_degree_list(action: &ActionSpec, fd: FormDegrees) -> Result<Vec<usize>> {
    match fd {
        FormDegrees::All => Ok((1..=action.n).collect()),
        FormDegrees::Only(k) if k <= action.n => Ok(vec![k]),
        FormDegrees::Only(k) => Err(Error::Precondition(format!(
            "form degree {} exceeds the number of coordinates {}",
            k, action.n
        ))),
    }
}

fn check_one(action: &ActionSpec, hb: &MonoidBasis, k: usize, bound: u32) -> Result<SurjectivityCheck> {
    let target = FormModule::compute(action, hb, k, true, bound)?;
    compare(action, hb, &target)
}

/// Runs the full pipeline.
pub fn analyze(action: &ActionSpec, options: &AnalysisOptions) -> Result<AnalysisReport> {
    let mut clock = Clock {
        on: options.timings,
        laps: BTreeMap::new(),
        last: Instant::now(),
    };
    let d = options.max_degree.unwrap_or_else(|| default_max_degree(action));
    if d < 1 {
        return Err(Error::Precondition("max degree must be at least 1".into()));
    }
    let requested = form_degree_list(action, options.form_degrees)?;
    let mut inconclusive = Vec::new();
    let mut caveats = Vec::new();

    let hb = hilbert_basis(action, d)?;
    let certificate = hilbert_basis_certificate(action);
    if !hb.complete {
        inconclusive.push(InconclusiveFlag {
            stage: "hilbert_basis".into(),
            reason: format!(
                "searched to degree {} but generators may occur up to degree {}",
                hb.search_bound, certificate
            ),
        });
    }
    let dim_y = quotient_dimension(action);
    let hilbert_series: Vec<usize> = (0..=d).map(|deg| invariant_monomials(action, deg).len()).collect();
    clock.lap("invariants");

    let mut ks: Vec<usize> = requested.iter().copied().chain(1..=dim_y).collect();
    ks.sort_unstable();
    ks.dedup();
    let checks: Vec<SurjectivityCheck> = ks
        .par_iter()
        .map(|&k| check_one(action, &hb, k, d))
        .collect::<Result<_>>()?;
    let by_k: BTreeMap<usize, &SurjectivityCheck> = checks.iter().map(|c| (c.k, c)).collect();
    let mut surjectivity = Vec::new();
    for &k in &requested {
        let c = by_k[&k];
        if let Surjectivity::Inconclusive { reason } = &c.verdict {
            inconclusive.push(InconclusiveFlag {
                stage: format!("surjectivity k={}", k),
                reason: reason.clone(),
            });
        }
        surjectivity.push(SurjectivityReport {
            k,
            verdict: c.verdict.clone(),
            cokernel: c.table.rows.clone(),
            witnesses: c
                .witnesses
                .iter()
                .map(|w| WitnessReport {
                    degree: w.degree,
                    form: w.form.to_string(),
                })
                .collect(),
            target_generator_degrees: c.target_generator_degrees.clone(),
            target_certified: c.target_certified,
            torsion_free_rank: torsion_free_rank(action, k)?,
        });
    }
    clock.lap("surjectivity");

    let route_checks: Vec<SurjectivityCheck> = (1..=dim_y).map(|k| by_k[&k].clone()).collect();
    let (st, st_reason) = shephard_todd_route(action)?;
    let mut smoothness = combine_routes(st, &hb, &route_checks);
    smoothness.reasons.extend(st_reason);
    let pseudo = match finite_part_pseudo_reflections(action) {
        Ok(p) => Some(p.into_iter().map(|g| g.exponents).collect::<Vec<_>>()),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    let profile = if action.torus_rank == 0 && pseudo.is_some() {
        Some(codimension_profile(action)?)
    } else {
        None
    };
    if smoothness.verdict == RouteVerdict::Inconclusive && !inconclusive.iter().any(|f| f.stage == "smoothness") {
        inconclusive.push(InconclusiveFlag {
            stage: "smoothness".into(),
            reason: if smoothness.reasons.is_empty() {
                "a smoothness route is inconclusive".into()
            } else {
                smoothness.reasons.join("; ")
            },
        });
    }
    let locus = if hb.complete {
        Some(singular_locus(action, &hb)?)
    } else {
        None
    };
    if let Some(l) = &locus {
        if !l.smooth && !l.isolated {
            caveats.push(format!(
                "singular locus has dimension {}; verdicts are global, not a codimension-local certificate",
                l.dimension.unwrap_or(0)
            ));
        }
    }
    if action.torus_rank >= 2 {
        caveats.push("form generators for torus rank 2 or more are certified by stabilization, not by a proven bound".into());
    }
    clock.lap("smoothness");

    let canonical = match canonical_report(action, d, &pseudo) {
        Ok(c) => {
            if !c.certified {
                inconclusive.push(InconclusiveFlag {
                    stage: "canonical".into(),
                    reason: format!("top-form generators not certified through degree {}", d),
                });
            }
            Some(c)
        }
        Err(Error::Resource(reason)) => {
            inconclusive.push(InconclusiveFlag {
                stage: "canonical".into(),
                reason,
            });
            None
        }
        Err(e) => return Err(e),
    };
    clock.lap("canonical");

    let checks = consistency_checks(&smoothness, &checks, locus.as_ref(), dim_y, canonical.as_ref());
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        engine_version: ENGINE_VERSION.to_string(),
        action: action.clone(),
        bounds: Bounds {
            max_degree: d,
            form_degrees: requested,
            hilbert_basis_certificate: certificate,
        },
        quotient: QuotientSummary {
            dimension: dim_y,
            singular_locus: locus,
            pseudo_reflections: pseudo,
            codimension_profile: profile,
        },
        hilbert_basis: HilbertBasisReport {
            generators: hb.generators.iter().map(|g| monomial_string(action.n, g)).collect(),
            exponents: hb.generators.clone(),
            complete: hb.complete,
            search_bound: hb.search_bound,
            certificate_degree: hb.certificate_degree,
        },
        hilbert_series,
        surjectivity,
        smoothness,
        canonical,
        checks,
        caveats,
        inconclusive,
        timings_ms: options.timings.then_some(clock.laps),
    })
}

fn canonical_report(action: &ActionSpec, d: u32, pseudo: &Option<Vec<Vec<u64>>>) -> Result<CanonicalReport> {
    let module = canonical_invariants(action, d)?;
    let CanonicalComparison {
        form_degree,
        forms,
        toric,
        matches,
        certified,
    } = canonical_comparison(action, d)?;
    Ok(CanonicalReport {
        form_degree,
        generators: module.generators.iter().map(|g| g.to_string()).collect(),
        forms,
        toric,
        matches,
        certified,
        small_group: pseudo.as_ref().map(|p| p.is_empty()),
        degree_convention: DEGREE_CONVENTION.into(),
    })
}

fn consistency_checks(
    smoothness: &SmoothnessVerdict,
    checks: &[SurjectivityCheck],
    locus: Option<&SingularLocus>,
    dim_y: usize,
    canonical: Option<&CanonicalReport>,
) -> ConsistencyChecks {
    let onto = |k: usize| {
        checks
            .iter()
            .find(|c| c.k == k)
            .and_then(|c| c.verdict.is_surjective())
    };
    let smooth_implies_onto = (smoothness.monoid == RouteVerdict::Smooth).then(|| {
        checks
            .iter()
            .all(|c| c.table.rows.iter().all(|r| r.cokernel_dim == 0))
    });
    let top_degree_implication = match (locus, dim_y) {
        (Some(l), n) if l.isolated && n >= 2 => match (onto(n - 1), onto(n)) {
            (Some(true), Some(top)) => Some(top),
            (Some(false), Some(_)) => Some(true),
            _ => None,
        },
        _ => None,
    };
    let canonical_duality = canonical.and_then(|c| {
        (c.small_group == Some(true) && c.certified).then_some(c.matches)
    });
    ConsistencyChecks {
        route_agreement: smoothness.agreement,
        smooth_implies_onto,
        top_degree_implication,
        canonical_duality,
    }
}
