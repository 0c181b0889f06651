//! One-step resolution: the two classification predicates, the per-surface
//! analyzer that decides chart smoothness geometrically, the exhaustive
//! cross-check of the two, and the iterated normalized blowup.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::cfrac::{evaluate, hilbert_basis, hj_expand, ContinuedFraction};
use crate::charts::{
    nash_chart_smoothness, normalized_chart_is_smooth, semigroup_chart, SaturationReport,
};
use crate::error::{Error, Result};
use crate::lattice::{normal_form, Cone, Vector};
use crate::newton::{
    localization_cone, localization_cone_primitivized, log_jacobian_generators, newton_vertices,
    newton_vertices_hull, surface_cone, Characteristic,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Normalized,
    Nash,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Normalized => "normalized",
            Mode::Nash => "nash",
        }
    }
}

fn term<T: Scalar>(cf: &ContinuedFraction<T>, i: usize) -> i64 {
    // Terms too large for i64 can never match the small literal patterns.
    cf.a(i).to_i64().unwrap_or(i64::MAX)
}

fn classification_pattern<T: Scalar>(
    cf: &ContinuedFraction<T>,
    middle: &[i64],
    pairs: &[(i64, i64)],
) -> bool {
    let r = cf.len();
    let a = |i| term(cf, i);
    match r {
        2 => a(2) == 2,
        3 => a(2) == 2 && a(3) == 2,
        4 => a(2) == 2 && a(4) == 2 && middle.contains(&a(3)),
        _ => a(2) == 2 && a(r) == 2 && (3..=r - 2).all(|i| pairs.contains(&(a(i), a(i + 1)))),
    }
}

/// Normalized Nash blowup is smooth: `[1,2]`, `[1,2,2]`, `[1,2,a,2]` with
/// `a` in 2..=4, or `[1,2,...,2]` whose pairs from `a_3` to `a_{r-1}` are
/// among `(2,2), (2,3), (2,4), (3,2), (4,2)`.
pub fn theorem_a_predicate<T: Scalar>(cf: &ContinuedFraction<T>) -> bool {
    classification_pattern(cf, &[2, 3, 4], &[(2, 2), (2, 3), (2, 4), (3, 2), (4, 2)])
}

/// Nash blowup is smooth (characteristic zero): same shape with pairs
/// `(2,2), (2,3), (3,2)` and middle term 2 or 3 when `r = 4`.
pub fn theorem_b_predicate<T: Scalar>(cf: &ContinuedFraction<T>) -> bool {
    classification_pattern(cf, &[2, 3], &[(2, 2), (2, 3), (3, 2)])
}

pub fn predicate<T: Scalar>(cf: &ContinuedFraction<T>, mode: Mode) -> bool {
    match mode {
        Mode::Normalized => theorem_a_predicate(cf),
        Mode::Nash => theorem_b_predicate(cf),
    }
}

/// A surface given by its cone, its normal-form fraction, or its continued
/// fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceInput<T> {
    Cone(Cone<T>),
    Fraction(T, T),
    ContinuedFraction(ContinuedFraction<T>),
}

/// `(P, Q)` and, unless the surface is smooth, its continued fraction.
fn resolve_input<T: Scalar>(
    input: &SurfaceInput<T>,
) -> Result<(T, T, Option<ContinuedFraction<T>>)> {
    let (p, q) = match input {
        SurfaceInput::Cone(cone) => {
            let nf = normal_form(cone);
            (nf.p, nf.q)
        }
        SurfaceInput::Fraction(p, q) => (p.clone(), q.clone()),
        SurfaceInput::ContinuedFraction(cf) => {
            let (p, q) = evaluate(cf);
            return Ok((p, q, Some(cf.clone())));
        }
    };
    match hj_expand(&p, &q) {
        Ok(cf) => Ok((p, q, Some(cf))),
        Err(Error::Smooth) => Ok((p, q, None)),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartSummary<T> {
    Normalized {
        gen1: Vector<T>,
        gen2: Vector<T>,
    },
    Nash {
        minimal_generators: BTreeSet<Vector<T>>,
        localization: (Vector<T>, Vector<T>),
        saturation: SaturationReport<T>,
        /// Saturated with a smooth normalization.
        smooth_by_saturation: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexReport<T> {
    pub index: usize,
    pub point: Vector<T>,
    pub chart: ChartSummary<T>,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport<T> {
    pub p: T,
    pub q: T,
    /// Absent for a smooth surface.
    pub cf: Option<ContinuedFraction<T>>,
    pub mode: Mode,
    pub char_p: Characteristic,
    pub vertices: Vec<VertexReport<T>>,
    pub all_smooth: bool,
    pub predicate_verdict: bool,
    pub consistent: bool,
    /// The criterion vertex set equals the geometric hull vertex set in
    /// `char_p`, and every localization cone from the parity formulas equals
    /// the primitivized raw cone.
    pub vertices_cross_checked: bool,
    /// In Nash mode, both smoothness routes agree at every vertex.
    pub routes_agree: bool,
    pub note: Option<String>,
}

impl<T> AnalysisReport<T> {
    pub fn fully_consistent(&self) -> bool {
        self.consistent && self.vertices_cross_checked && self.routes_agree
    }
}

pub fn analyze<T: Scalar>(
    input: &SurfaceInput<T>,
    mode: Mode,
    char_p: Characteristic,
) -> Result<AnalysisReport<T>> {
    if mode == Mode::Nash && !char_p.is_zero() {
        return Err(Error::NashRequiresCharZero);
    }
    let (p, q, cf) = resolve_input(input)?;
    let Some(cf) = cf else {
        return Ok(AnalysisReport {
            p,
            q,
            cf: None,
            mode,
            char_p,
            vertices: Vec::new(),
            all_smooth: true,
            predicate_verdict: true,
            consistent: true,
            vertices_cross_checked: true,
            routes_agree: true,
            note: Some("already smooth".to_string()),
        });
    };

    let criterion = newton_vertices(&cf);
    let generators = log_jacobian_generators(&hilbert_basis(&cf), char_p);
    let hull = newton_vertices_hull(&generators, &surface_cone(&cf))?;
    let mut vertices_cross_checked =
        hull == criterion.points.iter().cloned().collect::<BTreeSet<_>>();
    let mut routes_agree = true;

    let mut vertices = Vec::with_capacity(criterion.indices.len());
    for (&i, point) in criterion.indices.iter().zip(&criterion.points) {
        let loc = localization_cone(&cf, i)?;
        vertices_cross_checked &= localization_cone_primitivized(&cf, i)? == loc;
        let (chart, smooth) = match mode {
            Mode::Normalized => {
                let smooth = normalized_chart_is_smooth(&loc);
                (
                    ChartSummary::Normalized {
                        gen1: loc.gen1,
                        gen2: loc.gen2,
                    },
                    smooth,
                )
            }
            Mode::Nash => {
                let chart = semigroup_chart(&cf, i)?;
                let routes = nash_chart_smoothness(&chart);
                routes_agree &= routes.agree();
                let summary = ChartSummary::Nash {
                    minimal_generators: chart.minimal_generators,
                    localization: (loc.gen1, loc.gen2),
                    saturation: routes.saturation,
                    smooth_by_saturation: routes.by_saturation,
                };
                (summary, routes.by_generators)
            }
        };
        vertices.push(VertexReport {
            index: i,
            point: point.clone(),
            chart,
            smooth,
        });
    }

    let all_smooth = vertices.iter().all(|v| v.smooth);
    let predicate_verdict = predicate(&cf, mode);
    Ok(AnalysisReport {
        p,
        q,
        cf: Some(cf),
        mode,
        char_p,
        vertices,
        all_smooth,
        predicate_verdict,
        consistent: all_smooth == predicate_verdict,
        vertices_cross_checked,
        routes_agree,
        note: None,
    })
}

/// Every surface whose continued fraction has length at most `max_r` and
/// terms at most `max_a`, in lexicographic order of `(r, a_2, ..., a_r)`.
///
/// Length one stands for `[1] = 1/1`, whose cone `{(1,0),(1,1)}` is the
/// smooth surface; it is listed first.
pub fn enumerate_surfaces(max_r: usize, max_a: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if max_r >= 1 {
        out.push(vec![1]);
    }
    for r in 2..=max_r {
        let mut terms = vec![1u32];
        terms.extend(std::iter::repeat_n(2, r - 1));
        if max_a < 2 {
            break;
        }
        loop {
            out.push(terms.clone());
            // Odometer, last position fastest.
            let mut k = r - 1;
            while k >= 1 && terms[k] == max_a {
                terms[k] = 2;
                k -= 1;
            }
            if k == 0 {
                break;
            }
            terms[k] += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationSummary {
    pub max_r: usize,
    pub max_a: u32,
    pub mode: Mode,
    pub total_checked: usize,
    /// Surfaces whose geometric verdict disagrees with the predicate.
    pub mismatches: Vec<Vec<u32>>,
    /// Surfaces where an internal two-route cross-check failed.
    pub cross_check_failures: Vec<Vec<u32>>,
    /// How many surfaces were geometrically smooth after one step.
    pub smooth_count: usize,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.cross_check_failures.is_empty()
    }
}

fn surface_input<T: Scalar>(terms: &[u32]) -> Result<SurfaceInput<T>> {
    if terms == [1] {
        return Ok(SurfaceInput::Fraction(T::zero(), T::one()));
    }
    let terms = terms
        .iter()
        .map(|&a| T::from_u32(a).expect("small term"))
        .collect();
    Ok(SurfaceInput::ContinuedFraction(ContinuedFraction::new(
        terms,
    )?))
}

/// Runs [`analyze`] on every enumerated surface with `workers` threads
/// (`0` lets the pool decide) and records every disagreement.
pub fn verify_theorems<T: Scalar>(
    max_r: usize,
    max_a: u32,
    mode: Mode,
    workers: usize,
) -> Result<VerificationSummary> {
    let surfaces = enumerate_surfaces(max_r, max_a);
    let check = |terms: &Vec<u32>| -> Result<(bool, bool, bool)> {
        let report = analyze::<T>(&surface_input(terms)?, mode, Characteristic::ZERO)?;
        Ok((
            report.consistent,
            report.vertices_cross_checked && report.routes_agree,
            report.all_smooth,
        ))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    let results: Vec<(bool, bool, bool)> =
        pool.install(|| surfaces.par_iter().map(check).collect::<Result<Vec<_>>>())?;

    let mut summary = VerificationSummary {
        max_r,
        max_a,
        mode,
        total_checked: surfaces.len(),
        mismatches: Vec::new(),
        cross_check_failures: Vec::new(),
        smooth_count: 0,
    };
    for (terms, (consistent, cross_checked, smooth)) in surfaces.into_iter().zip(results) {
        if !consistent {
            summary.mismatches.push(terms.clone());
        }
        if !cross_checked {
            summary.cross_check_failures.push(terms);
        }
        summary.smooth_count += smooth as usize;
    }
    Ok(summary)
}

/// One node of the iterated normalized Nash blowup: a surface in normal
/// form and the normal forms of its singular charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceNode<T> {
    pub p: T,
    pub q: T,
    /// Only singular charts appear; smooth ones end the branch.
    pub children: Vec<TraceNode<T>>,
    /// Expansion stopped here because the step cap was reached.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTrace<T> {
    pub root: TraceNode<T>,
    /// Blowups needed until every chart is smooth (or the cap).
    pub depth: usize,
    pub complete: bool,
}

fn normalized_children<T: Scalar>(cf: &ContinuedFraction<T>) -> Result<Vec<(T, T)>> {
    let vertices = newton_vertices(cf);
    let mut out = Vec::new();
    for &i in &vertices.indices {
        let loc = localization_cone(cf, i)?;
        let nf = normal_form(&loc.cone());
        if !nf.is_smooth() {
            out.push((nf.p, nf.q));
        }
    }
    Ok(out)
}

/// Repeats the normalized Nash blowup on every singular chart until all
/// charts are smooth or `max_steps` blowups have been applied.
pub fn iterate_normalized<T: Scalar>(
    input: &SurfaceInput<T>,
    max_steps: usize,
) -> Result<ResolutionTrace<T>> {
    let (p, q, _) = resolve_input(input)?;
    let mut memo: HashMap<(T, T), Vec<(T, T)>> = HashMap::new();
    let (root, depth, complete) = expand_node(p, q, max_steps, &mut memo)?;
    Ok(ResolutionTrace {
        root,
        depth,
        complete,
    })
}

fn expand_node<T: Scalar>(
    p: T,
    q: T,
    budget: usize,
    memo: &mut HashMap<(T, T), Vec<(T, T)>>,
) -> Result<(TraceNode<T>, usize, bool)> {
    if q.is_one() {
        return Ok((
            TraceNode {
                p,
                q,
                children: Vec::new(),
                truncated: false,
            },
            0,
            true,
        ));
    }
    if budget == 0 {
        return Ok((
            TraceNode {
                p,
                q,
                children: Vec::new(),
                truncated: true,
            },
            0,
            false,
        ));
    }
    let key = (p.clone(), q.clone());
    let child_labels = match memo.get(&key) {
        Some(c) => c.clone(),
        None => {
            let c = normalized_children(&hj_expand(&p, &q)?)?;
            memo.insert(key, c.clone());
            c
        }
    };
    let mut children = Vec::with_capacity(child_labels.len());
    let mut depth = 1;
    let mut complete = true;
    for (cp, cq) in child_labels {
        let (node, d, c) = expand_node(cp, cq, budget - 1, memo)?;
        depth = depth.max(d + 1);
        complete &= c;
        children.push(node);
    }
    Ok((
        TraceNode {
            p,
            q,
            children,
            truncated: false,
        },
        depth,
        complete,
    ))
}
