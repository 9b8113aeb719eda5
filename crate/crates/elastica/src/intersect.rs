//! Self-intersection detection for closed polylines.
//!
//! Two routines share one segment-pair predicate and one event ordering:
//!
//! * [`self_intersections`] hashes segments into a uniform grid whose cell
//!   size is the largest segment bounding box, so any two segments whose
//!   boxes overlap share a cell; candidate pairs are then sorted and
//!   deduplicated before the exact test runs.
//! * [`self_intersections_bruteforce`] tests every non-adjacent pair.
//!
//! Because the candidate set of the grid is a superset of the intersecting
//! pairs and both routines visit pairs in the same lexicographic order,
//! their reports are identical, which the test suite asserts exactly.
//!
//! Events carry curve parameters in `[0, 1)` (vertex `i` at `i/n`), the
//! crossing point, and a tangential flag set when the normalized tangent
//! determinant falls below the caller's threshold. Events at (almost) the
//! same point are merged into clusters; a cluster's multiplicity is the
//! number of separated parameter groups passing through it, so an ordinary
//! crossing has multiplicity 2 and a triple point 3.

use std::collections::HashMap;

use crate::curve::DiscreteCurve;
use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Relative tolerance deciding when two segments count as parallel and
/// when a parallel pair counts as collinear.
const PARALLEL_EPS: f64 = 1e-12;

/// Cluster merge radius as a fraction of total curve length.
const MERGE_TOL_FACTOR: f64 = 1e-6;

/// One crossing between two non-adjacent segments.
#[derive(Clone, Copy, Debug)]
pub struct IntersectionEvent {
    /// Parameter of the earlier pass, in `[0, 1)`; always below `t2`.
    pub t1: f64,
    /// Parameter of the later pass.
    pub t2: f64,
    pub point: Vec2,
    /// True when the tangents are closer to parallel than the threshold.
    pub tangential: bool,
}

/// A merged crossing location with the number of curve passes through it.
#[derive(Clone, Copy, Debug)]
pub struct PointMultiplicity {
    pub point: Vec2,
    pub multiplicity: usize,
}

/// All self-intersections of one curve.
#[derive(Clone, Debug, Default)]
pub struct IntersectionReport {
    pub events: Vec<IntersectionEvent>,
    pub clusters: Vec<PointMultiplicity>,
}

impl IntersectionReport {
    /// True when the curve is embedded as far as the segment tests can see.
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn has_transversal(&self) -> bool {
        self.events.iter().any(|e| !e.tangential)
    }
}

/// Exact intersection test for the non-adjacent segment pair `(i, j)`,
/// `i < j`. Endpoint touches count; a collinear overlap is reported as a
/// single tangential event at the overlap midpoint.
fn segment_pair_event(
    c: &DiscreteCurve,
    i: usize,
    j: usize,
    threshold: f64,
) -> Option<IntersectionEvent> {
    let n = c.len();
    let v = c.vertices();
    let p = v[i];
    let r = v[(i + 1) % n] - p;
    let q = v[j];
    let s = v[(j + 1) % n] - q;
    let rn = r.norm();
    let sn = s.norm();
    let denom = r.cross(s);
    let pq = q - p;
    if denom.abs() > PARALLEL_EPS * rn * sn {
        let u = pq.cross(s) / denom;
        let w = pq.cross(r) / denom;
        if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&w) {
            return None;
        }
        let tangential = (denom / (rn * sn)).abs() < threshold;
        return Some(make_event(i, j, u, w, p + r * u, tangential, n));
    }
    // Parallel segments: either disjoint lines or a collinear overlap.
    let line_dist = pq.cross(r).abs() / rn;
    if line_dist > PARALLEL_EPS * rn.max(sn).max(pq.norm()) {
        return None;
    }
    // Arc-length coordinates along segment i's line; segment i is [0, rn].
    let b0 = pq.dot(r) / rn;
    let b1 = b0 + s.dot(r) / rn;
    let lo = b0.min(b1).max(0.0);
    let hi = b0.max(b1).min(rn);
    if lo > hi {
        return None;
    }
    let mid = 0.5 * (lo + hi);
    let point = p + r * (mid / rn);
    let w = ((point - q).dot(s) / (sn * sn)).clamp(0.0, 1.0);
    Some(make_event(i, j, mid / rn, w, point, true, n))
}

fn make_event(
    i: usize,
    j: usize,
    u: f64,
    w: f64,
    point: Vec2,
    tangential: bool,
    n: usize,
) -> IntersectionEvent {
    IntersectionEvent {
        t1: (i as f64 + u) / n as f64,
        t2: (j as f64 + w) / n as f64,
        point,
        tangential,
    }
}

/// True when segments `i < j` of an `n`-gon share a vertex by adjacency.
fn adjacent(i: usize, j: usize, n: usize) -> bool {
    j == i + 1 || (i == 0 && j == n - 1)
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Parameter(format!(
            "tangential threshold must lie in (0, 1), got {threshold}"
        )));
    }
    Ok(())
}

fn report_from_pairs<I>(c: &DiscreteCurve, pairs: I, threshold: f64) -> IntersectionReport
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let n = c.len();
    let events: Vec<IntersectionEvent> = pairs
        .into_iter()
        .filter(|&(i, j)| !adjacent(i, j, n))
        .filter_map(|(i, j)| segment_pair_event(c, i, j, threshold))
        .collect();
    let clusters = cluster_events(&events, c.length(), n);
    IntersectionReport { events, clusters }
}

/// Grid-accelerated self-intersection report.
pub fn self_intersections(c: &DiscreteCurve, threshold: f64) -> Result<IntersectionReport> {
    check_threshold(threshold)?;
    let n = c.len();
    let v = c.vertices();
    // Cell size = largest segment bounding-box extent, so a segment's box
    // spans at most 2x2 cells and any two overlapping boxes share a cell.
    let mut cell = 0.0f64;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        cell = cell.max((a.x - b.x).abs()).max((a.y - b.y).abs());
    }
    let inv = 1.0 / cell;
    let mut grid: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let x0 = (a.x.min(b.x) * inv).floor() as i64;
        let x1 = (a.x.max(b.x) * inv).floor() as i64;
        let y0 = (a.y.min(b.y) * inv).floor() as i64;
        let y1 = (a.y.max(b.y) * inv).floor() as i64;
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                grid.entry((cx, cy)).or_default().push(i as u32);
            }
        }
    }
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for bucket in grid.values() {
        for (k, &a) in bucket.iter().enumerate() {
            for &b in &bucket[k + 1..] {
                pairs.push(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(report_from_pairs(
        c,
        pairs.into_iter().map(|(a, b)| (a as usize, b as usize)),
        threshold,
    ))
}

/// All-pairs reference intersector; the grid routine must match it exactly.
pub fn self_intersections_bruteforce(
    c: &DiscreteCurve,
    threshold: f64,
) -> Result<IntersectionReport> {
    check_threshold(threshold)?;
    let n = c.len();
    let pairs = (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
    Ok(report_from_pairs(c, pairs, threshold))
}

/// Merges events into spatial clusters and counts, per cluster, the
/// circularly separated groups of curve parameters passing through it.
fn cluster_events(events: &[IntersectionEvent], length: f64, n: usize) -> Vec<PointMultiplicity> {
    let tol = MERGE_TOL_FACTOR * length;
    let mut anchors: Vec<Vec2> = Vec::new();
    let mut params: Vec<Vec<f64>> = Vec::new();
    for ev in events {
        let idx = anchors
            .iter()
            .position(|a| a.dist(ev.point) <= tol)
            .unwrap_or_else(|| {
                anchors.push(ev.point);
                params.push(Vec::new());
                anchors.len() - 1
            });
        params[idx].push(ev.t1);
        params[idx].push(ev.t2);
    }
    // Parameters within 1.5 segment widths of each other belong to the
    // same pass through the cluster point.
    let gap_tol = 1.5 / n as f64;
    anchors
        .into_iter()
        .zip(params)
        .map(|(point, mut ts)| {
            ts.sort_by(|a, b| a.partial_cmp(b).expect("parameters are finite"));
            let mut separations = 0usize;
            for k in 0..ts.len() {
                let gap = if k + 1 < ts.len() {
                    ts[k + 1] - ts[k]
                } else {
                    ts[0] + 1.0 - ts[k]
                };
                if gap > gap_tol {
                    separations += 1;
                }
            }
            PointMultiplicity {
                point,
                multiplicity: separations.max(1),
            }
        })
        .collect()
}

/// Discrete version of the chord-over-parameter-distance infimum: the
/// minimum of `|v_i - v_j| / d(i/n, j/n)` over vertex pairs at circular
/// index distance at least 2, with `d` the metric on `[0, 1)`. Positive
/// for embedded curves; near zero when distant parameters almost meet.
pub fn embeddedness_ratio(c: &DiscreteCurve) -> f64 {
    let n = c.len();
    let v = c.vertices();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 2..n {
            let didx = (j - i).min(n - (j - i));
            if didx < 2 {
                continue;
            }
            let ratio = v[i].dist(v[j]) * n as f64 / didx as f64;
            if ratio < best {
                best = ratio;
            }
        }
    }
    best
}
