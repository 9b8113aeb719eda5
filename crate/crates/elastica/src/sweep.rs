//! Seeded families of closed test curves for threshold sweeps.
//!
//! Each family produces, per sample index, a deterministic curve (the
//! random family derives a fresh stream cipher state from the seed and the
//! index, so samples are reproducible and order-independent):
//!
//! * `Fenchel`: the tangent-extended-arc construction over a range of
//!   opening angles; never embedded, total curvature `4 pi - 4 beta`.
//! * `FigureEightPerturbed`: the figure eight plus low-order Fourier
//!   perturbations in the vertex normal direction, rejection-sampled so a
//!   transversal crossing survives; probes the sharpness of the threshold
//!   from above.
//! * `Lens`: two unit-radius circular arcs glued at corners; embedded
//!   convex control family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::curve::{self, DiscreteCurve, Verdict};
use crate::error::{Error, Result};
use crate::intersect;
use crate::prototypes::{figure_eight_curve, Parametrization};
use crate::vec2::Vec2;

/// Curve family to sweep over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepFamily {
    Fenchel,
    FigureEightPerturbed,
    Lens,
}

/// Result row for one sweep sample.
#[derive(Clone, Debug)]
pub struct SweepSample {
    pub index: usize,
    /// Human-readable family parameter, e.g. `beta=0.7250`.
    pub label: String,
    /// Bending energy times length.
    pub product: f64,
    pub total_curvature: f64,
    pub embedded: bool,
    pub verdict: Verdict,
}

/// Attempts per random sample before giving up on re-establishing the
/// family invariant (a surviving crossing).
const MAX_ATTEMPTS: usize = 100;

/// Boundary of the intersection of two unit disks whose centers are
/// `2 cos(psi)` apart: two arcs of opening `2 psi` meeting at the corners
/// `(+-sin psi, 0)`. Convex and embedded for `psi` in `(0, pi/2)`.
pub fn lens_curve(psi: f64, n: usize) -> Result<DiscreteCurve> {
    if !(psi > 0.0 && psi < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Parameter(format!(
            "lens half-opening must lie strictly between 0 and pi/2, got {psi}"
        )));
    }
    if n < 8 {
        return Err(Error::Parameter(format!(
            "lens sampling needs n >= 8, got {n}"
        )));
    }
    let upper_center = Vec2::new(0.0, -psi.cos());
    let lower_center = Vec2::new(0.0, psi.cos());
    let arc = 2.0 * psi;
    let total = 2.0 * arc;
    let pts = (0..n)
        .map(|i| {
            let s = total * i as f64 / n as f64;
            if s < arc {
                let phi = (std::f64::consts::FRAC_PI_2 - psi) + s;
                upper_center + Vec2::new(phi.cos(), phi.sin())
            } else {
                let phi = (-std::f64::consts::FRAC_PI_2 - psi) + (s - arc);
                lower_center + Vec2::new(phi.cos(), phi.sin())
            }
        })
        .collect();
    DiscreteCurve::new(pts)
}

/// Figure eight with a random normal-direction perturbation built from
/// Fourier modes 1 through 5, scaled to a peak amplitude between 1% and
/// 5% of the length. Draws are rejected until a transversal
/// self-intersection survives, so the sample stays in the non-embedded
/// class whose product the threshold bounds from below.
pub fn perturbed_figure_eight<R: Rng>(n: usize, rng: &mut R) -> Result<DiscreteCurve> {
    let base = figure_eight_curve(n, Parametrization::ArcLength, 1)?;
    let length = base.length();
    let normals = vertex_normals(&base);
    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<(f64, f64)> = (0..5)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let target = rng.gen_range(0.01..0.05) * length;
        let raw: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, (a, b))| {
                        let w = TAU * (k + 1) as f64 * t;
                        a * w.cos() + b * w.sin()
                    })
                    .sum()
            })
            .collect();
        let peak = raw.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
        if peak == 0.0 {
            continue;
        }
        let scale = target / peak;
        let pts: Vec<Vec2> = base
            .vertices()
            .iter()
            .zip(raw.iter().zip(&normals))
            .map(|(p, (r, nrm))| *p + *nrm * (r * scale))
            .collect();
        let Ok(curve) = DiscreteCurve::new(pts) else {
            continue;
        };
        let report = intersect::self_intersections(&curve, curve::TANGENTIAL_THRESHOLD)
            .expect("the default tangential threshold is valid");
        if report.has_transversal() {
            return Ok(curve);
        }
    }
    Err(Error::SamplingFailed(format!(
        "no perturbation with a surviving crossing in {MAX_ATTEMPTS} attempts"
    )))
}

/// Discrete unit vertex normals (left-hand perpendicular of the edge
/// bisector).
fn vertex_normals(c: &DiscreteCurve) -> Vec<Vec2> {
    let n = c.len();
    let v = c.vertices();
    (0..n)
        .map(|i| {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let in_dir = (v[i] - prev).normalized();
            let out_dir = (next - v[i]).normalized();
            let bis = in_dir + out_dir;
            let len = bis.norm();
            if len < 1e-12 {
                out_dir.perp()
            } else {
                bis.perp() * (1.0 / len)
            }
        })
        .collect()
}

/// Deterministic per-sample generator: the same `(family, index, samples,
/// seed, n)` always yields the same sample, independent of evaluation
/// order, so sweeps can run concurrently.
pub fn sweep_sample(
    family: SweepFamily,
    index: usize,
    samples: usize,
    seed: u64,
    n: usize,
) -> Result<SweepSample> {
    if samples == 0 {
        return Err(Error::Parameter("a sweep needs at least 1 sample".into()));
    }
    if index >= samples {
        return Err(Error::Parameter(format!(
            "sample index {index} out of range for {samples} samples"
        )));
    }
    let frac = (index as f64 + 0.5) / samples as f64;
    let (label, curve) = match family {
        SweepFamily::Fenchel => {
            let beta = 0.15 + (1.5 - 0.15) * frac;
            (format!("beta={beta:.4}"), curve::fenchel_example(beta, n)?)
        }
        SweepFamily::Lens => {
            let psi = 0.15 + (1.4 - 0.15) * frac;
            (format!("psi={psi:.4}"), lens_curve(psi, n)?)
        }
        SweepFamily::FigureEightPerturbed => {
            let mut rng = sample_rng(seed, index);
            let curve = perturbed_figure_eight(n, &mut rng)?;
            (format!("seed={seed} index={index}"), curve)
        }
    };
    let report = curve::liyau_check(&curve);
    Ok(SweepSample {
        index,
        label,
        product: report.product,
        total_curvature: curve.total_curvature(),
        embedded: report.embedded,
        verdict: report.verdict,
    })
}

/// Runs a whole sweep in index order.
pub fn sweep(
    family: SweepFamily,
    samples: usize,
    seed: u64,
    n: usize,
) -> Result<Vec<SweepSample>> {
    (0..samples)
        .map(|i| sweep_sample(family, i, samples, seed, n))
        .collect()
}

/// Independent random stream per sample index.
fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mixed = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(mixed)
}
