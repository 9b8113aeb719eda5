//! Shared helpers for the integration tests: an adaptive quadrature that
//! serves as an independent reference for every integral-valued quantity,
//! plus finite-difference stencils.
//!
//! Everything here deliberately avoids the library's own algorithms (AGM,
//! Landen, turning angles) so that agreement between the two routes is
//! meaningful evidence.

#![allow(dead_code)]

use elastica::{DiscreteCurve, Vec2};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`. The per-level tolerance never drops below machine scale and the
/// recursion depth is capped, so runtime stays bounded even where the
/// Richardson estimate stagnates in roundoff. A minimum subdivision depth
/// is enforced before convergence may be accepted: integrands that vanish
/// at every dyadic subdivision point of the interval (periodic factors
/// like sin(2t) on [0, 2pi] do) would otherwise fool the error estimate
/// into returning zero.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    const MAX_DEPTH: u32 = 22;
    const MIN_DEPTH: u32 = MAX_DEPTH - 8;
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || (depth <= MIN_DEPTH && delta.abs() <= 15.0 * tol) {
            left + right + delta / 15.0
        } else {
            let half = (0.5 * tol).max(1e-16);
            recurse(f, a, fa, m, fm, lm, flm, left, half, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, half, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol.max(1e-15), MAX_DEPTH)
}

/// Reference `F(x, m)` straight from the defining integral.
pub fn incomplete_f_quadrature(x: f64, m: f64) -> f64 {
    integrate(&|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, x, 1e-13)
}

/// Reference `E(x, m)` straight from the defining integral.
pub fn incomplete_e_quadrature(x: f64, m: f64) -> f64 {
    integrate(&|t: f64| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, x, 1e-13)
}

/// Central first difference.
pub fn diff1<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central second difference.
pub fn diff2<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Evenly spaced values, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Closed polyline sampling `f` uniformly on `[0, period)`.
pub fn sample_closed<F: Fn(f64) -> (f64, f64)>(f: &F, period: f64, n: usize) -> DiscreteCurve {
    DiscreteCurve::new(
        (0..n)
            .map(|i| {
                let (x, y) = f(period * i as f64 / n as f64);
                Vec2::new(x, y)
            })
            .collect(),
    )
    .unwrap()
}

/// Axis-aligned ellipse with semi-axes `a`, `b`, sampled uniformly in the
/// angle parameter (so nonuniformly in arc length when `a != b`).
pub fn ellipse(a: f64, b: f64, n: usize) -> DiscreteCurve {
    sample_closed(&|t: f64| (a * t.cos(), b * t.sin()), std::f64::consts::TAU, n)
}

/// Limacon `r = 1 + 2 cos(phi)`: winding 2, one inner loop, a single
/// transversal self-crossing at the origin.
pub fn limacon(n: usize) -> DiscreteCurve {
    sample_closed(
        &|t: f64| {
            let r = 1.0 + 2.0 * t.cos();
            (r * t.cos(), r * t.sin())
        },
        std::f64::consts::TAU,
        n,
    )
}

/// Distance from `p` to the closed polyline through `verts`.
pub fn dist_to_polyline(p: Vec2, verts: &[Vec2]) -> f64 {
    let n = verts.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let e = b - a;
        let t = ((p - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
        let d = p.dist(a + e * t);
        if d < best {
            best = d;
        }
    }
    best
}

/// One-sided discrete Hausdorff distance from the vertices of `a` to the
/// polyline of `b`.
pub fn hausdorff_one_sided(a: &DiscreteCurve, b: &DiscreteCurve) -> f64 {
    a.vertices()
        .iter()
        .map(|p| dist_to_polyline(*p, b.vertices()))
        .fold(0.0, f64::max)
}
