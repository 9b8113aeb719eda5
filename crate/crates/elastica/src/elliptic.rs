//! Elliptic integrals and Jacobi elliptic functions for modulus `m` in
//! `[0, 1)`, in the parameter convention of Abramowitz & Stegun chapter 17
//! (`m = k^2`):
//!
//! ```text
//! F(x, m) = integral of (1 - m sin^2 t)^(-1/2) over t in [0, x]
//! E(x, m) = integral of (1 - m sin^2 t)^(1/2)  over t in [0, x]
//! K(m) = F(pi/2, m),  E(m) = E(pi/2, m)
//! am(u, m) = inverse of x -> F(x, m)
//! sn = sin(am), cn = cos(am), dn = sqrt(1 - m sn^2)
//! ```
//!
//! Complete integrals use the arithmetic-geometric mean, incomplete ones the
//! AGM amplitude chain, and sn/cn/dn a descending Landen transformation; all
//! converge quadratically, so a handful of iterations reaches double
//! precision over the whole modulus range.
//!
//! The module also computes the two special constants of the closed
//! non-circular elastica: the modulus `m*` where `2E(m) = K(m)`, and the
//! energy-length product `c*` of the figure eight built at that modulus.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Elliptic modulus `m = k^2`, restricted to `[0, 1)`.
///
/// `m >= 1` is rejected rather than approximated: `K` diverges at `m = 1`
/// and no caller in this crate evaluates there.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(m: f64) -> Result<Modulus> {
        if m.is_finite() && (0.0..1.0).contains(&m) {
            Ok(Modulus(m))
        } else {
            Err(Error::ModulusOutOfRange(m))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Below this the residual Landen modulus is dropped and trigonometric
/// closed forms take over; the neglected correction is O(1e-14) relative.
const LANDEN_CUTOFF: f64 = 1e-14;

/// One AGM pass returning `(K(m), E(m))`.
///
/// With `a_0 = 1`, `b_0 = sqrt(1-m)`, `c_0 = sqrt(m)`:
/// `K = pi / (2 a_N)` and `E = K (1 - sum 2^(n-1) c_n^2)`.
fn agm_complete(m: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&m));
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut c2_sum = 0.5 * m;
    let mut pow = 1.0_f64;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        c2_sum += pow * c * c;
        pow *= 2.0;
        if c <= f64::EPSILON * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - c2_sum))
}

/// Complete elliptic integral of the first kind, `K(m)`, to better than
/// 1e-12 relative error on `[0, 1)`.
pub fn complete_k(m: Modulus) -> f64 {
    agm_complete(m.get()).0
}

/// Complete elliptic integral of the second kind, `E(m)`.
pub fn complete_e(m: Modulus) -> f64 {
    agm_complete(m.get()).1
}

/// Both complete integrals from a single AGM pass.
pub fn complete_ke(m: Modulus) -> (f64, f64) {
    agm_complete(m.get())
}

/// Splits `u = 2 l K + u_r` with `u_r` in `[-K, K]`.
fn reduce_half_period(u: f64, k: f64) -> (f64, f64) {
    let l = (u / (2.0 * k)).round();
    (l, u - 2.0 * k * l)
}

/// Jacobi sn, cn, dn on a reduced argument via descending Landen steps.
///
/// The modulus chain is `m_{j+1} = ((1 - sqrt(1-m_j)) / (1 + sqrt(1-m_j)))^2`,
/// taken down to `LANDEN_CUTOFF` where sn and cn degenerate to sine and
/// cosine; the Gauss transformation then maps the triple back up the chain.
fn sncndn_reduced(u: f64, m: f64) -> (f64, f64, f64) {
    let mut mus = [0.0_f64; 32];
    let mut depth = 0;
    let mut mm = m;
    while mm > LANDEN_CUTOFF && depth < 32 {
        let kp = (1.0 - mm).sqrt();
        let mu = (1.0 - kp) / (1.0 + kp);
        mus[depth] = mu;
        depth += 1;
        mm = mu * mu;
    }
    let mut v = u;
    for &mu in &mus[..depth] {
        v /= 1.0 + mu;
    }
    let (mut s, mut c) = v.sin_cos();
    for &mu in mus[..depth].iter().rev() {
        let d = (1.0 - mu * mu * s * s).sqrt();
        let t = 1.0 + mu * s * s;
        let sj = (1.0 + mu) * s / t;
        c = c * d / t;
        s = sj;
    }
    let dn = (1.0 - m * s * s).sqrt();
    (s, c, dn)
}

/// Jacobi elliptic functions `(sn(u,m), cn(u,m), dn(u,m))` for any real `u`.
///
/// The argument is reduced by the half period `2K` (sn and cn flip sign per
/// half period, dn is periodic), so accuracy is uniform in `u` up to the
/// rounding inherent in forming `u - 2lK`.
pub fn jacobi_sn_cn_dn(u: f64, m: Modulus) -> (f64, f64, f64) {
    let k = complete_k(m);
    let (l, ur) = reduce_half_period(u, k);
    let (s, c, d) = sncndn_reduced(ur, m.get());
    if (l as i64) & 1 != 0 {
        (-s, -c, d)
    } else {
        (s, c, d)
    }
}

/// Jacobi amplitude `am(u, m)`, the inverse of `x -> F(x, m)`.
///
/// Uses `am(u + 2lK) = l pi + am(u)` and `am = atan2(sn, cn)` on the reduced
/// argument, where cn is nonnegative.
pub fn jacobi_am(u: f64, m: Modulus) -> f64 {
    let k = complete_k(m);
    let (l, ur) = reduce_half_period(u, k);
    let (s, c, _) = sncndn_reduced(ur, m.get());
    l * PI + s.atan2(c)
}

/// Incomplete integrals of both kinds on a reduced amplitude in
/// `[-pi/2, pi/2]` via the AGM amplitude chain:
/// `tan(phi_{n+1} - phi_n) = (b_n / a_n) tan(phi_n)` with the branch keeping
/// `phi_{n+1}` near `2 phi_n`, then
///
/// ```text
/// F = phi_N / (2^N a_N)
/// E = F (1 - sum 2^(n-1) c_n^2) + sum_{n>=1} c_n sin(phi_n)
/// ```
fn agm_incomplete(phi: f64, m: f64) -> (f64, f64) {
    debug_assert!(phi.abs() <= FRAC_PI_2 + 1e-9);
    if m == 0.0 {
        return (phi, phi);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut phi_n = phi;
    let mut c2_sum = 0.5 * m;
    let mut sin_sum = 0.0_f64;
    let mut pow = 1.0_f64;
    for _ in 0..64 {
        let d = (b * phi_n.sin()).atan2(a * phi_n.cos());
        phi_n = phi_n + d + PI * ((phi_n - d) / PI).round();
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        c2_sum += pow * c * c;
        pow *= 2.0;
        sin_sum += c * phi_n.sin();
        if c.abs() <= f64::EPSILON * a {
            break;
        }
    }
    let f = phi_n / (pow * a);
    let e = f * (1.0 - c2_sum) + sin_sum;
    (f, e)
}

/// Incomplete elliptic integral of the first kind `F(x, m)` for any real
/// amplitude `x`, using the quasi-period `F(x + l pi, m) = F(x, m) + 2 l K`.
pub fn incomplete_f(x: f64, m: Modulus) -> f64 {
    let l = (x / PI).round();
    let (f, _) = agm_incomplete(x - l * PI, m.get());
    if l == 0.0 {
        f
    } else {
        f + 2.0 * l * complete_k(m)
    }
}

/// Incomplete elliptic integral of the second kind `E(x, m)`, using
/// `E(x + l pi, m) = E(x, m) + 2 l E(m)`.
pub fn incomplete_e(x: f64, m: Modulus) -> f64 {
    let l = (x / PI).round();
    let (_, e) = agm_incomplete(x - l * PI, m.get());
    if l == 0.0 {
        e
    } else {
        e + 2.0 * l * complete_e(m)
    }
}

/// The root `m*` of `2E(m) - K(m)` in `(1/2, 1)`.
///
/// `2E - K` is positive at `m = 1/2` and decreases to minus infinity as
/// `m -> 1`, so a sign change is guaranteed on the fixed bracket
/// `[0.5 + 1e-9, 1 - 1e-9]`. Bisection narrows the bracket, secant steps
/// polish, and the result satisfies `|2E(m*) - K(m*)| <= tol`.
pub fn find_m_star(tol: f64) -> Result<f64> {
    // The negated form also rejects NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!(
            "root tolerance must be positive, got {tol}"
        )));
    }
    let g = |m: f64| {
        let (k, e) = agm_complete(m);
        2.0 * e - k
    };
    let mut lo = 0.5 + 1e-9;
    let mut hi = 1.0 - 1e-9;
    let mut g_lo = g(lo);
    let mut g_hi = g(hi);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::RootFinding(format!(
            "no sign change of 2E-K on [{lo}, {hi}]: endpoints {g_lo}, {g_hi}"
        )));
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid > 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    // Secant refinement inside the bisected bracket.
    let (mut x0, mut f0) = (lo, g_lo);
    let (mut x1, mut f1) = (hi, g_hi);
    for _ in 0..12 {
        if f1.abs() <= tol || (x1 - x0).abs() <= f64::EPSILON * x1.abs() {
            break;
        }
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(lo..=hi).contains(&x2) {
            x2 = 0.5 * (lo + hi);
        }
        let f2 = g(x2);
        if f2 > 0.0 {
            lo = x2;
        } else {
            hi = x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    if f1.abs() <= tol {
        Ok(x1)
    } else {
        Err(Error::RootFinding(format!(
            "residual {:.3e} above tolerance {tol:.3e} after refinement",
            f1.abs()
        )))
    }
}

/// Constants of the figure-eight elastica.
#[derive(Clone, Copy, Debug)]
pub struct EllipticConstants {
    /// Root of `2E(m) - K(m)` in `(1/2, 1)`, approximately 0.8261.
    pub m_star: f64,
    /// Bending energy of the one-fold figure eight,
    /// `16 [(m* - 1) K(m*) + E(m*)]`.
    pub e_star: f64,
    /// Length of the one-fold figure eight, `4 K(m*)`.
    pub l_star: f64,
    /// Energy-length product `e_star * l_star`, approximately 112.4396;
    /// the sharp embeddedness threshold.
    pub c_star: f64,
}

/// Computes `m*` and the figure-eight energy, length, and their product.
pub fn compute_constants() -> Result<EllipticConstants> {
    compute_constants_with(1e-13)
}

/// Same as [`compute_constants`], with a caller-chosen residual tolerance
/// for the `2E - K` root. Looser tolerances still land within the
/// bisected bracket, so `c_star` moves by far less than the tolerance.
pub fn compute_constants_with(tol: f64) -> Result<EllipticConstants> {
    let m_star = find_m_star(tol)?;
    let (k, e) = agm_complete(m_star);
    let e_star = 16.0 * ((m_star - 1.0) * k + e);
    let l_star = 4.0 * k;
    Ok(EllipticConstants {
        m_star,
        e_star,
        l_star,
        c_star: e_star * l_star,
    })
}

/// The threshold `c*` written directly in terms of the root modulus:
/// `64 (4m - 2) E(m)^2`. Equal to `e_star * l_star` at `m = m*` because
/// `2E(m*) = K(m*)`; the agreement of the two forms is a consistency check.
pub fn c_star_direct(m_star: f64) -> f64 {
    let (_, e) = agm_complete(m_star);
    64.0 * (4.0 * m_star - 2.0) * e * e
}

/// Cached constants for callers that need `m*` or `c*` repeatedly.
///
/// Panics if the root finder fails, which would mean the elliptic integrals
/// themselves are broken; every test exercises them directly first.
pub fn constants() -> &'static EllipticConstants {
    static CONSTANTS: OnceLock<EllipticConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        compute_constants().expect("2E-K root finding failed on its guaranteed bracket")
    })
}
