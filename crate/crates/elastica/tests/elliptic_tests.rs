//! Elliptic-function tests: published reference values, agreement with an
//! independent adaptive-quadrature route, derivative and periodicity
//! identities, and the special constants.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{diff1, incomplete_e_quadrature, incomplete_f_quadrature, integrate, linspace};
use elastica::elliptic::{
    c_star_direct, complete_e, complete_k, compute_constants, find_m_star, incomplete_e,
    incomplete_f, jacobi_am, jacobi_sn_cn_dn,
};
use elastica::Modulus;

fn m(v: f64) -> Modulus {
    Modulus::new(v).unwrap()
}

// Frozen reference values, each certified in this test against the
// defining integral so a bad literal cannot survive.
#[test]
fn complete_integrals_reference_table() {
    let cases = [
        (0.1, 1.612441348720219, 1.530757636897763),
        (0.25, 1.685750354812596, 1.467462209339427),
        (0.5, 1.854074677301372, 1.350643881047676),
        (0.75, 2.156515647499643, 1.211056027568459),
        (0.9, 2.578092113348173, 1.104774732704073),
    ];
    for (mm, k_ref, e_ref) in cases {
        let k_quad = incomplete_f_quadrature(FRAC_PI_2, mm);
        let e_quad = incomplete_e_quadrature(FRAC_PI_2, mm);
        assert!(
            (k_ref - k_quad).abs() < 1e-12 * k_ref,
            "frozen K({mm}) = {k_ref} disagrees with quadrature {k_quad}"
        );
        assert!(
            (e_ref - e_quad).abs() < 1e-12 * e_ref,
            "frozen E({mm}) = {e_ref} disagrees with quadrature {e_quad}"
        );
        let k = complete_k(m(mm));
        let e = complete_e(m(mm));
        assert!(
            (k - k_ref).abs() < 1e-12 * k_ref,
            "K({mm}) = {k}, reference {k_ref}"
        );
        assert!(
            (e - e_ref).abs() < 1e-12 * e_ref,
            "E({mm}) = {e}, reference {e_ref}"
        );
    }
}

#[test]
fn complete_integrals_match_quadrature() {
    for mm in [0.0, 0.05, 0.3, 0.5, 0.7, 0.9, 0.99, 0.9999] {
        let k_ref = incomplete_f_quadrature(FRAC_PI_2, mm);
        let e_ref = incomplete_e_quadrature(FRAC_PI_2, mm);
        let k = complete_k(m(mm));
        let e = complete_e(m(mm));
        assert!(
            (k - k_ref).abs() <= 1e-12 * k_ref,
            "K({mm}): AGM {k} vs quadrature {k_ref}"
        );
        assert!(
            (e - e_ref).abs() <= 1e-12 * e_ref,
            "E({mm}): AGM {e} vs quadrature {e_ref}"
        );
    }
}

#[test]
fn k_diverges_toward_unit_modulus() {
    assert!(complete_k(m(0.999)) > complete_k(m(0.99)));
    assert!(complete_k(m(0.999_999)) > complete_k(m(0.999)));
}

#[test]
fn incomplete_integrals_match_quadrature() {
    for mm in [0.05, 0.4, 0.6, 0.85, 0.97] {
        for x in linspace(-4.7, 4.7, 29) {
            let f_ref = incomplete_f_quadrature(x, mm);
            let e_ref = incomplete_e_quadrature(x, mm);
            let f = incomplete_f(x, m(mm));
            let e = incomplete_e(x, m(mm));
            assert!(
                (f - f_ref).abs() <= 1e-11 * (1.0 + f_ref.abs()),
                "F({x}, {mm}): chain {f} vs quadrature {f_ref}"
            );
            assert!(
                (e - e_ref).abs() <= 1e-11 * (1.0 + e_ref.abs()),
                "E({x}, {mm}): chain {e} vs quadrature {e_ref}"
            );
        }
    }
}

#[test]
fn incomplete_f_spot_value() {
    // F(0.9, 0.6) against the quadrature route, pinned to full precision.
    let f = incomplete_f(0.9, m(0.6));
    let f_ref = incomplete_f_quadrature(0.9, 0.6);
    assert!((f - f_ref).abs() < 1e-12, "F(0.9, 0.6) = {f} vs {f_ref}");
    let e = incomplete_e(0.9, m(0.6));
    let e_ref = incomplete_e_quadrature(0.9, 0.6);
    assert!((e - e_ref).abs() < 1e-12, "E(0.9, 0.6) = {e} vs {e_ref}");
}

#[test]
fn incomplete_at_quarter_period_equals_complete() {
    let mm = m(0.3);
    assert!((incomplete_f(FRAC_PI_2, mm) - complete_k(mm)).abs() < 1e-13);
    assert!((incomplete_e(FRAC_PI_2, mm) - complete_e(mm)).abs() < 1e-13);
}

#[test]
fn quasi_periodicity() {
    // F(x + l pi) = F(x) + 2 l K and E(x + l pi) = E(x) + 2 l E.
    let cases = [(0.7, 0.4), (1.1, 0.7), (-0.3, 0.2)];
    for (x, mm) in cases {
        let k = complete_k(m(mm));
        let e = complete_e(m(mm));
        for l in [-2_i32, -1, 1, 2, 5] {
            let shift = l as f64 * PI;
            let df = incomplete_f(x + shift, m(mm)) - incomplete_f(x, m(mm));
            let de = incomplete_e(x + shift, m(mm)) - incomplete_e(x, m(mm));
            assert!(
                (df - 2.0 * l as f64 * k).abs() < 1e-11,
                "F quasi-period failed at x={x}, m={mm}, l={l}"
            );
            assert!(
                (de - 2.0 * l as f64 * e).abs() < 1e-11,
                "E quasi-period failed at x={x}, m={mm}, l={l}"
            );
        }
    }
}

#[test]
fn amplitude_periodicity_and_special_values() {
    // am(u + 2lK) = l pi + am(u); am(lK) = l pi/2.
    let mm = m(0.6);
    let k = complete_k(mm);
    for l in [-3_i32, -1, 1, 2, 4] {
        let u = 0.4;
        let lhs = jacobi_am(u + 2.0 * l as f64 * k, mm);
        let rhs = l as f64 * PI + jacobi_am(u, mm);
        assert!((lhs - rhs).abs() < 1e-11, "am period failed for l={l}");
    }
    let m8 = m(0.8);
    let k8 = complete_k(m8);
    for l in -4_i32..=4 {
        let am = jacobi_am(l as f64 * k8, m8);
        assert!(
            (am - l as f64 * FRAC_PI_2).abs() < 1e-11,
            "am({l} K) != {l} pi/2"
        );
    }
}

#[test]
fn am_matches_quadrature_inverse() {
    // am(F(x, m), m) = x with F from the independent quadrature route.
    for mm in [0.2, 0.5, 0.8, 0.95] {
        for x in linspace(-3.0, 3.0, 13) {
            let u = incomplete_f_quadrature(x, mm);
            let am = jacobi_am(u, m(mm));
            assert!(
                (am - x).abs() < 1e-10,
                "am(F_quad({x}, {mm})) = {am}, expected {x}"
            );
        }
    }
}

#[test]
fn sn_cn_dn_basics() {
    for mm in [0.0, 0.3, 0.7, 0.95] {
        let (s, c, d) = jacobi_sn_cn_dn(0.0, m(mm));
        assert!(s.abs() < 1e-15 && (c - 1.0).abs() < 1e-15 && (d - 1.0).abs() < 1e-15);
    }
    // Squared identities at an arbitrary interior point.
    let (s, c, d) = jacobi_sn_cn_dn(1.3, m(0.7));
    assert!((s * s + c * c - 1.0).abs() < 1e-12);
    assert!((d * d + 0.7 * s * s - 1.0).abs() < 1e-12);
    // dn has period 2K.
    let m9 = m(0.9);
    let k9 = complete_k(m9);
    let (_, _, d0) = jacobi_sn_cn_dn(0.5, m9);
    let (_, _, d1) = jacobi_sn_cn_dn(0.5 + 2.0 * k9, m9);
    assert!((d0 - d1).abs() < 1e-12);
}

#[test]
fn sn_cn_dn_match_amplitude_of_quadrature() {
    // sn = sin(x), cn = cos(x), dn = sqrt(1 - m sin^2 x) at u = F_quad(x, m).
    for mm in [0.25, 0.6, 0.9] {
        for x in linspace(-2.5, 2.5, 11) {
            let u = incomplete_f_quadrature(x, mm);
            let (s, c, d) = jacobi_sn_cn_dn(u, m(mm));
            assert!((s - x.sin()).abs() < 1e-10, "sn mismatch at x={x}, m={mm}");
            assert!((c - x.cos()).abs() < 1e-10, "cn mismatch at x={x}, m={mm}");
            let d_ref = (1.0 - mm * x.sin().powi(2)).sqrt();
            assert!((d - d_ref).abs() < 1e-10, "dn mismatch at x={x}, m={mm}");
        }
    }
}

#[test]
fn parity() {
    let mm = m(0.65);
    for &u in &[0.3, 1.1, 2.7] {
        let (sp, cp, dp) = jacobi_sn_cn_dn(u, mm);
        let (sm, cm, dm) = jacobi_sn_cn_dn(-u, mm);
        assert!((sp + sm).abs() < 1e-13, "sn not odd at u={u}");
        assert!((cp - cm).abs() < 1e-13, "cn not even at u={u}");
        assert!((dp - dm).abs() < 1e-13, "dn not even at u={u}");
        assert!((jacobi_am(u, mm) + jacobi_am(-u, mm)).abs() < 1e-13);
    }
}

#[test]
fn derivative_identities_pointwise() {
    // am' = dn, sn' = cn dn, cn' = -sn dn, dn' = -m sn cn, by central
    // differences with h = 1e-5 to tolerance 1e-6.
    let h = 1e-5;
    for mm in [0.2, 0.55, 0.85] {
        let md = m(mm);
        for u in linspace(-2.0, 2.0, 9) {
            let (s, c, d) = jacobi_sn_cn_dn(u, md);
            let am_d = diff1(&|x| jacobi_am(x, md), u, h);
            let sn_d = diff1(&|x| jacobi_sn_cn_dn(x, md).0, u, h);
            let cn_d = diff1(&|x| jacobi_sn_cn_dn(x, md).1, u, h);
            let dn_d = diff1(&|x| jacobi_sn_cn_dn(x, md).2, u, h);
            assert!((am_d - d).abs() < 1e-6);
            assert!((sn_d - c * d).abs() < 1e-6);
            assert!((cn_d + s * d).abs() < 1e-6);
            assert!((dn_d + mm * s * c).abs() < 1e-6);
        }
    }
}

#[test]
fn complete_integral_derivatives_in_m() {
    // dE/dm = (E - K) / (2m), dK/dm = ((m-1)K + E) / (2m(1-m)).
    let h = 1e-6;
    for mm in linspace(0.05, 0.93, 12) {
        let k = complete_k(m(mm));
        let e = complete_e(m(mm));
        let dk = diff1(&|x| complete_k(m(x)), mm, h);
        let de = diff1(&|x| complete_e(m(x)), mm, h);
        let dk_ref = (e + (mm - 1.0) * k) / (2.0 * mm * (1.0 - mm));
        let de_ref = (e - k) / (2.0 * mm);
        assert!((dk - dk_ref).abs() < 1e-6, "dK/dm mismatch at m={mm}");
        assert!((de - de_ref).abs() < 1e-6, "dE/dm mismatch at m={mm}");
    }
}

#[test]
fn two_e_minus_k_plus_mk_positive() {
    for i in 1..100 {
        let mm = i as f64 / 100.0;
        let k = complete_k(m(mm));
        let e = complete_e(m(mm));
        assert!(
            2.0 * e - k + mm * k > 0.0,
            "2E - K + mK not positive at m = {mm}"
        );
    }
}

#[test]
fn e_upper_bound() {
    // E(m) <= pi/(2 sqrt 2) * sqrt(2 - m), strictly inside (0, 1).
    for i in 1..100 {
        let mm = i as f64 / 100.0;
        let e = complete_e(m(mm));
        let bound = PI / (2.0 * 2.0_f64.sqrt()) * (2.0 - mm).sqrt();
        assert!(e < bound, "E bound violated at m = {mm}: {e} vs {bound}");
    }
}

#[test]
fn m_star_value_and_residual() {
    let ms = find_m_star(1e-12).unwrap();
    assert!((ms - 0.8261).abs() < 5e-5, "m* = {ms}");
    assert!(ms > 0.5);
    let resid = 2.0 * complete_e(m(ms)) - complete_k(m(ms));
    assert!(resid.abs() <= 1e-12, "2E-K residual {resid}");
}

#[test]
fn m_star_agrees_with_quadrature_bisection() {
    // Independent route: bisection on the sign of 2E - K where both
    // integrals come from quadrature, not from the AGM.
    let g = |mm: f64| 2.0 * incomplete_e_quadrature(FRAC_PI_2, mm) - incomplete_f_quadrature(FRAC_PI_2, mm);
    let (mut lo, mut hi) = (0.5, 1.0 - 1e-12);
    assert!(g(lo) > 0.0 && g(hi) < 0.0);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ms_oracle = 0.5 * (lo + hi);
    let ms = find_m_star(1e-12).unwrap();
    assert!(
        (ms - ms_oracle).abs() < 1e-10,
        "m* = {ms} vs oracle {ms_oracle}"
    );
}

#[test]
fn constants_closed_forms_agree() {
    let c = compute_constants().unwrap();
    assert!((c.c_star - 112.439609741).abs() < 1e-6, "c* = {}", c.c_star);
    let direct = c_star_direct(c.m_star);
    assert!(
        (c.c_star - direct).abs() < 1e-9 * c.c_star,
        "product form {} vs direct form {direct}",
        c.c_star
    );
    assert!(c.c_star < 16.0 * PI * PI);
    assert!((c.l_star - 4.0 * complete_k(m(c.m_star))).abs() < 1e-12);
}

#[test]
fn figure_eight_energy_from_quadrature() {
    // The closed-form energy 16[(m*-1)K + E] equals the arc-length integral
    // of kappa^2 = (2 sqrt(m*) cn(s, m*))^2 over one period [0, 4K].
    let c = compute_constants().unwrap();
    let md = m(c.m_star);
    let k = complete_k(md);
    let kappa_sq = |s: f64| {
        let (_, cn, _) = jacobi_sn_cn_dn(s, md);
        4.0 * c.m_star * cn * cn
    };
    let e_quad = integrate(&kappa_sq, 0.0, 4.0 * k, 1e-11);
    assert!(
        (c.e_star - e_quad).abs() < 1e-8,
        "energy closed form {} vs quadrature {e_quad}",
        c.e_star
    );
}

#[test]
fn zero_structure_of_two_e_minus_f_at_m_star() {
    // x -> 2E(x, m*) - F(x, m*) vanishes on [0, 2pi) exactly near
    // {0, pi/2, pi, 3pi/2} and is bounded away from zero elsewhere.
    let ms = find_m_star(1e-13).unwrap();
    let md = m(ms);
    let f = |x: f64| 2.0 * incomplete_e(x, md) - incomplete_f(x, md);
    let zeros = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
    for z in zeros {
        assert!(f(z).abs() <= 1e-8, "not a zero at {z}: {}", f(z));
    }
    // By periodicity the zero at 0 reappears at 2pi, so exclusion
    // neighborhoods use the circular distance on [0, 2pi).
    let exclusion = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, 2.0 * PI];
    for x in linspace(0.0, 2.0 * PI - 1e-9, 10_000) {
        let near_zero = exclusion.iter().any(|z| (x - z).abs() < 1e-2);
        if !near_zero {
            assert!(
                f(x).abs() >= 1e-3,
                "2E - F too small away from its zeros: x = {x}, value = {}",
                f(x)
            );
        }
    }
}

#[test]
fn constants_barely_move_with_the_root_tolerance() {
    // The root finder runs its full bisection and secant schedule and only
    // gates the final residual against the tolerance, so a loose tolerance
    // returns the same polished root as a tight one.
    let coarse = elastica::compute_constants_with(1e-4).unwrap();
    let fine = elastica::compute_constants_with(1e-12).unwrap();
    assert!((coarse.c_star - fine.c_star).abs() < 1e-3);
    assert!((coarse.m_star - fine.m_star).abs() < 1e-4);
    assert!(elastica::compute_constants_with(0.0).is_err());
    assert!(elastica::compute_constants_with(-1e-3).is_err());
}
