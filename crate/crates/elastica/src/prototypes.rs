//! Closed-form planar elastica: curves whose signed curvature satisfies
//!
//! ```text
//! kappa'' + kappa^3 / 2 - lambda kappa = 0
//! ```
//!
//! for some multiplier `lambda`. Up to similarity there are five families,
//! each given here in arc-length parametrization with `|gamma'| = 1`:
//!
//! * linear: `kappa = 0`;
//! * wavelike: `kappa(s) = 2 a sqrt(m) cn(a s, m)`, `lambda = a^2 (2m - 1)`;
//! * borderline: `kappa(s) = 2 a sech(a s)`, `lambda = a^2`;
//! * orbitlike: `kappa(s) = 2 a dn(a s, m)`, `lambda = a^2 (2 - m)`;
//! * circular: `kappa = 1/R`, `lambda = 1 / (2 R^2)`.
//!
//! The only closed non-circular member is the figure eight: the wavelike
//! curve at the modulus `m*` where `2E(m*) = K(m*)`, closing up over
//! `s` in `[0, 4K(m*)]`. It is also exposed in its angle parametrization
//! `x -> (2E(x, m*) - F(x, m*), -2 sqrt(m*) cos x)`, which traces the same
//! point set at non-constant speed.

use std::f64::consts::TAU;

use crate::curve::DiscreteCurve;
use crate::elliptic::{
    self, incomplete_e, incomplete_f, jacobi_am, jacobi_sn_cn_dn, EllipticConstants, Modulus,
};
use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// The five elastica families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrototypeKind {
    Linear,
    Wavelike,
    Borderline,
    Orbitlike,
    Circular,
}

/// Rotation followed by translation.
#[derive(Clone, Copy, Debug)]
pub struct RigidMotion {
    pub angle: f64,
    pub translation: Vec2,
}

impl RigidMotion {
    pub fn identity() -> RigidMotion {
        RigidMotion {
            angle: 0.0,
            translation: Vec2::ZERO,
        }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        p.rotated(self.angle) + self.translation
    }
}

impl Default for RigidMotion {
    fn default() -> Self {
        Self::identity()
    }
}

/// One concrete elastica: a family member with its modulus, frequency
/// scale `alpha`, curvature sign, and placement in the plane.
///
/// The displayed formulas are evaluated at `alpha * s` and scaled by
/// `1/alpha`, so the parameter `s` is arc length for every family.
#[derive(Clone, Copy, Debug)]
pub struct ElasticaPrototype {
    pub kind: PrototypeKind,
    /// Modulus for the wavelike/orbitlike families; unused otherwise.
    pub m: f64,
    /// Frequency scale; the circle radius for the circular family.
    pub alpha: f64,
    pub rigid: RigidMotion,
    /// Curvature sign, +1 or -1; realized as a reflection across the x-axis.
    pub sign: f64,
}

impl ElasticaPrototype {
    pub fn linear() -> ElasticaPrototype {
        ElasticaPrototype {
            kind: PrototypeKind::Linear,
            m: 0.0,
            alpha: 1.0,
            rigid: RigidMotion::identity(),
            sign: 1.0,
        }
    }

    /// Wavelike elastica; requires `m` strictly inside `(0, 1)`.
    pub fn wavelike(m: Modulus, alpha: f64) -> Result<ElasticaPrototype> {
        if m.get() == 0.0 {
            return Err(Error::Parameter(
                "wavelike elastica needs modulus in (0, 1)".into(),
            ));
        }
        Self::with_alpha(PrototypeKind::Wavelike, m.get(), alpha)
    }

    /// Orbitlike elastica; requires `m` strictly inside `(0, 1)`.
    pub fn orbitlike(m: Modulus, alpha: f64) -> Result<ElasticaPrototype> {
        if m.get() == 0.0 {
            return Err(Error::Parameter(
                "orbitlike elastica needs modulus in (0, 1)".into(),
            ));
        }
        Self::with_alpha(PrototypeKind::Orbitlike, m.get(), alpha)
    }

    pub fn borderline(alpha: f64) -> Result<ElasticaPrototype> {
        Self::with_alpha(PrototypeKind::Borderline, 0.0, alpha)
    }

    /// Circle of the given radius, centered at the origin before any rigid
    /// motion is applied.
    pub fn circular(radius: f64) -> Result<ElasticaPrototype> {
        Self::with_alpha(PrototypeKind::Circular, 0.0, radius)
    }

    fn with_alpha(kind: PrototypeKind, m: f64, alpha: f64) -> Result<ElasticaPrototype> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!(
                "scale must be positive and finite, got {alpha}"
            )));
        }
        Ok(ElasticaPrototype {
            kind,
            m,
            alpha,
            rigid: RigidMotion::identity(),
            sign: 1.0,
        })
    }

    pub fn with_rigid(mut self, rigid: RigidMotion) -> ElasticaPrototype {
        self.rigid = rigid;
        self
    }

    pub fn with_sign(mut self, sign: f64) -> ElasticaPrototype {
        self.sign = if sign < 0.0 { -1.0 } else { 1.0 };
        self
    }

    /// The multiplier `lambda` for which this curve solves the elastica
    /// equation; fixed by the family and its parameters.
    pub fn lambda(&self) -> f64 {
        let a2 = self.alpha * self.alpha;
        match self.kind {
            PrototypeKind::Linear => 0.0,
            PrototypeKind::Wavelike => a2 * (2.0 * self.m - 1.0),
            PrototypeKind::Borderline => a2,
            PrototypeKind::Orbitlike => a2 * (2.0 - self.m),
            PrototypeKind::Circular => 1.0 / (2.0 * a2),
        }
    }

    /// Position at arc length `s`.
    pub fn eval_point(&self, s: f64) -> Vec2 {
        let a = self.alpha;
        let t = a * s;
        let p = match self.kind {
            PrototypeKind::Linear => Vec2::new(s, 0.0),
            PrototypeKind::Wavelike => {
                let md = Modulus::new(self.m).expect("validated at construction");
                let am = jacobi_am(t, md);
                let (_, cn, _) = jacobi_sn_cn_dn(t, md);
                Vec2::new(
                    (2.0 * incomplete_e(am, md) - t) / a,
                    -2.0 * self.m.sqrt() * cn / a,
                )
            }
            PrototypeKind::Borderline => {
                Vec2::new((2.0 * t.tanh() - t) / a, -2.0 / (a * t.cosh()))
            }
            PrototypeKind::Orbitlike => {
                let md = Modulus::new(self.m).expect("validated at construction");
                let am = jacobi_am(t, md);
                let (_, _, dn) = jacobi_sn_cn_dn(t, md);
                Vec2::new(
                    (2.0 * incomplete_e(am, md) + (self.m - 2.0) * t) / (self.m * a),
                    -2.0 * dn / (self.m * a),
                )
            }
            // Radius a, centered at the origin, counterclockwise from the
            // bottom so that kappa = +1/a.
            PrototypeKind::Circular => Vec2::new(a * (s / a).sin(), -a * (s / a).cos()),
        };
        self.rigid.apply(Vec2::new(p.x, self.sign * p.y))
    }

    /// Signed curvature at arc length `s`.
    pub fn eval_curvature(&self, s: f64) -> f64 {
        let a = self.alpha;
        let t = a * s;
        let kappa = match self.kind {
            PrototypeKind::Linear => 0.0,
            PrototypeKind::Wavelike => {
                let md = Modulus::new(self.m).expect("validated at construction");
                let (_, cn, _) = jacobi_sn_cn_dn(t, md);
                2.0 * a * self.m.sqrt() * cn
            }
            PrototypeKind::Borderline => 2.0 * a / t.cosh(),
            PrototypeKind::Orbitlike => {
                let md = Modulus::new(self.m).expect("validated at construction");
                let (_, _, dn) = jacobi_sn_cn_dn(t, md);
                2.0 * a * dn
            }
            PrototypeKind::Circular => 1.0 / a,
        };
        self.sign * kappa
    }

    /// Residual of the elastica equation at `s`, with the second derivative
    /// of curvature taken by a central difference of step `h`. For the true
    /// multiplier of the family this is O(h^2).
    pub fn elastica_residual(&self, s: f64, h: f64) -> f64 {
        let k0 = self.eval_curvature(s);
        let kp = self.eval_curvature(s + h);
        let km = self.eval_curvature(s - h);
        let k_ss = (kp - 2.0 * k0 + km) / (h * h);
        k_ss + 0.5 * k0 * k0 * k0 - self.lambda() * k0
    }
}

/// Choice of figure-eight parametrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parametrization {
    /// Unit-speed form on `[0, 4K(m*))`.
    ArcLength,
    /// Amplitude form on `[0, 2pi)`; same point set, non-constant speed.
    Angle,
}

/// The closed figure-eight elastica at the special modulus `m*`.
#[derive(Clone, Copy, Debug)]
pub struct FigureEight {
    pub constants: EllipticConstants,
    pub parametrization: Parametrization,
}

impl FigureEight {
    pub fn new(parametrization: Parametrization) -> FigureEight {
        FigureEight {
            constants: *elliptic::constants(),
            parametrization,
        }
    }

    /// Parameter length of one closed traversal: `4K(m*)` in arc length,
    /// `2pi` in the angle form.
    pub fn period(&self) -> f64 {
        match self.parametrization {
            Parametrization::ArcLength => self.constants.l_star,
            Parametrization::Angle => TAU,
        }
    }

    /// Position at parameter `t`.
    pub fn point(&self, t: f64) -> Vec2 {
        let ms = Modulus::new(self.constants.m_star).expect("m* is in (0.5, 1)");
        let sqrt_m = self.constants.m_star.sqrt();
        match self.parametrization {
            Parametrization::ArcLength => {
                let am = jacobi_am(t, ms);
                let (_, cn, _) = jacobi_sn_cn_dn(t, ms);
                Vec2::new(2.0 * incomplete_e(am, ms) - t, -2.0 * sqrt_m * cn)
            }
            Parametrization::Angle => Vec2::new(
                2.0 * incomplete_e(t, ms) - incomplete_f(t, ms),
                -2.0 * sqrt_m * t.cos(),
            ),
        }
    }

    /// Velocity at parameter `t` (unit vector in the arc-length form).
    pub fn velocity(&self, t: f64) -> Vec2 {
        let ms = Modulus::new(self.constants.m_star).expect("m* is in (0.5, 1)");
        let m = self.constants.m_star;
        let sqrt_m = m.sqrt();
        match self.parametrization {
            Parametrization::ArcLength => {
                let (sn, _, dn) = jacobi_sn_cn_dn(t, ms);
                Vec2::new(2.0 * dn * dn - 1.0, 2.0 * sqrt_m * sn * dn)
            }
            Parametrization::Angle => {
                let s2 = t.sin() * t.sin();
                let w = (1.0 - m * s2).sqrt();
                Vec2::new((1.0 - 2.0 * m * s2) / w, 2.0 * sqrt_m * t.sin())
            }
        }
    }

    /// Closed polyline with `n` vertices, uniform in the parameter,
    /// traversing the figure eight `covers` times.
    pub fn sample(&self, n: usize, covers: u32) -> Result<DiscreteCurve> {
        if n < 8 {
            return Err(Error::Parameter(format!(
                "figure-eight sampling needs n >= 8, got {n}"
            )));
        }
        if covers == 0 {
            return Err(Error::Parameter("covers must be at least 1".into()));
        }
        let total = self.period() * covers as f64;
        let pts = (0..n)
            .map(|i| self.point(total * i as f64 / n as f64))
            .collect();
        DiscreteCurve::new(pts)
    }
}

/// Closed polyline on the figure eight; see [`FigureEight::sample`].
pub fn figure_eight_curve(
    n: usize,
    which: Parametrization,
    covers: u32,
) -> Result<DiscreteCurve> {
    FigureEight::new(which).sample(n, covers)
}

/// Regular `n`-gon on the circle of the given radius, counterclockwise,
/// traversed `covers` times (vertices repeat for multi-covers).
pub fn circle_curve(radius: f64, n: usize, covers: u32) -> Result<DiscreteCurve> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Parameter(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    if covers == 0 {
        return Err(Error::Parameter("covers must be at least 1".into()));
    }
    if n < 3 {
        return Err(Error::Parameter(format!(
            "circle sampling needs n >= 3, got {n}"
        )));
    }
    let pts = (0..n)
        .map(|i| {
            let t = TAU * covers as f64 * i as f64 / n as f64;
            Vec2::new(radius * t.cos(), radius * t.sin())
        })
        .collect();
    DiscreteCurve::new(pts)
}

/// Wavelike prototype at the figure-eight modulus with unit scale; the
/// arc-length figure eight is exactly this curve restricted to one period.
pub fn figure_eight_prototype() -> ElasticaPrototype {
    let c = elliptic::constants();
    ElasticaPrototype::wavelike(
        Modulus::new(c.m_star).expect("m* is in (0.5, 1)"),
        1.0,
    )
    .expect("m* is strictly inside (0, 1)")
}
