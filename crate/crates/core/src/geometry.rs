//! Distances, uniform sampling and normalized cap volumes on the circle and
//! on the unit sphere `S^t ⊂ ℝ^{t+1}`.
//!
//! Two metrics are used and never silently mixed:
//!
//! * [`Metric::CircleGeodesic`]: arc length on a circle of circumference 1,
//!   so distances lie in `[0, 0.5]`.
//! * [`Metric::SphereChord`]: Euclidean distance between unit vectors, so
//!   distances lie in `[0, 2]`.
//!
//! Volumes are always normalized by the total surface `|S^t|`, i.e. they are
//! the probability that a uniform point falls in the region.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad;
use crate::rng::RandomStream;

/// Angular tolerance (radians) for the disjoint/containment shortcuts in
/// [`lens_fraction`].
pub const ANGLE_TOL: f64 = 1e-12;

/// A point on the circle of circumference 1.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CircPosition(f64);

impl CircPosition {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..1.0).contains(&value) {
            Ok(Self(value))
        } else {
            domain(format!("circle position {value} outside [0, 1)"))
        }
    }

    /// Wraps any finite real onto `[0, 1)`.
    pub fn wrapped(value: f64) -> Self {
        let v = value.rem_euclid(1.0);
        // rem_euclid can round up to exactly 1.0 for tiny negative inputs
        Self(if v >= 1.0 { 0.0 } else { v })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A unit vector in `ℝ^{t+1}`, i.e. a point of `S^t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePosition {
    coords: Vec<f64>,
}

impl SpherePosition {
    /// Validates unit norm (within `1e-9`) and `t ≥ 1`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension(format!(
                "sphere point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return domain(format!("sphere point has norm {norm}, expected 1"));
        }
        Ok(Self { coords })
    }

    /// Normalizes `coords` onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Self::new(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Surface dimension `t`.
    pub fn dim_t(&self) -> usize {
        self.coords.len() - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    CircleGeodesic,
    SphereChord,
}

impl Metric {
    pub fn max_distance(self) -> f64 {
        match self {
            Metric::CircleGeodesic => 0.5,
            Metric::SphereChord => 2.0,
        }
    }
}

/// Closed distance band `[r_inner, r_outer]` under an explicit metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub r_inner: f64,
    pub r_outer: f64,
    pub metric: Metric,
}

impl AnnulusSpec {
    pub fn new(r_inner: f64, r_outer: f64, metric: Metric) -> Result<Self> {
        if !(r_inner >= 0.0 && r_inner <= r_outer && r_outer <= metric.max_distance()) {
            return domain(format!(
                "annulus [{r_inner}, {r_outer}] invalid for {metric:?} (max {})",
                metric.max_distance()
            ));
        }
        Ok(Self {
            r_inner,
            r_outer,
            metric,
        })
    }

    pub fn contains(&self, d: f64) -> bool {
        self.r_inner <= d && d <= self.r_outer
    }
}

/// Geodesic distance on the unit-circumference circle.
pub fn circle_distance(x: CircPosition, y: CircPosition) -> f64 {
    circle_distance_raw(x.0, y.0)
}

#[inline]
pub(crate) fn circle_distance_raw(x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    d.min(1.0 - d)
}

pub fn chord_distance(u: &SpherePosition, v: &SpherePosition) -> Result<f64> {
    if u.coords.len() != v.coords.len() {
        return Err(Error::Dimension(format!(
            "chord between S^{} and S^{}",
            u.dim_t(),
            v.dim_t()
        )));
    }
    Ok(chord_distance_raw(&u.coords, &v.coords))
}

#[inline]
pub(crate) fn chord_distance_raw(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

pub fn sample_circle(rng: &mut RandomStream) -> CircPosition {
    CircPosition(rng.uniform())
}

/// Uniform point of `S^t`: `t + 1` independent standard normals, normalized.
pub fn sample_sphere(t: usize, rng: &mut RandomStream) -> Result<SpherePosition> {
    if t < 1 {
        return Err(Error::Dimension("sphere dimension t must be at least 1".into()));
    }
    loop {
        let coords: Vec<f64> = (0..=t).map(|_| rng.normal()).collect();
        let norm2: f64 = coords.iter().map(|c| c * c).sum();
        if norm2 > 1e-300 {
            let norm = norm2.sqrt();
            return Ok(SpherePosition {
                coords: coords.into_iter().map(|c| c / norm).collect(),
            });
        }
    }
}

/// `|S^t| = (t+1) π^{(t+1)/2} / Γ((t+3)/2)`. Also valid at `t = 0` (two points).
pub fn surface_area(t: usize) -> f64 {
    let t = t as f64;
    (t + 1.0) * PI.powf((t + 1.0) / 2.0) / libm::tgamma((t + 3.0) / 2.0)
}

/// Isolated-vertex threshold constant `ψ(t) = √π (t+1) Γ((t+2)/2) / Γ((t+3)/2)`.
pub fn psi(t: usize) -> f64 {
    let t = t as f64;
    PI.sqrt() * (t + 1.0) * libm::tgamma((t + 2.0) / 2.0) / libm::tgamma((t + 3.0) / 2.0)
}

/// Volume of the unit `t`-ball, the small-radius limit of `|B_t(u, r)| / r^t`.
pub fn small_cap_constant(t: usize) -> f64 {
    let t = t as f64;
    PI.powf(t / 2.0) / libm::tgamma(t / 2.0 + 1.0)
}

/// Angular radius of a chord of length `r` on the unit sphere.
pub fn chord_to_angle(r: f64) -> f64 {
    2.0 * (r / 2.0).clamp(-1.0, 1.0).asin()
}

/// Chord length on the unit circle (radius 1) spanning geodesic distance `d`
/// measured on the unit-circumference circle.
pub fn geodesic_to_chord(d: f64) -> f64 {
    2.0 * (PI * d).sin()
}

/// Translates a scaled VRG constant (arc length in units of `log n / n` on the
/// unit-circumference circle) into the chord-scaled constant of `RAG_1`.
///
/// In the scaling regime the chord equals the unit-circle arc to first order,
/// and the unit circle is `2π` times longer.
pub fn vrg_constant_to_rag1(x: f64) -> f64 {
    2.0 * PI * x
}

fn check_radius(r: f64, what: &str) -> Result<()> {
    if (0.0..=2.0).contains(&r) {
        Ok(())
    } else {
        domain(format!("{what} = {r} outside [0, 2]"))
    }
}

/// Normalized area of the cap `{x ∈ S^t : ‖x − u‖₂ ≤ r}`.
///
/// The cap of angular radius `θ` (`cos θ = 1 − r²/2`) has area
/// `|S^{t−1}| ∫₀^θ sin^{t−1} φ dφ`; the integral is evaluated by adaptive
/// Gauss–Kronrod quadrature and divided by the closed-form `|S^t|`.
pub fn cap_fraction(t: usize, r: f64) -> Result<f64> {
    if t < 1 {
        return Err(Error::Dimension("cap_fraction needs t >= 1".into()));
    }
    check_radius(r, "cap radius")?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let theta = chord_to_angle(r);
    let k = (t - 1) as i32;
    // ∫₀^θ sin^k ≈ θ^{k+1}/(k+1) for small θ; ask for ~1e-12 relative.
    let scale = theta.powi(k + 1) / (k + 1) as f64;
    let integral = quad::integrate(|phi: f64| phi.sin().powi(k), 0.0, theta, 1e-12 * scale);
    Ok((surface_area(t - 1) * integral / surface_area(t)).clamp(0.0, 1.0))
}

/// Normalized area of `{x : r1 ≤ ‖x − u‖₂ ≤ r2}`.
pub fn annulus_fraction(t: usize, r1: f64, r2: f64) -> Result<f64> {
    check_radius(r1, "inner radius")?;
    check_radius(r2, "outer radius")?;
    if r1 > r2 {
        return domain(format!("inner radius {r1} exceeds outer radius {r2}"));
    }
    Ok(cap_fraction(t, r2)? - cap_fraction(t, r1)?)
}

/// `∫₀^x sin^k ψ dψ` by the standard reduction formula.
fn sin_power_integral(k: usize, x: f64) -> f64 {
    let (mut j, start) = if k.is_multiple_of(2) { (x, 0) } else { (1.0 - x.cos(), 1) };
    let (s, c) = x.sin_cos();
    let mut m = start + 2;
    while m <= k {
        let mf = m as f64;
        j = -s.powi(m as i32 - 1) * c / mf + (mf - 1.0) / mf * j;
        m += 2;
    }
    j
}

/// Fraction of the uniform measure on `S^{k+1}` whose first coordinate is at
/// least `s`. For `k = −1` (the two-point sphere `S^0`) use [`s0_fraction`].
fn slice_fraction(k: usize, s: f64) -> f64 {
    if s <= -1.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        (sin_power_integral(k, s.acos()) / sin_power_integral(k, PI)).clamp(0.0, 1.0)
    }
}

fn s0_fraction(s: f64) -> f64 {
    let mut f = 0.0;
    if 1.0 >= s {
        f += 0.5;
    }
    if -1.0 >= s {
        f += 0.5;
    }
    f
}

/// Normalized area of `B_t(O₁, r1) ∩ B_t(O₂, r2)` with `‖O₁ − O₂‖₂ = ell`.
///
/// The smaller cap is sliced by colatitude `φ` about its own centre. Each
/// slice is a `(t−1)`-sphere of radius `sin φ`, and the part of it inside the
/// other cap is a cap of that slice whose fraction has a closed form; the
/// outer integral over `φ` is done by quadrature split at the kinks.
pub fn lens_fraction(t: usize, r1: f64, r2: f64, ell: f64) -> Result<f64> {
    if t < 1 {
        return Err(Error::Dimension("lens_fraction needs t >= 1".into()));
    }
    check_radius(r1, "first radius")?;
    check_radius(r2, "second radius")?;
    check_radius(ell, "centre separation")?;

    let (r_small, r_large) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let a_small = chord_to_angle(r_small);
    let a_large = chord_to_angle(r_large);
    let gamma = chord_to_angle(ell);

    if r_small == 0.0 {
        return Ok(0.0);
    }
    if gamma > a_small + a_large + ANGLE_TOL {
        return Ok(0.0);
    }
    if gamma + a_small < a_large - ANGLE_TOL {
        return cap_fraction(t, r_small);
    }

    let (sin_g, cos_g) = gamma.sin_cos();
    let cos_large = a_large.cos();
    let inside = move |phi: f64| -> f64 {
        let (sin_p, cos_p) = phi.sin_cos();
        let denom = sin_p * sin_g;
        if denom.abs() < 1e-300 {
            return if cos_p * cos_g >= cos_large { 1.0 } else { 0.0 };
        }
        let s = (cos_large - cos_p * cos_g) / denom;
        if t == 1 {
            s0_fraction(s)
        } else {
            slice_fraction(t - 2, s)
        }
    };

    let k = (t - 1) as i32;
    let breaks = {
        let mut b = vec![
            (gamma - a_large).abs(),
            gamma + a_large,
            2.0 * PI - gamma - a_large,
        ];
        b.sort_by(|x, y| x.total_cmp(y));
        b
    };
    let scale = a_small.powi(k + 1) / (k + 1) as f64;
    let integral = quad::integrate_pieces(
        |phi: f64| phi.sin().powi(k) * inside(phi),
        0.0,
        a_small,
        &breaks,
        1e-11 * scale,
    );
    Ok((surface_area(t - 1) * integral / surface_area(t)).clamp(0.0, 1.0))
}
