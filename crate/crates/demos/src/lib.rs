//! Floating-point companion demos for the exact engine.
//!
//! The headline demo integrates a smooth compactly supported datum against
//! the planar Cauchy kernel and watches where the solution lives. The datum
//! `f(z) = amplitude · z · bump(|z|^2)` vanishes outside the annulus
//! `1 <= |z| <= sqrt(2)`, yet its transform `u` with `(d/dx + i d/dy) u / 2
//! = f` is a nonzero constant throughout the hole `|z| < 1` and decays like
//! `1/|z|` far away: solving spreads support, it never shrinks it.
//!
//! Everything here is deliberately approximate; the quadrature is a
//! midpoint rule in polar coordinates centered at the evaluation point,
//! which cancels the kernel singularity against the Jacobian. Invariants:
//!
//! - summation order is fixed (radius-major), so equal inputs give equal
//!   floats,
//! - doubling `resolution` at least quarters the observed error on smooth
//!   data; the checked entry points report the refinement delta rather
//!   than hiding it,
//! - no tolerance is baked in here; callers decide what to accept.

pub use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DemoError {
    #[error("amplitude must be positive and finite, got {0}")]
    BadAmplitude(f64),
    #[error("resolution must be at least 16, got {0}")]
    BadResolution(usize),
}

/// The standard flat bump in one variable: `exp(-1/((s-1)(2-s)))` on
/// `(1, 2)`, zero elsewhere. Smooth everywhere, identically zero together
/// with all derivatives at both endpoints.
pub fn bump(s: f64) -> f64 {
    if s <= 1.0 || s >= 2.0 {
        0.0
    } else {
        (-1.0 / ((s - 1.0) * (2.0 - s))).exp()
    }
}

/// Composite Simpson rule with `panels` panels (any positive count).
/// Plenty for the smooth integrands used here; the flat endpoints of the
/// bump make the error decay faster than any power of the panel width.
pub fn radial_integral(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    assert!(panels > 0, "at least one panel");
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let a = lo + i as f64 * h;
        acc += f(a) + 4.0 * f(a + 0.5 * h) + f(a + h);
    }
    acc * h / 6.0
}

/// A datum supported on the annulus `1 <= |z| <= sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusDatum {
    amplitude: f64,
    resolution: usize,
}

impl AnnulusDatum {
    pub fn new(amplitude: f64, resolution: usize) -> Result<Self, DemoError> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(DemoError::BadAmplitude(amplitude));
        }
        if resolution < 16 {
            return Err(DemoError::BadResolution(resolution));
        }
        Ok(AnnulusDatum {
            amplitude,
            resolution,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// `amplitude · z · bump(|z|^2)`; the square pushes the support out to
    /// radii `[1, sqrt(2)]`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        z * (self.amplitude * bump(z.norm_sqr()))
    }

    /// `(1/pi) ∫∫ |f|`, the constant in the far-field bound
    /// `|u(z)| <= mass / (|z| - sqrt(2))`.
    pub fn total_mass(&self) -> f64 {
        self.amplitude * radial_integral(|s| s.sqrt() * bump(s), 1.0, 2.0, 4096)
    }
}

/// Cauchy transform `u(z) = (1/pi) ∫∫ f(w) / (z - w) dA(w)` by a midpoint
/// rule in polar coordinates centered at `z`. Writing `w = z + r e^{it}`
/// the area element cancels the kernel, leaving the bounded integrand
/// `-(1/pi) f(z + r e^{it}) e^{-it}`; the radial range is clipped to the
/// distances at which the support can be seen from `z`.
pub fn cauchy_transform(datum: &AnnulusDatum, z: Complex64, resolution: usize) -> Complex64 {
    let dist = z.norm();
    let lo = (1.0 - dist).max(dist - SQRT_2).max(0.0);
    let hi = dist + SQRT_2;
    let n_r = resolution;
    let n_t = 4 * resolution;
    let dr = (hi - lo) / n_r as f64;
    let dt = 2.0 * PI / n_t as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n_r {
        let r = lo + (a as f64 + 0.5) * dr;
        for b in 0..n_t {
            let t = (b as f64 + 0.5) * dt;
            let dir = Complex64::from_polar(1.0, t);
            acc += datum.eval(z + r * dir) * dir.conj();
        }
    }
    acc * (-dr * dt / PI)
}

/// Transform plus the disagreement between the requested resolution and
/// its double. The second component is an error estimate, not a bound.
pub fn cauchy_transform_checked(datum: &AnnulusDatum, z: Complex64) -> (Complex64, f64) {
    let coarse = cauchy_transform(datum, z, datum.resolution());
    let fine = cauchy_transform(datum, z, 2 * datum.resolution());
    (fine, (fine - coarse).norm())
}

/// What the support demo measured. `u_at_zero` sits in the hole where the
/// datum vanishes identically; `radial_oracle` is the independently
/// integrated exact value it must match, `-amplitude · ∫_1^2 bump`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    pub u_at_zero: Complex64,
    pub radial_oracle: f64,
    pub rel_err: f64,
    /// Successive disagreements at resolution, 2x, 4x; should shrink.
    pub refinement_deltas: Vec<f64>,
    /// Largest deviation of `u` from `u(0)` over sample points inside the
    /// hole, where the transform is exactly constant.
    pub hole_spread: f64,
    /// Relative error of a central-difference check of
    /// `(d/dx + i d/dy) u / 2 = f` at an interior point of the support.
    pub dbar_rel_err: f64,
    pub hole_nonzero: bool,
}

impl std::fmt::Display for SupportReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "u(0)            = {:+.12e} {:+.12e}i",
            self.u_at_zero.re, self.u_at_zero.im
        )?;
        writeln!(f, "radial oracle   = {:+.12e}", self.radial_oracle)?;
        writeln!(f, "relative error  = {:.3e}", self.rel_err)?;
        writeln!(
            f,
            "refinement      = {}",
            self.refinement_deltas
                .iter()
                .map(|d| format!("{d:.3e}"))
                .collect::<Vec<_>>()
                .join(" -> ")
        )?;
        writeln!(f, "hole spread     = {:.3e}", self.hole_spread)?;
        writeln!(f, "dbar check      = {:.3e}", self.dbar_rel_err)?;
        write!(
            f,
            "datum vanishes on |z| < 1, transform does not: {}",
            if self.hole_nonzero { "confirmed" } else { "FAILED" }
        )
    }
}

/// Evaluates the transform in the hole of the annulus and checks it
/// against the exact radial integral, plus a derivative spot check inside
/// the support. Demonstrates that the solution of a d-bar problem is
/// nonzero where the datum vanishes.
pub fn support_demo(datum: &AnnulusDatum) -> SupportReport {
    let res = datum.resolution();
    let origin = Complex64::new(0.0, 0.0);
    let u_coarse = cauchy_transform(datum, origin, res);
    let u_mid = cauchy_transform(datum, origin, 2 * res);
    let u_fine = cauchy_transform(datum, origin, 4 * res);
    let radial_oracle = -datum.amplitude() * radial_integral(bump, 1.0, 2.0, 4096);
    let rel_err = (u_fine - radial_oracle).norm() / radial_oracle.abs();

    let hole_spread = [
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, -0.7),
        Complex64::new(-0.4, 0.3),
    ]
    .iter()
    .map(|&p| (cauchy_transform(datum, p, 2 * res) - u_mid).norm())
    .fold(0.0, f64::max);

    // Central differences at a point strictly inside the annulus; the
    // transform there is smooth but not holomorphic.
    let z0 = Complex64::new(1.2, 0.1);
    let h = 1e-3;
    let u = |p: Complex64| cauchy_transform(datum, p, 2 * res);
    let ux = (u(z0 + Complex64::new(h, 0.0)) - u(z0 - Complex64::new(h, 0.0))) / (2.0 * h);
    let uy = (u(z0 + Complex64::new(0.0, h)) - u(z0 - Complex64::new(0.0, h))) / (2.0 * h);
    let dbar = (ux + Complex64::i() * uy) / 2.0;
    let f0 = datum.eval(z0);
    let dbar_rel_err = (dbar - f0).norm() / f0.norm();

    SupportReport {
        u_at_zero: u_fine,
        radial_oracle,
        rel_err,
        refinement_deltas: vec![(u_mid - u_coarse).norm(), (u_fine - u_mid).norm()],
        hole_spread,
        dbar_rel_err,
        hole_nonzero: u_fine.norm() > 1e-6 * datum.amplitude(),
    }
}
