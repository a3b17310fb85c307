//! Fundamental solutions of the fractional Helmholtz operator
//! `(-Delta)^s - k^{2s}` evaluated by independent routes:
//!
//! - `phi_fractional_radial`: principal-value radial integral plus the
//!   on-shell sphere-kernel term,
//! - `phi_fractional_decomp`: classical kernel rescaled by `k^{2(1-s)}/s`
//!   plus a positive spectral-measure correction,
//! - `phi_classical`: closed form in d = 3, the PV engine elsewhere,
//! - `phi_far_asymptote`: the leading radiating term.
//!
//! Cross-route agreement is the primary correctness check for everything
//! downstream of this module.

mod quad;
pub mod table;

pub use quad::QuadratureSpec;
pub(crate) use quad::{adaptive_gauss, integrate_gauss};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_j0, bessel_k, bessel_y0, sphere_kernel_raw};

/// Outgoing/incoming branch of the limiting-absorption limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Outgoing,
    Incoming,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Outgoing => 1.0,
            Branch::Incoming => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Outgoing => Branch::Incoming,
            Branch::Incoming => Branch::Outgoing,
        }
    }
}

/// Dimension, fractional order, wavenumber and branch; governs every kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub d: u32,
    pub s: f64,
    pub k: f64,
    pub branch: Branch,
}

impl ProblemParams {
    pub fn new(d: u32, s: f64, k: f64, branch: Branch) -> Result<Self> {
        let p = ProblemParams { d, s, k, branch };
        p.validate()?;
        Ok(p)
    }

    pub fn outgoing(d: u32, s: f64, k: f64) -> Result<Self> {
        Self::new(d, s, k, Branch::Outgoing)
    }

    /// Basic range checks; s = 1 is admitted for classical control runs.
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {}", self.d)));
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::domain(format!(
                "fractional order must lie in (0, 1], got {}",
                self.s
            )));
        }
        if !(self.k > 0.0) {
            return Err(Error::domain(format!("wavenumber must be positive, got {}", self.k)));
        }
        Ok(())
    }

    /// Admissibility window required by the forward/inverse theory.
    pub fn check_inversion_window(&self) -> Result<()> {
        self.validate()?;
        let df = self.d as f64;
        let lo = df / (df + 1.0);
        let hi = (0.5 * df).min(1.0);
        if self.d < 3 {
            return Err(Error::domain(format!(
                "inversion theory requires d >= 3, got {}",
                self.d
            )));
        }
        if !(self.s > lo && self.s < hi) {
            return Err(Error::domain(format!(
                "fractional order {} outside the admissible interval ({lo:.6}, {hi:.6})",
                self.s
            )));
        }
        Ok(())
    }
}

/// Which evaluation path produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensMethod {
    RadialPv,
    Decomposition,
    ClassicalClosed,
    Asymptote,
}

impl GreensMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GreensMethod::RadialPv => "radial_pv",
            GreensMethod::Decomposition => "decomposition",
            GreensMethod::ClassicalClosed => "classical_closed",
            GreensMethod::Asymptote => "asymptote",
        }
    }
}

/// Kernel value with provenance and an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct GreensValue {
    pub value: Complex64,
    pub method: GreensMethod,
    pub est_error: f64,
}

/// Classical Helmholtz kernel: closed form in d = 3, PV engine otherwise.
pub fn phi_classical(params: &ProblemParams, r: f64) -> Result<GreensValue> {
    phi_classical_with(params, r, &QuadratureSpec::for_wavenumber(params.k))
}

pub fn phi_classical_with(
    params: &ProblemParams,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<GreensValue> {
    params.validate()?;
    if !(r > 0.0) {
        return Err(Error::domain(format!("kernel distance must be positive, got {r}")));
    }
    let k = params.k;
    let sign = params.branch.sign();
    if params.d == 3 {
        let phase = Complex64::from_polar(1.0, sign * k * r);
        return Ok(GreensValue {
            value: phase / (4.0 * std::f64::consts::PI * r),
            method: GreensMethod::ClassicalClosed,
            est_error: 1e-16,
        });
    }
    let df = params.d as f64;
    let (pv, est) = quad::pv_radial_integral(params.d, 1.0, k * r, quad)?;
    let shell = std::f64::consts::FRAC_PI_2 * sphere_kernel_raw(params.d, k * r);
    let pref = k.powf(df - 2.0) * (2.0 * std::f64::consts::PI).powf(-0.5 * df);
    Ok(GreensValue {
        value: pref * Complex64::new(pv, sign * shell),
        method: GreensMethod::RadialPv,
        est_error: pref * est,
    })
}

/// Closed planar outgoing kernel `(i/4) H_0^(1)(k r)` (conjugated for the
/// incoming branch). Independent of the PV engine; used by fast paths and as
/// a cross-check.
pub(crate) fn phi_classical_planar_closed(k: f64, r: f64, branch: Branch) -> Complex64 {
    let re = -bessel_y0(k * r) / 4.0;
    let im = bessel_j0(k * r) / 4.0;
    Complex64::new(re, branch.sign() * im)
}

/// Fractional kernel by the radial PV route.
pub fn phi_fractional_radial(
    params: &ProblemParams,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<GreensValue> {
    params.validate()?;
    if !(r > 0.0) {
        return Err(Error::domain(format!("kernel distance must be positive, got {r}")));
    }
    if params.s >= 1.0 {
        return Err(Error::domain("fractional routes need s < 1; use phi_classical"));
    }
    let (d, s, k) = (params.d, params.s, params.k);
    let df = d as f64;
    let (pv, est) = quad::pv_radial_integral(d, s, k * r, quad)?;
    let shell = std::f64::consts::PI / (2.0 * s) * sphere_kernel_raw(d, k * r);
    let pref = k.powf(df - 2.0 * s) * (2.0 * std::f64::consts::PI).powf(-0.5 * df);
    Ok(GreensValue {
        value: pref * Complex64::new(pv, params.branch.sign() * shell),
        method: GreensMethod::RadialPv,
        est_error: pref * est,
    })
}

/// Resolvent kernel of `(lambda - Delta)^{-1}` as a point evaluation.
pub fn yukawa_kernel(d: u32, lambda: f64, r: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain(format!("yukawa kernel needs d >= 2, got {d}")));
    }
    if !(lambda > 0.0 && r > 0.0) {
        return Err(Error::domain("yukawa kernel needs lambda > 0 and r > 0"));
    }
    let rt = lambda.sqrt();
    if d == 3 {
        return Ok((-rt * r).exp() / (4.0 * std::f64::consts::PI * r));
    }
    let df = d as f64;
    let nu = 0.5 * df - 1.0;
    let kv = bessel_k(nu, rt * r)?;
    Ok((2.0 * std::f64::consts::PI).powf(-0.5 * df) * (rt / r).powf(nu) * kv)
}

/// Real correction completing the classical part to the fractional kernel.
pub fn lambda_correction(params: &ProblemParams, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    if params.s >= 1.0 {
        return Ok(0.0);
    }
    let (v, _est) = quad::lambda_correction_integral(params.d, params.s, params.k, r, quad)?;
    Ok(v)
}

/// Fractional kernel via the resolvent decomposition route.
pub fn phi_fractional_decomp(
    params: &ProblemParams,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<GreensValue> {
    params.validate()?;
    if !(r > 0.0) {
        return Err(Error::domain(format!("kernel distance must be positive, got {r}")));
    }
    let (s, k) = (params.s, params.k);
    let classical = phi_classical_with(params, r, quad)?;
    let scale = k.powf(2.0 * (1.0 - s)) / s;
    let (corr, corr_est) = if s < 1.0 {
        quad::lambda_correction_integral(params.d, s, k, r, quad)?
    } else {
        (0.0, 0.0)
    };
    Ok(GreensValue {
        value: scale * classical.value + Complex64::new(corr, 0.0),
        method: GreensMethod::Decomposition,
        est_error: scale * classical.est_error + corr_est,
    })
}

/// Leading radiating term of the kernel at large k r.
pub fn phi_far_asymptote(params: &ProblemParams, r: f64) -> Result<GreensValue> {
    params.validate()?;
    if !(r > 0.0) {
        return Err(Error::domain(format!("kernel distance must be positive, got {r}")));
    }
    let (d, s, k) = (params.d as f64, params.s, params.k);
    let sign = params.branch.sign();
    let amp = k.powf(2.0 * (1.0 - s)) / s * k.powf(0.5 * (d - 3.0))
        / (2.0_f64.powf(0.5 * (d + 1.0)) * std::f64::consts::PI.powf(0.5 * (d - 1.0)));
    // phase conjugates with the branch so the two branches stay complex
    // conjugate, matching the exact kernels
    let phase = Complex64::from_polar(
        1.0,
        sign * (k * r - std::f64::consts::FRAC_PI_4 * (d - 3.0)),
    );
    Ok(GreensValue {
        value: amp * phase / r.powf(0.5 * (d - 1.0)),
        method: GreensMethod::Asymptote,
        est_error: 0.0,
    })
}

/// Route selector for point evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensRoute {
    Radial,
    Decomposition,
    Asymptote,
}

/// Kernel at a point; values depend on the point only through its norm.
pub fn phi_at_point(
    params: &ProblemParams,
    x: &[f64],
    quad: &QuadratureSpec,
    route: GreensRoute,
) -> Result<GreensValue> {
    if x.len() != params.d as usize {
        return Err(Error::Mismatch(format!(
            "point has {} coordinates, params say d = {}",
            x.len(),
            params.d
        )));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    match route {
        GreensRoute::Radial => {
            if params.s < 1.0 {
                phi_fractional_radial(params, r, quad)
            } else {
                phi_classical_with(params, r, quad)
            }
        }
        GreensRoute::Decomposition => phi_fractional_decomp(params, r, quad),
        GreensRoute::Asymptote => phi_far_asymptote(params, r),
    }
}
