//! Quadrature engines for the radial kernel integrals: adaptive
//! Gauss-Legendre panels, Wynn-epsilon acceleration of oscillatory tails,
//! a folded principal-value rule for the simple pole at t = 1, and the
//! spectral-measure correction integral.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::specfun::{bessel_k, sphere_kernel_raw};

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1].
fn gauss_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = nf * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn g16() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| gauss_nodes(16))
}

fn g32() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| gauss_nodes(32))
}

pub(crate) fn integrate_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = match n {
        16 => g16(),
        32 => g32(),
        _ => unreachable!("unsupported gauss order"),
    };
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        acc += wi * f(mid + half * xi);
    }
    acc * half
}

/// Adaptive Gauss-Legendre by panel bisection; error from the G16/G32 gap.
pub(crate) fn adaptive_gauss<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> (f64, f64) {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
        coarse: f64,
    ) -> (f64, f64) {
        let fine = integrate_gauss(f, a, b, 32);
        let err = (fine - coarse).abs();
        if err <= tol || depth >= 28 {
            return (fine, err);
        }
        let mid = 0.5 * (a + b);
        let cl = integrate_gauss(f, a, mid, 16);
        let cr = integrate_gauss(f, mid, b, 16);
        let (vl, el) = recurse(f, a, mid, 0.5 * tol, depth + 1, cl);
        let (vr, er) = recurse(f, mid, b, 0.5 * tol, depth + 1, cr);
        (vl + vr, el + er)
    }
    let coarse = integrate_gauss(f, a, b, 16);
    recurse(f, a, b, abs_tol, 0, coarse)
}

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// accelerated limit and an error estimate from the last stable column.
pub(crate) fn wynn_epsilon(partials: &[f64]) -> (f64, f64) {
    let n = partials.len();
    if n == 1 {
        return (partials[0], f64::INFINITY);
    }
    let mut prev_col = vec![0.0; n + 1]; // epsilon_{-1}
    let mut col = partials.to_vec(); // epsilon_0
    let mut best = *partials.last().unwrap();
    let mut best_err = (partials[n - 1] - partials[n - 2]).abs();
    let mut k = 1;
    while col.len() > 1 {
        let mut next = Vec::with_capacity(col.len() - 1);
        for j in 0..col.len() - 1 {
            let diff = col[j + 1] - col[j];
            if diff.abs() < 1e-300 {
                // converged to roundoff
                return (col[j + 1], 0.0);
            }
            next.push(prev_col[j + 1] + 1.0 / diff);
        }
        if k % 2 == 0 && next.len() >= 2 {
            let cand = *next.last().unwrap();
            let err = (cand - next[next.len() - 2]).abs();
            if err < best_err {
                best_err = err;
                best = cand;
            }
        }
        prev_col = col;
        col = next;
        k += 1;
    }
    if k % 2 == 1 && col.len() == 1 {
        // odd columns are not estimates; keep previous best unless the final
        // even column emerged as the single survivor
    }
    (best, best_err)
}

/// Tolerances and truncation controls for the kernel quadratures.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Half-width of the symmetric principal-value window around t = 1.
    pub pole_window: f64,
    /// Phase (in units of k r t) at which the oscillatory tail partition starts.
    pub tail_start: f64,
    /// Number of half-period panels fed to the extrapolation.
    pub tail_periods: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Base truncation of the spectral-measure integral (lambda units).
    pub lambda_max: f64,
    /// Default absorption regularization for limiting-absorption selections.
    pub epsilon_absorption: f64,
}

impl QuadratureSpec {
    pub fn for_wavenumber(k: f64) -> Self {
        QuadratureSpec {
            pole_window: 0.25,
            tail_start: 6.0,
            tail_periods: 48,
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            lambda_max: (50.0 * k) * (50.0 * k),
            epsilon_absorption: 1e-6 * k * k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pole_window > 0.0 && self.pole_window < 0.5) {
            return Err(Error::domain(format!(
                "pole_window must lie in (0, 1/2), got {}",
                self.pole_window
            )));
        }
        if self.abs_tol <= 0.0 || self.rel_tol <= 0.0 || self.lambda_max <= 0.0 {
            return Err(Error::domain("tolerances and lambda_max must be positive"));
        }
        Ok(())
    }
}

/// PV integral `PV int_0^inf t^{d-1} S_d(a t) / (t^{2s} - 1) dt` for a > 0.
///
/// The pole at t = 1 is removed by folding the window [1-w, 1+w] onto [0, w];
/// the oscillatory tail is partitioned into half-periods of the sphere-kernel
/// phase and extrapolated.
pub(crate) fn pv_radial_integral(
    d: u32,
    s: f64,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    quad.validate()?;
    if a <= 0.0 {
        return Err(Error::domain("pv_radial_integral needs a > 0"));
    }
    let df = d as f64;
    // tail amplitude ~ t^{(d-1)/2 - 2s}; without decay the integral diverges
    if 0.5 * (df - 1.0) - 2.0 * s >= -1e-9 {
        return Err(Error::domain(format!(
            "radial route diverges for d={d}, s={s}: oscillatory amplitude does not decay"
        )));
    }
    let w = quad.pole_window;
    let g = |t: f64| t.powf(df - 1.0) * sphere_kernel_raw(d, a * t) / (t.powf(2.0 * s) - 1.0);

    // [0, 1-w]
    let (low, err_low) = adaptive_gauss(&g, 0.0, 1.0 - w, 0.1 * quad.abs_tol);

    // folded PV window
    let folded = |u: f64| g(1.0 + u) + g(1.0 - u);
    let (win, err_win) = adaptive_gauss(&folded, 1e-13, w, 0.1 * quad.abs_tol);

    // smooth mid segment up to the first asymptotic phase zero past tail_start
    let phase0 = (df - 1.0) * std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2;
    let t_mid_end = {
        let target = quad.tail_start.max(a * (1.0 + w) + 0.1);
        let n = ((target - phase0) / std::f64::consts::PI).ceil().max(1.0);
        (phase0 + n * std::f64::consts::PI) / a
    };
    let (mid, err_mid) = if t_mid_end > 1.0 + w {
        adaptive_gauss(&g, 1.0 + w, t_mid_end, 0.1 * quad.abs_tol)
    } else {
        (0.0, 0.0)
    };

    // oscillatory tail: half-period panels + epsilon extrapolation
    let half_period = std::f64::consts::PI / a;
    let t0 = t_mid_end.max(1.0 + w);
    let mut partials = Vec::with_capacity(quad.tail_periods);
    let mut acc = 0.0;
    let mut prev_mag = f64::INFINITY;
    let mut grew = 0;
    for n in 0..quad.tail_periods {
        let a_panel = t0 + n as f64 * half_period;
        let b_panel = a_panel + half_period;
        let v = integrate_gauss(&g, a_panel, b_panel, 16);
        acc += v;
        partials.push(acc);
        if v.abs() > prev_mag {
            grew += 1;
            if grew > 6 && n > 12 {
                return Err(Error::NonConvergence {
                    what: format!("oscillatory tail grows (d={d}, s={s}, a={a})"),
                    est_error: v.abs(),
                    tol: quad.abs_tol,
                });
            }
        }
        prev_mag = v.abs();
    }
    let (tail, err_tail) = wynn_epsilon(&partials);

    let value = low + win + mid + tail;
    let est = err_low + err_win + err_mid + err_tail;
    let tol = quad.abs_tol.max(quad.rel_tol * value.abs());
    if !est.is_finite() || est > 1e3 * tol {
        return Err(Error::NonConvergence {
            what: format!("pv radial integral (d={d}, s={s}, a={a})"),
            est_error: est,
            tol,
        });
    }
    Ok((value, est))
}

/// Spectral-measure correction integral
/// `(sin s pi / pi) int_0^inf lambda^s G_lambda(r) / |lambda^s - k^{2s} e^{i s pi}|^2 dlambda`
/// evaluated after the substitution `lambda = k^2 tau^2`.
pub(crate) fn lambda_correction_integral(
    d: u32,
    s: f64,
    k: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    quad.validate()?;
    if !(r > 0.0 && k > 0.0) {
        return Err(Error::domain("lambda correction needs r > 0, k > 0"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!(
            "lambda correction defined for s in (0,1), got {s}"
        )));
    }
    let df = d as f64;
    let nu = 0.5 * df - 1.0;
    let cos_spi = (s * std::f64::consts::PI).cos();
    let kr = k * r;

    // integrand in tau, without the overall prefactor
    let f = |tau: f64| -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let z = kr * tau;
        let kv = if d == 3 {
            // closed form K_{1/2}
            (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp()
        } else {
            bessel_k(nu, z).unwrap_or(0.0)
        };
        if kv == 0.0 {
            return 0.0;
        }
        let t2s = tau.powf(2.0 * s);
        let denom = t2s * t2s - 2.0 * t2s * cos_spi + 1.0;
        tau.powf(2.0 * s + 0.5 * df) * kv / denom
    };

    let tau_base = quad.lambda_max.sqrt() / k;
    let tau_max = tau_base.max(46.0 / kr);

    // geometric segments; the integrand peaks somewhere below ~1/(k r)
    let mut edges = vec![0.0, 0.5, 1.5];
    let mut e = 3.0;
    while e < tau_max {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(tau_max);

    let seg_tol = 0.05 * quad.abs_tol;
    let mut value = 0.0;
    let mut est = 0.0;
    for win in edges.windows(2) {
        let (v, err) = adaptive_gauss(&f, win[0], win[1], seg_tol);
        value += v;
        est += err;
        if win[0] > 3.0 / kr && v.abs() < 1e-3 * seg_tol {
            break;
        }
    }

    // discarded tail: integrand decays at least like e^{-k r (tau - tau_max)}
    let f_end = f(tau_max);
    let tail_bound = 2.0 * f_end / kr;
    if tail_bound > quad.abs_tol {
        return Err(Error::NonConvergence {
            what: format!("lambda integral tail bound (d={d}, s={s}, k={k}, r={r})"),
            est_error: tail_bound,
            tol: quad.abs_tol,
        });
    }
    est += tail_bound;

    let pref = 2.0 * (s * std::f64::consts::PI).sin() / std::f64::consts::PI
        * k.powf(2.0 - 2.0 * s)
        * (2.0 * std::f64::consts::PI).powf(-0.5 * df)
        * (k / r).powf(nu);
    Ok((pref * value, pref.abs() * est))
}
