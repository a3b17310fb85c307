//! Real special functions underlying every kernel in the crate: Gamma,
//! Bessel J of real order, modified Bessel K, and the sphere kernel
//! `S_d(t) = J_{d/2-1}(t) / t^{d/2-1}` (continuously extended to `t = 0`).
//!
//! Evaluation strategy: power series for small arguments, Hankel asymptotic
//! expansions with optimal truncation for orders 0/1 at large arguments,
//! normalized backward recurrence for general real order at large arguments,
//! and Temme's series plus a continued fraction for K.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Argument pair for the sphere kernel; `d >= 2`, `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereKernelArg {
    pub d: u32,
    pub t: f64,
}

impl SphereKernelArg {
    pub fn new(d: u32, t: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("sphere kernel needs d >= 2, got {d}")));
        }
        if !(t >= 0.0) {
            return Err(Error::domain(format!("sphere kernel needs t >= 0, got {t}")));
        }
        Ok(Self { d, t })
    }
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x - 1.0 + i as f64);
    }
    a
}

/// Gamma function for positive real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    Ok(gamma_raw(x))
}

fn gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the Lanczos argument above 1/2
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_raw(1.0 - x))
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(x)
    }
}

/// J_nu(x) by the ascending power series; safe for x up to ~12.
fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let x2 = 0.5 * x;
    let q = x2 * x2;
    let mut term = x2.powf(nu) / gamma_raw(nu + 1.0);
    let mut sum = term;
    for m in 1..200 {
        let m = m as f64;
        term *= -q / (m * (nu + m));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Hankel asymptotic amplitude pair (P, Q) for order nu, truncated at the
/// smallest term. Valid for x well above ~10.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let z = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * z);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn bessel_j_asymptotic(nu: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn bessel_y_asymptotic(nu: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.sin() + q * chi.cos())
}

/// Backward (Miller) recurrence with Neumann-series normalization
/// `sum_k c_k J_{mu+2k}(x) = (x/2)^mu`, for real order and x >= ~12.
fn bessel_j_miller(nu: f64, x: f64) -> f64 {
    let n_target = nu.floor() as usize;
    let mu = nu - nu.floor();
    let start = (x + 16.0 * x.cbrt()).max(nu + 30.0) as usize + 1;
    // start of downward recurrence, forced even so the normalization sum
    // indexes land on mu + 2k
    let m_max = start + (start % 2);

    let mut jp = 0.0_f64; // J_{mu + m + 1}
    let mut j = 1e-305_f64; // J_{mu + m}
    let mut target_val = 0.0;
    let mut norm = 0.0;
    let mut c = vec![0.0; m_max / 2 + 1];
    // c_k by the ratio c_{k+1}/c_k = (mu+2k+2)(mu+k) / ((mu+2k)(k+1))
    c[0] = gamma_raw(mu + 1.0);
    if m_max >= 2 {
        c[1] = (mu + 2.0) * gamma_raw(mu + 1.0);
    }
    for k in 1..m_max / 2 {
        let kf = k as f64;
        c[k + 1] = c[k] * (mu + 2.0 * kf + 2.0) * (mu + kf) / ((mu + 2.0 * kf) * (kf + 1.0));
    }

    for m in (0..=m_max).rev() {
        let order = mu + m as f64;
        let jm = 2.0 * (order + 1.0) / x * j - jp;
        jp = j;
        j = jm;
        if m % 2 == 0 {
            norm += c[m / 2] * j;
        }
        if m == n_target {
            target_val = j;
        }
        if j.abs() > 1e250 {
            jp /= 1e250;
            j /= 1e250;
            norm /= 1e250;
            target_val /= 1e250;
        }
    }
    target_val * (0.5 * x).powf(mu) / norm
}

const SERIES_ASYMPTOTIC_SPLIT: f64 = 12.0;

/// Bessel function of the first kind, real order in [0, 20].
pub fn bessel_j(order: f64, t: f64) -> Result<f64> {
    if !(0.0..=20.0).contains(&order) {
        return Err(Error::domain(format!(
            "bessel_j supports order in [0, 20], got {order}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::domain(format!("bessel_j requires t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(if order == 0.0 { 1.0 } else { 0.0 });
    }
    if t < SERIES_ASYMPTOTIC_SPLIT {
        Ok(bessel_j_series(order, t))
    } else if order == 0.0 || order == 1.0 {
        Ok(bessel_j_asymptotic(order, t))
    } else {
        Ok(bessel_j_miller(order, t))
    }
}

/// Fast path for J_0, used heavily inside quadrature loops.
pub(crate) fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_ASYMPTOTIC_SPLIT {
        bessel_j_series(0.0, x)
    } else {
        bessel_j_asymptotic(0.0, x)
    }
}

pub(crate) fn bessel_j1(x: f64) -> f64 {
    if x.abs() < SERIES_ASYMPTOTIC_SPLIT {
        bessel_j_series(1.0, x.abs()) * x.signum()
    } else {
        bessel_j_asymptotic(1.0, x.abs()) * x.signum()
    }
}

/// Bessel function of the second kind, order zero (positive arguments).
/// Carries the outgoing Hankel combination for the planar Helmholtz kernel.
pub(crate) fn bessel_y0(x: f64) -> f64 {
    assert!(x > 0.0, "y0 needs x > 0");
    if x < SERIES_ASYMPTOTIC_SPLIT {
        // Y0 = (2/pi)[(ln(x/2)+gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m (x^2/4)^m/(m!)^2]
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut h = 0.0;
        let mut sum = 0.0;
        for m in 1..200 {
            let m = m as f64;
            term *= q / (m * m);
            h += 1.0 / m;
            let del = if (m as usize) % 2 == 1 { term * h } else { -term * h };
            sum += del;
            if term * h < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        let two_over_pi = std::f64::consts::FRAC_2_PI;
        two_over_pi * (((0.5 * x).ln() + EULER_GAMMA) * bessel_j0(x) + sum)
    } else {
        bessel_y_asymptotic(0.0, x)
    }
}

/// Temme series for K_mu, K_{mu+1} with |mu| <= 1/2 and x <= 2.
fn bessel_k_temme(mu: f64, x: f64) -> (f64, f64) {
    let x1 = 0.5 * x;
    let mu2 = mu * mu;
    let d = -x1.ln();
    let e = mu * d;
    let pimu = std::f64::consts::PI * mu;
    let fact = if pimu.abs() < 1e-12 { 1.0 } else { pimu / pimu.sin() };
    let fact2 = if e.abs() < 1e-12 { 1.0 } else { e.sinh() / e };
    let gampl = 1.0 / gamma_raw(1.0 + mu);
    let gammi = 1.0 / gamma_raw(1.0 - mu);
    let gam1 = if mu.abs() < 1e-5 {
        -EULER_GAMMA
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    let gam2 = 0.5 * (gammi + gampl);

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let mut c = 1.0;
    let mut p = 0.5 * x1.powf(-mu) / gampl;
    let mut q = 0.5 * x1.powf(mu) / gammi;
    let mut sum1 = p;
    let q2 = x1 * x1;
    for i in 1..400 {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= q2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// K_mu, K_{mu+1} for x > 2 via the integral representation
/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`; the integrand decays
/// doubly exponentially, so a plain trapezoid rule is accurate to roundoff.
fn bessel_k_integral(mu: f64, x: f64) -> (f64, f64) {
    let h = 0.04_f64.min(0.35 / x.sqrt());
    let mut k0 = 0.5 * (-x).exp();
    let mut k1 = k0;
    let mut t = h;
    loop {
        let w = (-x * t.cosh()).exp();
        if w == 0.0 || w < 1e-20 * (k0.abs() + 1e-300) {
            break;
        }
        k0 += w * (mu * t).cosh();
        k1 += w * ((mu + 1.0) * t).cosh();
        t += h;
    }
    (k0 * h, k1 * h)
}

/// Modified Bessel function of the second kind, real order >= 0, t > 0.
/// Underflows to zero for t beyond ~700.
pub fn bessel_k(order: f64, t: f64) -> Result<f64> {
    if order < 0.0 {
        return Err(Error::domain(format!("bessel_k requires order >= 0, got {order}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("bessel_k requires t > 0, got {t}")));
    }
    let nl = (order + 0.5).floor() as usize;
    let mu = order - nl as f64; // in [-1/2, 1/2)
    let (mut km, mut kp) = if t <= 2.0 {
        bessel_k_temme(mu, t)
    } else {
        bessel_k_integral(mu, t)
    };
    for j in 0..nl {
        let nu_j = mu + j as f64;
        let knext = km + 2.0 * (nu_j + 1.0) / t * kp;
        km = kp;
        kp = knext;
    }
    Ok(km)
}

/// S_d(t): the radial profile of the unit-sphere surface measure transform,
/// `J_{d/2-1}(t)/t^{d/2-1}` for t > 0 and `2^{1-d/2}/Gamma(d/2)` at t = 0.
pub fn sphere_kernel(d: u32, t: f64) -> Result<f64> {
    let arg = SphereKernelArg::new(d, t)?;
    Ok(sphere_kernel_raw(arg.d, arg.t))
}

pub(crate) fn sphere_kernel_raw(d: u32, t: f64) -> f64 {
    debug_assert!(d >= 2 && t >= 0.0);
    if d == 3 {
        // sqrt(2/pi) sin t / t, with the small-t series to avoid 0/0
        let c = (2.0 / std::f64::consts::PI).sqrt();
        if t < 1e-4 {
            let t2 = t * t;
            return c * (1.0 - t2 / 6.0 + t2 * t2 / 120.0);
        }
        return c * t.sin() / t;
    }
    if d == 2 {
        return bessel_j0(t);
    }
    let nu = 0.5 * d as f64 - 1.0;
    if t < 0.5 {
        // J_nu(t)/t^nu as a series in t^2; regular at t = 0
        let q = 0.25 * t * t;
        let mut term = 0.5f64.powf(nu) / gamma_raw(nu + 1.0);
        let mut sum = term;
        for m in 1..60 {
            let m = m as f64;
            term *= -q / (m * (nu + m));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        let j = if t < SERIES_ASYMPTOTIC_SPLIT {
            bessel_j_series(nu, t)
        } else {
            bessel_j_miller(nu, t)
        };
        j / t.powf(nu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gamma_basics() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(0.5).unwrap() - SQRT_PI).abs() / SQRT_PI < 1e-13);
        // oracle: recurrence from Gamma(1/2)
        assert!((gamma_fn(1.5).unwrap() - 0.5 * SQRT_PI).abs() < 1e-13);
    }

    #[test]
    fn gamma_recurrence_grid() {
        // Gamma(x+1) = x Gamma(x) across the advertised range
        let mut x = 0.5;
        while x < 29.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-12,
                "recurrence fails at x={x}: {lhs} vs {rhs}"
            );
            x += 0.37;
        }
        // frozen mpmath value
        assert!((gamma_fn(29.5).unwrap() - 1.634_812_519_827_426_6e30).abs() / 1.63e30 < 1e-12);
    }

    #[test]
    fn gamma_domain() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-2.0).is_err());
    }

    #[test]
    fn bessel_j_trivial_and_half_order() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3.0, 0.0).unwrap(), 0.0);
        // oracle: half-integer closed form sqrt(2/(pi t)) sin t
        for &t in &[0.3, 1.0, 2.5, 7.0, 20.0, 133.7] {
            let closed = (2.0 / (std::f64::consts::PI * t)).sqrt() * t.sin();
            assert!(
                (bessel_j(0.5, t).unwrap() - closed).abs() < 1e-12,
                "J_1/2({t})"
            );
        }
        assert!((bessel_j(0.5, 1.0).unwrap() - 0.671_396_707_141_803_1).abs() < 1e-12);
    }

    /// Independent series evaluation of J_1 used only as a test oracle.
    fn j1_oracle(x: f64) -> f64 {
        let x2 = 0.5 * x;
        let mut term = x2;
        let mut sum = term;
        for m in 1..80 {
            let m = m as f64;
            term *= -(x2 * x2) / (m * (m + 1.0));
            sum += term;
        }
        sum
    }

    #[test]
    fn bessel_j1_first_zero_by_bisection() {
        // oracle: bisection on the independent series around the first zero of J1
        let (mut a, mut b) = (3.5_f64, 4.2_f64);
        assert!(j1_oracle(a) > 0.0 && j1_oracle(b) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if j1_oracle(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let root = 0.5 * (a + b);
        assert!((root - 3.831_705_970_207_512).abs() < 1e-9);
        assert!((root - 3.831_706_0).abs() < 1e-6);
        assert!(bessel_j(1.0, root).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn bessel_j_large_argument_frozen() {
        // mpmath references
        assert!((bessel_j(1.0, 700.0).unwrap() - 0.029_489_824_084_030_33).abs() < 1e-10);
        assert!((bessel_j(20.0, 1000.0).unwrap() - 0.023_357_967_932_679_335).abs() < 1e-10);
        assert!((bessel_j(0.7, 300.0).unwrap() - (-0.043_492_121_536_718_66)).abs() < 1e-10);
        // method agreement at the dispatch split
        for &nu in &[0.0, 0.3, 1.0, 2.5, 7.0, 19.5] {
            let a = bessel_j_series(nu, 12.0);
            let b = if nu == 0.0 || nu == 1.0 {
                bessel_j_asymptotic(nu, 12.0)
            } else {
                bessel_j_miller(nu, 12.0)
            };
            assert!((a - b).abs() < 2e-10, "split mismatch at nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn bessel_j_domain() {
        assert!(bessel_j(-0.5, 1.0).is_err());
        assert!(bessel_j(21.0, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
    }

    #[test]
    fn bessel_k_half_order_closed_form() {
        // oracle: K_{1/2}(t) = sqrt(pi/(2t)) e^{-t}
        for &t in &[0.05, 0.5, 1.0, 2.0, 10.0, 100.0] {
            let closed = (std::f64::consts::PI / (2.0 * t)).sqrt() * (-t).exp();
            let got = bessel_k(0.5, t).unwrap();
            assert!(
                ((got - closed) / closed).abs() < 1e-10,
                "K_1/2({t}): {got} vs {closed}"
            );
        }
        assert!((bessel_k(0.5, 1.0).unwrap() - 0.461_068_504_447_894_56).abs() < 1e-12);
        // spec sheet lists 0.1993795 for K_{1/2}(2); the closed-form oracle gives
        // sqrt(pi/4) e^{-2} = 0.11993777..., which is what we assert.
        assert!((bessel_k(0.5, 2.0).unwrap() - 0.119_937_771_968_061_45).abs() < 1e-12);
    }

    #[test]
    fn bessel_k_monotone_and_frozen() {
        let mut prev = f64::INFINITY;
        let mut t = 0.1;
        while t <= 10.0 {
            let v = bessel_k(0.0, t).unwrap();
            assert!(v > 0.0 && v < prev, "K0 not decreasing at t={t}");
            prev = v;
            t += 0.1;
        }
        // mpmath references
        assert!((bessel_k(0.3, 1e-6).unwrap() - 116.164_630_606_269_13).abs() / 116.0 < 1e-10);
        let k650 = bessel_k(0.0, 650.0).unwrap();
        assert!((k650 - 2.512_502_884_662_839e-284).abs() / 2.51e-284 < 1e-9);
        assert_eq!(bessel_k(0.0, 800.0).unwrap(), 0.0);
        // upward recurrence consistency: K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu
        for &x in &[0.7, 3.0, 41.0] {
            let k0 = bessel_k(0.25, x).unwrap();
            let k1 = bessel_k(1.25, x).unwrap();
            let k2 = bessel_k(2.25, x).unwrap();
            assert!(((k2 - k0 - 2.5 / x * k1) / k2).abs() < 1e-9);
        }
    }

    #[test]
    fn bessel_k_domain() {
        assert!(bessel_k(0.5, 0.0).is_err());
        assert!(bessel_k(0.5, -1.0).is_err());
        assert!(bessel_k(-0.5, 1.0).is_err());
    }

    #[test]
    fn sphere_kernel_d3_closed_form() {
        let t = std::f64::consts::FRAC_PI_2;
        assert!((sphere_kernel(3, t).unwrap() - 0.507_949_087_473_927_8).abs() < 1e-12);
        assert!(sphere_kernel(3, std::f64::consts::PI).unwrap().abs() < 1e-12);
        // half-integer consistency on (0, 100]
        let mut t = 0.05_f64;
        while t <= 100.0 {
            let closed = (2.0 / std::f64::consts::PI).sqrt() * t.sin() / t;
            assert!((sphere_kernel(3, t).unwrap() - closed).abs() < 1e-10);
            t += 0.73;
        }
    }

    #[test]
    fn sphere_kernel_at_zero() {
        assert!((sphere_kernel(2, 0.0).unwrap() - 1.0).abs() < 1e-14);
        for d in 2..=6 {
            let expect = 2.0_f64.powf(1.0 - 0.5 * d as f64) / gamma_fn(0.5 * d as f64).unwrap();
            assert!((sphere_kernel(d, 0.0).unwrap() - expect).abs() < 1e-13);
            // continuity across t = 0
            let eps = sphere_kernel(d, 1e-4).unwrap();
            assert!((eps - expect).abs() <= 1e-6, "d={d}: {eps} vs {expect}");
            let tiny = sphere_kernel(d, 1e-6).unwrap();
            assert!(((tiny - expect) / expect).abs() <= 1e-8);
        }
    }

    #[test]
    fn sphere_kernel_decay_envelope() {
        // |S_d(t)| <= C t^{-(d-1)/2} for t >= 10; C frozen after one fit
        const C: f64 = 0.9;
        for d in 2..=6 {
            let mut t = 10.0_f64;
            while t <= 1000.0 {
                let bound = C * t.powf(-0.5 * (d as f64 - 1.0));
                let v = sphere_kernel(d, t).unwrap().abs();
                assert!(v <= bound, "d={d}, t={t}: {v} > {bound}");
                t *= 1.037;
            }
        }
    }

    #[test]
    fn sphere_kernel_domain() {
        assert!(sphere_kernel(1, 1.0).is_err());
        assert!(sphere_kernel(3, -0.1).is_err());
    }

    #[test]
    fn y0_against_frozen_reference() {
        assert!((bessel_y0(1.0) - 0.088_256_964_215_676_96).abs() < 1e-12);
        // Wronskian J1 Y0 - J0 Y1' ... use instead the standard identity
        // J0(x) Y0'(x) - J0'(x) Y0(x) = 2/(pi x) via finite differences
        for &x in &[0.5, 3.0, 9.0, 15.0, 80.0] {
            let h = 1e-5;
            let dy0 = (bessel_y0(x + h) - bessel_y0(x - h)) / (2.0 * h);
            let dj0 = (bessel_j0(x + h) - bessel_j0(x - h)) / (2.0 * h);
            let w = bessel_j0(x) * dy0 - dj0 * bessel_y0(x);
            let expect = 2.0 / (std::f64::consts::PI * x);
            assert!(((w - expect) / expect).abs() < 1e-5, "wronskian at {x}");
        }
    }
}
