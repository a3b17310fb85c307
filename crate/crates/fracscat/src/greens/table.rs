//! Tabulated radial kernel for bulk evaluation. The oscillatory classical
//! part is kept in closed form (d = 2, 3); only the smooth positive
//! correction is tabulated, on a geometric grid with log-log cubic
//! interpolation. Power-law continuation is used beyond the table ends.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::{phi_classical_planar_closed, ProblemParams, QuadratureSpec};

#[derive(Debug, Clone)]
pub struct RadialKernelTable {
    params: ProblemParams,
    scale: f64,
    log_r0: f64,
    step: f64,
    log_corr: Vec<f64>,
    r_min: f64,
    r_max: f64,
}

impl RadialKernelTable {
    /// Build a table covering [r_min, r_max]; points per decade control the
    /// interpolation error of the correction term (the classical part is exact).
    pub fn build(
        params: &ProblemParams,
        quad: &QuadratureSpec,
        r_min: f64,
        r_max: f64,
        per_decade: usize,
    ) -> Result<Self> {
        params.validate()?;
        if params.d != 2 && params.d != 3 {
            return Err(Error::domain(
                "kernel tables support d = 2 and d = 3 (closed classical part)",
            ));
        }
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::domain("table range must satisfy 0 < r_min < r_max"));
        }
        let per_decade = per_decade.max(16);
        let step = std::f64::consts::LN_10 / per_decade as f64;
        // two guard points each side keep the cubic stencil interior
        let log_r0 = r_min.ln() - 2.0 * step;
        let count = ((r_max.ln() - log_r0) / step).ceil() as usize + 3;

        let scale = params.k.powf(2.0 * (1.0 - params.s)) / params.s;
        let log_corr = if params.s < 1.0 {
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let r = (log_r0 + i as f64 * step).exp();
                    super::quad::lambda_correction_integral(params.d, params.s, params.k, r, quad)
                        .map(|(v, _)| v.max(1e-300).ln())
                })
                .collect::<Result<Vec<f64>>>()?
        } else {
            Vec::new()
        };

        Ok(RadialKernelTable {
            params: *params,
            scale,
            log_r0,
            step,
            log_corr,
            r_min,
            r_max,
        })
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn r_range(&self) -> (f64, f64) {
        (self.r_min, self.r_max)
    }

    fn correction(&self, r: f64) -> f64 {
        if self.log_corr.is_empty() {
            return 0.0;
        }
        let lr = r.ln();
        let t = (lr - self.log_r0) / self.step;
        let n = self.log_corr.len();
        let i = (t.floor() as isize).clamp(1, n as isize - 3) as usize;
        let u = t - i as f64;
        // Catmull-Rom on log values; linear continuation off the ends
        let (a, b, c, d) = (
            self.log_corr[i - 1],
            self.log_corr[i],
            self.log_corr[i + 1],
            self.log_corr[i + 2],
        );
        let v = if (0.0..=1.0).contains(&u) {
            let u2 = u * u;
            0.5 * ((2.0 * b)
                + (c - a) * u
                + (2.0 * a - 5.0 * b + 4.0 * c - d) * u2
                + (3.0 * (b - c) + d - a) * u2 * u)
        } else if u < 0.0 {
            b + (c - b) * u
        } else {
            c + (d - c) * (u - 1.0)
        };
        v.exp()
    }

    /// Kernel value at distance r (branch taken from the build parameters).
    pub fn eval(&self, r: f64) -> Complex64 {
        let p = &self.params;
        let classical = match p.d {
            3 => {
                Complex64::from_polar(1.0, p.branch.sign() * p.k * r)
                    / (4.0 * std::f64::consts::PI * r)
            }
            2 => phi_classical_planar_closed(p.k, r, p.branch),
            _ => unreachable!(),
        };
        self.scale * classical + Complex64::new(self.correction(r), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::phi_fractional_decomp;

    #[test]
    fn table_matches_direct_evaluation() {
        let params = ProblemParams::outgoing(3, 0.8, 2.0).unwrap();
        let quad = QuadratureSpec::for_wavenumber(2.0);
        let table = RadialKernelTable::build(&params, &quad, 0.01, 20.0, 48).unwrap();
        for &r in &[0.013, 0.11, 0.7, 1.9, 6.3, 18.0] {
            let direct = phi_fractional_decomp(&params, r, &quad).unwrap().value;
            let tabbed = table.eval(r);
            assert!(
                (direct - tabbed).norm() / direct.norm() < 1e-6,
                "r={r}: {direct} vs {tabbed}"
            );
        }
    }

    #[test]
    fn table_planar_and_extrapolation() {
        let params = ProblemParams::outgoing(2, 0.7, 1.0).unwrap();
        let quad = QuadratureSpec::for_wavenumber(1.0);
        let table = RadialKernelTable::build(&params, &quad, 0.05, 10.0, 48).unwrap();
        for &r in &[0.07, 0.9, 4.2] {
            let direct = phi_fractional_decomp(&params, r, &quad).unwrap().value;
            let tabbed = table.eval(r);
            assert!((direct - tabbed).norm() / direct.norm() < 1e-6, "r={r}");
        }
        // power-law continuation slightly outside the table stays sane
        let direct = phi_fractional_decomp(&params, 12.0, &quad).unwrap().value;
        let tabbed = table.eval(12.0);
        assert!((direct - tabbed).norm() / direct.norm() < 1e-4);
    }

    #[test]
    fn table_classical_s1_is_exact() {
        let params = ProblemParams::outgoing(3, 1.0, 3.0).unwrap();
        let quad = QuadratureSpec::for_wavenumber(3.0);
        let table = RadialKernelTable::build(&params, &quad, 0.01, 5.0, 24).unwrap();
        let r = 1.234;
        let expect = Complex64::from_polar(1.0, 3.0 * r) / (4.0 * std::f64::consts::PI * r);
        assert!((table.eval(r) - expect).norm() < 1e-15);
    }

    #[test]
    fn table_rejects_unsupported_dimension() {
        let params = ProblemParams::outgoing(4, 0.9, 1.0).unwrap();
        let quad = QuadratureSpec::for_wavenumber(1.0);
        assert!(RadialKernelTable::build(&params, &quad, 0.1, 1.0, 24).is_err());
    }
}
