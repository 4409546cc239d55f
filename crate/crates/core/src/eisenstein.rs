//! Rank-2 Eisenstein series over Q and the Rankin–Selberg truncation.
//!
//! Normalization: `Ê(z, s)` is taken with constant term
//! `ξ(2s) y^s + ξ(2−2s) y^{1−s}`, which is half of
//! `π^{−s}Γ(s) Σ_{(m,n)≠0} y^s/|mz+n|^{2s}` (the sum over `Z² \ {0}` counts
//! every primitive direction twice). The truncation identity below holds in
//! this normalization.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_k, c, completed_xi, divisor_sigma, xi_real, C64};
use crate::util::{gauss_legendre, pairwise_sum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain {
                function: "UpperHalfPoint",
                reason: format!("need y > 0, got ({x}, {y})"),
            });
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn z(&self) -> C64 {
        c(self.x, self.y)
    }

    /// In the closed standard fundamental domain (up to `tol`).
    pub fn is_reduced(&self, tol: f64) -> bool {
        self.x.abs() <= 0.5 + tol && self.x * self.x + self.y * self.y >= 1.0 - tol
    }
}

fn pole_check(s: C64, at: &[f64], function: &'static str) -> Result<()> {
    for &p in at {
        if (s - p).norm() < 1e-14 {
            return Err(Error::Pole {
                function,
                at: format!("{s}"),
            });
        }
    }
    Ok(())
}

/// `∫_1^∞ t^{s−1} e^{−x t} dt` for `x > 0`, via a double-exponential map of
/// `t = 1 + r`, `r = exp(u − e^{−u})`.
pub fn gamma_tail(s: C64, x: f64) -> C64 {
    let h = 1.0 / 32.0;
    let u_hi = (60.0 / x).ln().max(0.0) + 3.0;
    let mut terms = Vec::new();
    let mut u = -4.5;
    while u <= u_hi {
        let r = (u - (-u).exp()).exp();
        let jac = r * (1.0 + (-u).exp());
        let v = ((s - 1.0) * (1.0 + r).ln() - x * r).exp() * jac;
        terms.push(v);
        u += h;
    }
    pairwise_sum(&terms) * (h * (-x).exp())
}

/// Ê(z, s) from the lattice sum, for `Re s > 1`.
///
/// The sum over `L = (Z + Zz)/√y` (covolume 1, isometric to its dual) is
/// rewritten with the theta inversion formula as
/// `Σ'_{±} [G_s(π|v|²) + G_{1−s}(π|v|²)] + ½(1/(s−1) − 1/s)`, where
/// `G_s(x) = ∫_1^∞ t^{s−1}e^{−xt}dt` and `Σ'_{±}` runs over `(L∖0)/±1`. Terms
/// with `π|v|² > 50` are below `1e-20` and are dropped.
pub fn epstein_direct(z: UpperHalfPoint, s: C64) -> Result<C64> {
    if s.re <= 1.0 {
        return Err(Error::Domain {
            function: "epstein_direct",
            reason: format!("lattice sum needs Re s > 1, got {s}; use epstein_fourier"),
        });
    }
    let x_max = 50.0;
    let r2 = x_max / PI;
    let y = z.y;
    let m_max = (r2 / y).sqrt().floor() as i64;
    let mut terms = Vec::new();
    let one = c(1.0, 0.0);
    for m in 0..=m_max {
        let rest = r2 * y - (m as f64 * y).powi(2);
        if rest < 0.0 {
            continue;
        }
        let centre = -(m as f64) * z.x;
        let lo = (centre - rest.sqrt()).ceil() as i64;
        let hi = (centre + rest.sqrt()).floor() as i64;
        for n in lo..=hi {
            // one representative of each ± pair
            if m == 0 && n <= 0 {
                continue;
            }
            let re = m as f64 * z.x + n as f64;
            let norm2 = (re * re + (m as f64 * y).powi(2)) / y;
            let xarg = PI * norm2;
            if xarg > x_max {
                continue;
            }
            terms.push(gamma_tail(s, xarg) + gamma_tail(one - s, xarg));
        }
    }
    Ok(pairwise_sum(&terms) + (one / (s - 1.0) - one / s) * 0.5)
}

/// Fourier coefficients `a_0, a_1, …, a_{n_max}` at height `y`.
pub fn fourier_coefficients(y: f64, s: C64, n_max: usize) -> Result<Vec<C64>> {
    pole_check(s, &[0.0, 0.5, 1.0], "epstein_fourier")?;
    let one = c(1.0, 0.0);
    let mut out = Vec::with_capacity(n_max + 1);
    let a0 = completed_xi(s * 2.0)? * (s * y.ln()).exp() + completed_xi(2.0 * one - s * 2.0)? * ((one - s) * y.ln()).exp();
    out.push(a0);
    let nu = s - 0.5;
    for n in 1..=n_max {
        let nf = n as f64;
        let a = (nu * nf.ln()).exp() * 2.0 * divisor_sigma(n as u64, one - s * 2.0) * y.sqrt() * bessel_k(nu, 2.0 * PI * nf * y)?;
        out.push(a);
    }
    Ok(out)
}

/// Number of non-constant coefficients needed at height `y` for a relative
/// truncation error below ~1e-16, from `K_ν(t) ≲ e^{−t}` for large `t`.
pub fn default_n_max(y: f64, s: C64) -> usize {
    let growth = s.re.abs() + 1.0;
    let mut n = 1usize;
    while n < 400 {
        let nf = n as f64;
        let log_term = -2.0 * PI * nf * y + growth * nf.ln() + 0.5 * PI * s.im.abs();
        if log_term < -40.0 {
            break;
        }
        n += 1;
    }
    n
}

/// Ê(z, s) from its Fourier expansion; valid for all `s ∉ {0, 1/2, 1}`.
pub fn epstein_fourier(z: UpperHalfPoint, s: C64, n_max: Option<usize>) -> Result<C64> {
    if z.y < 0.5 {
        return Err(Error::Domain {
            function: "epstein_fourier",
            reason: format!("expansion used for y >= 1/2, got y = {}", z.y),
        });
    }
    let n = n_max.unwrap_or_else(|| default_n_max(z.y, s));
    let a = fourier_coefficients(z.y, s, n)?;
    Ok(sum_series(&a, z.x))
}

fn sum_series(a: &[C64], x: f64) -> C64 {
    let mut terms: Vec<C64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, an)| an * (2.0 * (2.0 * PI * n as f64 * x).cos()))
        .collect();
    terms.reverse();
    a[0] + pairwise_sum(&terms)
}

/// `ξ(2s)T^{s−1}/(s−1) − ξ(2s−1)T^{−s}/s`.
pub fn truncated_integral_closed(s: C64, t: f64) -> Result<C64> {
    pole_check(s, &[0.0, 0.5, 1.0], "truncated_integral_closed")?;
    if !(t >= 1.0) {
        return Err(Error::Domain {
            function: "truncated_integral_closed",
            reason: format!("need T >= 1, got {t}"),
        });
    }
    let lt = t.ln();
    Ok(completed_xi(s * 2.0)? * ((s - 1.0) * lt).exp() / (s - 1.0) - completed_xi(s * 2.0 - 1.0)? * (-s * lt).exp() / s)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// `∫_{D_T} Ê(z,s) dx dy / y²` by tensor Gauss–Legendre.
///
/// `D_T` is split into the part under `y = 1` (parametrized by `x` outer,
/// `√(1−x²) ≤ y ≤ 1` inner) and the rectangle `1 ≤ y ≤ T`; both use the
/// symmetry `x ↦ −x`. In the rectangle the Fourier coefficients are computed
/// once per `y` node. Panels double until two passes agree to `tol`.
pub fn truncated_integral_geo(s: C64, t: f64, tol: f64) -> Result<QuadratureResult> {
    pole_check(s, &[0.0, 0.5, 1.0], "truncated_integral_geo")?;
    if !(t >= 1.0) {
        return Err(Error::Domain {
            function: "truncated_integral_geo",
            reason: format!("need T >= 1, got {t}"),
        });
    }
    let mut panels = 1usize;
    let mut prev: Option<C64> = None;
    let mut last_err = f64::INFINITY;
    while panels <= 64 {
        let v = geo_pass(s, t, panels)?;
        if let Some(p) = prev {
            last_err = (v - p).norm();
            if last_err <= tol {
                return Ok(QuadratureResult {
                    value: v,
                    error_estimate: last_err,
                    panels,
                });
            }
        }
        prev = Some(v);
        panels *= 2;
    }
    Err(Error::Quadrature {
        estimate: format!("{}", prev.unwrap()),
        error_estimate: last_err,
    })
}

const GL_ORDER: usize = 16;

fn geo_pass(s: C64, t: f64, panels: usize) -> Result<C64> {
    let (gx, gw) = gauss_legendre(GL_ORDER);
    let nodes = |a: f64, b: f64, k: usize| -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(k * GL_ORDER);
        let h = (b - a) / k as f64;
        for p in 0..k {
            let lo = a + p as f64 * h;
            for (x, w) in gx.iter().zip(&gw) {
                out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
        out
    };

    // Rectangle 1 ≤ y ≤ T, 0 ≤ x ≤ 1/2. Panels in y scale with log T.
    let y_panels = panels * (1 + t.ln().ceil() as usize);
    let xs = nodes(0.0, 0.5, panels);
    let ys = nodes(1.0, t, y_panels);
    let rect = |(y, wy): (f64, f64)| -> Result<C64> {
        let a = fourier_coefficients(y, s, default_n_max(y, s))?;
        let inner: Vec<C64> = xs.iter().map(|&(x, wx)| sum_series(&a, x) * wx).collect();
        Ok(pairwise_sum(&inner) * (wy / (y * y)))
    };

    // Region under y = 1: 0 ≤ x ≤ 1/2, √(1−x²) ≤ y ≤ 1.
    let xs_low = nodes(0.0, 0.5, panels);
    let low = |(x, wx): (f64, f64)| -> Result<C64> {
        let y0 = (1.0 - x * x).sqrt();
        let mut inner = Vec::with_capacity(panels * GL_ORDER);
        for (y, wy) in nodes(y0, 1.0, panels) {
            let a = fourier_coefficients(y, s, default_n_max(y, s))?;
            inner.push(sum_series(&a, x) * (wy / (y * y)));
        }
        Ok(pairwise_sum(&inner) * wx)
    };

    let (r, l) = run_both(&ys, rect, &xs_low, low);
    let r: Vec<C64> = r.into_iter().collect::<Result<_>>()?;
    let l: Vec<C64> = l.into_iter().collect::<Result<_>>()?;
    Ok((pairwise_sum(&r) + pairwise_sum(&l)) * 2.0)
}

#[cfg(feature = "parallel")]
fn run_both<A, B>(ys: &[(f64, f64)], fa: A, xs: &[(f64, f64)], fb: B) -> (Vec<Result<C64>>, Vec<Result<C64>>)
where
    A: Fn((f64, f64)) -> Result<C64> + Sync,
    B: Fn((f64, f64)) -> Result<C64> + Sync,
{
    use rayon::prelude::*;
    rayon::join(
        || ys.par_iter().map(|&n| fa(n)).collect(),
        || xs.par_iter().map(|&n| fb(n)).collect(),
    )
}

#[cfg(not(feature = "parallel"))]
fn run_both<A, B>(ys: &[(f64, f64)], fa: A, xs: &[(f64, f64)], fb: B) -> (Vec<Result<C64>>, Vec<Result<C64>>)
where
    A: Fn((f64, f64)) -> Result<C64>,
    B: Fn((f64, f64)) -> Result<C64>,
{
    (ys.iter().map(|&n| fa(n)).collect(), xs.iter().map(|&n| fb(n)).collect())
}

/// Rank-2 zeta `ξ(2σ)/(σ−1) − ξ(2σ−1)/σ`.
///
/// `σ = 1/2` is a removable singularity and is evaluated as a circle mean.
pub fn rank2_zeta(sigma: C64) -> Result<C64> {
    pole_check(sigma, &[0.0, 1.0], "rank2_zeta")?;
    if (sigma - 0.5).norm() < 1e-6 {
        let n = 32;
        let vals: Vec<C64> = (0..n)
            .map(|k| rank2_raw(c(0.5, 0.0) + C64::from_polar(0.01, 2.0 * PI * k as f64 / n as f64)))
            .collect::<Result<_>>()?;
        return Ok(pairwise_sum(&vals) / n as f64);
    }
    rank2_raw(sigma)
}

fn rank2_raw(sigma: C64) -> Result<C64> {
    Ok(completed_xi(sigma * 2.0)? / (sigma - 1.0) - completed_xi(sigma * 2.0 - 1.0)? / sigma)
}

/// Residues of the rank-2 zeta at `σ = 1` and `σ = 0`: `(ξ(2), −ξ(2))`.
pub fn rank2_residues() -> (f64, f64) {
    let x2 = xi_real(2.0).expect("regular point");
    (x2, -x2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn full_lattice_sum_at_i() {
        // π^{−2}Γ(2)·4ζ(2)β(2) is the sum over all of Z² ∖ 0, twice Ê.
        let z = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let v = epstein_direct(z, c(2.0, 0.0)).unwrap() * 2.0;
        let expect = 4.0 * (PI * PI / 6.0) * CATALAN / (PI * PI);
        assert!((v.re - expect).abs() < 1e-13, "{v} vs {expect}");
        assert!((expect - 0.6107).abs() < 1e-4);
    }

    #[test]
    fn gamma_tail_closed_forms() {
        // s = 1: e^{−x}/x ; s = 2: e^{−x}(1/x + 1/x²)
        for x in [0.5, 3.0, 20.0] {
            let g1 = gamma_tail(c(1.0, 0.0), x);
            assert!(rel(g1, c((-x).exp() / x, 0.0)) < 1e-13);
            let g2 = gamma_tail(c(2.0, 0.0), x);
            assert!(rel(g2, c((-x).exp() * (1.0 / x + 1.0 / (x * x)), 0.0)) < 1e-13);
        }
    }

    #[test]
    fn direct_and_fourier_agree() {
        for (x, y, s) in [(0.0, 1.0, c(3.0, 0.0)), (0.1, 1.2, c(2.0, 0.0)), (-0.31, 0.93, c(1.4, 2.5))] {
            let z = UpperHalfPoint::new(x, y).unwrap();
            let d = epstein_direct(z, s).unwrap();
            let f = epstein_fourier(z, s, None).unwrap();
            assert!(rel(d, f) < 1e-12, "{z:?} {s}: {d} vs {f}");
        }
    }

    #[test]
    fn modular_invariance_of_direct_sum() {
        let s = c(2.2, 0.7);
        let z = UpperHalfPoint::new(0.23, 0.8).unwrap();
        let base = epstein_direct(z, s).unwrap();
        let shifted = epstein_direct(UpperHalfPoint::new(1.23, 0.8).unwrap(), s).unwrap();
        let w = -z.z().inv();
        let inverted = epstein_direct(UpperHalfPoint::new(w.re, w.im).unwrap(), s).unwrap();
        assert!(rel(shifted, base) < 1e-13 && rel(inverted, base) < 1e-13);
    }

    #[test]
    fn direct_requires_convergence() {
        let z = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert!(matches!(epstein_direct(z, c(0.8, 0.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn fourier_tail_decays_high_in_the_cusp() {
        let s = c(2.0, 0.0);
        let z = UpperHalfPoint::new(0.3, 10.0).unwrap();
        let a = fourier_coefficients(10.0, s, 0).unwrap();
        assert!((epstein_fourier(z, s, None).unwrap() - a[0]).norm() < 1e-10);
    }

    #[test]
    fn fourier_is_symmetric_in_s() {
        let z = UpperHalfPoint::new(0.17, 1.1).unwrap();
        let s = c(0.3, 2.0);
        let a = epstein_fourier(z, s, None).unwrap();
        let b = epstein_fourier(z, c(1.0, 0.0) - s, None).unwrap();
        assert!(rel(a, b) < 1e-12);
        assert!(epstein_fourier(z, c(0.5, 0.0), None).is_err());
    }

    #[test]
    fn closed_form_values() {
        let v = truncated_integral_closed(c(2.0, 0.0), 1.0).unwrap();
        let expect = xi_real(4.0).unwrap() - xi_real(3.0).unwrap() / 2.0;
        assert!((v.re - expect).abs() < 1e-15);
        let v2 = truncated_integral_closed(c(2.0, 0.0), 2.0).unwrap();
        let expect2 = xi_real(4.0).unwrap() * 2.0 - xi_real(3.0).unwrap() * 0.25 / 2.0;
        assert!((v2.re - expect2).abs() < 1e-15);
        assert!(truncated_integral_closed(c(1.0, 0.0), 2.0).is_err());
        // Re s < 1: the first term vanishes as T → ∞
        let s = c(0.7, 0.3);
        let big = truncated_integral_closed(s, 1e12).unwrap();
        assert!(big.norm() < 1e-3);
    }

    #[test]
    fn geometric_truncation_matches_closed_form() {
        for (s, t) in [(c(2.0, 0.0), 2.0), (c(2.5, 1.0), 1.0)] {
            let g = truncated_integral_geo(s, t, 1e-10).unwrap();
            let cl = truncated_integral_closed(s, t).unwrap();
            assert!((g.value - cl).norm() < 1e-8, "{s} {t}: {} vs {cl}", g.value);
        }
    }

    #[test]
    fn rank2_zeta_values() {
        let (r1, r0) = rank2_residues();
        assert!((r1 - PI / 6.0).abs() < 1e-15 && r0 == -r1);
        let z = c(0.3, 2.0);
        let a = rank2_zeta(z).unwrap();
        let b = rank2_zeta(c(1.0, 0.0) - z).unwrap();
        assert!(rel(a, b) < 1e-13);
        // removable point: continuity
        let mid = rank2_zeta(c(0.5, 0.0)).unwrap();
        let near = rank2_zeta(c(0.5 + 1e-4, 0.0)).unwrap();
        assert!((mid - near).norm() < 1e-6);
        assert!(rank2_zeta(c(1.0, 0.0)).is_err());
    }
}
