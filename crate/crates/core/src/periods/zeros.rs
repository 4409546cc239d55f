//! Zeros of a function with `f(σ) = f(1−σ)` and real coefficients.
//!
//! Such a function is real on `Re σ = 1/2`, so zeros on the line show up as
//! sign changes. Each one is refined off the line by a complex secant
//! iteration, and the total is compared with the argument-principle count on
//! a box around the critical strip. A mismatch that survives step halving is
//! the off-line-zero alarm.

use std::f64::consts::PI;

use serde::Serialize;

use super::norm::ZetaFunction;
use super::spec::ZetaSpec;
use crate::error::{Error, Result};
use crate::specfun::{c, C64};

#[derive(Debug, Clone, Serialize)]
pub struct ZeroOptions {
    pub t_low: f64,
    pub t_max: f64,
    pub re_min: f64,
    pub re_max: f64,
    /// Initial scan step along the critical line.
    pub scan_step: f64,
    pub max_halvings: usize,
}

impl ZeroOptions {
    /// Defaults scaled to a function whose fastest factor is `ξ(p σ + q)`.
    pub fn for_scale(t_max: f64, p_max: f64) -> Self {
        ZeroOptions {
            t_low: 0.1,
            t_max,
            re_min: -0.5,
            re_max: 1.5,
            scan_step: 0.2 / p_max.max(1.0),
            max_halvings: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocatedZero {
    pub sigma: C64,
    /// `|f|` at the refined point relative to the typical scan magnitude.
    pub residual: f64,
    pub re_deviation: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroReport {
    pub spec: Option<ZetaSpec>,
    pub t_low: f64,
    /// Top edge actually used (nudged away from zeros).
    pub t_top: f64,
    pub re_min: f64,
    pub re_max: f64,
    pub scan_step: f64,
    pub winding_count: i64,
    /// Raw winding (should be close to an integer).
    pub winding_raw: f64,
    pub zeros: Vec<LocatedZero>,
    pub max_re_deviation: f64,
    /// Largest `|Im f| / |f|` met on the critical line.
    pub max_imag_ratio: f64,
    pub counts_match: bool,
    pub off_line_alarm: bool,
    pub evaluations: usize,
}

impl ZeroReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["re_sigma", "im_sigma", "re_deviation", "residual"]).map_err(io)?;
        for z in &self.zeros {
            w.write_record(
                [z.sigma.re, z.sigma.im, z.re_deviation, z.residual].iter().map(|x| format!("{x:.17e}")),
            )
            .map_err(io)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))
    }
}

struct Counter<'a, F> {
    f: &'a F,
    calls: std::cell::Cell<usize>,
}

impl<F: Fn(C64) -> Result<C64>> Counter<'_, F> {
    fn call(&self, z: C64) -> Result<C64> {
        self.calls.set(self.calls.get() + 1);
        (self.f)(z)
    }
}

/// Zero search for `ξ^{G/P}` on `0 < Im σ ≤ t_max`.
pub fn find_zeros(zf: &ZetaFunction, opts: &ZeroOptions) -> Result<ZeroReport> {
    let mut report = find_zeros_of(&|z| zf.eval(z), opts)?;
    report.spec = Some(zf.spec.clone());
    Ok(report)
}

/// Zero search for any symmetric, conjugation-real function.
pub fn find_zeros_of<F>(f: &F, opts: &ZeroOptions) -> Result<ZeroReport>
where
    F: Fn(C64) -> Result<C64>,
{
    if !(opts.t_max > opts.t_low && opts.t_low > 0.0 && opts.scan_step > 0.0) {
        return Err(Error::Config("need 0 < t_low < t_max and a positive scan step".into()));
    }
    let counter = Counter {
        f,
        calls: std::cell::Cell::new(0),
    };
    let mut step = opts.scan_step;
    let mut last = None;
    for _ in 0..=opts.max_halvings {
        let (zeros, scale, imag_ratio) = scan_line(&counter, opts.t_low, opts.t_max + 0.05, step)?;
        let t_top = choose_top(&zeros, opts.t_max);
        let on_line: Vec<LocatedZero> = zeros
            .into_iter()
            .filter(|z| z.sigma.im < t_top)
            .map(|z| refine(&counter, z, scale))
            .collect::<Result<_>>()?;
        let (winding_raw, _) = winding(&counter, opts.re_min, opts.re_max, opts.t_low, t_top, step)?;
        let winding_count = winding_raw.round() as i64;
        let counts_match = winding_count == on_line.len() as i64 && (winding_raw - winding_raw.round()).abs() < 0.1;
        let max_re_deviation = on_line.iter().map(|z| z.re_deviation).fold(0.0, f64::max);
        let report = ZeroReport {
            spec: None,
            t_low: opts.t_low,
            t_top,
            re_min: opts.re_min,
            re_max: opts.re_max,
            scan_step: step,
            winding_count,
            winding_raw,
            zeros: on_line,
            max_re_deviation,
            max_imag_ratio: imag_ratio,
            counts_match,
            off_line_alarm: !counts_match,
            evaluations: counter.calls.get(),
        };
        if counts_match {
            return Ok(report);
        }
        last = Some(report);
        step /= 2.0;
    }
    let mut report = last.expect("at least one pass");
    report.evaluations = counter.calls.get();
    Ok(report)
}

/// Sign changes of `Re f(1/2 + it)`, bracketed and refined along the line.
fn scan_line<F>(f: &Counter<F>, t0: f64, t1: f64, step: f64) -> Result<(Vec<LocatedZero>, f64, f64)>
where
    F: Fn(C64) -> Result<C64>,
{
    let n = ((t1 - t0) / step).ceil() as usize;
    let line = |t: f64| c(0.5, t);
    let mut vals = Vec::with_capacity(n + 1);
    let mut imag_ratio: f64 = 0.0;
    for k in 0..=n {
        let t = t0 + (t1 - t0) * k as f64 / n as f64;
        let v = f.call(line(t))?;
        if v.norm() > 0.0 {
            imag_ratio = imag_ratio.max(v.im.abs() / v.norm());
        }
        vals.push((t, v.re));
    }
    let mut mags: Vec<f64> = vals.iter().map(|v| v.1.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = mags[mags.len() / 2].max(1e-300);
    let mut zeros = Vec::new();
    for w in vals.windows(2) {
        let ((ta, fa), (tb, fb)) = (w[0], w[1]);
        if fa == 0.0 || fa.signum() != fb.signum() {
            let t = illinois(|t| Ok(f.call(line(t))?.re), ta, fa, tb, fb)?;
            zeros.push(LocatedZero {
                sigma: line(t),
                residual: 0.0,
                re_deviation: 0.0,
                iterations: 0,
            });
        }
    }
    Ok((zeros, scale, imag_ratio))
}

fn illinois<G: Fn(f64) -> Result<f64>>(g: G, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    let mut side = 0;
    for _ in 0..100 {
        let x = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() < 1e-13 * (1.0 + x.abs()) {
            return Ok(x);
        }
        let fx = g(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
        if (fx.abs()) < 1e-300 {
            return Ok(x);
        }
    }
    Ok((a * fb - b * fa) / (fb - fa))
}

/// Complex secant iteration started off the line, so the reported real part
/// is not forced by the starting points.
fn refine<F>(f: &Counter<F>, z: LocatedZero, scale: f64) -> Result<LocatedZero>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut z0 = z.sigma + c(1e-3, 0.0);
    let mut z1 = z.sigma + c(-5e-4, 1e-4);
    let mut f0 = f.call(z0)?;
    let mut f1 = f.call(z1)?;
    let mut iterations = 0;
    for _ in 0..40 {
        iterations += 1;
        if f1 == f0 {
            break;
        }
        let z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
        let f2 = f.call(z2)?;
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f2;
        if (z1 - z0).norm() < 1e-14 * (1.0 + z1.norm()) || f1.norm() == 0.0 {
            break;
        }
    }
    if (z1 - z.sigma).norm() > 1e-2 {
        return Err(Error::Domain {
            function: "find_zeros",
            reason: format!("secant refinement from {} wandered to {}", z.sigma, z1),
        });
    }
    Ok(LocatedZero {
        sigma: z1,
        residual: f1.norm() / scale,
        re_deviation: (z1.re - 0.5).abs(),
        iterations,
    })
}

/// Top edge in `[t_max, t_max + 0.04]` kept as far as possible from zeros.
fn choose_top(zeros: &[LocatedZero], t_max: f64) -> f64 {
    let mut best = (f64::NEG_INFINITY, t_max);
    for k in 0..=40 {
        let t = t_max + 0.001 * k as f64;
        let d = zeros.iter().map(|z| (z.sigma.im - t).abs()).fold(f64::INFINITY, f64::min);
        if d > best.0 + 1e-12 {
            best = (d, t);
        }
        if d > 5e-3 {
            return t;
        }
    }
    best.1
}

/// Argument-principle winding number of `f` around the box, in turns.
fn winding<F>(f: &Counter<F>, re0: f64, re1: f64, t0: f64, t1: f64, step: f64) -> Result<(f64, usize)>
where
    F: Fn(C64) -> Result<C64>,
{
    let corners = [c(re0, t0), c(re1, t0), c(re1, t1), c(re0, t1), c(re0, t0)];
    let mut total = 0.0;
    let mut pieces = 0;
    for e in corners.windows(2) {
        let (za, zb) = (e[0], e[1]);
        let m = (((zb - za).norm() / step).ceil() as usize).max(8);
        let mut prev_z = za;
        let mut prev_f = f.call(za)?;
        for k in 1..=m {
            let z = za + (zb - za) * (k as f64 / m as f64);
            let fz = f.call(z)?;
            total += arg_change(f, prev_z, prev_f, z, fz, 0, &mut pieces)?;
            prev_z = z;
            prev_f = fz;
        }
    }
    Ok((total / (2.0 * PI), pieces))
}

fn arg_change<F>(f: &Counter<F>, za: C64, fa: C64, zb: C64, fb: C64, depth: usize, pieces: &mut usize) -> Result<f64>
where
    F: Fn(C64) -> Result<C64>,
{
    let d = (fb / fa).arg();
    if d.abs() < 0.5 || depth >= 24 {
        *pieces += 1;
        return Ok(d);
    }
    let zm = (za + zb) * 0.5;
    let fm = f.call(zm)?;
    Ok(arg_change(f, za, fa, zm, fm, depth + 1, pieces)? + arg_change(f, zm, fm, zb, fb, depth + 1, pieces)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::completed_xi;

    #[test]
    fn riemann_xi_zeros() {
        let xi = |z: C64| completed_xi(z);
        let opts = ZeroOptions::for_scale(26.0, 1.0);
        let r = find_zeros_of(&xi, &opts).unwrap();
        assert!(r.counts_match, "{r:?}");
        let ims: Vec<f64> = r.zeros.iter().map(|z| z.sigma.im).collect();
        let known = [14.134725141734693, 21.022039638771555, 25.010_857_580_145_69];
        assert_eq!(ims.len(), 3);
        for (a, b) in ims.iter().zip(known) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(r.max_re_deviation < 1e-9);
    }

    #[test]
    fn empty_box_has_no_zeros() {
        let xi = |z: C64| completed_xi(z);
        let r = find_zeros_of(&xi, &ZeroOptions::for_scale(10.0, 1.0)).unwrap();
        assert_eq!(r.winding_count, 0);
        assert!(r.zeros.is_empty() && r.counts_match);
    }

    #[test]
    fn off_line_zero_raises_alarm() {
        // ξ(σ)·((σ−0.8)²+…) style perturbation: add a symmetric pair of
        // off-line zeros at 0.8 ± … and 0.2 ± … around Im 5.
        let rho = c(0.8, 5.0);
        let g = move |z: C64| -> Result<C64> {
            let pair = (z - rho) * (z - (c(1.0, 0.0) - rho));
            let pair_conj = (z - rho.conj()) * (z - (c(1.0, 0.0) - rho.conj()));
            Ok(completed_xi(z)? * pair * pair_conj)
        };
        let r = find_zeros_of(&g, &ZeroOptions::for_scale(10.0, 1.0)).unwrap();
        assert!(r.off_line_alarm);
        assert_eq!(r.winding_count, 2);
    }
}
