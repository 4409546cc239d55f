//! Normalization `f(σ) = C · ∏ξ(pσ+q) · R(aσ+b)`, its calibration from the
//! functional equation, and functional-equation reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::residue::{
    clearing_factors_in_s, eval_structure, identity_pole, residue_structure, LinearInS, ResidueEngine,
    ResidueOptions, RestrictedTerm,
};
use super::spec::{ClearingFactor, NormSpec, ZetaSpec};
use super::terms::{build_period_terms, PeriodTerm};
use crate::error::{Error, Result};
use crate::rootdata::build_root_system;
use crate::specfun::{c, completed_xi, C64};
use num_traits::ToPrimitive;

/// A calibrated (or user-supplied) `ξ^{G/P}` ready for evaluation.
pub struct ZetaFunction {
    pub spec: ZetaSpec,
    pub options: ResidueOptions,
    terms: Vec<PeriodTerm>,
    engine: ResidueEngine,
}

impl ZetaFunction {
    pub fn new(spec: ZetaSpec) -> Result<Self> {
        spec.validate()?;
        let rs = build_root_system(spec.group);
        let terms = build_period_terms(&rs);
        let engine = ResidueEngine::new(&terms, &spec)?;
        Ok(ZetaFunction {
            spec,
            options: ResidueOptions::default(),
            terms,
            engine,
        })
    }

    pub fn with_options(mut self, options: ResidueOptions) -> Self {
        self.options = options;
        self
    }

    pub fn terms(&self) -> &[PeriodTerm] {
        &self.terms
    }

    pub fn engine(&self) -> &ResidueEngine {
        &self.engine
    }

    /// Raw iterated residue `R(s)`.
    pub fn raw(&self, s: C64) -> Result<C64> {
        Ok(self.engine.residue(s, &self.options)?.value)
    }

    pub fn eval(&self, sigma: C64) -> Result<C64> {
        let n = &self.spec.norm;
        let r = self.raw(n.s_of(sigma))?;
        Ok(apply_clearing(n, sigma)? * r)
    }

    /// Clearance of the residue polydisc from singular loci at `σ`, in `s` units.
    pub fn clearance(&self, sigma: C64) -> f64 {
        self.engine.clearance(self.spec.norm.s_of(sigma))
    }
}

fn apply_clearing(n: &NormSpec, sigma: C64) -> Result<C64> {
    let mut v = n.constant;
    for f in &n.clearing {
        v *= completed_xi(sigma * f.p + f.q)?;
    }
    Ok(v)
}

/// `Norm ∘ R` at `σ` for a spec.
pub fn eval_zeta_gp(spec: &ZetaSpec, sigma: C64) -> Result<C64> {
    ZetaFunction::new(spec.clone())?.eval(sigma)
}

#[derive(Debug, Clone)]
pub struct CalibrationOptions {
    /// Centres of symmetry (in `s`) scanned on the half-integer grid.
    pub centre_min: f64,
    pub centre_max: f64,
    pub probes: Vec<C64>,
    pub accept: f64,
    pub fail: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        CalibrationOptions {
            centre_min: -10.0,
            centre_max: 10.0,
            probes: vec![c(0.23, 0.31), c(-0.4, 0.6), c(1.3, 0.9), c(0.61, 1.13)],
            accept: 1e-6,
            fail: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub norm: NormSpec,
    /// Centre of symmetry of `R` in the `s` variable.
    pub centre: f64,
    pub deviation: f64,
}

/// Normalization for a given centre of symmetry `c` of `R(s)`.
///
/// With an anchor `s₀` (a pole of `R`), `s₀` is sent to `σ = 1` and the
/// centre to `σ = 1/2`, so `a = 2(s₀ − c)`, `b = 2c − s₀`, and the constant is
/// `a`. Without an anchor `a = 1`, `b = c − 1/2`, constant 1.
pub fn norm_for_centre(centre: f64, anchor: Option<f64>, clearing_s: &[LinearInS]) -> Option<NormSpec> {
    let (a, b, k) = match anchor {
        Some(s0) => {
            let a = 2.0 * (s0 - centre);
            (a, 2.0 * centre - s0, a)
        }
        None => (1.0, centre - 0.5, 1.0),
    };
    if a.abs() < 1e-12 {
        return None;
    }
    let clearing = clearing_s
        .iter()
        .map(|l| {
            let c0 = l.c0.to_f64().unwrap();
            let c1 = l.c1.to_f64().unwrap();
            let (p, q) = (c1 * a, c0 + c1 * b);
            // ξ(pσ+q) = ξ(1−pσ−q): keep p > 0
            if p < 0.0 {
                ClearingFactor { p: -p, q: 1.0 - q }
            } else {
                ClearingFactor { p, q }
            }
        })
        .collect();
    Some(NormSpec {
        a,
        b,
        clearing,
        constant: C64::new(k, 0.0),
    })
}

/// Maximal relative deviation `|g(σ) − g(1−σ)| / |g(σ)|` over the probes.
pub fn fe_deviation<F>(raw: &F, norm: &NormSpec, probes: &[C64]) -> f64
where
    F: Fn(C64) -> Result<C64>,
{
    let g = |sigma: C64| -> Result<C64> { Ok(apply_clearing(norm, sigma)? * raw(norm.s_of(sigma))?) };
    let mut worst: f64 = 0.0;
    for &z in probes {
        match (g(z), g(c(1.0, 0.0) - z)) {
            (Ok(u), Ok(v)) if u.norm() > 0.0 && u.norm().is_finite() => {
                worst = worst.max((u - v).norm() / u.norm());
            }
            _ => return f64::INFINITY,
        }
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

/// Find `(a, b)`, clearing factors and constant making `g(σ) = g(1−σ)`.
///
/// The functional equation pins down the centre of symmetry of `R`; it is
/// located by scanning half-integers, then refined by golden-section search
/// and snapped to a nearby sixth if that does not hurt. The scale comes from
/// the anchor rule in [`norm_for_centre`].
pub fn calibrate_normalization<F>(
    raw: F,
    clearing_s: &[LinearInS],
    anchor: Option<f64>,
    opts: &CalibrationOptions,
) -> Result<Calibration>
where
    F: Fn(C64) -> Result<C64>,
{
    let dev_at = |centre: f64| -> f64 {
        match norm_for_centre(centre, anchor, clearing_s) {
            Some(n) => fe_deviation(&raw, &n, &opts.probes),
            None => f64::INFINITY,
        }
    };
    let mut best = (f64::INFINITY, f64::NAN);
    let steps = ((opts.centre_max - opts.centre_min) * 2.0).round() as i64;
    for k in 0..=steps {
        let centre = opts.centre_min + 0.5 * k as f64;
        let d = dev_at(centre);
        if d < best.0 {
            best = (d, centre);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Calibration {
            best_deviation: f64::INFINITY,
            best_centre: f64::NAN,
        });
    }
    if best.0 > opts.accept {
        // golden-section refinement around the best grid point
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (best.1 - 0.5, best.1 + 0.5);
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let (mut f1, mut f2) = (dev_at(x1), dev_at(x2));
        for _ in 0..60 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = dev_at(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = dev_at(x2);
            }
        }
        let refined = 0.5 * (lo + hi);
        let snapped = (refined * 6.0).round() / 6.0;
        for cand in [refined, snapped] {
            let d = dev_at(cand);
            if d < best.0 {
                best = (d, cand);
            }
        }
    }
    let (deviation, centre) = best;
    if deviation >= opts.fail {
        return Err(Error::Calibration {
            best_deviation: deviation,
            best_centre: centre,
        });
    }
    Ok(Calibration {
        norm: norm_for_centre(centre, anchor, clearing_s).expect("finite scale"),
        centre,
        deviation,
    })
}

/// Calibrate the normalization of `ξ^{G/P}` for a spec (its `norm` is ignored).
///
/// The scan evaluates `R` through [`residue_structure`], the closed form of
/// the same iterated residue, which is several orders of magnitude cheaper
/// than the contour quadrature; the result is then confirmed on the contour
/// pipeline by the functional-equation check.
pub fn calibrate_spec(spec: &ZetaSpec, opts: &CalibrationOptions) -> Result<(ZetaSpec, Calibration)> {
    let rs = build_root_system(spec.group);
    let terms = build_period_terms(&rs);
    let st: Vec<RestrictedTerm> = residue_structure(&terms, spec.alpha_p)?;
    let clearing = clearing_factors_in_s(&st);
    let anchor = identity_pole(&st);
    let cal = calibrate_normalization(|s| eval_structure(&st, s), &clearing, anchor, opts)?;
    let mut out = spec.clone();
    out.norm = cal.norm.clone();
    out.validate()?;
    Ok((out, cal))
}

#[derive(Debug, Clone, Serialize)]
pub struct FeSample {
    pub sigma: C64,
    pub value: C64,
    pub reflected: C64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeReport {
    pub spec: ZetaSpec,
    pub seed: u64,
    pub threshold: f64,
    pub samples: Vec<FeSample>,
    /// Candidate points discarded for lying too close to a singular locus.
    pub rejected: usize,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    pub pass: bool,
}

impl FeReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["re_sigma", "im_sigma", "re_f", "im_f", "re_f_reflected", "im_f_reflected", "abs_dev", "rel_dev"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for s in &self.samples {
            w.write_record(
                [s.sigma.re, s.sigma.im, s.value.re, s.value.im, s.reflected.re, s.reflected.im, s.abs_dev, s.rel_dev]
                    .iter()
                    .map(|x| format!("{x:.17e}")),
            )
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
            .map_err(|e| Error::Io(e.to_string()))
    }
}

/// Safe imaginary range for samples: keeps every cleared ξ argument below
/// the first zeta zero so no sample sits on a cancelled zero/pole pair.
pub fn sample_im_range(norm: &NormSpec) -> (f64, f64) {
    let hi = ((14.134 - 1.0) / norm.max_clearing_scale()).min(3.0);
    (0.2_f64.min(hi / 2.0), hi)
}

pub const MIN_CLEARANCE: f64 = 1e-3;

/// Check `f(σ) = f(1−σ)` on `n_samples` seeded random points.
pub fn fe_check(zf: &ZetaFunction, n_samples: usize, seed: u64, threshold: f64) -> Result<FeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (im_lo, im_hi) = sample_im_range(&zf.spec.norm);
    let mut samples = Vec::with_capacity(n_samples);
    let mut rejected = 0;
    while samples.len() < n_samples {
        if rejected > 50 * n_samples.max(1) {
            return Err(Error::Config("could not place FE samples away from singular loci".into()));
        }
        let sigma = c(rng.gen_range(-0.75..1.75), rng.gen_range(im_lo..im_hi));
        let refl = c(1.0, 0.0) - sigma;
        if zf.clearance(sigma) < MIN_CLEARANCE || zf.clearance(refl) < MIN_CLEARANCE {
            rejected += 1;
            continue;
        }
        let (value, reflected) = match (zf.eval(sigma), zf.eval(refl)) {
            (Ok(u), Ok(v)) => (u, v),
            (Err(Error::PoleHit { .. }), _) | (_, Err(Error::PoleHit { .. })) => {
                rejected += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let abs_dev = (value - reflected).norm();
        samples.push(FeSample {
            sigma,
            value,
            reflected,
            abs_dev,
            rel_dev: abs_dev / value.norm().max(1e-300),
        });
    }
    let max_abs_dev = samples.iter().map(|s| s.abs_dev).fold(0.0, f64::max);
    let max_rel_dev = samples.iter().map(|s| s.rel_dev).fold(0.0, f64::max);
    Ok(FeReport {
        spec: zf.spec.clone(),
        seed,
        threshold,
        samples,
        rejected,
        max_abs_dev,
        max_rel_dev,
        pass: max_rel_dev <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;
    use crate::specfun::xi_real;

    fn rank2(sigma: C64) -> Result<C64> {
        Ok(completed_xi(sigma * 2.0)? / (sigma - 1.0) - completed_xi(sigma * 2.0 - 1.0)? / sigma)
    }

    #[test]
    fn symmetric_input_is_a_fixed_point() {
        let cal = calibrate_normalization(rank2, &[], None, &CalibrationOptions::default()).unwrap();
        assert_eq!((cal.norm.a, cal.norm.b), (1.0, 0.0));
        assert!(cal.deviation < 1e-12);
    }

    #[test]
    fn sl2_calibration_reproduces_rank_two_zeta() {
        let spec = ZetaSpec::new(CartanType::A1, 0).unwrap();
        let (spec, cal) = calibrate_spec(&spec, &CalibrationOptions::default()).unwrap();
        assert_eq!(cal.centre, -1.0);
        assert_eq!((spec.norm.a, spec.norm.b), (2.0, -2.0));
        assert_eq!(spec.norm.clearing, vec![ClearingFactor { p: 2.0, q: 0.0 }]);
        let zf = ZetaFunction::new(spec).unwrap();
        let v = zf.eval(c(2.0, 0.0)).unwrap();
        let expect = xi_real(4.0).unwrap() - xi_real(3.0).unwrap() / 2.0;
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-15);
        for z in [c(0.3, 2.0), c(-0.7, 0.4)] {
            let u = zf.eval(z).unwrap();
            assert!((u - rank2(z).unwrap()).norm() < 1e-13 * u.norm());
        }
    }

    #[test]
    fn corrupted_norm_fails_fe() {
        let spec = ZetaSpec::new(CartanType::A1, 0).unwrap();
        let (mut spec, _) = calibrate_spec(&spec, &CalibrationOptions::default()).unwrap();
        let good = fe_check(&ZetaFunction::new(spec.clone()).unwrap(), 10, 7, 1e-6).unwrap();
        assert!(good.pass, "{}", good.max_rel_dev);
        spec.norm.b += 0.1;
        let bad = fe_check(&ZetaFunction::new(spec).unwrap(), 10, 7, 1e-6).unwrap();
        assert!(!bad.pass && bad.max_rel_dev > 1e-3);
    }

    #[test]
    fn sl3_calibration_matches_table() {
        for alpha_p in 0..2 {
            let spec = ZetaSpec::new(CartanType::A2, alpha_p).unwrap();
            let (spec, cal) = calibrate_spec(&spec, &CalibrationOptions::default()).unwrap();
            assert_eq!(cal.centre, -1.5);
            assert_eq!(spec.norm.a, 3.0);
            assert_eq!(spec.norm.clearing, vec![ClearingFactor { p: 3.0, q: 0.0 }]);
            assert!(cal.deviation < 1e-12);
        }
    }

    #[test]
    fn uncalibratable_input_is_reported() {
        let raw = |s: C64| Ok(s.exp());
        let err = calibrate_normalization(raw, &[], None, &CalibrationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Calibration { .. }));
    }
}
