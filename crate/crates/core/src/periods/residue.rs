//! Iterated residues of the period along `t_β = 0`, β ≠ α_P.
//!
//! The residue is computed as a torus average: each residue variable runs
//! over a circle `t_β = ε_β e^{iθ}` and the integrand `ω(t)·∏ t_β` is summed
//! with the trapezoid rule, which converges geometrically for analytic
//! periodic integrands. Node counts double until successive estimates agree.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::spec::ZetaSpec;
use super::terms::{AffineForm, PeriodTerm};
use crate::error::{Error, Result};
use crate::specfun::{completed_xi, distance_to_zeta_zeros, C64};
use crate::util::pairwise_sum;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct ResidueOptions {
    /// Relative agreement required between the `N` and `2N` node estimates.
    pub tol: f64,
    pub initial_nodes: usize,
    /// Upper bound on the total number of torus nodes.
    pub max_total_nodes: usize,
    /// Repeat with halved radii and require agreement to `radius_tol`.
    pub radius_check: bool,
    pub radius_tol: f64,
}

impl Default for ResidueOptions {
    fn default() -> Self {
        ResidueOptions {
            tol: 1e-8,
            initial_nodes: 8,
            max_total_nodes: 1 << 18,
            radius_check: false,
            radius_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidueValue {
    pub value: C64,
    /// Nodes per circle used for the accepted estimate.
    pub nodes: usize,
    /// Relative change against the half-resolution estimate.
    pub change: f64,
}

struct CTerm {
    scalar: f64,
    forms: Vec<usize>,
    num: Vec<usize>,
    den: Vec<usize>,
}

/// Period terms with shared linear forms and ξ arguments deduplicated.
pub(crate) struct Compiled {
    nvars: usize,
    forms: Vec<(f64, Vec<f64>)>,
    xi_args: Vec<(f64, Vec<f64>)>,
    terms: Vec<CTerm>,
}

fn intern(
    table: &mut Vec<(f64, Vec<f64>)>,
    index: &mut HashMap<AffineForm, usize>,
    f: &AffineForm,
) -> usize {
    if let Some(&i) = index.get(f) {
        return i;
    }
    table.push(f.to_f64());
    index.insert(f.clone(), table.len() - 1);
    table.len() - 1
}

const POLE_EPS: f64 = 1e-13;

impl Compiled {
    pub(crate) fn new(terms: &[PeriodTerm]) -> Result<Self> {
        let nvars = terms
            .first()
            .and_then(|t| t.denominator_forms.first())
            .map(|f| f.coefficients.len())
            .ok_or_else(|| Error::Config("empty period".into()))?;
        let mut forms = Vec::new();
        let mut xi_args = Vec::new();
        let mut fi = HashMap::new();
        let mut xi = HashMap::new();
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let all = t
                .denominator_forms
                .iter()
                .chain(&t.xi_numerator_args)
                .chain(&t.xi_denominator_args);
            if all.into_iter().any(|f| f.coefficients.len() != nvars) {
                return Err(Error::Dimension {
                    expected: nvars,
                    got: t.denominator_forms.len(),
                });
            }
            out.push(CTerm {
                scalar: t.scalar.to_f64().unwrap(),
                forms: t.denominator_forms.iter().map(|f| intern(&mut forms, &mut fi, f)).collect(),
                num: t.xi_numerator_args.iter().map(|f| intern(&mut xi_args, &mut xi, f)).collect(),
                den: t.xi_denominator_args.iter().map(|f| intern(&mut xi_args, &mut xi, f)).collect(),
            });
        }
        Ok(Compiled {
            nvars,
            forms,
            xi_args,
            terms: out,
        })
    }

    fn affine(f: &(f64, Vec<f64>), t: &[C64]) -> C64 {
        let mut acc = C64::new(f.0, 0.0);
        for (c, x) in f.1.iter().zip(t) {
            if *c != 0.0 {
                acc += x * *c;
            }
        }
        acc
    }

    pub(crate) fn eval(&self, t: &[C64], form_buf: &mut Vec<C64>, xi_buf: &mut Vec<C64>) -> Result<C64> {
        form_buf.clear();
        for (k, f) in self.forms.iter().enumerate() {
            let v = Self::affine(f, t);
            if v.norm() < POLE_EPS {
                let term = self.terms.iter().position(|x| x.forms.contains(&k)).unwrap_or(0);
                return Err(Error::PoleHit {
                    term,
                    detail: format!("linear form vanishes at t = {t:?}"),
                });
            }
            form_buf.push(v);
        }
        xi_buf.clear();
        for (k, f) in self.xi_args.iter().enumerate() {
            let arg = Self::affine(f, t);
            if arg.norm() < POLE_EPS || (arg - 1.0).norm() < POLE_EPS {
                let term = self
                    .terms
                    .iter()
                    .position(|x| x.num.contains(&k) || x.den.contains(&k))
                    .unwrap_or(0);
                return Err(Error::PoleHit {
                    term,
                    detail: format!("xi argument {arg} is a pole"),
                });
            }
            xi_buf.push(completed_xi(arg)?);
        }
        let mut vals = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut v = C64::new(term.scalar, 0.0);
            let mut d = C64::new(1.0, 0.0);
            for &i in &term.forms {
                d *= form_buf[i];
            }
            for &i in &term.num {
                v *= xi_buf[i];
            }
            for &i in &term.den {
                d *= xi_buf[i];
            }
            vals.push(v / d);
        }
        Ok(pairwise_sum(&vals))
    }
}

/// Numeric iterated-residue evaluator for one `(G, P, order, radii)`.
pub struct ResidueEngine {
    compiled: Compiled,
    alpha_p: usize,
    order: Vec<usize>,
    radii: Vec<f64>,
    /// `(c0, c1, reach)`: a singular locus `|c0 + c1 s| ≤ reach` in `s`.
    singular: Vec<(f64, f64, f64)>,
    /// `(c0, c1, reach)`: `c0 + c1 s` within `reach` of a zeta zero.
    zero_loci: Vec<(f64, f64, f64)>,
}

/// Roundoff floor of a torus average, in units of `ε · mean |summand|`.
const NOISE_ULPS: f64 = 1e3;

impl ResidueEngine {
    pub fn new(terms: &[PeriodTerm], spec: &ZetaSpec) -> Result<Self> {
        spec.validate()?;
        Self::from_parts(terms, spec.alpha_p, &spec.order, &spec.radii)
    }

    pub fn from_parts(terms: &[PeriodTerm], alpha_p: usize, order: &[usize], radii: &[f64]) -> Result<Self> {
        let compiled = Compiled::new(terms)?;
        let n = compiled.nvars;
        if alpha_p >= n || order.len() + 1 != n || radii.len() != order.len() {
            return Err(Error::Config(format!(
                "residue order {order:?} / alpha_P {alpha_p} do not match {n} variables"
            )));
        }
        let mut singular = Vec::new();
        let reach = |f: &(f64, Vec<f64>)| -> f64 {
            order.iter().zip(radii).map(|(&g, r)| f.1[g].abs() * r).sum()
        };
        for f in &compiled.forms {
            if f.1[alpha_p] != 0.0 {
                singular.push((f.0, f.1[alpha_p], reach(f)));
            }
        }
        for term in &compiled.terms {
            for &i in &term.num {
                let f = &compiled.xi_args[i];
                if f.1[alpha_p] != 0.0 {
                    singular.push((f.0, f.1[alpha_p], reach(f)));
                    singular.push((f.0 - 1.0, f.1[alpha_p], reach(f)));
                }
            }
        }
        singular.sort_by(|a, b| a.partial_cmp(b).unwrap());
        singular.dedup();
        // zeros of ξ in a denominator are poles of the integrand
        let mut zero_loci = Vec::new();
        for term in &compiled.terms {
            for &i in &term.den {
                let f = &compiled.xi_args[i];
                if f.1[alpha_p] != 0.0 {
                    zero_loci.push((f.0, f.1[alpha_p], reach(f)));
                }
            }
        }
        zero_loci.sort_by(|a, b| a.partial_cmp(b).unwrap());
        zero_loci.dedup();
        Ok(ResidueEngine {
            compiled,
            alpha_p,
            order: order.to_vec(),
            radii: radii.to_vec(),
            singular,
            zero_loci,
        })
    }

    pub fn residue_levels(&self) -> usize {
        self.order.len()
    }

    /// Distance from `s` to the nearest singular locus met by the polydisc;
    /// negative when the polydisc already touches one.
    pub fn clearance(&self, s: C64) -> f64 {
        self.loci(s).map(|(d, reach)| d - reach).fold(f64::INFINITY, f64::min)
    }

    /// `(distance, reach)` for every spurious singular locus at `s`.
    fn loci(&self, s: C64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let poles = self.singular.iter().map(move |&(c0, c1, reach)| ((s * c1 + c0).norm(), reach));
        let zeros = self
            .zero_loci
            .iter()
            .map(move |&(c0, c1, reach)| (distance_to_zeta_zeros(s * c1 + c0), reach));
        poles.chain(zeros)
    }

    /// Factor `λ ≤ 1` by which all radii are shrunk at `s` so that every
    /// spurious singular locus stays at least twice the polydisc reach away.
    /// The residue does not depend on the radii as long as no such locus is
    /// crossed, so this only changes which `s` can be evaluated.
    pub fn radius_scale(&self, s: C64) -> f64 {
        self.loci(s)
            .filter(|&(_, reach)| reach > 0.0)
            .map(|(d, reach)| 0.5 * d / reach)
            .fold(1.0, f64::min)
    }

    /// Raw residue `R(s)` with `t_{α_P} = s`.
    pub fn residue(&self, s: C64, opts: &ResidueOptions) -> Result<ResidueValue> {
        let scale = self.radius_scale(s);
        if scale < 1e-4 {
            return Err(Error::PoleHit {
                term: 0,
                detail: format!("s = {s} lies on a singular locus of the residue (radius scale {scale:.1e})"),
            });
        }
        let radii: Vec<f64> = self.radii.iter().map(|r| r * scale).collect();
        let v = self.residue_with_radii(s, &radii, opts)?;
        if opts.radius_check && !self.order.is_empty() {
            let half: Vec<f64> = radii.iter().map(|r| r / 2.0).collect();
            let w = self.residue_with_radii(s, &half, opts)?;
            let change = (v.value - w.value).norm() / v.value.norm().max(1e-300);
            if change > opts.radius_tol {
                return Err(Error::RadiusDiagnostic { change });
            }
        }
        Ok(v)
    }

    fn residue_with_radii(&self, s: C64, radii: &[f64], opts: &ResidueOptions) -> Result<ResidueValue> {
        let d = self.order.len();
        if d == 0 {
            let mut t = vec![C64::new(0.0, 0.0); self.compiled.nvars];
            t[self.alpha_p] = s;
            let value = self.compiled.eval(&t, &mut Vec::new(), &mut Vec::new())?;
            return Ok(ResidueValue {
                value,
                nodes: 1,
                change: 0.0,
            });
        }
        let mut n = 2 * opts.initial_nodes.max(2);
        let mut last_change = f64::INFINITY;
        while n.checked_pow(d as u32).is_some_and(|total| total <= opts.max_total_nodes) {
            let (full, sub, mean_abs) = self.torus_sums(s, n, radii)?;
            let scale = full.norm().max(1e-6 * mean_abs);
            let diff = (full - sub).norm();
            last_change = diff / scale.max(1e-300);
            // near a zero of R the relative tolerance can sit below roundoff
            let noise = NOISE_ULPS * f64::EPSILON * mean_abs;
            if last_change <= opts.tol || diff <= noise {
                return Ok(ResidueValue {
                    value: full,
                    nodes: n,
                    change: last_change,
                });
            }
            n *= 2;
        }
        Err(Error::ResidueInstability {
            nodes: n / 2,
            change: last_change,
        })
    }

    /// Trapezoid averages on the `n`-node and `n/2`-node tori, plus the mean
    /// modulus of the summands.
    fn torus_sums(&self, s: C64, n: usize, radii: &[f64]) -> Result<(C64, C64, f64)> {
        let d = self.order.len();
        let roots: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect();
        let inner_count = n.pow(d as u32 - 1);
        let outer = |k0: usize| -> Result<(C64, C64, f64)> {
            let mut t = vec![C64::new(0.0, 0.0); self.compiled.nvars];
            t[self.alpha_p] = s;
            let mut fb = Vec::new();
            let mut xb = Vec::new();
            let mut full = Vec::with_capacity(inner_count);
            let mut sub = Vec::new();
            let mut abs_sum = 0.0;
            for rest in 0..inner_count {
                let mut idx = rest;
                let mut even = k0.is_multiple_of(2);
                let mut weight = C64::new(1.0, 0.0);
                for level in 0..d {
                    let k = if level == 0 {
                        k0
                    } else {
                        let k = idx % n;
                        idx /= n;
                        k
                    };
                    even &= k % 2 == 0;
                    let tv = roots[k] * radii[level];
                    t[self.order[level]] = tv;
                    weight *= tv;
                }
                let v = self.compiled.eval(&t, &mut fb, &mut xb)? * weight;
                abs_sum += v.norm();
                if even {
                    sub.push(v);
                }
                full.push(v);
            }
            Ok((pairwise_sum(&full), pairwise_sum(&sub), abs_sum))
        };
        #[cfg(feature = "parallel")]
        let parts: Vec<Result<(C64, C64, f64)>> = (0..n).into_par_iter().map(outer).collect();
        #[cfg(not(feature = "parallel"))]
        let parts: Vec<Result<(C64, C64, f64)>> = (0..n).map(outer).collect();
        let parts: Vec<(C64, C64, f64)> = parts.into_iter().collect::<Result<_>>()?;
        let full: Vec<C64> = parts.iter().map(|p| p.0).collect();
        let sub: Vec<C64> = parts.iter().map(|p| p.1).collect();
        let total = n.pow(d as u32) as f64;
        let half_total = (n / 2).pow(d as u32) as f64;
        let abs_mean = parts.iter().map(|p| p.2).sum::<f64>() / total;
        Ok((pairwise_sum(&full) / total, pairwise_sum(&sub) / half_total, abs_mean))
    }
}

/// `R(s)` with default options.
pub fn iterated_residue(terms: &[PeriodTerm], spec: &ZetaSpec, s: C64) -> Result<C64> {
    Ok(ResidueEngine::new(terms, spec)?
        .residue(s, &ResidueOptions::default())?
        .value)
}

/// `c0 + c1·s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearInS {
    pub c0: Rational64,
    pub c1: Rational64,
}

impl LinearInS {
    pub fn eval(&self, s: C64) -> C64 {
        s * self.c1.to_f64().unwrap() + self.c0.to_f64().unwrap()
    }
}

/// A term of the residue written as a function of `s` alone.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictedTerm {
    pub weyl_word: Vec<usize>,
    pub coef: Rational64,
    pub linear: Vec<LinearInS>,
    pub xi_num: Vec<LinearInS>,
    pub xi_den: Vec<LinearInS>,
}

/// Closed form of the iterated residue as a sum of ξ-monomials in `s`.
///
/// Near the origin of the residue variables every term has at most a simple
/// pole along each `t_β = 0`, coming either from a linear form `c·t_β` or from
/// a factor `ξ(1 + t_β)`; the residue of such a term is its regular part at
/// `t_β = 0`, and terms missing one of the poles contribute nothing. Matching
/// ξ factors in numerator and denominator of a term are cancelled. Returns an
/// error when the structure is not of this normal-crossing, simple-pole kind.
pub fn residue_structure(terms: &[PeriodTerm], alpha_p: usize) -> Result<Vec<RestrictedTerm>> {
    let nvars = terms
        .first()
        .map(|t| t.denominator_forms.len())
        .ok_or_else(|| Error::Config("empty period".into()))?;
    let restrict = |f: &AffineForm| LinearInS {
        c0: f.constant,
        c1: f.coefficients[alpha_p],
    };
    let mut out = Vec::new();
    for term in terms {
        let mut used = vec![false; nvars];
        let mut coef = term.scalar;
        let mut linear = Vec::new();
        let mut num = Vec::new();
        let mut duplicate = false;
        for f in &term.denominator_forms {
            match f.as_coordinate() {
                Some((g, c)) if g != alpha_p => {
                    duplicate |= used[g];
                    used[g] = true;
                    coef /= c;
                }
                _ => {
                    let only_residue_vars = f.constant.is_zero() && f.coefficients[alpha_p].is_zero();
                    if only_residue_vars {
                        return Err(Error::Config(format!(
                            "term {:?}: singular form through the origin is not a coordinate hyperplane",
                            term.w.word
                        )));
                    }
                    linear.push(restrict(f));
                }
            }
        }
        for f in &term.xi_numerator_args {
            let shifted = f.shifted(-1);
            match shifted.as_coordinate() {
                Some((g, c)) if g != alpha_p && c.is_one() => {
                    duplicate |= used[g];
                    used[g] = true;
                }
                Some((g, _)) if g != alpha_p => {
                    return Err(Error::Config("xi pole with non-unit coefficient".into()));
                }
                _ => num.push(restrict(f)),
            }
        }
        if duplicate {
            return Err(Error::Config(format!(
                "term {:?} has a higher-order pole along a residue hyperplane",
                term.w.word
            )));
        }
        let complete = (0..nvars).all(|g| g == alpha_p || used[g]);
        if !complete {
            continue;
        }
        let mut den: Vec<LinearInS> = term.xi_denominator_args.iter().map(restrict).collect();
        // cancel identical ξ factors
        let mut kept_num = Vec::new();
        for x in num {
            if let Some(pos) = den.iter().position(|y| *y == x) {
                den.remove(pos);
            } else {
                kept_num.push(x);
            }
        }
        kept_num.sort();
        den.sort();
        out.push(RestrictedTerm {
            weyl_word: term.w.word.clone(),
            coef,
            linear,
            xi_num: kept_num,
            xi_den: den,
        });
    }
    Ok(out)
}

pub fn eval_structure(terms: &[RestrictedTerm], s: C64) -> Result<C64> {
    let mut vals = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let mut v = C64::new(t.coef.to_f64().unwrap(), 0.0);
        for l in &t.linear {
            let d = l.eval(s);
            if d.norm() < POLE_EPS {
                return Err(Error::PoleHit {
                    term: i,
                    detail: "linear form vanishes".into(),
                });
            }
            v /= d;
        }
        for l in &t.xi_num {
            v *= completed_xi(l.eval(s))?;
        }
        for l in &t.xi_den {
            v /= completed_xi(l.eval(s))?;
        }
        vals.push(v);
    }
    Ok(pairwise_sum(&vals))
}

/// `ξ(c0 + c1 s)` factors that clear every `s`-dependent ξ denominator of the
/// residue: each distinct argument with its maximal multiplicity in a term.
pub fn clearing_factors_in_s(terms: &[RestrictedTerm]) -> Vec<LinearInS> {
    let mut best: HashMap<LinearInS, usize> = HashMap::new();
    for t in terms {
        let mut count: HashMap<LinearInS, usize> = HashMap::new();
        for l in t.xi_den.iter().filter(|l| !l.c1.is_zero()) {
            *count.entry(*l).or_default() += 1;
        }
        for (k, v) in count {
            let e = best.entry(k).or_default();
            *e = (*e).max(v);
        }
    }
    let mut out: Vec<LinearInS> = best
        .into_iter()
        .flat_map(|(k, v)| std::iter::repeat_n(k, v))
        .collect();
    out.sort();
    out
}

/// Position of the pole `1/s` contributed by the identity term, if present.
pub fn identity_pole(terms: &[RestrictedTerm]) -> Option<f64> {
    terms.iter().find(|t| t.weyl_word.is_empty()).and_then(|t| {
        t.linear
            .iter()
            .find(|l| !l.c1.is_zero())
            .map(|l| (-l.c0 / l.c1).to_f64().unwrap())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::terms::build_period_terms;
    use crate::rootdata::{build_root_system, CartanType, WeylElement};
    use crate::exact::rat;
    use crate::specfun::{c, completed_xi};

    fn custom(forms: Vec<AffineForm>, num: Vec<AffineForm>) -> PeriodTerm {
        PeriodTerm {
            w: WeylElement {
                word: vec![],
                matrix: vec![],
            },
            scalar: rat(1),
            denominator_forms: forms,
            xi_numerator_args: num,
            xi_denominator_args: vec![],
        }
    }

    #[test]
    fn simple_pole_gives_regular_part() {
        // 1/t_1 · ξ(t_2 + 2): residue in t_1 at t_2 = s is ξ(s + 2)
        let term = custom(vec![AffineForm::from_ints(0, &[1, 0])], vec![AffineForm::from_ints(2, &[0, 1])]);
        let engine = ResidueEngine::from_parts(&[term], 1, &[0], &[0.1]).unwrap();
        let s = c(0.7, 0.4);
        let r = engine.residue(s, &ResidueOptions::default()).unwrap();
        let expect = completed_xi(s + 2.0).unwrap();
        assert!((r.value - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn regular_function_has_zero_residue() {
        let term = custom(vec![AffineForm::from_ints(3, &[1, 0])], vec![AffineForm::from_ints(2, &[1, 1])]);
        let engine = ResidueEngine::from_parts(&[term], 1, &[0], &[0.1]).unwrap();
        let r = engine.residue(c(0.7, 0.4), &ResidueOptions::default()).unwrap();
        assert!(r.value.norm() < 1e-13);
    }

    #[test]
    fn a2_residue_converges_and_is_radius_stable() {
        let rs = build_root_system(CartanType::A2);
        let terms = build_period_terms(&rs);
        let spec = ZetaSpec::new(CartanType::A2, 0).unwrap();
        let engine = ResidueEngine::new(&terms, &spec).unwrap();
        let opts = ResidueOptions {
            radius_check: true,
            ..Default::default()
        };
        let s = c(2.3, 0.0);
        let r = engine.residue(s, &opts).unwrap();
        let strict = ResidueOptions {
            tol: 1e-12,
            initial_nodes: 32,
            ..Default::default()
        };
        let r2 = engine.residue(s, &strict).unwrap();
        assert!((r.value - r2.value).norm() < 1e-8 * r2.value.norm());
        let closed = eval_structure(&residue_structure(&terms, 0).unwrap(), s).unwrap();
        assert!((r2.value - closed).norm() < 1e-12 * closed.norm());
    }

    #[test]
    fn structure_of_a1_is_whole_period() {
        let rs = build_root_system(CartanType::A1);
        let terms = build_period_terms(&rs);
        let st = residue_structure(&terms, 0).unwrap();
        assert_eq!(st.len(), 2);
        assert_eq!(identity_pole(&st), Some(0.0));
        let clear = clearing_factors_in_s(&st);
        assert_eq!(clear, vec![LinearInS { c0: rat(2), c1: rat(1) }]);
    }

    #[test]
    fn clearance_detects_nearby_poles() {
        let rs = build_root_system(CartanType::A2);
        let terms = build_period_terms(&rs);
        let spec = ZetaSpec::new(CartanType::A2, 0).unwrap();
        let engine = ResidueEngine::new(&terms, &spec).unwrap();
        assert!(engine.clearance(c(0.0005, 0.0)) < 1e-3);
        assert!(engine.clearance(c(-1.0, 0.05)) < 0.0);
        assert!(engine.clearance(c(0.5, 3.0)) > 0.1);
    }
}
