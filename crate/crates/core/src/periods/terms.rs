//! Weyl-group period `ω(λ)` as a list of explicit terms in `t`, where
//! `λ = ρ + Σ t_α ω_α`.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat;
use crate::rootdata::{inversion_set, weyl_group, RootSystem, WeylElement};
use crate::specfun::{completed_xi, C64};

/// `constant + Σ coefficients[i]·t_i` with rational data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    pub constant: Rational64,
    pub coefficients: Vec<Rational64>,
}

impl AffineForm {
    pub fn new(constant: Rational64, coefficients: Vec<Rational64>) -> Self {
        AffineForm {
            constant,
            coefficients,
        }
    }

    pub fn from_ints(constant: i64, coefficients: &[i64]) -> Self {
        AffineForm::new(rat(constant), coefficients.iter().map(|&c| rat(c)).collect())
    }

    pub fn eval(&self, t: &[C64]) -> C64 {
        let mut acc = C64::new(self.constant.to_f64().unwrap(), 0.0);
        for (c, x) in self.coefficients.iter().zip(t) {
            if !c.is_zero() {
                acc += x * c.to_f64().unwrap();
            }
        }
        acc
    }

    pub fn eval_exact(&self, t: &[Rational64]) -> Rational64 {
        self.coefficients
            .iter()
            .zip(t)
            .fold(self.constant, |acc, (c, x)| acc + c * x)
    }

    pub fn shifted(&self, k: i64) -> AffineForm {
        AffineForm::new(self.constant + rat(k), self.coefficients.clone())
    }

    /// `Some((i, c))` when the form is exactly `c·t_i`.
    pub fn as_coordinate(&self) -> Option<(usize, Rational64)> {
        if !self.constant.is_zero() {
            return None;
        }
        let mut nz = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero());
        let first = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((first.0, *first.1))
    }

    pub(crate) fn to_f64(&self) -> (f64, Vec<f64>) {
        (
            self.constant.to_f64().unwrap(),
            self.coefficients.iter().map(|c| c.to_f64().unwrap()).collect(),
        )
    }
}

/// One Weyl summand: `scalar · ∏ξ(num) / (∏ forms · ∏ξ(den))`.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodTerm {
    pub w: WeylElement,
    pub scalar: Rational64,
    pub denominator_forms: Vec<AffineForm>,
    pub xi_numerator_args: Vec<AffineForm>,
    pub xi_denominator_args: Vec<AffineForm>,
}

/// One term per Weyl element, identity first.
pub fn build_period_terms(rs: &RootSystem) -> Vec<PeriodTerm> {
    let n = rs.rank;
    weyl_group(rs)
        .into_iter()
        .map(|w| {
            // ⟨wλ − ρ, α_i∨⟩ = (M(1 + t))_i − 1
            let denominator_forms = w
                .matrix
                .iter()
                .map(|row| AffineForm::from_ints(row.iter().sum::<i64>() - 1, row))
                .collect();
            let mut num = Vec::new();
            let mut den = Vec::new();
            for idx in inversion_set(rs, &w) {
                let co = &rs.positive_roots[idx].coroot;
                // ⟨λ, α∨⟩ = Σ c_j (1 + t_j)
                let f = AffineForm::from_ints(co.iter().sum(), co);
                den.push(f.shifted(1));
                num.push(f);
            }
            debug_assert_eq!(num.len(), w.length());
            debug_assert_eq!(n, w.matrix.len());
            PeriodTerm {
                w,
                scalar: rat(1),
                denominator_forms,
                xi_numerator_args: num,
                xi_denominator_args: den,
            }
        })
        .collect()
}

const POLE_EPS: f64 = 1e-13;

fn xi_checked(arg: C64, term: usize) -> Result<C64> {
    if arg.norm() < POLE_EPS || (arg - 1.0).norm() < POLE_EPS {
        return Err(Error::PoleHit {
            term,
            detail: format!("xi argument {arg} is a pole"),
        });
    }
    completed_xi(arg)
}

/// Value of a single term at `t`.
pub fn eval_term(term: &PeriodTerm, index: usize, t: &[C64]) -> Result<C64> {
    let mut v = C64::new(term.scalar.to_f64().unwrap(), 0.0);
    for (k, f) in term.denominator_forms.iter().enumerate() {
        let d = f.eval(t);
        if d.norm() < POLE_EPS {
            return Err(Error::PoleHit {
                term: index,
                detail: format!("denominator form {k} vanishes"),
            });
        }
        v /= d;
    }
    for f in &term.xi_numerator_args {
        v *= xi_checked(f.eval(t), index)?;
    }
    for f in &term.xi_denominator_args {
        v /= xi_checked(f.eval(t), index)?;
    }
    Ok(v)
}

/// `ω(λ)` at `λ = ρ + Σ t_α ω_α`.
pub fn eval_period(terms: &[PeriodTerm], t: &[C64]) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (i, term) in terms.iter().enumerate() {
        if let Some(f) = term.denominator_forms.first() {
            if f.coefficients.len() != t.len() {
                return Err(Error::Dimension {
                    expected: f.coefficients.len(),
                    got: t.len(),
                });
            }
        }
        acc += eval_term(term, i, t)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_system, CartanType};
    use crate::specfun::{c, xi_real};

    #[test]
    fn a1_terms_by_hand() {
        let rs = build_root_system(CartanType::A1);
        let terms = build_period_terms(&rs);
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].denominator_forms, vec![AffineForm::from_ints(0, &[1])]);
        assert!(terms[0].xi_numerator_args.is_empty());
        assert_eq!(terms[1].denominator_forms, vec![AffineForm::from_ints(-2, &[-1])]);
        assert_eq!(terms[1].xi_numerator_args, vec![AffineForm::from_ints(1, &[1])]);
        assert_eq!(terms[1].xi_denominator_args, vec![AffineForm::from_ints(2, &[1])]);
        // 1/t − ξ(t+1)/((t+2)ξ(t+2)) at three rational points
        for t in [2.0, 0.5, 3.25] {
            let v = eval_period(&terms, &[c(t, 0.0)]).unwrap();
            let expect = 1.0 / t - xi_real(t + 1.0).unwrap() / ((t + 2.0) * xi_real(t + 2.0).unwrap());
            assert!((v.re - expect).abs() < 1e-14 * expect.abs().max(1.0));
        }
        let v = eval_period(&terms, &[c(2.0, 0.0)]).unwrap();
        let expect = 0.5 - xi_real(3.0).unwrap() / (4.0 * xi_real(4.0).unwrap());
        assert!((v.re - expect).abs() < 1e-15);
    }

    #[test]
    fn term_shapes() {
        for (t, n, top) in [(CartanType::A2, 6, 3), (CartanType::G2, 12, 6), (CartanType::C2, 8, 4)] {
            let rs = build_root_system(t);
            let terms = build_period_terms(&rs);
            assert_eq!(terms.len(), n);
            for term in &terms {
                assert_eq!(term.denominator_forms.len(), rs.rank);
                assert_eq!(term.xi_numerator_args.len(), term.w.length());
                assert_eq!(term.xi_denominator_args.len(), term.w.length());
            }
            assert_eq!(terms.iter().map(|x| x.xi_numerator_args.len()).max(), Some(top));
        }
        let rs = build_root_system(CartanType::A2);
        let id = &build_period_terms(&rs)[0];
        assert_eq!(id.denominator_forms[0], AffineForm::from_ints(0, &[1, 0]));
        assert_eq!(id.denominator_forms[1], AffineForm::from_ints(0, &[0, 1]));
    }

    #[test]
    fn pole_hit_is_reported() {
        let rs = build_root_system(CartanType::A2);
        let terms = build_period_terms(&rs);
        let err = eval_period(&terms, &[c(0.0, 0.0), c(0.4, 0.1)]).unwrap_err();
        assert!(matches!(err, Error::PoleHit { term: 0, .. }));
    }

    #[test]
    fn sum_of_terms_equals_period() {
        let rs = build_root_system(CartanType::A2);
        let terms = build_period_terms(&rs);
        let t = [c(0.37, 0.21), c(-0.52, 1.3)];
        let total = eval_period(&terms, &t).unwrap();
        let parts: C64 = terms
            .iter()
            .enumerate()
            .map(|(i, x)| eval_term(x, i, &t).unwrap())
            .sum();
        assert!((total - parts).norm() < 1e-14 * total.norm());
    }

    #[test]
    fn exact_form_evaluation() {
        let f = AffineForm::from_ints(-1, &[2, -1]);
        assert_eq!(f.eval_exact(&[Rational64::new(1, 2), rat(3)]), rat(-3));
        assert_eq!(AffineForm::from_ints(0, &[0, 3]).as_coordinate(), Some((1, rat(3))));
        assert_eq!(AffineForm::from_ints(0, &[1, 1]).as_coordinate(), None);
    }
}
