//! Complex special functions: ζ, log Γ, the completed zeta ξ and K-Bessel.
//!
//! Double precision throughout. ζ uses Euler–Maclaurin summation with the
//! cutoff `N = 10 + 2|Im s|`; ξ is always evaluated in `Re s ≥ 1/2` and
//! reflected, which keeps `ξ(s) = ξ(1 − s)` exact by construction.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest |Im s| for which ζ and ξ are documented to be accurate.
pub const MAX_IMAG: f64 = 200.0;

/// Residue of ξ at s = 1.
pub const XI_RESIDUE_AT_ONE: f64 = 1.0;
/// Residue of ξ at s = 0.
pub const XI_RESIDUE_AT_ZERO: f64 = -1.0;

/// `B_{2k}` for k = 1..=15.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn fmt_c(s: C64) -> String {
    format!("{}{:+}i", s.re, s.im)
}

fn is_nonpositive_integer(s: C64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

/// Riemann zeta function.
pub fn zeta_complex(s: C64) -> Result<C64> {
    if s == c(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: fmt_c(s),
        });
    }
    if s.im.abs() > MAX_IMAG {
        return Err(Error::Range {
            function: "zeta",
            at: fmt_c(s),
            limit: format!("|Im s| <= {MAX_IMAG}"),
        });
    }
    if s.re >= -1.0 {
        return Ok(zeta_euler_maclaurin(s));
    }
    // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    let one_minus = c(1.0, 0.0) - s;
    let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + log_gamma(one_minus)?;
    Ok(log_factor.exp() * (s * (PI / 2.0)).sin() * zeta_euler_maclaurin(one_minus))
}

fn zeta_euler_maclaurin(s: C64) -> C64 {
    if s == c(0.0, 0.0) {
        return c(-0.5, 0.0);
    }
    let n = 10 + (2.0 * s.im.abs()).ceil() as usize;
    let mut sum = C64::new(0.0, 0.0);
    // Sum small terms first.
    for k in (1..n).rev() {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    sum += n_pow * nf / (s - 1.0) + n_pow * 0.5;
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut fact = 2.0; // (2k)!
    let mut power = n_pow / nf; // N^{−s−2k+1}
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = rising * power * (*b / fact);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        let kk = (k + 1) as f64;
        rising *= (s + (2.0 * kk - 1.0)) * (s + 2.0 * kk);
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        power /= nf * nf;
    }
    sum
}

/// log Γ(s), the analytic branch that is real on the positive axis.
pub fn log_gamma(s: C64) -> Result<C64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            function: "log_gamma",
            at: fmt_c(s),
        });
    }
    if s.re < -1.0e4 {
        return Err(Error::Range {
            function: "log_gamma",
            at: fmt_c(s),
            limit: "Re s >= -1e4".into(),
        });
    }
    let mut z = s;
    let mut shift = C64::new(0.0, 0.0);
    while z.re < 10.0 {
        shift += z.ln();
        z += 1.0;
    }
    Ok(stirling(z) - shift)
}

fn stirling(z: C64) -> C64 {
    let mut acc = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    let zinv = z.inv();
    let z2 = zinv * zinv;
    let mut p = zinv;
    for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        acc += p * (*b / (m * (m - 1.0)));
        p *= z2;
    }
    acc
}

pub fn gamma(s: C64) -> Result<C64> {
    Ok(log_gamma(s)?.exp())
}

/// Completed zeta `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)`.
pub fn completed_xi(s: C64) -> Result<C64> {
    if s == c(0.0, 0.0) || s == c(1.0, 0.0) {
        return Err(Error::Pole {
            function: "xi",
            at: fmt_c(s),
        });
    }
    let t = if s.re >= 0.5 { s } else { c(1.0, 0.0) - s };
    if t.im.abs() > MAX_IMAG {
        return Err(Error::Range {
            function: "xi",
            at: fmt_c(s),
            limit: format!("|Im s| <= {MAX_IMAG}"),
        });
    }
    let log_front = -t * (0.5 * PI.ln()) + log_gamma(t * 0.5)?;
    Ok(log_front.exp() * zeta_euler_maclaurin(t))
}

/// `π^{−s/2} Γ(s/2) ζ(s)` evaluated at `s` itself, without reflection.
///
/// Used to test the functional equation of the underlying ζ and log Γ
/// rather than assume it; accurate for `−1 ≤ Re s ≤ 2`.
pub fn completed_xi_unreflected(s: C64) -> Result<C64> {
    if s == c(0.0, 0.0) || s == c(1.0, 0.0) {
        return Err(Error::Pole {
            function: "xi",
            at: fmt_c(s),
        });
    }
    Ok((-s * (0.5 * PI.ln()) + log_gamma(s * 0.5)?).exp() * zeta_complex(s)?)
}

/// `ξ(s)` for real `s`.
pub fn xi_real(s: f64) -> Result<f64> {
    completed_xi(c(s, 0.0)).map(|v| v.re)
}

/// Ordinates of the nontrivial zeta zeros in `0 < Im s < 300` (mpmath).
pub const ZETA_ZERO_ORDINATES: [f64; 138] = [
    14.134725141734695, 21.022039638771556, 25.01085758014569, 30.424876125859512,
    32.93506158773919, 37.586178158825675, 40.9187190121475, 43.327073280915,
    48.00515088116716, 49.7738324776723, 52.970321477714464, 56.44624769706339,
    59.34704400260235, 60.83177852460981, 65.1125440480816, 67.07981052949417,
    69.54640171117398, 72.0671576744819, 75.70469069908393, 77.1448400688748,
    79.33737502024937, 82.91038085408603, 84.73549298051705, 87.42527461312523,
    88.80911120763446, 92.49189927055849, 94.65134404051989, 95.87063422824531,
    98.83119421819369, 101.31785100573138, 103.72553804047834, 105.44662305232609,
    107.1686111842764, 111.02953554316967, 111.87465917699264, 114.32022091545271,
    116.22668032085755, 118.79078286597621, 121.37012500242065, 122.94682929355258,
    124.25681855434577, 127.5166838795965, 129.57870419995606, 131.08768853093267,
    133.4977372029976, 134.75650975337388, 138.11604205453344, 139.7362089521214,
    141.12370740402113, 143.11184580762063, 146.0009824867655, 147.42276534255961,
    150.05352042078488, 150.92525761224147, 153.0246938111989, 156.11290929423788,
    157.59759181759406, 158.8499881714205, 161.18896413759603, 163.030709687182,
    165.5370691879004, 167.1844399781745, 169.09451541556882, 169.9119764794117,
    173.41153651959155, 174.75419152336573, 176.44143429771043, 178.37740777609997,
    179.916484020257, 182.20707848436646, 184.8744678483875, 185.59878367770747,
    187.22892258350186, 189.41615865601693, 192.0266563607138, 193.0797266038457,
    195.26539667952923, 196.87648184095832, 198.01530967625192, 201.2647519437038,
    202.49359451414054, 204.18967180310455, 205.3946972021633, 207.90625888780622,
    209.57650971685626, 211.6908625953653, 213.34791935971268, 214.54704478349143,
    216.1695385082637, 219.0675963490214, 220.714918839314, 221.43070555469333,
    224.00700025460432, 224.9833246695823, 227.4214442796793, 229.33741330552536,
    231.25018870049917, 231.98723525318024, 233.6934041789083, 236.5242296658162,
    237.7698204809252, 239.55547757332764, 241.04915779621658, 242.8232719342226,
    244.07089849707816, 247.1369900748975, 248.10199006014847, 249.5736896447072,
    251.014947795016, 253.06998674799948, 255.30625645491403, 256.38071369443446,
    258.6104394915314, 259.874406989678, 260.8050845045969, 263.57389390487015,
    265.55785183887633, 266.6149737815011, 267.92191508282406, 269.9704490239976,
    271.494055641645, 273.4596091884033, 275.58749264934386, 276.4520495031329,
    278.25074352984194, 279.22925092774517, 282.4651147650521, 283.2111857332339,
    284.83596398090475, 286.6674453630029, 287.9119205014222, 289.5798549292188,
    291.8462913290674, 293.5584341393563, 294.9653696192655, 295.57325487895827,
    297.97927706194344, 299.8403260537213,
];

/// Distance from `z` to the nearest nontrivial zero of ζ (equivalently of ξ).
///
/// Uses the tabulated ordinates and the verified fact that these zeros lie on
/// `Re s = 1/2`; above the table only the lower bound `|Re z − 1/2|` is used.
pub fn distance_to_zeta_zeros(z: C64) -> f64 {
    let dx = (z.re - 0.5).abs();
    let y = z.im.abs();
    let last = ZETA_ZERO_ORDINATES[ZETA_ZERO_ORDINATES.len() - 1];
    if y > last + 1.0 {
        return dx;
    }
    let i = ZETA_ZERO_ORDINATES.partition_point(|&g| g < y);
    let mut dy = f64::INFINITY;
    for j in [i.wrapping_sub(1), i] {
        if let Some(g) = ZETA_ZERO_ORDINATES.get(j) {
            dy = dy.min((g - y).abs());
        }
    }
    dx.hypot(dy)
}

/// `K_ν(y) = ∫_0^∞ e^{−y cosh u} cosh(νu) du` by the trapezoid rule.
///
/// The integrand is entire and decays double-exponentially, so the trapezoid
/// rule converges geometrically. Relative accuracy degrades roughly like
/// `1e-16 · e^{π|Im ν|/2}` because the integral cancels for large imaginary
/// order.
pub fn bessel_k(nu: C64, y: f64) -> Result<C64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain {
            function: "bessel_k",
            reason: format!("argument must be positive, got {y}"),
        });
    }
    let h = (PI * PI / (40.0 + PI * nu.im.abs())).min(0.2);
    let a = nu.re.abs();
    // Integrand modulus e^{−y cosh u + a u} peaks where sinh u = a / y.
    let peak = (a / y).asinh();
    let log_peak = -y * peak.cosh() + a * peak;
    let mut sum = C64::new(0.5 * (-y).exp(), 0.0);
    let mut k = 1usize;
    loop {
        let u = k as f64 * h;
        let log_mod = -y * u.cosh();
        let term = (nu * u).cosh() * log_mod.exp();
        sum += term;
        if u > peak && log_mod + a * u < log_peak - 40.0 {
            break;
        }
        k += 1;
        if k > 1_000_000 {
            return Err(Error::Quadrature {
                estimate: fmt_c(sum * h),
                error_estimate: f64::NAN,
            });
        }
    }
    Ok(sum * h)
}

/// `σ_{w}(n) = Σ_{d | n} d^{w}` for complex `w`.
pub fn divisor_sigma(n: u64, w: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += (w * (d as f64).ln()).exp();
            let e = n / d;
            if e != d {
                acc += (w * (e as f64).ln()).exp();
            }
        }
        d += 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn tabulated_zeros_are_zeros() {
        for &g in ZETA_ZERO_ORDINATES.iter().step_by(11).filter(|&&g| g < 200.0) {
            assert!(zeta_complex(c(0.5, g)).unwrap().norm() < 1e-8, "{g}");
        }
        assert!(ZETA_ZERO_ORDINATES.windows(2).all(|w| w[0] < w[1]));
        assert!((distance_to_zeta_zeros(c(0.5, 14.0)) - 0.134725141734695).abs() < 1e-12);
        assert!((distance_to_zeta_zeros(c(1.5, -21.022039638771556)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_special_values() {
        assert!(rel(zeta_complex(c(2.0, 0.0)).unwrap(), c(PI * PI / 6.0, 0.0)) < 1e-14);
        assert!(rel(zeta_complex(c(0.0, 0.0)).unwrap(), c(-0.5, 0.0)) < 1e-14);
        assert!(rel(zeta_complex(c(-1.0, 0.0)).unwrap(), c(-1.0 / 12.0, 0.0)) < 1e-12);
        assert!(rel(zeta_complex(c(4.0, 0.0)).unwrap(), c(PI.powi(4) / 90.0, 0.0)) < 1e-14);
        assert!(zeta_complex(c(-4.0, 0.0)).unwrap().norm() < 1e-14);
        // ζ(−3) = 1/120 via the reflection branch
        assert!(rel(zeta_complex(c(-3.0, 0.0)).unwrap(), c(1.0 / 120.0, 0.0)) < 1e-12);
    }

    #[test]
    fn zeta_first_zero() {
        let v = zeta_complex(c(0.5, 14.134725141734693)).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
    }

    #[test]
    fn zeta_pole_and_range() {
        assert!(matches!(zeta_complex(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(zeta_complex(c(0.5, 250.0)), Err(Error::Range { .. })));
    }

    #[test]
    fn zeta_schwarz_reflection() {
        for s in [c(0.3, 7.0), c(-2.5, 3.0), c(3.0, 40.0)] {
            let a = zeta_complex(s).unwrap();
            let b = zeta_complex(s.conj()).unwrap();
            assert!(rel(a, b.conj()) < 1e-13);
        }
    }

    #[test]
    fn zeta_matches_euler_product() {
        // Tail of the product over p > 3·10⁷ is below 1e-9 for Re s ≥ 2.
        let limit = 30_000_000usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for n in 2..limit {
            if !composite[n] {
                primes.push(n as u64);
                let mut m = n * n;
                while m < limit {
                    composite[m] = true;
                    m += n;
                }
            }
        }
        for s in [c(2.0, 1.0), c(3.0, -5.0), c(2.5, 20.0)] {
            let mut prod = c(1.0, 0.0);
            for &p in &primes {
                prod /= c(1.0, 0.0) - (-s * (p as f64).ln()).exp();
            }
            assert!(rel(zeta_complex(s).unwrap(), prod) < 1e-8);
        }
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        for s in [c(0.3, 2.0), c(-2.7, 0.4), c(5.0, -30.0)] {
            let ratio = (log_gamma(s + 1.0).unwrap() - log_gamma(s).unwrap()).exp();
            assert!(rel(ratio, s) < 1e-12);
        }
        assert!(log_gamma(c(-3.0, 0.0)).is_err());
    }

    #[test]
    fn xi_values_and_symmetry() {
        assert!((xi_real(2.0).unwrap() - PI / 6.0).abs() < 1e-14);
        let a = completed_xi(c(0.3, 2.0)).unwrap();
        let b = completed_xi(c(0.7, -2.0)).unwrap();
        assert!(rel(a, b) < 1e-12);
        for eps in [1e-6, -1e-6] {
            let v = completed_xi(c(1.0 + eps, 0.0)).unwrap() * eps;
            assert!((v.re - XI_RESIDUE_AT_ONE).abs() < 1e-5);
            let w = completed_xi(c(eps, 0.0)).unwrap() * eps;
            assert!((w.re - XI_RESIDUE_AT_ZERO).abs() < 1e-5);
        }
        assert!(completed_xi(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn bessel_k_closed_forms() {
        let v = bessel_k(c(0.5, 0.0), 2.0).unwrap();
        let exact = (PI / 4.0).sqrt() * (-2.0f64).exp();
        assert!(rel(v, c(exact, 0.0)) < 1e-13);
        // K_{3/2}(y) = √(π/(2y)) e^{−y} (1 + 1/y)
        let y = 0.7;
        let exact = (PI / (2.0 * y)).sqrt() * (-y).exp() * (1.0 + 1.0 / y);
        assert!(rel(bessel_k(c(1.5, 0.0), y).unwrap(), c(exact, 0.0)) < 1e-13);
        assert!(bessel_k(c(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn bessel_k_frozen_values() {
        assert!(rel(bessel_k(c(0.0, 0.0), 1.0).unwrap(), c(0.42102443824070833, 0.0)) < 1e-13);
        assert!(rel(bessel_k(c(1.0, 0.0), 1.0).unwrap(), c(0.6019072301972346, 0.0)) < 1e-13);
    }

    #[test]
    fn bessel_k_even_in_order() {
        for (nu, y) in [(c(0.3, 1.2), 0.5), (c(7.0, -2.0), 3.0), (c(2.0, 0.5), 40.0)] {
            let a = bessel_k(nu, y).unwrap();
            let b = bessel_k(-nu, y).unwrap();
            assert!(rel(a, b) < 1e-14);
        }
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_sigma(12, c(1.0, 0.0)).re.round(), 28.0);
        assert_eq!(divisor_sigma(1, c(-3.0, 2.0)), c(1.0, 0.0));
    }
}
