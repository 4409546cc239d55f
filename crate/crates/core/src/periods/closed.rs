//! Published closed form for `(SL(3), P_{2,1})`, used as a regression target.

use crate::error::Result;
use crate::specfun::{c, completed_xi, xi_real, C64};

/// Six-term closed form of `ξ^{SL(3)/P_{2,1}}(s)`.
pub fn sl3_closed_form(s: C64) -> Result<C64> {
    let one = c(1.0, 0.0);
    let x2 = xi_real(2.0)?;
    let (t, u, v, w) = (s * 3.0 - 3.0, s * 3.0, s * 3.0 - 1.0, s * 3.0 - 2.0);
    let (xi_u, xi_v, xi_w) = (completed_xi(u)?, completed_xi(v)?, completed_xi(w)?);
    Ok(xi_u * x2 / t - xi_w * x2 / u - xi_v / (t * 3.0) + xi_v / (u * 3.0) + xi_w / (v * 2.0)
        - xi_u * (one / (w * 2.0)))
}

/// Ratio of the calibrated pipeline to [`sl3_closed_form`]: `3/ξ(2)`.
pub fn sl3_expected_ratio() -> f64 {
    3.0 / xi_real(2.0).expect("regular point")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_value_and_symmetry() {
        // mpmath, 25 digits
        let v = sl3_closed_form(c(2.0, 0.0)).unwrap();
        assert!((v.re / 2.692_113_652_627_167_6e-4 - 1.0).abs() < 1e-13 && v.im == 0.0, "{v}");
        let s = c(0.37, 1.3);
        let a = sl3_closed_form(s).unwrap();
        let b = sl3_closed_form(c(1.0, 0.0) - s).unwrap();
        assert!((a - b).norm() < 1e-13 * a.norm());
    }
}
