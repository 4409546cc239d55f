//! Configuration of a single `ξ^{G/P}`: parabolic, residue order, contour
//! radii and the affine normalization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::CartanType;
use crate::specfun::C64;

/// Multiply by `ξ(p·σ + q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClearingFactor {
    pub p: f64,
    pub q: f64,
}

/// `f(σ) = constant · ∏ ξ(p σ + q) · R(a σ + b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub a: f64,
    pub b: f64,
    pub clearing: Vec<ClearingFactor>,
    pub constant: C64,
}

impl NormSpec {
    pub fn identity() -> Self {
        NormSpec {
            a: 1.0,
            b: 0.0,
            clearing: vec![],
            constant: C64::new(1.0, 0.0),
        }
    }

    pub fn s_of(&self, sigma: C64) -> C64 {
        sigma * self.a + self.b
    }

    pub fn max_clearing_scale(&self) -> f64 {
        self.clearing.iter().map(|f| f.p.abs()).fold(self.a.abs(), f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaSpec {
    pub group: CartanType,
    /// Index of `α_P` among the simple roots.
    pub alpha_p: usize,
    /// Residue order: the simple roots other than `α_P`, outermost first.
    pub order: Vec<usize>,
    /// Contour radius for each residue level, same indexing as `order`.
    pub radii: Vec<f64>,
    pub norm: NormSpec,
}

pub fn default_radii(levels: usize) -> Vec<f64> {
    (0..levels).map(|k| 0.1 * 3f64.powi(-(k as i32))).collect()
}

impl ZetaSpec {
    /// Textual residue order, default radii and the identity normalization.
    pub fn new(group: CartanType, alpha_p: usize) -> Result<Self> {
        let rank = group.rank();
        if alpha_p >= rank {
            return Err(Error::Config(format!(
                "alpha_P index {alpha_p} out of range for {group}"
            )));
        }
        let order: Vec<usize> = (0..rank).filter(|&i| i != alpha_p).collect();
        let radii = default_radii(order.len());
        Ok(ZetaSpec {
            group,
            alpha_p,
            order,
            radii,
            norm: NormSpec::identity(),
        })
    }

    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        self.order = order;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let rank = self.group.rank();
        if self.alpha_p >= rank {
            return Err(Error::Config("alpha_P out of range".into()));
        }
        let mut sorted = self.order.clone();
        sorted.sort_unstable();
        let expected: Vec<usize> = (0..rank).filter(|&i| i != self.alpha_p).collect();
        if sorted != expected {
            return Err(Error::Config(format!(
                "residue order {:?} is not a permutation of {:?}",
                self.order, expected
            )));
        }
        if self.radii.len() != self.order.len() {
            return Err(Error::Dimension {
                expected: self.order.len(),
                got: self.radii.len(),
            });
        }
        if self.radii.iter().any(|&r| !(r > 0.0)) || self.radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config(
                "radii must be positive and strictly decreasing".into(),
            ));
        }
        if self.norm.a == 0.0 || !self.norm.a.is_finite() {
            return Err(Error::Config("normalization scale a must be nonzero".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: ZetaSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Resolve a parabolic name to the index of `α_P`.
///
/// Accepts `a1`…`a4` (1-based simple root), `P{k}{n−k}` for `SL(n)` (meaning
/// `α_P = α_k`), `B` for `SL(2)`, and `long` / `short` for `Sp(4)` and `G2`.
pub fn parse_parabolic(group: CartanType, name: &str) -> Result<usize> {
    let lower = name.trim().to_ascii_lowercase();
    let rank = group.rank();
    let bad = || Error::Config(format!("unknown parabolic '{name}' for {}", group.group_name()));
    if let Some(rest) = lower.strip_prefix('a') {
        let k: usize = rest.parse().map_err(|_| bad())?;
        return if (1..=rank).contains(&k) { Ok(k - 1) } else { Err(bad()) };
    }
    match group {
        CartanType::C2 | CartanType::G2 => match lower.as_str() {
            // Bourbaki labelling: α1 short, α2 long.
            "long" | "p_long" | "plong" => Ok(1),
            "short" | "p_short" | "pshort" => Ok(0),
            _ => Err(bad()),
        },
        _ => {
            if group == CartanType::A1 && matches!(lower.as_str(), "b" | "borel" | "p11") {
                return Ok(0);
            }
            let digits = lower.strip_prefix('p').ok_or_else(bad)?;
            let n = rank + 1;
            let parts: Vec<usize> = if digits.contains(',') {
                digits.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?
            } else {
                digits
                    .chars()
                    .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            };
            match parts.as_slice() {
                [k, m] if k + m == n && *k >= 1 && *m >= 1 => Ok(k - 1),
                _ => Err(bad()),
            }
        }
    }
}

/// Canonical parabolic name used for presets.
pub fn parabolic_name(group: CartanType, alpha_p: usize) -> String {
    match group {
        CartanType::C2 | CartanType::G2 => {
            if alpha_p == 1 { "long".into() } else { "short".into() }
        }
        _ => {
            let n = group.rank() + 1;
            format!("P{}{}", alpha_p + 1, n - alpha_p - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabolic_names_roundtrip() {
        assert_eq!(parse_parabolic(CartanType::A2, "P21").unwrap(), 1);
        assert_eq!(parse_parabolic(CartanType::A2, "P12").unwrap(), 0);
        assert_eq!(parse_parabolic(CartanType::A3, "P2,2").unwrap(), 1);
        assert_eq!(parse_parabolic(CartanType::G2, "long").unwrap(), 1);
        assert_eq!(parse_parabolic(CartanType::C2, "a1").unwrap(), 0);
        assert!(parse_parabolic(CartanType::A2, "P31").is_err());
        for t in CartanType::ALL {
            for i in 0..t.rank() {
                let name = parabolic_name(t, i);
                assert_eq!(parse_parabolic(t, &name).unwrap(), i, "{t} {name}");
            }
        }
    }

    #[test]
    fn spec_validation() {
        let spec = ZetaSpec::new(CartanType::A3, 1).unwrap();
        assert_eq!(spec.order, vec![0, 2]);
        assert!(spec.validate().is_ok());
        assert!(spec.clone().with_order(vec![2, 0]).is_ok());
        assert!(spec.clone().with_order(vec![1, 0]).is_err());
        let mut bad = spec.clone();
        bad.radii = vec![0.01, 0.1];
        assert!(bad.validate().is_err());
        let mut bad = spec;
        bad.norm.a = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let spec = ZetaSpec::new(CartanType::G2, 0).unwrap();
        let back = ZetaSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
    }
}
