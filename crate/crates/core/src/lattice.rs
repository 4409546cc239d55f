//! Rank-2 lattices in the Euclidean plane: theta cohomology, Riemann–Roch,
//! Harder–Narasimhan polygon, and two stability criteria, together with the
//! SL₂ bridges between lattice stability and truncation.
//!
//! Conventions: a lattice is spanned by the rows of a 2×2 basis; its degree is
//! `−log Vol`. A rank-1 sublattice `Zv` has degree `−log |v|`. For
//! `g = n(u)·diag(a₁, 1/a₁)·k(θ)` the distinguished line is spanned by the
//! first row of `g`, which has length `a₁`, so its degree is `−log a₁`.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::eisenstein::UpperHalfPoint;
use crate::error::{Error, Result};
use crate::truncomb::{ParabolicSubset, Truncation};
use crate::rootdata::CartanType;
use crate::util::pairwise_sum;

/// Half-width of the band around a comparison in which samples are skipped.
pub const TIE_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub b1: [f64; 2],
    pub b2: [f64; 2],
    pub gram: [[f64; 2]; 2],
    pub volume: f64,
}

fn ip(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

impl LatticeBasis {
    pub fn new(b1: [f64; 2], b2: [f64; 2]) -> Result<Self> {
        let det = b1[0] * b2[1] - b1[1] * b2[0];
        let scale = ip(b1, b1).sqrt() * ip(b2, b2).sqrt();
        if !det.is_finite() || !(det.abs() > 1e-14 * scale.max(1e-300)) {
            return Err(Error::DegenerateBasis { volume: det.abs() });
        }
        Ok(LatticeBasis {
            b1,
            b2,
            gram: [[ip(b1, b1), ip(b1, b2)], [ip(b1, b2), ip(b2, b2)]],
            volume: det.abs(),
        })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != 4 {
            return Err(Error::Dimension { expected: 4, got: v.len() });
        }
        Self::new([v[0], v[1]], [v[2], v[3]])
    }

    /// Volume-1 lattice `(Z + Zτ)/√y` of a point in the upper half-plane.
    pub fn from_point(tau: UpperHalfPoint) -> Self {
        let s = tau.y.sqrt();
        Self::new([1.0 / s, 0.0], [tau.x / s, s]).expect("y > 0")
    }

    pub fn standard() -> Self {
        Self::new([1.0, 0.0], [0.0, 1.0]).unwrap()
    }

    fn det(&self) -> f64 {
        self.b1[0] * self.b2[1] - self.b1[1] * self.b2[0]
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new([c * self.b1[0], c * self.b1[1]], [c * self.b2[0], c * self.b2[1]])
    }

    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.volume.sqrt()).expect("scaling a valid basis")
    }

    pub fn vector(&self, m: i64, n: i64) -> [f64; 2] {
        let (m, n) = (m as f64, n as f64);
        [m * self.b1[0] + n * self.b2[0], m * self.b1[1] + n * self.b2[1]]
    }

    /// Coefficient bounds `|m|, |n|` covering every vector of length ≤ `r`.
    /// The coefficient of `b_i` is `⟨v, b_i*⟩` with `b_i*` the dual basis.
    fn coefficient_bounds(&self, r: f64) -> (i64, i64) {
        let inv11 = self.gram[1][1] / (self.volume * self.volume);
        let inv22 = self.gram[0][0] / (self.volume * self.volume);
        ((r * inv11.sqrt()).floor() as i64 + 1, (r * inv22.sqrt()).floor() as i64 + 1)
    }

    /// All nonzero vectors of length ≤ `r`, as `(m, n, |v|²)`.
    pub fn vectors_within(&self, r: f64) -> Vec<(i64, i64, f64)> {
        let (mb, nb) = self.coefficient_bounds(r);
        let r2 = r * r;
        let mut out = Vec::new();
        for m in -mb..=mb {
            for n in -nb..=nb {
                if m == 0 && n == 0 {
                    continue;
                }
                let v = self.vector(m, n);
                let l2 = ip(v, v);
                if l2 <= r2 {
                    out.push((m, n, l2));
                }
            }
        }
        out
    }
}

/// Integer 2×2 matrix `U` with `det U = 1`, acting on basis rows.
pub type Unimodular = [[i64; 2]; 2];

/// Gauss–Lagrange reduction. Returns the reduced point `τ` of the normalized
/// lattice and `U ∈ SL(2,Z)` with `U·(b1; b2)` the reduced basis.
///
/// For a negatively oriented basis `τ` describes the mirror image, which is
/// isometric.
pub fn reduce_to_fundamental_domain(basis: &LatticeBasis) -> Result<(UpperHalfPoint, Unimodular)> {
    let (mut a, mut b) = (basis.b1, basis.b2);
    let mut u: Unimodular = [[1, 0], [0, 1]];
    for _ in 0..10_000 {
        let (aa, bb) = (ip(a, a), ip(b, b));
        if bb < aa {
            // (a, b) ← (b, −a) keeps the orientation
            let na = b;
            b = [-a[0], -a[1]];
            a = na;
            u = [u[1], [-u[0][0], -u[0][1]]];
            continue;
        }
        let mu = (ip(a, b) / aa).round();
        if mu == 0.0 {
            break;
        }
        b = [b[0] - mu * a[0], b[1] - mu * a[1]];
        let k = mu as i64;
        u[1] = [u[1][0] - k * u[0][0], u[1][1] - k * u[0][1]];
    }
    let aa = ip(a, a);
    let x = ip(a, b) / aa;
    let y = basis.volume / aa;
    Ok((UpperHalfPoint::new(x, y)?, u))
}

/// Vectors `v` with `e^{−π|v|²}` below `tol` relative to the tail bound
/// `2π(R + d)² e^{−πR²}/Vol`, `d` the reduced basis diameter.
fn theta_radius(basis: &LatticeBasis, tol: f64) -> f64 {
    let (_, u) = reduce_to_fundamental_domain(basis).expect("valid basis");
    let rb1 = basis.vector(u[0][0], u[0][1]);
    let rb2 = basis.vector(u[1][0], u[1][1]);
    let d = ip(rb1, rb1).sqrt() + ip(rb2, rb2).sqrt();
    let mut r: f64 = 1.0;
    while 2.0 * PI * (r + d).powi(2) * (-PI * r * r).exp() / basis.volume > tol {
        r += 0.25;
    }
    // always include the first shell, so h⁰ > 0 strictly
    r.max(ip(rb1, rb1).sqrt() * (1.0 + 1e-12))
}

/// `h⁰(Λ) = log Σ_{x∈Λ} e^{−π|x|²}`, with the tail beyond the enumeration
/// radius bounded by `tol`.
pub fn h0(basis: &LatticeBasis, tol: f64) -> f64 {
    let r = theta_radius(basis, tol);
    // enumerate in the reduced basis so the coefficient box stays small
    let (_, u) = reduce_to_fundamental_domain(basis).expect("valid basis");
    let red = LatticeBasis::new(basis.vector(u[0][0], u[0][1]), basis.vector(u[1][0], u[1][1])).expect("unimodular image");
    let mut terms: Vec<f64> = red.vectors_within(r).into_iter().map(|(_, _, l2)| (-PI * l2).exp()).collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pairwise_sum(&terms).ln_1p()
}

pub const H0_TOL: f64 = 1e-13;

/// Dual lattice: basis `(B⁻¹)ᵀ`, Gram matrix inverse to that of `B`.
pub fn dual_lattice(basis: &LatticeBasis) -> LatticeBasis {
    let d = basis.det();
    let (a, b) = (basis.b1, basis.b2);
    LatticeBasis::new([b[1] / d, -b[0] / d], [-a[1] / d, a[0] / d]).expect("dual of a valid basis")
}

pub fn degree(basis: &LatticeBasis) -> f64 {
    -basis.volume.ln()
}

/// `h⁰(Λ) − h⁰(Λ∨) − deg Λ`, zero by Poisson summation.
pub fn rr_defect(basis: &LatticeBasis) -> f64 {
    h0(basis, H0_TOL) - h0(&dual_lattice(basis), H0_TOL) - degree(basis)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    /// Breakpoints `(r, p(r))`, increasing in `r`.
    pub points: Vec<(f64, f64)>,
}

impl Polygon {
    pub fn constant_zero(rank: usize) -> Self {
        Polygon {
            points: vec![(0.0, 0.0), (rank as f64, 0.0)],
        }
    }

    /// Rank-2 polygon through `(1, value)`.
    pub fn rank2(value: f64) -> Self {
        Polygon {
            points: vec![(0.0, 0.0), (1.0, value), (2.0, 0.0)],
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        for w in self.points.windows(2) {
            let ((r0, p0), (r1, p1)) = (w[0], w[1]);
            if r >= r0 && r <= r1 {
                return p0 + (p1 - p0) * (r - r0) / (r1 - r0);
            }
        }
        f64::NAN
    }

    pub fn is_concave(&self) -> bool {
        let slopes: Vec<f64> = self.points.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        slopes.windows(2).all(|s| s[1] <= s[0])
    }
}

/// Shortest nonzero vector by enumeration (independent of the reduction).
pub fn first_minimum(basis: &LatticeBasis) -> f64 {
    let r = ip(basis.b1, basis.b1).sqrt().min(ip(basis.b2, basis.b2).sqrt());
    basis
        .vectors_within(r * (1.0 + 1e-12))
        .into_iter()
        .map(|(_, _, l2)| l2)
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Unclamped HN breakpoint `max_{Λ₁} deg Λ₁ − deg Λ/2 = −log λ₁ − deg Λ/2`.
pub fn hn_slope_excess(basis: &LatticeBasis) -> f64 {
    -first_minimum(basis).ln() - 0.5 * degree(basis)
}

/// Harder–Narasimhan polygon, normalized by subtracting `r · deg Λ / 2` so
/// both ends sit at 0: trivial for semistable lattices, otherwise a single
/// breakpoint at rank 1.
pub fn hn_polygon(basis: &LatticeBasis) -> Polygon {
    let e = hn_slope_excess(basis);
    if e > 0.0 {
        Polygon::rank2(e)
    } else {
        Polygon::rank2(0.0)
    }
}

/// Polygon of the filtration `0 ⊂ Zv ⊂ Λ`.
pub fn sublattice_polygon(basis: &LatticeBasis, v: [f64; 2]) -> Polygon {
    Polygon::rank2(-ip(v, v).sqrt().ln() - 0.5 * degree(basis))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    /// Every rank-1 sublattice has degree ≤ deg Λ/2.
    pub hn_route: bool,
    /// The reduced point has height ≤ 1 (distance to the cusp ≥ 1).
    pub cusp_route: bool,
    pub reduced: UpperHalfPoint,
    pub hn_excess: f64,
    /// Within `TIE_BAND` of the boundary.
    pub boundary: bool,
}

pub fn is_semistable(basis: &LatticeBasis) -> Result<StabilityVerdict> {
    let unit = basis.normalized();
    let excess = hn_slope_excess(&unit);
    let (tau, _) = reduce_to_fundamental_domain(&unit)?;
    Ok(StabilityVerdict {
        hn_route: excess <= 0.0 || excess.abs() <= TIE_BAND,
        cusp_route: tau.y <= 1.0 + TIE_BAND,
        reduced: tau,
        hn_excess: excess,
        boundary: (tau.y - 1.0).abs() <= TIE_BAND,
    })
}

/// Iwasawa coordinates of `g = n(u)·diag(a₁, 1/a₁)·k(θ) ∈ SL₂(R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub a1: f64,
    pub u: f64,
    pub theta: f64,
}

impl GroupPoint {
    pub fn new(a1: f64, u: f64, theta: f64) -> Result<Self> {
        if !(a1 > 0.0) || !a1.is_finite() {
            return Err(Error::Domain {
                function: "GroupPoint",
                reason: format!("need a1 > 0, got {a1}"),
            });
        }
        Ok(GroupPoint { a1, u, theta })
    }

    pub fn diagonal(a1: f64) -> Self {
        GroupPoint { a1, u: 0.0, theta: 0.0 }
    }

    pub fn a2(&self) -> f64 {
        1.0 / self.a1
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let row1 = [self.a1, 0.0];
        let row2 = [self.u * self.a1, self.a2()];
        let rot = |r: [f64; 2]| [r[0] * c - r[1] * s, r[0] * s + r[1] * c];
        [rot(row1), rot(row2)]
    }

    pub fn lattice(&self) -> LatticeBasis {
        let m = self.matrix();
        LatticeBasis::new(m[0], m[1]).expect("determinant one")
    }

    /// `H_0(g)` in the simple-coroot coordinate: `log a₁`, so that the
    /// distinguished line has degree `−⟨ϖ, H_0(g)⟩`.
    pub fn h0_coordinate(&self) -> f64 {
        self.a1.ln()
    }

    pub fn line_degree(&self) -> f64 {
        -self.a1.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BridgeSides {
    pub lhs: bool,
    pub rhs: bool,
}

impl BridgeSides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn tie(what: &str, a: f64, b: f64) -> Result<()> {
    if (a - b).abs() <= TIE_BAND {
        return Err(Error::Tie(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

/// Nearest rational with denominator `2^40`; exact enough to carry a sign
/// decided outside the tie band into the exact τ̂.
fn to_rational(x: f64) -> num_rational::Rational64 {
    let d = 1i64 << 40;
    num_rational::Rational64::new((x * d as f64).round() as i64, d)
}

/// Micro Bridge for SL₂ and the Borel: `τ̂(−H_0(g) − T(p))` against
/// `1(deg Λ₁^g > p(1))`, with `⟨ϖ, T(p)⟩ = p(1)`.
pub fn micro_bridge_check(g: &GroupPoint, p: &Polygon) -> Result<BridgeSides> {
    let p1 = p.eval(1.0);
    tie("micro bridge", g.line_degree(), p1)?;
    let t = Truncation::new(CartanType::A1);
    let arg = -g.h0_coordinate() - p1;
    let h = [to_rational(arg)];
    let lhs = t.tau_hat(ParabolicSubset::borel(1), ParabolicSubset::whole(1), &h)?;
    Ok(BridgeSides {
        lhs,
        rhs: g.line_degree() > p1,
    })
}

/// Primitive vectors of `Λ` with length `< r`, one per line (up to sign).
pub fn primitive_lines_shorter_than(basis: &LatticeBasis, r: f64) -> Vec<(i64, i64, f64)> {
    basis
        .vectors_within(r)
        .into_iter()
        .filter(|&(m, n, l2)| m.gcd(&n) == 1 && l2 < r * r && (m > 0 || (m == 0 && n > 0)))
        .collect()
}

/// Lines `δ` with `deg Λ₁^{δg} > d`, enumerated exhaustively: such a line
/// has a primitive generator shorter than `e^{−d}`.
fn lines_with_degree_above(basis: &LatticeBasis, d: f64) -> Result<usize> {
    let r = (-d).exp();
    let near = basis.vectors_within(r * (1.0 + 4.0 * TIE_BAND));
    for &(m, n, l2) in &near {
        if m.gcd(&n) == 1 {
            tie("line degree", -0.5 * l2.ln(), d)?;
        }
    }
    Ok(primitive_lines_shorter_than(basis, r).len())
}

/// Fundamental Relation for SL₂ with `p(1) ≥ 0`:
/// `1(p̄^g ≤ p)` against `1 − #{δ ∈ P(Q)∖G(Q) : deg Λ₁^{δg} > p(1)}`.
pub fn fundamental_relation_check(g: &GroupPoint, p: &Polygon) -> Result<(i64, i64)> {
    let p1 = p.eval(1.0);
    if p1 < 0.0 {
        return Err(Error::Domain {
            function: "fundamental_relation_check",
            reason: format!("the relation needs p(1) >= 0, got {p1}"),
        });
    }
    let lattice = g.lattice();
    let hn = hn_polygon(&lattice).eval(1.0);
    // the clamp makes p̄ = p legitimate at p ≡ 0; ambiguity is in the excess
    tie("HN breakpoint", hn_slope_excess(&lattice), p1)?;
    let lhs = i64::from(hn <= p1);
    let count = lines_with_degree_above(&lattice, p1)? as i64;
    Ok((lhs, 1 - count))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArthurBits {
    /// `1 − Σ_δ τ̂(H(δg) − T)`.
    pub truncated_sum: i64,
    /// Reduced point lies in `{y ≤ e^{α(T)}}`.
    pub region: i64,
}

/// `Λᵀ1(g)` for SL₂, with `t = α(T) ≥ 0`, compared with membership of the
/// reduced point in the truncated Siegel region.
pub fn arthur_truncation_one(g: &GroupPoint, t: f64) -> Result<ArthurBits> {
    if t < 0.0 {
        return Err(Error::Domain {
            function: "arthur_truncation_one",
            reason: format!("need alpha(T) >= 0, got {t}"),
        });
    }
    let lattice = g.lattice();
    // τ̂(H(δg) − T) fires iff deg of the line exceeds ⟨ϖ, T⟩ = t/2.
    let fired = lines_with_degree_above(&lattice, 0.5 * t)? as i64;
    let (tau, _) = reduce_to_fundamental_domain(&lattice)?;
    tie("Siegel region", tau.y.ln(), t)?;
    Ok(ArthurBits {
        truncated_sum: 1 - fired,
        region: i64::from(tau.y <= t.exp()),
    })
}
