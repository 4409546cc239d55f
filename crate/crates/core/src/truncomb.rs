//! Exact truncation combinatorics on `a_0`: the characteristic functions
//! τ, τ̂, σ, φ and the identities of Langlands and Arthur relating them.
//!
//! `a_0` carries simple-coroot coordinates `H = Σ h_i α_i∨`; a standard
//! parabolic is the set `I ⊆ Δ_0` of simple roots of its Levi (Borel = ∅,
//! `G` = Δ_0). All tests are strict or non-strict inequalities between exact
//! rationals; an exact zero is reported as a wall.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dot, invert, rat, RatMatrix};
use crate::rootdata::{build_root_system, CartanType, RootSystem};

/// Standard parabolic, as the set of simple roots of its Levi factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParabolicSubset {
    pub mask: u32,
    pub rank: usize,
}

impl ParabolicSubset {
    pub fn borel(rank: usize) -> Self {
        ParabolicSubset { mask: 0, rank }
    }

    pub fn whole(rank: usize) -> Self {
        ParabolicSubset {
            mask: (1u32 << rank) - 1,
            rank,
        }
    }

    pub fn from_roots(rank: usize, roots: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &r in roots {
            if r >= rank {
                return Err(Error::Dimension { expected: rank, got: r + 1 });
            }
            mask |= 1 << r;
        }
        Ok(ParabolicSubset { mask, rank })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.contains(i)).collect()
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.mask & !other.mask == 0
    }

    /// All standard parabolics, by increasing Levi rank.
    pub fn all(rank: usize) -> Vec<Self> {
        let mut v: Vec<Self> = (0..1u32 << rank).map(|mask| ParabolicSubset { mask, rank }).collect();
        v.sort_by_key(|p| (p.size(), p.mask));
        v
    }

    /// Parabolics `R` with `self ⊆ R ⊆ upper`.
    pub fn between(&self, upper: &Self) -> Vec<Self> {
        Self::all(self.rank)
            .into_iter()
            .filter(|r| self.is_subset_of(r) && r.is_subset_of(upper))
            .collect()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.roots().iter().map(|i| format!("a{}", i + 1)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

type Functional = Vec<Rational64>;

/// Linear conditions defining τ_Q^P and τ̂_Q^P, indexed by `β ∈ I_P ∖ I_Q`.
#[derive(Debug, Clone)]
pub struct PairData {
    pub q: ParabolicSubset,
    pub p: ParabolicSubset,
    /// `β ↦ α_β ∘ pr_Q` (elements of Δ_Q^P pulled back to `a_0`).
    pub roots: Vec<(usize, Functional)>,
    /// `β ↦ ϖ_β ∘ pr_{a_Q^P}` (elements of hatΔ_Q^P pulled back to `a_0`).
    pub weights: Vec<(usize, Functional)>,
    /// Projected coroots `pr_Q(β∨)`.
    pub coroots: Vec<(usize, Vec<Rational64>)>,
}

/// Cached projections and functionals for one root system.
pub struct Truncation {
    pub rs: RootSystem,
    proj: HashMap<u32, RatMatrix>,
    pairs: HashMap<(u32, u32), PairData>,
}

impl Truncation {
    pub fn new(label: CartanType) -> Self {
        let rs = build_root_system(label);
        let rank = rs.rank;
        let cartan: RatMatrix = rs.cartan.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let mut proj = HashMap::new();
        for par in ParabolicSubset::all(rank) {
            proj.insert(par.mask, projection(&cartan, &par.roots(), rank));
        }
        let mut t = Truncation {
            rs,
            proj,
            pairs: HashMap::new(),
        };
        for q in ParabolicSubset::all(rank) {
            for p in ParabolicSubset::all(rank) {
                if q.is_subset_of(&p) {
                    let data = t.build_pair(&cartan, q, p);
                    t.pairs.insert((q.mask, p.mask), data);
                }
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    /// Projection of `a_0` onto `a_P` along `a_0^P`, as a matrix on coroot coordinates.
    pub fn projection(&self, p: ParabolicSubset) -> &RatMatrix {
        &self.proj[&p.mask]
    }

    fn build_pair(&self, cartan: &RatMatrix, q: ParabolicSubset, p: ParabolicSubset) -> PairData {
        let n = self.rank();
        let mq = &self.proj[&q.mask];
        let mp = &self.proj[&p.mask];
        let diff: Vec<usize> = p.roots().into_iter().filter(|&b| !q.contains(b)).collect();
        let mut roots = Vec::new();
        let mut weights = Vec::new();
        let mut coroots = Vec::new();
        for &b in &diff {
            // α_b(pr_Q H) = Σ_k cartan[k][b] (M_Q H)_k
            let f: Functional = (0..n).map(|i| (0..n).map(|k| cartan[k][b] * mq[k][i]).sum()).collect();
            roots.push((b, f));
            // a_Q^P component of H is pr_Q H − pr_P H; its β∨-coordinate is the
            // weight ϖ_β because pr_Q(γ∨) only adds coordinates in I_Q.
            let g: Functional = (0..n).map(|i| mq[b][i] - mp[b][i]).collect();
            weights.push((b, g));
            coroots.push((b, (0..n).map(|k| mq[k][b]).collect()));
        }
        PairData { q, p, roots, weights, coroots }
    }

    pub fn pair(&self, q: ParabolicSubset, p: ParabolicSubset) -> Result<&PairData> {
        self.pairs.get(&(q.mask, p.mask)).ok_or_else(|| {
            Error::Config(format!("{q} is not contained in {p}"))
        })
    }

    fn check_dim(&self, h: &[Rational64]) -> Result<()> {
        if h.len() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: h.len() });
        }
        Ok(())
    }

    /// τ_Q^P(H): every α ∈ Δ_Q^P is positive on the `a_Q^P` part of `H`.
    pub fn tau(&self, q: ParabolicSubset, p: ParabolicSubset, h: &[Rational64]) -> Result<bool> {
        self.check_dim(h)?;
        all_positive(&self.pair(q, p)?.roots, h, "root")
    }

    /// τ̂_Q^P(H): every ϖ ∈ hatΔ_Q^P is positive on the `a_Q^P` part of `H`.
    pub fn tau_hat(&self, q: ParabolicSubset, p: ParabolicSubset, h: &[Rational64]) -> Result<bool> {
        self.check_dim(h)?;
        all_positive(&self.pair(q, p)?.weights, h, "weight")
    }

    /// σ_1^2 as the alternating sum `Σ_{P3 ⊇ P2} (−1)^{dim A_3/A_2} τ_1^3 τ̂_3`.
    pub fn sigma_alternating(&self, p1: ParabolicSubset, p2: ParabolicSubset, h: &[Rational64]) -> Result<i64> {
        self.pair(p1, p2)?;
        let g = ParabolicSubset::whole(self.rank());
        let mut total = 0;
        for p3 in p2.between(&g) {
            if self.tau(p1, p3, h)? && self.tau_hat(p3, g, h)? {
                total += sign(p3.size() - p2.size());
            }
        }
        Ok(total)
    }

    /// σ_1^2 from its description as a characteristic function: on the
    /// `a_1` part of `H`, α > 0 on Δ_1^2, α ≤ 0 on Δ_1 ∖ Δ_1^2, and ϖ > 0 on hatΔ_2.
    pub fn sigma_lemma(&self, p1: ParabolicSubset, p2: ParabolicSubset, h: &[Rational64]) -> Result<bool> {
        self.check_dim(h)?;
        let g = ParabolicSubset::whole(self.rank());
        let inner = self.pair(p1, p2)?;
        let outer = self.pair(p1, g)?;
        let i = all_positive(&inner.roots, h, "root")?;
        let mut ii = true;
        for (b, f) in &outer.roots {
            if p2.contains(*b) {
                continue;
            }
            let v = dot(f, h);
            if v.is_zero() {
                return Err(Error::Wall(format!("root a{} vanishes", b + 1)));
            }
            ii &= v.is_negative();
        }
        let iii = all_positive(&self.pair(p2, g)?.weights, h, "weight")?;
        Ok(i && ii && iii)
    }

    /// ε_Q^P(Λ) = (−1)^{#{α ∈ Δ_Q^P : Λ(α∨) ≤ 0}}.
    pub fn epsilon(&self, q: ParabolicSubset, p: ParabolicSubset, lambda: &[Rational64]) -> Result<i64> {
        self.check_dim(lambda)?;
        let n = self
            .pair(q, p)?
            .coroots
            .iter()
            .filter(|(_, c)| !dot(lambda, c).is_positive())
            .count();
        Ok(if n % 2 == 0 { 1 } else { -1 })
    }

    /// φ_Q^P(Λ, H): ϖ_α(H) > 0 where Λ(α∨) ≤ 0 and ϖ_α(H) ≤ 0 where Λ(α∨) > 0.
    pub fn phi(&self, q: ParabolicSubset, p: ParabolicSubset, lambda: &[Rational64], h: &[Rational64]) -> Result<bool> {
        self.check_dim(lambda)?;
        self.check_dim(h)?;
        let data = self.pair(q, p)?;
        let mut ok = true;
        for ((b, w), (_, c)) in data.weights.iter().zip(&data.coroots) {
            let v = dot(w, h);
            if v.is_zero() {
                return Err(Error::Wall(format!("weight of a{} vanishes", b + 1)));
            }
            ok &= if dot(lambda, c).is_positive() { v.is_negative() } else { v.is_positive() };
        }
        Ok(ok)
    }

    /// Every linear functional of `H` used by the identities, for chamber enumeration.
    pub fn all_functionals(&self) -> Vec<Functional> {
        let mut out: Vec<Functional> = Vec::new();
        for data in self.pairs.values() {
            for (_, f) in data.roots.iter().chain(&data.weights) {
                if f.iter().any(|x| !x.is_zero()) {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// Coroot directions `pr_Q(β∨)` on which Λ is tested.
    fn all_coroots(&self) -> Vec<Functional> {
        self.pairs
            .values()
            .flat_map(|d| d.coroots.iter().map(|(_, c)| c.clone()))
            .collect()
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn all_positive(fs: &[(usize, Functional)], h: &[Rational64], what: &str) -> Result<bool> {
    let mut ok = true;
    for (b, f) in fs {
        let v = dot(f, h);
        if v.is_zero() {
            return Err(Error::Wall(format!("{what} a{} vanishes", b + 1)));
        }
        ok &= v.is_positive();
    }
    Ok(ok)
}

/// Matrix of the projection `H ↦ H − Σ_{β∈I} x_β β∨` with `α_γ(·) = 0` on `I`.
fn projection(cartan: &RatMatrix, subset: &[usize], n: usize) -> RatMatrix {
    let mut m: RatMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect();
    if subset.is_empty() {
        return m;
    }
    // Solve Σ_β x_β cartan[β][γ] = Σ_i h_i cartan[i][γ] for γ ∈ I.
    let sub: RatMatrix = subset.iter().map(|&g| subset.iter().map(|&b| cartan[b][g]).collect()).collect();
    let inv = invert(&sub).expect("Levi Cartan matrices are invertible");
    for col in 0..n {
        let rhs: Vec<Rational64> = subset.iter().map(|&g| cartan[col][g]).collect();
        for (bi, &b) in subset.iter().enumerate() {
            let x: Rational64 = inv[bi].iter().zip(&rhs).map(|(a, r)| a * r).sum();
            m[b][col] -= x;
        }
    }
    m
}

/// Representatives of every face of a central arrangement of lines in
/// dimension ≤ 2: open chambers, and (if `with_lower`) rays and the origin.
pub fn arrangement_faces(functionals: &[Functional], dim: usize, with_lower: bool) -> Vec<Vec<Rational64>> {
    match dim {
        0 => vec![vec![]],
        1 => {
            let mut v = vec![vec![rat(1)], vec![rat(-1)]];
            if with_lower {
                v.push(vec![rat(0)]);
            }
            v
        }
        2 => {
            // rays spanning each kernel, scaled to sup-norm 1
            let mut rays: Vec<[Rational64; 2]> = Vec::new();
            for f in functionals {
                if f[0].is_zero() && f[1].is_zero() {
                    continue;
                }
                for s in [1, -1] {
                    let d = [-f[1] * rat(s), f[0] * rat(s)];
                    let scale = d[0].abs().max(d[1].abs());
                    let d = [d[0] / scale, d[1] / scale];
                    if !rays.contains(&d) {
                        rays.push(d);
                    }
                }
            }
            if rays.is_empty() {
                rays.push([rat(1), rat(0)]);
                rays.push([rat(-1), rat(0)]);
            }
            let angle = |d: &[Rational64; 2]| to_f64(d[1]).atan2(to_f64(d[0]));
            rays.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
            let k = rays.len();
            let mut out: Vec<Vec<Rational64>> = (0..k)
                .map(|i| {
                    let (a, b) = (rays[i], rays[(i + 1) % k]);
                    vec![a[0] + b[0], a[1] + b[1]]
                })
                .collect();
            if with_lower {
                out.extend(rays.iter().map(|d| d.to_vec()));
                out.push(vec![rat(0), rat(0)]);
            }
            out
        }
        _ => panic!("face enumeration is implemented for dimension ≤ 2"),
    }
}

fn to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Identity {
    #[serde(rename = "LCL-tau-tauhat")]
    LclTauTauhat,
    #[serde(rename = "LCL-tauhat-tau")]
    LclTauhatTau,
    #[serde(rename = "Lemma1-sigma")]
    Lemma1Sigma,
    #[serde(rename = "Lemma2-phi")]
    Lemma2Phi,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::LclTauTauhat,
        Identity::LclTauhatTau,
        Identity::Lemma1Sigma,
        Identity::Lemma2Phi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::LclTauTauhat => "LCL-tau-tauhat",
            Identity::LclTauhatTau => "LCL-tauhat-tau",
            Identity::Lemma1Sigma => "Lemma1-sigma",
            Identity::Lemma2Phi => "Lemma2-phi",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown identity '{s}'")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingSpec {
    /// Random points per nested pair when the rank is above 2.
    pub samples: usize,
    pub seed: u64,
    /// Fixed Λ for the φ/ε identity; otherwise Λ is enumerated (rank ≤ 2) or sampled.
    pub lambda: Option<Vec<Rational64>>,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            samples: 10_000,
            seed: 1,
            lambda: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub q: String,
    pub p: String,
    pub h: Vec<String>,
    pub lambda: Option<Vec<String>>,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub group: CartanType,
    pub identity: Identity,
    pub exhaustive: bool,
    pub pairs: usize,
    pub evaluations: usize,
    pub walls_skipped: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

fn fmt_vec(v: &[Rational64]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Left and right sides of one identity at one point; `Err(Wall)` if `H`
/// lies on a wall of any term.
pub fn evaluate_identity(
    t: &Truncation,
    identity: Identity,
    q: ParabolicSubset,
    p: ParabolicSubset,
    h: &[Rational64],
    lambda: &[Rational64],
) -> Result<(i64, i64)> {
    let delta = i64::from(q == p);
    match identity {
        Identity::LclTauTauhat => {
            let mut s = 0;
            for r in q.between(&p) {
                if t.tau(q, r, h)? && t.tau_hat(r, p, h)? {
                    s += sign(p.size() - r.size());
                }
            }
            Ok((s, delta))
        }
        Identity::LclTauhatTau => {
            let mut s = 0;
            for r in q.between(&p) {
                if t.tau_hat(q, r, h)? && t.tau(r, p, h)? {
                    s += sign(r.size() - q.size());
                }
            }
            Ok((s, delta))
        }
        Identity::Lemma1Sigma => Ok((t.sigma_alternating(q, p, h)?, i64::from(t.sigma_lemma(q, p, h)?))),
        Identity::Lemma2Phi => {
            let mut s = 0;
            for r in q.between(&p) {
                if t.phi(q, r, lambda, h)? && t.tau(r, p, h)? {
                    s += t.epsilon(q, r, lambda)?;
                }
            }
            let rhs = t.pair(q, p)?.coroots.iter().all(|(_, c)| dot(lambda, c).is_positive());
            Ok((s, i64::from(rhs)))
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Rational64> {
    (0..n)
        .map(|_| Rational64::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=7)))
        .collect()
}

/// Checks one identity for every nested pair `Q ⊆ P` of a root system.
///
/// Rank ≤ 2: every open chamber of the arrangement of all functionals
/// involved (and, for the φ/ε identity, every face of the Λ-arrangement). Higher
/// rank: `samples` random rational points per pair; points on walls are
/// skipped and counted.
pub fn identity_check(group: CartanType, identity: Identity, spec: &SamplingSpec) -> Result<IdentityReport> {
    let t = Truncation::new(group);
    let n = t.rank();
    if let Some(l) = &spec.lambda {
        t.check_dim(l)?;
    }
    let exhaustive = n <= 2;
    let mut points: Vec<(Vec<Rational64>, Vec<Rational64>)> = Vec::new();
    if exhaustive {
        let hs = arrangement_faces(&t.all_functionals(), n, false);
        let lambdas = match (&spec.lambda, identity) {
            (Some(l), _) => vec![l.clone()],
            (None, Identity::Lemma2Phi) => arrangement_faces(&t.all_coroots().to_vec(), n, true),
            (None, _) => vec![vec![rat(0); n]],
        };
        for h in &hs {
            for l in &lambdas {
                points.push((h.clone(), l.clone()));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut report = IdentityReport {
        group,
        identity,
        exhaustive,
        pairs: 0,
        evaluations: 0,
        walls_skipped: 0,
        violations: Vec::new(),
        pass: true,
    };
    let all = ParabolicSubset::all(n);
    for &q in &all {
        for &p in &all {
            if !q.is_subset_of(&p) {
                continue;
            }
            report.pairs += 1;
            let local: Vec<(Vec<Rational64>, Vec<Rational64>)> = if exhaustive {
                points.clone()
            } else {
                (0..spec.samples)
                    .map(|_| {
                        let h = random_vector(&mut rng, n, 1000);
                        let l = spec.lambda.clone().unwrap_or_else(|| random_vector(&mut rng, n, 6));
                        (h, l)
                    })
                    .collect()
            };
            let results = eval_points(&t, identity, q, p, &local);
            for ((h, l), r) in local.iter().zip(results) {
                match r {
                    Ok((lhs, rhs)) => {
                        report.evaluations += 1;
                        if lhs != rhs {
                            report.violations.push(Violation {
                                q: q.to_string(),
                                p: p.to_string(),
                                h: fmt_vec(h),
                                lambda: (identity == Identity::Lemma2Phi).then(|| fmt_vec(l)),
                                lhs,
                                rhs,
                            });
                        }
                    }
                    Err(Error::Wall(_)) => report.walls_skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    report.pass = report.violations.is_empty();
    Ok(report)
}

type PointResult = Result<(i64, i64)>;

#[cfg(feature = "parallel")]
fn eval_points(t: &Truncation, id: Identity, q: ParabolicSubset, p: ParabolicSubset, pts: &[(Vec<Rational64>, Vec<Rational64>)]) -> Vec<PointResult> {
    use rayon::prelude::*;
    pts.par_iter().map(|(h, l)| evaluate_identity(t, id, q, p, h, l)).collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_points(t: &Truncation, id: Identity, q: ParabolicSubset, p: ParabolicSubset, pts: &[(Vec<Rational64>, Vec<Rational64>)]) -> Vec<PointResult> {
    pts.iter().map(|(h, l)| evaluate_identity(t, id, q, p, h, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(m: &RatMatrix, h: &[Rational64]) -> Vec<Rational64> {
        m.iter().map(|row| dot(row, h)).collect()
    }

    fn v(xs: &[i64]) -> Vec<Rational64> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn q_equals_p_is_vacuous() {
        let t = Truncation::new(CartanType::A2);
        for p in ParabolicSubset::all(2) {
            assert!(t.tau(p, p, &v(&[-3, 5])).unwrap());
            assert!(t.tau_hat(p, p, &v(&[-3, 5])).unwrap());
        }
    }

    #[test]
    fn a1_positive_coroot() {
        let t = Truncation::new(CartanType::A1);
        let (b, g) = (ParabolicSubset::borel(1), ParabolicSubset::whole(1));
        assert!(t.tau(b, g, &v(&[1])).unwrap());
        assert!(t.tau_hat(b, g, &v(&[1])).unwrap());
        assert!(!t.tau(b, g, &v(&[-1])).unwrap());
        assert!(matches!(t.tau(b, g, &v(&[0])), Err(Error::Wall(_))));
    }

    #[test]
    fn borel_cone_is_dual_basis() {
        // For Q = Borel, P = G the cone conditions are the coordinates h_i
        // and the chamber conditions are the simple roots.
        let t = Truncation::new(CartanType::G2);
        let d = t.pair(ParabolicSubset::borel(2), ParabolicSubset::whole(2)).unwrap();
        assert_eq!(d.weights[0].1, v(&[1, 0]));
        assert_eq!(d.weights[1].1, v(&[0, 1]));
        assert_eq!(d.roots[0].1, v(&[2, -1]));
        assert_eq!(d.roots[1].1, v(&[-3, 2]));
    }

    #[test]
    fn projections_are_idempotent_and_kill_levi_roots() {
        let t = Truncation::new(CartanType::A3);
        for p in ParabolicSubset::all(3) {
            let m = t.projection(p);
            let h = v(&[3, -7, 2]);
            let once = apply(m, &h);
            assert_eq!(apply(m, &once), once);
            for b in p.roots() {
                let a: Rational64 = (0..3).map(|k| rat(t.rs.cartan[k][b]) * once[k]).sum();
                assert!(a.is_zero());
            }
        }
    }

    #[test]
    fn tau_hat_dominates_tau_on_a2_chambers() {
        let t = Truncation::new(CartanType::A2);
        let faces = arrangement_faces(&t.all_functionals(), 2, false);
        assert!(faces.len() >= 6);
        for q in ParabolicSubset::all(2) {
            for p in ParabolicSubset::all(2) {
                if !q.is_subset_of(&p) {
                    continue;
                }
                for h in &faces {
                    if t.tau(q, p, h).unwrap() {
                        assert!(t.tau_hat(q, p, h).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn faces_cover_lower_strata() {
        let f = vec![v(&[1, 0]), v(&[0, 1])];
        assert_eq!(arrangement_faces(&f, 2, false).len(), 4);
        assert_eq!(arrangement_faces(&f, 2, true).len(), 9);
    }

    #[test]
    fn identities_hold_in_rank_two() {
        for g in [CartanType::A1, CartanType::A2, CartanType::C2, CartanType::G2] {
            for id in Identity::ALL {
                let r = identity_check(g, id, &SamplingSpec::default()).unwrap();
                assert!(r.pass && r.exhaustive && r.walls_skipped == 0, "{g} {id}: {:?}", r.violations.first());
            }
        }
    }

    #[test]
    fn identities_hold_in_rank_three_sampled() {
        let spec = SamplingSpec { samples: 300, seed: 5, lambda: None };
        for id in Identity::ALL {
            let r = identity_check(CartanType::A3, id, &spec).unwrap();
            assert!(r.pass, "{id}: {:?}", r.violations.first());
            assert_eq!(r.pairs, 27);
        }
    }

    #[test]
    fn broken_sign_is_detected() {
        // Dropping the alternating sign must produce violations.
        let t = Truncation::new(CartanType::A2);
        let (b, g) = (ParabolicSubset::borel(2), ParabolicSubset::whole(2));
        let faces = arrangement_faces(&t.all_functionals(), 2, false);
        let wrong = faces.iter().any(|h| {
            let s: i64 = b.between(&g).iter().filter(|r| t.tau(b, **r, h).unwrap() && t.tau_hat(**r, g, h).unwrap()).count() as i64;
            s != 0
        });
        assert!(wrong);
    }

    #[test]
    fn identity_names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("LCL".parse::<Identity>().is_err());
    }
}
