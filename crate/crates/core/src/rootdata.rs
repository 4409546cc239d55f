//! Root data and Weyl groups for the reduced types A1–A4, C2 and G2.
//!
//! Weights are written in the fundamental-weight basis and coweights in the
//! simple-coroot basis, so every pairing `⟨λ, α∨⟩` is integer (or rational)
//! arithmetic on coordinates. The Cartan matrix is stored as
//! `cartan[i][j] = ⟨α_i∨, α_j⟩` (Bourbaki labelling: for C2 and G2 the first
//! simple root is short).

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, rat, RatMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A1,
    A2,
    A3,
    A4,
    C2,
    G2,
}

impl CartanType {
    pub const ALL: [CartanType; 6] = [
        CartanType::A1,
        CartanType::A2,
        CartanType::A3,
        CartanType::A4,
        CartanType::C2,
        CartanType::G2,
    ];

    pub fn rank(self) -> usize {
        match self {
            CartanType::A1 => 1,
            CartanType::A2 | CartanType::C2 | CartanType::G2 => 2,
            CartanType::A3 => 3,
            CartanType::A4 => 4,
        }
    }

    /// Name of the split simply connected group of this type.
    pub fn group_name(self) -> &'static str {
        match self {
            CartanType::A1 => "SL2",
            CartanType::A2 => "SL3",
            CartanType::A3 => "SL4",
            CartanType::A4 => "SL5",
            CartanType::C2 => "Sp4",
            CartanType::G2 => "G2",
        }
    }

    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        match self {
            CartanType::A1 => vec![vec![2]],
            CartanType::A2 => vec![vec![2, -1], vec![-1, 2]],
            CartanType::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            CartanType::A4 => vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, 0],
                vec![0, -1, 2, -1],
                vec![0, 0, -1, 2],
            ],
            CartanType::C2 => vec![vec![2, -2], vec![-1, 2]],
            CartanType::G2 => vec![vec![2, -3], vec![-1, 2]],
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A1 => "A1",
            CartanType::A2 => "A2",
            CartanType::A3 => "A3",
            CartanType::A4 => "A4",
            CartanType::C2 => "C2",
            CartanType::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    /// Accepts Cartan labels (`A2`) as well as group names (`SL3`, `Sp4`).
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | '_' | ' '))
            .collect::<String>()
            .to_ascii_uppercase();
        match norm.as_str() {
            "A1" | "SL2" => Ok(CartanType::A1),
            "A2" | "SL3" => Ok(CartanType::A2),
            "A3" | "SL4" => Ok(CartanType::A3),
            "A4" | "SL5" => Ok(CartanType::A4),
            "C2" | "SP4" | "B2" => Ok(CartanType::C2),
            "G2" => Ok(CartanType::G2),
            _ => Err(Error::Config(format!("unsupported root system '{s}'"))),
        }
    }
}

/// A positive root together with its coroot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    /// Coordinates in the simple-root basis.
    pub root: Vec<i64>,
    /// Coordinates of `α∨` in the simple-coroot basis.
    pub coroot: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.root.iter().sum()
    }

    pub fn coroot_height(&self) -> i64 {
        self.coroot.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub label: CartanType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots, simple roots first (in index order), then by height.
    pub positive_roots: Vec<Root>,
    /// `ω_j` in the simple-root basis.
    pub fundamental_weights: RatMatrix,
    /// `ρ` in the simple-root basis.
    pub rho: Vec<Rational64>,
    /// `d_i = (α_i, α_i) / 2`, normalised so the short roots have `d = 1`.
    pub symmetrizer: Vec<Rational64>,
    /// Weight coordinates of every root (positive and negative) to (index, is_positive).
    lookup: HashMap<Vec<i64>, (usize, bool)>,
}

/// Build the root system of the given type.
pub fn build_root_system(label: CartanType) -> RootSystem {
    let cartan = label.cartan_matrix();
    let n = cartan.len();

    // Orbit of the simple (root, coroot) pairs under simple reflections.
    let mut all: Vec<Root> = Vec::new();
    let mut queue: VecDeque<Root> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let r = Root {
            root: e.clone(),
            coroot: e,
        };
        all.push(r.clone());
        queue.push_back(r);
    }
    while let Some(r) = queue.pop_front() {
        for j in 0..n {
            // s_j(α) = α − ⟨α, α_j∨⟩ α_j ; s_j(β∨) = β∨ − ⟨α_j, β∨⟩ α_j∨
            let p: i64 = (0..n).map(|i| r.root[i] * cartan[j][i]).sum();
            let q: i64 = (0..n).map(|i| r.coroot[i] * cartan[i][j]).sum();
            let mut root = r.root.clone();
            let mut coroot = r.coroot.clone();
            root[j] -= p;
            coroot[j] -= q;
            let next = Root { root, coroot };
            if !all.contains(&next) {
                all.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut positive: Vec<Root> = all
        .into_iter()
        .filter(|r| r.root.iter().all(|&x| x >= 0))
        .collect();
    positive.sort_by(|a, b| {
        a.height()
            .cmp(&b.height())
            .then_with(|| b.root.cmp(&a.root))
    });

    let a_inv = exact::invert(&exact::to_rational_matrix(&cartan)).expect("Cartan matrix is invertible");
    // ω_j in root coordinates is column j of A⁻¹.
    let fundamental_weights: RatMatrix = (0..n)
        .map(|j| (0..n).map(|i| a_inv[i][j]).collect())
        .collect();
    let rho: Vec<Rational64> = (0..n)
        .map(|i| fundamental_weights.iter().map(|w| w[i]).sum())
        .collect();

    let mut symmetrizer = vec![Rational64::zero(); n];
    symmetrizer[0] = rat(1);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if !symmetrizer[i].is_zero() && symmetrizer[j].is_zero() && cartan[i][j] != 0 {
                    // d_i a_ij = d_j a_ji
                    symmetrizer[j] = symmetrizer[i] * rat(cartan[i][j]) / rat(cartan[j][i]);
                    changed = true;
                }
            }
        }
    }
    let min_d = symmetrizer.iter().copied().min().unwrap();
    for d in symmetrizer.iter_mut() {
        *d /= min_d;
    }

    let mut rs = RootSystem {
        label,
        rank: n,
        cartan,
        positive_roots: positive,
        fundamental_weights,
        rho,
        symmetrizer,
        lookup: HashMap::new(),
    };
    for (idx, r) in rs.positive_roots.iter().enumerate() {
        let w = rs.root_in_weight_coords(&r.root);
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        rs.lookup.insert(w, (idx, true));
        rs.lookup.insert(neg, (idx, false));
    }
    rs
}

impl RootSystem {
    /// Weight coordinates `(⟨α, α_j∨⟩)_j` of a root given in simple-root coordinates.
    pub fn root_in_weight_coords(&self, root: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|j| (0..self.rank).map(|i| root[i] * self.cartan[j][i]).sum())
            .collect()
    }

    /// Look up a root by its weight coordinates: `(positive-root index, is_positive)`.
    pub fn find_root(&self, weight_coords: &[i64]) -> Option<(usize, bool)> {
        self.lookup.get(weight_coords).copied()
    }

    pub fn simple_root_indices(&self) -> std::ops::Range<usize> {
        0..self.rank
    }

    /// Index of the highest root (the last one in height order).
    pub fn highest_root(&self) -> usize {
        self.positive_roots.len() - 1
    }

    /// `(α_i, α_j)` for simple roots, from the symmetrised Cartan matrix.
    pub fn simple_root_form(&self) -> RatMatrix {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| self.symmetrizer[i] * rat(self.cartan[i][j]))
                    .collect()
            })
            .collect()
    }

    /// The Weyl-invariant form written in fundamental-weight coordinates.
    pub fn weight_form(&self) -> RatMatrix {
        let b = self.simple_root_form();
        let a_inv = exact::invert(&exact::to_rational_matrix(&self.cartan)).expect("invertible");
        // root coordinates are A⁻¹ λ, so (λ, μ) = λᵀ A⁻ᵀ B A⁻¹ μ.
        let at_inv = exact::transpose(&a_inv);
        let n = self.rank;
        let mut tmp = vec![vec![rat(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                tmp[i][j] = (0..n).map(|k| at_inv[i][k] * b[k][j]).sum();
            }
        }
        let mut out = vec![vec![rat(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|k| tmp[i][k] * a_inv[k][j]).sum();
            }
        }
        out
    }
}

/// `⟨λ, α∨⟩` for `λ` in fundamental-weight coordinates and the coroot of the
/// positive root with the given index. Exact whenever `T` is exact.
pub fn pairing<T>(rs: &RootSystem, lambda: &[T], root_index: usize) -> Result<T>
where
    T: Copy + Zero + std::ops::Mul<Output = T> + FromPrimitive,
{
    if lambda.len() != rs.rank {
        return Err(Error::Dimension {
            expected: rs.rank,
            got: lambda.len(),
        });
    }
    let root = rs.positive_roots.get(root_index).ok_or_else(|| {
        Error::Config(format!("no positive root with index {root_index}"))
    })?;
    Ok(root
        .coroot
        .iter()
        .zip(lambda)
        .fold(T::zero(), |acc, (&c, &l)| {
            acc + T::from_i64(c).expect("small integer") * l
        }))
}

/// A Weyl group element: a reduced word and its matrix on weight coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
    /// `matrix[i][j]`: coefficient of `λ_j` in `(wλ)_i`.
    pub matrix: Vec<Vec<i64>>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, weight: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(weight).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Matrix of the simple reflection `s_i` on weight coordinates.
pub fn simple_reflection(rs: &RootSystem, i: usize) -> Vec<Vec<i64>> {
    let n = rs.rank;
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect();
    // s_i(λ)_j = λ_j − λ_i ⟨α_i, α_j∨⟩
    for (j, row) in m.iter_mut().enumerate() {
        row[i] -= rs.cartan[j][i];
    }
    m
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// All Weyl group elements, identity first, in breadth-first order so every
/// stored word is reduced.
pub fn weyl_group(rs: &RootSystem) -> Vec<WeylElement> {
    let n = rs.rank;
    let gens: Vec<Vec<Vec<i64>>> = (0..n).map(|i| simple_reflection(rs, i)).collect();
    let identity: Vec<Vec<i64>> = (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect();
    let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let mut out = vec![WeylElement {
        word: vec![],
        matrix: identity.clone(),
    }];
    seen.insert(identity, 0);
    let mut head = 0;
    while head < out.len() {
        let w = out[head].clone();
        head += 1;
        for (i, g) in gens.iter().enumerate() {
            let m = mat_mul(g, &w.matrix);
            if !seen.contains_key(&m) {
                let mut word = vec![i];
                word.extend_from_slice(&w.word);
                seen.insert(m.clone(), out.len());
                out.push(WeylElement { word, matrix: m });
            }
        }
    }
    out
}

/// Indices of the positive roots `α` with `wα < 0`.
pub fn inversion_set(rs: &RootSystem, w: &WeylElement) -> Vec<usize> {
    rs.positive_roots
        .iter()
        .enumerate()
        .filter_map(|(idx, r)| {
            let image = w.apply(&rs.root_in_weight_coords(&r.root));
            match rs.find_root(&image) {
                Some((_, false)) => Some(idx),
                Some((_, true)) => None,
                None => unreachable!("Weyl group preserves the root system"),
            }
        })
        .collect()
}

#[derive(Serialize)]
struct RootDump {
    root: Vec<i64>,
    coroot: Vec<i64>,
    height: i64,
}

#[derive(Serialize)]
struct RootSystemDump {
    label: String,
    group: String,
    rank: usize,
    cartan_matrix: Vec<Vec<i64>>,
    positive_roots: Vec<RootDump>,
    fundamental_weights: Vec<Vec<String>>,
    rho: Vec<String>,
    weyl_group_order: usize,
    weyl_words: Vec<Vec<usize>>,
}

/// JSON description used by `rootdata dump`.
pub fn dump_json(rs: &RootSystem) -> serde_json::Value {
    let w = weyl_group(rs);
    let dump = RootSystemDump {
        label: rs.label.to_string(),
        group: rs.label.group_name().to_string(),
        rank: rs.rank,
        cartan_matrix: rs.cartan.clone(),
        positive_roots: rs
            .positive_roots
            .iter()
            .map(|r| RootDump {
                root: r.root.clone(),
                coroot: r.coroot.clone(),
                height: r.height(),
            })
            .collect(),
        fundamental_weights: rs
            .fundamental_weights
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
        rho: rs.rho.iter().map(|x| x.to_string()).collect(),
        weyl_group_order: w.len(),
        weyl_words: w.iter().map(|e| e.word.clone()).collect(),
    };
    serde_json::to_value(dump).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn positive_root_counts() {
        let expected = [(CartanType::A1, 1), (CartanType::A2, 3), (CartanType::A3, 6), (CartanType::A4, 10), (CartanType::C2, 4), (CartanType::G2, 6)];
        for (t, n) in expected {
            assert_eq!(build_root_system(t).positive_roots.len(), n, "{t}");
        }
    }

    #[test]
    fn a1_rho_is_half_alpha() {
        let rs = build_root_system(CartanType::A1);
        assert_eq!(rs.rho, vec![Rational64::new(1, 2)]);
        assert_eq!(pairing(&rs, &[rat(1)], 0).unwrap(), rat(1));
    }

    #[test]
    fn weights_are_dual_to_simple_coroots() {
        for t in CartanType::ALL {
            let rs = build_root_system(t);
            for b in 0..rs.rank {
                let mut omega = vec![rat(0); rs.rank];
                omega[b] = rat(1);
                for a in 0..rs.rank {
                    let expected = if a == b { rat(1) } else { rat(0) };
                    assert_eq!(pairing(&rs, &omega, a).unwrap(), expected);
                }
            }
            // ρ = Σ ω in weight coordinates
            let rho = vec![rat(1); rs.rank];
            for a in 0..rs.rank {
                assert_eq!(pairing(&rs, &rho, a).unwrap(), rat(1));
            }
        }
    }

    #[test]
    fn rho_is_half_sum_of_positive_roots() {
        for t in CartanType::ALL {
            let rs = build_root_system(t);
            let mut sum = vec![rat(0); rs.rank];
            for r in &rs.positive_roots {
                for (s, &k) in sum.iter_mut().zip(&r.root) {
                    *s += Rational64::new(k, 2);
                }
            }
            assert_eq!(sum, rs.rho, "{t}");
        }
    }

    #[test]
    fn a2_highest_coroot_pairs_to_two_with_rho() {
        let rs = build_root_system(CartanType::A2);
        let theta = rs.highest_root();
        assert_eq!(rs.positive_roots[theta].coroot, vec![1, 1]);
        assert_eq!(pairing(&rs, &[rat(1), rat(1)], theta).unwrap(), rat(2));
    }

    #[test]
    fn weyl_group_orders() {
        let expected = [(CartanType::A1, 2), (CartanType::A2, 6), (CartanType::A3, 24), (CartanType::A4, 120), (CartanType::C2, 8), (CartanType::G2, 12)];
        for (t, n) in expected {
            let w = weyl_group(&build_root_system(t));
            assert_eq!(w.len(), n, "{t}");
            assert!(w[0].word.is_empty());
        }
    }

    /// Depth-first closure by right multiplication; independent of the
    /// breadth-first left-multiplication enumeration above.
    fn weyl_order_by_dfs(rs: &RootSystem) -> usize {
        let gens: Vec<_> = (0..rs.rank).map(|i| simple_reflection(rs, i)).collect();
        let id: Vec<Vec<i64>> = (0..rs.rank)
            .map(|r| (0..rs.rank).map(|c| i64::from(r == c)).collect())
            .collect();
        let mut seen = HashSet::new();
        let mut stack = vec![id];
        while let Some(m) = stack.pop() {
            if seen.insert(m.clone()) {
                for g in gens.iter().rev() {
                    stack.push(mat_mul(&m, g));
                }
            }
        }
        seen.len()
    }

    #[test]
    fn weyl_order_matches_independent_closure() {
        for t in CartanType::ALL {
            let rs = build_root_system(t);
            assert_eq!(weyl_group(&rs).len(), weyl_order_by_dfs(&rs), "{t}");
        }
    }

    #[test]
    fn inversion_sets_have_word_length() {
        for t in CartanType::ALL {
            let rs = build_root_system(t);
            let w = weyl_group(&rs);
            for e in &w {
                assert_eq!(inversion_set(&rs, e).len(), e.length(), "{t} {:?}", e.word);
            }
            // longest element inverts everything
            let longest = w.iter().max_by_key(|e| e.length()).unwrap();
            assert_eq!(inversion_set(&rs, longest).len(), rs.positive_roots.len());
        }
    }

    #[test]
    fn simple_reflection_inverts_only_its_root() {
        let rs = build_root_system(CartanType::G2);
        let w = weyl_group(&rs);
        for i in 0..rs.rank {
            let s = w.iter().find(|e| e.word == vec![i]).unwrap();
            assert_eq!(inversion_set(&rs, s), vec![i]);
        }
        assert!(inversion_set(&rs, &w[0]).is_empty());
    }

    #[test]
    fn weyl_action_preserves_roots_and_form() {
        for t in CartanType::ALL {
            let rs = build_root_system(t);
            let g = rs.weight_form();
            for e in weyl_group(&rs) {
                for r in &rs.positive_roots {
                    let image = e.apply(&rs.root_in_weight_coords(&r.root));
                    assert!(rs.find_root(&image).is_some());
                }
                // Mᵀ G M = G
                let m = exact::to_rational_matrix(&e.matrix);
                let n = rs.rank;
                for i in 0..n {
                    for j in 0..n {
                        let v: Rational64 = (0..n)
                            .flat_map(|k| (0..n).map(move |l| (k, l)))
                            .map(|(k, l)| m[k][i] * g[k][l] * m[l][j])
                            .sum();
                        assert_eq!(v, g[i][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn g2_root_lengths() {
        let rs = build_root_system(CartanType::G2);
        assert_eq!(rs.symmetrizer, vec![rat(1), rat(3)]);
        let c2 = build_root_system(CartanType::C2);
        assert_eq!(c2.symmetrizer, vec![rat(1), rat(2)]);
    }

    #[test]
    fn parses_group_names() {
        assert_eq!("SL(3)".parse::<CartanType>().unwrap(), CartanType::A2);
        assert_eq!("sp4".parse::<CartanType>().unwrap(), CartanType::C2);
        assert!("E8".parse::<CartanType>().is_err());
    }

    #[test]
    fn pairing_checks_dimension() {
        let rs = build_root_system(CartanType::A2);
        assert!(matches!(
            pairing(&rs, &[rat(1)], 0),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }
}
