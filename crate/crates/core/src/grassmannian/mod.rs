//! Type A combinatorics and the Gr(2,n) fansy divisor.
//!
//! `Λ_R* = Z^n / Z·1` is written in the basis `ℓ_1..ℓ_{n-1}`, with
//! `ℓ_n = -(ℓ_1 + ... + ℓ_{n-1})`. Permutations are one-line vectors of
//! 1-based images.

mod fansy;
mod local;
mod plucker;
mod verify;

pub use fansy::{
    compare_fansy, fansy_closed_form, fansy_via_recipe, edge_endpoints, FansyComparison,
    DEFAULT_MAX_N,
};
pub use local::{local_chart_check, LocalReport};
pub use verify::{verify_battery, Battery, Check};
pub use plucker::{
    all_deltas, big_e, c_ray, check_delta_b, delta_b, plucker_degrees, plucker_pairs, positive_fiber_b,
    retraction, sigma_oracle, small_e, CRay, GrassmannianSetup,
};

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::arith::{int, Int};
use crate::chow::N_PROJ;
use crate::error::{Error, Result};
use crate::lattice::RatMatrix;
use crate::polyhedral::{subsets, Cone, Fan, Halfspace, Polyhedron};

/// Ambient name of `Λ_R*`.
pub const LAMBDA: &str = N_PROJ;

/// Bound on `#W_I` for the orbit cross-check of chart cones.
pub const DEFAULT_MAX_WEYL_ORDER: usize = 5040;

pub type Permutation = Vec<usize>;

/// Root data of `SL(n)`; roots are linear forms on `Λ_R*` in the `ℓ` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeA {
    pub n: usize,
}

impl TypeA {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("type A needs n >= 2, got {n}")));
        }
        Ok(TypeA { n })
    }

    /// `L_i - L_j` as a form: `x_i - x_j` with `x_n = 0`.
    pub fn root(&self, i: usize, j: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.n - 1];
        if i < self.n {
            v[i - 1] += 1;
        }
        if j < self.n {
            v[j - 1] -= 1;
        }
        v
    }

    /// `α_i = L_i - L_{i+1}`.
    pub fn simple_root(&self, i: usize) -> Vec<Int> {
        self.root(i, i + 1)
    }

    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        subsets(self.n, 2)
            .into_iter()
            .map(|s| (s[0] + 1, s[1] + 1))
            .collect()
    }

    /// `ℓ_J = Σ_{j in J} ℓ_j`.
    pub fn ell(&self, block: &[usize]) -> Vec<Int> {
        ell(self.n, block)
    }

    /// `ℓ_1, ℓ_1+ℓ_2, ..., ℓ_1+...+ℓ_{n-1}`.
    pub fn fundamental_cone_generators(&self) -> Vec<Vec<Int>> {
        (1..self.n)
            .map(|p| self.ell(&(1..=p).collect::<Vec<_>>()))
            .collect()
    }

    pub fn fundamental_cone(&self) -> Result<Cone> {
        Polyhedron::cone(LAMBDA, self.n - 1, &self.fundamental_cone_generators(), &[])
    }

    /// `w(ℓ_m) = ℓ_{w(m)}` as a matrix on the `ℓ` basis.
    pub fn action(&self, w: &[usize]) -> RatMatrix {
        let cols: Vec<Vec<Int>> = (1..self.n).map(|m| self.ell(&[w[m - 1]])).collect();
        crate::lattice::IntMatrix::from_cols(&cols, self.n - 1)
            .expect("n-1 rows")
            .to_rat()
    }
}

pub fn ell(n: usize, block: &[usize]) -> Vec<Int> {
    let mut v = vec![Int::zero(); n - 1];
    for &m in block {
        if m < n {
            v[m - 1] += 1;
        } else {
            for x in v.iter_mut() {
                *x -= 1;
            }
        }
    }
    v
}

pub fn format_set(s: &[usize]) -> String {
    format!(
        "{{{}}}",
        s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    )
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    Ok(())
}

/// `(k, n-k)`-shuffles in lexicographic order.
pub fn shuffles(k: usize, n: usize) -> Result<Vec<Permutation>> {
    check_k(k, n)?;
    Ok(subsets(n, k)
        .into_iter()
        .map(|s| {
            let head: Vec<usize> = s.iter().map(|i| i + 1).collect();
            let mut w = head.clone();
            w.extend((1..=n).filter(|i| !head.contains(i)));
            w
        })
        .collect())
}

/// Pairs `(i, j)`, `i < j`, with `w(i) > w(j)`; its size is the length of `w`.
pub fn inversion_set(w: &[usize]) -> Vec<(usize, usize)> {
    let n = w.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if w[i] > w[j] {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

pub fn length(w: &[usize]) -> usize {
    inversion_set(w).len()
}

/// `(u ∘ v)(i) = u(v(i))`.
pub fn compose(u: &[usize], v: &[usize]) -> Permutation {
    v.iter().map(|&i| u[i - 1]).collect()
}

/// `w^I = (1 2 ... n)^{-k}`, checked against `w^0 · w^0_I`.
pub fn longest_coset_rep(k: usize, n: usize) -> Result<Permutation> {
    check_k(k, n)?;
    let w: Permutation = (1..=n).map(|i| (i + n - 1 - k) % n + 1).collect();
    let w0: Permutation = (1..=n).map(|i| n + 1 - i).collect();
    let w0_i: Permutation = (1..=n)
        .map(|i| if i <= k { k + 1 - i } else { n + k + 1 - i })
        .collect();
    if compose(&w0, &w0_i) != w {
        return Err(Error::Inconsistent("w^I differs from w0·w0_I".into()));
    }
    Ok(w)
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (idx, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(idx);
        for mut p in permutations_of(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Blocks of consecutive indices joined by the simple roots in `I`.
fn parabolic_blocks(simple: &BTreeSet<usize>, n: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![vec![1]];
    for m in 1..n {
        if simple.contains(&m) {
            blocks.last_mut().expect("nonempty").push(m + 1);
        } else {
            blocks.push(vec![m + 1]);
        }
    }
    blocks
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// Elements of the parabolic subgroup `W_I`.
pub fn parabolic_subgroup(simple: &[usize], n: usize) -> Vec<Permutation> {
    let set: BTreeSet<usize> = simple.iter().copied().collect();
    let mut out: Vec<Permutation> = vec![(1..=n).collect()];
    for block in parabolic_blocks(&set, n) {
        let perms = permutations_of(&block);
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for w in &out {
            for p in &perms {
                let mut v = w.clone();
                for (src, dst) in block.iter().zip(p) {
                    v[src - 1] = *dst;
                }
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn check_simple(simple: &[usize], n: usize) -> Result<()> {
    if n < 2 || simple.iter().any(|&i| i == 0 || i >= n) {
        return Err(Error::InvalidArgument(format!(
            "simple roots must lie in 1..{}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// `(R+ \ R_I+)^∨`, requiring it to be pointed; cross-checked against the cone
/// spanned by `W_I Φ` when `#W_I <= max_weyl_order`.
pub fn tail_cone_chart(simple: &[usize], n: usize, max_weyl_order: usize) -> Result<Cone> {
    check_simple(simple, n)?;
    let a = TypeA::new(n)?;
    let set: BTreeSet<usize> = simple.iter().copied().collect();
    let ineqs: Vec<Halfspace> = a
        .positive_roots()
        .into_iter()
        .filter(|&(i, j)| (i..j).any(|m| !set.contains(&m)))
        .map(|(i, j)| Halfspace::new(a.root(i, j), crate::arith::Rat::zero()))
        .collect();
    let cone = Polyhedron::from_hrep(LAMBDA, n - 1, &ineqs, &[])?;
    if !cone.is_pointed() {
        return Err(Error::InvalidArgument(
            "the chart has a non-discrete kernel: R+ \\ R_I+ does not span".into(),
        ));
    }
    let order: usize = parabolic_blocks(&set, n)
        .iter()
        .map(|b| factorial(b.len()))
        .product();
    if order <= max_weyl_order {
        let orbit = chart_cone_via_weyl(simple, n)?;
        if orbit != cone {
            return Err(Error::Inconsistent(format!(
                "W_I Φ differs from (R+ \\ R_I+)^∨ for I = {simple:?}"
            )));
        }
    }
    Ok(cone)
}

/// The cone spanned by `w(Φ)` for `w` in `W_I`.
pub fn chart_cone_via_weyl(simple: &[usize], n: usize) -> Result<Cone> {
    check_simple(simple, n)?;
    let a = TypeA::new(n)?;
    let mut gens: Vec<Vec<Int>> = Vec::new();
    for w in parabolic_subgroup(simple, n) {
        for p in 1..n {
            let block: Vec<usize> = (1..=p).map(|m| w[m - 1]).collect();
            gens.push(a.ell(&block));
        }
    }
    gens.sort();
    gens.dedup();
    Polyhedron::cone(LAMBDA, n - 1, &gens, &[])
}

/// `I = D \ {α_k}`.
pub fn grassmannian_simple_roots(k: usize, n: usize) -> Vec<usize> {
    (1..n).filter(|&m| m != k).collect()
}

/// Cones `⟨±ℓ_1, ..., ±ℓ_n⟩` with exactly `k` negative signs, labeled by the
/// set of negative indices.
pub fn tail_fan_grass(k: usize, n: usize) -> Result<Fan> {
    check_k(k, n)?;
    let cones = subsets(n, k)
        .into_iter()
        .map(|s| {
            let neg: Vec<usize> = s.iter().map(|i| i + 1).collect();
            let gens: Vec<Vec<Int>> = (1..=n)
                .map(|m| {
                    let v = ell(n, &[m]);
                    if neg.contains(&m) {
                        v.into_iter().map(|x| -x).collect()
                    } else {
                        v
                    }
                })
                .collect();
            Ok((format_set(&neg), Polyhedron::cone(LAMBDA, n - 1, &gens, &[])?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fan::new(LAMBDA, n - 1, cones))
}

/// `{-w(W_I Φ) : w in W^I}`, labeled by `w({1..k})`.
pub fn tail_fan_via_shuffles(k: usize, n: usize, max_weyl_order: usize) -> Result<Fan> {
    let a = TypeA::new(n)?;
    let chart = tail_cone_chart(&grassmannian_simple_roots(k, n), n, max_weyl_order)?;
    let mut neg = RatMatrix::identity(n - 1);
    for i in 0..n - 1 {
        neg.set(i, i, -neg.get(i, i).clone());
    }
    let cones = shuffles(k, n)?
        .into_iter()
        .map(|w| {
            let m = neg.mul(&a.action(&w))?;
            let mut head = w[..k].to_vec();
            head.sort_unstable();
            Ok((format_set(&head), chart.linear_image(&m, LAMBDA)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fan::new(LAMBDA, n - 1, cones))
}

/// Images of the coordinate orthants with `k` negative signs under `e^i -> ℓ_i`.
pub fn projected_orthants(k: usize, n: usize) -> Result<Fan> {
    check_k(k, n)?;
    let p = projection(n);
    let cones = subsets(n, k)
        .into_iter()
        .map(|s| {
            let neg: Vec<usize> = s.iter().map(|i| i + 1).collect();
            let gens: Vec<Vec<Int>> = (1..=n)
                .map(|m| {
                    let mut v = vec![Int::zero(); n];
                    v[m - 1] = if neg.contains(&m) { int(-1) } else { int(1) };
                    v
                })
                .collect();
            let orthant = Polyhedron::cone("Q^n", n, &gens, &[])?;
            Ok((format_set(&neg), orthant.linear_image(&p, LAMBDA)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fan::new(LAMBDA, n - 1, cones))
}

/// `e^i -> ℓ_i`, i.e. `[I | -1]`.
pub fn projection(n: usize) -> RatMatrix {
    let cols: Vec<Vec<Int>> = (1..=n).map(|m| ell(n, &[m])).collect();
    crate::lattice::IntMatrix::from_cols(&cols, n - 1)
        .expect("n-1 rows")
        .to_rat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ints;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 2).unwrap().len(), 2);
        assert_eq!(shuffles(2, 4).unwrap().len(), 6);
        assert_eq!(shuffles(2, 5).unwrap().len(), 10);
        assert!(shuffles(0, 3).is_err());
        assert!(shuffles(3, 3).is_err());
        let s = shuffles(2, 4).unwrap();
        assert_eq!(s[0], vec![1, 2, 3, 4]);
        assert_eq!(s[5], vec![3, 4, 1, 2]);
    }

    #[test]
    fn inversions() {
        assert!(inversion_set(&[1, 2, 3]).is_empty());
        assert_eq!(inversion_set(&[2, 1, 3]), vec![(1, 2)]);
        assert_eq!(length(&[3, 4, 1, 2]), 4);
    }

    #[test]
    fn coset_representatives() {
        assert_eq!(longest_coset_rep(2, 4).unwrap(), vec![3, 4, 1, 2]);
        assert_eq!(longest_coset_rep(1, 2).unwrap(), vec![2, 1]);
        let w = longest_coset_rep(2, 5).unwrap();
        assert_eq!(w, vec![4, 5, 1, 2, 3]);
        assert_eq!(length(&w), 6);
        for n in 2..=7 {
            for k in 1..n.min(4) {
                let w = longest_coset_rep(k, n).unwrap();
                assert_eq!(length(&w), k * (n - k));
                assert!(shuffles(k, n).unwrap().contains(&w));
                assert_eq!(shuffles(k, n).unwrap().len(), binom(n, k));
            }
        }
    }

    #[test]
    fn fundamental_cone_is_dual_to_simple_roots() {
        let a = TypeA::new(5).unwrap();
        for (p, g) in a.fundamental_cone_generators().iter().enumerate() {
            for i in 1..5 {
                let v = crate::arith::dot_int(&a.simple_root(i), g);
                assert_eq!(v, int(if i == p + 1 { 1 } else { 0 }));
            }
        }
        assert_eq!(tail_cone_chart(&[], 5, 5040).unwrap(), a.fundamental_cone().unwrap());
    }

    #[test]
    fn grassmannian_chart_cones() {
        let c = tail_cone_chart(&[1, 3], 4, 5040).unwrap();
        let expect = Polyhedron::cone(
            LAMBDA,
            3,
            &[ell(4, &[1]), ell(4, &[2]), ints(&[0, 0, -1]), ints(&[1, 1, 1])],
            &[],
        )
        .unwrap();
        assert_eq!(c, expect);
        let c5 = tail_cone_chart(&grassmannian_simple_roots(2, 5), 5, 5040).unwrap();
        assert!(c5.is_pointed() && c5.is_full_dimensional());
        assert_eq!(c5.rays().len(), 5);
        assert!(tail_cone_chart(&[1, 2, 3], 4, 5040).is_err());
    }

    #[test]
    fn tail_fans() {
        for (k, n) in [(2, 4), (2, 5), (1, 3)] {
            let f = tail_fan_grass(k, n).unwrap();
            assert_eq!(f.len(), binom(n, k));
            assert!(f.is_fan() && f.is_complete());
            assert!(f.cones().iter().all(|c| c.polyhedron.is_pointed()));
            assert_eq!(f, tail_fan_via_shuffles(k, n, 5040).unwrap());
            assert_eq!(f, projected_orthants(k, n).unwrap());
        }
    }

    #[test]
    fn parabolic_orders() {
        assert_eq!(parabolic_subgroup(&[1, 3], 4).len(), 4);
        assert_eq!(parabolic_subgroup(&[1, 3, 4], 5).len(), 12);
        assert_eq!(parabolic_subgroup(&[], 4).len(), 1);
    }
}
