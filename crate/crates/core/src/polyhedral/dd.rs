//! Incremental double description over the integers.
//!
//! Computes the lineality space and the extreme rays of
//! `{y : a·y >= 0 for a in ineqs, e·y = 0 for e in eqs}`. Rays are kept as
//! primitive integer vectors; adjacency uses the combinatorial test on tight
//! constraint sets.

use num_traits::{Signed, Zero};

use crate::arith::{dot_int, primitive, Int};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<Int>,
    tight: Bits,
}

pub(crate) struct DdOutput {
    pub lineality: Vec<Vec<Int>>,
    pub rays: Vec<Vec<Int>>,
}

/// `x <- a0 * x - ax * l0` with `a0 > 0`, then primitive.
fn eliminate(x: &mut Vec<Int>, l0: &[Int], a: &[Int], a0: &Int) {
    let ax = dot_int(a, x);
    if ax.is_zero() {
        return;
    }
    let combined: Vec<Int> = x
        .iter()
        .zip(l0)
        .map(|(xi, li)| a0 * xi - &ax * li)
        .collect();
    *x = primitive(&combined);
}

pub(crate) fn cone_generators(dim: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> DdOutput {
    let nbits = ineqs.len();
    let mut lin: Vec<Vec<Int>> = (0..dim)
        .map(|i| {
            let mut v = vec![Int::zero(); dim];
            v[i] = Int::from(1);
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for e in eqs {
        if let Some(idx) = lin.iter().position(|l| !dot_int(e, l).is_zero()) {
            let mut l0 = lin.remove(idx);
            let mut a0 = dot_int(e, &l0);
            if a0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                a0 = -a0;
            }
            for l in lin.iter_mut() {
                eliminate(l, &l0, e, &a0);
            }
            for r in rays.iter_mut() {
                eliminate(&mut r.v, &l0, e, &a0);
            }
        } else {
            rays = cut(rays, e, None);
        }
    }

    for (k, a) in ineqs.iter().enumerate() {
        if let Some(idx) = lin.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l0 = lin.remove(idx);
            let mut a0 = dot_int(a, &l0);
            if a0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                a0 = -a0;
            }
            for l in lin.iter_mut() {
                eliminate(l, &l0, a, &a0);
            }
            for r in rays.iter_mut() {
                eliminate(&mut r.v, &l0, a, &a0);
                r.tight.set(k);
            }
            let mut tight = Bits::new(nbits);
            for j in 0..k {
                tight.set(j);
            }
            rays.push(Ray { v: l0, tight });
        } else {
            rays = cut(rays, a, Some((k, nbits)));
        }
    }

    DdOutput {
        lineality: lin,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

/// Intersects the pointed part with `a·y >= 0` (when `index` is given) or
/// with `a·y = 0` (when it is not).
fn cut(rays: Vec<Ray>, a: &[Int], index: Option<(usize, usize)>) -> Vec<Ray> {
    let values: Vec<Int> = rays.iter().map(|r| dot_int(a, &r.v)).collect();
    let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
    if neg.is_empty() && index.is_some() {
        let mut rays = rays;
        if let Some((k, _)) = index {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.tight.set(k);
                }
            }
        }
        return rays;
    }

    let mut fresh = Vec::new();
    for &p in &pos {
        for &n in &neg {
            let common = rays[p].tight.and(&rays[n].tight);
            let blocked = rays
                .iter()
                .enumerate()
                .any(|(i, r)| i != p && i != n && common.subset_of(&r.tight));
            if blocked {
                continue;
            }
            let vp = &values[p];
            let vn = &values[n];
            let combined: Vec<Int> = rays[n]
                .v
                .iter()
                .zip(&rays[p].v)
                .map(|(xn, xp)| vp * xn - vn * xp)
                .collect();
            let mut tight = common;
            if let Some((k, _)) = index {
                tight.set(k);
            }
            fresh.push(Ray {
                v: primitive(&combined),
                tight,
            });
        }
    }

    let keep_pos = index.is_some();
    let mut out = Vec::with_capacity(rays.len() + fresh.len());
    for (i, mut r) in rays.into_iter().enumerate() {
        if values[i].is_zero() {
            if let Some((k, _)) = index {
                r.tight.set(k);
            }
            out.push(r);
        } else if values[i].is_positive() && keep_pos {
            out.push(r);
        }
    }
    out.extend(fresh);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ints;

    fn sorted(mut v: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
        v.sort();
        v
    }

    #[test]
    fn positive_quadrant() {
        let out = cone_generators(2, &[ints(&[1, 0]), ints(&[0, 1])], &[]);
        assert!(out.lineality.is_empty());
        assert_eq!(sorted(out.rays), vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let out = cone_generators(2, &[ints(&[1, 1])], &[]);
        assert_eq!(out.lineality.len(), 1);
        assert_eq!(out.rays.len(), 1);
    }

    #[test]
    fn square_cone_has_four_rays() {
        // cone over the unit square: x0>=0 style constraints in 3d
        let ineqs = vec![
            ints(&[0, 1, 0]),
            ints(&[0, 0, 1]),
            ints(&[1, -1, 0]),
            ints(&[1, 0, -1]),
        ];
        let out = cone_generators(3, &ineqs, &[]);
        assert!(out.lineality.is_empty());
        assert_eq!(out.rays.len(), 4);
    }

    #[test]
    fn equation_slices() {
        // orthant in 3d cut by x - 2y + z = 0
        let ineqs = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        let out = cone_generators(3, &ineqs, &[ints(&[1, -2, 1])]);
        assert!(out.lineality.is_empty());
        assert_eq!(sorted(out.rays), vec![ints(&[0, 1, 2]), ints(&[2, 1, 0])]);
    }

    #[test]
    fn infeasible_cone_is_zero() {
        let out = cone_generators(1, &[ints(&[1]), ints(&[-1])], &[]);
        assert!(out.lineality.is_empty());
        assert!(out.rays.is_empty());
    }
}
