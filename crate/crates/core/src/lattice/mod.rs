//! Exact linear algebra over free abelian groups.
//!
//! A [`LatticeMap`] is an integer matrix between two named lattices. Names are
//! checked on composition so that maps between different lattices of the same
//! rank cannot be mixed up silently.

mod matrix;
mod normal_forms;

pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use normal_forms::{hermite, hnf_basis, left_kernel, smith, Hermite, Smith};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{symmetric_mod, Int, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeMap {
    pub domain: String,
    pub codomain: String,
    #[serde(with = "crate::json::int_matrix")]
    pub matrix: IntMatrix,
}

impl LatticeMap {
    pub fn new(domain: impl Into<String>, codomain: impl Into<String>, matrix: IntMatrix) -> Self {
        LatticeMap {
            domain: domain.into(),
            codomain: codomain.into(),
            matrix,
        }
    }

    pub fn identity(name: &str, rank: usize) -> Self {
        Self::new(name, name, IntMatrix::identity(rank))
    }

    pub fn domain_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn apply(&self, v: &[Int]) -> Result<Vec<Int>> {
        self.matrix.apply(v)
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        self.matrix.to_rat().apply(v)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LatticeMap) -> Result<LatticeMap> {
        if inner.codomain != self.domain {
            return Err(Error::LatticeMismatch {
                left: self.domain.clone(),
                right: inner.codomain.clone(),
            });
        }
        Ok(LatticeMap::new(
            inner.domain.clone(),
            self.codomain.clone(),
            self.matrix.mul(&inner.matrix)?,
        ))
    }

    pub fn dual(&self) -> LatticeMap {
        LatticeMap::new(
            format!("{}*", self.codomain),
            format!("{}*", self.domain),
            self.matrix.transpose(),
        )
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain_rank()
    }

    /// Surjective onto the (free) codomain: full row rank and unit invariant factors.
    pub fn is_surjective(&self) -> bool {
        let sm = smith(&self.matrix);
        sm.rank == self.codomain_rank() && sm.invariant_factors().iter().all(One::is_one)
    }
}

/// `U * A * V = S` with `S` diagonal, `d1 | d2 | ...`, `U` and `V` unimodular.
pub fn smith_decompose(a: &LatticeMap) -> (IntMatrix, IntMatrix, IntMatrix) {
    let sm = smith(&a.matrix);
    (sm.u, sm.s, sm.v)
}

/// Embedding of the saturated kernel `{x : A x = 0}` into the domain, columns
/// in Hermite normal form.
pub fn kernel_basis(a: &LatticeMap) -> LatticeMap {
    let rows = left_kernel(&a.matrix.transpose());
    let n = a.domain_rank();
    let m = IntMatrix::from_cols(&rows, n).expect("kernel vectors have domain length");
    LatticeMap::new(format!("ker({})", a.domain), a.domain.clone(), m)
}

/// Projection onto the torsion-free cokernel of an injective `b`.
///
/// Rows of the result are the HNF basis of `{y : y^T b = 0}`, so the kernel of
/// the projection is the saturation of `im b`.
pub fn quotient_projection(b: &LatticeMap) -> Result<LatticeMap> {
    let rank = b.rank();
    if rank != b.domain_rank() {
        return Err(Error::NotInjective {
            rank,
            cols: b.domain_rank(),
        });
    }
    let rows = left_kernel(&b.matrix);
    let m = IntMatrix::from_rows(&rows, b.codomain_rank())?;
    Ok(LatticeMap::new(
        b.codomain.clone(),
        format!("{}/{}", b.codomain, b.domain),
        m,
    ))
}

/// An integral section `s` of a surjection `pi`, so `pi ∘ s = id`.
///
/// The SNF of `pi` yields a first section; each column is then reduced modulo
/// `ker pi` against its HNF basis, with the coordinate at every pivot brought
/// into the window `(-p/2, p/2]`. The result is independent of the SNF path.
pub fn integral_section(pi: &LatticeMap) -> Result<LatticeMap> {
    if !pi.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let k = pi.codomain_rank();
    let n = pi.domain_rank();
    let sm = smith(&pi.matrix);
    let mut splus = IntMatrix::zeros(n, k);
    for i in 0..k {
        splus.set(i, i, Int::one());
    }
    let s = sm.v.mul(&splus)?.mul(&sm.u)?;

    let ker = left_kernel(&pi.matrix.transpose());
    let hf = hermite(&IntMatrix::from_rows(&ker, n)?);
    let mut cols = s.col_vecs();
    for col in cols.iter_mut() {
        for (r, &p) in hf.pivots.iter().enumerate() {
            let pivot = hf.h.get(r, p);
            let target = symmetric_mod(&col[p], pivot);
            let q = (&col[p] - &target) / pivot;
            if !q.is_zero() {
                for (j, c) in col.iter_mut().enumerate() {
                    *c -= &q * hf.h.get(r, j);
                }
            }
        }
    }
    let s = IntMatrix::from_cols(&cols, n)?;
    let out = LatticeMap::new(pi.codomain.clone(), pi.domain.clone(), s);
    debug_assert_eq!(pi.compose(&out)?.matrix, IntMatrix::identity(k));
    Ok(out)
}

/// Whether `t ∘ emb` is exactly the identity.
pub fn check_retraction(t: &RatMatrix, emb: &LatticeMap) -> bool {
    if t.cols() != emb.codomain_rank() || t.rows() != emb.domain_rank() {
        return false;
    }
    match t.mul(&emb.matrix.to_rat()) {
        Ok(p) => p == RatMatrix::identity(emb.domain_rank()),
        Err(_) => false,
    }
}

/// Rational left inverse `(A^T A)^{-1} A^T` of an injective map.
pub fn left_inverse(emb: &LatticeMap) -> Result<RatMatrix> {
    let a = emb.matrix.to_rat();
    let at = a.transpose();
    let gram = at.mul(&a)?;
    let inv = gram.inverse().ok_or(Error::NotInjective {
        rank: emb.rank(),
        cols: emb.domain_rank(),
    })?;
    inv.mul(&at)
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn zero_rat(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat};

    fn row_map(r: &[i64]) -> LatticeMap {
        LatticeMap::new("Z", "Q", IntMatrix::from_i64(&[r]))
    }

    #[test]
    fn kernel_of_single_form() {
        let k = kernel_basis(&row_map(&[1, -2, 1]));
        assert_eq!(k.matrix.cols(), 2);
        // same lattice as the hand basis {(2,1,0),(1,1,1)}
        let hand = hnf_basis(&[ints(&[2, 1, 0]), ints(&[1, 1, 1])], 3);
        assert_eq!(k.matrix.transpose().row_vecs(), hand);
    }

    #[test]
    fn kernel_of_injective_is_trivial() {
        let k = kernel_basis(&LatticeMap::identity("Z2", 2));
        assert_eq!(k.matrix.cols(), 0);
    }

    #[test]
    fn quotient_of_even_integers_is_zero() {
        let b = LatticeMap::new("2Z", "Z", IntMatrix::from_i64(&[&[2]]));
        let q = quotient_projection(&b).unwrap();
        assert_eq!(q.codomain_rank(), 0);
    }

    #[test]
    fn quotient_rejects_non_injective() {
        let b = LatticeMap::new("A", "B", IntMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert!(matches!(
            quotient_projection(&b),
            Err(Error::NotInjective { .. })
        ));
    }

    #[test]
    fn quotient_of_example_weights() {
        let degt = LatticeMap::new("Nt", "Z3", IntMatrix::from_i64(&[&[2, 1], &[1, 1], &[0, 1]]));
        let pi = quotient_projection(&degt).unwrap();
        assert_eq!(pi.matrix, IntMatrix::from_i64(&[&[1, -2, 1]]));
        assert!(pi.compose(&degt).unwrap().matrix.is_zero());
    }

    #[test]
    fn sections() {
        let id = LatticeMap::identity("Z2", 2);
        assert_eq!(integral_section(&id).unwrap().matrix, IntMatrix::identity(2));

        let s = integral_section(&row_map(&[2, 3])).unwrap();
        assert_eq!(s.matrix.col(0), ints(&[-1, 1]));

        let pi = row_map(&[1, -2, 1]);
        let s = integral_section(&pi).unwrap();
        assert_eq!(pi.compose(&s).unwrap().matrix, IntMatrix::identity(1));
        // the example's hand choice (-1,-1,0) is another section
        assert_eq!(pi.apply(&ints(&[-1, -1, 0])).unwrap(), ints(&[1]));

        assert_eq!(integral_section(&row_map(&[2, 4])), Err(Error::NotSurjective));
    }

    #[test]
    fn retraction_checks() {
        let id = LatticeMap::identity("Z2", 2);
        assert!(check_retraction(&RatMatrix::identity(2), &id));
        assert!(!check_retraction(&RatMatrix::zeros(2, 2), &id));
        let emb = LatticeMap::new("A", "B", IntMatrix::from_i64(&[&[2], &[0]]));
        let mut t = RatMatrix::zeros(1, 2);
        t.set(0, 0, rat(1, 2));
        assert!(check_retraction(&t, &emb));
    }

    #[test]
    fn compose_checks_names() {
        let a = LatticeMap::identity("A", 2);
        let b = LatticeMap::identity("B", 2);
        assert!(matches!(a.compose(&b), Err(Error::LatticeMismatch { .. })));
    }
}
