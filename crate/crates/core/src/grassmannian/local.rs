//! Comparison with the affine chart `z_12 != 0`.
//!
//! Local lattice `Z^2 ⊗ Z^{n-2}` with basis `f^a ⊗ g^j` (`a = 1, 2`,
//! `j = 3..n`); `N̄ = Z^{n-2}/1` in the basis `g^3..g^{n-1}`.

use num_traits::Zero;
use serde_json::{json, Value};

use super::ell;
use super::plucker::{c_ray, plucker_pairs, GrassmannianSetup};
use crate::arith::{int, to_rats, Int};
use crate::divisor::Partition;
use crate::error::Result;
use crate::lattice::{integral_section, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub n: usize,
    pub pass: bool,
    pub checks: Vec<(String, bool)>,
}

impl LocalReport {
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(m, _)| m.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "pass": self.pass,
            "checks": self.checks.iter().map(|(m, ok)| json!({"check": m, "ok": ok})).collect::<Vec<_>>(),
        })
    }
}

struct Local {
    n: usize,
}

impl Local {
    fn dim(&self) -> usize {
        2 * (self.n - 2)
    }

    fn fg(&self, a: usize, j: usize) -> usize {
        (a - 1) * (self.n - 2) + (j - 3)
    }

    /// `g^j` in `N̄`.
    fn g(&self, j: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.n - 3];
        if j < self.n {
            v[j - 3] += 1;
        } else {
            for x in v.iter_mut() {
                *x -= 1;
            }
        }
        v
    }

    fn g_set(&self, block: &[usize]) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.n - 3];
        for &j in block {
            for (x, y) in v.iter_mut().zip(self.g(j)) {
                *x += y;
            }
        }
        v
    }

    /// `ℓ_{1,2} -> -f^i ⊗ Σ g^j`, `ℓ_{j>=3} -> f^1 ⊗ g^j + f^2 ⊗ g^j`.
    fn deg_star_image(&self, m: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.dim()];
        if m <= 2 {
            for j in 3..=self.n {
                v[self.fg(m, j)] = int(-1);
            }
        } else {
            v[self.fg(1, m)] = int(1);
            v[self.fg(2, m)] = int(1);
        }
        v
    }

    fn deg_star(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = (1..self.n).map(|m| self.deg_star_image(m)).collect();
        IntMatrix::from_cols(&cols, self.dim()).expect("shape")
    }

    /// `E^{1j} -> f^2 ⊗ g^j`, `E^{2j} -> f^1 ⊗ g^j`, `E^{12} -> -Σ f ⊗ g`,
    /// other `E^{ij} -> 0`.
    fn middle(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = plucker_pairs(self.n)
            .into_iter()
            .map(|(i, j)| {
                let mut v = vec![Int::zero(); self.dim()];
                match (i, j) {
                    (1, 2) => v.iter_mut().for_each(|x| *x = int(-1)),
                    (1, j) => v[self.fg(2, j)] = int(1),
                    (2, j) => v[self.fg(1, j)] = int(1),
                    _ => {}
                }
                v
            })
            .collect();
        IntMatrix::from_cols(&cols, self.dim()).expect("shape")
    }

    /// `f^1 ⊗ g^j -> g^j`, `f^2 ⊗ g^j -> -g^j`.
    fn pi(&self) -> IntMatrix {
        let mut cols = vec![Vec::new(); self.dim()];
        for j in 3..=self.n {
            let g = self.g(j);
            cols[self.fg(1, j)] = g.clone();
            cols[self.fg(2, j)] = g.into_iter().map(|x| -x).collect();
        }
        IntMatrix::from_cols(&cols, self.n - 3).expect("shape")
    }
}

/// Checks both squares of the global/local diagram on basis vectors and the
/// image `c^B -> g^{B \ 2}` (zero when `B` does not separate 1 and 2).
pub fn local_chart_check(n: usize) -> Result<LocalReport> {
    let gs = GrassmannianSetup::new(n)?;
    let loc = Local { n };
    let mut checks: Vec<(String, bool)> = Vec::new();

    let dl = loc.deg_star();
    let mid = loc.middle();
    let pl = loc.pi();
    let pl_dl = pl.mul(&dl)?;
    checks.push(("local sequence is a complex".into(), pl_dl.is_zero()));
    checks.push(("local deg* is injective".into(), dl.rank() == n - 1));
    checks.push(("local pi has full rank".into(), pl.rank() == n - 3));

    for m in 1..=n {
        let img = dl.apply(&ell(n, &[m]))?;
        checks.push((format!("left column at l_{m}"), img == loc.deg_star_image(m)));
    }

    let dl_p = dl.to_rat().mul(&gs.p)?;
    let mid_ds = mid.mul(&gs.setup.deg_star.matrix)?.to_rat();
    for i in 0..n {
        checks.push((format!("left square at e^{}", i + 1), dl_p.col(i) == mid_ds.col(i)));
    }

    let s = integral_section(&gs.setup.pi)?.matrix.to_rat();
    let pl_mid = pl.mul(&mid)?.to_rat();
    let right = pl_mid.mul(&s)?;
    let right_pi = right.mul(&gs.setup.pi.matrix.to_rat())?;
    for (c, (i, j)) in plucker_pairs(n).into_iter().enumerate() {
        checks.push((format!("right square at E^{{{i}{j}}}"), right_pi.col(c) == pl_mid.col(c)));
    }

    for b in Partition::all(n) {
        let c = c_ray(&b, &gs)?;
        let img = right.apply(&to_rats(&c.point))?;
        let expect = if b.separates(1, 2) {
            let with_two = if b.first().contains(&2) { b.first().to_vec() } else { b.second() };
            let rest: Vec<usize> = with_two.into_iter().filter(|&x| x != 2).collect();
            loc.g_set(&rest)
        } else {
            vec![Int::zero(); n - 3]
        };
        checks.push((format!("c^B image for {b}"), img == to_rats(&expect)));
    }

    let pass = checks.iter().all(|(_, ok)| *ok);
    Ok(LocalReport { n, pass, checks })
}
