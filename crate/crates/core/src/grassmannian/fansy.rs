//! The Gr(2,n) fansy divisor: closed form and recipe.

use serde_json::{json, Value};

use super::plucker::{c_ray, plucker_pairs, GrassmannianSetup};
use super::{ell, format_set, tail_fan_grass, LAMBDA};
use crate::arith::{rat, scale_rat, to_rats, Rat};
use crate::chow::{pp_from_labeled_rays, projectivize_with};
use crate::divisor::{DivisorLabel, FansyDivisor, PPDivisor, Partition};
use crate::error::{Error, Result};
use crate::polyhedral::Polyhedron;

/// Largest `n` accepted by the recipe route unless overridden.
pub const DEFAULT_MAX_N: usize = 6;

/// `((b-1)/(n-2)·ℓ_{B'}, (b+1-n)/(n-2)·ℓ_{B'})`.
pub fn edge_endpoints(n: usize, b: &Partition) -> (Vec<Rat>, Vec<Rat>) {
    let (nn, bb) = (n as i64, b.b() as i64);
    let l = to_rats(&ell(n, b.first()));
    (
        scale_rat(&l, &rat(bb - 1, nn - 2)),
        scale_rat(&l, &rat(bb + 1 - nn, nn - 2)),
    )
}

/// The tail fan with the origin replaced by the edge `C_B` for every `B`.
///
/// A tail cone containing `-ℓ_{B'}` sits at the endpoint `(b+1-n)/(n-2)·ℓ_{B'}`,
/// one containing `ℓ_{B'}` at the other endpoint, and any other cone is
/// attached along the whole edge. Cells are labeled by the negative signs.
pub fn fansy_closed_form(n: usize) -> Result<FansyDivisor> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("need n >= 4, got {n}")));
    }
    let fan = tail_fan_grass(2, n)?;
    let parts = Partition::all(n);
    let mut cells = Vec::with_capacity(fan.len());
    for cell in fan.cones() {
        let tau = &cell.polyhedron;
        let mut terms = Vec::with_capacity(parts.len());
        for b in &parts {
            let (hi, lo) = edge_endpoints(n, b);
            let dir = to_rats(&ell(n, b.first()));
            let neg: Vec<Rat> = dir.iter().map(|x| -x).collect();
            let verts = if tau.contains(&neg) {
                vec![lo]
            } else if tau.contains(&dir) {
                vec![hi]
            } else {
                vec![hi, lo]
            };
            let coeff = Polyhedron::from_vrep(LAMBDA, n - 1, &verts, &[], &[])?.minkowski_sum(tau)?;
            terms.push((DivisorLabel::Partition(b.clone()), coeff));
        }
        cells.push((cell.label.clone(), PPDivisor::new(tau.clone(), terms)?));
    }
    FansyDivisor::new(cells)
}

/// Recipe on the Plücker cone with rays `c^B` and the section induced by `t`,
/// projected along `e^i -> ℓ_i`. Cells are labeled by Plücker pairs.
pub fn fansy_via_recipe(n: usize, max_n: usize) -> Result<FansyDivisor> {
    if n > max_n {
        return Err(Error::GuardExceeded {
            what: "n",
            value: n,
            limit: max_n,
        });
    }
    let gs = GrassmannianSetup::new(n)?;
    let rays = gs
        .partitions()
        .into_iter()
        .map(|b| {
            let c = c_ray(&b, &gs)?;
            Ok((DivisorLabel::Partition(b), c.point))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = pp_from_labeled_rays(&gs.setup, rays)?;
    let names: Vec<String> = plucker_pairs(n)
        .into_iter()
        .map(|(i, j)| format_set(&[i, j]))
        .collect();
    projectivize_with(&gs.setup, &d, &gs.p, &names)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FansyComparison {
    pub equal: bool,
    pub labels_equal: bool,
    /// `(left cell, right cell)` with equal pp-divisors.
    pub bijection: Vec<(String, String)>,
    pub unmatched_left: Vec<String>,
    pub unmatched_right: Vec<String>,
}

impl FansyComparison {
    pub fn to_json(&self) -> Value {
        json!({
            "equal": self.equal,
            "labels_equal": self.labels_equal,
            "bijection": self.bijection.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "unmatched_left": self.unmatched_left,
            "unmatched_right": self.unmatched_right,
        })
    }
}

/// Matches cells by exact equality of their pp-divisors; names are ignored.
pub fn compare_fansy(left: &FansyDivisor, right: &FansyDivisor) -> FansyComparison {
    let labels_equal = left.labels() == right.labels();
    let mut used = vec![false; right.cells().len()];
    let mut bijection = Vec::new();
    let mut unmatched_left = Vec::new();
    for (name, c) in left.cells() {
        let hit = right
            .cells()
            .iter()
            .enumerate()
            .find(|(k, (_, d))| !used[*k] && d == c);
        match hit {
            Some((k, (other, _))) => {
                used[k] = true;
                bijection.push((name.clone(), other.clone()));
            }
            None => unmatched_left.push(name.clone()),
        }
    }
    let unmatched_right: Vec<String> = right
        .cells()
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|((n, _), _)| n.clone())
        .collect();
    FansyComparison {
        equal: labels_equal && unmatched_left.is_empty() && unmatched_right.is_empty(),
        labels_equal,
        bijection,
        unmatched_left,
        unmatched_right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::check_subdivision_structure;

    #[test]
    fn closed_form_n4() {
        let f = fansy_closed_form(4).unwrap();
        assert_eq!(f.labels().len(), 3);
        assert_eq!(f.cells().len(), 6);
        assert!(check_subdivision_structure(&f).pass);
        let b = Partition::new(4, &[1, 2]).unwrap();
        let (hi, lo) = edge_endpoints(4, &b);
        assert_eq!(hi, vec![rat(1, 2), rat(1, 2), rat(0, 1)]);
        assert_eq!(lo, vec![rat(-1, 2), rat(-1, 2), rat(0, 1)]);
        assert_eq!(f.tail_fan().cones().len(), 6);
    }

    #[test]
    fn recipe_matches_closed_form_n4() {
        let a = fansy_closed_form(4).unwrap();
        let b = fansy_via_recipe(4, DEFAULT_MAX_N).unwrap();
        assert!(check_subdivision_structure(&b).pass);
        for (_, c) in b.cells() {
            assert!(c.empty_locus().is_empty());
        }
        let cmp = compare_fansy(&a, &b);
        assert!(cmp.equal, "{cmp:?}");
        assert!(cmp.bijection.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn guard() {
        assert!(matches!(
            fansy_via_recipe(7, DEFAULT_MAX_N),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(fansy_closed_form(3).is_err());
    }
}
