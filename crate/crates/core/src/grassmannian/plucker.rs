//! The affine cone over Gr(2,n) in its Plücker embedding.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::projection;
use crate::arith::{gcd_all, primitive, rat, to_rats, Int, Rat};
use crate::chow::{build_setup, fiber_coefficient, section_from_retraction, WeightSetup, N_TILDE};
use crate::divisor::Partition;
use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, LatticeMap, RatMatrix};
use crate::polyhedral::{fiber_polyhedron, subsets, Halfspace, Polyhedron};

/// Pairs `i < j` (1-based) in lexicographic order; the coordinate order of `Z^{n choose 2}`.
pub fn plucker_pairs(n: usize) -> Vec<(usize, usize)> {
    subsets(n, 2)
        .into_iter()
        .map(|s| (s[0] + 1, s[1] + 1))
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("need n >= 4, got {n}")));
    }
    Ok(())
}

/// `E_ij -> e_i + e_j`.
pub fn plucker_degrees(n: usize) -> Result<LatticeMap> {
    check_n(n)?;
    let cols: Vec<Vec<Int>> = plucker_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut v = vec![Int::zero(); n];
            v[i - 1] += 1;
            v[j - 1] += 1;
            v
        })
        .collect();
    Ok(LatticeMap::new("Z^l", "M~", IntMatrix::from_cols(&cols, n)?))
}

/// `E^{B} = Σ_{i<j in B} E^{ij}`.
pub fn big_e(n: usize, block: &[usize]) -> Vec<Int> {
    plucker_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            if block.contains(&i) && block.contains(&j) {
                Int::one()
            } else {
                Int::zero()
            }
        })
        .collect()
}

/// `e^{B} = Σ_{b in B} e^b`.
pub fn small_e(n: usize, block: &[usize]) -> Vec<Int> {
    (1..=n)
        .map(|i| if block.contains(&i) { Int::one() } else { Int::zero() })
        .collect()
}

/// `t(E^{ij}) = (e^i + e^j)/(n-2) - 1/((n-2)(n-1))`.
pub fn retraction(n: usize) -> RatMatrix {
    let pairs = plucker_pairs(n);
    let nn = n as i64;
    let shift = rat(1, (nn - 2) * (nn - 1));
    let mut t = RatMatrix::zeros(n, pairs.len());
    for (c, &(i, j)) in pairs.iter().enumerate() {
        for r in 0..n {
            let mut x = -shift.clone();
            if r + 1 == i || r + 1 == j {
                x += rat(1, nn - 2);
            }
            t.set(r, c, x);
        }
    }
    t
}

/// `σ = {y : y_i + y_j >= 0}`, built directly from the inequalities.
pub fn sigma_oracle(n: usize) -> Result<Polyhedron> {
    let ineqs: Vec<Halfspace> = plucker_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut v = vec![Int::zero(); n];
            v[i - 1] += 1;
            v[j - 1] += 1;
            Halfspace::new(v, Rat::zero())
        })
        .collect();
    Polyhedron::from_hrep(N_TILDE, n, &ineqs, &[])
}

/// Recipe data for the Plücker cone, with the section induced by `t`.
#[derive(Clone, Debug)]
pub struct GrassmannianSetup {
    pub n: usize,
    pub setup: WeightSetup,
    /// The recipe setup before the section is replaced.
    pub integral_setup: WeightSetup,
    pub t: RatMatrix,
    /// `e^i -> ℓ_i`.
    pub p: RatMatrix,
}

impl GrassmannianSetup {
    pub fn new(n: usize) -> Result<Self> {
        let deg = plucker_degrees(n)?;
        let base = build_setup(&deg.matrix)?;
        let t = retraction(n);
        let s = section_from_retraction(&base, &t)?;
        let setup = base.clone().with_section(s)?;
        Ok(GrassmannianSetup {
            n,
            setup,
            integral_setup: base,
            t,
            p: projection(n),
        })
    }

    pub fn partitions(&self) -> Vec<Partition> {
        Partition::all(self.n)
    }
}

/// `c^B = π(E^{B'})`, with its primitive generator and `point = scale · primitive`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRay {
    pub point: Vec<Int>,
    pub primitive: Vec<Int>,
    pub scale: Int,
}

/// Checks `π(E^{B'}) = π(E^{B''})` via `deg*(e^{B'} - e^{B''}) = 2(E^{B'} - E^{B''})`.
pub fn c_ray(b: &Partition, gs: &GrassmannianSetup) -> Result<CRay> {
    let n = gs.n;
    if b.n() != n {
        return Err(Error::InvalidPartition(format!("{b} is not a partition of 1..={n}")));
    }
    let second = b.second();
    let e1 = big_e(n, b.first());
    let e2 = big_e(n, &second);
    let lhs: Vec<Int> = gs
        .setup
        .deg_star
        .apply(&small_e(n, b.first()))?
        .into_iter()
        .zip(gs.setup.deg_star.apply(&small_e(n, &second))?)
        .map(|(x, y)| x - y)
        .collect();
    let rhs: Vec<Int> = e1.iter().zip(&e2).map(|(x, y)| Int::from(2) * (x - y)).collect();
    if lhs != rhs {
        return Err(Error::Inconsistent(format!(
            "deg*(e^B' - e^B'') != 2(E^B' - E^B'') for {b}"
        )));
    }
    let point = gs.setup.pi.apply(&e1)?;
    if point != gs.setup.pi.apply(&e2)? {
        return Err(Error::Inconsistent(format!("c^B' != c^B'' for {b}")));
    }
    Ok(CRay {
        primitive: primitive(&point),
        scale: gcd_all(&point),
        point,
    })
}

/// `π^{-1}(c^B) ∩ Q_{>=0}`, checked against `[E^{B'}, E^{B''}] + deg*(σ)`.
pub fn positive_fiber_b(b: &Partition, gs: &GrassmannianSetup) -> Result<Polyhedron> {
    let n = gs.n;
    let c = c_ray(b, gs)?;
    let fiber = fiber_polyhedron(&gs.setup.pi, &c.point)?;
    let ambient = gs.setup.pi.domain.clone();
    let l = gs.setup.orthant_rank();
    let seg = Polyhedron::from_vrep(
        ambient.clone(),
        l,
        &[to_rats(&big_e(n, b.first())), to_rats(&big_e(n, &b.second()))],
        &[],
        &[],
    )?;
    let tail = sigma_oracle(n)?.linear_image(&gs.setup.deg_star.matrix.to_rat(), ambient)?;
    let closed = seg.minkowski_sum(&tail)?;
    if fiber != closed {
        return Err(Error::Inconsistent(format!(
            "positive fiber over c^B differs from the segment plus deg*(σ) for {b}"
        )));
    }
    Ok(fiber)
}

/// `Δ_B = t(E^{B'}) + ½·[0, e^{B''} - e^{B'}] + σ`, from the closed formula.
pub fn delta_b(n: usize, b: &Partition) -> Result<Polyhedron> {
    check_n(n)?;
    if b.n() != n {
        return Err(Error::InvalidPartition(format!("{b} is not a partition of 1..={n}")));
    }
    let v1 = t_of_block(n, b.first());
    let half = rat(1, 2);
    let v2: Vec<Rat> = (1..=n)
        .map(|i| {
            let d = if b.first().contains(&i) { -half.clone() } else { half.clone() };
            &v1[i - 1] + d
        })
        .collect();
    Polyhedron::from_vrep(N_TILDE, n, &[v1, v2], &[], &[])?.minkowski_sum(&sigma_oracle(n)?)
}

/// `(b-1)/(n-2)·e^{B} - (b-1)b/(2(n-2)(n-1))·1`.
fn t_of_block(n: usize, block: &[usize]) -> Vec<Rat> {
    let (nn, bb) = (n as i64, block.len() as i64);
    let scale = rat(bb - 1, nn - 2);
    let shift = rat((bb - 1) * bb, 2 * (nn - 2) * (nn - 1));
    (1..=n)
        .map(|i| {
            let base = if block.contains(&i) { scale.clone() } else { Rat::zero() };
            base - &shift
        })
        .collect()
}

/// `Δ_B` by three routes: closed formula, `t(positive fiber)`, and the recipe
/// with the section induced by `t`. Returns the common value.
pub fn check_delta_b(b: &Partition, gs: &GrassmannianSetup) -> Result<Polyhedron> {
    let n = gs.n;
    for block in [b.first().to_vec(), b.second()] {
        let direct = gs.t.apply(&to_rats(&big_e(n, &block)))?;
        if direct != t_of_block(n, &block) {
            return Err(Error::Inconsistent(format!("t(E^B) formula fails for {b}")));
        }
    }
    let closed = delta_b(n, b)?;
    let via_t = positive_fiber_b(b, gs)?.linear_image(&gs.t, N_TILDE)?;
    let via_recipe = fiber_coefficient(&gs.setup, &c_ray(b, gs)?.point)?;
    if closed != via_t || closed != via_recipe {
        return Err(Error::Inconsistent(format!("Δ_B routes disagree for {b}")));
    }
    Ok(closed)
}

/// Runs `check_delta_b` for every partition in parallel.
pub fn all_deltas(gs: &GrassmannianSetup) -> Result<Vec<(Partition, Polyhedron)>> {
    gs.partitions()
        .into_par_iter()
        .map(|b| {
            let d = check_delta_b(&b, gs)?;
            Ok((b, d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rats;
    use crate::lattice::check_retraction;

    #[test]
    fn degrees_and_lattices() {
        let deg = plucker_degrees(4).unwrap();
        assert_eq!(deg.matrix.cols(), 6);
        let f = crate::lattice::smith_decompose(&deg).1;
        let diag: Vec<Int> = (0..4).map(|i| f.get(i, i).clone()).collect();
        assert_eq!(diag.iter().filter(|x| **x == Int::from(2)).count(), 1);
        assert!(plucker_degrees(3).is_err());
        let gs = GrassmannianSetup::new(4).unwrap();
        let half = vec![rat(1, 2); 4];
        assert_eq!(gs.setup.degree_element, Some(half.clone()));
        let binv = gs.setup.n_tilde_basis.inverse().unwrap();
        assert!(binv.apply(&half).unwrap().iter().all(|x| x.is_integer()));
        for i in 1..=4 {
            let img = gs.setup.deg_star.apply(&small_e(4, &[i])).unwrap();
            let expect: Vec<Int> = plucker_pairs(4)
                .iter()
                .map(|&(a, b)| Int::from((a == i || b == i) as i64))
                .collect();
            assert_eq!(img, expect);
        }
    }

    #[test]
    fn retraction_identities() {
        for n in 4..=6 {
            let gs = GrassmannianSetup::new(n).unwrap();
            assert!(check_retraction(&gs.t, &gs.setup.deg_star));
            let sigma = sigma_oracle(n).unwrap();
            assert_eq!(sigma, gs.setup.sigma);
            let back = sigma
                .linear_image(&gs.setup.deg_star.matrix.to_rat(), "Z^l")
                .unwrap()
                .linear_image(&gs.t, N_TILDE)
                .unwrap();
            assert_eq!(back, sigma);
        }
    }

    #[test]
    fn rays_n4() {
        let gs = GrassmannianSetup::new(4).unwrap();
        let rays: Vec<CRay> = gs.partitions().iter().map(|b| c_ray(b, &gs).unwrap()).collect();
        assert_ne!(rays[0].primitive, rays[1].primitive);
        assert_ne!(rays[0].primitive, rays[2].primitive);
        assert_ne!(rays[1].primitive, rays[2].primitive);
        let fan = crate::polyhedral::common_refinement_fan(&gs.setup.pi, 16).unwrap();
        let fan_rays = fan.rays();
        for r in &rays {
            assert!(fan_rays.contains(&r.primitive));
        }
    }

    #[test]
    fn fibers_and_deltas_n4() {
        let gs = GrassmannianSetup::new(4).unwrap();
        let b = Partition::new(4, &[1, 2]).unwrap();
        let f = positive_fiber_b(&b, &gs).unwrap();
        assert_eq!(f.vertices().len(), 2);
        let d = check_delta_b(&b, &gs).unwrap();
        let v1 = vec![rat(1, 3), rat(1, 3), rat(-1, 6), rat(-1, 6)];
        let v2 = vec![rat(-1, 6), rat(-1, 6), rat(1, 3), rat(1, 3)];
        let mut expect = vec![v1, v2];
        expect.sort();
        assert_eq!(d.vertices(), expect.as_slice());
        assert_eq!(d.tail_cone(), sigma_oracle(4).unwrap());
    }

    #[test]
    fn cube_crosscut() {
        let sigma = sigma_oracle(4).unwrap();
        let height = Polyhedron::from_hrep(N_TILDE, 4, &[], &[Halfspace::new(vec![Int::one(); 4], Rat::one())]).unwrap();
        let cube = sigma.intersect(&height).unwrap();
        let mut expect: Vec<Vec<Rat>> = Vec::new();
        for i in 0..4 {
            let mut e = rats(&[0, 0, 0, 0]);
            e[i] = Rat::one();
            expect.push(e.clone());
            expect.push(e.iter().map(|x| rat(1, 2) - x).collect());
        }
        expect.sort();
        assert_eq!(cube.vertices(), expect.as_slice());
    }

    #[test]
    fn all_partitions_n5() {
        let gs = GrassmannianSetup::new(5).unwrap();
        assert_eq!(all_deltas(&gs).unwrap().len(), 10);
    }
}
