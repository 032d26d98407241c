//! From a weight matrix to the pp-divisor of the affine cone and the fansy
//! divisor of the projective variety.
//!
//! Lattices: `deg : Z^l -> M~` sends coordinate `z_v` to its weight. The dual
//! `deg* : N~ -> Z^l` is realized on `Q^r` (`r` = rank of `M~`), with
//! `N~ = {y : deg*(y) integral}`; polyhedra over `N~` are written in these
//! `Q^r` coordinates.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{gcd_all, is_zero_vec, sub_rat, to_rats, Int, Rat};
use crate::divisor::{DivisorLabel, FansyDivisor, PPDivisor};
use crate::error::{Error, Result};
use crate::json::{int_matrix_value, rat_matrix_value, rat_vec_value};
use crate::lattice::{
    check_retraction, integral_section, kernel_basis, left_inverse, quotient_projection,
    IntMatrix, LatticeMap, RatMatrix,
};
use crate::polyhedral::{
    common_refinement_fan, fiber_polyhedron, Bound, Cone, Halfspace, MinFace, Polyhedron,
    DEFAULT_MAX_ORTHANT_RANK,
};

pub const N_TILDE: &str = "N~";
pub const N_QUOT: &str = "N''";
pub const N_PROJ: &str = "N";

#[derive(Clone, Debug)]
pub struct WeightSetup {
    pub deg: LatticeMap,
    pub deg_star: LatticeMap,
    pub pi: LatticeMap,
    /// `l x k`, with `pi ∘ s = id`; integral unless overridden.
    pub section: RatMatrix,
    /// `(A^T A)^{-1} A^T` for `A = deg*`.
    pub left_inverse: RatMatrix,
    /// Columns: a basis of `N~` in `Q^r` coordinates.
    pub n_tilde_basis: RatMatrix,
    pub degree_element: Option<Vec<Rat>>,
    /// `{y : deg*(y) >= 0}`.
    pub sigma: Cone,
}

/// Derives the dual sequence `0 -> N~ -> Z^l -> N'' -> 0` from `deg`.
///
/// `deg` must have full row rank; its image need not be saturated.
pub fn build_setup(deg: &IntMatrix) -> Result<WeightSetup> {
    let r = deg.rows();
    let l = deg.cols();
    if deg.rank() != r {
        return Err(Error::NotSurjective);
    }
    let deg = LatticeMap::new("Z^l", "M~", deg.clone());
    let deg_star = LatticeMap::new(N_TILDE, "Z^l", deg.matrix.transpose());
    let mut pi = quotient_projection(&deg_star)?;
    pi.codomain = N_QUOT.into();
    let section = integral_section(&pi)?.matrix.to_rat();
    let linv = left_inverse(&deg_star)?;
    let kb = kernel_basis(&pi).matrix.to_rat();
    let n_tilde_basis = linv.mul(&kb)?;
    let ones = vec![Rat::one(); l];
    let ds = deg_star.matrix.to_rat();
    let degree_element = ds
        .solve(&ones)
        .filter(|e| ds.apply(e).map(|v| v == ones).unwrap_or(false));
    let ineqs: Vec<Halfspace> = (0..l)
        .map(|v| Halfspace::new(deg_star.matrix.row(v).to_vec(), Rat::zero()))
        .collect();
    let sigma = Polyhedron::from_hrep(N_TILDE, r, &ineqs, &[])?;
    debug_assert_eq!(l, ds.rows());
    Ok(WeightSetup {
        deg,
        deg_star,
        pi,
        section,
        left_inverse: linv,
        n_tilde_basis,
        degree_element,
        sigma,
    })
}

impl WeightSetup {
    pub fn orthant_rank(&self) -> usize {
        self.deg.domain_rank()
    }

    pub fn rank(&self) -> usize {
        self.deg.codomain_rank()
    }

    pub fn quotient_rank(&self) -> usize {
        self.pi.codomain_rank()
    }

    /// Weight of coordinate `v`, i.e. `E_v` acting on `N~`.
    pub fn weight(&self, v: usize) -> Vec<Rat> {
        to_rats(self.deg_star.matrix.row(v))
    }

    /// Replaces the section; `pi ∘ s = id` is checked exactly.
    pub fn with_section(mut self, s: RatMatrix) -> Result<Self> {
        let id = self.pi.matrix.to_rat().mul(&s)?;
        if id != RatMatrix::identity(self.quotient_rank()) {
            return Err(Error::InvalidArgument("not a section of pi".into()));
        }
        self.section = s;
        Ok(self)
    }

    /// `s(c)`.
    pub fn shift(&self, c: &[Int]) -> Result<Vec<Rat>> {
        self.section.apply(&to_rats(c))
    }

    /// `deg*(y)` for `y` in `Q^r`.
    pub fn embed(&self, y: &[Rat]) -> Result<Vec<Rat>> {
        self.deg_star.matrix.to_rat().apply(y)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "deg": int_matrix_value(&self.deg.matrix),
            "deg_star": int_matrix_value(&self.deg_star.matrix),
            "pi": int_matrix_value(&self.pi.matrix),
            "section": rat_matrix_value(&self.section),
            "n_tilde_basis": rat_matrix_value(&self.n_tilde_basis),
            "degree_element": self.degree_element.as_deref().map(rat_vec_value),
            "sigma": self.sigma.to_json(),
        })
    }
}

/// The section `(I - deg*·t)·s0` induced by a rational retraction `t` of `deg*`.
/// With it, `Δ(c) = t(fiber(c))`.
pub fn section_from_retraction(setup: &WeightSetup, t: &RatMatrix) -> Result<RatMatrix> {
    if !check_retraction(t, &setup.deg_star) {
        return Err(Error::InvalidArgument("t is not a retraction of deg*".into()));
    }
    let l = setup.orthant_rank();
    let dt = setup.deg_star.matrix.to_rat().mul(t)?;
    let mut proj = RatMatrix::identity(l);
    for i in 0..l {
        for j in 0..l {
            proj.set(i, j, proj.get(i, j) - dt.get(i, j));
        }
    }
    proj.mul(&setup.section)
}

/// `Δ(c) = deg*^{-1}(fiber(c) - s(c))`; the fiber is taken over `c` itself.
pub fn fiber_coefficient(setup: &WeightSetup, c: &[Int]) -> Result<Polyhedron> {
    let f = fiber_polyhedron(&setup.pi, c)?;
    if f.is_empty() {
        return Err(Error::Inconsistent(format!(
            "empty fiber over {:?}",
            c.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    let s: Vec<Rat> = setup.shift(c)?.into_iter().map(|x| -x).collect();
    f.translate(&s)?.linear_image(&setup.left_inverse, N_TILDE)
}

/// A pp-divisor from the recipe, remembering the ray behind each label.
#[derive(Clone, Debug)]
pub struct RecipeDivisor {
    pub divisor: PPDivisor,
    pub rays: Vec<(DivisorLabel, Vec<Int>)>,
}

impl RecipeDivisor {
    pub fn ray(&self, label: &DivisorLabel) -> Option<&[Int]> {
        self.rays
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c.as_slice())
    }
}

fn ray_label(c: &[Int]) -> DivisorLabel {
    if gcd_all(c).is_one() {
        DivisorLabel::ToricRay(c.to_vec())
    } else {
        DivisorLabel::named(format!(
            "c({})",
            c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        ))
    }
}

/// Rays of the chamber fan of `pi`, or an explicit list used as given.
pub fn default_rays(setup: &WeightSetup, max_orthant_rank: usize) -> Result<Vec<Vec<Int>>> {
    Ok(common_refinement_fan(&setup.pi, max_orthant_rank)?.rays())
}

/// One coefficient per ray; labels are the rays themselves.
pub fn pp_from_weights(setup: &WeightSetup, rays: Option<&[Vec<Int>]>) -> Result<RecipeDivisor> {
    let rays = match rays {
        Some(r) => r.to_vec(),
        None => default_rays(setup, DEFAULT_MAX_ORTHANT_RANK)?,
    };
    let labeled: Vec<(DivisorLabel, Vec<Int>)> =
        rays.into_iter().map(|c| (ray_label(&c), c)).collect();
    pp_from_labeled_rays(setup, labeled)
}

pub fn pp_from_labeled_rays(
    setup: &WeightSetup,
    rays: Vec<(DivisorLabel, Vec<Int>)>,
) -> Result<RecipeDivisor> {
    if rays.is_empty() {
        return Err(Error::EmptyInput);
    }
    let coeffs: Vec<Polyhedron> = rays
        .par_iter()
        .map(|(_, c)| fiber_coefficient(setup, c))
        .collect::<Result<_>>()?;
    let terms = rays
        .iter()
        .zip(coeffs)
        .map(|((l, _), p)| (l.clone(), p))
        .collect();
    Ok(RecipeDivisor {
        divisor: PPDivisor::new(setup.sigma.clone(), terms)?,
        rays,
    })
}

/// `∂_v Δ`: the face minimizing `E_v` if `min⟨Δ + s(c), E_v⟩ = 0`, else `∅`.
pub fn boundary_face(setup: &WeightSetup, delta: &Polyhedron, c: &[Int], v: usize) -> Result<Polyhedron> {
    if delta.is_empty() {
        return Ok(delta.clone());
    }
    let w = setup.weight(v);
    let shift = setup.shift(c)?[v].clone();
    match delta.min_value(&w)? {
        Bound::Finite(m) => {
            let level = m + shift;
            if level.is_zero() {
                match delta.face_minimizing(&w)? {
                    MinFace::Face(f) => Ok(f),
                    MinFace::UnboundedBelow => unreachable!("finite minimum"),
                }
            } else if level.is_positive() {
                Ok(Polyhedron::empty(delta.ambient(), delta.ambient_dim()))
            } else {
                Err(Error::Inconsistent(format!(
                    "coordinate {v} is negative on the fiber"
                )))
            }
        }
        _ => Err(Error::Inconsistent(format!(
            "weight {v} is unbounded below on a coefficient"
        ))),
    }
}

/// Quotient `N~ -> N~/<e>` as a rational matrix on `Q^r`, integral on `N~`.
pub fn default_projection(setup: &WeightSetup) -> Result<RatMatrix> {
    let e = setup.degree_element.as_ref().ok_or(Error::NoDegreeElement)?;
    let binv = setup
        .n_tilde_basis
        .inverse()
        .ok_or_else(|| Error::Inconsistent("N~ basis is singular".into()))?;
    let e_hat = binv.apply(e)?;
    if e_hat.iter().any(|x| !x.is_integer()) {
        return Err(Error::Inconsistent("degree element is not in N~".into()));
    }
    let e_int: Vec<Int> = e_hat.iter().map(|x| x.to_integer()).collect();
    let col = LatticeMap::new("Z", "N~", IntMatrix::from_cols(&[e_int], setup.rank())?);
    let q = quotient_projection(&col)?;
    q.matrix.to_rat().mul(&binv)
}

/// Cells `Σ_i p(∂_v Δ_i) ⊗ D_i`, one per coordinate `v`, with tail `p(face(σ, E_v))`.
/// Cells whose coefficients are all empty are dropped. `names[v]` names cell `v`.
pub fn projectivize_with(
    setup: &WeightSetup,
    d: &RecipeDivisor,
    p: &RatMatrix,
    names: &[String],
) -> Result<FansyDivisor> {
    let l = setup.orthant_rank();
    if names.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            found: names.len(),
        });
    }
    if setup.degree_element.is_none() {
        return Err(Error::NoDegreeElement);
    }
    let cells: Vec<Option<(String, PPDivisor)>> = (0..l)
        .into_par_iter()
        .map(|v| -> Result<Option<(String, PPDivisor)>> {
            let w = setup.weight(v);
            let tail_face = match setup.sigma.face_minimizing(&w)? {
                MinFace::Face(f) => f,
                MinFace::UnboundedBelow => {
                    return Err(Error::Inconsistent("weight negative on sigma".into()))
                }
            };
            let tail = tail_face.linear_image(p, N_PROJ)?;
            let mut terms = Vec::new();
            for t in d.divisor.terms() {
                let c = d
                    .ray(&t.label)
                    .ok_or_else(|| Error::LabelAbsent(t.label.to_string()))?;
                let face = boundary_face(setup, &t.coefficient, c, v)?;
                terms.push((t.label.clone(), face.linear_image(p, N_PROJ)?));
            }
            if terms.iter().all(|(_, q)| q.is_empty()) {
                return Ok(None);
            }
            Ok(Some((names[v].clone(), PPDivisor::new(tail, terms)?)))
        })
        .collect::<Result<_>>()?;
    FansyDivisor::new(cells.into_iter().flatten().collect())
}

pub fn projectivize(setup: &WeightSetup, d: &RecipeDivisor) -> Result<FansyDivisor> {
    let p = default_projection(setup)?;
    let l = setup.orthant_rank();
    let width = (l.max(1) - 1).to_string().len();
    let names: Vec<String> = (0..l).map(|v| format!("v{v:0width$}")).collect();
    projectivize_with(setup, d, &p, &names)
}

/// Translation taking the recipe output for section `s` to the one for `s2`
/// at ray `c`: `deg*^{-1}((s - s2)(c))`.
pub fn section_change(setup: &WeightSetup, s: &RatMatrix, s2: &RatMatrix, c: &[Int]) -> Result<Vec<Rat>> {
    let cr = to_rats(c);
    let diff = sub_rat(&s.apply(&cr)?, &s2.apply(&cr)?);
    let y = setup.left_inverse.apply(&diff)?;
    debug_assert!(is_zero_vec(&sub_rat(&setup.embed(&y)?, &diff)));
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rats};

    fn example(a: i64, b: i64) -> IntMatrix {
        IntMatrix::from_i64(&[&[a, b, 0], &[1, 1, 1]])
    }

    fn bezout_section(big_a: i64, big_b: i64) -> RatMatrix {
        RatMatrix::from_rows(&[rats(&[-big_b]), rats(&[-big_a]), rats(&[0])], 1).unwrap()
    }

    #[test]
    fn identity_degenerates() {
        let s = build_setup(&IntMatrix::identity(2)).unwrap();
        assert_eq!(s.quotient_rank(), 0);
        assert_eq!(default_rays(&s, 16).unwrap(), Vec::<Vec<Int>>::new());
    }

    #[test]
    fn example_setup() {
        let s = build_setup(&example(2, 1)).unwrap();
        assert_eq!(s.pi.matrix, IntMatrix::from_i64(&[&[1, -2, 1]]));
        assert_eq!(s.degree_element, Some(rats(&[0, 1])));
        let sigma = Polyhedron::cone(N_TILDE, 2, &[ints(&[1, 0]), ints(&[-1, 2])], &[]).unwrap();
        assert_eq!(s.sigma, sigma);
    }

    #[test]
    fn example_pp_divisor() {
        let s = build_setup(&example(2, 1)).unwrap().with_section(bezout_section(1, 1)).unwrap();
        let d = pp_from_weights(&s, None).unwrap();
        let d0 = d.divisor.coefficient(&DivisorLabel::ToricRay(ints(&[1]))).unwrap();
        let dinf = d.divisor.coefficient(&DivisorLabel::ToricRay(ints(&[-1]))).unwrap();
        assert_eq!(d0.vertices(), &[rats(&[0, 1]), rats(&[1, 0])]);
        assert_eq!(dinf.vertices(), &[vec![rat(-1, 2), rat(0, 1)]]);
        assert_eq!(d.divisor.tail(), &s.sigma);
    }

    #[test]
    fn example_boundary_faces() {
        let s = build_setup(&example(2, 1)).unwrap().with_section(bezout_section(1, 1)).unwrap();
        let d = pp_from_weights(&s, None).unwrap();
        let inf = DivisorLabel::ToricRay(ints(&[-1]));
        let zero = DivisorLabel::ToricRay(ints(&[1]));
        let dinf = d.divisor.coefficient(&inf).unwrap();
        assert!(boundary_face(&s, dinf, &ints(&[-1]), 1).unwrap().is_empty());
        let d0 = d.divisor.coefficient(&zero).unwrap();
        let f = boundary_face(&s, d0, &ints(&[1]), 0).unwrap();
        let expect = Polyhedron::from_vrep(N_TILDE, 2, &[rats(&[0, 1])], &[rats(&[-1, 2])], &[]).unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn example_projectivization() {
        let s = build_setup(&example(2, 1)).unwrap().with_section(bezout_section(1, 1)).unwrap();
        let p = default_projection(&s).unwrap();
        assert_eq!(p, RatMatrix::from_rows(&[rats(&[1, 0])], 2).unwrap());
        let d = pp_from_weights(&s, None).unwrap();
        let f = projectivize(&s, &d).unwrap();
        assert_eq!(f.cells().len(), 3);
        let zero = DivisorLabel::ToricRay(ints(&[1]));
        let inf = DivisorLabel::ToricRay(ints(&[-1]));
        let half = |x: Rat, dir: i64| {
            Polyhedron::from_vrep(N_PROJ, 1, &[vec![x]], &[rats(&[dir])], &[]).unwrap()
        };
        let seg = Polyhedron::from_vrep(N_PROJ, 1, &[rats(&[0]), rats(&[1])], &[], &[]).unwrap();
        let c0 = f.cell("v0").unwrap();
        assert_eq!(c0.coefficient(&zero), Some(&half(rat(0, 1), -1)));
        assert_eq!(c0.coefficient(&inf), Some(&half(rat(-1, 2), -1)));
        let c1 = f.cell("v1").unwrap();
        assert_eq!(c1.coefficient(&zero), Some(&seg));
        assert!(c1.coefficient(&inf).unwrap().is_empty());
        let c2 = f.cell("v2").unwrap();
        assert_eq!(c2.coefficient(&zero), Some(&half(rat(1, 1), 1)));
        assert_eq!(c2.coefficient(&inf), Some(&half(rat(-1, 2), 1)));
        assert!(crate::divisor::check_subdivision_structure(&f).pass);
    }

    #[test]
    fn sections_differ_by_translation() {
        let base = build_setup(&example(3, 2)).unwrap();
        let s1 = base.section.clone();
        let other = base.clone().with_section(bezout_section(1, 1)).unwrap();
        let d1 = pp_from_weights(&base, None).unwrap();
        let d2 = pp_from_weights(&other, None).unwrap();
        let mut moved = d1.divisor.clone();
        for (label, c) in &d1.rays {
            let t = section_change(&base, &s1, &other.section, c).unwrap();
            moved = moved.translate_coefficient(label, &t).unwrap();
        }
        assert_eq!(moved, d2.divisor);
    }

    #[test]
    fn retraction_section_gives_image_of_fiber() {
        let base = build_setup(&example(2, 1)).unwrap();
        // t = left inverse is a retraction
        let t = base.left_inverse.clone();
        let s = section_from_retraction(&base, &t).unwrap();
        let setup = base.clone().with_section(s).unwrap();
        let c = ints(&[1]);
        let lhs = fiber_coefficient(&setup, &c).unwrap();
        let rhs = fiber_polyhedron(&setup.pi, &c).unwrap().linear_image(&t, N_TILDE).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn repeated_weights_share_cells() {
        let setup = build_setup(&IntMatrix::from_i64(&[&[1, 0, 0, -1], &[1, 1, 1, 1]])).unwrap();
        let d = pp_from_weights(&setup, None).unwrap();
        let f = projectivize(&setup, &d).unwrap();
        let report = crate::divisor::check_subdivision_structure(&f);
        assert!(report.pass, "{:?}", report.findings);
        // coordinates 1 and 2 carry the same weight, so one coefficient is shared
        let shared = f
            .labels()
            .iter()
            .flat_map(|l| f.subdivision(l).cells().iter().map(|c| c.label.clone()).collect::<Vec<_>>())
            .filter(|name| name.contains('+'))
            .count();
        assert_eq!(shared, 1);
    }
}
