use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::dd::cone_generators;
use crate::arith::{add_rat, dot_int_rat, dot_rat, integerize, is_zero_vec, to_rats, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{left_kernel, hnf_basis, IntMatrix, RatMatrix};

/// `normal · x >= offset`, or `normal · x = offset` when used as an equation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "crate::json::int_vec")]
    pub normal: Vec<Int>,
    #[serde(with = "crate::json::rat")]
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Int>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    pub fn from_i64(normal: &[i64], offset: i64) -> Self {
        Halfspace::new(
            normal.iter().map(|&x| Int::from(x)).collect(),
            Rat::from_integer(Int::from(offset)),
        )
    }

    /// Rescales a rational form by a positive factor to a primitive integer normal.
    pub fn from_rat(normal: &[Rat], offset: &Rat) -> Self {
        let n = integerize(normal);
        let idx = normal.iter().position(|x| !x.is_zero());
        let offset = match idx {
            Some(i) => offset * Rat::from_integer(n[i].clone()) / &normal[i],
            None => offset.clone(),
        };
        Halfspace { normal: n, offset }
    }

    /// `normal · x - offset`.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot_int_rat(&self.normal, x) - &self.offset
    }

    fn homogenized(&self) -> Vec<Int> {
        let mut row = vec![-self.offset.clone()];
        row.extend(to_rats(&self.normal));
        integerize(&row)
    }
}

/// Minimum (or maximum) of a linear form over a nonempty polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(Rat),
    NegInfinity,
    PosInfinity,
}

/// Face of minimizers, or the signal that the form is unbounded below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinFace {
    Face(Polyhedron),
    UnboundedBelow,
}

impl MinFace {
    pub fn face(self) -> Option<Polyhedron> {
        match self {
            MinFace::Face(p) => Some(p),
            MinFace::UnboundedBelow => None,
        }
    }
}

/// Exact rational polyhedron in canonical double description.
///
/// Vertices are representatives of the minimal faces reduced modulo the
/// lineality space; rays are primitive and reduced the same way; facet
/// normals are primitive and reduced modulo the equations. All lists are
/// sorted, so derived equality is set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyhedron {
    ambient: String,
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Int>>,
    lineality: Vec<Vec<Int>>,
    equations: Vec<Halfspace>,
    facets: Vec<Halfspace>,
}

/// Cones are polyhedra whose only vertex is the origin.
pub type Cone = Polyhedron;

struct VRep {
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Int>>,
    lineality: Vec<Vec<Int>>,
}

struct HRep {
    equations: Vec<Vec<Int>>,
    facets: Vec<Vec<Int>>,
}

fn primal(dim: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> Option<VRep> {
    let mut iq = Vec::with_capacity(ineqs.len() + 1);
    let mut e0 = vec![Int::zero(); dim + 1];
    e0[0] = Int::one();
    iq.push(e0);
    iq.extend(ineqs.iter().cloned());
    let out = cone_generators(dim + 1, &iq, eqs);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in out.rays {
        if r[0].is_zero() {
            rays.push(r[1..].to_vec());
        } else {
            let d = Rat::from_integer(r[0].clone());
            vertices.push(r[1..].iter().map(|x| Rat::from_integer(x.clone()) / &d).collect());
        }
    }
    if vertices.is_empty() {
        return None;
    }
    let lineality = out.lineality.into_iter().map(|l| l[1..].to_vec()).collect();
    Some(VRep {
        vertices,
        rays,
        lineality,
    })
}

fn dual(dim: usize, v: &VRep) -> HRep {
    let mut iq = Vec::new();
    for p in &v.vertices {
        let mut row = vec![Rat::one()];
        row.extend(p.iter().cloned());
        iq.push(integerize(&row));
    }
    for r in &v.rays {
        let mut row = vec![Int::zero()];
        row.extend(r.iter().cloned());
        iq.push(row);
    }
    let eqs: Vec<Vec<Int>> = v
        .lineality
        .iter()
        .map(|l| {
            let mut row = vec![Int::zero()];
            row.extend(l.iter().cloned());
            row
        })
        .collect();
    let out = cone_generators(dim + 1, &iq, &eqs);
    // drop the face at infinity: no vertex is tight on it
    let facets = out
        .rays
        .into_iter()
        .filter(|y| {
            v.vertices.iter().any(|p| {
                let val = Rat::from_integer(y[0].clone()) + dot_int_rat(&y[1..], p);
                val.is_zero()
            })
        })
        .collect();
    HRep {
        equations: out.lineality,
        facets,
    }
}

impl Polyhedron {
    pub fn empty(ambient: impl Into<String>, dim: usize) -> Self {
        Polyhedron {
            ambient: ambient.into(),
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
            equations: Vec::new(),
            facets: vec![Halfspace::new(vec![Int::zero(); dim], Rat::one())],
        }
    }

    pub fn whole_space(ambient: impl Into<String>, dim: usize) -> Self {
        let lin: Vec<Vec<Int>> = IntMatrix::identity(dim).row_vecs();
        Self::cone(ambient, dim, &[], &lin).expect("identity rows have ambient length")
    }

    pub fn point(ambient: impl Into<String>, p: &[Rat]) -> Self {
        Self::from_vrep(ambient, p.len(), &[p.to_vec()], &[], &[]).expect("consistent point")
    }

    pub fn cone(
        ambient: impl Into<String>,
        dim: usize,
        rays: &[Vec<Int>],
        lineality: &[Vec<Int>],
    ) -> Result<Self> {
        let rays: Vec<Vec<Rat>> = rays.iter().map(|r| to_rats(r)).collect();
        let lin: Vec<Vec<Rat>> = lineality.iter().map(|r| to_rats(r)).collect();
        Self::from_vrep(ambient, dim, &[vec![Rat::zero(); dim]], &rays, &lin)
    }

    /// `{x : a·x >= b for ineqs, a·x = b for eqs}`.
    pub fn from_hrep(
        ambient: impl Into<String>,
        dim: usize,
        ineqs: &[Halfspace],
        eqs: &[Halfspace],
    ) -> Result<Self> {
        for h in ineqs.iter().chain(eqs) {
            check_len(dim, h.normal.len())?;
        }
        let iq: Vec<Vec<Int>> = ineqs.iter().map(Halfspace::homogenized).collect();
        let eq: Vec<Vec<Int>> = eqs.iter().map(Halfspace::homogenized).collect();
        let ambient = ambient.into();
        let Some(v) = primal(dim, &iq, &eq) else {
            return Ok(Self::empty(ambient, dim));
        };
        let h = dual(dim, &v);
        Ok(Self::canonical(ambient, dim, v, h))
    }

    /// `conv(vertices) + cone(rays) + span(lineality)`; no vertices means empty.
    pub fn from_vrep(
        ambient: impl Into<String>,
        dim: usize,
        vertices: &[Vec<Rat>],
        rays: &[Vec<Rat>],
        lineality: &[Vec<Rat>],
    ) -> Result<Self> {
        for g in vertices.iter().chain(rays).chain(lineality) {
            check_len(dim, g.len())?;
        }
        let ambient = ambient.into();
        if vertices.is_empty() {
            return Ok(Self::empty(ambient, dim));
        }
        let input = VRep {
            vertices: vertices.to_vec(),
            rays: rays
                .iter()
                .filter(|r| !is_zero_vec(r))
                .map(|r| integerize(r))
                .collect(),
            lineality: lineality
                .iter()
                .filter(|r| !is_zero_vec(r))
                .map(|r| integerize(r))
                .collect(),
        };
        let h = dual(dim, &input);
        let v = primal(dim, &h.facets, &h.equations).expect("nonempty by construction");
        Ok(Self::canonical(ambient, dim, v, h))
    }

    fn canonical(ambient: String, dim: usize, v: VRep, h: HRep) -> Self {
        // saturated lineality lattice in HNF
        let lineality = if v.lineality.is_empty() {
            Vec::new()
        } else {
            let a = IntMatrix::from_rows(&v.lineality, dim).expect("lineality length");
            let perp = left_kernel(&a.transpose());
            let sat = if perp.is_empty() {
                IntMatrix::identity(dim).row_vecs()
            } else {
                left_kernel(&IntMatrix::from_rows(&perp, dim).expect("len").transpose())
            };
            hnf_basis(&sat, dim)
        };
        let lin_rref = rref_rows(&lineality.iter().map(|r| to_rats(r)).collect::<Vec<_>>(), dim);

        let mut vertices: Vec<Vec<Rat>> =
            v.vertices.iter().map(|p| reduce(p, &lin_rref)).collect();
        vertices.sort();
        vertices.dedup();

        let mut rays: Vec<Vec<Int>> = v
            .rays
            .iter()
            .map(|r| reduce(&to_rats(r), &lin_rref))
            .filter(|r| !is_zero_vec(r))
            .map(|r| integerize(&r))
            .collect();
        rays.sort();
        rays.dedup();

        // equations: RREF with the constant column moved last
        let eq_rows: Vec<Vec<Rat>> = h
            .equations
            .iter()
            .map(|y| {
                let mut r = to_rats(&y[1..]);
                r.push(Rat::from_integer(y[0].clone()));
                r
            })
            .collect();
        let eq_rref = rref_rows(&eq_rows, dim + 1);
        let equations: Vec<Halfspace> = eq_rref
            .iter()
            .map(|(row, _)| Halfspace::from_rat(&row[..dim], &-row[dim].clone()))
            .collect();

        let mut facets: Vec<Halfspace> = h
            .facets
            .iter()
            .map(|y| {
                let mut r = to_rats(&y[1..]);
                r.push(Rat::from_integer(y[0].clone()));
                let r = reduce(&r, &eq_rref);
                Halfspace::from_rat(&r[..dim], &-r[dim].clone())
            })
            .collect();
        facets.sort();
        facets.dedup();

        Polyhedron {
            ambient,
            dim,
            vertices,
            rays,
            lineality,
            equations,
            facets,
        }
    }

    pub fn ambient(&self) -> &str {
        &self.ambient
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<Int>] {
        &self.lineality
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; `None` for the empty set.
    pub fn dimension(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.dim - self.equations.len())
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.is_empty() && self.equations.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Relabels the ambient lattice without touching coordinates.
    pub fn with_ambient(mut self, ambient: impl Into<String>) -> Self {
        self.ambient = ambient.into();
        self
    }

    fn rat_rays(&self) -> Vec<Vec<Rat>> {
        self.rays.iter().map(|r| to_rats(r)).collect()
    }

    fn rat_lineality(&self) -> Vec<Vec<Rat>> {
        self.lineality.iter().map(|r| to_rats(r)).collect()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.equations.iter().all(|h| h.slack(x).is_zero())
            && self.facets.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        self.contains(x) && self.facets.iter().all(|h| h.slack(x).is_positive())
    }

    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        if self.is_empty() {
            return true;
        }
        if self.dim != other.dim || other.is_empty() {
            return false;
        }
        let dir_ok = |d: &[Int], strict: bool| {
            let dr = to_rats(d);
            other.equations.iter().all(|h| dot_int_rat(&h.normal, &dr).is_zero())
                && other.facets.iter().all(|h| {
                    let v = dot_int_rat(&h.normal, &dr);
                    if strict {
                        v.is_zero()
                    } else {
                        !v.is_negative()
                    }
                })
        };
        self.vertices.iter().all(|v| other.contains(v))
            && self.rays.iter().all(|r| dir_ok(r, false))
            && self.lineality.iter().all(|l| dir_ok(l, true))
    }

    /// Average of the vertices plus the sum of the rays.
    pub fn relative_interior_point(&self) -> Option<Vec<Rat>> {
        if self.is_empty() {
            return None;
        }
        let n = Rat::from_integer(Int::from(self.vertices.len()));
        let mut p = vec![Rat::zero(); self.dim];
        for v in &self.vertices {
            p = add_rat(&p, v);
        }
        p.iter_mut().for_each(|x| *x = &*x / &n);
        for r in &self.rays {
            p = add_rat(&p, &to_rats(r));
        }
        Some(p)
    }

    /// Recession cone; the empty polyhedron has an empty tail.
    pub fn tail_cone(&self) -> Cone {
        if self.is_empty() {
            return self.clone();
        }
        Self::cone(self.ambient.clone(), self.dim, &self.rays, &self.lineality)
            .expect("own generators")
    }

    fn same_space(&self, other: &Polyhedron) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::LatticeMismatch {
                left: self.ambient.clone(),
                right: other.ambient.clone(),
            });
        }
        check_len(self.dim, other.dim)
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        self.same_space(other)?;
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut verts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                verts.push(add_rat(a, b));
            }
        }
        let mut rays = self.rat_rays();
        rays.extend(other.rat_rays());
        let mut lin = self.rat_lineality();
        lin.extend(other.rat_lineality());
        Self::from_vrep(self.ambient.clone(), self.dim, &verts, &rays, &lin)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        self.same_space(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.ambient.clone(), self.dim));
        }
        let mut iq = self.facets.clone();
        iq.extend(other.facets.iter().cloned());
        let mut eq = self.equations.clone();
        eq.extend(other.equations.iter().cloned());
        Self::from_hrep(self.ambient.clone(), self.dim, &iq, &eq)
    }

    /// Image under `f` (a `target_dim x dim` matrix), in lattice `target`.
    pub fn linear_image(&self, f: &RatMatrix, target: impl Into<String>) -> Result<Polyhedron> {
        check_len(self.dim, f.cols())?;
        let target = target.into();
        if self.is_empty() {
            return Ok(Self::empty(target, f.rows()));
        }
        let img = |vs: &[Vec<Rat>]| -> Result<Vec<Vec<Rat>>> {
            vs.iter().map(|v| f.apply(v)).collect()
        };
        Self::from_vrep(
            target,
            f.rows(),
            &img(&self.vertices)?,
            &img(&self.rat_rays())?,
            &img(&self.rat_lineality())?,
        )
    }

    pub fn translate(&self, t: &[Rat]) -> Result<Polyhedron> {
        check_len(self.dim, t.len())?;
        if self.is_empty() {
            return Ok(self.clone());
        }
        let verts: Vec<Vec<Rat>> = self.vertices.iter().map(|v| add_rat(v, t)).collect();
        Self::from_vrep(
            self.ambient.clone(),
            self.dim,
            &verts,
            &self.rat_rays(),
            &self.rat_lineality(),
        )
    }

    /// `λ·P` for `λ > 0`.
    pub fn scale(&self, lambda: &Rat) -> Result<Polyhedron> {
        if !lambda.is_positive() {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let m = RatMatrix::identity(self.dim).map(|x| x * lambda);
        self.linear_image(&m, self.ambient.clone())
    }

    fn unbounded_below(&self, u: &[Rat]) -> bool {
        self.rays.iter().any(|r| dot_int_rat(r, u).is_negative())
            || self.lineality.iter().any(|l| !dot_int_rat(l, u).is_zero())
    }

    pub fn min_value(&self, u: &[Rat]) -> Result<Bound> {
        check_len(self.dim, u.len())?;
        if self.is_empty() {
            return Err(Error::EmptyInput);
        }
        if self.unbounded_below(u) {
            return Ok(Bound::NegInfinity);
        }
        let m = self
            .vertices
            .iter()
            .map(|v| dot_rat(u, v))
            .min()
            .expect("nonempty");
        Ok(Bound::Finite(m))
    }

    pub fn max_value(&self, u: &[Rat]) -> Result<Bound> {
        let neg: Vec<Rat> = u.iter().map(|x| -x.clone()).collect();
        Ok(match self.min_value(&neg)? {
            Bound::Finite(m) => Bound::Finite(-m),
            _ => Bound::PosInfinity,
        })
    }

    pub fn face_minimizing(&self, u: &[Rat]) -> Result<MinFace> {
        let Bound::Finite(m) = self.min_value(u)? else {
            return Ok(MinFace::UnboundedBelow);
        };
        let verts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .filter(|v| dot_rat(u, v) == m)
            .cloned()
            .collect();
        let rays: Vec<Vec<Rat>> = self
            .rat_rays()
            .into_iter()
            .filter(|r| dot_rat(u, r).is_zero())
            .collect();
        let face = Self::from_vrep(
            self.ambient.clone(),
            self.dim,
            &verts,
            &rays,
            &self.rat_lineality(),
        )?;
        Ok(MinFace::Face(face))
    }

    pub fn face_maximizing(&self, u: &[Rat]) -> Result<MinFace> {
        let neg: Vec<Rat> = u.iter().map(|x| -x.clone()).collect();
        self.face_minimizing(&neg)
    }

    /// Face cut out by the facets in `tight` (indices into [`Self::facets`]).
    fn face_of_facets(&self, tight: &[usize]) -> Polyhedron {
        let on = |h: &Halfspace, x: &[Rat], hom: bool| {
            let v = dot_int_rat(&h.normal, x);
            if hom {
                v.is_zero()
            } else {
                v == h.offset
            }
        };
        let verts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .filter(|v| tight.iter().all(|&i| on(&self.facets[i], v, false)))
            .cloned()
            .collect();
        let rays: Vec<Vec<Rat>> = self
            .rat_rays()
            .into_iter()
            .filter(|r| tight.iter().all(|&i| on(&self.facets[i], r, true)))
            .collect();
        Self::from_vrep(
            self.ambient.clone(),
            self.dim,
            &verts,
            &rays,
            &self.rat_lineality(),
        )
        .expect("own generators")
    }

    pub fn facet_faces(&self) -> Vec<Polyhedron> {
        if self.is_empty() {
            return Vec::new();
        }
        (0..self.facets.len()).map(|i| self.face_of_facets(&[i])).collect()
    }

    /// Smallest face containing `x`; `None` when `x` is outside.
    pub fn smallest_face_containing(&self, x: &[Rat]) -> Option<Polyhedron> {
        if !self.contains(x) {
            return None;
        }
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&i| self.facets[i].slack(x).is_zero())
            .collect();
        Some(self.face_of_facets(&tight))
    }

    /// Whether `self` is a (possibly empty or improper) face of `other`.
    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        if self.is_empty() {
            return true;
        }
        let p = self.relative_interior_point().expect("nonempty");
        match other.smallest_face_containing(&p) {
            Some(f) => &f == self,
            None => false,
        }
    }

    pub fn to_json(&self) -> Value {
        let rv = |v: &[Vec<Rat>]| -> Value {
            v.iter().map(|p| crate::json::rat_vec_value(p)).collect()
        };
        let iv = |v: &[Vec<Int>]| -> Value {
            v.iter().map(|p| crate::json::int_vec_value(p)).collect()
        };
        json!({
            "ambient": self.ambient,
            "dim": self.dim,
            "vertices": rv(&self.vertices),
            "rays": iv(&self.rays),
            "lineality": iv(&self.lineality),
            "halfspaces": serde_json::to_value(&self.facets).expect("serializable"),
            "equations": serde_json::to_value(&self.equations).expect("serializable"),
            "empty": self.is_empty(),
        })
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Nonzero RREF rows with their pivot columns.
fn rref_rows(rows: &[Vec<Rat>], cols: usize) -> Vec<(Vec<Rat>, usize)> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = RatMatrix::from_rows(rows, cols).expect("uniform rows");
    let (r, pivots) = m.rref();
    pivots
        .iter()
        .enumerate()
        .map(|(i, &p)| (r.row(i).to_vec(), p))
        .collect()
}

/// Zeroes the pivot coordinates using the RREF rows.
fn reduce(x: &[Rat], rref: &[(Vec<Rat>, usize)]) -> Vec<Rat> {
    let mut x = x.to_vec();
    for (row, p) in rref {
        if x[*p].is_zero() {
            continue;
        }
        let f = x[*p].clone();
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= &f * ri;
        }
    }
    x
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅[{}; {}]", self.ambient, self.dim);
        }
        let show = |v: &[Rat]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({})", show(v))?;
        }
        write!(f, "}}")?;
        if !self.rays.is_empty() {
            write!(f, " + cone{{")?;
            for (i, r) in self.rays.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "({})", show(&to_rats(r)))?;
            }
            write!(f, "}}")?;
        }
        if !self.lineality.is_empty() {
            write!(f, " + span{{")?;
            for (i, r) in self.lineality.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "({})", show(&to_rats(r)))?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl Serialize for Polyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[derive(Deserialize)]
struct PolyhedronWire {
    ambient: String,
    dim: Option<usize>,
    #[serde(with = "crate::json::rat_vecs", default)]
    vertices: Vec<Vec<Rat>>,
    #[serde(with = "crate::json::rat_vecs", default)]
    rays: Vec<Vec<Rat>>,
    #[serde(with = "crate::json::rat_vecs", default)]
    lineality: Vec<Vec<Rat>>,
    #[serde(default)]
    halfspaces: Vec<Halfspace>,
    #[serde(default)]
    equations: Vec<Halfspace>,
    #[serde(default)]
    empty: bool,
}

impl<'de> Deserialize<'de> for Polyhedron {
    /// Rebuilt from the V-rep when vertices are given, else from the H-rep.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = PolyhedronWire::deserialize(d)?;
        let dim = w
            .dim
            .or_else(|| w.vertices.first().map(Vec::len))
            .or_else(|| w.halfspaces.first().map(|h| h.normal.len()))
            .or_else(|| w.equations.first().map(|h| h.normal.len()))
            .ok_or_else(|| D::Error::custom("cannot infer ambient dimension"))?;
        if w.empty {
            return Ok(Polyhedron::empty(w.ambient, dim));
        }
        let p = if !w.vertices.is_empty() {
            Polyhedron::from_vrep(w.ambient, dim, &w.vertices, &w.rays, &w.lineality)
        } else {
            Polyhedron::from_hrep(w.ambient, dim, &w.halfspaces, &w.equations)
        };
        p.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rats};

    fn hs(n: &[i64], b: i64) -> Halfspace {
        Halfspace::from_i64(n, b)
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        rats(xs)
    }

    #[test]
    fn simplex_from_hrep() {
        let p = Polyhedron::from_hrep(
            "N",
            2,
            &[hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, -1], -1)],
            &[],
        )
        .unwrap();
        assert_eq!(p.vertices(), &[v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
        assert!(p.rays().is_empty());
        assert_eq!(p.facets().len(), 3);
        assert_eq!(p.dimension(), Some(2));
    }

    #[test]
    fn example_fiber_over_one() {
        let p = Polyhedron::from_hrep(
            "Z3",
            3,
            &[hs(&[1, 0, 0], 0), hs(&[0, 1, 0], 0), hs(&[0, 0, 1], 0)],
            &[hs(&[1, -2, 1], 1)],
        )
        .unwrap();
        assert_eq!(p.vertices(), &[v(&[0, 0, 1]), v(&[1, 0, 0])]);
        assert_eq!(p.rays(), &[ints(&[0, 1, 2]), ints(&[2, 1, 0])]);
        assert_eq!(p.equations().len(), 1);
    }

    #[test]
    fn inconsistent_is_empty() {
        let p = Polyhedron::from_hrep("Z", 1, &[hs(&[1], 1), hs(&[-1], 0)], &[]).unwrap();
        assert!(p.is_empty());
        assert_eq!(p, Polyhedron::empty("Z", 1));
        let q = Polyhedron::from_hrep("Z", 1, &[], &[hs(&[0], 1)]).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn vrep_roundtrip_with_redundancy() {
        let p = Polyhedron::from_vrep(
            "N",
            2,
            &[v(&[0, 0]), v(&[2, 0]), v(&[0, 2]), v(&[2, 2]), v(&[1, 1])],
            &[],
            &[],
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        let q = Polyhedron::from_hrep("N", 2, p.facets(), p.equations()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn lineality_is_reduced() {
        let a = Polyhedron::from_vrep("N", 2, &[v(&[3, 5])], &[], &[v(&[1, 1])]).unwrap();
        let b = Polyhedron::from_vrep("N", 2, &[v(&[0, 2])], &[], &[v(&[-2, -2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lineality(), &[ints(&[1, 1])]);
        assert!(a.contains(&v(&[10, 12])));
    }

    #[test]
    fn minkowski_gives_example_delta_zero() {
        let seg = Polyhedron::from_vrep("N", 2, &[v(&[0, 1]), v(&[1, 0])], &[], &[]).unwrap();
        let sigma = Polyhedron::cone("N", 2, &[ints(&[1, 0]), ints(&[-1, 2])], &[]).unwrap();
        let d0 = seg.minkowski_sum(&sigma).unwrap();
        // oracle: hand H-rep {2x+y >= 1, y >= 0, x + y >= 1... } via combined generators
        let direct = Polyhedron::from_vrep(
            "N",
            2,
            &[v(&[0, 1]), v(&[1, 0])],
            &[v(&[1, 0]), v(&[-1, 2])],
            &[],
        )
        .unwrap();
        assert_eq!(d0, direct);
        assert_eq!(d0.vertices(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(sigma.minkowski_sum(&sigma).unwrap(), sigma);
        let zero = Polyhedron::point("N", &v(&[0, 0]));
        assert_eq!(d0.minkowski_sum(&zero).unwrap(), d0);
    }

    #[test]
    fn faces_and_minima() {
        let sq = Polyhedron::from_vrep(
            "N",
            2,
            &[v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])],
            &[],
            &[],
        )
        .unwrap();
        let f = sq.face_minimizing(&v(&[1, 0])).unwrap().face().unwrap();
        assert_eq!(f.vertices(), &[v(&[0, 0]), v(&[0, 1])]);
        assert_eq!(sq.min_value(&v(&[1, 1])).unwrap(), Bound::Finite(rat(0, 1)));

        let delta_inf = Polyhedron::from_vrep(
            "N",
            2,
            &[vec![rat(-1, 2), rat(0, 1)]],
            &[v(&[1, 0]), v(&[-1, 2])],
            &[],
        )
        .unwrap();
        assert_eq!(
            delta_inf.min_value(&v(&[2, 1])).unwrap(),
            Bound::Finite(rat(-1, 1))
        );

        let half = Polyhedron::cone("N", 2, &[ints(&[1, 0])], &[]).unwrap();
        assert_eq!(
            half.face_minimizing(&v(&[-1, 0])).unwrap(),
            MinFace::UnboundedBelow
        );
        assert_eq!(half.min_value(&v(&[-1, 0])).unwrap(), Bound::NegInfinity);
    }

    #[test]
    fn intersection_and_faces() {
        let a = Polyhedron::from_vrep("Q", 1, &[v(&[0]), v(&[2])], &[], &[]).unwrap();
        let b = Polyhedron::from_vrep("Q", 1, &[v(&[1]), v(&[3])], &[], &[]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.vertices(), &[v(&[1]), v(&[2])]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        let p = Polyhedron::point("Q", &v(&[2]));
        assert!(p.is_face_of(&a));
        assert!(!Polyhedron::point("Q", &v(&[1])).is_face_of(&a));
        assert!(a.is_face_of(&a));
    }

    #[test]
    fn projection_of_boundary_face() {
        let face = Polyhedron::from_vrep("N", 2, &[v(&[0, 1])], &[v(&[-1, 2])], &[]).unwrap();
        let p = RatMatrix::from_rows(&[v(&[1, 0])], 2).unwrap();
        let img = face.linear_image(&p, "N'").unwrap();
        assert_eq!(img.vertices(), &[v(&[0])]);
        assert_eq!(img.rays(), &[ints(&[-1])]);
        let e = Polyhedron::empty("N", 2).linear_image(&p, "N'").unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let p = Polyhedron::from_vrep(
            "N",
            2,
            &[vec![rat(-1, 2), rat(0, 1)]],
            &[v(&[1, 0]), v(&[-1, 2])],
            &[],
        )
        .unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert!(js.contains("\"-1/2\""));
        let back: Polyhedron = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        let e: Polyhedron =
            serde_json::from_str(&serde_json::to_string(&Polyhedron::empty("N", 2)).unwrap())
                .unwrap();
        assert!(e.is_empty());
    }
}
