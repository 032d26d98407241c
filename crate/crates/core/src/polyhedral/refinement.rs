//! Chamber complexes of vector configurations and regular subdivisions.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::complex::{Fan, Subdivision, Support};
use super::polyhedron::{Bound, Halfspace, Polyhedron};
use crate::arith::{to_rats, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{left_kernel, IntMatrix, LatticeMap};

/// Default bound on the number of orthant coordinates.
pub const DEFAULT_MAX_ORTHANT_RANK: usize = 16;

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn sign_normalized(v: Vec<Int>) -> Vec<Int> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Coarsest common refinement of the images `pi(face)` of all faces of the
/// nonnegative orthant.
///
/// Maximal cones are the chambers: for a generic point `p`, the intersection
/// of all simplicial cones `cone(pi(e_j) : j in T)` containing `p`, with `T`
/// running over column bases. Each chamber is labeled by those bases; a face
/// image contains the chamber iff the face contains one of them.
pub fn common_refinement_fan(pi: &LatticeMap, max_orthant_rank: usize) -> Result<Fan> {
    let l = pi.domain_rank();
    let k = pi.codomain_rank();
    if l > max_orthant_rank {
        return Err(Error::GuardExceeded {
            what: "orthant rank",
            value: l,
            limit: max_orthant_rank,
        });
    }
    let ambient = pi.codomain.clone();
    let cols = pi.matrix.col_vecs();
    if k == 0 {
        return Ok(Fan::new(ambient, 0, vec![("{}".into(), Polyhedron::whole_space(pi.codomain.clone(), 0))]));
    }

    let mut walls: Vec<Vec<Int>> = Vec::new();
    for s in subsets(l, k - 1) {
        let gens: Vec<Vec<Int>> = s.iter().map(|&j| cols[j].clone()).collect();
        let m = IntMatrix::from_cols(&gens, k)?;
        if m.rank() != k - 1 {
            continue;
        }
        let normal = left_kernel(&m);
        if normal.len() == 1 {
            walls.push(sign_normalized(normal[0].clone()));
        }
    }
    walls.sort();
    walls.dedup();

    let mut cells = vec![Polyhedron::whole_space(ambient.clone(), k)];
    for w in &walls {
        let wr = to_rats(w);
        let neg: Vec<Int> = w.iter().map(|x| -x).collect();
        let mut next = Vec::with_capacity(cells.len() * 2);
        for c in cells {
            let lo = c.min_value(&wr)?;
            let hi = c.max_value(&wr)?;
            if lo == Bound::Finite(Rat::zero()) || hi == Bound::Finite(Rat::zero()) {
                next.push(c);
                continue;
            }
            for n in [w.clone(), neg.clone()] {
                let half = Halfspace::new(n, Rat::zero());
                let piece = c.intersect(&Polyhedron::from_hrep(ambient.clone(), k, &[half], &[])?)?;
                if piece.is_full_dimensional() {
                    next.push(piece);
                }
            }
        }
        cells = next;
    }

    let bases: Vec<(Vec<usize>, Polyhedron)> = subsets(l, k)
        .into_iter()
        .filter_map(|t| {
            let gens: Vec<Vec<Int>> = t.iter().map(|&j| cols[j].clone()).collect();
            let m = IntMatrix::from_cols(&gens, k).ok()?;
            if m.rank() != k {
                return None;
            }
            let cone = Polyhedron::cone(ambient.clone(), k, &gens, &[]).ok()?;
            Some((t, cone))
        })
        .collect();

    let chambers: Vec<Option<(Vec<Vec<usize>>, Polyhedron)>> = cells
        .par_iter()
        .map(|cell| {
            let p = cell.relative_interior_point().expect("cells are nonempty");
            let mut label = Vec::new();
            let mut acc: Option<Polyhedron> = None;
            for (t, cone) in &bases {
                if cone.contains(&p) {
                    label.push(t.clone());
                    acc = Some(match acc {
                        None => cone.clone(),
                        Some(a) => a.intersect(cone).expect("same space"),
                    });
                }
            }
            acc.map(|c| (label, c))
        })
        .collect();

    let mut found: Vec<(Vec<Vec<usize>>, Polyhedron)> = chambers.into_iter().flatten().collect();
    found.sort_by(|a, b| a.1.cmp(&b.1));
    found.dedup_by(|a, b| a.1 == b.1);
    let cones = found
        .into_iter()
        .map(|(label, c)| (format_bases(&label), c))
        .collect();
    Ok(Fan::new(ambient, k, cones))
}

fn format_bases(bases: &[Vec<usize>]) -> String {
    bases
        .iter()
        .map(|t| {
            let inner: Vec<String> = t.iter().map(ToString::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join("")
}

/// Regular subdivision of `conv(points)` cut out by the lower faces of the
/// lifted configuration `(p_i, h_i)`. Cells are labeled by the indices of the
/// points whose lifts lie on the lower face.
pub fn induced_subdivision(
    ambient: impl Into<String>,
    points: &[Vec<Rat>],
    heights: &[Rat],
) -> Result<Subdivision> {
    let ambient = ambient.into();
    if points.len() != heights.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: heights.len(),
        });
    }
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput);
    };
    let d = first.len();
    let lifted: Vec<Vec<Rat>> = points
        .iter()
        .zip(heights)
        .map(|(p, h)| {
            let mut q = p.clone();
            q.push(h.clone());
            q
        })
        .collect();
    let mut up = vec![Rat::zero(); d + 1];
    up[d] = Rat::from_integer(1.into());
    let lift = Polyhedron::from_vrep("lift", d + 1, &lifted, &[up], &[])?;
    let support = Polyhedron::from_vrep(ambient.clone(), d, points, &[], &[])?;

    let mut cells: Vec<(String, Polyhedron)> = Vec::new();
    for f in lift.facets() {
        if !f.normal[d].is_positive() {
            continue;
        }
        let idx: Vec<usize> = (0..points.len())
            .filter(|&i| f.slack(&lifted[i]).is_zero())
            .collect();
        let verts: Vec<Vec<Rat>> = idx.iter().map(|&i| points[i].clone()).collect();
        let cell = Polyhedron::from_vrep(ambient.clone(), d, &verts, &[], &[])?;
        let label = format!(
            "{{{}}}",
            idx.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        );
        cells.push((label, cell));
    }
    if cells.is_empty() {
        // lower-dimensional lift: the polytope itself is the only cell
        cells.push(("{all}".into(), support.clone()));
    }
    Ok(Subdivision::new(ambient, d, cells, Support::Polytope(support)))
}
