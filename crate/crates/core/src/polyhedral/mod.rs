//! Exact rational polyhedra, fans and subdivisions.

mod complex;
mod dd;
mod polyhedron;
mod refinement;

pub use complex::{coverage_defects, face_to_face_defects, Cell, Defect, Fan, Subdivision, Support};
pub use polyhedron::{Bound, Cone, Halfspace, MinFace, Polyhedron};
pub use refinement::{common_refinement_fan, induced_subdivision, DEFAULT_MAX_ORTHANT_RANK};
pub use refinement::subsets;

use num_traits::Zero;

use crate::arith::{to_rats, Int, Rat};
use crate::error::Result;
use crate::lattice::LatticeMap;

/// `{x in Q^l : pi(x) = c, x >= 0}`, unshifted.
pub fn fiber_polyhedron(pi: &LatticeMap, c: &[Int]) -> Result<Polyhedron> {
    let l = pi.domain_rank();
    if c.len() != pi.codomain_rank() {
        return Err(crate::error::Error::DimensionMismatch {
            expected: pi.codomain_rank(),
            found: c.len(),
        });
    }
    let ineqs: Vec<Halfspace> = (0..l)
        .map(|i| {
            let mut n = vec![Int::zero(); l];
            n[i] = Int::from(1);
            Halfspace::new(n, Rat::zero())
        })
        .collect();
    let eqs: Vec<Halfspace> = (0..pi.codomain_rank())
        .map(|i| Halfspace::new(pi.matrix.row(i).to_vec(), to_rats(c)[i].clone()))
        .collect();
    Polyhedron::from_hrep(pi.domain.clone(), l, &ineqs, &eqs)
}
