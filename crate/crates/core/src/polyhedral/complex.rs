//! Fans and subdivisions, and the checks that a list of labeled cells really
//! forms a polyhedral complex covering its declared support.

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::polyhedron::{Cone, Polyhedron};
use crate::arith::Rat;
use crate::json::{int_vec_value, rat_vec_value};

/// A labeled maximal cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub polyhedron: Polyhedron,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    WholeSpace,
    Polytope(Polyhedron),
}

/// Problem found while checking a complex, with a witness point if one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub message: String,
    pub witness: Option<Vec<Rat>>,
}

impl Defect {
    fn new(message: String, witness: Option<Vec<Rat>>) -> Self {
        Defect { message, witness }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "message": self.message,
            "witness": self.witness.as_deref().map(rat_vec_value),
        })
    }
}

/// Pairs of cells that do not meet in a common face.
pub fn face_to_face_defects(cells: &[Cell]) -> Vec<Defect> {
    let mut out = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            let Ok(meet) = a.polyhedron.intersect(&b.polyhedron) else {
                out.push(Defect::new(
                    format!("cells {} and {} live in different spaces", a.label, b.label),
                    None,
                ));
                continue;
            };
            if meet.is_empty() {
                continue;
            }
            let w = meet.relative_interior_point();
            if meet.dimension() == a.polyhedron.dimension()
                && meet.dimension() == b.polyhedron.dimension()
            {
                out.push(Defect::new(
                    format!("cells {} and {} overlap", a.label, b.label),
                    w,
                ));
            } else if !meet.is_face_of(&a.polyhedron) || !meet.is_face_of(&b.polyhedron) {
                out.push(Defect::new(
                    format!(
                        "cells {} and {} do not meet in a common face",
                        a.label, b.label
                    ),
                    w,
                ));
            }
        }
    }
    out
}

/// Coverage of the support: the maximal cells are pure of the support's
/// dimension, all cells lie inside it, and every facet of a maximal cell is
/// shared by exactly two maximal cells unless it lies on the boundary of a
/// polytope support. Non-maximal cells are left to [`face_to_face_defects`].
///
/// Together with [`face_to_face_defects`] this certifies that the union of the
/// cells is the support.
pub fn coverage_defects(cells: &[Cell], support: &Support) -> Vec<Defect> {
    let mut out = Vec::new();
    let Some(first) = cells.first() else {
        let empty_support = matches!(support, Support::Polytope(p) if p.is_empty());
        if !empty_support {
            out.push(Defect::new("no cells".into(), None));
        }
        return out;
    };
    let dim = first.polyhedron.ambient_dim();
    let target = match support {
        Support::WholeSpace => Some(dim),
        Support::Polytope(p) => p.dimension(),
    };
    let maximal: Vec<&Cell> = cells
        .iter()
        .filter(|c| {
            !cells
                .iter()
                .any(|d| d.polyhedron != c.polyhedron && c.polyhedron.is_subset_of(&d.polyhedron))
        })
        .collect();
    for c in &maximal {
        if c.polyhedron.dimension() != target {
            out.push(Defect::new(
                format!("cell {} is not of full dimension", c.label),
                c.polyhedron.relative_interior_point(),
            ));
        }
    }
    for c in cells {
        if let Support::Polytope(p) = support {
            if !c.polyhedron.is_subset_of(p) {
                out.push(Defect::new(
                    format!("cell {} leaves the support", c.label),
                    c.polyhedron.relative_interior_point(),
                ));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for c in &maximal {
        for facet in c.polyhedron.facet_faces() {
            let w = facet.relative_interior_point().expect("facets are nonempty");
            let count = maximal.iter().filter(|d| d.polyhedron.contains(&w)).count();
            let boundary = match support {
                Support::WholeSpace => false,
                Support::Polytope(p) => !p.contains_relint(&w),
            };
            let expected = if boundary { 1 } else { 2 };
            if count != expected {
                out.push(Defect::new(
                    format!(
                        "facet of cell {} is covered {} times, expected {}",
                        c.label, count, expected
                    ),
                    Some(w),
                ));
            }
        }
    }
    out
}

/// Labeled maximal cones; faces are implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient: String,
    dim: usize,
    cones: Vec<Cell>,
}

impl Fan {
    /// Cones are sorted by label.
    pub fn new(ambient: impl Into<String>, dim: usize, cones: Vec<(String, Cone)>) -> Self {
        let mut cones: Vec<Cell> = cones
            .into_iter()
            .map(|(label, polyhedron)| Cell { label, polyhedron })
            .collect();
        cones.sort_by(|a, b| a.label.cmp(&b.label).then(a.polyhedron.cmp(&b.polyhedron)));
        Fan {
            ambient: ambient.into(),
            dim,
            cones,
        }
    }

    pub fn ambient(&self) -> &str {
        &self.ambient
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &[Cell] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cone(&self, label: &str) -> Option<&Cone> {
        self.cones
            .iter()
            .find(|c| c.label == label)
            .map(|c| &c.polyhedron)
    }

    /// Distinct rays of all maximal cones, sorted.
    pub fn rays(&self) -> Vec<Vec<crate::arith::Int>> {
        let mut rays: Vec<_> = self
            .cones
            .iter()
            .flat_map(|c| c.polyhedron.rays().iter().cloned())
            .collect();
        rays.sort();
        rays.dedup();
        rays
    }

    pub fn all_cones_are_cones(&self) -> bool {
        let origin = vec![Rat::from_integer(0.into()); self.dim];
        self.cones
            .iter()
            .all(|c| c.polyhedron.vertices() == [origin.clone()])
    }

    pub fn fan_defects(&self) -> Vec<Defect> {
        let mut out = Vec::new();
        if !self.all_cones_are_cones() {
            out.push(Defect::new("a maximal cell is not a cone".into(), None));
        }
        out.extend(face_to_face_defects(&self.cones));
        out
    }

    pub fn is_fan(&self) -> bool {
        self.fan_defects().is_empty()
    }

    pub fn completeness_defects(&self) -> Vec<Defect> {
        coverage_defects(&self.cones, &Support::WholeSpace)
    }

    pub fn is_complete(&self) -> bool {
        self.is_fan() && self.completeness_defects().is_empty()
    }

    /// Labels of maximal cones containing `x`.
    pub fn cones_containing(&self, x: &[Rat]) -> Vec<&str> {
        self.cones
            .iter()
            .filter(|c| c.polyhedron.contains(x))
            .map(|c| c.label.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient,
            "dim": self.dim,
            "maximal_cones": self.cones.iter().map(|c| json!({
                "label": c.label,
                "generators": c.polyhedron.rays().iter().map(|r| int_vec_value(r)).collect::<Vec<_>>(),
                "lineality": c.polyhedron.lineality().iter().map(|r| int_vec_value(r)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl Serialize for Fan {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Labeled maximal cells over a declared support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    ambient: String,
    dim: usize,
    cells: Vec<Cell>,
    support: Support,
}

impl Subdivision {
    /// Cells are sorted by label.
    pub fn new(
        ambient: impl Into<String>,
        dim: usize,
        cells: Vec<(String, Polyhedron)>,
        support: Support,
    ) -> Self {
        let mut cells: Vec<Cell> = cells
            .into_iter()
            .map(|(label, polyhedron)| Cell { label, polyhedron })
            .collect();
        cells.sort_by(|a, b| a.label.cmp(&b.label).then(a.polyhedron.cmp(&b.polyhedron)));
        Subdivision {
            ambient: ambient.into(),
            dim,
            cells,
            support,
        }
    }

    pub fn ambient(&self) -> &str {
        &self.ambient
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn defects(&self) -> Vec<Defect> {
        let mut out = face_to_face_defects(&self.cells);
        out.extend(coverage_defects(&self.cells, &self.support));
        out
    }

    pub fn is_valid(&self) -> bool {
        self.defects().is_empty()
    }

    /// The set of cell polyhedra, ignoring labels.
    pub fn cell_set(&self) -> Vec<Polyhedron> {
        let mut v: Vec<Polyhedron> = self.cells.iter().map(|c| c.polyhedron.clone()).collect();
        v.sort();
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient,
            "dim": self.dim,
            "support": match &self.support {
                Support::WholeSpace => json!("whole_space"),
                Support::Polytope(p) => p.to_json(),
            },
            "cells": self.cells.iter().map(|c| json!({
                "label": c.label,
                "polyhedron": c.polyhedron.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl Serialize for Subdivision {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rats};

    fn quadrants() -> Fan {
        let c = |a: [i64; 2], b: [i64; 2]| {
            Polyhedron::cone("N", 2, &[ints(&a), ints(&b)], &[]).unwrap()
        };
        Fan::new(
            "N",
            2,
            vec![
                ("++".into(), c([1, 0], [0, 1])),
                ("-+".into(), c([-1, 0], [0, 1])),
                ("--".into(), c([-1, 0], [0, -1])),
                ("+-".into(), c([1, 0], [0, -1])),
            ],
        )
    }

    #[test]
    fn quadrants_are_complete() {
        let f = quadrants();
        assert!(f.is_fan());
        assert!(f.is_complete());
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.cones_containing(&rats(&[1, 0])).len(), 2);
    }

    #[test]
    fn missing_quadrant_is_incomplete() {
        let mut cones: Vec<(String, Polyhedron)> = quadrants()
            .cones()
            .iter()
            .map(|c| (c.label.clone(), c.polyhedron.clone()))
            .collect();
        cones.pop();
        let f = Fan::new("N", 2, cones);
        assert!(f.is_fan());
        let d = f.completeness_defects();
        assert!(!d.is_empty());
        assert!(d[0].witness.is_some());
    }

    #[test]
    fn overlapping_cones_are_not_a_fan() {
        let a = Polyhedron::cone("N", 2, &[ints(&[1, 0]), ints(&[0, 1])], &[]).unwrap();
        let b = Polyhedron::cone("N", 2, &[ints(&[1, 1]), ints(&[-1, 1])], &[]).unwrap();
        let f = Fan::new("N", 2, vec![("a".into(), a), ("b".into(), b)]);
        let d = f.fan_defects();
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("overlap"));
    }

    #[test]
    fn improper_meeting_detected() {
        // two segments meeting at an interior point of one of them
        let s1 = Polyhedron::from_vrep("Q", 2, &[rats(&[0, 0]), rats(&[2, 0])], &[], &[]).unwrap();
        let s2 = Polyhedron::from_vrep("Q", 2, &[rats(&[1, 0]), rats(&[1, 1])], &[], &[]).unwrap();
        let cells = vec![
            Cell { label: "a".into(), polyhedron: s1 },
            Cell { label: "b".into(), polyhedron: s2 },
        ];
        let d = face_to_face_defects(&cells);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].witness, Some(rats(&[1, 0])));
    }

    #[test]
    fn polytope_subdivision() {
        let sq = Polyhedron::from_vrep(
            "Q",
            2,
            &[rats(&[0, 0]), rats(&[1, 0]), rats(&[0, 1]), rats(&[1, 1])],
            &[],
            &[],
        )
        .unwrap();
        let t1 = Polyhedron::from_vrep("Q", 2, &[rats(&[0, 0]), rats(&[1, 0]), rats(&[1, 1])], &[], &[]).unwrap();
        let t2 = Polyhedron::from_vrep("Q", 2, &[rats(&[0, 0]), rats(&[0, 1]), rats(&[1, 1])], &[], &[]).unwrap();
        let s = Subdivision::new(
            "Q",
            2,
            vec![("a".into(), t1.clone()), ("b".into(), t2)],
            Support::Polytope(sq.clone()),
        );
        assert!(s.is_valid());
        let half = Subdivision::new("Q", 2, vec![("a".into(), t1)], Support::Polytope(sq));
        assert!(!half.is_valid());
    }
}
