//! pp-divisors with possibly empty coefficients, fansy divisors, and their
//! structural checks.

mod label;

pub use label::{DivisorLabel, Partition};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{to_rats, Int, Rat};
use crate::error::{Error, Result};
use crate::json::{int_vec_value, rat_to_string, rat_vec_value};
use crate::polyhedral::{
    coverage_defects, face_to_face_defects, Bound, Cell, Cone, Fan, MinFace, Polyhedron, Subdivision,
    Support,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub label: DivisorLabel,
    pub coefficient: Polyhedron,
}

/// `Σ Δ_i ⊗ D_i` with a common tail; `∅` coefficients mark the locus where
/// the chart is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPDivisor {
    ambient: String,
    dim: usize,
    tail: Cone,
    terms: Vec<Term>,
}

impl PPDivisor {
    /// Terms are sorted by label.
    pub fn new(tail: Cone, terms: Vec<(DivisorLabel, Polyhedron)>) -> Result<Self> {
        let ambient = tail.ambient().to_string();
        let dim = tail.ambient_dim();
        if tail.is_empty() {
            return Err(Error::InvalidDivisor("tail cone is empty".into()));
        }
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(label, coefficient)| Term { label, coefficient })
            .collect();
        terms.sort_by(|a, b| a.label.cmp(&b.label));
        for w in terms.windows(2) {
            if w[0].label == w[1].label {
                return Err(Error::InvalidDivisor(format!("duplicate label {}", w[0].label)));
            }
        }
        if terms.iter().all(|t| t.coefficient.is_empty()) {
            return Err(Error::InvalidDivisor("every coefficient is empty".into()));
        }
        for t in &terms {
            if t.coefficient.ambient() != ambient || t.coefficient.ambient_dim() != dim {
                return Err(Error::LatticeMismatch {
                    left: ambient.clone(),
                    right: t.coefficient.ambient().to_string(),
                });
            }
            if !t.coefficient.is_empty() && t.coefficient.tail_cone() != tail {
                return Err(Error::InvalidDivisor(format!(
                    "coefficient at {} has tail {:?}, expected {:?}",
                    t.label,
                    t.coefficient.tail_cone(),
                    tail
                )));
            }
        }
        Ok(PPDivisor {
            ambient,
            dim,
            tail,
            terms,
        })
    }

    pub fn ambient(&self) -> &str {
        &self.ambient
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn labels(&self) -> Vec<DivisorLabel> {
        self.terms.iter().map(|t| t.label.clone()).collect()
    }

    pub fn coefficient(&self, label: &DivisorLabel) -> Option<&Polyhedron> {
        self.terms
            .iter()
            .find(|t| &t.label == label)
            .map(|t| &t.coefficient)
    }

    /// Labels carrying `∅`.
    pub fn empty_locus(&self) -> Vec<DivisorLabel> {
        self.terms
            .iter()
            .filter(|t| t.coefficient.is_empty())
            .map(|t| t.label.clone())
            .collect()
    }

    /// `Σ min⟨Δ_i, u⟩ D_i` over the nonempty coefficients; the labels with
    /// `∅` are listed in [`Evaluation::omitted`].
    pub fn evaluate(&self, u: &[Rat]) -> Result<Evaluation> {
        match self.tail.min_value(u)? {
            Bound::Finite(_) => {}
            _ => return Err(Error::NotInDualCone),
        }
        let mut terms = Vec::new();
        let mut omitted = Vec::new();
        for t in &self.terms {
            if t.coefficient.is_empty() {
                omitted.push(t.label.clone());
                continue;
            }
            match t.coefficient.min_value(u)? {
                Bound::Finite(m) => terms.push((t.label.clone(), m)),
                _ => return Err(Error::NotInDualCone),
            }
        }
        Ok(Evaluation {
            divisor: FormalDivisor { terms },
            omitted,
        })
    }

    /// Term-wise intersection over the same label set.
    pub fn intersect(&self, other: &PPDivisor) -> Result<PPDivisor> {
        if self.labels() != other.labels() {
            return Err(Error::LabelMismatch);
        }
        let tail = self.tail.intersect(&other.tail)?;
        let terms = self
            .terms
            .iter()
            .zip(&other.terms)
            .map(|(a, b)| Ok((a.label.clone(), a.coefficient.intersect(&b.coefficient)?)))
            .collect::<Result<Vec<_>>>()?;
        PPDivisor::new(tail, terms)
    }

    /// Replaces the coefficient at `label` by its translate by `v`.
    pub fn translate_coefficient(&self, label: &DivisorLabel, v: &[Rat]) -> Result<PPDivisor> {
        let mut out = self.clone();
        let t = out
            .terms
            .iter_mut()
            .find(|t| &t.label == label)
            .ok_or_else(|| Error::LabelAbsent(label.to_string()))?;
        t.coefficient = t.coefficient.translate(v)?;
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient,
            "tail": self.tail.to_json(),
            "terms": self.terms.iter().map(|t| json!({
                "label": t.label.to_json(),
                "polyhedron": if t.coefficient.is_empty() {
                    json!("empty")
                } else {
                    t.coefficient.to_json()
                },
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDivisor {
    pub terms: Vec<(DivisorLabel, Rat)>,
}

impl FormalDivisor {
    pub fn coefficient(&self, label: &DivisorLabel) -> Option<&Rat> {
        self.terms.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(l, c)| json!({ "label": l.to_json(), "coefficient": rat_to_string(c) }))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub divisor: FormalDivisor,
    /// Labels skipped because their coefficient is `∅`.
    pub omitted: Vec<DivisorLabel>,
}

/// Named pp-divisors over one label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FansyDivisor {
    ambient: String,
    dim: usize,
    labels: Vec<DivisorLabel>,
    cells: Vec<(String, PPDivisor)>,
}

impl FansyDivisor {
    /// Cells are sorted by name.
    pub fn new(cells: Vec<(String, PPDivisor)>) -> Result<Self> {
        let Some((_, first)) = cells.first() else {
            return Err(Error::EmptyInput);
        };
        let labels = first.labels();
        let ambient = first.ambient.clone();
        let dim = first.dim;
        for (_, c) in &cells {
            if c.labels() != labels {
                return Err(Error::LabelMismatch);
            }
            if c.ambient != ambient || c.dim != dim {
                return Err(Error::LatticeMismatch {
                    left: ambient.clone(),
                    right: c.ambient.clone(),
                });
            }
        }
        let mut cells = cells;
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(FansyDivisor {
            ambient,
            dim,
            labels,
            cells,
        })
    }

    pub fn ambient(&self) -> &str {
        &self.ambient
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[DivisorLabel] {
        &self.labels
    }

    pub fn cells(&self) -> &[(String, PPDivisor)] {
        &self.cells
    }

    pub fn cell(&self, name: &str) -> Option<&PPDivisor> {
        self.cells.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    /// Distinct nonempty coefficients at `label`, named by the fansy cells
    /// carrying them.
    pub fn subdivision(&self, label: &DivisorLabel) -> Subdivision {
        let mut polys: Vec<(Polyhedron, Vec<String>)> = Vec::new();
        for (name, c) in &self.cells {
            let Some(p) = c.coefficient(label).filter(|p| !p.is_empty()) else {
                continue;
            };
            match polys.iter_mut().find(|(q, _)| q == p) {
                Some((_, names)) => names.push(name.clone()),
                None => polys.push((p.clone(), vec![name.clone()])),
            }
        }
        let cells = polys.into_iter().map(|(p, names)| (names.join("+"), p)).collect();
        Subdivision::new(self.ambient.clone(), self.dim, cells, Support::WholeSpace)
    }

    /// Maximal tails of the cells, labeled by the cell names carrying them.
    pub fn tail_fan(&self) -> Fan {
        let mut tails: Vec<(Cone, Vec<String>)> = Vec::new();
        for (name, c) in &self.cells {
            match tails.iter_mut().find(|(t, _)| t == c.tail()) {
                Some((_, names)) => names.push(name.clone()),
                None => tails.push((c.tail().clone(), vec![name.clone()])),
            }
        }
        let maximal: Vec<(String, Cone)> = tails
            .iter()
            .filter(|(t, _)| {
                !tails
                    .iter()
                    .any(|(o, _)| o != t && t.is_subset_of(o))
            })
            .map(|(t, names)| (names.join("+"), t.clone()))
            .collect();
        Fan::new(self.ambient.clone(), self.dim, maximal)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient,
            "labels": self.labels.iter().map(DivisorLabel::to_json).collect::<Vec<_>>(),
            "cells": self.cells.iter().map(|(name, c)| {
                let mut v = c.to_json();
                v["name"] = json!(name);
                v
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FindingKind {
    Fail,
    Inconclusive,
    Witness,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub message: String,
    pub point: Option<Vec<Rat>>,
    pub form: Option<Vec<Int>>,
}

impl Finding {
    fn new(kind: FindingKind, message: String) -> Self {
        Finding {
            kind,
            message,
            point: None,
            form: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            FindingKind::Fail => "fail",
            FindingKind::Inconclusive => "inconclusive",
            FindingKind::Witness => "witness",
            FindingKind::Assumed => "assumed",
        };
        json!({
            "kind": kind,
            "message": self.message,
            "point": self.point.as_deref().map(rat_vec_value),
            "form": self.form.as_deref().map(int_vec_value),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub pass: bool,
    pub findings: Vec<Finding>,
}

impl Report {
    fn from_findings(findings: Vec<Finding>) -> Self {
        Report {
            pass: findings.iter().all(|f| f.kind != FindingKind::Fail),
            findings,
        }
    }

    pub fn count(&self, kind: FindingKind) -> usize {
        self.findings.iter().filter(|f| f.kind == kind).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "findings": self.findings.iter().map(Finding::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Per-label subdivision axioms and the tail fan.
///
/// Coverage of `N_Q` is required only when the tail fan is complete, since the
/// union of the coefficients has the tail fan's support at infinity.
pub fn check_subdivision_structure(s: &FansyDivisor) -> Report {
    let mut findings = Vec::new();
    let fan = s.tail_fan();
    for d in fan.fan_defects() {
        let mut f = Finding::new(FindingKind::Fail, format!("tail fan: {}", d.message));
        f.point = d.witness;
        findings.push(f);
    }
    let complete = fan.completeness_defects().is_empty();
    let per_label: Vec<Vec<Finding>> = s
        .labels
        .par_iter()
        .map(|label| {
            let sub = s.subdivision(label);
            let cells: &[Cell] = sub.cells();
            let mut defects = face_to_face_defects(cells);
            if complete {
                defects.extend(coverage_defects(cells, &Support::WholeSpace));
            }
            defects
                .into_iter()
                .map(|d| {
                    let mut f =
                        Finding::new(FindingKind::Fail, format!("label {label}: {}", d.message));
                    f.point = d.witness;
                    f
                })
                .collect()
        })
        .collect();
    findings.extend(per_label.into_iter().flatten());
    Report::from_findings(findings)
}

/// Whether `u` certifies the separation condition for the ordered pair `(mu, nu)`.
fn separates(mu: &PPDivisor, nu: &PPDivisor, u: &[Rat]) -> bool {
    for (a, b) in mu.terms.iter().zip(&nu.terms) {
        let (p, q) = (&a.coefficient, &b.coefficient);
        match (p.is_empty(), q.is_empty()) {
            (true, true) => {}
            (true, false) => {
                if !matches!(q.min_value(u), Ok(Bound::Finite(_))) {
                    return false;
                }
            }
            (false, true) => {
                if !matches!(p.max_value(u), Ok(Bound::Finite(_))) {
                    return false;
                }
            }
            (false, false) => {
                let (Ok(Bound::Finite(hi)), Ok(Bound::Finite(lo))) = (p.max_value(u), q.min_value(u))
                else {
                    return false;
                };
                if hi > lo {
                    return false;
                }
                if hi == lo {
                    let (Ok(MinFace::Face(fp)), Ok(MinFace::Face(fq))) =
                        (p.face_maximizing(u), q.face_minimizing(u))
                    else {
                        return false;
                    };
                    if fp != fq {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn candidate_forms(mu: &PPDivisor, nu: &PPDivisor) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = vec![vec![Int::zero(); mu.dim]];
    let mut push_normals = |p: &Polyhedron| {
        for h in p.facets().iter().chain(p.equations()) {
            if h.normal.iter().all(Zero::is_zero) {
                continue;
            }
            out.push(h.normal.clone());
            out.push(h.normal.iter().map(|x| -x).collect());
        }
    };
    for d in [mu, nu] {
        push_normals(&d.tail);
        for t in &d.terms {
            push_normals(&t.coefficient);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Searches, for every ordered pair of distinct cells, a form `u` separating
/// the coefficients as in the first fansy condition. Candidates are `0` and
/// the primitive facet normals of tails and coefficients; a miss is reported
/// as inconclusive, never as a failure. The semiampleness condition on the
/// labels where the cells do not meet is recorded as assumed.
pub fn check_fansy_condition1(s: &FansyDivisor) -> Report {
    let n = s.cells.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let found: Vec<Vec<Finding>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (mn, mu) = &s.cells[i];
            let (nn, nu) = &s.cells[j];
            let mut out = Vec::new();
            let hit = candidate_forms(mu, nu)
                .into_iter()
                .find(|u| separates(mu, nu, &to_rats(u)));
            match hit {
                Some(u) => {
                    let mut f =
                        Finding::new(FindingKind::Witness, format!("cells {mn} -> {nn}: separating form found"));
                    f.form = Some(u);
                    out.push(f);
                }
                None => out.push(Finding::new(
                    FindingKind::Inconclusive,
                    format!("cells {mn} -> {nn}: no separating form among facet normals"),
                )),
            }
            if i < j {
                let disjoint: Vec<String> = mu
                    .terms
                    .iter()
                    .zip(&nu.terms)
                    .filter(|(a, b)| {
                        a.coefficient
                            .intersect(&b.coefficient)
                            .map(|m| m.is_empty())
                            .unwrap_or(true)
                    })
                    .map(|(a, _)| a.label.to_string())
                    .collect();
                out.push(Finding::new(
                    FindingKind::Assumed,
                    format!(
                        "cells {mn}, {nn}: semiampleness of the sum over [{}] assumed",
                        disjoint.join(", ")
                    ),
                ));
            }
            out
        })
        .collect();
    Report::from_findings(found.into_iter().flatten().collect())
}

/// Exact check that `u` is nonnegative on the tail, i.e. lies in its dual.
pub fn in_tail_dual(d: &PPDivisor, u: &[Rat]) -> bool {
    matches!(d.tail.min_value(u), Ok(Bound::Finite(ref m)) if !m.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rats};

    fn sigma() -> Cone {
        Polyhedron::cone("N", 2, &[ints(&[1, 0]), ints(&[-1, 2])], &[]).unwrap()
    }

    fn example() -> PPDivisor {
        let s = sigma();
        let seg = Polyhedron::from_vrep("N", 2, &[rats(&[0, 1]), rats(&[1, 0])], &[], &[]).unwrap();
        let d0 = seg.minkowski_sum(&s).unwrap();
        let dinf = Polyhedron::point("N", &[rat(-1, 2), rat(0, 1)])
            .minkowski_sum(&s)
            .unwrap();
        PPDivisor::new(
            s,
            vec![
                (DivisorLabel::named("0"), d0),
                (DivisorLabel::named("inf"), dinf),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let d = example();
        let zero = d.evaluate(&rats(&[0, 0])).unwrap();
        assert!(zero.divisor.terms.iter().all(|(_, c)| c.is_zero()));
        let e = d.evaluate(&rats(&[0, 1])).unwrap();
        assert!(e.divisor.terms.iter().all(|(_, c)| c.is_zero()));
        let e = d.evaluate(&rats(&[2, 1])).unwrap();
        assert_eq!(e.divisor.coefficient(&DivisorLabel::named("0")), Some(&rat(1, 1)));
        assert_eq!(e.divisor.coefficient(&DivisorLabel::named("inf")), Some(&rat(-1, 1)));
        assert_eq!(d.evaluate(&rats(&[-1, 0])), Err(Error::NotInDualCone));
    }

    #[test]
    fn invariants_enforced() {
        let s = sigma();
        let e = Polyhedron::empty("N", 2);
        assert!(PPDivisor::new(s.clone(), vec![(DivisorLabel::named("a"), e)]).is_err());
        let wrong_tail = Polyhedron::cone("N", 2, &[ints(&[1, 0])], &[]).unwrap();
        assert!(PPDivisor::new(s.clone(), vec![(DivisorLabel::named("a"), wrong_tail)]).is_err());
        let p = Polyhedron::point("N", &rats(&[0, 0])).minkowski_sum(&s).unwrap();
        assert!(PPDivisor::new(
            s,
            vec![
                (DivisorLabel::named("a"), p.clone()),
                (DivisorLabel::named("a"), p)
            ]
        )
        .is_err());
    }

    #[test]
    fn intersect_and_translate() {
        let d = example();
        assert_eq!(d.intersect(&d).unwrap(), d);
        let lab = DivisorLabel::named("inf");
        assert_eq!(d.translate_coefficient(&lab, &rats(&[0, 0])).unwrap(), d);
        let shifted = d.translate_coefficient(&lab, &rats(&[0, 5])).unwrap();
        let m = d.intersect(&shifted).unwrap();
        assert!(!m.coefficient(&lab).unwrap().is_empty());
        assert!(matches!(
            d.translate_coefficient(&DivisorLabel::named("x"), &rats(&[0, 0])),
            Err(Error::LabelAbsent(_))
        ));
        // disjoint shifted cones
        let c = Polyhedron::cone("N", 2, &[ints(&[1, 0]), ints(&[0, 1])], &[]).unwrap();
        let a = PPDivisor::new(c.clone(), vec![(lab.clone(), c.clone()), (DivisorLabel::named("z"), c.clone())]).unwrap();
        let far = Polyhedron::cone("N", 2, &[ints(&[-1, 0]), ints(&[0, 1])], &[]).unwrap();
        let b = PPDivisor::new(
            far.clone(),
            vec![
                (lab.clone(), far.translate(&rats(&[-5, 0])).unwrap()),
                (DivisorLabel::named("z"), far),
            ],
        )
        .unwrap();
        let m = a.intersect(&b).unwrap();
        assert!(m.coefficient(&lab).unwrap().is_empty());
        let _ = shifted;
    }

    #[test]
    fn overlapping_cells_fail_with_witness() {
        let c = Polyhedron::cone("N", 1, &[ints(&[1])], &[]).unwrap();
        let a = PPDivisor::new(c.clone(), vec![(DivisorLabel::named("x"), c.clone())]).unwrap();
        let b = PPDivisor::new(
            c.clone(),
            vec![(DivisorLabel::named("x"), c.translate(&rats(&[1])).unwrap())],
        )
        .unwrap();
        let f = FansyDivisor::new(vec![("a".into(), a), ("b".into(), b)]).unwrap();
        let r = check_subdivision_structure(&f);
        assert!(!r.pass);
        assert!(r.findings.iter().any(|x| x.point.is_some()));
    }

    #[test]
    fn single_divisor_passes() {
        let f = FansyDivisor::new(vec![("only".into(), example())]).unwrap();
        assert!(check_subdivision_structure(&f).pass);
        let whole = Polyhedron::whole_space("N", 1);
        let d = PPDivisor::new(whole.clone(), vec![(DivisorLabel::named("x"), whole)]).unwrap();
        let f = FansyDivisor::new(vec![("only".into(), d)]).unwrap();
        assert!(check_subdivision_structure(&f).pass);
    }

    #[test]
    fn condition_one_search() {
        // (-inf,0] and [0,inf) meeting at 0 in one label
        let neg = Polyhedron::cone("N", 1, &[ints(&[-1])], &[]).unwrap();
        let pos = Polyhedron::cone("N", 1, &[ints(&[1])], &[]).unwrap();
        let x = DivisorLabel::named("x");
        let a = PPDivisor::new(neg.clone(), vec![(x.clone(), neg)]).unwrap();
        let b = PPDivisor::new(pos.clone(), vec![(x.clone(), pos)]).unwrap();
        let f = FansyDivisor::new(vec![("a".into(), a), ("b".into(), b)]).unwrap();
        let r = check_fansy_condition1(&f);
        assert!(r.pass);
        assert_eq!(r.count(FindingKind::Witness), 2);
        let w = r.findings.iter().find(|f| f.kind == FindingKind::Witness).unwrap();
        assert_eq!(w.form, Some(ints(&[1])));

        // two overlapping half-lines: nothing separates them
        let c = Polyhedron::cone("N", 1, &[ints(&[1])], &[]).unwrap();
        let a = PPDivisor::new(c.clone(), vec![(x.clone(), c.clone())]).unwrap();
        let b = PPDivisor::new(c.clone(), vec![(x.clone(), c.translate(&rats(&[1])).unwrap())]).unwrap();
        let f = FansyDivisor::new(vec![("a".into(), a), ("b".into(), b)]).unwrap();
        let r = check_fansy_condition1(&f);
        assert!(r.count(FindingKind::Inconclusive) >= 1);
    }
}
