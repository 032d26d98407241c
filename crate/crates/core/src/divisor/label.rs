use std::fmt;

use serde_json::{json, Value};

use crate::arith::{gcd_all, Int};
use crate::error::{Error, Result};
use crate::json::int_vec_value;

/// Two-block partition of `{1..n}` with both blocks of size at least two.
/// Stored by the block containing 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    n: usize,
    first: Vec<usize>,
}

impl Partition {
    /// Accepts either block; the canonical representative contains 1.
    pub fn new(n: usize, block: &[usize]) -> Result<Self> {
        let mut b: Vec<usize> = block.to_vec();
        b.sort_unstable();
        b.dedup();
        if b.len() != block.len() || b.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidPartition(format!(
                "{block:?} is not a subset of 1..={n}"
            )));
        }
        if !b.contains(&1) {
            b = (1..=n).filter(|i| !b.contains(i)).collect();
        }
        if b.len() < 2 || n - b.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "blocks of {block:?} in 1..={n} must both have at least two elements"
            )));
        }
        Ok(Partition { n, first: b })
    }

    /// All partitions of `{1..n}`, ordered by `(b, B')` lexicographically.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        if n < 4 {
            return out;
        }
        for b in 2..=n - 2 {
            for rest in crate::polyhedral::subsets(n - 1, b - 1) {
                let mut block = vec![1];
                block.extend(rest.iter().map(|i| i + 2));
                out.push(Partition { n, first: block });
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `B'`, the block containing 1.
    pub fn first(&self) -> &[usize] {
        &self.first
    }

    /// `B''`.
    pub fn second(&self) -> Vec<usize> {
        (1..=self.n).filter(|i| !self.first.contains(i)).collect()
    }

    pub fn b(&self) -> usize {
        self.first.len()
    }

    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.first.contains(&i) != self.first.contains(&j)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}|{}}}", join(&self.first), join(&self.second()))
    }
}

/// Prime divisor label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivisorLabel {
    ToricRay(Vec<Int>),
    Partition(Partition),
    Named(String),
}

impl DivisorLabel {
    pub fn toric_ray(v: Vec<Int>) -> Result<Self> {
        let g = gcd_all(&v);
        if g != Int::from(1) {
            return Err(Error::InvalidArgument(format!(
                "toric ray {:?} is not primitive",
                v.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        Ok(DivisorLabel::ToricRay(v))
    }

    pub fn named(s: impl Into<String>) -> Self {
        DivisorLabel::Named(s.into())
    }

    pub fn to_json(&self) -> Value {
        match self {
            DivisorLabel::ToricRay(v) => json!({ "ray": int_vec_value(v) }),
            DivisorLabel::Partition(p) => json!({ "partition": p.first(), "n": p.n() }),
            DivisorLabel::Named(s) => json!({ "name": s }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad divisor label {v}"));
        if let Some(s) = v.get("name").and_then(Value::as_str) {
            return Ok(DivisorLabel::named(s));
        }
        if let Some(r) = v.get("ray").and_then(Value::as_array) {
            let ints: Option<Vec<Int>> = r
                .iter()
                .map(|x| match x {
                    Value::String(s) => s.parse().ok(),
                    Value::Number(n) => n.to_string().parse().ok(),
                    _ => None,
                })
                .collect();
            return DivisorLabel::toric_ray(ints.ok_or_else(bad)?);
        }
        if let (Some(p), Some(n)) = (
            v.get("partition").and_then(Value::as_array),
            v.get("n").and_then(Value::as_u64),
        ) {
            let block: Option<Vec<usize>> =
                p.iter().map(|x| x.as_u64().map(|i| i as usize)).collect();
            return Ok(DivisorLabel::Partition(Partition::new(
                n as usize,
                &block.ok_or_else(bad)?,
            )?));
        }
        Err(bad())
    }
}

impl fmt::Display for DivisorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorLabel::ToricRay(v) => write!(
                f,
                "ray({})",
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            ),
            DivisorLabel::Partition(p) => write!(f, "{p}"),
            DivisorLabel::Named(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ints;

    #[test]
    fn partition_canonical_form() {
        let p = Partition::new(4, &[3, 4]).unwrap();
        assert_eq!(p.first(), &[1, 2]);
        assert_eq!(p.second(), vec![3, 4]);
        assert_eq!(p, Partition::new(4, &[2, 1]).unwrap());
        assert_eq!(p.to_string(), "{1,2|3,4}");
        assert!(Partition::new(4, &[1]).is_err());
        assert!(Partition::new(5, &[1, 2, 3, 4]).is_err());
        assert!(Partition::new(4, &[1, 5]).is_err());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(Partition::all(4).len(), 3);
        assert_eq!(Partition::all(5).len(), 10);
        assert_eq!(Partition::all(6).len(), 25);
    }

    #[test]
    fn labels_roundtrip() {
        let labels = vec![
            DivisorLabel::toric_ray(ints(&[1, -2])).unwrap(),
            DivisorLabel::Partition(Partition::new(5, &[1, 3]).unwrap()),
            DivisorLabel::named("inf"),
        ];
        for l in labels {
            assert_eq!(DivisorLabel::from_json(&l.to_json()).unwrap(), l);
        }
        assert!(DivisorLabel::toric_ray(ints(&[2, 4])).is_err());
    }
}
