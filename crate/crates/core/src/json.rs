//! Serde adapters: integers and rationals travel as decimal strings (`"p/q"`)
//! so nothing is rounded on the way through JSON.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::arith::{parse_rat, Int, Rat};
use crate::lattice::{IntMatrix, RatMatrix};

fn int_from_value(v: &Value) -> Result<Int, String> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| format!("bad integer {s:?}")),
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| format!("bad integer {n}")),
        other => Err(format!("expected integer, found {other}")),
    }
}

fn rat_from_value(v: &Value) -> Result<Rat, String> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| format!("bad rational {s:?}")),
        Value::Number(n) => parse_rat(&n.to_string()).ok_or_else(|| format!("bad rational {n}")),
        other => Err(format!("expected rational, found {other}")),
    }
}

pub fn int_to_string(x: &Int) -> String {
    x.to_string()
}

pub fn rat_to_string(x: &Rat) -> String {
    x.to_string()
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(int_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        let raw = Vec::<Value>::deserialize(d)?;
        raw.iter()
            .map(|v| int_from_value(v).map_err(D::Error::custom))
            .collect()
    }
}

pub mod int_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(int_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        let raw = Vec::<Vec<Value>>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|v| int_from_value(v).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rat_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<Value>::deserialize(d)?;
        raw.iter()
            .map(|v| rat_from_value(v).map_err(D::Error::custom))
            .collect()
    }
}

pub mod rat_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(rat_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<Value>>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|v| rat_from_value(v).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        rat_to_string(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = Value::deserialize(d)?;
        rat_from_value(&raw).map_err(D::Error::custom)
    }
}

/// Integer matrix as an array of rows; the column count of an empty matrix
/// is lost, so empty matrices round-trip as `0 x 0`.
pub mod int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        int_vecs::serialize(&m.row_vecs(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows = int_vecs::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_rows(&rows, cols).map_err(D::Error::custom)
    }
}

pub mod rat_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
        rat_vecs::serialize(&m.row_vecs(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatMatrix, D::Error> {
        let rows = rat_vecs::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        RatMatrix::from_rows(&rows, cols).map_err(D::Error::custom)
    }
}

pub fn int_matrix_value(m: &IntMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(int_to_string(x))).collect()))
            .collect(),
    )
}

pub fn rat_matrix_value(m: &RatMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(rat_to_string(x))).collect()))
            .collect(),
    )
}

pub fn rat_vec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_to_string(x))).collect())
}

pub fn int_vec_value(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(int_to_string(x))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat};
    use crate::lattice::LatticeMap;

    #[test]
    fn lattice_map_roundtrip() {
        let m = LatticeMap::new("A", "B", IntMatrix::from_i64(&[&[1, -2, 1]]));
        let js = serde_json::to_string(&m).unwrap();
        assert!(js.contains(r#"[["1","-2","1"]]"#));
        let back: LatticeMap = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rationals_as_strings() {
        #[derive(Serialize, Deserialize)]
        struct W {
            #[serde(with = "rat_vec")]
            v: Vec<Rat>,
        }
        let w = W {
            v: vec![rat(-1, 2), rat(3, 1)],
        };
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(js, r#"{"v":["-1/2","3"]}"#);
        let back: W = serde_json::from_str(r#"{"v":["-2/4", 3]}"#).unwrap();
        assert_eq!(back.v, vec![rat(-1, 2), rat(3, 1)]);
        let _ = ints(&[1]);
    }
}
