//! Serde adapters that read and write `BigInt` fields as plain JSON integer
//! literals of any magnitude (serde_json's arbitrary-precision numbers).

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize_bigint<S: Serializer>(x: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
    let n: serde_json::Number = x
        .to_string()
        .parse()
        .map_err(|_| serde::ser::Error::custom("integer not representable as a JSON number"))?;
    n.serialize(ser)
}

pub fn deserialize_bigint<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
    let n = serde_json::Number::deserialize(de)?;
    let text = n.to_string();
    text.parse::<BigInt>()
        .map_err(|_| D::Error::custom(format!("expected an integer, got {text}")))
}

pub mod big {
    use super::*;
    pub fn serialize<S: Serializer>(x: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(x, ser)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        deserialize_bigint(de)
    }
}

pub mod big_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for x in xs {
            let n: serde_json::Number = x
                .to_string()
                .parse()
                .map_err(|_| serde::ser::Error::custom("bad integer"))?;
            seq.serialize_element(&n)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let ns = Vec::<serde_json::Number>::deserialize(de)?;
        ns.into_iter()
            .map(|n| {
                let text = n.to_string();
                text.parse::<BigInt>()
                    .map_err(|_| D::Error::custom(format!("expected an integer, got {text}")))
            })
            .collect()
    }
}

pub mod big_mat {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Vec<BigInt>], ser: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
                super::big_vec::serialize(self.0, ser)
            }
        }
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for row in xs {
            seq.serialize_element(&Row(row))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        struct Row(Vec<BigInt>);
        impl<'de> Deserialize<'de> for Row {
            fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
                super::big_vec::deserialize(de).map(Row)
            }
        }
        let rows = Vec::<Row>::deserialize(de)?;
        Ok(rows.into_iter().map(|r| r.0).collect())
    }
}
