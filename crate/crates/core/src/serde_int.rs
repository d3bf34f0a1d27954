//! JSON encoding for arbitrary-precision integers: a plain number when the
//! value fits in 64 bits, a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{de, Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

impl Repr {
    fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
        match self {
            Repr::Signed(v) => Ok(v.into()),
            Repr::Unsigned(v) => Ok(v.into()),
            Repr::Text(s) => s.parse().map_err(E::custom),
        }
    }
}

fn serialize_one<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    if let Some(x) = v.to_i64() {
        s.serialize_i64(x)
    } else {
        s.serialize_str(&v.to_string())
    }
}

pub(crate) mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        struct One<'a>(&'a BigInt);
        impl serde::Serialize for One<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_one(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&One(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(Repr::into_bigint)
            .collect()
    }
}
