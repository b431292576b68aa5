//! Serde helpers for bignum-safe JSON.
//!
//! All integers leave the process as decimal strings. On input, plain JSON
//! integers are accepted too, since hand-written model files often use them.

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A `BigInt` that serializes as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DecInt(pub BigInt);

impl From<BigInt> for DecInt {
    fn from(v: BigInt) -> Self {
        DecInt(v)
    }
}

impl Serialize for DecInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

struct DecIntVisitor;

impl<'de> Visitor<'de> for DecIntVisitor {
    type Value = DecInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a decimal integer string or a JSON integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<DecInt, E> {
        let t = v.trim();
        if t.is_empty() || t.starts_with('+') {
            return Err(E::custom(format!("invalid decimal integer {v:?}")));
        }
        BigInt::from_str(t)
            .map(DecInt)
            .map_err(|_| E::custom(format!("invalid decimal integer {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<DecInt, E> {
        Ok(DecInt(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<DecInt, E> {
        Ok(DecInt(BigInt::from(v)))
    }
}

impl<'de> Deserialize<'de> for DecInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<DecInt, D::Error> {
        d.deserialize_any(DecIntVisitor)
    }
}

/// `#[serde(with = "dec_vec")]` for `Vec<BigInt>`.
pub mod dec_vec {
    use super::DecInt;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let tmp: Vec<DecInt> = v.iter().cloned().map(DecInt).collect();
        tmp.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let tmp = Vec::<DecInt>::deserialize(d)?;
        Ok(tmp.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "dec_u64")]` for counts reported as strings.
pub mod dec_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let v = super::DecInt::deserialize(d)?;
        u64::try_from(&v.0).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "dec_opt_u64")]` for optional counts.
pub mod dec_opt_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        let v = Option::<super::DecInt>::deserialize(d)?;
        v.map(|x| u64::try_from(&x.0).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_strings_and_numbers() {
        let v: Vec<DecInt> =
            serde_json::from_str(r#"["-12", 7, "123456789012345678901234567890"]"#).unwrap();
        assert_eq!(v[0].0, BigInt::from(-12));
        assert_eq!(v[1].0, BigInt::from(7));
        assert_eq!(v[2].0.to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn rejects_garbage() {
        assert!(serde_json::from_str::<DecInt>(r#""1.5""#).is_err());
        assert!(serde_json::from_str::<DecInt>(r#""""#).is_err());
        assert!(serde_json::from_str::<DecInt>(r#""+3""#).is_err());
        assert!(serde_json::from_str::<DecInt>("1.5").is_err());
    }

    #[test]
    fn emits_strings() {
        assert_eq!(
            serde_json::to_string(&DecInt(BigInt::from(-5))).unwrap(),
            r#""-5""#
        );
    }
}
