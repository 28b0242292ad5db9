//! Decimal-string serde adapters for big integers.

macro_rules! decimal_adapter {
    ($name:ident, $vec_name:ident, $ty:ty) => {
        pub mod $name {
            use serde::{de::Error, Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(v: &$ty, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&v.to_string())
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(D::Error::custom)
            }
        }

        pub mod $vec_name {
            use serde::{de::Error, Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(v: &[$ty], s: S) -> Result<S::Ok, S::Error> {
                s.collect_seq(v.iter().map(|x| x.to_string()))
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<$ty>, D::Error> {
                Vec::<String>::deserialize(d)?
                    .iter()
                    .map(|s| s.parse().map_err(D::Error::custom))
                    .collect()
            }
        }
    };
}

decimal_adapter!(biguint, biguint_vec, num_bigint::BigUint);
decimal_adapter!(bigint, bigint_vec, num_bigint::BigInt);
