//! Hex-packed `f64` arrays for cache artifacts: exact bit-level round
//! trips and an order of magnitude faster to parse than decimal JSON
//! numbers.

use serde::{Deserialize, Deserializer, Serializer};

pub fn encode(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 16);
    for v in values {
        for b in v.to_le_bytes() {
            out.push(char::from_digit((b >> 4) as u32, 16).unwrap());
            out.push(char::from_digit((b & 0xf) as u32, 16).unwrap());
        }
    }
    out
}

pub fn decode(text: &str) -> Result<Vec<f64>, String> {
    let bytes = text.as_bytes();
    if !bytes.len().is_multiple_of(16) {
        return Err("hex array length must be a multiple of 16".into());
    }
    let mut out = Vec::with_capacity(bytes.len() / 16);
    let nibble = |c: u8| -> Result<u8, String> {
        (c as char)
            .to_digit(16)
            .map(|d| d as u8)
            .ok_or_else(|| format!("invalid hex digit '{}'", c as char))
    };
    for chunk in bytes.chunks_exact(16) {
        let mut raw = [0u8; 8];
        for (i, b) in raw.iter_mut().enumerate() {
            *b = (nibble(chunk[2 * i])? << 4) | nibble(chunk[2 * i + 1])?;
        }
        out.push(f64::from_le_bytes(raw));
    }
    Ok(out)
}

pub fn serialize<S: Serializer>(values: &Vec<f64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&encode(values))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    let text = String::deserialize(d)?;
    decode(&text).map_err(serde::de::Error::custom)
}

/// Nested variant for `Vec<Vec<f64>>`.
pub mod nested {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &Vec<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        let encoded: Vec<String> = values.iter().map(|v| super::encode(v)).collect();
        serde::Serialize::serialize(&encoded, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let encoded: Vec<String> = Vec::deserialize(d)?;
        encoded
            .iter()
            .map(|t| super::decode(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_exact_round_trip() {
        let vals = vec![0.1, -0.24999141693115234, f64::MIN_POSITIVE, 1e300, -0.0];
        let back = decode(&encode(&vals)).unwrap();
        for (a, b) in vals.iter().zip(back.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn bad_input_rejected() {
        assert!(decode("abc").is_err());
        assert!(decode("zz00000000000000").is_err());
    }
}
