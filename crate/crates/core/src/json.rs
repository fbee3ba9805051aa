//! JSON conventions shared by the library types and the CLI.
//!
//! Complex numbers are always encoded as two-element arrays `[re, im]`.
//! [`to_canonical_string`] emits sorted keys and 17-significant-digit floats so
//! that a serialized artifact re-serializes byte-identically after a reload.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Serde adapter for a single complex number as `[re, im]`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Serde adapter for `Vec<Complex64>` as `[[re, im], ...]`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

/// Serde adapter for `Option<Complex64>`.
pub mod complex_opt {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        c.map(|c| [c.re, c.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<[f64; 2]>::deserialize(d)?.map(|[re, im]| Complex64::new(re, im)))
    }
}

struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Canonical JSON: object keys sorted, floats printed with 17 significant digits.
pub fn to_canonical_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // Going through `Value` sorts the keys (serde_json's map is a BTreeMap).
    let value = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}
