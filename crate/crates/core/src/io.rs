//! JSON file formats and number formatting.
//!
//! Matrices are stored as `{"dim": n, "re": [[…]], "im": [[…]]}` with rows
//! outermost; information vectors as `{"i": [i1, i2, i3]}`. Parsed states are
//! validated before they are returned.
//!
//! Output is written with sorted keys and every float printed with 17
//! significant digits (trailing zeros dropped), so values survive a round
//! trip exactly. Non-finite floats become `null`.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::matkernel::ComplexMatrix;
use crate::mub::{MubSet, MubVerification};
use crate::qstate::{density_from_info, DensityMatrix, InfoVector};
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            dim: m.rows(),
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        let rows_ok = |part: &Vec<Vec<f64>>| part.len() == n && part.iter().all(|row| row.len() == n);
        if n == 0 || !rows_ok(&self.re) || !rows_ok(&self.im) {
            return Err(Error::Format(format!(
                "\"re\" and \"im\" must both be {n}×{n} arrays"
            )));
        }
        let data = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(n, n, data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoVectorJson {
    pub i: Vec<f64>,
}

impl InfoVectorJson {
    pub fn to_info_vector(&self) -> Result<InfoVector> {
        match self.i.as_slice() {
            &[a, b, c] => Ok(InfoVector::new(a, b, c)),
            other => Err(Error::Format(format!(
                "\"i\" must hold 3 components, found {}",
                other.len()
            ))),
        }
    }
}

/// Either of the two state formats.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Density(MatrixJson),
    Info(InfoVectorJson),
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    from_json::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix(text)?)
}

pub fn parse_info_vector(text: &str) -> Result<InfoVector> {
    from_json::<InfoVectorJson>(text)?.to_info_vector()
}

/// Reads a state given either as a density matrix or as an information
/// vector; the latter becomes ρ = ½(1 + i·σ).
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    match from_json::<StateJson>(text).map_err(|_| {
        Error::Format("expected {\"dim\", \"re\", \"im\"} or {\"i\"}".into())
    })? {
        StateJson::Density(m) => DensityMatrix::new(m.to_matrix()?),
        StateJson::Info(v) => density_from_info(v.to_info_vector()?),
    }
}

pub fn density_to_value(rho: &DensityMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(rho.matrix())).expect("plain data")
}

pub fn info_vector_to_value(i: InfoVector) -> Value {
    serde_json::to_value(InfoVectorJson {
        i: i.to_array().to_vec(),
    })
    .expect("plain data")
}

/// Basis vectors are the columns of each `{"re", "im"}` matrix.
pub fn mub_to_value(set: &MubSet, check: &MubVerification) -> Value {
    let bases: Vec<Value> = set
        .bases()
        .iter()
        .map(|b| serde_json::to_value(MatrixJson::from_matrix(b)).expect("plain data"))
        .collect();
    serde_json::json!({
        "dim": set.dim(),
        "bases": bases,
        "max_orthonormality_error": check.max_orthonormality_error,
        "max_unbiasedness_error": check.max_unbiasedness_error,
    })
}

/// 17 significant digits, positional between 1e-5 and 1e17, trailing zeros
/// removed. Non-finite values print as `null`.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if !(-5..17).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        let tail = if tail.is_empty() { "0" } else { tail };
        return format!("{sign}{head}.{tail}e{exp}");
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        return format!("{sign}0.{zeros}{digits}");
    }
    let point = exp as usize + 1;
    if digits.len() > point {
        format!("{sign}{}.{}", &digits[..point], &digits[point..])
    } else {
        format!("{sign}{digits}{}.0", "0".repeat(point - digits.len()))
    }
}

/// Pretty-printing formatter that routes floats through [`format_f64`].
struct StableFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for StableFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with sorted keys and 17-digit floats.
pub fn to_stable_json<T: Serialize>(value: &T) -> Result<String> {
    // Going through `Value` sorts object keys.
    let value = serde_json::to_value(value).map_err(|e| Error::Format(e.to_string()))?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        StableFormatter(PrettyFormatter::with_indent(b"  ")),
    );
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}
