//! Serialization helpers shared by the CLI: rationals as `"p/q"` strings,
//! Monte-Carlo floats with 17 significant digits.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::sparse::SparseMatrix;

/// `x` in scientific notation with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Result<Box<RawValue>, serde_json::Error> {
    if x.is_finite() {
        RawValue::from_string(sig17(x))
    } else {
        RawValue::from_string("null".into())
    }
}

/// `serialize_with` target for one float.
pub fn float17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*x).map_err(S::Error::custom)?.serialize(s)
}

/// `serialize_with` target for a float vector.
pub fn floats17<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let v = xs.iter().map(|x| raw(*x)).collect::<Result<Vec<_>, _>>().map_err(S::Error::custom)?;
    v.serialize(s)
}

/// Rows of rational strings.
pub fn matrix_rows(m: &Matrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Triplets {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)`, row-major.
    pub entries: Vec<(usize, usize, Rational)>,
}

pub fn triplets(m: &SparseMatrix) -> Triplets {
    Triplets { rows: m.rows(), cols: m.cols(), entries: m.triplets().map(|(i, j, x)| (i, j, x.clone())).collect() }
}
