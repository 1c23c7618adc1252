//! Exact rational scalars and vectors, fraction-free elimination and the
//! affine predicates used throughout the crate.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("row {row} has length {found}, expected {expected}")]
    MismatchedLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("degenerate line: both points are equal")]
    DegenerateLine,
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
}

/// Parses `p/q` or `p` into an exact rational.
pub fn parse_scalar(text: &str) -> Result<Scalar, ArithError> {
    let t = text.trim();
    let bad = || ArithError::BadRational(text.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(n, d))
        }
        None => BigInt::from_str(t).map(Scalar::from_integer).map_err(|_| bad()),
    }
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Point or direction in Q^d.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    /// The unit vector e_i, with `i` counted from 1.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "unit index {i} outside 1..={dim}");
        let mut v = Self::zeros(dim);
        v.0[i - 1] = Scalar::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &Scalar, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Scales to the unique primitive integer vector with the same direction.
    pub fn primitive_direction(&self) -> Vec<BigInt> {
        primitive(integer_row(&self.0))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.len(), rhs.len());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.len(), rhs.len());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(v: Vec<Scalar>) -> Self {
        Vector(v)
    }
}

/// The hyperplane `normal · x = offset`, read as the half-space
/// `normal · x >= offset` when used as a facet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: Scalar,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Scalar) -> Result<Self, ArithError> {
        if normal.is_zero() {
            return Err(ArithError::ZeroNormal);
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `normal · x - offset`; zero on the hyperplane, positive on the inner side.
    pub fn slack(&self, x: &Vector) -> Scalar {
        self.normal.dot(x) - &self.offset
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.slack(x).is_zero()
    }

    /// Same half-space scaled to coprime integers (positive scaling only).
    pub fn canonical_oriented(&self) -> Hyperplane {
        let mut row = self.normal.0.clone();
        row.push(self.offset.clone());
        let ints = primitive(integer_row(&row));
        let d = self.dim();
        Hyperplane {
            normal: Vector(ints[..d].iter().cloned().map(Scalar::from_integer).collect()),
            offset: Scalar::from_integer(ints[d].clone()),
        }
    }

    /// Coprime integer form with the first nonzero normal entry positive;
    /// equal for any two descriptions of the same unoriented hyperplane.
    pub fn canonical_unoriented(&self) -> Hyperplane {
        let h = self.canonical_oriented();
        let first = h.normal.0.iter().find(|c| !c.is_zero()).expect("nonzero normal");
        if first.is_negative() {
            h.flipped()
        } else {
            h
        }
    }

    pub fn flipped(&self) -> Hyperplane {
        Hyperplane {
            normal: -&self.normal,
            offset: -&self.offset,
        }
    }

    /// Renders as e.g. `-x_2 + x_3 + x_4 = 3`.
    pub fn equation(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.normal.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag}") };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&format!("{coef}x_{}", i + 1));
        }
        format!("{out} = {}", self.offset)
    }
}

/// Clears denominators: returns integers proportional to `row` with a
/// positive common factor.
pub fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect()
}

/// Divides out the content (gcd of entries); zero rows are returned as is.
pub fn primitive(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c = &*c / &g;
        }
    }
    row
}

fn check_lengths(rows: &[Vector]) -> Result<usize, ArithError> {
    let width = rows.first().map_or(0, Vector::len);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(ArithError::MismatchedLength {
                row: i,
                expected: width,
                found: r.len(),
            });
        }
    }
    Ok(width)
}

/// Row-reduced integer matrix produced by fraction-free Gauss-Jordan
/// elimination. Every row is primitive; pivots are positive.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Exact basis of the right kernel, one primitive integer vector per
    /// free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let pivot_lcm = self
            .pivots
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (r, &c)| acc.lcm(&self.rows[r][c]));
        (0..self.cols)
            .filter(|&j| is_pivot[j].is_none())
            .map(|free| {
                let mut x = vec![BigInt::zero(); self.cols];
                x[free] = pivot_lcm.clone();
                for (r, &c) in self.pivots.iter().enumerate() {
                    let entry = &self.rows[r][free];
                    if !entry.is_zero() {
                        x[c] = -(entry * (&pivot_lcm / &self.rows[r][c]));
                    }
                }
                primitive(x)
            })
            .collect()
    }
}

/// Fraction-free elimination over integer rows. With `full` the result is
/// in reduced row echelon form (entries above pivots cleared too).
/// Pivot choice is the first nonzero entry in column order.
pub fn eliminate(mut rows: Vec<Vec<BigInt>>, cols: usize, full: bool) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        if rows[r][col].is_negative() {
            for c in rows[r].iter_mut() {
                *c = -&*c;
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        let p = pivot_row[col].clone();
        let start = if full { 0 } else { r + 1 };
        for (i, row) in rows.iter_mut().enumerate().skip(start) {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (j, entry) in row.iter_mut().enumerate() {
                if pivot_row[j].is_zero() {
                    if !entry.is_zero() {
                        *entry *= &p;
                    }
                } else {
                    *entry = &*entry * &p - &f * &pivot_row[j];
                }
            }
            *row = primitive(std::mem::take(row));
        }
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { cols, rows, pivots }
}

pub fn to_integer_matrix(rows: &[Vector]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| primitive(integer_row(&r.0))).collect()
}

/// Rank of the linear span of `rows`.
pub fn rank(rows: &[Vector]) -> Result<usize, ArithError> {
    let width = check_lengths(rows)?;
    Ok(eliminate(to_integer_matrix(rows), width, false).rank())
}

/// Exact basis of `{x : row · x = 0 for every row}`.
pub fn nullspace(rows: &[Vector]) -> Result<Vec<Vector>, ArithError> {
    let width = check_lengths(rows)?;
    let ech = eliminate(to_integer_matrix(rows), width, true);
    Ok(ech
        .kernel()
        .into_iter()
        .map(|k| Vector(k.into_iter().map(Scalar::from_integer).collect()))
        .collect())
}

/// Dimension of the affine hull of `points` (-1 for the empty set).
pub fn affine_dimension(points: &[&Vector]) -> isize {
    let Some(first) = points.first() else {
        return -1;
    };
    let diffs: Vec<Vector> = points[1..].iter().map(|p| *p - *first).collect();
    if diffs.is_empty() {
        return 0;
    }
    rank(&diffs).expect("points share a dimension") as isize
}

/// True iff `u` and `v` are nonzero and parallel (either orientation).
pub fn parallel(u: &Vector, v: &Vector) -> bool {
    !u.is_zero() && !v.is_zero() && rank(&[u.clone(), v.clone()]).unwrap_or(0) == 1
}

/// True iff the lines through (a1, b1) and (a2, b2) neither meet nor are
/// parallel.
pub fn lines_skew(a1: &Vector, b1: &Vector, a2: &Vector, b2: &Vector) -> Result<bool, ArithError> {
    if a1 == b1 || a2 == b2 {
        return Err(ArithError::DegenerateLine);
    }
    let rows = [b1 - a1, b2 - a2, a2 - a1];
    Ok(rank(&rows)? == 3)
}

/// True iff the two lines lie in a common plane (meet or are parallel).
pub fn lines_coplanar(a1: &Vector, b1: &Vector, a2: &Vector, b2: &Vector) -> Result<bool, ArithError> {
    lines_skew(a1, b1, a2, b2).map(|s| !s)
}

impl serde::Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for c in &self.0 {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = serde::Deserialize::deserialize(d)?;
        raw.iter()
            .map(|t| parse_scalar(t))
            .collect::<Result<Vec<_>, _>>()
            .map(Vector)
            .map_err(serde::de::Error::custom)
    }
}
