use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::rational::Rational;

/// A dense vector over ℚ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot product");
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: &Rational, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// Largest absolute entry (the ℓ∞ norm).
    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a QVector {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A dense row-major matrix over ℚ. A matrix may have zero rows (an empty
/// basis) but always records its column count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: Vec<QVector>,
    ncols: usize,
}

impl QMatrix {
    /// Panics if the rows disagree in length.
    pub fn from_rows(rows: Vec<QVector>, ncols: usize) -> Self {
        assert!(
            rows.iter().all(|r| r.dim() == ncols),
            "all rows must have {ncols} columns"
        );
        QMatrix { rows, ncols }
    }

    /// Infers the column count from the first row; `rows` must be nonempty.
    pub fn new(rows: Vec<QVector>) -> Self {
        let ncols = rows.first().map(QVector::dim).expect("empty row list");
        Self::from_rows(rows, ncols)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| QVector::from_i64(r)).collect())
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        QMatrix {
            rows: vec![QVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: (0..n).map(|i| QVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> QVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix {
            rows: (0..self.ncols).map(|j| self.column(j)).collect(),
            ncols: self.rows.len(),
        }
    }

    pub fn mul_vec(&self, x: &QVector) -> QVector {
        assert_eq!(x.dim(), self.ncols);
        self.rows.iter().map(|r| r.dot(x)).collect()
    }

    /// `xᵀ·M`, i.e. the combination `Σ x_i · row_i`.
    pub fn combine_rows(&self, coeffs: &QVector) -> QVector {
        assert_eq!(coeffs.dim(), self.nrows());
        let mut out = QVector::zeros(self.ncols);
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if !c.is_zero() {
                out = out.axpy(c, row);
            }
        }
        out
    }

    pub fn into_rows(self) -> Vec<QVector> {
        self.rows
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.rows[i][j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<QVector>::deserialize(deserializer)?;
        let ncols = rows
            .first()
            .map(QVector::dim)
            .ok_or_else(|| serde::de::Error::custom("matrix must have at least one row"))?;
        if rows.iter().any(|r| r.dim() != ncols) {
            return Err(serde::de::Error::custom("matrix rows have unequal lengths"));
        }
        Ok(QMatrix { rows, ncols })
    }
}
