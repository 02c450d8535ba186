use serde::{Deserialize, Serialize};

/// Dense row-major square matrix of small dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SmallMatrix {
    pub const MAX_DIM: usize = 8;

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        assert!(dim <= Self::MAX_DIM, "dimension {dim} exceeds {}", Self::MAX_DIM);
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), dim, "matrix must be square");
            entries.extend_from_slice(r);
        }
        Self { dim, entries }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        assert!(dim <= Self::MAX_DIM, "dimension {dim} exceeds {}", Self::MAX_DIM);
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| (0..self.dim).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(self.dim, |i, j| k * self.get(i, j))
    }

    /// Drops the first and last rows and columns.
    pub fn strip(&self) -> Option<Self> {
        (self.dim >= 3).then(|| Self::from_fn(self.dim - 2, |i, j| self.get(i + 1, j + 1)))
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        let idx: Vec<usize> = (0..self.dim).collect();
        self.minor_det(&idx, &idx)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> f64 {
        match rows.len() {
            0 => 1.0,
            1 => self.get(rows[0], cols[0]),
            2 => {
                self.get(rows[0], cols[0]) * self.get(rows[1], cols[1])
                    - self.get(rows[0], cols[1]) * self.get(rows[1], cols[0])
            }
            _ => {
                let sub_rows = &rows[1..];
                let mut sign = 1.0;
                let mut acc = 0.0;
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(rows[0], c);
                    if entry != 0.0 {
                        let sub_cols: Vec<usize> =
                            cols.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, &c)| c).collect();
                        acc += sign * entry * self.minor_det(sub_rows, &sub_cols);
                    }
                    sign = -sign;
                }
                acc
            }
        }
    }
}

/// The matrix itself followed by successive strips of its outer rows and
/// columns, ending at a 1x1 (odd dimension) or 2x2 (even dimension) core.
pub fn inners(m: &SmallMatrix) -> Vec<SmallMatrix> {
    let mut out = vec![m.clone()];
    while let Some(next) = out.last().and_then(SmallMatrix::strip) {
        out.push(next);
    }
    out
}

/// All inner determinants are strictly positive.
pub fn is_positive_innerwise(m: &SmallMatrix) -> bool {
    inners(m).iter().all(|x| x.det() > 0.0)
}
