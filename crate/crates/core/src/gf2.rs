//! Sparse vectors and matrices over Z2.

use std::cmp::Ordering;

/// A Z2 linear combination of basis indices, stored as a sorted index list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new() -> Self {
        Chain(Vec::new())
    }

    pub fn single(index: usize) -> Self {
        Chain(vec![index])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn toggle(&mut self, index: usize) {
        match self.0.binary_search(&index) {
            Ok(pos) => {
                self.0.remove(pos);
            }
            Err(pos) => self.0.insert(pos, index),
        }
    }

    /// Largest index present.
    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// In-place symmetric difference.
    pub fn add_assign(&mut self, other: &Chain) {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    merged.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    merged.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        self.0 = merged;
    }

    pub fn sum(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Re-indexes every entry through `map` and re-sorts.
    pub fn map_indices(&self, map: impl Fn(usize) -> usize) -> Chain {
        self.0.iter().map(|&i| map(i)).collect()
    }
}

impl FromIterator<usize> for Chain {
    /// Collects with Z2 reduction: an index seen twice cancels.
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        let mut out = Vec::with_capacity(v.len());
        let mut k = 0;
        while k < v.len() {
            let mut run = 1;
            while k + run < v.len() && v[k + run] == v[k] {
                run += 1;
            }
            if run % 2 == 1 {
                out.push(v[k]);
            }
            k += run;
        }
        Chain(out)
    }
}

/// Column-major sparse matrix over Z2. Column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: Vec<Chain>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows, cols: vec![Chain::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix { rows: n, cols: (0..n).map(Chain::single).collect() }
    }

    /// Panics if a column refers to a row outside `0..rows`.
    pub fn from_columns(rows: usize, cols: Vec<Chain>) -> Self {
        for c in &cols {
            if let Some(last) = c.last() {
                assert!(last < rows, "row index {last} out of range for {rows} rows");
            }
        }
        Gf2Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &Chain {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Chain] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.cols[j].contains(i)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Chain::is_zero)
    }

    pub fn apply(&self, v: &Chain) -> Chain {
        let mut out = Chain::new();
        for &j in v.indices() {
            out.add_assign(&self.cols[j]);
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.ncols(), rhs.nrows(), "dimension mismatch");
        Gf2Matrix {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    /// Keeps the rows and columns listed in `keep` (in that order).
    pub fn submatrix(&self, row_keep: &[usize], col_keep: &[usize]) -> Gf2Matrix {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (new, &old) in row_keep.iter().enumerate() {
            row_pos[old] = new;
        }
        let cols = col_keep
            .iter()
            .map(|&j| {
                self.cols[j]
                    .indices()
                    .iter()
                    .filter(|&&i| row_pos[i] != usize::MAX)
                    .map(|&i| row_pos[i])
                    .collect()
            })
            .collect();
        Gf2Matrix { rows: row_keep.len(), cols }
    }

    /// Rank by dense row-echelon elimination on packed bit rows.
    pub fn rank(&self) -> usize {
        let words = self.cols.len().div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &i in col.indices() {
                rows[i][j / 64] |= 1 << (j % 64);
            }
        }
        let mut rank = 0;
        for j in 0..self.cols.len() {
            let (w, bit) = (j / 64, 1u64 << (j % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
