//! Sparse matrices over arbitrary-precision rationals, with the Gaussian
//! elimination primitives (rank, kernel, solve-with-certificate, inverse)
//! everything else is built on.
//!
//! Elimination uses the leftmost column, lowest row index pivot rule, so all
//! derived choices (kernel bases, cohomology representatives, solutions) are
//! reproducible from the input alone.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The ground field: rationals in lowest terms.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(n.into(), d.into())
}

/// Immutable-after-construction sparse matrix keyed by (row, col).
/// Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, it: &[(usize, usize, Rat)]) -> Self {
        let mut m = SparseMat::zero(rows, cols);
        for (r, c, v) in it {
            let cur = m.get(*r, *c) + v;
            m.set(*r, *c, cur);
        }
        m
    }

    /// Dense column vectors -> matrix with those columns.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = SparseMat::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rat) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        // entries are keyed row-major, so a full scan is the simple exact way
        let mut out = vec![Rat::zero(); self.rows];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.cols];
        for (&(rr, c), v) in self.entries.range((r, 0)..=(r, self.cols.max(1) - 1)) {
            debug_assert_eq!(rr, r);
            out[c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut m = SparseMat::zero(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            m.set(c, r, v.clone());
        }
        m
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut m = self.clone();
        for (r, c, v) in other.iter() {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparseMat {
        let mut m = SparseMat::zero(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m.set(r, c, -v.clone());
        }
        m
    }

    pub fn scale(&self, s: &Rat) -> SparseMat {
        let mut m = SparseMat::zero(self.rows, self.cols);
        if s.is_zero() {
            return m;
        }
        for (r, c, v) in self.iter() {
            m.set(r, c, s * v);
        }
        m
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        // group self's entries by column for cache-friendly sparse product
        let mut by_col: BTreeMap<usize, Vec<(usize, &Rat)>> = BTreeMap::new();
        for (r, c, v) in self.iter() {
            by_col.entry(c).or_default().push((r, v));
        }
        let mut m = SparseMat::zero(self.rows, other.cols);
        for (k, c, v) in other.iter() {
            if let Some(lhs) = by_col.get(&k) {
                for (r, w) in lhs {
                    m.add_to(*r, c, &(*w * v));
                }
            }
        }
        m
    }

    /// self * dense column vector.
    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, x.len(), "shape mismatch in mat-vec");
        let mut out = vec![Rat::zero(); self.rows];
        for (r, c, v) in self.iter() {
            if !x[c].is_zero() {
                out[r] += v * &x[c];
            }
        }
        out
    }

    fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut d = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    /// Row-reduce to RREF. Returns the reduced matrix, the transform T with
    /// T * self = rref, and the pivot list (row, col) in column order.
    pub fn rref(&self) -> Rref {
        let mut a = self.to_dense();
        let mut t = vec![vec![Rat::zero(); self.rows]; self.rows];
        for (i, row) in t.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next_row = 0usize;
        for col in 0..self.cols {
            if next_row >= self.rows {
                break;
            }
            // leftmost column, lowest row index pivot
            let Some(p) = (next_row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(next_row, p);
            t.swap(next_row, p);
            let inv = a[next_row][col].recip();
            for x in a[next_row].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            for x in t[next_row].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            for r in 0..self.rows {
                if r != next_row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c2 in 0..self.cols {
                        if !a[next_row][c2].is_zero() {
                            let sub = &a[next_row][c2] * &f;
                            a[r][c2] -= sub;
                        }
                    }
                    for c2 in 0..self.rows {
                        if !t[next_row][c2].is_zero() {
                            let sub = &t[next_row][c2] * &f;
                            t[r][c2] -= sub;
                        }
                    }
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
        }
        let dense_to_sparse = |d: &Vec<Vec<Rat>>, rows: usize, cols: usize| {
            let mut m = SparseMat::zero(rows, cols);
            for (r, row) in d.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        m.set(r, c, v.clone());
                    }
                }
            }
            m
        };
        Rref {
            rref: dense_to_sparse(&a, self.rows, self.cols),
            transform: dense_to_sparse(&t, self.rows, self.rows),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Ordered kernel basis (columns), one vector per free column, with a 1 in
    /// the free coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let rr = self.rref();
        let pivot_cols: Vec<usize> = rr.pivots.iter().map(|&(_, c)| c).collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for &(r, c) in &rr.pivots {
                let coef = rr.rref.get(r, free);
                if !coef.is_zero() {
                    v[c] = -coef;
                }
            }
            out.push(v);
        }
        out
    }

    /// Solve self * X = b exactly. On inconsistency returns a certificate
    /// functional f (a row vector) with f * self = 0 and f * (column `col` of
    /// b) nonzero.
    pub fn solve(&self, b: &SparseMat) -> Result<SparseMat, SolveCertificate> {
        assert_eq!(self.rows, b.rows, "shape mismatch in solve");
        let rr = self.rref();
        let tb = rr.transform.mul(b);
        // rows below the last pivot of rref are zero rows; tb must vanish there
        let rank = rr.pivots.len();
        for r in rank..self.rows {
            for c in 0..b.cols {
                let v = tb.get(r, c);
                if !v.is_zero() {
                    return Err(SolveCertificate {
                        functional: rr.transform.row(r),
                        col: c,
                        value: v,
                    });
                }
            }
        }
        let mut x = SparseMat::zero(self.cols, b.cols);
        for &(r, pc) in &rr.pivots {
            for c in 0..b.cols {
                let v = tb.get(r, c);
                if !v.is_zero() {
                    x.set(pc, c, v);
                }
            }
        }
        Ok(x)
    }

    /// Exact inverse; panics if not square, error if singular.
    pub fn inverse(&self) -> Option<SparseMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        self.solve(&SparseMat::identity(self.rows)).ok().filter(|x| {
            // solve() with full rank already guarantees this; keep the check cheap
            x.rows == self.rows
        })
    }

    /// Entry-wise max of |numerator|,|denominator| bit size, for debugging.
    pub fn max_abs_num(&self) -> Rat {
        self.entries
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

/// Result of row reduction: rref = transform * original.
pub struct Rref {
    pub rref: SparseMat,
    pub transform: SparseMat,
    pub pivots: Vec<(usize, usize)>,
}

/// Witness that A X = b is unsolvable: functional * A = 0 but
/// functional * b[col] = value != 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveCertificate {
    pub functional: Vec<Rat>,
    pub col: usize,
    pub value: Rat,
}
