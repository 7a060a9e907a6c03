//! Linear algebra over the fraction field of the polynomial ring, plus
//! dense exact rational matrices for pointwise work.
//!
//! Generic rank is computed by fraction-free (Bareiss) elimination over the
//! polynomial ring after clearing denominators row by row, which keeps
//! intermediate entries polynomial and controls coefficient growth.

use num_traits::Zero;

use super::poly::Poly;
use super::ratfun::RatFun;
use super::Rat;

/// A rows x cols matrix of rational functions, row major.
#[derive(Clone, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<RatFun>,
}

impl Mat {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFun) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Mat { rows, cols, entries }
    }

    pub fn from_poly_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged matrix");
        }
        let entries = rows
            .into_iter()
            .flatten()
            .map(RatFun::from_poly)
            .collect();
        Mat { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &RatFun {
        &self.entries[r * self.cols + c]
    }

    /// Exact evaluation at a point; `None` when any denominator vanishes.
    pub fn eval(&self, point: &[Rat]) -> Option<Vec<Vec<Rat>>> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                row.push(self.at(r, c).eval(point)?);
            }
            out.push(row);
        }
        Some(out)
    }

    /// Rows rescaled to a common polynomial denominator (rank preserving).
    fn cleared_rows(&self) -> Vec<Vec<Poly>> {
        assert!(self.cols > 0 && self.rows > 0);
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut den = Poly::one(self.at(r, 0).vars());
            for c in 0..self.cols {
                let d = self.at(r, c).den();
                if !d.is_constant() {
                    den = &den * d;
                }
            }
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                let e = self.at(r, c);
                let scaled = (&den * e.num()).divexact(e.den()).expect("row denominator divides");
                row.push(scaled);
            }
            out.push(row);
        }
        out
    }

    fn entry_vars(&self) -> &super::poly::Vars {
        self.entries
            .first()
            .map(|e| e.vars())
            .expect("empty matrix has no chart")
    }
}

/// Rank of `m` over the fraction field: the maximal r such that some r x r
/// minor is a nonzero rational function.
pub fn generic_rank(m: &Mat) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a = m.cleared_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev: Option<Poly> = None;
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        // First nonzero entry in the untouched block, scanning column major.
        let mut pivot = None;
        'search: for c in step..cols {
            for r in step..rows {
                if !a[r][c].is_zero() {
                    pivot = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        a.swap(step, pr);
        if pc != step {
            for row in a.iter_mut() {
                row.swap(step, pc);
            }
        }
        let piv = a[step][step].clone();
        for r in step + 1..rows {
            for c in step + 1..cols {
                let mut t = &(&piv * &a[r][c]) - &(&a[r][step] * &a[step][c]);
                if let Some(p) = &prev {
                    t = t.divexact(p).expect("Bareiss division is exact");
                }
                a[r][c] = t;
            }
            a[r][step] = Poly::zero(piv.vars());
        }
        prev = Some(piv);
        rank += 1;
    }
    rank
}

/// Rank of `m` evaluated at a rational point; `None` when a denominator of
/// `m` vanishes there.
pub fn numeric_rank(m: &Mat, point: &[Rat]) -> Option<usize> {
    Some(RMat::new(m.eval(point)?).rank())
}

/// Solve `m * c = v` over the fraction field.
///
/// Returns `None` when the system is inconsistent. When solutions exist the
/// returned one is supported on the lexicographically first maximal
/// independent column set (free coefficients are zero).
pub fn solve_membership(m: &Mat, v: &[RatFun]) -> Option<Vec<RatFun>> {
    assert_eq!(v.len(), m.rows, "right-hand side length mismatch");
    if m.cols == 0 {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let vars = m.entry_vars().clone();
    let rows = m.rows;
    let cols = m.cols;
    // Augmented elimination over the fraction field.
    let mut a: Vec<Vec<RatFun>> = (0..rows)
        .map(|r| {
            let mut row: Vec<RatFun> = (0..cols).map(|c| m.at(r, c).clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pr) = (next_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(next_row, pr);
        let inv = a[next_row][col].recip();
        for c in col..=cols {
            a[next_row][c] = &a[next_row][c] * &inv;
        }
        for r in 0..rows {
            if r != next_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=cols {
                    let t = &a[r][c] - &(&f * &a[next_row][c]);
                    a[r][c] = t;
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    // Inconsistent iff a zeroed row has nonzero right-hand side.
    for r in next_row..rows {
        if !a[r][cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![RatFun::zero(&vars); cols];
    for (i, &col) in pivot_cols.iter().enumerate() {
        sol[col] = a[i][cols].clone();
    }
    Some(sol)
}

/// Canonical basis of the right kernel of `m` over the fraction field:
/// free columns in increasing order, each set to one.
pub fn nullspace_sym(m: &Mat) -> Vec<Vec<RatFun>> {
    let rows = m.rows;
    let cols = m.cols;
    if cols == 0 {
        return Vec::new();
    }
    let vars = m.entry_vars().clone();
    let mut a: Vec<Vec<RatFun>> = (0..rows)
        .map(|r| (0..cols).map(|c| m.at(r, c).clone()).collect())
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pr) = (next_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(next_row, pr);
        let inv = a[next_row][col].recip();
        for c in col..cols {
            a[next_row][c] = &a[next_row][c] * &inv;
        }
        for r in 0..rows {
            if r != next_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    let t = &a[r][c] - &(&f * &a[next_row][c]);
                    a[r][c] = t;
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![RatFun::zero(&vars); cols];
        v[free] = RatFun::one(&vars);
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&a[i][free];
        }
        basis.push(v);
    }
    basis
}

/// Dense exact rational matrix for pointwise linear algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat {
    rows: Vec<Vec<Rat>>,
}

impl RMat {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), c, "ragged matrix");
        }
        RMat { rows }
    }

    pub fn from_cols(cols: Vec<Vec<Rat>>) -> Self {
        let nr = cols.first().map_or(0, |c| c.len());
        let rows = (0..nr)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        RMat { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// Row-reduce in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let (nr, nc) = (self.nrows(), self.ncols());
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..nc {
            let Some(pr) = (row..nr).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, pr);
            let inv = Rat::from_integer(1.into()) / self.rows[row][col].clone();
            for c in col..nc {
                let t = &self.rows[row][c] * &inv;
                self.rows[row][c] = t;
            }
            for r in 0..nr {
                if r != row && !self.rows[r][col].is_zero() {
                    let f = self.rows[r][col].clone();
                    for c in col..nc {
                        let t = &self.rows[r][c] - &(&f * &self.rows[row][c]);
                        self.rows[r][c] = t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == nr {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Canonical basis of the right kernel (free columns in increasing
    /// order, each set to one).
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let nc = self.ncols();
        let mut red = self.clone();
        let pivots = red.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..nc {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); nc];
            v[free] = Rat::from_integer(1.into());
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.rows[i][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.nrows());
        let nc = self.ncols();
        let mut aug = self.clone();
        for (r, row) in aug.rows.iter_mut().enumerate() {
            row.push(b[r].clone());
        }
        let pivots = aug.rref();
        // A pivot in the augmented column means inconsistency.
        if pivots.contains(&nc) {
            return None;
        }
        let mut x = vec![Rat::zero(); nc];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.rows[i][nc].clone();
        }
        Some(x)
    }

    /// Row concatenation.
    pub fn stack(&self, other: &RMat) -> RMat {
        assert!(self.rows.is_empty() || other.rows.is_empty() || self.ncols() == other.ncols());
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        RMat { rows }
    }
}

/// Do the column spans of `a` and `b` intersect trivially? Both are lists of
/// vectors of equal length.
pub fn spans_intersect_trivially(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let ra = RMat::new(a.to_vec()).rank();
    let rb = RMat::new(b.to_vec()).rank();
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    RMat::new(all).rank() == ra + rb
}

/// Is the span of `inner` contained in the span of `outer`?
pub fn span_contained(inner: &[Vec<Rat>], outer: &[Vec<Rat>]) -> bool {
    let ro = RMat::new(outer.to_vec()).rank();
    let mut all = outer.to_vec();
    all.extend(inner.iter().cloned());
    RMat::new(all).rank() == ro
}

/// Basis of the intersection of the two spans (vectors as rows).
pub fn span_intersection(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let dim = a[0].len();
    // Solve sum_i x_i a_i - sum_j y_j b_j = 0; intersection vectors are the
    // a-parts of the kernel.
    let cols = a.len() + b.len();
    let mut rows = vec![vec![Rat::zero(); cols]; dim];
    for (i, v) in a.iter().enumerate() {
        for (r, entry) in v.iter().enumerate() {
            rows[r][i] = entry.clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (r, entry) in v.iter().enumerate() {
            rows[r][a.len() + j] = -entry.clone();
        }
    }
    let kernel = RMat::new(rows).nullspace();
    let mut vecs = Vec::new();
    for k in kernel {
        let mut v = vec![Rat::zero(); dim];
        for (i, av) in a.iter().enumerate() {
            for (r, entry) in av.iter().enumerate() {
                v[r] += &k[i] * entry;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            vecs.push(v);
        }
    }
    // Reduce to an independent canonical basis.
    let mut m = RMat::new(vecs);
    let piv = m.rref();
    m.rows.truncate(piv.len());
    m.rows
}
