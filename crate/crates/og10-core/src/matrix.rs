//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers and rationals;
//! there is no floating point anywhere in this crate. These routines carry
//! all Gram-matrix computations: normal forms, kernels and linear solving.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator (maintained by `num-rational`).
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| int(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Int> {
        self.row(r).to_vec()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Int::zero();
            for k in 0..self.cols {
                acc += self.at(r, k) * other.at(k, c);
            }
            acc
        })
    }

    /// self * v with v a column vector.
    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * &v[k];
                }
                acc
            })
            .collect()
    }

    /// x * self with x a row vector.
    pub fn row_vec_mul(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.rows, x.len(), "dimension mismatch in vector-matrix product");
        (0..self.cols)
            .map(|c| {
                let mut acc = Int::zero();
                for k in 0..self.rows {
                    acc += &x[k] * self.at(k, c);
                }
                acc
            })
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..r {
                if self.at(r, c) != self.at(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = q * self.at(src, c);
            *self.at_mut(dst, c) += add;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = q * self.at(r, src);
            *self.at_mut(r, dst) += add;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            *self.at_mut(r, c) = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.at(i, k).is_zero()) else {
                    return Int::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j);
                    *m.at_mut(i, j) = num / &prev;
                }
                *m.at_mut(i, k) = Int::zero();
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// gcd of all entries (non-negative; 0 for the zero matrix).
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for e in &self.entries {
            g = g.gcd(e);
        }
        g
    }
}

/// Result of the Smith normal form: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal, `d_1 | d_2 | ... | d_k >= 0`.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form with transforms. Pivoting picks the smallest nonzero
/// absolute value in the remaining block to keep intermediate entries small.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = smallest_nonzero(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'reduce: loop {
            // Clear the pivot column.
            for i in t + 1..rows {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = -rounded_div(d.at(i, t), d.at(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.at(i, t).is_zero() {
                    // Remainder strictly smaller than the pivot; promote it.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    continue 'reduce;
                }
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = -rounded_div(d.at(t, j), d.at(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.at(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    continue 'reduce;
                }
            }
            // Enforce the divisibility chain: the pivot must divide the
            // whole remaining block.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(d.at(i, j) % d.at(t, t)).is_zero() {
                        let one = Int::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        continue 'reduce;
                    }
                }
            }
            break;
        }

        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithNormalForm { u, d, v }
}

fn smallest_nonzero(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            if m.at(i, j).is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.at(bi, bj).abs() <= m.at(i, j).abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Quotient rounded to nearest (ties toward zero), so the remainder has
/// absolute value at most |b|/2.
fn rounded_div(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Result of the row-style Hermite normal form: `t * m = h` with `t`
/// unimodular, `h` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteNormalForm {
    pub h: IntMatrix,
    pub t: IntMatrix,
}

pub fn hermite_normal_form(m: &IntMatrix) -> HermiteNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut t = IntMatrix::identity(rows);

    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclidean reduction within the column until one nonzero survives.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if h.at(i, col).is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h.at(b, col).abs() <= h.at(i, col).abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else {
                break;
            };
            h.swap_rows(pivot_row, b);
            t.swap_rows(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if h.at(i, col).is_zero() {
                    continue;
                }
                let q = -rounded_div(h.at(i, col), h.at(pivot_row, col));
                h.add_row_multiple(i, pivot_row, &q);
                t.add_row_multiple(i, pivot_row, &q);
                if !h.at(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.at(pivot_row, col).is_zero() {
            continue;
        }
        if h.at(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            t.negate_row(pivot_row);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..pivot_row {
            let q = -h.at(i, col).div_floor(h.at(pivot_row, col));
            h.add_row_multiple(i, pivot_row, &q);
            t.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    HermiteNormalForm { h, t }
}

/// Basis of the saturated left kernel `{x : x * m = 0}`, returned as the
/// rows of a matrix in Hermite normal form. The basis is primitive: the
/// kernel lattice equals its saturation because the rows come from a
/// unimodular transform.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(m);
    let mut basis: Vec<Int> = Vec::new();
    let mut count = 0;
    for r in 0..m.rows() {
        if hnf.h.row(r).iter().all(|e| e.is_zero()) {
            basis.extend_from_slice(hnf.t.row(r));
            count += 1;
        }
    }
    let kernel = IntMatrix::new(count, m.rows(), basis);
    // Canonical presentation.
    hermite_normal_form(&kernel).h
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let hnf = hermite_normal_form(m);
    (0..m.rows())
        .filter(|&r| hnf.h.row(r).iter().any(|e| !e.is_zero()))
        .count()
}

/// Exact rational vector.
#[derive(Clone, PartialEq, Eq)]
pub struct RatVector {
    entries: Vec<Rat>,
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector { entries }
    }

    pub fn from_ints(entries: &[Int]) -> Self {
        RatVector {
            entries: entries.iter().map(|e| Rat::from(e.clone())).collect(),
        }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        RatVector {
            entries: entries.iter().map(|&e| Rat::from(int(e))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn scaled(&self, s: &Rat) -> RatVector {
        RatVector {
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Integer entries, or `None` if any entry has a denominator.
    pub fn to_ints(&self) -> Option<Vec<Int>> {
        self.entries
            .iter()
            .map(|e| e.is_integer().then(|| e.to_integer()))
            .collect()
    }

    /// The primitive integer vector spanning the same ray (same direction),
    /// together with the positive rational scale `s` such that
    /// `self = s * primitive`. `None` for the zero vector.
    pub fn primitive_ray(&self) -> Option<(Vec<Int>, Rat)> {
        if self.is_zero() {
            return None;
        }
        let mut denom_lcm = Int::one();
        for e in &self.entries {
            denom_lcm = denom_lcm.lcm(e.denom());
        }
        let ints: Vec<Int> = self
            .entries
            .iter()
            .map(|e| (e * Rat::from(denom_lcm.clone())).to_integer())
            .collect();
        let mut g = Int::zero();
        for e in &ints {
            g = g.gcd(e);
        }
        let prim: Vec<Int> = ints.iter().map(|e| e / &g).collect();
        // self = (g / denom_lcm) * prim
        let scale = Rat::new(g, denom_lcm);
        Some((prim, scale))
    }
}

/// Solve `m * x = b` exactly over the rationals. Returns any solution
/// (free variables set to zero), or `None` when the system is inconsistent.
pub fn solve_rational(m: &IntMatrix, b: &RatVector) -> Option<RatVector> {
    assert_eq!(b.len(), m.rows(), "right-hand side length must equal row count");
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rat> = m.row(r).iter().map(|e| Rat::from(e.clone())).collect();
            row.push(b.entries()[r].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        let Some(p) = (prow..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(prow, p);
        let inv = a[prow][col].recip();
        for e in a[prow].iter_mut() {
            *e = &*e * &inv;
        }
        for r in 0..rows {
            if r != prow && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=cols {
                    let sub = &a[prow][c] * &f;
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
        pivot_cols.push(col);
        prow += 1;
        if prow == rows {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in prow..rows {
        if !a[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = a[i][cols].clone();
    }
    Some(RatVector::new(x))
}

/// Inverse of a square integer matrix over the rationals.
/// Panics if the matrix is singular; callers check the determinant first.
pub fn inverse_rational(m: &IntMatrix) -> Vec<Vec<Rat>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = m.row(r).iter().map(|e| Rat::from(e.clone())).collect();
            for c in 0..n {
                row.push(if c == r { Rat::one() } else { Rat::zero() });
            }
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular matrix has no inverse");
        a.swap(col, p);
        let inv = a[col][col].recip();
        for e in a[col].iter_mut() {
            *e = &*e * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &a[col][c] * &f;
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

pub fn gcd_of(values: impl IntoIterator<Item = Int>) -> Int {
    let mut g = Int::zero();
    for v in values {
        g = g.gcd(&v);
    }
    g
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.determinant().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag_entries(d: &IntMatrix) -> Vec<Int> {
        (0..d.rows().min(d.cols())).map(|i| d.at(i, i).clone()).collect()
    }

    fn check_snf(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        assert!(is_unimodular(&snf.u), "u not unimodular");
        assert!(is_unimodular(&snf.v), "v not unimodular");
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v != d");
        let diag = diag_entries(&snf.d);
        for (i, e) in diag.iter().enumerate() {
            assert!(!e.is_negative(), "diagonal entry negative");
            if i + 1 < diag.len() && !e.is_zero() {
                assert!((&diag[i + 1] % e).is_zero(), "divisibility chain broken");
            }
            if e.is_zero() && i + 1 < diag.len() {
                assert!(diag[i + 1].is_zero(), "zero before nonzero in chain");
            }
        }
        for r in 0..snf.d.rows() {
            for c in 0..snf.d.cols() {
                if r != c {
                    assert!(snf.d.at(r, c).is_zero(), "d not diagonal");
                }
            }
        }
    }

    fn check_hnf(m: &IntMatrix) {
        let hnf = hermite_normal_form(m);
        assert!(is_unimodular(&hnf.t));
        assert_eq!(hnf.t.mul(m), hnf.h, "t*m != h");
        // Echelon shape with positive pivots and reduced columns.
        let mut last_pivot: Option<usize> = None;
        for r in 0..hnf.h.rows() {
            let pivot = (0..hnf.h.cols()).find(|&c| !hnf.h.at(r, c).is_zero());
            match (pivot, last_pivot) {
                (Some(p), Some(lp)) => assert!(p > lp, "pivots not strictly right-moving"),
                (None, _) => {
                    for rr in r..hnf.h.rows() {
                        assert!(hnf.h.row(rr).iter().all(|e| e.is_zero()));
                    }
                    break;
                }
                _ => {}
            }
            if let Some(p) = pivot {
                assert!(hnf.h.at(r, p).is_positive());
                for above in 0..r {
                    assert!(!hnf.h.at(above, p).is_negative());
                    assert!(hnf.h.at(above, p) < hnf.h.at(r, p));
                }
                last_pivot = Some(p);
            }
        }
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::identity(2));
        check_snf(&m);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows_i64(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(diag_entries(&snf.d), vec![int(1), int(6)]);
        check_snf(&m);
    }

    #[test]
    fn snf_a2_negative() {
        // Gram of A2(-1): determinant 3 and content 1 force diag(1, 3).
        let m = IntMatrix::from_rows_i64(&[&[-2, 1], &[1, -2]]);
        assert_eq!(m.determinant(), int(3));
        assert_eq!(m.content(), int(1));
        let snf = smith_normal_form(&m);
        assert_eq!(diag_entries(&snf.d), vec![int(1), int(3)]);
        check_snf(&m);
    }

    #[test]
    fn hnf_examples() {
        let m = IntMatrix::identity(3);
        let hnf = hermite_normal_form(&m);
        assert_eq!(hnf.h, IntMatrix::identity(3));
        assert_eq!(hnf.t, IntMatrix::identity(3));

        let m = IntMatrix::from_rows_i64(&[&[2, 4], &[1, 3]]);
        let hnf = hermite_normal_form(&m);
        // Pivots 1 and 2 as in hand elimination, up to reduction above pivots.
        assert_eq!(*hnf.h.at(0, 0), int(1));
        assert_eq!(*hnf.h.at(1, 1), int(2));
        check_hnf(&m);

        let z = IntMatrix::zero(2, 3);
        let hnf = hermite_normal_form(&z);
        assert!(hnf.h.is_zero());
    }

    #[test]
    fn kernel_examples() {
        // Identity: trivial kernel.
        let k = integer_kernel(&IntMatrix::identity(3));
        assert_eq!(k.rows(), 0);

        // x |-> x1 + x2 as a map out of Z^2.
        let m = IntMatrix::from_rows_i64(&[&[1], &[1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row_vec(0), vec![int(1), int(-1)]);

        // Saturation: (2, -1), not (4, -2).
        let m = IntMatrix::from_rows_i64(&[&[2], &[4]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row_vec(0), vec![int(2), int(-1)]);
    }

    #[test]
    fn kernel_brute_force_box() {
        // Oracle for saturation: every kernel vector in a small box must be
        // an integer combination of the returned basis.
        let m = IntMatrix::from_rows_i64(&[&[2], &[4]]);
        let k = integer_kernel(&m);
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                let v = vec![int(x), int(y)];
                let img = m.row_vec_mul(&v);
                if img.iter().all(|e| e.is_zero()) {
                    // v must be an integer multiple of (2, -1)
                    let b = k.row_vec(0);
                    let prod_check = &v[0] * &b[1] - &v[1] * &b[0];
                    assert!(prod_check.is_zero());
                    assert!((&v[1] % &b[1]).is_zero());
                }
            }
        }
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::identity(3);
        let b = RatVector::from_i64(&[5, -7, 2]);
        assert_eq!(solve_rational(&m, &b).unwrap(), b);

        // Gram of <a, b, sigma> with a^2=2, (a,b)=1, b^2=0, sigma^2=-6.
        let g = IntMatrix::from_rows_i64(&[&[2, 1, 0], &[1, 0, 0], &[0, 0, -6]]);
        let x = solve_rational(&g, &RatVector::from_i64(&[-1, 1, 0])).unwrap();
        assert_eq!(x, RatVector::from_i64(&[1, -3, 0]));

        let x = solve_rational(&g, &RatVector::from_i64(&[1, 0, 4])).unwrap();
        assert_eq!(
            x,
            RatVector::new(vec![rat(0, 1), rat(1, 1), rat(-2, 3)])
        );

        // Inconsistent system.
        let m = IntMatrix::from_rows_i64(&[&[1, 1], &[1, 1]]);
        assert!(solve_rational(&m, &RatVector::from_i64(&[0, 1])).is_none());
    }

    #[test]
    fn determinant_vs_cofactor() {
        fn cofactor_det(m: &IntMatrix) -> Int {
            let n = m.rows();
            if n == 0 {
                return Int::one();
            }
            if n == 1 {
                return m.at(0, 0).clone();
            }
            let mut acc = Int::zero();
            for j in 0..n {
                let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                    m.at(r + 1, if c < j { c } else { c + 1 }).clone()
                });
                let term = m.at(0, j) * cofactor_det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 11) as i64 - 5
        };
        for n in 1..=5usize {
            for _ in 0..20 {
                let m = IntMatrix::from_fn(n, n, |_, _| int(next()));
                let bareiss = m.determinant();
                assert_eq!(bareiss, cofactor_det(&m));
                let snf = smith_normal_form(&m);
                let prod: Int = diag_entries(&snf.d).iter().product();
                assert_eq!(prod, bareiss.abs());
            }
        }
    }

    proptest! {
        #[test]
        fn snf_reconstruction(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let mut s = seed | 1;
            let mut next = move || {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                (s % 15) as i64 - 7
            };
            let m = IntMatrix::from_fn(rows, cols, |_, _| int(next()));
            check_snf(&m);
            check_hnf(&m);
        }

        #[test]
        fn kernel_annihilates_and_saturates(rows in 1usize..5, cols in 1usize..4, seed in any::<u64>()) {
            let mut s = seed | 1;
            let mut next = move || {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                (s % 9) as i64 - 4
            };
            let m = IntMatrix::from_fn(rows, cols, |_, _| int(next()));
            let k = integer_kernel(&m);
            for r in 0..k.rows() {
                let img = m.row_vec_mul(&k.row_vec(r));
                prop_assert!(img.iter().all(|e| e.is_zero()));
            }
            prop_assert_eq!(k.rows() + rank(&m), rows);
            // Saturation: gcd of maximal minors of k is 1.
            if k.rows() > 0 {
                let snf = smith_normal_form(&k);
                let diag: Vec<Int> = (0..k.rows()).map(|i| snf.d.at(i, i).clone()).collect();
                prop_assert!(diag.iter().all(|e| e.is_one()));
            }
        }

        #[test]
        fn solve_roundtrip(n in 1usize..5, seed in any::<u64>()) {
            let mut s = seed | 1;
            let mut next = move || {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                (s % 9) as i64 - 4
            };
            let m = IntMatrix::from_fn(n, n, |_, _| int(next()));
            let x: Vec<Int> = (0..n).map(|_| int(next())).collect();
            let b = RatVector::from_ints(&m.mul_vec(&x));
            let sol = solve_rational(&m, &b).expect("m*x = b is consistent by construction");
            let mx: Vec<Rat> = m.mul_vec(&x).iter().map(|e| Rat::from(e.clone())).collect();
            let msol: Vec<Rat> = (0..n).map(|r| {
                let mut acc = Rat::zero();
                for c in 0..n {
                    acc += Rat::from(m.at(r, c).clone()) * &sol.entries()[c];
                }
                acc
            }).collect();
            prop_assert_eq!(mx, msol);
        }
    }
}
