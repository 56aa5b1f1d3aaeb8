//! Exact integer matrix kernel: Hermite and Smith normal forms, integral
//! left-division, and the alternating congruence normal form used for
//! tame Brauer classes. Everything is arbitrary-precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        debug_assert!(rows.iter().all(|row| row.len() == c));
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntMat {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= k;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = k * &self[(src, j)];
            self[(dst, j)] += add;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = k * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Row Hermite normal form: row-echelon with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Returns the echelon matrix
/// (nonzero rows first) and its rank.
pub(crate) fn hnf(mat: &IntMat) -> (IntMat, usize) {
    let mut h = mat.clone();
    let rank = hnf_in_place(&mut h, None);
    (h, rank)
}

/// As `hnf`, additionally returning a unimodular `U` with `U * mat = H`.
pub(crate) fn hnf_with_transform(mat: &IntMat) -> (IntMat, IntMat, usize) {
    let mut h = mat.clone();
    let mut u = IntMat::identity(mat.rows);
    let rank = hnf_in_place(&mut h, Some(&mut u));
    (h, u, rank)
}

fn hnf_in_place(a: &mut IntMat, mut transform: Option<&mut IntMat>) -> usize {
    let mut r = 0;
    for col in 0..a.cols {
        if r == a.rows {
            break;
        }
        // Euclidean elimination below row r in this column.
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..a.rows {
                if !a[(i, col)].is_zero()
                    && pivot.is_none_or(|p| a[(i, col)].abs() < a[(p, col)].abs())
                {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else { break };
            a.swap_rows(r, p);
            if let Some(u) = transform.as_deref_mut() {
                u.swap_rows(r, p);
            }
            let mut clean = true;
            for i in r + 1..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, col)] / &a[(r, col)]);
                a.add_row_multiple(i, r, &q);
                if let Some(u) = transform.as_deref_mut() {
                    u.add_row_multiple(i, r, &q);
                }
                if !a[(i, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[(r, col)].is_zero() {
            continue;
        }
        if a[(r, col)].is_negative() {
            a.negate_row(r);
            if let Some(u) = transform.as_deref_mut() {
                u.negate_row(r);
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = -a[(i, col)].div_floor(&a[(r, col)]);
            a.add_row_multiple(i, r, &q);
            if let Some(u) = transform.as_deref_mut() {
                u.add_row_multiple(i, r, &q);
            }
        }
        r += 1;
    }
    r
}

/// Signed determinant by fraction-free (Bareiss) elimination.
pub(crate) fn det(mat: &IntMat) -> BigInt {
    assert_eq!(mat.rows, mat.cols);
    let n = mat.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = mat.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Smith normal form diagonal of an arbitrary integer matrix: nonnegative
/// invariant factors d_1 | d_2 | ... (including trailing zeros for rank
/// deficiency), length min(rows, cols).
pub(crate) fn snf_diagonal(mat: &IntMat) -> Vec<BigInt> {
    let mut a = mat.clone();
    let n = a.rows.min(a.cols);
    let mut t = 0;
    while t < n {
        // Find a nonzero entry of least absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|p| a[(i, j)].abs() < a[p].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        // Clear row and column t; restart whenever a remainder survives.
        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                if !a[(i, t)].is_zero() {
                    a.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..a.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Make the pivot divide every remaining entry.
        let mut fixed = true;
        'scan: for i in t + 1..a.rows {
            for j in t + 1..a.cols {
                if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                    a.add_row_multiple(t, i, &BigInt::one());
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    let mut out: Vec<BigInt> = (0..n).map(|i| a[(i, i)].abs()).collect();
    // Zeros (if any) belong at the tail of the chain.
    out.sort_by_key(|d| d.is_zero());
    out
}

/// Solve `X * A = target` over the integers for square nonsingular `A`.
/// Returns `None` when no integral solution exists.
pub(crate) fn solve_left(target: &IntMat, a: &IntMat) -> Option<IntMat> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(target.cols, a.cols);
    let (h, u, rank) = hnf_with_transform(a);
    if rank < a.rows {
        return None;
    }
    // X * A = T  <=>  Y * H = T with X = Y * U.
    let m = a.rows;
    let mut y = IntMat::zero(target.rows, m);
    for i in 0..target.rows {
        for j in 0..m {
            let mut acc = target[(i, j)].clone();
            for k in 0..j {
                acc -= &y[(i, k)] * &h[(k, j)];
            }
            let (q, r) = acc.div_rem(&h[(j, j)]);
            if !r.is_zero() {
                return None;
            }
            y[(i, j)] = q;
        }
    }
    Some(y.mul(&u))
}

/// Result of the alternating congruence normal form mod N.
pub(crate) struct SkewNf {
    /// Block pivots d_1 | d_2 | ... over Z, each nonzero mod N, reduced into (0, N).
    pub block_pivots: Vec<BigInt>,
    /// Unimodular matrix whose row k holds the Gamma-basis coordinates of the
    /// normal-form basis vector f_k, so that W = sum_j d_j f_{2j-1} ^ f_{2j} (mod N).
    pub basis: IntMat,
}

fn reduce_symmetric(x: &BigInt, n: &BigInt) -> BigInt {
    let mut r = x.mod_floor(n);
    if &r + &r > *n {
        r -= n;
    }
    r
}

/// Bring a skew-symmetric integer matrix to block form
/// diag([[0,d_1],[-d_1,0]], ..., 0) mod `n` under a single unimodular
/// congruence P W P^T, with d_1 | d_2 | ... over Z.
pub(crate) fn skew_normal_form(w: &IntMat, n: &BigInt) -> SkewNf {
    let m = w.rows;
    assert_eq!(w.cols, m);
    let mut a = w.clone();
    // p_inv tracks P^{-1}; the normal-form basis is its transpose.
    let mut p_inv = IntMat::identity(m);

    let reduce = |a: &mut IntMat| {
        for i in 0..m {
            a[(i, i)] = BigInt::zero();
            for j in i + 1..m {
                let r = reduce_symmetric(&a[(i, j)], n);
                a[(j, i)] = -r.clone();
                a[(i, j)] = r;
            }
        }
    };

    let mut pivots = Vec::new();
    let mut t = 0;
    while t + 1 < m {
        reduce(&mut a);
        // Least nonzero entry (mod n) of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in i + 1..m {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|b| a[(i, j)].abs() < a[b].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };

        // Simultaneous row/column moves keep skew-symmetry; p_inv takes the
        // inverse column operation each time.
        let swap = |a: &mut IntMat, p_inv: &mut IntMat, x: usize, y: usize| {
            a.swap_rows(x, y);
            a.swap_cols(x, y);
            p_inv.swap_cols(x, y);
        };
        swap(&mut a, &mut p_inv, t, bi);
        let bj = if bj == t { bi } else { bj };
        swap(&mut a, &mut p_inv, t + 1, bj);

        loop {
            // Clear row t beyond column t+1 (pivot a[t][t+1]) and row t+1
            // beyond (pivot a[t+1][t]); by skewness the columns follow.
            let mut exact = true;
            for j in t + 2..m {
                if !a[(t, j)].is_zero() {
                    let q = -(&a[(t, j)] / &a[(t, t + 1)]);
                    a.add_row_multiple(j, t + 1, &q);
                    a.add_col_multiple(j, t + 1, &q);
                    p_inv.add_col_multiple(t + 1, j, &(-&q));
                    if !a[(t, j)].is_zero() {
                        exact = false;
                    }
                }
                if !a[(t + 1, j)].is_zero() {
                    let q = &a[(t + 1, j)] / &a[(t, t + 1)];
                    a.add_row_multiple(j, t, &q);
                    a.add_col_multiple(j, t, &q);
                    p_inv.add_col_multiple(t, j, &(-&q));
                    if !a[(t + 1, j)].is_zero() {
                        exact = false;
                    }
                }
            }
            if !exact {
                // Remainders are smaller than the old pivot; reselect.
                let mut best = (t, t + 1);
                for i in t..m {
                    for j in i + 1..m {
                        if !a[(i, j)].is_zero() && a[(i, j)].abs() < a[best].abs() {
                            best = (i, j);
                        }
                    }
                }
                let (bi, bj) = best;
                swap(&mut a, &mut p_inv, t, bi);
                let bj = if bj == t { bi } else { bj };
                swap(&mut a, &mut p_inv, t + 1, bj);
                continue;
            }
            // Divisibility: the pivot must divide the trailing block.
            let mut carried = false;
            'outer: for i in t + 2..m {
                for j in t + 2..m {
                    if !(&a[(i, j)] % &a[(t, t + 1)]).is_zero() {
                        a.add_row_multiple(t, i, &BigInt::one());
                        a.add_col_multiple(t, i, &BigInt::one());
                        p_inv.add_col_multiple(i, t, &(-BigInt::one()));
                        carried = true;
                        break 'outer;
                    }
                }
            }
            if !carried {
                break;
            }
        }
        if a[(t, t + 1)].is_negative() {
            a.negate_row(t);
            a.negate_col(t);
            p_inv.negate_col(t);
        }
        let d = a[(t, t + 1)].mod_floor(n);
        debug_assert!(!d.is_zero());
        pivots.push(d);
        t += 2;
    }
    SkewNf { block_pivots: pivots, basis: p_inv.transpose() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    #[test]
    fn hnf_canonicalizes_redundant_generators() {
        let (h, rank) = hnf(&m(&[&[2, 0], &[0, 1], &[1, 0]]));
        assert_eq!(rank, 2);
        assert_eq!(h.row(0), &[BigInt::from(1), BigInt::from(0)]);
        assert_eq!(h.row(1), &[BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn hnf_reduces_above_pivot() {
        let (h, rank) = hnf(&m(&[&[2, 7], &[0, 3]]));
        assert_eq!(rank, 2);
        // 7 mod 3 = 1
        assert_eq!(h.row(0), &[BigInt::from(2), BigInt::from(1)]);
        assert_eq!(h.row(1), &[BigInt::from(0), BigInt::from(3)]);
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let a = m(&[&[4, 6], &[2, 5], &[1, 1]]);
        let (h, u, rank) = hnf_with_transform(&a);
        assert_eq!(rank, 2);
        assert_eq!(u.mul(&a), h);
        assert_eq!(det(&u).abs(), BigInt::one());
    }

    #[test]
    fn snf_of_diag_2_3() {
        let d = snf_diagonal(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn snf_handles_rank_deficiency() {
        let d = snf_diagonal(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(d, vec![BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn solve_left_detects_non_integrality() {
        let a = m(&[&[2, 0], &[0, 1]]);
        assert!(solve_left(&m(&[&[1, 0]]), &a).is_none());
        let x = solve_left(&m(&[&[4, 3]]), &a).unwrap();
        assert_eq!(x.row(0), &[BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn skew_normal_form_mixed_block() {
        // g1^g3 + 2 g2^g3 at modulus 4 collapses to a single block d=1.
        let w = m(&[&[0, 0, 1], &[0, 0, 2], &[-1, -2, 0]]);
        let nf = skew_normal_form(&w, &BigInt::from(4));
        assert_eq!(nf.block_pivots, vec![BigInt::one()]);
        // Reconstruct: sum_j d_j f_{2j-1} ^ f_{2j} must equal w mod 4.
        let f1 = nf.basis.row(0);
        let f2 = nf.basis.row(1);
        for i in 0..3 {
            for j in 0..3 {
                let expect = (&f1[i] * &f2[j] - &f1[j] * &f2[i]).mod_floor(&BigInt::from(4));
                assert_eq!(w[(i, j)].mod_floor(&BigInt::from(4)), expect);
            }
        }
        assert_eq!(det(&nf.basis).abs(), BigInt::one());
    }
}
