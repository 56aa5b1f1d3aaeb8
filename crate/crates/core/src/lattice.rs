//! Finitely generated full-rank subgroups of Q^m in canonical form:
//! membership, sums, intersections, quotient invariants, and coset orders.
//! All arithmetic is arbitrary-precision exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMat};
use crate::serde_int::{big, big_mat, big_vec};

pub const ORDER_TAG: &str = "inverse-lexicographic";

/// A rational vector `num / den` with `den > 0` and
/// `gcd(den, gcd(num)) = 1` after reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVector", into = "RawVector")]
pub struct Vector {
    num: Vec<BigInt>,
    den: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawVector {
    #[serde(with = "big_vec")]
    num: Vec<BigInt>,
    #[serde(with = "big")]
    den: BigInt,
}

impl From<Vector> for RawVector {
    fn from(v: Vector) -> RawVector {
        RawVector { num: v.num, den: v.den }
    }
}

impl TryFrom<RawVector> for Vector {
    type Error = Error;
    fn try_from(raw: RawVector) -> Result<Vector> {
        Vector::new(raw.num, raw.den)
    }
}

impl Vector {
    pub fn new(num: Vec<BigInt>, den: BigInt) -> Result<Vector> {
        if den.is_zero() {
            return Err(Error::InvalidInput("vector denominator must be nonzero".into()));
        }
        let mut v = Vector { num, den };
        if v.den.is_negative() {
            v.den = -v.den;
            for x in &mut v.num {
                *x = -x.clone();
            }
        }
        let mut g = v.den.clone();
        for x in &v.num {
            g = g.gcd(x);
        }
        if g > BigInt::one() {
            v.den /= &g;
            for x in &mut v.num {
                *x /= &g;
            }
        }
        Ok(v)
    }

    /// Integer vector (denominator 1).
    pub fn from_ints(entries: Vec<BigInt>) -> Vector {
        Vector::new(entries, BigInt::one()).unwrap()
    }

    pub fn zero(rank: usize) -> Vector {
        Vector { num: vec![BigInt::zero(); rank], den: BigInt::one() }
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_rank(other.rank())?;
        let den = self.den.lcm(&other.den);
        let (sa, sb) = (&den / &self.den, &den / &other.den);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &sa + b * &sb)
            .collect();
        Vector::new(num, den)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Vector {
        Vector { num: self.num.iter().map(|x| -x.clone()).collect(), den: self.den.clone() }
    }

    pub fn scaled(&self, k: &BigInt) -> Vector {
        Vector::new(self.num.iter().map(|x| x * k).collect(), self.den.clone()).unwrap()
    }

    /// `self / k` for nonzero integer `k`.
    pub fn divided(&self, k: &BigInt) -> Result<Vector> {
        if k.is_zero() {
            return Err(Error::InvalidInput("division of a vector by zero".into()));
        }
        Vector::new(self.num.clone(), &self.den * k)
    }

    fn check_rank(&self, other: usize) -> Result<()> {
        if self.rank() != other {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: other });
        }
        Ok(())
    }
}

/// A full-rank finitely generated subgroup of Q^m, stored as a row Hermite
/// normal form over a minimal common denominator so equal lattices have
/// identical representations. Models v(K), v(L), v(D).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct ValueLattice {
    ambient_rank: usize,
    den: BigInt,
    basis: Vec<Vec<BigInt>>,
    /// Descriptive ordering marker; metadata only, never consulted.
    order_tag: String,
}

#[derive(Serialize, Deserialize)]
struct RawLattice {
    ambient_rank: usize,
    #[serde(with = "big")]
    den: BigInt,
    #[serde(with = "big_mat")]
    basis: Vec<Vec<BigInt>>,
}

impl From<ValueLattice> for RawLattice {
    fn from(l: ValueLattice) -> RawLattice {
        RawLattice { ambient_rank: l.ambient_rank, den: l.den, basis: l.basis }
    }
}

impl TryFrom<RawLattice> for ValueLattice {
    type Error = Error;
    fn try_from(raw: RawLattice) -> Result<ValueLattice> {
        if raw.basis.len() != raw.ambient_rank
            || raw.basis.iter().any(|r| r.len() != raw.ambient_rank)
        {
            return Err(Error::InvalidInput(format!(
                "lattice basis must be {0}x{0}",
                raw.ambient_rank
            )));
        }
        if raw.den.is_zero() || raw.den.is_negative() {
            return Err(Error::InvalidInput("lattice denominator must be positive".into()));
        }
        let rows: Vec<Vector> = raw
            .basis
            .into_iter()
            .map(|r| Vector::new(r, raw.den.clone()))
            .collect::<Result<_>>()?;
        canonicalize(&rows, raw.ambient_rank)
    }
}

impl ValueLattice {
    /// Z^m.
    pub fn standard(rank: usize) -> ValueLattice {
        ValueLattice {
            ambient_rank: rank,
            den: BigInt::one(),
            basis: IntMat::identity(rank).to_rows(),
            order_tag: ORDER_TAG.to_string(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn order_tag(&self) -> &str {
        &self.order_tag
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::new(self.basis[i].clone(), self.den.clone()).unwrap()
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.ambient_rank).map(|i| self.basis_vector(i)).collect()
    }

    fn basis_mat(&self) -> IntMat {
        IntMat::from_rows(self.basis.clone())
    }

    /// Coordinates of `v` in the lattice basis; `NotAMember` if `v` is not in
    /// the lattice.
    pub fn coordinates(&self, v: &Vector) -> Result<Vec<BigInt>> {
        if v.rank() != self.ambient_rank {
            return Err(Error::DimensionMismatch { expected: self.ambient_rank, got: v.rank() });
        }
        // x * (B/d) = num/den  <=>  x * B = (d/den) * num, valid only if den | d.
        let (q, r) = self.den.div_rem(v.den());
        if !r.is_zero() {
            return Err(Error::NotAMember);
        }
        let target = IntMat::from_rows(vec![v.num().iter().map(|x| x * &q).collect()]);
        match matrix::solve_left(&target, &self.basis_mat()) {
            Some(x) => Ok(x.row(0).to_vec()),
            None => Err(Error::NotAMember),
        }
    }

    /// The lattice `k * self` for a positive integer `k`.
    pub fn scaled(&self, k: &BigInt) -> Result<ValueLattice> {
        if !k.is_positive() {
            return Err(Error::InvalidInput("lattice scale must be positive".into()));
        }
        let rows: Vec<Vector> = self.basis_vectors().iter().map(|v| v.scaled(k)).collect();
        canonicalize(&rows, self.ambient_rank)
    }

    pub fn contains(&self, other: &ValueLattice) -> Result<bool> {
        if other.ambient_rank != self.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank,
                got: other.ambient_rank,
            });
        }
        Ok(other.basis_vectors().iter().all(|v| member(v, self).unwrap_or(false)))
    }

    /// `[self : sub]` as a positive integer; `NotASublattice` when `sub` is
    /// not contained in `self`.
    pub fn index_over(&self, sub: &ValueLattice) -> Result<BigInt> {
        let inv = quotient_invariants(sub, self)?;
        Ok(inv.iter().product())
    }
}

/// Canonicalize a finite generating set into a `ValueLattice`.
/// Idempotent and independent of generator order.
pub fn canonicalize(rows: &[Vector], ambient_rank: usize) -> Result<ValueLattice> {
    if rows.is_empty() {
        return Err(Error::RankDeficient);
    }
    for v in rows {
        if v.rank() != ambient_rank {
            return Err(Error::DimensionMismatch { expected: ambient_rank, got: v.rank() });
        }
    }
    let mut den = BigInt::one();
    for v in rows {
        den = den.lcm(v.den());
    }
    let scaled: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|v| {
            let s = &den / v.den();
            v.num().iter().map(|x| x * &s).collect()
        })
        .collect();
    let (h, rank) = matrix::hnf(&IntMat::from_rows(scaled));
    if rank < ambient_rank {
        return Err(Error::RankDeficient);
    }
    let mut g = den.clone();
    for i in 0..ambient_rank {
        for x in h.row(i) {
            g = g.gcd(x);
        }
    }
    let basis: Vec<Vec<BigInt>> =
        (0..ambient_rank).map(|i| h.row(i).iter().map(|x| x / &g).collect()).collect();
    Ok(ValueLattice {
        ambient_rank,
        den: den / g,
        basis,
        order_tag: ORDER_TAG.to_string(),
    })
}

/// Exact membership test.
pub fn member(v: &Vector, lattice: &ValueLattice) -> Result<bool> {
    if v.rank() != lattice.ambient_rank() {
        return Err(Error::DimensionMismatch { expected: lattice.ambient_rank(), got: v.rank() });
    }
    match lattice.coordinates(v) {
        Ok(_) => Ok(true),
        Err(Error::NotAMember) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Lattice sum, via the concatenated generating sets.
pub fn sum(l1: &ValueLattice, l2: &ValueLattice) -> Result<ValueLattice> {
    if l1.ambient_rank() != l2.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: l1.ambient_rank(),
            got: l2.ambient_rank(),
        });
    }
    let mut rows = l1.basis_vectors();
    rows.extend(l2.basis_vectors());
    canonicalize(&rows, l1.ambient_rank())
}

/// Exact lattice intersection, via the integer kernel of the stacked bases.
pub fn intersect(l1: &ValueLattice, l2: &ValueLattice) -> Result<ValueLattice> {
    if l1.ambient_rank() != l2.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: l1.ambient_rank(),
            got: l2.ambient_rank(),
        });
    }
    let m = l1.ambient_rank();
    let den = l1.den().lcm(l2.den());
    let s1 = &den / l1.den();
    let s2 = &den / l2.den();
    let a = l1.basis_mat().scale(&s1);
    let b = l2.basis_mat().scale(&s2);
    // x*A = y*B  <=>  (x | -y) lies in the left kernel of [A; B].
    let mut stacked = a.to_rows();
    stacked.extend(b.to_rows());
    let stacked = IntMat::from_rows(stacked);
    let (h, u, rank) = matrix::hnf_with_transform(&stacked);
    debug_assert_eq!(rank, m);
    let _ = h;
    let mut rows = Vec::new();
    for k in rank..2 * m {
        // Kernel row: first m transform coefficients combine rows of A.
        let mut combo = vec![BigInt::zero(); m];
        for (i, coeff) in u.row(k)[..m].iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (j, entry) in a.row(i).iter().enumerate() {
                combo[j] += coeff * entry;
            }
        }
        rows.push(Vector::new(combo, den.clone())?);
    }
    canonicalize(&rows, m)
}

/// Elementary divisor chain of `sup / sub` (Smith normal form of the
/// coordinate matrix), with unit entries trimmed. The product of the chain
/// is the index `[sup : sub]`.
pub fn quotient_invariants(sub: &ValueLattice, sup: &ValueLattice) -> Result<Vec<BigInt>> {
    if sub.ambient_rank() != sup.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: sup.ambient_rank(),
            got: sub.ambient_rank(),
        });
    }
    // Each sub basis row in sup coordinates: x * Bsup = (dsup/dsub) * Bsub.
    let (scale, rem) = sup.den().div_rem(sub.den());
    if !rem.is_zero() {
        return Err(Error::NotASublattice);
    }
    let target = sub.basis_mat().scale(&scale);
    let coords = matrix::solve_left(&target, &sup.basis_mat()).ok_or(Error::NotASublattice)?;
    let diag = matrix::snf_diagonal(&coords);
    debug_assert!(diag.iter().all(|d| !d.is_zero()));
    Ok(diag.into_iter().filter(|d| !d.is_one()).collect())
}

/// Order of the coset `v + n*L` in `L / n*L`; divides `n`.
pub fn coset_order(v: &Vector, n: &BigInt, lattice: &ValueLattice) -> Result<BigInt> {
    if n < &BigInt::one() {
        return Err(Error::InvalidDegree(format!("coset order needs n >= 1, got {n}")));
    }
    let coords = lattice.coordinates(v)?;
    let mut g = n.clone();
    for c in &coords {
        g = g.gcd(c);
    }
    Ok(n / g)
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    pub fn vec_i64(entries: &[i64]) -> Vector {
        Vector::from_ints(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn vec_frac(entries: &[i64], den: i64) -> Vector {
        Vector::new(entries.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(den)).unwrap()
    }

    pub fn unit(rank: usize, i: usize) -> Vector {
        let mut v = vec![BigInt::zero(); rank];
        v[i] = BigInt::one();
        Vector::from_ints(v)
    }
}

#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;

    #[test]
    fn canonicalize_identity_case() {
        let l = canonicalize(&[vec_i64(&[1, 0]), vec_i64(&[0, 1])], 2).unwrap();
        assert_eq!(l, ValueLattice::standard(2));
        assert_eq!(l.den(), &BigInt::one());
    }

    #[test]
    fn canonicalize_absorbs_redundant_generator() {
        let l = canonicalize(&[vec_i64(&[2, 0]), vec_i64(&[0, 1]), vec_i64(&[1, 0])], 2).unwrap();
        assert_eq!(l, ValueLattice::standard(2));
    }

    #[test]
    fn canonicalize_half_integer_direction() {
        // Z(1,0) + Z(0,1/2): den 2, HNF basis rows (2,0),(0,1).
        let l = canonicalize(&[vec_i64(&[1, 0]), vec_frac(&[0, 1], 2)], 2).unwrap();
        assert_eq!(l.den(), &BigInt::from(2));
        assert_eq!(l.basis()[0], vec![BigInt::from(2), BigInt::zero()]);
        assert_eq!(l.basis()[1], vec![BigInt::zero(), BigInt::one()]);
        assert!(member(&vec_frac(&[0, 1], 2), &l).unwrap());
        assert!(member(&vec_i64(&[1, 0]), &l).unwrap());
        assert!(!member(&vec_frac(&[1, 0], 2), &l).unwrap());
    }

    #[test]
    fn canonicalize_rejects_rank_deficiency() {
        assert_eq!(
            canonicalize(&[vec_i64(&[1, 0]), vec_i64(&[2, 0])], 2),
            Err(Error::RankDeficient)
        );
    }

    #[test]
    fn canonicalize_rejects_dimension_mismatch() {
        assert!(matches!(
            canonicalize(&[vec_i64(&[1, 0, 0])], 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_in_standard_lattice() {
        let z2 = ValueLattice::standard(2);
        assert!(member(&vec_i64(&[1, 1]), &z2).unwrap());
        assert!(!member(&vec_frac(&[1, 0], 2), &z2).unwrap());
    }

    #[test]
    fn sum_with_containment() {
        let z2 = ValueLattice::standard(2);
        let half = canonicalize(&[vec_frac(&[1, 0], 2), vec_i64(&[0, 1])], 2).unwrap();
        assert_eq!(sum(&z2, &half).unwrap(), half);
    }

    #[test]
    fn intersect_coordinatewise() {
        let a = canonicalize(&[vec_frac(&[1, 0], 2), vec_i64(&[0, 1])], 2).unwrap();
        let b = canonicalize(&[vec_i64(&[1, 0]), vec_frac(&[0, 1], 2)], 2).unwrap();
        assert_eq!(intersect(&a, &b).unwrap(), ValueLattice::standard(2));
        assert_eq!(intersect(&a, &a).unwrap(), a);
    }

    #[test]
    fn quotient_invariants_examples() {
        let z2 = ValueLattice::standard(2);
        let sup = canonicalize(&[vec_i64(&[1, 0]), vec_frac(&[0, 1], 2)], 2).unwrap();
        assert_eq!(quotient_invariants(&z2, &sup).unwrap(), vec![BigInt::from(2)]);

        let sub = canonicalize(&[vec_i64(&[2, 0]), vec_i64(&[0, 3])], 2).unwrap();
        assert_eq!(quotient_invariants(&sub, &z2).unwrap(), vec![BigInt::from(6)]);

        assert!(quotient_invariants(&z2, &z2).unwrap().is_empty());
        assert_eq!(z2.index_over(&sub).unwrap(), BigInt::from(6));
    }

    #[test]
    fn quotient_invariants_rejects_non_sublattice() {
        let z2 = ValueLattice::standard(2);
        let half = canonicalize(&[vec_frac(&[1, 0], 2), vec_i64(&[0, 1])], 2).unwrap();
        assert_eq!(quotient_invariants(&half, &z2), Err(Error::NotASublattice));
    }

    #[test]
    fn coset_order_examples() {
        let z2 = ValueLattice::standard(2);
        let n = BigInt::from(4);
        assert_eq!(coset_order(&vec_i64(&[1, 0]), &n, &z2).unwrap(), BigInt::from(4));
        assert_eq!(coset_order(&vec_i64(&[2, 0]), &n, &z2).unwrap(), BigInt::from(2));
        assert_eq!(coset_order(&vec_i64(&[0, 0]), &n, &z2).unwrap(), BigInt::one());
        assert_eq!(coset_order(&vec_i64(&[0, 0]), &BigInt::from(7), &z2).unwrap(), BigInt::one());
    }

    #[test]
    fn coset_order_rejects_bad_input() {
        let z2 = ValueLattice::standard(2);
        assert_eq!(coset_order(&vec_frac(&[1, 0], 2), &BigInt::from(2), &z2), Err(Error::NotAMember));
        assert!(matches!(
            coset_order(&vec_i64(&[1, 0]), &BigInt::zero(), &z2),
            Err(Error::InvalidDegree(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let l = canonicalize(&[vec_i64(&[1, 0]), vec_frac(&[0, 1], 2)], 2).unwrap();
        let text = serde_json::to_string(&l).unwrap();
        assert!(text.contains("\"ambient_rank\":2"));
        let back: ValueLattice = serde_json::from_str(&text).unwrap();
        assert_eq!(back, l);
        // A non-canonical basis parses to the same lattice.
        let loose: ValueLattice =
            serde_json::from_str(r#"{"ambient_rank":2,"den":2,"basis":[[2,0],[2,1]]}"#).unwrap();
        assert_eq!(loose, l);
    }
}
