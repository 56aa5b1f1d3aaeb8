//! Shared fixtures for the integration suites.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use tamebrauer::brauer::TameClass;
use tamebrauer::lattice::{ValueLattice, Vector};
use tamebrauer::symbols::{FieldModel, SymbolData};

pub fn field_z(rank: usize) -> FieldModel {
    FieldModel::new(BigInt::zero(), ValueLattice::standard(rank)).unwrap()
}

pub fn vi(entries: &[i64]) -> Vector {
    Vector::from_ints(entries.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn vf(entries: &[i64], den: i64) -> Vector {
    Vector::new(entries.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(den)).unwrap()
}

pub fn sym(a: &[i64], b: &[i64], n: i64) -> SymbolData {
    SymbolData::new(vi(a), vi(b), BigInt::from(n)).unwrap()
}

/// Class on Z^m from the strict upper triangle (row-major pairs (i, j, w)).
pub fn class_from_upper(m: usize, level: i64, upper: &[(usize, usize, i64)]) -> TameClass {
    let mut form = vec![vec![BigInt::zero(); m]; m];
    for &(i, j, w) in upper {
        assert!(i < j);
        form[i][j] = BigInt::from(w.rem_euclid(level));
        form[j][i] = BigInt::from((-w).rem_euclid(level));
    }
    TameClass::new(field_z(m), BigInt::from(level), form).unwrap()
}

/// Every skew form over (Z/2)^m, as upper-triangle bit patterns.
pub fn all_f2_classes(m: usize) -> Vec<TameClass> {
    let slots: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    (0u64..1 << slots.len())
        .map(|bits| {
            let upper: Vec<(usize, usize, i64)> = slots
                .iter()
                .enumerate()
                .filter(|(k, _)| bits >> k & 1 == 1)
                .map(|(_, &(i, j))| (i, j, 1))
                .collect();
            class_from_upper(m, 2, &upper)
        })
        .collect()
}

/// A uniformly random class on Z^m at the given level (before
/// canonicalization).
pub fn random_class<R: Rng>(rng: &mut R, m: usize, level: i64) -> TameClass {
    let upper: Vec<(usize, usize, i64)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, rng.gen_range(0..level)))
        .collect();
    class_from_upper(m, level, &upper)
}

/// Trial-division primality for small test values.
pub fn small_prime(n: &BigInt) -> bool {
    use num_traits::ToPrimitive;
    let Some(n) = n.to_u64() else { return false };
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All vectors of (Z/n)^m as integer coordinate vectors.
pub fn all_residue_vectors(m: usize, n: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (0..n).map(move |d| {
                    let mut next = prefix.clone();
                    next.push(d);
                    next
                })
            })
            .collect();
    }
    out
}
