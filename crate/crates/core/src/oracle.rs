//! Independent brute-force computations validating the normal-form and
//! criterion implementations on small instances. Deliberately naive: full
//! enumeration over machine integers, no normal forms, no shared code path
//! with the optimized implementations.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::brauer::TameClass;
use crate::error::{Error, Result};
use crate::symbols::{FieldModel, SymbolData};
use crate::tower::{self, SweepBackend, TowerLevel, UniqueCenterReport};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::InvalidInput(format!("{what} too large for the oracle: {x}")))
}

fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed: needed.to_string(), budget: budget.to_string() });
    }
    Ok(())
}

/// Index of the underlying division algebra by radical counting: enumerate
/// Gamma/N*Gamma, count the radical {x : W x = 0 mod N}, and return
/// sqrt(N^m / |radical|). The nondegenerate quotient of an alternating
/// pairing has square order, so a non-square signals an implementation bug.
pub fn oracle_index(class: &TameClass, budget: u64) -> Result<BigInt> {
    let n = to_i64(class.level(), "class level")?;
    let m = class.field().lattice().ambient_rank();
    let mut states: u128 = 1;
    for _ in 0..m {
        states = states.saturating_mul(n as u128);
    }
    check_budget(states, budget)?;
    let w: Vec<Vec<i64>> = class
        .form()
        .iter()
        .map(|row| row.iter().map(|x| to_i64(x, "form entry")).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let mut radical: u128 = 0;
    let mut x = vec![0i64; m];
    loop {
        let in_radical = w
            .iter()
            .all(|row| x.iter().zip(row).map(|(xj, wj)| xj * wj).sum::<i64>() % n == 0);
        if in_radical {
            radical += 1;
        }
        if !advance(&mut x, n) {
            break;
        }
    }
    if states % radical != 0 {
        return Err(Error::NonSquareQuotient);
    }
    let quotient = states / radical;
    let mut root: u128 = 1;
    while root * root < quotient {
        root += 1;
    }
    if root * root != quotient {
        return Err(Error::NonSquareQuotient);
    }
    Ok(BigInt::from(root))
}

fn advance(digits: &mut [i64], base: i64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Lemma 6.4(a) by direct closure enumeration: count the subgroup generated
/// by the two slot cosets in Gamma/n*Gamma and compare with n^2.
pub fn oracle_symbol_division(field: &FieldModel, sym: &SymbolData, budget: u64) -> Result<bool> {
    sym.validate_for(field)?;
    let n = to_i64(&sym.degree, "symbol degree")?;
    check_budget((n as u128) * (n as u128), budget)?;
    let gamma = field.lattice();
    let coord = |v: &crate::lattice::Vector| -> Result<Vec<i64>> {
        gamma
            .coordinates(v)?
            .iter()
            .map(|c| to_i64(&c.mod_floor(&BigInt::from(n)), "coordinate"))
            .collect()
    };
    let ca = coord(&sym.a)?;
    let cb = coord(&sym.b)?;
    let m = ca.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for i in 0..n {
        for j in 0..n {
            let pt: Vec<i64> = (0..m).map(|t| (i * ca[t] + j * cb[t]).rem_euclid(n)).collect();
            seen.insert(pt);
        }
    }
    Ok(seen.len() as u128 == (n as u128) * (n as u128))
}

struct OracleBackend {
    budget: u64,
}

impl SweepBackend for OracleBackend {
    fn symbol_division(&self, field: &FieldModel, sym: &SymbolData) -> Result<bool> {
        oracle_symbol_division(field, sym, self.budget)
    }
    fn class_index(&self, class: &TameClass) -> Result<BigInt> {
        oracle_index(class, self.budget)
    }
}

/// Re-run the unique-centre sweep with every index computation routed
/// through `oracle_index` and the division filter through
/// `oracle_symbol_division`; must produce the same survivor set as the tower
/// verifier.
pub fn oracle_unique_center(level: &TowerLevel, budget: u64) -> Result<UniqueCenterReport> {
    tower::unique_center_sweep(level, budget, &OracleBackend { budget })
}
