//! Field surrogates over strictly Henselian fields and symbol-algebra
//! presentations: radical-extension and symbol division criteria.
//!
//! The model axiom: over a strictly Henselian field whose residue
//! characteristic q is prime to every degree in play, an element of K* is
//! determined for all criteria here by its value in the lattice, so fields
//! are carried as (q, value lattice, labelled generators) and nothing else.
//! Roots of unity are never materialized; only their tower indices appear.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, ValueLattice, Vector};
use crate::serde_int::big;

/// Deterministic Miller-Rabin for the word-size range we ever see; the same
/// witness set is kept (probabilistically) for larger inputs.
pub(crate) fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &small {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let two = BigInt::from(2);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &small {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A strictly Henselian field surrogate: residue characteristic, value
/// lattice, and an optional name -> value map for distinguished monomial
/// generators. The strictly-Henselian assumption is global and fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub struct FieldModel {
    residue_char: BigInt,
    lattice: ValueLattice,
    labels: BTreeMap<String, Vector>,
}

#[derive(Serialize, Deserialize)]
struct RawField {
    #[serde(with = "big")]
    residue_char: BigInt,
    lattice: ValueLattice,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, Vector>,
}

impl From<FieldModel> for RawField {
    fn from(f: FieldModel) -> RawField {
        RawField { residue_char: f.residue_char, lattice: f.lattice, labels: f.labels }
    }
}

impl TryFrom<RawField> for FieldModel {
    type Error = Error;
    fn try_from(raw: RawField) -> Result<FieldModel> {
        FieldModel::with_labels(raw.residue_char, raw.lattice, raw.labels)
    }
}

impl FieldModel {
    pub fn new(residue_char: BigInt, lattice: ValueLattice) -> Result<FieldModel> {
        FieldModel::with_labels(residue_char, lattice, BTreeMap::new())
    }

    pub fn with_labels(
        residue_char: BigInt,
        lattice: ValueLattice,
        labels: BTreeMap<String, Vector>,
    ) -> Result<FieldModel> {
        if !residue_char.is_zero() && !is_prime(&residue_char) {
            return Err(Error::InvalidInput(format!(
                "residue characteristic must be 0 or prime, got {residue_char}"
            )));
        }
        for (name, v) in &labels {
            if !lattice::member(v, &lattice)? {
                return Err(Error::InvalidInput(format!(
                    "label {name} is not a member of the value lattice"
                )));
            }
        }
        Ok(FieldModel { residue_char, lattice, labels })
    }

    pub fn residue_char(&self) -> &BigInt {
        &self.residue_char
    }

    pub fn lattice(&self) -> &ValueLattice {
        &self.lattice
    }

    pub fn labels(&self) -> &BTreeMap<String, Vector> {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Option<&Vector> {
        self.labels.get(name)
    }

    /// Fixed model assumption.
    pub fn strictly_henselian(&self) -> bool {
        true
    }

    /// Two field models describe the same field when their residue
    /// characteristics and value lattices agree; labels are metadata.
    pub fn same_field(&self, other: &FieldModel) -> bool {
        self.residue_char == other.residue_char && self.lattice == other.lattice
    }

    /// Tameness precondition q coprime to n, checked at every call site.
    pub fn check_tame(&self, n: &BigInt) -> Result<()> {
        if n < &BigInt::one() {
            return Err(Error::InvalidDegree(format!("degree must be >= 1, got {n}")));
        }
        if !self.residue_char.is_zero() && (n % &self.residue_char).is_zero() {
            return Err(Error::TamenessViolation(n.to_string()));
        }
        Ok(())
    }
}

/// A symbol-algebra presentation over its owning field: the values of the
/// two slots and the degree. Degree 1 is accepted as a degenerate input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSymbol", into = "RawSymbol")]
pub struct SymbolData {
    pub a: Vector,
    pub b: Vector,
    pub degree: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawSymbol {
    a: Vector,
    b: Vector,
    #[serde(with = "big")]
    degree: BigInt,
}

impl From<SymbolData> for RawSymbol {
    fn from(s: SymbolData) -> RawSymbol {
        RawSymbol { a: s.a, b: s.b, degree: s.degree }
    }
}

impl TryFrom<RawSymbol> for SymbolData {
    type Error = Error;
    fn try_from(raw: RawSymbol) -> Result<SymbolData> {
        SymbolData::new(raw.a, raw.b, raw.degree)
    }
}

impl SymbolData {
    pub fn new(a: Vector, b: Vector, degree: BigInt) -> Result<SymbolData> {
        if degree < BigInt::one() {
            return Err(Error::InvalidDegree(format!("symbol degree must be >= 1, got {degree}")));
        }
        Ok(SymbolData { a, b, degree })
    }

    /// Slot values must be members of the field's value lattice and the
    /// degree must be tame for it.
    pub fn validate_for(&self, field: &FieldModel) -> Result<()> {
        field.check_tame(&self.degree)?;
        for v in [&self.a, &self.b] {
            if !lattice::member(v, field.lattice())? {
                return Err(Error::NotAMember);
            }
        }
        Ok(())
    }
}

/// One step of a radical extension: adjoin an e-th root of an element with
/// value `vector`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalStep {
    pub vector: Vector,
    #[serde(with = "big")]
    pub degree: BigInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RadicalExtensionSpec {
    pub steps: Vec<RadicalStep>,
}

/// Lemma 6.3 criterion: adjoining an n-th root of an element of value `a`
/// gives a totally ramified extension of degree n exactly when the coset
/// a + n*Gamma has order n in Gamma/n*Gamma.
pub fn is_totally_ramified_radical(field: &FieldModel, a: &Vector, n: &BigInt) -> Result<bool> {
    field.check_tame(n)?;
    let order = lattice::coset_order(a, n, field.lattice())?;
    Ok(&order == n)
}

/// Adjoin roots along `spec`, growing the value lattice by the root values.
/// Fails with `DegreeCollapse` when the growth falls short of the full
/// expected degree (the extension would not be totally ramified).
pub fn radical_extension(field: &FieldModel, spec: &RadicalExtensionSpec) -> Result<FieldModel> {
    let gamma = field.lattice();
    let mut rows = gamma.basis_vectors();
    let mut expected = BigInt::one();
    let mut new_labels: Vec<(String, Vector)> = Vec::new();
    for (i, step) in spec.steps.iter().enumerate() {
        field.check_tame(&step.degree)?;
        if !lattice::member(&step.vector, gamma)? {
            return Err(Error::NotAMember);
        }
        let root = step.vector.divided(&step.degree)?;
        rows.push(root.clone());
        expected *= &step.degree;
        let name = step.label.clone().unwrap_or_else(|| format!("root{}", i + 1));
        new_labels.push((name, root));
    }
    let grown = lattice::canonicalize(&rows, gamma.ambient_rank())?;
    let index = grown.index_over(gamma)?;
    if index != expected {
        return Err(Error::DegreeCollapse {
            expected: expected.to_string(),
            got: index.to_string(),
        });
    }
    let mut labels = field.labels().clone();
    for (name, v) in new_labels {
        if labels.contains_key(&name) {
            return Err(Error::InvalidInput(format!("label {name} already in use")));
        }
        labels.insert(name, v);
    }
    FieldModel::with_labels(field.residue_char().clone(), grown, labels)
}

/// The group of values of n-th powers times the slot element, as a lattice
/// between n*Gamma and Gamma: n*Gamma + Z*a. Over the strictly Henselian
/// model every unit is an n-th power, so this is the whole norm data of the
/// radical extension; its quotient over n*Gamma is cyclic of order n.
pub fn norm_group(field: &FieldModel, a: &Vector, n: &BigInt) -> Result<ValueLattice> {
    if !is_totally_ramified_radical(field, a, n)? {
        return Err(Error::NotTotallyRamified);
    }
    let gamma = field.lattice();
    let mut rows: Vec<Vector> = gamma.basis_vectors().iter().map(|v| v.scaled(n)).collect();
    rows.push(a.clone());
    lattice::canonicalize(&rows, gamma.ambient_rank())
}

/// Lemma 6.4(a) criterion: the symbol algebra is division exactly when the
/// cosets of its two slot values generate a subgroup of Gamma/n*Gamma of
/// order n^2.
pub fn symbol_is_division(field: &FieldModel, sym: &SymbolData) -> Result<bool> {
    sym.validate_for(field)?;
    let gamma = field.lattice();
    let n = &sym.degree;
    let n_gamma = gamma.scaled(n)?;
    let mut rows = n_gamma.basis_vectors();
    rows.push(sym.a.clone());
    rows.push(sym.b.clone());
    let span = lattice::canonicalize(&rows, gamma.ambient_rank())?;
    let order = span.index_over(&n_gamma)?;
    Ok(order == n * n)
}

/// Value lattice of a division symbol: Gamma + Z*(a/n) + Z*(b/n); its
/// quotient over Gamma is (Z/n)^2.
pub fn symbol_value_group(field: &FieldModel, sym: &SymbolData) -> Result<ValueLattice> {
    if !symbol_is_division(field, sym)? {
        return Err(Error::NotDivision);
    }
    let gamma = field.lattice();
    let mut rows = gamma.basis_vectors();
    rows.push(sym.a.divided(&sym.degree)?);
    rows.push(sym.b.divided(&sym.degree)?);
    lattice::canonicalize(&rows, gamma.ambient_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::test_util::*;

    fn field_z(rank: usize) -> FieldModel {
        FieldModel::new(BigInt::zero(), ValueLattice::standard(rank)).unwrap()
    }

    #[test]
    fn primality_check() {
        for p in [2u32, 3, 5, 7, 11, 97, 101] {
            assert!(is_prime(&BigInt::from(p)), "{p}");
        }
        for c in [0u32, 1, 4, 9, 91, 100] {
            assert!(!is_prime(&BigInt::from(c)), "{c}");
        }
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
    }

    #[test]
    fn totally_ramified_radical_criterion() {
        let f = field_z(2);
        assert!(is_totally_ramified_radical(&f, &vec_i64(&[1, 0]), &BigInt::from(3)).unwrap());
        assert!(!is_totally_ramified_radical(&f, &vec_i64(&[3, 0]), &BigInt::from(3)).unwrap());
        assert!(is_totally_ramified_radical(&f, &vec_i64(&[1, 2]), &BigInt::from(2)).unwrap());
    }

    #[test]
    fn tameness_is_enforced() {
        let f = FieldModel::new(BigInt::from(2), ValueLattice::standard(2)).unwrap();
        assert!(matches!(
            is_totally_ramified_radical(&f, &vec_i64(&[1, 0]), &BigInt::from(4)),
            Err(Error::TamenessViolation(_))
        ));
        assert!(is_totally_ramified_radical(&f, &vec_i64(&[1, 0]), &BigInt::from(3)).unwrap());
    }

    #[test]
    fn radical_extension_grows_lattice() {
        // Z^4, adjoin p-th roots of the two Y-directions at p = 3.
        let p = BigInt::from(3);
        let f = field_z(4);
        let spec = RadicalExtensionSpec {
            steps: vec![
                RadicalStep { vector: unit(4, 1), degree: p.clone(), label: None },
                RadicalStep { vector: unit(4, 3), degree: p.clone(), label: None },
            ],
        };
        let grown = radical_extension(&f, &spec).unwrap();
        assert_eq!(grown.lattice().index_over(f.lattice()).unwrap(), BigInt::from(9));
        assert!(lattice::member(&vec_frac(&[0, 1, 0, 0], 3), grown.lattice()).unwrap());
        assert_eq!(grown.label("root1"), Some(&vec_frac(&[0, 1, 0, 0], 3)));
    }

    #[test]
    fn radical_extension_identity_and_collapse() {
        let f = field_z(2);
        let same = radical_extension(&f, &RadicalExtensionSpec::default()).unwrap();
        assert_eq!(same.lattice(), f.lattice());
        let bad = RadicalExtensionSpec {
            steps: vec![RadicalStep { vector: vec_i64(&[2, 0]), degree: BigInt::from(2), label: None }],
        };
        assert!(matches!(radical_extension(&f, &bad), Err(Error::DegreeCollapse { .. })));
    }

    #[test]
    fn norm_group_examples() {
        let f = field_z(2);
        let g = norm_group(&f, &vec_i64(&[1, 0]), &BigInt::from(3)).unwrap();
        // 3Z^2 + Z(1,0), index 3 in Z^2.
        assert_eq!(f.lattice().index_over(&g).unwrap(), BigInt::from(3));
        assert_eq!(
            lattice::quotient_invariants(&f.lattice().scaled(&BigInt::from(3)).unwrap(), &g).unwrap(),
            vec![BigInt::from(3)]
        );

        let g2 = norm_group(&f, &vec_i64(&[1, 1]), &BigInt::from(2)).unwrap();
        assert!(lattice::member(&vec_i64(&[1, 1]), &g2).unwrap());
        assert!(!lattice::member(&vec_i64(&[1, 0]), &g2).unwrap());

        // Degenerate n = 1 returns Gamma itself.
        let g3 = norm_group(&f, &vec_i64(&[5, 7]), &BigInt::one()).unwrap();
        assert_eq!(&g3, f.lattice());

        assert_eq!(
            norm_group(&f, &vec_i64(&[2, 0]), &BigInt::from(2)),
            Err(Error::NotTotallyRamified)
        );
    }

    #[test]
    fn symbol_division_criterion() {
        let f = field_z(2);
        let sym = SymbolData::new(unit(2, 0), unit(2, 1), BigInt::from(4)).unwrap();
        assert!(symbol_is_division(&f, &sym).unwrap());

        let dup = SymbolData::new(unit(2, 0), unit(2, 0), BigInt::from(2)).unwrap();
        assert!(!symbol_is_division(&f, &dup).unwrap());

        // Z^4, a = e1, b = e3 + 2 e1, n = 2: subgroup has order 4.
        let f4 = field_z(4);
        let b = vec_i64(&[2, 0, 1, 0]);
        let sym4 = SymbolData::new(unit(4, 0), b, BigInt::from(2)).unwrap();
        assert!(symbol_is_division(&f4, &sym4).unwrap());
    }

    #[test]
    fn symbol_value_group_examples() {
        let f = field_z(2);
        let sym = SymbolData::new(unit(2, 0), unit(2, 1), BigInt::from(2)).unwrap();
        let vg = symbol_value_group(&f, &sym).unwrap();
        let half = lattice::canonicalize(&[vec_frac(&[1, 0], 2), vec_frac(&[0, 1], 2)], 2).unwrap();
        assert_eq!(vg, half);
        assert_eq!(vg.index_over(f.lattice()).unwrap(), BigInt::from(4));

        let f4 = field_z(4);
        let sym4 = SymbolData::new(unit(4, 0), unit(4, 1), BigInt::from(3)).unwrap();
        let vg4 = symbol_value_group(&f4, &sym4).unwrap();
        assert_eq!(
            lattice::quotient_invariants(f4.lattice(), &vg4).unwrap(),
            vec![BigInt::from(3), BigInt::from(3)]
        );

        let bad = SymbolData::new(unit(2, 0), unit(2, 0), BigInt::from(2)).unwrap();
        assert_eq!(symbol_value_group(&f, &bad), Err(Error::NotDivision));
    }

    #[test]
    fn degenerate_degree_one_symbol() {
        let f = field_z(2);
        let sym = SymbolData::new(unit(2, 0), unit(2, 1), BigInt::one()).unwrap();
        // Order 1 = 1^2: the criterion holds trivially.
        assert!(symbol_is_division(&f, &sym).unwrap());
        assert_eq!(&symbol_value_group(&f, &sym).unwrap(), f.lattice());
    }

    #[test]
    fn field_json_round_trip() {
        let mut labels = BTreeMap::new();
        labels.insert("X1".to_string(), unit(2, 0));
        let f = FieldModel::with_labels(BigInt::zero(), ValueLattice::standard(2), labels).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: FieldModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        // A label outside the lattice is rejected at parse time.
        let bad = r#"{"residue_char":0,"lattice":{"ambient_rank":1,"den":1,"basis":[[1]]},"labels":{"X":{"num":[1],"den":2}}}"#;
        assert!(serde_json::from_str::<FieldModel>(bad).is_err());
    }
}
