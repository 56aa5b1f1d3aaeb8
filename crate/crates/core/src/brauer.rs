//! Tame totally ramified Brauer classes as exterior-square data over the
//! value lattice: class arithmetic, index/exponent/value-group invariants
//! via the alternating normal form, scalar extension, tensor-division and
//! embedding criteria, p-quasilocality, and primary decomposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, ValueLattice, Vector};
use crate::matrix::{self, IntMat};
use crate::serde_int::{big, big_mat};
use crate::symbols::{self, FieldModel, SymbolData};

/// A tame totally ramified Brauer class over its field: an element
/// `omega = sum_{i<j} W[i][j] g_i ^ g_j` of the exterior square of
/// `Gamma/N*Gamma` in lattice-basis coordinates. Stored canonically:
/// N minimal (so N equals the exponent of the class) with entries in [0, N)
/// and `W[j][i] = (N - W[i][j]) mod N`. A symbol (a, b, n) contributes
/// `(N/n) * a ^ b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawClass", into = "RawClass")]
pub struct TameClass {
    field: FieldModel,
    level: BigInt,
    form: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct RawClass {
    field: FieldModel,
    #[serde(with = "big")]
    level: BigInt,
    #[serde(with = "big_mat")]
    form: Vec<Vec<BigInt>>,
}

impl From<TameClass> for RawClass {
    fn from(c: TameClass) -> RawClass {
        RawClass { field: c.field, level: c.level, form: c.form }
    }
}

impl TryFrom<RawClass> for TameClass {
    type Error = Error;
    fn try_from(raw: RawClass) -> Result<TameClass> {
        TameClass::new(raw.field, raw.level, raw.form)
    }
}

impl TameClass {
    /// Validate and canonicalize a class given at some level. The input form
    /// must be skew-symmetric mod the level with zero diagonal.
    pub fn new(field: FieldModel, level: BigInt, form: Vec<Vec<BigInt>>) -> Result<TameClass> {
        let m = field.lattice().ambient_rank();
        if level < BigInt::one() {
            return Err(Error::InvalidDegree(format!("class level must be >= 1, got {level}")));
        }
        field.check_tame(&level)?;
        if form.len() != m || form.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: form.len() });
        }
        for i in 0..m {
            if !form[i][i].mod_floor(&level).is_zero() {
                return Err(Error::InvalidInput("class form must have zero diagonal".into()));
            }
            for j in i + 1..m {
                if !(&form[i][j] + &form[j][i]).mod_floor(&level).is_zero() {
                    return Err(Error::InvalidInput(
                        "class form must be skew-symmetric mod the level".into(),
                    ));
                }
            }
        }
        Ok(TameClass::canonical(field, level, form))
    }

    /// The zero class over a field.
    pub fn zero(field: FieldModel) -> TameClass {
        let m = field.lattice().ambient_rank();
        TameClass { field, level: BigInt::one(), form: IntMat::zero(m, m).to_rows() }
    }

    fn canonical(field: FieldModel, level: BigInt, form: Vec<Vec<BigInt>>) -> TameClass {
        let m = field.lattice().ambient_rank();
        let mut g = level.clone();
        let mut reduced = vec![vec![BigInt::zero(); m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let w = form[i][j].mod_floor(&level);
                g = g.gcd(&w);
                reduced[i][j] = w;
            }
        }
        let new_level = &level / &g;
        for i in 0..m {
            for j in i + 1..m {
                let w = (&reduced[i][j] / &g).mod_floor(&new_level);
                reduced[j][i] = (&new_level - &w).mod_floor(&new_level);
                reduced[i][j] = w;
            }
        }
        TameClass { field, level: new_level, form: reduced }
    }

    pub fn field(&self) -> &FieldModel {
        &self.field
    }

    /// Canonical level; equals the exponent of the class.
    pub fn level(&self) -> &BigInt {
        &self.level
    }

    pub fn form(&self) -> &[Vec<BigInt>] {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.level.is_one()
    }

    fn form_mat(&self) -> IntMat {
        // Integer skew-symmetric lift of the stored residues.
        let m = self.form.len();
        let mut w = IntMat::zero(m, m);
        for i in 0..m {
            for j in i + 1..m {
                w[(i, j)] = self.form[i][j].clone();
                w[(j, i)] = -self.form[i][j].clone();
            }
        }
        w
    }
}

/// Invariants of the underlying division algebra of a tame class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraInvariants {
    #[serde(with = "big")]
    pub index: BigInt,
    #[serde(with = "big")]
    pub exponent: BigInt,
    /// Non-increasing chain m_1, m_2, ... with m_{j+1} | m_j; unit blocks dropped.
    #[serde(with = "crate::serde_int::big_vec")]
    pub divisors: Vec<BigInt>,
    pub value_lattice: ValueLattice,
}

/// Build the class of a tensor product of symbol algebras.
pub fn class_from_symbols(field: &FieldModel, syms: &[SymbolData]) -> Result<TameClass> {
    let gamma = field.lattice();
    let m = gamma.ambient_rank();
    let mut level = BigInt::one();
    for s in syms {
        s.validate_for(field)?;
        level = level.lcm(&s.degree);
    }
    field.check_tame(&level)?;
    let mut w = IntMat::zero(m, m);
    for s in syms {
        let weight = &level / &s.degree;
        let ca = gamma.coordinates(&s.a)?;
        let cb = gamma.coordinates(&s.b)?;
        for i in 0..m {
            for j in 0..m {
                let add = &weight * (&ca[i] * &cb[j] - &cb[i] * &ca[j]);
                w[(i, j)] += add;
            }
        }
    }
    Ok(TameClass::canonical(field.clone(), level, w.to_rows()))
}

/// Sum of two classes over the same field (tensor product of algebras).
pub fn add(c1: &TameClass, c2: &TameClass) -> Result<TameClass> {
    if !c1.field.same_field(&c2.field) {
        return Err(Error::FieldMismatch);
    }
    let level = c1.level.lcm(&c2.level);
    let (s1, s2) = (&level / &c1.level, &level / &c2.level);
    let m = c1.form.len();
    let mut w = vec![vec![BigInt::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            w[i][j] = &c1.form[i][j] * &s1 + &c2.form[i][j] * &s2;
        }
    }
    Ok(TameClass::canonical(c1.field.clone(), level, w))
}

/// Class of the opposite algebra.
pub fn neg(c: &TameClass) -> TameClass {
    let m = c.form.len();
    let mut w = vec![vec![BigInt::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            w[i][j] = (&c.level - &c.form[i][j]).mod_floor(&c.level);
        }
    }
    TameClass::canonical(c.field.clone(), c.level.clone(), w)
}

/// The class `nu * [C]`; any integer multiplier is accepted.
pub fn scale(c: &TameClass, nu: &BigInt) -> TameClass {
    let m = c.form.len();
    let mut w = vec![vec![BigInt::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            w[i][j] = (&c.form[i][j] * nu).mod_floor(&c.level);
        }
    }
    TameClass::canonical(c.field.clone(), c.level.clone(), w)
}

struct NormalForm {
    /// (m_j, f_{2j-1}, f_{2j}, u_j) per nontrivial block: block order m_j > 1,
    /// the two lattice lifts of the normal-form basis pair, and the unit
    /// u_j = d_j / gcd(d_j, N) mod m_j.
    blocks: Vec<(BigInt, Vector, Vector, BigInt)>,
}

fn normal_form(c: &TameClass) -> NormalForm {
    let gamma = c.field.lattice();
    let nf = matrix::skew_normal_form(&c.form_mat(), &c.level);
    let mut blocks = Vec::new();
    for (j, d) in nf.block_pivots.iter().enumerate() {
        let g = d.gcd(&c.level);
        let m_j = &c.level / &g;
        if m_j.is_one() {
            continue;
        }
        let lift = |row: &[BigInt]| -> Vector {
            let mut num = vec![BigInt::zero(); gamma.ambient_rank()];
            for (l, coeff) in row.iter().enumerate() {
                for (t, entry) in gamma.basis()[l].iter().enumerate() {
                    num[t] += coeff * entry;
                }
            }
            Vector::new(num, gamma.den().clone()).unwrap()
        };
        let f1 = lift(nf.basis.row(2 * j));
        let f2 = lift(nf.basis.row(2 * j + 1));
        let u = (d / &g).mod_floor(&m_j);
        blocks.push((m_j, f1, f2, u));
    }
    NormalForm { blocks }
}

/// Index, exponent, divisor chain and value lattice of the underlying
/// division algebra, through the alternating normal form of the class.
pub fn invariants(c: &TameClass) -> AlgebraInvariants {
    let gamma = c.field.lattice();
    let nf = normal_form(c);
    let mut index = BigInt::one();
    let mut divisors = Vec::new();
    let mut rows = gamma.basis_vectors();
    for (m_j, f1, f2, _) in &nf.blocks {
        index *= m_j;
        divisors.push(m_j.clone());
        rows.push(f1.divided(m_j).unwrap());
        rows.push(f2.divided(m_j).unwrap());
    }
    let value_lattice = lattice::canonicalize(&rows, gamma.ambient_rank()).unwrap();
    debug_assert_eq!(
        divisors.first().cloned().unwrap_or_else(BigInt::one),
        c.level,
        "largest divisor must equal the canonical level"
    );
    AlgebraInvariants { index, exponent: c.level.clone(), divisors, value_lattice }
}

/// Draxl decomposition: symbol presentations read off the normal form. The
/// result is a list of division symbols whose class sum is exactly `c`.
pub fn draxl_decomposition(c: &TameClass) -> Vec<SymbolData> {
    let nf = normal_form(c);
    nf.blocks
        .into_iter()
        .map(|(m_j, f1, f2, u)| SymbolData::new(f1.scaled(&u), f2, m_j).unwrap())
        .collect()
}

/// Scalar extension along `Gamma <= Gamma'`: the congruence `S^T W S` where
/// `S` expresses the Gamma-basis in Gamma'-coordinates.
pub fn extend_scalars(c: &TameClass, target: &FieldModel) -> Result<TameClass> {
    if c.field.residue_char() != target.residue_char() {
        return Err(Error::FieldMismatch);
    }
    let gamma = c.field.lattice();
    let gamma_p = target.lattice();
    if gamma_p.ambient_rank() != gamma.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: gamma.ambient_rank(),
            got: gamma_p.ambient_rank(),
        });
    }
    if !gamma_p.contains(gamma)? {
        return Err(Error::NotAnExtension);
    }
    let ext_index = gamma_p.index_over(gamma)?;
    let q = c.field.residue_char();
    if !q.is_zero() && !ext_index.gcd(q).is_one() {
        return Err(Error::TamenessViolation(ext_index.to_string()));
    }
    let mut s_rows = Vec::new();
    for v in gamma.basis_vectors() {
        s_rows.push(gamma_p.coordinates(&v)?);
    }
    let s = IntMat::from_rows(s_rows);
    let w = s.transpose().mul(&c.form_mat()).mul(&s);
    Ok(TameClass::canonical(target.clone(), c.level.clone(), w.to_rows()))
}

/// Draxl/Morandi criterion: the tensor product of the underlying division
/// algebras is division exactly when the sum of their value groups over
/// Gamma is direct, i.e. the index of the lattice sum is the product of the
/// individual indices.
pub fn tensor_is_division(classes: &[TameClass]) -> Result<bool> {
    let Some(first) = classes.first() else { return Ok(true) };
    let gamma = first.field.lattice();
    let mut product = BigInt::one();
    let mut joint = gamma.clone();
    for c in classes {
        if !c.field.same_field(&first.field) {
            return Err(Error::FieldMismatch);
        }
        let inv = invariants(c);
        product *= inv.value_lattice.index_over(gamma)?;
        joint = lattice::sum(&joint, &inv.value_lattice)?;
    }
    Ok(joint.index_over(gamma)? == product)
}

/// Embedding criterion for a division algebra of degree `d` with class
/// `csub` into the division algebra of `cbig`:
/// `ind(cbig - csub) = ind(cbig)/d`. Necessary and sufficient at matching
/// degrees for division inputs; inputs where `d` differs from the index of
/// `csub` are rejected.
pub fn embeds(csub: &TameClass, d: &BigInt, cbig: &TameClass) -> Result<bool> {
    if !csub.field.same_field(&cbig.field) {
        return Err(Error::FieldMismatch);
    }
    let sub_index = invariants(csub).index;
    if &sub_index != d {
        return Err(Error::NotDivision);
    }
    let big_index = invariants(cbig).index;
    let (quota, rem) = big_index.div_rem(d);
    if !rem.is_zero() {
        return Err(Error::NonDivisibleDegrees {
            degree: d.to_string(),
            index: big_index.to_string(),
        });
    }
    let difference = add(cbig, &neg(csub))?;
    Ok(invariants(&difference).index == quota)
}

/// Lemma 6.7: the model field is p-quasilocal exactly when Gamma/p*Gamma has
/// order less than p^3, i.e. the lattice rank is at most 2.
pub fn p_quasilocal(field: &FieldModel, p: &BigInt) -> Result<bool> {
    if !symbols::is_prime(p) {
        return Err(Error::InvalidInput(format!("p_quasilocal needs a prime, got {p}")));
    }
    field.check_tame(p)?;
    Ok(field.lattice().ambient_rank() <= 2)
}

/// Primary decomposition of a class along the prime factors of its level.
/// The parts re-sum to the class and the index is multiplicative.
pub fn primary_decompose(c: &TameClass) -> BTreeMap<BigInt, TameClass> {
    let mut parts = BTreeMap::new();
    let mut rest = c.level.clone();
    let mut p = BigInt::from(2);
    while &rest > &BigInt::one() {
        if (&p * &p) > c.level && rest > BigInt::one() {
            p = rest.clone();
        }
        if (&rest % &p).is_zero() {
            let mut pe = BigInt::one();
            while (&rest % &p).is_zero() {
                rest /= &p;
                pe *= &p;
            }
            let cofactor = &c.level / &pe;
            let unit = cofactor.modpow(&(&pe - &pe.clone().div_floor(&p) - BigInt::one()), &pe);
            // unit = cofactor^{phi(pe)-1} = cofactor^{-1} mod pe
            parts.insert(p.clone(), scale(c, &(&unit * &cofactor)));
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    parts
}

/// Largest tame totally ramified index exponent achievable over the model
/// field at the prime p: floor(rank/2) (the count of symplectic blocks).
pub fn brd_tame_bound(field: &FieldModel, p: &BigInt) -> Result<u64> {
    if !symbols::is_prime(p) {
        return Err(Error::InvalidInput(format!("brd_tame_bound needs a prime, got {p}")));
    }
    field.check_tame(p)?;
    Ok((field.lattice().ambient_rank() / 2) as u64)
}
