//! The counterexample tower: level data (generators, mu-exponents, centre
//! lattice, class of R_n), the step substitutions, and desk-scale
//! verification of the unique-centre and centre-intersection claims.
//!
//! Monomials are modeled additively as exponent vectors over the original
//! variables X_1, Y_1, ..., X_{n_max}, Y_{n_max}; the multiplicative
//! substitutions of the construction become integer vector identities. The
//! noncommutative relation calculus behind them is not executed; its
//! conclusion (the new symbol decomposition) is the construction rule, and
//! every consequence the value-group model can express is re-verified here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::brauer::{self, AlgebraInvariants, TameClass};
use crate::error::{Error, Result};
use crate::lattice::{self, ValueLattice, Vector};
use crate::matrix::{self, IntMat};
use crate::serde_int::big;
use crate::symbols::{self, FieldModel, SymbolData};

/// One stage of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    n: usize,
    n_max: usize,
    p: BigInt,
    residue_char: BigInt,
    /// Exponent vectors of the monomial generators, padded to 2*n_max
    /// coordinates; all level-n data lives in the first 2n.
    x_vecs: Vec<Vec<BigInt>>,
    y_vecs: Vec<Vec<BigInt>>,
    mu: Vec<u32>,
    k_field: FieldModel,
    z_field: FieldModel,
    d_class: TameClass,
}

fn unit_vec(len: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[i] = BigInt::one();
    v
}

fn truncated(v: &[BigInt], rank: usize) -> Vector {
    Vector::from_ints(v[..rank].to_vec())
}

impl TowerLevel {
    /// First level: X_{1,1} = X_1, Y_{1,1} = Y_1, mu(1,1) = 1, embedded in an
    /// ambient of 2*n_max coordinates.
    pub fn base(p: BigInt, n_max: usize, residue_char: BigInt) -> Result<TowerLevel> {
        if n_max == 0 {
            return Err(Error::InvalidInput("tower needs n_max >= 1".into()));
        }
        let width = 2 * n_max;
        TowerLevel::assemble(
            p,
            residue_char,
            n_max,
            vec![unit_vec(width, 0)],
            vec![unit_vec(width, 1)],
            vec![1],
        )
    }

    /// The degree-p^mu tensor-product algebra over the standard generators:
    /// X_u at coordinate 2u-2, Y_u at 2u-1. Level n = mu.len().
    pub fn standard(p: BigInt, mu: &[u32], residue_char: BigInt) -> Result<TowerLevel> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::InvalidInput("standard level needs at least one exponent".into()));
        }
        let width = 2 * n;
        let x_vecs = (0..n).map(|u| unit_vec(width, 2 * u)).collect();
        let y_vecs = (0..n).map(|u| unit_vec(width, 2 * u + 1)).collect();
        TowerLevel::assemble(p, residue_char, n, x_vecs, y_vecs, mu.to_vec())
    }

    /// The level k -> k+1 substitutions, in additive exponent form:
    /// the first generator pair of level k is rewritten against the two new
    /// variables, the remaining pairs shift down, and the mu-exponents follow
    /// the recurrence mu(k+1, k) = 1 + mu(k, 1), mu(k+1, k+1) = mu(k, 1).
    pub fn step(&self) -> Result<TowerLevel> {
        let k = self.n;
        if k >= self.n_max {
            return Err(Error::InvalidInput(format!(
                "tower step past the configured ambient: level {k}, n_max {}",
                self.n_max
            )));
        }
        let width = 2 * self.n_max;
        let x_new = unit_vec(width, 2 * k);
        let y_new = unit_vec(width, 2 * k + 1);
        let sub = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            a.iter().zip(b).map(|(x, y)| x - y).collect()
        };
        let neg = |a: &[BigInt]| -> Vec<BigInt> { a.iter().map(|x| -x.clone()).collect() };

        let mut x_vecs = Vec::with_capacity(k + 1);
        let mut y_vecs = Vec::with_capacity(k + 1);
        let mut mu = Vec::with_capacity(k + 1);
        for j in 1..k {
            x_vecs.push(self.x_vecs[j].clone());
            y_vecs.push(self.y_vecs[j].clone());
            mu.push(self.mu[j]);
        }
        // X' = Y_{k,1} * Y_new^{-1}
        x_vecs.push(sub(&self.y_vecs[0], &y_new));
        // Y' = X_{k,1}^{-p} * X_new^{-1}
        let mut y_pen: Vec<BigInt> =
            self.x_vecs[0].iter().map(|x| -(x * &self.p)).collect();
        for (t, xe) in y_pen.iter_mut().zip(&x_new) {
            *t -= xe;
        }
        y_vecs.push(y_pen);
        mu.push(1 + self.mu[0]);
        // Last pair: inverses of X_{k,1} and of the new Y variable.
        x_vecs.push(neg(&self.x_vecs[0]));
        y_vecs.push(neg(&y_new));
        mu.push(self.mu[0]);

        TowerLevel::assemble(
            self.p.clone(),
            self.residue_char.clone(),
            self.n_max,
            x_vecs,
            y_vecs,
            mu,
        )
    }

    fn assemble(
        p: BigInt,
        residue_char: BigInt,
        n_max: usize,
        x_vecs: Vec<Vec<BigInt>>,
        y_vecs: Vec<Vec<BigInt>>,
        mu: Vec<u32>,
    ) -> Result<TowerLevel> {
        if !symbols::is_prime(&p) {
            return Err(Error::InvalidInput(format!("tower prime must be prime, got {p}")));
        }
        if p == residue_char {
            return Err(Error::TamenessViolation(p.to_string()));
        }
        if !residue_char.is_zero() && !symbols::is_prime(&residue_char) {
            return Err(Error::InvalidInput(format!(
                "residue characteristic must be 0 or prime, got {residue_char}"
            )));
        }
        let n = mu.len();
        if n == 0 || x_vecs.len() != n || y_vecs.len() != n || n > n_max {
            return Err(Error::InvalidInput("inconsistent tower level data".into()));
        }
        if mu.iter().any(|&m| m == 0) {
            return Err(Error::TowerInvariantViolation("mu exponents must be positive".into()));
        }
        let rank = 2 * n;
        let width = 2 * n_max;
        for v in x_vecs.iter().chain(&y_vecs) {
            if v.len() != width {
                return Err(Error::InvalidInput("generator vector of wrong width".into()));
            }
            if v[rank..].iter().any(|x| !x.is_zero()) {
                return Err(Error::TowerInvariantViolation(
                    "level-n generators must live in the first 2n coordinates".into(),
                ));
            }
        }

        // Generating-set invariant: the 2n generator vectors form a basis of
        // Gamma_n = Z^{2n}.
        let gen_rows: Vec<Vec<BigInt>> = (0..n)
            .flat_map(|u| [x_vecs[u][..rank].to_vec(), y_vecs[u][..rank].to_vec()])
            .collect();
        let gen_det = matrix::det(&IntMat::from_rows(gen_rows));
        if !gen_det.abs().is_one() {
            return Err(Error::TowerInvariantViolation(format!(
                "generator matrix is not unimodular (det {gen_det})"
            )));
        }

        let gamma = ValueLattice::standard(rank);
        let mut labels = std::collections::BTreeMap::new();
        for u in 0..n {
            labels.insert(format!("X{}", u + 1), truncated(&x_vecs[u], rank));
            labels.insert(format!("Y{}", u + 1), truncated(&y_vecs[u], rank));
        }
        let k_field = FieldModel::with_labels(residue_char.clone(), gamma.clone(), labels.clone())?;

        // Z_n = K_n(p-th roots of the Y_{n,u}).
        let mut z_rows = gamma.basis_vectors();
        for y in &y_vecs {
            z_rows.push(truncated(y, rank).divided(&p)?);
        }
        let z_lattice = lattice::canonicalize(&z_rows, rank)?;
        let z_index = z_lattice.index_over(&gamma)?;
        if z_index != p.pow(n as u32) {
            return Err(Error::TowerInvariantViolation(format!(
                "[Z_n : K_n] = {z_index}, expected p^{n}"
            )));
        }
        for (u, y) in y_vecs.iter().enumerate() {
            labels.insert(format!("Y{}root", u + 1), truncated(y, rank).divided(&p)?);
        }
        let z_field = FieldModel::with_labels(residue_char.clone(), z_lattice, labels)?;

        let syms: Vec<SymbolData> = (0..n)
            .map(|u| {
                SymbolData::new(
                    truncated(&x_vecs[u], rank),
                    truncated(&y_vecs[u], rank).divided(&p)?,
                    p.pow(mu[u]),
                )
            })
            .collect::<Result<_>>()?;
        let d_class = brauer::class_from_symbols(&z_field, &syms)?;

        let inv = brauer::invariants(&d_class);
        let degree: BigInt = mu.iter().map(|&m| p.pow(m)).product();
        if inv.index != degree {
            return Err(Error::TowerInvariantViolation(format!(
                "class index {} differs from expected degree {degree}",
                inv.index
            )));
        }
        let ramification = inv.value_lattice.index_over(z_field.lattice())?;
        if ramification != (&inv.index * &inv.index) {
            return Err(Error::TowerInvariantViolation(
                "class is not totally ramified over Z_n".into(),
            ));
        }

        Ok(TowerLevel { n, n_max, p, residue_char, x_vecs, y_vecs, mu, k_field, z_field, d_class })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn ambient_rank(&self) -> usize {
        2 * self.n_max
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }

    pub fn residue_char(&self) -> &BigInt {
        &self.residue_char
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn x_vec(&self, u: usize) -> &[BigInt] {
        &self.x_vecs[u]
    }

    pub fn y_vec(&self, u: usize) -> &[BigInt] {
        &self.y_vecs[u]
    }

    pub fn k_field(&self) -> &FieldModel {
        &self.k_field
    }

    pub fn z_field(&self) -> &FieldModel {
        &self.z_field
    }

    pub fn d_class(&self) -> &TameClass {
        &self.d_class
    }

    /// deg(R_n) = prod_u p^{mu(n,u)}.
    pub fn degree(&self) -> BigInt {
        self.mu.iter().map(|&m| self.p.pow(m)).product()
    }

    /// The 2n x 2n matrix with rows X_{n,1}, Y_{n,1}, ..., X_{n,n}, Y_{n,n}
    /// in the first 2n coordinates.
    pub fn generator_matrix(&self) -> Vec<Vec<BigInt>> {
        let rank = 2 * self.n;
        (0..self.n)
            .flat_map(|u| [self.x_vecs[u][..rank].to_vec(), self.y_vecs[u][..rank].to_vec()])
            .collect()
    }

    pub fn generator_det(&self) -> BigInt {
        matrix::det(&IntMat::from_rows(self.generator_matrix()))
    }
}

/// Index computations a unique-centre sweep needs; the tower verifier uses
/// the normal-form implementations, the oracle re-run substitutes its own.
pub(crate) trait SweepBackend {
    fn symbol_division(&self, field: &FieldModel, sym: &SymbolData) -> Result<bool>;
    fn class_index(&self, class: &TameClass) -> Result<BigInt>;
}

struct ExactBackend;

impl SweepBackend for ExactBackend {
    fn symbol_division(&self, field: &FieldModel, sym: &SymbolData) -> Result<bool> {
        symbols::symbol_is_division(field, sym)
    }
    fn class_index(&self, class: &TameClass) -> Result<BigInt> {
        Ok(brauer::invariants(class).index)
    }
}

/// A degree-p symbol candidate over K_n that remains division of degree p
/// over Z_n and passes the embedding criterion into the class of R_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivorPair {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniqueCenterReport {
    pub level: usize,
    #[serde(with = "big")]
    pub prime: BigInt,
    #[serde(with = "big")]
    pub candidates: BigInt,
    pub division_candidates: u64,
    pub survivors: Vec<SurvivorPair>,
    /// Scope statement carried on every report.
    pub scope: String,
}

impl UniqueCenterReport {
    pub fn passed(&self) -> bool {
        self.survivors.is_empty()
    }
}

const SWEEP_SCOPE: &str = "degree-p symbol candidates over K_n only; desk-scale proxy for the \
                           unique-centre statement via the minimal-counterexample reduction";

/// Exhaustive sweep over candidate degree-p symbols (a, b) with a, b running
/// over representatives of Gamma_n/p. A candidate survives when its scalar
/// extension to Z_n still has index p and the embedding criterion into the
/// class of R_n holds. The verified claim is an empty survivor list.
pub fn verify_unique_center(level: &TowerLevel, budget: u64) -> Result<UniqueCenterReport> {
    unique_center_sweep(level, budget, &ExactBackend)
}

pub(crate) fn unique_center_sweep(
    level: &TowerLevel,
    budget: u64,
    backend: &dyn SweepBackend,
) -> Result<UniqueCenterReport> {
    let p_big = &level.p;
    let rank = 2 * level.n;
    let candidates = p_big.pow(2 * rank as u32);
    if candidates > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: candidates.to_string(),
            budget: budget.to_string(),
        });
    }
    let p = p_big.to_u64().expect("budgeted prime fits u64");
    let big_index = backend.class_index(&level.d_class)?;
    let (target_index, rem) = big_index.div_rem(p_big);
    debug_assert!(rem.is_zero());

    let mut division_candidates = 0u64;
    let mut survivors = Vec::new();
    let mut a = vec![0u64; rank];
    'outer: loop {
        let mut b = vec![0u64; rank];
        loop {
            let sym = SymbolData::new(
                Vector::from_ints(a.iter().map(|&x| BigInt::from(x)).collect()),
                Vector::from_ints(b.iter().map(|&x| BigInt::from(x)).collect()),
                p_big.clone(),
            )?;
            if backend.symbol_division(&level.k_field, &sym)? {
                division_candidates += 1;
                let sigma = brauer::class_from_symbols(&level.k_field, &[sym])?;
                let extended = brauer::extend_scalars(&sigma, &level.z_field)?;
                if backend.class_index(&extended)? == *p_big {
                    let difference = brauer::add(&level.d_class, &brauer::neg(&extended))?;
                    if backend.class_index(&difference)? == target_index {
                        survivors.push(SurvivorPair { a: a.clone(), b: b.clone() });
                    }
                }
            }
            if !advance(&mut b, p) {
                break;
            }
        }
        if !advance(&mut a, p) {
            break 'outer;
        }
    }
    Ok(UniqueCenterReport {
        level: level.n,
        prime: p_big.clone(),
        candidates,
        division_candidates,
        survivors,
        scope: SWEEP_SCOPE.to_string(),
    })
}

fn advance(digits: &mut [u64], base: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterIntersectionReport {
    pub level: usize,
    pub paired_level: usize,
    pub dim_low: usize,
    pub dim_high: usize,
    pub dim_intersection: usize,
    pub pass: bool,
    pub note: String,
}

/// Kummer-group proxy for Z_n and Z_{2n} intersecting in K_n: the F_p-spans
/// of the level-n and level-2n Y-generators inside Gamma_{2n}/p must meet
/// trivially.
pub fn verify_center_intersection(
    low: &TowerLevel,
    high: &TowerLevel,
) -> Result<CenterIntersectionReport> {
    if high.n != 2 * low.n || low.p != high.p || low.n_max != high.n_max {
        return Err(Error::InvalidInput(
            "centre intersection needs levels n and 2n of one tower".into(),
        ));
    }
    let p = &low.p;
    let low_rows: Vec<Vec<BigInt>> = (0..low.n).map(|u| low.y_vecs[u].clone()).collect();
    let high_rows: Vec<Vec<BigInt>> = (0..high.n).map(|u| high.y_vecs[u].clone()).collect();
    let dim_low = fp_rank(&low_rows, p);
    let dim_high = fp_rank(&high_rows, p);
    let mut joint = low_rows;
    joint.extend(high_rows);
    let dim_joint = fp_rank(&joint, p);
    let dim_intersection = dim_low + dim_high - dim_joint;
    Ok(CenterIntersectionReport {
        level: low.n,
        paired_level: high.n,
        dim_low,
        dim_high,
        dim_intersection,
        pass: dim_intersection == 0,
        note: "Kummer-group image proxy in Gamma_{2n}/p for Z_n meeting Z_{2n} in K_n".into(),
    })
}

fn fp_rank(rows: &[Vec<BigInt>], p: &BigInt) -> usize {
    let mut mat: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(p)).collect())
        .collect();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..mat.len()).find(|&i| !mat[i][col].is_zero()) else { continue };
        mat.swap(rank, pivot);
        let inv = mat[rank][col].modpow(&(p - BigInt::from(2)), p);
        for j in 0..cols {
            mat[rank][j] = (&mat[rank][j] * &inv).mod_floor(p);
        }
        for i in 0..mat.len() {
            if i != rank && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                for j in 0..cols {
                    let sub = (&mat[i][j] - &factor * &mat[rank][j]).mod_floor(p);
                    mat[i][j] = sub;
                }
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    rank
}

/// Invariants of a finite tensor product of parts at pairwise distinct
/// primes over one common field: index and exponent multiply (coprimality),
/// divisor chains merge componentwise, value lattices sum.
pub fn primary_product_invariants(parts: &[(BigInt, TameClass)]) -> Result<AlgebraInvariants> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::InvalidInput("primary product needs at least one part".into()));
    };
    let gamma = first.field().lattice().clone();
    let mut seen = std::collections::BTreeSet::new();
    let mut index = BigInt::one();
    let mut exponent = BigInt::one();
    let mut chains: Vec<Vec<BigInt>> = Vec::new();
    let mut value_lattice = gamma.clone();
    for (p, class) in parts {
        if !symbols::is_prime(p) {
            return Err(Error::InvalidInput(format!("primary part label must be prime, got {p}")));
        }
        if !seen.insert(p.clone()) {
            return Err(Error::DuplicatePrime(p.to_string()));
        }
        if !class.field().same_field(first.field()) {
            return Err(Error::FieldMismatch);
        }
        let inv = brauer::invariants(class);
        let mut residual = inv.index.clone();
        while !residual.is_one() {
            let (q, r) = residual.div_rem(p);
            if !r.is_zero() {
                return Err(Error::NotDivision);
            }
            residual = q;
        }
        index *= &inv.index;
        exponent *= &inv.exponent;
        chains.push(inv.divisors);
        value_lattice = lattice::sum(&value_lattice, &inv.value_lattice)?;
    }
    let depth = chains.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut divisors = Vec::new();
    for j in 0..depth {
        let m_j: BigInt = chains
            .iter()
            .map(|c| c.get(j).cloned().unwrap_or_else(BigInt::one))
            .product();
        divisors.push(m_j);
    }
    Ok(AlgebraInvariants { index, exponent, divisors, value_lattice })
}
