//! Property suite for the spec-level invariants: canonical-form laws,
//! criterion equivalences, normal-form basis independence, and the
//! class-arithmetic contracts.

mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamebrauer::lattice::{self, ValueLattice, Vector};
use tamebrauer::oracle::DEFAULT_BUDGET;
use tamebrauer::symbols::{self, RadicalExtensionSpec, RadicalStep};
use tamebrauer::{brauer, oracle};

fn vector_strategy(rank: usize) -> impl Strategy<Value = Vector> {
    (proptest::collection::vec(-20i64..=20, rank), 1i64..=4)
        .prop_map(|(num, den)| vf(&num, den))
}

fn rows_strategy() -> impl Strategy<Value = (usize, Vec<Vector>)> {
    (2usize..=6).prop_flat_map(|rank| {
        (1usize..=3, 1i64..=3).prop_flat_map(move |(extra, scale)| {
            proptest::collection::vec(vector_strategy(rank), extra).prop_map(move |mut rows| {
                // Scaled identity rows guarantee a full-rank span.
                for i in 0..rank {
                    let mut unit = vec![0i64; rank];
                    unit[i] = scale;
                    rows.push(vi(&unit));
                }
                (rank, rows)
            })
        })
    })
}

proptest! {
    /// Canonicalization is idempotent, independent of generator order, and
    /// every generator is a member of the result.
    #[test]
    fn canonicalize_laws((rank, rows) in rows_strategy(), seed in any::<u64>()) {
        let lat = lattice::canonicalize(&rows, rank).unwrap();
        let again = lattice::canonicalize(&lat.basis_vectors(), rank).unwrap();
        prop_assert_eq!(&again, &lat);

        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let lat2 = lattice::canonicalize(&shuffled, rank).unwrap();
        prop_assert_eq!(&lat2, &lat);

        for v in &rows {
            prop_assert!(lattice::member(v, &lat).unwrap());
        }
    }

    /// [L3 : L1] = [L3 : L2] * [L2 : L1] along random chains L1 <= L2 <= L3.
    #[test]
    fn quotient_index_multiplicative(
        (rank, rows) in rows_strategy(),
        d1 in proptest::collection::vec(1i64..=4, 6),
        d2 in proptest::collection::vec(1i64..=4, 6),
    ) {
        let l3 = lattice::canonicalize(&rows, rank).unwrap();
        let shrink = |sup: &ValueLattice, factors: &[i64]| {
            let rows: Vec<Vector> = sup
                .basis_vectors()
                .iter()
                .enumerate()
                .map(|(i, v)| v.scaled(&BigInt::from(factors[i])))
                .collect();
            lattice::canonicalize(&rows, rank).unwrap()
        };
        let l2 = shrink(&l3, &d1);
        let l1 = shrink(&l2, &d2);
        let product = |chain: Vec<BigInt>| chain.iter().product::<BigInt>();
        let total = product(lattice::quotient_invariants(&l1, &l3).unwrap());
        let upper = product(lattice::quotient_invariants(&l2, &l3).unwrap());
        let lower = product(lattice::quotient_invariants(&l1, &l2).unwrap());
        prop_assert_eq!(total, upper * lower);
    }

    /// Symbol division is a function of the slots mod n*Gamma.
    #[test]
    fn symbol_division_shift_invariant(
        a in proptest::collection::vec(-6i64..=6, 3),
        b in proptest::collection::vec(-6i64..=6, 3),
        w in proptest::collection::vec(-3i64..=3, 3),
        n in 2i64..=4,
    ) {
        let field = field_z(3);
        let base = sym(&a, &b, n);
        let shifted_a: Vec<i64> = a.iter().zip(&w).map(|(x, s)| x + n * s).collect();
        let shifted = sym(&shifted_a, &b, n);
        prop_assert_eq!(
            symbols::symbol_is_division(&field, &base).unwrap(),
            symbols::symbol_is_division(&field, &shifted).unwrap()
        );
    }

    /// Radical extensions do not depend on the order of the steps.
    #[test]
    fn radical_extension_order_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field_z(4);
        let dirs = [[1i64, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]];
        let degrees = [2i64, 3, 2];
        let mut steps: Vec<RadicalStep> = dirs
            .iter()
            .zip(degrees)
            .map(|(d, e)| RadicalStep { vector: vi(d), degree: BigInt::from(e), label: None })
            .collect();
        let first = symbols::radical_extension(&field, &RadicalExtensionSpec { steps: steps.clone() })
            .unwrap();
        steps.shuffle(&mut rng);
        let second = symbols::radical_extension(&field, &RadicalExtensionSpec { steps }).unwrap();
        prop_assert_eq!(first.lattice(), second.lattice());
    }
}

/// Lemma 6.3 equivalence, exhaustively: the radical criterion is exactly
/// "the coset has order n", for n in {2,3,4}, m <= 3, slots over a box.
#[test]
fn radical_criterion_is_coset_order() {
    for n in [2i64, 3, 4] {
        for m in 1..=3usize {
            let field = field_z(m);
            let n_big = BigInt::from(n);
            for a in all_residue_vectors(m, n) {
                let v = vi(&a);
                let fast = symbols::is_totally_ramified_radical(&field, &v, &n_big).unwrap();
                let order = lattice::coset_order(&v, &n_big, field.lattice()).unwrap();
                assert_eq!(fast, order == n_big);
            }
        }
    }
}

/// Brute-force check of coset orders for n <= 12, m <= 4.
#[test]
fn coset_order_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..400 {
        let m = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=12i64);
        let coords: Vec<i64> = (0..m).map(|_| rng.gen_range(-12..=12)).collect();
        let v = vi(&coords);
        let lat = ValueLattice::standard(m);
        let fast = lattice::coset_order(&v, &BigInt::from(n), &lat).unwrap();
        let brute = (1..=n)
            .find(|k| coords.iter().all(|c| (k * c) % n == 0))
            .unwrap();
        assert_eq!(fast, BigInt::from(brute), "m={m}, n={n}, v={coords:?}");
    }
}

/// Every division symbol is totally ramified of degree n^2 over the base:
/// the value group index equals deg^2.
#[test]
fn division_symbols_are_totally_ramified() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut seen = 0;
    while seen < 100 {
        let m = rng.gen_range(2..=4usize);
        let n = rng.gen_range(2..=5i64);
        let a: Vec<i64> = (0..m).map(|_| rng.gen_range(-6..=6)).collect();
        let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-6..=6)).collect();
        let field = field_z(m);
        let s = sym(&a, &b, n);
        if !symbols::symbol_is_division(&field, &s).unwrap() {
            continue;
        }
        seen += 1;
        let vg = symbols::symbol_value_group(&field, &s).unwrap();
        assert_eq!(vg.index_over(field.lattice()).unwrap(), BigInt::from(n * n));
    }
}

fn random_unimodular<R: Rng>(rng: &mut R, m: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..2 * m + 4 {
        match rng.gen_range(0..3) {
            0 => {
                let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
                if i != j {
                    let c = rng.gen_range(-2..=2i64);
                    for t in 0..m {
                        u[i][t] += c * u[j][t];
                    }
                }
            }
            1 => {
                let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
                u.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..m);
                for t in 0..m {
                    u[i][t] = -u[i][t];
                }
            }
        }
    }
    u
}

/// Invariants are intrinsic: index, exponent, divisor chain and the value
/// lattice index are unchanged under any unimodular change of coordinates
/// W -> U W U^T.
#[test]
fn invariants_are_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..120 {
        let m = rng.gen_range(2..=5usize);
        let level = *[2i64, 3, 4, 8, 9].choose(&mut rng).unwrap();
        let class = random_class(&mut rng, m, level);
        let inv = brauer::invariants(&class);

        let u = random_unimodular(&mut rng, m);
        // Conjugate the form at the canonical level: W' = U W U^T.
        let n = class.level().clone();
        let w = class.form();
        let mut conj = vec![vec![BigInt::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = BigInt::zero();
                for k in 0..m {
                    for l in 0..m {
                        // Lift the stored residues to a skew integer matrix.
                        let entry = if k < l {
                            w[k][l].clone()
                        } else if k > l {
                            -w[l][k].clone()
                        } else {
                            BigInt::zero()
                        };
                        acc += BigInt::from(u[i][k]) * entry * BigInt::from(u[j][l]);
                    }
                }
                conj[i][j] = acc.mod_floor(&n);
            }
        }
        let conj_class = brauer::TameClass::new(field_z(m), n, conj).unwrap();
        let conj_inv = brauer::invariants(&conj_class);
        assert_eq!(inv.index, conj_inv.index);
        assert_eq!(inv.exponent, conj_inv.exponent);
        assert_eq!(inv.divisors, conj_inv.divisors);
        assert_eq!(
            inv.value_lattice.index_over(class.field().lattice()).unwrap(),
            conj_inv.value_lattice.index_over(class.field().lattice()).unwrap()
        );
    }
}

/// Canonical-form contracts on random classes: the stored level is the
/// exponent, it divides the index, and the index divides
/// exponent^(rank/2). The opposite class has identical invariants.
#[test]
fn canonical_exponent_index_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..200 {
        let m = rng.gen_range(1..=6usize);
        let level = *[2i64, 3, 4, 8, 9].choose(&mut rng).unwrap();
        let class = random_class(&mut rng, m, level);
        let inv = brauer::invariants(&class);
        assert_eq!(&inv.exponent, class.level());
        assert!((&inv.index % &inv.exponent).is_zero() || inv.index.is_one());
        let bound = inv.exponent.pow((m / 2) as u32);
        assert!((&bound % &inv.index).is_zero(), "index {} exceeds {}", inv.index, bound);

        let opp = brauer::neg(&class);
        let opp_inv = brauer::invariants(&opp);
        assert_eq!(inv.index, opp_inv.index);
        assert_eq!(inv.exponent, opp_inv.exponent);
        assert_eq!(inv.divisors, opp_inv.divisors);
        assert_eq!(inv.value_lattice, opp_inv.value_lattice);

        assert!(brauer::scale(&class, &inv.exponent).is_zero());
    }
}

/// Classes of coprime levels have multiplicative index under addition.
#[test]
fn coprime_levels_multiply_indices() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..60 {
        let m = rng.gen_range(2..=4usize);
        let even = *[2i64, 4, 8].choose(&mut rng).unwrap();
        let triple = *[3i64, 9].choose(&mut rng).unwrap();
        let c1 = random_class(&mut rng, m, even);
        let c2 = random_class(&mut rng, m, triple);
        let sum = brauer::add(&c1, &c2).unwrap();
        assert_eq!(
            brauer::invariants(&sum).index,
            brauer::invariants(&c1).index * brauer::invariants(&c2).index
        );
    }
}

/// Scaling contract: v(scale(C, nu)) = nu * v(C) + Gamma, and scaling two
/// direct summands by a common exponent divisor keeps their value groups
/// meeting in Gamma.
#[test]
fn scaling_value_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for _ in 0..60 {
        let n = *[2i64, 4, 6, 9].choose(&mut rng).unwrap();
        let c1 = brauer::class_from_symbols(
            &field_z(4),
            &[sym(&[1, 0, 0, 0], &[0, 1, 0, 0], n)],
        )
        .unwrap();
        let c2 = brauer::class_from_symbols(
            &field_z(4),
            &[sym(&[0, 0, 1, 0], &[0, 0, 0, 1], n)],
        )
        .unwrap();
        assert!(brauer::tensor_is_division(&[c1.clone(), c2.clone()]).unwrap());

        let divisors: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
        let nu = BigInt::from(*divisors.choose(&mut rng).unwrap());
        for c in [&c1, &c2] {
            let scaled = brauer::scale(c, &nu);
            let gamma = c.field().lattice();
            let v = brauer::invariants(c).value_lattice;
            let mut rows: Vec<Vector> = v.basis_vectors().iter().map(|x| x.scaled(&nu)).collect();
            rows.extend(gamma.basis_vectors());
            let expected = lattice::canonicalize(&rows, gamma.ambient_rank()).unwrap();
            assert_eq!(brauer::invariants(&scaled).value_lattice, expected);
        }
        let meet = lattice::intersect(
            &brauer::invariants(&brauer::scale(&c1, &nu)).value_lattice,
            &brauer::invariants(&brauer::scale(&c2, &nu)).value_lattice,
        )
        .unwrap();
        assert_eq!(&meet, c1.field().lattice());
    }
}

/// The rank-4 bound is attained: over (Z/2)^4 the largest index among all
/// 64 classes is exactly 2^2, matching the reported tame bound.
#[test]
fn tame_brauer_bound_attained_rank_four() {
    let field = field_z(4);
    let bound = brauer::brd_tame_bound(&field, &BigInt::from(2)).unwrap();
    assert_eq!(bound, 2);
    let max_index = all_f2_classes(4)
        .iter()
        .map(|c| oracle::oracle_index(c, DEFAULT_BUDGET).unwrap())
        .max()
        .unwrap();
    assert_eq!(max_index, BigInt::from(2).pow(bound as u32));
    assert_eq!(brauer::brd_tame_bound(&field_z(1), &BigInt::from(2)).unwrap(), 0);
    assert_eq!(brauer::brd_tame_bound(&field_z(2), &BigInt::from(2)).unwrap(), 1);
}

/// Oracle agreement for the division criterion including rank 1.
#[test]
fn oracle_symbol_division_rank_one() {
    let field = field_z(1);
    for n in [2i64, 3, 4] {
        for a in 0..n {
            for b in 0..n {
                let s = sym(&[a], &[b], n);
                assert_eq!(
                    symbols::symbol_is_division(&field, &s).unwrap(),
                    oracle::oracle_symbol_division(&field, &s, DEFAULT_BUDGET).unwrap()
                );
            }
        }
    }
}
