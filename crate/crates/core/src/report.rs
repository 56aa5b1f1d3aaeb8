//! Input schemas and machine-readable reports behind the CLI and the C API.
//! Every document carries a top-level `"schema": 1` version field.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::brauer::{self, AlgebraInvariants, TameClass};
use crate::error::{Error, Result};
use crate::lattice::{self, ValueLattice};
use crate::oracle;
use crate::serde_int::{big, big_mat};
use crate::symbols::{self, FieldModel, SymbolData};
use crate::tower::{self, CenterIntersectionReport, TowerLevel, UniqueCenterReport};

pub const SCHEMA_VERSION: u32 = 1;

fn check_schema(schema: Option<u32>) -> Result<()> {
    match schema {
        None | Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(Error::InvalidInput(format!(
            "unsupported schema version {v}, expected {SCHEMA_VERSION}"
        ))),
    }
}

#[derive(Debug, Deserialize)]
pub struct SymbolInput {
    #[serde(default)]
    pub schema: Option<u32>,
    pub field: FieldModel,
    pub symbol: SymbolData,
}

#[derive(Debug, Deserialize)]
pub struct ClassInput {
    #[serde(default)]
    pub schema: Option<u32>,
    pub field: FieldModel,
    #[serde(with = "big")]
    pub level: BigInt,
    #[serde(with = "big_mat")]
    pub form: Vec<Vec<BigInt>>,
}

impl ClassInput {
    pub fn into_class(self) -> Result<TameClass> {
        check_schema(self.schema)?;
        TameClass::new(self.field, self.level, self.form)
    }
}

#[derive(Debug, Deserialize)]
pub struct ExtensionInput {
    #[serde(default)]
    pub schema: Option<u32>,
    pub field: FieldModel,
}

impl ExtensionInput {
    pub fn into_field(self) -> Result<FieldModel> {
        check_schema(self.schema)?;
        Ok(self.field)
    }
}

#[derive(Debug, Serialize)]
pub struct SymbolReport {
    pub schema: u32,
    pub division: bool,
    #[serde(with = "big")]
    pub exponent: BigInt,
    #[serde(with = "big")]
    pub ramification_index: BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_group: Option<ValueLattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

/// Lemma 6.4 verdict for one symbol: division flag, exponent, value group,
/// and ramification index of the underlying division algebra. With a budget,
/// the verdict is re-derived by the enumeration oracle and compared.
pub fn symbol_report(input: SymbolInput, oracle_budget: Option<u64>) -> Result<SymbolReport> {
    check_schema(input.schema)?;
    let field = input.field;
    let sym = input.symbol;
    let division = symbols::symbol_is_division(&field, &sym)?;
    let class = brauer::class_from_symbols(&field, std::slice::from_ref(&sym))?;
    let inv = brauer::invariants(&class);
    let ramification = inv.value_lattice.index_over(field.lattice())?;
    let oracle_agrees = match oracle_budget {
        Some(budget) => Some(oracle::oracle_symbol_division(&field, &sym, budget)? == division),
        None => None,
    };
    let degenerate = sym.degree == BigInt::from(1);
    Ok(SymbolReport {
        schema: SCHEMA_VERSION,
        division: if degenerate { false } else { division },
        exponent: inv.exponent,
        ramification_index: ramification,
        value_group: if degenerate { None } else { Some(inv.value_lattice) },
        note: degenerate.then(|| "trivial".to_string()),
        oracle_agrees,
    })
}

#[derive(Debug, Serialize)]
pub struct ClassReport {
    pub schema: u32,
    pub invariants: AlgebraInvariants,
    pub decomposition: Vec<SymbolData>,
    pub primary: BTreeMap<String, ClassBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

/// Class data without the field (the field is shared with the input).
#[derive(Debug, Serialize)]
pub struct ClassBody {
    #[serde(with = "big")]
    pub level: BigInt,
    #[serde(with = "big_mat")]
    pub form: Vec<Vec<BigInt>>,
}

impl From<&TameClass> for ClassBody {
    fn from(c: &TameClass) -> ClassBody {
        ClassBody { level: c.level().clone(), form: c.form().to_vec() }
    }
}

/// Invariants, Draxl decomposition and primary parts of one class file.
pub fn class_report(class: &TameClass, oracle_budget: Option<u64>) -> Result<ClassReport> {
    let inv = brauer::invariants(class);
    let decomposition = brauer::draxl_decomposition(class);
    let primary = brauer::primary_decompose(class)
        .iter()
        .map(|(p, part)| (p.to_string(), ClassBody::from(part)))
        .collect();
    let oracle_agrees = match oracle_budget {
        Some(budget) => Some(oracle::oracle_index(class, budget)? == inv.index),
        None => None,
    };
    Ok(ClassReport {
        schema: SCHEMA_VERSION,
        invariants: inv,
        decomposition,
        primary,
        oracle_agrees,
    })
}

#[derive(Debug, Serialize)]
pub struct ExtendReport {
    pub schema: u32,
    pub still_division: bool,
    #[serde(with = "big")]
    pub new_index: BigInt,
    pub new_value_group: ValueLattice,
    pub criterion_lattice_check: bool,
}

impl ExtendReport {
    /// The two predicates must agree; disagreement is a bug signal.
    pub fn consistent(&self) -> bool {
        self.still_division == self.criterion_lattice_check
    }
}

/// Scalar extension verdict surfaced both ways: index preservation and the
/// value-lattice intersection criterion.
pub fn extend_report(class: &TameClass, target: &FieldModel) -> Result<ExtendReport> {
    let base_inv = brauer::invariants(class);
    let extended = brauer::extend_scalars(class, target)?;
    let new_inv = brauer::invariants(&extended);
    let still_division = new_inv.index == base_inv.index;
    let meet = lattice::intersect(&base_inv.value_lattice, target.lattice())?;
    let criterion = &meet == class.field().lattice();
    Ok(ExtendReport {
        schema: SCHEMA_VERSION,
        still_division,
        new_index: new_inv.index,
        new_value_group: new_inv.value_lattice,
        criterion_lattice_check: criterion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    All,
    Center,
    Intersection,
}

impl FromStr for VerifyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<VerifyMode> {
        match s {
            "all" => Ok(VerifyMode::All),
            "center" => Ok(VerifyMode::Center),
            "intersection" => Ok(VerifyMode::Intersection),
            other => Err(Error::InvalidInput(format!(
                "--verify must be all, center or intersection, got {other}"
            ))),
        }
    }
}

impl VerifyMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyMode::All => "all",
            VerifyMode::Center => "center",
            VerifyMode::Intersection => "intersection",
        }
    }

    fn center(&self) -> bool {
        matches!(self, VerifyMode::All | VerifyMode::Center)
    }

    fn intersection(&self) -> bool {
        matches!(self, VerifyMode::All | VerifyMode::Intersection)
    }
}

#[derive(Debug, Clone)]
pub struct TowerRunConfig {
    pub p: u64,
    pub levels: usize,
    pub verify: VerifyMode,
    pub oracle: bool,
    pub budget: u64,
    pub residue_char: u64,
}

#[derive(Debug, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub mu: Vec<u32>,
    #[serde(with = "big_mat")]
    pub generator_matrix: Vec<Vec<BigInt>>,
    #[serde(with = "big")]
    pub det: BigInt,
    #[serde(with = "big")]
    pub degree: BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_center: Option<UniqueCenterReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_intersection: Option<CenterIntersectionReport>,
}

#[derive(Debug, Serialize)]
pub struct TowerReport {
    pub schema: u32,
    #[serde(with = "big")]
    pub prime: BigInt,
    #[serde(with = "big")]
    pub residue_char: BigInt,
    pub verify: &'static str,
    pub levels: Vec<LevelReport>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

/// Build levels 1..=levels and run the requested verifications. `pass` is
/// the conjunction of every verification that ran; with `oracle` set, every
/// unique-centre sweep is re-run oracle-backed and survivor sets compared.
pub fn tower_report(cfg: &TowerRunConfig) -> Result<TowerReport> {
    if cfg.levels == 0 {
        return Err(Error::InvalidInput("tower needs at least one level".into()));
    }
    let p = BigInt::from(cfg.p);
    let q = BigInt::from(cfg.residue_char);

    // Verify each level as it is built, so a budget overrun surfaces before
    // deeper levels are constructed.
    let mut pass = true;
    let mut oracle_agrees = cfg.oracle.then_some(true);
    let mut towers: Vec<TowerLevel> = Vec::with_capacity(cfg.levels);
    let mut center_reports = Vec::with_capacity(cfg.levels);
    for n in 1..=cfg.levels {
        let t = if n == 1 {
            TowerLevel::base(p.clone(), cfg.levels, q.clone())?
        } else {
            towers.last().unwrap().step()?
        };
        let unique_center = if cfg.verify.center() {
            let report = tower::verify_unique_center(&t, cfg.budget)?;
            pass &= report.passed();
            if cfg.oracle {
                let shadow = oracle::oracle_unique_center(&t, cfg.budget)?;
                if shadow.survivors != report.survivors {
                    oracle_agrees = Some(false);
                }
            }
            Some(report)
        } else {
            None
        };
        towers.push(t);
        center_reports.push(unique_center);
    }

    let mut levels = Vec::with_capacity(cfg.levels);
    for (t, unique_center) in towers.iter().zip(center_reports) {
        let center_intersection = if cfg.verify.intersection() && 2 * t.n() <= cfg.levels {
            let report = tower::verify_center_intersection(t, &towers[2 * t.n() - 1])?;
            pass &= report.pass;
            Some(report)
        } else {
            None
        };
        levels.push(LevelReport {
            n: t.n(),
            mu: t.mu().to_vec(),
            generator_matrix: t.generator_matrix(),
            det: t.generator_det(),
            degree: t.degree(),
            unique_center,
            center_intersection,
        });
    }
    Ok(TowerReport {
        schema: SCHEMA_VERSION,
        prime: p,
        residue_char: q,
        verify: cfg.verify.as_str(),
        levels,
        pass,
        oracle_agrees,
    })
}
