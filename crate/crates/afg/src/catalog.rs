//! The data catalog: fields with their class-group and unit data, worked
//! quaternion algebras and the classification table. The shipped TOML files
//! are embedded; a directory with the same three files can replace them.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use thiserror::Error;

use crate::ideals::{factor_prime, PrimeIdeal};
use crate::lattice::Congruences;
use crate::numfield::{FieldElement, NumberField, NumfieldError, UnitSystem};
use crate::orders::{
    build_maximal_order_nice, build_maximal_order_search, denominator_bound, intermediate_order, OrderError,
    QuaternionOrder,
};
use crate::quatalg::{QuatError, QuaternionAlgebra, QuaternionElement};
use crate::volume::Signature;

const FIELDS_TOML: &str = include_str!("../catalog/fields.toml");
const ALGEBRAS_TOML: &str = include_str!("../catalog/algebras.toml");
const TABLE_TOML: &str = include_str!("../catalog/table.toml");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("toml: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown field {0}")]
    UnknownField(String),
    #[error("unknown algebra {0}")]
    UnknownAlgebra(String),
    #[error("bad prime label {0}")]
    BadPrimeLabel(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Numfield(#[from] NumfieldError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, Debug, Deserialize)]
pub struct CmEntry {
    pub m: u32,
    pub h_minus: i64,
    pub unit_index: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FieldEntry {
    pub id: String,
    pub poly: Vec<i64>,
    pub disc: i64,
    pub class_number: i64,
    pub galois: bool,
    pub automorphisms: u32,
    pub proper_subfields: bool,
    pub units: Vec<Vec<i64>>,
    pub source: String,
    #[serde(default)]
    pub cm: Vec<CmEntry>,
}

impl FieldEntry {
    pub fn field(&self) -> Result<NumberField, CatalogError> {
        Ok(NumberField::new(&self.poly, &BigInt::from(self.disc))?)
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn unit_system(&self, k: &NumberField) -> Result<UnitSystem, CatalogError> {
        let us = self.units.iter().map(|c| k.elem(c)).collect();
        Ok(UnitSystem::new(k, us)?)
    }

    pub fn cm_data(&self, m: u32) -> Option<&CmEntry> {
        self.cm.iter().find(|c| c.m == m)
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct CongruenceEntry {
    pub modulus: i64,
    pub form: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub vector: Vec<i64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct PresentationEntry {
    #[serde(default)]
    pub define: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub identities: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SubgroupEntry {
    pub name: String,
    pub vectors: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Hint {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AlgebraEntry {
    pub id: String,
    pub field: String,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub unramified_place: usize,
    pub ramified_primes: Vec<String>,
    pub b1: Option<Vec<String>>,
    pub b2: Option<Vec<String>>,
    pub split: Option<String>,
    pub epsilon: f64,
    pub order_method: String,
    pub nice_hint: Option<Hint>,
    pub search_denominator: Option<Vec<i64>>,
    pub ambient_denominator: Vec<i64>,
    pub intermediate_denominator: Option<Vec<i64>>,
    pub expected_signature: String,
    pub expected_genus2_subgroups: usize,
    pub source: String,
    #[serde(default)]
    pub congruences: Vec<CongruenceEntry>,
    #[serde(default)]
    pub intermediate_congruences: Vec<CongruenceEntry>,
    #[serde(default)]
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub presentation: PresentationEntry,
    #[serde(default)]
    pub subgroups: Vec<SubgroupEntry>,
}

impl AlgebraEntry {
    pub fn algebra(&self, k: &NumberField) -> Result<QuaternionAlgebra, CatalogError> {
        Ok(QuaternionAlgebra::new(k.elem(&self.a), k.elem(&self.b))?)
    }

    pub fn ambient(&self, k: &NumberField) -> FieldElement {
        k.elem(&self.ambient_denominator)
    }

    pub fn hint(&self, k: &NumberField) -> Option<(FieldElement, FieldElement)> {
        self.nice_hint.as_ref().map(|h| (k.elem(&h.x), k.elem(&h.y)))
    }

    pub fn b_split(&self, k: &NumberField) -> Result<Option<(FieldElement, FieldElement)>, CatalogError> {
        match (&self.b1, &self.b2) {
            (Some(x), Some(y)) => Ok(Some((parse_rational_elem(k, x)?, parse_rational_elem(k, y)?))),
            _ => Ok(None),
        }
    }

    /// The maximal order by the recorded construction.
    pub fn maximal_order(&self, alg: &QuaternionAlgebra) -> Result<QuaternionOrder, CatalogError> {
        let ram = alg.ramification_set()?;
        let hint = self.hint(&alg.field);
        let o = match self.order_method.as_str() {
            "nice" => build_maximal_order_nice(alg, &ram, hint)?,
            "search" => {
                let start = intermediate_order(alg, hint)?;
                let r = match &self.search_denominator {
                    Some(r) => alg.field.elem(r),
                    None => denominator_bound(alg, &ram)?,
                };
                build_maximal_order_search(alg, &ram, &r, &start)?.order
            }
            m => return Err(CatalogError::Parse(format!("unknown order method {m}"))),
        };
        Ok(o)
    }

    pub fn expected_signature(&self) -> Result<Signature, CatalogError> {
        Signature::from_str(&self.expected_signature).map_err(CatalogError::Parse)
    }

    pub fn congruence_system(&self, n: usize) -> Result<Congruences, CatalogError> {
        congruences_from(&self.congruences, n)
    }

    pub fn intermediate_system(&self, n: usize) -> Result<Congruences, CatalogError> {
        congruences_from(&self.intermediate_congruences, n)
    }

    /// Named generators as exact quaternions.
    pub fn named_elements(&self, alg: &QuaternionAlgebra) -> BTreeMap<String, QuaternionElement> {
        let delta = self.ambient(&alg.field);
        self.generators
            .iter()
            .map(|g| (g.name.clone(), crate::orders::from_int_coords(alg, &g.vector, &delta)))
            .collect()
    }

    pub fn subgroup_elements(&self, alg: &QuaternionAlgebra) -> Vec<(String, Vec<QuaternionElement>)> {
        let delta = self.ambient(&alg.field);
        self.subgroups
            .iter()
            .map(|s| {
                let v = s.vectors.iter().map(|w| crate::orders::from_int_coords(alg, w, &delta)).collect();
                (s.name.clone(), v)
            })
            .collect()
    }
}

fn parse_rational_elem(k: &NumberField, s: &[String]) -> Result<FieldElement, CatalogError> {
    let c = s
        .iter()
        .map(|t| BigRational::from_str(t.trim()).map_err(|_| CatalogError::Parse(format!("bad rational {t}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(k.elem_q(c))
}

fn congruences_from(entries: &[CongruenceEntry], n: usize) -> Result<Congruences, CatalogError> {
    let mut moduli = Vec::new();
    let mut forms = Vec::new();
    for e in entries {
        moduli.push(BigInt::from(e.modulus));
        forms.push(parse_linear_form(&e.form, n)?.into_iter().map(BigInt::from).collect());
    }
    Ok(Congruences { moduli, forms })
}

/// Parses forms such as `4x0 - x1 + 3v2` over the coordinates
/// `x(n) y(n) u(n) v(n)`.
pub fn parse_linear_form(s: &str, n: usize) -> Result<Vec<i64>, CatalogError> {
    let mut out = vec![0i64; 4 * n];
    let cleaned = s.replace(' ', "").replace('-', "+-");
    for term in cleaned.split('+').filter(|t| !t.is_empty()) {
        let pos = term
            .find(|c: char| "xyuv".contains(c))
            .ok_or_else(|| CatalogError::Parse(format!("bad term {term}")))?;
        let coef = match &term[..pos] {
            "" => 1,
            "-" => -1,
            c => c.parse::<i64>().map_err(|_| CatalogError::Parse(format!("bad coefficient {term}")))?,
        };
        let slot = "xyuv".find(&term[pos..pos + 1]).unwrap();
        let k: usize = term[pos + 1..].parse().map_err(|_| CatalogError::Parse(format!("bad index {term}")))?;
        if k >= n {
            return Err(CatalogError::Parse(format!("index out of range in {term}")));
        }
        out[slot * n + k] += coef;
    }
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
pub struct RowEntry {
    pub degree: usize,
    pub field: String,
    pub ram: Vec<String>,
    pub index: u64,
    pub printed_index: Option<u64>,
    pub signature: String,
    pub count: u64,
    #[serde(default = "rule")]
    pub count_source: String,
}

fn rule() -> String {
    "rule".into()
}

impl RowEntry {
    pub fn signature(&self) -> Result<Signature, CatalogError> {
        Signature::from_str(&self.signature).map_err(CatalogError::Parse)
    }

    pub fn ram_label(&self) -> String {
        if self.ram.is_empty() {
            "∅".into()
        } else {
            self.ram.join("")
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct EliminatedEntry {
    pub field: String,
    pub reason: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CoareaEntry {
    pub field: String,
    pub pi_multiple: String,
}

impl CoareaEntry {
    pub fn value(&self) -> Result<BigRational, CatalogError> {
        BigRational::from_str(&self.pi_multiple).map_err(|_| CatalogError::Parse(self.pi_multiple.clone()))
    }
}

#[derive(Deserialize)]
struct FieldsFile {
    field: Vec<FieldEntry>,
}

#[derive(Deserialize)]
struct AlgebrasFile {
    algebra: Vec<AlgebraEntry>,
}

#[derive(Deserialize)]
struct TableFile {
    row: Vec<RowEntry>,
    eliminated: Vec<EliminatedEntry>,
    coarea: Vec<CoareaEntry>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub fields: Vec<FieldEntry>,
    pub algebras: Vec<AlgebraEntry>,
    pub rows: Vec<RowEntry>,
    pub eliminated: Vec<EliminatedEntry>,
    pub coareas: Vec<CoareaEntry>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(FIELDS_TOML, ALGEBRAS_TOML, TABLE_TOML).expect("embedded catalog parses")
    }

    /// Loads `fields.toml`, `algebras.toml` and `table.toml` from `dir`.
    pub fn load(dir: &Path) -> Result<Self, CatalogError> {
        let f = fs::read_to_string(dir.join("fields.toml"))?;
        let a = fs::read_to_string(dir.join("algebras.toml"))?;
        let t = fs::read_to_string(dir.join("table.toml"))?;
        Self::parse(&f, &a, &t)
    }

    fn parse(fields: &str, algebras: &str, table: &str) -> Result<Self, CatalogError> {
        let f: FieldsFile = toml::from_str(fields)?;
        let a: AlgebrasFile = toml::from_str(algebras)?;
        let t: TableFile = toml::from_str(table)?;
        Ok(Catalog { fields: f.field, algebras: a.algebra, rows: t.row, eliminated: t.eliminated, coareas: t.coarea })
    }

    pub fn field(&self, id: &str) -> Result<&FieldEntry, CatalogError> {
        self.fields.iter().find(|f| f.id == id).ok_or_else(|| CatalogError::UnknownField(id.into()))
    }

    pub fn algebra(&self, field: &str, id: &str) -> Result<&AlgebraEntry, CatalogError> {
        self.algebras
            .iter()
            .find(|a| a.field == field && a.id == id)
            .ok_or_else(|| CatalogError::UnknownAlgebra(format!("{field}/{id}")))
    }
}

/// Resolves `P7`, `P2'` and so on to prime ideals of `k`.
pub fn resolve_prime(k: &NumberField, label: &str) -> Result<PrimeIdeal, CatalogError> {
    let body = label.strip_prefix('P').ok_or_else(|| CatalogError::BadPrimeLabel(label.into()))?;
    let index = body.chars().filter(|&c| c == '\'').count();
    let p: u64 = body.trim_end_matches('\'').parse().map_err(|_| CatalogError::BadPrimeLabel(label.into()))?;
    if !crate::ideals::is_prime_u64(p) {
        return Err(CatalogError::BadPrimeLabel(label.into()));
    }
    factor_prime(k, p).into_iter().nth(index).ok_or_else(|| CatalogError::BadPrimeLabel(label.into()))
}

pub fn resolve_primes(k: &NumberField, labels: &[String]) -> Result<Vec<PrimeIdeal>, CatalogError> {
    labels.iter().map(|l| resolve_prime(k, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let c = Catalog::builtin();
        assert_eq!(c.fields.len(), 31);
        assert_eq!(c.algebras.len(), 3);
        assert_eq!(c.rows.iter().filter(|r| r.degree >= 3).count(), 30);
        for f in &c.fields {
            let k = f.field().unwrap();
            assert_eq!(k.degree(), f.degree());
            if !f.units.is_empty() {
                assert_eq!(f.unit_system(&k).unwrap().fundamental_units.len(), f.degree() - 1, "{}", f.id);
            }
        }
    }

    #[test]
    fn linear_forms() {
        let f = parse_linear_form("4x0 - x1 + 3v2", 3).unwrap();
        assert_eq!(f, vec![4, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3]);
        assert!(parse_linear_form("x5", 3).is_err());
    }

    #[test]
    fn prime_labels() {
        let c = Catalog::builtin();
        let k = c.field("d229").unwrap().field().unwrap();
        assert_eq!(resolve_prime(&k, "P2").unwrap().norm, BigInt::from(2));
        assert_eq!(resolve_prime(&k, "P2'").unwrap().norm, BigInt::from(4));
        assert!(resolve_prime(&k, "P2''").is_err());
        assert!(resolve_prime(&k, "Q2").is_err());
    }
}
