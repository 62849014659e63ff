//! Finitely presented groups and knot-group data.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{AbelianInvariants, AbelianMap, IntMatrix};
use crate::word::Word;

/// A finite presentation `<generators | relators>`.
///
/// Relators are stored freely and cyclically reduced; relators that reduce
/// to the identity are dropped at construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Builds a presentation, returning it together with the number of
    /// relators dropped because they reduced to the identity.
    pub fn with_dropped(generator_names: Vec<String>, relators: Vec<Word>) -> Result<(Self, usize)> {
        for (i, name) in generator_names.iter().enumerate() {
            if !is_generator_name(name) {
                return Err(Error::InvalidSpec(format!("bad generator name '{name}'")));
            }
            if generator_names[..i].contains(name) {
                return Err(Error::InvalidSpec(format!("duplicate generator name '{name}'")));
            }
        }
        let n = generator_names.len();
        let mut kept = Vec::with_capacity(relators.len());
        let mut dropped = 0;
        for r in relators {
            if r.max_gen().is_some_and(|g| g >= n) {
                return Err(Error::InvalidSpec(format!(
                    "relator uses generator index {} but only {n} generators exist",
                    r.max_gen().unwrap()
                )));
            }
            let r = r.cyclic_reduce();
            if r.is_empty() {
                dropped += 1;
            } else {
                kept.push(r);
            }
        }
        Ok((
            Presentation {
                generator_names,
                relators: kept,
            },
            dropped,
        ))
    }

    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        Self::with_dropped(generator_names, relators).map(|(p, _)| p)
    }

    /// Generators named `a, b, c, ...` (or `x1, x2, ...` beyond 26).
    pub fn with_default_names(n_gens: usize, relators: Vec<Word>) -> Result<Self> {
        Self::new(default_names(n_gens), relators)
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn n_gens(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name)
    }

    /// The same generators with additional relators appended.
    pub fn with_extra_relators(&self, extra: impl IntoIterator<Item = Word>) -> Presentation {
        let mut relators = self.relators.clone();
        relators.extend(extra.into_iter().map(|w| w.cyclic_reduce()).filter(|w| !w.is_empty()));
        Presentation {
            generator_names: self.generator_names.clone(),
            relators,
        }
    }

    /// Relator-by-generator matrix of exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(self.n_gens())).collect();
        IntMatrix::from_rows(self.n_gens(), &rows)
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        crate::linalg::cokernel_invariants(&self.exponent_matrix())
    }

    pub fn abelian_map(&self) -> AbelianMap {
        AbelianMap::new(&self.exponent_matrix())
    }

    /// `generators - relators`.
    pub fn deficiency(&self) -> i64 {
        self.n_gens() as i64 - self.relators.len() as i64
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(&self.generator_names).to_string()
    }

    /// Renders in the line-based presentation file format.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("gens: {}\n", self.generator_names.join(" "));
        if self.relators.is_empty() {
            s.push_str("rel:\n");
        }
        for r in &self.relators {
            s.push_str(&format!("rel: {}\n", self.format_word(r)));
        }
        s
    }
}

pub fn is_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_digit())
}

pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// A knot group together with its distinguished peripheral words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotGroupData {
    pub label: String,
    pub presentation: Presentation,
    pub meridian: Word,
    pub longitude: Option<Word>,
    /// Non-fatal remarks collected while building the data (e.g. dropped
    /// empty relators).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl KnotGroupData {
    pub fn new(presentation: Presentation, meridian: Word, longitude: Option<Word>) -> Self {
        KnotGroupData {
            label: String::new(),
            presentation,
            meridian: meridian.free_reduce(),
            longitude: longitude.map(|l| l.free_reduce()),
            warnings: Vec::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> ValidationReport {
        validate_knot_group(self)
    }

    /// The homomorphism `G -> Z` sending the meridian to 1.
    pub fn degree_map(&self) -> Result<DegreeMap> {
        DegreeMap::new(&self.presentation, &self.meridian)
    }

    /// Renders in the presentation file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        if !self.label.is_empty() {
            s.push_str(&format!("# {}\n", self.label));
        }
        s.push_str(&self.presentation.to_file_string());
        s.push_str(&format!(
            "meridian: {}\n",
            self.presentation.format_word(&self.meridian)
        ));
        if let Some(l) = &self.longitude {
            s.push_str(&format!("longitude: {}\n", self.presentation.format_word(l)));
        }
        s
    }
}

/// Integer degree of each generator under `G -> G^ab ≅ Z`, normalized so the
/// meridian has degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMap {
    pub generator_degrees: Vec<i64>,
}

impl DegreeMap {
    pub fn new(pres: &Presentation, meridian: &Word) -> Result<Self> {
        let map = pres.abelian_map();
        if !map.invariants.is_infinite_cyclic() {
            return Err(Error::InvalidSpec(format!(
                "abelianization is {}, not Z",
                map.invariants
            )));
        }
        let n = pres.n_gens();
        let m_deg = map.free_part(&meridian.exponent_sums(n))[0].clone();
        if m_deg.abs() != BigInt::one() {
            return Err(Error::InvalidSpec(
                "meridian does not generate the abelianization".into(),
            ));
        }
        let generator_degrees = (0..n)
            .map(|g| {
                let mut e = vec![0; n];
                e[g] = 1;
                let d = &map.free_part(&e)[0] * &m_deg;
                d.to_i64().expect("generator degree exceeds i64")
            })
            .collect();
        Ok(DegreeMap { generator_degrees })
    }

    pub fn degree(&self, w: &Word) -> i64 {
        w.letters()
            .iter()
            .map(|l| l.sign() * self.generator_degrees[l.gen])
            .sum()
    }
}

/// Pass/fail record of the knot-group axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub abelianization: AbelianInvariants,
    pub abelianization_is_z: bool,
    pub meridian_generates: bool,
    /// `None` when no longitude was given.
    pub longitude_null_homologous: Option<bool>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.abelianization_is_z && self.meridian_generates && self.longitude_null_homologous.unwrap_or(true)
    }

    /// `(check name, passed)` entries in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, bool)> {
        let mut v = vec![
            ("abelianization is Z", self.abelianization_is_z),
            ("meridian generates", self.meridian_generates),
        ];
        if let Some(ok) = self.longitude_null_homologous {
            v.push(("longitude null-homologous", ok));
        }
        v
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .into_iter()
            .map(|(name, ok)| format!("{name}: {}", if ok { "pass" } else { "FAIL" }))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_knot_group(data: &KnotGroupData) -> ValidationReport {
    let pres = &data.presentation;
    let n = pres.n_gens();
    let map = pres.abelian_map();
    let inv = map.invariants.clone();
    let abelianization_is_z = inv.is_infinite_cyclic();

    let m_img = map.image(&data.meridian.exponent_sums(n));
    let meridian_generates = element_generates(&inv, &m_img);

    let longitude_null_homologous = data
        .longitude
        .as_ref()
        .map(|l| map.image(&l.exponent_sums(n)).iter().all(|x| x.is_zero()));

    ValidationReport {
        abelianization: inv,
        abelianization_is_z,
        meridian_generates,
        longitude_null_homologous,
    }
}

/// Whether an element (in [`AbelianMap`] coordinates) generates the group.
fn element_generates(inv: &AbelianInvariants, img: &[BigInt]) -> bool {
    match (inv.free_rank, inv.torsion.len()) {
        (0, 0) => true,
        (1, 0) => img[0].abs().is_one(),
        (0, 1) => img[0].gcd(&inv.torsion[0]).is_one(),
        _ => false,
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generator_names.join(", "), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;

    fn trefoil_pres() -> Presentation {
        // a b a B A B
        let r = Word::from_powers(&[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)]);
        Presentation::with_default_names(2, vec![r]).unwrap()
    }

    #[test]
    fn trefoil_validates() {
        let data = KnotGroupData::new(trefoil_pres(), Word::gen(0), None);
        let rep = data.validate();
        assert!(rep.all_pass(), "{rep}");
        assert_eq!(rep.longitude_null_homologous, None);
        assert_eq!(data.degree_map().unwrap().generator_degrees, vec![1, 1]);
    }

    #[test]
    fn trefoil_with_square_meridian_fails() {
        let data = KnotGroupData::new(trefoil_pres(), Word::gen(0).pow(2), None);
        let rep = data.validate();
        assert!(rep.abelianization_is_z);
        assert!(!rep.meridian_generates);
        assert!(data.degree_map().is_err());
    }

    #[test]
    fn commutator_group_is_not_a_knot_group() {
        let r = Word::from_powers(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        let pres = Presentation::with_default_names(2, vec![r]).unwrap();
        let rep = KnotGroupData::new(pres, Word::gen(0), None).validate();
        assert!(!rep.abelianization_is_z);
        assert_eq!(rep.abelianization, AbelianInvariants::new(2, vec![]));
        assert!(!rep.all_pass());
    }

    #[test]
    fn longitude_homology() {
        let pres = trefoil_pres();
        // (aba)^2 a^-6 is null-homologous; a b is not
        let l = Word::from_powers(&[(0, 1), (1, 1), (0, 2), (1, 1), (0, 1), (0, -6)]);
        let rep = KnotGroupData::new(pres.clone(), Word::gen(0), Some(l)).validate();
        assert_eq!(rep.longitude_null_homologous, Some(true));
        let bad = Word::from_powers(&[(0, 1), (1, 1)]);
        let rep = KnotGroupData::new(pres, Word::gen(0), Some(bad)).validate();
        assert_eq!(rep.longitude_null_homologous, Some(false));
    }

    #[test]
    fn negative_meridian_degree_normalized() {
        let data = KnotGroupData::new(trefoil_pres(), Word::gen(1).inverse(), None);
        let deg = data.degree_map().unwrap();
        assert_eq!(deg.degree(&data.meridian), 1);
        assert_eq!(deg.generator_degrees, vec![-1, -1]);
    }

    #[test]
    fn empty_relators_dropped() {
        let r = Word::from_letters_raw(vec![Letter::pos(0), Letter::neg(0)]);
        let (p, dropped) = Presentation::with_dropped(default_names(1), vec![r]).unwrap();
        assert_eq!(dropped, 1);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn relators_stored_cyclically_reduced() {
        let r = Word::from_powers(&[(1, 1), (0, 2), (1, -1)]);
        let p = Presentation::with_default_names(2, vec![r]).unwrap();
        assert_eq!(p.relators()[0], Word::from_powers(&[(0, 2)]));
    }

    #[test]
    fn out_of_range_generator_rejected() {
        assert!(Presentation::with_default_names(1, vec![Word::gen(1)]).is_err());
    }

    #[test]
    fn file_round_trip_text() {
        let data = KnotGroupData::new(trefoil_pres(), Word::gen(0), None);
        assert_eq!(data.to_file_string(), "gens: a b\nrel: abaBAB\nmeridian: a\n");
    }
}
