//! Schreier transversals, Reidemeister–Schreier presentations of finite-index
//! subgroups, and rewriting of subgroup elements into Schreier generators.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::parse::parse_lines;
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

/// Transversal and Schreier-generator numbering for a coset table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierData {
    /// transversal[c - 1] is the shortlex-least word `w` with `1 · w = c`.
    pub transversal: Vec<Word>,
    /// generator_index[c - 1][x] is the subgroup generator for the Schreier
    /// element `t_c x t_{c·x}⁻¹`, or `None` when that element is trivial.
    pub generator_index: Vec<Vec<Option<usize>>>,
    /// (coset, generator) for each subgroup generator, in numbering order.
    pub edges: Vec<(usize, usize)>,
}

impl SchreierData {
    pub fn n_subgroup_gens(&self) -> usize {
        self.edges.len()
    }

    pub fn representative(&self, c: usize) -> &Word {
        &self.transversal[c - 1]
    }

    /// `t_c x t_{c·x}⁻¹` as a word in G.
    pub fn schreier_element(&self, table: &CosetTable, c: usize, x: usize) -> Word {
        let d = table.act(c, Letter::pos(x));
        self.representative(c)
            .mul(&Word::gen(x))
            .mul(&self.representative(d).inverse())
    }
}

/// Breadth-first search from coset 1, trying letters in the order
/// `a, A, b, B, ...`, so each representative is shortlex-minimal.
pub fn schreier_transversal(table: &CosetTable) -> SchreierData {
    let n = table.index();
    let k = table.n_gens();
    let mut transversal: Vec<Option<Word>> = vec![None; n];
    transversal[0] = Some(Word::identity());
    let mut queue = VecDeque::from([1usize]);
    while let Some(c) = queue.pop_front() {
        for col in 0..2 * k {
            let l = Letter::from_column(col);
            let d = table.act(c, l);
            if transversal[d - 1].is_none() {
                let w = transversal[c - 1]
                    .as_ref()
                    .unwrap()
                    .mul(&Word::from_letters_raw(vec![l]));
                transversal[d - 1] = Some(w);
                queue.push_back(d);
            }
        }
    }
    let transversal: Vec<Word> = transversal
        .into_iter()
        .map(|t| t.expect("coset table is connected"))
        .collect();

    let mut generator_index = vec![vec![None; k]; n];
    let mut edges = Vec::new();
    for c in 1..=n {
        for x in 0..k {
            let d = table.act(c, Letter::pos(x));
            let s = transversal[c - 1].mul(&Word::gen(x)).mul(&transversal[d - 1].inverse());
            if !s.is_empty() {
                generator_index[c - 1][x] = Some(edges.len());
                edges.push((c, x));
            }
        }
    }
    SchreierData {
        transversal,
        generator_index,
        edges,
    }
}

/// Rewrites `w`, read from coset `start`, as a word in the Schreier
/// generators. Returns the rewritten word and the coset reached.
pub fn rewrite_from(table: &CosetTable, sd: &SchreierData, start: usize, w: &Word) -> (Word, usize) {
    let mut c = start;
    let mut out = Vec::new();
    for &l in w.letters() {
        if l.inverse {
            let d = table.act(c, l);
            if let Some(g) = sd.generator_index[d - 1][l.gen] {
                out.push(Letter::neg(g));
            }
            c = d;
        } else {
            if let Some(g) = sd.generator_index[c - 1][l.gen] {
                out.push(Letter::pos(g));
            }
            c = table.act(c, l);
        }
    }
    (Word::from_letters(out), c)
}

/// Reidemeister rewriting of an element of the subgroup.
pub fn rewrite(table: &CosetTable, sd: &SchreierData, w: &Word) -> Result<Word> {
    let (u, end) = rewrite_from(table, sd, 1, w);
    if end != 1 {
        return Err(Error::NotInSubgroup(end));
    }
    Ok(u)
}

/// Presentation of a finite-index subgroup on its nontrivial Schreier
/// generators, with each generator's image in the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    pub embedding: Vec<Word>,
    /// Relators produced before dropping those that reduce to the identity.
    pub raw_relator_count: usize,
}

impl SubgroupPresentation {
    /// Image of a subgroup word in the ambient group, freely reduced.
    pub fn embed(&self, u: &Word) -> Word {
        u.substitute(&self.embedding)
    }

    /// Presentation file with one `embed:` line per generator.
    pub fn to_file_string(&self, ambient_names: &[String]) -> String {
        let mut s = self.presentation.to_file_string();
        for (name, w) in self.presentation.generator_names().iter().zip(&self.embedding) {
            s.push_str(&format!("embed: {name} = {}\n", w.display(ambient_names)));
        }
        s
    }
}

/// Names `u1, u2, ...` for subgroup generators.
pub fn subgroup_generator_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("u{i}")).collect()
}

/// Relators are the rewrites of every relator of `pres` read from every coset.
pub fn reidemeister_schreier(pres: &Presentation, table: &CosetTable, sd: &SchreierData) -> SubgroupPresentation {
    let mut relators = Vec::with_capacity(table.index() * pres.relators().len());
    for c in 1..=table.index() {
        for r in pres.relators() {
            let (u, end) = rewrite_from(table, sd, c, r);
            debug_assert_eq!(end, c, "relator does not close in the coset table");
            relators.push(u);
        }
    }
    let raw_relator_count = relators.len();
    let presentation = Presentation::new(subgroup_generator_names(sd.n_subgroup_gens()), relators)
        .expect("subgroup generator names are valid");
    let embedding = sd
        .edges
        .iter()
        .map(|&(c, x)| sd.schreier_element(table, c, x))
        .collect();
    SubgroupPresentation {
        presentation,
        embedding,
        raw_relator_count,
    }
}

/// Parses a subgroup presentation file; every generator needs an `embed:`
/// line whose right-hand side is a word over `ambient_names`.
pub fn parse_subgroup_presentation(text: &str, ambient_names: &[String]) -> Result<SubgroupPresentation> {
    if ambient_names.is_empty() {
        return Err(Error::InvalidSpec("ambient group has no generators".into()));
    }
    let raw = parse_lines(text, ambient_names)?;
    let n = raw.names.len();
    let mut embedding: Vec<Option<Word>> = vec![None; n];
    for (g, w) in raw.embeds {
        if embedding[g].replace(w).is_some() {
            return Err(Error::InvalidSpec(format!(
                "duplicate embed line for '{}'",
                raw.names[g]
            )));
        }
    }
    let embedding = embedding
        .into_iter()
        .enumerate()
        .map(|(g, w)| w.ok_or_else(|| Error::InvalidSpec(format!("no embed line for '{}'", raw.names[g]))))
        .collect::<Result<Vec<_>>>()?;
    let raw_relator_count = raw.relators.len();
    let presentation = Presentation::new(raw.names, raw.relators)?;
    Ok(SubgroupPresentation {
        presentation,
        embedding,
        raw_relator_count,
    })
}
