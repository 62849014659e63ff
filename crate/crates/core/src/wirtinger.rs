//! Wirtinger presentations from planar-diagram (PD) codes.
//!
//! A crossing `[i, j, k, l]` lists strand labels counterclockwise starting
//! from the incoming under-strand `i`; `k` is the outgoing under-strand and
//! `j`, `l` are the two halves of the over-strand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{default_names, KnotGroupData, Presentation};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Self {
        PdCode { crossings }
    }

    /// Parses `[[1,4,2,5],[3,6,4,1],...]`, also accepting the `PD[X[...], ...]`
    /// spelling.
    pub fn parse(text: &str) -> Result<Self> {
        let nums: Vec<u32> = text
            .split(|c: char| !c.is_ascii_digit())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>().map_err(|e| Error::InvalidPdCode(e.to_string())))
            .collect::<Result<_>>()?;
        if !nums.len().is_multiple_of(4) {
            return Err(Error::InvalidPdCode(format!(
                "{} labels is not a multiple of 4",
                nums.len()
            )));
        }
        Ok(PdCode {
            crossings: nums.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect(),
        })
    }

    /// Checks that every label in `1..=2n` occurs exactly twice.
    pub fn check_labels(&self) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Err(Error::InvalidPdCode("no crossings".into()));
        }
        let mut counts = vec![0usize; 2 * n + 1];
        for c in &self.crossings {
            for &l in c {
                if l == 0 || l as usize > 2 * n {
                    return Err(Error::InvalidPdCode(format!(
                        "label {l} outside 1..={} for {n} crossings",
                        2 * n
                    )));
                }
                counts[l as usize] += 1;
            }
        }
        if let Some(l) = (1..=2 * n).find(|&l| counts[l] != 2) {
            return Err(Error::InvalidPdCode(format!(
                "label {l} occurs {} times, expected 2",
                counts[l]
            )));
        }
        Ok(())
    }
}

const PARTNER: [usize; 4] = [2, 3, 0, 1];

/// Builds the Wirtinger presentation: one generator per arc, one relator per
/// crossing. The meridian is the generator of the arc containing strand 1.
pub fn wirtinger_from_pd(pd: &PdCode) -> Result<KnotGroupData> {
    pd.check_labels()?;
    let n = pd.crossings.len();
    let n_labels = 2 * n;

    // occurrences[label] = [(crossing, position); 2]
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_labels + 1];
    for (ci, c) in pd.crossings.iter().enumerate() {
        for (pos, &l) in c.iter().enumerate() {
            occurrences[l as usize].push((ci, pos));
        }
    }

    // Walk the diagram starting out of crossing 0 along its outgoing
    // under-strand; record the direction in which each over-strand is run.
    // over_forward[c] is true when the over-strand runs from position 1 to 3.
    let mut over_forward: Vec<Option<bool>> = vec![None; n];
    let mut under_seen = vec![false; n];
    let mut visited_labels = 0usize;
    let (mut cur_c, mut cur_pos) = (0usize, 2usize);
    under_seen[0] = true;
    loop {
        let label = pd.crossings[cur_c][cur_pos] as usize;
        visited_labels += 1;
        let occ = &occurrences[label];
        // other end of this strand
        let (next_c, entry_pos) = if occ[0] == (cur_c, cur_pos) { occ[1] } else { occ[0] };
        match entry_pos {
            0 => {
                if under_seen[next_c] && next_c != 0 {
                    return Err(Error::InvalidPdCode(format!(
                        "under-strand of crossing {next_c} traversed twice"
                    )));
                }
                under_seen[next_c] = true;
            }
            2 => {
                return Err(Error::InvalidPdCode(format!(
                    "strand {label} enters crossing {next_c} at its outgoing under position"
                )));
            }
            p => {
                if over_forward[next_c].is_some() {
                    return Err(Error::InvalidPdCode(format!(
                        "over-strand of crossing {next_c} traversed twice"
                    )));
                }
                over_forward[next_c] = Some(p == 1);
            }
        }
        let exit_pos = PARTNER[entry_pos];
        if (next_c, entry_pos) == (0, 0) {
            break;
        }
        if visited_labels > n_labels {
            return Err(Error::InvalidPdCode("traversal does not close up".into()));
        }
        cur_c = next_c;
        cur_pos = exit_pos;
    }
    if visited_labels < n_labels {
        return Err(Error::MultiComponent(count_components(pd, &occurrences)));
    }

    // arcs: union strand labels that continue through an over-crossing
    let mut parent: Vec<usize> = (0..=n_labels).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for c in &pd.crossings {
        let (a, b) = (find(&mut parent, c[1] as usize), find(&mut parent, c[3] as usize));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    // arcs numbered by their smallest label
    let mut arc_of_root = vec![usize::MAX; n_labels + 1];
    let mut n_arcs = 0;
    let mut arc = vec![0usize; n_labels + 1];
    for l in 1..=n_labels {
        let r = find(&mut parent, l);
        if arc_of_root[r] == usize::MAX {
            arc_of_root[r] = n_arcs;
            n_arcs += 1;
        }
        arc[l] = arc_of_root[r];
    }

    let mut relators = Vec::with_capacity(n);
    for (ci, c) in pd.crossings.iter().enumerate() {
        let incoming = Word::gen(arc[c[0] as usize]);
        let outgoing = Word::gen(arc[c[2] as usize]);
        let over = Word::gen(arc[c[1] as usize]);
        let sign = if over_forward[ci].unwrap() { 1 } else { -1 };
        // outgoing = over^sign · incoming · over^-sign
        let r = outgoing
            .inverse()
            .mul(&over.pow(sign))
            .mul(&incoming)
            .mul(&over.pow(-sign));
        relators.push(r);
    }
    let (presentation, dropped) = Presentation::with_dropped(default_names(n_arcs), relators)?;
    let mut data = KnotGroupData::new(presentation, Word::gen(arc[1]), None);
    if dropped > 0 {
        data.warnings.push(format!("{dropped} crossing relators are trivial"));
    }
    Ok(data)
}

fn count_components(pd: &PdCode, occurrences: &[Vec<(usize, usize)>]) -> usize {
    let n_labels = occurrences.len() - 1;
    let mut seen = vec![false; n_labels + 1];
    let mut components = 0;
    for start in 1..=n_labels {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        while let Some(l) = stack.pop() {
            if std::mem::replace(&mut seen[l], true) {
                continue;
            }
            for &(c, pos) in &occurrences[l] {
                let other = pd.crossings[c][PARTNER[pos]] as usize;
                if !seen[other] {
                    stack.push(other);
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbelianInvariants;

    #[test]
    fn trefoil_pd() {
        let pd = PdCode::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]);
        let d = wirtinger_from_pd(&pd).unwrap();
        assert_eq!(d.presentation.n_gens(), 3);
        assert_eq!(d.presentation.relators().len(), 3);
        assert!(d.presentation.relators().iter().all(|r| r.len() == 4));
        assert!(d.validate().all_pass());
    }

    #[test]
    fn curl_unknot() {
        let pd = PdCode::new(vec![[1, 2, 2, 1]]);
        let d = wirtinger_from_pd(&pd).unwrap();
        assert_eq!(d.presentation.n_gens(), 1);
        assert_eq!(d.presentation.abelianization(), AbelianInvariants::new(1, vec![]));
    }

    #[test]
    fn label_once_rejected() {
        let pd = PdCode::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 6]]);
        assert!(matches!(wirtinger_from_pd(&pd), Err(Error::InvalidPdCode(_))));
    }

    #[test]
    fn hopf_link_rejected() {
        let pd = PdCode::new(vec![[4, 1, 3, 2], [2, 3, 1, 4]]);
        assert!(matches!(wirtinger_from_pd(&pd), Err(Error::MultiComponent(2))));
    }

    #[test]
    fn parse_both_spellings() {
        let a = PdCode::parse("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
        let b = PdCode::parse("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(a, b);
        assert!(PdCode::parse("[1,2,3]").is_err());
    }
}
