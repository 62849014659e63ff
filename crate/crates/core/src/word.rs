//! Words over a signed generator alphabet.
//!
//! A [`Word`] is a sequence of [`Letter`]s. Most constructors return the
//! freely reduced form; [`Word::from_letters_raw`] keeps the letters as given
//! so that reduction itself can be tested.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column index in a coset table: `2 * gen` for the generator, `2 * gen + 1`
    /// for its inverse. This is also the shortlex order on letters.
    pub fn column(self) -> usize {
        2 * self.gen + usize::from(self.inverse)
    }

    pub fn from_column(col: usize) -> Self {
        Letter {
            gen: col / 2,
            inverse: col % 2 == 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Builds a word and freely reduces it.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word(Vec::new());
        for l in letters {
            w.push_reduced(l);
        }
        w
    }

    /// Builds a word without reducing it.
    pub fn from_letters_raw(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from `(generator, exponent)` pairs, e.g. `[(0, 1), (1, -2)]`
    /// is `a B B`.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        Word::from_letters(powers.iter().flat_map(|&(g, e)| {
            let l = if e >= 0 { Letter::pos(g) } else { Letter::neg(g) };
            std::iter::repeat_n(l, e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push_reduced(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn free_reduce(&self) -> Word {
        Word::from_letters(self.0.iter().copied())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inv())
    }

    /// Freely and cyclically reduced form.
    pub fn cyclic_reduce(&self) -> Word {
        let mut v = self.free_reduce().0;
        let mut start = 0;
        let mut end = v.len();
        while end - start >= 2 && v[start] == v[end - 1].inv() {
            start += 1;
            end -= 1;
        }
        v.truncate(end);
        v.drain(..start);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.free_reduce();
        for &l in &other.0 {
            w.push_reduced(l);
        }
        w
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `self * w * self⁻¹`, reduced.
    pub fn conjugate(&self, w: &Word) -> Word {
        self.mul(w).mul(&self.inverse())
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Exponent-sum vector of length `n_gens`.
    pub fn exponent_sums(&self, n_gens: usize) -> Vec<i64> {
        let mut v = vec![0; n_gens];
        for l in &self.0 {
            v[l.gen] += l.sign();
        }
        v
    }

    /// Replaces every generator by a word. `images[g]` is the image of generator `g`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = &images[l.gen];
            if l.inverse {
                out = out.mul(&img.inverse());
            } else {
                out = out.mul(img);
            }
        }
        out
    }

    /// Renders the word using generator names; inverses are written in upper case.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word::from_letters(iter)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let multi = self.names.iter().any(|n| n.len() > 1);
        for (i, l) in self.word.0.iter().enumerate() {
            if multi && i > 0 {
                f.write_str(" ")?;
            }
            let name = &self.names[l.gen];
            if l.inverse {
                f.write_str(&inverse_name(name))?;
            } else {
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}

/// Upper-cases the leading letter of a generator name.
pub fn inverse_name(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter::pos(0)
    }
    fn b() -> Letter {
        Letter::pos(1)
    }

    #[test]
    fn free_reduce_examples() {
        let w = Word::from_letters_raw(vec![a(), a().inv()]);
        assert_eq!(w.free_reduce(), Word::identity());
        assert_eq!(Word::identity().free_reduce(), Word::identity());
        let w = Word::from_letters_raw(vec![a(), b(), b().inv(), a()]);
        assert_eq!(w.free_reduce().letters(), &[a(), a()]);
    }

    #[test]
    fn cascading_cancellation() {
        let w = Word::from_letters_raw(vec![a(), b(), b().inv(), a().inv(), b()]);
        assert_eq!(w.free_reduce().letters(), &[b()]);
    }

    #[test]
    fn cyclic_reduction() {
        let w = Word::from_letters(vec![b(), a(), a(), b().inv()]);
        assert_eq!(w.cyclic_reduce().letters(), &[a(), a()]);
        let w = Word::from_letters(vec![b(), b().inv()]);
        assert!(w.cyclic_reduce().is_empty());
    }

    #[test]
    fn powers_and_conjugates() {
        let m = Word::gen(0);
        assert_eq!(m.pow(3).len(), 3);
        assert_eq!(m.pow(-2).letters(), &[a().inv(), a().inv()]);
        let g = Word::gen(1);
        let c = g.conjugate(&m.pow(2));
        assert_eq!(c.letters(), &[b(), a(), a(), b().inv()]);
        assert_eq!(c.exponent_sums(2), vec![2, 0]);
    }

    #[test]
    fn display_uses_case_for_inverse() {
        let names = vec!["a".to_string(), "b".to_string()];
        let w = Word::from_letters(vec![a(), b(), a().inv()]);
        assert_eq!(w.display(&names).to_string(), "abA");
        assert_eq!(Word::identity().display(&names).to_string(), "1");
        let names = vec!["a1".to_string(), "b2".to_string()];
        assert_eq!(w.display(&names).to_string(), "a1 b2 A1");
    }
}
