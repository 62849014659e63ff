//! Line-based presentation file format.
//!
//! ```text
//! # trefoil
//! gens: a b
//! rel: a b a B A B
//! meridian: a
//! longitude: (aba)^2 a^-6
//! ```
//!
//! Lower-case names are generators, the same name with its first letter upper
//! case is the inverse. Names are a letter optionally followed by digits.
//! Words may use `^n` powers (negative allowed), parentheses, spaces, and `1`
//! for the identity.

use crate::error::{Error, Result};
use crate::presentation::{is_generator_name, KnotGroupData, Presentation};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Reject data that fails knot-group validation.
    pub strict: bool,
}

/// Parses a presentation file without enforcing knot-group validation.
pub fn parse_presentation(text: &str) -> Result<KnotGroupData> {
    parse_presentation_with(text, ParseOptions::default())
}

pub fn parse_presentation_with(text: &str, opts: ParseOptions) -> Result<KnotGroupData> {
    let file = parse_lines(text, &[])?;
    let data = file.into_knot_data()?;
    if opts.strict {
        let report = data.validate();
        if !report.all_pass() {
            return Err(Error::Validation(report));
        }
    }
    Ok(data)
}

/// Parses either a presentation file or a PD code (recognized by a leading
/// `[` or `PD[`); PD codes are converted to their Wirtinger presentation.
pub fn parse_knot_input(text: &str, opts: ParseOptions) -> Result<KnotGroupData> {
    let body = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let head = body.trim_start();
    if head.starts_with('[') || head.starts_with("PD[") {
        let data = crate::wirtinger::wirtinger_from_pd(&crate::wirtinger::PdCode::parse(head)?)?;
        if opts.strict {
            let report = data.validate();
            if !report.all_pass() {
                return Err(Error::Validation(report));
            }
        }
        return Ok(data);
    }
    parse_presentation_with(text, opts)
}

/// Parses a single word against a list of generator names.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    WordParser::new(text, names, 1, 0).parse_all()
}

/// Contents of a presentation file before conversion to [`KnotGroupData`].
#[derive(Debug)]
pub(crate) struct RawFile {
    pub names: Vec<String>,
    pub relators: Vec<Word>,
    pub meridian: Option<Word>,
    pub longitude: Option<Word>,
    /// `embed:` lines: (generator index, word over the outer generators).
    pub embeds: Vec<(usize, Word)>,
    pub rel_line: Option<usize>,
}

impl RawFile {
    fn into_knot_data(self) -> Result<KnotGroupData> {
        let n_rel = self.relators.len();
        let (presentation, dropped) = Presentation::with_dropped(self.names, self.relators)?;
        let meridian = match self.meridian {
            Some(m) => m,
            None if presentation.n_gens() > 0 => Word::gen(0),
            None => {
                return Err(Error::Syntax {
                    line: 1,
                    column: 1,
                    message: "no generators and no meridian".into(),
                })
            }
        };
        let mut data = KnotGroupData::new(presentation, meridian, self.longitude);
        if dropped > 0 {
            data.warnings.push(format!(
                "dropped {dropped} of {n_rel} relators that reduce to the identity"
            ));
        }
        Ok(data)
    }
}

/// `outer_names` are the generator names available on the right-hand side
/// of `embed:` lines; when empty, `embed:` lines are rejected.
pub(crate) fn parse_lines(text: &str, outer_names: &[String]) -> Result<RawFile> {
    let mut names: Option<Vec<String>> = None;
    let mut raw = RawFile {
        names: Vec::new(),
        relators: Vec::new(),
        meridian: None,
        longitude: None,
        embeds: Vec::new(),
        rel_line: None,
    };
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(i) => &full_line[..i],
            None => full_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(syntax(line_no, first_non_space(line), "expected 'key: value'"));
        };
        let key = line[..colon].trim();
        let value_offset = colon + 1;
        let value = &line[value_offset..];
        let col0 = line[..value_offset].chars().count();
        match key {
            "gens" => {
                if names.is_some() {
                    return Err(syntax(line_no, 1, "duplicate 'gens' line"));
                }
                let mut list = Vec::new();
                let mut search_from = 0;
                for tok in value.split_whitespace() {
                    let pos = value[search_from..].find(tok).unwrap() + search_from;
                    search_from = pos + tok.len();
                    let column = col0 + value[..pos].chars().count() + 1;
                    if !is_generator_name(tok) {
                        return Err(syntax(line_no, column, &format!("invalid generator name '{tok}'")));
                    }
                    if list.iter().any(|n| n == tok) {
                        return Err(syntax(line_no, column, &format!("duplicate generator '{tok}'")));
                    }
                    list.push(tok.to_string());
                }
                names = Some(list);
            }
            "rel" | "meridian" | "longitude" | "embed" => {
                let Some(names) = names.as_ref() else {
                    return Err(syntax(line_no, 1, &format!("'{key}' before 'gens'")));
                };
                match key {
                    "rel" => {
                        raw.rel_line.get_or_insert(line_no);
                        if !value.trim().is_empty() {
                            let w = WordParser::new(value, names, line_no, col0).parse_all()?;
                            raw.relators.push(w);
                        }
                    }
                    "meridian" | "longitude" => {
                        let w = WordParser::new(value, names, line_no, col0).parse_all()?;
                        let slot = if key == "meridian" {
                            &mut raw.meridian
                        } else {
                            &mut raw.longitude
                        };
                        if slot.is_some() {
                            return Err(syntax(line_no, 1, &format!("duplicate '{key}' line")));
                        }
                        *slot = Some(w);
                    }
                    _ => {
                        if outer_names.is_empty() {
                            return Err(syntax(line_no, 1, "'embed' is only valid in subgroup files"));
                        }
                        let Some(eq) = value.find('=') else {
                            return Err(syntax(line_no, col0 + 1, "expected 'embed: <gen> = <word>'"));
                        };
                        let lhs = value[..eq].trim();
                        let Some(g) = names.iter().position(|n| n == lhs) else {
                            return Err(Error::UnknownGenerator {
                                name: lhs.to_string(),
                                line: line_no,
                                column: col0 + first_non_space(&value[..eq]),
                            });
                        };
                        let rhs_col = col0 + value[..eq + 1].chars().count();
                        let w = WordParser::new(&value[eq + 1..], outer_names, line_no, rhs_col).parse_all()?;
                        raw.embeds.push((g, w));
                    }
                }
            }
            other => {
                return Err(syntax(
                    line_no,
                    first_non_space(line),
                    &format!("unknown key '{other}'"),
                ));
            }
        }
    }
    let Some(names) = names else {
        return Err(syntax(1, 1, "missing 'gens' line"));
    };
    raw.names = names;
    Ok(raw)
}

fn first_non_space(s: &str) -> usize {
    s.chars().position(|c| !c.is_whitespace()).unwrap_or(0) + 1
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
    line: usize,
    col0: usize,
}

impl<'a> WordParser<'a> {
    fn new(text: &str, names: &'a [String], line: usize, col0: usize) -> Self {
        WordParser {
            chars: text.chars().collect(),
            pos: 0,
            names,
            line,
            col0,
        }
    }

    fn column(&self) -> usize {
        self.col0 + self.pos + 1
    }

    fn err(&self, message: &str) -> Error {
        syntax(self.line, self.column(), message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Word> {
        let w = self.parse_seq()?;
        match self.peek() {
            None => Ok(w),
            Some(')') => Err(self.err("unmatched ')'")),
            Some(c) => Err(self.err(&format!("unexpected character '{c}'"))),
        }
    }

    fn parse_seq(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            let atom = self.parse_atom()?;
            let atom = if self.peek() == Some('^') {
                self.pos += 1;
                let e = self.parse_int()?;
                atom.pow(e)
            } else {
                atom
            };
            w = w.mul(&atom);
        }
        Ok(w)
    }

    fn parse_atom(&mut self) -> Result<Word> {
        let c = self.peek().unwrap();
        if c == '(' {
            let open_col = self.column();
            self.pos += 1;
            let inner = self.parse_seq()?;
            if self.peek() != Some(')') {
                return Err(syntax(self.line, open_col, "unclosed '('"));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c == '1' {
            self.pos += 1;
            return Ok(Word::identity());
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            let col = self.column();
            self.pos += 1;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let token: String = self.chars[start..self.pos].iter().collect();
            let inverse = c.is_ascii_uppercase();
            let lookup = if inverse {
                c.to_ascii_lowercase().to_string() + &token[1..]
            } else {
                token.clone()
            };
            let Some(g) = self.names.iter().position(|n| *n == lookup) else {
                return Err(Error::UnknownGenerator {
                    name: token,
                    line: self.line,
                    column: col,
                });
            };
            return Ok(Word::from_letters([Letter { gen: g, inverse }]));
        }
        Err(self.err(&format!("unexpected character '{c}'")))
    }

    fn parse_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected integer exponent after '^'"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| syntax(self.line, self.col0 + start + 1, "exponent out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbelianInvariants;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn trefoil_file() {
        let d = parse_presentation("gens: a b\nrel: a b a B A B\nmeridian: a").unwrap();
        assert_eq!(d.presentation.n_gens(), 2);
        assert_eq!(d.presentation.relators().len(), 1);
        assert_eq!(d.presentation.relators()[0].len(), 6);
        assert!(d.validate().all_pass());
    }

    #[test]
    fn unknot_file() {
        let d = parse_presentation("gens: a\nrel:\nmeridian: a").unwrap();
        assert!(d.presentation.relators().is_empty());
        assert_eq!(d.presentation.abelianization(), AbelianInvariants::new(1, vec![]));
        assert!(d.validate().all_pass());
    }

    #[test]
    fn unknown_generator() {
        let e = parse_presentation("gens: a b\nrel: a c").unwrap_err();
        match e {
            Error::UnknownGenerator { name, line, column } => {
                assert_eq!(name, "c");
                assert_eq!((line, column), (2, 8));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn meridian_defaults_to_first_generator() {
        let d = parse_presentation("gens: x y\nrel: xyxYXY").unwrap();
        assert_eq!(d.meridian, Word::gen(0));
    }

    #[test]
    fn powers_and_groups() {
        let n = names(&["a", "b"]);
        let w = parse_word("(ab)^2 a^-3", &n).unwrap();
        assert_eq!(w, Word::from_powers(&[(0, 1), (1, 1), (0, 1), (1, 1), (0, -3)]));
        assert_eq!(
            parse_word("(aB)^-1", &n).unwrap(),
            Word::from_powers(&[(1, 1), (0, -1)])
        );
        assert_eq!(parse_word("a A", &n).unwrap(), Word::identity());
        assert_eq!(parse_word("1", &n).unwrap(), Word::identity());
        assert_eq!(parse_word("b^0", &n).unwrap(), Word::identity());
    }

    #[test]
    fn multi_character_names() {
        let n = names(&["x1", "x12"]);
        let w = parse_word("x1 X12 x12^2", &n).unwrap();
        assert_eq!(w, Word::from_powers(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_presentation("gens: a b\nrel: a^ b").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, column: 9, .. }), "{e:?}");
        let e = parse_presentation("gens: a b\nrel: (ab").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, column: 6, .. }), "{e:?}");
        let e = parse_presentation("gens: a\nfoo: a").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }));
        let e = parse_presentation("rel: a").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, .. }));
        let e = parse_presentation("gens: a\nrel: a)").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }));
        let e = parse_presentation("gens: a A").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, column: 9, .. }), "{e:?}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a comment\n\ngens: a b # trailing\nrel: abaBAB\n";
        let d = parse_presentation(text).unwrap();
        assert_eq!(d.presentation.relators().len(), 1);
    }

    #[test]
    fn strict_mode_rejects_non_knot_groups() {
        let text = "gens: a b\nrel: abAB\nmeridian: a";
        assert!(parse_presentation(text).is_ok());
        let e = parse_presentation_with(text, ParseOptions { strict: true }).unwrap_err();
        assert!(matches!(e, Error::Validation(_)));
    }

    #[test]
    fn empty_relator_warning() {
        let d = parse_presentation("gens: a b\nrel: aA\nrel: abaBAB").unwrap();
        assert_eq!(d.presentation.relators().len(), 1);
        assert_eq!(d.warnings.len(), 1);
    }

    #[test]
    fn embed_lines_rejected_in_plain_files() {
        assert!(parse_presentation("gens: a\nembed: a = a").is_err());
    }
}
