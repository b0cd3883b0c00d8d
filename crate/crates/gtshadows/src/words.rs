//! Free-group words over named generator alphabets.
//!
//! A [`Word`] is a freely reduced run-length sequence of letters
//! `(symbol, exponent)`. Words are the portable representation of the
//! `f`-component of a shadow, of braid expressions, and of every
//! homomorphism substitution. Alphabets are explicit ([`Alphabet`]) so a
//! word meant for one quotient cannot be evaluated in another by accident.

use std::fmt;

use crate::error::Error;

/// Generator symbols. `x`/`y` are aliases for `x12`/`x23` in rank-2 contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    X12,
    X23,
    X13,
    X14,
    X24,
    X34,
    /// Generator of the center of the 3-strand pure braid group,
    /// `c = x23 x12 x13`, carried as an atomic letter.
    C,
    S1,
    S2,
    S3,
}

impl Sym {
    pub fn name(self) -> &'static str {
        match self {
            Sym::X12 => "x12",
            Sym::X23 => "x23",
            Sym::X13 => "x13",
            Sym::X14 => "x14",
            Sym::X24 => "x24",
            Sym::X34 => "x34",
            Sym::C => "c",
            Sym::S1 => "s1",
            Sym::S2 => "s2",
            Sym::S3 => "s3",
        }
    }

    /// Short name in rank-2 contexts: `x` for x12, `y` for x23.
    pub fn f2_name(self) -> &'static str {
        match self {
            Sym::X12 => "x",
            Sym::X23 => "y",
            other => other.name(),
        }
    }

    pub fn from_name(s: &str) -> Option<Sym> {
        Some(match s {
            "x" | "x12" => Sym::X12,
            "y" | "x23" => Sym::X23,
            "x13" => Sym::X13,
            "x14" => Sym::X14,
            "x24" => Sym::X24,
            "x34" => Sym::X34,
            "c" => Sym::C,
            "s1" => Sym::S1,
            "s2" => Sym::S2,
            "s3" => Sym::S3,
            _ => return None,
        })
    }

    pub fn is_sigma(self) -> bool {
        matches!(self, Sym::S1 | Sym::S2 | Sym::S3)
    }
}

/// The generator alphabets used by the braid quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    /// x12, x23 (aka x, y)
    F2,
    /// x12, x23, x13, c
    Pb3,
    /// the six x-generators
    Pb4,
    /// Pb3 plus s1, s2
    Braid3,
    /// Pb4 plus s1, s2, s3
    Braid4,
}

impl Alphabet {
    pub fn contains(self, sym: Sym) -> bool {
        match self {
            Alphabet::F2 => matches!(sym, Sym::X12 | Sym::X23),
            Alphabet::Pb3 => matches!(sym, Sym::X12 | Sym::X23 | Sym::X13 | Sym::C),
            Alphabet::Pb4 => {
                matches!(sym, Sym::X12 | Sym::X23 | Sym::X13 | Sym::X14 | Sym::X24 | Sym::X34)
            }
            Alphabet::Braid3 => {
                Alphabet::Pb3.contains(sym) || matches!(sym, Sym::S1 | Sym::S2)
            }
            Alphabet::Braid4 => Alphabet::Pb4.contains(sym) || sym.is_sigma(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::F2 => "F2",
            Alphabet::Pb3 => "PB3",
            Alphabet::Pb4 => "PB4",
            Alphabet::Braid3 => "B3",
            Alphabet::Braid4 => "B4",
        }
    }
}

/// A freely reduced word: adjacent letters carry distinct symbols and no
/// exponent is zero. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(Sym, i64)>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn letter(sym: Sym, exp: i64) -> Word {
        let mut w = Word::identity();
        w.push(sym, exp);
        w
    }

    pub fn gen(sym: Sym) -> Word {
        Word::letter(sym, 1)
    }

    /// Reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = (Sym, i64)>) -> Word {
        let mut w = Word::identity();
        for (sym, exp) in letters {
            w.push(sym, exp);
        }
        w
    }

    /// Appends one letter, merging and cancelling as needed.
    pub fn push(&mut self, sym: Sym, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == sym {
                last.1 += exp;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((sym, exp));
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[(Sym, i64)] {
        &self.letters
    }

    /// Number of run-length letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(sym, exp) in &other.letters {
            w.push(sym, exp);
        }
        w
    }

    /// Reversed sequence with negated exponents.
    pub fn inverse(&self) -> Word {
        Word::reduce(self.letters.iter().rev().map(|&(s, e)| (s, -e)))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// `[self, other] = self other self^-1 other^-1`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse()).concat(&other.inverse())
    }

    /// `conjugator^-1 self conjugator`.
    pub fn conjugated_by(&self, conjugator: &Word) -> Word {
        conjugator.inverse().concat(self).concat(conjugator)
    }

    /// Homomorphic image: every symbol of `self` must be assigned.
    /// The assignment is a function from symbols to replacement words.
    pub fn substitute(&self, assignment: impl Fn(Sym) -> Option<Word>) -> Result<Word, Error> {
        let mut out = Word::identity();
        for &(sym, exp) in &self.letters {
            let image = assignment(sym)
                .ok_or_else(|| Error::UnassignedSymbol(sym.name().to_string()))?;
            if image.len() == 1 {
                // single-letter images keep run-length exponents intact
                let (s, e) = image.letters[0];
                out.push(s, e * exp);
            } else {
                let image = image.pow(exp);
                for &(s, e) in &image.letters {
                    out.push(s, e);
                }
            }
        }
        Ok(out)
    }

    /// Total signed exponent of `sym`.
    pub fn exponent_sum(&self, sym: Sym) -> i64 {
        self.letters.iter().filter(|&&(s, _)| s == sym).map(|&(_, e)| e).sum()
    }

    /// Checks that every symbol lies in `alphabet`.
    pub fn check_alphabet(&self, alphabet: Alphabet) -> Result<(), Error> {
        for &(sym, _) in &self.letters {
            if !alphabet.contains(sym) {
                return Err(Error::AlphabetMismatch {
                    symbol: sym.name().to_string(),
                    alphabet: alphabet.name().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Renders with full generator names (`x12^2 x23^-1`); identity is `e`.
    pub fn display_full(&self) -> String {
        self.render(|s| s.name())
    }

    /// Renders with `x`/`y` for x12/x23; identity is `e`.
    pub fn display_f2(&self) -> String {
        self.render(|s| s.f2_name())
    }

    fn render(&self, name: impl Fn(Sym) -> &'static str) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let mut out = String::new();
        for (i, &(sym, exp)) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(name(sym));
            if exp != 1 {
                out.push('^');
                out.push_str(&exp.to_string());
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_full())
    }
}

/// Parses the textual word syntax: `sym^e` factors separated by spaces or
/// `*`, e.g. `x^2 y^-1`. `e` (or the empty string) denotes the identity.
pub fn parse_word(text: &str) -> Result<Word, Error> {
    let mut w = Word::identity();
    let cleaned = text.replace('*', " ");
    let trimmed = cleaned.trim();
    if trimmed.is_empty() || trimmed == "e" {
        return Ok(w);
    }
    for token in trimmed.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => {
                let exp: i64 = e
                    .parse()
                    .map_err(|_| Error::BadWord(format!("bad exponent in {token:?}")))?;
                (n, exp)
            }
            None => (token, 1),
        };
        let sym = Sym::from_name(name)
            .ok_or_else(|| Error::BadWord(format!("unknown generator {name:?}")))?;
        if exp == 0 {
            return Err(Error::BadWord(format!("zero exponent in {token:?}")));
        }
        w.push(sym, exp);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> Sym {
        Sym::X12
    }
    fn y() -> Sym {
        Sym::X23
    }

    #[test]
    fn reduce_examples() {
        let w = Word::reduce([(x(), 1), (y(), 1), (y(), -1), (x(), 1)]);
        assert_eq!(w, Word::letter(x(), 2));
        assert!(Word::reduce([]).is_identity());
    }

    #[test]
    fn invert_examples() {
        let w = Word::reduce([(x(), 2), (y(), -1)]);
        assert_eq!(w.inverse(), Word::reduce([(y(), 1), (x(), -2)]));
        assert!(Word::identity().inverse().is_identity());
    }

    #[test]
    fn substitute_is_phi_1_23_4_on_xy() {
        // x -> x12 x13, y -> x24 x34
        let w = Word::reduce([(x(), 1), (y(), 1)]);
        let img = w
            .substitute(|s| match s {
                Sym::X12 => Some(Word::reduce([(Sym::X12, 1), (Sym::X13, 1)])),
                Sym::X23 => Some(Word::reduce([(Sym::X24, 1), (Sym::X34, 1)])),
                _ => None,
            })
            .unwrap();
        assert_eq!(
            img,
            Word::reduce([(Sym::X12, 1), (Sym::X13, 1), (Sym::X24, 1), (Sym::X34, 1)])
        );
    }

    #[test]
    fn substitute_identity_assignment_and_empty() {
        let empty = Word::identity();
        assert!(empty.substitute(|_| None).unwrap().is_identity());
        let w = parse_word("x^3 y^-2 x").unwrap();
        assert_eq!(w.substitute(|s| Some(Word::gen(s))).unwrap(), w);
    }

    #[test]
    fn substitute_unassigned_symbol_errors() {
        let w = parse_word("x c").unwrap();
        assert!(matches!(
            w.substitute(|s| (s == x()).then(|| Word::gen(s))),
            Err(Error::UnassignedSymbol(_))
        ));
    }

    #[test]
    fn exponent_sum_examples() {
        let w = parse_word("x^2 y^-1 x^-1").unwrap();
        assert_eq!(w.exponent_sum(x()), 1);
        let comm = Word::gen(x()).commutator(&Word::gen(y()));
        assert_eq!(comm.exponent_sum(x()), 0);
        assert_eq!(comm.exponent_sum(y()), 0);
    }

    #[test]
    fn parse_print_roundtrip_examples() {
        for text in ["e", "x^2 y^-1", "x12 x13^-3 c", "s1^-1 x23 s1"] {
            let w = parse_word(text).unwrap();
            assert_eq!(parse_word(&w.display_full()).unwrap(), w);
        }
        assert_eq!(parse_word("x * y^-1").unwrap(), parse_word("x y^-1").unwrap());
        assert!(parse_word("q^2").is_err());
        assert!(parse_word("x^0").is_err());
        assert!(parse_word("x^").is_err());
    }

    #[test]
    fn alphabet_checks() {
        let w = parse_word("x12 x34").unwrap();
        assert!(w.check_alphabet(Alphabet::Pb4).is_ok());
        assert!(w.check_alphabet(Alphabet::Pb3).is_err());
        assert!(parse_word("s3 x12").unwrap().check_alphabet(Alphabet::Braid3).is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0u8..4, -3i64..4), 0..12).prop_map(|raw| {
            Word::reduce(raw.into_iter().map(|(s, e)| {
                let sym = match s {
                    0 => Sym::X12,
                    1 => Sym::X23,
                    2 => Sym::X13,
                    _ => Sym::C,
                };
                (sym, e)
            }))
        })
    }

    proptest! {
        #[test]
        fn invert_involutive(w in arb_word()) {
            prop_assert_eq!(w.inverse().inverse(), w.clone());
            prop_assert!(w.concat(&w.inverse()).is_identity());
        }

        #[test]
        fn substitution_is_homomorphic(u in arb_word(), v in arb_word()) {
            let assign = |s: Sym| Some(match s {
                Sym::X12 => parse_word("x13 c^-1").unwrap(),
                Sym::X23 => parse_word("x12^2").unwrap(),
                Sym::X13 => parse_word("c x23").unwrap(),
                _ => Word::gen(s),
            });
            let lhs = u.concat(&v).substitute(assign).unwrap();
            let rhs = u.substitute(assign).unwrap().concat(&v.substitute(assign).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exponent_sum_additive(u in arb_word(), v in arb_word()) {
            for sym in [Sym::X12, Sym::X23, Sym::X13, Sym::C] {
                prop_assert_eq!(
                    u.concat(&v).exponent_sum(sym),
                    u.exponent_sum(sym) + v.exponent_sum(sym)
                );
                prop_assert_eq!(u.inverse().exponent_sum(sym), -u.exponent_sum(sym));
            }
        }
    }
}
