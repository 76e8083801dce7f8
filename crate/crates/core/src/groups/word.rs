use std::fmt;

use crate::error::{Error, Result};

/// A word in the free group: letters are (generator index, ±1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word { letters: vec![(i, 1)] }
    }

    pub fn from_letters(letters: Vec<(usize, i8)>) -> Self {
        assert!(letters.iter().all(|&(_, e)| e == 1 || e == -1), "exponents must be ±1");
        Word { letters }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// `u v u^-1 v^-1`
    pub fn commutator(u: &Word, v: &Word) -> Self {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&(g, e)) if g == l.0 && e == -l.1 => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut v = vec![0i64; generator_count];
        for &(g, e) in &self.letters {
            v[g] += e as i64;
        }
        v
    }

    /// Renames generators through `map` (old index -> new index).
    pub fn relabel(&self, map: &[usize]) -> Self {
        Word { letters: self.letters.iter().map(|&(g, e)| (map[g], e)).collect() }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Parses `word := term+`, `term := atom ("^" int)?`,
    /// `atom := name | "(" word ")" | "[" word "," word "]"`. Names are
    /// matched greedily against `names`, so `abab^-1` works with single
    /// letter generators. `1` denotes the empty word.
    pub fn parse(s: &str, names: &[String]) -> Result<Word> {
        let chars: Vec<char> = s.chars().collect();
        let mut p = Parser { chars: &chars, pos: 0, names };
        p.skip_ws();
        if p.pos < chars.len() && chars[p.pos] == '1' && chars[p.pos + 1..].iter().all(|c| c.is_whitespace()) {
            return Ok(Word::identity());
        }
        let w = p.word()?;
        p.skip_ws();
        if p.pos != chars.len() {
            return Err(Error::Parse(format!("unexpected '{}' in word '{s}'", chars[p.pos])));
        }
        if w.is_empty() {
            return Err(Error::Parse(format!("empty word '{s}'")));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && (self.chars[self.pos].is_whitespace() || self.chars[self.pos] == '*') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') | Some(',') | Some(']') => return Ok(w),
                _ => {
                    let t = self.term()?;
                    w = w.concat(&t);
                }
            }
        }
    }

    fn term(&mut self) -> Result<Word> {
        let atom = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                w
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Word::commutator(&u, &v)
            }
            _ => self.name()?,
        };
        self.skip_ws_only();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws_only();
            let n = self.int()?;
            Ok(atom.pow(n))
        } else {
            Ok(atom)
        }
    }

    fn skip_ws_only(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at position {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(format!("bad exponent '{s}'")))
    }

    fn name(&mut self) -> Result<Word> {
        let rest: String = self.chars[self.pos..].iter().collect();
        let best = self
            .names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len());
        match best {
            Some((i, n)) => {
                self.pos += n.chars().count();
                Ok(Word::generator(i))
            }
            None => Err(Error::Parse(format!("unknown generator at '{rest}'"))),
        }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        // run-length encode equal letters
        let letters = self.word.letters();
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let (g, e) = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == (g, e) {
                j += 1;
            }
            let n = (j - i) as i64 * e as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if n == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{n}")?;
            }
            i = j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_powers_groups_and_commutators() {
        let n = names(&["a", "b"]);
        let w = Word::parse("(a b)^5", &n).unwrap();
        assert_eq!(w.len(), 10);
        assert_eq!(w.exponent_sums(2), vec![5, 5]);
        let t = Word::parse("abab^-1a^-1b^-1", &n).unwrap();
        assert_eq!(t.exponent_sums(2), vec![1, -1]);
        let c = Word::parse("[a,b]", &n).unwrap();
        assert_eq!(c, Word::parse("a b a^-1 b^-1", &n).unwrap());
        assert!(Word::parse("a c", &n).is_err());
        assert!(Word::parse("(a b", &n).is_err());
    }

    #[test]
    fn greedy_names_and_display() {
        let n = names(&["x", "x2"]);
        let w = Word::parse("x2 x^-3", &n).unwrap();
        assert_eq!(w.letters(), &[(1, 1), (0, -1), (0, -1), (0, -1)]);
        assert_eq!(w.display(&n).to_string(), "x2 x^-3");
    }

    #[test]
    fn reduction_and_inverse() {
        let w = Word::from_letters(vec![(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        assert_eq!(w.free_reduce(), Word::generator(2));
        assert_eq!(w.concat(&w.inverse()).free_reduce(), Word::identity());
    }
}
