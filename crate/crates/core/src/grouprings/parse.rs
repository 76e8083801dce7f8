use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::element::GroupRingElement;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::ring::RingSpec;

/// Parses `"3*t^2 - t + 1"`, `"2*[g3] - [g0]"` or `"1/2*t"` (rationals
/// only where the ring allows them). Names are the group's symbols; adjacent
/// monomials multiply in order.
pub fn parse_element(s: &str, group: &Arc<FiniteGroup>, ring: &RingSpec) -> Result<GroupRingElement> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = ElemParser { chars: &chars, pos: 0, group, src: s };
    let mut out = GroupRingElement::zero(group, ring);
    if chars.is_empty() {
        return Err(p.err("empty expression"));
    }
    let mut first = true;
    while p.pos < chars.len() {
        let sign = match p.peek() {
            Some('+') => {
                p.pos += 1;
                1
            }
            Some('-') => {
                p.pos += 1;
                -1
            }
            _ if first => 1,
            _ => return Err(p.err("expected '+' or '-'")),
        };
        first = false;
        let (coef, elem) = p.term()?;
        let c = if sign < 0 { -coef } else { coef };
        let c = ring.normalize(&c).map_err(|e| Error::Parse(format!("{e} in '{s}'")))?;
        out = out.checked_add(&GroupRingElement::monomial(group, ring, elem, c))?;
    }
    Ok(out)
}

struct ElemParser<'a> {
    chars: &'a [char],
    pos: usize,
    group: &'a Arc<FiniteGroup>,
    src: &'a str,
}

impl ElemParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in '{}'", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn uint(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = self.uint().ok_or_else(|| self.err("expected integer"))?;
        let n: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn term(&mut self) -> Result<(BigRational, usize)> {
        let mut coef = BigRational::one();
        let mut elem = 0usize;
        let mut seen = false;
        if let Some(n) = self.uint() {
            coef = BigRational::from_integer(n);
            if self.peek() == Some('/') {
                self.pos += 1;
                let d = self.uint().ok_or_else(|| self.err("expected denominator"))?;
                if d == BigInt::from(0) {
                    return Err(self.err("zero denominator"));
                }
                coef /= BigRational::from_integer(d);
            }
            seen = true;
        }
        loop {
            if self.peek() == Some('*') {
                self.pos += 1;
            }
            match self.peek() {
                Some('[') => {
                    self.pos += 1;
                    if self.peek() == Some('g') {
                        self.pos += 1;
                    }
                    let g = self.uint().ok_or_else(|| self.err("expected element index"))?;
                    if self.peek() != Some(']') {
                        return Err(self.err("expected ']'"));
                    }
                    self.pos += 1;
                    let g: usize = g.try_into().map_err(|_| self.err("index too large"))?;
                    if g >= self.group.order() {
                        return Err(self.err("element index out of range"));
                    }
                    let g = self.power(g)?;
                    elem = self.group.mul(elem, g);
                }
                Some(c) if c.is_alphabetic() => {
                    let g = self.symbol()?;
                    let g = self.power(g)?;
                    elem = self.group.mul(elem, g);
                }
                _ => break,
            }
            seen = true;
        }
        if !seen {
            return Err(self.err("expected a term"));
        }
        Ok((coef, elem))
    }

    fn power(&mut self, g: usize) -> Result<usize> {
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            Ok(self.group.pow(g, k))
        } else {
            Ok(g)
        }
    }

    fn symbol(&mut self) -> Result<usize> {
        // longest symbol that matches here
        let rest: String = self.chars[self.pos..].iter().collect();
        let best = self
            .group
            .symbols()
            .iter()
            .filter(|(name, _)| rest.starts_with(name.as_str()))
            .max_by_key(|(name, _)| name.len());
        match best {
            Some((name, &g)) => {
                self.pos += name.chars().count();
                Ok(g)
            }
            None => Err(self.err("unknown symbol")),
        }
    }
}
