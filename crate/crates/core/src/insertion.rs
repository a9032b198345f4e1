//! Insertion classes: integer combinations of products of elementary
//! symmetric primitives `c<i>[<level>]` and cross-level Euler factors
//! `X[<level>]`, with a small text grammar used by the CLI.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::spec::ProblemSpec;

/// A single multiplicative generator of the insertion algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Primitive {
    /// `c<i>[<level>]`: i-th elementary symmetric function of the
    /// level-`level` solution entries (the i-th Chern class of the dual
    /// tautological bundle at that level, restricted to the marked point).
    ElemSym { i: u32, level: u32 },
    /// `X[<level>]`: product of all cross-level differences between the
    /// given level and the next one (the point restriction of the Euler
    /// class of the corresponding Hom bundle).
    EulerCross { level: u32 },
}

impl Primitive {
    pub fn degree(&self, spec: &ProblemSpec) -> i64 {
        match *self {
            Primitive::ElemSym { i, .. } => i as i64,
            Primitive::EulerCross { level } => {
                spec.rank(level as usize) as i64 * spec.rank(level as usize + 1) as i64
            }
        }
    }

    fn validate(&self, spec: &ProblemSpec) -> Result<()> {
        let k = spec.num_steps() as u32;
        match *self {
            Primitive::ElemSym { i, level } => {
                if level == 0 || level > k {
                    return Err(Error::InsertionInvalid(format!(
                        "level {level} out of range 1..={k}"
                    )));
                }
                let r = spec.ranks[(level - 1) as usize];
                if i == 0 || i > r {
                    return Err(Error::InsertionInvalid(format!(
                        "class index {i} out of range 1..={r} at level {level}"
                    )));
                }
            }
            Primitive::EulerCross { level } => {
                if level == 0 || level > k {
                    return Err(Error::InsertionInvalid(format!(
                        "cross-level index {level} out of range 1..={k}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A product of primitives with an integer coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    /// Sorted `(primitive, exponent)` pairs with positive exponents.
    pub powers: Vec<(Primitive, u32)>,
}

impl Term {
    pub fn constant(coeff: i64) -> Term {
        Term {
            coeff,
            powers: Vec::new(),
        }
    }

    pub fn degree(&self, spec: &ProblemSpec) -> i64 {
        self.powers
            .iter()
            .map(|(p, e)| p.degree(spec) * *e as i64)
            .sum()
    }

    fn monomial_key(&self) -> Vec<(Primitive, u32)> {
        self.powers.clone()
    }
}

/// An insertion: a finite integer combination of primitive products.
///
/// The empty product (written `1`) is the identity insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub terms: Vec<Term>,
}

impl Insertion {
    /// The identity insertion `1`.
    pub fn one() -> Insertion {
        Insertion {
            terms: vec![Term::constant(1)],
        }
    }

    /// Single primitive power with coefficient 1.
    pub fn primitive(p: Primitive, exponent: u32) -> Insertion {
        if exponent == 0 {
            return Insertion::one();
        }
        Insertion {
            terms: vec![Term {
                coeff: 1,
                powers: vec![(p, exponent)],
            }],
        }
    }

    /// Product of `c<i>[<level>]^m[i-1][level-1]` over all entries of `m`.
    ///
    /// `m[idx_i][idx_level]` is indexed class-first; zero exponents are
    /// skipped.
    pub fn from_exponents(m: &[Vec<u32>]) -> Insertion {
        let mut powers = Vec::new();
        for (i_idx, row) in m.iter().enumerate() {
            for (j_idx, &e) in row.iter().enumerate() {
                if e > 0 {
                    powers.push((
                        Primitive::ElemSym {
                            i: (i_idx + 1) as u32,
                            level: (j_idx + 1) as u32,
                        },
                        e,
                    ));
                }
            }
        }
        Insertion {
            terms: vec![Term { coeff: 1, powers }],
        }
        .canonical()
    }

    /// Sorts powers, merges repeated primitives, combines like terms, and
    /// drops zeros. Result is the unique normal form used for display and
    /// hashing.
    pub fn canonical(&self) -> Insertion {
        let mut combined: BTreeMap<Vec<(Primitive, u32)>, i64> = BTreeMap::new();
        for t in &self.terms {
            let mut merged: BTreeMap<Primitive, u32> = BTreeMap::new();
            for &(p, e) in &t.powers {
                if e > 0 {
                    *merged.entry(p).or_insert(0) += e;
                }
            }
            let key: Vec<(Primitive, u32)> = merged.into_iter().collect();
            *combined.entry(key).or_insert(0) += t.coeff;
        }
        let terms: Vec<Term> = combined
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(powers, coeff)| Term { coeff, powers })
            .collect();
        Insertion { terms }
    }

    /// True when the canonical form has no terms (the zero insertion).
    pub fn is_zero(&self) -> bool {
        self.canonical().terms.is_empty()
    }

    pub fn mul(&self, other: &Insertion) -> Insertion {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut powers = a.powers.clone();
                powers.extend(b.powers.iter().cloned());
                terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    powers,
                });
            }
        }
        Insertion { terms }.canonical()
    }

    pub fn mul_primitive(&self, p: Primitive, exponent: u32) -> Insertion {
        self.mul(&Insertion::primitive(p, exponent))
    }

    /// Validates ranges and homogeneity, returning the common degree.
    pub fn degree(&self, spec: &ProblemSpec) -> Result<i64> {
        let canon = self.canonical();
        for t in &canon.terms {
            for (p, _) in &t.powers {
                p.validate(spec)?;
            }
        }
        let mut degree = None;
        for t in &canon.terms {
            let d = t.degree(spec);
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::InsertionInvalid(format!(
                        "insertion is not homogeneous: terms of degree {prev} and {d}"
                    )));
                }
                _ => {}
            }
        }
        Ok(degree.unwrap_or(0))
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let canon = self.canonical();
        if canon.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &canon.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if t.coeff != 1 || t.powers.is_empty() {
                parts.push(t.coeff.to_string());
            }
            for &(p, e) in &t.powers {
                let base = match p {
                    Primitive::ElemSym { i, level } => format!("c{i}[{level}]"),
                    Primitive::EulerCross { level } => format!("X[{level}]"),
                };
                if e == 1 {
                    parts.push(base);
                } else {
                    parts.push(format!("{base}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the insertion grammar.
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := integer | [integer '*'] factor ('*' factor)*
/// factor := prim ['^' integer]
/// prim   := 'c' int '[' int ']' | 'X' '[' int ']'
/// ```
///
/// Whitespace is ignored everywhere; `1` denotes the identity insertion.
pub fn parse_insertion(input: &str) -> Result<Insertion> {
    let mut p = Parser {
        chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        input,
    };
    let ins = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(ins.canonical())
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::InsertionParse(format!(
            "{msg} at position {} in {:?}",
            self.pos, self.input
        ))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.bump() == Some(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let v: i64 = s.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Insertion> {
        let mut terms = vec![self.term(1)?];
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    terms.push(self.term(1)?);
                }
                '-' => {
                    self.pos += 1;
                    terms.push(self.term(-1)?);
                }
                _ => break,
            }
        }
        Ok(Insertion {
            terms: terms.into_iter().flat_map(|i| i.terms).collect(),
        })
    }

    fn term(&mut self, sign: i64) -> Result<Insertion> {
        let mut coeff = sign;
        let mut powers: Vec<(Primitive, u32)> = Vec::new();
        let mut saw_factor = false;

        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '-') {
            coeff *= self.integer()?;
            saw_factor = true;
            if self.peek() == Some('*') {
                self.pos += 1;
                saw_factor = false;
            }
        }
        if !saw_factor || matches!(self.peek(), Some('c') | Some('X')) {
            loop {
                powers.push(self.factor()?);
                if self.peek() == Some('*') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        Ok(Insertion {
            terms: vec![Term { coeff, powers }],
        })
    }

    fn factor(&mut self) -> Result<(Primitive, u32)> {
        let prim = match self.peek() {
            Some('c') => {
                self.pos += 1;
                let i = self.integer()?;
                self.expect('[')?;
                let level = self.integer()?;
                self.expect(']')?;
                if i < 1 || level < 1 {
                    return Err(self.err("class and level indices must be positive"));
                }
                Primitive::ElemSym {
                    i: i as u32,
                    level: level as u32,
                }
            }
            Some('X') => {
                self.pos += 1;
                self.expect('[')?;
                let level = self.integer()?;
                self.expect(']')?;
                if level < 1 {
                    return Err(self.err("cross-level index must be positive"));
                }
                Primitive::EulerCross {
                    level: level as u32,
                }
            }
            _ => return Err(self.err("expected 'c<i>[<j>]' or 'X[<j>]'")),
        };
        let exponent = if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            if e < 0 {
                return Err(self.err("negative exponent"));
            }
            e as u32
        } else {
            1
        };
        Ok((prim, exponent))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_identity() {
        let ins = parse_insertion("1").unwrap();
        assert_eq!(ins, Insertion::one().canonical());
        assert_eq!(ins.to_string(), "1");
    }

    #[test]
    fn parses_products_and_powers() {
        let ins = parse_insertion("2*c1[1]^3 * c2[2] + X[1]").unwrap();
        assert_eq!(ins.terms.len(), 2);
        assert_eq!(ins.to_string(), "2*c1[1]^3*c2[2] + X[1]");
    }

    #[test]
    fn whitespace_is_ignored() {
        let a = parse_insertion(" c1[1] ^ 2 + 3 * c2[1] ").unwrap();
        let b = parse_insertion("c1[1]^2+3*c2[1]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn merges_repeated_primitives() {
        let a = parse_insertion("c1[1]*c1[1]").unwrap();
        let b = parse_insertion("c1[1]^2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn minus_joins_terms() {
        let ins = parse_insertion("c1[1] - c1[1]").unwrap();
        assert!(ins.is_zero());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_insertion("c1[").is_err());
        assert!(parse_insertion("q^2").is_err());
        assert!(parse_insertion("c1[1]^^2").is_err());
        assert!(parse_insertion("c0[1]").is_err());
    }

    #[test]
    fn zero_exponent_vanishes_into_identity() {
        let ins = parse_insertion("c2[1]^0").unwrap();
        assert_eq!(ins, Insertion::one().canonical());
    }
}
