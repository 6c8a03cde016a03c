//! Textual forms of group specs and elements.
//!
//! Group specs: `Z`, `Z^2`, `Zmod 12`, `Sym 3`, `Free 2`, `Q^4`,
//! `DirectSum[Zmod 2; omega]`, `DirectSum[Zmod 3; 5]`, `Product(Z^1, Zmod 7)`.
//!
//! Elements: `5` and `(1,-2)` in `Z^d`; residues in `Zmod n`; one-based
//! one-line permutations `[2,1,3]`; free words `aB` (uppercase = inverse,
//! `1` = identity); finite-support sequences `<1,0,1>`; rationals `(1/2,-3)`;
//! product elements `(x; y)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{identity_of, Element, Group, GroupSpec, Rank};
use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn column(&self) -> usize {
        self.src[..self.pos].chars().count() + 1
    }

    pub(crate) fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.column(), msg))
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    pub(crate) fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos].to_string()
    }

    pub(crate) fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with(word)
            && !rest[word.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected an integer");
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    pub(crate) fn small(&mut self) -> Result<i64> {
        let col = self.column();
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| Error::parse(col, "integer out of range"))
    }

    pub(crate) fn count(&mut self) -> Result<usize> {
        let col = self.column();
        let v = self.small()?;
        usize::try_from(v).map_err(|_| Error::parse(col, "expected a non-negative count"))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let spec = parse_spec(&mut c)?;
        if !c.at_end() {
            return c.err("trailing input after group spec");
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Group::new(s.parse()?)
    }
}

fn parse_spec(c: &mut Cursor) -> Result<GroupSpec> {
    c.skip_ws();
    let col = c.column();
    let name = c.ident();
    match name.as_str() {
        "Z" | "Q" => {
            let d = if c.eat('^') { c.count()? } else { 1 };
            Ok(if name == "Z" {
                GroupSpec::Lattice(d)
            } else {
                GroupSpec::Rational(d)
            })
        }
        "Zmod" => Ok(GroupSpec::Cyclic(c.count()? as u64)),
        "Sym" | "S" => Ok(GroupSpec::Symmetric(c.count()?)),
        "Free" | "F" => Ok(GroupSpec::Free(c.count()?)),
        "DirectSum" => {
            c.expect('[')?;
            let component = parse_spec(c)?;
            c.expect(';')?;
            let rank = if c.keyword("omega") {
                Rank::Omega
            } else {
                Rank::Finite(c.count()?)
            };
            c.expect(']')?;
            Ok(GroupSpec::DirectSum {
                component: Box::new(component),
                rank,
            })
        }
        "Product" => {
            c.expect('(')?;
            let mut factors = vec![parse_spec(c)?];
            while c.eat(',') {
                factors.push(parse_spec(c)?);
            }
            c.expect(')')?;
            Ok(GroupSpec::Product(factors))
        }
        "" => Err(Error::parse(col, "expected a group name")),
        other => Err(Error::parse(col, format!("unknown group `{other}`"))),
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Lattice(d) => write!(f, "Z^{d}"),
            GroupSpec::Cyclic(n) => write!(f, "Zmod {n}"),
            GroupSpec::Symmetric(n) => write!(f, "Sym {n}"),
            GroupSpec::Free(k) => write!(f, "Free {k}"),
            GroupSpec::Rational(d) => write!(f, "Q^{d}"),
            GroupSpec::DirectSum { component, rank } => match rank {
                Rank::Omega => write!(f, "DirectSum[{component}; omega]"),
                Rank::Finite(r) => write!(f, "DirectSum[{component}; {r}]"),
            },
            GroupSpec::Product(fs) => {
                write!(f, "Product(")?;
                for (i, s) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Int(v) => {
                f.write_str("(")?;
                write_list(f, v, ",")?;
                f.write_str(")")
            }
            Element::Mod(r) => write!(f, "{r}"),
            Element::Perm(p) => {
                let one: Vec<u32> = p.iter().map(|i| i + 1).collect();
                f.write_str("[")?;
                write_list(f, &one, ",")?;
                f.write_str("]")
            }
            Element::Word(w) if w.is_empty() => f.write_str("1"),
            Element::Word(w) => {
                for &l in w {
                    let c = (b'a' + (l / 2) as u8) as char;
                    let c = if l % 2 == 1 { c.to_ascii_uppercase() } else { c };
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Element::Sum(cs) => {
                f.write_str("<")?;
                write_list(f, cs, ",")?;
                f.write_str(">")
            }
            Element::Rat(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Rat(v) => {
                f.write_str("(")?;
                write_list(f, v, ",")?;
                f.write_str(")")
            }
            Element::Tuple(xs) => {
                f.write_str("(")?;
                write_list(f, xs, "; ")?;
                f.write_str(")")
            }
        }
    }
}

pub(super) fn parse_element(spec: &GroupSpec, text: &str) -> Result<Element> {
    let mut c = Cursor::new(text);
    let x = element(spec, &mut c)?;
    if !c.at_end() {
        return c.err("trailing input after element");
    }
    Ok(x)
}

fn rational(c: &mut Cursor) -> Result<BigRational> {
    let p = c.integer()?;
    let q = if c.eat('/') { c.integer()? } else { BigInt::one() };
    if q == BigInt::from(0) {
        return c.err("zero denominator");
    }
    Ok(BigRational::new(p, q))
}

pub(crate) fn element(spec: &GroupSpec, c: &mut Cursor) -> Result<Element> {
    match spec {
        GroupSpec::Lattice(d) => {
            if *d == 1 && !matches!({ c.skip_ws(); c.peek() }, Some('(')) {
                return Ok(Element::Int(vec![c.small()?]));
            }
            c.expect('(')?;
            let mut v = vec![c.small()?];
            while c.eat(',') {
                v.push(c.small()?);
            }
            c.expect(')')?;
            if v.len() != *d {
                return c.err(format!("expected {d} coordinates, found {}", v.len()));
            }
            Ok(Element::Int(v))
        }
        GroupSpec::Cyclic(n) => {
            let v = c.small()?;
            Ok(Element::Mod(v.rem_euclid(*n as i64) as u64))
        }
        GroupSpec::Symmetric(n) => {
            c.expect('[')?;
            let mut p = Vec::new();
            if !c.eat(']') {
                loop {
                    let i = c.count()?;
                    if i == 0 || i > *n {
                        return c.err(format!("permutation image {i} out of 1..={n}"));
                    }
                    p.push(i as u32 - 1);
                    if c.eat(']') {
                        break;
                    }
                    c.expect(',')?;
                }
            }
            Ok(Element::Perm(p))
        }
        GroupSpec::Free(k) => {
            c.skip_ws();
            if c.eat('1') {
                return Ok(Element::Word(Vec::new()));
            }
            let col = c.column();
            let letters = c.ident();
            if letters.is_empty() {
                return c.err("expected a word");
            }
            let mut w: Vec<u32> = Vec::new();
            for ch in letters.chars() {
                if !ch.is_ascii_alphabetic() {
                    return Err(Error::parse(col, format!("bad letter `{ch}`")));
                }
                let g = ch.to_ascii_lowercase() as u32 - 'a' as u32;
                if g as usize >= *k {
                    return Err(Error::parse(col, format!("generator `{ch}` not in Free {k}")));
                }
                let l = 2 * g + u32::from(ch.is_ascii_uppercase());
                if w.last() == Some(&(l ^ 1)) {
                    w.pop();
                } else {
                    w.push(l);
                }
            }
            Ok(Element::Word(w))
        }
        GroupSpec::DirectSum { component, .. } => {
            c.expect('<')?;
            let mut cs = Vec::new();
            if !c.eat('>') {
                loop {
                    cs.push(element(component, c)?);
                    if c.eat('>') {
                        break;
                    }
                    c.expect(',')?;
                }
            }
            let e = identity_of(component);
            while cs.last() == Some(&e) {
                cs.pop();
            }
            Ok(Element::Sum(cs))
        }
        GroupSpec::Rational(d) => {
            if *d == 1 && !matches!({ c.skip_ws(); c.peek() }, Some('(')) {
                return Ok(Element::Rat(vec![rational(c)?]));
            }
            c.expect('(')?;
            let mut v = vec![rational(c)?];
            while c.eat(',') {
                v.push(rational(c)?);
            }
            c.expect(')')?;
            if v.len() != *d {
                return c.err(format!("expected {d} coordinates, found {}", v.len()));
            }
            Ok(Element::Rat(v))
        }
        GroupSpec::Product(fs) => {
            c.expect('(')?;
            let mut xs = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    c.expect(';')?;
                }
                xs.push(element(f, c)?);
            }
            c.expect(')')?;
            Ok(Element::Tuple(xs))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        for s in [
            "Z^2",
            "Zmod 12",
            "Free 2",
            "DirectSum[Zmod 2; omega]",
            "Q^4",
            "Product(Z^1, Zmod 7)",
            "Sym 3",
            "DirectSum[Sym 3; 4]",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("Z".parse::<GroupSpec>().unwrap(), GroupSpec::Lattice(1));
    }

    #[test]
    fn spec_errors_carry_columns() {
        match "Product(Z^1, Wat 3)".parse::<GroupSpec>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 14),
            other => panic!("{other:?}"),
        }
        assert!(matches!("Zmod 0".parse::<GroupSpec>(), Err(Error::InvalidParameter(_))));
        assert!("Z^2 junk".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn element_parsing() {
        let g: Group = "Product(Z^1, Zmod 7)".parse().unwrap();
        let x = g.parse_element("(-3; 9)").unwrap();
        assert_eq!(x, Element::Tuple(vec![Element::int(-3), Element::Mod(2)]));
        let f: Group = "Free 2".parse().unwrap();
        assert_eq!(f.parse_element("abBa").unwrap(), Element::word("aa"));
        assert!(f.parse_element("c").is_err());
        let q: Group = "Q^2".parse().unwrap();
        assert_eq!(q.parse_element("(2/4, -3)").unwrap(), Element::rat(&[(1, 2), (-3, 1)]));
        let s: Group = "Sym 3".parse().unwrap();
        assert!(s.parse_element("[1,1,2]").is_err());
    }
}
