//! Alephs indexed by a small fragment of ordinals, enough to evaluate the
//! partition number `μ(G, κ)`.
//!
//! Indices are finite sums `ω_{k₁}·q₁ + ... + ω_{k_r}·q_r + n` with
//! `k₁ > ... > k_r >= 0` (`ω₀ = ω`). Every limit index in this fragment is
//! below its own aleph, so `ℵ_α` is regular exactly when `α = 0` or `α` is a
//! successor.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::text::Cursor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Base {
    One,
    /// `ω_k`; `Omega(0)` is `ω`.
    Omega(u32),
}

/// Descending `(base, coefficient)` terms with positive coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct OrdinalExpr {
    terms: Vec<(Base, u64)>,
}

impl OrdinalExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn finite(n: u64) -> Self {
        Self::term(Base::One, n)
    }

    /// `ω_k · q`.
    pub fn omega(k: u32, q: u64) -> Self {
        Self::term(Base::Omega(k), q)
    }

    fn term(base: Base, q: u64) -> Self {
        OrdinalExpr {
            terms: if q == 0 { Vec::new() } else { vec![(base, q)] },
        }
    }

    pub fn terms(&self) -> &[(Base, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ordinal sum: terms of `self` below the leading base of `other` vanish.
    pub fn add(&self, other: &OrdinalExpr) -> OrdinalExpr {
        let Some(&(lead, q)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Base, u64)> = self.terms.iter().copied().filter(|(b, _)| *b >= lead).collect();
        match terms.last_mut() {
            Some((b, c)) if *b == lead => *c += q,
            _ => terms.push((lead, q)),
        }
        terms.extend_from_slice(&other.terms[1..]);
        OrdinalExpr { terms }
    }

    pub fn succ(&self) -> OrdinalExpr {
        self.add(&OrdinalExpr::finite(1))
    }

    /// `α - 1` for successor `α`.
    pub fn pred(&self) -> Option<OrdinalExpr> {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((Base::One, c)) => {
                *c -= 1;
                if *c == 0 {
                    terms.pop();
                }
                Some(OrdinalExpr { terms })
            }
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((Base::One, _)))
    }

    /// `k` with `cf α = ω_k`, for a limit `α > 0`.
    fn cofinality_index(&self) -> Option<u32> {
        match self.terms.last() {
            Some(&(Base::Omega(k), _)) => Some(k),
            _ => None,
        }
    }
}

impl Ord for OrdinalExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for OrdinalExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(b, q)| match (b, q) {
                (Base::One, n) => n.to_string(),
                (Base::Omega(0), 1) => "omega".into(),
                (Base::Omega(0), q) => format!("omega*{q}"),
                (Base::Omega(k), 1) => format!("omega{k}"),
                (Base::Omega(k), q) => format!("omega{k}*{q}"),
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// `ℵ_α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cardinal {
    pub index: OrdinalExpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Successor,
    Limit,
}

impl Cardinal {
    pub fn aleph(index: OrdinalExpr) -> Self {
        Cardinal { index }
    }

    pub fn aleph_n(n: u64) -> Self {
        Self::aleph(OrdinalExpr::finite(n))
    }

    pub fn succ(&self) -> Cardinal {
        Cardinal::aleph(self.index.succ())
    }

    /// `κ^{+n}`.
    pub fn succ_n(&self, n: u64) -> Cardinal {
        Cardinal::aleph(self.index.add(&OrdinalExpr::finite(n)))
    }

    /// `γ` with `self = γ⁺`.
    pub fn pred(&self) -> Option<Cardinal> {
        self.index.pred().map(Cardinal::aleph)
    }

    pub fn is_regular(&self) -> bool {
        self.index.is_zero() || self.index.is_successor()
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.index.terms;
        let simple = t.is_empty() || (t.len() == 1 && (t[0].0 == Base::One || t[0].1 == 1));
        if simple {
            write!(f, "aleph {}", self.index)
        } else {
            write!(f, "aleph ({})", self.index)
        }
    }
}

fn unsupported(c: &Cursor, what: &str) -> Error {
    Error::UnsupportedOrdinal(format!("{what} at column {}", c.column()))
}

fn parse_term(c: &mut Cursor) -> Result<OrdinalExpr> {
    c.skip_ws();
    if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
        let n = c.integer()?;
        let n = u64::try_from(n).map_err(|_| Error::parse(c.column(), "expected a natural number"))?;
        return Ok(OrdinalExpr::finite(n));
    }
    let word = c.ident();
    let rest = match word.strip_prefix("omega") {
        Some(r) => r.trim_start_matches('_'),
        None if word.is_empty() => return c.err("expected an ordinal"),
        None => return Err(unsupported(c, &format!("`{word}`"))),
    };
    let k: u32 = if rest.is_empty() {
        0
    } else {
        rest.parse().map_err(|_| unsupported(c, &format!("`{word}`")))?
    };
    c.skip_ws();
    let q = if c.eat('*') {
        c.skip_ws();
        let q = c.integer()?;
        u64::try_from(q).map_err(|_| Error::parse(c.column(), "expected a natural coefficient"))?
    } else {
        1
    };
    c.skip_ws();
    if c.peek() == Some('^') {
        return Err(unsupported(c, "exponentiation"));
    }
    Ok(OrdinalExpr::omega(k, q))
}

fn parse_sum(c: &mut Cursor) -> Result<OrdinalExpr> {
    let mut acc = parse_term(c)?;
    loop {
        c.skip_ws();
        if !c.eat('+') {
            return Ok(acc);
        }
        acc = acc.add(&parse_term(c)?);
    }
}

impl FromStr for OrdinalExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let out = parse_sum(&mut c)?;
        c.skip_ws();
        if !c.at_end() {
            return c.err("trailing input");
        }
        Ok(out)
    }
}

/// `aleph 0`, `aleph omega`, `aleph omega1`, `aleph (omega*2+3)`.
impl FromStr for Cardinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        c.skip_ws();
        let word = c.ident();
        if word != "aleph" && word != "aleph_" {
            return c.err("expected `aleph`");
        }
        c.skip_ws();
        let index = if c.eat('(') {
            let e = parse_sum(&mut c)?;
            c.skip_ws();
            c.expect(')')?;
            e
        } else {
            parse_term(&mut c)?
        };
        c.skip_ws();
        if !c.at_end() {
            return c.err("trailing input");
        }
        Ok(Cardinal::aleph(index))
    }
}

/// Successor cardinals are those with successor index; `ℵ₀` counts as limit.
pub fn classify(c: &Cardinal) -> Kind {
    if c.index.is_successor() {
        Kind::Successor
    } else {
        Kind::Limit
    }
}

/// `cf ℵ_α`: `ℵ_α` itself when regular, otherwise `|cf α| = ℵ_k` where
/// `ω_k` is the last term of `α`.
pub fn cofinality(c: &Cardinal) -> Cardinal {
    if c.is_regular() {
        return c.clone();
    }
    let k = c.index.cofinality_index().expect("limit index has an omega term");
    Cardinal::aleph_n(k as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MuValue {
    Exact(Cardinal),
    /// `{γ, γ⁺}`, not decided by the formula.
    Ambiguous(Cardinal, Cardinal),
}

impl fmt::Display for MuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuValue::Exact(c) => write!(f, "{c}"),
            MuValue::Ambiguous(a, b) => write!(f, "one of {{{a}, {b}}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuResult {
    pub value: MuValue,
    /// 1: successor `|G|`; 2: limit with `κ < |G|` or regular; 3: singular,
    /// `κ = |G|`, limit cofinality; 4: singular, `κ = |G|`, successor cofinality.
    pub branch: u8,
}

/// Minimal number of `κ`-thin pieces partitioning a group of size `size_g`.
pub fn mu_thin_partition_number(size_g: &Cardinal, kappa: &Cardinal) -> Result<MuResult> {
    if kappa > size_g {
        return Err(Error::Precondition(format!("κ = {kappa} exceeds |G| = {size_g}")));
    }
    if let Some(gamma) = size_g.pred() {
        return Ok(MuResult {
            value: MuValue::Exact(gamma),
            branch: 1,
        });
    }
    if kappa < size_g || size_g.is_regular() {
        return Ok(MuResult {
            value: MuValue::Exact(size_g.clone()),
            branch: 2,
        });
    }
    let cf = cofinality(size_g);
    match cf.pred() {
        None => Ok(MuResult {
            value: MuValue::Exact(cf),
            branch: 3,
        }),
        Some(gamma) => Ok(MuResult {
            value: MuValue::Ambiguous(gamma, cf),
            branch: 4,
        }),
    }
}

/// `G` partitions into `γ` pieces that are `(|G|, 1)`-thin iff `|G| = γ⁺`.
pub fn theorem4_predicate(gamma: &Cardinal, size_g: &Cardinal) -> Result<bool> {
    if size_g < gamma {
        return Err(Error::Precondition(format!("|G| = {size_g} is below γ = {gamma}")));
    }
    Ok(*size_g == gamma.succ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cardinal {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(c("aleph 0"), Cardinal::aleph_n(0));
        assert_eq!(c("aleph omega").to_string(), "aleph omega");
        assert_eq!(c("aleph omega1").index, OrdinalExpr::omega(1, 1));
        let x = c("aleph (omega*2+3)");
        assert_eq!(x.to_string(), "aleph (omega*2+3)");
        assert_eq!(c(&x.to_string()), x);
        assert_eq!(c("aleph (3+omega)"), c("aleph omega"));
        assert_eq!(c("aleph (omega + omega1)"), c("aleph omega1"));
        assert!(matches!("aleph omega^2".parse::<Cardinal>(), Err(Error::UnsupportedOrdinal(_))));
        assert!(matches!("aleph epsilon".parse::<Cardinal>(), Err(Error::UnsupportedOrdinal(_))));
        assert!("beth 1".parse::<Cardinal>().is_err());
    }

    #[test]
    fn ordering_and_successor() {
        assert!(c("aleph 5") < c("aleph omega"));
        assert!(c("aleph (omega*2)") > c("aleph (omega+7)"));
        assert!(c("aleph omega1") > c("aleph (omega*100+1)"));
        assert_eq!(Cardinal::aleph_n(0).succ_n(4), c("aleph 4"));
        assert_eq!(c("aleph omega").succ(), c("aleph (omega+1)"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&c("aleph 1")), Kind::Successor);
        assert_eq!(classify(&c("aleph omega")), Kind::Limit);
        assert_eq!(classify(&c("aleph (omega*2+3)")), Kind::Successor);
        assert_eq!(classify(&c("aleph 0")), Kind::Limit);
    }

    #[test]
    fn cofinality_examples() {
        assert_eq!(cofinality(&c("aleph omega")), c("aleph 0"));
        assert_eq!(cofinality(&c("aleph 2")), c("aleph 2"));
        assert_eq!(cofinality(&c("aleph omega1")), c("aleph 1"));
        assert_eq!(cofinality(&c("aleph (omega1+omega)")), c("aleph 0"));
        assert_eq!(cofinality(&c("aleph (omega*3)")), c("aleph 0"));
    }

    #[test]
    fn mu_examples() {
        let r = mu_thin_partition_number(&c("aleph 1"), &c("aleph 0")).unwrap();
        assert_eq!(r.value, MuValue::Exact(c("aleph 0")));
        let r = mu_thin_partition_number(&c("aleph omega"), &c("aleph 3")).unwrap();
        assert_eq!(r.value, MuValue::Exact(c("aleph omega")));
        let r = mu_thin_partition_number(&c("aleph omega1"), &c("aleph omega1")).unwrap();
        assert_eq!(r.value, MuValue::Ambiguous(c("aleph 0"), c("aleph 1")));
        assert_eq!(r.branch, 4);
        assert!(mu_thin_partition_number(&c("aleph 1"), &c("aleph 2")).is_err());
    }

    #[test]
    fn theorem4_examples() {
        assert!(theorem4_predicate(&c("aleph 0"), &c("aleph 1")).unwrap());
        assert!(!theorem4_predicate(&c("aleph 0"), &c("aleph 2")).unwrap());
        assert!(theorem4_predicate(&c("aleph 1"), &c("aleph 2")).unwrap());
        assert!(theorem4_predicate(&c("aleph 2"), &c("aleph 1")).is_err());
    }
}
