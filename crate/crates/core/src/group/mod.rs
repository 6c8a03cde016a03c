//! Computable groups: a closed set of concrete instances, each with exact
//! arithmetic, canonical element forms and a fixed injective enumeration
//! starting at the identity.

mod enumerate;
pub(crate) mod text;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{rational_height, Enumeration};

/// An element in canonical form. Equality of canonical forms is equality of
/// group elements, so the derived `Eq`, `Ord` and `Hash` are consistent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Integer lattice vector.
    Int(Vec<i64>),
    /// Residue in `0..n`.
    Mod(u64),
    /// Permutation in one-line form, zero based: `p[i]` is the image of `i`.
    Perm(Vec<u32>),
    /// Freely reduced word. Letter `2i` is generator `i`, `2i + 1` its inverse.
    Word(Vec<u32>),
    /// Finite-support sequence with trailing identities removed.
    Sum(Vec<Element>),
    /// Exact rational vector.
    Rat(Vec<BigRational>),
    /// Element of a direct product, one entry per factor.
    Tuple(Vec<Element>),
}

/// Serialized as its display form.
impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rank {
    Finite(usize),
    Omega,
}

/// Constructor tag and parameters of a shipped group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    /// `Z^d`
    Lattice(usize),
    /// `Zmod n`
    Cyclic(u64),
    /// `Sym n`
    Symmetric(usize),
    /// `Free k`
    Free(usize),
    /// `DirectSum[C; r]`, the restricted direct sum of `r` copies of a finite group `C`.
    DirectSum { component: Box<GroupSpec>, rank: Rank },
    /// `Q^d`
    Rational(usize),
    /// `Product(G1, G2, ...)`
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            GroupSpec::Lattice(0) => bad("Z^d needs d >= 1".into()),
            GroupSpec::Cyclic(0) => bad("Zmod n needs n >= 1".into()),
            GroupSpec::Symmetric(0) => bad("Sym n needs n >= 1".into()),
            GroupSpec::Symmetric(n) if *n > 20 => bad("Sym n supports n <= 20".into()),
            GroupSpec::Free(0) => bad("Free k needs k >= 1".into()),
            GroupSpec::Free(k) if *k > 26 => bad("Free k supports k <= 26".into()),
            GroupSpec::Rational(0) => bad("Q^d needs d >= 1".into()),
            GroupSpec::DirectSum { component, rank } => {
                component.validate()?;
                if component.order().is_none() {
                    return bad("DirectSum needs a finite component group".into());
                }
                if *rank == Rank::Finite(0) {
                    return bad("DirectSum rank must be >= 1".into());
                }
                Ok(())
            }
            GroupSpec::Product(factors) => {
                if factors.len() < 2 {
                    return bad("Product needs at least two factors".into());
                }
                factors.iter().try_for_each(GroupSpec::validate)
            }
            _ => Ok(()),
        }
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::Lattice(_) | GroupSpec::Free(_) | GroupSpec::Rational(_) => None,
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Symmetric(n) => Some((1..=*n as u64).product()),
            GroupSpec::DirectSum { component, rank } => match rank {
                Rank::Omega => {
                    if component.order() == Some(1) {
                        Some(1)
                    } else {
                        None
                    }
                }
                Rank::Finite(r) => {
                    let c = component.order()?;
                    (0..*r).try_fold(1u64, |acc, _| acc.checked_mul(c))
                }
            },
            GroupSpec::Product(factors) => factors
                .iter()
                .try_fold(1u64, |acc, f| f.order().and_then(|o| acc.checked_mul(o))),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Lattice(_) | GroupSpec::Cyclic(_) | GroupSpec::Rational(_) => true,
            GroupSpec::Symmetric(n) => *n <= 2,
            GroupSpec::Free(_) => false,
            GroupSpec::DirectSum { component, .. } => component.is_abelian(),
            GroupSpec::Product(factors) => factors.iter().all(GroupSpec::is_abelian),
        }
    }
}

/// A group built from a validated [`GroupSpec`]. Immutable; every operation is pure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    spec: GroupSpec,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Group { spec })
    }

    pub fn lattice(d: usize) -> Result<Self> {
        Self::new(GroupSpec::Lattice(d))
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(GroupSpec::Cyclic(n))
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(GroupSpec::Symmetric(n))
    }

    pub fn free(k: usize) -> Result<Self> {
        Self::new(GroupSpec::Free(k))
    }

    pub fn rational(d: usize) -> Result<Self> {
        Self::new(GroupSpec::Rational(d))
    }

    pub fn direct_sum(component: GroupSpec, rank: Rank) -> Result<Self> {
        Self::new(GroupSpec::DirectSum {
            component: Box::new(component),
            rank,
        })
    }

    pub fn product(factors: Vec<GroupSpec>) -> Result<Self> {
        Self::new(GroupSpec::Product(factors))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> Option<u64> {
        self.spec.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.spec.is_abelian()
    }

    /// Factor groups of a product, or `None` for other instances.
    pub fn factors(&self) -> Option<Vec<Group>> {
        match &self.spec {
            GroupSpec::Product(fs) => Some(fs.iter().map(|s| Group { spec: s.clone() }).collect()),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        identity_of(&self.spec)
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    pub fn contains(&self, x: &Element) -> bool {
        contains(&self.spec, x)
    }

    fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: x.to_string(),
                group: self.to_string(),
            })
        }
    }

    /// Product `xy` with membership checks.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Inverse with a membership check.
    pub fn invert(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.inv(x))
    }

    /// Product `xy` of elements already known to belong to the group.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        mul(&self.spec, x, y)
    }

    pub fn inv(&self, x: &Element) -> Element {
        debug_assert!(self.contains(x));
        inv(&self.spec, x)
    }

    /// The fixed enumeration `g0 = e, g1, g2, ...`.
    pub fn enumerate(&self) -> Enumeration {
        Enumeration::new(&self.spec)
    }

    /// First `n` elements of the enumeration.
    pub fn enumerate_prefix(&self, n: usize) -> Result<Vec<Element>> {
        if let Some(order) = self.order() {
            if n as u64 > order {
                return Err(Error::ExhaustedEnumeration {
                    group: self.to_string(),
                    requested: n,
                    order,
                });
            }
        }
        Ok(self.enumerate().take(n).collect())
    }

    /// All elements of a finite group in enumeration order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        match self.order() {
            Some(o) if o <= 1 << 24 => self.enumerate_prefix(o as usize),
            Some(_) => Err(Error::InvalidParameter(format!("{self} is too large to list"))),
            None => Err(Error::InvalidParameter(format!("{self} is infinite"))),
        }
    }

    /// Position of `x` in the enumeration, scanning at most `limit` elements.
    pub fn index_of(&self, x: &Element, limit: usize) -> Option<usize> {
        if let (GroupSpec::Lattice(1), Element::Int(v)) = (&self.spec, x) {
            let z = v[0];
            let i = if z > 0 { 2 * z - 1 } else { -2 * z };
            return usize::try_from(i).ok().filter(|&i| i < limit);
        }
        if let (GroupSpec::Cyclic(_), Element::Mod(r)) = (&self.spec, x) {
            return usize::try_from(*r).ok().filter(|&i| i < limit);
        }
        self.enumerate().take(limit).position(|y| y == *x)
    }

    /// Subgroup generated by `gens`, as a sorted set. Fails once the closure
    /// exceeds `cap` elements.
    pub fn generated_subgroup<'a>(
        &self,
        gens: impl IntoIterator<Item = &'a Element>,
        cap: usize,
    ) -> Result<BTreeSet<Element>> {
        let gens: Vec<Element> = gens.into_iter().cloned().collect();
        for g in &gens {
            self.check(g)?;
        }
        let mut steps: Vec<Element> = Vec::new();
        for g in &gens {
            if !self.is_identity(g) {
                steps.push(g.clone());
                steps.push(self.inv(g));
            }
        }
        let mut seen: HashSet<Element> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(h) = queue.pop_front() {
            for s in &steps {
                let next = self.mul(&h, s);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded {
                            chain: vec![seen.len()],
                            reason: format!("subgroup closure exceeds {cap} elements"),
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Whether a finite set is closed under products and inverses.
    pub fn is_subgroup(&self, set: &BTreeSet<Element>) -> bool {
        if !set.contains(&self.identity()) {
            return false;
        }
        set.iter().all(|x| {
            set.contains(&self.inv(x)) && set.iter().all(|y| set.contains(&self.mul(x, y)))
        })
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let x = text::parse_element(&self.spec, text)?;
        self.check(&x)?;
        Ok(x)
    }
}

fn identity_of(spec: &GroupSpec) -> Element {
    match spec {
        GroupSpec::Lattice(d) => Element::Int(vec![0; *d]),
        GroupSpec::Cyclic(_) => Element::Mod(0),
        GroupSpec::Symmetric(n) => Element::Perm((0..*n as u32).collect()),
        GroupSpec::Free(_) => Element::Word(Vec::new()),
        GroupSpec::DirectSum { .. } => Element::Sum(Vec::new()),
        GroupSpec::Rational(d) => Element::Rat(vec![BigRational::zero(); *d]),
        GroupSpec::Product(fs) => Element::Tuple(fs.iter().map(identity_of).collect()),
    }
}

fn contains(spec: &GroupSpec, x: &Element) -> bool {
    match (spec, x) {
        (GroupSpec::Lattice(d), Element::Int(v)) => v.len() == *d,
        (GroupSpec::Cyclic(n), Element::Mod(r)) => r < n,
        (GroupSpec::Symmetric(n), Element::Perm(p)) => {
            if p.len() != *n {
                return false;
            }
            let mut seen = vec![false; *n];
            p.iter().all(|&i| {
                (i as usize) < *n && !std::mem::replace(&mut seen[i as usize], true)
            })
        }
        (GroupSpec::Free(k), Element::Word(w)) => {
            w.iter().all(|&l| (l as usize) < 2 * k) && w.windows(2).all(|p| p[0] != p[1] ^ 1)
        }
        (GroupSpec::DirectSum { component, rank }, Element::Sum(cs)) => {
            let within = match rank {
                Rank::Finite(r) => cs.len() <= *r,
                Rank::Omega => true,
            };
            within
                && cs.last().is_none_or(|c| *c != identity_of(component))
                && cs.iter().all(|c| contains(component, c))
        }
        (GroupSpec::Rational(d), Element::Rat(v)) => v.len() == *d,
        (GroupSpec::Product(fs), Element::Tuple(xs)) => {
            fs.len() == xs.len() && fs.iter().zip(xs).all(|(f, x)| contains(f, x))
        }
        _ => false,
    }
}

fn mul(spec: &GroupSpec, x: &Element, y: &Element) -> Element {
    match (spec, x, y) {
        (GroupSpec::Lattice(_), Element::Int(a), Element::Int(b)) => {
            Element::Int(a.iter().zip(b).map(|(p, q)| p + q).collect())
        }
        (GroupSpec::Cyclic(n), Element::Mod(a), Element::Mod(b)) => {
            Element::Mod(((*a as u128 + *b as u128) % *n as u128) as u64)
        }
        // (pq)(i) = p(q(i))
        (GroupSpec::Symmetric(_), Element::Perm(p), Element::Perm(q)) => {
            Element::Perm(q.iter().map(|&i| p[i as usize]).collect())
        }
        (GroupSpec::Free(_), Element::Word(a), Element::Word(b)) => {
            let mut out = a.clone();
            for &l in b {
                if out.last() == Some(&(l ^ 1)) {
                    out.pop();
                } else {
                    out.push(l);
                }
            }
            Element::Word(out)
        }
        (GroupSpec::DirectSum { component, .. }, Element::Sum(a), Element::Sum(b)) => {
            let e = identity_of(component);
            let len = a.len().max(b.len());
            let mut out: Vec<Element> = (0..len)
                .map(|i| {
                    let p = a.get(i).unwrap_or(&e);
                    let q = b.get(i).unwrap_or(&e);
                    mul(component, p, q)
                })
                .collect();
            while out.last() == Some(&e) {
                out.pop();
            }
            Element::Sum(out)
        }
        (GroupSpec::Rational(_), Element::Rat(a), Element::Rat(b)) => {
            Element::Rat(a.iter().zip(b).map(|(p, q)| p + q).collect())
        }
        (GroupSpec::Product(fs), Element::Tuple(a), Element::Tuple(b)) => Element::Tuple(
            fs.iter()
                .zip(a.iter().zip(b))
                .map(|(f, (p, q))| mul(f, p, q))
                .collect(),
        ),
        _ => panic!("element shape does not match {spec}"),
    }
}

fn inv(spec: &GroupSpec, x: &Element) -> Element {
    match (spec, x) {
        (GroupSpec::Lattice(_), Element::Int(a)) => Element::Int(a.iter().map(|p| -p).collect()),
        (GroupSpec::Cyclic(n), Element::Mod(a)) => Element::Mod((n - a) % n),
        (GroupSpec::Symmetric(_), Element::Perm(p)) => {
            let mut out = vec![0u32; p.len()];
            for (i, &j) in p.iter().enumerate() {
                out[j as usize] = i as u32;
            }
            Element::Perm(out)
        }
        (GroupSpec::Free(_), Element::Word(w)) => {
            Element::Word(w.iter().rev().map(|l| l ^ 1).collect())
        }
        (GroupSpec::DirectSum { component, .. }, Element::Sum(cs)) => {
            Element::Sum(cs.iter().map(|c| inv(component, c)).collect())
        }
        (GroupSpec::Rational(_), Element::Rat(a)) => Element::Rat(a.iter().map(|p| -p).collect()),
        (GroupSpec::Product(fs), Element::Tuple(xs)) => {
            Element::Tuple(fs.iter().zip(xs).map(|(f, x)| inv(f, x)).collect())
        }
        _ => panic!("element shape does not match {spec}"),
    }
}

impl Element {
    pub fn int(v: i64) -> Self {
        Element::Int(vec![v])
    }

    /// Rational vector from `(numerator, denominator)` pairs.
    pub fn rat(v: &[(i64, i64)]) -> Self {
        Element::Rat(
            v.iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    /// Rational vector with integer entries.
    pub fn rat_ints(v: &[i64]) -> Self {
        Element::Rat(v.iter().map(|&p| BigRational::from_integer(p.into())).collect())
    }

    /// One-line permutation from one-based images, as written `(2,1,3)`.
    pub fn perm1(images: &[u32]) -> Self {
        Element::Perm(images.iter().map(|i| i - 1).collect())
    }

    /// Free-group word from letters: lowercase generators, uppercase inverses.
    pub fn word(letters: &str) -> Self {
        Element::Word(
            letters
                .chars()
                .map(|c| {
                    let g = c.to_ascii_lowercase() as u32 - 'a' as u32;
                    2 * g + u32::from(c.is_ascii_uppercase())
                })
                .collect(),
        )
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    /// Whether this component vector is zero (used for abelian Q^d checks).
    pub fn is_zero_rat(&self) -> bool {
        matches!(self, Element::Rat(v) if v.iter().all(|q| q.is_zero()))
    }

    pub fn rat_max_abs(&self) -> Option<BigRational> {
        match self {
            Element::Rat(v) => v.iter().map(|q| q.abs()).max(),
            _ => None,
        }
    }
}
