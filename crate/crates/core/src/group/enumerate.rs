//! Fixed enumerations. Every instance lists the identity first and never
//! repeats an element:
//!
//! - `Z^d`: by ℓ∞ shell, then lexicographic with coordinates compared in
//!   spiral order `0, 1, -1, 2, -2, ...` (so `Z^1` is the spiral itself);
//! - `Zmod n`: `0, 1, ..., n-1`;
//! - `Sym n`: lexicographic one-line order;
//! - `Free k`: by word length, then lexicographic in `a < a⁻¹ < b < b⁻¹ < ...`;
//! - `DirectSum[C; r]`: by the highest occupied coordinate (so coordinate
//!   prefixes are enumeration prefixes), then support size, then component order;
//! - `Q^d`: by the largest coordinate height, then lexicographic in the
//!   enumeration order of `Q`;
//! - products: by the sum of factor indices, then lexicographic.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{identity_of, Element, GroupSpec, Rank};

pub struct Enumeration {
    inner: Box<dyn Iterator<Item = Element> + Send>,
}

impl Iterator for Enumeration {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        self.inner.next()
    }
}

impl Enumeration {
    pub(super) fn new(spec: &GroupSpec) -> Self {
        let inner: Box<dyn Iterator<Item = Element> + Send> = match spec.clone() {
            GroupSpec::Lattice(d) => Box::new((0u64..).flat_map(move |r| lattice_shell(d, r))),
            GroupSpec::Cyclic(n) => Box::new((0..n).map(Element::Mod)),
            GroupSpec::Symmetric(n) => Box::new(Permutations::new(n)),
            GroupSpec::Free(k) => Box::new((0usize..).flat_map(move |len| free_words(k, len))),
            GroupSpec::DirectSum { component, rank } => {
                let comps: Vec<Element> = Enumeration::new(&component)
                    .take(component.order().unwrap_or(0) as usize)
                    .collect();
                let blocks = match rank {
                    Rank::Finite(r) => r + 1,
                    Rank::Omega if comps.len() <= 1 => 1,
                    Rank::Omega => usize::MAX,
                };
                Box::new((0..blocks).flat_map(move |t| sum_block(&comps, t)))
            }
            GroupSpec::Rational(d) => Box::new((0u64..).flat_map(move |h| rational_shell(d, h))),
            GroupSpec::Product(factors) => Box::new(ProductIter::new(&factors)),
        };
        Enumeration { inner }
    }
}

fn spiral_values(r: i64) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=r {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Odometer over `values^d` in lexicographic order.
fn lex_tuples<T: Clone>(values: &[T], d: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    let mut idx = vec![0usize; d];
    let mut done = values.is_empty();
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.iter().map(|&i| values[i].clone()).collect();
        let mut pos = d;
        loop {
            if pos == 0 {
                done = true;
                break;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
        }
        Some(out)
    })
}

fn lattice_shell(d: usize, r: u64) -> Vec<Element> {
    let r = r as i64;
    // in dimension one the only coordinate is forced, so skip the value list
    let values = if d > 1 { spiral_values(r) } else { Vec::new() };
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    shell_rec(&values, d, r, false, &mut cur, &mut out);
    out
}

/// Lex order over `values^d`, keeping tuples whose largest `|c|` is `r`.
/// Only the last coordinate is forced, so the work is linear in the output.
fn shell_rec(values: &[i64], d: usize, r: i64, hit: bool, cur: &mut Vec<i64>, out: &mut Vec<Element>) {
    if cur.len() == d {
        if hit {
            out.push(Element::Int(cur.clone()));
        }
        return;
    }
    let forced = [r, -r];
    let choices: &[i64] = if cur.len() + 1 == d && !hit {
        if r == 0 { &forced[..1] } else { &forced }
    } else {
        values
    };
    for &v in choices {
        let h = hit || v.abs() == r;
        cur.push(v);
        shell_rec(values, d, r, h, cur, out);
        cur.pop();
    }
}

struct Permutations {
    current: Option<Vec<u32>>,
}

impl Permutations {
    fn new(n: usize) -> Self {
        Permutations {
            current: Some((0..n as u32).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        // standard next-permutation step
        if let Some(i) = (1..next.len()).rev().find(|&i| next[i - 1] < next[i]) {
            let j = (i..next.len()).rev().find(|&j| next[j] > next[i - 1]).unwrap();
            next.swap(i - 1, j);
            next[i..].reverse();
            self.current = Some(next);
        }
        Some(Element::Perm(cur))
    }
}

fn free_words(k: usize, len: usize) -> Vec<Element> {
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(level.len() * (2 * k).saturating_sub(1).max(1));
        for w in &level {
            for l in 0..(2 * k) as u32 {
                if w.last() != Some(&(l ^ 1)) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(Element::Word).collect()
}

/// Elements whose highest non-identity coordinate is `t - 1` (block 0 is the identity).
fn sum_block(comps: &[Element], t: usize) -> Vec<Element> {
    if t == 0 {
        return vec![Element::Sum(Vec::new())];
    }
    let n = comps.len();
    let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
    for lower in lex_tuples(&(0..n).collect::<Vec<_>>(), t - 1) {
        for top in 1..n {
            let mut idx = lower.clone();
            idx.push(top);
            let support = idx.iter().filter(|&&i| i != 0).count();
            out.push((support, idx));
        }
    }
    out.sort();
    out.into_iter()
        .map(|(_, idx)| Element::Sum(idx.into_iter().map(|i| comps[i].clone()).collect()))
        .collect()
}

/// Height of a rational: `0` for zero, otherwise `max(|p|, q)` in lowest terms.
pub fn rational_height(q: &BigRational) -> BigInt {
    if q.is_zero() {
        BigInt::zero()
    } else {
        q.numer().abs().max(q.denom().clone())
    }
}

/// Rationals of height exactly `h`, ordered by denominator and then by the
/// numerator's spiral position.
fn rationals_of_height(h: u64) -> Vec<BigRational> {
    if h == 0 {
        return vec![BigRational::zero()];
    }
    let h = h as i64;
    let mut out = Vec::new();
    for q in 1..=h {
        for p in spiral_values(h) {
            if p == 0 || p.abs().max(q) != h || p.abs().gcd(&q) != 1 {
                continue;
            }
            out.push(BigRational::new(p.into(), q.into()));
        }
    }
    out
}

fn rational_shell(d: usize, h: u64) -> Vec<Element> {
    let values: Vec<(u64, BigRational)> = (0..=h)
        .flat_map(|k| rationals_of_height(k).into_iter().map(move |q| (k, q)))
        .collect();
    lex_tuples(&values, d)
        .filter(|t| t.iter().map(|(k, _)| *k).max() == Some(h))
        .map(|t| Element::Rat(t.into_iter().map(|(_, q)| q).collect()))
        .collect()
}

/// Diagonal enumeration of a product, tolerating finite and infinite factors.
struct ProductIter {
    sources: Vec<Enumeration>,
    caches: Vec<Vec<Element>>,
    caps: Vec<Option<usize>>,
    total: usize,
    pending: VecDeque<Element>,
    finished: bool,
}

impl ProductIter {
    fn new(factors: &[GroupSpec]) -> Self {
        ProductIter {
            sources: factors.iter().map(Enumeration::new).collect(),
            caches: factors.iter().map(|_| Vec::new()).collect(),
            caps: factors.iter().map(|f| f.order().map(|o| o as usize)).collect(),
            total: 0,
            pending: VecDeque::new(),
            finished: false,
        }
    }

    fn fill(&mut self) {
        if let Some(max) = self
            .caps
            .iter()
            .try_fold(0usize, |acc, c| c.map(|c| acc + c - 1))
        {
            if self.total > max {
                self.finished = true;
                return;
            }
        }
        let s = self.total;
        self.total += 1;
        let n = self.caps.len();
        let mut tuples = Vec::new();
        let mut cur = Vec::with_capacity(n);
        compositions(&self.caps, 0, s, &mut cur, &mut tuples);
        for idx in tuples {
            let mut parts = Vec::with_capacity(n);
            for (j, &i) in idx.iter().enumerate() {
                while self.caches[j].len() <= i {
                    let next = self.sources[j].next().expect("factor enumeration ended early");
                    self.caches[j].push(next);
                }
                parts.push(self.caches[j][i].clone());
            }
            self.pending.push_back(Element::Tuple(parts));
        }
    }
}

fn compositions(
    caps: &[Option<usize>],
    j: usize,
    remaining: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if j == caps.len() - 1 {
        if caps[j].is_none_or(|c| remaining < c) {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    let rest: Option<usize> = caps[j + 1..]
        .iter()
        .try_fold(0usize, |acc, c| c.map(|c| acc + c - 1));
    let lo = rest.map_or(0, |r| remaining.saturating_sub(r));
    let hi = caps[j].map_or(remaining, |c| remaining.min(c - 1));
    for i in lo..=hi {
        if i > remaining {
            break;
        }
        cur.push(i);
        compositions(caps, j + 1, remaining - i, cur, out);
        cur.pop();
    }
}

impl Iterator for ProductIter {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        while self.pending.is_empty() && !self.finished {
            self.fill();
        }
        self.pending.pop_front()
    }
}

#[allow(dead_code)]
fn identity_first(spec: &GroupSpec) -> bool {
    Enumeration::new(spec).next() == Some(identity_of(spec))
}
