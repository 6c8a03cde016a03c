//! Finite instances of the standard 2-thin counterexamples: the triple set
//! `{x_p, a·x_p, b·x_p}` in `H × K`, the quadratic set `x_p + ka + k²b` in
//! `K ⊕ Q^d`, and direct sums of quadratic sets.
//!
//! The infinite constructions need a thin `X ⊆ K`; here `X` is a seeded
//! Sidon-like set (distinct pairwise quotients, no element inverse to
//! another) and every output carries an audit certifying that.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec};
use crate::subset::{Window, WindowedSubset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexMode {
    /// `(a, b)` and `(b, a)` get different points of `X`.
    Ordered,
    /// `x_{a,b} = x_{b,a}`.
    Unordered,
}

/// Injective map from pairs of `H`-elements to points of `X ⊆ K`.
#[derive(Clone, Debug, Serialize)]
pub struct PairIndexing {
    pub mode: IndexMode,
    pub pairs: Vec<(Element, Element)>,
    pub values: Vec<Element>,
    #[serde(skip)]
    lookup: HashMap<(Element, Element), usize>,
}

impl PairIndexing {
    fn key(mode: IndexMode, a: &Element, b: &Element) -> (Element, Element) {
        if mode == IndexMode::Unordered && b < a {
            (b.clone(), a.clone())
        } else {
            (a.clone(), b.clone())
        }
    }

    /// Pairs are canonicalized (sorted in unordered mode) and deduplicated.
    pub fn new(mode: IndexMode, pairs: Vec<(Element, Element)>, values: Vec<Element>) -> Result<Self> {
        let mut canon = Vec::new();
        let mut lookup = HashMap::new();
        for (a, b) in pairs {
            let k = Self::key(mode, &a, &b);
            if !lookup.contains_key(&k) {
                lookup.insert(k.clone(), canon.len());
                canon.push(k);
            }
        }
        if values.len() != canon.len() {
            return Err(Error::InvalidParameter(format!(
                "{} pairs but {} values",
                canon.len(),
                values.len()
            )));
        }
        let distinct: HashSet<&Element> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(Error::IndexingCollision("two pairs share a value".into()));
        }
        Ok(PairIndexing {
            mode,
            pairs: canon,
            values,
            lookup,
        })
    }

    /// Seeded Sidon-like values from `k` for the given pairs.
    pub fn generic(
        k: &Group,
        mode: IndexMode,
        pairs: Vec<(Element, Element)>,
        seed: u64,
    ) -> Result<Self> {
        let n = pairs
            .iter()
            .map(|(a, b)| Self::key(mode, a, b))
            .collect::<HashSet<_>>()
            .len();
        let values = sidon_values(k, n, seed)?;
        Self::new(mode, pairs, values)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index(&self, a: &Element, b: &Element) -> Option<usize> {
        self.lookup.get(&Self::key(self.mode, a, b)).copied()
    }

    pub fn value(&self, a: &Element, b: &Element) -> Option<&Element> {
        self.index(a, b).map(|i| &self.values[i])
    }
}

/// `n` non-identity points of `k` with pairwise distinct quotients `xy⁻¹`
/// and no point inverse to another, drawn greedily from a seeded stream.
pub fn sidon_values(k: &Group, n: usize, seed: u64) -> Result<Vec<Element>> {
    let pool: Vec<Element> = match k.order() {
        Some(o) if o <= 1 << 22 => k.elements()?,
        _ => k.enumerate_prefix(1 << 16)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<Element> = Vec::with_capacity(n);
    let mut taken: HashSet<Element> = HashSet::new();
    let mut quotients: HashSet<Element> = HashSet::new();
    let budget = 1000 + 200 * n;
    let mut tries = 0;
    while chosen.len() < n {
        tries += 1;
        if tries > budget {
            return Err(Error::NonGeneric {
                seed,
                reason: format!("no Sidon-like set of size {n} found in {budget} draws"),
            });
        }
        let z = &pool[rng.random_range(0..pool.len())];
        let zi = k.inv(z);
        if k.is_identity(z) || taken.contains(z) || taken.contains(&zi) || zi == *z {
            continue;
        }
        let mut fresh = Vec::with_capacity(2 * chosen.len());
        for x in &chosen {
            fresh.push(k.mul(z, &k.inv(x)));
            fresh.push(k.mul(x, &zi));
        }
        let unique: HashSet<&Element> = fresh.iter().collect();
        if unique.len() != fresh.len() || fresh.iter().any(|q| quotients.contains(q)) {
            continue;
        }
        quotients.extend(fresh);
        taken.insert(z.clone());
        chosen.push(z.clone());
    }
    Ok(chosen)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Role {
    Base,
    AShift,
    BShift,
    /// `x + ka + k²b`.
    K(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// Component label (`n = m(m+1)/2 - 1`) in a direct sum, 0 otherwise.
    pub component: usize,
    pub pair: usize,
    pub role: Role,
}

/// Everything needed to rebuild a construction bit for bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionSpec {
    Triples {
        h: GroupSpec,
        k: GroupSpec,
        mode: IndexMode,
        seed: u64,
    },
    Quadratic {
        d: usize,
        k: GroupSpec,
        m: u32,
        pairs: usize,
        seed: u64,
    },
    DirectSum {
        /// `(m, component)`; the component label is `m(m+1)/2 - 1`.
        parts: Vec<(u32, ConstructionSpec)>,
    },
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<ConstructionOutput> {
        match self {
            ConstructionSpec::Triples { h, k, mode, seed } => {
                let hg = Group::new(h.clone())?;
                let kg = Group::new(k.clone())?;
                let hs = hg.elements()?;
                let pairs = triple_pairs(&hg, &hs);
                let idx = PairIndexing::generic(&kg, *mode, pairs, *seed)?;
                let mut out = bergman_set(&hg, &kg, &idx)?;
                out.spec = Some(self.clone());
                out.seal(*seed)
            }
            ConstructionSpec::Quadratic { d, k, m, pairs, seed } => {
                let kg = Group::new(k.clone())?;
                let ps = random_rational_pairs(*d, *pairs, *seed);
                let idx = PairIndexing::generic(&kg, IndexMode::Ordered, ps, *seed)?;
                let mut out = quadratic_thin_set(*d, &kg, *m, &idx)?;
                out.spec = Some(self.clone());
                out.seal(*seed)
            }
            ConstructionSpec::DirectSum { parts } => {
                let comps = parts
                    .iter()
                    .map(|(m, s)| Ok((*m, s.build()?)))
                    .collect::<Result<Vec<_>>>()?;
                let mut out = direct_sum_set(&comps)?;
                out.spec = Some(self.clone());
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Audit {
    pub values_distinct: bool,
    /// `None` when `K` is not abelian.
    pub sidon: Option<bool>,
    pub inverse_free: bool,
    /// Elements produced by two different pairs.
    pub collisions: Vec<Element>,
    /// Elements produced twice by one pair (e.g. `a = -(k+l)b`); reported, kept.
    pub coincidences: Vec<Element>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.values_distinct && self.sidon != Some(false) && self.inverse_free && self.collisions.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionOutput {
    #[serde(serialize_with = "display")]
    pub ambient: Group,
    pub elements: Vec<Element>,
    pub provenance: BTreeMap<Element, Vec<Provenance>>,
    pub indexing: Vec<PairIndexing>,
    pub exclusions: Vec<String>,
    pub audit: Audit,
    pub spec: Option<ConstructionSpec>,
}

fn display<S: serde::Serializer>(g: &Group, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(g)
}

impl ConstructionOutput {
    fn from_parts(
        ambient: Group,
        produced: Vec<(Element, Provenance)>,
        indexing: Vec<PairIndexing>,
        exclusions: Vec<String>,
        k: Option<&Group>,
    ) -> Self {
        let mut provenance: BTreeMap<Element, Vec<Provenance>> = BTreeMap::new();
        let mut elements = Vec::new();
        for (x, p) in produced {
            let entry = provenance.entry(x.clone()).or_default();
            if entry.is_empty() {
                elements.push(x);
            }
            entry.push(p);
        }
        let mut audit = Audit {
            values_distinct: true,
            inverse_free: true,
            ..Audit::default()
        };
        for (x, ps) in &provenance {
            let sources: BTreeSet<(usize, usize)> = ps.iter().map(|p| (p.component, p.pair)).collect();
            if sources.len() > 1 {
                audit.collisions.push(x.clone());
            } else if ps.len() > 1 {
                audit.coincidences.push(x.clone());
            }
        }
        if let Some(k) = k {
            for idx in &indexing {
                let v = &idx.values;
                audit.values_distinct &= v.iter().collect::<HashSet<_>>().len() == v.len();
                let set: HashSet<&Element> = v.iter().collect();
                audit.inverse_free &= v.iter().all(|x| !k.is_identity(x) && !set.contains(&k.inv(x)));
                if k.is_abelian() {
                    let mut q = HashSet::new();
                    let ok = v.iter().enumerate().all(|(i, x)| {
                        v.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .all(|(_, y)| q.insert(k.mul(x, &k.inv(y))))
                    });
                    audit.sidon = Some(audit.sidon.unwrap_or(true) && ok);
                }
            }
        }
        ConstructionOutput {
            ambient,
            elements,
            provenance,
            indexing,
            exclusions,
            audit,
            spec: None,
        }
    }

    /// Rejects outputs whose audit fails.
    fn seal(self, seed: u64) -> Result<Self> {
        if self.audit.passed() {
            Ok(self)
        } else {
            Err(Error::NonGeneric {
                seed,
                reason: format!(
                    "audit failed: distinct={} sidon={:?} inverse_free={} collisions={}",
                    self.audit.values_distinct,
                    self.audit.sidon,
                    self.audit.inverse_free,
                    self.audit.collisions.len()
                ),
            })
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.provenance.contains_key(x)
    }

    /// `A` as a subset observed through `window`, which must contain it.
    pub fn subset(&self, window: Window) -> Result<WindowedSubset> {
        Ok(WindowedSubset::explicit(&self.ambient, self.elements.iter().cloned(), window)?
            .with_label("construction"))
    }

    /// `A` observed through itself.
    pub fn self_window(&self) -> Result<WindowedSubset> {
        self.subset(Window::from_elements(self.elements.clone()))
    }
}

/// Pairs of distinct non-identity elements, both orders.
pub fn triple_pairs(h: &Group, elements: &[Element]) -> Vec<(Element, Element)> {
    let nonid: Vec<&Element> = elements.iter().filter(|x| !h.is_identity(x)).collect();
    let mut out = Vec::new();
    for a in &nonid {
        for b in &nonid {
            if a != b {
                out.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    out
}

pub fn pair_in_product(h: &Element, k: &Element) -> Element {
    Element::Tuple(vec![h.clone(), k.clone()])
}

/// `A = {(e, x_p), (a, x_p), (b, x_p)}` in `H × K` over the indexed pairs
/// `p = (a, b)`. Pairs with `a = b`, `a = e` or `b = e` are dropped.
pub fn bergman_set(h: &Group, k: &Group, indexing: &PairIndexing) -> Result<ConstructionOutput> {
    let ambient = Group::product(vec![h.spec().clone(), k.spec().clone()])?;
    let mut produced = Vec::new();
    let mut dropped = 0usize;
    for (i, ((a, b), x)) in indexing.pairs.iter().zip(&indexing.values).enumerate() {
        if a == b || h.is_identity(a) || h.is_identity(b) {
            dropped += 1;
            continue;
        }
        for (role, s) in [(Role::Base, h.identity()), (Role::AShift, a.clone()), (Role::BShift, b.clone())] {
            produced.push((
                pair_in_product(&s, x),
                Provenance {
                    component: 0,
                    pair: i,
                    role,
                },
            ));
        }
    }
    let exclusions = vec![format!("pairs with a = b, a = e or b = e ({dropped} dropped)")];
    Ok(ConstructionOutput::from_parts(
        ambient,
        produced,
        vec![indexing.clone()],
        exclusions,
        Some(k),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslateCount {
    pub count: usize,
    /// Every `g` with `Fg ⊆ A`.
    pub witnesses: Vec<Element>,
}

/// Exact number of right translates `Fg` inside `A`. Requires `e ∈ F`, so
/// `Fg ⊆ A` forces `g ∈ A` and scanning `A` is exhaustive.
pub fn count_translates_in(f: &[Element], a: &ConstructionOutput) -> Result<TranslateCount> {
    let g = &a.ambient;
    for x in f {
        if !g.contains(x) {
            return Err(Error::ForeignElement {
                element: x.to_string(),
                group: g.to_string(),
            });
        }
    }
    if !f.iter().any(|x| g.is_identity(x)) {
        return Err(Error::Precondition("F must contain the identity".into()));
    }
    let witnesses: Vec<Element> = a
        .elements
        .iter()
        .filter(|t| f.iter().all(|x| a.contains(&g.mul(x, t))))
        .cloned()
        .collect();
    Ok(TranslateCount {
        count: witnesses.len(),
        witnesses,
    })
}

fn rat_vec(x: &Element) -> Result<&[BigRational]> {
    match x {
        Element::Rat(v) => Ok(v),
        other => Err(Error::InvalidParameter(format!("{other} is not a rational vector"))),
    }
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `ka + k²b` coordinatewise.
pub fn quadratic_point(a: &[BigRational], b: &[BigRational], k: i64) -> Element {
    let (k1, k2) = (rat_int(k), rat_int(k * k));
    Element::Rat(a.iter().zip(b).map(|(p, q)| &k1 * p + &k2 * q).collect())
}

/// Seeded random pairs `(a, b)` of small rational vectors, never `(0, 0)`.
pub fn random_rational_pairs(d: usize, n: usize, seed: u64) -> Vec<(Element, Element)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let coord = |rng: &mut ChaCha8Rng| {
        BigRational::new(rng.random_range(-4i64..=4).into(), rng.random_range(1i64..=3).into())
    };
    while out.len() < n {
        let a = Element::Rat((0..d).map(|_| coord(&mut rng)).collect());
        let b = Element::Rat((0..d).map(|_| coord(&mut rng)).collect());
        if a.is_zero_rat() && b.is_zero_rat() {
            continue;
        }
        if seen.insert((a.clone(), b.clone())) {
            out.push((a, b));
        }
    }
    out
}

/// `A = {(x_p, ka + k²b) : k = 0..=m}` in `K ⊕ Q^d` over indexed pairs
/// `p = (a, b) ≠ (0, 0)`. Equal points from one pair (`a = -(k+l)b`) are
/// kept once and listed as coincidences.
pub fn quadratic_thin_set(d: usize, k: &Group, m: u32, indexing: &PairIndexing) -> Result<ConstructionOutput> {
    if m < 2 {
        return Err(Error::Precondition("m must be at least 2".into()));
    }
    let ambient = Group::product(vec![k.spec().clone(), GroupSpec::Rational(d)])?;
    let mut produced = Vec::new();
    let mut dropped = 0usize;
    for (i, ((a, b), x)) in indexing.pairs.iter().zip(&indexing.values).enumerate() {
        let (av, bv) = (rat_vec(a)?, rat_vec(b)?);
        if av.len() != d || bv.len() != d {
            return Err(Error::InvalidParameter(format!("pair {i} is not in Q^{d}")));
        }
        if a.is_zero_rat() && b.is_zero_rat() {
            dropped += 1;
            continue;
        }
        for kk in 0..=m {
            produced.push((
                pair_in_product(x, &quadratic_point(av, bv, kk as i64)),
                Provenance {
                    component: 0,
                    pair: i,
                    role: Role::K(kk),
                },
            ));
        }
    }
    Ok(ConstructionOutput::from_parts(
        ambient,
        produced,
        vec![indexing.clone()],
        vec![format!("pairs with a = b = 0 ({dropped} dropped)")],
        Some(k),
    ))
}

/// `A(x, y) = {a ∈ A : a + x ∈ A, a + y ∈ A}` (written multiplicatively).
pub fn pair_collision_set(a: &ConstructionOutput, x: &Element, y: &Element) -> Result<Vec<Element>> {
    let g = &a.ambient;
    for z in [x, y] {
        if !g.contains(z) {
            return Err(Error::ForeignElement {
                element: z.to_string(),
                group: g.to_string(),
            });
        }
        if g.is_identity(z) {
            return Err(Error::DegenerateArgument(format!("{z} is the identity")));
        }
    }
    if x == y {
        return Err(Error::DegenerateArgument("x = y".into()));
    }
    Ok(a.elements
        .iter()
        .filter(|t| a.contains(&g.mul(t, x)) && a.contains(&g.mul(t, y)))
        .cloned()
        .collect())
}

/// The unique `(a, b)` with `(j-i)a + (j²-i²)b = x2` and
/// `(k-i)a + (k²-i²)b = y2`, by Cramer's rule; the determinant is
/// `(j-i)(k-i)(k-j)`.
pub fn vandermonde_solve(i: i64, j: i64, k: i64, x2: &Element, y2: &Element) -> Result<(Element, Element)> {
    if i == j || i == k || j == k {
        return Err(Error::RepeatedIndex { i, j, k });
    }
    let (xv, yv) = (rat_vec(x2)?, rat_vec(y2)?);
    if xv.len() != yv.len() {
        return Err(Error::InvalidParameter("right-hand sides differ in dimension".into()));
    }
    let (p, q) = (rat_int(j - i), rat_int(j * j - i * i));
    let (r, s) = (rat_int(k - i), rat_int(k * k - i * i));
    let det = rat_int((j - i) * (k - i) * (k - j));
    debug_assert_eq!(det, &p * &s - &q * &r);
    let a = xv.iter().zip(yv).map(|(u, v)| (u * &s - v * &q) / &det).collect();
    let b = xv.iter().zip(yv).map(|(u, v)| (&p * v - &r * u) / &det).collect();
    Ok((Element::Rat(a), Element::Rat(b)))
}

/// Checks `(x + ka + k²b) - (x + la + l²b) = (k-l)a + (k²-l²)b` for pair
/// `pair` of a quadratic construction, through the ambient group law.
pub fn difference_identity_check(a: &ConstructionOutput, pair: usize, k: u32, l: u32) -> Result<bool> {
    if k == l {
        return Err(Error::DegenerateArgument("k = l".into()));
    }
    let idx = a
        .indexing
        .first()
        .ok_or_else(|| Error::InvalidParameter("construction has no indexing".into()))?;
    let ((pa, pb), x) = (&idx.pairs[pair], &idx.values[pair]);
    let (av, bv) = (rat_vec(pa)?, rat_vec(pb)?);
    let g = &a.ambient;
    let at = |t: u32| pair_in_product(x, &quadratic_point(av, bv, t as i64));
    let (ek, el) = (at(k), at(l));
    if !a.contains(&ek) || !a.contains(&el) {
        return Err(Error::InvalidParameter(format!("pair {pair} is not part of A")));
    }
    let diff = g.mul(&ek, &g.inv(&el));
    let (k, l) = (k as i64, l as i64);
    let (c1, c2) = (rat_int(k - l), rat_int(k * k - l * l));
    let expect = Element::Rat(av.iter().zip(bv).map(|(p, q)| &c1 * p + &c2 * q).collect());
    let zero_k = match g.factors() {
        Some(fs) => fs[0].identity(),
        None => unreachable!(),
    };
    Ok(diff == pair_in_product(&zero_k, &expect))
}

/// Explains `t ∈ A(x, y)` for `x, y` with trivial `K`-part: returns
/// `(i, j, k)` with `t = x_p + ia + i²b` and `vandermonde_solve(i, j, k)`
/// recovering `p = (a, b)`.
pub fn explain_collision(
    a: &ConstructionOutput,
    t: &Element,
    x: &Element,
    y: &Element,
) -> Option<(u32, u32, u32)> {
    let g = &a.ambient;
    let idx = a.indexing.first()?;
    let part = |e: &Element| match e {
        Element::Tuple(v) => Some(v[1].clone()),
        _ => None,
    };
    let (x2, y2) = (part(x)?, part(y)?);
    let roles = |e: &Element| -> Vec<(usize, u32)> {
        a.provenance
            .get(e)
            .into_iter()
            .flatten()
            .filter_map(|p| match p.role {
                Role::K(k) => Some((p.pair, k)),
                _ => None,
            })
            .collect()
    };
    for (pi, i) in roles(t) {
        for (pj, j) in roles(&g.mul(t, x)) {
            for (pk, k) in roles(&g.mul(t, y)) {
                if pi != pj || pi != pk {
                    continue;
                }
                if let Ok((sa, sb)) = vandermonde_solve(i as i64, j as i64, k as i64, &x2, &y2) {
                    if idx.pairs[pi] == (sa, sb) {
                        return Some((i, j, k));
                    }
                }
            }
        }
    }
    None
}

/// Label `m(m+1)/2 - 1` of the summand built for parameter `m`.
pub fn summand_label(m: u32) -> usize {
    (m * (m + 1) / 2 - 1) as usize
}

/// `A = ⋃ A_n` embedded in `⊕ G_n`, with `n = m(m+1)/2 - 1`.
pub fn direct_sum_set(components: &[(u32, ConstructionOutput)]) -> Result<ConstructionOutput> {
    if components.is_empty() {
        return Err(Error::InvalidParameter("no components".into()));
    }
    let labels: Vec<usize> = components.iter().map(|(m, _)| summand_label(*m)).collect();
    if labels.iter().collect::<HashSet<_>>().len() != labels.len() {
        return Err(Error::InvalidParameter("summand labels repeat".into()));
    }
    if let [(_, only)] = components {
        let mut out = only.clone();
        for ps in out.provenance.values_mut() {
            for p in ps {
                p.component = labels[0];
            }
        }
        out.spec = None;
        return Ok(out);
    }
    let specs: Vec<GroupSpec> = components.iter().map(|(_, c)| c.ambient.spec().clone()).collect();
    let ambient = Group::product(specs)?;
    let ids: Vec<Element> = components.iter().map(|(_, c)| c.ambient.identity()).collect();
    let mut produced = Vec::new();
    let mut indexing = Vec::new();
    let mut exclusions = Vec::new();
    for (slot, ((_, c), &label)) in components.iter().zip(&labels).enumerate() {
        for x in &c.elements {
            let mut coords = ids.clone();
            coords[slot] = x.clone();
            for p in &c.provenance[x] {
                produced.push((
                    Element::Tuple(coords.clone()),
                    Provenance {
                        component: label,
                        ..p.clone()
                    },
                ));
            }
        }
        indexing.extend(c.indexing.iter().cloned());
        exclusions.extend(c.exclusions.iter().map(|e| format!("summand {label}: {e}")));
    }
    let out = ConstructionOutput::from_parts(ambient, produced, indexing, exclusions, None);
    if !out.audit.collisions.is_empty() {
        return Err(Error::IndexingCollision(format!(
            "{} embedded points coincide",
            out.audit.collisions.len()
        )));
    }
    let mut out = out;
    out.audit.values_distinct = components.iter().all(|(_, c)| c.audit.values_distinct);
    out.audit.inverse_free = components.iter().all(|(_, c)| c.audit.inverse_free);
    out.audit.sidon = components
        .iter()
        .map(|(_, c)| c.audit.sidon)
        .try_fold(true, |acc, s| s.map(|v| acc && v));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapReport {
    /// Distinct `x = a·a'⁻¹` with at least two nontrivial summand coordinates.
    pub checked: usize,
    pub max_overlap: usize,
    pub violations: Vec<Element>,
}

/// `|A ∩ (A + x)| <= 1` for every `x` outside all summands. Only quotients
/// `a·a'⁻¹` of points of `A` can give a nonempty overlap, so scanning them is
/// exhaustive.
pub fn outside_summand_overlaps(a: &ConstructionOutput) -> OverlapReport {
    let g = &a.ambient;
    let ids: Vec<Element> = match g.factors() {
        Some(fs) => fs.iter().map(Group::identity).collect(),
        None => vec![g.identity()],
    };
    let support = |x: &Element| match x {
        Element::Tuple(v) => v.iter().zip(&ids).filter(|(c, e)| c != e).count(),
        _ => 1,
    };
    let mut seen = HashSet::new();
    let mut report = OverlapReport {
        checked: 0,
        max_overlap: 0,
        violations: Vec::new(),
    };
    for s in &a.elements {
        for t in &a.elements {
            let x = g.mul(s, &g.inv(t));
            if support(&x) < 2 || !seen.insert(x.clone()) {
                continue;
            }
            report.checked += 1;
            let xi = g.inv(&x);
            let overlap = a.elements.iter().filter(|u| a.contains(&g.mul(u, &xi))).count();
            report.max_overlap = report.max_overlap.max(overlap);
            if overlap > 1 {
                report.violations.push(x);
            }
        }
    }
    report
}

/// Rational vector with integer coordinates, for tests and examples.
pub fn qvec(v: &[i64]) -> Element {
    Element::Rat(v.iter().map(|&n| rat_int(n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Group {
        Group::cyclic(n).unwrap()
    }

    #[test]
    fn sidon_values_are_audited() {
        let k = z(10_007);
        let v = sidon_values(&k, 30, 7).unwrap();
        assert_eq!(v.len(), 30);
        let mut q = HashSet::new();
        for x in &v {
            for y in &v {
                if x != y {
                    assert!(q.insert(k.mul(x, &k.inv(y))));
                }
            }
        }
        assert_eq!(v, sidon_values(&k, 30, 7).unwrap());
        assert!(matches!(sidon_values(&z(7), 5, 1), Err(Error::NonGeneric { .. })));
    }

    #[test]
    fn triples_over_z5() {
        let spec = ConstructionSpec::Triples {
            h: GroupSpec::Cyclic(5),
            k: GroupSpec::Cyclic(10_007),
            mode: IndexMode::Unordered,
            seed: 3,
        };
        let out = spec.build().unwrap();
        assert_eq!(out.indexing[0].len(), 6);
        assert_eq!(out.len(), 3 * 6);
        assert!(out.audit.passed());
        assert!(out.provenance.values().all(|p| p.len() == 1));
    }

    #[test]
    fn single_pair_gives_three_points() {
        let (h, k) = (z(5), z(101));
        let idx = PairIndexing::new(
            IndexMode::Unordered,
            vec![(Element::Mod(1), Element::Mod(2))],
            vec![Element::Mod(17)],
        )
        .unwrap();
        assert_eq!(bergman_set(&h, &k, &idx).unwrap().len(), 3);
        let degenerate = PairIndexing::new(
            IndexMode::Ordered,
            vec![(Element::Mod(1), Element::Mod(1)), (Element::Mod(0), Element::Mod(2))],
            vec![Element::Mod(17), Element::Mod(20)],
        )
        .unwrap();
        assert!(bergman_set(&h, &k, &degenerate).unwrap().is_empty());
        assert!(matches!(
            PairIndexing::new(
                IndexMode::Ordered,
                vec![(Element::Mod(1), Element::Mod(2)), (Element::Mod(2), Element::Mod(1))],
                vec![Element::Mod(17), Element::Mod(17)],
            ),
            Err(Error::IndexingCollision(_))
        ));
    }

    fn brute_translates(f: &[Element], a: &ConstructionOutput) -> usize {
        let g = &a.ambient;
        g.elements()
            .unwrap()
            .iter()
            .filter(|t| f.iter().all(|x| a.contains(&g.mul(x, t))))
            .count()
    }

    #[test]
    fn translate_counts_six_and_three() {
        for (mode, expect) in [(IndexMode::Ordered, 6), (IndexMode::Unordered, 3)] {
            let spec = ConstructionSpec::Triples {
                h: GroupSpec::Cyclic(5),
                k: GroupSpec::Cyclic(1009),
                mode,
                seed: 11,
            };
            let out = spec.build().unwrap();
            let k0 = Element::Mod(0);
            let f: Vec<Element> = [0, 1, 3].iter().map(|&h| pair_in_product(&Element::Mod(h), &k0)).collect();
            let got = count_translates_in(&f, &out).unwrap();
            assert_eq!(got.count, expect);
            assert_eq!(brute_translates(&f, &out), expect);
        }
    }

    #[test]
    fn translates_need_identity() {
        let spec = ConstructionSpec::Triples {
            h: GroupSpec::Cyclic(5),
            k: GroupSpec::Cyclic(1009),
            mode: IndexMode::Ordered,
            seed: 1,
        };
        let out = spec.build().unwrap();
        let f = vec![pair_in_product(&Element::Mod(1), &Element::Mod(0))];
        assert!(count_translates_in(&f, &out).is_err());
        // a non-H translate pattern hits at most a few thin-like coincidences
        let f = vec![
            pair_in_product(&Element::Mod(0), &Element::Mod(0)),
            pair_in_product(&Element::Mod(1), &Element::Mod(5)),
            pair_in_product(&Element::Mod(2), &Element::Mod(0)),
        ];
        let got = count_translates_in(&f, &out).unwrap();
        assert_eq!(got.count, brute_translates(&f, &out));
    }

    #[test]
    fn vandermonde_examples() {
        let (a, b) = vandermonde_solve(0, 1, 2, &qvec(&[3, 0, 0, 0]), &qvec(&[4, 0, 0, 0])).unwrap();
        assert_eq!(a, qvec(&[4, 0, 0, 0]));
        assert_eq!(b, qvec(&[-1, 0, 0, 0]));
        let (a, b) = vandermonde_solve(0, 1, 2, &qvec(&[0, 0]), &qvec(&[0, 0])).unwrap();
        assert!(a.is_zero_rat() && b.is_zero_rat());
        assert!(matches!(
            vandermonde_solve(0, 1, 1, &qvec(&[1]), &qvec(&[1])),
            Err(Error::RepeatedIndex { i: 0, j: 1, k: 1 })
        ));
    }

    #[test]
    fn quadratic_single_pair() {
        let k = z(10_007);
        let idx = PairIndexing::new(
            IndexMode::Ordered,
            vec![(qvec(&[1, 0]), qvec(&[0, 1]))],
            vec![Element::Mod(5)],
        )
        .unwrap();
        let out = quadratic_thin_set(2, &k, 2, &idx).unwrap();
        let pts: BTreeSet<Element> = out.elements.iter().cloned().collect();
        let want: BTreeSet<Element> = [qvec(&[0, 0]), qvec(&[1, 1]), qvec(&[2, 4])]
            .iter()
            .map(|q| pair_in_product(&Element::Mod(5), q))
            .collect();
        assert_eq!(pts, want);
        assert!(difference_identity_check(&out, 0, 2, 0).unwrap());
        assert!(difference_identity_check(&out, 0, 1, 1).is_err());

        let zero = PairIndexing::new(
            IndexMode::Ordered,
            vec![(qvec(&[0, 0]), qvec(&[0, 0]))],
            vec![Element::Mod(5)],
        )
        .unwrap();
        assert!(quadratic_thin_set(2, &k, 2, &zero).unwrap().is_empty());
    }

    #[test]
    fn quadratic_coincidence_is_reported() {
        // a = -(k + l) b with k = 0, l = 2
        let k = z(10_007);
        let idx = PairIndexing::new(
            IndexMode::Ordered,
            vec![(qvec(&[-2]), qvec(&[1]))],
            vec![Element::Mod(9)],
        )
        .unwrap();
        let out = quadratic_thin_set(1, &k, 2, &idx).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.audit.coincidences.len(), 1);
        assert!(out.audit.passed());
    }

    #[test]
    fn quadratic_instance_and_collisions() {
        let spec = ConstructionSpec::Quadratic {
            d: 4,
            k: GroupSpec::Cyclic(10_007),
            m: 2,
            pairs: 20,
            seed: 5,
        };
        let out = spec.build().unwrap();
        let made: usize = out.provenance.values().map(Vec::len).sum();
        assert_eq!(made, 60);
        assert_eq!(out.len() + out.audit.coincidences.len(), 60);

        let idx = &out.indexing[0];
        let ((pa, pb), xp) = (&idx.pairs[3], &idx.values[3]);
        let (av, bv) = (rat_vec(pa).unwrap(), rat_vec(pb).unwrap());
        let zero = Element::Mod(0);
        let x = pair_in_product(&zero, &quadratic_point(av, bv, 1));
        let y = pair_in_product(&zero, &quadratic_point(av, bv, 2));
        let hits = pair_collision_set(&out, &x, &y).unwrap();
        assert!(hits.contains(&pair_in_product(xp, &qvec(&[0, 0, 0, 0]))));
        for t in &hits {
            assert!(explain_collision(&out, t, &x, &y).is_some());
        }
        assert!(pair_collision_set(&out, &x, &x).is_err());
        assert!(pair_collision_set(&out, &out.ambient.identity(), &y).is_err());
    }

    #[test]
    fn direct_sum_overlaps() {
        let part = |m: u32, seed: u64| ConstructionSpec::Quadratic {
            d: 2,
            k: GroupSpec::Cyclic(1009),
            m,
            pairs: 4,
            seed,
        };
        let spec = ConstructionSpec::DirectSum {
            parts: vec![(2, part(2, 1)), (3, part(3, 2))],
        };
        let out = spec.build().unwrap();
        let (a2, a5) = (part(2, 1).build().unwrap(), part(3, 2).build().unwrap());
        assert_eq!(out.len(), a2.len() + a5.len());
        let labels: BTreeSet<usize> = out.provenance.values().flatten().map(|p| p.component).collect();
        assert_eq!(labels, BTreeSet::from([2, 5]));
        let rep = outside_summand_overlaps(&out);
        assert!(rep.checked > 0);
        assert_eq!(rep.max_overlap, 1);
        assert!(rep.violations.is_empty());

        let single = direct_sum_set(&[(2, a2.clone())]).unwrap();
        assert_eq!(single.len(), a2.len());
    }
}
