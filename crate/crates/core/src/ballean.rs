//! Ball structures and the group ballean `B(x, F) = Fx ∪ {x}` over finite radii.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, Group};

/// A finite radius `F ⊆ G`: sorted, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Radius(Vec<Element>);

impl Radius {
    pub fn new(group: &Group, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let set: BTreeSet<Element> = elements.into_iter().collect();
        if let Some(bad) = set.iter().find(|x| !group.contains(x)) {
            return Err(Error::ForeignElement {
                element: bad.to_string(),
                group: group.to_string(),
            });
        }
        Ok(Radius(set.into_iter().collect()))
    }

    pub(crate) fn from_set(set: BTreeSet<Element>) -> Self {
        Radius(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        Radius(Vec::new())
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &Radius) -> bool {
        self.0.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &Radius) -> Radius {
        Radius::from_set(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

fn check(group: &Group, x: &Element) -> Result<()> {
    if group.contains(x) {
        Ok(())
    } else {
        Err(Error::ForeignElement {
            element: x.to_string(),
            group: group.to_string(),
        })
    }
}

/// `B(x, F) = Fx ∪ {x}`.
pub fn ball(group: &Group, x: &Element, radius: &Radius) -> Result<BTreeSet<Element>> {
    check(group, x)?;
    Ok(ball_unchecked(group, x, radius))
}

pub(crate) fn ball_unchecked(group: &Group, x: &Element, radius: &Radius) -> BTreeSet<Element> {
    let mut out: BTreeSet<Element> = radius.0.iter().map(|f| group.mul(f, x)).collect();
    out.insert(x.clone());
    out
}

/// `B*(x, F) = {y : x ∈ B(y, F)} = F⁻¹x ∪ {x}`.
pub fn star_ball(group: &Group, x: &Element, radius: &Radius) -> Result<BTreeSet<Element>> {
    check(group, x)?;
    let mut out: BTreeSet<Element> = radius
        .0
        .iter()
        .map(|f| group.mul(&group.inv(f), x))
        .collect();
    out.insert(x.clone());
    Ok(out)
}

/// `B(Y, F)`, the union of balls around the points of `Y`.
pub fn ball_of_set<'a>(
    group: &Group,
    points: impl IntoIterator<Item = &'a Element>,
    radius: &Radius,
) -> BTreeSet<Element> {
    let mut out = BTreeSet::new();
    for y in points {
        out.extend(ball_unchecked(group, y, radius));
    }
    out
}

/// `F ∪ F⁻¹`.
pub fn symmetrize(group: &Group, radius: &Radius) -> Radius {
    Radius::from_set(
        radius
            .0
            .iter()
            .flat_map(|f| [f.clone(), group.inv(f)])
            .collect(),
    )
}

/// `F⁻¹`.
pub fn inverse_radius(group: &Group, radius: &Radius) -> Radius {
    Radius::from_set(radius.0.iter().map(|f| group.inv(f)).collect())
}

/// `γ = F2·F1 ∪ F1 ∪ F2`, so that `B(B(x, F1), F2) ⊆ B(x, γ)` for every `x`.
pub fn compose_radii(group: &Group, first: &Radius, second: &Radius) -> Radius {
    let mut out: BTreeSet<Element> = first.0.iter().chain(&second.0).cloned().collect();
    for f2 in &second.0 {
        for f1 in &first.0 {
            out.insert(group.mul(f2, f1));
        }
    }
    Radius::from_set(out)
}

/// `F_n`, the first `n` enumerated elements. These form the cofinal chain
/// that makes the group ballean ordinal.
pub fn ordinal_radius(group: &Group, n: usize) -> Result<Radius> {
    Ok(Radius::from_set(group.enumerate_prefix(n)?.into_iter().collect()))
}

/// Smallest `n` with `F ⊆ F_n`, scanning at most `limit` elements.
pub fn ordinal_cover(group: &Group, radius: &Radius, limit: usize) -> Option<usize> {
    let mut missing: BTreeSet<&Element> = radius.0.iter().collect();
    if missing.is_empty() {
        return Some(0);
    }
    for (i, g) in group.enumerate().take(limit).enumerate() {
        missing.remove(&g);
        if missing.is_empty() {
            return Some(i + 1);
        }
    }
    None
}

/// Default radius schedule `F_1, F_2, F_4, ..., F_{2^k}`.
pub fn default_schedule(group: &Group, k: u32) -> Result<Vec<Radius>> {
    let cap = group.order().map_or(usize::MAX, |o| o as usize);
    let mut out = Vec::new();
    for i in 0..=k {
        let n = (1usize << i).min(cap);
        let r = ordinal_radius(group, n)?;
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

/// A ball structure `(X, P, B)` with the witnesses a ballean must provide.
pub trait BallStructure {
    type Radius: Clone + fmt::Display;

    fn ball(&self, x: &Element, r: &Self::Radius) -> BTreeSet<Element>;
    fn star_ball(&self, x: &Element, r: &Self::Radius) -> BTreeSet<Element>;
    /// `α'` with `B(x, α) ⊆ B*(x, α')` and `B*(x, α) ⊆ B(x, α')` for all `x`.
    fn interchange_witness(&self, r: &Self::Radius) -> Self::Radius;
    /// `γ` with `B(B(x, α), β) ⊆ B(x, γ)` for all `x`.
    fn compose_witness(&self, first: &Self::Radius, second: &Self::Radius) -> Self::Radius;
}

/// The group ballean `B(G, ℵ₀)`.
pub struct GroupBallean<'g> {
    pub group: &'g Group,
}

impl BallStructure for GroupBallean<'_> {
    type Radius = Radius;

    fn ball(&self, x: &Element, r: &Radius) -> BTreeSet<Element> {
        ball_unchecked(self.group, x, r)
    }

    fn star_ball(&self, x: &Element, r: &Radius) -> BTreeSet<Element> {
        star_ball(self.group, x, r).expect("sample point outside the group")
    }

    fn interchange_witness(&self, r: &Radius) -> Radius {
        symmetrize(self.group, r)
    }

    fn compose_witness(&self, first: &Radius, second: &Radius) -> Radius {
        compose_radii(self.group, first, second)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    Membership,
    StarDuality,
    Interchange,
    Composition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub point: String,
    pub radius: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub points: usize,
    pub radii: usize,
    pub checks: u64,
    /// Connected components of the sample under "y ∈ B(x, α) for some α".
    pub sample_components: usize,
    pub violation: Option<AxiomViolation>,
    /// Every statement is verified on the sample only.
    pub window_verified: bool,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Checks the ballean axioms on a finite sample, stopping at the first violation.
pub fn ballean_axioms_check<B: BallStructure>(
    structure: &B,
    sample: &[Element],
    radii: &[B::Radius],
) -> AxiomReport {
    let mut checks = 0u64;
    let index: BTreeMap<&Element, usize> = sample.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..sample.len()).collect();
    let report = |violation: Option<AxiomViolation>, checks: u64, parent: &mut Vec<usize>| {
        let components = (0..sample.len())
            .filter(|&i| find(parent, i) == i)
            .count();
        AxiomReport {
            points: sample.len(),
            radii: radii.len(),
            checks,
            sample_components: components,
            violation,
            window_verified: true,
        }
    };
    let fail = |axiom, x: &Element, r: &dyn fmt::Display, detail: String| {
        Some(AxiomViolation {
            axiom,
            point: x.to_string(),
            radius: r.to_string(),
            detail,
        })
    };

    for r in radii {
        let witness = structure.interchange_witness(r);
        let balls: Vec<BTreeSet<Element>> = sample.iter().map(|x| structure.ball(x, r)).collect();
        for (i, x) in sample.iter().enumerate() {
            checks += 1;
            let b = &balls[i];
            if !b.contains(x) {
                return report(fail(Axiom::Membership, x, r, "x ∉ B(x, α)".into()), checks, &mut parent);
            }
            for y in b {
                if let Some(&j) = index.get(y) {
                    let (a, c) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = c;
                }
            }
            let star = structure.star_ball(x, r);
            // y ∈ B(x, α) ⇔ x ∈ B*(y, α), tested against the sample
            for (j, y) in sample.iter().enumerate() {
                checks += 1;
                let forward = balls[j].contains(x);
                if forward != star.contains(y) {
                    return report(
                        fail(
                            Axiom::StarDuality,
                            x,
                            r,
                            format!("x ∈ B(y, α) disagrees with y ∈ B*(x, α) at y = {y}"),
                        ),
                        checks,
                        &mut parent,
                    );
                }
            }
            checks += 1;
            let wb = structure.ball(x, &witness);
            let ws = structure.star_ball(x, &witness);
            if !b.is_subset(&ws) || !star.is_subset(&wb) {
                return report(
                    fail(
                        Axiom::Interchange,
                        x,
                        r,
                        format!("witness {witness} does not bound ball and star ball"),
                    ),
                    checks,
                    &mut parent,
                );
            }
        }
    }

    for r1 in radii {
        for r2 in radii {
            let gamma = structure.compose_witness(r1, r2);
            for x in sample {
                checks += 1;
                let target = structure.ball(x, &gamma);
                for y in structure.ball(x, r1) {
                    if let Some(z) = structure.ball(&y, r2).into_iter().find(|z| !target.contains(z)) {
                        return report(
                            fail(
                                Axiom::Composition,
                                x,
                                &format!("{r1} then {r2}"),
                                format!("{z} ∈ B(B(x, α), β) but not in B(x, {gamma})"),
                            ),
                            checks,
                            &mut parent,
                        );
                    }
                }
            }
        }
    }
    report(None, checks, &mut parent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> BTreeSet<Element> {
        v.iter().map(|&i| Element::int(i)).collect()
    }

    fn z() -> Group {
        Group::lattice(1).unwrap()
    }

    fn r(g: &Group, v: &[i64]) -> Radius {
        Radius::new(g, v.iter().map(|&i| Element::int(i))).unwrap()
    }

    #[test]
    fn ball_examples() {
        let g = z();
        assert_eq!(ball(&g, &Element::int(5), &r(&g, &[1, 2])).unwrap(), ints(&[5, 6, 7]));
        assert_eq!(ball(&g, &Element::int(5), &Radius::empty()).unwrap(), ints(&[5]));
        assert_eq!(star_ball(&g, &Element::int(5), &r(&g, &[1, 2])).unwrap(), ints(&[3, 4, 5]));
    }

    #[test]
    fn ball_in_s3_matches_products() {
        let g = Group::symmetric(3).unwrap();
        let f = Element::perm1(&[2, 1, 3]);
        let x = Element::perm1(&[1, 3, 2]);
        let b = ball(&g, &x, &Radius::new(&g, [f.clone()]).unwrap()).unwrap();
        // (2,1,3)∘(1,3,2) sends 1→2, 2→3, 3→1
        let expect: BTreeSet<_> = [x, Element::perm1(&[2, 3, 1])].into_iter().collect();
        assert_eq!(b, expect);
    }

    #[test]
    fn free_star_ball() {
        let g = Group::free(2).unwrap();
        let f = Radius::new(&g, [Element::word("a")]).unwrap();
        let s = star_ball(&g, &g.identity(), &f).unwrap();
        let expect: BTreeSet<_> = [Element::word(""), Element::word("A")].into_iter().collect();
        assert_eq!(s, expect);
        // membership check via ball: ε ∈ B(a⁻¹, {a})
        assert!(ball(&g, &Element::word("A"), &f).unwrap().contains(&g.identity()));
    }

    #[test]
    fn symmetric_radius_has_equal_star() {
        let g = z();
        let s = symmetrize(&g, &r(&g, &[1, 2]));
        assert_eq!(s, r(&g, &[1, 2, -1, -2]));
        for x in -5..5 {
            let x = Element::int(x);
            assert_eq!(ball(&g, &x, &s).unwrap(), star_ball(&g, &x, &s).unwrap());
        }
        assert_eq!(symmetrize(&g, &r(&g, &[0])), r(&g, &[0]));
        let f = Group::free(2).unwrap();
        let fr = Radius::new(&f, [Element::word("a"), Element::word("ab")]).unwrap();
        let expect = Radius::new(
            &f,
            ["a", "A", "ab", "BA"].iter().map(|w| Element::word(w)),
        )
        .unwrap();
        assert_eq!(symmetrize(&f, &fr), expect);
    }

    #[test]
    fn composition_examples() {
        let g = z();
        let gamma = compose_radii(&g, &r(&g, &[1]), &r(&g, &[2]));
        assert_eq!(gamma, r(&g, &[1, 2, 3]));
        let inner = ball_of_set(&g, &ball(&g, &Element::int(0), &r(&g, &[1])).unwrap(), &r(&g, &[2]));
        assert_eq!(inner, ints(&[0, 1, 2, 3]));
        assert!(inner.is_subset(&ball(&g, &Element::int(0), &gamma).unwrap()));
        assert_eq!(compose_radii(&g, &Radius::empty(), &r(&g, &[2])), r(&g, &[2]));

        let z6 = Group::cyclic(6).unwrap();
        let f1 = Radius::new(&z6, [Element::Mod(2)]).unwrap();
        let f2 = Radius::new(&z6, [Element::Mod(3)]).unwrap();
        let gamma = compose_radii(&z6, &f1, &f2);
        assert_eq!(gamma, Radius::new(&z6, [2, 3, 5].map(Element::Mod)).unwrap());
        for x in z6.elements().unwrap() {
            let two = ball_of_set(&z6, &ball(&z6, &x, &f1).unwrap(), &f2);
            assert!(two.is_subset(&ball(&z6, &x, &gamma).unwrap()));
        }
    }

    #[test]
    fn ordinal_radii() {
        let g = z();
        assert_eq!(ordinal_radius(&g, 3).unwrap(), r(&g, &[0, 1, -1]));
        assert!(ordinal_radius(&g, 0).unwrap().is_empty());
        let f = r(&g, &[4, -2]);
        // spiral: 0,1,-1,2,-2,3,-3,4 → 4 sits at index 7
        assert_eq!(ordinal_cover(&g, &f, 100), Some(8));
        assert!(f.is_subset(&ordinal_radius(&g, 8).unwrap()));
        assert!(!f.is_subset(&ordinal_radius(&g, 7).unwrap()));
    }

    #[test]
    fn foreign_points_rejected() {
        let g = z();
        assert!(ball(&g, &Element::Mod(1), &Radius::empty()).is_err());
        assert!(Radius::new(&g, [Element::Mod(1)]).is_err());
    }

    struct Broken<'g>(GroupBallean<'g>);

    impl BallStructure for Broken<'_> {
        type Radius = Radius;
        fn ball(&self, x: &Element, r: &Radius) -> BTreeSet<Element> {
            let mut b = self.0.ball(x, r);
            b.remove(x);
            b
        }
        fn star_ball(&self, x: &Element, r: &Radius) -> BTreeSet<Element> {
            self.0.star_ball(x, r)
        }
        fn interchange_witness(&self, r: &Radius) -> Radius {
            self.0.interchange_witness(r)
        }
        fn compose_witness(&self, a: &Radius, b: &Radius) -> Radius {
            self.0.compose_witness(a, b)
        }
    }

    #[test]
    fn axioms_hold_on_z_and_fail_for_broken_balls() {
        let g = z();
        let sample: Vec<Element> = (-10..=10).map(Element::int).collect();
        let radii: Vec<Radius> = (1..=3).map(|n| ordinal_radius(&g, n).unwrap()).collect();
        let rep = ballean_axioms_check(&GroupBallean { group: &g }, &sample, &radii);
        assert!(rep.passed(), "{:?}", rep.violation);
        assert_eq!(rep.sample_components, 1);

        let broken = Broken(GroupBallean { group: &g });
        let rep = ballean_axioms_check(&broken, &sample, &radii);
        assert_eq!(rep.violation.unwrap().axiom, Axiom::Membership);
    }

    #[test]
    fn axioms_hold_on_s3_exhaustively() {
        let g = Group::symmetric(3).unwrap();
        let all = g.elements().unwrap();
        // every subset of S3 as a radius
        let radii: Vec<Radius> = (0u32..64)
            .map(|mask| {
                Radius::new(&g, all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()))
                    .unwrap()
            })
            .collect();
        let rep = ballean_axioms_check(&GroupBallean { group: &g }, &all, &radii);
        assert!(rep.passed(), "{:?}", rep.violation);
    }
}
