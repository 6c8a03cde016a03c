//! m-thinness on finite windows.
//!
//! A window can refute thinness but never prove it, so verdicts are
//! `Consistent` or `Violated` and always carry the `(window, bound)` they were
//! computed on. "Bounded" means "among the first `bound` window positions".

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::ballean::{ball_unchecked, compose_radii, symmetrize, Radius};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::subset::{Membership, WindowedSubset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Consistent,
    Violated,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub point: String,
    pub position: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinnessReport {
    pub radius: String,
    pub m: usize,
    pub window: usize,
    pub bound: usize,
    /// Every window point `x` with `|Fx ∩ A| > m`, including those inside the bound.
    pub violations: Vec<Violation>,
    /// `{a ∈ A : |B(a, F) ∩ A| > m}` within the window.
    pub exceptional: Vec<String>,
    /// Smallest bound that would make the verdict consistent.
    pub minimal_bound: usize,
    pub verdict: Verdict,
}

impl ThinnessReport {
    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }

    /// Violations at positions `>= bound`.
    pub fn violations_beyond_bound(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.position >= self.bound)
    }
}

/// `|Fx ∩ A|`.
pub fn translate_count(a: &WindowedSubset, radius: &Radius, x: &Element) -> usize {
    let g = a.group();
    radius
        .elements()
        .iter()
        .filter(|f| a.contains(&g.mul(f, x)))
        .count()
}

/// `|B(x, F) ∩ A|` with `B(x, F) = Fx ∪ {x}`.
pub fn ball_count(a: &WindowedSubset, radius: &Radius, x: &Element) -> usize {
    let g = a.group();
    let mut n = translate_count(a, radius, x);
    if !radius.contains(&g.identity()) && a.contains(x) {
        n += 1;
    }
    n
}

/// `{a ∈ A ∩ window : ga ∈ A}`, i.e. `A ∩ g⁻¹A` on the window.
pub fn collision_set(a: &WindowedSubset, g: &Element) -> Result<Vec<Element>> {
    let group = a.group();
    if !group.contains(g) {
        return Err(Error::ForeignElement {
            element: g.to_string(),
            group: group.to_string(),
        });
    }
    if group.is_identity(g) {
        return Err(Error::IdentityArgument);
    }
    Ok(a
        .members()
        .into_iter()
        .filter(|x| a.contains(&group.mul(g, x)))
        .collect())
}

/// `{a ∈ A ∩ window : |B(a, F) ∩ A| > m}`.
pub fn exceptional_set(a: &WindowedSubset, radius: &Radius, m: usize) -> Result<Vec<Element>> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    Ok(a
        .members()
        .into_iter()
        .filter(|x| ball_count(a, radius, x) > m)
        .collect())
}

/// Nonzero `(position, |Fx ∩ A|)` over the window. A finite `A` lies inside
/// the window, so only `x ∈ F⁻¹A` need counting.
fn window_translate_counts(a: &WindowedSubset, radius: &Radius) -> Vec<(usize, usize)> {
    let window = a.window();
    match a.membership() {
        Membership::Finite(set) => {
            let g = a.group();
            let inverses: Vec<Element> = radius.elements().iter().map(|f| g.inv(f)).collect();
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for p in set {
                for fi in &inverses {
                    if let Some(pos) = window.position(&g.mul(fi, p)) {
                        *counts.entry(pos).or_default() += 1;
                    }
                }
            }
            counts.into_iter().collect()
        }
        Membership::Predicate(_) => window
            .elements()
            .iter()
            .enumerate()
            .map(|(pos, x)| (pos, translate_count(a, radius, x)))
            .filter(|&(_, n)| n > 0)
            .collect(),
    }
}

/// Checks `|Fx ∩ A| <= m` for every window point beyond the first `bound`.
pub fn is_m_thin_window(
    a: &WindowedSubset,
    radius: &Radius,
    m: usize,
    bound: usize,
) -> Result<ThinnessReport> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let window = a.window();
    if bound > window.len() {
        return Err(Error::Precondition(format!(
            "bound {bound} exceeds window size {}",
            window.len()
        )));
    }
    let mut violations: Vec<Violation> = window_translate_counts(a, radius)
        .into_iter()
        .filter(|&(_, count)| count > m)
        .map(|(position, count)| Violation {
            point: window.elements()[position].to_string(),
            position,
            count,
        })
        .collect();
    violations.sort_by_key(|v| v.position);
    let exceptional = exceptional_set(a, radius, m)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let minimal_bound = violations.last().map_or(0, |v| v.position + 1);
    let verdict = if minimal_bound <= bound {
        Verdict::Consistent
    } else {
        Verdict::Violated
    };
    Ok(ThinnessReport {
        radius: radius.to_string(),
        m,
        window: window.len(),
        bound,
        violations,
        exceptional,
        minimal_bound,
        verdict,
    })
}

/// Outcome of the window form of "A is m-thin iff its exceptional set is bounded".
///
/// The cover is built the way the argument needs it: with the symmetrized
/// radius `S = F ∪ F⁻¹` and `β = S·S ∪ S`, every `x` with `|B(x, F) ∩ A| > m`
/// has some `a ∈ B(x, F) ∩ A` with `|B(a, β) ∩ A| > m` and `x ∈ B(a, S)`.
/// So `Z = B(Y_β, S)` must contain every violator. The set
/// `Y_F = {a : |B(a, F) ∩ A| > m}` and its ball `B(Y_F, F)` are reported too,
/// since that smaller cover can miss violators when `F` is not symmetric.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Report {
    pub radius: String,
    pub m: usize,
    pub window: usize,
    pub exceptional: Vec<Element>,
    pub exceptional_composed: Vec<Element>,
    pub cover: BTreeSet<Element>,
    pub naive_cover: BTreeSet<Element>,
    pub violators: Vec<Element>,
    pub outside_cover: Vec<Element>,
    pub outside_naive_cover: Vec<Element>,
}

impl Lemma1Report {
    pub fn agrees(&self) -> bool {
        self.outside_cover.is_empty()
    }
}

pub fn lemma1_equivalence_check(
    a: &WindowedSubset,
    radius: &Radius,
    m: usize,
) -> Result<Lemma1Report> {
    let group = a.group();
    let exceptional = exceptional_set(a, radius, m)?;
    let naive_cover: BTreeSet<Element> = exceptional
        .iter()
        .flat_map(|y| ball_unchecked(group, y, radius))
        .collect();

    let sym = symmetrize(group, radius);
    let beta = compose_radii(group, &sym, &sym);
    let mut composed: BTreeSet<Element> = exceptional_set(a, &beta, m)?.into_iter().collect();

    let violators: Vec<Element> = a
        .window()
        .elements()
        .iter()
        .filter(|x| ball_count(a, radius, x) > m)
        .cloned()
        .collect();
    // exceptional points just outside the window that witness a violator
    for x in &violators {
        for y in ball_unchecked(group, x, &sym) {
            if a.contains(&y) && ball_count(a, &beta, &y) > m {
                composed.insert(y);
            }
        }
    }
    let cover: BTreeSet<Element> = composed
        .iter()
        .flat_map(|y| ball_unchecked(group, y, &sym))
        .collect();
    let outside_cover = violators
        .iter()
        .filter(|x| !cover.contains(x))
        .cloned()
        .collect();
    let outside_naive_cover = violators
        .iter()
        .filter(|x| !naive_cover.contains(x))
        .cloned()
        .collect();
    Ok(Lemma1Report {
        radius: radius.to_string(),
        m,
        window: a.window().len(),
        exceptional,
        exceptional_composed: composed.into_iter().collect(),
        cover,
        naive_cover,
        violators,
        outside_cover,
        outside_naive_cover,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub subset_evaluations: usize,
    pub subgroup_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            subset_evaluations: 1 << 12,
            subgroup_order: 1 << 12,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsolatingSubgroup {
    pub subgroup: BTreeSet<Element>,
    /// Orders of `H₀ ⊆ H₁ ⊆ ...` up to the fixpoint.
    pub chain: Vec<usize>,
    pub subset_evaluations: usize,
    /// `H` is the whole window: valid but uninformative.
    pub trivial: bool,
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Closure iteration producing a subgroup `H ⊇ S` with `|Hx ∩ A| <= m` for
/// every window point `x ∉ H`.
///
/// Each round adds, for every `(m+1)`-subset `X` of the current `H`, every
/// `g` with `Xg ⊆ A`, then closes under the group operations. The window must
/// be the whole group (finite case) or a region the caller accepts as the
/// universe; candidates `g` are drawn from it.
pub fn thin_isolating_subgroup(
    a: &WindowedSubset,
    seeds: &[Element],
    m: usize,
    caps: Caps,
) -> Result<IsolatingSubgroup> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let group = a.group();
    let members = a.members();
    let mut h = group.generated_subgroup(seeds, caps.subgroup_order)?;
    let mut chain = vec![h.len()];
    let mut evaluations = 0usize;
    loop {
        let hs: Vec<Element> = h.iter().cloned().collect();
        let mut extra: BTreeSet<Element> = BTreeSet::new();
        let mut over_cap = false;
        combinations(hs.len(), m + 1, |idx| {
            evaluations += 1;
            if evaluations > caps.subset_evaluations {
                over_cap = true;
                return false;
            }
            let first_inv = group.inv(&hs[idx[0]]);
            for target in &members {
                let g = group.mul(&first_inv, target);
                if idx[1..].iter().all(|&i| a.contains(&group.mul(&hs[i], &g))) {
                    extra.insert(g);
                }
            }
            true
        });
        if over_cap {
            return Err(Error::CapExceeded {
                chain,
                reason: format!("more than {} subset evaluations", caps.subset_evaluations),
            });
        }
        if extra.is_subset(&h) {
            break;
        }
        let gens: Vec<Element> = h.iter().chain(&extra).cloned().collect();
        h = group
            .generated_subgroup(&gens, caps.subgroup_order)
            .map_err(|e| match e {
                Error::CapExceeded { reason, .. } => Error::CapExceeded {
                    chain: chain.clone(),
                    reason,
                },
                other => other,
            })?;
        chain.push(h.len());
    }
    let trivial = a.window().elements().iter().all(|x| h.contains(x));
    Ok(IsolatingSubgroup {
        subgroup: h,
        chain,
        subset_evaluations: evaluations,
        trivial,
    })
}

/// Whether `|Hx ∩ A| <= m` for every window point `x ∉ H`.
pub fn isolates(a: &WindowedSubset, group: &Group, h: &BTreeSet<Element>, m: usize) -> bool {
    a.window().elements().iter().filter(|x| !h.contains(x)).all(|x| {
        h.iter().filter(|k| a.contains(&group.mul(k, x))).count() <= m
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::Window;

    fn z() -> Group {
        Group::lattice(1).unwrap()
    }

    fn radius(g: &Group, v: &[i64]) -> Radius {
        Radius::new(g, v.iter().map(|&i| Element::int(i))).unwrap()
    }

    fn ints(v: &[Element]) -> Vec<i64> {
        let mut out: Vec<i64> = v.iter().map(|x| x.as_int().unwrap()).collect();
        out.sort();
        out
    }

    /// `{10ⁿ, 10ⁿ + 1 : 1 <= n <= 4}` on the window `[-10⁴ - 2, 10⁴ + 2]`.
    fn pairs() -> WindowedSubset {
        let g = z();
        let w = Window::prefix(&g, 20_005).unwrap();
        let elems = (1..=4).flat_map(|n| {
            let p = 10i64.pow(n);
            [Element::int(p), Element::int(p + 1)]
        });
        WindowedSubset::explicit(&g, elems, w).unwrap()
    }

    #[test]
    fn collision_examples() {
        let g = z();
        let w = Window::prefix(&g, 41).unwrap();
        let evens = WindowedSubset::explicit(&g, (0..=10).map(|i| Element::int(2 * i)), w.clone()).unwrap();
        let got = collision_set(&evens, &Element::int(2)).unwrap();
        assert_eq!(ints(&got), (0..10).map(|i| 2 * i).collect::<Vec<_>>());
        assert!(collision_set(&evens, &Element::int(1)).unwrap().is_empty());
        assert!(matches!(collision_set(&evens, &Element::int(0)), Err(Error::IdentityArgument)));

        let powers = WindowedSubset::explicit(&g, [1, 2, 4, 8, 16].map(Element::int), w).unwrap();
        // brute force: a with a + 1 also in the set
        let oracle: Vec<i64> = [1, 2, 4, 8, 16]
            .iter()
            .copied()
            .filter(|a| [1, 2, 4, 8, 16].contains(&(a + 1)))
            .collect();
        assert_eq!(ints(&collision_set(&powers, &Element::int(1)).unwrap()), oracle);
        assert_eq!(oracle, vec![1]);
    }

    #[test]
    fn exceptional_examples() {
        let g = z();
        let a = pairs();
        let f = radius(&g, &[0, 1]);
        assert_eq!(ints(&exceptional_set(&a, &f, 1).unwrap()), vec![10, 100, 1000, 10000]);
        assert!(exceptional_set(&a, &f, 2).unwrap().is_empty());
        assert!(exceptional_set(&a, &Radius::empty(), 1).unwrap().is_empty());
    }

    #[test]
    fn window_thinness_examples() {
        let g = z();
        let a = pairs();
        let f = radius(&g, &[0, 1]);
        let rep = is_m_thin_window(&a, &f, 2, 0).unwrap();
        assert!(rep.is_consistent() && rep.violations.is_empty());
        let rep = is_m_thin_window(&a, &f, 1, 0).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        let pts: Vec<&str> = rep.violations.iter().map(|v| v.point.as_str()).collect();
        assert_eq!(pts, vec!["10", "100", "1000", "10000"]);

        let w = Window::prefix(&g, 201).unwrap();
        let evens = WindowedSubset::predicate(&g, "evens", |x| x.as_int().unwrap() % 2 == 0, w);
        let rep = is_m_thin_window(&evens, &radius(&g, &[0, 2]), 1, 0).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        assert_eq!(rep.violations.len(), 101);
        assert!(rep.violations.iter().all(|v| v.point.parse::<i64>().unwrap() % 2 == 0));
    }

    #[test]
    fn lemma1_examples() {
        let g = z();
        let a = pairs();
        let f = radius(&g, &[0, 1]);
        let rep = lemma1_equivalence_check(&a, &f, 1).unwrap();
        assert!(rep.agrees());
        assert_eq!(ints(&rep.exceptional), vec![10, 100, 1000, 10000]);
        let naive: Vec<Element> = rep.naive_cover.iter().cloned().collect();
        assert_eq!(ints(&naive), vec![10, 11, 100, 101, 1000, 1001, 10000, 10001]);
        assert!(rep.outside_naive_cover.is_empty());

        let w = Window::prefix(&g, 20_001).unwrap();
        let thin = WindowedSubset::explicit(&g, (1..=4).map(|n| Element::int(10i64.pow(n))), w).unwrap();
        let rep = lemma1_equivalence_check(&thin, &radius(&g, &[0, 1, -1, 2, 7]), 1).unwrap();
        assert!(rep.exceptional.is_empty() && rep.naive_cover.is_empty() && rep.agrees());

        let rep = lemma1_equivalence_check(&a, &Radius::empty(), 1).unwrap();
        assert!(rep.violators.is_empty() && rep.agrees());
    }

    #[test]
    fn lemma1_naive_cover_can_miss_for_asymmetric_radius() {
        let g = z();
        let w = Window::prefix(&g, 41).unwrap();
        let a = WindowedSubset::explicit(&g, [Element::int(10), Element::int(11)], w).unwrap();
        let rep = lemma1_equivalence_check(&a, &radius(&g, &[1, 2]), 1).unwrap();
        assert_eq!(ints(&rep.outside_naive_cover), vec![9]);
        assert!(rep.agrees());
    }

    /// Every subgroup of `Z_n` is `dZ_n` for a divisor `d`.
    fn cyclic_subgroups(n: u64) -> Vec<BTreeSet<Element>> {
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| (0..n / d).map(|k| Element::Mod(k * d)).collect())
            .collect()
    }

    #[test]
    fn isolating_subgroup_in_z12() {
        let g = Group::cyclic(12).unwrap();
        let w = Window::full(&g).unwrap();
        let a = WindowedSubset::explicit(&g, [1, 2, 7].map(Element::Mod), w).unwrap();
        let seeds = [Element::Mod(0), Element::Mod(6)];
        let res = thin_isolating_subgroup(&a, &seeds, 1, Caps::default()).unwrap();
        assert!(g.is_subgroup(&res.subgroup));
        assert!(seeds.iter().all(|s| res.subgroup.contains(s)));
        assert!(isolates(&a, &g, &res.subgroup, 1));
        // oracle: the valid subgroups containing {0, 6}, smallest first
        let valid: Vec<_> = cyclic_subgroups(12)
            .into_iter()
            .filter(|h| seeds.iter().all(|s| h.contains(s)) && isolates(&a, &g, h, 1))
            .collect();
        let minimal = valid.iter().min_by_key(|h| h.len()).unwrap();
        assert_eq!(&res.subgroup, minimal);
        assert!(res.trivial);
        assert_eq!(res.chain, vec![2, 12]);
    }

    #[test]
    fn isolating_subgroup_degenerate_cases() {
        let g = Group::cyclic(12).unwrap();
        let w = Window::full(&g).unwrap();
        let seeds = [Element::Mod(4)];
        let span = g.generated_subgroup(&seeds, 100).unwrap();
        let empty = WindowedSubset::explicit(&g, [], w.clone()).unwrap();
        assert_eq!(thin_isolating_subgroup(&empty, &seeds, 1, Caps::default()).unwrap().subgroup, span);
        let a = WindowedSubset::explicit(&g, [1, 2, 7].map(Element::Mod), w).unwrap();
        let res = thin_isolating_subgroup(&a, &seeds, 3, Caps::default()).unwrap();
        assert_eq!(res.subgroup, span);
        assert!(!res.trivial);
    }

    #[test]
    fn isolating_subgroup_cap() {
        let g = Group::cyclic(200).unwrap();
        let w = Window::full(&g).unwrap();
        let a = WindowedSubset::explicit(&g, [1, 2, 7].map(Element::Mod), w).unwrap();
        let caps = Caps {
            subset_evaluations: 100,
            subgroup_order: 1000,
        };
        let res = thin_isolating_subgroup(&a, &[Element::Mod(2)], 1, caps);
        assert!(matches!(res, Err(Error::CapExceeded { .. })));
    }
}
