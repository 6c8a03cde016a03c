//! Three-colorings of `G × G` with few points of color 1 on horizontal lines,
//! of color 2 on vertical lines and of color 3 on diagonals.
//!
//! Only the countable side exists here. For `|G| >= ℵ₂` no such coloring
//! exists at all; see [`IMPOSSIBILITY_NOTE`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::partition::SubgroupChain;

/// Attached to coloring reports: the bound is sharp in cardinality.
pub const IMPOSSIBILITY_NOTE: &str = "for groups of cardinality at least aleph_2 every 3-coloring of G x G \
has, for some g != e, a horizontal line with infinitely many color-1 points, a vertical line with \
infinitely many color-2 points, or a diagonal with infinitely many color-3 points; no finite window can \
exhibit this, so it is not executed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Region {
    /// Plain alternating coloring over an abstract point set.
    Step1,
    /// The pair `(e, e)`.
    Base,
    /// `(H ∖ K) × (H ∖ K)`: horizontals against verticals, colors {1, 2}.
    Outer,
    /// `K × (H ∖ K)`: horizontals against diagonals, colors {1, 3}.
    Left,
    /// `(H ∖ K) × K`: verticals against diagonals, colors {2, 3}.
    Right,
}

impl Region {
    pub fn palette(self) -> &'static [u8] {
        match self {
            Region::Step1 => &[1, 2],
            Region::Base => &[1],
            Region::Outer => &[1, 2],
            Region::Left => &[1, 3],
            Region::Right => &[2, 3],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub color: u8,
    pub region: Region,
    /// Annulus index in a chained coloring, 0 otherwise.
    pub annulus: usize,
    /// Position in the stage order `A₀, B₀, A₁, B₁, ...`.
    pub stage: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringTable<P: Ord> {
    pub cells: BTreeMap<P, Cell>,
}

impl<P: Ord> Default for ColoringTable<P> {
    fn default() -> Self {
        ColoringTable {
            cells: BTreeMap::new(),
        }
    }
}

impl<P: Ord> ColoringTable<P> {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn color(&self, p: &P) -> Option<u8> {
        self.cells.get(p).map(|c| c.color)
    }

    /// Points whose color lies outside their region's palette.
    pub fn palette_violations(&self) -> Vec<&P> {
        self.cells
            .iter()
            .filter(|(_, c)| !c.region.palette().contains(&c.color))
            .map(|(p, _)| p)
            .collect()
    }
}

impl ColoringTable<(Element, Element)> {
    /// `(x, y, color, region)` rows.
    pub fn quadruples(&self) -> Vec<(String, String, u8, Region)> {
        self.cells
            .iter()
            .map(|((x, y), c)| (x.to_string(), y.to_string(), c.color, c.region))
            .collect()
    }
}

fn partition_index<P: Ord + Clone + Debug>(
    points: &[P],
    family: &[Vec<P>],
    name: &str,
) -> Result<BTreeMap<P, usize>> {
    let mut index = BTreeMap::new();
    for (n, block) in family.iter().enumerate() {
        for p in block {
            if index.insert(p.clone(), n).is_some() {
                return Err(Error::NotAPartition(format!("{p:?} lies in two {name} blocks")));
            }
        }
    }
    if index.len() != points.len() || points.iter().any(|p| !index.contains_key(p)) {
        let stray = points
            .iter()
            .find(|p| !index.contains_key(*p))
            .map(|p| format!("{p:?}"))
            .unwrap_or_else(|| "a point outside the domain".into());
        return Err(Error::NotAPartition(format!("{name} blocks do not cover exactly: {stray}")));
    }
    Ok(index)
}

/// Default cap on `|A_n ∩ B_m|`, the window stand-in for "finite".
pub fn default_intersection_cap(points: usize) -> usize {
    points.isqrt().max(1)
}

/// Alternating coloring: `A₀ → 2`, `B₀ ∖ A₀ → 1`, `A₁ ∖ B₀ → 2`, and so on,
/// each stage coloring the still uncolored points of its block.
///
/// Afterwards color 1 on `A_n` sits inside `⋃_{j<n} A_n ∩ B_j` and color 2 on
/// `B_n` inside `⋃_{j<=n} B_n ∩ A_j`.
pub fn alternating_two_coloring<P: Ord + Clone + Debug>(
    points: &[P],
    a_family: &[Vec<P>],
    b_family: &[Vec<P>],
    cap: Option<usize>,
) -> Result<ColoringTable<P>> {
    let a_idx = partition_index(points, a_family, "A")?;
    let b_idx = partition_index(points, b_family, "B")?;
    let cap = cap.unwrap_or_else(|| default_intersection_cap(points.len()));
    let mut meet: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for p in points {
        *meet.entry((a_idx[p], b_idx[p])).or_default() += 1;
    }
    if let Some((&(n, m), &size)) = meet.iter().find(|(_, &s)| s > cap) {
        return Err(Error::InfiniteIntersection {
            first: format!("A_{n}"),
            second: format!("B_{m}"),
            size,
            cap,
        });
    }
    let mut table = ColoringTable::default();
    for n in 0..a_family.len().max(b_family.len()) {
        for (stage, block, color) in [
            (2 * n, a_family.get(n), 2),
            (2 * n + 1, b_family.get(n), 1),
        ] {
            for p in block.into_iter().flatten() {
                table.cells.entry(p.clone()).or_insert(Cell {
                    color,
                    region: Region::Step1,
                    annulus: 0,
                    stage,
                });
            }
        }
    }
    Ok(table)
}

/// Checks both consequences of the alternating scheme; returns offending points.
pub fn alternating_consequences<P: Ord + Clone + Debug>(
    table: &ColoringTable<P>,
    a_family: &[Vec<P>],
    b_family: &[Vec<P>],
) -> Vec<P> {
    let b_of: BTreeMap<&P, usize> = b_family
        .iter()
        .enumerate()
        .flat_map(|(n, b)| b.iter().map(move |p| (p, n)))
        .collect();
    let a_of: BTreeMap<&P, usize> = a_family
        .iter()
        .enumerate()
        .flat_map(|(n, a)| a.iter().map(move |p| (p, n)))
        .collect();
    let mut bad = Vec::new();
    for (n, block) in a_family.iter().enumerate() {
        bad.extend(
            block
                .iter()
                .filter(|p| table.color(p) == Some(1) && b_of[p] >= n)
                .cloned(),
        );
    }
    for (n, block) in b_family.iter().enumerate() {
        bad.extend(
            block
                .iter()
                .filter(|p| table.color(p) == Some(2) && a_of[p] > n)
                .cloned(),
        );
    }
    bad
}

/// Orders line parameters by enumeration index, then by value.
struct ParamOrder<'g> {
    group: &'g Group,
    limit: usize,
    cache: BTreeMap<Element, usize>,
}

impl<'g> ParamOrder<'g> {
    fn new(group: &'g Group, window: usize) -> Self {
        ParamOrder {
            group,
            limit: (4 * window).max(1024),
            cache: BTreeMap::new(),
        }
    }

    fn key(&mut self, g: &Element) -> (usize, Element) {
        let i = *self
            .cache
            .entry(g.clone())
            .or_insert_with(|| self.group.index_of(g, self.limit).unwrap_or(usize::MAX));
        (i, g.clone())
    }

    /// Groups points into lines by parameter, lines sorted by parameter order.
    fn families(
        &mut self,
        points: &[(Element, Element)],
        param: impl Fn(&(Element, Element)) -> Element,
    ) -> Vec<Vec<(Element, Element)>> {
        let mut lines: BTreeMap<(usize, Element), Vec<(Element, Element)>> = BTreeMap::new();
        for p in points {
            let g = param(p);
            let key = self.key(&g);
            lines.entry(key).or_default().push(p.clone());
        }
        lines.into_values().collect()
    }
}

/// Step 1 on one region, with Step 1's colors 1 and 2 renamed per region.
fn color_region(
    table: &mut ColoringTable<(Element, Element)>,
    points: Vec<(Element, Element)>,
    a: Vec<Vec<(Element, Element)>>,
    b: Vec<Vec<(Element, Element)>>,
    region: Region,
    annulus: usize,
) -> Result<()> {
    if points.is_empty() {
        return Ok(());
    }
    // lines meet in at most one point, so the cap is never the issue here
    let step = alternating_two_coloring(&points, &a, &b, Some(1))?;
    let rename = match region {
        Region::Outer => [1, 2],
        Region::Left => [1, 3],
        Region::Right => [2, 3],
        _ => unreachable!(),
    };
    for (p, c) in step.cells {
        table.cells.insert(
            p,
            Cell {
                color: rename[(c.color - 1) as usize],
                region,
                annulus,
                stage: c.stage,
            },
        );
    }
    Ok(())
}

/// Checks that `K ∩ H` is closed in `H`: `e ∈ K` and `xy⁻¹ ∈ K` whenever the
/// product stays inside the window.
fn check_subgroup_on_window(group: &Group, h: &[Element], k: &dyn Fn(&Element) -> bool) -> Result<()> {
    if !k(&group.identity()) {
        return Err(Error::NotASubgroup("K does not contain the identity".into()));
    }
    let in_window: BTreeSet<&Element> = h.iter().collect();
    let ks: Vec<&Element> = h.iter().filter(|x| k(x)).collect();
    for x in &ks {
        for y in &ks {
            let z = group.mul(x, &group.inv(y));
            if in_window.contains(&z) && !k(&z) {
                return Err(Error::NotASubgroup(format!("{x} · ({y})⁻¹ = {z} is missing from K")));
            }
        }
    }
    Ok(())
}

fn block_coloring_into(
    table: &mut ColoringTable<(Element, Element)>,
    group: &Group,
    h: &[Element],
    k: &dyn Fn(&Element) -> bool,
    annulus: usize,
) -> Result<()> {
    check_subgroup_on_window(group, h, k)?;
    let (ks, outs): (Vec<&Element>, Vec<&Element>) = h.iter().partition(|x| k(x));
    let pairs = |xs: &[&Element], ys: &[&Element]| -> Vec<(Element, Element)> {
        xs.iter()
            .flat_map(|x| ys.iter().map(move |y| ((*x).clone(), (*y).clone())))
            .collect()
    };
    let mut order = ParamOrder::new(group, h.len());
    let horizontal = |p: &(Element, Element)| p.1.clone();
    let vertical = |p: &(Element, Element)| p.0.clone();
    let diagonal = |p: &(Element, Element)| group.mul(&p.1, &group.inv(&p.0));

    let outer = pairs(&outs, &outs);
    let (a, b) = (order.families(&outer, horizontal), order.families(&outer, vertical));
    color_region(table, outer, a, b, Region::Outer, annulus)?;

    let left = pairs(&ks, &outs);
    let (a, b) = (order.families(&left, horizontal), order.families(&left, diagonal));
    color_region(table, left, a, b, Region::Left, annulus)?;

    let right = pairs(&outs, &ks);
    let (a, b) = (order.families(&right, vertical), order.families(&right, diagonal));
    color_region(table, right, a, b, Region::Right, annulus)?;
    Ok(())
}

/// Colors `(H × H) ∖ (K × K)` for a window `h` of `H` and a subgroup `K`
/// given by membership.
///
/// Each region is covered by two line families restricted to it, ordered by
/// the enumeration index of the line parameter, and colored by the
/// alternating scheme. A horizontal meets a vertical or a diagonal in one
/// point, so the finiteness precondition holds with cap 1.
pub fn block_three_coloring(
    group: &Group,
    h: &[Element],
    k: impl Fn(&Element) -> bool,
) -> Result<ColoringTable<(Element, Element)>> {
    let mut table = ColoringTable::default();
    block_coloring_into(&mut table, group, h, &k, 0)?;
    Ok(table)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Containments {
    pub pairs: usize,
    /// `(x, g)` of color 1 with `x` outside the block of `g`.
    pub horizontal: Vec<(Element, Element)>,
    /// `(g, y)` of color 2 with `y` outside the block of `g`.
    pub vertical: Vec<(Element, Element)>,
    /// Cross-annulus pairs with `x⁻¹y` outside the annulus layer.
    pub cross: Vec<(Element, Element)>,
    /// Color-3 points outside the annulus fixed by their diagonal.
    pub diagonal: Vec<(Element, Element)>,
}

impl Containments {
    pub fn passed(&self) -> bool {
        self.horizontal.is_empty()
            && self.vertical.is_empty()
            && self.cross.is_empty()
            && self.diagonal.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainColoring {
    pub table: ColoringTable<(Element, Element)>,
    pub containments: Containments,
    pub chain_orders: Vec<usize>,
    pub note: &'static str,
}

/// Block index `α + 1` of `g ∈ G_{α+1} ∖ G_α`; `1` for `e`.
fn block_of(chain: &SubgroupChain, g: &Element) -> usize {
    chain.layer(g).map_or(1, |a| a + 1)
}

/// Chained coloring of `G_L × G_L` along `chain`: `(e, e) ↦ 1`, then each
/// annulus `(G_{α+1} × G_{α+1}) ∖ (G_α × G_α)` by [`block_three_coloring`],
/// followed by an exact check of every containment.
pub fn chain_three_coloring(group: &Group, chain: &SubgroupChain) -> Result<ChainColoring> {
    let levels = chain.levels();
    let window: Vec<Element> = order_by_enumeration(group, chain.top());
    let mut table = ColoringTable::default();
    let e = group.identity();
    table.cells.insert(
        (e.clone(), e),
        Cell {
            color: 1,
            region: Region::Base,
            annulus: 0,
            stage: 0,
        },
    );
    for alpha in 0..chain.depth() {
        let h: Vec<Element> = window.iter().filter(|x| levels[alpha + 1].contains(x)).cloned().collect();
        let k = &levels[alpha];
        block_coloring_into(&mut table, group, &h, &|x| k.contains(x), alpha)?;
    }
    let containments = check_containments(group, chain, &table);
    Ok(ChainColoring {
        table,
        containments,
        chain_orders: levels.iter().map(BTreeSet::len).collect(),
        note: IMPOSSIBILITY_NOTE,
    })
}

fn order_by_enumeration(group: &Group, set: &BTreeSet<Element>) -> Vec<Element> {
    let mut out = Vec::with_capacity(set.len());
    let mut left = set.len();
    for x in group.enumerate() {
        if left == 0 {
            break;
        }
        if set.contains(&x) {
            out.push(x);
            left -= 1;
        }
    }
    out
}

fn check_containments(
    group: &Group,
    chain: &SubgroupChain,
    table: &ColoringTable<(Element, Element)>,
) -> Containments {
    let levels = chain.levels();
    let mut report = Containments {
        pairs: table.len(),
        ..Containments::default()
    };
    for ((x, y), cell) in &table.cells {
        let p = (x.clone(), y.clone());
        match cell.color {
            1 if !levels[block_of(chain, y)].contains(x) => report.horizontal.push(p.clone()),
            2 if !levels[block_of(chain, x)].contains(y) => report.vertical.push(p.clone()),
            _ => {}
        }
        let q = group.mul(&group.inv(x), y);
        let (lx, ly) = (chain.layer(x), chain.layer(y));
        let cross = match (lx, ly) {
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) if a != b => Some(a.max(b)),
            _ => None,
        };
        if let Some(a) = cross {
            if chain.layer(&q) != Some(a) {
                report.cross.push(p.clone());
            }
        }
        if cell.color == 3 {
            // the point sits in annulus `layer(x⁻¹y)`; for abelian groups that
            // is the layer of the diagonal parameter itself
            let g = group.mul(y, &group.inv(x));
            let layer = if group.is_abelian() { chain.layer(&g) } else { chain.layer(&q) };
            let block = layer.map_or(1, |a| a + 1);
            if !(levels[block].contains(x) && levels[block].contains(y)) {
                report.diagonal.push(p);
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineKind {
    Horizontal,
    Vertical,
    Diagonal,
}

/// Horizontal `G × {g}`, vertical `{g} × G`, diagonal `{(x, gx)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineSpec {
    pub kind: LineKind,
    pub parameter: Element,
}

impl LineSpec {
    pub fn contains(&self, group: &Group, p: &(Element, Element)) -> bool {
        match self.kind {
            LineKind::Horizontal => p.1 == self.parameter,
            LineKind::Vertical => p.0 == self.parameter,
            LineKind::Diagonal => group.mul(&self.parameter, &p.0) == p.1,
        }
    }

    /// The color that must stay finite on this kind of line.
    pub fn watched_color(&self) -> u8 {
        match self.kind {
            LineKind::Horizontal => 1,
            LineKind::Vertical => 2,
            LineKind::Diagonal => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineCensus {
    pub line: LineSpec,
    /// Counts of colors 1, 2, 3 on the line inside the table.
    pub counts: [usize; 3],
    /// Points of the watched color.
    pub watched: Vec<(Element, Element)>,
}

pub fn line_census(
    group: &Group,
    table: &ColoringTable<(Element, Element)>,
    line: &LineSpec,
) -> Result<LineCensus> {
    let mut counts = [0usize; 3];
    let mut watched = Vec::new();
    let mut hit = false;
    for (p, cell) in &table.cells {
        if !line.contains(group, p) {
            continue;
        }
        hit = true;
        counts[(cell.color - 1) as usize] += 1;
        if cell.color == line.watched_color() {
            watched.push(p.clone());
        }
    }
    if !hit {
        return Err(Error::Precondition(format!(
            "{:?} line at {} misses the table",
            line.kind, line.parameter
        )));
    }
    Ok(LineCensus {
        line: line.clone(),
        counts,
        watched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupSpec, Rank};

    type Cells = Vec<(usize, usize)>;

    fn grid(n: usize) -> (Cells, Vec<Cells>, Vec<Cells>) {
        let pts: Vec<_> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let cols = (0..n).map(|i| (0..n).map(|j| (i, j)).collect()).collect();
        let rows = (0..n).map(|j| (0..n).map(|i| (i, j)).collect()).collect();
        (pts, cols, rows)
    }

    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
    struct P(usize, usize);
    impl std::fmt::Display for P {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            write!(f, "({}, {})", self.0, self.1)
        }
    }

    fn wrap(v: Vec<Vec<(usize, usize)>>) -> Vec<Vec<P>> {
        v.into_iter().map(|b| b.into_iter().map(|(i, j)| P(i, j)).collect()).collect()
    }

    #[test]
    fn step1_grid_closed_form() {
        let (pts, cols, rows) = grid(20);
        let pts: Vec<P> = pts.into_iter().map(|(i, j)| P(i, j)).collect();
        let (cols, rows) = (wrap(cols), wrap(rows));
        let t = alternating_two_coloring(&pts, &cols, &rows, None).unwrap();
        for p in &pts {
            assert_eq!(t.color(p), Some(if p.0 <= p.1 { 2 } else { 1 }));
        }
        for (n, col) in cols.iter().enumerate() {
            assert_eq!(col.iter().filter(|p| t.color(p) == Some(1)).count(), n);
        }
        for (j, row) in rows.iter().enumerate() {
            assert_eq!(row.iter().filter(|p| t.color(p) == Some(2)).count(), j + 1);
        }
        assert!(alternating_consequences(&t, &cols, &rows).is_empty());
    }

    #[test]
    fn step1_degenerate_families() {
        let (pts, cols, _) = grid(5);
        let pts: Vec<P> = pts.into_iter().map(|(i, j)| P(i, j)).collect();
        let one = vec![pts.clone()];
        let t = alternating_two_coloring(&pts, &one, &wrap(cols.clone()), Some(25)).unwrap();
        assert!(t.cells.values().all(|c| c.color == 2));

        let cols = wrap(cols);
        let t = alternating_two_coloring(&pts, &cols, &cols, Some(25)).unwrap();
        assert!(t.cells.values().all(|c| c.color == 2));
        assert!(alternating_consequences(&t, &cols, &cols).is_empty());
    }

    #[test]
    fn step1_errors() {
        let (pts, cols, rows) = grid(4);
        let pts: Vec<P> = pts.into_iter().map(|(i, j)| P(i, j)).collect();
        let mut bad = wrap(cols.clone());
        bad[0].push(P(1, 1));
        assert!(matches!(
            alternating_two_coloring(&pts, &bad, &wrap(rows.clone()), None),
            Err(Error::NotAPartition(_))
        ));
        let one = vec![pts.clone()];
        assert!(matches!(
            alternating_two_coloring(&pts, &one, &one, None),
            Err(Error::InfiniteIntersection { size: 16, cap: 4, .. })
        ));
    }

    #[test]
    fn block_coloring_on_integers() {
        let g = Group::lattice(1).unwrap();
        let h: Vec<Element> = (-8..=8).map(Element::int).collect();
        let even = |x: &Element| x.as_int().unwrap() % 2 == 0;
        let t = block_three_coloring(&g, &h, even).unwrap();
        assert_eq!(t.len(), 17 * 17 - 9 * 9);
        assert!(t.palette_violations().is_empty());
        for ((x, y), c) in &t.cells {
            let region = match (even(x), even(y)) {
                (false, false) => Region::Outer,
                (true, false) => Region::Left,
                (false, true) => Region::Right,
                (true, true) => panic!("K × K must stay uncolored"),
            };
            assert_eq!(c.region, region);
        }
        let odd = |x: &Element| x.as_int().unwrap() % 2 != 0;
        assert!(matches!(block_three_coloring(&g, &h, odd), Err(Error::NotASubgroup(_))));
        assert!(block_three_coloring(&g, &h, |_| true).unwrap().is_empty());
    }

    #[test]
    fn block_coloring_on_klein_group() {
        let g = Group::product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(2)]).unwrap();
        let h = g.elements().unwrap();
        let k = |x: &Element| matches!(x, Element::Tuple(v) if v[1] == Element::Mod(0));
        let t = block_three_coloring(&g, &h, k).unwrap();
        assert_eq!(t.len(), 12);
        assert!(t.palette_violations().is_empty());
        let regions: BTreeSet<Region> = t.cells.values().map(|c| c.region).collect();
        assert_eq!(regions.len(), 3);
    }

    fn z2_omega() -> Group {
        Group::direct_sum(GroupSpec::Cyclic(2), Rank::Omega).unwrap()
    }

    #[test]
    fn chain_coloring_exhaustive() {
        let g = z2_omega();
        let chain = SubgroupChain::coordinate_prefixes(&g, 4).unwrap();
        let res = chain_three_coloring(&g, &chain).unwrap();
        assert_eq!(res.table.len(), 256);
        assert!(res.containments.passed(), "{:?}", res.containments);
        assert_eq!(res.table.color(&(g.identity(), g.identity())), Some(1));
        assert!(res.table.palette_violations().is_empty());

        // annulus restriction equals the standalone block coloring
        let levels = chain.levels();
        let h = order_by_enumeration(&g, &levels[3]);
        let block = block_three_coloring(&g, &h, |x| levels[2].contains(x)).unwrap();
        for (p, c) in &block.cells {
            assert_eq!(res.table.cells[p].color, c.color);
            assert_eq!(res.table.cells[p].annulus, 2);
        }
    }

    #[test]
    fn chain_coloring_single_annulus() {
        let g = z2_omega();
        let chain = SubgroupChain::coordinate_prefixes(&g, 1).unwrap();
        let res = chain_three_coloring(&g, &chain).unwrap();
        assert_eq!(res.table.len(), 4);
        assert!(res.containments.passed());
    }

    #[test]
    fn census_on_chain_coloring() {
        let g = z2_omega();
        let chain = SubgroupChain::coordinate_prefixes(&g, 4).unwrap();
        let res = chain_three_coloring(&g, &chain).unwrap();
        let levels = chain.levels();
        for param in levels[2].difference(&levels[1]) {
            let line = LineSpec {
                kind: LineKind::Horizontal,
                parameter: param.clone(),
            };
            let c = line_census(&g, &res.table, &line).unwrap();
            assert_eq!(c.counts.iter().sum::<usize>(), 16);
            assert!(c.watched.iter().all(|(x, _)| levels[2].contains(x)));
        }
        let diag = LineSpec {
            kind: LineKind::Diagonal,
            parameter: g.identity(),
        };
        assert_eq!(line_census(&g, &res.table, &diag).unwrap().counts.iter().sum::<usize>(), 16);
    }
}
