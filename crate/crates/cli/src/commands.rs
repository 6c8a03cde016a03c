//! One function per subcommand. Each reads only the manifest.

use std::collections::{BTreeSet, HashSet};

use serde_json::json;
use thinset::ballean::Radius;
use thinset::cardinal::{mu_thin_partition_number, theorem4_predicate, Cardinal, MuValue};
use thinset::coloring::{chain_three_coloring, line_census, LineKind, LineSpec, IMPOSSIBILITY_NOTE};
use thinset::constructions::{
    count_translates_in, difference_identity_check, explain_collision, outside_summand_overlaps,
    pair_collision_set, pair_in_product, quadratic_point, ConstructionOutput, ConstructionSpec,
    IndexMode,
};
use thinset::partition::{greedy_thin_partition, ladder_partition, verify_partition, SubgroupChain};
use thinset::subset::{Window, WindowedSubset};
use thinset::thinness::{is_m_thin_window, lemma1_equivalence_check};
use thinset::{Element, Group, GroupSpec};

use crate::manifest::RunManifest;
use crate::report::{Failure, Outcome, Report};
use crate::spec::{parse_radius, parse_subset_spec};

pub const DEFAULT_WINDOW: usize = 10_000;
/// Brute-force translate counts scan the ambient group up to this order.
const BRUTE_LIMIT: u64 = 2_000_000;

pub fn run(man: &RunManifest, rep: &mut Report) -> Outcome {
    match man.command.as_str() {
        "check-thin" => check_thin(man, rep),
        "partition" => partition(man, rep),
        "color-square" => color_square(man, rep),
        "construct" => construct(man, rep),
        "mu" => mu(man, rep),
        other => Err(Failure::Input(format!("unknown command `{other}`"))),
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn group(man: &RunManifest) -> Outcome<Group> {
    let text = man.group.as_deref().ok_or_else(|| input("--group is required"))?;
    let spec: GroupSpec = text.parse()?;
    Ok(Group::new(spec)?)
}

/// Prefix window of the requested size; a finite group that fits is taken whole.
fn window(man: &RunManifest, g: &Group) -> Outcome<Window> {
    let n = man.window.unwrap_or(DEFAULT_WINDOW);
    match g.order() {
        Some(o) if (o as u128) <= n as u128 => Ok(Window::full(g)?),
        _ => Ok(Window::prefix(g, n)?),
    }
}

fn subset(man: &RunManifest, g: &Group, w: Window) -> Outcome<WindowedSubset> {
    let text = man.set.as_deref().ok_or_else(|| input("--set is required"))?;
    parse_subset_spec(g, text, w, man.seed)
}

fn radii(man: &RunManifest, g: &Group, default: &str) -> Outcome<Vec<(String, Radius)>> {
    let texts: Vec<&str> = if man.radius.is_empty() {
        vec![default]
    } else {
        man.radius.iter().map(String::as_str).collect()
    };
    let mut out = Vec::new();
    for t in texts {
        out.extend(parse_radius(g, t)?);
    }
    Ok(out)
}

fn preview(xs: &[Element], n: usize) -> String {
    let shown: Vec<String> = xs.iter().take(n).map(ToString::to_string).collect();
    let more = if xs.len() > n { ", ..." } else { "" };
    format!("{{{}{more}}}", shown.join(", "))
}

fn strings(xs: &[Element]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn check_thin(man: &RunManifest, rep: &mut Report) -> Outcome {
    let g = group(man)?;
    let radii = radii(man, &g, "schedule 3")?;
    let w = window(man, &g)?;
    let a = subset(man, &g, w)?;
    let m = man.m.unwrap_or(1);
    let bound = man.bound.unwrap_or(0);
    let members = a.members();
    rep.emit(
        "subset",
        json!({"group": g.to_string(), "set": a.label(), "window": a.window().len(), "members": members.len()}),
        format!("{} in {g}: {} members on a window of {}", a.label(), members.len(), a.window().len()),
    );
    for (label, r) in radii {
        let t = is_m_thin_window(&a, &r, m, bound)?;
        let first = t.violations_beyond_bound().next().cloned();
        let verdict = if t.is_consistent() { "consistent" } else { "violated" };
        let text = match &first {
            None => format!(
                "{label}: {m}-thin {verdict} (bound {bound}, minimal bound {}, {} exceptional points)",
                t.minimal_bound,
                t.exceptional.len()
            ),
            Some(v) => format!(
                "{label}: {m}-thin {verdict}: |Fx ∩ A| = {} at x = {} (window position {}, bound {bound})",
                v.count, v.point, v.position
            ),
        };
        rep.emit(
            "verdict",
            json!({
                "radius": label, "m": m, "window": t.window, "bound": bound, "verdict": verdict,
                "minimal_bound": t.minimal_bound, "violations": t.violations.len(),
                "exceptional": t.exceptional.len(), "witness": first,
            }),
            text,
        );
        if let Some(v) = first {
            rep.fail(format!("{label}: |Fx ∩ A| = {} at x = {}", v.count, v.point));
        }
        if man.flag("lemma1") {
            let l = lemma1_equivalence_check(&a, &r, m)?;
            rep.emit(
                "lemma1",
                json!({
                    "radius": label, "violators": l.violators.len(), "exceptional": l.exceptional.len(),
                    "exceptional_composed": l.exceptional_composed.len(), "cover": l.cover.len(),
                    "outside_cover": strings(&l.outside_cover), "outside_naive_cover": l.outside_naive_cover.len(),
                }),
                format!(
                    "{label}: {} violators, {} outside the cover B(Y, S) ({} outside the unsymmetrized cover)",
                    l.violators.len(),
                    l.outside_cover.len(),
                    l.outside_naive_cover.len()
                ),
            );
            if !l.agrees() {
                rep.fail(format!("{label}: violator {} outside the cover", l.outside_cover[0]));
            }
        }
    }
    Ok(())
}

fn emit_parts(rep: &mut Report, parts: &[Vec<Element>]) {
    for (i, p) in parts.iter().enumerate() {
        rep.emit(
            "part",
            json!({"index": i, "size": p.len(), "elements": strings(p)}),
            format!("  part {}: {} points {}", i + 1, p.len(), preview(p, 8)),
        );
    }
}

fn partition(man: &RunManifest, rep: &mut Report) -> Outcome {
    let g = group(man)?;
    let w = window(man, &g)?;
    let a = subset(man, &g, w)?;
    let m = man.m.ok_or_else(|| input("--m is required"))?;
    let sched = radii(man, &g, "schedule 4")?;
    let radii_only: Vec<Radius> = sched.iter().map(|(_, r)| r.clone()).collect();
    let method = man.opt("method").unwrap_or("greedy");
    match method {
        "greedy" => {
            let res = greedy_thin_partition(&a, m, &radii_only, man.bound)?;
            rep.emit(
                "partition",
                json!({"method": method, "m": m, "parts": res.colors_used(), "points": res.trace.len(), "exempt_bounds": res.exempt_bounds}),
                format!(
                    "greedy: {} points into {} parts (m = {m}); exempt prefixes {:?}",
                    res.trace.len(),
                    res.colors_used(),
                    res.exempt_bounds
                ),
            );
            emit_parts(rep, &res.parts);
            if res.colors_used() > m {
                rep.fail(format!("{} parts exceed m = {m}", res.colors_used()));
            }
            for ((label, r), &b) in sched.iter().zip(&res.exempt_bounds) {
                let check = verify_partition(&a, &res.parts, r, 1, b)?;
                let ok = check.passed();
                rep.emit(
                    "check",
                    json!({"radius": label, "bound": b, "passed": ok, "overlaps": check.overlaps.len(), "missing": check.missing.len()}),
                    format!("  {label}: every part 1-thin beyond position {b}: {}", if ok { "yes" } else { "NO" }),
                );
                if !ok {
                    rep.fail(format!("{label}: a part is not 1-thin beyond position {b}"));
                }
                if b >= a.window().len() {
                    rep.fail(format!("{label}: the exempt prefix covers the whole window, so A shows no {m}-thin tail"));
                }
            }
        }
        "ladder" => {
            let depth: usize = man
                .opt("depth")
                .ok_or_else(|| input("--depth is required for the ladder method"))?
                .parse()
                .map_err(|_| input("--depth must be a number"))?;
            let chain = SubgroupChain::coordinate_prefixes(&g, depth)?;
            let res = ladder_partition(&a, &chain, m, &radii_only)?;
            let audit = &res.audit;
            rep.emit(
                "partition",
                json!({
                    "method": method, "m": m, "parts": res.parts.len(), "translations": audit.translations,
                    "within_layer": audit.within_layer, "outside_exceptions": audit.outside_exceptions.len(),
                    "flagged": audit.flagged.len(),
                }),
                format!(
                    "ladder: {} parts (m = {m}, target m²); collision audit over {} translations: {} exceptions, {} flagged",
                    res.parts.len(),
                    audit.translations,
                    audit.outside_exceptions.len(),
                    audit.flagged.len()
                ),
            );
            emit_parts(rep, &res.parts);
            if !audit.passed() {
                rep.fail("chain collision audit");
            }
            let flat: Vec<&Element> = res.parts.iter().flatten().collect();
            let uniq: BTreeSet<Element> = flat.iter().map(|x| (*x).clone()).collect();
            if flat.len() != uniq.len() || uniq != a.member_set() {
                rep.fail("parts do not partition A");
            }
        }
        other => return Err(input(format!("unknown method `{other}` (greedy or ladder)"))),
    }
    Ok(())
}

fn color_square(man: &RunManifest, rep: &mut Report) -> Outcome {
    let g = group(man)?;
    let depth: usize = man.opt("depth").unwrap_or("4").parse().map_err(|_| input("--depth must be a number"))?;
    let chain = SubgroupChain::coordinate_prefixes(&g, depth)?;
    let res = chain_three_coloring(&g, &chain)?;
    let c = &res.containments;
    rep.emit(
        "coloring",
        json!({
            "pairs": res.table.len(), "chain_orders": res.chain_orders,
            "horizontal": c.horizontal.len(), "vertical": c.vertical.len(),
            "cross": c.cross.len(), "diagonal": c.diagonal.len(),
            "palette_violations": res.table.palette_violations().len(),
        }),
        format!(
            "3-coloring of G_{depth} x G_{depth} ({} pairs, chain orders {:?}): containment failures h={} v={} cross={} diag={}",
            res.table.len(),
            res.chain_orders,
            c.horizontal.len(),
            c.vertical.len(),
            c.cross.len(),
            c.diagonal.len()
        ),
    );
    if !c.passed() {
        rep.fail("containments");
    }
    if man.flag("cells") {
        for (x, y, color, region) in res.table.quadruples() {
            rep.emit("cell", json!({"x": x, "y": y, "color": color, "region": region}), format!("  ({x}, {y}) -> {color} [{region:?}]"));
        }
    }
    if man.flag("verify-lines") {
        let levels = chain.levels();
        let mut checked = 0;
        for param in chain.top() {
            let Some(alpha) = chain.layer(param) else { continue };
            let block = &levels[alpha + 1];
            for kind in [LineKind::Horizontal, LineKind::Vertical, LineKind::Diagonal] {
                let line = LineSpec {
                    kind,
                    parameter: param.clone(),
                };
                let census = line_census(&g, &res.table, &line)?;
                let stray: Vec<&(Element, Element)> = census
                    .watched
                    .iter()
                    .filter(|(x, y)| match kind {
                        LineKind::Horizontal => !block.contains(x),
                        LineKind::Vertical => !block.contains(y),
                        LineKind::Diagonal => !(block.contains(x) && block.contains(y)),
                    })
                    .collect();
                checked += 1;
                rep.emit(
                    "line",
                    json!({"kind": format!("{kind:?}"), "parameter": param.to_string(), "block": alpha + 1, "counts": census.counts, "stray": stray.len()}),
                    String::new(),
                );
                if let Some((x, y)) = stray.first() {
                    rep.fail(format!("{kind:?} line at {param}: ({x}, {y}) lies outside G_{}", alpha + 1));
                }
            }
        }
        rep.text(format!("line census: {checked} lines, watched colors inside their G_(α+1) blocks"));
    }
    rep.text(format!("note: {IMPOSSIBILITY_NOTE}"));
    Ok(())
}

fn construction_spec(man: &RunManifest) -> Outcome<ConstructionSpec> {
    if let Some(s) = &man.construction {
        return Ok(s.clone());
    }
    Err(input("no construction given"))
}

fn summarize(out: &ConstructionOutput, rep: &mut Report) {
    let a = &out.audit;
    rep.emit(
        "construction",
        json!({
            "ambient": out.ambient.to_string(), "points": out.len(), "exclusions": out.exclusions,
            "values_distinct": a.values_distinct, "sidon": a.sidon, "inverse_free": a.inverse_free,
            "collisions": a.collisions.len(), "coincidences": a.coincidences.len(),
        }),
        format!(
            "{} points in {}; audit: distinct={} sidon={:?} inverse-free={} coincidences={}",
            out.len(),
            out.ambient,
            a.values_distinct,
            a.sidon,
            a.inverse_free,
            a.coincidences.len()
        ),
    );
}

fn construct(man: &RunManifest, rep: &mut Report) -> Outcome {
    let spec = construction_spec(man)?;
    let verify = man.opt("verify").unwrap_or("none");
    let applies = match &spec {
        ConstructionSpec::Triples { .. } => "translate-count",
        ConstructionSpec::Quadratic { .. } => "collisions",
        ConstructionSpec::DirectSum { .. } => "overlaps",
    };
    if !matches!(verify, "none" | "all") && verify != applies {
        return Err(input(format!("--verify {verify} does not apply here; use {applies}")));
    }
    let out = spec.build()?;
    summarize(&out, rep);
    if man.flag("list") {
        for x in &out.elements {
            rep.emit("element", json!({"element": x.to_string()}), format!("  {x}"));
        }
    }
    if verify == "none" {
        return Ok(());
    }
    match &spec {
        ConstructionSpec::Triples { h, mode, .. } => translate_counts(&out, h, *mode, rep),
        ConstructionSpec::Quadratic { m, .. } => collisions(&out, *m, rep),
        ConstructionSpec::DirectSum { .. } => {
            overlaps(&out, rep);
            Ok(())
        }
    }
}

fn translate_counts(out: &ConstructionOutput, h: &GroupSpec, mode: IndexMode, rep: &mut Report) -> Outcome {
    let expect = match mode {
        IndexMode::Ordered => 6,
        IndexMode::Unordered => 3,
    };
    let hg = Group::new(h.clone())?;
    let hs = hg.elements()?;
    let ambient = &out.ambient;
    let kzero = ambient.factors().expect("product ambient")[1].identity();
    let brute_pool = match ambient.order() {
        Some(o) if o <= BRUTE_LIMIT => Some(ambient.elements()?),
        _ => None,
    };
    let a: HashSet<&Element> = out.elements.iter().collect();
    let nonid: Vec<&Element> = hs.iter().filter(|x| !hg.is_identity(x)).collect();
    for (i, x) in nonid.iter().enumerate() {
        for y in &nonid[i + 1..] {
            let f: Vec<Element> = [hg.identity(), (*x).clone(), (*y).clone()]
                .iter()
                .map(|t| pair_in_product(t, &kzero))
                .collect();
            let got = count_translates_in(&f, out)?.count;
            let brute = brute_pool.as_ref().map(|pool| {
                pool.iter()
                    .filter(|t| f.iter().all(|s| a.contains(&ambient.mul(s, t))))
                    .count()
            });
            rep.emit(
                "translates",
                json!({"F": [hg.identity().to_string(), x.to_string(), y.to_string()], "count": got, "brute_force": brute, "expected": expect}),
                format!(
                    "F = {{e, {x}, {y}}}: {got} translates{}",
                    brute.map_or(String::new(), |b| format!(" (brute force {b})"))
                ),
            );
            if got != expect || brute.is_some_and(|b| b != got) {
                rep.fail(format!("F = {{e, {x}, {y}}} gives {got}, expected {expect}"));
            }
        }
    }
    Ok(())
}

fn collisions(out: &ConstructionOutput, m: u32, rep: &mut Report) -> Outcome {
    let idx = &out.indexing[0];
    let g = &out.ambient;
    let kzero = g.factors().expect("product ambient")[0].identity();
    let (mut probes, mut hits, mut identities) = (0usize, 0usize, 0usize);
    for (p, (a, b)) in idx.pairs.iter().enumerate() {
        let (Element::Rat(av), Element::Rat(bv)) = (a, b) else {
            return Err(input("quadratic pairs must be rational vectors"));
        };
        if a.is_zero_rat() && b.is_zero_rat() {
            continue;
        }
        for k in 0..=m {
            for l in (0..=m).filter(|&l| l != k) {
                identities += 1;
                if !difference_identity_check(out, p, k, l)? {
                    rep.fail(format!("pair {p}: difference identity fails for ({k}, {l})"));
                }
            }
        }
        let shift = |t: u32| pair_in_product(&kzero, &quadratic_point(av, bv, t as i64));
        for i in 0..=m {
            for j in i + 1..=m {
                for k in j + 1..=m {
                    let x = g.mul(&shift(j), &g.inv(&shift(i)));
                    let y = g.mul(&shift(k), &g.inv(&shift(i)));
                    if g.is_identity(&x) || g.is_identity(&y) || x == y {
                        continue;
                    }
                    probes += 1;
                    let found = pair_collision_set(out, &x, &y)?;
                    let base = pair_in_product(&idx.values[p], &quadratic_point(av, bv, i as i64));
                    if !found.contains(&base) {
                        rep.fail(format!("pair {p}: known collision at index {i} missing"));
                    }
                    hits += found.len();
                    for t in &found {
                        if explain_collision(out, t, &x, &y).is_none() {
                            rep.fail(format!("collision {t} for shifts ({x}, {y}) is unexplained"));
                        }
                    }
                }
            }
        }
    }
    rep.emit(
        "collisions",
        json!({"probes": probes, "hits": hits, "difference_identities": identities}),
        format!(
            "collision sets: {probes} probes, {hits} points, each explained by a distinct-index triple; \
             {identities} difference identities hold"
        ),
    );
    Ok(())
}

fn overlaps(out: &ConstructionOutput, rep: &mut Report) {
    let r = outside_summand_overlaps(out);
    rep.emit(
        "overlaps",
        json!({"checked": r.checked, "max_overlap": r.max_overlap, "violations": r.violations.len()}),
        format!(
            "{} shifts outside every summand; max |A ∩ (A + x)| = {}",
            r.checked, r.max_overlap
        ),
    );
    if !r.violations.is_empty() {
        rep.fail(format!("{} shifts with overlap above 1", r.violations.len()));
    }
}

fn cardinal(man: &RunManifest, key: &str) -> Outcome<Cardinal> {
    let text = man.opt(key).ok_or_else(|| input(format!("--{key} is required")))?;
    Ok(text.parse()?)
}

fn mu(man: &RunManifest, rep: &mut Report) -> Outcome {
    let size = cardinal(man, "sizeG")?;
    let kappa = cardinal(man, "kappa")?;
    let res = mu_thin_partition_number(&size, &kappa)?;
    let value = match &res.value {
        MuValue::Exact(c) => json!({"exact": c.to_string()}),
        MuValue::Ambiguous(a, b) => json!({"one_of": [a.to_string(), b.to_string()]}),
    };
    rep.emit(
        "mu",
        json!({"sizeG": size.to_string(), "kappa": kappa.to_string(), "value": value, "branch": res.branch}),
        res.value.to_string(),
    );
    rep.text(format!("(formula case {})", res.branch));
    if man.opt("gamma").is_some() {
        let gamma = cardinal(man, "gamma")?;
        let p = theorem4_predicate(&gamma, &size)?;
        rep.emit(
            "successor",
            json!({"gamma": gamma.to_string(), "sizeG": size.to_string(), "holds": p}),
            format!("|G| = gamma^+ : {p}"),
        );
    }
    Ok(())
}
