//! Browser bindings. Each export returns a JSON string; errors come back
//! as a thrown string.
//!
//! The `*_json` functions hold the logic so they can be tested natively.

use serde_json::json;
use thinset::ballean::default_schedule;
use thinset::cardinal::{mu_thin_partition_number, Cardinal, MuValue};
use thinset::coloring::chain_three_coloring;
use thinset::partition::{greedy_thin_partition, verify_partition, SubgroupChain};
use thinset::subset::{Window, WindowedSubset};
use thinset::{Element, Group, GroupSpec, Rank};
use wasm_bindgen::prelude::*;

/// Largest square the page will draw: `2^6 x 2^6` cells.
pub const MAX_DEPTH: usize = 6;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Chained 3-coloring of `G_n x G_n` in the countable direct sum of `Z_2`.
/// Cells are listed row by row in enumeration order.
pub fn color_square_json(depth: usize) -> Result<String, String> {
    if depth > MAX_DEPTH {
        return Err(format!("depth at most {MAX_DEPTH}"));
    }
    let g = Group::direct_sum(GroupSpec::Cyclic(2), Rank::Omega).map_err(err)?;
    let chain = SubgroupChain::coordinate_prefixes(&g, depth).map_err(err)?;
    let res = chain_three_coloring(&g, &chain).map_err(err)?;
    let order: Vec<Element> = g.enumerate_prefix(1 << depth).map_err(err)?;
    let mut colors = Vec::with_capacity(order.len() * order.len());
    for y in &order {
        for x in &order {
            let c = res.table.color(&(x.clone(), y.clone())).ok_or("cell outside the table")?;
            colors.push(c);
        }
    }
    let layers: Vec<Option<usize>> = order.iter().map(|x| chain.layer(x)).collect();
    Ok(json!({
        "side": order.len(),
        "labels": order.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "layers": layers,
        "colors": colors,
        "containments": res.containments.passed(),
    })
    .to_string())
}

/// Greedy split of a finite set of integers into `m` parts, each 1-thin
/// beyond an exempt prefix at every radius of the default schedule.
pub fn greedy_partition_json(points: &str, m: usize, window: usize) -> Result<String, String> {
    let g = Group::lattice(1).map_err(err)?;
    let w = Window::prefix(&g, window).map_err(err)?;
    let elems = points
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map(Element::int).map_err(|_| format!("not an integer: `{t}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let a = WindowedSubset::explicit(&g, elems, w).map_err(err)?;
    let sched = default_schedule(&g, 3).map_err(err)?;
    let res = greedy_thin_partition(&a, m, &sched, None).map_err(err)?;
    let mut checks = Vec::new();
    for (r, &b) in sched.iter().zip(&res.exempt_bounds) {
        checks.push(verify_partition(&a, &res.parts, r, 1, b).map_err(err)?.passed());
    }
    let parts: Vec<Vec<i64>> = res
        .parts
        .iter()
        .map(|p| p.iter().filter_map(Element::as_int).collect())
        .collect();
    Ok(json!({
        "parts": parts,
        "exempt_bounds": res.exempt_bounds,
        "radii": sched.iter().map(|r| r.len()).collect::<Vec<_>>(),
        "verified": checks,
    })
    .to_string())
}

/// `mu(G, kappa)` for aleph literals such as `aleph omega` or `aleph (omega*2+1)`.
pub fn mu_json(size_g: &str, kappa: &str) -> Result<String, String> {
    let g: Cardinal = size_g.parse().map_err(err)?;
    let k: Cardinal = kappa.parse().map_err(err)?;
    let r = mu_thin_partition_number(&g, &k).map_err(err)?;
    let value = match &r.value {
        MuValue::Exact(c) => json!([c.to_string()]),
        MuValue::Ambiguous(a, b) => json!([a.to_string(), b.to_string()]),
    };
    Ok(json!({"text": r.value.to_string(), "value": value, "branch": r.branch}).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn color_square(depth: usize) -> Result<String, JsValue> {
    js(color_square_json(depth))
}

#[wasm_bindgen]
pub fn greedy_partition(points: &str, m: usize, window: usize) -> Result<String, JsValue> {
    js(greedy_partition_json(points, m, window))
}

#[wasm_bindgen]
pub fn mu(size_g: &str, kappa: &str) -> Result<String, JsValue> {
    js(mu_json(size_g, kappa))
}

