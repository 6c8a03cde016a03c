//! Subset and radius grammars.
//!
//! Subsets:
//!
//! - `explicit {x, y, ...}`: listed elements, in the group's element syntax
//! - `evens`, `odds`, `multiples N`: by the first coordinate (or residue)
//! - `powers B`: `{B^n : n >= 0}` in `Z^1`
//! - `pairs B^n`: `{B^n, B^n + 1 : n >= 0}` in `Z^1`
//! - `random P`: each window element kept with probability `P`, drawn from the run seed
//! - `all`: the whole group
//! - `file PATH`: one element per line, `#` starts a comment
//!
//! Radii: `F8` (first 8 enumerated elements), `schedule K` (`F1, F2, F4, ..., F_{2^K}`),
//! or `{x, y, ...}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thinset::ballean::{default_schedule, ordinal_radius, Radius};
use thinset::subset::{Window, WindowedSubset};
use thinset::{Element, Group};

use crate::report::{Failure, Outcome};

fn grammar(line: usize, column: usize, msg: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("parse error at line {line}, column {column}: {msg}"))
}

/// Splits on top-level commas, keeping bracketed element syntax intact.
/// Returns `(byte offset, piece)` pairs.
fn split_top(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out.into_iter()
        .map(|(o, p)| (o + p.len() - p.trim_start().len(), p.trim()))
        .filter(|(_, p)| !p.is_empty())
        .collect()
}

/// Parses one element; `line`/`column` locate `text` in the original input.
fn element(g: &Group, text: &str, line: usize, column: usize) -> Outcome<Element> {
    g.parse_element(text).map_err(|e| match e {
        thinset::Error::Parse { column: c, message } => grammar(line, column + c - 1, message),
        other => grammar(line, column, other),
    })
}

/// `{x, y, ...}` starting at byte `offset` of a one-line input.
fn braced_list(g: &Group, text: &str, offset: usize) -> Outcome<Vec<Element>> {
    let t = text.trim();
    let lead = offset + text.len() - text.trim_start().len();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| grammar(1, lead + 1, "expected `{...}`"))?;
    split_top(inner)
        .into_iter()
        .map(|(o, p)| element(g, p, 1, lead + 2 + o))
        .collect()
}

fn first_coordinate(x: &Element) -> Option<i64> {
    match x {
        Element::Int(v) => v.first().copied(),
        Element::Mod(r) => i64::try_from(*r).ok(),
        _ => None,
    }
}

fn need_integers(g: &Group, what: &str) -> Outcome {
    let sample = g.identity();
    if first_coordinate(&sample).is_none() {
        return Err(Failure::Input(format!("`{what}` needs Z^d or Zmod n, not {g}")));
    }
    Ok(())
}

fn need_z1(g: &Group, what: &str) -> Outcome {
    if !matches!(g.identity(), Element::Int(ref v) if v.len() == 1) {
        return Err(Failure::Input(format!("`{what}` is defined on Z^1 only, not {g}")));
    }
    Ok(())
}

fn number<T: std::str::FromStr>(text: &str, column: usize) -> Outcome<T> {
    text.trim()
        .parse()
        .map_err(|_| grammar(1, column, format!("expected a number, found `{}`", text.trim())))
}

fn is_power(x: i64, base: i64) -> bool {
    let mut p = 1i64;
    while p < x {
        match p.checked_mul(base) {
            Some(q) => p = q,
            None => return false,
        }
    }
    p == x
}

pub fn parse_subset_spec(g: &Group, text: &str, window: Window, seed: u64) -> Outcome<WindowedSubset> {
    let t = text.trim_start();
    let lead = text.len() - t.len();
    let (word, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
    let arg_col = lead + word.len() + 2;
    let label = text.trim().to_string();
    let sub = match word {
        "explicit" => {
            let elems = braced_list(g, rest, lead + word.len() + 1)?;
            WindowedSubset::explicit(g, elems, window)?
        }
        "evens" | "odds" => {
            need_integers(g, word)?;
            let want = (word == "odds") as i64;
            WindowedSubset::predicate(
                g,
                label.clone(),
                move |x| first_coordinate(x).is_some_and(|v| v.rem_euclid(2) == want),
                window,
            )
        }
        "multiples" => {
            need_integers(g, word)?;
            let n: i64 = number(rest, arg_col)?;
            if n == 0 {
                return Err(grammar(1, arg_col, "multiples of 0"));
            }
            WindowedSubset::predicate(
                g,
                label.clone(),
                move |x| first_coordinate(x).is_some_and(|v| v.rem_euclid(n) == 0),
                window,
            )
        }
        "powers" => {
            need_z1(g, word)?;
            let b: i64 = number(rest, arg_col)?;
            if b < 2 {
                return Err(grammar(1, arg_col, "base must be at least 2"));
            }
            WindowedSubset::predicate(g, label.clone(), move |x| first_coordinate(x).is_some_and(|v| is_power(v, b)), window)
        }
        "pairs" => {
            need_z1(g, word)?;
            let base = rest
                .trim()
                .strip_suffix("^n")
                .ok_or_else(|| grammar(1, arg_col, "expected `B^n`"))?;
            let b: i64 = number(base, arg_col)?;
            if b < 2 {
                return Err(grammar(1, arg_col, "base must be at least 2"));
            }
            WindowedSubset::predicate(
                g,
                label.clone(),
                move |x| first_coordinate(x).is_some_and(|v| is_power(v, b) || is_power(v - 1, b)),
                window,
            )
        }
        "random" => {
            let p: f64 = number(rest, arg_col)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(grammar(1, arg_col, "probability must lie in [0, 1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let elems: Vec<Element> = window.elements().iter().filter(|_| rng.random_bool(p)).cloned().collect();
            WindowedSubset::explicit(g, elems, window)?
        }
        "all" => WindowedSubset::predicate(g, label.clone(), |_| true, window),
        "file" => {
            let path = rest.trim();
            let body = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            let mut elems = Vec::new();
            for (i, raw) in body.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("");
                if line.trim().is_empty() {
                    continue;
                }
                let col = line.len() - line.trim_start().len() + 1;
                elems.push(element(g, line.trim(), i + 1, col).map_err(|f| match f {
                    Failure::Input(m) => Failure::Input(format!("{path}: {m}")),
                    other => other,
                })?);
            }
            WindowedSubset::explicit(g, elems, window)?
        }
        "" => return Err(grammar(1, 1, "empty subset spec")),
        other => return Err(grammar(1, lead + 1, format!("unknown subset generator `{other}`"))),
    };
    Ok(sub.with_label(label))
}

/// One `--radius` value; `schedule K` expands to several radii.
pub fn parse_radius(g: &Group, text: &str) -> Outcome<Vec<(String, Radius)>> {
    let t = text.trim();
    if let Some(n) = t.strip_prefix('F') {
        let n: usize = number(n, 2)?;
        if n == 0 {
            return Err(grammar(1, 2, "F0 is empty; use F1 or more"));
        }
        return Ok(vec![(format!("F{n}"), ordinal_radius(g, n)?)]);
    }
    if let Some(k) = t.strip_prefix("schedule") {
        let k: u32 = number(k, 10)?;
        let radii = default_schedule(g, k)?;
        return Ok(radii
            .into_iter()
            .enumerate()
            .map(|(i, r)| (format!("F{}", 1usize << i), r))
            .collect());
    }
    if t.starts_with('{') {
        let elems = braced_list(g, text, 0)?;
        return Ok(vec![(t.to_string(), Radius::new(g, elems)?)]);
    }
    Err(grammar(1, 1, format!("expected `F<n>`, `schedule <k>` or `{{...}}`, found `{t}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Group {
        Group::lattice(1).unwrap()
    }

    #[test]
    fn generators() {
        let g = z();
        let w = Window::prefix(&g, 2001).unwrap();
        let ints = |s: &WindowedSubset| {
            let mut v: Vec<i64> = s.members().iter().map(|x| x.as_int().unwrap()).collect();
            v.sort();
            v
        };
        let s = parse_subset_spec(&g, "explicit {1,2,7}", w.clone(), 0).unwrap();
        assert_eq!(ints(&s), vec![1, 2, 7]);
        let s = parse_subset_spec(&g, "pairs 10^n", w.clone(), 0).unwrap();
        assert_eq!(ints(&s), vec![1, 2, 10, 11, 100, 101, 1000]);
        let s = parse_subset_spec(&g, "powers 3", w.clone(), 0).unwrap();
        assert_eq!(ints(&s), vec![1, 3, 9, 27, 81, 243, 729]);
        let s = parse_subset_spec(&g, "evens", w.clone(), 0).unwrap();
        assert!(s.contains(&Element::int(-4)) && !s.contains(&Element::int(3)));
        let s = parse_subset_spec(&g, "multiples 7", w.clone(), 0).unwrap();
        assert_eq!(s.members().len(), 2 * (1000 / 7) + 1);
        let a = parse_subset_spec(&g, "random 0.3", w.clone(), 9).unwrap();
        let b = parse_subset_spec(&g, "random 0.3", w, 9).unwrap();
        assert_eq!(a.members(), b.members());
    }

    #[test]
    fn errors_carry_positions() {
        let g = z();
        let w = Window::prefix(&g, 101).unwrap();
        let msg = |r: Outcome<WindowedSubset>| match r {
            Err(Failure::Input(m)) => m,
            _ => panic!("expected an input error"),
        };
        assert!(msg(parse_subset_spec(&g, "bogus", w.clone(), 0)).contains("column 1"));
        assert!(msg(parse_subset_spec(&g, "explicit {1, x}", w.clone(), 0)).contains("column 14"));
        assert!(msg(parse_subset_spec(&g, "explicit {1, 5000}", w.clone(), 0)).contains("window"));
        assert!(msg(parse_subset_spec(&Group::free(2).unwrap(), "evens", w, 0)).contains("Z^d"));
    }

    #[test]
    fn tuple_elements_survive_splitting() {
        let g = Group::lattice(2).unwrap();
        let w = Window::prefix(&g, 101).unwrap();
        let s = parse_subset_spec(&g, "explicit {(1,2), (0,-1)}", w, 0).unwrap();
        assert_eq!(s.members().len(), 2);
    }

    #[test]
    fn radii() {
        let g = z();
        assert_eq!(parse_radius(&g, "F8").unwrap()[0].1.len(), 8);
        let s = parse_radius(&g, "schedule 3").unwrap();
        assert_eq!(s.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>(), ["F1", "F2", "F4", "F8"]);
        assert_eq!(parse_radius(&g, "{0, 3}").unwrap()[0].1.len(), 2);
        assert!(parse_radius(&g, "G3").is_err());
    }
}
