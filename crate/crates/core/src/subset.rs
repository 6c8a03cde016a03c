//! Subsets of a group observed through a finite window.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Element, Group};

/// A finite list of group elements with positions. Prefix windows list the
/// first `n` enumerated elements, so "bounded" means "position < bound".
/// Cloning is cheap; the data is shared.
#[derive(Clone, Debug)]
pub struct Window {
    elements: Arc<[Element]>,
    index: Arc<HashMap<Element, usize>>,
}

impl Window {
    pub fn prefix(group: &Group, n: usize) -> Result<Self> {
        Ok(Self::from_elements(group.enumerate_prefix(n)?))
    }

    /// Whole group, for finite groups.
    pub fn full(group: &Group) -> Result<Self> {
        Ok(Self::from_elements(group.elements()?))
    }

    /// Explicit window; duplicates keep their first position.
    pub fn from_elements(elements: Vec<Element>) -> Self {
        let mut index = HashMap::with_capacity(elements.len());
        let mut kept = Vec::with_capacity(elements.len());
        for x in elements {
            if !index.contains_key(&x) {
                index.insert(x.clone(), kept.len());
                kept.push(x);
            }
        }
        Window {
            elements: kept.into(),
            index: Arc::new(index),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }
}

pub type Predicate = Arc<dyn Fn(&Element) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Membership {
    Finite(HashSet<Element>),
    Predicate(Predicate),
}

impl fmt::Debug for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Finite(s) => write!(f, "Finite({} elements)", s.len()),
            Membership::Predicate(_) => f.write_str("Predicate"),
        }
    }
}

/// A target subset `A ⊆ G`: membership is decidable everywhere, and every
/// scan runs over the window.
#[derive(Clone, Debug)]
pub struct WindowedSubset {
    group: Group,
    membership: Membership,
    window: Window,
    label: String,
}

impl WindowedSubset {
    /// Finite subset, required to lie inside the window.
    pub fn explicit(
        group: &Group,
        elements: impl IntoIterator<Item = Element>,
        window: Window,
    ) -> Result<Self> {
        let set: HashSet<Element> = elements.into_iter().collect();
        let mut sorted: Vec<&Element> = set.iter().collect();
        sorted.sort();
        for x in &sorted {
            if !group.contains(x) {
                return Err(Error::ForeignElement {
                    element: x.to_string(),
                    group: group.to_string(),
                });
            }
            if !window.contains(x) {
                return Err(Error::OutsideWindow(x.to_string()));
            }
        }
        let label = format!("explicit ({} elements)", set.len());
        Ok(WindowedSubset {
            group: group.clone(),
            membership: Membership::Finite(set),
            window,
            label,
        })
    }

    pub fn predicate(
        group: &Group,
        label: impl Into<String>,
        pred: impl Fn(&Element) -> bool + Send + Sync + 'static,
        window: Window,
    ) -> Self {
        WindowedSubset {
            group: group.clone(),
            membership: Membership::Predicate(Arc::new(pred)),
            window,
            label: label.into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn contains(&self, x: &Element) -> bool {
        match &self.membership {
            Membership::Finite(s) => s.contains(x),
            Membership::Predicate(p) => p(x),
        }
    }

    /// `A ∩ window` in window order.
    pub fn members(&self) -> Vec<Element> {
        self.window
            .elements()
            .iter()
            .filter(|x| self.contains(x))
            .cloned()
            .collect()
    }

    pub fn member_set(&self) -> BTreeSet<Element> {
        self.members().into_iter().collect()
    }

    /// A finite subset of the same group sharing this window.
    pub fn sibling(&self, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        WindowedSubset::explicit(&self.group, elements, self.window.clone())
    }

    /// Same membership, different window.
    pub fn rewindow(&self, window: Window) -> Self {
        WindowedSubset {
            group: self.group.clone(),
            membership: self.membership.clone(),
            window,
            label: self.label.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_must_fit_window() {
        let g = Group::lattice(1).unwrap();
        let w = Window::prefix(&g, 5).unwrap();
        assert!(WindowedSubset::explicit(&g, [Element::int(2)], w.clone()).is_ok());
        assert!(matches!(
            WindowedSubset::explicit(&g, [Element::int(3)], w),
            Err(Error::OutsideWindow(_))
        ));
    }

    #[test]
    fn predicate_members_follow_window_order() {
        let g = Group::lattice(1).unwrap();
        let w = Window::prefix(&g, 9).unwrap();
        let evens = WindowedSubset::predicate(&g, "evens", |x| x.as_int().unwrap() % 2 == 0, w);
        let got: Vec<i64> = evens.members().iter().map(|x| x.as_int().unwrap()).collect();
        assert_eq!(got, vec![0, 2, -2, 4, -4]);
        assert!(evens.contains(&Element::int(100)));
    }
}
