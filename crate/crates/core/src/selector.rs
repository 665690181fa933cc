//! Selectors, k-permutations and isolation.

use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::{Error, Result};

/// A label from the universe `[0, N)`.
pub type Label = usize;

/// Universes up to this size store sets as dense bit vectors.
pub const DEFAULT_DENSE_THRESHOLD: usize = 1 << 14;

/// One set of a selector.
///
/// Dense sets answer membership in O(1); sparse sets keep a sorted label
/// list and answer by binary search.
#[derive(Clone, Debug)]
pub enum LabelSet {
    Dense(BitSet),
    Sparse(Vec<Label>),
}

impl LabelSet {
    /// `labels` must be sorted, deduplicated and inside `[0, universe)`.
    fn from_sorted(universe: usize, labels: Vec<Label>, dense_threshold: usize) -> Self {
        if universe <= dense_threshold {
            let mut bits = BitSet::new(universe);
            for &x in &labels {
                bits.insert(x);
            }
            LabelSet::Dense(bits)
        } else {
            LabelSet::Sparse(labels)
        }
    }

    #[inline]
    pub fn contains(&self, x: Label) -> bool {
        match self {
            LabelSet::Dense(bits) => bits.contains(x),
            LabelSet::Sparse(labels) => labels.binary_search(&x).is_ok(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LabelSet::Dense(bits) => bits.count(),
            LabelSet::Sparse(labels) => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Labels in increasing order.
    pub fn labels(&self) -> Vec<Label> {
        match self {
            LabelSet::Dense(bits) => bits.iter().collect(),
            LabelSet::Sparse(labels) => labels.clone(),
        }
    }
}

impl PartialEq for LabelSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels() == other.labels()
    }
}

impl Eq for LabelSet {}

/// Returns `x` when `set ∩ subset = {x}`.
///
/// `subset` is any slice of distinct labels.
pub fn isolates(set: &LabelSet, subset: &[Label]) -> Option<Label> {
    let mut hit = None;
    for &x in subset {
        if set.contains(x) {
            if hit.is_some() {
                return None;
            }
            hit = Some(x);
        }
    }
    hit
}

/// An ordered sequence of subsets of `[0, N)`; index order is time order.
#[derive(Clone, Debug)]
pub struct Selector {
    universe: usize,
    dense_threshold: usize,
    sets: Vec<LabelSet>,
}

impl Selector {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            sets: Vec::new(),
        }
    }

    /// Builds a selector from label lists in any order; duplicates inside a
    /// list are merged.
    pub fn new<I, S>(universe: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Label>,
    {
        Self::with_dense_threshold(universe, sets, DEFAULT_DENSE_THRESHOLD)
    }

    pub fn with_dense_threshold<I, S>(
        universe: usize,
        sets: I,
        dense_threshold: usize,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Label>,
    {
        let mut sel = Self {
            universe,
            dense_threshold,
            sets: Vec::new(),
        };
        for set in sets {
            sel.push(set)?;
        }
        Ok(sel)
    }

    /// Appends one set at the end of the time order.
    pub fn push<S: IntoIterator<Item = Label>>(&mut self, set: S) -> Result<()> {
        let mut labels: Vec<Label> = set.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        if let Some(&x) = labels.last() {
            if x >= self.universe {
                return Err(Error::LabelOutOfRange {
                    label: x,
                    universe: self.universe,
                });
            }
        }
        self.sets.push(LabelSet::from_sorted(
            self.universe,
            labels,
            self.dense_threshold,
        ));
        Ok(())
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[LabelSet] {
        &self.sets
    }

    /// The first `m` sets (all of them if `m >= len`).
    pub fn prefix(&self, m: usize) -> Selector {
        Selector {
            universe: self.universe,
            dense_threshold: self.dense_threshold,
            sets: self.sets[..m.min(self.sets.len())].to_vec(),
        }
    }

    /// Every isolation event of `subset`, in time order.
    pub fn isolation_trace(&self, subset: &[Label]) -> IsolationTrace {
        let events = self
            .sets
            .iter()
            .enumerate()
            .filter_map(|(t, s)| isolates(s, subset).map(|x| (t, x)))
            .collect();
        IsolationTrace { events }
    }

    /// Whether the selector isolates `instance.order()` in that order.
    pub fn isolates_permutation(&self, instance: &Instance) -> bool {
        let order = instance.order();
        let mut next = 0;
        for set in &self.sets {
            if next == order.len() {
                break;
            }
            if isolates(set, instance.subset()) == Some(order[next]) {
                next += 1;
            }
        }
        next == order.len()
    }
}

impl PartialEq for Selector {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.sets == other.sets
    }
}

impl Eq for Selector {}

/// Isolation events `(set_index, isolated_label)` with strictly increasing
/// `set_index`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsolationTrace {
    pub events: Vec<(usize, Label)>,
}

impl IsolationTrace {
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.events.iter().map(|&(_, x)| x)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// A k-subset `X` together with an ordering `π` of it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    subset: Vec<Label>,
    order: Vec<Label>,
}

impl Instance {
    /// The subset is the set of labels in `order`.
    pub fn new(order: Vec<Label>) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::InvalidParameter("instance must have k >= 1".into()));
        }
        let mut subset = order.clone();
        subset.sort_unstable();
        if let Some(w) = subset.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0]));
        }
        Ok(Self { subset, order })
    }

    /// Like [`Instance::new`] but also checks labels against a universe.
    pub fn within(universe: usize, order: Vec<Label>) -> Result<Self> {
        if let Some(&x) = order.iter().find(|&&x| x >= universe) {
            return Err(Error::LabelOutOfRange { label: x, universe });
        }
        Self::new(order)
    }

    pub(crate) fn from_parts(subset: Vec<Label>, order: Vec<Label>) -> Self {
        Self { subset, order }
    }

    /// `X`, sorted.
    pub fn subset(&self) -> &[Label] {
        &self.subset
    }

    /// `π = x_1, ..., x_k`.
    pub fn order(&self) -> &[Label] {
        &self.order
    }

    pub fn k(&self) -> usize {
        self.order.len()
    }
}
