use std::collections::BTreeMap;

use crate::fact::{Fact, FactKey};
use crate::trace::{dedup_cap, TraceStyle};

/// One interpretation `I_n`: defined facts plus the unguarded ⊥ facts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub step: usize,
    pub facts: Vec<Fact>,
    pub bot_facts: Vec<Fact>,
}

impl Interpretation {
    pub fn empty() -> Self {
        Interpretation::default()
    }

    /// Facts followed by ⊥ facts; the rewrite sources for the next unfolding.
    pub fn sources(&self) -> Vec<Fact> {
        self.facts.iter().chain(&self.bot_facts).cloned().collect()
    }

    pub fn bot_free(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter().filter(|f| f.is_bot_free())
    }

    /// Same facts and ⊥ facts up to variable renaming; traces are ignored.
    pub fn same_facts(&self, other: &Interpretation) -> bool {
        let keys = |v: &[Fact]| v.iter().map(Fact::key).collect::<Vec<_>>();
        keys(&self.facts) == keys(&other.facts) && keys(&self.bot_facts) == keys(&other.bot_facts)
    }

    pub fn listing(&self, style: TraceStyle) -> Vec<String> {
        self.facts.iter().map(|f| f.display(style)).collect()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }
}

/// Canonicalizes, merges identical facts (concatenating their traces) and
/// sorts by canonical key.
pub fn normalize_facts(facts: impl IntoIterator<Item = Fact>, cap: usize) -> Vec<Fact> {
    let mut map: BTreeMap<FactKey, Fact> = BTreeMap::new();
    for f in facts {
        let f = f.canonical();
        match map.get_mut(&f.key()) {
            Some(existing) => {
                let merged = existing.traces.iter().cloned().chain(f.traces).collect::<Vec<_>>();
                existing.traces = dedup_cap(merged, cap);
            }
            None => {
                map.insert(f.key(), f);
            }
        }
    }
    map.into_values().collect()
}
