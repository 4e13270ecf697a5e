//! Persistent, structurally shared decision sequences.

use std::sync::Arc;

use crate::model::Decision;

#[derive(Debug)]
struct Link {
    decision: Decision,
    prev: Path,
}

/// An immutable list of decisions from the problem root. Extending a path
/// allocates one link and shares the whole prefix with its parent.
#[derive(Debug, Clone, Default)]
pub struct Path {
    head: Option<Arc<Link>>,
    len: usize,
}

impl Path {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&self, decision: Decision) -> Path {
        Path {
            head: Some(Arc::new(Link { decision, prev: self.clone() })),
            len: self.len + 1,
        }
    }

    /// Extends the path with several decisions, in order.
    pub fn extend(&self, decisions: impl IntoIterator<Item = Decision>) -> Path {
        decisions.into_iter().fold(self.clone(), |p, d| p.push(d))
    }

    /// Decisions from the root outwards.
    pub fn to_vec(&self) -> Vec<Decision> {
        let mut out = Vec::with_capacity(self.len);
        let mut cur = self.head.as_deref();
        while let Some(link) = cur {
            out.push(link.decision);
            cur = link.prev.head.as_deref();
        }
        out.reverse();
        out
    }
}
