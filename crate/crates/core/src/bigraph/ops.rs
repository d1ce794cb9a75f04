use super::{canonical_key, BigraphPair};
use crate::error::Result;

/// Prepends a chain of `k` edges (k even) to both graphs.
pub fn translate(p: &BigraphPair, k: usize) -> Result<BigraphPair> {
    p.translated(k)
}

/// Whether `p` is an extension of some even translate of `seed`.
pub fn starts_like(p: &BigraphPair, seed: &BigraphPair) -> bool {
    let (s1, s2) = (seed.first().depth(), seed.second().depth());
    let (p1, p2) = (p.first().depth(), p.second().depth());
    // Unless the seed is a chain, the translation is pinned by supertransitivity.
    let pinned = if seed.first().graph().is_chain() || seed.second().graph().is_chain() {
        None
    } else {
        match p.supertransitivity().checked_sub(seed.supertransitivity()) {
            Some(k) if k % 2 == 0 => Some(k),
            _ => return false,
        }
    };
    let mut k = 0;
    while s1 + k <= p1 && s2 + k <= p2 {
        if pinned.is_none_or(|j| j == k) && matches_translate(p, seed, k) {
            return true;
        }
        k += 2;
    }
    false
}

fn matches_translate(p: &BigraphPair, seed: &BigraphPair, k: usize) -> bool {
    let cut = p.truncated(seed.first().depth() + k, seed.second().depth() + k);
    let shifted = seed.translated(k).expect("k is even");
    let counts = |q: &BigraphPair| (q.first().graph().vertex_counts(), q.second().graph().vertex_counts());
    counts(&cut) == counts(&shifted) && canonical_key(&cut) == canonical_key(&shifted)
}
