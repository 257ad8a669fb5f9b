//! Nondeterministic Büchi word automata over extended proposition alphabets,
//! products with Kripke structures, the cycle-anchor acceptance condition,
//! and emptiness with lasso extraction.

mod product;
mod tableau;

pub use product::{product, ProductGraph, ProductLasso};
pub use tableau::{closure_size, ltl_to_nba, Gnba, Nba};

use crate::kripke::{KripkeStructure, World};
use thiserror::Error;

/// A letter restricted to an automaton's alphabet support: bit `i` stands for
/// the automaton's `i`-th atom.
pub type Letter = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuchiError {
    #[error(
        "`{0}` contains a path quantifier; replace quantified subformulas by fresh atoms first"
    )]
    QuantifierNode(String),
    #[error("formula closure too large for automaton construction ({0} subformulas)")]
    ClosureTooLarge(usize),
}

/// An ultimately periodic path: `prefix · cycle^ω`. When `anchor` is set the
/// path witnesses cycle membership: it starts at the anchor and the loop
/// revisits it forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<World>,
    pub cycle: Vec<World>,
    pub anchor: Option<World>,
}

impl Lasso {
    /// Check the path invariants against a structure: consecutive pairs are
    /// edges, the loop closes, and an anchor (if any) is the first world of
    /// the path and recurs in the loop.
    pub fn validate(&self, k: &KripkeStructure) -> Result<(), String> {
        if self.cycle.is_empty() {
            return Err("empty loop".into());
        }
        let path: Vec<World> = self
            .prefix
            .iter()
            .chain(self.cycle.iter())
            .copied()
            .collect();
        for pair in path.windows(2) {
            if !k.has_edge(pair[0], pair[1]) {
                return Err(format!(
                    "missing edge {} -> {}",
                    k.name(pair[0]),
                    k.name(pair[1])
                ));
            }
        }
        let last = *self.cycle.last().unwrap();
        let first = self.cycle[0];
        if !k.has_edge(last, first) {
            return Err(format!(
                "loop does not close: missing edge {} -> {}",
                k.name(last),
                k.name(first)
            ));
        }
        if let Some(anchor) = self.anchor {
            if !self.cycle.contains(&anchor) {
                return Err(format!("anchor {} not inside the loop", k.name(anchor)));
            }
            let start = self.prefix.first().copied().unwrap_or(first);
            if start != anchor {
                return Err(format!(
                    "anchor {} is not the first world of the path",
                    k.name(anchor)
                ));
            }
        }
        Ok(())
    }

    /// Worlds of the unrolled word: prefix followed by one copy of the loop.
    pub fn positions(&self) -> Vec<World> {
        self.prefix
            .iter()
            .chain(self.cycle.iter())
            .copied()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_validation_catches_bad_shapes() {
        let k =
            KripkeStructure::assemble(&[("a", &[]), ("b", &[])], &[("a", "b"), ("b", "a")], "a")
                .unwrap();
        let a = k.world_named("a").unwrap();
        let b = k.world_named("b").unwrap();

        let good = Lasso {
            prefix: vec![],
            cycle: vec![a, b],
            anchor: Some(a),
        };
        assert!(good.validate(&k).is_ok());

        let open = Lasso {
            prefix: vec![a],
            cycle: vec![b, b],
            anchor: None,
        };
        assert!(open.validate(&k).is_err());

        let anchored_wrong = Lasso {
            prefix: vec![a],
            cycle: vec![b, a],
            anchor: Some(b),
        };
        assert!(anchored_wrong.validate(&k).is_err());
    }
}
