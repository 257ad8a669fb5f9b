//! Bounded satisfiability search: enumerate structures in a canonical order
//! up to a world bound and return the first model of the formula. Sound but
//! incomplete: the logic has no finite-model property, so "no model within
//! the bound" never means unsatisfiable.
//!
//! Candidates are arbitrary structures. An enumerator restricted to
//! tree-with-back-edges shapes would likely reach satisfiable existential
//! formulas sooner; it would slot in behind the same interface.

use crate::checker::{CheckError, ModelChecker};
use crate::formula::{Category, Formula};
use crate::kripke::KripkeStructure;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("time limit exceeded")]
    TimeLimitExceeded,
    #[error(transparent)]
    Check(#[from] CheckError),
}

#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_worlds: usize,
    /// Cap on the number of distinct atoms used in candidate labelings;
    /// defaults to every atom of the formula.
    pub max_atoms: Option<usize>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn with_max_worlds(max_worlds: usize) -> Self {
        assert!(max_worlds >= 1);
        SearchBudget {
            max_worlds,
            max_atoms: None,
            time_limit: None,
        }
    }
}

/// Search for a model of `phi` with at most `budget.max_worlds` worlds.
/// Candidates are enumerated by world count, then edge sets in lexicographic
/// order, then labelings, with isomorph rejection by canonical adjacency
/// encoding (permutations fix the initial world), so the result is
/// deterministic and `None` answers are reproducible. Every returned model
/// is re-verified by the checker before being returned.
pub fn sat_search(
    phi: &Formula,
    budget: &SearchBudget,
) -> Result<Option<KripkeStructure>, SatError> {
    if phi.category() != Category::State {
        return Err(SatError::Check(CheckError::NotAStateFormula(
            phi.to_string(),
        )));
    }
    let mut atoms: Vec<String> = phi.atoms().into_iter().collect();
    if let Some(cap) = budget.max_atoms {
        atoms.truncate(cap);
    }
    let atom_set: BTreeSet<String> = atoms.iter().cloned().collect();
    let start = Instant::now();
    let mut checker = ModelChecker::new();

    for n in 1..=budget.max_worlds {
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let perms = permutations_fixing_zero(n);
        let mut edge_masks = vec![1u32; n];
        loop {
            if let Some(limit) = budget.time_limit {
                if start.elapsed() > limit {
                    return Err(SatError::TimeLimitExceeded);
                }
            }
            let mut label_masks = vec![0u32; n];
            loop {
                if is_canonical(&edge_masks, &label_masks, &perms) {
                    let succs: Vec<Vec<usize>> = edge_masks
                        .iter()
                        .map(|&m| (0..n).filter(|&j| m >> j & 1 == 1).collect())
                        .collect();
                    let labels: Vec<BTreeSet<String>> = label_masks
                        .iter()
                        .map(|&m| {
                            atoms
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| m >> i & 1 == 1)
                                .map(|(_, a)| a.clone())
                                .collect()
                        })
                        .collect();
                    let candidate = KripkeStructure::from_indexed(
                        names.clone(),
                        labels,
                        succs,
                        0,
                        atom_set.clone(),
                    )
                    .expect("enumerated structures are left-total");
                    if checker.check(&candidate, phi)?.0.truth {
                        return Ok(Some(candidate));
                    }
                }
                if !bump(&mut label_masks, 0, 1 << atoms.len()) {
                    break;
                }
            }
            if !bump(&mut edge_masks, 1, 1 << n) {
                break;
            }
        }
    }
    Ok(None)
}

fn bump(masks: &mut [u32], reset: u32, modulus: u32) -> bool {
    for m in masks.iter_mut().rev() {
        *m += 1;
        if *m < modulus {
            return true;
        }
        *m = reset;
    }
    false
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut out);
    out.into_iter()
        .map(|tail| {
            let mut p = vec![0];
            p.extend(tail);
            p
        })
        .filter(|p| p.iter().enumerate().any(|(i, &v)| i != v))
        .collect()
}

fn permute(items: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
    if at == items.len() {
        out.push(items.clone());
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, out);
        items.swap(at, i);
    }
}

/// A candidate is canonical when no initial-world-preserving permutation
/// produces a lexicographically smaller (edges, labels) encoding.
fn is_canonical(edge_masks: &[u32], label_masks: &[u32], perms: &[Vec<usize>]) -> bool {
    let n = edge_masks.len();
    'perms: for p in perms {
        // compare edge bits row-major: permuted(i,j) = original(p[i], p[j])
        for i in 0..n {
            for j in 0..n {
                let orig = edge_masks[i] >> j & 1;
                let perm = edge_masks[p[i]] >> p[j] & 1;
                if perm < orig {
                    return false;
                }
                if perm > orig {
                    continue 'perms;
                }
            }
        }
        for i in 0..n {
            let orig = label_masks[i];
            let perm = label_masks[p[i]];
            if perm < orig {
                return false;
            }
            if perm > orig {
                continue 'perms;
            }
        }
    }
    true
}
