//! Tableau translation from quantifier-free path formulas to Büchi automata.
//!
//! States are the locally consistent truth assignments over the subformula
//! closure; transitions enforce the one-step expansion laws of X, U, F and G;
//! one accepting set per U/F subformula forces fulfillment, and a counter
//! construction collapses the generalized condition to a single set.

use super::{BuchiError, Letter};
use crate::formula::Formula;
use std::collections::HashMap;

/// Largest subformula count we are willing to enumerate assignments for.
const MAX_CLOSURE: usize = 25;

/// Generalized Büchi automaton. A transition on letter `σ` exists from `q`
/// iff `σ` restricted to `atoms` equals `reads[q]` and the target is in
/// `succs[q]`; i.e. the letter is read at the source state.
#[derive(Clone, Debug)]
pub struct Gnba {
    pub atoms: Vec<String>,
    pub reads: Vec<Letter>,
    pub succs: Vec<Vec<usize>>,
    pub initial: Vec<usize>,
    pub accept: Vec<Vec<bool>>,
}

/// Büchi automaton with a single accepting set; same transition encoding.
#[derive(Clone, Debug)]
pub struct Nba {
    pub atoms: Vec<String>,
    pub reads: Vec<Letter>,
    pub succs: Vec<Vec<usize>>,
    pub initial: Vec<usize>,
    pub accept: Vec<bool>,
}

impl Gnba {
    pub fn state_count(&self) -> usize {
        self.reads.len()
    }

    /// Counter-based degeneralization; the single-set case is returned as is.
    pub fn degeneralize(&self) -> Nba {
        let m = self.accept.len();
        assert!(m >= 1);
        if m == 1 {
            return Nba {
                atoms: self.atoms.clone(),
                reads: self.reads.clone(),
                succs: self.succs.clone(),
                initial: self.initial.clone(),
                accept: self.accept[0].clone(),
            };
        }
        // node = (state, counter); waiting for accept set `counter`.
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        for &q in &self.initial {
            let key = (q, 0);
            if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(key) {
                e.insert(order.len());
                order.push(key);
                queue.push_back(key);
            }
        }
        let mut succs: Vec<Vec<usize>> = Vec::new();
        succs.resize(order.len(), Vec::new());
        while let Some((q, i)) = queue.pop_front() {
            let from = ids[&(q, i)];
            let j = if self.accept[i][q] { (i + 1) % m } else { i };
            for &q2 in &self.succs[q] {
                let key = (q2, j);
                let to = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = order.len();
                        ids.insert(key, t);
                        order.push(key);
                        succs.push(Vec::new());
                        queue.push_back(key);
                        t
                    }
                };
                if succs.len() < order.len() {
                    succs.resize(order.len(), Vec::new());
                }
                succs[from].push(to);
            }
        }
        let reads = order.iter().map(|&(q, _)| self.reads[q]).collect();
        let accept = order
            .iter()
            .map(|&(q, i)| i == 0 && self.accept[0][q])
            .collect();
        let initial = self.initial.iter().map(|&q| ids[&(q, 0)]).collect();
        let nba = Nba {
            atoms: self.atoms.clone(),
            reads,
            succs,
            initial,
            accept,
        };
        assert!(nba.state_count() <= m * self.state_count());
        nba
    }
}

impl Nba {
    pub fn state_count(&self) -> usize {
        self.reads.len()
    }

    /// Restrict a label set to this automaton's alphabet support.
    pub fn letter_from(&self, holds: impl Fn(&str) -> bool) -> Letter {
        let mut letter = 0;
        for (i, atom) in self.atoms.iter().enumerate() {
            if holds(atom) {
                letter |= 1 << i;
            }
        }
        letter
    }
}

/// Subformula closure size counting each subformula and its negation once
/// (double negations collapsed).
pub fn closure_size(psi: &Formula) -> usize {
    let subs = psi.subformulas();
    let mut set: std::collections::HashSet<Formula> = std::collections::HashSet::new();
    for s in subs {
        match s {
            Formula::Not(inner) => {
                set.insert((**inner).clone());
                set.insert(s.clone());
            }
            _ => {
                set.insert(s.clone());
                set.insert(Formula::not(s.clone()));
            }
        }
    }
    set.len()
}

/// Translate a quantifier-free path formula to a Büchi automaton whose
/// language is exactly the set of words satisfying it. The state count is
/// bounded by `2^(|closure|+1)`, which is asserted.
pub fn ltl_to_nba(psi: &Formula) -> Result<Nba, BuchiError> {
    let subs: Vec<&Formula> = psi.subformulas();
    if let Some(q) = subs.iter().find(|f| f.is_quantifier()) {
        return Err(BuchiError::QuantifierNode(q.to_string()));
    }
    if subs.len() > MAX_CLOSURE {
        return Err(BuchiError::ClosureTooLarge(subs.len()));
    }
    let idx: HashMap<&Formula, usize> = subs.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let bit = |mask: u64, f: &Formula| mask >> idx[f] & 1 == 1;

    let mut atoms: Vec<String> = psi.atoms().into_iter().collect();
    atoms.sort();
    let atom_positions: Vec<usize> = atoms
        .iter()
        .map(|a| idx[&Formula::Atom(a.clone())])
        .collect();

    let consistent = |mask: u64| -> bool {
        subs.iter().enumerate().all(|(i, f)| {
            let v = mask >> i & 1 == 1;
            match f {
                Formula::True => v,
                Formula::False => !v,
                Formula::Not(x) => v != bit(mask, x),
                Formula::And(a, b) => v == (bit(mask, a) && bit(mask, b)),
                Formula::Or(a, b) => v == (bit(mask, a) || bit(mask, b)),
                Formula::Implies(a, b) => v == (!bit(mask, a) || bit(mask, b)),
                Formula::Until(a, b) => {
                    (!bit(mask, b) || v) && (!(v && !bit(mask, b)) || bit(mask, a))
                }
                Formula::Finally(b) => !bit(mask, b) || v,
                Formula::Globally(a) => !v || bit(mask, a),
                _ => true,
            }
        })
    };

    let states: Vec<u64> = (0u64..1 << subs.len()).filter(|&m| consistent(m)).collect();

    let one_step = |q: u64, q2: u64| -> bool {
        subs.iter().all(|f| match f {
            Formula::Next(a) => bit(q, f) == bit(q2, a),
            Formula::Until(a, b) => bit(q, f) == (bit(q, b) || (bit(q, a) && bit(q2, f))),
            Formula::Finally(b) => bit(q, f) == (bit(q, b) || bit(q2, f)),
            Formula::Globally(a) => bit(q, f) == (bit(q, a) && bit(q2, f)),
            _ => true,
        })
    };

    let succs: Vec<Vec<usize>> = states
        .iter()
        .map(|&q| {
            states
                .iter()
                .enumerate()
                .filter(|&(_, &q2)| one_step(q, q2))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let initial: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|&(_, &q)| bit(q, psi))
        .map(|(j, _)| j)
        .collect();

    let reads: Vec<Letter> = states
        .iter()
        .map(|&q| {
            let mut letter = 0;
            for (a, &pos) in atom_positions.iter().enumerate() {
                if q >> pos & 1 == 1 {
                    letter |= 1 << a;
                }
            }
            letter
        })
        .collect();

    // One fulfillment set per eventuality: an asserted U/F must see its goal,
    // a denied G must see the negation of its body.
    let mut accept: Vec<Vec<bool>> = Vec::new();
    for f in &subs {
        match f {
            Formula::Until(_, b) | Formula::Finally(b) => {
                accept.push(states.iter().map(|&q| !bit(q, f) || bit(q, b)).collect());
            }
            Formula::Globally(a) => {
                accept.push(states.iter().map(|&q| bit(q, f) || !bit(q, a)).collect());
            }
            _ => {}
        }
    }
    if accept.is_empty() {
        accept.push(vec![true; states.len()]);
    }

    let gnba = Gnba {
        atoms,
        reads,
        succs,
        initial,
        accept,
    };
    let nba = gnba.degeneralize();

    let cl = closure_size(psi);
    if cl + 1 < 63 {
        assert!(
            (nba.state_count() as u64) <= 1u64 << (cl + 1),
            "automaton for `{psi}` has {} states, above the 2^(|cl|+1) bound",
            nba.state_count()
        );
    }
    Ok(nba)
}
