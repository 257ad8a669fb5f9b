//! Independent brute-force evaluator realizing the path semantics directly:
//! path quantifiers enumerate ultimately periodic paths up to a length
//! bound and evaluate the body on each word. Meant for small structures;
//! this is the oracle the automata pipeline is checked against.
//!
//! Bodies are compiled once per quantifier into a temporal skeleton whose
//! leaves are maximal state subformulas; leaf truth is a function of the
//! world alone, so each candidate lasso costs a handful of bitmask
//! fixpoints over its positions.

use super::CheckError;
use crate::buchi::closure_size;
use crate::formula::{Category, Formula};
use crate::kripke::{KripkeStructure, World};
use std::collections::HashMap;

/// Effort limits for one `eval` query.
#[derive(Copy, Clone, Debug)]
pub struct OracleLimits {
    /// Cap on `|prefix| + |loop|` of enumerated lassos. The sound bound
    /// `2·|W|·2^(|cl|+1)` is astronomically safe but unusable; the default
    /// cap `2·|W| + 4` is what the agreement sweeps run with.
    pub max_lasso_len: Option<usize>,
    /// Cap on accumulated work (word positions × skeleton size) per query.
    pub work_cap: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_lasso_len: None,
            work_cap: 2_000_000_000,
        }
    }
}

#[derive(Copy, Clone)]
enum Quantifier {
    Exists,
    Forall,
    ExistsCycle,
    ForallCycle,
    ExistsSimpleCycle,
}

/// Temporal skeleton node; `Leaf` indexes a maximal state subformula.
enum Skel {
    Leaf(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    Until(usize, usize),
    Finally(usize),
    Globally(usize),
}

struct CompiledBody {
    nodes: Vec<Skel>,
    leaves: Vec<Formula>,
    /// truth of each leaf per world, filled before the search
    leaf_truth: Vec<Vec<bool>>,
}

impl CompiledBody {
    fn compile(body: &Formula) -> Self {
        let mut c = CompiledBody {
            nodes: Vec::new(),
            leaves: Vec::new(),
            leaf_truth: Vec::new(),
        };
        c.add(body);
        c
    }

    fn add(&mut self, f: &Formula) -> usize {
        if f.category() == Category::State {
            let li = match self.leaves.iter().position(|g| g == f) {
                Some(i) => i,
                None => {
                    self.leaves.push(f.clone());
                    self.leaves.len() - 1
                }
            };
            self.nodes.push(Skel::Leaf(li));
            return self.nodes.len() - 1;
        }
        let node = match f {
            Formula::Not(a) => Skel::Not(self.add(a)),
            Formula::And(a, b) => Skel::And(self.add(a), self.add(b)),
            Formula::Or(a, b) => Skel::Or(self.add(a), self.add(b)),
            Formula::Implies(a, b) => Skel::Implies(self.add(a), self.add(b)),
            Formula::Next(a) => Skel::Next(self.add(a)),
            Formula::Until(a, b) => Skel::Until(self.add(a), self.add(b)),
            Formula::Finally(a) => Skel::Finally(self.add(a)),
            Formula::Globally(a) => Skel::Globally(self.add(a)),
            _ => unreachable!("state formulas are leaves"),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Evaluate at position 0 of the word `seq` with the loop starting at
    /// `prefix_len`. Rows are position bitmasks; `U`/`F`/`G` are fixpoints
    /// of their expansion laws on the wrapped successor function.
    fn eval(&self, seq: &[World], prefix_len: usize, rows: &mut Vec<u32>) -> bool {
        let total = seq.len();
        debug_assert!(total <= 31 && prefix_len < total);
        let mask: u32 = (1 << total) - 1;
        let step = |row: u32| -> u32 {
            let wrap = row >> prefix_len & 1;
            (row >> 1 | wrap << (total - 1)) & mask
        };
        rows.clear();
        for node in &self.nodes {
            let row = match *node {
                Skel::Leaf(li) => {
                    let truth = &self.leaf_truth[li];
                    let mut r = 0u32;
                    for (i, w) in seq.iter().enumerate() {
                        r |= (truth[w.0] as u32) << i;
                    }
                    r
                }
                Skel::Not(a) => !rows[a] & mask,
                Skel::And(a, b) => rows[a] & rows[b],
                Skel::Or(a, b) => rows[a] | rows[b],
                Skel::Implies(a, b) => (!rows[a] | rows[b]) & mask,
                Skel::Next(a) => step(rows[a]),
                Skel::Until(a, b) => {
                    let mut r = 0u32;
                    loop {
                        let next = rows[b] | (rows[a] & step(r));
                        if next == r {
                            break r;
                        }
                        r = next;
                    }
                }
                Skel::Finally(b) => {
                    let mut r = 0u32;
                    loop {
                        let next = rows[b] | step(r);
                        if next == r {
                            break r;
                        }
                        r = next;
                    }
                }
                Skel::Globally(a) => {
                    let mut r = mask;
                    loop {
                        let next = rows[a] & step(r);
                        if next == r {
                            break r;
                        }
                        r = next;
                    }
                }
            };
            rows.push(row);
        }
        rows.last().unwrap() & 1 == 1
    }
}

/// Memoizing evaluator over one structure. Sharing one oracle across many
/// formulas reuses quantifier verdicts at each world.
pub struct Oracle<'a> {
    k: &'a KripkeStructure,
    limits: OracleLimits,
    memo: HashMap<(Formula, World), bool>,
    scratch: Vec<u32>,
    work: u64,
}

/// One-shot evaluation of a state formula at the initial world.
pub fn brute_force_eval(k: &KripkeStructure, phi: &Formula) -> Result<bool, CheckError> {
    Oracle::new(k).eval(phi)
}

impl<'a> Oracle<'a> {
    pub fn new(k: &'a KripkeStructure) -> Self {
        Self::with_limits(k, OracleLimits::default())
    }

    pub fn with_limits(k: &'a KripkeStructure, limits: OracleLimits) -> Self {
        Oracle {
            k,
            limits,
            memo: HashMap::new(),
            scratch: Vec::new(),
            work: 0,
        }
    }

    /// Evaluate a state formula at the initial world.
    pub fn eval(&mut self, phi: &Formula) -> Result<bool, CheckError> {
        self.work = 0;
        if phi.category() != Category::State {
            return Err(CheckError::NotAStateFormula(phi.to_string()));
        }
        self.eval_at(phi, self.k.initial())
    }

    /// Evaluate a state formula at a given world.
    pub fn eval_world(&mut self, phi: &Formula, w: World) -> Result<bool, CheckError> {
        self.work = 0;
        if phi.category() != Category::State {
            return Err(CheckError::NotAStateFormula(phi.to_string()));
        }
        self.eval_at(phi, w)
    }

    fn eval_at(&mut self, phi: &Formula, w: World) -> Result<bool, CheckError> {
        match phi {
            Formula::Atom(name) => {
                if !self.k.has_atom(name) {
                    return Err(CheckError::UnknownAtom(name.clone()));
                }
                Ok(self.k.holds(w, name))
            }
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Not(f) => Ok(!self.eval_at(f, w)?),
            Formula::And(a, b) => Ok(self.eval_at(a, w)? && self.eval_at(b, w)?),
            Formula::Or(a, b) => Ok(self.eval_at(a, w)? || self.eval_at(b, w)?),
            Formula::Implies(a, b) => Ok(!self.eval_at(a, w)? || self.eval_at(b, w)?),
            Formula::ExistsPath(body) => self.quantified(phi, body, w, Quantifier::Exists),
            Formula::ForallPath(body) => self.quantified(phi, body, w, Quantifier::Forall),
            Formula::ExistsCycle(body) => self.quantified(phi, body, w, Quantifier::ExistsCycle),
            Formula::ForallCycle(body) => self.quantified(phi, body, w, Quantifier::ForallCycle),
            Formula::SimpleExistsCycle(body) => {
                self.quantified(phi, body, w, Quantifier::ExistsSimpleCycle)
            }
            Formula::Next(_)
            | Formula::Until(_, _)
            | Formula::Finally(_)
            | Formula::Globally(_) => {
                unreachable!("temporal node outside a quantifier in a state formula")
            }
        }
    }

    fn quantified(
        &mut self,
        whole: &Formula,
        body: &Formula,
        w: World,
        kind: Quantifier,
    ) -> Result<bool, CheckError> {
        let key = (whole.clone(), w);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut compiled = CompiledBody::compile(body);
        for li in 0..compiled.leaves.len() {
            let leaf = compiled.leaves[li].clone();
            let mut row = Vec::with_capacity(self.k.world_count());
            for w2 in self.k.worlds() {
                row.push(self.eval_at(&leaf, w2)?);
            }
            compiled.leaf_truth.push(row);
        }
        let limit = self.lasso_limit(body);
        let result = match kind {
            // E ψ: some lasso word satisfies ψ.
            Quantifier::Exists => self.exists_lasso(&compiled, w, limit, true, false)?,
            // A ψ: no lasso word falsifies ψ.
            Quantifier::Forall => !self.exists_lasso(&compiled, w, limit, false, false)?,
            // EC ψ: some lasso whose loop revisits w satisfies ψ.
            Quantifier::ExistsCycle => self.exists_lasso(&compiled, w, limit, true, true)?,
            // AC ψ: no anchored lasso falsifies ψ; vacuously true off cycles.
            Quantifier::ForallCycle => !self.exists_lasso(&compiled, w, limit, false, true)?,
            Quantifier::ExistsSimpleCycle => {
                let mut seq = vec![w];
                self.exists_simple_cycle(&compiled, &mut seq)?
            }
        };
        self.memo.insert(key, result);
        Ok(result)
    }

    fn lasso_limit(&self, body: &Formula) -> usize {
        let n = self.k.world_count();
        let cl = closure_size(body);
        let theory: u64 = if cl + 1 >= 60 {
            u64::MAX
        } else {
            2 * n as u64 * (1u64 << (cl + 1))
        };
        let cap = self.limits.max_lasso_len.unwrap_or(2 * n + 4).min(31) as u64;
        theory.min(cap) as usize
    }

    fn charge(&mut self, positions: usize, size: usize) -> Result<(), CheckError> {
        self.work += (positions * size) as u64;
        if self.work > self.limits.work_cap {
            return Err(CheckError::BudgetExceeded);
        }
        Ok(())
    }

    /// DFS over legal tracks from `w`, closing a loop at every possible
    /// earlier position; true as soon as some candidate word evaluates to
    /// `target`. With `anchored`, only loops revisiting `w` count.
    fn exists_lasso(
        &mut self,
        c: &CompiledBody,
        w: World,
        limit: usize,
        target: bool,
        anchored: bool,
    ) -> Result<bool, CheckError> {
        let mut seq = vec![w];
        self.search_lasso(c, &mut seq, limit, target, anchored)
    }

    fn search_lasso(
        &mut self,
        c: &CompiledBody,
        seq: &mut Vec<World>,
        limit: usize,
        target: bool,
        anchored: bool,
    ) -> Result<bool, CheckError> {
        let last = *seq.last().unwrap();
        for j in 0..seq.len() {
            if !self.k.has_edge(last, seq[j]) {
                continue;
            }
            if anchored && !seq[j..].contains(&seq[0]) {
                continue;
            }
            self.charge(seq.len(), c.nodes.len())?;
            let mut rows = std::mem::take(&mut self.scratch);
            let sat = c.eval(seq, j, &mut rows);
            self.scratch = rows;
            if sat == target {
                return Ok(true);
            }
        }
        if seq.len() < limit {
            let succs: Vec<World> = self.k.successors(last).collect();
            for s in succs {
                seq.push(s);
                let found = self.search_lasso(c, seq, limit, target, anchored)?;
                seq.pop();
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Simple graph cycles through `seq[0]`, evaluated as anchored lassos
    /// with an empty prefix.
    fn exists_simple_cycle(
        &mut self,
        c: &CompiledBody,
        seq: &mut Vec<World>,
    ) -> Result<bool, CheckError> {
        let last = *seq.last().unwrap();
        if self.k.has_edge(last, seq[0]) {
            self.charge(seq.len(), c.nodes.len())?;
            let mut rows = std::mem::take(&mut self.scratch);
            let sat = c.eval(seq, 0, &mut rows);
            self.scratch = rows;
            if sat {
                return Ok(true);
            }
        }
        let succs: Vec<World> = self.k.successors(last).collect();
        for s in succs {
            if seq.contains(&s) {
                continue;
            }
            seq.push(s);
            let found = self.exists_simple_cycle(c, seq)?;
            seq.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
