//! Truth of a path formula on an ultimately periodic word.
//!
//! Positions 0..total form the unrolled word; the successor of the last
//! position wraps to `prefix_len`. Truth vectors are computed bottom-up per
//! subformula: `U`/`F` as least fixpoints and `G` as a greatest fixpoint of
//! their expansion laws, which is exact on the wrapped position graph.

use super::CheckError;
use crate::formula::Formula;
use std::collections::HashMap;

/// Supplies the truth of atoms and of embedded quantified state formulas at
/// each position of the word.
pub trait PositionContext {
    fn atom(&mut self, pos: usize, name: &str) -> Result<bool, CheckError>;
    fn quantified(&mut self, pos: usize, f: &Formula) -> Result<bool, CheckError>;
}

/// Evaluate `psi` at position 0 of the word described by `ctx`.
pub fn eval_path_formula(
    psi: &Formula,
    prefix_len: usize,
    total: usize,
    ctx: &mut dyn PositionContext,
) -> Result<bool, CheckError> {
    assert!(prefix_len < total, "the loop part must be nonempty");
    let succ = |i: usize| if i + 1 < total { i + 1 } else { prefix_len };
    let subs = psi.subformulas();
    let idx: HashMap<&Formula, usize> = subs.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut vals: Vec<Vec<bool>> = Vec::with_capacity(subs.len());

    for f in &subs {
        let v = |vals: &Vec<Vec<bool>>, g: &Formula, i: usize| vals[idx[g]][i];
        let row: Vec<bool> = match f {
            Formula::Atom(name) => (0..total)
                .map(|i| ctx.atom(i, name))
                .collect::<Result<_, _>>()?,
            Formula::True => vec![true; total],
            Formula::False => vec![false; total],
            Formula::Not(a) => (0..total).map(|i| !v(&vals, a, i)).collect(),
            Formula::And(a, b) => (0..total)
                .map(|i| v(&vals, a, i) && v(&vals, b, i))
                .collect(),
            Formula::Or(a, b) => (0..total)
                .map(|i| v(&vals, a, i) || v(&vals, b, i))
                .collect(),
            Formula::Implies(a, b) => (0..total)
                .map(|i| !v(&vals, a, i) || v(&vals, b, i))
                .collect(),
            Formula::ExistsPath(_)
            | Formula::ForallPath(_)
            | Formula::ExistsCycle(_)
            | Formula::ForallCycle(_)
            | Formula::SimpleExistsCycle(_) => (0..total)
                .map(|i| ctx.quantified(i, f))
                .collect::<Result<_, _>>()?,
            Formula::Next(a) => (0..total).map(|i| v(&vals, a, succ(i))).collect(),
            Formula::Until(a, b) => least_fixpoint(total, succ, |row, i| {
                v(&vals, b, i) || (v(&vals, a, i) && row[succ(i)])
            }),
            Formula::Finally(b) => {
                least_fixpoint(total, succ, |row, i| v(&vals, b, i) || row[succ(i)])
            }
            Formula::Globally(a) => {
                greatest_fixpoint(total, |row, i| v(&vals, a, i) && row[succ(i)])
            }
        };
        vals.push(row);
    }
    Ok(vals[idx[psi]][0])
}

fn least_fixpoint(
    total: usize,
    _succ: impl Fn(usize) -> usize,
    step: impl Fn(&[bool], usize) -> bool,
) -> Vec<bool> {
    let mut row = vec![false; total];
    loop {
        let mut changed = false;
        for i in (0..total).rev() {
            let nv = step(&row, i);
            if nv != row[i] {
                row[i] = nv;
                changed = true;
            }
        }
        if !changed {
            return row;
        }
    }
}

fn greatest_fixpoint(total: usize, step: impl Fn(&[bool], usize) -> bool) -> Vec<bool> {
    let mut row = vec![true; total];
    loop {
        let mut changed = false;
        for i in (0..total).rev() {
            let nv = step(&row, i);
            if nv != row[i] {
                row[i] = nv;
                changed = true;
            }
        }
        if !changed {
            return row;
        }
    }
}
