//! Sample structures and deterministic generators backing the test sweeps.

use crate::formula::Formula;
use crate::kripke::{KripkeStructure, ParityGame};
use std::collections::BTreeSet;

/// One world labeled {p} with a self loop.
pub fn self_loop() -> KripkeStructure {
    KripkeStructure::assemble(&[("a", &["p"])], &[("a", "a")], "a").unwrap()
}

/// a0 -> b <-> a1, every world labeled {p}; the initial world lies on no
/// cycle although the structure is bisimilar to the self loop.
pub fn chain() -> KripkeStructure {
    KripkeStructure::assemble(
        &[("a0", &["p"]), ("b", &["p"]), ("a1", &["p"])],
        &[("a0", "b"), ("b", "a1"), ("a1", "b")],
        "a0",
    )
    .unwrap()
}

/// Two-world ring labeled {p}, {q}.
pub fn ring2() -> KripkeStructure {
    KripkeStructure::assemble(
        &[("a", &["p"]), ("b", &["q"])],
        &[("a", "b"), ("b", "a")],
        "a",
    )
    .unwrap()
}

/// Three-world ring; only the initial world is labeled.
pub fn ring3() -> KripkeStructure {
    KripkeStructure::assemble(
        &[("a", &["p"]), ("b", &[]), ("c", &[])],
        &[("a", "b"), ("b", "c"), ("c", "a")],
        "a",
    )
    .unwrap()
}

/// Two simple loops sharing the hub w: w->x->w and w->y->w.
pub fn figure_eight() -> KripkeStructure {
    KripkeStructure::assemble(
        &[("w", &[]), ("x", &["px"]), ("y", &["py"])],
        &[("w", "x"), ("x", "w"), ("w", "y"), ("y", "w")],
        "w",
    )
    .unwrap()
}

/// Two processes and one scheduler: a start world, a decision world and one
/// loop per resource.
pub fn scheduler() -> KripkeStructure {
    KripkeStructure::assemble(
        &[
            ("s", &[]),
            ("d", &["dec"]),
            ("r1", &["res1"]),
            ("r2", &["res2"]),
        ],
        &[
            ("s", "d"),
            ("d", "r1"),
            ("r1", "d"),
            ("d", "r2"),
            ("r2", "d"),
        ],
        "s",
    )
    .unwrap()
}

/// The scheduler's correctness formulas: per-process cycle liveness and the
/// fairness consequence.
pub fn scheduler_spec() -> (Formula, Formula) {
    let phi = |mine: &str, other: &str| {
        Formula::exists_cycle(Formula::implies(
            Formula::and(
                Formula::atom("dec"),
                Formula::and(
                    Formula::not(Formula::atom(mine)),
                    Formula::globally(Formula::not(Formula::atom(other))),
                ),
            ),
            Formula::finally(Formula::atom(mine)),
        ))
    };
    let safety = Formula::forall_path(Formula::globally(Formula::implies(
        Formula::atom("dec"),
        Formula::and(phi("res1", "res2"), phi("res2", "res1")),
    )));
    let fairness = Formula::exists_path(Formula::and(
        Formula::globally(Formula::finally(Formula::atom("res1"))),
        Formula::globally(Formula::finally(Formula::atom("res2"))),
    ));
    (safety, fairness)
}

/// Player 1 owns every state and may delay the response priority 2 by
/// looping at priority 0 for as long as it likes.
pub fn delay_game() -> ParityGame {
    ParityGame::from_text(
        "state a 1 1\nstate c 1 0\nstate b 1 2\n\
         edge a c\nedge c c\nedge c b\nedge b a\n\
         init a\n",
    )
    .unwrap()
}

/// splitmix64; deterministic across platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }
}

/// Random structure with `1..=max_worlds` worlds over a declared atom
/// universe, sparse-ish transition relation.
pub fn random_kripke(rng: &mut Rng, max_worlds: usize, atoms: &[&str]) -> KripkeStructure {
    let n = 1 + rng.below(max_worlds);
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let labels: Vec<BTreeSet<String>> = (0..n)
        .map(|_| {
            atoms
                .iter()
                .filter(|_| rng.chance(1, 2))
                .map(|a| a.to_string())
                .collect()
        })
        .collect();
    let succs: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut out = vec![rng.below(n)];
            while rng.chance(1, 3) {
                out.push(rng.below(n));
            }
            out
        })
        .collect();
    KripkeStructure::from_indexed(
        names,
        labels,
        succs,
        0,
        atoms.iter().map(|a| a.to_string()).collect(),
    )
    .unwrap()
}

/// Random state formula of operator depth at most `depth`.
pub fn random_state_formula(rng: &mut Rng, depth: usize, atoms: &[&str]) -> Formula {
    if depth == 0 {
        return random_leaf(rng, atoms);
    }
    match rng.below(8) {
        0 => random_leaf(rng, atoms),
        1 => Formula::not(random_state_formula(rng, depth - 1, atoms)),
        2 => Formula::and(
            random_state_formula(rng, depth - 1, atoms),
            random_state_formula(rng, depth - 1, atoms),
        ),
        3 => Formula::or(
            random_state_formula(rng, depth - 1, atoms),
            random_state_formula(rng, depth - 1, atoms),
        ),
        4 => Formula::exists_path(random_path_formula(rng, depth - 1, atoms)),
        5 => Formula::forall_path(random_path_formula(rng, depth - 1, atoms)),
        6 => Formula::exists_cycle(random_path_formula(rng, depth - 1, atoms)),
        _ => Formula::forall_cycle(random_path_formula(rng, depth - 1, atoms)),
    }
}

pub fn random_path_formula(rng: &mut Rng, depth: usize, atoms: &[&str]) -> Formula {
    if depth == 0 {
        return random_leaf(rng, atoms);
    }
    match rng.below(9) {
        0 => random_leaf(rng, atoms),
        1 => Formula::not(random_path_formula(rng, depth - 1, atoms)),
        2 => Formula::and(
            random_path_formula(rng, depth - 1, atoms),
            random_path_formula(rng, depth - 1, atoms),
        ),
        3 => Formula::or(
            random_path_formula(rng, depth - 1, atoms),
            random_path_formula(rng, depth - 1, atoms),
        ),
        4 => Formula::next(random_path_formula(rng, depth - 1, atoms)),
        5 => Formula::finally(random_path_formula(rng, depth - 1, atoms)),
        6 => Formula::globally(random_path_formula(rng, depth - 1, atoms)),
        7 => Formula::until(
            random_path_formula(rng, depth - 1, atoms),
            random_path_formula(rng, depth - 1, atoms),
        ),
        _ => random_state_formula(rng, depth, atoms),
    }
}

fn random_leaf(rng: &mut Rng, atoms: &[&str]) -> Formula {
    if atoms.is_empty() || rng.chance(1, 8) {
        if rng.chance(1, 2) {
            Formula::True
        } else {
            Formula::False
        }
    } else {
        Formula::atom(atoms[rng.below(atoms.len())])
    }
}

/// Every structure with exactly `n` worlds over the given atoms, worlds named
/// w0..w(n-1) with w0 initial: all left-total successor assignments times all
/// labelings, in odometer order.
pub fn all_structures(n: usize, atoms: &[&str]) -> Vec<KripkeStructure> {
    assert!((1..=5).contains(&n));
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let atom_set: BTreeSet<String> = atoms.iter().map(|a| a.to_string()).collect();
    let mut out = Vec::new();
    let mut edge_masks = vec![1u32; n];
    loop {
        let succs: Vec<Vec<usize>> = edge_masks
            .iter()
            .map(|&m| (0..n).filter(|&j| m >> j & 1 == 1).collect())
            .collect();
        let mut label_masks = vec![0u32; n];
        loop {
            let labels: Vec<BTreeSet<String>> = label_masks
                .iter()
                .map(|&m| {
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| m >> i & 1 == 1)
                        .map(|(_, a)| a.to_string())
                        .collect()
                })
                .collect();
            out.push(
                KripkeStructure::from_indexed(
                    names.clone(),
                    labels,
                    succs.clone(),
                    0,
                    atom_set.clone(),
                )
                .unwrap(),
            );
            if !bump(&mut label_masks, 1 << atoms.len()) {
                break;
            }
        }
        if !bump_from(&mut edge_masks, 1, 1 << n) {
            break;
        }
    }
    out
}

/// Every structure with `1..=max_worlds` worlds.
pub fn all_structures_up_to(max_worlds: usize, atoms: &[&str]) -> Vec<KripkeStructure> {
    (1..=max_worlds)
        .flat_map(|n| all_structures(n, atoms))
        .collect()
}

fn bump(masks: &mut [u32], modulus: u32) -> bool {
    bump_from(masks, 0, modulus)
}

fn bump_from(masks: &mut [u32], start: u32, modulus: u32) -> bool {
    for m in masks.iter_mut().rev() {
        *m += 1;
        if *m < modulus {
            return true;
        }
        *m = start;
    }
    false
}

/// All state-formula shapes of tree height at most 2 over the single atom
/// `p`: operator trees with every leaf instantiated by the atom.
pub fn all_state_shapes_depth2() -> Vec<Formula> {
    let mut level: Vec<Formula> = vec![Formula::atom("p")];
    for _ in 0..2 {
        let mut next = level.clone();
        for f in &level {
            next.push(Formula::not(f.clone()));
            next.push(Formula::next(f.clone()));
            next.push(Formula::finally(f.clone()));
            next.push(Formula::globally(f.clone()));
            next.push(Formula::exists_path(f.clone()));
            next.push(Formula::forall_path(f.clone()));
            next.push(Formula::exists_cycle(f.clone()));
            next.push(Formula::forall_cycle(f.clone()));
        }
        for a in &level {
            for b in &level {
                next.push(Formula::and(a.clone(), b.clone()));
                next.push(Formula::or(a.clone(), b.clone()));
                next.push(Formula::implies(a.clone(), b.clone()));
                next.push(Formula::until(a.clone(), b.clone()));
            }
        }
        next.sort();
        next.dedup();
        level = next;
    }
    level.retain(|f| f.is_state_formula());
    level
}
