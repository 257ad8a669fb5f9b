//! Bisimulation utilities: greatest-fixpoint standard bisimulation between
//! two structures, the bounded projection check that a generated unwinding
//! prefix is cycle-bisimilar to its source, and a world-splitting generator
//! of cycle-bisimilar pairs.

use super::{TreeWithBackEdges, UnwindError};
use crate::kripke::{KripkeStructure, World};
use std::collections::BTreeSet;

/// Coarsest relation satisfying the label/forth/back clauses, computed by
/// refining the label-compatible relation to a fixpoint. `None` when the
/// initial worlds end up unrelated.
pub fn find_standard_bisimulation(
    k1: &KripkeStructure,
    k2: &KripkeStructure,
) -> Option<BTreeSet<(World, World)>> {
    let mut rel: BTreeSet<(World, World)> = k1
        .worlds()
        .flat_map(|w1| k2.worlds().map(move |w2| (w1, w2)))
        .filter(|&(w1, w2)| k1.labels(w1) == k2.labels(w2))
        .collect();
    loop {
        let keep: BTreeSet<(World, World)> = rel
            .iter()
            .copied()
            .filter(|&(w1, w2)| {
                let forth = k1
                    .successors(w1)
                    .all(|v1| k2.successors(w2).any(|v2| rel.contains(&(v1, v2))));
                let back = k2
                    .successors(w2)
                    .all(|v2| k1.successors(w1).any(|v1| rel.contains(&(v1, v2))));
                forth && back
            })
            .collect();
        if keep.len() == rel.len() {
            break;
        }
        rel = keep;
    }
    if rel.contains(&(k1.initial(), k2.initial())) {
        Some(rel)
    } else {
        None
    }
}

/// Split a non-initial world in two: the copy receives the same labels, the
/// same in-edges and the same out-edges. The relation identifying the copy
/// with the original is a cycle-bisimulation, so verdicts are preserved.
pub fn duplicate_world(k: &KripkeStructure, w: World) -> Result<KripkeStructure, UnwindError> {
    if w == k.initial() {
        return Err(UnwindError::CannotDuplicateInitial);
    }
    let n = k.world_count();
    let mut names: Vec<String> = k.worlds().map(|x| k.name(x).to_string()).collect();
    let mut copy_name = format!("{}_dup", k.name(w));
    while names.contains(&copy_name) {
        copy_name.push_str("_dup");
    }
    names.push(copy_name);
    let mut labels: Vec<BTreeSet<String>> = k.worlds().map(|x| k.labels(x).clone()).collect();
    labels.push(k.labels(w).clone());
    let mut succs: Vec<Vec<usize>> = k
        .worlds()
        .map(|x| k.successors(x).map(|y| y.0).collect())
        .collect();
    // the copy mirrors w's out-edges; every in-edge of w also reaches the copy
    succs.push(succs[w.0].clone());
    for out in succs.iter_mut().take(n) {
        if out.contains(&w.0) {
            out.push(n);
        }
    }
    Ok(
        KripkeStructure::from_indexed(names, labels, succs, k.initial().0, k.atoms().clone())
            .expect("splitting preserves validity"),
    )
}

/// Outcome of the bounded projection-relation check. Clause names follow the
/// cycle-bisimulation definition; cycle matching is restricted to simple
/// cycles of bounded combinatorial length and to nodes deep enough inside
/// the prefix for the check to be meaningful.
#[derive(Clone, Debug, Default)]
pub struct CycleBisimReport {
    /// (1): the root projects to the initial world.
    pub initial_ok: bool,
    /// (2a) failures: nodes whose labels differ from their projection's.
    pub label_mismatches: Vec<usize>,
    /// (2b) failures: unwinding edges whose projection is not an edge.
    pub forth_failures: Vec<(usize, usize)>,
    /// (2c) failures: interior nodes missing a successor world.
    pub back_failures: Vec<(usize, World)>,
    /// (2d) failures: simple structure cycles with no lift through the node.
    pub lift_failures: Vec<(usize, Vec<World>)>,
    /// (2e) failures: unwinding cycles whose projection is not a cycle.
    pub projection_failures: Vec<(usize, Vec<usize>)>,
}

impl CycleBisimReport {
    pub fn passed(&self) -> bool {
        self.initial_ok
            && self.label_mismatches.is_empty()
            && self.forth_failures.is_empty()
            && self.back_failures.is_empty()
            && self.lift_failures.is_empty()
            && self.projection_failures.is_empty()
    }
}

/// Check the projection relation `{(node, pr(node))}` of a bounded unwinding
/// prefix against the cycle-bisimulation clauses, matching cycles up to
/// combinatorial length `loop_bound`.
pub fn check_projection_cycle_bisim(
    k: &KripkeStructure,
    t: &TreeWithBackEdges,
    loop_bound: usize,
) -> Result<CycleBisimReport, UnwindError> {
    if loop_bound > t.depth {
        return Err(UnwindError::BoundTooLarge {
            bound: loop_bound,
            depth: t.depth,
        });
    }
    let mut report = CycleBisimReport {
        initial_ok: t.worlds.first() == Some(&k.initial()),
        ..CycleBisimReport::default()
    };
    let adj = t.adjacency();
    let depths = t.depths();

    // (2a) label agreement everywhere
    for i in 0..t.node_count() {
        if &t.labels[i] != k.labels(t.worlds[i]) {
            report.label_mismatches.push(i);
        }
    }

    // (2b) every unwinding edge projects to a structure edge
    for (x, out) in adj.iter().enumerate() {
        for &y in out {
            if !k.has_edge(t.worlds[x], t.worlds[y]) {
                report.forth_failures.push((x, y));
            }
        }
    }

    // (2c) interior nodes cover all successor worlds
    for x in 0..t.node_count() {
        if depths[x] >= t.depth {
            continue;
        }
        for v in k.successors(t.worlds[x]) {
            if !adj[x].iter().any(|&y| t.worlds[y] == v) {
                report.back_failures.push((x, v));
            }
        }
    }

    // (2d) simple structure cycles lift through every deep-enough node
    for (x, &node_depth) in depths.iter().enumerate() {
        if node_depth + loop_bound > t.depth {
            continue;
        }
        for cyc in simple_world_cycles(k, t.worlds[x], loop_bound) {
            if !lift_exists(t, &adj, x, &cyc) {
                report.lift_failures.push((x, cyc));
            }
        }
    }

    // (2e) unwinding cycles through interior nodes project to cycles
    for (x, &node_depth) in depths.iter().enumerate() {
        if node_depth >= t.depth {
            continue;
        }
        for cyc in simple_node_cycles(&adj, x, loop_bound) {
            let closes = cyc
                .windows(2)
                .all(|p| k.has_edge(t.worlds[p[0]], t.worlds[p[1]]))
                && k.has_edge(t.worlds[*cyc.last().unwrap()], t.worlds[cyc[0]]);
            if !closes {
                report.projection_failures.push((x, cyc));
            }
        }
    }
    Ok(report)
}

/// Simple cycles through `start` of combinatorial length <= bound, as world
/// sequences starting at `start`.
fn simple_world_cycles(k: &KripkeStructure, start: World, bound: usize) -> Vec<Vec<World>> {
    let mut out = Vec::new();
    let mut seq = vec![start];
    fn dfs(k: &KripkeStructure, seq: &mut Vec<World>, bound: usize, out: &mut Vec<Vec<World>>) {
        let last = *seq.last().unwrap();
        if k.has_edge(last, seq[0]) {
            out.push(seq.clone());
        }
        if seq.len() == bound {
            return;
        }
        let succ: Vec<World> = k.successors(last).collect();
        for v in succ {
            if seq.contains(&v) {
                continue;
            }
            seq.push(v);
            dfs(k, seq, bound, out);
            seq.pop();
        }
    }
    dfs(k, &mut seq, bound, &mut out);
    out
}

/// Simple cycles through node `start` in the unwinding graph.
fn simple_node_cycles(adj: &[Vec<usize>], start: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut seq = vec![start];
    fn dfs(adj: &[Vec<usize>], seq: &mut Vec<usize>, bound: usize, out: &mut Vec<Vec<usize>>) {
        let last = *seq.last().unwrap();
        if adj[last].contains(&seq[0]) {
            out.push(seq.clone());
        }
        if seq.len() == bound {
            return;
        }
        for &y in &adj[last] {
            if seq.contains(&y) {
                continue;
            }
            seq.push(y);
            dfs(adj, seq, bound, out);
            seq.pop();
        }
    }
    dfs(adj, &mut seq, bound, &mut out);
    out
}

/// Does the structure cycle `cyc` (starting at `pr(x)`) lift to a cycle of
/// the unwinding through node `x`? We search for a pointwise-projecting path
/// back to `x` of length `|cyc|`, except that a self-loop lifts to a
/// two-step cycle (down a fresh copy, back along its back edge), since no
/// unwinding node carries a self-loop.
fn lift_exists(t: &TreeWithBackEdges, adj: &[Vec<usize>], x: usize, cyc: &[World]) -> bool {
    let c = cyc.len();
    let len = if c == 1 { 2 } else { c };
    fn search(
        t: &TreeWithBackEdges,
        adj: &[Vec<usize>],
        x: usize,
        cyc: &[World],
        at: usize,
        step: usize,
        len: usize,
    ) -> bool {
        if step == len {
            return at == x;
        }
        let target = cyc[(step + 1) % cyc.len()];
        adj[at]
            .iter()
            .filter(|&&y| t.worlds[y] == target)
            .any(|&y| search(t, adj, x, cyc, y, step + 1, len))
    }
    search(t, adj, x, cyc, x, 0, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::model_check;
    use crate::corpus;
    use crate::formula::parse;
    use crate::unwind::unwind_bounded;

    #[test]
    fn self_loop_and_delayed_chain_are_bisimilar_but_distinguishable() {
        let k1 = corpus::self_loop();
        let k2 = corpus::chain();
        let rel = find_standard_bisimulation(&k1, &k2).expect("all worlds carry {p}");
        assert_eq!(rel.len(), 3);

        let ec = parse("EC true").unwrap();
        assert!(model_check(&k1, &ec).unwrap().0.truth);
        assert!(!model_check(&k2, &ec).unwrap().0.truth);
    }

    #[test]
    fn disjoint_initial_labels_are_unrelated() {
        let k1 = corpus::self_loop(); // initial labeled {p}
        let k2 = KripkeStructure::assemble(&[("a", &[])], &[("a", "a")], "a").unwrap();
        assert!(find_standard_bisimulation(&k1, &k2).is_none());
    }

    #[test]
    fn bisimulation_is_a_fixpoint() {
        let k1 = corpus::scheduler();
        let k2 = corpus::scheduler();
        let rel = find_standard_bisimulation(&k1, &k2).unwrap();
        // one more refinement step changes nothing
        let refined: BTreeSet<(World, World)> = rel
            .iter()
            .copied()
            .filter(|&(w1, w2)| {
                k1.successors(w1)
                    .all(|v1| k2.successors(w2).any(|v2| rel.contains(&(v1, v2))))
                    && k2
                        .successors(w2)
                        .all(|v2| k1.successors(w1).any(|v1| rel.contains(&(v1, v2))))
            })
            .collect();
        assert_eq!(rel, refined);
    }

    #[test]
    fn projection_check_passes_on_generated_prefixes() {
        let k = corpus::self_loop();
        let t = unwind_bounded(&k, 4);
        assert!(check_projection_cycle_bisim(&k, &t, 2).unwrap().passed());

        let k = corpus::ring2();
        let t = unwind_bounded(&k, 6);
        assert!(check_projection_cycle_bisim(&k, &t, 3).unwrap().passed());
    }

    #[test]
    fn corrupting_a_back_edge_breaks_the_lift() {
        let k = corpus::self_loop();
        let mut t = unwind_bounded(&k, 4);
        t.back_edges.remove(0);
        let report = check_projection_cycle_bisim(&k, &t, 2).unwrap();
        assert!(!report.passed());
        assert!(!report.lift_failures.is_empty());
    }

    #[test]
    fn bound_above_depth_is_rejected() {
        let k = corpus::self_loop();
        let t = unwind_bounded(&k, 2);
        assert_eq!(
            check_projection_cycle_bisim(&k, &t, 3).unwrap_err(),
            UnwindError::BoundTooLarge { bound: 3, depth: 2 }
        );
    }

    #[test]
    fn duplicate_world_splits_edges() {
        let k = corpus::ring2();
        let b = k.world_named("b").unwrap();
        let k2 = duplicate_world(&k, b).unwrap();
        assert_eq!(k2.world_count(), 3);
        let a = k2.world_named("a").unwrap();
        let b = k2.world_named("b").unwrap();
        let bd = k2.world_named("b_dup").unwrap();
        assert!(k2.has_edge(a, b) && k2.has_edge(a, bd));
        assert!(k2.has_edge(b, a) && k2.has_edge(bd, a));
        assert!(!k2.has_edge(bd, bd));
    }

    #[test]
    fn duplicating_the_initial_world_is_rejected() {
        let k = corpus::ring2();
        assert_eq!(
            duplicate_world(&k, k.initial()),
            Err(UnwindError::CannotDuplicateInitial)
        );
    }

    #[test]
    fn duplication_preserves_a_few_verdicts() {
        let k = corpus::scheduler();
        let k2 = duplicate_world(&k, k.world_named("r1").unwrap()).unwrap();
        for text in [
            "EC true",
            "A G (dec -> E X res1)",
            "E (G F res1 & G F res2)",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(
                model_check(&k, &f).unwrap().0.truth,
                model_check(&k2, &f).unwrap().0.truth,
                "{text}"
            );
        }
    }
}
