//! Bounded prefixes of the tree-like unwinding: every reachable track is
//! copied with a `new` or `cycle` flag, and a step that would close a loop
//! back to the current initial cycle state becomes a back edge instead of a
//! fresh node. The result is a tree with back edges whose projection onto
//! the original structure preserves cycle structure.

mod bisim;

pub use bisim::{
    check_projection_cycle_bisim, duplicate_world, find_standard_bisimulation, CycleBisimReport,
};

use crate::kripke::{KripkeStructure, World};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    New,
    Cycle,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnwindError {
    #[error("cycle bound {bound} exceeds the unwinding depth {depth}")]
    BoundTooLarge { bound: usize, depth: usize },
    #[error("cannot duplicate the initial world")]
    CannotDuplicateInitial,
}

/// A finite tree plus ancestor-directed back edges. Node 0 is the root; a
/// node's identity is its letter sequence, recoverable by walking parents.
/// Fields are public so that validators can be exercised on hand-built
/// (possibly broken) instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWithBackEdges {
    /// Projection of each node onto the underlying structure.
    pub worlds: Vec<World>,
    /// `None` for the root, otherwise the flag of the node's last letter.
    pub flags: Vec<Option<Flag>>,
    /// Inherited labels: the label set of the projected world.
    pub labels: Vec<BTreeSet<String>>,
    /// Child relation of the claimed tree.
    pub tree_edges: Vec<(usize, usize)>,
    /// Back-edge map entries `(source, target)`.
    pub back_edges: Vec<(usize, usize)>,
    /// Letter-length bound the prefix was generated with.
    pub depth: usize,
}

/// Per-condition outcome with a counterexample node pair when violated.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub ok: bool,
    pub witness: Option<(usize, usize)>,
    pub detail: Option<String>,
}

impl ConditionReport {
    fn pass() -> Self {
        ConditionReport {
            ok: true,
            witness: None,
            detail: None,
        }
    }

    fn fail(witness: (usize, usize), detail: String) -> Self {
        ConditionReport {
            ok: false,
            witness: Some(witness),
            detail: Some(detail),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TreeValidationReport {
    /// Documents the adopted reading of the non-crossing condition: it is
    /// checked for pairs where both back edges are defined.
    pub header: String,
    /// (i) the tree edges form a tree rooted at node 0
    pub rootedness: ConditionReport,
    /// (ii) the edge set decomposes: back edges form a partial map
    pub edge_decomposition: ConditionReport,
    /// (iii) every back edge targets a strict ancestor of its source
    pub ancestor_targets: ConditionReport,
    /// (iv) back edges never cross
    pub non_crossing: ConditionReport,
}

impl TreeValidationReport {
    pub fn all_pass(&self) -> bool {
        self.rootedness.ok
            && self.edge_decomposition.ok
            && self.ancestor_targets.ok
            && self.non_crossing.ok
    }
}

impl TreeWithBackEdges {
    pub fn node_count(&self) -> usize {
        self.worlds.len()
    }

    /// Parent of each node per the tree edges; `None` for the root or for
    /// malformed inputs (no or multiple parents keep the first one).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.node_count()];
        for &(p, c) in &self.tree_edges {
            if c < parents.len() && parents[c].is_none() {
                parents[c] = Some(p);
            }
        }
        parents
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.node_count()];
        for &(p, c) in &self.tree_edges {
            children[p].push(c);
        }
        children
    }

    /// Letter length of each node (root 0), following tree parents.
    pub fn depths(&self) -> Vec<usize> {
        let parents = self.parents();
        let mut depths = vec![0usize; self.node_count()];
        for (i, depth) in depths.iter_mut().enumerate() {
            let mut d = 0;
            let mut at = i;
            while let Some(p) = parents[at] {
                d += 1;
                at = p;
                if d > parents.len() {
                    break; // malformed: parent cycle
                }
            }
            *depth = d;
        }
        depths
    }

    /// Successor adjacency of the full relation: tree edges plus back edges.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for &(p, c) in &self.tree_edges {
            adj[p].push(c);
        }
        for &(s, t) in &self.back_edges {
            adj[s].push(t);
        }
        adj
    }

    /// The node's letter sequence, e.g. `a:n.b:c`; the root prints as `ε`.
    pub fn node_id(&self, k: &KripkeStructure, node: usize) -> String {
        let parents = self.parents();
        let mut letters = Vec::new();
        let mut at = node;
        let mut guard = 0;
        while let Some(p) = parents[at] {
            let flag = match self.flags[at] {
                Some(Flag::New) => "n",
                Some(Flag::Cycle) => "c",
                None => "?",
            };
            letters.push(format!("{}:{}", k.name(self.worlds[at]), flag));
            at = p;
            guard += 1;
            if guard > self.node_count() {
                break;
            }
        }
        if letters.is_empty() {
            return "ε".to_string();
        }
        letters.reverse();
        letters.join(".")
    }

    /// Check the four defining conditions, reporting a counterexample node
    /// pair per violated condition.
    pub fn validate(&self) -> TreeValidationReport {
        let header = "non-crossing is checked over pairs of nodes that both \
                      carry back edges (the condition is read as implicitly \
                      requiring the second back edge to be defined)"
            .to_string();
        let n = self.node_count();

        let mut rootedness = ConditionReport::pass();
        let mut parent = vec![None; n];
        for &(p, c) in &self.tree_edges {
            if p >= n || c >= n {
                rootedness = ConditionReport::fail((p, c), "edge endpoint out of range".into());
                break;
            }
            if c == 0 {
                rootedness = ConditionReport::fail((p, c), "the root has a tree parent".into());
                break;
            }
            if let Some(prev) = parent[c] {
                rootedness =
                    ConditionReport::fail((prev, p), format!("node {c} has two tree parents"));
                break;
            }
            parent[c] = Some(p);
        }
        if rootedness.ok {
            for (c, par) in parent.iter().enumerate() {
                if c != 0 && par.is_none() {
                    rootedness = ConditionReport::fail((0, c), format!("node {c} is unreachable"));
                    break;
                }
            }
        }
        if rootedness.ok {
            // acyclicity: walking up from any node must reach the root
            'outer: for start in 0..n {
                let mut at = start;
                let mut steps = 0;
                while let Some(p) = parent[at] {
                    at = p;
                    steps += 1;
                    if steps > n {
                        rootedness =
                            ConditionReport::fail((start, at), "parent chain loops".into());
                        break 'outer;
                    }
                }
            }
        }

        let mut edge_decomposition = ConditionReport::pass();
        let mut has_back = vec![false; n];
        for &(s, t) in &self.back_edges {
            if s >= n || t >= n {
                edge_decomposition =
                    ConditionReport::fail((s, t), "back edge endpoint out of range".into());
                break;
            }
            if has_back[s] {
                edge_decomposition = ConditionReport::fail(
                    (s, t),
                    format!("node {s} has more than one outgoing back edge"),
                );
                break;
            }
            has_back[s] = true;
        }

        let strict_ancestor = |a: usize, b: usize| -> bool {
            // is a a strict ancestor of b?
            let mut at = b;
            let mut steps = 0;
            while let Some(p) = parent.get(at).copied().flatten() {
                if p == a {
                    return true;
                }
                at = p;
                steps += 1;
                if steps > n {
                    return false;
                }
            }
            false
        };

        let mut ancestor_targets = ConditionReport::pass();
        for &(s, t) in &self.back_edges {
            if s < n && t < n && !strict_ancestor(t, s) {
                ancestor_targets = ConditionReport::fail(
                    (s, t),
                    format!("back edge target {t} is not an ancestor of {s}"),
                );
                break;
            }
        }

        let mut non_crossing = ConditionReport::pass();
        'pairs: for &(x1, t1) in &self.back_edges {
            for &(x2, t2) in &self.back_edges {
                if x1.max(x2) >= n || t1.max(t2) >= n {
                    continue;
                }
                if strict_ancestor(t2, x1) && strict_ancestor(x1, x2) && t1 != t2 {
                    non_crossing = ConditionReport::fail(
                        (x1, x2),
                        format!("back edges from {x1} (to {t1}) and {x2} (to {t2}) cross"),
                    );
                    break 'pairs;
                }
            }
        }

        TreeValidationReport {
            header,
            rootedness,
            edge_decomposition,
            ancestor_targets,
            non_crossing,
        }
    }

    /// DOT rendering: tree edges solid, back edges dashed; captions show the
    /// projected world and flag of each node.
    pub fn to_dot(&self, k: &KripkeStructure) -> String {
        let mut out = String::from("digraph unwinding {\n");
        for i in 0..self.node_count() {
            let caption = match self.flags[i] {
                None => k.name(self.worlds[i]).to_string(),
                Some(Flag::New) => format!("{}:n", k.name(self.worlds[i])),
                Some(Flag::Cycle) => format!("{}:c", k.name(self.worlds[i])),
            };
            out.push_str(&format!("  n{i} [label=\"{caption}\"];\n"));
        }
        for &(p, c) in &self.tree_edges {
            out.push_str(&format!("  n{p} -> n{c};\n"));
        }
        for &(s, t) in &self.back_edges {
            out.push_str(&format!("  n{s} -> n{t} [style=dashed];\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Plain-text rendering with full node sequences.
    pub fn to_text(&self, k: &KripkeStructure) -> String {
        let mut out = String::new();
        for i in 0..self.node_count() {
            out.push_str(&format!("node {i}: {}\n", self.node_id(k, i)));
        }
        for &(p, c) in &self.tree_edges {
            out.push_str(&format!("tree edge: {p} -> {c}\n"));
        }
        for &(s, t) in &self.back_edges {
            out.push_str(&format!("back edge: {s} -> {t}\n"));
        }
        out
    }
}

/// The bounded prefix of the tree-like unwinding of `k`: all nodes of letter
/// length at most `depth`, with forward edges to `new` copies always, forward
/// edges to `cycle` copies when the successor differs from the initial cycle
/// state's world, and a back edge to the initial cycle state when it matches.
pub fn unwind_bounded(k: &KripkeStructure, depth: usize) -> TreeWithBackEdges {
    assert!(depth >= 1, "depth must be at least 1");
    struct Builder {
        worlds: Vec<World>,
        flags: Vec<Option<Flag>>,
        labels: Vec<BTreeSet<String>>,
        node_depth: Vec<usize>,
        // initial cycle state: parent of the deepest new-flagged
        // ancestor-or-self; only the root has none
        ics: Vec<Option<usize>>,
        tree_edges: Vec<(usize, usize)>,
        queue: std::collections::VecDeque<usize>,
    }
    impl Builder {
        fn push_child(&mut self, k: &KripkeStructure, parent: usize, v: World, flag: Flag) {
            let id = self.worlds.len();
            self.worlds.push(v);
            self.flags.push(Some(flag));
            self.labels.push(k.labels(v).clone());
            self.node_depth.push(self.node_depth[parent] + 1);
            self.ics.push(match flag {
                Flag::New => Some(parent),
                Flag::Cycle => self.ics[parent],
            });
            self.tree_edges.push((parent, id));
            self.queue.push_back(id);
        }
    }
    let mut b = Builder {
        worlds: vec![k.initial()],
        flags: vec![None],
        labels: vec![k.labels(k.initial()).clone()],
        node_depth: vec![0],
        ics: vec![None],
        tree_edges: Vec::new(),
        queue: std::collections::VecDeque::from([0]),
    };
    let mut back_edges = Vec::new();
    while let Some(i) = b.queue.pop_front() {
        let expandable = b.node_depth[i] < depth;
        let succ: Vec<World> = k.successors(b.worlds[i]).collect();
        for v in succ {
            if expandable {
                b.push_child(k, i, v, Flag::New);
            }
            if let Some(u) = b.ics[i] {
                if b.worlds[u] == v {
                    back_edges.push((i, u));
                } else if expandable {
                    b.push_child(k, i, v, Flag::Cycle);
                }
            }
        }
    }
    TreeWithBackEdges {
        worlds: b.worlds,
        flags: b.flags,
        labels: b.labels,
        tree_edges: b.tree_edges,
        back_edges,
        depth,
    }
}

/// Pure labeled tree derived from a bounded unwinding: back edges are
/// dropped, `new` marks nodes whose last flag is `new`, and `↑` marks the
/// origins of dropped back edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeRepresentation {
    pub worlds: Vec<World>,
    pub labels: Vec<BTreeSet<String>>,
    pub is_new: Vec<bool>,
    pub has_up: Vec<bool>,
    pub children: Vec<Vec<usize>>,
}

pub fn tree_representation(t: &TreeWithBackEdges) -> TreeRepresentation {
    let mut has_up = vec![false; t.node_count()];
    for &(s, _) in &t.back_edges {
        has_up[s] = true;
    }
    TreeRepresentation {
        worlds: t.worlds.clone(),
        labels: t.labels.clone(),
        is_new: t.flags.iter().map(|f| *f == Some(Flag::New)).collect(),
        has_up,
        children: t.children(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn self_loop_unwinding_depth_two() {
        let k = corpus::self_loop();
        let t = unwind_bounded(&k, 2);
        // ε, (a,new), (a,new)(a,new)
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.flags, vec![None, Some(Flag::New), Some(Flag::New)]);
        assert_eq!(t.tree_edges, vec![(0, 1), (1, 2)]);
        // both non-root nodes see their initial cycle state's world again
        assert_eq!(t.back_edges, vec![(1, 0), (2, 1)]);
        assert!(t.validate().all_pass());
        assert_eq!(t.node_id(&k, 0), "ε");
        assert_eq!(t.node_id(&k, 2), "a:n.a:n");
    }

    #[test]
    fn root_has_only_new_children_and_no_back_edge() {
        for k in [corpus::ring2(), corpus::figure_eight(), corpus::scheduler()] {
            let t = unwind_bounded(&k, 3);
            let children = t.children();
            for &c in &children[0] {
                assert_eq!(t.flags[c], Some(Flag::New));
            }
            assert!(t.back_edges.iter().all(|&(s, _)| s != 0));
        }
    }

    #[test]
    fn branching_is_bounded_by_twice_the_outdegree() {
        let k = corpus::figure_eight();
        let t = unwind_bounded(&k, 4);
        for (i, kids) in t.children().iter().enumerate() {
            let out = k.successor_count(t.worlds[i]);
            assert!(kids.len() <= 2 * out);
        }
    }

    #[test]
    fn interior_successor_multiset_follows_the_edge_rules() {
        // every successor world of pr(x) is reached once through a new copy
        // and once more through either a cycle copy or the back edge
        for k in [
            corpus::ring2(),
            corpus::ring3(),
            corpus::figure_eight(),
            corpus::scheduler(),
        ] {
            let t = unwind_bounded(&k, 4);
            let adj = t.adjacency();
            let depths = t.depths();
            for x in 0..t.node_count() {
                if depths[x] >= t.depth {
                    continue;
                }
                let expected = if x == 0 { 1 } else { 2 };
                for v in k.successors(t.worlds[x]) {
                    let hits = adj[x].iter().filter(|&&y| t.worlds[y] == v).count();
                    assert_eq!(hits, expected, "node {x} successor {}", k.name(v));
                }
            }
        }
    }

    #[test]
    fn validator_flags_non_ancestor_back_edge() {
        let k = corpus::ring2();
        let mut t = unwind_bounded(&k, 2);
        // siblings are not ancestors
        let parents = t.parents();
        let leafs: Vec<usize> = (1..t.node_count())
            .filter(|&i| parents[i] == Some(1))
            .collect();
        t.back_edges = vec![(leafs[0], t.node_count() - 1)];
        let report = t.validate();
        assert!(report.rootedness.ok);
        assert!(!report.ancestor_targets.ok);
        assert!(report.ancestor_targets.witness.is_some());
    }

    #[test]
    fn validator_flags_crossing_back_edges() {
        // path 0 - 1 - 2 - 3 with f(2) = 0 and f(3) = 1: the edge from 2
        // jumps over the one from 3
        let k = corpus::self_loop();
        let a = k.initial();
        let t = TreeWithBackEdges {
            worlds: vec![a; 4],
            flags: vec![None, Some(Flag::New), Some(Flag::New), Some(Flag::New)],
            labels: vec![k.labels(a).clone(); 4],
            tree_edges: vec![(0, 1), (1, 2), (2, 3)],
            back_edges: vec![(2, 0), (3, 1)],
            depth: 3,
        };
        let report = t.validate();
        assert!(report.rootedness.ok);
        assert!(report.ancestor_targets.ok);
        assert!(!report.non_crossing.ok);
        let (x1, x2) = report.non_crossing.witness.unwrap();
        assert_ne!(x1, x2);
    }

    #[test]
    fn validator_flags_double_parent() {
        let k = corpus::self_loop();
        let a = k.initial();
        let t = TreeWithBackEdges {
            worlds: vec![a; 3],
            flags: vec![None, Some(Flag::New), Some(Flag::New)],
            labels: vec![k.labels(a).clone(); 3],
            tree_edges: vec![(0, 1), (0, 2), (1, 2)],
            back_edges: vec![],
            depth: 2,
        };
        assert!(!t.validate().rootedness.ok);
    }

    #[test]
    fn representation_marks_new_and_up() {
        let k = corpus::self_loop();
        let t = unwind_bounded(&k, 2);
        let rep = tree_representation(&t);
        assert_eq!(rep.worlds.len(), t.node_count());
        // node (a,new) carries the label of a plus both markers
        assert!(rep.is_new[1] && rep.has_up[1]);
        assert!(!rep.is_new[0] && !rep.has_up[0]);
        assert!(rep.labels[1].contains("p"));
        // children of the root all carry the new marker
        for &c in &rep.children[0] {
            assert!(rep.is_new[c]);
        }
        // uniqueness: regenerating yields the identical tree
        assert_eq!(rep, tree_representation(&unwind_bounded(&k, 2)));
    }

    #[test]
    fn unwindings_validate_across_the_corpus() {
        for k in [
            corpus::self_loop(),
            corpus::chain(),
            corpus::ring2(),
            corpus::ring3(),
            corpus::figure_eight(),
            corpus::scheduler(),
        ] {
            let t = unwind_bounded(&k, 4);
            assert!(t.validate().all_pass(), "{}", t.to_text(&k));
            for (i, w) in t.worlds.iter().enumerate() {
                assert_eq!(&t.labels[i], k.labels(*w));
            }
        }
    }

    #[test]
    fn dot_export_styles_back_edges() {
        let k = corpus::self_loop();
        let t = unwind_bounded(&k, 2);
        let dot = t.to_dot(&k);
        assert!(dot.contains("n1 -> n0 [style=dashed];"));
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("label=\"a:n\""));
    }
}
