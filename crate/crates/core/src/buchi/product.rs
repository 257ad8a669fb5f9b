//! Product of a Kripke structure with a Büchi automaton, the anchor
//! acceptance set for cycle quantifiers, and SCC-based emptiness with
//! deterministic lasso extraction.

use super::{Lasso, Letter, Nba};
use crate::kripke::{KripkeStructure, World};
use std::collections::VecDeque;

/// Graph of reachable (world, automaton state) pairs. Nodes carry membership
/// flags for one or more acceptance sets; a run is accepting when it hits
/// every set infinitely often.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    node_world: Vec<World>,
    succs: Vec<Vec<usize>>,
    initial: Vec<usize>,
    accept: Vec<Vec<bool>>,
}

/// Build the product of `k` (started at `start`) with `nba`, where
/// `letters[w]` is world `w`'s extended label restricted to the automaton's
/// alphabet support. An edge `(w,q) -> (w',q')` exists iff `(w,w')` is a
/// structure edge and the automaton reads `letters[w]` moving from `q` to
/// `q'`; only letter-compatible pairs become nodes.
pub fn product(k: &KripkeStructure, start: World, nba: &Nba, letters: &[Letter]) -> ProductGraph {
    assert_eq!(letters.len(), k.world_count());
    let q_count = nba.state_count();
    let mut ids = vec![usize::MAX; k.world_count() * q_count];
    let mut node_world = Vec::new();
    let mut node_state = Vec::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();

    let intern = |w: World,
                  q: usize,
                  ids: &mut Vec<usize>,
                  node_world: &mut Vec<World>,
                  node_state: &mut Vec<usize>,
                  queue: &mut VecDeque<usize>|
     -> usize {
        let key = w.0 * q_count + q;
        if ids[key] == usize::MAX {
            ids[key] = node_world.len();
            node_world.push(w);
            node_state.push(q);
            queue.push_back(ids[key]);
        }
        ids[key]
    };

    for &q in &nba.initial {
        if nba.reads[q] == letters[start.0] {
            let id = intern(
                start,
                q,
                &mut ids,
                &mut node_world,
                &mut node_state,
                &mut queue,
            );
            if !initial.contains(&id) {
                initial.push(id);
            }
        }
    }

    let mut succs: Vec<Vec<usize>> = Vec::new();
    while let Some(v) = queue.pop_front() {
        if succs.len() <= v {
            succs.resize(node_world.len(), Vec::new());
        }
        let (w, q) = (node_world[v], node_state[v]);
        let mut out = Vec::new();
        for w2 in k.successors(w) {
            for &q2 in &nba.succs[q] {
                if nba.reads[q2] == letters[w2.0] {
                    let id = intern(
                        w2,
                        q2,
                        &mut ids,
                        &mut node_world,
                        &mut node_state,
                        &mut queue,
                    );
                    out.push(id);
                }
            }
        }
        if succs.len() < node_world.len() {
            succs.resize(node_world.len(), Vec::new());
        }
        succs[v] = out;
    }
    succs.resize(node_world.len(), Vec::new());
    assert!(node_world.len() <= k.world_count() * q_count);

    let accept = vec![node_state.iter().map(|&q| nba.accept[q]).collect()];
    ProductGraph {
        node_world,
        succs,
        initial,
        accept,
    }
}

impl ProductGraph {
    pub fn node_count(&self) -> usize {
        self.node_world.len()
    }

    pub fn accept_set_count(&self) -> usize {
        self.accept.len()
    }

    pub fn world_of(&self, node: usize) -> World {
        self.node_world[node]
    }

    pub fn initial_nodes(&self) -> &[usize] {
        &self.initial
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succs[node]
    }

    pub fn in_accept_set(&self, set: usize, node: usize) -> bool {
        self.accept[set][node]
    }

    /// Add the cycle-anchor acceptance set: the nodes whose world component
    /// is the anchor. Runs must then also revisit the anchor world forever.
    pub fn add_anchor_condition(&self, anchor: World) -> ProductGraph {
        let mut out = self.clone();
        out.accept
            .push(self.node_world.iter().map(|&w| w == anchor).collect());
        out
    }

    /// Counter construction collapsing all acceptance sets into one;
    /// the single-set case is returned unchanged.
    pub fn degeneralize(&self) -> ProductGraph {
        let m = self.accept.len();
        assert!(m >= 1);
        if m == 1 {
            return self.clone();
        }
        let n = self.node_count();
        let mut ids = vec![usize::MAX; n * m];
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let intern = |node: usize,
                      i: usize,
                      ids: &mut Vec<usize>,
                      order: &mut Vec<(usize, usize)>,
                      queue: &mut VecDeque<usize>| {
            let key = node * m + i;
            if ids[key] == usize::MAX {
                ids[key] = order.len();
                order.push((node, i));
                queue.push_back(ids[key]);
            }
            ids[key]
        };
        let mut initial = Vec::new();
        for &v in &self.initial {
            initial.push(intern(v, 0, &mut ids, &mut order, &mut queue));
        }
        let mut succs: Vec<Vec<usize>> = Vec::new();
        while let Some(id) = queue.pop_front() {
            let (node, i) = order[id];
            let j = if self.accept[i][node] { (i + 1) % m } else { i };
            let out: Vec<usize> = self.succs[node]
                .iter()
                .map(|&n2| intern(n2, j, &mut ids, &mut order, &mut queue))
                .collect();
            if succs.len() < order.len() {
                succs.resize(order.len(), Vec::new());
            }
            succs[id] = out;
        }
        succs.resize(order.len(), Vec::new());
        assert!(order.len() <= m * n);
        let node_world = order.iter().map(|&(v, _)| self.node_world[v]).collect();
        let accept = vec![order
            .iter()
            .map(|&(v, i)| i == 0 && self.accept[0][v])
            .collect()];
        ProductGraph {
            node_world,
            succs,
            initial,
            accept,
        }
    }

    /// Emptiness check: a run hitting every acceptance set infinitely often
    /// exists iff some SCC reachable from the initial nodes has an internal
    /// edge and intersects every set.
    pub fn has_accepting_run(&self) -> bool {
        let comp = strongly_connected_components(&self.succs);
        let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);
        let reachable = self.reachable_from_initial();
        let mut cyclic = vec![false; comp_count];
        for (v, out) in self.succs.iter().enumerate() {
            for &w in out {
                if comp[v] == comp[w] {
                    cyclic[comp[v]] = true;
                }
            }
        }
        let mut reached = vec![false; comp_count];
        let mut hits = vec![vec![false; self.accept.len()]; comp_count];
        for v in 0..self.node_count() {
            if reachable[v] {
                reached[comp[v]] = true;
            }
            for (s, set) in self.accept.iter().enumerate() {
                if set[v] {
                    hits[comp[v]][s] = true;
                }
            }
        }
        (0..comp_count).any(|c| reached[c] && cyclic[c] && hits[c].iter().all(|&h| h))
    }

    fn reachable_from_initial(&self) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack: Vec<usize> = self.initial.clone();
        for &s in &self.initial {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &self.succs[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Extract an accepting lasso from a single-set graph, or `None` when the
    /// language is empty. Deterministic: among accepting candidate nodes the
    /// one minimizing (|prefix| + |loop|, node index) wins, and breadth-first
    /// searches explore successors in node order. The result is replayed
    /// before being returned.
    pub fn find_accepting_lasso(&self) -> Option<ProductLasso> {
        assert_eq!(self.accept.len(), 1, "degeneralize before lasso extraction");
        let comp = strongly_connected_components(&self.succs);
        let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut cyclic = vec![false; comp_count];
        for (v, out) in self.succs.iter().enumerate() {
            for &w in out {
                if comp[v] == comp[w] {
                    cyclic[comp[v]] = true;
                }
            }
        }
        // distance from the initial set
        let (dist, parent) = self.bfs_from(&self.initial);
        let mut best: Option<(usize, usize, usize)> = None; // (total, node, cyclen)
        for v in 0..self.node_count() {
            if !self.accept[0][v] || dist[v] == usize::MAX || !cyclic[comp[v]] {
                continue;
            }
            let Some(cyclen) = self.shortest_cycle_len(v) else {
                continue;
            };
            let total = dist[v] + cyclen;
            if best.is_none_or(|(t, n, _)| (total, v) < (t, n)) {
                best = Some((total, v, cyclen));
            }
        }
        let (_, node, _) = best?;
        let mut prefix = Vec::new();
        let mut at = node;
        while parent[at] != usize::MAX {
            at = parent[at];
            prefix.push(at);
        }
        prefix.reverse();
        let cycle = self.shortest_cycle_path(node);
        let lasso = ProductLasso { prefix, cycle };
        lasso.replay_check(self);
        assert!(lasso.prefix.len() + lasso.cycle.len() <= 2 * self.node_count() + 1);
        Some(lasso)
    }

    fn bfs_from(&self, sources: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut parent = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let mut out: Vec<usize> = self.succs[v].clone();
            out.sort_unstable();
            for w in out {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    fn shortest_cycle_len(&self, v: usize) -> Option<usize> {
        self.cycle_search(v).map(|path| path.len())
    }

    fn shortest_cycle_path(&self, v: usize) -> Vec<usize> {
        self.cycle_search(v).expect("cycle disappeared")
    }

    /// Shortest nonempty path from `v` back to `v`, as the node list of the
    /// loop starting at `v`.
    fn cycle_search(&self, v: usize) -> Option<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut parent = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        let mut out0: Vec<usize> = self.succs[v].clone();
        out0.sort_unstable();
        for w in out0 {
            if w == v {
                return Some(vec![v]);
            }
            if dist[w] == usize::MAX {
                dist[w] = 1;
                parent[w] = usize::MAX; // direct successor of v
                queue.push_back(w);
            }
        }
        while let Some(x) = queue.pop_front() {
            let mut out: Vec<usize> = self.succs[x].clone();
            out.sort_unstable();
            for w in out {
                if w == v {
                    let mut path = vec![x];
                    let mut at = x;
                    while parent[at] != usize::MAX {
                        at = parent[at];
                        path.push(at);
                    }
                    path.push(v);
                    path.reverse();
                    return Some(path);
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    parent[w] = x;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Lasso over product node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductLasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl ProductLasso {
    /// Replay the run symbolically: every consecutive pair must be an edge,
    /// the loop must close, start at an initial node, and the loop must hit
    /// the acceptance set.
    pub fn replay_check(&self, g: &ProductGraph) {
        assert!(!self.cycle.is_empty(), "lasso loop is empty");
        let start = self.prefix.first().copied().unwrap_or(self.cycle[0]);
        assert!(g.initial.contains(&start), "lasso does not start initially");
        let path: Vec<usize> = self
            .prefix
            .iter()
            .chain(self.cycle.iter())
            .copied()
            .collect();
        for pair in path.windows(2) {
            assert!(
                g.succs[pair[0]].contains(&pair[1]),
                "lasso uses a missing edge"
            );
        }
        let last = *self.cycle.last().unwrap();
        assert!(
            g.succs[last].contains(&self.cycle[0]),
            "loop does not close"
        );
        assert!(
            self.cycle.iter().any(|&v| g.accept[0][v]),
            "loop avoids the acceptance set"
        );
    }

    /// Project onto the structure: first components only. Degeneralization
    /// can multiply a loop by the counter period, which repeats the same
    /// world sequence; the projection is folded back to its minimal period
    /// (the infinite path is unchanged).
    pub fn project(&self, g: &ProductGraph) -> Lasso {
        let mut cycle: Vec<World> = self.cycle.iter().map(|&v| g.node_world[v]).collect();
        let period = minimal_period(&cycle);
        cycle.truncate(period);
        Lasso {
            prefix: self.prefix.iter().map(|&v| g.node_world[v]).collect(),
            cycle,
            anchor: None,
        }
    }
}

fn minimal_period(cycle: &[World]) -> usize {
    for d in 1..cycle.len() {
        if cycle.len().is_multiple_of(d) && (d..cycle.len()).all(|i| cycle[i] == cycle[i % d]) {
            return d;
        }
    }
    cycle.len()
}

/// Tarjan's algorithm, iterative. Returns the component id of every node.
pub(crate) fn strongly_connected_components(succs: &[Vec<usize>]) -> Vec<usize> {
    let n = succs.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![usize::MAX; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));
        while let Some(frame) = call.last_mut() {
            let (v, ci) = (frame.0, frame.1);
            if ci < succs[v].len() {
                frame.1 += 1;
                let w = succs[v][ci];
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}
