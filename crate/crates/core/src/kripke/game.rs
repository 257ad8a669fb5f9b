//! Parity games with a fixed positional strategy for Player 0, and the
//! projection of such a game onto a Kripke structure whose labels are the
//! priorities seen along strategy-consistent plays.

use super::{KripkeStructure, ModelError};
use crate::formula::Formula;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Player {
    Zero,
    One,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate `init` declaration")]
    DuplicateInit,
    #[error("missing `init` declaration")]
    MissingInit,
    #[error("state `{0}` has no outgoing edge")]
    NotLeftTotal(String),
    #[error("strategy for `{0}` points outside its edge successors")]
    StrategyNotOnEdge(String),
    #[error("missing strategy for Player 0 state `{0}`")]
    MissingStrategy(String),
    #[error("duplicate strategy for state `{0}`")]
    DuplicateStrategy(String),
    #[error("strategy given for `{0}`, which is not a Player 0 state")]
    StrategyOwner(String),
    #[error("priority {0} is skipped (priorities must form an initial segment of the naturals)")]
    PriorityGap(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug)]
pub struct ParityGame {
    names: Vec<String>,
    owner: Vec<Player>,
    priority: Vec<usize>,
    succs: Vec<Vec<usize>>,
    initial: usize,
    strategy: Vec<Option<usize>>,
}

impl ParityGame {
    /// Build without validation; `validate` or `project` check the invariants.
    pub fn from_parts(
        states: Vec<(String, Player, usize)>,
        edges: Vec<(usize, usize)>,
        initial: usize,
        strategy: Vec<Option<usize>>,
    ) -> Self {
        let mut names = Vec::new();
        let mut owner = Vec::new();
        let mut priority = Vec::new();
        for (name, o, p) in states {
            names.push(name);
            owner.push(o);
            priority.push(p);
        }
        let mut succs = vec![Vec::new(); names.len()];
        for (s, d) in edges {
            succs[s].push(d);
        }
        for out in &mut succs {
            out.sort_unstable();
            out.dedup();
        }
        ParityGame {
            names,
            owner,
            priority,
            succs,
            initial,
            strategy,
        }
    }

    /// Load from the line-oriented game format:
    /// `state <id> <owner:0|1> <priority>`, `edge <src> <dst>`, `init <id>`,
    /// `strategy <src> <dst>` (one per Player 0 state).
    pub fn from_text(text: &str) -> Result<Self, GameError> {
        let mut states: Vec<(String, Player, usize)> = Vec::new();
        let mut edge_names: Vec<(String, String)> = Vec::new();
        let mut strat_names: Vec<(String, String)> = Vec::new();
        let mut init_name: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| GameError::Syntax {
                line: lineno,
                message,
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts[0] {
                "state" => {
                    if parts.len() != 4 {
                        return Err(syntax("`state` needs `<id> <owner:0|1> <priority>`".into()));
                    }
                    let owner = match parts[2] {
                        "0" => Player::Zero,
                        "1" => Player::One,
                        other => {
                            return Err(syntax(format!("owner must be 0 or 1, got `{other}`")))
                        }
                    };
                    let priority: usize = parts[3]
                        .parse()
                        .map_err(|_| syntax(format!("bad priority `{}`", parts[3])))?;
                    if states.iter().any(|(n, _, _)| n == parts[1]) {
                        return Err(GameError::DuplicateState(parts[1].to_string()));
                    }
                    states.push((parts[1].to_string(), owner, priority));
                }
                "edge" => {
                    if parts.len() != 3 {
                        return Err(syntax("`edge` needs exactly two state names".into()));
                    }
                    edge_names.push((parts[1].to_string(), parts[2].to_string()));
                }
                "strategy" => {
                    if parts.len() != 3 {
                        return Err(syntax("`strategy` needs exactly two state names".into()));
                    }
                    strat_names.push((parts[1].to_string(), parts[2].to_string()));
                }
                "init" => {
                    if parts.len() != 2 {
                        return Err(syntax("`init` needs exactly one state name".into()));
                    }
                    if init_name.is_some() {
                        return Err(GameError::DuplicateInit);
                    }
                    init_name = Some(parts[1].to_string());
                }
                other => {
                    return Err(syntax(format!(
                    "unknown directive `{other}` (expected `state`, `edge`, `strategy` or `init`)"
                )))
                }
            }
        }
        let index: HashMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, (n, _, _))| (n.as_str(), i))
            .collect();
        let lookup = |name: &str| -> Result<usize, GameError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GameError::UnknownState(name.to_string()))
        };
        let mut edges = Vec::new();
        for (s, d) in &edge_names {
            edges.push((lookup(s)?, lookup(d)?));
        }
        let mut strategy = vec![None; states.len()];
        for (s, d) in &strat_names {
            let (si, di) = (lookup(s)?, lookup(d)?);
            if strategy[si].is_some() {
                return Err(GameError::DuplicateStrategy(s.clone()));
            }
            strategy[si] = Some(di);
        }
        let initial = lookup(&init_name.ok_or(GameError::MissingInit)?)?;
        let game = Self::from_parts(states, edges, initial, strategy);
        game.validate()?;
        Ok(game)
    }

    pub fn validate(&self) -> Result<(), GameError> {
        for (i, out) in self.succs.iter().enumerate() {
            if out.is_empty() {
                return Err(GameError::NotLeftTotal(self.names[i].clone()));
            }
        }
        for (i, strat) in self.strategy.iter().enumerate() {
            match (self.owner[i], strat) {
                (Player::Zero, None) => {
                    return Err(GameError::MissingStrategy(self.names[i].clone()))
                }
                (Player::Zero, Some(d)) => {
                    if self.succs[i].binary_search(d).is_err() {
                        return Err(GameError::StrategyNotOnEdge(self.names[i].clone()));
                    }
                }
                (Player::One, Some(_)) => {
                    return Err(GameError::StrategyOwner(self.names[i].clone()))
                }
                (Player::One, None) => {}
            }
        }
        let max = self.max_priority();
        for p in 0..=max {
            if !self.priority.contains(&p) {
                return Err(GameError::PriorityGap(p));
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn max_priority(&self) -> usize {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    /// Project the game onto a Kripke structure: Player 0 states keep only
    /// their strategy edge, Player 1 states keep all edges, and each state is
    /// labeled with its own priority atom `p<k>`.
    pub fn project(&self) -> Result<KripkeStructure, GameError> {
        self.validate()?;
        let n = self.max_priority();
        let atoms: BTreeSet<String> = (0..=n).map(priority_atom).collect();
        let labels: Vec<BTreeSet<String>> = self
            .priority
            .iter()
            .map(|&p| std::iter::once(priority_atom(p)).collect())
            .collect();
        let succs: Vec<Vec<usize>> = (0..self.names.len())
            .map(|i| match self.owner[i] {
                Player::Zero => vec![self.strategy[i].unwrap()],
                Player::One => self.succs[i].clone(),
            })
            .collect();
        Ok(KripkeStructure::from_indexed(
            self.names.clone(),
            labels,
            succs,
            self.initial,
            atoms,
        )?)
    }
}

/// Atom naming for priorities on projected games.
pub fn priority_atom(k: usize) -> String {
    format!("p{k}")
}

/// The parity objective over priority atoms `p0..pn`: on every path some even
/// priority recurs forever while all greater odd priorities eventually stop.
pub fn build_parity_formula(n: usize) -> Formula {
    let mut disjuncts = Vec::new();
    for k in (0..=n).step_by(2) {
        let mut conjuncts = vec![Formula::globally(Formula::finally(Formula::atom(
            priority_atom(k),
        )))];
        for l in k..=n {
            if l % 2 == 1 {
                conjuncts.push(Formula::finally(Formula::globally(Formula::not(
                    Formula::atom(priority_atom(l)),
                ))));
            }
        }
        disjuncts.push(Formula::conjunction(conjuncts));
    }
    Formula::forall_path(Formula::disjunction(disjuncts))
}

/// The prompt-violation objective: some play carries a recurring odd request
/// `k` such that whenever `k` occurs, greater even responses stay absent
/// until a state is reached that starts a response-free cycle. The cycle
/// quantifier is what lets the formula say "the response can be postponed
/// another full loop", which no plain path formula can.
pub fn build_nonprompt_formula(n: usize) -> Formula {
    let mut outer = Vec::new();
    for m in (0..=n).step_by(2) {
        let mut inner = Vec::new();
        for k in (1..m).step_by(2) {
            let responses_quiet = |wrap_globally: bool| {
                let mut cs = Vec::new();
                for l in (k + 1)..=n {
                    if l % 2 == 0 {
                        let absent = Formula::not(Formula::atom(priority_atom(l)));
                        cs.push(if wrap_globally {
                            Formula::globally(absent)
                        } else {
                            absent
                        });
                    }
                }
                Formula::conjunction(cs)
            };
            let request = Formula::atom(priority_atom(k));
            let delayable = Formula::until(
                responses_quiet(false),
                Formula::exists_cycle(responses_quiet(true)),
            );
            inner.push(Formula::and(
                Formula::globally(Formula::finally(request.clone())),
                Formula::globally(Formula::implies(request, delayable)),
            ));
        }
        if !inner.is_empty() {
            outer.push(Formula::exists_path(Formula::disjunction(inner)));
        }
    }
    Formula::disjunction(outer)
}
