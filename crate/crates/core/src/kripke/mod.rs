//! Finite Kripke structures: proposition-labeled directed graphs with a
//! left-total transition relation and a designated initial world.

mod game;

pub use game::{build_nonprompt_formula, build_parity_formula, GameError, ParityGame, Player};

use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// Opaque handle for a world of a particular structure.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World(pub usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("world `{0}` has no outgoing edge (the transition relation must be left-total)")]
    NotLeftTotal(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("duplicate `init` declaration")]
    DuplicateInit,
    #[error("missing `init` declaration")]
    MissingInit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStructure {
    names: Vec<String>,
    labels: Vec<BTreeSet<String>>,
    succs: Vec<Vec<usize>>,
    initial: usize,
    atoms: BTreeSet<String>,
    index: HashMap<String, usize>,
}

impl KripkeStructure {
    /// Assemble a structure from world declarations, edges and the initial
    /// world name. The atom universe is the union of all label sets.
    pub fn assemble(
        worlds: &[(&str, &[&str])],
        edges: &[(&str, &str)],
        init: &str,
    ) -> Result<Self, ModelError> {
        let mut names = Vec::new();
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for (name, atoms) in worlds {
            if index.contains_key(*name) {
                return Err(ModelError::DuplicateWorld((*name).to_string()));
            }
            index.insert((*name).to_string(), names.len());
            names.push((*name).to_string());
            labels.push(atoms.iter().map(|a| (*a).to_string()).collect());
        }
        let lookup = |name: &str| -> Result<usize, ModelError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
        };
        let mut succs = vec![Vec::new(); names.len()];
        for (src, dst) in edges {
            let (s, d) = (lookup(src)?, lookup(dst)?);
            succs[s].push(d);
        }
        let initial = lookup(init)?;
        let atoms = labels.iter().flatten().cloned().collect();
        Self::from_indexed(names, labels, succs, initial, atoms)
    }

    /// Assemble from already-indexed parts. `atoms` may be a strict superset
    /// of the labels actually used (for example priorities never reached).
    pub fn from_indexed(
        names: Vec<String>,
        labels: Vec<BTreeSet<String>>,
        mut succs: Vec<Vec<usize>>,
        initial: usize,
        atoms: BTreeSet<String>,
    ) -> Result<Self, ModelError> {
        assert_eq!(names.len(), labels.len());
        assert_eq!(names.len(), succs.len());
        assert!(initial < names.len());
        for (w, out) in succs.iter_mut().enumerate() {
            out.sort_unstable();
            out.dedup();
            if out.is_empty() {
                return Err(ModelError::NotLeftTotal(names[w].clone()));
            }
            if out.iter().any(|&d| d >= names.len()) {
                return Err(ModelError::UnknownWorld(format!(
                    "#{}",
                    out.last().unwrap()
                )));
            }
        }
        for set in &labels {
            debug_assert!(set.iter().all(|a| atoms.contains(a)));
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(KripkeStructure {
            names,
            labels,
            succs,
            initial,
            atoms,
            index,
        })
    }

    /// Load a structure from the line-oriented model format:
    /// `world <id> [<atom>,...]`, `edge <src> <dst>`, `init <id>`,
    /// with `#` starting a comment.
    pub fn from_text(text: &str) -> Result<Self, ModelError> {
        enum Line {
            World(String, Vec<String>),
            Edge(String, String),
            Init(String),
        }
        let mut parsed = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| ModelError::Syntax {
                line: lineno,
                message,
            };
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap();
            match keyword {
                "world" => {
                    let id = parts
                        .next()
                        .ok_or_else(|| syntax("`world` needs an identifier".into()))?;
                    let rest: Vec<&str> = parts.collect();
                    let bracket = rest.join("");
                    if !bracket.starts_with('[') || !bracket.ends_with(']') {
                        return Err(syntax(format!(
                            "`world {id}` needs a bracketed label set, e.g. `world {id} [p,q]`"
                        )));
                    }
                    let inner = &bracket[1..bracket.len() - 1];
                    let mut atoms = Vec::new();
                    if !inner.is_empty() {
                        for atom in inner.split(',') {
                            let atom = atom.trim();
                            if !is_identifier(atom) {
                                return Err(syntax(format!("`{atom}` is not a valid atom name")));
                            }
                            atoms.push(atom.to_string());
                        }
                    }
                    if !is_identifier(id) {
                        return Err(syntax(format!("`{id}` is not a valid world name")));
                    }
                    parsed.push(Line::World(id.to_string(), atoms));
                }
                "edge" => {
                    let src = parts.next();
                    let dst = parts.next();
                    match (src, dst, parts.next()) {
                        (Some(s), Some(d), None) => {
                            parsed.push(Line::Edge(s.to_string(), d.to_string()))
                        }
                        _ => return Err(syntax("`edge` needs exactly two world names".into())),
                    }
                }
                "init" => match (parts.next(), parts.next()) {
                    (Some(id), None) => parsed.push(Line::Init(id.to_string())),
                    _ => return Err(syntax("`init` needs exactly one world name".into())),
                },
                other => {
                    return Err(syntax(format!(
                        "unknown directive `{other}` (expected `world`, `edge` or `init`)"
                    )))
                }
            }
        }

        let mut worlds: Vec<(&str, Vec<&str>)> = Vec::new();
        for line in &parsed {
            if let Line::World(id, atoms) = line {
                if worlds.iter().any(|(w, _)| w == id) {
                    return Err(ModelError::DuplicateWorld(id.clone()));
                }
                worlds.push((id, atoms.iter().map(|a| a.as_str()).collect()));
            }
        }
        let mut edges: Vec<(&str, &str)> = Vec::new();
        let mut init = None;
        for line in &parsed {
            match line {
                Line::World(_, _) => {}
                Line::Edge(s, d) => edges.push((s, d)),
                Line::Init(id) => {
                    if init.is_some() {
                        return Err(ModelError::DuplicateInit);
                    }
                    init = Some(id.as_str());
                }
            }
        }
        let init = init.ok_or(ModelError::MissingInit)?;
        let worlds: Vec<(&str, &[&str])> = worlds
            .iter()
            .map(|(id, atoms)| (*id, atoms.as_slice()))
            .collect();
        Self::assemble(&worlds, &edges, init)
    }

    /// Serialize in the model file format; `from_text` of the output
    /// reconstructs an equal structure.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.names.iter().enumerate() {
            let atoms: Vec<&str> = self.labels[i].iter().map(|s| s.as_str()).collect();
            out.push_str(&format!("world {} [{}]\n", name, atoms.join(",")));
        }
        out.push_str(&format!("init {}\n", self.names[self.initial]));
        for (i, outgoing) in self.succs.iter().enumerate() {
            for &j in outgoing {
                out.push_str(&format!("edge {} {}\n", self.names[i], self.names[j]));
            }
        }
        out
    }

    pub fn world_count(&self) -> usize {
        self.names.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.names.len()).map(World)
    }

    pub fn initial(&self) -> World {
        World(self.initial)
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w.0]
    }

    pub fn labels(&self, w: World) -> &BTreeSet<String> {
        &self.labels[w.0]
    }

    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.succs[w.0].iter().map(|&i| World(i))
    }

    pub fn successor_count(&self, w: World) -> usize {
        self.succs[w.0].len()
    }

    pub fn has_edge(&self, a: World, b: World) -> bool {
        self.succs[a.0].binary_search(&b.0).is_ok()
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn has_atom(&self, name: &str) -> bool {
        self.atoms.contains(name)
    }

    pub fn holds(&self, w: World, atom: &str) -> bool {
        self.labels[w.0].contains(atom)
    }

    pub fn world_named(&self, name: &str) -> Result<World, ModelError> {
        self.index
            .get(name)
            .copied()
            .map(World)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    /// True iff there is a nonempty edge path from `w` back to `w`; agrees
    /// with the checker verdict of `EC true` at `w`.
    pub fn lies_on_cycle(&self, w: World) -> bool {
        let mut seen = vec![false; self.names.len()];
        let mut stack: Vec<usize> = self.succs[w.0].clone();
        while let Some(v) = stack.pop() {
            if v == w.0 {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                stack.extend_from_slice(&self.succs[v]);
            }
        }
        false
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
