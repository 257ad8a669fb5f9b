//! Bottom-up model checker: quantified subformulas are decided innermost
//! first by Büchi emptiness over the product with the structure, recording
//! each verdict as a fresh proposition; cycle quantifiers add the anchor
//! acceptance set demanding that the start world recurs forever.

mod oracle;
pub mod wordeval;

pub use oracle::{brute_force_eval, Oracle, OracleLimits};

use crate::buchi::{ltl_to_nba, product, BuchiError, Lasso, Letter, Nba};
use crate::formula::{Category, Formula};
use crate::kripke::{KripkeStructure, World};
use std::collections::HashMap;
use std::rc::Rc;
use thiserror::Error;
use wordeval::{eval_path_formula, PositionContext};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("`{0}` is a path formula; model checking needs a state formula")]
    NotAStateFormula(String),
    #[error("labeling table has no entry for `{0}`")]
    MissingTableEntry(String),
    #[error("evaluation budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Buchi(#[from] BuchiError),
}

/// Truth of every quantified subformula at every world, in bottom-up
/// insertion order. Each row also carries the fresh proposition standing for
/// the subformula in enclosing automata.
#[derive(Clone, Debug, Default)]
pub struct LabelingTable {
    rows: Vec<Row>,
    by_formula: HashMap<Formula, usize>,
    by_atom: HashMap<String, usize>,
}

#[derive(Clone, Debug)]
struct Row {
    formula: Formula,
    atom: String,
    truth: Vec<bool>,
}

impl LabelingTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fresh proposition naming a quantified subformula: a stable hash of its
    /// printed form, so tables and cached automata are reproducible.
    pub fn fresh_atom(f: &Formula) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in f.to_string().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("@{h:016x}")
    }

    pub fn insert(&mut self, f: Formula, truth: Vec<bool>) {
        let atom = Self::fresh_atom(&f);
        self.by_formula.insert(f.clone(), self.rows.len());
        self.by_atom.insert(atom.clone(), self.rows.len());
        self.rows.push(Row {
            formula: f,
            atom,
            truth,
        });
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.by_formula.contains_key(f)
    }

    pub fn truth(&self, f: &Formula, w: World) -> Option<bool> {
        self.by_formula.get(f).map(|&i| self.rows[i].truth[w.0])
    }

    pub fn truth_by_atom(&self, atom: &str, w: World) -> Option<bool> {
        self.by_atom.get(atom).map(|&i| self.rows[i].truth[w.0])
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Formula, &str, &[bool])> {
        self.rows
            .iter()
            .map(|r| (&r.formula, r.atom.as_str(), r.truth.as_slice()))
    }

    /// Per-world letters for an automaton: labels of the structure extended
    /// with the recorded quantified-subformula propositions.
    pub fn extended_letters(
        &self,
        k: &KripkeStructure,
        nba: &Nba,
    ) -> Result<Vec<Letter>, CheckError> {
        let mut letters = Vec::with_capacity(k.world_count());
        for w in k.worlds() {
            let mut letter = 0;
            for (i, atom) in nba.atoms.iter().enumerate() {
                let truth = match self.truth_by_atom(atom, w) {
                    Some(t) => t,
                    None if k.has_atom(atom) => k.holds(w, atom),
                    None => return Err(CheckError::UnknownAtom(atom.clone())),
                };
                if truth {
                    letter |= 1 << i;
                }
            }
            letters.push(letter);
        }
        Ok(letters)
    }

    /// Tab-separated rendering: one row per subformula, one column per world.
    pub fn to_tsv(&self, k: &KripkeStructure) -> String {
        let mut out = String::from("formula");
        for w in k.worlds() {
            out.push('\t');
            out.push_str(k.name(w));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.formula.to_string());
            for v in &row.truth {
                out.push('\t');
                out.push_str(if *v { "true" } else { "false" });
            }
            out.push('\n');
        }
        out
    }
}

/// Replace every quantified subformula by its table proposition, leaving a
/// plain LTL formula over extended atoms.
fn strip_quantified(f: &Formula, table: &LabelingTable) -> Result<Formula, CheckError> {
    if f.is_quantifier() {
        let i = table
            .by_formula
            .get(f)
            .ok_or_else(|| CheckError::MissingTableEntry(f.to_string()))?;
        return Ok(Formula::Atom(table.rows[*i].atom.clone()));
    }
    Ok(match f {
        Formula::Atom(_) | Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(strip_quantified(a, table)?),
        Formula::And(a, b) => {
            Formula::and(strip_quantified(a, table)?, strip_quantified(b, table)?)
        }
        Formula::Or(a, b) => Formula::or(strip_quantified(a, table)?, strip_quantified(b, table)?),
        Formula::Implies(a, b) => {
            Formula::implies(strip_quantified(a, table)?, strip_quantified(b, table)?)
        }
        Formula::Next(a) => Formula::next(strip_quantified(a, table)?),
        Formula::Until(a, b) => {
            Formula::until(strip_quantified(a, table)?, strip_quantified(b, table)?)
        }
        Formula::Finally(a) => Formula::finally(strip_quantified(a, table)?),
        Formula::Globally(a) => Formula::globally(strip_quantified(a, table)?),
        _ => unreachable!("quantifiers handled above"),
    })
}

/// Truth with an optional witness. A witness is attached only when the
/// queried formula is itself existential and true, and extraction was
/// requested; it always replays against the structure.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub truth: bool,
    pub witness: Option<Lasso>,
}

/// Reusable checking context: translated automata are cached by formula, so
/// sweeps over many structures pay for each translation once.
#[derive(Default)]
pub struct ModelChecker {
    nba_cache: HashMap<Formula, Rc<Nba>>,
    threads: usize,
}

impl ModelChecker {
    pub fn new() -> Self {
        ModelChecker {
            nba_cache: HashMap::new(),
            threads: 1,
        }
    }

    /// Cap on worker threads for the per-world emptiness checks of one
    /// subformula level. Verdicts do not depend on the thread count.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn check(
        &mut self,
        k: &KripkeStructure,
        phi: &Formula,
    ) -> Result<(Verdict, LabelingTable), CheckError> {
        self.check_impl(k, phi, false)
    }

    pub fn check_with_witness(
        &mut self,
        k: &KripkeStructure,
        phi: &Formula,
    ) -> Result<(Verdict, LabelingTable), CheckError> {
        self.check_impl(k, phi, true)
    }

    fn check_impl(
        &mut self,
        k: &KripkeStructure,
        phi: &Formula,
        want_witness: bool,
    ) -> Result<(Verdict, LabelingTable), CheckError> {
        if phi.category() != Category::State {
            return Err(CheckError::NotAStateFormula(phi.to_string()));
        }
        for atom in phi.atoms() {
            if !k.has_atom(&atom) {
                return Err(CheckError::UnknownAtom(atom));
            }
        }
        let mut table = LabelingTable::new();
        for eta in phi.quantified_subformulas() {
            let truth = self.quantified_row(k, &eta, &table)?;
            table.insert(eta, truth);
        }
        let truth = eval_state(k, phi, &table, k.initial())?;
        let witness = if want_witness && truth {
            self.extract_witness(k, phi, &table)?
        } else {
            None
        };
        Ok((Verdict { truth, witness }, table))
    }

    fn nba(&mut self, psi: &Formula) -> Result<Rc<Nba>, CheckError> {
        if let Some(nba) = self.nba_cache.get(psi) {
            return Ok(Rc::clone(nba));
        }
        let nba = Rc::new(ltl_to_nba(psi)?);
        self.nba_cache.insert(psi.clone(), Rc::clone(&nba));
        Ok(nba)
    }

    fn quantified_row(
        &mut self,
        k: &KripkeStructure,
        eta: &Formula,
        table: &LabelingTable,
    ) -> Result<Vec<bool>, CheckError> {
        let body = eta.quantifier_body().expect("quantified subformula");
        match eta {
            Formula::ExistsPath(_) => {
                let nba = self.nba(&strip_quantified(body, table)?)?;
                let letters = table.extended_letters(k, &nba)?;
                let nba: &Nba = &nba;
                self.map_worlds(k, |w| Ok(product(k, w, nba, &letters).has_accepting_run()))
            }
            Formula::ForallPath(_) => {
                let negated = Formula::not(strip_quantified(body, table)?);
                let nba = self.nba(&negated)?;
                let letters = table.extended_letters(k, &nba)?;
                let nba: &Nba = &nba;
                self.map_worlds(k, |w| Ok(!product(k, w, nba, &letters).has_accepting_run()))
            }
            Formula::ExistsCycle(_) => {
                let nba = self.nba(&strip_quantified(body, table)?)?;
                let letters = table.extended_letters(k, &nba)?;
                let nba: &Nba = &nba;
                self.map_worlds(k, |w| Ok(anchored_nonempty(k, w, nba, &letters)))
            }
            Formula::ForallCycle(_) => {
                let negated = Formula::not(strip_quantified(body, table)?);
                let nba = self.nba(&negated)?;
                let letters = table.extended_letters(k, &nba)?;
                let nba: &Nba = &nba;
                self.map_worlds(k, |w| Ok(!anchored_nonempty(k, w, nba, &letters)))
            }
            Formula::SimpleExistsCycle(_) => self.map_worlds(k, |w| {
                Ok(find_simple_lasso_witness(k, w, body, table)?.is_some())
            }),
            _ => unreachable!("not a quantifier"),
        }
    }

    fn map_worlds(
        &self,
        k: &KripkeStructure,
        f: impl Fn(World) -> Result<bool, CheckError> + Sync,
    ) -> Result<Vec<bool>, CheckError> {
        let n = k.world_count();
        let threads = self.threads.min(n);
        if threads <= 1 {
            return k.worlds().map(f).collect();
        }
        let chunk = n.div_ceil(threads);
        let results: Vec<Result<Vec<bool>, CheckError>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads {
                let f = &f;
                let lo = t * chunk;
                let hi = ((t + 1) * chunk).min(n);
                handles.push(scope.spawn(move || (lo..hi).map(|i| f(World(i))).collect()));
            }
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut out = Vec::with_capacity(n);
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }

    fn extract_witness(
        &mut self,
        k: &KripkeStructure,
        phi: &Formula,
        table: &LabelingTable,
    ) -> Result<Option<Lasso>, CheckError> {
        let w0 = k.initial();
        let lasso = match phi {
            Formula::ExistsPath(body) => {
                let nba = self.nba(&strip_quantified(body, table)?)?;
                let letters = table.extended_letters(k, &nba)?;
                let graph = product(k, w0, &nba, &letters);
                graph.find_accepting_lasso().map(|pl| pl.project(&graph))
            }
            Formula::ExistsCycle(body) => {
                return Ok(check_exists_cycle(k, w0, body, table)?.witness);
            }
            Formula::SimpleExistsCycle(body) => find_simple_lasso_witness(k, w0, body, table)?,
            _ => None,
        };
        if let Some(l) = &lasso {
            l.validate(k).expect("extracted witness must replay");
        }
        Ok(lasso)
    }
}

fn anchored_nonempty(k: &KripkeStructure, w: World, nba: &Nba, letters: &[Letter]) -> bool {
    product(k, w, nba, letters)
        .add_anchor_condition(w)
        .degeneralize()
        .has_accepting_run()
}

/// Check `K, phi` at the initial world, returning the verdict together with
/// the full labeling table.
pub fn model_check(
    k: &KripkeStructure,
    phi: &Formula,
) -> Result<(Verdict, LabelingTable), CheckError> {
    ModelChecker::new().check(k, phi)
}

/// Like `model_check`, with witness extraction for existential roots.
pub fn model_check_with_witness(
    k: &KripkeStructure,
    phi: &Formula,
) -> Result<(Verdict, LabelingTable), CheckError> {
    ModelChecker::new().check_with_witness(k, phi)
}

/// Decide `EC psi` at `w`: is there a path starting at `w`, revisiting `w`
/// forever, whose word satisfies `psi`? The table must already cover the
/// proper quantified subformulas of `psi`. On success the witness lasso is
/// anchored at `w` and validated.
pub fn check_exists_cycle(
    k: &KripkeStructure,
    w: World,
    psi: &Formula,
    table: &LabelingTable,
) -> Result<Verdict, CheckError> {
    let nba = ltl_to_nba(&strip_quantified(psi, table)?)?;
    let letters = table.extended_letters(k, &nba)?;
    let graph = product(k, w, &nba, &letters)
        .add_anchor_condition(w)
        .degeneralize();
    match graph.find_accepting_lasso() {
        Some(pl) => {
            let mut lasso = pl.project(&graph);
            lasso.anchor = Some(w);
            lasso.validate(k).expect("anchored witness must replay");
            Ok(Verdict {
                truth: true,
                witness: Some(lasso),
            })
        }
        None => Ok(Verdict {
            truth: false,
            witness: None,
        }),
    }
}

/// Search for a witness whose loop is a simple graph cycle through `w`
/// (no world repeats except the return to `w`) satisfying `psi`. Absence
/// does not refute `EC psi`: alternating distinct simple loops can satisfy
/// path formulas no single simple loop does. On tree-like unwindings the
/// simple witnesses are enough, which is what the simple-cycle translation
/// exploits.
pub fn find_simple_lasso_witness(
    k: &KripkeStructure,
    w: World,
    psi: &Formula,
    table: &LabelingTable,
) -> Result<Option<Lasso>, CheckError> {
    // iterative deepening for a shortest-first, deterministic search
    for len in 1..=k.world_count() {
        let mut seq = vec![w];
        if let Some(cycle) = simple_cycle_search(k, psi, table, &mut seq, len)? {
            let lasso = Lasso {
                prefix: Vec::new(),
                cycle,
                anchor: Some(w),
            };
            lasso.validate(k).expect("simple witness must replay");
            return Ok(Some(lasso));
        }
    }
    Ok(None)
}

fn simple_cycle_search(
    k: &KripkeStructure,
    psi: &Formula,
    table: &LabelingTable,
    seq: &mut Vec<World>,
    len: usize,
) -> Result<Option<Vec<World>>, CheckError> {
    if seq.len() == len {
        let last = *seq.last().unwrap();
        if k.has_edge(last, seq[0]) {
            let mut ctx = TablePositions {
                k,
                table,
                worlds: seq.as_slice(),
            };
            if eval_path_formula(psi, 0, seq.len(), &mut ctx)? {
                return Ok(Some(seq.clone()));
            }
        }
        return Ok(None);
    }
    let last = *seq.last().unwrap();
    let succs: Vec<World> = k.successors(last).collect();
    for s in succs {
        if seq.contains(&s) {
            continue;
        }
        seq.push(s);
        let found = simple_cycle_search(k, psi, table, seq, len)?;
        seq.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Boolean evaluation of a state formula from labels plus table rows.
fn eval_state(
    k: &KripkeStructure,
    f: &Formula,
    table: &LabelingTable,
    w: World,
) -> Result<bool, CheckError> {
    if f.is_quantifier() {
        return table
            .truth(f, w)
            .ok_or_else(|| CheckError::MissingTableEntry(f.to_string()));
    }
    match f {
        Formula::Atom(name) => {
            if !k.has_atom(name) {
                return Err(CheckError::UnknownAtom(name.clone()));
            }
            Ok(k.holds(w, name))
        }
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Not(a) => Ok(!eval_state(k, a, table, w)?),
        Formula::And(a, b) => Ok(eval_state(k, a, table, w)? && eval_state(k, b, table, w)?),
        Formula::Or(a, b) => Ok(eval_state(k, a, table, w)? || eval_state(k, b, table, w)?),
        Formula::Implies(a, b) => Ok(!eval_state(k, a, table, w)? || eval_state(k, b, table, w)?),
        _ => unreachable!("temporal node in state evaluation"),
    }
}

/// Positions over structure worlds with quantified subformulas answered by a
/// labeling table.
struct TablePositions<'c> {
    k: &'c KripkeStructure,
    table: &'c LabelingTable,
    worlds: &'c [World],
}

impl PositionContext for TablePositions<'_> {
    fn atom(&mut self, pos: usize, name: &str) -> Result<bool, CheckError> {
        if let Some(t) = self.table.truth_by_atom(name, self.worlds[pos]) {
            return Ok(t);
        }
        if !self.k.has_atom(name) {
            return Err(CheckError::UnknownAtom(name.to_string()));
        }
        Ok(self.k.holds(self.worlds[pos], name))
    }

    fn quantified(&mut self, pos: usize, f: &Formula) -> Result<bool, CheckError> {
        self.table
            .truth(f, self.worlds[pos])
            .ok_or_else(|| CheckError::MissingTableEntry(f.to_string()))
    }
}

/// Evaluate a path formula on a lasso word over the structure, resolving
/// embedded quantified subformulas through the table. Used to validate that
/// emitted witnesses actually satisfy what they witness.
pub fn lasso_satisfies(
    k: &KripkeStructure,
    lasso: &Lasso,
    psi: &Formula,
    table: &LabelingTable,
) -> Result<bool, CheckError> {
    let worlds = lasso.positions();
    let mut ctx = TablePositions {
        k,
        table,
        worlds: &worlds,
    };
    eval_path_formula(psi, lasso.prefix.len(), worlds.len(), &mut ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn check(k: &KripkeStructure, text: &str) -> bool {
        model_check(k, &parse(text).unwrap()).unwrap().0.truth
    }

    #[test]
    fn self_loop_cycles_forever() {
        let k = KripkeStructure::assemble(&[("a", &["p"])], &[("a", "a")], "a").unwrap();
        assert!(check(&k, "EC G p"));
        assert!(check(&k, "A G p"));
        assert!(!check(&k, "E F !p"));
    }

    #[test]
    fn chain_start_is_on_no_cycle() {
        let k = KripkeStructure::assemble(
            &[("a0", &["p"]), ("b", &["p"]), ("a1", &["p"])],
            &[("a0", "b"), ("b", "a1"), ("a1", "b")],
            "a0",
        )
        .unwrap();
        assert!(!check(&k, "EC true"));
        assert!(check(&k, "A X EC true"));
        assert_eq!(
            check(&k, "EC true"),
            brute_force_eval(&k, &parse("EC true").unwrap()).unwrap()
        );
    }

    #[test]
    fn scheduler_satisfies_its_specification() {
        let k = KripkeStructure::assemble(
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
        .unwrap();
        let phi1 = "EC ((dec & !res1 & G !res2) -> F res1)";
        let phi2 = "EC ((dec & !res2 & G !res1) -> F res2)";
        let spec = format!("A G (dec -> {phi1} & {phi2})");
        assert!(check(&k, &spec));
        assert!(check(&k, "E (G F res1 & G F res2)"));
        assert!(brute_force_eval(&k, &parse(&spec).unwrap()).unwrap());
    }

    #[test]
    fn exists_cycle_verdicts_with_witnesses() {
        let k = KripkeStructure::assemble(
            &[("a", &["p"]), ("b", &["q"])],
            &[("a", "b"), ("b", "a")],
            "a",
        )
        .unwrap();
        let a = k.world_named("a").unwrap();
        let table = LabelingTable::new();

        let good = check_exists_cycle(
            &k,
            a,
            &parse("E (G (p -> X q))")
                .unwrap()
                .quantifier_body()
                .unwrap()
                .clone(),
            &table,
        );
        let verdict = good.unwrap();
        assert!(verdict.truth);
        let lasso = verdict.witness.unwrap();
        assert_eq!(lasso.anchor, Some(a));
        assert_eq!(lasso.cycle.len(), 2);

        let bad = check_exists_cycle(
            &k,
            a,
            &parse("E (G p)").unwrap().quantifier_body().unwrap().clone(),
            &table,
        )
        .unwrap();
        assert!(!bad.truth);

        // no cycle through a world off every cycle
        let chain = KripkeStructure::assemble(
            &[("a0", &[]), ("b", &[]), ("a1", &[])],
            &[("a0", "b"), ("b", "a1"), ("a1", "b")],
            "a0",
        )
        .unwrap();
        let off = check_exists_cycle(
            &chain,
            chain.world_named("a0").unwrap(),
            &Formula::True,
            &LabelingTable::new(),
        )
        .unwrap();
        assert!(!off.truth);
    }

    #[test]
    fn simple_witness_misses_alternating_loops() {
        // figure eight: two simple loops through w
        let k = KripkeStructure::assemble(
            &[("w", &[]), ("x", &["px"]), ("y", &["py"])],
            &[("w", "x"), ("x", "w"), ("w", "y"), ("y", "w")],
            "w",
        )
        .unwrap();
        let w = k.world_named("w").unwrap();
        let table = LabelingTable::new();
        let psi = parse("E (F px & F py)")
            .unwrap()
            .quantifier_body()
            .unwrap()
            .clone();

        assert!(check_exists_cycle(&k, w, &psi, &table).unwrap().truth);
        assert_eq!(
            find_simple_lasso_witness(&k, w, &psi, &table).unwrap(),
            None
        );
        assert!(brute_force_eval(&k, &Formula::exists_cycle(psi.clone())).unwrap());
        assert!(!brute_force_eval(&k, &Formula::simple_exists_cycle(psi)).unwrap());
    }

    #[test]
    fn simple_witness_on_rings() {
        let k = KripkeStructure::assemble(&[("w", &[])], &[("w", "w")], "w").unwrap();
        let w = k.initial();
        let witness = find_simple_lasso_witness(&k, w, &Formula::True, &LabelingTable::new())
            .unwrap()
            .unwrap();
        assert_eq!(witness.cycle, vec![w]);

        let ring = KripkeStructure::assemble(
            &[("a", &[]), ("b", &[]), ("c", &[])],
            &[("a", "b"), ("b", "c"), ("c", "a")],
            "a",
        )
        .unwrap();
        let witness =
            find_simple_lasso_witness(&ring, ring.initial(), &Formula::True, &LabelingTable::new())
                .unwrap()
                .unwrap();
        assert_eq!(witness.cycle.len(), 3);
    }

    #[test]
    fn verdict_dualities() {
        let k = KripkeStructure::assemble(
            &[("a", &["p"]), ("b", &[])],
            &[("a", "b"), ("b", "a"), ("a", "a")],
            "a",
        )
        .unwrap();
        for body in ["G p", "F p", "X p", "p U !p"] {
            let e = check(&k, &format!("E ({body})"));
            let na = check(&k, &format!("!A !({body})"));
            assert_eq!(e, na, "duality on {body}");
            let ec = check(&k, &format!("EC ({body})"));
            let nac = check(&k, &format!("!AC !({body})"));
            assert_eq!(ec, nac, "cycle duality on {body}");
            // Cyc(w) ⊆ Pth(w)
            assert!(!ec || e, "containment on {body}");
        }
    }

    #[test]
    fn unknown_atom_is_reported() {
        let k = KripkeStructure::assemble(&[("a", &["p"])], &[("a", "a")], "a").unwrap();
        assert_eq!(
            model_check(&k, &parse("E F ghost").unwrap()).unwrap_err(),
            CheckError::UnknownAtom("ghost".to_string())
        );
    }

    #[test]
    fn table_rows_follow_nesting_order() {
        let k = KripkeStructure::assemble(
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
        .unwrap();
        let phi = parse("A G (dec -> EC F res1)").unwrap();
        let (_, table) = model_check(&k, &phi).unwrap();
        let rows: Vec<String> = table.rows().map(|(f, _, _)| f.to_string()).collect();
        assert_eq!(rows, vec!["EC F res1", "A G (dec -> EC F res1)"]);
        let tsv = table.to_tsv(&k);
        assert!(tsv.starts_with("formula\ts\td\tr1\tr2\n"));
    }

    #[test]
    fn witnesses_replay_and_satisfy_their_body() {
        let k = KripkeStructure::assemble(
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
        .unwrap();
        let phi = parse("E (G F res1 & G F res2)").unwrap();
        let (verdict, table) = model_check_with_witness(&k, &phi).unwrap();
        assert!(verdict.truth);
        let lasso = verdict.witness.unwrap();
        lasso.validate(&k).unwrap();
        let body = phi.quantifier_body().unwrap();
        assert!(lasso_satisfies(&k, &lasso, body, &table).unwrap());
    }

    #[test]
    fn threaded_and_sequential_agree() {
        let k = KripkeStructure::assemble(
            &[("a", &["p"]), ("b", &["q"]), ("c", &[])],
            &[("a", "b"), ("b", "c"), ("c", "a"), ("b", "b")],
            "a",
        )
        .unwrap();
        let phi = parse("A G (p -> E X q) & EC F q").unwrap();
        let seq = ModelChecker::new().check(&k, &phi).unwrap().0.truth;
        let par = ModelChecker::new()
            .with_threads(4)
            .check(&k, &phi)
            .unwrap()
            .0
            .truth;
        assert_eq!(seq, par);
    }
}
