//! Syntax trees for CTL* with cycle quantifiers.
//!
//! State formulas are built from atoms, boolean connectives and the four
//! path quantifiers `E`, `A`, `EC` (exists a cycle) and `AC` (all cycles),
//! plus the simple-cycle variant `ECs` used by the simple-cycle translation.
//! Path formulas additionally admit `X` and `U`; `F`, `G`, `->` and `false`
//! are definable sugar but kept as explicit nodes so that printing round-trips.

mod parser;

pub use parser::{parse, ParseError};

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Syntactic category of a formula node (mutual grammar of state and path rules).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Category {
    State,
    Path,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("formula is not in normal form (negations must sit on atoms)")]
    NotInNormalForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `E ψ`: some path from the current world satisfies ψ.
    ExistsPath(Box<Formula>),
    /// `A ψ`: all paths from the current world satisfy ψ.
    ForallPath(Box<Formula>),
    /// `EC ψ`: some path revisiting its first world infinitely often satisfies ψ.
    ExistsCycle(Box<Formula>),
    /// `AC ψ`: all such cycle paths satisfy ψ.
    ForallCycle(Box<Formula>),
    /// `ECs ψ`: some simple cycle satisfies ψ (simple-cycle translation target).
    SimpleExistsCycle(Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists_path(f: Formula) -> Self {
        Formula::ExistsPath(Box::new(f))
    }

    pub fn forall_path(f: Formula) -> Self {
        Formula::ForallPath(Box::new(f))
    }

    pub fn exists_cycle(f: Formula) -> Self {
        Formula::ExistsCycle(Box::new(f))
    }

    pub fn forall_cycle(f: Formula) -> Self {
        Formula::ForallCycle(Box::new(f))
    }

    pub fn simple_exists_cycle(f: Formula) -> Self {
        Formula::SimpleExistsCycle(Box::new(f))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn finally(f: Formula) -> Self {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    /// Conjunction of a list, right-nested; the empty conjunction is `true`.
    pub fn conjunction(items: Vec<Formula>) -> Formula {
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => Formula::True,
            Some(last) => iter.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Disjunction of a list, right-nested; the empty disjunction is `false`.
    pub fn disjunction(items: Vec<Formula>) -> Formula {
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => Formula::False,
            Some(last) => iter.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    /// A node is a state formula when it can be derived by the state rule of
    /// the grammar; boolean connectives inherit the coarser category of their
    /// children, temporal operators are always path formulas.
    pub fn category(&self) -> Category {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => Category::State,
            Formula::ExistsPath(_)
            | Formula::ForallPath(_)
            | Formula::ExistsCycle(_)
            | Formula::ForallCycle(_)
            | Formula::SimpleExistsCycle(_) => Category::State,
            Formula::Next(_)
            | Formula::Until(_, _)
            | Formula::Finally(_)
            | Formula::Globally(_) => Category::Path,
            Formula::Not(f) => f.category(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                if a.category() == Category::State && b.category() == Category::State {
                    Category::State
                } else {
                    Category::Path
                }
            }
        }
    }

    pub fn is_state_formula(&self) -> bool {
        self.category() == Category::State
    }

    /// True when the node is one of the five path quantifiers.
    pub fn is_quantifier(&self) -> bool {
        matches!(
            self,
            Formula::ExistsPath(_)
                | Formula::ForallPath(_)
                | Formula::ExistsCycle(_)
                | Formula::ForallCycle(_)
                | Formula::SimpleExistsCycle(_)
        )
    }

    /// The body of a quantifier node, if any.
    pub fn quantifier_body(&self) -> Option<&Formula> {
        match self {
            Formula::ExistsPath(f)
            | Formula::ForallPath(f)
            | Formula::ExistsCycle(f)
            | Formula::ForallCycle(f)
            | Formula::SimpleExistsCycle(f) => Some(f),
            _ => None,
        }
    }

    /// All atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, set: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                set.insert(name.clone());
            }
            Formula::True | Formula::False => {}
            Formula::Not(f)
            | Formula::ExistsPath(f)
            | Formula::ForallPath(f)
            | Formula::ExistsCycle(f)
            | Formula::ForallCycle(f)
            | Formula::SimpleExistsCycle(f)
            | Formula::Next(f)
            | Formula::Finally(f)
            | Formula::Globally(f) => f.collect_atoms(set),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => {
                a.collect_atoms(set);
                b.collect_atoms(set);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => 1,
            Formula::Not(f)
            | Formula::ExistsPath(f)
            | Formula::ForallPath(f)
            | Formula::ExistsCycle(f)
            | Formula::ForallCycle(f)
            | Formula::SimpleExistsCycle(f)
            | Formula::Next(f)
            | Formula::Finally(f)
            | Formula::Globally(f) => 1 + f.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Distinct subformulas in post order (children strictly before parents).
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Atom(_) | Formula::True | Formula::False => {}
                Formula::Not(c)
                | Formula::ExistsPath(c)
                | Formula::ForallPath(c)
                | Formula::ExistsCycle(c)
                | Formula::ForallCycle(c)
                | Formula::SimpleExistsCycle(c)
                | Formula::Next(c)
                | Formula::Finally(c)
                | Formula::Globally(c) => walk(c, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Until(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
            if !out.contains(&f) {
                out.push(f);
            }
        }
        walk(self, &mut out);
        out
    }

    /// Every quantifier-rooted subformula exactly once, ordered so that the
    /// proper quantified subformulas of an entry always precede it.
    pub fn quantified_subformulas(&self) -> Vec<Formula> {
        self.subformulas()
            .into_iter()
            .filter(|f| f.is_quantifier())
            .cloned()
            .collect()
    }

    /// Negation normal form: negations pushed down to atoms using the
    /// quantifier and temporal dualities. `¬(ψ₁ U ψ₂)` is expanded to
    /// `(¬ψ₂ U (¬ψ₁ ∧ ¬ψ₂)) ∨ G ¬ψ₂`, staying inside the X/U/F/G grammar.
    /// `ECs` has no universal dual, so a negation immediately above it is
    /// the one that stays in place.
    pub fn to_nnf(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => self.clone(),
            Formula::Not(f) => f.negate_nnf(),
            Formula::And(a, b) => Formula::and(a.to_nnf(), b.to_nnf()),
            Formula::Or(a, b) => Formula::or(a.to_nnf(), b.to_nnf()),
            Formula::Implies(a, b) => Formula::or(a.negate_nnf(), b.to_nnf()),
            Formula::ExistsPath(f) => Formula::exists_path(f.to_nnf()),
            Formula::ForallPath(f) => Formula::forall_path(f.to_nnf()),
            Formula::ExistsCycle(f) => Formula::exists_cycle(f.to_nnf()),
            Formula::ForallCycle(f) => Formula::forall_cycle(f.to_nnf()),
            Formula::SimpleExistsCycle(f) => Formula::simple_exists_cycle(f.to_nnf()),
            Formula::Next(f) => Formula::next(f.to_nnf()),
            Formula::Until(a, b) => Formula::until(a.to_nnf(), b.to_nnf()),
            Formula::Finally(f) => Formula::finally(f.to_nnf()),
            Formula::Globally(f) => Formula::globally(f.to_nnf()),
        }
    }

    /// NNF of the negation of `self`.
    fn negate_nnf(&self) -> Formula {
        match self {
            Formula::Atom(_) => Formula::not(self.clone()),
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(f) => f.to_nnf(),
            Formula::And(a, b) => Formula::or(a.negate_nnf(), b.negate_nnf()),
            Formula::Or(a, b) => Formula::and(a.negate_nnf(), b.negate_nnf()),
            Formula::Implies(a, b) => Formula::and(a.to_nnf(), b.negate_nnf()),
            Formula::ExistsPath(f) => Formula::forall_path(f.negate_nnf()),
            Formula::ForallPath(f) => Formula::exists_path(f.negate_nnf()),
            Formula::ExistsCycle(f) => Formula::forall_cycle(f.negate_nnf()),
            Formula::ForallCycle(f) => Formula::exists_cycle(f.negate_nnf()),
            // No dual quantifier exists; the negation stays put.
            Formula::SimpleExistsCycle(f) => Formula::not(Formula::simple_exists_cycle(f.to_nnf())),
            Formula::Next(f) => Formula::next(f.negate_nnf()),
            Formula::Until(a, b) => {
                let na = a.negate_nnf();
                let nb = b.negate_nnf();
                Formula::or(
                    Formula::until(nb.clone(), Formula::and(na, nb.clone())),
                    Formula::globally(nb),
                )
            }
            Formula::Finally(f) => Formula::globally(f.negate_nnf()),
            Formula::Globally(f) => Formula::finally(f.negate_nnf()),
        }
    }

    /// Normal form per the cycle logic: every negation sits directly on an atom.
    pub fn is_normal_form(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => a.is_normal_form() && b.is_normal_form(),
            Formula::ExistsPath(f)
            | Formula::ForallPath(f)
            | Formula::ExistsCycle(f)
            | Formula::ForallCycle(f)
            | Formula::SimpleExistsCycle(f)
            | Formula::Next(f)
            | Formula::Finally(f)
            | Formula::Globally(f) => f.is_normal_form(),
        }
    }

    /// Simple-cycle translation: replace every `EC` by `ECs`, recursively.
    /// Only defined on formulas in normal form.
    pub fn simple_cycle_translate(&self) -> Result<Formula, FormulaError> {
        if !self.is_normal_form() {
            return Err(FormulaError::NotInNormalForm);
        }
        Ok(self.replace_exists_cycle())
    }

    fn replace_exists_cycle(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => self.clone(),
            Formula::Not(f) => Formula::not(f.replace_exists_cycle()),
            Formula::And(a, b) => Formula::and(a.replace_exists_cycle(), b.replace_exists_cycle()),
            Formula::Or(a, b) => Formula::or(a.replace_exists_cycle(), b.replace_exists_cycle()),
            Formula::Implies(a, b) => {
                Formula::implies(a.replace_exists_cycle(), b.replace_exists_cycle())
            }
            Formula::ExistsPath(f) => Formula::exists_path(f.replace_exists_cycle()),
            Formula::ForallPath(f) => Formula::forall_path(f.replace_exists_cycle()),
            Formula::ExistsCycle(f) => Formula::simple_exists_cycle(f.replace_exists_cycle()),
            Formula::ForallCycle(f) => Formula::forall_cycle(f.replace_exists_cycle()),
            Formula::SimpleExistsCycle(f) => Formula::simple_exists_cycle(f.replace_exists_cycle()),
            Formula::Next(f) => Formula::next(f.replace_exists_cycle()),
            Formula::Until(a, b) => {
                Formula::until(a.replace_exists_cycle(), b.replace_exists_cycle())
            }
            Formula::Finally(f) => Formula::finally(f.replace_exists_cycle()),
            Formula::Globally(f) => Formula::globally(f.replace_exists_cycle()),
        }
    }

    /// Binding strength used by the printer; atoms bind tightest.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => 5,
            Formula::Not(_)
            | Formula::ExistsPath(_)
            | Formula::ForallPath(_)
            | Formula::ExistsCycle(_)
            | Formula::ForallCycle(_)
            | Formula::SimpleExistsCycle(_)
            | Formula::Next(_)
            | Formula::Finally(_)
            | Formula::Globally(_) => 4,
            Formula::Until(_, _) => 3,
            Formula::And(_, _) => 2,
            Formula::Or(_, _) => 1,
            Formula::Implies(_, _) => 0,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Atom(name) => write!(f, "{name}"),
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Not(c) => {
                write!(f, "!")?;
                c.fmt_prec(f, 4)
            }
            Formula::ExistsPath(c) => {
                write!(f, "E ")?;
                c.fmt_prec(f, 4)
            }
            Formula::ForallPath(c) => {
                write!(f, "A ")?;
                c.fmt_prec(f, 4)
            }
            Formula::ExistsCycle(c) => {
                write!(f, "EC ")?;
                c.fmt_prec(f, 4)
            }
            Formula::ForallCycle(c) => {
                write!(f, "AC ")?;
                c.fmt_prec(f, 4)
            }
            Formula::SimpleExistsCycle(c) => {
                write!(f, "ECs ")?;
                c.fmt_prec(f, 4)
            }
            Formula::Next(c) => {
                write!(f, "X ")?;
                c.fmt_prec(f, 4)
            }
            Formula::Finally(c) => {
                write!(f, "F ")?;
                c.fmt_prec(f, 4)
            }
            Formula::Globally(c) => {
                write!(f, "G ")?;
                c.fmt_prec(f, 4)
            }
            Formula::Until(a, b) => {
                a.fmt_prec(f, 4)?;
                write!(f, " U ")?;
                b.fmt_prec(f, 3)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 2)
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 1)
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 0)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn category_of_mixed_connectives() {
        assert_eq!(p().category(), Category::State);
        assert_eq!(Formula::next(p()).category(), Category::Path);
        assert_eq!(
            Formula::and(p(), Formula::next(p())).category(),
            Category::Path
        );
        assert_eq!(
            Formula::exists_path(Formula::next(p())).category(),
            Category::State
        );
        assert_eq!(
            Formula::not(Formula::globally(p())).category(),
            Category::Path
        );
    }

    #[test]
    fn printer_inserts_minimal_parens() {
        let f = Formula::exists_path(Formula::and(
            Formula::globally(Formula::finally(Formula::atom("res1"))),
            Formula::globally(Formula::finally(Formula::atom("res2"))),
        ));
        assert_eq!(f.to_string(), "E (G F res1 & G F res2)");

        let g = Formula::until(p(), Formula::until(q(), Formula::atom("r")));
        assert_eq!(g.to_string(), "p U q U r");
        let h = Formula::until(Formula::until(p(), q()), Formula::atom("r"));
        assert_eq!(h.to_string(), "(p U q) U r");
    }

    #[test]
    fn nnf_de_morgan_and_next() {
        let f = Formula::not(Formula::and(p(), q()));
        assert_eq!(
            f.to_nnf(),
            Formula::or(Formula::not(p()), Formula::not(q()))
        );

        let g = Formula::not(Formula::next(p()));
        assert_eq!(g.to_nnf(), Formula::next(Formula::not(p())));
    }

    #[test]
    fn nnf_cycle_quantifier_duality() {
        let f = Formula::not(Formula::exists_cycle(Formula::True));
        assert_eq!(f.to_nnf(), Formula::forall_cycle(Formula::False));

        let g = Formula::not(Formula::forall_cycle(p()));
        assert_eq!(g.to_nnf(), Formula::exists_cycle(Formula::not(p())));
    }

    #[test]
    fn nnf_negated_until_uses_release_expansion() {
        let f = Formula::not(Formula::until(p(), q()));
        let nq = Formula::not(q());
        let expected = Formula::or(
            Formula::until(nq.clone(), Formula::and(Formula::not(p()), nq.clone())),
            Formula::globally(nq),
        );
        assert_eq!(f.to_nnf(), expected);
        assert!(f.to_nnf().is_normal_form());
    }

    #[test]
    fn quantified_subformulas_inner_first() {
        // A G (dec -> EC F res1)
        let inner = Formula::exists_cycle(Formula::finally(Formula::atom("res1")));
        let outer = Formula::forall_path(Formula::globally(Formula::implies(
            Formula::atom("dec"),
            inner.clone(),
        )));
        assert_eq!(outer.quantified_subformulas(), vec![inner, outer.clone()]);

        let single = Formula::exists_path(Formula::next(p()));
        assert_eq!(single.quantified_subformulas(), vec![single.clone()]);
    }

    #[test]
    fn quantified_subformulas_dedup() {
        let e = Formula::exists_path(Formula::next(p()));
        let f = Formula::and(e.clone(), e.clone());
        assert_eq!(f.quantified_subformulas(), vec![e]);
    }

    #[test]
    fn simple_cycle_translation_replaces_only_exists_cycle() {
        let f = Formula::exists_cycle(Formula::globally(p()));
        assert_eq!(
            f.simple_cycle_translate().unwrap(),
            Formula::simple_exists_cycle(Formula::globally(p()))
        );

        let g = Formula::forall_cycle(Formula::finally(p()));
        assert_eq!(g.simple_cycle_translate().unwrap(), g);

        let nested = Formula::exists_cycle(Formula::until(p(), Formula::exists_cycle(q())));
        let expected =
            Formula::simple_exists_cycle(Formula::until(p(), Formula::simple_exists_cycle(q())));
        assert_eq!(nested.simple_cycle_translate().unwrap(), expected);
    }

    #[test]
    fn simple_cycle_translation_rejects_non_normal_form() {
        let f = Formula::not(Formula::exists_cycle(p()));
        assert_eq!(
            f.simple_cycle_translate(),
            Err(FormulaError::NotInNormalForm)
        );
    }

    #[test]
    fn conjunction_disjunction_conventions() {
        assert_eq!(Formula::conjunction(vec![]), Formula::True);
        assert_eq!(Formula::disjunction(vec![]), Formula::False);
        assert_eq!(
            Formula::conjunction(vec![p(), q(), Formula::atom("r")]),
            Formula::and(p(), Formula::and(q(), Formula::atom("r")))
        );
    }
}
