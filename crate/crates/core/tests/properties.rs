//! Cross-module properties: printer/parser round trips, normal-form
//! equivalence, subformula ordering, the graph-level cycle test against the
//! cycle quantifier, and the parity objective against a direct winner oracle.

use cyclecheck_core::checker::{model_check, ModelChecker};
use cyclecheck_core::corpus;
use cyclecheck_core::formula::{parse, Category, Formula};
use cyclecheck_core::kripke::{build_parity_formula, KripkeStructure, ParityGame, Player, World};
use proptest::collection::vec;
use proptest::prelude::*;

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::atom("res1")),
    ];
    leaf.prop_recursive(6, 96, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::finally),
            inner.clone().prop_map(Formula::globally),
            inner.clone().prop_map(Formula::exists_path),
            inner.clone().prop_map(Formula::forall_path),
            inner.clone().prop_map(Formula::exists_cycle),
            inner.clone().prop_map(Formula::forall_cycle),
            inner.prop_map(Formula::simple_exists_cycle),
        ]
    })
}

fn arb_state_formula() -> impl Strategy<Value = Formula> {
    arb_formula().prop_map(|f| {
        if f.category() == Category::State {
            f
        } else {
            Formula::exists_path(f)
        }
    })
}

fn arb_kripke() -> impl Strategy<Value = KripkeStructure> {
    (1usize..=3).prop_flat_map(|n| {
        (
            vec(vec(0..n, 1..=n), n),
            vec((any::<bool>(), any::<bool>()), n),
        )
            .prop_map(move |(succs, label_bits)| {
                let names = (0..n).map(|i| format!("w{i}")).collect();
                let labels = label_bits
                    .iter()
                    .map(|&(p, q)| {
                        let mut set = std::collections::BTreeSet::new();
                        if p {
                            set.insert("p".to_string());
                        }
                        if q {
                            set.insert("q".to_string());
                        }
                        set
                    })
                    .collect();
                let atoms = ["p", "q"].iter().map(|s| s.to_string()).collect();
                KripkeStructure::from_indexed(names, labels, succs, 0, atoms).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_identity(f in arb_state_formula()) {
        let printed = f.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &f);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn quantified_subformulas_respect_the_subformula_order(f in arb_formula()) {
        let subs = f.quantified_subformulas();
        for i in 0..subs.len() {
            for j in (i + 1)..subs.len() {
                let later_inside_earlier = subs[i].subformulas().contains(&&subs[j]);
                prop_assert!(!later_inside_earlier, "{} precedes its subformula {}", subs[i], subs[j]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn negation_normal_form_preserves_verdicts(
        k in arb_kripke(),
        seed in any::<u64>(),
    ) {
        let mut rng = corpus::Rng::new(seed);
        let f = corpus::random_state_formula(&mut rng, 3, &["p", "q"]);
        let nnf = f.to_nnf();
        if !f.subformulas().iter().any(|s| matches!(s, Formula::SimpleExistsCycle(_))) {
            prop_assert!(nnf.is_normal_form(), "{} not in normal form", nnf);
        }
        let a = model_check(&k, &f).unwrap().0.truth;
        let b = model_check(&k, &nnf).unwrap().0.truth;
        prop_assert_eq!(a, b, "`{}` vs `{}`", f, nnf);
    }
}

#[test]
fn automata_match_direct_word_evaluation_on_random_formulas() {
    use cyclecheck_core::buchi::{ltl_to_nba, product, Letter, Nba};
    use cyclecheck_core::checker::wordeval::{eval_path_formula, PositionContext};
    use cyclecheck_core::checker::CheckError;
    use std::collections::BTreeSet;

    struct Letters(Vec<BTreeSet<String>>);
    impl PositionContext for Letters {
        fn atom(&mut self, pos: usize, name: &str) -> Result<bool, CheckError> {
            Ok(self.0[pos].contains(name))
        }
        fn quantified(&mut self, _: usize, f: &Formula) -> Result<bool, CheckError> {
            panic!("quantifier {f} in a letter word");
        }
    }

    // membership through the product machinery: the word becomes a one-path
    // structure
    fn accepts(nba: &Nba, word: &[BTreeSet<String>], prefix_len: usize) -> bool {
        let names: Vec<String> = (0..word.len()).map(|i| format!("w{i}")).collect();
        let labeled: Vec<(&str, Vec<&str>)> = names
            .iter()
            .zip(word)
            .map(|(n, l)| (n.as_str(), l.iter().map(|s| s.as_str()).collect()))
            .collect();
        let worlds: Vec<(&str, &[&str])> =
            labeled.iter().map(|(n, l)| (*n, l.as_slice())).collect();
        let mut edges = Vec::new();
        for i in 0..word.len() {
            let j = if i + 1 < word.len() {
                i + 1
            } else {
                prefix_len
            };
            edges.push((names[i].as_str(), names[j].as_str()));
        }
        let k = KripkeStructure::assemble(&worlds, &edges, &names[0]).unwrap();
        let letters: Vec<Letter> = k
            .worlds()
            .map(|w| nba.letter_from(|a| k.holds(w, a)))
            .collect();
        product(&k, k.initial(), nba, &letters).has_accepting_run()
    }

    let letter_choices: [&[&str]; 4] = [&[], &["p"], &["q"], &["p", "q"]];
    let mut words: Vec<(Vec<BTreeSet<String>>, usize)> = Vec::new();
    for pl in 0..=2usize {
        for cl in 1..=2usize {
            let total = pl + cl;
            let mut combo = vec![0usize; total];
            loop {
                words.push((
                    combo
                        .iter()
                        .map(|&i| letter_choices[i].iter().map(|s| s.to_string()).collect())
                        .collect(),
                    pl,
                ));
                let mut i = 0;
                while i < total {
                    combo[i] += 1;
                    if combo[i] < letter_choices.len() {
                        break;
                    }
                    combo[i] = 0;
                    i += 1;
                }
                if i == total {
                    break;
                }
            }
        }
    }

    let mut rng = corpus::Rng::new(0xFEED);
    let mut tested = 0;
    while tested < 60 {
        let psi = corpus::random_path_formula(&mut rng, 3, &["p", "q"]);
        if !psi.quantified_subformulas().is_empty() {
            continue;
        }
        let nba = ltl_to_nba(&psi).unwrap();
        for (word, prefix_len) in &words {
            let direct =
                eval_path_formula(&psi, *prefix_len, word.len(), &mut Letters(word.clone()))
                    .unwrap();
            assert_eq!(
                accepts(&nba, word, *prefix_len),
                direct,
                "`{psi}` on {word:?} with loop at {prefix_len}"
            );
        }
        tested += 1;
    }
}

#[test]
fn graph_cycle_test_matches_cycle_quantifier_exhaustively() {
    // every structure with up to four worlds over one atom
    let ec_true = parse("EC true").unwrap();
    let mut checker = ModelChecker::new();
    let mut checked = 0u64;
    for k in corpus::all_structures_up_to(4, &["p"]) {
        let (_, table) = checker.check(&k, &ec_true).unwrap();
        for w in k.worlds() {
            assert_eq!(
                k.lies_on_cycle(w),
                table.truth(&ec_true, w).unwrap(),
                "world {} of\n{}",
                k.name(w),
                k.to_text()
            );
            checked += 1;
        }
    }
    assert!(checked > 3_000_000 / 16);
    println!("lies_on_cycle agreed with EC true on {checked} worlds");
}

/// Direct parity-winner oracle on the strategy-restricted graph: Player 0
/// wins iff every simple cycle reachable from the start has an even maximal
/// priority.
fn parity_winner_direct(game: &ParityGame) -> bool {
    let k = game.project().unwrap();
    let priority_of = |w: World| -> usize {
        let label = k.labels(w).iter().next().unwrap().clone();
        label[1..].parse().unwrap()
    };
    // reachable worlds
    let mut seen = vec![false; k.world_count()];
    let mut stack = vec![k.initial()];
    seen[k.initial().0] = true;
    while let Some(w) = stack.pop() {
        for v in k.successors(w) {
            if !seen[v.0] {
                seen[v.0] = true;
                stack.push(v);
            }
        }
    }
    // simple cycles via DFS from each reachable world
    fn cycles_ok(
        k: &KripkeStructure,
        priority_of: &dyn Fn(World) -> usize,
        path: &mut Vec<World>,
    ) -> bool {
        let last = *path.last().unwrap();
        if k.has_edge(last, path[0]) {
            let max = path.iter().map(|&w| priority_of(w)).max().unwrap();
            if max % 2 == 1 {
                return false;
            }
        }
        let succs: Vec<World> = k.successors(last).collect();
        for v in succs {
            if path.contains(&v) {
                continue;
            }
            path.push(v);
            let ok = cycles_ok(k, priority_of, path);
            path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    k.worlds()
        .filter(|w| seen[w.0])
        .all(|w| cycles_ok(&k, &priority_of, &mut vec![w]))
}

#[test]
fn parity_objective_matches_direct_winner_oracle() {
    let mut rng = corpus::Rng::new(0x9A9E);
    let mut checker = ModelChecker::new();
    for _ in 0..120 {
        let n = 2 + rng.below(4); // up to 5 states
        let mut states = Vec::new();
        let mut raw_priorities: Vec<usize> = (0..n).map(|_| rng.below(4)).collect();
        // compact to an initial segment
        let mut distinct: Vec<usize> = raw_priorities.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for p in &mut raw_priorities {
            *p = distinct.iter().position(|d| d == p).unwrap();
        }
        let mut edges = Vec::new();
        let mut strategy = vec![None; n];
        for i in 0..n {
            let owner = if rng.chance(1, 2) {
                Player::Zero
            } else {
                Player::One
            };
            states.push((format!("v{i}"), owner, raw_priorities[i]));
            let out: Vec<usize> = {
                let mut o = vec![rng.below(n)];
                if rng.chance(1, 2) {
                    o.push(rng.below(n));
                }
                o.sort_unstable();
                o.dedup();
                o
            };
            if owner == Player::Zero {
                strategy[i] = Some(out[rng.below(out.len())]);
            }
            for &d in &out {
                edges.push((i, d));
            }
        }
        let game = ParityGame::from_parts(states, edges, 0, strategy);
        game.validate().unwrap();
        let k = game.project().unwrap();
        let phi = build_parity_formula(game.max_priority());
        let checked = checker.check(&k, &phi).unwrap().0.truth;
        let direct = parity_winner_direct(&game);
        assert_eq!(checked, direct, "on game\n{}", k.to_text());
    }
}
