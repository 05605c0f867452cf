//! Randomised invariants. Each case draws a seed and builds its inputs
//! with the seeded generators.

use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tree_games::automata::{
    ata_membership, dualize_sdtt, game_ata_to_nta, nta_emptiness, nta_membership, play_language_nta, preimage_hash,
    sdtt_membership, sdtt_to_game_ata, Alphabet, Nta, NtaBuilder,
};
use tree_games::game::{
    check_strategy, complementarity_guard, enumerate_strategies, play, reduce_to_parity_full, sdtt_check_automaton,
    solve_game_automaton_objective, FiniteMemoryStrategy, TreeGame, VertexKind,
};
use tree_games::parity::{play_out, solve, solve_naive, ParityGame, Player};
use tree_games::random::*;
use tree_games::text::{parse, Item};
use tree_games::tree::{
    hash_injection, hash_projection, hash_reduction, maximal_hash_paths, partial_hash_reduction, Context, FiniteTree,
    RegularTree,
};
use tree_games::{Address, Dir, Symbol};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ab() -> Vec<Symbol> {
    vec![Symbol::new("a"), Symbol::new("b")]
}

fn ab_alphabet() -> Alphabet {
    Alphabet::from_strs(&["a", "b"])
}

fn with_blank(symbols: &[Symbol]) -> Vec<Symbol> {
    symbols.iter().cloned().chain([Symbol::blank()]).collect()
}

fn one_state(rank: u32) -> Nta {
    let mut b = NtaBuilder::new(format!("r{rank}"), ab_alphabet());
    let q = b.add_state("q", rank);
    b.set_initial(q);
    for x in ab_alphabet().symbols() {
        b.add_transition(q, x, q, q).unwrap();
    }
    b.build().unwrap()
}

fn normal_forms(t: &RegularTree) -> Vec<RegularTree> {
    let mut seen = HashSet::new();
    let mut forms: Vec<RegularTree> = Vec::new();
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        if !seen.insert(format!("{t:?}")) {
            continue;
        }
        let paths = maximal_hash_paths(&t);
        if paths.is_empty() && !forms.iter().any(|f| f.equivalent(&t)) {
            forms.push(t.clone());
        }
        for p in &paths {
            stack.push(partial_hash_reduction(&t, p).unwrap());
        }
    }
    forms
}

/// All total positional strategies of `p`.
fn positional(g: &ParityGame, p: Player) -> Vec<Vec<Option<Dir>>> {
    let owned: Vec<usize> = (0..g.len()).filter(|&v| g.owner(v) == p).collect();
    (0..1usize << owned.len())
        .map(|bits| {
            let mut s = vec![None; g.len()];
            for (i, &v) in owned.iter().enumerate() {
                s[v] = Some(if bits >> i & 1 == 1 { Dir::Right } else { Dir::Left });
            }
            s
        })
        .collect()
}

/// All memoryless strategies of `p` in `g`.
fn memoryless(g: &TreeGame, p: Player) -> Vec<FiniteMemoryStrategy> {
    let owned: Vec<&str> = g
        .vertices()
        .iter()
        .filter(|v| v.kind == VertexKind::Player(p))
        .map(|v| v.name.as_str())
        .collect();
    (0..1usize << owned.len())
        .map(|bits| {
            let choices: Vec<(&str, Dir)> = owned
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, if bits >> i & 1 == 1 { Dir::Right } else { Dir::Left }))
                .collect();
            FiniteMemoryStrategy::memoryless(g, p, &choices)
        })
        .collect()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn collapse_order_does_not_matter(seed in any::<u64>()) {
        let symbols = [Symbol::new("a"), Symbol::hash(), Symbol::hash(), Symbol::new("b")];
        let t = random_finite_tree(&mut rng(seed), &symbols, 5);
        let forms = normal_forms(&t);
        prop_assert_eq!(forms.len(), 1);
        prop_assert!(forms[0].equivalent(&hash_reduction(&t)));
    }

    #[test]
    fn projection_is_hash_free_and_idempotent(seed in any::<u64>()) {
        let t = random_hash_tree(&mut rng(seed), &ab(), 6);
        if let Some(p) = hash_projection(&t) {
            prop_assert!(!p.symbols().contains(&Symbol::hash()));
            let again = hash_projection(&p).expect("projection of a #-free tree");
            prop_assert!(again.equivalent(&p));
        }
    }

    #[test]
    fn injection_preserves_labels(seed in any::<u64>()) {
        let t = random_hash_tree(&mut rng(seed), &ab(), 6);
        if let (Some(p), Some(inj)) = (hash_projection(&t), hash_injection(&t)) {
            prop_assert!(inj.tree().equivalent(&p));
            for u in p.non_blank_addresses(40) {
                let v = inj.map(&u).expect("non-blank node maps back");
                prop_assert_eq!(t.label_at(&v), p.label_at(&u));
            }
        }
    }

    #[test]
    fn replace_then_subtree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let symbols = with_blank(&ab());
        let t = random_regular_tree(&mut r, &symbols, 5);
        let s = random_regular_tree(&mut r, &symbols, 4);
        let mut spots = t.non_blank_addresses(12);
        spots.push(Address::root());
        let u = spots[r.gen_range(0..spots.len())].clone();
        let u = if r.gen() { u.child(Dir::Left) } else { u };
        if let Ok(t2) = t.replace(&u, &s) {
            prop_assert!(t2.subtree(&u).equivalent(&s));
        }
    }

    #[test]
    fn graft_is_two_replacements(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_finite_tree(&mut r, &ab(), 4);
        let spots = t.non_blank_addresses(20);
        if spots.is_empty() {
            return Ok(());
        }
        let u = spots[r.gen_range(0..spots.len())].clone();
        let c = Context::cut(&t, u.clone()).unwrap();
        let symbols = with_blank(&ab());
        let (t1, t2) = (random_regular_tree(&mut r, &symbols, 3), random_regular_tree(&mut r, &symbols, 3));
        let direct = c
            .tree()
            .replace(&u.child(Dir::Left), &t1)
            .and_then(|x| x.replace(&u.child(Dir::Right), &t2))
            .unwrap();
        prop_assert!(c.graft(&t1, &t2).unwrap().equivalent(&direct));
        prop_assert!(FiniteTree::new(c.tree().tree().clone()).is_ok());
    }

    #[test]
    fn solvers_agree_and_regions_partition(seed in any::<u64>()) {
        let g = random_parity_game(&mut rng(seed), 8, 4);
        let sol = solve(&g);
        prop_assert_eq!(sol.winner.len(), g.len());
        prop_assert_eq!(&sol.winner, &solve_naive(&g));
        let r0 = sol.region(Player::Zero);
        let r1 = sol.region(Player::One);
        prop_assert_eq!(r0.len() + r1.len(), g.len());
    }

    #[test]
    fn winning_strategies_beat_every_counter_strategy(seed in any::<u64>()) {
        let g = random_parity_game(&mut rng(seed), 5, 4);
        let sol = solve(&g);
        for p in [Player::Zero, Player::One] {
            let mine = sol.strategy_of(&g, p);
            for theirs in positional(&g, p.opponent()) {
                for v in sol.region(p) {
                    let (s0, s1) = if p == Player::Zero { (&mine, &theirs) } else { (&theirs, &mine) };
                    let out = play_out(&g, s0, s1, v).unwrap();
                    prop_assert_eq!(out.winner(), p);
                    let lowest = *out.cycle_ranks.iter().min().unwrap();
                    prop_assert_eq!(Player::of_rank(lowest), p);
                }
            }
        }
    }

    #[test]
    fn transducer_chains_agree_and_duals_complement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_sdtt(&mut r, &ab_alphabet(), 5, 3);
        let ga = sdtt_to_game_ata(&d);
        let nta = game_ata_to_nta(&ga);
        let dual = dualize_sdtt(&d);
        for _ in 0..25 {
            let t = random_regular_tree(&mut r, &with_blank(&ab()), 5);
            let m = sdtt_membership(&d, &t).unwrap();
            prop_assert_eq!(ata_membership(ga.ata(), &t).unwrap(), m);
            prop_assert_eq!(nta_membership(&nta, &t).unwrap(), m);
            prop_assert!(m ^ sdtt_membership(&dual, &t).unwrap());
        }
    }

    #[test]
    fn preimage_reads_through_projection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_nta(&mut r, &ab_alphabet(), 4, 0, 3);
        let lifted = preimage_hash(&a).unwrap();
        for _ in 0..25 {
            let t = random_hash_tree(&mut r, &ab(), 6);
            if let Some(p) = hash_projection(&t) {
                prop_assert_eq!(nta_membership(&lifted, &t).unwrap(), nta_membership(&a, &p).unwrap());
            }
        }
    }

    #[test]
    fn emptiness_witnesses_are_accepted(seed in any::<u64>()) {
        let a = random_nta(&mut rng(seed), &ab_alphabet(), 4, 0, 3);
        let e = nta_emptiness(&a);
        prop_assert_eq!(e.nonempty, e.witness.is_some());
        if let Some(w) = e.witness {
            prop_assert!(nta_membership(&a, &w).unwrap());
        }
    }

    #[test]
    fn preimage_keeps_the_index(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (lo, hi) = (r.gen_range(0..3), r.gen_range(0..3));
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let a = random_nta(&mut r, &ab_alphabet(), 4, lo, hi);
        let (i, j) = a.index();
        if (i..=j).any(|k| k % 2 == 0) {
            prop_assert_eq!(preimage_hash(&a).unwrap().index(), (i, j));
        }
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn solved_games_are_certified(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_tree_game(&mut r, &ab(), 4, true);
        let d = random_sdtt(&mut r, &ab_alphabet(), 3, 3);
        let sol = solve_game_automaton_objective(&g, &d).unwrap();
        prop_assert!(check_strategy(&g, &sol.strategy, &sdtt_check_automaton(&d, sol.winner).unwrap()).unwrap());
        let loser = sol.winner.opponent();
        let against = sdtt_check_automaton(&d, loser).unwrap();
        for s in enumerate_strategies(&g, loser, 2) {
            prop_assert!(!check_strategy(&g, &s, &against).unwrap());
        }
    }

    #[test]
    fn product_size_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_tree_game(&mut r, &ab(), 6, true);
        let d = random_sdtt(&mut r, &ab_alphabet(), 4, 3);
        let red = reduce_to_parity_full(&g, &d).unwrap();
        prop_assert!(red.h.len() <= 3 * g.len() * d.num_states());
    }

    #[test]
    fn trivial_objectives_decide_every_strategy(seed in any::<u64>()) {
        let g = random_tree_game(&mut rng(seed), &ab(), 4, false);
        let (all, empty) = (one_state(0), one_state(1));
        for p in [Player::Zero, Player::One] {
            for s in enumerate_strategies(&g, p, 2) {
                prop_assert!(check_strategy(&g, &s, &empty).unwrap());
                prop_assert!(!check_strategy(&g, &s, &all).unwrap());
            }
        }
    }

    #[test]
    fn plays_lie_in_the_play_language(seed in any::<u64>()) {
        let g = random_tree_game(&mut rng(seed), &ab(), 4, true);
        let plays = play_language_nta(&g);
        let s0 = enumerate_strategies(&g, Player::Zero, 2);
        let s1 = enumerate_strategies(&g, Player::One, 2);
        for a in &s0 {
            for b in &s1 {
                prop_assert!(nta_membership(&plays, &play(&g, a, b).unwrap()).unwrap());
            }
        }
        let w = nta_emptiness(&plays).witness.expect("every game has a play");
        let realised = memoryless(&g, Player::Zero).iter().any(|a| {
            memoryless(&g, Player::One).iter().any(|b| play(&g, a, b).unwrap().equivalent(&w))
        });
        prop_assert!(realised);
    }

    #[test]
    fn guard_separates_complements_from_copies(seed in any::<u64>()) {
        let g = random_tree_game(&mut rng(seed), &ab(), 4, false);
        let (all, empty) = (one_state(0), one_state(1));
        prop_assert!(complementarity_guard(&g, &all, &empty, seed).is_ok());
        prop_assert!(complementarity_guard(&g, &all, &all, seed).is_err());
    }

    #[test]
    fn emitted_text_parses_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let tree = random_regular_tree(&mut r, &with_blank(&ab()), 5);
        let nta = random_nta(&mut r, &ab_alphabet(), 4, 0, 3);
        let d = random_sdtt(&mut r, &ab_alphabet(), 4, 3);
        let g = random_tree_game(&mut r, &ab(), 5, true);
        let s = enumerate_strategies(&g, Player::One, 2).pop().unwrap();
        let items = [
            Item::Tree("t".into(), tree.clone()),
            Item::Pg("h".into(), random_parity_game(&mut r, 6, 4)),
            Item::Nta(nta.clone()),
            Item::Sdtt(d.clone()),
            Item::Ata(sdtt_to_game_ata(&d).ata().clone()),
            Item::Game(g.clone()),
            Item::Strategy(s.clone()),
        ];
        for item in &items {
            let text = item.emit();
            let back = parse(&text).unwrap();
            prop_assert_eq!(back.len(), 1);
            prop_assert_eq!(back[0].emit(), text);
            match (&back[0], item) {
                (Item::Tree(_, a), Item::Tree(_, b)) => prop_assert!(a.equivalent(b)),
                (Item::Game(a), Item::Game(b)) => prop_assert_eq!(a, b),
                (Item::Strategy(a), Item::Strategy(b)) => prop_assert_eq!(a, b),
                (Item::Nta(a), Item::Nta(b)) => {
                    for _ in 0..10 {
                        let t = random_regular_tree(&mut r, &with_blank(&ab()), 4);
                        prop_assert_eq!(nta_membership(a, &t).unwrap(), nta_membership(b, &t).unwrap());
                    }
                }
                (Item::Sdtt(a), Item::Sdtt(b)) => {
                    for _ in 0..10 {
                        let t = random_regular_tree(&mut r, &with_blank(&ab()), 4);
                        prop_assert_eq!(sdtt_membership(a, &t).unwrap(), sdtt_membership(b, &t).unwrap());
                    }
                }
                _ => {}
            }
        }
    }
}
