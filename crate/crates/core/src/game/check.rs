use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    enumerate_strategies, strategy_tree, validate_strategy_tree, FiniteMemoryStrategy, GameError, TreeGame,
    VertexKind,
};
use crate::automata::{
    dualize_sdtt, game_ata_to_nta, intersect_with_safety, nta_emptiness, nta_membership, play_language_nta,
    preimage_hash, sdtt_to_game_ata, Alphabet, Nta, NtaBuilder, Sdtt,
};
use crate::parity::Player;
use crate::random::random_regular_tree;
use crate::symbol::Symbol;
use crate::tree::hash_projection;

/// Number of sampled trees in the complementarity guard.
pub const GUARD_SAMPLES: usize = 100;

/// NTA whose language is the set of trees `b` accepts, read along the
/// pre-plays a strategy tree allows.
///
/// States are `q@v` for a state of `b` and a vertex, plus `q@_` for
/// positions the pre-play leaves blank. A blank state simulates `b` on
/// the blank letter whatever it reads. At a player vertex the pre-play
/// keeps one child and blanks the other; at a branching vertex it keeps
/// both.
pub fn strategy_set_nta(g: &TreeGame, b: &Nta, owner: Player) -> Result<Nta, GameError> {
    for v in g.vertices() {
        if !b.alphabet().contains(&v.label) {
            return Err(GameError::LabelNotInObjective(v.label.clone(), v.name.clone()));
        }
    }
    let letters: Vec<Symbol> = (0..g.len()).map(|v| g.vertex_symbol(v)).collect();
    let alphabet = Alphabet::new(letters.iter().cloned());
    let mut nb = NtaBuilder::new(format!("{}_strat{}", b.name(), owner.index()), alphabet.clone());
    let n = g.len();
    // state (q, v) is q * (n + 1) + v, with v = n for blank
    let id = |q: usize, v: usize| q * (n + 1) + v;
    for q in 0..b.num_states() {
        for v in 0..=n {
            let vname = if v == n { Symbol::BLANK_TEXT } else { g.name_of(v) };
            nb.add_state(format!("{}@{}", b.state_name(q), vname), b.rank(q));
        }
    }
    nb.set_initial(id(b.initial(), g.initial()));
    let blank = Symbol::blank();
    for q in 0..b.num_states() {
        for &(q0, q1) in b.transitions_on(q, &blank) {
            for a in alphabet.symbols() {
                nb.add_transition(id(q, n), a, id(q0, n), id(q1, n))?;
            }
        }
        for (v, letter) in letters.iter().enumerate().take(n) {
            let [v0, v1] = g.vertex(v).succ;
            for &(q0, q1) in b.transitions_on(q, g.label(v)) {
                let pairs = match g.kind(v) {
                    VertexKind::Branching => vec![(id(q0, v0), id(q1, v1))],
                    VertexKind::Player(_) => vec![(id(q0, v0), id(q1, n)), (id(q0, n), id(q1, v1))],
                };
                for (l, r) in pairs {
                    nb.add_transition(id(q, v), letter, l, r)?;
                }
            }
        }
    }
    Ok(nb.build()?)
}

/// Is `s` winning? `b` recognises the losing plays of `s.player`: the
/// complement of the winning set for Player 0, the winning set for
/// Player 1.
pub fn check_strategy(g: &TreeGame, s: &FiniteMemoryStrategy, b: &Nta) -> Result<bool, GameError> {
    let t = strategy_tree(g, s)?;
    validate_strategy_tree(g, &t, s.player)?;
    let bs = strategy_set_nta(g, b, s.player)?;
    Ok(!nta_membership(&bs, &t)?)
}

/// The automaton `check_strategy` needs for `player` when the winning set
/// is `L(d)` read through the #-projection.
pub fn sdtt_check_automaton(d: &Sdtt, player: Player) -> Result<Nta, GameError> {
    let base = match player {
        Player::Zero => dualize_sdtt(d),
        Player::One => d.clone(),
    };
    Ok(preimage_hash(&game_ata_to_nta(&sdtt_to_game_ata(&base)))?)
}

/// Lifts `a` through the #-projection when `g` uses `#` and `a` does not
/// read it already.
pub fn lift_objective(a: &Nta, g: &TreeGame) -> Result<Nta, GameError> {
    let hash = Symbol::hash();
    if g.labels().contains(&hash) && !a.alphabet().contains(&hash) {
        Ok(preimage_hash(a)?)
    } else {
        Ok(a.clone())
    }
}

#[derive(Debug, Clone)]
pub enum Determinacy {
    Player0(FiniteMemoryStrategy),
    Player1(FiniteMemoryStrategy),
    UndeterminedUpTo(usize),
}

#[derive(Debug, Clone)]
pub struct DeterminacyReport {
    pub result: Determinacy,
    /// Strategies enumerated for each player.
    pub candidates: [usize; 2],
    /// Strategies actually checked.
    pub checked: usize,
}

/// Fails if `l` and `col` agree on one of the sampled trees.
pub fn complementarity_guard(g: &TreeGame, l: &Nta, col: &Nta, seed: u64) -> Result<(), GameError> {
    let mut symbols: Vec<Symbol> = g.labels().into_iter().collect();
    symbols.push(Symbol::blank());
    let uses_hash = g.labels().contains(&Symbol::hash());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < GUARD_SAMPLES && attempts < GUARD_SAMPLES * 20 {
        attempts += 1;
        let t = random_regular_tree(&mut rng, &symbols, 5);
        if uses_hash && hash_projection(&t).is_none() {
            continue;
        }
        if nta_membership(l, &t)? == nta_membership(col, &t)? {
            return Err(GameError::NotComplementary(t));
        }
        done += 1;
    }
    Ok(())
}

/// Searches for a winning strategy among those deciding only the first
/// `depth` levels of the unfolding, Player 0 first.
///
/// `l` and `col` are the winning set and its complement; they are lifted
/// through the #-projection when the game uses `#`.
pub fn decide_determinacy(
    g: &TreeGame,
    l: &Nta,
    col: &Nta,
    depth: usize,
    seed: u64,
) -> Result<DeterminacyReport, GameError> {
    let l = lift_objective(l, g)?;
    let col = lift_objective(col, g)?;
    complementarity_guard(g, &l, &col, seed)?;
    let s0 = enumerate_strategies(g, Player::Zero, depth);
    let s1 = enumerate_strategies(g, Player::One, depth);
    let candidates = [s0.len(), s1.len()];
    let mut checked = 0;
    for s in s0 {
        checked += 1;
        if check_strategy(g, &s, &col)? {
            return Ok(DeterminacyReport {
                result: Determinacy::Player0(s),
                candidates,
                checked,
            });
        }
    }
    for s in s1 {
        checked += 1;
        if check_strategy(g, &s, &l)? {
            return Ok(DeterminacyReport {
                result: Determinacy::Player1(s),
                candidates,
                checked,
            });
        }
    }
    Ok(DeterminacyReport {
        result: Determinacy::UndeterminedUpTo(depth),
        candidates,
        checked,
    })
}

/// Winner of a game in which only one player moves.
///
/// Without Player 1 vertices, Player 0 wins iff some play lies in `l`.
/// Without Player 0 vertices, Player 0 wins iff no play lies in `col`.
pub fn solve_single_player(g: &TreeGame, l: &Nta, col: Option<&Nta>) -> Result<Player, GameError> {
    let plays = play_language_nta(g);
    let has = |p: Player| g.vertices().iter().any(|v| v.kind == VertexKind::Player(p));
    if !has(Player::One) {
        let l = lift_objective(l, g)?;
        let nonempty = nta_emptiness(&intersect_with_safety(&l, &plays)?).nonempty;
        Ok(if nonempty { Player::Zero } else { Player::One })
    } else if !has(Player::Zero) {
        let col = lift_objective(col.ok_or(GameError::MissingComplement)?, g)?;
        let nonempty = nta_emptiness(&intersect_with_safety(&col, &plays)?).nonempty;
        Ok(if nonempty { Player::One } else { Player::Zero })
    } else {
        Err(GameError::NotSinglePlayer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::game::solve_game_automaton_objective;

    #[test]
    fn trivial_automata() {
        let g = fig2_game();
        let lifted_all = preimage_hash(&all_nta()).unwrap();
        let lifted_empty = preimage_hash(&empty_nta()).unwrap();
        for p in [Player::Zero, Player::One] {
            for s in enumerate_strategies(&g, p, 3) {
                assert!(check_strategy(&g, &s, &lifted_empty).unwrap());
                assert!(!check_strategy(&g, &s, &lifted_all).unwrap());
            }
        }
    }

    #[test]
    fn invalid_strategy_is_an_error() {
        let g = fig2_game();
        let mut s = FiniteMemoryStrategy::memoryless(&g, Player::One, &[]);
        s.updates.clear();
        assert!(matches!(
            check_strategy(&g, &s, &empty_nta()),
            Err(GameError::Strategy(_))
        ));
    }

    #[test]
    fn fig2_solutions_are_certified() {
        let g = fig2_game();
        for d in [all_sdtt(), d_safe_a()] {
            let sol = solve_game_automaton_objective(&g, &d).unwrap();
            let b = sdtt_check_automaton(&d, sol.winner).unwrap();
            assert!(check_strategy(&g, &sol.strategy, &b).unwrap());
        }
    }

    #[test]
    fn fig2_single_player() {
        let g = fig2_game();
        assert_eq!(
            solve_single_player(&g, &all_nta(), Some(&empty_nta())).unwrap(),
            Player::Zero
        );
        assert_eq!(
            solve_single_player(&g, &no_b_nta(), Some(&some_b_nta())).unwrap(),
            Player::One
        );
        assert!(matches!(
            solve_single_player(&g, &all_nta(), None),
            Err(GameError::MissingComplement)
        ));
    }

    #[test]
    fn fig2_determinacy() {
        let g = fig2_game();
        let r = decide_determinacy(&g, &all_nta(), &empty_nta(), 0, 1).unwrap();
        assert!(matches!(r.result, Determinacy::Player0(_)));
        let r = decide_determinacy(&g, &no_b_nta(), &some_b_nta(), 1, 1).unwrap();
        assert!(matches!(r.result, Determinacy::Player1(_)));
    }

    #[test]
    fn guard_trips_on_equal_automata() {
        let g = fig2_game();
        assert!(matches!(
            decide_determinacy(&g, &all_nta(), &all_nta(), 0, 1),
            Err(GameError::NotComplementary(_))
        ));
    }
}
