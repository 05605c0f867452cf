use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{FiniteMemoryStrategy, GVertex, GameError, TreeGame, VertexKind};
use crate::automata::{
    blank_accepting_states, finite_language_nta, nta_emptiness, nta_membership, AutomatonError, Nta, NtaBuilder,
};
use crate::parity::Player;
use crate::symbol::{Address, Dir, Symbol};
use crate::tree::{Context, RegularTree};

/// Position of the game built from a safety automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    /// A state with the letters still on offer.
    Letters(usize, BTreeSet<usize>),
    /// Transition pairs still on offer for a letter.
    Pairs(BTreeSet<(usize, usize)>, usize),
    /// The endless `#` chain standing for a blank subtree.
    Blank,
}

struct Built {
    game: TreeGame,
    keys: Vec<Key>,
}

fn build(a: &Nta, owner: Player) -> Result<Built, GameError> {
    if !a.is_safety() {
        return Err(AutomatonError::NotSafety(a.name().to_string()).into());
    }
    let n = a.num_states();
    let nonempty: Vec<bool> = (0..n).map(|q| nta_emptiness(&a.with_initial(q)).nonempty).collect();
    if !nonempty[a.initial()] {
        return Err(GameError::EmptyLanguage(a.name().to_string()));
    }
    let accepts_blank = blank_accepting_states(a);
    let symbols = a.alphabet().symbols();
    let blank = a.alphabet().index(&Symbol::blank()).expect("alphabets contain blank");
    let productive = |q: usize, x: usize| -> BTreeSet<(usize, usize)> {
        a.transitions(q, x)
            .iter()
            .copied()
            .filter(|&(l, r)| nonempty[l] && nonempty[r])
            .collect()
    };
    let offer = |q: usize| -> BTreeSet<usize> {
        (0..symbols.len())
            .filter(|&x| {
                if x == blank {
                    accepts_blank[q]
                } else {
                    !productive(q, x).is_empty()
                }
            })
            .collect()
    };

    let mut keys: Vec<Key> = Vec::new();
    let mut id: HashMap<Key, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |k: Key, keys: &mut Vec<Key>, queue: &mut VecDeque<usize>| {
        *id.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    let start = intern(Key::Letters(a.initial(), offer(a.initial())), &mut keys, &mut queue);
    let mut vertices: Vec<Option<(Symbol, VertexKind, [usize; 2])>> = Vec::new();
    let choice = VertexKind::Player(owner);
    while let Some(i) = queue.pop_front() {
        let key = keys[i].clone();
        let (label, kind, succ) = match key {
            Key::Blank => (Symbol::hash(), choice, [i, i]),
            Key::Letters(q, ys) if ys.len() > 1 => {
                let mut rest = ys.clone();
                let first = rest.pop_first().expect("nonempty");
                let l = intern(Key::Letters(q, BTreeSet::from([first])), &mut keys, &mut queue);
                let r = intern(Key::Letters(q, rest), &mut keys, &mut queue);
                (Symbol::hash(), choice, [l, r])
            }
            Key::Letters(q, ys) => {
                let x = *ys.first().expect("offered letters are nonempty");
                let next = if x == blank {
                    Key::Blank
                } else {
                    Key::Pairs(productive(q, x), x)
                };
                let w = intern(next, &mut keys, &mut queue);
                (Symbol::hash(), choice, [w, w])
            }
            Key::Pairs(xs, x) if xs.len() > 1 => {
                let mut rest = xs.clone();
                let first = rest.pop_first().expect("nonempty");
                let l = intern(Key::Pairs(BTreeSet::from([first]), x), &mut keys, &mut queue);
                let r = intern(Key::Pairs(rest, x), &mut keys, &mut queue);
                (Symbol::hash(), choice, [l, r])
            }
            Key::Pairs(xs, x) => {
                let (ql, qr) = *xs.first().expect("productive letters have pairs");
                let l = intern(Key::Letters(ql, offer(ql)), &mut keys, &mut queue);
                let r = intern(Key::Letters(qr, offer(qr)), &mut keys, &mut queue);
                (symbols[x].clone(), VertexKind::Branching, [l, r])
            }
        };
        if vertices.len() <= i {
            vertices.resize(i + 1, None);
        }
        vertices[i] = Some((label, kind, succ));
    }
    let vertices = vertices
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let (label, kind, succ) = v.expect("every interned key is expanded");
            GVertex {
                name: format!("v{i}"),
                label,
                kind,
                succ,
            }
        })
        .collect();
    let game = TreeGame::new(format!("{}_game", a.name()), vertices, start)?;
    Ok(Built { game, keys })
}

/// Game whose plays project onto exactly the trees `a` accepts.
///
/// `a` must be a nonempty safety automaton. The choice vertices are `#`
/// labelled and owned by Player 0: first a letter among those the current
/// state can read productively, then a transition pair, each picked by
/// repeatedly splitting off the least candidate. A blank subtree is
/// produced as an endless `#` chain.
pub fn game_from_safety_nta(a: &Nta) -> Result<TreeGame, GameError> {
    game_from_safety_nta_for(a, Player::Zero)
}

/// As [`game_from_safety_nta`], with the choices given to `owner`.
pub fn game_from_safety_nta_for(a: &Nta, owner: Player) -> Result<TreeGame, GameError> {
    Ok(build(a, owner)?.game)
}

/// The matching pennies game and its canonical strategies.
#[derive(Debug, Clone)]
pub struct MpParts {
    pub game: TreeGame,
    /// Player 0 choosing `t1` and `t2`.
    pub sigma: [FiniteMemoryStrategy; 2],
    /// Player 1 choosing `t3` and `t4`.
    pub pi: [FiniteMemoryStrategy; 2],
}

/// Safety automaton for the context tree where the hole's children read
/// through a dedicated state `hole`.
fn context_nta(c: &Context, alphabet_from: &Nta) -> Result<Nta, GameError> {
    let t: &RegularTree = c.tree();
    let alphabet = alphabet_from.alphabet().union(&crate::automata::Alphabet::new(t.symbols()));
    let mut b = NtaBuilder::new("context", alphabet);
    let blank = b.add_state("blank", 0);
    let hole = b.add_state("hole", 0);
    let bl = Symbol::blank();
    b.add_transition(blank, &bl, blank, blank)?;
    b.add_transition(hole, &bl, hole, hole)?;
    // the non-blank part is finite: walk it by address
    let mut stack = vec![Address::root()];
    let mut root = None;
    let mut pending: Vec<(usize, Address)> = Vec::new();
    while let Some(u) = stack.pop() {
        let q = b.add_state(format!("n{}", u), 0);
        if u.is_empty() {
            root = Some(q);
        }
        pending.push((q, u.clone()));
        for d in Dir::BOTH {
            let cu = u.child(d);
            if !t.label_at(&cu).is_blank() {
                stack.push(cu);
            }
        }
    }
    let state_of: HashMap<Address, usize> = pending.iter().map(|(q, u)| (u.clone(), *q)).collect();
    for (q, u) in &pending {
        let kid = |d: Dir| {
            if u == c.hole() {
                hole
            } else {
                state_of.get(&u.child(d)).copied().unwrap_or(blank)
            }
        };
        b.add_transition(*q, t.label_at(u), kid(Dir::Left), kid(Dir::Right))?;
    }
    b.set_initial(root.expect("root visited"));
    Ok(b.build()?)
}

fn prefixed(g: &TreeGame, prefix: &str, offset: usize) -> Vec<GVertex> {
    g.vertices()
        .iter()
        .map(|v| GVertex {
            name: format!("{prefix}{}", v.name),
            label: v.label.clone(),
            kind: v.kind,
            succ: v.succ.map(|s| s + offset),
        })
        .collect()
}

/// The game in which Player 0 fills the left subtree of the hole with
/// `t1` or `t2` and Player 1 the right one with `t3` or `t4`, unaware of
/// each other's choice.
///
/// Requires `c[t1, t3]` and `c[t2, t4]` in `L(l)`, `c[t2, t3]` and
/// `c[t1, t4]` outside it, and the four trees pairwise distinct.
pub fn matching_pennies_game(
    c: &Context,
    t: [&RegularTree; 4],
    l: &Nta,
) -> Result<MpParts, GameError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if t[i].equivalent(t[j]) {
                return Err(GameError::TreesNotDistinct(i + 1, j + 1));
            }
        }
    }
    let graft = |i: usize, j: usize| -> Result<bool, GameError> {
        let g = c.graft(t[i], t[j]).map_err(|_| GameError::HoleNotFound)?;
        Ok(nta_membership(l, &g)?)
    };
    for (i, j, want) in [(0, 2, true), (1, 3, true), (1, 2, false), (0, 3, false)] {
        if graft(i, j)? != want {
            let how = if want { "outside" } else { "inside" };
            return Err(GameError::Hypothesis(i + 1, j + 1, how));
        }
    }

    let centre = build(&context_nta(c, l)?, Player::Zero)?;
    let hole_state = 1;
    let gl = game_from_safety_nta_for(&finite_language_nta("left", &[t[0].clone(), t[1].clone()]), Player::Zero)?;
    let gr = game_from_safety_nta_for(&finite_language_nta("right", &[t[2].clone(), t[3].clone()]), Player::One)?;

    let hole_vertex = centre
        .keys
        .iter()
        .position(|k| matches!(k, Key::Pairs(xs, _) if xs.len() == 1 && xs.contains(&(hole_state, hole_state))))
        .ok_or(GameError::HoleNotFound)?;
    let nc = centre.game.len();
    let nl = gl.len();
    let mut vertices = prefixed(&centre.game, "c.", 0);
    vertices.extend(prefixed(&gl, "l.", nc));
    vertices.extend(prefixed(&gr, "r.", nc + nl));
    vertices[hole_vertex].succ = [nc + gl.initial(), nc + nl + gr.initial()];
    let game = TreeGame::new(format!("mp_{}", l.name()), vertices, centre.game.initial())?.pruned();

    let pick = |player: Player, at: String, d: Dir| {
        FiniteMemoryStrategy::memoryless(&game, player, &[(at.as_str(), d)])
    };
    let l_root = format!("l.{}", gl.name_of(gl.initial()));
    let r_root = format!("r.{}", gr.name_of(gr.initial()));
    let sigma = [
        pick(Player::Zero, l_root.clone(), Dir::Left).renamed("sigma1"),
        pick(Player::Zero, l_root, Dir::Right).renamed("sigma2"),
    ];
    let pi = [
        pick(Player::One, r_root.clone(), Dir::Left).renamed("pi3"),
        pick(Player::One, r_root, Dir::Right).renamed("pi4"),
    ];
    Ok(MpParts { game, sigma, pi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::game::{enumerate_strategies, strategy_tree};
    use crate::tree::hash_projection;

    /// Projections of the plays of a Player 0 only game.
    fn projected_plays(g: &TreeGame, depth: usize) -> Vec<RegularTree> {
        let mut out: Vec<RegularTree> = Vec::new();
        for s in enumerate_strategies(g, Player::Zero, depth) {
            let t = strategy_tree(g, &s).unwrap();
            let p = t.map_labels(|l| match g.index_of(l.as_str()) {
                Some(v) => g.label(v).clone(),
                None => l.clone(),
            });
            let p = hash_projection(&p).expect("plays project");
            if !out.iter().any(|o| o.equivalent(&p)) {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn single_tree() {
        let a = finite_language_nta("one", &[a_leaf()]);
        let g = game_from_safety_nta(&a).unwrap();
        let plays = projected_plays(&g, 6);
        assert_eq!(plays.len(), 1);
        assert!(plays[0].equivalent(&a_leaf()));
    }

    #[test]
    fn two_trees() {
        let a = finite_language_nta("two", &[a_leaf(), b_leaf()]);
        let g = game_from_safety_nta(&a).unwrap();
        let owned: Vec<_> = g
            .owned_by(Player::Zero)
            .into_iter()
            .filter(|&v| g.succ(v, Dir::Left) != g.succ(v, Dir::Right))
            .collect();
        assert_eq!(owned.len(), 1);
        let plays = projected_plays(&g, 6);
        assert_eq!(plays.len(), 2);
        assert!(plays.iter().any(|p| p.equivalent(&a_leaf())));
        assert!(plays.iter().any(|p| p.equivalent(&b_leaf())));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            game_from_safety_nta(&empty_nta()),
            Err(GameError::Automaton(AutomatonError::NotSafety(_)))
        ));
        let none = finite_language_nta("none", &[]);
        assert!(matches!(game_from_safety_nta(&none), Err(GameError::EmptyLanguage(_))));
    }

    #[test]
    fn mp_fixture_builds() {
        let parts = mp_parts();
        assert!(parts.game.check_hash_placement().is_ok());
        assert!(!parts.game.owned_by(Player::One).is_empty());
    }

    #[test]
    fn mp_hypothesis_checked() {
        let (c, t) = mp_inputs();
        let swapped = [&t[1], &t[0], &t[2], &t[3]];
        assert!(matches!(
            matching_pennies_game(&c, swapped, &l_eq()),
            Err(GameError::Hypothesis(..))
        ));
        let same = [&t[0], &t[0], &t[2], &t[3]];
        assert!(matches!(
            matching_pennies_game(&c, same, &l_eq()),
            Err(GameError::TreesNotDistinct(1, 2))
        ));
    }
}
