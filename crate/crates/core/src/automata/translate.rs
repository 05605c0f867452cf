use super::{even_in, Ata, Formula, GameAutomaton, GameShape, Nta, NtaBuilder, Sdtt, SdttBuilder};
use crate::parity::Player;
use crate::symbol::Dir;

/// Game automaton with the same states and ranks: owner 0 becomes a
/// disjunction over the two directions, owner 1 a conjunction.
pub fn sdtt_to_game_ata(d: &Sdtt) -> GameAutomaton {
    let states = (0..d.num_states())
        .map(|q| (d.state_name(q).to_string(), d.rank(q)))
        .collect();
    let delta = (0..d.num_states())
        .map(|q| {
            (0..d.alphabet().len())
                .map(|a| {
                    let (q0, q1) = d.delta(q, a);
                    let (l, r) = (Formula::atom(Dir::Left, q0), Formula::atom(Dir::Right, q1));
                    match d.owner(q, a) {
                        Player::Zero => Formula::or(l, r),
                        Player::One => Formula::and(l, r),
                    }
                })
                .collect()
        })
        .collect();
    let ata = Ata::new(
        format!("{}_ata", d.name()),
        d.alphabet().clone(),
        states,
        d.initial(),
        delta,
    )
    .expect("translation of a valid SDTT");
    GameAutomaton::new(ata).expect("only binary shapes are produced")
}

/// Picks a state name not used by `names`.
fn fresh_name(base: &str, names: &[String]) -> String {
    let mut s = base.to_string();
    while names.iter().any(|n| n == &s) {
        s.push('\'');
    }
    s
}

fn top_rank(lo: u32, hi: u32) -> u32 {
    even_in(lo, hi).unwrap_or(lo + 1)
}

/// SDTT for the same language. A fresh even-ranked sink `top` completes
/// the unary shapes: the universal player may move there, but only loses.
pub fn game_ata_to_sdtt(a: &GameAutomaton) -> Sdtt {
    let (lo, hi) = a.index();
    let mut b = SdttBuilder::new(format!("{}_sdtt", a.name()), a.alphabet().clone());
    for q in 0..a.num_states() {
        b.add_state(a.state_name(q), a.rank(q));
    }
    let top = b.add_state(fresh_name("top", a.states()), top_rank(lo, hi));
    b.set_initial(a.initial());
    for (i, s) in a.alphabet().symbols().iter().enumerate() {
        for q in 0..a.num_states() {
            let (owner, l, r) = match a.shape(q, i) {
                GameShape::Or(p, r) => (Player::Zero, p, r),
                GameShape::And(p, r) => (Player::One, p, r),
                GameShape::Left(p) => (Player::One, p, top),
                GameShape::Right(p) => (Player::One, top, p),
            };
            b.set_transition(q, s, owner, l, r).expect("states exist");
        }
        b.set_transition(top, s, Player::Zero, top, top).expect("states exist");
    }
    b.build().expect("total by construction")
}

/// NTA for the same language. A fresh even-ranked state `top` accepts
/// every tree and fills the unconstrained direction.
pub fn game_ata_to_nta(a: &GameAutomaton) -> Nta {
    let (lo, hi) = a.index();
    let mut b = NtaBuilder::new(format!("{}_nta", a.name()), a.alphabet().clone());
    for q in 0..a.num_states() {
        b.add_state(a.state_name(q), a.rank(q));
    }
    let top = b.add_state(fresh_name("top", a.states()), top_rank(lo, hi));
    b.set_initial(a.initial());
    for (i, s) in a.alphabet().symbols().iter().enumerate() {
        for q in 0..a.num_states() {
            let pairs = match a.shape(q, i) {
                GameShape::And(p, r) => vec![(p, r)],
                GameShape::Or(p, r) => vec![(p, top), (top, r)],
                GameShape::Left(p) => vec![(p, top)],
                GameShape::Right(p) => vec![(top, p)],
            };
            for (l, r) in pairs {
                b.add_transition(q, s, l, r).expect("states exist");
            }
        }
        b.add_transition(top, s, top, top).expect("states exist");
    }
    b.build().expect("initial state set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ata_membership, dualize_sdtt, nta_membership, sdtt_membership};
    use crate::fixtures::*;
    use crate::symbol::Symbol;

    #[test]
    fn safe_a_translation_shapes() {
        let d = d_safe_a();
        let g = sdtt_to_game_ata(&d);
        let ok = g.state_index("ok").unwrap();
        let bad = g.state_index("bad").unwrap();
        let a = g.alphabet().index(&Symbol::new("a")).unwrap();
        let b = g.alphabet().index(&Symbol::new("b")).unwrap();
        assert_eq!(g.shape(ok, a), GameShape::And(ok, ok));
        assert_eq!(g.shape(ok, b), GameShape::And(bad, bad));
    }

    #[test]
    fn chains_agree_on_fixtures() {
        let d = d_safe_a();
        let g = sdtt_to_game_ata(&d);
        let n = game_ata_to_nta(&g);
        let back = game_ata_to_sdtt(&g);
        for t in [blank(), a_leaf(), b_leaf(), c_pair(&a_leaf(), &a_leaf()), all_a()] {
            let t = t.map_labels(|s| if s.as_str() == "c" { Symbol::new("a") } else { s.clone() });
            let m = sdtt_membership(&d, &t).unwrap();
            assert_eq!(ata_membership(g.ata(), &t).unwrap(), m);
            assert_eq!(nta_membership(&n, &t).unwrap(), m);
            assert_eq!(sdtt_membership(&back, &t).unwrap(), m);
        }
        let dual = game_ata_to_nta(&sdtt_to_game_ata(&dualize_sdtt(&d)));
        assert!(nta_membership(&dual, &b_leaf()).unwrap());
        assert!(!nta_membership(&dual, &blank()).unwrap());
    }

    #[test]
    fn unary_disjunction_accepts_all() {
        let al = crate::automata::Alphabet::from_strs(&["a"]);
        let f = Formula::or(Formula::atom(Dir::Left, 0), Formula::atom(Dir::Right, 0));
        let ata = Ata::new("any", al.clone(), vec![("q".into(), 0)], 0, vec![vec![f; al.len()]]).unwrap();
        let g = GameAutomaton::new(ata).unwrap();
        let s = game_ata_to_sdtt(&g);
        for t in [blank(), a_leaf(), all_a()] {
            assert!(sdtt_membership(&s, &t).unwrap());
            assert!(ata_membership(g.ata(), &t).unwrap());
        }
    }
}
