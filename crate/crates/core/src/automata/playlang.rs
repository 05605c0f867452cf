use super::{Alphabet, Nta, NtaBuilder};
use crate::game::{TreeGame, VertexKind};
use crate::symbol::Symbol;

/// Safety automaton accepting exactly the plays of `g`.
///
/// It guesses the pre-play: in state `v` it reads `lambda(v)`, sends the
/// successors to both children at a branching vertex, and one successor
/// plus the blank sink at a player vertex.
pub fn play_language_nta(g: &TreeGame) -> Nta {
    let alphabet = Alphabet::new(g.labels());
    let mut b = NtaBuilder::new(format!("{}_plays", g.name()), alphabet);
    for v in 0..g.len() {
        b.add_state(g.name_of(v), 0);
    }
    let sink = b.add_state(format!("{}'", Symbol::BLANK_TEXT), 0);
    let blank = Symbol::blank();
    b.add_transition(sink, &blank, sink, sink).expect("blank is in every alphabet");
    for v in 0..g.len() {
        let [v0, v1] = g.vertex(v).succ;
        let pairs = match g.kind(v) {
            VertexKind::Branching => vec![(v0, v1)],
            VertexKind::Player(_) => vec![(v0, sink), (sink, v1)],
        };
        for (l, r) in pairs {
            b.add_transition(v, g.label(v), l, r).expect("labels are in the alphabet");
        }
    }
    b.set_initial(g.initial());
    b.build().expect("vertex names are unique")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{nta_emptiness, nta_membership};
    use crate::fixtures::*;
    use crate::game::{play, FiniteMemoryStrategy};
    use crate::parity::Player;
    use crate::tree::RegularTree;

    #[test]
    fn fig2_play_is_accepted() {
        let g = fig2_game();
        let a = play_language_nta(&g);
        let s0 = FiniteMemoryStrategy::memoryless(&g, Player::Zero, &[]);
        let s1 = FiniteMemoryStrategy::memoryless(&g, Player::One, &[]);
        let p = play(&g, &s0, &s1).unwrap();
        assert!(nta_membership(&a, &p).unwrap());
    }

    #[test]
    fn wrong_root_rejected() {
        let a = play_language_nta(&fig2_game());
        assert!(!nta_membership(&a, &RegularTree::leaf("a")).unwrap());
        assert!(nta_emptiness(&a).nonempty);
    }
}
