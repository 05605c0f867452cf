//! Small named objects shared by tests, the acceptance suite and the CLI.

use crate::automata::{Alphabet, Nta, NtaBuilder, Sdtt, SdttBuilder};
use crate::game::{matching_pennies_game, GVertex, MpParts, TreeGame, VertexKind};
use crate::parity::Player;
use crate::symbol::{Address, Symbol};
use crate::tree::{Context, FiniteTree, RegularTree};

pub use crate::automata::{finite_language_nta, tree_set_nta};

/// The letters every fixture automaton reads.
pub fn abc() -> Alphabet {
    Alphabet::from_strs(&["a", "b", "c"])
}

pub fn blank() -> RegularTree {
    RegularTree::blank()
}

pub fn a_leaf() -> RegularTree {
    RegularTree::leaf("a")
}

pub fn b_leaf() -> RegularTree {
    RegularTree::leaf("b")
}

pub fn c_pair(x: &RegularTree, y: &RegularTree) -> RegularTree {
    RegularTree::node("c", x, y)
}

/// The full binary tree labelled `a` everywhere.
pub fn all_a() -> RegularTree {
    RegularTree::from_parts(vec![Symbol::new("a")], vec![[0, 0]], 0).expect("one node")
}

/// Four vertices: `0` and `1` are Player 1 `#` vertices choosing between
/// the branching vertices `a` and `b`, which lead back to `0` and `1`.
pub fn fig2_game() -> TreeGame {
    let v = |name: &str, label: &str, kind, succ| GVertex {
        name: name.into(),
        label: Symbol::new(label),
        kind,
        succ,
    };
    let p1 = VertexKind::Player(Player::One);
    TreeGame::new(
        "fig2",
        vec![
            v("0", "#", p1, [2, 3]),
            v("1", "#", p1, [2, 3]),
            v("a", "a", VertexKind::Branching, [0, 1]),
            v("b", "b", VertexKind::Branching, [0, 1]),
        ],
        0,
    )
    .expect("well formed")
}

/// Accepts exactly the trees without a `b` label. All owners are Player 1.
pub fn d_safe_a() -> Sdtt {
    let mut b = SdttBuilder::new("safe_a", Alphabet::from_strs(&["a", "b"]));
    let ok = b.add_state("ok", 0);
    let bad = b.add_state("bad", 1);
    b.set_initial(ok);
    let one = Player::One;
    for (q, x, l) in [(ok, "a", ok), (ok, "_", ok), (ok, "b", bad), (bad, "a", bad), (bad, "b", bad), (bad, "_", bad)] {
        b.set_transition(q, &Symbol::new(x), one, l, l).expect("fixture");
    }
    b.build().expect("fixture")
}

/// One state of rank 0: accepts every tree over `a`, `b`, `c`.
pub fn all_sdtt() -> Sdtt {
    let mut b = SdttBuilder::new("all", abc());
    let q = b.add_state("q", 0);
    b.set_initial(q);
    for x in abc().symbols() {
        b.set_transition(q, x, Player::Zero, q, q).expect("fixture");
    }
    b.build().expect("fixture")
}

fn one_state_nta(name: &str, rank: u32) -> Nta {
    let mut b = NtaBuilder::new(name, abc());
    let q = b.add_state("q", rank);
    b.set_initial(q);
    for x in abc().symbols() {
        b.add_transition(q, x, q, q).expect("fixture");
    }
    b.build().expect("fixture")
}

pub fn all_nta() -> Nta {
    one_state_nta("all", 0)
}

pub fn empty_nta() -> Nta {
    one_state_nta("empty", 1)
}

/// Trees without a `b` label.
pub fn no_b_nta() -> Nta {
    let mut b = NtaBuilder::new("no_b", abc());
    let ok = b.add_state("ok", 0);
    b.set_initial(ok);
    for x in ["a", "c", "_"] {
        b.add_transition(ok, &Symbol::new(x), ok, ok).expect("fixture");
    }
    b.build().expect("fixture")
}

/// Trees with some `b` label.
pub fn some_b_nta() -> Nta {
    let mut b = NtaBuilder::new("some_b", abc());
    let seek = b.add_state("seek", 1);
    let any = b.add_state("any", 0);
    b.set_initial(seek);
    for x in abc().symbols() {
        b.add_transition(any, x, any, any).expect("fixture");
    }
    b.add_transition(seek, &Symbol::new("b"), any, any).expect("fixture");
    for x in ["a", "c"] {
        let x = Symbol::new(x);
        b.add_transition(seek, &x, seek, any).expect("fixture");
        b.add_transition(seek, &x, any, seek).expect("fixture");
    }
    b.build().expect("fixture")
}

/// Trees `c(x, y)` whose subtrees have the same root letter, `a` or `b`.
pub fn l_eq() -> Nta {
    let mut b = NtaBuilder::new("l_eq", abc());
    let root = b.add_state("root", 0);
    let is_a = b.add_state("is_a", 0);
    let is_b = b.add_state("is_b", 0);
    let any = b.add_state("any", 0);
    b.set_initial(root);
    for x in abc().symbols() {
        b.add_transition(any, x, any, any).expect("fixture");
    }
    let c = Symbol::new("c");
    b.add_transition(root, &c, is_a, is_a).expect("fixture");
    b.add_transition(root, &c, is_b, is_b).expect("fixture");
    b.add_transition(is_a, &Symbol::new("a"), any, any).expect("fixture");
    b.add_transition(is_b, &Symbol::new("b"), any, any).expect("fixture");
    b.build().expect("fixture")
}

/// Complement of [`l_eq`].
pub fn co_l_eq() -> Nta {
    let mut b = NtaBuilder::new("co_l_eq", abc());
    let root = b.add_state("root", 0);
    let is_a = b.add_state("is_a", 0);
    let is_b = b.add_state("is_b", 0);
    let other = b.add_state("other", 0);
    let any = b.add_state("any", 0);
    b.set_initial(root);
    for x in abc().symbols() {
        b.add_transition(any, x, any, any).expect("fixture");
        if x.as_str() != "c" {
            b.add_transition(root, x, any, any).expect("fixture");
        }
    }
    for x in ["c", "_"] {
        b.add_transition(other, &Symbol::new(x), any, any).expect("fixture");
    }
    b.add_transition(is_a, &Symbol::new("a"), any, any).expect("fixture");
    b.add_transition(is_b, &Symbol::new("b"), any, any).expect("fixture");
    let c = Symbol::new("c");
    for (l, r) in [(other, any), (any, other), (is_a, is_b), (is_b, is_a)] {
        b.add_transition(root, &c, l, r).expect("fixture");
    }
    b.build().expect("fixture")
}

/// Context `c(_, _)` with the hole at the root, and the trees
/// `a`, `b`, `a(a, _)`, `b(b, _)`.
pub fn mp_inputs() -> (Context, [RegularTree; 4]) {
    let c = FiniteTree::new(RegularTree::leaf("c")).expect("finite");
    let c = Context::new(c, Address::root()).expect("root is a dead node");
    let t3 = RegularTree::node("a", &a_leaf(), &blank());
    let t4 = RegularTree::node("b", &b_leaf(), &blank());
    (c, [a_leaf(), b_leaf(), t3, t4])
}

pub fn mp_parts() -> MpParts {
    let (c, t) = mp_inputs();
    matching_pennies_game(&c, [&t[0], &t[1], &t[2], &t[3]], &l_eq()).expect("fixture satisfies the hypothesis")
}
