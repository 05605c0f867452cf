//! Seeded generators for the property tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Alphabet, Nta, NtaBuilder, Sdtt, SdttBuilder};
use crate::game::{GVertex, TreeGame, VertexKind};
use crate::parity::{PVertex, ParityGame, Player};
use crate::symbol::{Dir, Symbol};
use crate::tree::RegularTree;

fn player(rng: &mut impl Rng) -> Player {
    if rng.gen() {
        Player::Zero
    } else {
        Player::One
    }
}

pub fn random_parity_game(rng: &mut impl Rng, max_vertices: usize, max_rank: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_vertices);
    let vertices = (0..n)
        .map(|v| PVertex {
            name: format!("v{v}"),
            owner: player(rng),
            rank: rng.gen_range(0..=max_rank),
            succ: [rng.gen_range(0..n), rng.gen_range(0..n)],
        })
        .collect();
    ParityGame::new(vertices, 0).expect("generated games are valid")
}

/// A regular tree with at most `max_nodes` non-blank graph nodes labelled
/// from the non-blank entries of `symbols`. Children point back into the
/// graph, so the tree is usually infinite.
pub fn random_regular_tree(rng: &mut impl Rng, symbols: &[Symbol], max_nodes: usize) -> RegularTree {
    let letters: Vec<&Symbol> = symbols.iter().filter(|s| !s.is_blank()).collect();
    let blank_allowed = symbols.iter().any(Symbol::is_blank);
    if letters.is_empty() || (blank_allowed && rng.gen_ratio(1, 20)) {
        return RegularTree::blank();
    }
    let n = rng.gen_range(1..=max_nodes);
    let mut labels: Vec<Symbol> = (0..n).map(|_| (*letters.choose(rng).unwrap()).clone()).collect();
    labels.push(Symbol::blank());
    let child = |rng: &mut dyn rand::RngCore| {
        if blank_allowed && rng.gen_ratio(2, 5) {
            n
        } else {
            rng.gen_range(0..n)
        }
    };
    let mut children: Vec<[usize; 2]> = (0..n).map(|_| [child(rng), child(rng)]).collect();
    children.push([n, n]);
    RegularTree::from_parts(labels, children, 0).expect("generated trees are blank closed")
}

/// A tree whose non-blank part is finite, of depth below `max_depth`.
pub fn random_finite_tree(rng: &mut impl Rng, symbols: &[Symbol], max_depth: usize) -> RegularTree {
    let letters: Vec<&Symbol> = symbols.iter().filter(|s| !s.is_blank()).collect();
    if max_depth == 0 || letters.is_empty() || rng.gen_ratio(1, 4) {
        return RegularTree::blank();
    }
    let label = (*letters.choose(rng).unwrap()).clone();
    let l = random_finite_tree(rng, symbols, max_depth - 1);
    let r = random_finite_tree(rng, symbols, max_depth - 1);
    RegularTree::node(label, &l, &r)
}

/// A tree over `letters` and `#` in which `#` nodes form redundant or
/// dead chains, possibly endless, so the #-projection usually exists.
pub fn random_hash_tree(rng: &mut impl Rng, letters: &[Symbol], max_nodes: usize) -> RegularTree {
    let n = rng.gen_range(1..=max_nodes);
    let blank = n;
    let mut labels = Vec::with_capacity(n + 1);
    let mut children = Vec::with_capacity(n + 1);
    for _ in 0..n {
        if rng.gen_ratio(2, 5) {
            labels.push(Symbol::hash());
            let mut kids = [blank, blank];
            if rng.gen_ratio(4, 5) {
                kids[rng.gen_range(0..2)] = rng.gen_range(0..n);
            }
            children.push(kids);
        } else {
            labels.push(letters.choose(rng).expect("letters").clone());
            let mut kid = || if rng.gen_ratio(1, 3) { blank } else { rng.gen_range(0..n) };
            children.push([kid(), kid()]);
        }
    }
    labels.push(Symbol::blank());
    children.push([blank, blank]);
    RegularTree::from_parts(labels, children, 0).expect("generated trees are blank closed")
}

/// A total SDTT over `alphabet` with ranks in `0..=max_rank`.
pub fn random_sdtt(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize, max_rank: u32) -> Sdtt {
    let n = rng.gen_range(1..=max_states);
    let mut b = SdttBuilder::new("rand", alphabet.clone());
    for q in 0..n {
        b.add_state(format!("q{q}"), rng.gen_range(0..=max_rank));
    }
    b.set_initial(0);
    for q in 0..n {
        for x in alphabet.symbols() {
            let (l, r) = (rng.gen_range(0..n), rng.gen_range(0..n));
            b.set_transition(q, x, player(rng), l, r).expect("states exist");
        }
    }
    b.build().expect("total by construction")
}

/// An NTA over `alphabet` with ranks in `lo..=hi` and up to two
/// transition pairs per state and letter.
pub fn random_nta(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize, lo: u32, hi: u32) -> Nta {
    let n = rng.gen_range(1..=max_states);
    let mut b = NtaBuilder::new("rand", alphabet.clone());
    for q in 0..n {
        b.add_state(format!("q{q}"), rng.gen_range(lo..=hi));
    }
    b.set_initial(0);
    for q in 0..n {
        for x in alphabet.symbols() {
            for _ in 0..rng.gen_range(0..=2) {
                let (l, r) = (rng.gen_range(0..n), rng.gen_range(0..n));
                b.add_transition(q, x, l, r).expect("states exist");
            }
        }
    }
    b.build().expect("initial set")
}

/// A nonempty-leaning safety NTA: every state accepts blank with
/// probability one half, and has one or two pairs on some letters.
pub fn random_safety_nta(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize) -> Nta {
    let n = rng.gen_range(1..=max_states);
    let mut b = NtaBuilder::new("safe", alphabet.clone());
    for q in 0..n {
        b.add_state(format!("q{q}"), 0);
    }
    b.set_initial(0);
    let blank = Symbol::blank();
    for q in 0..n {
        for x in alphabet.symbols() {
            let count = if x == &blank {
                usize::from(rng.gen_bool(0.5))
            } else {
                rng.gen_range(0..=2)
            };
            for _ in 0..count {
                let pick = |rng: &mut dyn rand::RngCore| rng.gen_range(0..n);
                let (l, r) = (pick(rng), pick(rng));
                b.add_transition(q, x, l, r).expect("states exist");
            }
        }
    }
    b.build().expect("initial set")
}

/// A tree game with labels from `letters`; when `hash` is set, some
/// player vertices are labelled `#`.
pub fn random_tree_game(rng: &mut impl Rng, letters: &[Symbol], max_vertices: usize, hash: bool) -> TreeGame {
    let n = rng.gen_range(1..=max_vertices);
    let vertices = (0..n)
        .map(|v| {
            let kind = match rng.gen_range(0..3) {
                0 => VertexKind::Branching,
                1 => VertexKind::Player(Player::Zero),
                _ => VertexKind::Player(Player::One),
            };
            let label = if hash && kind != VertexKind::Branching && rng.gen_bool(0.4) {
                Symbol::hash()
            } else {
                letters.choose(rng).expect("letters").clone()
            };
            GVertex {
                name: format!("v{v}"),
                label,
                kind,
                succ: [rng.gen_range(0..n), rng.gen_range(0..n)],
            }
        })
        .collect();
    TreeGame::new("rand", vertices, 0).expect("generated games are valid")
}

/// A uniformly random binary word of length below `max_len`.
pub fn random_dirs(rng: &mut impl Rng, max_len: usize) -> Vec<Dir> {
    let len = rng.gen_range(0..max_len.max(1));
    (0..len).map(|_| if rng.gen() { Dir::Left } else { Dir::Right }).collect()
}
