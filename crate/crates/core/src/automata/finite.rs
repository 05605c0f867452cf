use super::{Alphabet, Nta, NtaBuilder};
use crate::symbol::Symbol;
use crate::tree::RegularTree;

/// Safety automaton accepting exactly the given regular trees.
///
/// Every node of every tree graph becomes a state; the initial state
/// offers the root transitions of all trees.
pub fn finite_language_nta(name: &str, trees: &[RegularTree]) -> Nta {
    tree_set_nta(name, trees, &Alphabet::new([]))
}

/// As [`finite_language_nta`], over an alphabet extended by `extra`.
pub fn tree_set_nta(name: &str, trees: &[RegularTree], extra: &Alphabet) -> Nta {
    let alphabet = trees
        .iter()
        .fold(extra.clone(), |al, t| al.union(&Alphabet::new(t.symbols())));
    let mut b = NtaBuilder::new(name, alphabet);
    let root = b.add_state("root", 0);
    let blank = b.add_state("blank", 0);
    b.set_initial(root);
    b.add_transition(blank, &Symbol::blank(), blank, blank)
        .expect("blank is in every alphabet");
    for (k, t) in trees.iter().enumerate() {
        let state: Vec<usize> = t
            .nodes()
            .map(|n| {
                if t.label(n).is_blank() {
                    blank
                } else {
                    b.add_state(format!("t{k}n{n}"), 0)
                }
            })
            .collect();
        for n in t.nodes() {
            let [l, r] = t.children(n);
            let label = t.label(n);
            b.add_transition(state[n], label, state[l], state[r]).expect("label in alphabet");
            if n == t.root() {
                b.add_transition(root, label, state[l], state[r]).expect("label in alphabet");
            }
        }
    }
    b.build().expect("initial state set")
}
