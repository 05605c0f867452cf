use super::{nta_membership, AutomatonError, Nta, NtaBuilder};
use crate::symbol::Symbol;
use crate::tree::RegularTree;

/// States of `a` that accept the blank tree.
pub fn blank_accepting_states(a: &Nta) -> Vec<bool> {
    (0..a.num_states())
        .map(|q| nta_membership(&a.with_initial(q), &RegularTree::blank()).expect("blank is in every alphabet"))
        .collect()
}

/// Automaton over the alphabet of `a` plus `#` accepting exactly the
/// trees whose #-projection is defined and accepted by `a`.
///
/// Reading `#` in state `q`, the automaton either guesses that the node
/// projects to blank (allowed when `q` accepts the blank tree) and checks
/// the whole subtree with the blank checker, or guesses that the node is
/// redundant: one child continues in the carrier of `q`, the other child
/// must project to blank.
///
/// The blank checker has states `zm` (even rank) and `zs` (odd rank just
/// below it). At a `#` node it picks a main child for `zm` and sends `zs`
/// to the other; it accepts exactly the trees over `#` and blank with
/// finitely many side turns on every path, which are the ones collapsing
/// to blank. The carrier of `q` is `q` itself unless `q` has even rank
/// and rejects the blank tree; then a fresh state of rank `rank(q) + 1`
/// carries it, so an endless `#` chain cannot be accepted through it.
///
/// Ranks: `zs` is the least odd rank not below `i`, `zm` the next one.
/// The input index `(i, j)` is kept iff `zm <= j` and every fresh
/// carrier rank is at most `j`. If `[i, j]` holds no even rank the
/// language is empty and the result simply never reads `#`.
pub fn preimage_hash(a: &Nta) -> Result<Nta, AutomatonError> {
    let hash = Symbol::hash();
    if a.alphabet().contains(&hash) {
        return Err(AutomatonError::HashInAlphabet(a.name().to_string()));
    }
    let alphabet = a.alphabet().with(hash.clone());
    let (lo, hi) = a.index();
    let mut b = NtaBuilder::new(format!("{}_hash", a.name()), alphabet);
    let n = a.num_states();
    for q in 0..n {
        b.add_state(a.state_name(q), a.rank(q));
    }
    b.set_initial(a.initial());
    let copy_original = |b: &mut NtaBuilder, from: usize, q: usize| {
        for s in a.alphabet().symbols() {
            for &(l, r) in a.transitions_on(q, s) {
                b.add_transition(from, s, l, r).expect("states exist");
            }
        }
    };
    for q in 0..n {
        copy_original(&mut b, q, q);
    }
    if lo == hi && lo % 2 == 1 {
        return b.build();
    }

    let names: Vec<String> = (0..n).map(|q| a.state_name(q).to_string()).collect();
    let fresh = |base: String| {
        let mut s = base;
        while names.contains(&s) {
            s.push('\'');
        }
        s
    };
    let side_rank = lo + (1 - lo % 2);
    let zs = b.add_state(fresh("zs".into()), side_rank);
    let zm = b.add_state(fresh("zm".into()), side_rank + 1);
    let blank = Symbol::blank();
    for z in [zm, zs] {
        b.add_transition(z, &blank, zm, zm).expect("states exist");
        b.add_transition(z, &hash, zm, zs).expect("states exist");
        b.add_transition(z, &hash, zs, zm).expect("states exist");
    }

    let qb = blank_accepting_states(a);
    for (q, &blank_ok) in qb.iter().enumerate().take(n) {
        let carrier = if a.rank(q).is_multiple_of(2) && !blank_ok {
            let c = b.add_state(fresh(format!("{}~c", a.state_name(q))), a.rank(q) + 1);
            copy_original(&mut b, c, q);
            c
        } else {
            q
        };
        for from in if carrier == q { vec![q] } else { vec![q, carrier] } {
            if blank_ok {
                b.add_transition(from, &hash, zm, zs).expect("states exist");
                b.add_transition(from, &hash, zs, zm).expect("states exist");
            }
            b.add_transition(from, &hash, carrier, zm).expect("states exist");
            b.add_transition(from, &hash, zm, carrier).expect("states exist");
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::tree::hash_projection;

    fn hash_over(l: &RegularTree, r: &RegularTree) -> RegularTree {
        RegularTree::node("#", l, r)
    }

    fn hash_loop() -> RegularTree {
        crate::tree::tree_from_rows([("h", "#", "h", "_"), ("_", "_", "_", "_")]).unwrap()
    }

    #[test]
    fn redundant_and_dead_hash_nodes() {
        let one = finite_language_nta("one", &[a_leaf()]);
        let p = preimage_hash(&one).unwrap();
        let cases = [
            (hash_over(&a_leaf(), &blank()), true),
            (hash_over(&blank(), &hash_over(&a_leaf(), &blank())), true),
            (hash_over(&hash_over(&blank(), &blank()), &a_leaf()), true),
            (hash_over(&a_leaf(), &a_leaf()), false),
            (hash_over(&blank(), &blank()), false),
            (hash_loop(), false),
            (a_leaf(), true),
        ];
        for (t, want) in cases {
            assert_eq!(nta_membership(&p, &t).unwrap(), want, "{t:?}");
            let proj = hash_projection(&t).map(|s| nta_membership(&one, &s).unwrap());
            assert_eq!(proj.unwrap_or(false), want);
        }
    }

    #[test]
    fn infinite_chain_is_blank() {
        let with_blank = finite_language_nta("both", &[blank(), a_leaf()]);
        let p = preimage_hash(&with_blank).unwrap();
        assert!(nta_membership(&p, &hash_loop()).unwrap());
        let c = RegularTree::node("a", &hash_loop(), &blank());
        assert!(nta_membership(&p, &c).unwrap());
    }

    #[test]
    fn hash_in_alphabet_rejected() {
        let p = preimage_hash(&all_nta()).unwrap();
        assert!(matches!(preimage_hash(&p), Err(AutomatonError::HashInAlphabet(_))));
    }

    #[test]
    fn index_kept_when_range_allows() {
        // ranks 0..=3: zs = 1, zm = 2, carriers at most 3
        let mut b = NtaBuilder::new("r", crate::automata::Alphabet::from_strs(&["a"]));
        let q0 = b.add_state("q0", 0);
        let q3 = b.add_state("q3", 3);
        b.set_initial(q0);
        b.add_transition(q0, &Symbol::new("a"), q3, q0).unwrap();
        b.add_transition(q3, &Symbol::blank(), q3, q3).unwrap();
        let a = b.build().unwrap();
        assert_eq!(preimage_hash(&a).unwrap().index(), a.index());
    }
}
