use std::collections::HashMap;

use super::{AutomatonError, Nta, NtaBuilder};

/// Product of `a` with the safety automaton `s`, restricted to pairs
/// reachable from the initial pair. Ranks come from `a`.
pub fn intersect_with_safety(a: &Nta, s: &Nta) -> Result<Nta, AutomatonError> {
    if !s.is_safety() {
        return Err(AutomatonError::NotSafety(s.name().to_string()));
    }
    let alphabet = a.alphabet().union(s.alphabet());
    let mut b = NtaBuilder::new(format!("{}_x_{}", a.name(), s.name()), alphabet.clone());
    let mut id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order = vec![(a.initial(), s.initial())];
    id.insert(order[0], b.add_state(pair_name(a, s, order[0]), a.rank(a.initial())));
    b.set_initial(0);
    let mut i = 0;
    while i < order.len() {
        let (p, q) = order[i];
        let from = id[&(p, q)];
        for letter in alphabet.symbols() {
            for &(p0, p1) in a.transitions_on(p, letter) {
                for &(q0, q1) in s.transitions_on(q, letter) {
                    let mut kids = [0; 2];
                    for (k, key) in [(p0, q0), (p1, q1)].into_iter().enumerate() {
                        kids[k] = match id.get(&key) {
                            Some(&v) => v,
                            None => {
                                let v = b.add_state(pair_name(a, s, key), a.rank(key.0));
                                id.insert(key, v);
                                order.push(key);
                                v
                            }
                        };
                    }
                    b.add_transition(from, letter, kids[0], kids[1])?;
                }
            }
        }
        i += 1;
    }
    b.build()
}

fn pair_name(a: &Nta, s: &Nta, (p, q): (usize, usize)) -> String {
    format!("{}|{}", a.state_name(p), s.state_name(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{nta_emptiness, nta_membership};
    use crate::fixtures::*;

    #[test]
    fn identity_and_annihilator() {
        let one = tree_set_nta("one", &[a_leaf()], &abc());
        let p = intersect_with_safety(&one, &all_nta()).unwrap();
        for t in [blank(), a_leaf(), b_leaf()] {
            assert_eq!(nta_membership(&p, &t).unwrap(), nta_membership(&one, &t).unwrap());
        }
        let e = intersect_with_safety(&empty_nta(), &all_nta()).unwrap();
        assert!(!nta_emptiness(&e).nonempty);
    }

    #[test]
    fn non_safety_rejected() {
        assert!(matches!(
            intersect_with_safety(&all_nta(), &empty_nta()),
            Err(AutomatonError::NotSafety(_))
        ));
    }
}
