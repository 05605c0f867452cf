use std::collections::HashMap;

use super::{letter_indices, Alphabet, AutomatonError};
use crate::parity::{solve, ArenaBuilder, ParityGame, Player};
use crate::symbol::{Dir, Symbol};
use crate::tree::RegularTree;

/// Nondeterministic parity tree automaton.
///
/// `delta[q][a]` is the set of state pairs the automaton may send to the
/// two children when reading letter `a` in state `q`; an empty set means
/// no run continues.
#[derive(Debug, Clone)]
pub struct Nta {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    rank: Vec<u32>,
    delta: Vec<Vec<Vec<(usize, usize)>>>,
}

impl Nta {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn rank(&self, q: usize) -> u32 {
        self.rank[q]
    }

    /// Transitions from `q` on the letter with alphabet index `a`.
    pub fn transitions(&self, q: usize, a: usize) -> &[(usize, usize)] {
        &self.delta[q][a]
    }

    /// Transitions from `q` on `s`; empty if `s` is not in the alphabet.
    pub fn transitions_on(&self, q: usize, s: &Symbol) -> &[(usize, usize)] {
        match self.alphabet.index(s) {
            Some(a) => &self.delta[q][a],
            None => &[],
        }
    }

    /// The (min rank, max rank) pair.
    pub fn index(&self) -> (u32, u32) {
        let min = *self.rank.iter().min().expect("at least one state");
        let max = *self.rank.iter().max().expect("at least one state");
        (min, max)
    }

    pub fn is_safety(&self) -> bool {
        let (lo, hi) = self.index();
        lo == hi && lo % 2 == 0
    }

    /// The same automaton started in `q`.
    pub fn with_initial(&self, q: usize) -> Nta {
        Nta {
            initial: q,
            ..self.clone()
        }
    }

    pub fn renamed(&self, name: impl Into<String>) -> Nta {
        Nta {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Total number of transition pairs.
    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }
}

/// Incremental construction of an [`Nta`].
#[derive(Debug, Clone)]
pub struct NtaBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    rank: Vec<u32>,
    initial: Option<usize>,
    delta: Vec<Vec<Vec<(usize, usize)>>>,
}

impl NtaBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        NtaBuilder {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            rank: Vec::new(),
            initial: None,
            delta: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn add_state(&mut self, name: impl Into<String>, rank: u32) -> usize {
        self.states.push(name.into());
        self.rank.push(rank);
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        self.states.len() - 1
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial = Some(q);
    }

    /// Adds `(left, right)` to the transitions of `q` on `letter`.
    pub fn add_transition(
        &mut self,
        q: usize,
        letter: &Symbol,
        left: usize,
        right: usize,
    ) -> Result<(), AutomatonError> {
        let a = self
            .alphabet
            .index(letter)
            .ok_or_else(|| AutomatonError::LabelOutsideAlphabet(letter.clone(), self.name.clone()))?;
        for s in [q, left, right] {
            if s >= self.states.len() {
                return Err(AutomatonError::UnknownState(s.to_string()));
            }
        }
        let set = &mut self.delta[q][a];
        if !set.contains(&(left, right)) {
            set.push((left, right));
        }
        Ok(())
    }

    pub fn build(self) -> Result<Nta, AutomatonError> {
        if self.states.is_empty() {
            return Err(AutomatonError::NoStates(self.name));
        }
        let mut seen = std::collections::HashSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                return Err(AutomatonError::DuplicateState(s.clone()));
            }
        }
        let initial = self.initial.ok_or(AutomatonError::NoInitial(self.name.clone()))?;
        let mut delta = self.delta;
        for per_state in &mut delta {
            for set in per_state.iter_mut() {
                set.sort_unstable();
            }
        }
        Ok(Nta {
            name: self.name,
            alphabet: self.alphabet,
            states: self.states,
            initial,
            rank: self.rank,
            delta,
        })
    }
}

/// Does `a` accept `t`?
///
/// Player 0 picks a transition pair at each (node, state) position, then
/// Player 1 picks a direction. Pair positions carry the automaton's
/// maximal rank so they never decide the lowest rank seen infinitely often.
pub fn nta_membership(a: &Nta, t: &RegularTree) -> Result<bool, AutomatonError> {
    let letters = letter_indices(t, &a.alphabet, &a.name)?;
    let (_, top) = a.index();
    let mut b = ArenaBuilder::new();
    let mut state_pos: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pair_pos: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut work = Vec::new();

    let start = b.add_vertex("s", Player::Zero, a.rank[a.initial]);
    state_pos.insert((t.root(), a.initial), start);
    work.push((t.root(), a.initial, start));

    while let Some((n, q, v)) = work.pop() {
        let mut succ = Vec::new();
        for &(q0, q1) in &a.delta[q][letters[n]] {
            let p = *pair_pos.entry((n, q0, q1)).or_insert_with(|| {
                let p = b.add_vertex("p", Player::One, top);
                let mut kids = Vec::with_capacity(2);
                for (d, qd) in [(Dir::Left, q0), (Dir::Right, q1)] {
                    let c = t.child(n, d);
                    let w = *state_pos.entry((c, qd)).or_insert_with(|| {
                        let w = b.add_vertex("s", Player::Zero, a.rank[qd]);
                        work.push((c, qd, w));
                        w
                    });
                    kids.push(w);
                }
                b.set_successors(p, kids);
                p
            });
            succ.push(p);
        }
        b.set_successors(v, succ);
    }
    let g = b.build(start);
    Ok(solve(&g).winner_of(g.initial()) == Player::Zero)
}

/// Result of an emptiness check.
#[derive(Debug, Clone)]
pub struct Emptiness {
    pub nonempty: bool,
    /// A regular tree accepted by the automaton, when nonempty.
    pub witness: Option<RegularTree>,
}

/// Decides emptiness of `a` and extracts a regular witness.
///
/// Player 0 picks a letter and a transition pair for the current state,
/// Player 1 picks the direction. Positions remember whether a blank has
/// been read, after which only blank letters are allowed. A positional
/// winning strategy of Player 0 is read off as a regular tree.
pub fn nta_emptiness(a: &Nta) -> Emptiness {
    let (_, top) = a.index();
    let blank = a
        .alphabet
        .index(&Symbol::blank())
        .expect("alphabets contain blank");
    let mut b = ArenaBuilder::new();
    let mut state_pos: HashMap<(usize, bool), usize> = HashMap::new();
    // (letter, q0, q1) for every choice vertex
    let mut choice_info: Vec<Option<(usize, usize, usize)>> = Vec::new();
    let mut pos_info: Vec<Option<(usize, bool)>> = Vec::new();
    let mut choice_pos: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut work = Vec::new();

    let mut state_vertex = |q: usize,
                            blank_mode: bool,
                            b: &mut ArenaBuilder,
                            pos_info: &mut Vec<Option<(usize, bool)>>,
                            choice_info: &mut Vec<Option<(usize, usize, usize)>>,
                            work: &mut Vec<(usize, bool, usize)>|
     -> usize {
        *state_pos.entry((q, blank_mode)).or_insert_with(|| {
            let v = b.add_vertex("s", Player::Zero, a.rank[q]);
            pos_info.push(Some((q, blank_mode)));
            choice_info.push(None);
            work.push((q, blank_mode, v));
            v
        })
    };

    let start = state_vertex(
        a.initial,
        false,
        &mut b,
        &mut pos_info,
        &mut choice_info,
        &mut work,
    );
    while let Some((q, blank_mode, v)) = work.pop() {
        let mut succ = Vec::new();
        for letter in 0..a.alphabet.len() {
            if blank_mode && letter != blank {
                continue;
            }
            for &(q0, q1) in &a.delta[q][letter] {
                let key = (letter, q0, q1);
                let c = match choice_pos.get(&key) {
                    Some(&c) => c,
                    None => {
                        let c = b.add_vertex("c", Player::One, top);
                        pos_info.push(None);
                        choice_info.push(Some(key));
                        choice_pos.insert(key, c);
                        let mode = letter == blank;
                        let w0 = state_vertex(q0, mode, &mut b, &mut pos_info, &mut choice_info, &mut work);
                        let w1 = state_vertex(q1, mode, &mut b, &mut pos_info, &mut choice_info, &mut work);
                        b.set_successors(c, vec![w0, w1]);
                        c
                    }
                };
                succ.push(c);
            }
        }
        b.set_successors(v, succ);
    }
    let originals = b.len();
    let g = b.build(start);
    let sol = solve(&g);
    if sol.winner_of(start) != Player::Zero {
        return Emptiness {
            nonempty: false,
            witness: None,
        };
    }

    // read the witness off the positional strategy
    let mut node_of: HashMap<usize, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut children = Vec::new();
    let mut stack = vec![start];
    node_of.insert(start, 0);
    labels.push(Symbol::blank());
    children.push([0, 0]);
    while let Some(v) = stack.pop() {
        let c = chosen_successor(&g, &sol.strategy, v, originals);
        let (letter, _, _) = choice_info[c].expect("state positions move to choices");
        let mut kids = [0; 2];
        for d in Dir::BOTH {
            let w = g.succ(c, d);
            let id = *node_of.entry(w).or_insert_with(|| {
                labels.push(Symbol::blank());
                children.push([0, 0]);
                stack.push(w);
                labels.len() - 1
            });
            kids[d.index()] = id;
        }
        let id = node_of[&v];
        labels[id] = a.alphabet.symbols()[letter].clone();
        children[id] = kids;
    }
    let witness = RegularTree::from_parts(labels, children, 0).expect("witness respects blank closure");
    Emptiness {
        nonempty: true,
        witness: Some(witness),
    }
}

/// Follows a positional strategy from `v` through the auxiliary choice
/// chain built by [`ArenaBuilder`] and returns the original successor.
pub(crate) fn chosen_successor(
    g: &ParityGame,
    strategy: &[Option<Dir>],
    v: usize,
    originals: usize,
) -> usize {
    let mut cur = v;
    loop {
        let d = strategy[cur].unwrap_or(Dir::Left);
        let next = g.succ(cur, d);
        if next < originals {
            return next;
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn all_and_empty() {
        for t in [blank(), a_leaf(), c_pair(&a_leaf(), &b_leaf())] {
            assert!(nta_membership(&all_nta(), &t).unwrap());
            assert!(!nta_membership(&empty_nta(), &t).unwrap());
        }
        let e = nta_emptiness(&all_nta());
        assert!(e.nonempty);
        assert!(nta_membership(&all_nta(), &e.witness.unwrap()).unwrap());
        let e = nta_emptiness(&empty_nta());
        assert!(!e.nonempty);
        assert!(e.witness.is_none());
    }

    #[test]
    fn label_outside_alphabet() {
        let t = RegularTree::leaf("z");
        assert!(matches!(
            nta_membership(&all_nta(), &t),
            Err(AutomatonError::LabelOutsideAlphabet(..))
        ));
    }

    #[test]
    fn witness_respects_blank_closure() {
        // accepts exactly A_LEAF
        let n = tree_set_nta("one", &[a_leaf()], &abc());
        let e = nta_emptiness(&n);
        let w = e.witness.unwrap();
        assert!(w.equivalent(&a_leaf()));
    }

    #[test]
    fn mismatched_letter_kills_the_run() {
        let n = tree_set_nta("one", &[a_leaf()], &abc());
        assert!(nta_membership(&n, &a_leaf()).unwrap());
        assert!(!nta_membership(&n, &b_leaf()).unwrap());
        assert!(!nta_membership(&n, &blank()).unwrap());
    }
}
