use std::collections::HashMap;

use super::{letter_indices, Alphabet, AutomatonError};
use crate::parity::{solve, ArenaBuilder, Player};
use crate::symbol::{Dir, Symbol};
use crate::tree::RegularTree;

/// Synchronised deterministic tree transducer.
///
/// Reading letter `a` in state `q`, it sends `delta(q, a)` to the two
/// children and hands the node to player `owner(q, a)`. Read over a tree,
/// it yields a game on the run tree whose parity objective uses `rank`.
#[derive(Debug, Clone)]
pub struct Sdtt {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    rank: Vec<u32>,
    delta: Vec<Vec<(usize, usize)>>,
    owner: Vec<Vec<Player>>,
}

impl Sdtt {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
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

    pub fn delta(&self, q: usize, a: usize) -> (usize, usize) {
        self.delta[q][a]
    }

    pub fn owner(&self, q: usize, a: usize) -> Player {
        self.owner[q][a]
    }

    pub fn index(&self) -> (u32, u32) {
        (
            *self.rank.iter().min().expect("states"),
            *self.rank.iter().max().expect("states"),
        )
    }

    pub fn with_initial(&self, q: usize) -> Sdtt {
        Sdtt {
            initial: q,
            ..self.clone()
        }
    }

    pub fn renamed(&self, name: impl Into<String>) -> Sdtt {
        Sdtt {
            name: name.into(),
            ..self.clone()
        }
    }
}

/// Incremental construction of a total [`Sdtt`].
#[derive(Debug, Clone)]
pub struct SdttBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    rank: Vec<u32>,
    initial: Option<usize>,
    delta: Vec<Vec<Option<(usize, usize, Player)>>>,
}

impl SdttBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        SdttBuilder {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            rank: Vec::new(),
            initial: None,
            delta: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, rank: u32) -> usize {
        self.states.push(name.into());
        self.rank.push(rank);
        self.delta.push(vec![None; self.alphabet.len()]);
        self.states.len() - 1
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial = Some(q);
    }

    pub fn set_transition(
        &mut self,
        q: usize,
        letter: &Symbol,
        owner: Player,
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
        self.delta[q][a] = Some((left, right, owner));
        Ok(())
    }

    pub fn build(self) -> Result<Sdtt, AutomatonError> {
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
        let mut delta = Vec::with_capacity(self.states.len());
        let mut owner = Vec::with_capacity(self.states.len());
        for (q, row) in self.delta.iter().enumerate() {
            let mut d = Vec::with_capacity(row.len());
            let mut o = Vec::with_capacity(row.len());
            for (a, entry) in row.iter().enumerate() {
                let (l, r, p) = entry.ok_or_else(|| {
                    AutomatonError::MissingTransition(
                        self.states[q].clone(),
                        self.alphabet.symbols()[a].clone(),
                    )
                })?;
                d.push((l, r));
                o.push(p);
            }
            delta.push(d);
            owner.push(o);
        }
        Ok(Sdtt {
            name: self.name,
            alphabet: self.alphabet,
            states: self.states,
            initial,
            rank: self.rank,
            delta,
            owner,
        })
    }
}

/// The unique run of `d` on `t`, labelled by state names.
pub fn sdtt_run(d: &Sdtt, t: &RegularTree) -> Result<RegularTree, AutomatonError> {
    let letters = letter_indices(t, &d.alphabet, &d.name)?;
    let mut id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order = vec![(t.root(), d.initial)];
    id.insert((t.root(), d.initial), 0);
    let mut children = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (n, q) = order[i];
        let (q0, q1) = d.delta[q][letters[n]];
        let mut kids = [0; 2];
        for (dir, qd) in [(Dir::Left, q0), (Dir::Right, q1)] {
            let key = (t.child(n, dir), qd);
            kids[dir.index()] = *id.entry(key).or_insert_with(|| {
                order.push(key);
                order.len() - 1
            });
        }
        children.push(kids);
        i += 1;
    }
    let labels = order.iter().map(|&(_, q)| Symbol::new(&d.states[q])).collect();
    Ok(RegularTree::from_parts(labels, children, 0).expect("run trees have no blanks"))
}

/// Does Player 0 win the game `d` induces on `t`?
pub fn sdtt_membership(d: &Sdtt, t: &RegularTree) -> Result<bool, AutomatonError> {
    let letters = letter_indices(t, &d.alphabet, &d.name)?;
    let mut b = ArenaBuilder::new();
    let mut id: HashMap<(usize, usize), usize> = HashMap::new();
    let start = b.add_vertex("r", d.owner[d.initial][letters[t.root()]], d.rank[d.initial]);
    id.insert((t.root(), d.initial), start);
    let mut work = vec![(t.root(), d.initial, start)];
    while let Some((n, q, v)) = work.pop() {
        let (q0, q1) = d.delta[q][letters[n]];
        let mut succ = Vec::with_capacity(2);
        for (dir, qd) in [(Dir::Left, q0), (Dir::Right, q1)] {
            let c = t.child(n, dir);
            let w = *id.entry((c, qd)).or_insert_with(|| {
                let w = b.add_vertex("r", d.owner[qd][letters[c]], d.rank[qd]);
                work.push((c, qd, w));
                w
            });
            succ.push(w);
        }
        b.set_successors(v, succ);
    }
    let g = b.build(start);
    Ok(solve(&g).winner_of(start) == Player::Zero)
}

/// Swaps the owner of every transition and shifts every rank up by one,
/// so Player 0 wins the dual game exactly where Player 1 won the original.
pub fn dualize_sdtt(d: &Sdtt) -> Sdtt {
    Sdtt {
        name: format!("{}_dual", d.name),
        rank: d.rank.iter().map(|r| r + 1).collect(),
        owner: d
            .owner
            .iter()
            .map(|row| row.iter().map(|p| p.opponent()).collect())
            .collect(),
        ..d.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn run_of_safe_a() {
        let d = d_safe_a();
        let r = sdtt_run(&d, &a_leaf()).unwrap();
        assert!(!r.is_finite());
        assert_eq!(r.label(r.root()).as_str(), d.state_name(d.initial()));
    }

    #[test]
    fn dual_flips_membership() {
        let d = d_safe_a();
        for t in [blank(), a_leaf(), b_leaf(), RegularTree::node("a", &a_leaf(), &b_leaf())] {
            let m = sdtt_membership(&d, &t).unwrap();
            let dm = sdtt_membership(&dualize_sdtt(&d), &t).unwrap();
            assert_ne!(m, dm);
        }
    }

    #[test]
    fn missing_transition_reported() {
        let mut b = SdttBuilder::new("x", Alphabet::from_strs(&["a"]));
        let q = b.add_state("q", 0);
        b.set_initial(q);
        b.set_transition(q, &Symbol::blank(), Player::Zero, q, q).unwrap();
        assert!(matches!(b.build(), Err(AutomatonError::MissingTransition(..))));
    }
}
