//! Tree automata: nondeterministic (NTA), alternating (ATA), game
//! automata, and synchronised deterministic tree transducers (SDTT).
//!
//! Membership for every kind is decided by building the corresponding
//! acceptance parity game over the finite product of tree nodes and
//! automaton positions, and solving it.

mod ata;
mod finite;
mod nta;
mod playlang;
mod preimage;
mod product;
mod sdtt;
mod translate;

pub use finite::{finite_language_nta, tree_set_nta};
pub use ata::{ata_membership, parse_formula, Ata, Formula, GameAutomaton, GameShape};
pub use nta::{nta_emptiness, nta_membership, Emptiness, Nta, NtaBuilder};
pub use playlang::play_language_nta;
pub use preimage::{blank_accepting_states, preimage_hash};
pub use product::intersect_with_safety;
pub use sdtt::{dualize_sdtt, sdtt_membership, sdtt_run, Sdtt, SdttBuilder};
pub use translate::{game_ata_to_nta, game_ata_to_sdtt, sdtt_to_game_ata};

use crate::symbol::Symbol;
use crate::tree::RegularTree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("label {0} is not in the alphabet of `{1}`")]
    LabelOutsideAlphabet(Symbol, String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("automaton `{0}` has no states")]
    NoStates(String),
    #[error("automaton `{0}` has no initial state")]
    NoInitial(String),
    #[error("missing transition for state `{0}` on {1}")]
    MissingTransition(String, Symbol),
    #[error("transition of `{0}` on {1} is not one of the four game-automaton shapes")]
    NotGameShape(String, Symbol),
    #[error("`{0}` is not a safety automaton (needs a single even rank)")]
    NotSafety(String),
    #[error("alphabet of `{0}` already contains #")]
    HashInAlphabet(String),
    #[error("cannot parse formula `{0}`: {1}")]
    Formula(String, String),
}

/// A finite alphabet, always containing the blank symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        let mut symbols: Vec<Symbol> = symbols.into_iter().collect();
        symbols.push(Symbol::blank());
        symbols.sort();
        symbols.dedup();
        Alphabet { symbols }
    }

    pub fn from_strs(symbols: &[&str]) -> Self {
        Self::new(symbols.iter().map(Symbol::new))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index(&self, s: &Symbol) -> Option<usize> {
        self.symbols.binary_search(s).ok()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.index(s).is_some()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::new(self.symbols.iter().chain(&other.symbols).cloned())
    }

    pub fn with(&self, s: Symbol) -> Alphabet {
        Alphabet::new(self.symbols.iter().cloned().chain([s]))
    }
}

/// Maps every node label of `t` to its index in `alphabet`.
pub(crate) fn letter_indices(
    t: &RegularTree,
    alphabet: &Alphabet,
    owner: &str,
) -> Result<Vec<usize>, AutomatonError> {
    t.labels()
        .iter()
        .map(|l| {
            alphabet
                .index(l)
                .ok_or_else(|| AutomatonError::LabelOutsideAlphabet(l.clone(), owner.to_string()))
        })
        .collect()
}

/// Smallest even value in `[lo, hi]`, if any.
pub(crate) fn even_in(lo: u32, hi: u32) -> Option<u32> {
    let e = lo + lo % 2;
    (e <= hi).then_some(e)
}
