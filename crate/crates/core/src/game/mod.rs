//! Tree games: arenas whose plays are trees, and the constructions that
//! solve, check and build them.

mod check;
mod lemma1;
mod reduce;
mod strategy;

pub use check::{
    check_strategy, complementarity_guard, decide_determinacy, lift_objective, sdtt_check_automaton,
    solve_single_player, strategy_set_nta, Determinacy, DeterminacyReport, GUARD_SAMPLES,
};
pub use lemma1::{game_from_safety_nta, game_from_safety_nta_for, matching_pennies_game, MpParts};
pub use reduce::{
    compute_qb, reduce_to_parity, reduce_to_parity_full, solve_game_automaton_objective,
    solve_game_automaton_objective_with, Flag, GameSolution, Reduction,
};
pub use strategy::{
    enumerate_strategies, play, strategy_tree, validate_strategy_tree, FiniteMemoryStrategy,
    StrategyError,
};

use std::collections::HashMap;

use crate::automata::AutomatonError;
use crate::parity::Player;
use crate::symbol::{Dir, Symbol};
use crate::tree::RegularTree;

/// Who moves at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Player(Player),
    Branching,
}

impl VertexKind {
    pub fn owner(self) -> Option<Player> {
        match self {
            VertexKind::Player(p) => Some(p),
            VertexKind::Branching => None,
        }
    }
}

impl std::fmt::Display for VertexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexKind::Player(p) => write!(f, "{}", p.index()),
            VertexKind::Branching => write!(f, "B"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GVertex {
    pub name: String,
    pub label: Symbol,
    pub kind: VertexKind,
    pub succ: [usize; 2],
}

/// Winning-set reference carried by a game file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Sdtt(String),
    Nta { l: String, col: String },
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum GameError {
    #[error("game has no vertices")]
    Empty,
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("vertex `{0}` may not be labelled blank or named `_`")]
    BlankVertex(String),
    #[error("vertex `{0}` is labelled # but is a branching vertex")]
    HashOnBranching(String),
    #[error("label {0} of vertex `{1}` is not read by the objective")]
    LabelNotInObjective(Symbol, String),
    #[error("{0}")]
    Automaton(#[from] AutomatonError),
    #[error("{0}")]
    Strategy(#[from] StrategyError),
    #[error("both players own vertices; not a single-player game")]
    NotSinglePlayer,
    #[error("a complement automaton is required when Player 0 owns no vertex")]
    MissingComplement,
    #[error("objective automata are not complementary on sampled tree {0:?}")]
    NotComplementary(RegularTree),
    #[error("automaton `{0}` recognises the empty language")]
    EmptyLanguage(String),
    #[error("hypothesis fails: graft of t{0} and t{1} is {2} the language")]
    Hypothesis(usize, usize, &'static str),
    #[error("trees t{0} and t{1} are equal")]
    TreesNotDistinct(usize, usize),
    #[error("context hole not found in the centre game")]
    HoleNotFound,
}

/// A tree game arena with its initial vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGame {
    name: String,
    vertices: Vec<GVertex>,
    initial: usize,
    objective: Option<Objective>,
}

impl TreeGame {
    pub fn new(name: impl Into<String>, vertices: Vec<GVertex>, initial: usize) -> Result<Self, GameError> {
        if vertices.is_empty() {
            return Err(GameError::Empty);
        }
        let n = vertices.len();
        if initial >= n {
            return Err(GameError::VertexOutOfRange(initial));
        }
        let mut names = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(&s) = v.succ.iter().find(|&&s| s >= n) {
                return Err(GameError::VertexOutOfRange(s));
            }
            if v.label.is_blank() || v.name == Symbol::BLANK_TEXT {
                return Err(GameError::BlankVertex(v.name.clone()));
            }
            if names.insert(v.name.clone(), i).is_some() {
                return Err(GameError::DuplicateName(v.name.clone()));
            }
        }
        Ok(TreeGame {
            name: name.into(),
            vertices,
            initial,
            objective: None,
        })
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = Some(objective);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn vertices(&self) -> &[GVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &GVertex {
        &self.vertices[v]
    }

    pub fn label(&self, v: usize) -> &Symbol {
        &self.vertices[v].label
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.vertices[v].kind
    }

    pub fn succ(&self, v: usize, d: Dir) -> usize {
        self.vertices[v].succ[d.index()]
    }

    pub fn name_of(&self, v: usize) -> &str {
        &self.vertices[v].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    /// The vertex name as a tree label.
    pub fn vertex_symbol(&self, v: usize) -> Symbol {
        Symbol::new(&self.vertices[v].name)
    }

    pub fn owned_by(&self, p: Player) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.kind(v) == VertexKind::Player(p))
            .collect()
    }

    /// Labels used by the vertices.
    pub fn labels(&self) -> std::collections::BTreeSet<Symbol> {
        self.vertices.iter().map(|v| v.label.clone()).collect()
    }

    /// `#` labels occur on player vertices only.
    pub fn check_hash_placement(&self) -> Result<(), GameError> {
        for v in &self.vertices {
            if v.label.is_hash() && v.kind == VertexKind::Branching {
                return Err(GameError::HashOnBranching(v.name.clone()));
            }
        }
        Ok(())
    }

    /// Keeps the vertices reachable from the initial one.
    pub fn pruned(&self) -> TreeGame {
        let mut keep = vec![false; self.len()];
        let mut stack = vec![self.initial];
        while let Some(v) = stack.pop() {
            if keep[v] {
                continue;
            }
            keep[v] = true;
            stack.extend(self.vertices[v].succ);
        }
        let mut new_id = vec![usize::MAX; self.len()];
        let mut vertices = Vec::new();
        for v in 0..self.len() {
            if keep[v] {
                new_id[v] = vertices.len();
                vertices.push(self.vertices[v].clone());
            }
        }
        for v in &mut vertices {
            v.succ = v.succ.map(|s| new_id[s]);
        }
        TreeGame {
            name: self.name.clone(),
            vertices,
            initial: new_id[self.initial],
            objective: self.objective.clone(),
        }
    }
}

/// The unfolding of `g`, labelled by vertex names.
pub fn unfolding(g: &TreeGame) -> RegularTree {
    let labels = (0..g.len()).map(|v| g.vertex_symbol(v)).collect();
    let children = g.vertices.iter().map(|v| v.succ).collect();
    RegularTree::from_parts(labels, children, g.initial).expect("game graphs have no blank vertices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig2_game;
    use crate::symbol::Address;

    #[test]
    fn fig2_unfolding() {
        let g = fig2_game();
        let t = unfolding(&g);
        assert_eq!(t.len(), 4);
        assert_eq!(t.label_at(&"0".parse::<Address>().unwrap()).as_str(), "a");
        assert_eq!(t.label_at(&"00".parse::<Address>().unwrap()).as_str(), "0");
        assert_eq!(t.label_at(&Address::root()).as_str(), "0");
    }

    #[test]
    fn unfolding_agrees_with_successors() {
        let g = fig2_game();
        let t = unfolding(&g);
        for w in ["", "1", "01", "0110", "11111"] {
            let u: Address = w.parse().unwrap();
            let v = u.dirs().iter().fold(g.initial(), |v, &d| g.succ(v, d));
            assert_eq!(t.label_at(&u).as_str(), g.name_of(v));
        }
    }

    #[test]
    fn validation() {
        let mk = |name: &str, label: &str| GVertex {
            name: name.into(),
            label: Symbol::new(label),
            kind: VertexKind::Branching,
            succ: [0, 0],
        };
        assert!(matches!(
            TreeGame::new("g", vec![mk("v", "_")], 0),
            Err(GameError::BlankVertex(_))
        ));
        assert!(matches!(
            TreeGame::new("g", vec![mk("v", "a"), mk("v", "a")], 0),
            Err(GameError::DuplicateName(_))
        ));
        let g = TreeGame::new("g", vec![mk("v", "#")], 0).unwrap();
        assert!(g.check_hash_placement().is_err());
    }
}
