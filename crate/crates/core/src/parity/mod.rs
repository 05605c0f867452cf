//! Parity games with ordered binary successors.
//!
//! Player 0 wins an infinite play when the lowest rank seen infinitely
//! often is even. On a finite arena every play under positional
//! strategies is eventually periodic, so the winner is the parity of the
//! minimal rank on the cycle.

mod naive;
mod registry;
mod zielonka;

pub use naive::{solve_naive, Enumeration};
pub use registry::{ParitySolver, SolverRegistry};
pub use zielonka::Zielonka;

use std::collections::HashMap;
use std::fmt;

use crate::symbol::{Address, Dir};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Zero = 0,
    One = 1,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::Zero),
            1 => Some(Player::One),
            _ => None,
        }
    }

    /// The player favoured by a rank: even ranks are good for Player 0.
    pub fn of_rank(rank: u32) -> Player {
        if rank.is_multiple_of(2) {
            Player::Zero
        } else {
            Player::One
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParityError {
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("game has no vertices")]
    Empty,
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("strategy undefined at vertex `{0}`")]
    StrategyUndefined(String),
}

/// A positional strategy: the chosen successor direction per vertex.
pub type PositionalStrategy = Vec<Option<Dir>>;

#[derive(Debug, Clone)]
pub struct PVertex {
    pub name: String,
    pub owner: Player,
    pub rank: u32,
    pub succ: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct ParityGame {
    vertices: Vec<PVertex>,
    initial: usize,
}

impl ParityGame {
    pub fn new(vertices: Vec<PVertex>, initial: usize) -> Result<Self, ParityError> {
        if vertices.is_empty() {
            return Err(ParityError::Empty);
        }
        let n = vertices.len();
        if initial >= n {
            return Err(ParityError::VertexOutOfRange(initial));
        }
        let mut names = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(&s) = v.succ.iter().find(|&&s| s >= n) {
                return Err(ParityError::VertexOutOfRange(s));
            }
            if names.insert(v.name.as_str(), i).is_some() {
                return Err(ParityError::DuplicateName(v.name.clone()));
            }
        }
        Ok(ParityGame { vertices, initial })
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

    pub fn vertex(&self, v: usize) -> &PVertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[PVertex] {
        &self.vertices
    }

    pub fn owner(&self, v: usize) -> Player {
        self.vertices[v].owner
    }

    pub fn rank(&self, v: usize) -> u32 {
        self.vertices[v].rank
    }

    pub fn succ(&self, v: usize, d: Dir) -> usize {
        self.vertices[v].succ[d.index()]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    /// Vertex reached from `v` by following the successor directions of `u`.
    pub fn beta(&self, v: usize, u: &Address) -> usize {
        u.dirs().iter().fold(v, |w, &d| self.succ(w, d))
    }

    /// The path from `v` along `u`, including both ends.
    pub fn beta_path(&self, v: usize, u: &Address) -> Vec<usize> {
        let mut path = Vec::with_capacity(u.len() + 1);
        path.push(v);
        let mut w = v;
        for &d in u.dirs() {
            w = self.succ(w, d);
            path.push(w);
        }
        path
    }

    /// Predecessor lists, one entry per edge.
    pub(crate) fn predecessors(&self) -> Vec<Vec<(usize, Dir)>> {
        let mut preds = vec![Vec::new(); self.len()];
        for (v, vx) in self.vertices.iter().enumerate() {
            for d in Dir::BOTH {
                preds[vx.succ[d.index()]].push((v, d));
            }
        }
        preds
    }
}

/// Winning regions and positional winning strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    /// Defined exactly on each player's own vertices inside that player's
    /// winning region.
    pub strategy: PositionalStrategy,
}

impl Solution {
    pub fn winner_of(&self, v: usize) -> Player {
        self.winner[v]
    }

    /// The strategy of `player`, restricted to its winning region.
    pub fn strategy_of(&self, g: &ParityGame, player: Player) -> PositionalStrategy {
        (0..g.len())
            .map(|v| {
                if g.owner(v) == player && self.winner[v] == player {
                    self.strategy[v]
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn region(&self, player: Player) -> Vec<usize> {
        (0..self.winner.len())
            .filter(|&v| self.winner[v] == player)
            .collect()
    }
}

/// The eventually periodic play produced by two positional strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayOutcome {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
    pub prefix_ranks: Vec<u32>,
    pub cycle_ranks: Vec<u32>,
}

impl PlayOutcome {
    /// Winner by the lowest rank on the cycle.
    pub fn winner(&self) -> Player {
        Player::of_rank(*self.cycle_ranks.iter().min().expect("cycle is nonempty"))
    }
}

/// Plays `s0` against `s1` from `from`.
pub fn play_out(
    g: &ParityGame,
    s0: &[Option<Dir>],
    s1: &[Option<Dir>],
    from: usize,
) -> Result<PlayOutcome, ParityError> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut path = Vec::new();
    let mut v = from;
    loop {
        if let Some(&i) = seen.get(&v) {
            let prefix = path[..i].to_vec();
            let cycle = path[i..].to_vec();
            let ranks = |vs: &[usize]| vs.iter().map(|&w| g.rank(w)).collect();
            return Ok(PlayOutcome {
                prefix_ranks: ranks(&prefix),
                cycle_ranks: ranks(&cycle),
                prefix,
                cycle,
            });
        }
        seen.insert(v, path.len());
        path.push(v);
        let s = match g.owner(v) {
            Player::Zero => s0,
            Player::One => s1,
        };
        let d = s
            .get(v)
            .copied()
            .flatten()
            .ok_or_else(|| ParityError::StrategyUndefined(g.name(v).to_string()))?;
        v = g.succ(v, d);
    }
}

/// Solves with the default solver.
pub fn solve(g: &ParityGame) -> Solution {
    Zielonka.solve(g)
}

/// Builds binary parity games from vertices with arbitrary successor
/// lists.
///
/// A single successor is cloned. Longer lists become chains of auxiliary
/// vertices with the same owner and rank, so the lowest rank seen
/// infinitely often is unchanged. A vertex without successors loses for
/// its owner: it moves to a sink of the opponent's parity.
#[derive(Debug, Default)]
pub struct ArenaBuilder {
    names: Vec<String>,
    owners: Vec<Player>,
    ranks: Vec<u32>,
    succs: Vec<Vec<usize>>,
}

impl ArenaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, owner: Player, rank: u32) -> usize {
        self.names.push(name.into());
        self.owners.push(owner);
        self.ranks.push(rank);
        self.succs.push(Vec::new());
        self.names.len() - 1
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn set_successors(&mut self, v: usize, succ: Vec<usize>) {
        self.succs[v] = succ;
    }

    pub fn push_successor(&mut self, v: usize, w: usize) {
        self.succs[v].push(w);
    }

    /// Vertex ids below `len()` keep their meaning in the built game.
    /// Repeated names get an `@id` suffix.
    pub fn build(self, initial: usize) -> ParityGame {
        let n = self.names.len();
        let mut taken = std::collections::HashSet::new();
        let names: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .map(|(v, name)| {
                if taken.insert(name.clone()) {
                    name.clone()
                } else {
                    format!("{name}@{v}")
                }
            })
            .collect();
        let mut vertices: Vec<PVertex> = (0..n)
            .map(|v| PVertex {
                name: names[v].clone(),
                owner: self.owners[v],
                rank: self.ranks[v],
                succ: [v, v],
            })
            .collect();
        let mut sinks: [Option<usize>; 2] = [None, None];
        for v in 0..n {
            let list = &self.succs[v];
            let succ = match list.len() {
                0 => {
                    let loser = self.owners[v];
                    let id = *sinks[loser.index()].get_or_insert_with(|| {
                        let id = vertices.len();
                        vertices.push(PVertex {
                            name: format!("__stuck{}", loser.index()),
                            owner: loser,
                            rank: loser.opponent().index() as u32,
                            succ: [id, id],
                        });
                        id
                    });
                    [id, id]
                }
                1 => [list[0], list[0]],
                2 => [list[0], list[1]],
                k => {
                    let first_aux = vertices.len();
                    for j in 1..k - 1 {
                        let id = vertices.len();
                        let next = if j + 1 < k - 1 { id + 1 } else { list[k - 1] };
                        vertices.push(PVertex {
                            name: format!("{}~{}", names[v], j),
                            owner: self.owners[v],
                            rank: self.ranks[v],
                            succ: [list[j], next],
                        });
                    }
                    [list[0], first_aux]
                }
            };
            vertices[v].succ = succ;
        }
        ParityGame::new(vertices, initial).expect("builder produces valid games")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn self_loop(rank: u32) -> ParityGame {
        ParityGame::new(
            vec![PVertex {
                name: "w".into(),
                owner: Player::Zero,
                rank,
                succ: [0, 0],
            }],
            0,
        )
        .unwrap()
    }

    /// Graph of the four-vertex arena: 0,1 -> {a,b}, a,b -> {0,1}.
    fn four_cycle() -> ParityGame {
        let mk = |name: &str, owner, succ| PVertex {
            name: name.into(),
            owner,
            rank: 0,
            succ,
        };
        ParityGame::new(
            vec![
                mk("0", Player::One, [2, 3]),
                mk("1", Player::One, [2, 3]),
                mk("a", Player::Zero, [0, 1]),
                mk("b", Player::Zero, [0, 1]),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn beta_examples() {
        let g = four_cycle();
        assert_eq!(g.beta(1, &Address::root()), 1);
        assert_eq!(g.name(g.beta(0, &"0".parse().unwrap())), "a");
        let w = self_loop(0);
        assert_eq!(w.beta(0, &"0110".parse().unwrap()), 0);
    }

    #[test]
    fn beta_path_examples() {
        let g = four_cycle();
        assert_eq!(g.beta_path(0, &Address::root()), vec![0]);
        assert_eq!(g.beta_path(0, &"00".parse().unwrap()), vec![0, 2, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let len = rng.gen_range(0..12);
            let u = Address::from_dirs(
                (0..len)
                    .map(|_| Dir::from_index(rng.gen_range(0..2)).unwrap())
                    .collect(),
            );
            let p = g.beta_path(0, &u);
            assert_eq!(p.len(), u.len() + 1);
            assert_eq!(*p.last().unwrap(), g.beta(0, &u));
        }
    }

    #[test]
    fn self_loops_are_decided_by_parity() {
        for (rank, who) in [(0, Player::Zero), (1, Player::One), (2, Player::Zero)] {
            let g = self_loop(rank);
            assert_eq!(solve(&g).winner, vec![who]);
            assert_eq!(solve_naive(&g), vec![who]);
            let s = vec![Some(Dir::Left)];
            let out = play_out(&g, &s, &s, 0).unwrap();
            assert_eq!(out.cycle_ranks, vec![rank]);
            assert_eq!(out.winner(), who);
        }
    }

    #[test]
    fn play_out_reports_missing_choice() {
        let g = self_loop(0);
        let err = play_out(&g, &[None], &[None], 0).unwrap_err();
        assert_eq!(err, ParityError::StrategyUndefined("w".into()));
    }

    #[test]
    fn two_vertex_example_by_enumeration() {
        // v: owner 0, rank 1; w: owner 1, rank 0; each loops or moves across.
        let g = ParityGame::new(
            vec![
                PVertex {
                    name: "v".into(),
                    owner: Player::Zero,
                    rank: 1,
                    succ: [0, 1],
                },
                PVertex {
                    name: "w".into(),
                    owner: Player::One,
                    rank: 0,
                    succ: [1, 0],
                },
            ],
            0,
        )
        .unwrap();
        // All four positional profiles, classified by the cycle minimum.
        // Player 1 can always answer with w -> v, after which the cycle is
        // v -> v (rank 1) if Player 0 loops, or v -> w -> v (min 0).
        // Player 0 moving to w and Player 1 looping on w gives min 0.
        // Player 1's best reply to "v moves to w" is "w moves back": min 0.
        // So Player 0 wins from both vertices by moving to w.
        let mut table = Vec::new();
        for d0 in Dir::BOTH {
            for d1 in Dir::BOTH {
                let s0 = vec![Some(d0), None];
                let s1 = vec![None, Some(d1)];
                table.push((d0, d1, play_out(&g, &s0, &s1, 0).unwrap().winner()));
            }
        }
        assert!(table
            .iter()
            .filter(|(d0, _, _)| *d0 == Dir::Right)
            .all(|(_, _, w)| *w == Player::Zero));
        assert_eq!(solve_naive(&g), vec![Player::Zero, Player::Zero]);
        assert_eq!(solve(&g).winner, vec![Player::Zero, Player::Zero]);
    }

    #[test]
    fn builder_chains_and_sinks() {
        let mut b = ArenaBuilder::new();
        let x = b.add_vertex("x", Player::Zero, 1);
        let y = b.add_vertex("y", Player::One, 2);
        let z = b.add_vertex("z", Player::Zero, 0);
        b.set_successors(x, vec![x, y, z]);
        b.set_successors(y, vec![y]);
        // z is stuck, so Player 0 loses there
        let g = b.build(x);
        assert_eq!(g.len(), 5);
        let sol = solve(&g);
        assert_eq!(sol.winner_of(x), Player::Zero);
        assert_eq!(sol.winner_of(z), Player::One);
        assert_eq!(solve_naive(&g), sol.winner);
    }
}
