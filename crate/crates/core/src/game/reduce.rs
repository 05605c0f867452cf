use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{FiniteMemoryStrategy, GameError, TreeGame, VertexKind};
use crate::automata::{sdtt_membership, Sdtt};
use crate::parity::{ArenaBuilder, ParityGame, ParitySolver, Player, Zielonka};
use crate::symbol::Dir;
use crate::tree::RegularTree;

/// Outcome flag of a position: decided for Player 0, for Player 1, or open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Zero,
    One,
    Open,
}

impl Flag {
    pub const ALL: [Flag; 3] = [Flag::Zero, Flag::One, Flag::Open];

    pub fn index(self) -> usize {
        match self {
            Flag::Zero => 0,
            Flag::One => 1,
            Flag::Open => 2,
        }
    }

    pub fn from_index(i: usize) -> Flag {
        Flag::ALL[i]
    }
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flag::Zero => "0",
            Flag::One => "1",
            Flag::Open => "?",
        })
    }
}

/// States of `d` from which the blank tree is accepted.
pub fn compute_qb(d: &Sdtt) -> BTreeSet<usize> {
    let blank = RegularTree::blank();
    (0..d.num_states())
        .filter(|&q| sdtt_membership(&d.with_initial(q), &blank).expect("blank is in every alphabet"))
        .collect()
}

/// The parity game built from a tree game and an SDTT objective.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub h: ParityGame,
    /// `(vertex, state, flag)` of every position of `h`.
    pub positions: Vec<(usize, usize, Flag)>,
    pub qb: BTreeSet<usize>,
    /// `|V| * |Q| * 3`, the size of the full product.
    pub full_size: usize,
}

struct Ctx<'a> {
    g: &'a TreeGame,
    d: &'a Sdtt,
    qb: Vec<bool>,
    letter: Vec<Option<usize>>,
    m: u32,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a TreeGame, d: &'a Sdtt) -> Result<Self, GameError> {
        g.check_hash_placement()?;
        let mut letter = Vec::with_capacity(g.len());
        for v in g.vertices() {
            if v.label.is_hash() {
                letter.push(None);
            } else {
                let a = d
                    .alphabet()
                    .index(&v.label)
                    .ok_or_else(|| GameError::LabelNotInObjective(v.label.clone(), v.name.clone()))?;
                letter.push(Some(a));
            }
        }
        let set = compute_qb(d);
        let qb = (0..d.num_states()).map(|q| set.contains(&q)).collect();
        Ok(Ctx {
            g,
            d,
            qb,
            letter,
            m: d.index().1,
        })
    }

    /// Successor of position `(v, q, x)` in direction `dir`.
    ///
    /// At a vertex owned by a player the sibling subtree is blank, so the
    /// transducer's owner either walks into it (settling the flag through
    /// `Q_b`) or follows the chosen side. "q in Q_i" is read as
    /// `D.alpha(q, lambda(v)) = i`, and the same rule covers the two
    /// same-owner combinations.
    fn step(&self, v: usize, q: usize, x: Flag, dir: Dir) -> (usize, usize, Flag) {
        let w = self.g.succ(v, dir);
        let Some(a) = self.letter[v] else {
            return (w, q, x);
        };
        let (q0, q1) = self.d.delta(q, a);
        let qd = if dir == Dir::Left { q0 } else { q1 };
        if self.g.kind(v) == VertexKind::Branching || x != Flag::Open {
            return (w, qd, x);
        }
        let other = if dir == Dir::Left { q1 } else { q0 };
        let x = match self.d.owner(q, a) {
            Player::Zero if self.qb[other] => Flag::Zero,
            Player::One if !self.qb[other] => Flag::One,
            _ => Flag::Open,
        };
        (w, qd, x)
    }

    fn rank(&self, v: usize, q: usize, x: Flag) -> u32 {
        match x {
            Flag::Zero => 2 * self.m,
            Flag::One => 2 * self.m + 1,
            Flag::Open if self.letter[v].is_none() => {
                if self.qb[q] {
                    2 * self.m
                } else {
                    2 * self.m + 1
                }
            }
            Flag::Open => self.d.rank(q),
        }
    }

    fn owner(&self, v: usize, q: usize) -> Player {
        match (self.g.kind(v), self.letter[v]) {
            (VertexKind::Branching, Some(a)) => self.d.owner(q, a),
            (VertexKind::Player(p), _) => p,
            (VertexKind::Branching, None) => unreachable!("hash placement checked"),
        }
    }
}

fn build(g: &TreeGame, d: &Sdtt, full: bool) -> Result<Reduction, GameError> {
    let ctx = Ctx::new(g, d)?;
    let mut b = ArenaBuilder::new();
    let mut id: HashMap<(usize, usize, Flag), usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut work = Vec::new();
    let mut add = |p: (usize, usize, Flag),
                   b: &mut ArenaBuilder,
                   positions: &mut Vec<(usize, usize, Flag)>,
                   work: &mut Vec<(usize, usize, Flag)>| {
        *id.entry(p).or_insert_with(|| {
            let (v, q, x) = p;
            let name = format!("{}/{}/{}", g.name_of(v), d.state_name(q), x);
            positions.push(p);
            work.push(p);
            b.add_vertex(name, ctx.owner(v, q), ctx.rank(v, q, x))
        })
    };
    let start = add((g.initial(), d.initial(), Flag::Open), &mut b, &mut positions, &mut work);
    if full {
        for v in 0..g.len() {
            for q in 0..d.num_states() {
                for x in Flag::ALL {
                    add((v, q, x), &mut b, &mut positions, &mut work);
                }
            }
        }
    }
    while let Some((v, q, x)) = work.pop() {
        let me = add((v, q, x), &mut b, &mut positions, &mut work);
        let succ = Dir::BOTH
            .into_iter()
            .map(|dir| add(ctx.step(v, q, x, dir), &mut b, &mut positions, &mut work))
            .collect();
        b.set_successors(me, succ);
    }
    Ok(Reduction {
        h: b.build(start),
        positions,
        qb: compute_qb(d),
        full_size: g.len() * d.num_states() * 3,
    })
}

/// The product game restricted to positions reachable from the initial one.
pub fn reduce_to_parity(g: &TreeGame, d: &Sdtt) -> Result<Reduction, GameError> {
    build(g, d, false)
}

/// The product game over all of `V x Q x {0, 1, ?}`.
pub fn reduce_to_parity_full(g: &TreeGame, d: &Sdtt) -> Result<Reduction, GameError> {
    build(g, d, true)
}

/// Winner of a tree game with an SDTT objective and a winning strategy.
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub winner: Player,
    pub strategy: FiniteMemoryStrategy,
    pub h_size: usize,
}

pub fn solve_game_automaton_objective(g: &TreeGame, d: &Sdtt) -> Result<GameSolution, GameError> {
    solve_game_automaton_objective_with(g, d, &Zielonka)
}

/// Solves the product game and turns the winner's positional strategy into
/// a strategy with memory `(state, flag)`.
pub fn solve_game_automaton_objective_with(
    g: &TreeGame,
    d: &Sdtt,
    solver: &dyn ParitySolver,
) -> Result<GameSolution, GameError> {
    let r = reduce_to_parity(g, d)?;
    let ctx = Ctx::new(g, d)?;
    let sol = solver.solve(&r.h);
    let winner = sol.winner_of(r.h.initial());
    let positional = sol.strategy_of(&r.h, winner);
    let at: HashMap<(usize, usize, Flag), usize> =
        r.positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let mem = |q: usize, x: Flag| q * 3 + x.index();
    let mut moves = BTreeMap::new();
    let mut updates = BTreeMap::new();
    for q in 0..d.num_states() {
        for x in Flag::ALL {
            for v in 0..g.len() {
                let name = g.name_of(v).to_string();
                if g.kind(v) == VertexKind::Player(winner) {
                    let dir = at
                        .get(&(v, q, x))
                        .and_then(|&h| positional[h])
                        .unwrap_or(Dir::Left);
                    moves.insert((mem(q, x), name.clone()), dir);
                }
                for dir in Dir::BOTH {
                    let (_, q2, x2) = ctx.step(v, q, x, dir);
                    updates.insert((mem(q, x), name.clone(), dir), mem(q2, x2));
                }
            }
        }
    }
    let strategy = FiniteMemoryStrategy {
        name: format!("{}_p{}", g.name(), winner.index()),
        player: winner,
        memsize: d.num_states() * 3,
        init: mem(d.initial(), Flag::Open),
        moves,
        updates,
    };
    Ok(GameSolution {
        winner,
        strategy,
        h_size: r.h.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::dualize_sdtt;
    use crate::fixtures::*;
    use crate::game::GVertex;
    use crate::symbol::Symbol;

    fn branching_chain(labels: &[&str]) -> TreeGame {
        let n = labels.len();
        let vs = labels
            .iter()
            .enumerate()
            .map(|(i, l)| GVertex {
                name: format!("v{i}"),
                label: Symbol::new(l),
                kind: VertexKind::Branching,
                succ: [(i + 1) % n, (i + 1) % n],
            })
            .collect();
        TreeGame::new("chain", vs, 0).unwrap()
    }

    #[test]
    fn qb_of_safe_a_and_its_dual() {
        let d = d_safe_a();
        let ok = d.state_index("ok").unwrap();
        let bad = d.state_index("bad").unwrap();
        assert_eq!(compute_qb(&d), BTreeSet::from([ok]));
        assert_eq!(compute_qb(&dualize_sdtt(&d)), BTreeSet::from([bad]));
    }

    #[test]
    fn all_branching_games() {
        let d = d_safe_a();
        let g = branching_chain(&["a", "a"]);
        let r = reduce_to_parity(&g, &d).unwrap();
        assert!(r.h.vertices().iter().all(|v| v.rank == 0));
        assert_eq!(solve_game_automaton_objective(&g, &d).unwrap().winner, Player::Zero);
        let g = branching_chain(&["a", "b", "a"]);
        assert_eq!(solve_game_automaton_objective(&g, &d).unwrap().winner, Player::One);
    }

    #[test]
    fn fig2_against_all_and_no_b() {
        let g = fig2_game();
        assert_eq!(solve_game_automaton_objective(&g, &all_sdtt()).unwrap().winner, Player::Zero);
        // Player 1 steers into b
        assert_eq!(solve_game_automaton_objective(&g, &d_safe_a()).unwrap().winner, Player::One);
    }

    #[test]
    fn size_bound() {
        let g = fig2_game();
        let d = d_safe_a();
        let r = reduce_to_parity(&g, &d).unwrap();
        assert!(r.h.len() <= r.full_size);
        let f = reduce_to_parity_full(&g, &d).unwrap();
        assert_eq!(f.h.len(), f.full_size);
    }

    #[test]
    fn hash_ranks_follow_qb() {
        // infinite # path: the projection is blank
        let g = TreeGame::new(
            "loop",
            vec![GVertex {
                name: "h".into(),
                label: Symbol::hash(),
                kind: VertexKind::Player(Player::One),
                succ: [0, 0],
            }],
            0,
        )
        .unwrap();
        let d = d_safe_a();
        assert_eq!(solve_game_automaton_objective(&g, &d).unwrap().winner, Player::Zero);
        assert_eq!(solve_game_automaton_objective(&g, &dualize_sdtt(&d)).unwrap().winner, Player::One);
    }

    #[test]
    fn label_outside_objective() {
        let g = branching_chain(&["z"]);
        assert!(matches!(
            reduce_to_parity(&g, &d_safe_a()),
            Err(GameError::LabelNotInObjective(..))
        ));
    }
}
