use std::collections::{BTreeMap, HashMap};

use super::{TreeGame, VertexKind};
use crate::parity::Player;
use crate::symbol::{Address, Dir, Symbol};
use crate::tree::RegularTree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("strategy mentions unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("memory state {0} out of range")]
    MemoryOutOfRange(usize),
    #[error("no move for memory {0} at vertex `{1}`")]
    MoveUndefined(usize, String),
    #[error("no memory update for memory {0} at vertex `{1}` in direction {2}")]
    UpdateUndefined(usize, String, Dir),
    #[error("invalid strategy tree: {0}")]
    InvalidTree(String),
}

/// A strategy given by a finite transducer.
///
/// The memory starts at `init`. At a vertex of its owner the strategy
/// moves in direction `move(m, v)`; every traversed edge `(v, d)` updates
/// the memory to `update(m, v, d)`, independently on both branches of a
/// branching vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMemoryStrategy {
    pub name: String,
    pub player: Player,
    pub memsize: usize,
    pub init: usize,
    pub moves: BTreeMap<(usize, String), Dir>,
    pub updates: BTreeMap<(usize, String, Dir), usize>,
}

impl FiniteMemoryStrategy {
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Memoryless strategy; owned vertices missing from `choices` move left.
    pub fn memoryless(g: &TreeGame, player: Player, choices: &[(&str, Dir)]) -> Self {
        let mut moves = BTreeMap::new();
        let mut updates = BTreeMap::new();
        for v in 0..g.len() {
            let name = g.name_of(v).to_string();
            if g.kind(v) == VertexKind::Player(player) {
                let d = choices
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map_or(Dir::Left, |&(_, d)| d);
                moves.insert((0, name.clone()), d);
            }
            for d in Dir::BOTH {
                updates.insert((0, name.clone(), d), 0);
            }
        }
        FiniteMemoryStrategy {
            name: "memoryless".into(),
            player,
            memsize: 1,
            init: 0,
            moves,
            updates,
        }
    }

    fn resolve(&self, g: &TreeGame) -> Result<Resolved, StrategyError> {
        let n = g.len();
        let index: HashMap<&str, usize> = (0..n).map(|v| (g.name_of(v), v)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| StrategyError::UnknownVertex(name.to_string()))
        };
        let check_mem = |m: usize| {
            if m < self.memsize {
                Ok(m)
            } else {
                Err(StrategyError::MemoryOutOfRange(m))
            }
        };
        check_mem(self.init)?;
        let mut moves = vec![None; self.memsize * n];
        for ((m, v), &d) in &self.moves {
            moves[check_mem(*m)? * n + lookup(v)?] = Some(d);
        }
        let mut updates = vec![None; self.memsize * n * 2];
        for ((m, v, d), &to) in &self.updates {
            updates[(check_mem(*m)? * n + lookup(v)?) * 2 + d.index()] = Some(check_mem(to)?);
        }
        Ok(Resolved {
            player: self.player,
            n,
            init: self.init,
            moves,
            updates,
        })
    }
}

struct Resolved {
    player: Player,
    n: usize,
    init: usize,
    moves: Vec<Option<Dir>>,
    updates: Vec<Option<usize>>,
}

impl Resolved {
    fn choose(&self, g: &TreeGame, m: usize, v: usize) -> Result<Dir, StrategyError> {
        self.moves[m * self.n + v]
            .ok_or_else(|| StrategyError::MoveUndefined(m, g.name_of(v).to_string()))
    }

    fn step(&self, g: &TreeGame, m: usize, v: usize, d: Dir) -> Result<usize, StrategyError> {
        self.updates[(m * self.n + v) * 2 + d.index()]
            .ok_or_else(|| StrategyError::UpdateUndefined(m, g.name_of(v).to_string(), d))
    }
}

/// Builds a regular tree by exploring product positions from `start`.
/// `expand` returns the node label and, per direction, the child position
/// or `None` for a blank child.
fn explore<K: Clone + Eq + std::hash::Hash>(
    start: K,
    mut expand: impl FnMut(&K) -> Result<(Symbol, [Option<K>; 2]), StrategyError>,
) -> Result<RegularTree, StrategyError> {
    let mut id: HashMap<K, usize> = HashMap::new();
    let mut order = vec![start.clone()];
    id.insert(start, 1);
    // node 0 is the blank sink
    let mut labels = vec![Symbol::blank()];
    let mut children = vec![[0, 0]];
    let mut i = 0;
    while i < order.len() {
        let key = order[i].clone();
        let (label, kids) = expand(&key)?;
        let mut ids = [0; 2];
        for (k, kid) in kids.into_iter().enumerate() {
            if let Some(kid) = kid {
                ids[k] = *id.entry(kid.clone()).or_insert_with(|| {
                    order.push(kid);
                    order.len()
                });
            }
        }
        labels.push(label);
        children.push(ids);
        i += 1;
    }
    Ok(RegularTree::from_parts(labels, children, 1).expect("product trees are blank closed"))
}

/// The strategy as a restriction of the unfolding: redundant at the
/// owner's vertices, fully branching elsewhere.
pub fn strategy_tree(g: &TreeGame, s: &FiniteMemoryStrategy) -> Result<RegularTree, StrategyError> {
    let r = s.resolve(g)?;
    explore((g.initial(), r.init), |&(v, m)| {
        let mut kids = [None, None];
        let keep: Vec<Dir> = if g.kind(v) == VertexKind::Player(r.player) {
            vec![r.choose(g, m, v)?]
        } else {
            Dir::BOTH.to_vec()
        };
        for d in keep {
            kids[d.index()] = Some((g.succ(v, d), r.step(g, m, v, d)?));
        }
        Ok((g.vertex_symbol(v), kids))
    })
}

/// The play of `s0` against `s1`, labelled through the game labelling.
pub fn play(
    g: &TreeGame,
    s0: &FiniteMemoryStrategy,
    s1: &FiniteMemoryStrategy,
) -> Result<RegularTree, StrategyError> {
    let r0 = s0.resolve(g)?;
    let r1 = s1.resolve(g)?;
    explore((g.initial(), r0.init, r1.init), |&(v, m0, m1)| {
        let mut kids = [None, None];
        let keep: Vec<Dir> = match g.kind(v) {
            VertexKind::Branching => Dir::BOTH.to_vec(),
            VertexKind::Player(Player::Zero) => vec![r0.choose(g, m0, v)?],
            VertexKind::Player(Player::One) => vec![r1.choose(g, m1, v)?],
        };
        for d in keep {
            kids[d.index()] = Some((g.succ(v, d), r0.step(g, m0, v, d)?, r1.step(g, m1, v, d)?));
        }
        Ok((g.label(v).clone(), kids))
    })
}

/// Checks that `t` is a restriction of the unfolding of `g` that is
/// redundant at `player`'s vertices and fully branching elsewhere.
pub fn validate_strategy_tree(g: &TreeGame, t: &RegularTree, player: Player) -> Result<(), StrategyError> {
    let bad = |msg: String| Err(StrategyError::InvalidTree(msg));
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(t.root(), g.initial())];
    while let Some((n, v)) = stack.pop() {
        if !seen.insert((n, v)) {
            continue;
        }
        if t.label(n).as_str() != g.name_of(v) {
            return bad(format!("node labelled {} where vertex `{}` is expected", t.label(n), g.name_of(v)));
        }
        let live: Vec<Dir> = Dir::BOTH
            .into_iter()
            .filter(|&d| !t.label(t.child(n, d)).is_blank())
            .collect();
        let owned = g.kind(v) == VertexKind::Player(player);
        if owned && live.len() != 1 {
            return bad(format!("vertex `{}` of the owner must have exactly one child", g.name_of(v)));
        }
        if !owned && live.len() != 2 {
            return bad(format!("vertex `{}` must keep both children", g.name_of(v)));
        }
        for d in live {
            stack.push((t.child(n, d), g.succ(v, d)));
        }
    }
    Ok(())
}

/// All strategies of `player` that decide only on unfolding nodes above
/// depth `depth` and move left below it.
///
/// Only nodes kept by the strategy itself are decided, so every returned
/// strategy has a distinct strategy tree. A `#` vertex whose two
/// successors coincide always moves left: its direction is erased by
/// projection.
pub fn enumerate_strategies(g: &TreeGame, player: Player, depth: usize) -> Vec<FiniteMemoryStrategy> {
    let mut out = Vec::new();
    let mut choices = Vec::new();
    enumerate_rec(g, player, depth, vec![(Address::root(), g.initial())], &mut choices, &mut out);
    out.into_iter()
        .enumerate()
        .map(|(i, c)| from_choices(g, player, depth, &c, format!("d{depth}s{i}")))
        .collect()
}

type Choices = Vec<(Address, Dir)>;

fn enumerate_rec(
    g: &TreeGame,
    player: Player,
    depth: usize,
    mut frontier: Vec<(Address, usize)>,
    choices: &mut Choices,
    out: &mut Vec<Choices>,
) {
    let Some((u, v)) = frontier.pop() else {
        out.push(choices.clone());
        return;
    };
    if u.len() >= depth {
        return enumerate_rec(g, player, depth, frontier, choices, out);
    }
    let owned = g.kind(v) == VertexKind::Player(player);
    let fixed = g.label(v).is_hash() && g.succ(v, Dir::Left) == g.succ(v, Dir::Right);
    if owned {
        let dirs = if fixed { vec![Dir::Left] } else { Dir::BOTH.to_vec() };
        for d in dirs {
            let mut f = frontier.clone();
            f.push((u.child(d), g.succ(v, d)));
            choices.push((u.clone(), d));
            enumerate_rec(g, player, depth, f, choices, out);
            choices.pop();
        }
    } else {
        for d in Dir::BOTH {
            frontier.push((u.child(d), g.succ(v, d)));
        }
        enumerate_rec(g, player, depth, frontier, choices, out);
    }
}

/// Memory 0 is the default below the decision depth; memory `k > 0`
/// tracks the `k`-th visited address above it.
fn from_choices(g: &TreeGame, player: Player, depth: usize, choices: &Choices, name: String) -> FiniteMemoryStrategy {
    let chosen: HashMap<&Address, Dir> = choices.iter().map(|(u, d)| (u, *d)).collect();
    let mut mem: HashMap<Address, usize> = HashMap::new();
    let mut moves = BTreeMap::new();
    let mut updates = BTreeMap::new();
    for v in 0..g.len() {
        let name = g.name_of(v).to_string();
        if g.kind(v) == VertexKind::Player(player) {
            moves.insert((0, name.clone()), Dir::Left);
        }
        for d in Dir::BOTH {
            updates.insert((0, name.clone(), d), 0);
        }
    }
    let init = if depth == 0 { 0 } else { 1 };
    let mut stack = Vec::new();
    if depth > 0 {
        mem.insert(Address::root(), 1);
        stack.push((Address::root(), g.initial()));
    }
    while let Some((u, v)) = stack.pop() {
        let m = mem[&u];
        let name = g.name_of(v).to_string();
        let dirs = if g.kind(v) == VertexKind::Player(player) {
            let d = chosen.get(&u).copied().unwrap_or(Dir::Left);
            moves.insert((m, name.clone()), d);
            vec![d]
        } else {
            Dir::BOTH.to_vec()
        };
        for d in dirs {
            let c = u.child(d);
            let to = if c.len() < depth {
                let next = mem.len() + 1;
                let id = *mem.entry(c.clone()).or_insert(next);
                stack.push((c, g.succ(v, d)));
                id
            } else {
                0
            };
            updates.insert((m, name.clone(), d), to);
        }
    }
    FiniteMemoryStrategy {
        name,
        player,
        memsize: mem.len() + 1,
        init,
        moves,
        updates,
    }
}
