use super::{ParityGame, ParitySolver, Player, Solution};
use crate::symbol::Dir;

/// Exhaustive positional-strategy enumeration.
///
/// For every positional strategy of a player, the opponent's remaining
/// one-player graph is searched for a reachable cycle whose minimal rank
/// favours the opponent. A player's winning region is the union over all
/// its strategies of the vertices where no such cycle is reachable.
/// Exponential in the number of owned vertices with two distinct
/// successors; meant as an oracle for small games.
#[derive(Debug, Default, Clone, Copy)]
pub struct Enumeration;

/// Limit on the number of choice vertices per player.
const MAX_CHOICES: usize = 20;

impl ParitySolver for Enumeration {
    fn name(&self) -> &'static str {
        "enumerate"
    }

    fn solve(&self, g: &ParityGame) -> Solution {
        let (win0, strat0) = enumerate(g, Player::Zero);
        let (win1, strat1) = enumerate(g, Player::One);
        let mut winner = Vec::with_capacity(g.len());
        let mut strategy = vec![None; g.len()];
        for v in 0..g.len() {
            debug_assert!(win0[v] != win1[v], "positional determinacy");
            let w = if win0[v] { Player::Zero } else { Player::One };
            winner.push(w);
            if g.owner(v) == w {
                strategy[v] = if w == Player::Zero { strat0[v] } else { strat1[v] };
            }
        }
        Solution { winner, strategy }
    }
}

/// Winning regions by exhaustive enumeration of Player 0's positional
/// strategies.
pub fn solve_naive(g: &ParityGame) -> Vec<Player> {
    let (win0, _) = enumerate(g, Player::Zero);
    win0.into_iter()
        .map(|w| if w { Player::Zero } else { Player::One })
        .collect()
}

/// Returns the region won by `player` and a uniform positional strategy
/// winning on all of it.
fn enumerate(g: &ParityGame, player: Player) -> (Vec<bool>, Vec<Option<Dir>>) {
    let n = g.len();
    let choices: Vec<usize> = (0..n)
        .filter(|&v| g.owner(v) == player && g.succ(v, Dir::Left) != g.succ(v, Dir::Right))
        .collect();
    assert!(
        choices.len() <= MAX_CHOICES,
        "enumeration oracle limited to {MAX_CHOICES} choice vertices"
    );
    let strategy_for = |mask: u64| -> Vec<Option<Dir>> {
        (0..n)
            .map(|v| {
                if g.owner(v) != player {
                    return None;
                }
                match choices.iter().position(|&c| c == v) {
                    Some(i) if mask >> i & 1 == 1 => Some(Dir::Right),
                    _ => Some(Dir::Left),
                }
            })
            .collect()
    };
    let mut region = vec![false; n];
    let mut per_strategy = Vec::new();
    for mask in 0..(1u64 << choices.len()) {
        let s = strategy_for(mask);
        let won = region_under(g, player, &s);
        for v in 0..n {
            region[v] |= won[v];
        }
        per_strategy.push((mask, won));
    }
    let uniform = per_strategy
        .iter()
        .find(|(_, won)| (0..n).all(|v| !region[v] || won[v]))
        .map(|(m, _)| strategy_for(*m))
        .expect("a uniform positional strategy exists");
    (region, uniform)
}

/// Vertices from which `player`, fixed to `s`, wins against every
/// opponent behaviour.
fn region_under(g: &ParityGame, player: Player, s: &[Option<Dir>]) -> Vec<bool> {
    let n = g.len();
    let edges = |v: usize| -> Vec<usize> {
        if g.owner(v) == player {
            vec![g.succ(v, s[v].expect("total strategy"))]
        } else {
            vec![g.succ(v, Dir::Left), g.succ(v, Dir::Right)]
        }
    };
    // vertices on a cycle, inside ranks >= rank(w), whose own rank favours
    // the opponent
    let bad: Vec<bool> = (0..n)
        .map(|w| {
            let r = g.rank(w);
            if Player::of_rank(r) == player {
                return false;
            }
            let mut seen = vec![false; n];
            let mut stack = edges(w);
            while let Some(v) = stack.pop() {
                if g.rank(v) < r || seen[v] {
                    continue;
                }
                if v == w {
                    return true;
                }
                seen[v] = true;
                stack.extend(edges(v));
            }
            false
        })
        .collect();
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if seen[v] {
                    continue;
                }
                if bad[v] {
                    return false;
                }
                seen[v] = true;
                stack.extend(edges(v));
            }
            true
        })
        .collect()
}
