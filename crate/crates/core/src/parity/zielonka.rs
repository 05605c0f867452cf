use super::{ParityGame, ParitySolver, Player, PositionalStrategy, Solution};
use crate::symbol::Dir;

/// Recursive region decomposition (Zielonka), adapted to the
/// lowest-rank-wins convention: each level peels off the minimal rank.
#[derive(Debug, Default, Clone, Copy)]
pub struct Zielonka;

impl ParitySolver for Zielonka {
    fn name(&self) -> &'static str {
        "zielonka"
    }

    fn solve(&self, g: &ParityGame) -> Solution {
        let mut s = Solver {
            g,
            preds: g.predecessors(),
            strategy: vec![None; g.len()],
        };
        let all = vec![true; g.len()];
        let won_by_one = s.solve(&all);
        let winner: Vec<Player> = won_by_one
            .iter()
            .map(|&one| if one { Player::One } else { Player::Zero })
            .collect();
        let mut strategy = s.strategy;
        for v in 0..g.len() {
            if g.owner(v) != winner[v] {
                strategy[v] = None;
            }
        }
        Solution { winner, strategy }
    }
}

struct Solver<'a> {
    g: &'a ParityGame,
    preds: Vec<Vec<(usize, Dir)>>,
    strategy: PositionalStrategy,
}

impl Solver<'_> {
    /// Attractor of `target` for `player` inside `mask`, recording the
    /// attracting moves of `player` in `self.strategy`.
    fn attract(&mut self, mask: &[bool], player: Player, target: &[bool]) -> Vec<bool> {
        let g = self.g;
        let mut attr = target.to_vec();
        let mut count: Vec<usize> = (0..g.len())
            .map(|v| {
                Dir::BOTH
                    .iter()
                    .filter(|&&d| mask[g.succ(v, d)])
                    .count()
            })
            .collect();
        let mut queue: Vec<usize> = (0..g.len()).filter(|&v| attr[v]).collect();
        while let Some(w) = queue.pop() {
            for &(v, d) in &self.preds[w] {
                if !mask[v] || attr[v] {
                    continue;
                }
                if g.owner(v) == player {
                    attr[v] = true;
                    self.strategy[v] = Some(d);
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        attr
    }

    /// Returns the set won by Player 1 inside `mask`.
    fn solve(&mut self, mask: &[bool]) -> Vec<bool> {
        let g = self.g;
        let n = g.len();
        let Some(p) = (0..n).filter(|&v| mask[v]).map(|v| g.rank(v)).min() else {
            return vec![false; n];
        };
        let i = Player::of_rank(p);
        let top: Vec<bool> = (0..n).map(|v| mask[v] && g.rank(v) == p).collect();
        let a = self.attract(mask, i, &top);
        let sub: Vec<bool> = (0..n).map(|v| mask[v] && !a[v]).collect();
        let w1 = self.solve(&sub);
        let opp_won: Vec<bool> = (0..n)
            .map(|v| sub[v] && (w1[v] == (i == Player::Zero)))
            .collect();

        if !opp_won.iter().any(|&b| b) {
            // player i wins everywhere; on the top-rank vertices any move
            // staying inside the subgame will do
            for v in 0..n {
                if top[v] && g.owner(v) == i {
                    self.strategy[v] = Dir::BOTH.into_iter().find(|&d| mask[g.succ(v, d)]);
                }
            }
            return (0..n).map(|v| mask[v] && i == Player::One).collect();
        }

        let b = self.attract(mask, i.opponent(), &opp_won);
        let rest: Vec<bool> = (0..n).map(|v| mask[v] && !b[v]).collect();
        let w1_rest = self.solve(&rest);
        (0..n)
            .map(|v| {
                if b[v] {
                    i.opponent() == Player::One
                } else {
                    rest[v] && w1_rest[v]
                }
            })
            .collect()
    }
}
