//! The reproduction suite: seeded, exact checks of the library's central
//! claims, selectable by number.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{
    ata_membership, dualize_sdtt, game_ata_to_nta, nta_emptiness, nta_membership, preimage_hash, sdtt_membership,
    sdtt_to_game_ata, Alphabet, Nta,
};
use crate::fixtures;
use crate::game::{
    check_strategy, decide_determinacy, enumerate_strategies, game_from_safety_nta, play, reduce_to_parity,
    reduce_to_parity_full, sdtt_check_automaton, solve_game_automaton_objective, solve_single_player, strategy_tree,
    Determinacy, FiniteMemoryStrategy, TreeGame, VertexKind,
};
use crate::parity::{play_out, solve, solve_naive, ParityGame, Player};
use crate::random::{
    random_finite_tree, random_hash_tree, random_nta, random_parity_game, random_regular_tree, random_safety_nta,
    random_sdtt, random_tree_game,
};
use crate::symbol::{Dir, Symbol};
use crate::tree::{hash_projection, hash_reduction, maximal_hash_paths, partial_hash_reduction, RegularTree};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Verdict of one criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Deterministic summary of what was checked.
    pub detail: String,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {} {}: {}", self.id, self.name, self.detail)
    }
}

/// A seeded acceptance check.
pub trait Criterion: Send + Sync {
    fn id(&self) -> usize;
    fn name(&self) -> &'static str;
    fn run(&self, seed: u64) -> Report;
}

/// Criteria selectable by number, in registration order.
pub struct Suite {
    criteria: Vec<Box<dyn Criterion>>,
}

impl Suite {
    pub fn empty() -> Self {
        Suite { criteria: Vec::new() }
    }

    pub fn register(&mut self, c: Box<dyn Criterion>) {
        self.criteria.retain(|x| x.id() != c.id());
        self.criteria.push(c);
    }

    pub fn get(&self, id: usize) -> Option<&dyn Criterion> {
        self.criteria.iter().find(|c| c.id() == id).map(|c| c.as_ref())
    }

    pub fn criteria(&self) -> impl Iterator<Item = &dyn Criterion> {
        self.criteria.iter().map(|c| c.as_ref())
    }

    /// Runs every criterion, returning reports with their wall time.
    pub fn run_all(&self, seed: u64) -> Vec<(Report, Duration)> {
        self.criteria
            .iter()
            .map(|c| {
                let start = Instant::now();
                let r = c.run(seed);
                (r, start.elapsed())
            })
            .collect()
    }
}

impl Default for Suite {
    fn default() -> Self {
        let mut s = Suite::empty();
        s.register(Box::new(ParityOracle));
        s.register(Box::new(SizeBound));
        s.register(Box::new(CrossPipeline));
        s.register(Box::new(MatchingPennies));
        s.register(Box::new(FourVertexArena));
        s.register(Box::new(HashPreimage));
        s.register(Box::new(TransducerChains));
        s.register(Box::new(Confluence));
        s.register(Box::new(SafetyGames));
        s
    }
}

fn rng_for(seed: u64, id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn report(c: &dyn Criterion, failures: &[String], detail: String) -> Report {
    let detail = match failures.first() {
        None => detail,
        Some(first) => format!("{detail}; {} failure(s), first: {first}", failures.len()),
    };
    Report {
        id: c.id(),
        name: c.name(),
        passed: failures.is_empty(),
        detail,
    }
}

fn ab() -> Vec<Symbol> {
    vec![Symbol::new("a"), Symbol::new("b")]
}

fn ab_alphabet() -> Alphabet {
    Alphabet::from_strs(&["a", "b"])
}

// ---------------------------------------------------------------------------

pub struct ParityOracle;

/// Every positional strategy of `player`, as total direction vectors.
fn all_positional(g: &ParityGame, player: Player) -> Vec<Vec<Option<Dir>>> {
    let mine: Vec<usize> = (0..g.len()).filter(|&v| g.owner(v) == player).collect();
    (0..1usize << mine.len())
        .map(|mask| {
            let mut s = vec![None; g.len()];
            for (i, &v) in mine.iter().enumerate() {
                s[v] = Some(if mask >> i & 1 == 1 { Dir::Right } else { Dir::Left });
            }
            s
        })
        .collect()
}

impl Criterion for ParityOracle {
    fn id(&self) -> usize {
        1
    }

    fn name(&self) -> &'static str {
        "parity-oracle"
    }

    fn run(&self, seed: u64) -> Report {
        let mut rng = rng_for(seed, self.id());
        let mut failures = Vec::new();
        let mut certified = 0;
        let games = 1000;
        for i in 0..games {
            let g = random_parity_game(&mut rng, 8, 4);
            let sol = solve(&g);
            if sol.winner != solve_naive(&g) {
                failures.push(format!("game {i}: regions differ"));
                continue;
            }
            if g.len() > 5 {
                continue;
            }
            for winner in [Player::Zero, Player::One] {
                let mine = sol.strategy_of(&g, winner);
                for counter in all_positional(&g, winner.opponent()) {
                    for v in sol.region(winner) {
                        let (s0, s1) = match winner {
                            Player::Zero => (&mine, &counter),
                            Player::One => (&counter, &mine),
                        };
                        match play_out(&g, s0, s1, v) {
                            Ok(out) if out.winner() == winner => {}
                            _ => failures.push(format!("game {i}: strategy of {winner:?} fails from {v}")),
                        }
                    }
                }
            }
            certified += 1;
        }
        report(
            self,
            &failures,
            format!("{games} games agree with the oracle, {certified} strategy pairs certified"),
        )
    }
}

// ---------------------------------------------------------------------------

/// The random (game, transducer) instances shared by criteria 2 and 3.
fn instances(seed: u64) -> Vec<(TreeGame, crate::automata::Sdtt)> {
    let mut rng = rng_for(seed, 2);
    (0..200)
        .map(|_| {
            let g = random_tree_game(&mut rng, &ab(), 6, true);
            let d = random_sdtt(&mut rng, &ab_alphabet(), 4, 3);
            (g, d)
        })
        .collect()
}

pub struct SizeBound;

impl Criterion for SizeBound {
    fn id(&self) -> usize {
        2
    }

    fn name(&self) -> &'static str {
        "reduction-size"
    }

    fn run(&self, seed: u64) -> Report {
        let mut failures = Vec::new();
        let mut largest = 0;
        let all = instances(seed);
        for (i, (g, d)) in all.iter().enumerate() {
            let bound = 3 * g.len() * d.num_states();
            match (reduce_to_parity_full(g, d), reduce_to_parity(g, d)) {
                (Ok(full), Ok(reach)) => {
                    largest = largest.max(full.h.len());
                    if full.h.len() > bound || reach.h.len() > full.h.len() {
                        failures.push(format!("instance {i}: {} > {bound}", full.h.len()));
                    }
                }
                (Err(e), _) | (_, Err(e)) => failures.push(format!("instance {i}: {e}")),
            }
        }
        report(
            self,
            &failures,
            format!("{} instances within 3|V||Q|, largest product {largest}", all.len()),
        )
    }
}

pub struct CrossPipeline;

impl Criterion for CrossPipeline {
    fn id(&self) -> usize {
        3
    }

    fn name(&self) -> &'static str {
        "solve-and-certify"
    }

    fn run(&self, seed: u64) -> Report {
        let mut failures = Vec::new();
        let mut wins = [0usize; 2];
        let mut refuted = 0usize;
        let all = instances(seed);
        for (i, (g, d)) in all.iter().enumerate() {
            let sol = match solve_game_automaton_objective(g, d) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("instance {i}: {e}"));
                    continue;
                }
            };
            wins[sol.winner.index()] += 1;
            let check = |s: &FiniteMemoryStrategy| {
                sdtt_check_automaton(d, s.player).and_then(|b| check_strategy(g, s, &b))
            };
            match check(&sol.strategy) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("instance {i}: extracted strategy not certified")),
                Err(e) => failures.push(format!("instance {i}: {e}")),
            }
            let loser = sol.winner.opponent();
            for s in enumerate_strategies(g, loser, 3) {
                match check(&s) {
                    Ok(false) => refuted += 1,
                    Ok(true) => failures.push(format!("instance {i}: loser strategy {} certified", s.name)),
                    Err(e) => failures.push(format!("instance {i}: {e}")),
                }
            }
        }
        report(
            self,
            &failures,
            format!(
                "{} instances, winners {}/{} certified, {refuted} loser strategies refuted",
                all.len(),
                wins[0],
                wins[1]
            ),
        )
    }
}

// ---------------------------------------------------------------------------

pub struct MatchingPennies;

/// Does the play of `s0` against `s1` project into `l`?
fn play_in(g: &TreeGame, l: &Nta, s0: &FiniteMemoryStrategy, s1: &FiniteMemoryStrategy) -> Result<bool, String> {
    let p = play(g, s0, s1).map_err(|e| e.to_string())?;
    let p = hash_projection(&p).ok_or("play has no projection")?;
    nta_membership(l, &p).map_err(|e| e.to_string())
}

impl Criterion for MatchingPennies {
    fn id(&self) -> usize {
        4
    }

    fn name(&self) -> &'static str {
        "matching-pennies"
    }

    fn run(&self, seed: u64) -> Report {
        let mut failures = Vec::new();
        let parts = fixtures::mp_parts();
        let (l, col) = (fixtures::l_eq(), fixtures::co_l_eq());
        // payoff[i][j]: Player 0 wins with sigma_{i+1} against pi_{j+3}
        let mut payoff = [[false; 2]; 2];
        for (i, s) in parts.sigma.iter().enumerate() {
            for (j, p) in parts.pi.iter().enumerate() {
                match play_in(&parts.game, &l, s, p) {
                    Ok(w) => payoff[i][j] = w,
                    Err(e) => failures.push(e),
                }
            }
        }
        // sigma1 < pi4 < sigma2 < pi3 < sigma1
        if payoff != [[true, false], [false, true]] {
            failures.push(format!("payoff matrix {payoff:?} breaks the cycle"));
        }
        let mut counts = Vec::new();
        for depth in 1..=4 {
            match decide_determinacy(&parts.game, &l, &col, depth, seed) {
                Ok(r) => {
                    counts.push(format!("d{depth}:{}+{}", r.candidates[0], r.candidates[1]));
                    if !matches!(r.result, Determinacy::UndeterminedUpTo(d) if d == depth) {
                        failures.push(format!("depth {depth}: a winning strategy was found"));
                    }
                }
                Err(e) => failures.push(format!("depth {depth}: {e}")),
            }
        }
        report(
            self,
            &failures,
            format!("payoff cycle holds, undetermined up to depth 4 ({})", counts.join(" ")),
        )
    }
}

pub struct FourVertexArena;

impl Criterion for FourVertexArena {
    fn id(&self) -> usize {
        5
    }

    fn name(&self) -> &'static str {
        "four-vertex-arena"
    }

    fn run(&self, seed: u64) -> Report {
        let mut failures = Vec::new();
        let g = fixtures::fig2_game();
        let cases = [
            (fixtures::all_sdtt(), fixtures::all_nta(), fixtures::empty_nta(), Player::Zero),
            (fixtures::d_safe_a(), fixtures::no_b_nta(), fixtures::some_b_nta(), Player::One),
        ];
        for (d, l, col, want) in &cases {
            let name = d.name();
            match solve_game_automaton_objective(&g, d) {
                Ok(sol) => {
                    if sol.winner != *want {
                        failures.push(format!("{name}: solver names {:?}", sol.winner));
                    }
                    let ok = sdtt_check_automaton(d, sol.winner).and_then(|b| check_strategy(&g, &sol.strategy, &b));
                    if !matches!(ok, Ok(true)) {
                        failures.push(format!("{name}: strategy not certified"));
                    }
                }
                Err(e) => failures.push(format!("{name}: {e}")),
            }
            match solve_single_player(&g, l, Some(col)) {
                Ok(w) if w == *want => {}
                other => failures.push(format!("{}: single-player check gives {other:?}", l.name())),
            }
            match decide_determinacy(&g, l, col, 1, seed) {
                Ok(r) => {
                    let got = match r.result {
                        Determinacy::Player0(_) => Some(Player::Zero),
                        Determinacy::Player1(_) => Some(Player::One),
                        Determinacy::UndeterminedUpTo(_) => None,
                    };
                    if got != Some(*want) {
                        failures.push(format!("{}: bounded search gives {got:?}", l.name()));
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", l.name())),
            }
        }
        report(
            self,
            &failures,
            "accept-all won by Player 0, no-b objective won by Player 1".into(),
        )
    }
}

// ---------------------------------------------------------------------------

pub struct HashPreimage;

impl Criterion for HashPreimage {
    fn id(&self) -> usize {
        6
    }

    fn name(&self) -> &'static str {
        "hash-preimage"
    }

    fn run(&self, seed: u64) -> Report {
        let mut rng = rng_for(seed, self.id());
        let mut failures = Vec::new();
        let mut index_failures = Vec::new();
        let mut trees = 0;
        let automata = 20;
        for i in 0..automata {
            let lo = rng.gen_range(0..=2);
            let hi = rng.gen_range(lo..=3);
            let a = random_nta(&mut rng, &ab_alphabet(), 4, lo, hi);
            let h = match preimage_hash(&a) {
                Ok(h) => h,
                Err(e) => {
                    failures.push(format!("automaton {i}: {e}"));
                    continue;
                }
            };
            let (lo, hi) = a.index();
            if (lo..=hi).any(|r| r % 2 == 0) && h.index() != a.index() {
                index_failures.push(format!("automaton {i}: index {:?} became {:?}", a.index(), h.index()));
            }
            let mut done = 0;
            while done < 500 {
                let t = random_hash_tree(&mut rng, &ab(), 6);
                let Some(p) = hash_projection(&t) else { continue };
                done += 1;
                match (nta_membership(&h, &t), nta_membership(&a, &p)) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (x, y) => failures.push(format!("automaton {i}: {x:?} vs {y:?} on {t:?}")),
                }
            }
            trees += done;
        }
        let equivalence = failures.is_empty();
        failures.extend(index_failures.iter().cloned());
        report(
            self,
            &failures,
            format!(
                "equivalence {} on {trees} trees over {automata} automata; index kept on {}/{automata}",
                if equivalence { "holds" } else { "FAILS" },
                automata - index_failures.len()
            ),
        )
    }
}

pub struct TransducerChains;

impl Criterion for TransducerChains {
    fn id(&self) -> usize {
        7
    }

    fn name(&self) -> &'static str {
        "transducer-chains"
    }

    fn run(&self, seed: u64) -> Report {
        let mut rng = rng_for(seed, self.id());
        let mut failures = Vec::new();
        let (transducers, per) = (20, 500);
        for i in 0..transducers {
            let d = random_sdtt(&mut rng, &ab_alphabet(), 5, 3);
            let ata = sdtt_to_game_ata(&d);
            let nta = game_ata_to_nta(&ata);
            let dual = dualize_sdtt(&d);
            let mut symbols = ab();
            symbols.push(Symbol::blank());
            for _ in 0..per {
                let t = random_regular_tree(&mut rng, &symbols, 5);
                let m = sdtt_membership(&d, &t).expect("alphabet");
                let via_ata = ata_membership(&ata, &t).expect("alphabet");
                let via_nta = nta_membership(&nta, &t).expect("alphabet");
                let dm = sdtt_membership(&dual, &t).expect("alphabet");
                if m != via_ata || m != via_nta || m == dm {
                    failures.push(format!("transducer {i}: {m} {via_ata} {via_nta} dual {dm} on {t:?}"));
                }
            }
        }
        report(
            self,
            &failures,
            format!("{transducers} transducers x {per} trees: three chains agree, duals complement"),
        )
    }
}

// ---------------------------------------------------------------------------

pub struct Confluence;

/// Every normal form reachable by collapsing maximal paths in any order.
fn normal_forms(t: &RegularTree) -> Vec<RegularTree> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut forms: Vec<RegularTree> = Vec::new();
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        if !seen.insert(format!("{t:?}")) {
            continue;
        }
        let paths = maximal_hash_paths(&t);
        if paths.is_empty() {
            if !forms.iter().any(|f| f.equivalent(&t)) {
                forms.push(t);
            }
            continue;
        }
        for p in &paths {
            stack.push(partial_hash_reduction(&t, p).expect("paths of t are maximal"));
        }
    }
    forms
}

impl Criterion for Confluence {
    fn id(&self) -> usize {
        8
    }

    fn name(&self) -> &'static str {
        "confluence"
    }

    fn run(&self, seed: u64) -> Report {
        let mut rng = rng_for(seed, self.id());
        let mut failures = Vec::new();
        let symbols = [Symbol::new("a"), Symbol::hash(), Symbol::hash(), Symbol::new("b")];
        let mut with_paths = 0;
        let trees = 500;
        for i in 0..trees {
            let t = random_finite_tree(&mut rng, &symbols, 5);
            if !maximal_hash_paths(&t).is_empty() {
                with_paths += 1;
            }
            let forms = normal_forms(&t);
            if forms.len() != 1 || !forms[0].equivalent(&hash_reduction(&t)) {
                failures.push(format!("tree {i}: {} distinct normal forms", forms.len()));
            }
        }
        report(
            self,
            &failures,
            format!("{trees} finite trees ({with_paths} with #-paths) have one normal form"),
        )
    }
}

pub struct SafetyGames;

/// Projections of the plays of a game owned by Player 0 alone, under a
/// strategy.
fn projected_play(g: &TreeGame, s: &FiniteMemoryStrategy) -> Option<RegularTree> {
    let t = strategy_tree(g, s).ok()?;
    let p = t.map_labels(|l| match g.index_of(l.as_str()) {
        Some(v) => g.label(v).clone(),
        None => l.clone(),
    });
    hash_projection(&p)
}

fn random_memoryless(rng: &mut impl Rng, g: &TreeGame) -> FiniteMemoryStrategy {
    let choices: Vec<(String, Dir)> = (0..g.len())
        .filter(|&v| g.kind(v) == VertexKind::Player(Player::Zero))
        .map(|v| (g.name_of(v).to_string(), if rng.gen() { Dir::Left } else { Dir::Right }))
        .collect();
    let refs: Vec<(&str, Dir)> = choices.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    FiniteMemoryStrategy::memoryless(g, Player::Zero, &refs)
}

impl Criterion for SafetyGames {
    fn id(&self) -> usize {
        9
    }

    fn name(&self) -> &'static str {
        "safety-games"
    }

    fn run(&self, seed: u64) -> Report {
        let mut rng = rng_for(seed, self.id());
        let mut failures = Vec::new();
        let mut plays = 0;
        let mut built = 0;
        while built < 20 {
            let a = random_safety_nta(&mut rng, &ab_alphabet(), 4);
            if !nta_emptiness(&a).nonempty {
                continue;
            }
            built += 1;
            let g = match game_from_safety_nta(&a) {
                Ok(g) => g,
                Err(e) => {
                    failures.push(format!("automaton {built}: {e}"));
                    continue;
                }
            };
            let mut strategies: Vec<FiniteMemoryStrategy> = (0..20).map(|_| random_memoryless(&mut rng, &g)).collect();
            strategies.extend(enumerate_strategies(&g, Player::Zero, 4).into_iter().take(32));
            for s in &strategies {
                plays += 1;
                match projected_play(&g, s) {
                    Some(p) if nta_membership(&a, &p).unwrap_or(false) => {}
                    Some(_) => failures.push(format!("automaton {built}: projected play rejected")),
                    None => failures.push(format!("automaton {built}: play without projection")),
                }
            }
        }
        let targets = [
            vec![fixtures::a_leaf()],
            vec![fixtures::a_leaf(), fixtures::b_leaf()],
        ];
        for target in &targets {
            let a = fixtures::finite_language_nta("target", target);
            let g = match game_from_safety_nta(&a) {
                Ok(g) => g,
                Err(e) => {
                    failures.push(e.to_string());
                    continue;
                }
            };
            let mut got: Vec<RegularTree> = Vec::new();
            for s in enumerate_strategies(&g, Player::Zero, 6) {
                if let Some(p) = projected_play(&g, &s) {
                    if !got.iter().any(|x| x.equivalent(&p)) {
                        got.push(p);
                    }
                }
            }
            let same = got.len() == target.len() && target.iter().all(|t| got.iter().any(|x| x.equivalent(t)));
            if !same {
                failures.push(format!("target of {} trees projected to {} trees", target.len(), got.len()));
            }
        }
        report(
            self,
            &failures,
            format!("{plays} sampled plays over {built} automata project into the language; both finite targets exact"),
        )
    }
}
