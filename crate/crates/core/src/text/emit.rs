use std::fmt::Write as _;

use crate::automata::{Ata, Nta, Sdtt};
use crate::game::{FiniteMemoryStrategy, Objective, TreeGame};
use crate::parity::ParityGame;
use crate::symbol::Symbol;
use crate::tree::RegularTree;

fn alphabet_line(out: &mut String, letters: &[Symbol]) {
    let letters: Vec<&str> = letters.iter().filter(|s| !s.is_blank()).map(Symbol::as_str).collect();
    if !letters.is_empty() {
        let _ = writeln!(out, "alphabet {}", letters.join(" "));
    }
}

fn state_lines(out: &mut String, states: impl Iterator<Item = (String, u32)>, initial: usize) {
    for (q, (name, rank)) in states.enumerate() {
        let init = if q == initial { " init" } else { "" };
        let _ = writeln!(out, "state {name} rank={rank}{init}");
    }
}

/// Root first, then the other non-blank nodes; the blank node is `_`.
pub fn emit_tree(name: &str, t: &RegularTree) -> String {
    let mut out = format!("tree {name}\n");
    if t.is_blank_tree() {
        return out;
    }
    let id = |n: usize| {
        if t.label(n).is_blank() {
            Symbol::BLANK_TEXT.to_string()
        } else {
            format!("n{n}")
        }
    };
    let order = std::iter::once(t.root()).chain(t.nodes().filter(|&n| n != t.root()));
    for n in order.filter(|&n| !t.label(n).is_blank()) {
        let [l, r] = t.children(n);
        let _ = writeln!(out, "node {} label={} left={} right={}", id(n), t.label(n), id(l), id(r));
    }
    out
}

pub fn emit_pg(name: &str, g: &ParityGame) -> String {
    let mut out = format!("pg {name}\n");
    for (v, x) in g.vertices().iter().enumerate() {
        let init = if v == g.initial() { " init" } else { "" };
        let _ = writeln!(
            out,
            "pvertex {} owner={} rank={} succ={},{}{init}",
            x.name,
            x.owner,
            x.rank,
            g.name(x.succ[0]),
            g.name(x.succ[1])
        );
    }
    out
}

pub fn emit_nta(a: &Nta) -> String {
    let mut out = format!("nta {}\n", a.name());
    alphabet_line(&mut out, a.alphabet().symbols());
    state_lines(
        &mut out,
        (0..a.num_states()).map(|q| (a.state_name(q).to_string(), a.rank(q))),
        a.initial(),
    );
    for q in 0..a.num_states() {
        for (i, x) in a.alphabet().symbols().iter().enumerate() {
            let pairs = a.transitions(q, i);
            if pairs.is_empty() {
                continue;
            }
            let rhs: Vec<String> = pairs
                .iter()
                .map(|&(l, r)| format!("{},{}", a.state_name(l), a.state_name(r)))
                .collect();
            let _ = writeln!(out, "trans {} {x} -> {}", a.state_name(q), rhs.join(" | "));
        }
    }
    out
}

pub fn emit_sdtt(d: &Sdtt) -> String {
    let mut out = format!("sdtt {}\n", d.name());
    alphabet_line(&mut out, d.alphabet().symbols());
    state_lines(
        &mut out,
        (0..d.num_states()).map(|q| (d.state_name(q).to_string(), d.rank(q))),
        d.initial(),
    );
    for q in 0..d.num_states() {
        for (i, x) in d.alphabet().symbols().iter().enumerate() {
            let (l, r) = d.delta(q, i);
            let _ = writeln!(
                out,
                "dtrans {} {x} owner={} -> {},{}",
                d.state_name(q),
                d.owner(q, i),
                d.state_name(l),
                d.state_name(r)
            );
        }
    }
    out
}

pub fn emit_ata(a: &Ata) -> String {
    let mut out = format!("ata {}\n", a.name());
    alphabet_line(&mut out, a.alphabet().symbols());
    state_lines(
        &mut out,
        (0..a.num_states()).map(|q| (a.state_name(q).to_string(), a.rank(q))),
        a.initial(),
    );
    for q in 0..a.num_states() {
        for (i, x) in a.alphabet().symbols().iter().enumerate() {
            let f = a.delta(q, i).render(a.states());
            let _ = writeln!(out, "atrans {} {x} -> {f}", a.state_name(q));
        }
    }
    out
}

pub fn emit_game(g: &TreeGame) -> String {
    let mut out = format!("tgame {}\n", g.name());
    for (v, x) in g.vertices().iter().enumerate() {
        let init = if v == g.initial() { " init" } else { "" };
        let _ = writeln!(
            out,
            "gvertex {} label={} owner={} succ={},{}{init}",
            x.name,
            x.label,
            x.kind,
            g.name_of(x.succ[0]),
            g.name_of(x.succ[1])
        );
    }
    match g.objective() {
        Some(Objective::Sdtt(d)) => {
            let _ = writeln!(out, "objective sdtt={d}");
        }
        Some(Objective::Nta { l, col }) => {
            let _ = writeln!(out, "objective nta={l} conta={col}");
        }
        None => {}
    }
    out
}

pub fn emit_strategy(s: &FiniteMemoryStrategy) -> String {
    let mut out = format!("strat player={} memsize={} name={}\n", s.player, s.memsize, s.name);
    let _ = writeln!(out, "minit {}", s.init);
    for ((m, v), d) in &s.moves {
        let _ = writeln!(out, "mmove {m} {v} -> {d}");
    }
    for ((m, v, d), m2) in &s.updates {
        let _ = writeln!(out, "mupd {m} {v} {d} -> {m2}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Item};
    use crate::automata::sdtt_to_game_ata;
    use crate::fixtures::*;
    use crate::game::{solve_game_automaton_objective, FiniteMemoryStrategy};
    use crate::parity::Player;
    use crate::symbol::Dir;

    fn reparse(text: &str) -> Item {
        let mut items = parse(text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(items.len(), 1);
        let item = items.pop().unwrap();
        assert_eq!(item.emit(), text, "emission is a fixpoint");
        item
    }

    #[test]
    fn trees_round_trip() {
        for t in [blank(), a_leaf(), all_a(), c_pair(&a_leaf(), &all_a())] {
            let Item::Tree(_, back) = reparse(&super::emit_tree("t", &t)) else { panic!() };
            assert!(back.equivalent(&t));
        }
    }

    #[test]
    fn automata_round_trip() {
        for a in [all_nta(), no_b_nta(), some_b_nta(), l_eq(), co_l_eq()] {
            reparse(&super::emit_nta(&a));
        }
        for d in [all_sdtt(), d_safe_a()] {
            reparse(&super::emit_sdtt(&d));
            reparse(&super::emit_ata(&sdtt_to_game_ata(&d)));
        }
    }

    #[test]
    fn games_and_strategies_round_trip() {
        let Item::Game(g) = reparse(&super::emit_game(&fig2_game())) else { panic!() };
        assert_eq!(g, fig2_game());
        let sol = solve_game_automaton_objective(&fig2_game(), &d_safe_a()).unwrap();
        let Item::Strategy(s) = reparse(&super::emit_strategy(&sol.strategy)) else { panic!() };
        assert_eq!(s, sol.strategy);
        let m = FiniteMemoryStrategy::memoryless(&fig2_game(), Player::One, &[("0", Dir::Right)]);
        reparse(&super::emit_strategy(&m));
    }
}
