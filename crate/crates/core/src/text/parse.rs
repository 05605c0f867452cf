use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use super::{Item, ParseError};
use crate::automata::{parse_formula, Alphabet, Ata, Formula, NtaBuilder, SdttBuilder};
use crate::game::{FiniteMemoryStrategy, GVertex, Objective, TreeGame, VertexKind};
use crate::parity::{PVertex, ParityGame, Player};
use crate::symbol::{Dir, Symbol};
use crate::tree::RegularTree;

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    /// Byte offset into the line.
    at: usize,
    col: usize,
}

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    text: &'a str,
    toks: Vec<Tok<'a>>,
}

fn col_of(text: &str, at: usize) -> usize {
    text[..at].chars().count() + 1
}

fn lex(no: usize, raw: &str) -> Option<Line<'_>> {
    let text = raw.find("//").map_or(raw, |i| &raw[..i]);
    let mut toks = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain([(text.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                toks.push(Tok {
                    text: &text[s..i],
                    at: s,
                    col: col_of(text, s),
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    (!toks.is_empty()).then_some(Line { no, text, toks })
}

impl<'a> Line<'a> {
    fn err_at(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        self.err_at(self.toks[0].col, msg)
    }

    fn end_col(&self) -> usize {
        col_of(self.text, self.text.trim_end().len())
    }

    fn keyword(&self) -> &'a str {
        self.toks[0].text
    }

    fn pos(&self, i: usize, what: &str) -> Result<Tok<'a>> {
        match self.toks.get(i) {
            Some(t) if !t.text.contains('=') => Ok(*t),
            Some(t) => Err(self.err_at(t.col, format!("expected {what}, found `{}`", t.text))),
            None => Err(self.err_at(self.end_col() + 1, format!("expected {what}"))),
        }
    }

    fn arrow(&self, i: usize) -> Result<()> {
        let t = self.pos(i, "`->`")?;
        if t.text == "->" {
            Ok(())
        } else {
            Err(self.err_at(t.col, format!("expected `->`, found `{}`", t.text)))
        }
    }

    fn opt_key(&self, key: &str) -> Option<Tok<'a>> {
        self.toks.iter().find_map(|t| {
            let v = t.text.strip_prefix(key)?.strip_prefix('=')?;
            Some(Tok {
                text: v,
                at: t.at + key.len() + 1,
                col: t.col + key.chars().count() + 1,
            })
        })
    }

    fn key(&self, key: &str) -> Result<Tok<'a>> {
        self.opt_key(key)
            .ok_or_else(|| self.err_at(self.end_col() + 1, format!("missing `{key}=`")))
    }

    fn flag(&self, f: &str) -> bool {
        self.toks.iter().any(|t| t.text == f)
    }

    /// Rejects tokens past `fixed` positional ones that are not among
    /// `keys` or `flags`.
    fn only(&self, fixed: usize, keys: &[&str], flags: &[&str]) -> Result<()> {
        let mut seen = Vec::new();
        for t in self.toks.iter().skip(fixed) {
            let k = t.text.split_once('=').map_or(t.text, |(k, _)| k);
            let ok = if t.text.contains('=') {
                keys.contains(&k)
            } else {
                flags.contains(&k)
            };
            if !ok {
                return Err(self.err_at(t.col, format!("unexpected `{}`", t.text)));
            }
            if seen.contains(&k) {
                return Err(self.err_at(t.col, format!("`{k}` given twice")));
            }
            seen.push(k);
        }
        Ok(())
    }

    fn rest(&self, i: usize, what: &str) -> Result<(&'a str, usize)> {
        let t = self.toks.get(i).ok_or_else(|| self.err_at(self.end_col() + 1, format!("expected {what}")))?;
        Ok((self.text[t.at..].trim_end(), t.col))
    }
}

fn num<T: FromStr>(line: &Line, t: Tok, what: &str) -> Result<T> {
    t.text
        .parse()
        .map_err(|_| line.err_at(t.col, format!("expected {what}, found `{}`", t.text)))
}

fn player(line: &Line, t: Tok) -> Result<Player> {
    match t.text {
        "0" => Ok(Player::Zero),
        "1" => Ok(Player::One),
        other => Err(line.err_at(t.col, format!("expected player 0 or 1, found `{other}`"))),
    }
}

fn dir(line: &Line, t: Tok) -> Result<Dir> {
    match t.text {
        "0" => Ok(Dir::Left),
        "1" => Ok(Dir::Right),
        other => Err(line.err_at(t.col, format!("expected direction 0 or 1, found `{other}`"))),
    }
}

fn pair<'a>(line: &Line, t: Tok<'a>) -> Result<(Tok<'a>, Tok<'a>)> {
    let (a, b) = t
        .text
        .split_once(',')
        .filter(|(a, b)| !a.is_empty() && !b.is_empty() && !b.contains(','))
        .ok_or_else(|| line.err_at(t.col, format!("expected `<x>,<y>`, found `{}`", t.text)))?;
    let second = Tok {
        text: b,
        at: t.at + a.len() + 1,
        col: t.col + a.chars().count() + 1,
    };
    Ok((Tok { text: a, ..t }, second))
}

struct Block<'a> {
    header: Line<'a>,
    body: Vec<Line<'a>>,
}

const HEADERS: [&str; 7] = ["tree", "pg", "nta", "sdtt", "ata", "tgame", "strat"];

/// Parses every block of `src`.
pub fn parse(src: &str) -> Result<Vec<Item>> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let Some(line) = lex(i + 1, raw) else { continue };
        if HEADERS.contains(&line.keyword()) {
            blocks.push(Block {
                header: line,
                body: Vec::new(),
            });
        } else if let Some(b) = blocks.last_mut() {
            b.body.push(line);
        } else {
            return Err(line.err(format!("expected a header ({}), found `{}`", HEADERS.join("|"), line.keyword())));
        }
    }
    blocks.iter().map(parse_block).collect()
}

fn parse_block(b: &Block) -> Result<Item> {
    let h = &b.header;
    let allowed: &[&str] = match h.keyword() {
        "tree" => &["node"],
        "pg" => &["pvertex"],
        "nta" => &["alphabet", "state", "trans"],
        "sdtt" => &["alphabet", "state", "dtrans"],
        "ata" => &["alphabet", "state", "atrans"],
        "tgame" => &["gvertex", "objective"],
        _ => &["minit", "mmove", "mupd"],
    };
    if let Some(l) = b.body.iter().find(|l| !allowed.contains(&l.keyword())) {
        return Err(l.err(format!(
            "`{}` is not allowed in a {} block (expected {})",
            l.keyword(),
            h.keyword(),
            allowed.join("|")
        )));
    }
    if h.keyword() == "strat" {
        return parse_strategy(b);
    }
    let name = h.pos(1, "a name")?.text;
    h.only(2, &[], &[])?;
    match h.keyword() {
        "tree" => parse_tree(name, b),
        "pg" => parse_pg(name, b),
        "nta" => parse_nta(name, b),
        "sdtt" => parse_sdtt(name, b),
        "ata" => parse_ata(name, b),
        _ => parse_game(name, b),
    }
}

/// Positions of `ids`, rejecting duplicates and `_`.
fn index_ids<'a>(lines: &[&Line<'a>], blank_ok: bool) -> Result<HashMap<&'a str, usize>> {
    let mut ids = HashMap::new();
    for l in lines {
        let t = l.pos(1, "an id")?;
        if !blank_ok && t.text == Symbol::BLANK_TEXT {
            return Err(l.err_at(t.col, "`_` is reserved for the blank tree"));
        }
        if ids.insert(t.text, ids.len()).is_some() {
            return Err(l.err_at(t.col, format!("duplicate id `{}`", t.text)));
        }
    }
    Ok(ids)
}

fn lookup(l: &Line, ids: &HashMap<&str, usize>, t: Tok) -> Result<usize> {
    ids.get(t.text)
        .copied()
        .ok_or_else(|| l.err_at(t.col, format!("unknown id `{}`", t.text)))
}

fn parse_tree(name: &str, b: &Block) -> Result<Item> {
    let ids = index_ids(&b.body.iter().collect::<Vec<_>>(), false)?;
    let n = ids.len();
    if n == 0 {
        return Ok(Item::Tree(name.into(), RegularTree::blank()));
    }
    let mut labels = Vec::with_capacity(n + 1);
    let mut children = Vec::with_capacity(n + 1);
    for l in &b.body {
        l.only(2, &["label", "left", "right"], &[])?;
        labels.push(Symbol::new(l.key("label")?.text));
        let mut kids = [n, n];
        for (k, key) in ["left", "right"].into_iter().enumerate() {
            let t = l.key(key)?;
            if t.text != Symbol::BLANK_TEXT {
                kids[k] = lookup(l, &ids, t)?;
            }
        }
        children.push(kids);
    }
    labels.push(Symbol::blank());
    children.push([n, n]);
    let t = RegularTree::from_parts(labels, children, 0).map_err(|e| b.header.err(e.to_string()))?;
    Ok(Item::Tree(name.into(), t))
}

fn initial(lines: &[&Line]) -> Result<usize> {
    let mut init = None;
    for (i, l) in lines.iter().enumerate() {
        if l.flag("init") {
            if init.is_some() {
                return Err(l.err("second initial element"));
            }
            init = Some(i);
        }
    }
    Ok(init.unwrap_or(0))
}

fn parse_pg(name: &str, b: &Block) -> Result<Item> {
    let lines: Vec<&Line> = b.body.iter().collect();
    let ids = index_ids(&lines, true)?;
    let mut vertices = Vec::new();
    for l in &b.body {
        l.only(2, &["owner", "rank", "succ"], &["init"])?;
        let (s0, s1) = pair(l, l.key("succ")?)?;
        vertices.push(PVertex {
            name: l.toks[1].text.to_string(),
            owner: player(l, l.key("owner")?)?,
            rank: num(l, l.key("rank")?, "a rank")?,
            succ: [lookup(l, &ids, s0)?, lookup(l, &ids, s1)?],
        });
    }
    let init = initial(&lines)?;
    let g = ParityGame::new(vertices, init).map_err(|e| b.header.err(e.to_string()))?;
    Ok(Item::Pg(name.into(), g))
}

/// States, ranks and the initial state of an automaton block, plus its
/// alphabet: the `alphabet` lines and every letter read by `trans_kw`.
struct Header<'a> {
    states: Vec<(String, u32)>,
    index: HashMap<&'a str, usize>,
    initial: usize,
    alphabet: Alphabet,
}

fn automaton_header<'a>(b: &Block<'a>, trans_kw: &str) -> Result<Header<'a>> {
    let mut states = Vec::new();
    let mut index = HashMap::new();
    let mut init = None;
    let mut letters = Vec::new();
    for l in &b.body {
        match l.keyword() {
            "state" => {
                let t = l.pos(1, "a state name")?;
                l.only(2, &["rank"], &["init"])?;
                if index.insert(t.text, states.len()).is_some() {
                    return Err(l.err_at(t.col, format!("duplicate state `{}`", t.text)));
                }
                if l.flag("init") {
                    if init.is_some() {
                        return Err(l.err("second initial state"));
                    }
                    init = Some(states.len());
                }
                states.push((t.text.to_string(), num(l, l.key("rank")?, "a rank")?));
            }
            "alphabet" => letters.extend(l.toks[1..].iter().map(|t| Symbol::new(t.text))),
            kw if kw == trans_kw => letters.push(Symbol::new(l.pos(2, "a letter")?.text)),
            _ => {}
        }
    }
    if states.is_empty() {
        return Err(b.header.err("automaton has no states"));
    }
    Ok(Header {
        states,
        index,
        initial: init.unwrap_or(0),
        alphabet: Alphabet::new(letters),
    })
}

fn state(l: &Line, h: &Header, t: Tok) -> Result<usize> {
    h.index
        .get(t.text)
        .copied()
        .ok_or_else(|| l.err_at(t.col, format!("unknown state `{}`", t.text)))
}

fn parse_nta(name: &str, b: &Block) -> Result<Item> {
    let h = automaton_header(b, "trans")?;
    let mut nb = NtaBuilder::new(name, h.alphabet.clone());
    for (q, r) in &h.states {
        nb.add_state(q.clone(), *r);
    }
    nb.set_initial(h.initial);
    for l in b.body.iter().filter(|l| l.keyword() == "trans") {
        let q = state(l, &h, l.pos(1, "a state")?)?;
        let a = Symbol::new(l.toks[2].text);
        l.arrow(3)?;
        let mut i = 4;
        loop {
            let (x, y) = pair(l, l.pos(i, "a state pair")?)?;
            let (x, y) = (state(l, &h, x)?, state(l, &h, y)?);
            nb.add_transition(q, &a, x, y).map_err(|e| l.err(e.to_string()))?;
            match l.toks.get(i + 1) {
                None => break,
                Some(t) if t.text == "|" => i += 2,
                Some(t) => return Err(l.err_at(t.col, format!("expected `|`, found `{}`", t.text))),
            }
        }
    }
    Ok(Item::Nta(nb.build().map_err(|e| b.header.err(e.to_string()))?))
}

fn parse_sdtt(name: &str, b: &Block) -> Result<Item> {
    let h = automaton_header(b, "dtrans")?;
    let mut sb = SdttBuilder::new(name, h.alphabet.clone());
    for (q, r) in &h.states {
        sb.add_state(q.clone(), *r);
    }
    sb.set_initial(h.initial);
    let mut seen = BTreeMap::new();
    for l in b.body.iter().filter(|l| l.keyword() == "dtrans") {
        let q = state(l, &h, l.pos(1, "a state")?)?;
        let a = Symbol::new(l.toks[2].text);
        l.arrow(3).or_else(|_| l.arrow(4))?;
        let owner = player(l, l.key("owner")?)?;
        let targets = l.toks.iter().position(|t| t.text == "->").expect("arrow checked") + 1;
        let (x, y) = pair(l, l.pos(targets, "a state pair")?)?;
        let extra = l.toks[3..].iter().enumerate().find(|&(i, t)| i + 3 != targets && t.text != "->" && !t.text.starts_with("owner="));
        if let Some((_, t)) = extra {
            return Err(l.err_at(t.col, format!("unexpected `{}`", t.text)));
        }
        if seen.insert((q, a.clone()), ()).is_some() {
            return Err(l.err(format!("second transition for `{}` on {a}", h.states[q].0)));
        }
        sb.set_transition(q, &a, owner, state(l, &h, x)?, state(l, &h, y)?)
            .map_err(|e| l.err(e.to_string()))?;
    }
    Ok(Item::Sdtt(sb.build().map_err(|e| b.header.err(e.to_string()))?))
}

fn parse_ata(name: &str, b: &Block) -> Result<Item> {
    let h = automaton_header(b, "atrans")?;
    let mut delta: Vec<Vec<Option<Formula>>> = vec![vec![None; h.alphabet.len()]; h.states.len()];
    for l in b.body.iter().filter(|l| l.keyword() == "atrans") {
        let q = state(l, &h, l.pos(1, "a state")?)?;
        let a = Symbol::new(l.toks[2].text);
        l.arrow(3)?;
        let (text, col) = l.rest(4, "a formula")?;
        let f = parse_formula(text, &|s| h.index.get(s).copied()).map_err(|e| l.err_at(col, e.to_string()))?;
        let slot = &mut delta[q][h.alphabet.index(&a).expect("letter collected")];
        if slot.replace(f).is_some() {
            return Err(l.err(format!("second transition for `{}` on {a}", h.states[q].0)));
        }
    }
    let mut rows = Vec::new();
    for (q, row) in delta.into_iter().enumerate() {
        let mut out = Vec::new();
        for (a, f) in row.into_iter().enumerate() {
            out.push(f.ok_or_else(|| {
                b.header.err(format!(
                    "missing transition for state `{}` on {}",
                    h.states[q].0,
                    h.alphabet.symbols()[a]
                ))
            })?);
        }
        rows.push(out);
    }
    let ata = Ata::new(name, h.alphabet, h.states, h.initial, rows).map_err(|e| b.header.err(e.to_string()))?;
    Ok(Item::Ata(ata))
}

fn parse_game(name: &str, b: &Block) -> Result<Item> {
    let lines: Vec<&Line> = b.body.iter().filter(|l| l.keyword() == "gvertex").collect();
    let ids = index_ids(&lines, false)?;
    let mut vertices = Vec::new();
    for l in &lines {
        l.only(2, &["label", "owner", "succ"], &["init"])?;
        let o = l.key("owner")?;
        let kind = match o.text {
            "0" => VertexKind::Player(Player::Zero),
            "1" => VertexKind::Player(Player::One),
            "B" => VertexKind::Branching,
            other => return Err(l.err_at(o.col, format!("expected owner 0, 1 or B, found `{other}`"))),
        };
        let (s0, s1) = pair(l, l.key("succ")?)?;
        vertices.push(GVertex {
            name: l.toks[1].text.to_string(),
            label: Symbol::new(l.key("label")?.text),
            kind,
            succ: [lookup(l, &ids, s0)?, lookup(l, &ids, s1)?],
        });
    }
    let init = initial(&lines)?;
    let mut g = TreeGame::new(name, vertices, init).map_err(|e| b.header.err(e.to_string()))?;
    let mut objectives = b.body.iter().filter(|l| l.keyword() == "objective");
    if let Some(l) = objectives.next() {
        let obj = if let Some(d) = l.opt_key("sdtt") {
            l.only(1, &["sdtt"], &[])?;
            Objective::Sdtt(d.text.into())
        } else {
            l.only(1, &["nta", "conta"], &[])?;
            Objective::Nta {
                l: l.key("nta")?.text.into(),
                col: l.key("conta")?.text.into(),
            }
        };
        g = g.with_objective(obj);
    }
    if let Some(l) = objectives.next() {
        return Err(l.err("second objective"));
    }
    Ok(Item::Game(g))
}

fn parse_strategy(b: &Block) -> Result<Item> {
    let h = &b.header;
    h.only(1, &["player", "memsize", "name"], &[])?;
    let player = player(h, h.key("player")?)?;
    let memsize: usize = num(h, h.key("memsize")?, "a memory size")?;
    if memsize == 0 {
        return Err(h.err_at(h.key("memsize")?.col, "memory size must be positive"));
    }
    let name = h.opt_key("name").map_or("strategy", |t| t.text);
    let mem = |l: &Line, t: Tok| -> Result<usize> {
        let m: usize = num(l, t, "a memory state")?;
        if m >= memsize {
            return Err(l.err_at(t.col, format!("memory state {m} out of range 0..{memsize}")));
        }
        Ok(m)
    };
    let mut init = None;
    let mut moves = BTreeMap::new();
    let mut updates = BTreeMap::new();
    for l in &b.body {
        let fixed = match l.keyword() {
            "minit" => {
                if init.replace(mem(l, l.pos(1, "a memory state")?)?).is_some() {
                    return Err(l.err("second `minit`"));
                }
                2
            }
            "mmove" => {
                let m = mem(l, l.pos(1, "a memory state")?)?;
                let v = l.pos(2, "a vertex")?.text.to_string();
                l.arrow(3)?;
                let d = dir(l, l.pos(4, "a direction")?)?;
                if moves.insert((m, v.clone()), d).is_some() {
                    return Err(l.err(format!("second move for memory {m} at `{v}`")));
                }
                5
            }
            _ => {
                let m = mem(l, l.pos(1, "a memory state")?)?;
                let v = l.pos(2, "a vertex")?.text.to_string();
                let d = dir(l, l.pos(3, "a direction")?)?;
                l.arrow(4)?;
                let m2 = mem(l, l.pos(5, "a memory state")?)?;
                if updates.insert((m, v.clone(), d), m2).is_some() {
                    return Err(l.err(format!("second update for memory {m} at `{v}` in direction {d}")));
                }
                6
            }
        };
        l.only(fixed, &[], &[])?;
    }
    Ok(Item::Strategy(FiniteMemoryStrategy {
        name: name.to_string(),
        player,
        memsize,
        init: init.unwrap_or(0),
        moves,
        updates,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(src: &str) -> Item {
        let mut items = parse(src).unwrap();
        assert_eq!(items.len(), 1);
        items.pop().unwrap()
    }

    fn error(src: &str) -> (usize, usize) {
        let e = parse(src).unwrap_err();
        (e.line, e.col)
    }

    #[test]
    fn tree_block() {
        let Item::Tree(name, t) = one("tree t // a tree\nnode r label=c left=x right=_\nnode x label=a left=_ right=r\n") else {
            panic!()
        };
        assert_eq!(name, "t");
        assert_eq!(t.label_at(&"0".parse().unwrap()).as_str(), "a");
        assert_eq!(t.label_at(&"01".parse().unwrap()).as_str(), "c");
        assert!(t.label_at(&"1".parse().unwrap()).is_blank());
    }

    #[test]
    fn empty_tree_block_is_blank() {
        let Item::Tree(_, t) = one("tree t\n") else { panic!() };
        assert!(t.is_blank_tree());
    }

    #[test]
    fn nta_alphabet_is_collected() {
        let Item::Nta(a) = one("nta n\nalphabet a c\nstate q rank=0 init\ntrans q a -> q,q | q,q\ntrans q b -> q,q\n") else {
            panic!()
        };
        assert_eq!(a.alphabet().len(), 4);
        assert_eq!(a.transitions_on(0, &Symbol::new("a")).len(), 1);
    }

    #[test]
    fn sdtt_owner_may_follow_the_arrow_or_precede_it() {
        let src = "sdtt d\nstate q rank=0\ndtrans q a owner=1 -> q,q\ndtrans q _ -> q,q owner=0\n";
        let Item::Sdtt(d) = one(src) else { panic!() };
        assert_eq!(d.owner(0, 1), Player::One);
        assert_eq!(d.owner(0, 0), Player::Zero);
    }

    #[test]
    fn ata_formula_rest_of_line() {
        let src = "ata x\nstate p rank=0\natrans p a -> (0,p) & (1,p)\natrans p _ -> (0,p) | (1,p)\n";
        let Item::Ata(a) = one(src) else { panic!() };
        assert!(matches!(a.delta(0, 1), Formula::And(..)));
    }

    #[test]
    fn game_and_strategy() {
        let src = "tgame g\ngvertex v label=a owner=0 succ=w,w\ngvertex w label=b owner=B succ=v,w init\nobjective nta=l conta=c\n\
                   strat player=0 memsize=2 name=s\nminit 1\nmmove 1 v -> 1\nmupd 1 v 1 -> 0\n";
        let items = parse(src).unwrap();
        let Item::Game(g) = &items[0] else { panic!() };
        assert_eq!(g.initial(), 1);
        assert_eq!(g.objective(), Some(&Objective::Nta { l: "l".into(), col: "c".into() }));
        let Item::Strategy(s) = &items[1] else { panic!() };
        assert_eq!((s.name.as_str(), s.init, s.memsize), ("s", 1, 2));
        assert_eq!(s.moves[&(1, "v".to_string())], Dir::Right);
        assert_eq!(s.updates[&(1, "v".to_string(), Dir::Right)], 0);
    }

    #[test]
    fn error_positions() {
        assert_eq!(error("node x label=a left=_ right=_\n"), (1, 1));
        assert_eq!(error("tree t\nnode x label=a left=y right=_\n"), (2, 21));
        assert_eq!(error("pg g\npvertex a owner=0 rank=x succ=a,a\n"), (2, 24));
        assert_eq!(error("pg g\npvertex a owner=0 rank=1 succ=a\n"), (2, 31));
        assert_eq!(error("nta n\nstate q rank=0\ntrans q a -> q,p\n"), (3, 16));
        assert_eq!(error("nta n\nstate q rank=0\ntrans q a q,q\n"), (3, 11));
        assert_eq!(error("strat player=0 memsize=1\nminit 3\n"), (2, 7));
        assert_eq!(error("sdtt d\nstate q rank=0\ndtrans q a owner=0 -> q,q\n"), (1, 1));
        assert_eq!(error("tgame g\ngvertex v label=a owner=2 succ=v,v\n"), (2, 25));
        assert_eq!(error("pg g\nnode a\n"), (2, 1));
    }
}
