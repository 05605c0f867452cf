use std::collections::HashMap;
use std::fmt::Write as _;

use super::{letter_indices, Alphabet, AutomatonError};
use crate::parity::{solve, ArenaBuilder, Player};
use crate::symbol::{Dir, Symbol};
use crate::tree::RegularTree;

/// Positive boolean formula over atoms `(d, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Dir, usize),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(d: Dir, q: usize) -> Self {
        Formula::Atom(d, q)
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// Renders with state names, fully parenthesised below the top level.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        self.render_into(names, &mut out, true);
        out
    }

    fn render_into(&self, names: &[String], out: &mut String, top: bool) {
        match self {
            Formula::Atom(d, q) => {
                let _ = write!(out, "({},{})", d, names[*q]);
            }
            Formula::Or(a, b) | Formula::And(a, b) => {
                let op = if matches!(self, Formula::Or(..)) { "|" } else { "&" };
                if !top {
                    out.push('(');
                }
                a.render_into(names, out, false);
                let _ = write!(out, " {op} ");
                b.render_into(names, out, false);
                if !top {
                    out.push(')');
                }
            }
        }
    }

    fn flatten(&self, nodes: &mut Vec<FNode>) -> usize {
        let node = match self {
            Formula::Atom(d, q) => FNode::Atom(*d, *q),
            Formula::Or(a, b) => {
                let i = a.flatten(nodes);
                let j = b.flatten(nodes);
                FNode::Or(i, j)
            }
            Formula::And(a, b) => {
                let i = a.flatten(nodes);
                let j = b.flatten(nodes);
                FNode::And(i, j)
            }
        };
        nodes.push(node);
        nodes.len() - 1
    }
}

#[derive(Debug, Clone, Copy)]
enum FNode {
    Atom(Dir, usize),
    Or(usize, usize),
    And(usize, usize),
}

/// Parses `(0,q) & (1,p) | ...` with `&` binding tighter than `|`.
pub fn parse_formula(
    text: &str,
    state: &dyn Fn(&str) -> Option<usize>,
) -> Result<Formula, AutomatonError> {
    let err = |msg: &str| AutomatonError::Formula(text.to_string(), msg.to_string());
    let tokens = tokenize(text).map_err(|m| err(&m))?;
    let mut p = FormulaParser {
        tokens,
        pos: 0,
        state,
    };
    let f = p.or().map_err(|m| err(&m))?;
    if p.pos != p.tokens.len() {
        return Err(err("trailing input"));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Comma,
    And,
    Or,
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' | '&' | '|' => {
                chars.next();
                out.push(match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    ',' => Tok::Comma,
                    '&' => Tok::And,
                    _ => Tok::Or,
                });
            }
            _ => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "(),&|".contains(c) {
                        break;
                    }
                    w.push(c);
                    chars.next();
                }
                out.push(Tok::Word(w));
            }
        }
    }
    if out.is_empty() {
        return Err("empty formula".into());
    }
    Ok(out)
}

struct FormulaParser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    state: &'a dyn Fn(&str) -> Option<usize>,
}

impl FormulaParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected {t:?} at token {}", self.pos))
        }
    }

    fn or(&mut self) -> Result<Formula, String> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, String> {
        let mut f = self.primary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            f = Formula::and(f, self.primary()?);
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<Formula, String> {
        self.expect(Tok::Open)?;
        // atom `(d,q)` or parenthesised subformula
        if let (Some(Tok::Word(d)), Some(Tok::Comma)) =
            (self.tokens.get(self.pos), self.tokens.get(self.pos + 1))
        {
            let dir = match d.as_str() {
                "0" => Dir::Left,
                "1" => Dir::Right,
                other => return Err(format!("bad direction `{other}`")),
            };
            self.pos += 2;
            let q = match self.peek() {
                Some(Tok::Word(w)) => (self.state)(w).ok_or_else(|| format!("unknown state `{w}`"))?,
                _ => return Err("expected state".into()),
            };
            self.pos += 1;
            self.expect(Tok::Close)?;
            return Ok(Formula::Atom(dir, q));
        }
        let f = self.or()?;
        self.expect(Tok::Close)?;
        Ok(f)
    }
}

/// Alternating parity tree automaton with a total transition function.
#[derive(Debug, Clone)]
pub struct Ata {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    rank: Vec<u32>,
    delta: Vec<Vec<Formula>>,
}

impl Ata {
    /// `delta[q][a]` indexed by alphabet position.
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        states: Vec<(String, u32)>,
        initial: usize,
        delta: Vec<Vec<Formula>>,
    ) -> Result<Self, AutomatonError> {
        let name = name.into();
        if states.is_empty() {
            return Err(AutomatonError::NoStates(name));
        }
        if initial >= states.len() {
            return Err(AutomatonError::NoInitial(name));
        }
        let mut seen = std::collections::HashSet::new();
        for (s, _) in &states {
            if !seen.insert(s) {
                return Err(AutomatonError::DuplicateState(s.clone()));
            }
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                let missing = alphabet.symbols()[row.len().min(alphabet.len() - 1)].clone();
                return Err(AutomatonError::MissingTransition(states[q].0.clone(), missing));
            }
        }
        if delta.len() != states.len() {
            return Err(AutomatonError::MissingTransition(
                states[delta.len().min(states.len() - 1)].0.clone(),
                alphabet.symbols()[0].clone(),
            ));
        }
        let (states, rank) = states.into_iter().unzip();
        Ok(Ata {
            name,
            alphabet,
            states,
            initial,
            rank,
            delta,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn rank(&self, q: usize) -> u32 {
        self.rank[q]
    }

    pub fn delta(&self, q: usize, a: usize) -> &Formula {
        &self.delta[q][a]
    }

    pub fn index(&self) -> (u32, u32) {
        (
            *self.rank.iter().min().expect("states"),
            *self.rank.iter().max().expect("states"),
        )
    }

    pub fn with_initial(&self, q: usize) -> Ata {
        Ata {
            initial: q,
            ..self.clone()
        }
    }
}

/// Does `a` accept `t`?
///
/// Positions are (node, state, subformula). Disjunctions belong to
/// Player 0, conjunctions to Player 1, and both carry the maximal rank.
/// An atom `(d, p)` moves to the whole transition formula of `p` at the
/// `d`-child and carries the rank of `p`.
pub fn ata_membership(a: &Ata, t: &RegularTree) -> Result<bool, AutomatonError> {
    let letters = letter_indices(t, &a.alphabet, &a.name)?;
    let (_, top) = a.index();
    let mut flat: HashMap<(usize, usize), (Vec<FNode>, usize)> = HashMap::new();
    let mut get_flat = |q: usize, letter: usize| -> (Vec<FNode>, usize) {
        flat.entry((q, letter))
            .or_insert_with(|| {
                let mut nodes = Vec::new();
                let root = a.delta[q][letter].flatten(&mut nodes);
                (nodes, root)
            })
            .clone()
    };

    let mut b = ArenaBuilder::new();
    let mut pos: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut work: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut vertex = |n: usize,
                      q: usize,
                      i: usize,
                      nodes: &[FNode],
                      b: &mut ArenaBuilder,
                      work: &mut Vec<(usize, usize, usize, usize)>|
     -> usize {
        *pos.entry((n, q, i)).or_insert_with(|| {
            let (owner, rank) = match nodes[i] {
                FNode::Or(..) => (Player::Zero, top),
                FNode::And(..) => (Player::One, top),
                FNode::Atom(_, p) => (Player::Zero, a.rank[p]),
            };
            let v = b.add_vertex("f", owner, rank);
            work.push((n, q, i, v));
            v
        })
    };

    let (nodes, root) = get_flat(a.initial, letters[t.root()]);
    let start = vertex(t.root(), a.initial, root, &nodes, &mut b, &mut work);
    while let Some((n, q, i, v)) = work.pop() {
        let (nodes, _) = get_flat(q, letters[n]);
        let succ = match nodes[i] {
            FNode::Or(l, r) | FNode::And(l, r) => vec![
                vertex(n, q, l, &nodes, &mut b, &mut work),
                vertex(n, q, r, &nodes, &mut b, &mut work),
            ],
            FNode::Atom(d, p) => {
                let c = t.child(n, d);
                let (pn, proot) = get_flat(p, letters[c]);
                vec![vertex(c, p, proot, &pn, &mut b, &mut work)]
            }
        };
        b.set_successors(v, succ);
    }
    let g = b.build(start);
    Ok(solve(&g).winner_of(start) == Player::Zero)
}

/// The four transition shapes a game automaton may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameShape {
    /// `(0, p)`
    Left(usize),
    /// `(1, p)`
    Right(usize),
    /// `(0, p) & (1, r)`
    And(usize, usize),
    /// `(0, p) | (1, r)`
    Or(usize, usize),
}

impl GameShape {
    fn of(f: &Formula) -> Option<GameShape> {
        use Formula::*;
        match f {
            Atom(Dir::Left, p) => Some(GameShape::Left(*p)),
            Atom(Dir::Right, p) => Some(GameShape::Right(*p)),
            And(x, y) | Or(x, y) => {
                let (p, r) = match (x.as_ref(), y.as_ref()) {
                    (Atom(Dir::Left, p), Atom(Dir::Right, r)) => (*p, *r),
                    (Atom(Dir::Right, r), Atom(Dir::Left, p)) => (*p, *r),
                    _ => return None,
                };
                Some(if matches!(f, And(..)) {
                    GameShape::And(p, r)
                } else {
                    GameShape::Or(p, r)
                })
            }
        }
    }

    pub fn formula(self) -> Formula {
        match self {
            GameShape::Left(p) => Formula::atom(Dir::Left, p),
            GameShape::Right(p) => Formula::atom(Dir::Right, p),
            GameShape::And(p, r) => Formula::and(Formula::atom(Dir::Left, p), Formula::atom(Dir::Right, r)),
            GameShape::Or(p, r) => Formula::or(Formula::atom(Dir::Left, p), Formula::atom(Dir::Right, r)),
        }
    }
}

/// An ATA whose every transition has one of the [`GameShape`] forms.
#[derive(Debug, Clone)]
pub struct GameAutomaton {
    ata: Ata,
    shapes: Vec<Vec<GameShape>>,
}

impl GameAutomaton {
    pub fn new(ata: Ata) -> Result<Self, AutomatonError> {
        let mut shapes = Vec::with_capacity(ata.num_states());
        for q in 0..ata.num_states() {
            let mut row = Vec::with_capacity(ata.alphabet.len());
            for (i, s) in ata.alphabet.symbols().iter().enumerate() {
                let shape = GameShape::of(&ata.delta[q][i]).ok_or_else(|| {
                    AutomatonError::NotGameShape(ata.states[q].clone(), s.clone())
                })?;
                row.push(shape);
            }
            shapes.push(row);
        }
        Ok(GameAutomaton { ata, shapes })
    }

    pub fn ata(&self) -> &Ata {
        &self.ata
    }

    pub fn shape(&self, q: usize, a: usize) -> GameShape {
        self.shapes[q][a]
    }

    pub fn shape_on(&self, q: usize, s: &Symbol) -> Option<GameShape> {
        self.ata.alphabet.index(s).map(|a| self.shapes[q][a])
    }
}

impl std::ops::Deref for GameAutomaton {
    type Target = Ata;

    fn deref(&self) -> &Ata {
        &self.ata
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn names() -> Vec<String> {
        vec!["p".into(), "q".into()]
    }

    fn lookup(s: &str) -> Option<usize> {
        names().iter().position(|n| n == s)
    }

    #[test]
    fn parse_precedence() {
        let f = parse_formula("(0,p) | (1,q) & (0,q)", &lookup).unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::atom(Dir::Left, 0),
                Formula::and(Formula::atom(Dir::Right, 1), Formula::atom(Dir::Left, 1))
            )
        );
        assert_eq!(f.render(&names()), "(0,p) | ((1,q) & (0,q))");
        let g = parse_formula(&f.render(&names()), &lookup).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_formula("(0,x)", &lookup).is_err());
        assert!(parse_formula("(2,p)", &lookup).is_err());
        assert!(parse_formula("(0,p) &", &lookup).is_err());
        assert!(parse_formula("", &lookup).is_err());
    }

    /// ATA accepting trees whose every non-blank node is labelled `a`:
    /// state `ok` demands both children to be in `ok`.
    fn only_a() -> Ata {
        let al = Alphabet::from_strs(&["a", "b", "c"]);
        let both = Formula::and(Formula::atom(Dir::Left, 0), Formula::atom(Dir::Right, 0));
        let fail = Formula::atom(Dir::Left, 1);
        // states: ok (0), bad (1, odd rank self-loop)
        let mut delta = vec![Vec::new(), Vec::new()];
        for s in al.symbols() {
            delta[0].push(if s.as_str() == "b" { fail.clone() } else { both.clone() });
            delta[1].push(fail.clone());
        }
        Ata::new("only_a", al, vec![("ok".into(), 0), ("bad".into(), 1)], 0, delta).unwrap()
    }

    #[test]
    fn membership_conjunction() {
        let a = only_a();
        assert!(ata_membership(&a, &blank()).unwrap());
        assert!(ata_membership(&a, &a_leaf()).unwrap());
        assert!(!ata_membership(&a, &b_leaf()).unwrap());
        assert!(!ata_membership(&a, &c_pair(&a_leaf(), &b_leaf())).unwrap());
        let ga = GameAutomaton::new(a).unwrap();
        assert_eq!(ga.shape(0, 0), GameShape::And(0, 0));
    }

    #[test]
    fn non_game_shape_rejected() {
        let al = Alphabet::from_strs(&[]);
        let f = Formula::and(Formula::atom(Dir::Left, 0), Formula::atom(Dir::Left, 0));
        let a = Ata::new("x", al, vec![("p".into(), 0)], 0, vec![vec![f]]).unwrap();
        assert!(matches!(GameAutomaton::new(a), Err(AutomatonError::NotGameShape(..))));
    }
}
