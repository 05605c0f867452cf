//! Line-based text formats for every object kind, and a workspace of
//! named objects loaded from them.
//!
//! A file is a sequence of blocks. Each block starts with a header line
//! (`tree`, `pg`, `nta`, `sdtt`, `ata`, `tgame` or `strat`) followed by
//! body lines. `//` starts a comment. Tokens are separated by whitespace.

mod emit;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use emit::{emit_ata, emit_game, emit_nta, emit_pg, emit_sdtt, emit_strategy, emit_tree};
pub use parse::parse;

use crate::automata::{Ata, Nta, Sdtt};
use crate::game::{FiniteMemoryStrategy, Objective, TreeGame};
use crate::parity::ParityGame;
use crate::tree::RegularTree;

/// A syntax or construction error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// One parsed block.
#[derive(Debug, Clone)]
pub enum Item {
    Tree(String, RegularTree),
    Pg(String, ParityGame),
    Nta(Nta),
    Sdtt(Sdtt),
    Ata(Ata),
    Game(TreeGame),
    Strategy(FiniteMemoryStrategy),
}

impl Item {
    pub fn kind(&self) -> Kind {
        match self {
            Item::Tree(..) => Kind::Tree,
            Item::Pg(..) => Kind::Pg,
            Item::Nta(_) => Kind::Nta,
            Item::Sdtt(_) => Kind::Sdtt,
            Item::Ata(_) => Kind::Ata,
            Item::Game(_) => Kind::Game,
            Item::Strategy(_) => Kind::Strategy,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Item::Tree(n, _) | Item::Pg(n, _) => n,
            Item::Nta(a) => a.name(),
            Item::Sdtt(d) => d.name(),
            Item::Ata(a) => a.name(),
            Item::Game(g) => g.name(),
            Item::Strategy(s) => &s.name,
        }
    }

    /// The block text; parsing it gives back an equal object.
    pub fn emit(&self) -> String {
        match self {
            Item::Tree(n, t) => emit_tree(n, t),
            Item::Pg(n, g) => emit_pg(n, g),
            Item::Nta(a) => emit_nta(a),
            Item::Sdtt(d) => emit_sdtt(d),
            Item::Ata(a) => emit_ata(a),
            Item::Game(g) => emit_game(g),
            Item::Strategy(s) => emit_strategy(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Tree,
    Pg,
    Nta,
    Sdtt,
    Ata,
    Game,
    Strategy,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Tree => "tree",
            Kind::Pg => "pg",
            Kind::Nta => "nta",
            Kind::Sdtt => "sdtt",
            Kind::Ata => "ata",
            Kind::Game => "tgame",
            Kind::Strategy => "strat",
        })
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum WorkspaceError {
    #[error("{file}: {err}")]
    Parse { file: String, err: ParseError },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: Kind, name: String },
    #[error("no {kind} named `{name}`")]
    Missing { kind: Kind, name: String },
    #[error("no {0} loaded")]
    NoneLoaded(Kind),
    #[error("several {kind} objects loaded ({names}); pick one by name")]
    Ambiguous { kind: Kind, names: String },
    #[error("game `{game}` refers to missing {kind} `{name}`")]
    Dangling { game: String, kind: Kind, name: String },
}

/// Named objects, unique per kind.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub trees: BTreeMap<String, RegularTree>,
    pub parity_games: BTreeMap<String, ParityGame>,
    pub ntas: BTreeMap<String, Nta>,
    pub sdtts: BTreeMap<String, Sdtt>,
    pub atas: BTreeMap<String, Ata>,
    pub games: BTreeMap<String, TreeGame>,
    pub strategies: BTreeMap<String, FiniteMemoryStrategy>,
}

fn put<T>(map: &mut BTreeMap<String, T>, kind: Kind, name: &str, value: T) -> Result<(), WorkspaceError> {
    if map.contains_key(name) {
        return Err(WorkspaceError::Duplicate {
            kind,
            name: name.to_string(),
        });
    }
    map.insert(name.to_string(), value);
    Ok(())
}

fn pick<'a, T>(map: &'a BTreeMap<String, T>, kind: Kind, name: Option<&str>) -> Result<&'a T, WorkspaceError> {
    match name {
        Some(n) => map.get(n).ok_or_else(|| WorkspaceError::Missing {
            kind,
            name: n.to_string(),
        }),
        None => match map.len() {
            0 => Err(WorkspaceError::NoneLoaded(kind)),
            1 => Ok(map.values().next().expect("one entry")),
            _ => Err(WorkspaceError::Ambiguous {
                kind,
                names: map.keys().cloned().collect::<Vec<_>>().join(", "),
            }),
        },
    }
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `src` and adds every block. `file` only labels errors.
    pub fn load(&mut self, file: &str, src: &str) -> Result<(), WorkspaceError> {
        let items = parse(src).map_err(|err| WorkspaceError::Parse {
            file: file.to_string(),
            err,
        })?;
        for item in items {
            self.insert(item)?;
        }
        Ok(())
    }

    pub fn insert(&mut self, item: Item) -> Result<(), WorkspaceError> {
        let kind = item.kind();
        let name = item.name().to_string();
        match item {
            Item::Tree(_, t) => put(&mut self.trees, kind, &name, t),
            Item::Pg(_, g) => put(&mut self.parity_games, kind, &name, g),
            Item::Nta(a) => put(&mut self.ntas, kind, &name, a),
            Item::Sdtt(d) => put(&mut self.sdtts, kind, &name, d),
            Item::Ata(a) => put(&mut self.atas, kind, &name, a),
            Item::Game(g) => put(&mut self.games, kind, &name, g),
            Item::Strategy(s) => put(&mut self.strategies, kind, &name, s),
        }
    }

    /// Checks that every game objective names a loaded automaton.
    pub fn resolve(&self) -> Result<(), WorkspaceError> {
        for g in self.games.values() {
            let dangling = |kind, name: &str| WorkspaceError::Dangling {
                game: g.name().to_string(),
                kind,
                name: name.to_string(),
            };
            match g.objective() {
                Some(Objective::Sdtt(d)) if !self.sdtts.contains_key(d) => return Err(dangling(Kind::Sdtt, d)),
                Some(Objective::Nta { l, col }) => {
                    for n in [l, col] {
                        if !self.ntas.contains_key(n) {
                            return Err(dangling(Kind::Nta, n));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn tree(&self, name: Option<&str>) -> Result<&RegularTree, WorkspaceError> {
        pick(&self.trees, Kind::Tree, name)
    }

    pub fn parity_game(&self, name: Option<&str>) -> Result<&ParityGame, WorkspaceError> {
        pick(&self.parity_games, Kind::Pg, name)
    }

    pub fn nta(&self, name: Option<&str>) -> Result<&Nta, WorkspaceError> {
        pick(&self.ntas, Kind::Nta, name)
    }

    pub fn sdtt(&self, name: Option<&str>) -> Result<&Sdtt, WorkspaceError> {
        pick(&self.sdtts, Kind::Sdtt, name)
    }

    pub fn ata(&self, name: Option<&str>) -> Result<&Ata, WorkspaceError> {
        pick(&self.atas, Kind::Ata, name)
    }

    pub fn game(&self, name: Option<&str>) -> Result<&TreeGame, WorkspaceError> {
        pick(&self.games, Kind::Game, name)
    }

    pub fn strategy(&self, name: Option<&str>) -> Result<&FiniteMemoryStrategy, WorkspaceError> {
        pick(&self.strategies, Kind::Strategy, name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn workspace_rejects_duplicates() {
        let mut ws = Workspace::new();
        ws.insert(Item::Nta(all_nta())).unwrap();
        assert!(matches!(
            ws.insert(Item::Nta(all_nta())),
            Err(WorkspaceError::Duplicate { kind: Kind::Nta, .. })
        ));
        ws.insert(Item::Sdtt(all_sdtt())).unwrap();
    }

    #[test]
    fn workspace_resolves_objectives() {
        let mut ws = Workspace::new();
        let g = fig2_game().with_objective(Objective::Sdtt("all".into()));
        ws.insert(Item::Game(g)).unwrap();
        assert!(matches!(ws.resolve(), Err(WorkspaceError::Dangling { .. })));
        ws.insert(Item::Sdtt(all_sdtt())).unwrap();
        ws.resolve().unwrap();
    }

    #[test]
    fn pick_by_name_or_uniqueness() {
        let mut ws = Workspace::new();
        assert!(matches!(ws.nta(None), Err(WorkspaceError::NoneLoaded(Kind::Nta))));
        ws.insert(Item::Nta(all_nta())).unwrap();
        assert_eq!(ws.nta(None).unwrap().name(), "all");
        ws.insert(Item::Nta(empty_nta())).unwrap();
        assert!(matches!(ws.nta(None), Err(WorkspaceError::Ambiguous { .. })));
        assert_eq!(ws.nta(Some("empty")).unwrap().name(), "empty");
        assert!(matches!(ws.nta(Some("x")), Err(WorkspaceError::Missing { .. })));
    }

    #[test]
    fn parse_errors_name_the_file() {
        let mut ws = Workspace::new();
        let e = ws.load("f.txt", "pg g\npvertex a owner=2 rank=0 succ=a,a\n").unwrap_err();
        assert!(e.to_string().starts_with("f.txt: line 2, column"));
    }
}
