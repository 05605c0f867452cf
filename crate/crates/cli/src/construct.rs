use tree_games::automata::{dualize_sdtt, game_ata_to_nta, play_language_nta, preimage_hash, sdtt_to_game_ata, GameAutomaton};
use tree_games::game::{game_from_safety_nta_for, matching_pennies_game, reduce_to_parity, reduce_to_parity_full, Objective};
use tree_games::parity::Player;
use tree_games::text::{Item, Workspace};
use tree_games::tree::Context;
use tree_games::Address;

use crate::{CliError, Result};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// One of: lemma1, mp, preimage, dual, to-gameata, to-nta, reduce, playlang.
    pub which: String,
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long)]
    pub nta: Option<String>,
    /// Complement NTA attached to the `mp` game's objective.
    #[arg(long)]
    pub conta: Option<String>,
    #[arg(long)]
    pub sdtt: Option<String>,
    #[arg(long)]
    pub ata: Option<String>,
    /// Player owning the choice vertices of the `lemma1` game.
    #[arg(long, default_value_t = 0)]
    pub owner: u8,
    /// Tree holding the `mp` context.
    #[arg(long)]
    pub context: Option<String>,
    /// Address of the context hole, e.g. `e` or `01`.
    #[arg(long, default_value = "e")]
    pub hole: String,
    /// The four `mp` trees, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub trees: Vec<String>,
    /// Build `reduce` over all positions, not only the reachable ones.
    #[arg(long)]
    pub full: bool,
}

/// A named construction from loaded objects to emitted ones.
pub trait Construction {
    fn name(&self) -> &'static str;
    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>>;
}

pub struct Constructions(Vec<Box<dyn Construction>>);

impl Default for Constructions {
    fn default() -> Self {
        Constructions(vec![
            Box::new(Lemma1),
            Box::new(Mp),
            Box::new(Preimage),
            Box::new(Dual),
            Box::new(ToGameAta),
            Box::new(ToNta),
            Box::new(Reduce),
            Box::new(PlayLang),
        ])
    }
}

impl Constructions {
    pub fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        let c = self.0.iter().find(|c| c.name() == args.which).ok_or_else(|| {
            let names: Vec<&str> = self.0.iter().map(|c| c.name()).collect();
            CliError::Usage(format!("unknown construction `{}` (known: {})", args.which, names.join(", ")))
        })?;
        c.run(ws, args)
    }
}

struct Lemma1;

impl Construction for Lemma1 {
    fn name(&self) -> &'static str {
        "lemma1"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        let owner = Player::from_index(args.owner.into())
            .ok_or_else(|| CliError::Usage(format!("owner must be 0 or 1, not {}", args.owner)))?;
        let g = game_from_safety_nta_for(ws.nta(args.nta.as_deref())?, owner)?;
        Ok(vec![Item::Game(g)])
    }
}

struct Mp;

impl Construction for Mp {
    fn name(&self) -> &'static str {
        "mp"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        if args.trees.len() != 4 {
            return Err(CliError::Usage("mp needs --trees t1,t2,t3,t4".into()));
        }
        let hole: Address = args
            .hole
            .parse()
            .map_err(|_| CliError::Usage(format!("bad hole address `{}`", args.hole)))?;
        let c = Context::cut(ws.tree(args.context.as_deref())?, hole)
            .map_err(|e| CliError::Usage(format!("bad context: {e}")))?;
        let t = [0, 1, 2, 3].map(|i| ws.tree(Some(&args.trees[i])));
        let [t1, t2, t3, t4] = t;
        let l = ws.nta(args.nta.as_deref())?;
        let parts = matching_pennies_game(&c, [t1?, t2?, t3?, t4?], l)?;
        let mut items = Vec::new();
        let mut game = parts.game;
        items.push(Item::Nta(l.clone()));
        if let Some(col) = &args.conta {
            items.push(Item::Nta(ws.nta(Some(col))?.clone()));
            game = game.with_objective(Objective::Nta {
                l: l.name().to_string(),
                col: col.clone(),
            });
        }
        items.insert(0, Item::Game(game));
        items.extend(parts.sigma.into_iter().chain(parts.pi).map(Item::Strategy));
        Ok(items)
    }
}

struct Preimage;

impl Construction for Preimage {
    fn name(&self) -> &'static str {
        "preimage"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        Ok(vec![Item::Nta(preimage_hash(ws.nta(args.nta.as_deref())?)?)])
    }
}

struct Dual;

impl Construction for Dual {
    fn name(&self) -> &'static str {
        "dual"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        Ok(vec![Item::Sdtt(dualize_sdtt(ws.sdtt(args.sdtt.as_deref())?))])
    }
}

struct ToGameAta;

impl Construction for ToGameAta {
    fn name(&self) -> &'static str {
        "to-gameata"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        let a = sdtt_to_game_ata(ws.sdtt(args.sdtt.as_deref())?);
        Ok(vec![Item::Ata(a.ata().clone())])
    }
}

struct ToNta;

impl Construction for ToNta {
    fn name(&self) -> &'static str {
        "to-nta"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        let a = GameAutomaton::new(ws.ata(args.ata.as_deref())?.clone())?;
        Ok(vec![Item::Nta(game_ata_to_nta(&a))])
    }
}

struct Reduce;

impl Construction for Reduce {
    fn name(&self) -> &'static str {
        "reduce"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        let g = ws.game(args.game.as_deref())?;
        let d = crate::sdtt_objective(ws, g, args.sdtt.as_deref())?;
        let r = if args.full {
            reduce_to_parity_full(g, d)?
        } else {
            reduce_to_parity(g, d)?
        };
        Ok(vec![Item::Pg(format!("{}_h", g.name()), r.h)])
    }
}

struct PlayLang;

impl Construction for PlayLang {
    fn name(&self) -> &'static str {
        "playlang"
    }

    fn run(&self, ws: &Workspace, args: &Args) -> Result<Vec<Item>> {
        Ok(vec![Item::Nta(play_language_nta(ws.game(args.game.as_deref())?))])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lists_every_construction() {
        let names: Vec<&str> = Constructions::default().0.iter().map(|c| c.name()).collect();
        assert_eq!(
            names,
            ["lemma1", "mp", "preimage", "dual", "to-gameata", "to-nta", "reduce", "playlang"]
        );
    }
}
