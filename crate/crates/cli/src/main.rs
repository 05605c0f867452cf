//! `tgames`: solve, check and build tree games from text files.
//!
//! Exit codes: verdicts use 0 and 1 (and 4 for an undetermined `decide`),
//! 2 flags bad input or a failed precondition, 3 a parse error.

mod construct;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use tree_games::automata::{
    ata_membership, nta_emptiness, nta_membership, sdtt_membership, AutomatonError, Nta, Sdtt,
};
use tree_games::game::{
    check_strategy, decide_determinacy, lift_objective, sdtt_check_automaton, solve_game_automaton_objective_with,
    strategy_set_nta, Determinacy, GameError, Objective, TreeGame,
};
use tree_games::parity::{ParitySolver, Player, SolverRegistry};
use tree_games::suite::{Suite, DEFAULT_SEED};
use tree_games::text::{emit_strategy, emit_tree, Workspace, WorkspaceError};

use construct::Constructions;

#[derive(Debug, Parser)]
#[command(name = "tgames", version, about = "Tree games with regular objectives")]
struct Cli {
    /// Input files; may be repeated.
    #[arg(long = "in", global = true, value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Write the produced file here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Strategy enumeration depth for `decide`.
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve a game whose objective is an SDTT.
    Solve {
        #[arg(long)]
        game: Option<String>,
        /// SDTT to use instead of the game's objective.
        #[arg(long)]
        sdtt: Option<String>,
        #[arg(long, default_value = "zielonka")]
        solver: String,
    },
    /// Check whether a finite-memory strategy is winning.
    Check {
        #[arg(long)]
        game: Option<String>,
        #[arg(long)]
        strategy: Option<String>,
        /// NTA of the plays the strategy's owner loses; taken from the
        /// game's objective when omitted.
        #[arg(long)]
        conta: Option<String>,
    },
    /// Search for a winning strategy of bounded depth for either player.
    Decide {
        #[arg(long)]
        game: Option<String>,
        #[arg(long)]
        nta: Option<String>,
        #[arg(long)]
        conta: Option<String>,
    },
    /// Run a construction and emit its result.
    Construct(construct::Args),
    /// Membership of a tree in an automaton's language.
    Member {
        #[arg(long)]
        tree: Option<String>,
        #[arg(long, conflicts_with_all = ["sdtt", "ata"])]
        nta: Option<String>,
        #[arg(long, conflicts_with = "ata")]
        sdtt: Option<String>,
        #[arg(long)]
        ata: Option<String>,
    },
    /// Emptiness of an NTA; prints a witness when nonempty.
    Empty {
        #[arg(long)]
        nta: Option<String>,
    },
    /// Solve a parity game.
    Pgsolve {
        #[arg(long)]
        pg: Option<String>,
        #[arg(long, default_value = "zielonka")]
        solver: String,
    },
    /// Run the seeded acceptance suite.
    Suite,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Game(#[from] GameError),
    #[error("{0}")]
    Automaton(#[from] AutomatonError),
    #[error("cannot read {0}: {1}")]
    Read(PathBuf, std::io::Error),
    #[error("cannot write {0}: {1}")]
    Write(PathBuf, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Workspace(WorkspaceError::Parse { .. }) => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    };
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}

fn load(cli: &Cli) -> Result<Workspace> {
    let mut ws = Workspace::new();
    for path in &cli.inputs {
        let src = fs::read_to_string(path).map_err(|e| CliError::Read(path.clone(), e))?;
        ws.load(&path.display().to_string(), &src)?;
    }
    ws.resolve()?;
    Ok(ws)
}

/// Writes `text` to `--out`, or to stdout.
fn output(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Write(p.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(p: Player) -> u8 {
    p.index() as u8
}

fn run(cli: &Cli) -> Result<u8> {
    let ws = load(cli)?;
    match &cli.cmd {
        Cmd::Solve { game, sdtt, solver } => solve(cli, &ws, game.as_deref(), sdtt.as_deref(), solver),
        Cmd::Check {
            game,
            strategy,
            conta,
        } => check(&ws, game.as_deref(), strategy.as_deref(), conta.as_deref()),
        Cmd::Decide { game, nta, conta } => decide(cli, &ws, game.as_deref(), nta.as_deref(), conta.as_deref()),
        Cmd::Construct(args) => {
            let items = Constructions::default().run(&ws, args)?;
            let text: Vec<String> = items.iter().map(|i| i.emit()).collect();
            output(cli, &text.join("\n"))?;
            Ok(0)
        }
        Cmd::Member { tree, nta, sdtt, ata } => {
            let t = ws.tree(tree.as_deref())?;
            let accepted = if let Some(n) = sdtt {
                sdtt_membership(ws.sdtt(Some(n))?, t)?
            } else if let Some(n) = ata {
                ata_membership(ws.ata(Some(n))?, t)?
            } else {
                nta_membership(ws.nta(nta.as_deref())?, t)?
            };
            println!("member={accepted}");
            Ok(u8::from(!accepted))
        }
        Cmd::Empty { nta } => {
            let a = ws.nta(nta.as_deref())?;
            let e = nta_emptiness(a);
            println!("empty={}", !e.nonempty);
            if let Some(w) = &e.witness {
                output(cli, &emit_tree("witness", w))?;
            }
            Ok(u8::from(e.nonempty))
        }
        Cmd::Pgsolve { pg, solver } => {
            let g = ws.parity_game(pg.as_deref())?;
            let reg = SolverRegistry::default();
            let sol = pick_solver(&reg, solver)?.solve(g);
            for v in 0..g.len() {
                let mv = sol.strategy[v].map_or(String::new(), |d| format!(" move={}", g.name(g.succ(v, d))));
                println!("vertex {} winner={}{mv}", g.name(v), sol.winner_of(v));
            }
            println!("winner={}", sol.winner_of(g.initial()));
            Ok(verdict(sol.winner_of(g.initial())))
        }
        Cmd::Suite => {
            let mut all = true;
            for (r, t) in Suite::default().run_all(cli.seed) {
                println!("{r}");
                eprintln!("criterion {} took {:.3}s", r.id, t.as_secs_f64());
                all &= r.passed;
            }
            Ok(u8::from(!all))
        }
    }
}

fn pick_solver<'a>(reg: &'a SolverRegistry, name: &str) -> Result<&'a dyn ParitySolver> {
    reg.get(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown solver `{name}` (known: {})",
            reg.names().join(", ")
        ))
    })
}

fn sdtt_objective<'a>(ws: &'a Workspace, g: &TreeGame, name: Option<&str>) -> Result<&'a Sdtt> {
    let from_game = match g.objective() {
        Some(Objective::Sdtt(n)) => Some(n.as_str()),
        _ => None,
    };
    match name.or(from_game) {
        Some(n) => Ok(ws.sdtt(Some(n))?),
        None => Err(CliError::Usage(format!("objective of game `{}` is not an SDTT", g.name()))),
    }
}

fn solve(cli: &Cli, ws: &Workspace, game: Option<&str>, sdtt: Option<&str>, solver: &str) -> Result<u8> {
    let g = ws.game(game)?;
    let d = sdtt_objective(ws, g, sdtt)?;
    let reg = SolverRegistry::default();
    let sol = solve_game_automaton_objective_with(g, d, pick_solver(&reg, solver)?)?;
    let b = sdtt_check_automaton(d, sol.winner)?;
    let certified = check_strategy(g, &sol.strategy, &b)?;
    println!("winner={}", sol.winner);
    println!("h_vertices={}", sol.h_size);
    println!("certified={certified}");
    let text = emit_strategy(&sol.strategy);
    match &cli.out {
        Some(_) => output(cli, &text)?,
        None => print!("{text}"),
    }
    Ok(verdict(sol.winner))
}

fn check(ws: &Workspace, game: Option<&str>, strategy: Option<&str>, conta: Option<&str>) -> Result<u8> {
    let g = ws.game(game)?;
    let s = ws.strategy(strategy)?;
    let b = match (conta, g.objective()) {
        (Some(n), _) => lift_objective(ws.nta(Some(n))?, g)?,
        (None, Some(Objective::Sdtt(d))) => sdtt_check_automaton(ws.sdtt(Some(d))?, s.player)?,
        (None, Some(Objective::Nta { l, col })) => {
            let losing = if s.player == Player::Zero { col } else { l };
            lift_objective(ws.nta(Some(losing))?, g)?
        }
        (None, None) => {
            return Err(CliError::Usage(format!(
                "game `{}` has no objective; pass --conta",
                g.name()
            )))
        }
    };
    let winning = match check_strategy(g, s, &b) {
        Ok(w) => w,
        Err(GameError::Strategy(e)) => return Err(CliError::Usage(format!("invalid strategy: {e}"))),
        Err(e) => return Err(e.into()),
    };
    let states = strategy_set_nta(g, &b, s.player)?.num_states();
    println!("winning={winning}");
    println!("bsigma_states={states}");
    Ok(u8::from(!winning))
}

fn nta_pair<'a>(ws: &'a Workspace, g: &TreeGame, l: Option<&str>, col: Option<&str>) -> Result<(&'a Nta, &'a Nta)> {
    let (l, col) = match (l, col, g.objective()) {
        (Some(l), Some(c), _) => (l, c),
        (None, None, Some(Objective::Nta { l, col })) => (l.as_str(), col.as_str()),
        _ => {
            return Err(CliError::Usage(
                "pass both --nta and --conta, or give the game an NTA objective".into(),
            ))
        }
    };
    Ok((ws.nta(Some(l))?, ws.nta(Some(col))?))
}

fn decide(cli: &Cli, ws: &Workspace, game: Option<&str>, l: Option<&str>, col: Option<&str>) -> Result<u8> {
    let g = ws.game(game)?;
    let (l, col) = nta_pair(ws, g, l, col)?;
    let r = decide_determinacy(g, l, col, cli.depth, cli.seed)?;
    let (line, code, strategy) = match &r.result {
        Determinacy::Player0(s) => ("Player0".to_string(), 0, Some(s)),
        Determinacy::Player1(s) => ("Player1".to_string(), 1, Some(s)),
        Determinacy::UndeterminedUpTo(d) => (format!("undetermined-up-to-{d}"), 4, None),
    };
    println!("result={line}");
    println!("candidates={},{}", r.candidates[0], r.candidates[1]);
    println!("checked={}", r.checked);
    if let Some(s) = strategy {
        let text = emit_strategy(s);
        match &cli.out {
            Some(_) => output(cli, &text)?,
            None => print!("{text}"),
        }
    }
    Ok(code)
}
