//! Command-line front end. Every command prints one JSON document on
//! stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 the query was answered "no", 2 bad input,
//! 3 search budget exhausted or internal failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dyncong::arena::ArenaFile;
use dyncong::dynamics::{self, BlindProfile};
use dyncong::graphs::{outcome_players, OutcomeFile, OutcomePath};
use dyncong::metrics::{self, Price};
use dyncong::ne::{self, ValueTable};
use dyncong::oracle::{self, DirectExit};
use dyncong::spe::{self, LambdaTable};
use dyncong::{socopt, Arena, Error, Game};
use serde_json::{json, Value};

pub const BUDGET_VAR: &str = "DYNCONG_NODE_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "dyncong",
    version,
    about = "Solver for dynamic network congestion games"
)]
pub struct Cli {
    /// Output layout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Args, Debug)]
pub struct GameArgs {
    /// Arena description (JSON).
    #[arg(long)]
    pub arena: PathBuf,
    /// Number of players.
    #[arg(long)]
    pub players: usize,
}

#[derive(Args, Debug, Default)]
pub struct Weights {
    /// Per-player weights, comma separated, e.g. `1,-1,0`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["best", "worst"])]
    pub gamma: Option<String>,
    /// All weights 1: the cheapest equilibrium.
    #[arg(long, conflicts_with = "worst")]
    pub best: bool,
    /// All weights -1: the most expensive equilibrium.
    #[arg(long)]
    pub worst: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an arena file and list every violation.
    Validate {
        #[arg(long)]
        arena: PathBuf,
    },
    /// Social optimum, optionally compared against a bound.
    So {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Best-response dynamics over blind strategies.
    BlindNe {
        #[command(flatten)]
        game: GameArgs,
        /// Starting profile; defaults to everyone on a shortest path.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Costs of a blind strategy profile.
    Eval {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Values of the punishment games.
    Values {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Weighted-optimal Nash equilibrium outcome.
    Ne {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        weights: Weights,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<i64>,
    },
    /// Decide whether an outcome is a Nash equilibrium outcome.
    CheckNe {
        #[arg(long)]
        arena: PathBuf,
        #[arg(long)]
        outcome: PathBuf,
        /// Defaults to the number of players in the outcome.
        #[arg(long)]
        players: Option<usize>,
    },
    /// Subgame-perfect equilibria: existence or weighted optimum.
    Spe {
        #[command(flatten)]
        game: GameArgs,
        /// Only decide existence.
        #[arg(long, conflicts_with_all = ["gamma", "best", "worst", "bound"])]
        exists: bool,
        #[command(flatten)]
        weights: Weights,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<i64>,
        /// Write the edge labels to this file.
        #[arg(long)]
        dump_lambda: Option<PathBuf>,
    },
    /// Decide whether an outcome is a subgame-perfect equilibrium outcome.
    CheckSpe {
        #[arg(long)]
        arena: PathBuf,
        #[arg(long)]
        outcome: PathBuf,
        #[arg(long)]
        players: Option<usize>,
        #[arg(long)]
        dump_lambda: Option<PathBuf>,
    },
    /// Price of anarchy: worst equilibrium cost over the optimum.
    Poa {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Price of stability: best equilibrium cost over the optimum.
    Pos {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Exhaustive reference searches, for small games.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Cheapest complete play of at most `max-steps` rounds.
    So {
        #[command(flatten)]
        game: GameArgs,
        /// Defaults to players × states.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Cheapest path for one player against a fixed profile.
    BestResponse {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: PathBuf,
        /// Zero-based player index.
        #[arg(long)]
        player: usize,
        /// Defaults to the profile horizon plus the number of states.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Every Nash equilibrium outcome of at most `max-steps` rounds.
    Ne {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 6)]
        max_steps: usize,
    },
    /// Every subgame-perfect outcome, by backward induction (acyclic arenas).
    Spe {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Build the arena of the partition reduction.
    Partition {
        /// Comma-separated naturals with an even sum.
        #[arg(long)]
        family: String,
        /// Charge 1 instead of 2 for a lone player on a direct exit.
        #[arg(long)]
        unit_exit: bool,
    },
}

/// Failure of one invocation: an exit code plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) | Error::Internal(_) | Error::Overflow => EXIT_ABORT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_ABORT,
        message: message.into(),
    }
}

/// What a command produced: its document and exit code.
pub struct Report {
    pub doc: Value,
    pub code: i32,
}

impl Report {
    fn yes(doc: Value) -> Self {
        Report { doc, code: EXIT_OK }
    }

    fn answer(doc: Value, satisfied: bool) -> Self {
        let code = if satisfied { EXIT_OK } else { EXIT_NO };
        Report { doc, code }
    }
}

/// Parses `1,-1,0` into a weight vector.
pub fn parse_gamma(text: &str) -> Result<Vec<i64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<i64>()
                .map_err(|e| format!("bad weight {t:?}: {e}"))
        })
        .collect()
}

/// Parses `1,1,2` into a family of naturals.
pub fn parse_family(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .map_err(|e| format!("bad member {t:?}: {e}"))
        })
        .collect()
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, doc: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).expect("json serializes");
    fs::write(path, text + "\n").map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_arena(path: &Path) -> Result<Arena, Failure> {
    Ok(dyncong::parse_arena(&read(path)?)?)
}

fn node_budget(env: Option<String>) -> Result<Option<usize>, Failure> {
    match env {
        None => Ok(None),
        Some(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|e| input(format!("{BUDGET_VAR}={v:?}: {e}"))),
    }
}

struct Ctx {
    budget: Option<usize>,
}

impl Ctx {
    fn game(&self, arena: Arena, players: usize) -> Result<Game, Failure> {
        let game = Game::new(arena, players)?;
        Ok(match self.budget {
            Some(b) => game.with_node_budget(b),
            None => game,
        })
    }

    fn load(&self, args: &GameArgs) -> Result<Game, Failure> {
        self.game(load_arena(&args.arena)?, args.players)
    }

    /// Reads an outcome and builds the game with the number of players it
    /// mentions.
    fn load_outcome(
        &self,
        arena: &Path,
        outcome: &Path,
        players: Option<usize>,
    ) -> Result<(Game, OutcomePath), Failure> {
        let arena = load_arena(arena)?;
        let text = read(outcome)?;
        let file: OutcomeFile = serde_json::from_str(&text)
            .map_err(|e| input(format!("{}: {e}", outcome.display())))?;
        let found = outcome_players(&file);
        let n = match (players, found) {
            (Some(p), Some(f)) if p != f => {
                return Err(input(format!(
                    "--players {p} but the outcome has {f} players"
                )))
            }
            (Some(p), _) => p,
            (None, Some(f)) => f,
            (None, None) => return Err(input("outcome is empty; pass --players")),
        };
        let game = self.game(arena, n)?;
        let path = OutcomePath::from_file(&game, &file)?;
        Ok((game, path))
    }
}

fn gamma_of(w: &Weights, players: usize) -> Result<Vec<i64>, Failure> {
    let gamma = match &w.gamma {
        Some(text) => parse_gamma(text).map_err(input)?,
        None if w.worst => vec![-1; players],
        None => vec![1; players],
    };
    if gamma.len() != players {
        return Err(input(format!(
            "{} weights for {players} players",
            gamma.len()
        )));
    }
    Ok(gamma)
}

fn outcome_doc(game: &Game, path: &OutcomePath) -> Result<Value, Failure> {
    Ok(json!({
        "costs": path.costs()?,
        "social": path.social_cost()?,
        "outcome": path.to_json_value(game.arena()),
    }))
}

fn values_doc(game: &Game, table: &ValueTable) -> Value {
    let arena = game.arena();
    let entries: Vec<Value> = table
        .entries()
        .map(|(s, v)| {
            let others: serde_json::Map<String, Value> = arena
                .states()
                .filter(|&q| s.others.count(q) > 0)
                .map(|q| (arena.name(q).to_string(), json!(s.others.count(q))))
                .collect();
            json!({ "me": arena.name(s.me), "others": others, "value": v })
        })
        .collect();
    json!({ "iterations": table.iterations(), "values": entries })
}

fn dump_lambda(game: &Game, table: &LambdaTable, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, &table.to_json_value(game)),
        None => Ok(()),
    }
}

fn price_doc(p: Price) -> Value {
    let decimal = match p {
        Price::Infinite => Value::Null,
        _ => json!(p.to_f64()),
    };
    json!({ "ratio": p, "decimal": decimal })
}

fn validate(arena: &Path) -> Result<Report, Failure> {
    let text = read(arena)?;
    let file: ArenaFile =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", arena.display())))?;
    let violations = dyncong::validate_arena(&file);
    if violations.is_empty() {
        let a = Arena::from_file(&file)?;
        return Ok(Report::yes(json!({
            "valid": true,
            "states": a.num_states(),
            "edges": a.num_edges(),
        })));
    }
    let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
    Ok(Report {
        doc: json!({ "valid": false, "violations": list }),
        code: EXIT_INPUT,
    })
}

fn so(game: &Game, bound: Option<u64>) -> Result<Report, Failure> {
    let best = socopt::social_optimum(game)?;
    if best.witness.social_cost()? != best.cost {
        return Err(internal("optimum witness does not replay to its cost"));
    }
    let mut doc = json!({
        "cost": best.cost,
        "witness": best.witness.to_json_value(game.arena()),
    });
    let satisfied = bound.is_none_or(|b| best.cost <= b);
    if bound.is_some() {
        doc["satisfied"] = json!(satisfied);
    }
    Ok(Report::answer(doc, satisfied))
}

fn blind_ne(game: &Game, start: Option<BlindProfile>) -> Result<Report, Failure> {
    let r = dynamics::blind_ne(game, start)?;
    if !dynamics::is_blind_ne(game, &r.profile)? {
        return Err(internal(
            "best-response dynamics stopped at an unstable profile",
        ));
    }
    let mut doc = r.profile.to_json_value(game.arena());
    doc["costs"] = json!(r.profile.costs(game)?);
    doc["social"] = json!(r.profile.social_cost(game)?);
    doc["potential"] = json!(dynamics::potential(game, &r.profile)?);
    doc["iterations"] = json!(r.iterations);
    Ok(Report::yes(doc))
}

fn eval(game: &Game, profile: &BlindProfile) -> Result<Report, Failure> {
    let path = profile.outcome(game)?;
    let mut doc = outcome_doc(game, &path)?;
    doc["potential"] = json!(dynamics::potential(game, profile)?);
    doc["blind_ne"] = json!(dynamics::is_blind_ne(game, profile)?);
    Ok(Report::yes(doc))
}

fn ne(game: &Game, gamma: Vec<i64>, bound: Option<i64>) -> Result<Report, Failure> {
    let values = ne::compute_values(game)?;
    let best = ne::gamma_min_ne_with(game, &values, &gamma)?;
    if !ne::check_ne_outcome_with(game, &values, &best.witness)? {
        return Err(internal("equilibrium witness fails the equilibrium check"));
    }
    if best.witness.weighted_cost(&gamma)? != best.cost {
        return Err(internal("equilibrium witness does not replay to its cost"));
    }
    let mut doc = json!({
        "gamma": gamma,
        "cost": best.cost,
        "witness": best.witness.to_json_value(game.arena()),
    });
    let satisfied = bound.is_none_or(|b| best.cost <= b);
    if bound.is_some() {
        doc["satisfied"] = json!(satisfied);
    }
    Ok(Report::answer(doc, satisfied))
}

fn check_ne(game: &Game, path: &OutcomePath) -> Result<Report, Failure> {
    let values = ne::compute_values(game)?;
    let violation = ne::first_violation(game, &values, path)?;
    let mut doc = outcome_doc(game, path)?;
    doc["ne"] = json!(violation.is_none());
    if let Some(v) = &violation {
        doc["violation"] = json!({
            "step": v.step,
            "player": v.player,
            "suffix_cost": v.suffix,
            "secured": v.secured,
        });
    }
    Ok(Report::answer(doc, violation.is_none()))
}

fn spe_query(
    game: &Game,
    exists_only: bool,
    weights: &Weights,
    bound: Option<i64>,
    dump: Option<&Path>,
) -> Result<Report, Failure> {
    let table = spe::compute_lambda(game)?;
    dump_lambda(game, &table, dump)?;
    if exists_only {
        let found =
            spe::lambda_consistent_exists(game, &table, &dyncong::Configuration::source(game))?;
        let mut doc = json!({ "exists": found.is_some() });
        if let Some(w) = &found {
            if !spe::check_spe_outcome_with(game, &table, w)? {
                return Err(internal("subgame-perfect witness fails its check"));
            }
            doc["witness"] = w.to_json_value(game.arena());
        }
        let satisfied = found.is_some();
        return Ok(Report::answer(doc, satisfied));
    }
    let gamma = gamma_of(weights, game.players())?;
    let Some(best) = spe::gamma_min_spe_with(game, &table, &gamma)? else {
        let mut doc = json!({ "exists": false, "gamma": gamma });
        if bound.is_some() {
            doc["satisfied"] = json!(false);
        }
        return Ok(Report::answer(doc, false));
    };
    if !spe::check_spe_outcome_with(game, &table, &best.witness)? {
        return Err(internal("subgame-perfect witness fails its check"));
    }
    if best.witness.weighted_cost(&gamma)? != best.cost {
        return Err(internal(
            "subgame-perfect witness does not replay to its cost",
        ));
    }
    let mut doc = json!({
        "exists": true,
        "gamma": gamma,
        "cost": best.cost,
        "witness": best.witness.to_json_value(game.arena()),
    });
    let satisfied = bound.is_none_or(|b| best.cost <= b);
    if bound.is_some() {
        doc["satisfied"] = json!(satisfied);
    }
    Ok(Report::answer(doc, satisfied))
}

fn check_spe(game: &Game, path: &OutcomePath, dump: Option<&Path>) -> Result<Report, Failure> {
    let table = spe::compute_lambda(game)?;
    dump_lambda(game, &table, dump)?;
    let ok = spe::check_spe_outcome_with(game, &table, path)?;
    let mut doc = outcome_doc(game, path)?;
    doc["spe"] = json!(ok);
    Ok(Report::answer(doc, ok))
}

fn price(game: &Game, anarchy: bool) -> Result<Report, Failure> {
    let p = metrics::prices(game)?;
    let values = ne::compute_values(game)?;
    let (eq, cost, ratio, key) = if anarchy {
        (&p.worst, p.worst_cost, p.poa, "poa")
    } else {
        (&p.best, p.best_cost, p.pos, "pos")
    };
    if !ne::check_ne_outcome_with(game, &values, &eq.witness)? || eq.witness.social_cost()? != cost
    {
        return Err(internal("equilibrium witness fails its check"));
    }
    let mut doc = json!({
        "optimum": p.optimum,
        "equilibrium_cost": cost,
        "witness": eq.witness.to_json_value(game.arena()),
    });
    doc[key] = price_doc(ratio);
    Ok(Report::yes(doc))
}

fn oracle_cmd(ctx: &Ctx, cmd: &OracleCommand) -> Result<Report, Failure> {
    match cmd {
        OracleCommand::So { game, max_steps } => {
            let g = ctx.load(game)?;
            let steps = max_steps.unwrap_or(g.players() * g.arena().num_states());
            let cost = oracle::brute_social_optimum(&g, steps)?;
            Ok(Report::answer(
                json!({ "cost": cost, "max_steps": steps }),
                cost.finite().is_some(),
            ))
        }
        OracleCommand::BestResponse {
            game,
            profile,
            player,
            max_len,
        } => {
            let g = ctx.load(game)?;
            let p = dynamics::parse_profile(g.arena(), &read(profile)?)?;
            if *player >= g.players() {
                return Err(input(format!("player {player} out of range")));
            }
            let len = max_len.unwrap_or(p.horizon() + g.arena().num_states());
            let cost = oracle::brute_best_response(&g, &p, *player, len)?;
            Ok(Report::yes(
                json!({ "player": player, "cost": cost, "max_len": len }),
            ))
        }
        OracleCommand::Ne { game, max_steps } => {
            let g = ctx.load(game)?;
            let found = oracle::brute_ne_outcomes(&g, *max_steps)?;
            outcomes_doc(&g, &found)
        }
        OracleCommand::Spe { game } => {
            let g = ctx.load(game)?;
            let found = oracle::brute_spe_outcomes(&g)?;
            outcomes_doc(&g, &found)
        }
        OracleCommand::Partition { family, unit_exit } => {
            let family = parse_family(family).map_err(input)?;
            let exit = if *unit_exit {
                DirectExit::One
            } else {
                DirectExit::Two
            };
            let (arena, n) = oracle::gen_partition_arena_with(&family, exit)?;
            let arena_doc = serde_json::to_value(arena.to_file()).expect("arena serializes");
            Ok(Report::yes(json!({
                "players": n,
                "bound": oracle::partition_bound(&family)?,
                "arena": arena_doc,
            })))
        }
    }
}

fn outcomes_doc(game: &Game, found: &[OutcomePath]) -> Result<Report, Failure> {
    let docs = found
        .iter()
        .map(|p| outcome_doc(game, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report::answer(
        json!({ "count": docs.len(), "outcomes": docs }),
        !docs.is_empty(),
    ))
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, budget: Option<String>) -> Result<Report, Failure> {
    let ctx = Ctx {
        budget: node_budget(budget)?,
    };
    match &cli.command {
        Command::Validate { arena } => validate(arena),
        Command::So { game, bound } => so(&ctx.load(game)?, *bound),
        Command::BlindNe { game, profile } => {
            let g = ctx.load(game)?;
            let start = match profile {
                Some(p) => Some(dynamics::parse_profile(g.arena(), &read(p)?)?),
                None => None,
            };
            blind_ne(&g, start)
        }
        Command::Eval { game, profile } => {
            let g = ctx.load(game)?;
            let p = dynamics::parse_profile(g.arena(), &read(profile)?)?;
            eval(&g, &p)
        }
        Command::Values { game } => {
            let g = ctx.load(game)?;
            let table = ne::compute_values(&g)?;
            Ok(Report::yes(values_doc(&g, &table)))
        }
        Command::Ne {
            game,
            weights,
            bound,
        } => {
            let g = ctx.load(game)?;
            let gamma = gamma_of(weights, g.players())?;
            ne(&g, gamma, *bound)
        }
        Command::CheckNe {
            arena,
            outcome,
            players,
        } => {
            let (g, path) = ctx.load_outcome(arena, outcome, *players)?;
            check_ne(&g, &path)
        }
        Command::Spe {
            game,
            exists,
            weights,
            bound,
            dump_lambda,
        } => spe_query(
            &ctx.load(game)?,
            *exists,
            weights,
            *bound,
            dump_lambda.as_deref(),
        ),
        Command::CheckSpe {
            arena,
            outcome,
            players,
            dump_lambda,
        } => {
            let (g, path) = ctx.load_outcome(arena, outcome, *players)?;
            check_spe(&g, &path, dump_lambda.as_deref())
        }
        Command::Poa { game } => price(&ctx.load(game)?, true),
        Command::Pos { game } => price(&ctx.load(game)?, false),
        Command::Oracle(cmd) => oracle_cmd(&ctx, cmd),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run_with<I, T>(
    args: I,
    budget: Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, budget) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string(&report.doc),
                Format::Pretty => serde_json::to_string_pretty(&report.doc),
            }
            .expect("json serializes");
            let _ = writeln!(out, "{text}");
            report.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
