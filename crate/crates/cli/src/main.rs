use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flextile::assembly::DEFAULT_BUDGET;
use flextile::matrix::DEFAULT_ORDER_CAP;
use flextile::reproduce::{reproduce_row, ReproduceOptions, HEADER};
use flextile::search::PruneFlags;
use flextile::*;

/// Exit codes: 0 success or PASS, 1 FAIL, 2 usage error, 3 indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Fail,
    Indeterminate,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Indeterminate => 3,
        })
    }
}

#[derive(Parser)]
#[command(name = "flextile", version, about = "Flexible-tile DNA self-assembly: pots, spectra, complexes, minima")]
struct Cli {
    /// Worker threads for enumeration and search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated pot.
    GenPot {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Print the construction matrix and its solution set.
    Matrix { pot: PathBuf },
    /// Smallest order of any complete complex.
    MinOrder {
        pot: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: usize,
    },
    /// All complexes of an order, up to isomorphism.
    Enumerate {
        pot: PathBuf,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Check a pot against a target under a scenario.
    Verify {
        pot: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        budget: Budget,
    },
    /// Minimum bond and tile types for a target.
    SearchMin {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        max_bonds: Option<usize>,
        #[arg(long)]
        max_tiles: Option<usize>,
        /// Disable the pruning rules (default: on for scenario 3 above order 6).
        #[arg(long, conflicts_with = "prune")]
        no_prune: bool,
        /// Force the pruning rules on.
        #[arg(long)]
        prune: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// The wheel minima table, tab separated.
    Reproduce {
        #[arg(long, default_value_t = 4)]
        from: usize,
        #[arg(long, default_value_t = 8)]
        to: usize,
        /// Largest n searched exhaustively at scenario 3.
        #[arg(long, default_value_t = 6)]
        exhaustive_max: usize,
        /// Largest n searched with pruning at scenario 3.
        #[arg(long, default_value_t = 8)]
        pruned_max: usize,
        /// Largest n searched at scenarios 1 and 2.
        #[arg(long, default_value_t = 9)]
        s12_max: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    WheelS12,
    WheelS3,
    CycleS3,
}

#[derive(Args)]
struct Budget {
    /// Node cap on each matching search tree.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct TargetArgs {
    /// wheel:N, cycle:N, complete:N or a graph file.
    #[arg(long)]
    target: String,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    scenario: u8,
}

impl TargetArgs {
    fn graph(&self) -> Result<Multigraph> {
        parse_target(&self.target)
    }

    fn scenario(&self) -> Scenario {
        Scenario::try_from(self.scenario).expect("range checked by clap")
    }
}

fn parse_target(spec: &str) -> Result<Multigraph> {
    if let Some((family, n)) = spec.split_once(':') {
        let build = match family {
            "wheel" => Some(Multigraph::wheel as fn(usize) -> _),
            "cycle" => Some(Multigraph::cycle as fn(usize) -> _),
            "complete" => Some((|n| Ok(Multigraph::complete(n))) as fn(usize) -> _),
            _ => None,
        };
        if let Some(build) = build {
            let n: usize = n.parse().with_context(|| format!("bad order in `{spec}`"))?;
            return Ok(build(n)?);
        }
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading graph file {spec}"))?;
    text.parse().with_context(|| format!("parsing graph file {spec}"))
}

fn read_pot(path: &PathBuf) -> Result<Pot> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading pot file {}", path.display()))?;
    parse_pot(&text).with_context(|| format!("parsing pot file {}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut String) -> Result<Status> {
    match command {
        Command::GenPot { family, n } => {
            let pot = match family {
                Family::WheelS12 => wheel_pot_s12(n)?,
                Family::WheelS3 => wheel_pot_s3(n)?,
                Family::CycleS3 => cycle_pot_s3(n)?,
            };
            out.push_str(&pot.to_text());
            Ok(Status::Ok)
        }
        Command::Matrix { pot } => matrix(&read_pot(&pot)?, out),
        Command::MinOrder { pot, cap } => {
            let pot = read_pot(&pot)?;
            Ok(match min_order(&pot, cap) {
                MinOrder::Found { order, witness } => {
                    writeln!(out, "min_order={order}")?;
                    writeln!(out, "usage={}", join(&witness))?;
                    Status::Ok
                }
                MinOrder::Unrealizable => {
                    writeln!(out, "unrealizable")?;
                    Status::Ok
                }
                MinOrder::BeyondCap { cap, realizable_at } => {
                    writeln!(out, "beyond cap {cap}; realizable at order {realizable_at}")?;
                    Status::Indeterminate
                }
            })
        }
        Command::Enumerate { pot, order, budget } => {
            let pot = read_pot(&pot)?;
            match realizations_at_order(&pot, order, budget.budget) {
                Ok(set) => {
                    writeln!(out, "classes={}", set.len())?;
                    for class in &set.classes {
                        writeln!(out)?;
                        out.push_str(&class.graph.to_text());
                    }
                    Ok(Status::Ok)
                }
                Err(e) => {
                    writeln!(out, "INDETERMINATE: {e}")?;
                    Ok(Status::Indeterminate)
                }
            }
        }
        Command::Verify { pot, target, budget } => {
            let pot = read_pot(&pot)?;
            let graph = target.graph()?;
            let report = verify_scenario(&pot, &graph, target.scenario(), budget.budget);
            writeln!(out, "{}", report.verdict)?;
            writeln!(out, "scenario={}", report.scenario)?;
            if !report.note.is_empty() {
                writeln!(out, "note: {}", report.note)?;
            }
            if let Some(w) = &report.witness {
                writeln!(out, "\nwitness:")?;
                out.push_str(&w.render(&pot));
            }
            if let Some(c) = &report.counterexample {
                writeln!(out, "\ncounterexample:")?;
                out.push_str(&c.graph().to_text());
                out.push_str(&c.render(&pot));
            }
            Ok(match report.verdict {
                Verdict::Pass => Status::Ok,
                Verdict::Fail => Status::Fail,
                Verdict::Indeterminate => Status::Indeterminate,
            })
        }
        Command::SearchMin {
            target,
            max_bonds,
            max_tiles,
            no_prune,
            prune,
            budget,
        } => {
            let graph = target.graph()?;
            let scenario = target.scenario();
            let mut spec = SearchSpec::new(graph, scenario);
            if let Some(b) = max_bonds {
                spec.max_bonds = b.max(1);
            }
            if let Some(t) = max_tiles {
                spec.max_tiles = t.max(1);
            }
            spec.budget = budget.budget;
            let default_prune = scenario == Scenario::Three && spec.target.order() > 6;
            if prune || (default_prune && !no_prune) {
                spec = spec.with_prune(PruneFlags::all());
            }
            search_min(&spec, out)
        }
        Command::Reproduce {
            from,
            to,
            exhaustive_max,
            pruned_max,
            s12_max,
            budget,
        } => {
            if from < 4 || from > to {
                bail!("range must satisfy 4 <= from <= to");
            }
            let opts = ReproduceOptions {
                search_s12_max: s12_max,
                exhaustive_s3_max: exhaustive_max,
                pruned_s3_max: pruned_max,
                budget: budget.budget,
            };
            writeln!(out, "{HEADER}")?;
            let mut status = Status::Ok;
            for n in from..=to {
                let row = reproduce_row(n, &opts);
                writeln!(out, "{row}")?;
                if row.has_mismatch() {
                    status = Status::Fail;
                } else if !row.is_complete() && status == Status::Ok {
                    status = Status::Indeterminate;
                }
            }
            Ok(status)
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn matrix(pot: &Pot, out: &mut String) -> Result<Status> {
    let m = build_matrix(pot);
    write!(out, "{m}")?;
    match solve(&m) {
        None => writeln!(out, "inconsistent")?,
        Some(sol) => {
            match sol.unique() {
                Some(r) => writeln!(out, "unique r = ({})", join(r))?,
                None => {
                    writeln!(out, "particular r = ({})", join(&sol.particular))?;
                    for v in &sol.nullspace {
                        writeln!(out, "direction ({})", join(v))?;
                    }
                }
            }
            writeln!(out, "admissible={}", sol.admissible)?;
        }
    }
    Ok(Status::Ok)
}

fn search_min(spec: &SearchSpec, out: &mut String) -> Result<Status> {
    let r = search_minima(spec);
    let orders = [("bonds-first", &r.bonds_first), ("tiles-first", &r.tiles_first)];
    for (label, m) in orders {
        match m {
            Some(m) => writeln!(out, "{label}: B={} T={}", m.bonds, m.tiles)?,
            None => writeln!(out, "{label}: none within bounds")?,
        }
    }
    writeln!(out, "exhaustive={}", r.exhaustive)?;
    if r.lemma_conditional {
        writeln!(out, "pruned=true")?;
    }
    for (label, m) in orders {
        if let Some(m) = m {
            writeln!(out, "\n{label} witness:")?;
            out.push_str(&m.pot.to_text());
        }
    }
    Ok(if !r.exhaustive {
        Status::Indeterminate
    } else if r.bonds_first.is_none() {
        Status::Fail
    } else {
        Status::Ok
    })
}
