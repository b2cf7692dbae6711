use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use proptrace::diagnosis::{diagnose, strategy_at};
use proptrace::rules::catalog;
use proptrace::strategy::{model_solution, select_strategy, StrategyName};
use proptrace::parse_eqset;
use proptrace_service::batch::batch_eval;
use proptrace_service::record::StepRecord;
use proptrace_service::{http, synthetic, Service};

#[derive(Parser)]
#[command(name = "reasoner", version, about = "Diagnoses stepwise solutions of quadratic equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Linear,
    Sqrt,
    Factor,
    QuadraticFormula,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_lookahead: usize,
    },
    /// Print the model solution of an equation.
    Solve {
        #[arg(allow_hyphen_values = true)]
        equation: String,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Diagnose one step, printed as JSON.
    Diagnose {
        #[arg(long, allow_hyphen_values = true)]
        task: String,
        /// Defaults to the task.
        #[arg(long, allow_hyphen_values = true)]
        prev: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long, default_value_t = 5)]
        max_lookahead: usize,
    },
    /// Replay a JSONL step log and report class counts and timings.
    Batch {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_lookahead: usize,
        /// Also write the report as JSON here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Rule catalog.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Print the bundled synthetic log.
    #[command(hide = true)]
    Synth,
}

#[derive(Subcommand)]
enum RulesCommand {
    List,
}

fn solve(equation: &str, strategy: StrategyArg) -> Result<()> {
    let task = parse_eqset(equation)?;
    let name = match strategy {
        StrategyArg::Auto => select_strategy(&task)?,
        StrategyArg::Linear => StrategyName::Linear,
        StrategyArg::Sqrt => StrategyName::Sqrt,
        StrategyArg::Factor => StrategyName::Factor,
        StrategyArg::QuadraticFormula => StrategyName::QuadraticFormula,
    };
    let m = model_solution(&task, &name.strategy()).with_context(|| format!("strategy {name}"))?;
    println!("strategy: {name}");
    println!("0. {}", m.states[0]);
    for (k, ((rule, _), state)) in m.rules.iter().zip(&m.states[1..]).enumerate() {
        println!("{}. {state}    [{}]", k + 1, rule.name());
    }
    Ok(())
}

fn diagnose_one(task: &str, prev: Option<&str>, input: &str, k: usize) -> Result<()> {
    let task = parse_eqset(task).context("task")?;
    let prev = match prev {
        Some(p) => parse_eqset(p).context("prev")?,
        None => task.clone(),
    };
    let input = parse_eqset(input).context("input")?;
    let st = select_strategy(&task)?.strategy();
    let (from, residual) = strategy_at(&task, &st, &prev, k.max(6))?.unwrap_or((prev, st));
    let d = diagnose(&from, &input, &residual, &task, k)?;
    println!("{}", serde_json::to_string_pretty(&StepRecord::from(&d))?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Serve { port, data_dir, max_lookahead } => {
            let svc = Arc::new(Service::open(&data_dir, max_lookahead)?);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                eprintln!("listening on {}", listener.local_addr()?);
                axum::serve(listener, http::router(svc))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await?;
                Ok::<_, anyhow::Error>(())
            })?;
        }
        Command::Solve { equation, strategy } => solve(&equation, strategy)?,
        Command::Diagnose { task, prev, input, max_lookahead } => {
            diagnose_one(&task, prev.as_deref(), &input, max_lookahead)?
        }
        Command::Batch { file, max_lookahead, summary } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let report = batch_eval(&text, max_lookahead);
            print!("{}", report.render());
            if let Some(path) = summary {
                std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Rules { command: RulesCommand::List } => {
            for rule in catalog() {
                let minor = if rule.minor { " (minor)" } else { "" };
                println!("{}{minor}\n    {}", rule.id.name(), rule.description);
            }
        }
        Command::Synth => print!("{}", synthetic::log_text()),
    }
    Ok(())
}

