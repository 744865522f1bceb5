mod render;

use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use ontosearch_core::cost;
use ontosearch_core::SearchEngine;
use ontosearch_service::{ServeError, Server, ServiceConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID_KB: u8 = 2;
const EXIT_QUERY: u8 = 3;

/// Ontology-based search over an RDF knowledge base.
#[derive(Parser)]
#[command(name = "ontosearch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a knowledge base and report its size or every validation error.
    Validate { kb_dir: PathBuf },
    /// Answer one query.
    Query {
        kb_dir: PathBuf,
        query: String,
        /// Print the answer as JSON, in the same shape as the HTTP API.
        #[arg(long)]
        json: bool,
    },
    /// Answer queries read line by line from standard input.
    Repl {
        kb_dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print search-cost curves as CSV.
    Perf {
        #[arg(long, default_value_t = 50.0)]
        r: f64,
        #[arg(long, default_value_t = 10.0)]
        n_min: f64,
        #[arg(long, default_value_t = 1e6)]
        n_max: f64,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Serve the JSON API.
    Serve {
        kb_dir: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        /// Directory of static files served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Validate { kb_dir } => Ok(match load(&kb_dir) {
            Ok(engine) => {
                println!("{}: {}", kb_dir.display(), render::summary(&engine));
                0
            }
            Err(code) => code,
        }),
        Command::Query {
            kb_dir,
            query,
            json,
        } => {
            let engine = match load(&kb_dir) {
                Ok(e) => e,
                Err(code) => return Ok(code),
            };
            let mut out = io::stdout().lock();
            Ok(if answer(&engine, &query, json, &mut out)? {
                0
            } else {
                EXIT_QUERY
            })
        }
        Command::Repl { kb_dir, json } => {
            let engine = match load(&kb_dir) {
                Ok(e) => e,
                Err(code) => return Ok(code),
            };
            repl(&engine, json)?;
            Ok(0)
        }
        Command::Perf {
            r,
            n_min,
            n_max,
            steps,
        } => {
            let rows = match cost::emit_curves(n_min, n_max, steps, r) {
                Ok(rows) => rows,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(EXIT_USAGE);
                }
            };
            cost::write_csv(&rows, io::stdout().lock()).context("writing csv")?;
            Ok(0)
        }
        Command::Serve {
            kb_dir,
            bind,
            static_dir,
        } => serve(ServiceConfig {
            kb_dir,
            bind_address: bind,
            static_dir,
        }),
    }
}

fn load(kb_dir: &PathBuf) -> Result<SearchEngine, u8> {
    SearchEngine::load(kb_dir).map_err(|e| {
        eprintln!("{}: invalid knowledge base", kb_dir.display());
        for line in e.to_string().lines() {
            eprintln!("  {line}");
        }
        EXIT_INVALID_KB
    })
}

/// Prints the answer to `out` or the error to stderr; returns whether the
/// query succeeded.
fn answer(
    engine: &SearchEngine,
    query: &str,
    json: bool,
    out: &mut impl Write,
) -> anyhow::Result<bool> {
    let extraction = engine.extract(query);
    match engine.resolve(&extraction) {
        Ok(answer) => {
            if json {
                let resp = ontosearch_core::query::QueryResponse::new(query, &extraction, &answer);
                serde_json::to_writer(&mut *out, &resp)?;
                writeln!(out)?;
            } else {
                render::answer(&answer, out)?;
            }
            Ok(true)
        }
        Err(e) => {
            if json {
                eprintln!("{}", render::error_json(&e));
            } else {
                eprintln!("error: {e}");
            }
            Ok(false)
        }
    }
}

fn repl(engine: &SearchEngine, json: bool) -> anyhow::Result<()> {
    let interactive = io::stdin().is_terminal();
    let mut out = io::stdout().lock();
    let mut lines = io::stdin().lock().lines();
    loop {
        if interactive {
            write!(out, "> ")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { break };
        let line = line.context("reading standard input")?;
        let q = line.trim();
        if q.is_empty() {
            continue;
        }
        if q == "quit" || q == "exit" {
            break;
        }
        answer(engine, q, json, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn serve(config: ServiceConfig) -> anyhow::Result<u8> {
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
    runtime.block_on(async {
        let server = match Server::bind(&config).await {
            Ok(s) => s,
            Err(e @ ServeError::Load { .. }) => {
                eprintln!("error: {e}");
                return Ok(EXIT_INVALID_KB);
            }
            Err(e) => return Err(e.into()),
        };
        println!("listening on http://{}", server.local_addr()?);
        io::stdout().flush()?;
        server.run().await?;
        Ok(0)
    })
}
