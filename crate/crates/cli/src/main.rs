//! `seedforge`: serve the workbench API, run one-shot expansions, and check
//! resource files.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or resource error.

use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use seedforge_core::{
    CategoryIndex, EmbeddingStore, Error as CoreError, ExpansionRequest, SessionStore,
};
use seedforge_service::{Backend, ModelRegistry, Workbench};

#[derive(Parser)]
#[command(name = "seedforge", version, about = "Entity dictionary workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API with the given expansion models.
    Serve(ServeArgs),
    /// Print the top-k expansion candidates for a seed file.
    Expand(ExpandArgs),
    /// Load a resource file and report what it contains.
    Validate(ValidateArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("resources").required(true).multiple(true).args(["embeddings", "kb"]))]
struct ServeArgs {
    /// GloVe-style vector file (optionally .gz); registered as `emb:<stem>`.
    #[arg(long, num_args = 1.., env = "SEEDFORGE_EMBEDDINGS", value_delimiter = ',')]
    embeddings: Vec<PathBuf>,
    /// Tab-separated `entity<TAB>category` file; registered as `cat:<stem>`.
    #[arg(long, num_args = 1.., env = "SEEDFORGE_KB", value_delimiter = ',')]
    kb: Vec<PathBuf>,
    #[arg(long, env = "SEEDFORGE_HOST", default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// 0 picks a free port; the bound address is printed on startup.
    #[arg(long, env = "SEEDFORGE_PORT", default_value_t = 8080)]
    port: u16,
    /// Directory holding one JSON file per session.
    #[arg(long, env = "SEEDFORGE_DATA_DIR", default_value = "seedforge-data")]
    data_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, env = "SEEDFORGE_EMBEDDINGS")]
    embeddings: PathBuf,
    /// One seed entity per line; `-` reads standard input.
    #[arg(long)]
    seeds: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("resource").required(true).args(["embeddings", "kb"]))]
struct ValidateArgs {
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    kb: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Resource(String),
}

impl Failure {
    fn resource(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure::Resource(format!("{}: {err}", path.display()))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Serve(args) => serve(args),
        Command::Expand(args) => expand(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `emb:glove.6B.50d` for `glove.6B.50d.txt.gz`.
fn model_id(prefix: &str, path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy())
        .unwrap_or_default();
    let name = name.strip_suffix(".gz").unwrap_or(&name);
    let stem = Path::new(name)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    format!("{prefix}:{stem}")
}

fn load_embeddings(path: &Path) -> Result<EmbeddingStore, Failure> {
    let (store, report) = EmbeddingStore::load(path).map_err(|e| Failure::resource(path, e))?;
    if report.skipped() > 0 {
        tracing::warn!(
            path = %path.display(),
            malformed = report.skipped_malformed,
            zero_norm = report.skipped_zero_norm,
            duplicate = report.skipped_duplicate,
            "skipped lines while loading embeddings"
        );
    }
    Ok(store)
}

fn serve(args: ServeArgs) -> CmdResult {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("SEEDFORGE_LOG")
                .unwrap_or_else(|_| "info".into()),
        )
        .with_writer(io::stderr)
        .init();

    let mut registry = ModelRegistry::new();
    for path in &args.embeddings {
        let store = load_embeddings(path)?;
        let id = model_id("emb", path);
        tracing::info!(%id, vocab = store.len(), dimension = store.dimension(), "loaded embeddings");
        registry
            .register(id, Backend::Embedding(Arc::new(store)))
            .map_err(|e| Failure::resource(path, e))?;
    }
    for path in &args.kb {
        let index = CategoryIndex::load(path).map_err(|e| Failure::resource(path, e))?;
        let id = model_id("cat", path);
        tracing::info!(%id, pairs = index.pair_count(), "loaded knowledge base");
        registry
            .register(id, Backend::Category(Arc::new(index)))
            .map_err(|e| Failure::resource(path, e))?;
    }
    let store =
        SessionStore::open(&args.data_dir).map_err(|e| Failure::resource(&args.data_dir, e))?;
    let workbench = Arc::new(Workbench::new(registry, store));

    let runtime = tokio::runtime::Runtime::new()
        .map_err(|e| Failure::Resource(format!("cannot start runtime: {e}")))?;
    runtime.block_on(async move {
        let addr = SocketAddr::new(args.host, args.port);
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::Resource(format!("cannot bind {addr}: {e}")))?;
        let local = listener
            .local_addr()
            .map_err(|e| Failure::Resource(e.to_string()))?;
        println!("listening=http://{local}");
        let _ = io::stdout().flush();
        seedforge_service::serve(listener, workbench, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Failure::Resource(format!("server error: {e}")))
    })
}

fn read_seeds(path: &Path) -> Result<Vec<String>, Failure> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Failure::resource(path, e))?;
    let seeds: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect();
    if seeds.is_empty() {
        return Err(Failure::resource(path, "no seed entities"));
    }
    Ok(seeds)
}

fn expand(args: ExpandArgs) -> CmdResult {
    let seeds = read_seeds(&args.seeds)?;
    let store = load_embeddings(&args.embeddings)?;
    let model = model_id("emb", &args.embeddings);
    let request = ExpansionRequest::new(seeds.clone(), seeds, args.k as usize)
        .map_err(|e| Failure::Resource(e.to_string()))?;
    let candidates = match store.expand(&request, &model) {
        Ok(c) => c,
        Err(e @ CoreError::NoResolvableSeed) => {
            return Err(Failure::Domain(format!("no_resolvable_seed: {e}")))
        }
        Err(e) => return Err(Failure::resource(&args.embeddings, e)),
    };

    let stdout = io::stdout().lock();
    let written = match args.format {
        OutputFormat::Csv => {
            let mut out = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(stdout);
            out.write_record(["surface", "score", "origin", "model"])
                .and_then(|()| {
                    candidates.iter().try_for_each(|c| {
                        out.write_record([
                            &c.surface,
                            &format!("{:.6}", c.score),
                            &c.origin,
                            &c.model,
                        ])
                    })
                })
                .map_err(io::Error::from)
                .and_then(|()| out.flush())
        }
        OutputFormat::Json => {
            let mut out = stdout;
            serde_json::to_writer(&mut out, &serde_json::json!({ "candidates": candidates }))
                .map_err(io::Error::from)
                .and_then(|()| writeln!(out))
        }
    };
    written.map_err(|e| Failure::Resource(format!("cannot write output: {e}")))
}

fn validate(args: ValidateArgs) -> CmdResult {
    if let Some(path) = args.embeddings {
        let (store, report) = match EmbeddingStore::load(&path) {
            Ok(loaded) => loaded,
            Err(CoreError::Io(e)) if e.kind() == io::ErrorKind::NotFound => {
                return Err(Failure::resource(&path, e))
            }
            Err(e) => return Err(Failure::Domain(format!("{}: {e}", path.display()))),
        };
        if let Some((line, reason)) = &report.first_malformed {
            return Err(Failure::Domain(format!(
                "{}: line {line}: {reason} ({} malformed lines)",
                path.display(),
                report.skipped_malformed
            )));
        }
        println!("kind=embedding");
        println!("model={}", model_id("emb", &path));
        println!("vocabulary={}", store.len());
        println!("dimension={}", store.dimension());
        println!("lines={}", report.lines);
        println!("skipped={}", report.skipped());
        println!("skipped_zero_norm={}", report.skipped_zero_norm);
        println!("skipped_duplicate={}", report.skipped_duplicate);
    } else if let Some(path) = args.kb {
        let index = match CategoryIndex::load(&path) {
            Ok(index) => index,
            Err(CoreError::Io(e)) if e.kind() == io::ErrorKind::NotFound => {
                return Err(Failure::resource(&path, e))
            }
            Err(e) => return Err(Failure::Domain(format!("{}: {e}", path.display()))),
        };
        println!("kind=category");
        println!("model={}", model_id("cat", &path));
        println!("pairs={}", index.pair_count());
        println!("entities={}", index.entity_count());
        println!("categories={}", index.category_count());
    }
    Ok(())
}
