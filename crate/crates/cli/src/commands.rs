use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use onedtouch_core::chunking::{expansion_sequence, Direction};
use onedtouch_core::corpus::{Corpus, ParseSource};
use onedtouch_core::gesture::GestureConfig;
use onedtouch_core::replay::{
    aggregate, load_trial, manifests_in, parse_trace, run_trial, synthesize_trace, to_csv, write_trace, LoadedTrial,
    Policy, TrialMetrics, TrialRecord,
};
use onedtouch_core::session::SessionManager;
use onedtouch_core::text::TokenRange;
use rayon::prelude::*;

use crate::{Cli, Command};

pub fn run(cli: Cli) -> Result<ExitCode> {
    let config = cli.config.gesture_config();
    config.validate().context("invalid configuration")?;
    let endpoint = cli
        .config
        .parse_endpoint
        .clone()
        .map(|url| ParseSource::Endpoint { url, timeout: Duration::from_millis(cli.config.parse_timeout_ms) });

    match cli.command {
        Command::Chunks { text, parse, anchor, direction, k } => {
            chunks(&text, parse.as_deref(), endpoint, anchor, direction, k)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { manifest, trace, events } => replay(&manifest, &trace, events, &config),
        Command::Synth { manifest, policy } => {
            let trial = load(&manifest, &config)?;
            let trace = synthesize_trace(&trial.spec, policy)?;
            print!("{}", write_trace(&trace));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { dir, policy, out_dir } => {
            bench(&dir, policy, out_dir.as_deref(), &config)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { host, port } => {
            serve(std::net::SocketAddr::new(host, port), config, cli.config.mode)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn chunks(
    text: &Path,
    parse: Option<&Path>,
    endpoint: Option<ParseSource>,
    anchor: usize,
    direction: Direction,
    k: usize,
) -> Result<()> {
    let raw = read(text)?;
    let source = match (parse, endpoint) {
        (Some(p), _) => ParseSource::Inline(read(p)?.lines().map(str::to_string).collect()),
        (None, Some(endpoint)) => endpoint,
        (None, None) => {
            log::warn!("no parse given; using the flat tree");
            ParseSource::Fallback
        }
    };
    let (corpus, warning) = Corpus::load(&raw, &source);
    if let Some(warning) = warning {
        log::warn!("parse not used, falling back to the flat tree: {warning}");
    }
    let doc = corpus.doc();
    if anchor >= doc.len() {
        bail!("anchor {anchor} is out of range; the document has {} tokens", doc.len());
    }
    let chunks = expansion_sequence(corpus.tree(), doc, TokenRange::single(anchor), direction, k)?;
    for chunk in chunks {
        println!("{} {:?}", chunk.range, doc.range_text(chunk.range)?);
    }
    Ok(())
}

fn load(manifest: &Path, config: &GestureConfig) -> Result<LoadedTrial> {
    let trial = load_trial(manifest, config)?;
    if let Some(warning) = &trial.warning {
        log::warn!("{}: parse not used, falling back to the flat tree: {warning}", manifest.display());
    }
    Ok(trial)
}

fn replay(manifest: &Path, trace: &Path, events: Option<PathBuf>, config: &GestureConfig) -> Result<ExitCode> {
    let trial = load(manifest, config)?;
    let trace_events = parse_trace(&read(trace)?).with_context(|| format!("in {}", trace.display()))?;
    let outcome = run_trial(&trial.spec, &trace_events)?;

    let events_path = events.unwrap_or_else(|| trace.with_extension("events.jsonl"));
    fs::write(&events_path, outcome.event_log()).with_context(|| format!("cannot write {}", events_path.display()))?;

    let record = TrialRecord { id: trial.id, mode: trial.spec.mode, tag: trial.tag, metrics: outcome.metrics.clone() };
    print!("{}", to_csv(&[record], &[]));
    if outcome.metrics.completed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("trial did not complete");
        Ok(ExitCode::from(2))
    }
}

fn bench(dir: &Path, policy: Policy, out_dir: Option<&Path>, config: &GestureConfig) -> Result<()> {
    let trials = manifests_in(dir)?.iter().map(|p| load(p, config)).collect::<Result<Vec<_>>>()?;
    if let Some(out) = out_dir {
        fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    }
    let records = trials
        .par_iter()
        .map(|trial| -> Result<TrialRecord> {
            let metrics = match synthesize_trace(&trial.spec, policy) {
                Ok(trace) => {
                    let outcome = run_trial(&trial.spec, &trace)?;
                    if let Some(out) = out_dir {
                        fs::write(out.join(format!("{}.trace.jsonl", trial.id)), write_trace(&trace))?;
                        fs::write(out.join(format!("{}.events.jsonl", trial.id)), outcome.event_log())?;
                    }
                    outcome.metrics
                }
                Err(e) => {
                    log::warn!("{}: {e}", trial.id);
                    TrialMetrics { completed: false, completion_ms: None, overshoots: 0, attempts: 0 }
                }
            };
            Ok(TrialRecord { id: trial.id.clone(), mode: trial.spec.mode, tag: trial.tag.clone(), metrics })
        })
        .collect::<Result<Vec<_>>>()?;
    print!("{}", to_csv(&records, &aggregate(&records)));
    Ok(())
}

fn serve(addr: std::net::SocketAddr, config: GestureConfig, mode: onedtouch_core::gesture::Mode) -> Result<()> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async move {
        let listener = onedtouch_service::bind(addr).await.with_context(|| format!("cannot listen on {addr}"))?;
        // Handlers go in before the address is announced, so a client that
        // signals right after seeing it still gets a clean shutdown.
        let shutdown = shutdown_signal()?;
        eprintln!("listening on {}", listener.local_addr()?);
        let manager = Arc::new(SessionManager::new(config).with_default_mode(mode));
        onedtouch_service::serve(listener, manager, async move {
            shutdown.await;
            eprintln!("shutting down");
        })
        .await?;
        Ok(())
    })
}

#[cfg(unix)]
fn shutdown_signal() -> Result<impl std::future::Future<Output = ()>> {
    use tokio::signal::unix::{signal, SignalKind};
    let mut interrupt = signal(SignalKind::interrupt())?;
    let mut terminate = signal(SignalKind::terminate())?;
    Ok(async move {
        tokio::select! {
            _ = interrupt.recv() => {}
            _ = terminate.recv() => {}
        }
    })
}

#[cfg(not(unix))]
fn shutdown_signal() -> Result<impl std::future::Future<Output = ()>> {
    Ok(async {
        let _ = tokio::signal::ctrl_c().await;
    })
}
