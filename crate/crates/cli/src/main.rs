//! `onedtouch`: chunk inspection, trial replay, batch metrics and serving.
//!
//! Machine-readable output goes to stdout, everything else to stderr.
//! Exit codes: 0 success, 1 error (including usage errors), 2 for a replay
//! whose trial did not complete.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use onedtouch_core::chunking::Direction;
use onedtouch_core::gesture::{GestureConfig, Mode};
use onedtouch_core::replay::Policy;

#[derive(Debug, Parser)]
#[command(name = "onedtouch", version, about = "Slide-to-select text selection toolkit")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

/// Engine settings. Values in a trial manifest take precedence.
#[derive(Debug, Args)]
struct ConfigArgs {
    /// Display density in pixels per inch
    #[arg(long, global = true, env = "ONEDTOUCH_PPI", default_value_t = 96.0)]
    ppi: f64,
    /// Slide distance per word, in millimetres
    #[arg(long, global = true, env = "ONEDTOUCH_D_WORD_MM", default_value_t = 1.5)]
    d_word_mm: f64,
    /// Slide distance per chunk, in millimetres
    #[arg(long, global = true, env = "ONEDTOUCH_D_CHUNK_MM", default_value_t = 10.0)]
    d_chunk_mm: f64,
    /// Hold time before a press activates
    #[arg(long, global = true, env = "ONEDTOUCH_LONGPRESS_MS", default_value_t = 500)]
    longpress_ms: u64,
    /// Movement allowed while holding, in millimetres
    #[arg(long, global = true, env = "ONEDTOUCH_SLOP_MM", default_value_t = 1.0)]
    slop_mm: f64,
    /// Expansion unit for new service sessions
    #[arg(long, global = true, env = "ONEDTOUCH_MODE", default_value = "chunk")]
    mode: Mode,
    /// Parser server used when no parse file is given
    #[arg(long, global = true, env = "ONEDTOUCH_PARSE_ENDPOINT")]
    parse_endpoint: Option<String>,
    #[arg(long, global = true, env = "ONEDTOUCH_PARSE_TIMEOUT_MS", default_value_t = 5000)]
    parse_timeout_ms: u64,
}

impl ConfigArgs {
    fn gesture_config(&self) -> GestureConfig {
        GestureConfig {
            ppi: self.ppi,
            d_word_mm: self.d_word_mm,
            d_chunk_mm: self.d_chunk_mm,
            longpress_ms: self.longpress_ms,
            slop_mm: self.slop_mm,
            ..GestureConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the chunks an anchor would expand through
    Chunks {
        /// Plain-text document
        text: PathBuf,
        /// Bracketed parses, one sentence per line
        #[arg(long)]
        parse: Option<PathBuf>,
        /// Token index of the anchor word
        #[arg(long)]
        anchor: usize,
        #[arg(long, value_parser = parse_direction, default_value = "forward")]
        direction: Direction,
        /// Number of chunks to print
        #[arg(short, default_value_t = 3)]
        k: usize,
    },
    /// Replay a trace against a trial manifest and print its metrics as CSV
    Replay {
        manifest: PathBuf,
        trace: PathBuf,
        /// Where to write the event log; defaults to the trace path with
        /// an `.events.jsonl` extension
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Write a synthetic trace for a trial manifest to stdout
    Synth {
        manifest: PathBuf,
        #[arg(long, default_value = "ideal")]
        policy: Policy,
    },
    /// Synthesize and replay every manifest in a directory
    Bench {
        dir: PathBuf,
        #[arg(long, default_value = "ideal")]
        policy: Policy,
        /// Also write each synthetic trace and event log here
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the session service until interrupted
    Serve {
        #[arg(long, env = "ONEDTOUCH_HOST", default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, env = "ONEDTOUCH_PORT", default_value_t = 8080)]
        port: u16,
    },
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    match s.to_ascii_lowercase().as_str() {
        "forward" | "down" | "after" => Ok(Direction::Forward),
        "backward" | "up" | "before" => Ok(Direction::Backward),
        _ => Err(format!("unknown direction {s:?}, expected forward or backward")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
