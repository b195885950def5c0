use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use vesseltrack::pipeline::{
    run_pipeline, trace_segment, ImageMetadata, PipelineConfig, PipelineError, SessionState,
};
use vesseltrack::raster::{load_image, GrayImage, Pixel};

#[derive(Debug, Parser)]
#[command(
    name = "vesseltrack",
    version,
    about = "Vessel centerline and edge analysis for angiograms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every stage and optionally write the stage artifacts.
    Run {
        image: PathBuf,
        /// JSON configuration; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory receiving 01_median.png ... 07_graph.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline, trace between two clicks and print the segment.
    Trace {
        image: PathBuf,
        #[arg(long, value_parser = parse_point)]
        start: Pixel,
        #[arg(long, value_parser = parse_point)]
        end: Pixel,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

/// Parse `x,y` into a pixel.
pub fn parse_point(text: &str) -> Result<Pixel, String> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| format!("expected x,y but got {text:?}"))?;
    let coord = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("{s:?} is not a non-negative integer coordinate"))
    };
    Ok(Pixel::new(coord(x)?, coord(y)?))
}

/// A command failure and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Unusable input: missing file, unreadable image or configuration.
    Input(String),
    /// The pipeline or the trace failed.
    Processing(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Processing(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Processing(m) => m,
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(_) => Failure::Input(e.to_string()),
            other => Failure::Processing(other.to_string()),
        }
    }
}

fn read_image(path: &Path) -> Result<GrayImage, Failure> {
    if !path.exists() {
        return Err(Failure::Input(format!(
            "file not found: {}",
            path.display()
        )));
    }
    load_image(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_config(path: Option<&Path>) -> Result<PipelineConfig, Failure> {
    let Some(path) = path else {
        return Ok(PipelineConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Failure::Input(format!("file not found: {}", path.display()))
        } else {
            Failure::Input(format!("{}: {e}", path.display()))
        }
    })?;
    PipelineConfig::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Execute `command`, returning the JSON document to print.
pub fn execute(command: Command) -> Result<serde_json::Value, Failure> {
    match command {
        Command::Run { image, config, out } => {
            let picture = read_image(&image)?;
            let mut config = read_config(config.as_deref())?;
            if out.is_some() {
                config.output_dir = out;
            }
            let result = run_pipeline(&picture, &config)?;
            Ok(result.summary())
        }
        Command::Trace {
            image,
            start,
            end,
            config,
        } => {
            let picture = read_image(&image)?;
            let config = read_config(config.as_deref())?;
            let metadata = ImageMetadata::load_for(&image).map_err(Failure::Input)?;
            let mut session = SessionState::new(image.display().to_string(), picture, config);
            session.metadata = metadata;
            session.run()?;
            let record = trace_segment(&mut session, start, end)?;
            Ok(serde_json::to_value(record).expect("segment record serializes"))
        }
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| Failure::Processing(format!("cannot start the runtime: {e}")))?;
            runtime
                .block_on(crate::server::serve(addr))
                .map_err(|e| Failure::Input(format!("cannot serve on {addr}: {e}")))?;
            Ok(serde_json::Value::Null)
        }
    }
}
