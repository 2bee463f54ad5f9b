//! `bpcc`: replay an edge stream through the connectivity structure and
//! report per-batch throughput and component counts.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 malformed stream or
//! generator spec, 3 oracle mismatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bpcc::bench::{
    component_curve, median_of_trials, replay, write_curve_csv, write_rows_csv, Mode, ReplayError, ReplayOptions,
    RunReport, StreamError, StreamFile,
};
use bpcc::generate::StreamSpec;
use clap::{ArgGroup, Parser};

#[derive(Debug, Parser)]
#[command(name = "bpcc", version, about = "Bulk-parallel incremental connectivity benchmark")]
#[command(group(ArgGroup::new("source").required(true).args(["input", "generate"])))]
struct Args {
    /// Stream file to replay (binary or text layout).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Generate a stream instead, e.g. `rmat:n=2^20,m=8e6,seed=1`.
    #[arg(long, value_name = "FAMILY:n=..,m=..,seed=..")]
    generate: Option<String>,

    /// Edges per update batch for generated streams.
    #[arg(long, default_value_t = 100_000, value_name = "N")]
    batch_size: usize,

    /// Query pairs after each generated update batch.
    #[arg(long, default_value_t = 0, value_name = "N")]
    queries_per_batch: usize,

    /// simple, work-efficient, seq-uf or seq-uf-pc.
    #[arg(long, default_value = "simple", value_name = "M")]
    mode: Mode,

    /// Worker threads (0 = all available).
    #[arg(long, default_value_t = 0, value_name = "T")]
    threads: usize,

    /// Repetitions; per-batch times are the median across them.
    #[arg(long, default_value_t = 3, value_name = "K", value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,

    /// Check every answer and the final partition against a sequential oracle.
    #[arg(long)]
    check_oracle: bool,

    /// Per-batch CSV report.
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,

    /// Component-count curve CSV.
    #[arg(long, value_name = "CSV")]
    components_out: Option<PathBuf>,

    /// Save the replayed stream.
    #[arg(long, value_name = "PATH")]
    write_stream: Option<PathBuf>,

    /// Save the stream in the text layout instead of binary.
    #[arg(long, requires = "write_stream")]
    text: bool,
}

enum Failure {
    Usage(String),
    Parse(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<StreamError> for Failure {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<ReplayError> for Failure {
    fn from(e: ReplayError) -> Self {
        match e {
            ReplayError::ThreadPool(_) => Failure::Usage(e.to_string()),
            _ => Failure::Mismatch(e.to_string()),
        }
    }
}

fn io_failure(path: &std::path::Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Usage(format!("{}: {e}", path.display()))
}

fn create(path: &std::path::Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(io_failure(path))
}

fn load(args: &Args) -> Result<StreamFile, Failure> {
    if let Some(path) = &args.input {
        return StreamFile::load(path).map_err(|e| match e {
            StreamError::Io(io) => io_failure(path)(io),
            other => Failure::Parse(format!("{}: {other}", path.display())),
        });
    }
    let text = args.generate.as_deref().expect("clap requires a source");
    let spec = StreamSpec::parse(text, args.batch_size).map_err(|e| Failure::Parse(e.to_string()))?;
    Ok(StreamFile::from_generator(
        &spec,
        args.queries_per_batch,
        spec.seed ^ 0x5EED,
    )?)
}

fn print_summary(report: &RunReport, trials: u32) {
    let s = &report.summary;
    println!("mode                {}", report.mode);
    println!("threads             {}", report.threads);
    println!("trials              {trials}");
    println!("vertices            {}", report.n);
    println!("batches             {}", report.rows.len());
    println!("update edges        {}", s.update_edges);
    println!("update seconds      {:.6}", s.update_seconds);
    println!("update edges/s      {:.1}", s.update_throughput);
    println!("queries             {}", s.queries);
    println!("query seconds       {:.6}", s.query_seconds);
    println!("queries/s           {:.1}", s.query_throughput);
    println!("final components    {}", s.final_components);
}

fn run(args: Args) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure threads: {e}")))?;

    let stream = load(&args)?;
    if let Some(path) = &args.write_stream {
        let mut w = create(path)?;
        if args.text {
            stream.write_text(&mut w)
        } else {
            stream.write_binary(&mut w)
        }
        .and_then(|()| w.flush())
        .map_err(io_failure(path))?;
    }

    let options = ReplayOptions {
        mode: args.mode,
        threads: 0,
        check_oracle: args.check_oracle,
    };
    let runs = (0..args.trials)
        .map(|_| replay(&stream, options))
        .collect::<Result<Vec<_>, _>>()?;
    let report = median_of_trials(&runs).map_err(|e| Failure::Mismatch(e.to_string()))?;

    if let Some(path) = &args.out {
        write_rows_csv(&report, create(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.components_out {
        write_curve_csv(&component_curve(&report), create(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    print_summary(&report, args.trials);
    if args.check_oracle {
        println!("oracle              ok");
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("bpcc: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
