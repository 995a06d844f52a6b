use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use amink::body::format_vertices;
use amink::lab::shapes::builtin_shape_seeded;
use amink::lab::{run_study, StudyConfig, StudyKind};
use amink::Error;

#[derive(Parser)]
#[command(name = "amink", version, about = "Anisotropic Minkowski content laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an epsilon sweep and write a CSV report.
    Study {
        /// steiner | converge | symmetric | coarea | affine | distbench
        kind: String,
        /// Set E: builtin name, `name:scale`, or vertex file.
        #[arg(long)]
        e_shape: String,
        /// Body C: builtin name, `name:scale`, or vertex file.
        #[arg(long)]
        c_shape: String,
        /// Grid spacing, as a decimal or a fraction such as `1/512`.
        #[arg(long, value_parser = parse_number)]
        h: f64,
        /// Comma-separated, strictly decreasing; defaults to 64h,32h,16h,8h.
        #[arg(long, value_delimiter = ',', value_parser = parse_number)]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write wall_ms as 0 for byte-reproducible CSV.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print the vertices of a builtin shape in vertex-file format.
    Shape {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
            a / b
        }
        None => s.parse().map_err(|_| format!("bad number `{s}`"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number `{s}`"))
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Study {
            kind,
            e_shape,
            c_shape,
            h,
            eps,
            out,
            svg,
            seed,
            no_timing,
        } => kind.parse::<StudyKind>().and_then(|kind| {
            let cfg = StudyConfig {
                kind,
                e_shape,
                c_shape,
                h,
                eps: eps.unwrap_or_else(|| StudyConfig::default_eps(h)),
                out,
                svg,
                seed,
                record_timing: !no_timing,
            };
            let summary = run_study(&cfg)?;
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            Ok(())
        }),
        Command::Shape { name, seed } => builtin_shape_seeded(&name, seed).map(|p| {
            print!("{}", format_vertices(p.vertices()));
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
