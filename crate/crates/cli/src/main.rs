use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Shuffle posets: construction, flag functions, chain labelings, the local
/// symmetric-group action, and multiplicative functions.
#[derive(Parser, Debug)]
#[command(name = "shuffles", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Shorthand for `--format json`
    #[arg(long, global = true)]
    json: bool,

    /// Write the output to a file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone, Copy)]
struct Sizes {
    /// Size M of the lower alphabet a1..aM
    #[arg(long, short = 'm')]
    lower: u16,
    /// Size N of the upper alphabet x1..xN
    #[arg(long, short = 'n')]
    upper: u16,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elements and covers of W(M,N)
    Build(Sizes),
    /// Flag f- and h-vectors and the flag symmetric function
    Flag(Sizes),
    /// Maximal chains with their labels
    Chains {
        #[command(flatten)]
        sizes: Sizes,
        /// Print at most this many chains
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Orbits of the local action on maximal chains
    Orbits(Sizes),
    /// Moebius function from bottom to top
    Mobius(Sizes),
    /// Number of k-step multichains from bottom to top (Moebius powers for k < 0)
    Zeta {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, short, allow_negative_numbers = true)]
        k: i64,
    },
    /// Census of the elements of W(M,N) by type, with the counting formula
    Types(Sizes),
    /// Convolution of two multiplicative functions
    Convolve {
        /// `zeta`, `mu`, `delta`, `random:SEED`, or a path to a JSON table
        #[arg(long)]
        f: String,
        /// Same choices as `--f`
        #[arg(long)]
        g: String,
        /// Truncation `TX,TY` for built-in functions
        #[arg(long, default_value = "8,8")]
        trunc: String,
        /// Also compute each coefficient with at most this many letters directly
        #[arg(long)]
        check: Option<u16>,
    },
    /// Run the acceptance criteria
    Verify {
        /// Only these criteria (repeatable)
        #[arg(long = "criterion", short)]
        criteria: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json { Format::Json } else { cli.format };
    match commands::run(&cli.command, format) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, out.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
                Ok(()) if out.failed => ExitCode::from(1),
                Ok(()) => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
