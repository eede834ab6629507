use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use regcurve_cli::{
    cmd_homotopy, cmd_r, cmd_reduce, cmd_render, cmd_verify, CliError, CmdResult, CurveSource,
    HomotopyOptions, ReduceOptions, RenderConfig, RenderSource, DEFAULT_SAMPLES,
};

/// Turning numbers, turn codes and regular homotopies of closed plane curves.
#[derive(Parser)]
#[command(name = "regcurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A curve given as a positional argument, `--expr` or `--file`.
#[derive(Args)]
struct InputArgs {
    /// `gamma:K`, `gamma0prime`, a curve file or a curve expression
    input: Option<String>,
    #[arg(long)]
    expr: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// Samples for expressions and canonical curves
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    n: usize,
}

impl InputArgs {
    fn arg(&self) -> Result<String, CliError> {
        let given: Vec<String> = [
            self.input.clone(),
            self.expr.clone(),
            self.file.as_ref().map(|p| p.display().to_string()),
        ]
        .into_iter()
        .flatten()
        .collect();
        match given.as_slice() {
            [one] => Ok(one.clone()),
            [] => Err(CliError::new(2, "no input curve: pass a curve, --expr or --file")),
            _ => Err(CliError::new(2, "give exactly one of the input, --expr and --file")),
        }
    }

    fn source(&self) -> Result<CurveSource, CliError> {
        if let Some(e) = &self.expr {
            if self.input.is_none() && self.file.is_none() {
                return Ok(CurveSource::Expr(e.clone()));
            }
        }
        CurveSource::parse(&self.arg()?)
    }
}

#[derive(Args)]
struct RenderArgs {
    /// Most frames drawn from a path
    #[arg(long, default_value_t = 16)]
    frames: usize,
    #[arg(long, default_value_t = 160)]
    frame_size: u32,
    #[arg(long, default_value_t = 1.5)]
    stroke_width: f64,
    #[arg(long, default_value_t = 8)]
    per_row: u32,
    /// Leave out the velocity ticks
    #[arg(long)]
    no_arrows: bool,
}

impl RenderArgs {
    fn config(&self) -> RenderConfig {
        RenderConfig {
            frame_size: self.frame_size,
            stroke_width: self.stroke_width,
            frames_per_row: self.per_row,
            arrow_marks: !self.no_arrows,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the turning number
    R {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reduce the turn code to a canonical curve
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Angle of the direction in radians instead of a random one
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<f64>,
        /// Write the reduction trace (JSON lines) here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize a verified homotopy between two curves
    Homotopy {
        a: String,
        b: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        n: usize,
        /// Path JSON; the SVG strip is written next to it
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check a homotopy path file
    Verify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Draw a curve or a path as SVG
    Render {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
    },
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::R { input, json } => cmd_r(&input.source()?, input.n, json),
        Command::Reduce {
            input,
            seed,
            direction,
            out,
            json,
        } => cmd_reduce(
            &input.source()?,
            input.n,
            &ReduceOptions {
                seed,
                direction,
                trace_out: out,
                json,
            },
        ),
        Command::Homotopy {
            a,
            b,
            n,
            out,
            render,
            json,
        } => cmd_homotopy(
            &CurveSource::parse(&a)?,
            &CurveSource::parse(&b)?,
            n,
            &HomotopyOptions {
                out,
                max_frames: render.frames,
                render: render.config(),
                json,
            },
        ),
        Command::Verify { path, json } => cmd_verify(&path, json),
        Command::Render { input, out, render } => {
            let source = match input.source()? {
                CurveSource::File(p) => RenderSource::parse(&p.display().to_string())?,
                other => RenderSource::Curve(other),
            };
            cmd_render(&source, input.n, &out, render.frames, &render.config())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            // class mismatch prints the two numbers on stdout
            if e.code == regcurve_cli::EXIT_CLASS_MISMATCH {
                println!("{}", e.message);
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        super::Cli::command().debug_assert();
    }
}
