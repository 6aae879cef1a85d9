//! Argument definitions and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floquet_pacs_core::StateFamily;

use crate::commands::{
    cmd_covariance, cmd_floquet, cmd_verify, cmd_wavefunction, cmd_wigner, verify_configuration, CovarianceFrame,
    CovarianceRequest, GridRequest, OutputFormat, StateFlags,
};
use crate::config::load_configuration;
use crate::error::{CliResult, EXIT_ERROR, EXIT_OK};
use crate::verify::{all_pass, render_table};

#[derive(Debug, Parser)]
#[command(
    name = "floquet-pacs",
    version,
    about = "Floquet-Lyapunov decompositions and photon-added coherent states of driven coupled oscillators"
)]
pub struct Cli {
    /// Also run the invariant suite on the configuration; failures turn the exit status to 1
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Structured,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Structured => OutputFormat::Structured,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Fock,
    Coherent,
    Pacs,
}

impl From<FamilyArg> for StateFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Fock => StateFamily::Fock,
            FamilyArg::Coherent => StateFamily::Coherent,
            FamilyArg::Pacs => StateFamily::Pacs,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FrameArg {
    Quadrature,
    IntegralsOfMotion,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Configuration file (TOML, or JSON with a .json extension)
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub state: FamilyArg,
    /// Coherent amplitudes `re,im[;re,im…]`
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Photon numbers `k[,k…]`
    #[arg(long = "m")]
    pub m: Option<String>,
}

impl StateArgs {
    fn flags(&self) -> StateFlags {
        StateFlags {
            family: Some(self.state.into()),
            alpha: self.alpha.clone(),
            m: self.m.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    /// Time: `1.5`, `0.25T`, `1/3T`, `T/4`
    #[arg(long = "t", allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Free axes `axis=min:max:count[,…]`
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Vec<String>,
    /// Pinned coordinates `axis=value[,…]`
    #[arg(long, allow_hyphen_values = true)]
    pub pin: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monodromy, Floquet exponents, stability verdict and invariant residuals
    Floquet {
        #[command(flatten)]
        io: Io,
        /// Include the sampled FLT over one period
        #[arg(long)]
        samples: bool,
    },
    /// Covariance matrices with Robertson diagnostics at one or more times
    Covariance {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        state: StateArgs,
        /// Times `SPEC[,SPEC…]`; `start:stop:count` expands to a range
        #[arg(long = "t", allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, value_enum, default_value = "quadrature")]
        frame: FrameArg,
        /// Also write the (t, det, gap) series as CSV
        #[arg(long)]
        series: Option<PathBuf>,
    },
    /// Wigner function on a phase-space slice
    Wigner {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        slice: SliceArgs,
    },
    /// Position-space wavefunction on a lattice
    Wavefunction {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        slice: SliceArgs,
    },
    /// Invariant and oracle checks with a residual table
    Verify {
        #[command(flatten)]
        io: Io,
        #[arg(long, hide = true)]
        scale_u: Option<f64>,
    },
}

impl Command {
    fn config(&self) -> &PathBuf {
        match self {
            Command::Floquet { io, .. }
            | Command::Covariance { io, .. }
            | Command::Wigner { io, .. }
            | Command::Wavefunction { io, .. }
            | Command::Verify { io, .. } => &io.config,
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let format = |io: &Io| io.format.map(OutputFormat::from);
    let code = match &cli.command {
        Command::Floquet { io, samples } => cmd_floquet(&io.config, io.out.as_deref(), format(io), *samples)?,
        Command::Covariance {
            io,
            state,
            t,
            frame,
            series,
        } => cmd_covariance(&CovarianceRequest {
            config: &io.config,
            state: &state.flags(),
            times: t.as_deref(),
            frame: match frame {
                FrameArg::Quadrature => CovarianceFrame::Quadrature,
                FrameArg::IntegralsOfMotion => CovarianceFrame::IntegralsOfMotion,
            },
            out: io.out.as_deref(),
            format: format(io),
            series: series.as_deref(),
        })?,
        Command::Wigner { io, state, slice } | Command::Wavefunction { io, state, slice } => {
            let req = GridRequest {
                config: &io.config,
                state: &state.flags(),
                time: slice.t.as_deref(),
                grid: &slice.grid,
                pins: &slice.pin,
                out: io.out.as_deref(),
                format: format(io),
            };
            if matches!(cli.command, Command::Wigner { .. }) {
                cmd_wigner(&req)?
            } else {
                cmd_wavefunction(&req)?
            }
        }
        Command::Verify { io, scale_u } => cmd_verify(&io.config, io.out.as_deref(), format(io), *scale_u)?,
    };
    if code != EXIT_OK || !cli.verify || matches!(cli.command, Command::Verify { .. }) {
        return Ok(code);
    }
    let config = load_configuration(cli.command.config())?;
    match verify_configuration(&config, None)? {
        Ok(checks) => {
            eprint!("{}", render_table(&checks));
            Ok(if all_pass(&checks) { EXIT_OK } else { EXIT_ERROR })
        }
        Err(code) => Ok(code),
    }
}

/// Parses `args` and runs the command, returning the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
