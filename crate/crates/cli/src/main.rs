use std::process::ExitCode;

use clap::{Parser, Subcommand};

use g2calc_cli::commands;
use g2calc_cli::{render_diagnostic, CliError};

/// Exact exterior calculus on R^n: evaluate expressions, classify
/// Rochesterian/coRochesterian objects, solve contraction equations and
/// replay the verification suite.
#[derive(Parser)]
#[command(name = "g2calc", version)]
struct Cli {
    /// Ambient dimension (1..=9)
    #[arg(long, global = true, default_value_t = 7)]
    dim: usize,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print its canonical rendering
    Eval {
        /// e.g. "contract(e6^e7, starphi0)" or "x4*dx5 + x2*dx3"
        expr: String,
    },
    /// Classify a form or a multivector field against the two structures
    Classify {
        /// form expression to classify
        #[arg(long)]
        form: Option<String>,
        /// multivector expression to classify
        #[arg(long)]
        multivector: Option<String>,
    },
    /// Solve the contraction equation Q ⌟ omega = d(alpha) for Q
    Solve {
        /// structure form: phi0, starphi0 or a JSON file path
        #[arg(long, default_value = "phi0")]
        omega: String,
        /// the form alpha
        alpha: String,
    },
    /// Ranks and kernels of the structure's contraction maps
    StructureInfo {
        /// structure form: phi0, starphi0 or a JSON file path
        #[arg(long, default_value = "phi0")]
        omega: String,
    },
    /// Run the verification suite and report one line per check
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let (source_for_diag, result) = match &cli.command {
        Command::Eval { expr } => (Some(expr.clone()), commands::cmd_eval(cli.dim, expr)),
        Command::Classify { form, multivector } => {
            let src = form.clone().or_else(|| multivector.clone());
            (
                src,
                commands::cmd_classify(cli.dim, form.as_deref(), multivector.as_deref()),
            )
        }
        Command::Solve { omega, alpha } => (
            Some(alpha.clone()),
            commands::cmd_solve(cli.dim, omega, alpha),
        ),
        Command::StructureInfo { omega } => (None, commands::cmd_structure_info(cli.dim, omega)),
        Command::Verify { seed, trials } => {
            let (out, ok) = commands::cmd_verify(*seed, *trials);
            print_output(&out, json);
            return if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok(out) => {
            print_output(&out, json);
            ExitCode::SUCCESS
        }
        Err(err) => {
            report_error(source_for_diag.as_deref(), &err);
            ExitCode::from(2)
        }
    }
}

fn print_output(out: &commands::CommandOutput, json: bool) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = if json {
        writeln!(
            lock,
            "{}",
            serde_json::to_string_pretty(&out.json).expect("serializable")
        )
    } else {
        writeln!(lock, "{}", out.text)
    };
    // a closed pipe downstream is not our error; stop quietly
    if result.is_err() {
        std::process::exit(0);
    }
}

fn report_error(source: Option<&str>, err: &CliError) {
    match (source, err) {
        (Some(src), e @ (CliError::Parse { .. } | CliError::Elab { .. })) => {
            eprintln!("{}", render_diagnostic(src, e));
        }
        (_, e) => eprintln!("error: {e}"),
    }
}
