use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use legsurg::{cmd_classify, cmd_examples, cmd_invariants, cmd_knots, cmd_snf, Format, Input, Output};
use legsurg_core::classify::RuleId;

/// Legendrian front invariants, contact (+/-1)-surgery and classification.
///
/// Exit codes for `classify`: 0 inconclusive or Stein fillable,
/// 10 c+ vanishes, 11 c vanishes, 12 overtwisted, 3 internal
/// inconsistency, 2 bad input. `examples` exits 1 on a mismatch.
#[derive(Parser)]
#[command(name = "legsurg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Presentation file (or bare front word, for `invariants`).
    file: Option<PathBuf>,
    /// Use a bundled fixture instead of a file.
    #[arg(long, conflicts_with = "file")]
    fixture: Option<String>,
    /// Read fixtures from this directory instead of the bundled set.
    #[arg(long)]
    fixtures_dir: Option<PathBuf>,
}

impl Source {
    fn input(self) -> Result<Input, String> {
        match (self.file, self.fixture) {
            (Some(f), None) => Ok(Input::File(f)),
            (None, Some(name)) => Ok(Input::Fixture { name, dir: self.fixtures_dir }),
            _ => Err("give a file or --fixture NAME".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// tb, rot, writhe and cusps of each component, and linking numbers.
    Invariants {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run every rule on a presentation and report the verdict.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Knot table file replacing the bundled table.
        #[arg(long, env = legsurg::table_file::TABLE_ENV)]
        knot_table: Option<PathBuf>,
        /// Skip a rule (repeatable).
        #[arg(long, value_parser = parse_rule)]
        disable: Vec<RuleId>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Replay the fixtures and compare with the recorded outcomes.
    Examples {
        /// Only this fixture.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
        #[arg(long, env = legsurg::table_file::TABLE_ENV)]
        knot_table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Smith normal form of an integer matrix (file, or `-` for stdin).
    Snf {
        file: PathBuf,
        /// Also report the order of this class in the cokernel, e.g. `1,0,2`.
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print the knot table in use.
    Knots {
        #[arg(long, env = legsurg::table_file::TABLE_ENV)]
        knot_table: Option<PathBuf>,
    },
}

fn parse_rule(s: &str) -> Result<RuleId, String> {
    RuleId::parse(s).ok_or_else(|| {
        let names: Vec<&str> = RuleId::ALL.iter().map(|r| r.name()).collect();
        format!("unknown rule `{s}`; rules are {}", names.join(", "))
    })
}

fn run(cmd: Command) -> Output {
    let bad = |e: String| Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: legsurg::exit::INPUT };
    match cmd {
        Command::Invariants { source, format } => match source.input() {
            Ok(i) => cmd_invariants(&i, format),
            Err(e) => bad(e),
        },
        Command::Classify { source, knot_table, disable, format } => match source.input() {
            Ok(i) => cmd_classify(&i, knot_table.as_deref(), &disable, format),
            Err(e) => bad(e),
        },
        Command::Examples { fixture, fixtures_dir, knot_table, format } => {
            cmd_examples(fixtures_dir.as_deref(), fixture.as_deref(), knot_table.as_deref(), format)
        }
        Command::Snf { file, class, format } => {
            let text = if file.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| e.to_string())
            } else {
                std::fs::read_to_string(&file).map_err(|e| format!("cannot read {}: {e}", file.display()))
            };
            match text {
                Ok(t) => cmd_snf(&t, class.as_deref(), format),
                Err(e) => bad(e),
            }
        }
        Command::Knots { knot_table } => cmd_knots(knot_table.as_deref()),
    }
}

fn main() -> ExitCode {
    let out = run(Cli::parse().command);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
