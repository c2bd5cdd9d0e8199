//! Command-line front end: scenario runner, demo corpus, and environment
//! classifier. Exit codes: 0 ok, 1 usage, 2 scenario/profile error, 3
//! runtime fault.

mod demos;
mod runner;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use primworld::laws::LawOfMotion;
use primworld::taxonomy::{self, ProfileDraft};

use crate::scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "primworld",
    version,
    about = "Rigid-body microworld: scenario runner, demos, and game-vs-simulator classifier"
)]
struct Cli {
    /// Override the scenario's RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file; write a trajectory CSV and a summary.
    Run {
        /// Scenario JSON path.
        file: PathBuf,
        /// Trajectory CSV output path; the summary lands next to it.
        #[arg(long, default_value = "trajectory.csv")]
        out: PathBuf,
        /// Emit a row every N ticks (overrides the scenario's own setting).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        sample_every: Option<u64>,
    },
    /// Classify an environment profile under both rubrics.
    Classify {
        /// Profile JSON path.
        file: PathBuf,
    },
    /// Run a bundled demo scenario.
    Demo {
        /// One of: freefall, buoyancy, airtrack, bumpers, cannon, brownian.
        name: String,
        /// Override the region's default law of motion.
        #[arg(long)]
        law: Option<LawArg>,
        /// Output directory for <name>.csv and <name>.summary.json.
        #[arg(long, default_value = "demo-out")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Newtonian,
    /// Projectiles carry consumable impetus: straight flight for speed/5
    /// seconds, then free fall.
    Impetus,
    /// Velocity proportional to motive force (mobility 0.05 m/s per N).
    Aristotelian,
}

impl From<LawArg> for LawOfMotion {
    fn from(arg: LawArg) -> LawOfMotion {
        match arg {
            LawArg::Newtonian => LawOfMotion::Newtonian,
            LawArg::Impetus => LawOfMotion::Impetus { lambda: 5.0 },
            LawArg::Aristotelian => LawOfMotion::Aristotelian { mu: 0.05 },
        }
    }
}

enum Failure {
    Usage(String),
    Scenario(String),
    Runtime(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (msg, code) = match self {
            Failure::Usage(m) => (m, 1),
            Failure::Scenario(m) => (m, 2),
            Failure::Runtime(m) => (m, 3),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version surface as non-error "errors".
            let code = if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { file, out, sample_every } => {
            let text = std::fs::read_to_string(&file).map_err(|e| {
                Failure::Scenario(format!("cannot read {}: {e}", file.display()))
            })?;
            let scenario = Scenario::from_json(&text).map_err(Failure::Scenario)?;
            let built = scenario::build(&scenario, file.parent(), cli.seed, None)
                .map_err(Failure::Scenario)?;
            let sample = sample_every.or(scenario.sample_every).unwrap_or(1);
            execute(&scenario, built, sample, &out)
        }
        Command::Classify { file } => classify(&file),
        Command::Demo { name, law, out } => {
            if !demos::DEMO_NAMES.contains(&name.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown demo {name:?}; expected one of {}",
                    demos::DEMO_NAMES.join(", ")
                )));
            }
            let scenario = demos::scenario(&name, cli.seed).map_err(Failure::Scenario)?;
            let built = scenario::build(&scenario, None, cli.seed, law.map(Into::into))
                .map_err(Failure::Scenario)?;
            let sample = scenario.sample_every.unwrap_or(1);
            std::fs::create_dir_all(&out).map_err(|e| {
                Failure::Scenario(format!("cannot create {}: {e}", out.display()))
            })?;
            execute(&scenario, built, sample, &out.join(format!("{name}.csv")))
        }
    }
}

fn execute(
    scenario: &Scenario,
    built: scenario::BuiltScenario,
    sample_every: u64,
    csv_path: &Path,
) -> Result<(), Failure> {
    let output = runner::run(scenario, built, sample_every);
    let summary_path = csv_path.with_extension("summary.json");
    let summary_json =
        serde_json::to_string_pretty(&output.summary).expect("summary serializes");

    std::fs::write(csv_path, &output.csv)
        .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", csv_path.display())))?;
    std::fs::write(&summary_path, summary_json).map_err(|e| {
        Failure::Runtime(format!("cannot write {}: {e}", summary_path.display()))
    })?;

    // Tolerate a closed pipe (e.g. piping into `head`).
    use std::io::Write as _;
    let mut stdout = std::io::stdout();
    let _ = write!(stdout, "{}", output.summary.text());
    let _ = writeln!(stdout, "wrote {} and {}", csv_path.display(), summary_path.display());

    if output.summary.faults.is_empty() {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "{} script fault(s); outputs written, details in the summary",
            output.summary.faults.len()
        )))
    }
}

fn classify(file: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Scenario(format!("cannot read {}: {e}", file.display())))?;
    let draft: ProfileDraft = serde_json::from_str(&text)
        .map_err(|e| Failure::Scenario(format!("profile parse error: {e}")))?;
    let profile = draft.complete().map_err(|e| match e {
        taxonomy::ProfileError::Incomplete { missing } => {
            let mut msg = String::from("incomplete profile");
            for field in missing {
                msg.push_str("\nmissing field: ");
                msg.push_str(field);
            }
            Failure::Scenario(msg)
        }
        other => Failure::Scenario(other.to_string()),
    })?;

    let verdict = taxonomy::classify(&profile);
    println!("{}", verdict.narayanasamy);
    match verdict.narayanasamy.overall {
        Some(cat) => println!("Narayanasamy: {cat}"),
        None => println!("Narayanasamy: None"),
    }
    println!("Johnston-Whitehead: {}", verdict.johnston_whitehead);
    Ok(())
}
