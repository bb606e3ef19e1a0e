use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};

use argroth::cli::{self, CliError, Report};

#[derive(Parser)]
#[command(
    name = "argroth",
    version,
    about = "Grothendieck groups of MCM module categories from AR-quiver data"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the group presented by a quiver file
    Group {
        file: PathBuf,
        /// Emit the report as a single JSON object
        #[arg(long)]
        json: bool,
    },
    /// Compare the groups at both ends of a base-change table
    Basechange {
        table: PathBuf,
        from: PathBuf,
        to: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Colimit of a direct system and verdicts on the map to the terminal group
    Colimit {
        system: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the rank bounds on every Gorenstein quiver in a directory
    CheckCorollary {
        /// Directory of .quiver files; defaults to $ARGROTH_CATALOG
        dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn run(cmd: Cmd) -> (Result<Report, CliError>, bool) {
    match cmd {
        Cmd::Group { file, json } => (cli::cmd_group(&file), json),
        Cmd::Basechange {
            table,
            from,
            to,
            json,
        } => (cli::cmd_basechange(&table, &from, &to), json),
        Cmd::Colimit { system, json } => (cli::cmd_colimit(&system), json),
        Cmd::CheckCorollary { dir, json } => {
            let dir = dir.or_else(|| std::env::var_os("ARGROTH_CATALOG").map(PathBuf::from));
            match dir {
                Some(dir) => (cli::cmd_check_corollary(&dir), json),
                None => (Err(CliError::MissingCatalogDir), json),
            }
        }
    }
}

fn main() {
    let (result, json) = run(Cli::parse().command);
    match result {
        Ok(report) => {
            if json {
                println!("{}", report.json);
            } else {
                println!("{}", report.human);
            }
            exit(report.exit);
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
    }
}
