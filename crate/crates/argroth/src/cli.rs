//! Command implementations behind the `argroth` binary.
//!
//! Each command loads catalog files, runs the library computation, and
//! produces a [`Report`] carrying both a human rendering and a JSON value.
//! Identical inputs produce byte-identical output: JSON objects are emitted
//! with sorted keys, directory listings are sorted, and nothing here depends
//! on hashing or time.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 violated
//! structural invariant, 3 ill-defined induced map, 4 missing stabilization
//! assertion, 5 failed corollary bounds.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::abelian::{GroupInvariants, IntMatrix};
use crate::basechange::{
    compare_torsion_and_rank, parse_system, parse_table, ComparisonReport, DecompositionTable,
    DeltaStatus, DirectSystem, InjectivityVerdict, TableError, XiReport,
};
use crate::quiver::{parse_quiver, ArQuiver, QuiverError};

/// Outcome of a command: what to print and how to exit.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub human: String,
    pub json: Value,
    pub exit: i32,
}

/// Errors surfaced to the user, each mapped to a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Quiver {
        path: PathBuf,
        source: QuiverError,
    },

    #[error("{}: {source}", path.display())]
    Table { path: PathBuf, source: TableError },

    #[error("no catalog directory given and ARGROTH_CATALOG is not set")]
    MissingCatalogDir,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::MissingCatalogDir => 1,
            CliError::Quiver { source, .. } => {
                if source.is_syntax() {
                    1
                } else {
                    2
                }
            }
            CliError::Table { source, .. } => table_exit_code(source),
        }
    }
}

fn table_exit_code(e: &TableError) -> i32 {
    match e {
        TableError::Syntax { .. } => 1,
        TableError::IllDefinedHom { .. } => 3,
        TableError::NotStabilized { .. } => 4,
        TableError::Abelian(crate::abelian::Error::IllDefined { .. }) => 3,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_quiver(path: &Path) -> Result<ArQuiver, CliError> {
    parse_quiver(&read(path)?).map_err(|source| CliError::Quiver {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_table(path: &Path) -> Result<DecompositionTable, CliError> {
    parse_table(&read(path)?).map_err(|source| CliError::Table {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a system file together with the stage and table files it names,
/// resolved relative to the system file's directory, and validates the
/// whole chain.
pub fn load_system(path: &Path) -> Result<DirectSystem, CliError> {
    let spec = parse_system(&read(path)?).map_err(|source| CliError::Table {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let quivers = spec
        .stage_files
        .iter()
        .map(|f| load_quiver(&base.join(f)))
        .collect::<Result<Vec<_>, _>>()?;
    let tables = spec
        .table_files
        .iter()
        .map(|f| load_table(&base.join(f)))
        .collect::<Result<Vec<_>, _>>()?;
    DirectSystem::new(spec.name, quivers, tables, spec.stabilized).map_err(|source| {
        CliError::Table {
            path: path.to_path_buf(),
            source,
        }
    })
}

/// Emits a big integer as an exact JSON number.
fn number(b: &BigInt) -> Value {
    serde_json::from_str::<serde_json::Number>(&b.to_string())
        .map(Value::Number)
        .expect("a decimal integer is a valid JSON number")
}

fn torsion_value(torsion: &[BigInt]) -> Value {
    Value::Array(torsion.iter().map(number).collect())
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(number).collect()))
            .collect(),
    )
}

fn torsion_text(torsion: &[BigInt]) -> String {
    let inner: Vec<String> = torsion.iter().map(BigInt::to_string).collect();
    format!("[{}]", inner.join(", "))
}

fn group_value(quiver: Option<&str>, inv: &GroupInvariants) -> Value {
    let mut v = json!({
        "free_rank": inv.free_rank,
        "group": inv.to_string(),
        "torsion": torsion_value(&inv.torsion),
    });
    if let Some(name) = quiver {
        v["quiver"] = json!(name);
    }
    v
}

/// `argroth group <file>`: the canonical group string of a quiver file.
pub fn cmd_group(file: &Path) -> Result<Report, CliError> {
    let quiver = load_quiver(file)?;
    let inv = quiver.grothendieck_group().invariants();
    let json = json!({
        "command": "group",
        "free_rank": inv.free_rank,
        "group": inv.to_string(),
        "input": file.display().to_string(),
        "quiver": quiver.name,
        "torsion": torsion_value(&inv.torsion),
    });
    Ok(Report {
        command: "group",
        inputs: vec![file.display().to_string()],
        human: inv.to_string(),
        json,
        exit: 0,
    })
}

fn delta_text(report: &ComparisonReport) -> String {
    match report.delta {
        DeltaStatus::Passed => format!("passed (degree {})", report.degree),
        DeltaStatus::Failed => format!(
            "failed (restrict o extend != {} x identity)",
            report.degree
        ),
        DeltaStatus::NoRestrictData => "skipped (no restriction data)".to_string(),
    }
}

fn injectivity_text(verdict: InjectivityVerdict) -> &'static str {
    match verdict {
        InjectivityVerdict::Injective => "yes",
        InjectivityVerdict::NotEstablished => "not established",
        InjectivityVerdict::Undetermined => "undetermined (delta check failed)",
    }
}

/// `argroth basechange <table> <from> <to>`: source and target groups,
/// transfer identity status, and the rank and torsion comparison.
pub fn cmd_basechange(table: &Path, from: &Path, to: &Path) -> Result<Report, CliError> {
    let qf = load_quiver(from)?;
    let qe = load_quiver(to)?;
    let t = load_table(table)?;
    let table_err = |source| CliError::Table {
        path: table.to_path_buf(),
        source,
    };
    t.validate(&qf, &qe).map_err(table_err)?;
    let report = compare_torsion_and_rank(&t, &qf, &qe).map_err(table_err)?;

    let proper = if report.proper_subspace {
        format!(
            "yes (rank {} < rank {})",
            report.source.free_rank, report.target.free_rank
        )
    } else {
        format!(
            "no (rank {} >= rank {})",
            report.source.free_rank, report.target.free_rank
        )
    };
    let human = [
        format!("source group: {}", report.source),
        format!("target group: {}", report.target),
        format!("delta check: {}", delta_text(&report)),
        format!("eta_Q injective: {}", injectivity_text(report.eta_injective)),
        format!("proper subspace: {proper}"),
        format!("source torsion: {}", torsion_text(&report.source.torsion)),
        format!("target torsion: {}", torsion_text(&report.target.torsion)),
    ]
    .join("\n");

    let json = json!({
        "command": "basechange",
        "degree": report.degree,
        "delta": match report.delta {
            DeltaStatus::Passed => "passed",
            DeltaStatus::Failed => "failed",
            DeltaStatus::NoRestrictData => "skipped",
        },
        "eta_q_injective": match report.eta_injective {
            InjectivityVerdict::Injective => "yes",
            InjectivityVerdict::NotEstablished => "not established",
            InjectivityVerdict::Undetermined => "undetermined",
        },
        "inputs": {
            "from": from.display().to_string(),
            "table": table.display().to_string(),
            "to": to.display().to_string(),
        },
        "proper_subspace": report.proper_subspace,
        "source": group_value(Some(&report.source_quiver), &report.source),
        "target": group_value(Some(&report.target_quiver), &report.target),
    });
    Ok(Report {
        command: "basechange",
        inputs: vec![
            table.display().to_string(),
            from.display().to_string(),
            to.display().to_string(),
        ],
        human,
        json,
        exit: 0,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `argroth colimit <system>`: colimit group, terminal group, and the exact
/// verdicts on the canonical map between them.
pub fn cmd_colimit(system_file: &Path) -> Result<Report, CliError> {
    let system = load_system(system_file)?;
    let report: XiReport = system.check_xi_iso().map_err(|source| CliError::Table {
        path: system_file.to_path_buf(),
        source,
    })?;

    let human = [
        format!("colimit group: {}", report.colimit),
        format!("terminal group: {}", report.terminal),
        format!("xi injective: {}", yes_no(report.injective)),
        format!("xi surjective: {}", yes_no(report.surjective)),
        format!("xi isomorphism: {}", yes_no(report.isomorphism)),
    ]
    .join("\n");

    let json = json!({
        "colimit": group_value(None, &report.colimit),
        "command": "colimit",
        "input": system_file.display().to_string(),
        "stages": system.quivers.iter().map(|q| q.name.clone()).collect::<Vec<_>>(),
        "system": system.name,
        "terminal": group_value(Some(&system.terminal().name), &report.terminal),
        "xi": {
            "injective": report.injective,
            "isomorphism": report.isomorphism,
            "matrix": matrix_value(&report.matrix),
            "surjective": report.surjective,
        },
    });
    Ok(Report {
        command: "colimit",
        inputs: vec![system_file.display().to_string()],
        human,
        json,
        exit: 0,
    })
}

struct CorollaryEntry {
    file: String,
    quiver: String,
    gorenstein: bool,
    dim: u64,
    free_rank: usize,
    rule: &'static str,
    status: &'static str,
    line: String,
}

fn corollary_entry(file: String, quiver: &ArQuiver) -> CorollaryEntry {
    let free_rank = quiver.grothendieck_group().rational_rank();
    let (rule, status, line) = if !quiver.is_gorenstein {
        (
            "not gorenstein",
            "skipped",
            format!("{file}: not gorenstein: skipped"),
        )
    } else if quiver.dim == 0 {
        (
            "dim 0: no bound",
            "pass",
            format!("{file}: gorenstein, dim 0: no bound applies: pass"),
        )
    } else if quiver.dim % 2 == 0 {
        if free_rank == 1 {
            (
                "positive even dim: rank == 1",
                "pass",
                format!(
                    "{file}: gorenstein, dim {} (positive even): rank {free_rank} == 1: pass",
                    quiver.dim
                ),
            )
        } else {
            (
                "positive even dim: rank == 1",
                "fail",
                format!(
                    "{file}: gorenstein, dim {} (positive even): rank {free_rank} != 1: FAIL",
                    quiver.dim
                ),
            )
        }
    } else if free_rank <= 3 {
        (
            "odd dim: rank <= 3",
            "pass",
            format!(
                "{file}: gorenstein, dim {} (odd): rank {free_rank} <= 3: pass",
                quiver.dim
            ),
        )
    } else {
        (
            "odd dim: rank <= 3",
            "fail",
            format!(
                "{file}: gorenstein, dim {} (odd): rank {free_rank} > 3: FAIL",
                quiver.dim
            ),
        )
    };
    CorollaryEntry {
        file,
        quiver: quiver.name.clone(),
        gorenstein: quiver.is_gorenstein,
        dim: quiver.dim,
        free_rank,
        rule,
        status,
        line,
    }
}

/// `argroth check-corollary <dir>`: checks the rank bounds on every
/// Gorenstein `.quiver` entry in the directory; exit 5 if any bound fails.
pub fn cmd_check_corollary(dir: &Path) -> Result<Report, CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Io {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "quiver"))
        .collect();
    files.sort();

    let mut entries = Vec::new();
    for path in &files {
        let quiver = load_quiver(path)?;
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        entries.push(corollary_entry(file, &quiver));
    }

    let checked = entries.iter().filter(|e| e.gorenstein).count();
    let skipped = entries.len() - checked;
    let failed = entries.iter().filter(|e| e.status == "fail").count();

    let mut lines: Vec<String> = entries.iter().map(|e| e.line.clone()).collect();
    lines.push(format!("{checked} checked, {skipped} skipped, {failed} failed"));

    let json = json!({
        "all_pass": failed == 0,
        "checked": checked,
        "command": "check-corollary",
        "entries": entries.iter().map(|e| json!({
            "dim": e.dim,
            "file": e.file,
            "free_rank": e.free_rank,
            "gorenstein": e.gorenstein,
            "quiver": e.quiver,
            "rule": e.rule,
            "status": e.status,
        })).collect::<Vec<_>>(),
        "failed": failed,
        "input": dir.display().to_string(),
        "skipped": skipped,
    });
    Ok(Report {
        command: "check-corollary",
        inputs: vec![dir.display().to_string()],
        human: lines.join("\n"),
        json,
        exit: if failed == 0 { 0 } else { 5 },
    })
}
