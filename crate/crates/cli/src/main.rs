mod job;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Map, Value};

use sheet_atlas::pseudolevi::{enumerate_pseudo_levis, Frame};
use sheet_atlas::quotient::normality_report;
use sheet_atlas::sheets::{enumerate_sheets_in, orbit_space, weyl_of_sheet, RigidTable, SheetDescriptor};
use sheet_atlas::weyl::WeylGroup;
use sheet_atlas::Error;

use job::{Cli, Command, JobSpec};

const TOOL: &str = "sheet-atlas";
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A failed run: exit code plus the error object.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn validation(kind: &str, message: impl Into<String>) -> Self {
        Self { code: 2, kind: kind.into(), message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::NotDixmier(_)) { 3 } else { 2 };
        Self { code, kind: render::error_kind(&e).into(), message: e.to_string() }
    }
}

fn header(job: Option<&JobSpec>) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("tool".into(), json!(TOOL));
    doc.insert("version".into(), json!(VERSION));
    doc.insert("job".into(), job.map_or(Value::Null, |j| serde_json::to_value(j).expect("job serializes")));
    doc
}

/// All sheets under the given table, or the Dixmier sheets alone when the
/// table lacks a component type that occurs.
fn sheets_with_scope(frame: &Frame<'_>, table: &RigidTable) -> Result<(Vec<SheetDescriptor>, Value), Failure> {
    match enumerate_sheets_in(frame, table) {
        Ok(s) => Ok((s, json!({"scope": "all"}))),
        Err(e @ Error::RigidTableIncomplete(_)) => {
            let s = enumerate_sheets_in(frame, &RigidTable::trivial_only())?;
            Ok((s, json!({"scope": "dixmier_only", "scope_reason": e.to_string()})))
        }
        Err(e) => Err(e.into()),
    }
}

fn run(job: &JobSpec) -> Result<Map<String, Value>, Failure> {
    let table = job.rigid_table().map_err(|m| Failure::validation("rigid_table_parse", m))?;
    let rs = job.root_system()?;
    let x = job.lattice(&rs)?;
    let w = WeylGroup::generate(&rs)?;
    let frame = Frame::new(&w, &x);

    let mut doc = header(Some(job));
    let mut group = render::group(&rs, &x);
    group["weyl_order"] = json!(w.order());
    doc.insert("group".into(), group);

    let (sheets, scope) = sheets_with_scope(&frame, &table)?;
    if job.command == Command::Enumerate {
        let pls = enumerate_pseudo_levis(&frame);
        doc.insert("scope".into(), scope["scope"].clone());
        if let Some(reason) = scope.get("scope_reason") {
            doc.insert("scope_reason".into(), reason.clone());
        }
        doc.insert(
            "pseudo_levis".into(),
            pls.iter().enumerate().map(|(i, pl)| render::pseudo_levi(&x, i, pl)).collect(),
        );
        doc.insert("sheets".into(), sheets.iter().map(render::sheet).collect());
        return Ok(doc);
    }

    let id = job.sheet.as_deref().expect("checked when the job was built");
    let sheet = sheets.iter().find(|s| s.id == id).ok_or_else(|| {
        Failure::validation("unknown_sheet", format!("no sheet with id {id:?}; run `enumerate` for the list"))
    })?;
    let data = weyl_of_sheet(&frame, sheet);
    let result = match job.command {
        Command::SheetInfo => render::sheet_info(&frame, sheet, &data),
        Command::OrbitSpace => {
            let mut v = render::orbit_space(&w, &orbit_space(&frame, sheet, &data));
            v["sheet"] = render::sheet(sheet);
            v
        }
        Command::Normality => {
            let report = normality_report(&frame, sheet, &data, job.degree_bound)?;
            render::normality(&w, sheet, &report)
        }
        Command::Enumerate => unreachable!(),
    };
    doc.insert("result".into(), result);
    Ok(doc)
}

fn emit(doc: &Map<String, Value>, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    text.push('\n');
    match out {
        None => std::io::stdout().write_all(text.as_bytes()),
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

fn fail(job: Option<&JobSpec>, f: Failure) -> ExitCode {
    let mut doc = header(job);
    doc.insert("error".into(), json!({"kind": f.kind, "message": f.message}));
    // errors go to stdout as well, so callers always get one JSON document
    let _ = emit(&doc, None);
    eprintln!("{TOOL}: {}", f.message);
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(None, Failure::validation("usage", e.render().to_string().trim().to_string())),
    };
    let job = match JobSpec::from_cli(cli) {
        Ok(j) => j,
        Err(job::Invalid(m)) => return fail(None, Failure::validation("validation", m)),
    };
    match run(&job) {
        Ok(doc) => match emit(&doc, job.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(Some(&job), Failure::validation("io", format!("cannot write output: {e}"))),
        },
        Err(f) => fail(Some(&job), f),
    }
}
