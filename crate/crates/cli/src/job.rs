use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use sheet_atlas::lattice_roots::{IsogenyDescriptor, RootSystem, TypeLabel};
use sheet_atlas::sheets::RigidTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Enumerate,
    SheetInfo,
    OrbitSpace,
    Normality,
}

/// Sheets of conjugacy classes in a simple algebraic group, as JSON.
#[derive(Debug, Parser)]
#[command(name = "sheet-atlas", version)]
pub struct Cli {
    pub command: Command,
    /// Root system type, optionally with the rank attached (`G2`, `C5`).
    #[arg(long = "type")]
    pub group_type: String,
    #[arg(long)]
    pub rank: Option<usize>,
    /// sc, adjoint, SO, HSpin, PSp or PSO.
    #[arg(long, conflicts_with = "lattice")]
    pub isogeny: Option<String>,
    /// Generators of the character lattice in fundamental-weight
    /// coordinates, rows separated by `;` (`1,0;0,2`).
    #[arg(long)]
    pub lattice: Option<String>,
    /// Sheet id as printed by `enumerate`.
    #[arg(long)]
    pub sheet: Option<String>,
    #[arg(long)]
    pub degree_bound: Option<u32>,
    /// Extra rigid classes, lines `type rank label…`.
    #[arg(long)]
    pub rigid_table: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsogenySpec {
    Named(String),
    Generators(Vec<Vec<i64>>),
}

/// The fully resolved request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    #[serde(rename = "type")]
    pub type_label: char,
    pub rank: usize,
    pub isogeny: IsogenySpec,
    pub sheet: Option<String>,
    pub degree_bound: Option<u32>,
    pub rigid_table: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Invalid(pub String);

impl JobSpec {
    pub fn from_cli(cli: Cli) -> Result<Self, Invalid> {
        let mut chars = cli.group_type.chars();
        let letter = chars.next().ok_or_else(|| Invalid("empty --type".into()))?;
        let label = TypeLabel::from_char(letter.to_ascii_uppercase())
            .ok_or_else(|| Invalid(format!("unknown type {:?}", cli.group_type)))?;
        let attached: String = chars.collect();
        let attached = if attached.is_empty() {
            None
        } else {
            Some(
                attached
                    .parse::<usize>()
                    .map_err(|_| Invalid(format!("cannot read rank from {:?}", cli.group_type)))?,
            )
        };
        let rank = match (attached, cli.rank) {
            (Some(a), Some(b)) if a != b => {
                return Err(Invalid(format!("--type {} conflicts with --rank {b}", cli.group_type)))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => return Err(Invalid("missing rank: use --rank or a type like G2".into())),
        };
        if !label.is_valid_rank(rank) {
            return Err(Invalid(format!("{label}{rank} is not a simple root system")));
        }
        let isogeny = match (cli.isogeny, cli.lattice) {
            (_, Some(text)) => IsogenySpec::Generators(parse_lattice(&text)?),
            (Some(name), None) => IsogenySpec::Named(name),
            (None, None) => IsogenySpec::Named("adjoint".into()),
        };
        let needs_sheet = matches!(cli.command, Command::SheetInfo | Command::OrbitSpace | Command::Normality);
        if needs_sheet && cli.sheet.is_none() {
            return Err(Invalid("this command needs --sheet <id>".into()));
        }
        Ok(Self {
            command: cli.command,
            type_label: label.as_char(),
            rank,
            isogeny,
            sheet: cli.sheet,
            degree_bound: cli.degree_bound,
            rigid_table: cli.rigid_table,
            out: cli.out,
        })
    }

    pub fn root_system(&self) -> sheet_atlas::Result<RootSystem> {
        let label =
            TypeLabel::from_char(self.type_label).ok_or(sheet_atlas::Error::InvalidType(self.type_label, self.rank))?;
        RootSystem::new(label, self.rank)
    }

    pub fn lattice(&self, rs: &RootSystem) -> sheet_atlas::Result<IsogenyDescriptor> {
        match &self.isogeny {
            IsogenySpec::Named(name) => IsogenyDescriptor::named(rs, name),
            IsogenySpec::Generators(rows) => IsogenyDescriptor::new(rs, rows),
        }
    }

    pub fn rigid_table(&self) -> Result<RigidTable, String> {
        match &self.rigid_table {
            None => Ok(RigidTable::builtin()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                RigidTable::builtin_with(&text).map_err(|e| e.to_string())
            }
        }
    }
}

fn parse_lattice(text: &str) -> Result<Vec<Vec<i64>>, Invalid> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Invalid(format!("bad lattice entry {x:?}"))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<JobSpec, Invalid> {
        JobSpec::from_cli(Cli::try_parse_from(std::iter::once("sheet-atlas").chain(args.iter().copied())).unwrap())
    }

    #[test]
    fn type_with_rank() {
        let job = parse(&["enumerate", "--type", "G2"]).unwrap();
        assert_eq!((job.type_label, job.rank), ('G', 2));
        assert_eq!(job.isogeny, IsogenySpec::Named("adjoint".into()));
        let job = parse(&["--type", "c", "--rank", "5", "--isogeny", "sc", "enumerate"]).unwrap();
        assert_eq!((job.type_label, job.rank), ('C', 5));
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(parse(&["enumerate", "--type", "G3"]).is_err());
        assert!(parse(&["enumerate", "--type", "A2", "--rank", "3"]).is_err());
        assert!(parse(&["enumerate", "--type", "A"]).is_err());
        assert!(parse(&["normality", "--type", "G2"]).is_err());
        assert!(parse(&["enumerate", "--type", "A1", "--lattice", "1,x"]).is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let job =
            parse(&["normality", "--type", "B2", "--lattice", "1,0;0,2", "--sheet", "1.0.0", "--degree-bound", "7"])
                .unwrap();
        let text = serde_json::to_string(&job).unwrap();
        assert_eq!(serde_json::from_str::<JobSpec>(&text).unwrap(), job);
        assert!(
            text.starts_with(r#"{"command":"normality","type":"B","rank":2,"isogeny":{"generators":[[1,0],[0,2]]}"#)
        );
    }
}
