use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice_roots::{ComponentType, TypeLabel};

pub const TRIVIAL_LABEL: &str = "1";

/// Rigid unipotent classes per irreducible component type.
///
/// Type `A` components (long or short) only carry the trivial class and need
/// no entry. Other types must be listed, either in the built-in table or in a
/// text file with lines `type rank label…`:
///
/// ```text
/// # short and long root elements of G2
/// G 2 1 x_alpha(1) x_beta(1)
/// C 2 1 (2,1,1)
/// ~A 1 1
/// ```
///
/// The trivial label `1` is always present and listed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidTable {
    entries: BTreeMap<ComponentType, Vec<String>>,
    trivial_everywhere: bool,
}

impl RigidTable {
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(
            ComponentType { family: TypeLabel::G, rank: 2, short: false },
            vec![TRIVIAL_LABEL.to_string(), "x_alpha(1)".to_string(), "x_beta(1)".to_string()],
        );
        Self { entries, trivial_everywhere: false }
    }

    /// Every component type carries only the trivial class; enumerating
    /// with this table yields exactly the Dixmier sheets.
    pub fn trivial_only() -> Self {
        Self { entries: BTreeMap::new(), trivial_everywhere: true }
    }

    pub fn is_trivial_only(&self) -> bool {
        self.trivial_everywhere
    }

    /// Parses table lines and merges them into `self`.
    pub fn extend_from_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::RigidTableParse { line: n + 1, message };
            let mut fields = line.split_whitespace();
            let ty = fields.next().expect("nonempty line");
            let (short, letter) = match ty.strip_prefix('~') {
                Some(rest) => (true, rest),
                None => (false, ty),
            };
            let family = letter
                .chars()
                .next()
                .filter(|_| letter.chars().count() == 1)
                .and_then(TypeLabel::from_char)
                .ok_or_else(|| err(format!("unknown type {ty:?}")))?;
            let rank: usize = fields
                .next()
                .ok_or_else(|| err("missing rank".into()))?
                .parse()
                .map_err(|_| err("rank is not a positive integer".into()))?;
            if !family.is_valid_rank(rank) {
                return Err(err(format!("invalid rank {rank} for type {family}")));
            }
            let labels: Vec<String> = fields.map(str::to_string).collect();
            if family == TypeLabel::A && labels.iter().any(|l| l != TRIVIAL_LABEL) {
                return Err(err("type A components only admit the trivial class".into()));
            }
            let entry = self
                .entries
                .entry(ComponentType { family, rank, short })
                .or_insert_with(|| vec![TRIVIAL_LABEL.to_string()]);
            for l in labels {
                if !entry.contains(&l) {
                    entry.push(l);
                }
            }
        }
        Ok(())
    }

    /// Built-in table extended by a text file's contents.
    pub fn builtin_with(text: &str) -> Result<Self> {
        let mut t = Self::builtin();
        t.extend_from_str(text)?;
        Ok(t)
    }

    /// Labels available on a component, trivial first.
    pub fn labels(&self, kind: &ComponentType) -> Result<Vec<String>> {
        if self.trivial_everywhere || kind.is_type_a() {
            return Ok(vec![TRIVIAL_LABEL.to_string()]);
        }
        self.entries.get(kind).cloned().ok_or_else(|| Error::RigidTableIncomplete(kind.to_string()))
    }
}
