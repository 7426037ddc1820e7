//! Token-allocation utility matrices: every agent distributes 1000 tokens
//! over the items of one dispute.

use std::path::Path;

use crate::SimError;

/// Tokens each agent distributes.
pub const TOKENS: u64 = 1000;
/// Item counts accepted for simulation.
pub const MIN_ITEMS: usize = 4;
pub const MAX_ITEMS: usize = 15;
/// Instances kept from a file unless configured otherwise.
pub const DEFAULT_LIMIT: usize = 5000;

/// One dispute: `values[a][j]` is agent `a`'s tokens on item `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityMatrix {
    pub id: String,
    pub values: Vec<Vec<u64>>,
}

impl UtilityMatrix {
    pub fn agents(&self) -> usize {
        self.values.len()
    }

    pub fn items(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// At least two agents and an item count within the accepted band.
    pub fn accepted(&self) -> bool {
        self.agents() >= 2 && (MIN_ITEMS..=MAX_ITEMS).contains(&self.items())
    }
}

/// Parses every block of `text`: a header line `instance,<id>` followed by
/// one line per agent of comma-separated token counts. Blank lines are
/// ignored. Rows must have equal lengths and sum to exactly 1000.
pub fn parse_matrices(text: &str) -> Result<Vec<UtilityMatrix>, SimError> {
    let mut out: Vec<UtilityMatrix> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(id) = line.strip_prefix("instance,") {
            out.push(UtilityMatrix {
                id: id.trim().to_string(),
                values: Vec::new(),
            });
            continue;
        }
        let Some(current) = out.last_mut() else {
            return Err(SimError::MalformedRow {
                instance: String::new(),
                row: lineno + 1,
                detail: "row before the first instance header".into(),
            });
        };
        let row = current.values.len() + 1;
        let malformed = |detail: String| SimError::MalformedRow {
            instance: current.id.clone(),
            row,
            detail,
        };
        let values = line
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<u64>()
                    .map_err(|_| malformed(format!("'{}' is not a nonnegative integer", cell.trim())))
            })
            .collect::<Result<Vec<u64>, SimError>>()?;
        if let Some(first) = current.values.first() {
            if first.len() != values.len() {
                return Err(malformed(format!("{} items, expected {}", values.len(), first.len())));
            }
        }
        let sum: u64 = values.iter().sum();
        if sum != TOKENS {
            return Err(SimError::RowSumNot1000 {
                instance: current.id.clone(),
                row,
                sum,
            });
        }
        current.values.push(values);
    }
    Ok(out)
}

/// Accepted matrices of `text` in file order, at most `limit` of them.
pub fn accepted_matrices(text: &str, limit: usize) -> Result<Vec<UtilityMatrix>, SimError> {
    Ok(parse_matrices(text)?
        .into_iter()
        .filter(UtilityMatrix::accepted)
        .take(limit)
        .collect())
}

/// Reads `path` and keeps the first `limit` accepted matrices.
pub fn load_utility_matrices(path: &Path, limit: usize) -> Result<Vec<UtilityMatrix>, SimError> {
    let text = std::fs::read_to_string(path).map_err(|e| SimError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    accepted_matrices(&text, limit)
}

/// The block format read by [`parse_matrices`].
pub fn format_matrices(matrices: &[UtilityMatrix]) -> String {
    let mut out = String::new();
    for m in matrices {
        out.push_str(&format!("instance,{}\n", m.id));
        for row in &m.values {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    out
}
