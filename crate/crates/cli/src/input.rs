use std::fs;
use std::path::Path;

use tcc_core::{Caps, Condition, ConditionError};

use crate::Failure;

/// A non-blank, non-comment line of a condition file.
pub struct Line {
    pub number: usize,
    pub text: String,
}

/// Reads the meaningful lines of a file; `-` is stdin. Everything from `#`
/// to the end of a line is dropped.
pub fn read_lines(path: &Path) -> Result<Vec<Line>, Failure> {
    let content = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Failure::precondition(format!("cannot read {}: {e}", path.display())))?;
    Ok(content
        .lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let text = l.split('#').next().unwrap_or("").trim();
            (!text.is_empty()).then(|| Line {
                number: i + 1,
                text: text.to_string(),
            })
        })
        .collect())
}

pub fn describe(path: &Path, line: &Line, e: &ConditionError) -> String {
    match e {
        ConditionError::Parse { pos, msg } => {
            format!("{}:{}:{}: ParseError: {msg}", path.display(), line.number, pos + 1)
        }
        e => {
            let text = e.to_string();
            let text = if text.starts_with(e.name()) {
                text
            } else {
                format!("{}: {text}", e.name())
            };
            format!("{}:{}: {text}", path.display(), line.number)
        }
    }
}

/// Parses every condition, failing with exit 1 on the first bad line.
pub fn read_conditions(path: &Path, caps: &Caps) -> Result<Vec<Condition>, Failure> {
    read_lines(path)?
        .iter()
        .map(|l| Condition::parse(&l.text, caps).map_err(|e| Failure::validation(describe(path, l, &e))))
        .collect()
}
