//! Loading problems, matrices and vectors from files, built-in names and
//! command-line strings.

use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use bnsi_core::{BnsiProblem, Elem, EncoderMatrix, Matrix};

/// Problems shipped with the tool, usable in place of a file path.
const PROBLEMS: &[(&str, &str)] = &[
    ("three-users", include_str!("../../../fixtures/three-users.toml")),
    ("phi-empty", include_str!("../../../fixtures/phi-empty.toml")),
    ("eta4", include_str!("../../../fixtures/eta4.toml")),
    ("n10-mds", include_str!("../../../fixtures/n10-mds.toml")),
    ("n10-disjoint", include_str!("../../../fixtures/n10-disjoint.toml")),
    ("n7", include_str!("../../../fixtures/n7.toml")),
];

const MATRICES: &[(&str, &str)] = &[("sum-encoder", include_str!("../../../fixtures/sum-encoder.txt"))];

/// Bad arguments that clap cannot catch on its own.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Unreadable or malformed input data.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn read(arg: &str, builtins: &[(&str, &str)], kind: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {arg}: {e}")).into());
    }
    match builtins.iter().find(|(name, _)| *name == arg) {
        Some((_, text)) => Ok(text.to_string()),
        None => {
            let names: Vec<&str> = builtins.iter().map(|(n, _)| *n).collect();
            Err(InputError(format!("no {kind} file {arg} and no built-in {kind} of that name (built-in: {})", names.join(", ")))
                .into())
        }
    }
}

pub fn problem(arg: &str) -> Result<BnsiProblem> {
    let text = read(arg, PROBLEMS, "problem")?;
    BnsiProblem::from_toml(&text).with_context(|| format!("loading problem {arg}"))
}

pub fn matrix(arg: &str, p: &BnsiProblem) -> Result<EncoderMatrix> {
    let text = read(arg, MATRICES, "matrix")?;
    let m = Matrix::parse(&text).with_context(|| format!("loading matrix {arg}"))?;
    EncoderMatrix::new(p, m).with_context(|| format!("matrix {arg} does not fit the problem"))
}

/// Comma- or space-separated field elements.
pub fn vector(arg: &str, what: &str) -> Result<Vec<Elem>> {
    arg.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Elem>().map_err(|_| InputError(format!("{what}: {s:?} is not a field element")).into()))
        .collect()
}
