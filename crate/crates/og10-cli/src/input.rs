//! Flag parsing helpers: named lattices, inline coordinate lists, and
//! JSON payloads loaded through `@file` references.

use std::fs;

use num_bigint::BigInt;
use serde::Deserialize;

use og10_core::lattice::{Class, Lattice};
use og10_core::matrix::IntMatrix;

use crate::CliError;

#[derive(Deserialize)]
struct LatticeFile {
    #[serde(default)]
    label: Option<String>,
    gram: Vec<Vec<i64>>,
}

/// A named lattice (`u`, `a2`, `e8`, `og10`) or a JSON file reference.
pub fn parse_lattice(spec: &str) -> Result<Lattice, CliError> {
    match spec {
        "u" | "U" => Ok(Lattice::u()),
        "a2" | "A2" | "a2-1" => Ok(Lattice::a2_minus()),
        "e8" | "E8" | "e8-1" => Ok(Lattice::e8_minus()),
        "og10" | "OG10" => Ok(Lattice::og10()),
        _ => {
            let text = read_payload(spec)?;
            let file: LatticeFile = serde_json::from_str(&text)
                .map_err(|e| CliError::validation("BadLatticeJson", &e.to_string()))?;
            let gram = gram_from_rows(&file.gram)?;
            Lattice::with_label(gram, file.label)
                .map_err(|e| CliError::validation("BadLattice", &e.to_string()))
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassFile {
    Bare(Vec<i64>),
    Tagged {
        #[serde(default)]
        lattice: Option<String>,
        coords: Vec<i64>,
    },
}

/// Inline `a,b,c` coordinates, or an `@file` holding either a JSON array
/// or a `{lattice, coords}` object. When an expected lattice label is
/// given, a tagged payload must agree with it.
pub fn parse_class_for(spec: &str, expect_label: Option<&str>) -> Result<Class, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::validation("UnreadableFile", &format!("{}: {}", path, e)))?;
        let file: ClassFile = serde_json::from_str(&text)
            .map_err(|e| CliError::validation("BadCoordinateJson", &e.to_string()))?;
        let coords = match file {
            ClassFile::Bare(v) => v,
            ClassFile::Tagged { lattice, coords } => {
                if let (Some(tag), Some(expect)) = (lattice.as_deref(), expect_label) {
                    if !tag.eq_ignore_ascii_case(expect) {
                        return Err(CliError::validation(
                            "LatticeMismatch",
                            &format!("class is tagged for {:?}, expected {:?}", tag, expect),
                        ));
                    }
                }
                coords
            }
        };
        return Ok(Class::new(coords.into_iter().map(BigInt::from).collect()));
    }
    Ok(Class::new(parse_int_list(spec)?))
}

pub fn parse_int_list(spec: &str) -> Result<Vec<BigInt>, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::validation("UnreadableFile", &format!("{}: {}", path, e)))?;
        let values: Vec<i64> = serde_json::from_str(&text)
            .map_err(|e| CliError::validation("BadCoordinateJson", &e.to_string()))?;
        return Ok(values.into_iter().map(BigInt::from).collect());
    }
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::validation("BadCoordinate", &format!("not an integer: {tok:?}")))
        })
        .collect()
}

/// Inline `[[a,b],[c,d]]` JSON or an `@file` reference.
pub fn parse_gram(spec: &str) -> Result<IntMatrix, CliError> {
    let text = read_payload(spec)?;
    let rows: Vec<Vec<i64>> = serde_json::from_str(&text)
        .map_err(|e| CliError::validation("BadGramJson", &e.to_string()))?;
    gram_from_rows(&rows)
}

fn gram_from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix, CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err(CliError::validation("RaggedGram", "rows of unequal length"));
    }
    Ok(IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j])))
}

fn read_payload(spec: &str) -> Result<String, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        fs::read_to_string(path)
            .map_err(|e| CliError::validation("UnreadableFile", &format!("{}: {}", path, e)))
    } else {
        Ok(spec.to_string())
    }
}
