//! Text and JSON file formats.
//!
//! Matrix files: a line `d` followed by `d` rows of `d` space-separated 0/1 digits.
//! Labeled graph files: a line `vertices V` followed by `from to label` lines with
//! 1-based vertices. Both are parsed strictly; trailing whitespace and trailing
//! blank lines are ignored.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bimodule::{BimoduleSystem, DPotential, DPotentialSpec, SystemSpec};
use crate::error::{Error, Result};
use crate::measures::MarkovMeasure;
use crate::potential::LocallyConstantPotential;
use crate::sft::{validate_matrix, LabeledGraph, TransitionMatrix, Word};

fn display(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: display(path),
        message: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: display(path),
        message: e.to_string(),
    })
}

/// Lines with trailing whitespace removed and trailing blank lines dropped, numbered from 1.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    let mut lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end())).collect();
    while lines.last().is_some_and(|(_, l)| l.is_empty()) {
        lines.pop();
    }
    lines
}

fn parse_count(path: &str, line: usize, s: &str, what: &str) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(path, line, format!("expected {what}, found {s:?}")));
    }
    s.parse()
        .map_err(|_| Error::parse(path, line, format!("{what} {s:?} is out of range")))
}

pub fn parse_matrix(path: &str, text: &str) -> Result<TransitionMatrix> {
    let lines = content_lines(text);
    let Some(&(first, header)) = lines.first() else {
        return Err(Error::parse(path, 1, "empty file, expected the alphabet size"));
    };
    let d = parse_count(path, first, header, "the alphabet size")?;
    if d == 0 {
        return Err(Error::parse(path, first, "alphabet size must be positive"));
    }
    if lines.len() != d + 1 {
        let line = lines.get(d + 1).map_or(lines.last().unwrap().0 + 1, |l| l.0);
        return Err(Error::parse(
            path,
            line,
            format!("expected {d} matrix rows, found {}", lines.len() - 1),
        ));
    }
    let mut rows = Vec::with_capacity(d);
    for &(no, line) in &lines[1..] {
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != d {
            return Err(Error::parse(
                path,
                no,
                format!("expected {d} space-separated entries, found {}", tokens.len()),
            ));
        }
        let mut row = Vec::with_capacity(d);
        for t in tokens {
            match t {
                "0" => row.push(0),
                "1" => row.push(1),
                _ => return Err(Error::parse(path, no, format!("entry {t:?} is not 0 or 1"))),
            }
        }
        rows.push(row);
    }
    validate_matrix(&rows)
}

pub fn format_matrix(a: &TransitionMatrix) -> String {
    let mut out = format!("{}\n", a.d());
    for row in a.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<TransitionMatrix> {
    parse_matrix(&display(path), &read_text(path)?)
}

pub fn parse_labeled_graph(path: &str, text: &str) -> Result<LabeledGraph> {
    let lines = content_lines(text);
    let Some(&(first, header)) = lines.first() else {
        return Err(Error::parse(path, 1, "empty file, expected \"vertices V\""));
    };
    let vertices = match header.split(' ').collect::<Vec<_>>().as_slice() {
        ["vertices", v] => parse_count(path, first, v, "a vertex count")?,
        _ => return Err(Error::parse(path, first, "expected \"vertices V\"")),
    };
    let mut edges = Vec::new();
    for &(no, line) in &lines[1..] {
        let parts: Vec<&str> = line.split(' ').collect();
        let [from, to, label] = parts.as_slice() else {
            return Err(Error::parse(path, no, "expected \"from to label\""));
        };
        let vertex = |s: &str| -> Result<usize> {
            let v = parse_count(path, no, s, "a vertex")?;
            if v == 0 || v > vertices {
                return Err(Error::parse(path, no, format!("vertex {v} is outside 1..={vertices}")));
            }
            Ok(v - 1)
        };
        if label.is_empty() {
            return Err(Error::parse(path, no, "empty label"));
        }
        edges.push((vertex(from)?, vertex(to)?, label.to_string()));
    }
    Ok(LabeledGraph { vertices, edges })
}

pub fn read_labeled_graph(path: &Path) -> Result<LabeledGraph> {
    parse_labeled_graph(&display(path), &read_text(path)?)
}

fn parse_json<T: DeserializeOwned>(path: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(path, e.line().max(1), e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&display(path), &read_text(path)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// `{"d": d, "k": k, "values": {"121": 0.5, ...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialFile {
    pub d: usize,
    pub k: usize,
    pub values: BTreeMap<String, f64>,
}

impl PotentialFile {
    pub fn from_potential(f: &LocallyConstantPotential) -> Self {
        Self {
            d: f.d(),
            k: f.k(),
            values: f.table().into_iter().map(|(w, v)| (w.to_string(), v)).collect(),
        }
    }

    pub fn build(&self, path: &str, matrix: &TransitionMatrix) -> Result<LocallyConstantPotential> {
        if self.d != matrix.d() {
            return Err(Error::parse(
                path,
                1,
                format!("potential has d = {}, matrix has d = {}", self.d, matrix.d()),
            ));
        }
        let mut table = BTreeMap::new();
        for (key, &v) in &self.values {
            let w = Word::parse(key, self.d).map_err(|e| Error::parse(path, 1, format!("word {key:?}: {e}")))?;
            table.insert(w, v);
        }
        LocallyConstantPotential::from_map(matrix, self.k, &table)
    }
}

pub fn parse_potential(path: &str, text: &str, matrix: &TransitionMatrix) -> Result<LocallyConstantPotential> {
    parse_json::<PotentialFile>(path, text)?.build(path, matrix)
}

pub fn read_potential(path: &Path, matrix: &TransitionMatrix) -> Result<LocallyConstantPotential> {
    parse_potential(&display(path), &read_text(path)?, matrix)
}

pub fn format_potential(f: &LocallyConstantPotential) -> String {
    to_json(&PotentialFile::from_potential(f))
}

/// `{"states": ["1", "2"], "P": [[...]], "p": [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovFile {
    pub states: Vec<Word>,
    #[serde(rename = "P")]
    pub transitions: Vec<Vec<f64>>,
    pub p: Vec<f64>,
}

impl MarkovFile {
    pub fn from_measure(mu: &MarkovMeasure) -> Self {
        Self {
            states: mu.states().to_vec(),
            transitions: mu.transition_rows().to_vec(),
            p: mu.stationary().to_vec(),
        }
    }

    /// States must list the admissible `m`-words in lexicographic order.
    pub fn build(&self, matrix: &TransitionMatrix) -> Result<MarkovMeasure> {
        let m = self.states.first().map_or(0, |w| w.len());
        if m == 0 {
            return Err(Error::InvalidMeasure("states must be nonempty words".into()));
        }
        let expected = matrix.admissible_words(m)?;
        if expected != self.states {
            return Err(Error::InvalidMeasure(format!(
                "states must be the admissible {m}-words in lexicographic order"
            )));
        }
        MarkovMeasure::from_parts(matrix, m, self.transitions.clone(), Some(self.p.clone()))
    }
}

pub fn read_markov(path: &Path, matrix: &TransitionMatrix) -> Result<MarkovMeasure> {
    read_json::<MarkovFile>(path)?.build(matrix)
}

pub fn format_markov(mu: &MarkovMeasure) -> String {
    to_json(&MarkovFile::from_measure(mu))
}

pub fn read_system(path: &Path) -> Result<BimoduleSystem> {
    read_json::<SystemSpec>(path)?.build()
}

pub fn format_system(sys: &BimoduleSystem) -> String {
    to_json(&SystemSpec::from_system(sys))
}

pub fn read_dpotential(path: &Path, sys: &BimoduleSystem) -> Result<DPotential> {
    read_json::<DPotentialSpec>(path)?.build(sys)
}

pub fn format_dpotential(a: &DPotential) -> String {
    to_json(&DPotentialSpec::from_potential(a))
}
