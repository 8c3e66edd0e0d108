//! File formats: point and matrix CSV, partitions, embeddings, corpora.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relaxation::EmbeddingMatrix;
use crate::rounding::CutPartition;
use crate::vectorizer::Document;
use crate::weights::PointSet;

fn read_rows(path: &Path, header: bool) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::file(path, format!("cannot read: {e}")))?;
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 1 + usize::from(header);
        let record = record.map_err(|e| Error::file(path, format!("row {row}: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| {
                    Error::file(
                        path,
                        format!("row {row}, column {}: {field:?} is not a finite number", c + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::file(path, "no data rows"));
    }
    Ok(rows)
}

/// One point per row, comma separated, optionally skipping a header row.
pub fn read_points_csv(path: &Path, header: bool) -> Result<PointSet> {
    let rows = read_rows(path, header)?;
    let dim = rows[0].len();
    if let Some(k) = rows.iter().position(|r| r.len() != dim) {
        return Err(Error::file(
            path,
            format!(
                "row {}: expected {dim} values, found {}",
                k + 1 + usize::from(header),
                rows[k].len()
            ),
        ));
    }
    PointSet::new(rows).map_err(|e| Error::file(path, e.to_string()))
}

/// `n` rows of `n` comma-separated reals.
pub fn read_matrix_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let rows = read_rows(path, false)?;
    let n = rows.len();
    if let Some(k) = rows.iter().position(|r| r.len() != n) {
        return Err(Error::file(
            path,
            format!("row {}: expected {n} values, found {}", k + 1, rows[k].len()),
        ));
    }
    Ok(rows)
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values
        .into_iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.points() {
        out.push_str(&join(p.iter().copied()));
        out.push('\n');
    }
    out
}

pub fn matrix_to_csv(rows: &[Vec<f64>]) -> String {
    rows.iter().map(|r| join(r.iter().copied()) + "\n").collect()
}

/// `index,sign,cluster` where cluster `A` holds the `+1` indices.
pub fn partition_to_csv(partition: &CutPartition) -> String {
    let mut out = String::from("index,sign,cluster\n");
    for (i, &s) in partition.signs.iter().enumerate() {
        let label = if s > 0 { "A" } else { "B" };
        out.push_str(&format!("{i},{s},{label}\n"));
    }
    out
}

pub fn labels_to_csv(labels: &[u8]) -> String {
    let mut out = String::from("index,label\n");
    for (i, l) in labels.iter().enumerate() {
        out.push_str(&format!("{i},{l}\n"));
    }
    out
}

/// One embedding column per row.
pub fn embedding_to_csv(v: &EmbeddingMatrix) -> String {
    (0..v.count())
        .map(|i| join(v.column(i).iter().copied()) + "\n")
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSidecar {
    pub ambient_dim: usize,
    pub count: usize,
    pub objective: f64,
    pub converged: bool,
    pub sweeps: usize,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::input(format!("cannot serialize: {e}")))
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::file(parent, e.to_string()))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::file(path, e.to_string()))
}

#[derive(Deserialize)]
struct JsonDocument {
    id: String,
    text: String,
}

/// A directory of `.txt` files (id = file stem, sorted by id) or a JSON-lines
/// file of `{"id": ..., "text": ...}` objects.
pub fn read_corpus(path: &Path) -> Result<Vec<Document>> {
    if path.is_dir() {
        let mut docs = Vec::new();
        let entries = fs::read_dir(path).map_err(|e| Error::file(path, e.to_string()))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::file(path, e.to_string()))?;
            let p = entry.path();
            if p.extension().and_then(|e| e.to_str()) != Some("txt") {
                continue;
            }
            let id = p
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::file(&p, "file name is not valid UTF-8"))?
                .to_string();
            let text = fs::read_to_string(&p).map_err(|e| Error::file(&p, e.to_string()))?;
            docs.push(Document { id, text });
        }
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        if docs.is_empty() {
            return Err(Error::file(path, "no .txt documents found"));
        }
        Ok(docs)
    } else {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e.to_string()))?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(k, l)| {
                serde_json::from_str::<JsonDocument>(l)
                    .map(|d| Document { id: d.id, text: d.text })
                    .map_err(|e| Error::file(path, format!("row {}: {e}", k + 1)))
            })
            .collect()
    }
}

pub fn read_phrase_file(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e.to_string()))?;
    Ok(crate::vectorizer::Lexicons::parse_phrase_list(&text))
}
