use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::{HarnessError, Result};
use crate::experiments::RunOutput;

/// Writes every table of `run` into `dir`. CSV runs get a sidecar
/// `<command>_meta.json` since CSV has nowhere to keep metadata.
pub fn write_run(run: &RunOutput, dir: &Path, format: Format, plot_script: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    // Re-validate everything before the first byte is written.
    for table in &run.tables {
        table.validate()?;
    }
    let mut written = Vec::new();
    for table in &run.tables {
        written.push(table.write(dir, format, &run.meta)?);
    }
    if format == Format::Csv {
        let mut meta = run.meta.clone();
        let tables: Map<String, Value> =
            run.tables.iter().map(|t| (t.name.clone(), Value::Object(t.meta.clone()))).collect();
        meta.insert("tables".into(), Value::Object(tables));
        let path = dir.join(format!("{}_meta.json", run.experiment.name()));
        let mut text = serde_json::to_string_pretty(&Value::Object(meta)).expect("JSON values always serialize");
        text.push('\n');
        fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
        written.push(path);
    }
    if plot_script {
        let names: Vec<String> = run.tables.iter().map(|t| format!("{}.{}", t.name, format.extension())).collect();
        let path = dir.join(format!("plot_{}.py", run.experiment.name()));
        fs::write(&path, plot_script_text(run.experiment.name(), &names)).map_err(|e| HarnessError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// A matplotlib script that plots every column against the first, one
/// panel per data file.
pub fn plot_script_text(command: &str, files: &[String]) -> String {
    let list: Vec<String> = files.iter().map(|f| format!("    {f:?},")).collect();
    format!(
        r#"#!/usr/bin/env python3
"""Plots the tables written by `multipath {command}`."""
import csv
import json
import pathlib
import sys

import matplotlib.pyplot as plt

HERE = pathlib.Path(__file__).resolve().parent
FILES = [
{files}
]


def load(path):
    if path.suffix == ".json":
        rows = json.loads(path.read_text())["rows"]
        columns = list(rows[0]) if rows else []
        return columns, [[float(r[c]) for c in columns] for r in rows]
    with path.open(newline="") as f:
        reader = csv.reader(f)
        columns = next(reader)
        return columns, [[float(v) for v in row] for row in reader]


def main():
    fig, axes = plt.subplots(len(FILES), 1, figsize=(7, 3 * len(FILES)), squeeze=False)
    for ax, name in zip(axes[:, 0], FILES):
        columns, rows = load(HERE / name)
        xs = [r[0] for r in rows]
        for i, column in enumerate(columns[1:], start=1):
            ax.plot(xs, [r[i] for r in rows], label=column)
        ax.set_xlabel(columns[0])
        ax.set_title(name)
        ax.legend()
    fig.tight_layout()
    out = HERE / "{command}.png"
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    sys.exit(main())
"#,
        command = command,
        files = list.join("\n"),
    )
}
