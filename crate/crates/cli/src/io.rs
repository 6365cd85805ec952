use std::io::Write;
use std::path::Path;

use poaforge_core::PiecewiseInstance;

use crate::CliError;

/// Loads an instance JSON, mapping malformed content to a structured parse
/// error naming the path and offending field.
pub fn load_instance(path: &Path) -> Result<PiecewiseInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display()), 1))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        CliError::new(
            format!("parse error in {} at field `{}`: {}", path.display(), e.path(), e.inner()),
            1,
        )
    })
}

/// Pretty JSON plus a trailing newline, byte-deterministic for equal values.
pub fn to_json_string<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::new(format!("serialize error: {e}"), 2))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display()), 1))
}

/// 15 significant digits, the CSV number format.
pub fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

/// Writes a CSV (header plus rows of 15-significant-digit numbers) to the
/// given path or stdout.
pub fn emit_csv(
    out: Option<&Path>,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut body = String::new();
    body.push_str(&header.join(","));
    body.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| sig15(x)).collect();
        body.push_str(&cells.join(","));
        body.push('\n');
    }
    match out {
        Some(path) => write_file(path, &body),
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::new(format!("stdout error: {e}"), 1))?;
            Ok(())
        }
    }
}

/// Thread cap for parallel sweeps: `POAFORGE_THREADS` when set, otherwise
/// the machine's available parallelism.
pub fn thread_cap() -> usize {
    std::env::var("POAFORGE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Order-preserving parallel map with the [`thread_cap`] bound: results land
/// at their input index, so output bytes never depend on scheduling.
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = thread_cap().min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (items_chunk, out_chunk) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(|| {
                for (t, slot) in items_chunk.iter().zip(out_chunk.iter_mut()) {
                    *slot = Some(f(t));
                }
            });
        }
    });
    out.into_iter().map(|u| u.expect("every slot filled")).collect()
}
