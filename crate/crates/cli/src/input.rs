//! Matrix text files: first line `D`, then `D` lines of `D` whitespace
//! separated entries written `re+imj`.

use std::fs;
use std::path::Path;

use fermisea::linalg::CMatrix;
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, InputError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| InputError::Io {
        path: name.clone(),
        source,
    })?;
    parse_matrix(&text).map_err(|(line, message)| InputError::Format {
        path: name,
        line,
        message,
    })
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, (usize, String)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or((1, "empty file".to_string()))?;
    let dim: usize = header
        .parse()
        .map_err(|_| (first, format!("expected the dimension, got {header:?}")))?;
    if dim == 0 {
        return Err((first, "dimension must be positive".into()));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let (line, content) = lines
            .next()
            .ok_or((first + row + 1, format!("expected {dim} rows, found {row}")))?;
        let entries: Vec<&str> = content.split_whitespace().collect();
        if entries.len() != dim {
            return Err((
                line,
                format!("expected {dim} entries, found {}", entries.len()),
            ));
        }
        for (col, entry) in entries.into_iter().enumerate() {
            let z: Complex64 = entry
                .parse()
                .map_err(|_| (line, format!("cannot parse {entry:?} as re+imj")))?;
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err((line, format!("non-finite entry {entry:?}")));
            }
            m[(row, col)] = z;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err((line, "trailing content after the matrix".into()));
    }
    Ok(m)
}

/// `"1,2,5"` as 1-based site indices, returned 0-based.
pub fn parse_sites(spec: &str) -> Result<Vec<usize>, String> {
    spec.split(',')
        .map(|s| {
            let s = s.trim();
            match s.parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("invalid site {s:?}: expected a 1-based index")),
                Ok(i) => Ok(i - 1),
            }
        })
        .collect()
}

/// Comma-separated list of values.
pub fn parse_list<T: std::str::FromStr>(spec: &str) -> Result<Vec<T>, String> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| format!("invalid list entry {s:?}"))
        })
        .collect()
}
