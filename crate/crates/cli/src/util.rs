use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qdesign::io::MatrixJson;
use qdesign::linalg::RealMatrix;
use qdesign::ComplexMatrix;
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input, flags or files.
    Input(String),
    /// A numerical routine failed on well-formed input.
    Numerical(String),
}

impl CliError {
    pub fn input(msg: impl Display) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<qdesign::Error> for CliError {
    fn from(e: qdesign::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: malformed JSON: {e}", path.display())))
}

pub fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::input(format!("malformed {what}: {e}")))
}

pub fn load_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    let json: MatrixJson = from_value(read_json(path)?, "matrix JSON")?;
    Ok(json.to_matrix()?)
}

pub fn load_real_matrix(path: &Path) -> CliResult<RealMatrix> {
    let json: qdesign::io::RealMatrixJson = from_value(read_json(path)?, "real matrix JSON")?;
    Ok(json.to_matrix()?)
}

pub fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("matrix serializes")
}

/// Writes `m` to `out` when given and returns the payload fields describing where it went.
pub fn place_matrix(payload: &mut serde_json::Map<String, Value>, m: &ComplexMatrix, out: Option<&PathBuf>) -> CliResult {
    match out {
        Some(path) => {
            let text = serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serializes");
            std::fs::write(path, text + "\n").map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            payload.insert("out".into(), Value::String(path.display().to_string()));
        }
        None => {
            payload.insert("matrix".into(), matrix_value(m));
        }
    }
    Ok(())
}

pub fn emit(v: &Value) -> CliResult {
    use std::io::Write;
    let text = serde_json::to_string(v).expect("payload serializes");
    match writeln!(std::io::stdout().lock(), "{text}") {
        // a closed pipe (e.g. `| head`) is the reader's choice, not a failure
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::input(format!("writing output: {e}"))),
        _ => Ok(()),
    }
}

/// Parses a comma-separated list.
pub fn parse_csv<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: Display,
{
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

/// Parses an angle such as `0.5`, `pi`, `-pi/6`, `3pi/12` or `3*pi/4`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if t.is_empty() {
        return Err("empty angle".into());
    }
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    };
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|e| format!("{s:?}: {e}"))?,
    };
    let den = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .ok_or_else(|| format!("{s:?}: expected '/<number>' after pi"))?
            .parse::<f64>()
            .map_err(|e| format!("{s:?}: {e}"))?,
    };
    let v = coef * std::f64::consts::PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not a finite angle"))
    }
}

pub fn parse_angles(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_angle).collect()
}

pub fn check_side(m: &ComplexMatrix, n: usize) -> CliResult {
    if n == 0 || m.nrows() != n * n || m.ncols() != n * n {
        return Err(CliError::input(format!("--n {n} needs a {0}x{0} matrix, got {1}x{2}", n * n, m.nrows(), m.ncols())));
    }
    Ok(())
}
