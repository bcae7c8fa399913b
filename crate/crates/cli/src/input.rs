use std::path::Path;

use compoundkit::dynamics::SystemDef;
use compoundkit::io::parse_matrix;
use compoundkit::Matrix;
use serde_json::{Map, Value};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: &Path) -> Result<Matrix, CliError> {
    Ok(parse_matrix(&read(path)?)?)
}

/// A system given as a JSON file, inline JSON, or `name[:key=value,...]` for a built-in,
/// e.g. `thomas:b=0.1` or `rotation:c=2`.
pub fn load_system(spec: &str) -> Result<SystemDef, CliError> {
    let text = if Path::new(spec).is_file() {
        read(Path::new(spec))?
    } else if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        builtin_json(spec)?.to_string()
    };
    let sys: SystemDef = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("system spec {spec:?}: {e}")))?;
    sys.validate()?;
    Ok(sys)
}

fn builtin_json(spec: &str) -> Result<Value, CliError> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let mut obj = Map::new();
    obj.insert("tag".into(), "builtin".into());
    obj.insert("name".into(), name.trim().into());
    for pair in params.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got {pair:?}")))?;
        let value: Value = serde_json::from_str(v.trim())
            .map_err(|_| CliError::Usage(format!("parameter {k}: bad value {v:?}")))?;
        obj.insert(k.trim().into(), value);
    }
    Ok(Value::Object(obj))
}

/// Comma- or whitespace-separated numbers.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse::<f64>)
        .collect();
    match values {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("{what}: expected a list of numbers, got {text:?}"))),
    }
}

/// `t0,t1`.
pub fn parse_span(text: &str) -> Result<(f64, f64), CliError> {
    match parse_list(text, "time span")?[..] {
        [a, b] if a.is_finite() && b.is_finite() && b >= a => Ok((a, b)),
        _ => Err(CliError::Usage(format!("time span must be t0,t1 with t0 <= t1, got {text:?}"))),
    }
}

/// `t0:t1:count` for evenly spaced times, or an explicit list.
pub fn parse_times(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if let [a, b, n] = parts[..] {
        let bad = || CliError::Usage(format!("times: expected t0:t1:count, got {text:?}"));
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || !(b >= a) {
            return Err(bad());
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        return Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect());
    }
    parse_list(text, "times")
}

/// A frame given as `unit-square`, `identity`, `identity:K` or a matrix file.
pub fn load_frame(spec: &str, n: usize) -> Result<Matrix, CliError> {
    match spec {
        "unit-square" => {
            if n != 2 {
                return Err(CliError::Usage(format!("unit-square needs a planar system, got n = {n}")));
            }
            Ok(Matrix::identity(2))
        }
        "identity" => Ok(Matrix::identity(n)),
        s if s.starts_with("identity:") => {
            let k: usize = s["identity:".len()..]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad frame {s:?}")))?;
            if k == 0 || k > n {
                return Err(CliError::Usage(format!("identity:{k} needs 1 <= k <= {n}")));
            }
            Ok(Matrix::from_fn(n, k, |i, j| if i == j { 1.0 } else { 0.0 }))
        }
        path => load_matrix(Path::new(path)),
    }
}

/// `[d1, ...]` or `{"d": [...]}`.
pub fn load_certificate(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("certificate: {e}")))?;
    let list = match &value {
        Value::Object(o) => o.get("d").cloned().unwrap_or(Value::Null),
        v => v.clone(),
    };
    serde_json::from_value(list)
        .map_err(|_| CliError::Usage("certificate must be [d1, ...] or {\"d\": [...]}".into()))
}
