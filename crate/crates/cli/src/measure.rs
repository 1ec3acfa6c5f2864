//! Text form of spectral measures: `kind[:key=value,...]`.
//!
//! ```text
//! riesz:alpha=1,d=3
//! bessel:alpha=2,d=1
//! white:d=2
//! fbm:h1=0.7,h2=0.8
//! custom:path=density.csv,d=3
//! ```
//!
//! A custom table is a CSV file with columns `r,m`, read relative to
//! `base` when the path is relative.

use std::collections::BTreeMap;
use std::path::Path;

use fracwave_core::spectral::{RadialTable, SpectralMeasure};

use crate::error::{CliError, Result};

pub fn parse_measure(text: &str, base: Option<&Path>) -> Result<SpectralMeasure> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut args = BTreeMap::new();
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("measure `{text}`: expected key=value, got `{item}`")))?;
        args.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut take = |key: &str| args.remove(key);
    let num = |key: &str, v: Option<String>| -> Result<f64> {
        let v = v.ok_or_else(|| CliError::config(format!("measure `{text}`: missing `{key}`")))?;
        v.parse().map_err(|_| CliError::config(format!("measure `{text}`: `{key}` is not a number")))
    };
    let dim = |v: Option<String>| -> Result<usize> {
        let v = v.ok_or_else(|| CliError::config(format!("measure `{text}`: missing `d`")))?;
        v.parse().map_err(|_| CliError::config(format!("measure `{text}`: `d` is not a positive integer")))
    };
    let mu = match kind.trim() {
        "riesz" => SpectralMeasure::riesz(num("alpha", take("alpha"))?, dim(take("d"))?)?,
        "bessel" => SpectralMeasure::bessel(num("alpha", take("alpha"))?, dim(take("d"))?)?,
        "white" => SpectralMeasure::white(dim(take("d"))?)?,
        "fbm" => {
            let mut hs = Vec::new();
            while let Some(v) = take(&format!("h{}", hs.len() + 1)) {
                hs.push(num("h", Some(v))?);
            }
            SpectralMeasure::fbm_field(hs)?
        }
        "custom" => {
            let path = take("path").ok_or_else(|| CliError::config(format!("measure `{text}`: missing `path`")))?;
            let d = dim(take("d"))?;
            let path = match base {
                Some(b) if Path::new(&path).is_relative() => b.join(path),
                _ => Path::new(&path).to_path_buf(),
            };
            SpectralMeasure::custom(read_table(&path, d)?)
        }
        other => {
            return Err(CliError::config(format!(
                "unknown measure kind `{other}` (expected riesz, bessel, white, fbm or custom)"
            )))
        }
    };
    if let Some(k) = args.keys().next() {
        return Err(CliError::config(format!("measure `{text}`: unexpected key `{k}`")));
    }
    Ok(mu)
}

fn read_table(path: &Path, d: usize) -> Result<RadialTable> {
    let csv_err = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::config(format!("{}: missing column `{name}`", path.display())))
    };
    let (ir, im) = (col("r")?, col("m")?);
    let (mut r, mut m) = (Vec::new(), Vec::new());
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::config(format!("{}: row {} is not numeric", path.display(), line + 1)))
        };
        r.push(field(ir)?);
        m.push(field(im)?);
    }
    Ok(RadialTable::new(d, r, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_measures() {
        assert_eq!(parse_measure("riesz:alpha=1,d=3", None).unwrap(), SpectralMeasure::riesz(1.0, 3).unwrap());
        assert_eq!(parse_measure("bessel: alpha = 2 , d = 1", None).unwrap(), SpectralMeasure::bessel(2.0, 1).unwrap());
        assert_eq!(parse_measure("white:d=2", None).unwrap(), SpectralMeasure::white(2).unwrap());
        assert_eq!(
            parse_measure("fbm:h1=0.7,h2=0.8", None).unwrap(),
            SpectralMeasure::fbm_field(vec![0.7, 0.8]).unwrap()
        );
    }

    #[test]
    fn malformed_measures() {
        for bad in ["riesz:alpha=1", "riesz:alpha=4,d=3", "gauss:d=1", "white:d=2,alpha=1", "riesz:alpha", "white:d=x", "fbm"] {
            assert!(parse_measure(bad, None).is_err(), "{bad}");
        }
    }

    #[test]
    fn custom_table() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("m.csv"), "r,m\n0.5,2\n1,1\n2,0.5\n4,0.25\n").unwrap();
        let mu = parse_measure("custom:path=m.csv,d=1", Some(dir.path())).unwrap();
        assert!((mu.tail_exponent() - 1.0).abs() < 1e-12);
        assert!(parse_measure("custom:path=missing.csv,d=1", Some(dir.path())).is_err());
    }
}
