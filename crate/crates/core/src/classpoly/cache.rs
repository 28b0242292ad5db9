//! Plain-text on-disk cache of class polynomials, one record per line:
//! `D h c_{h-1} ... c_0` (the leading 1 is implicit).

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use super::ClassPoly;
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "CERT_CACHE_DIR";
pub const CACHE_FILE: &str = "classpoly.txt";

#[derive(Debug)]
pub struct ClassPolyCache {
    path: PathBuf,
    entries: Mutex<HashMap<u64, ClassPoly>>,
}

fn parse_line(line: &str) -> Option<ClassPoly> {
    let mut fields = line.split_whitespace();
    let d: u64 = fields.next()?.parse().ok()?;
    let h: usize = fields.next()?.parse().ok()?;
    let mut high_to_low = fields.map(|f| f.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>()?;
    if high_to_low.len() != h {
        return None;
    }
    high_to_low.reverse();
    high_to_low.push(BigInt::one());
    Some(ClassPoly {
        d,
        h,
        coeffs: high_to_low,
    })
}

fn format_line(poly: &ClassPoly) -> String {
    let mut line = format!("{} {}", poly.d, poly.h);
    for c in poly.coeffs[..poly.h].iter().rev() {
        line.push(' ');
        line.push_str(&c.to_string());
    }
    line
}

impl ClassPolyCache {
    /// Opens (or prepares to create) `dir/classpoly.txt`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        if path.exists() {
            let text =
                fs::read_to_string(&path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let poly = parse_line(line).ok_or_else(|| {
                    Error::Cache(format!("{}:{}: malformed record", path.display(), lineno + 1))
                })?;
                entries.insert(poly.d, poly);
            }
        }
        Ok(Self {
            path,
            entries: Mutex::new(entries),
        })
    }

    /// Cache rooted at `$CERT_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::open(dir).map(Some),
            _ => Ok(None),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, d: u64) -> Option<ClassPoly> {
        self.entries.lock().expect("cache poisoned").get(&d).cloned()
    }

    /// Appends a record unless `d` is already present.
    pub fn insert(&self, poly: &ClassPoly) -> Result<()> {
        let mut entries = self.entries.lock().expect("cache poisoned");
        if entries.contains_key(&poly.d) {
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))?;
        writeln!(file, "{}", format_line(poly))
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))?;
        entries.insert(poly.d, poly.clone());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let poly = ClassPoly {
            d: 4,
            h: 1,
            coeffs: vec![BigInt::from(-1728), BigInt::one()],
        };
        assert_eq!(format_line(&poly), "4 1 -1728");
        assert_eq!(parse_line("4 1 -1728"), Some(poly));
        assert_eq!(parse_line("4 2 -1728"), None);
    }
}
