//! On-disk eigensystem cache: a line-oriented text format, written atomically.
//!
//! ```text
//! EIGSYS 1
//! level 11
//! n_max 500
//! precision 1e-8
//! forms 1
//! form 0 epsilon 1 weight 1.69e0 aq_deviation 0e0
//! lambda 0e0 1e0 -1.414e0 ...
//! ```
//! Floats use the shortest round-trip representation, so reading back is
//! bit-exact.

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::{Error, Result};
use crate::modsym::{EigenSystem, Newform};

pub const MAGIC: &str = "EIGSYS";
pub const FORMAT_VERSION: u32 = 1;

/// Cache file for level q with n_max coefficients.
pub fn cache_path(dir: &Path, q: u64, n_max: usize) -> PathBuf {
    dir.join(format!("eigsys_q{q}_n{n_max}.txt"))
}

pub fn write_eigensystem<W: Write>(es: &EigenSystem, mut w: W) -> io::Result<()> {
    writeln!(w, "{MAGIC} {FORMAT_VERSION}")?;
    writeln!(w, "level {}", es.level)?;
    writeln!(w, "n_max {}", es.n_max)?;
    writeln!(w, "precision {:e}", es.precision)?;
    writeln!(w, "forms {}", es.forms.len())?;
    for (i, f) in es.forms.iter().enumerate() {
        let weight = f.weight.map_or_else(|| "none".to_string(), |x| format!("{x:e}"));
        writeln!(w, "form {i} epsilon {} weight {weight} aq_deviation {:e}", f.epsilon, f.aq_deviation)?;
        write!(w, "lambda")?;
        for x in &f.lambda {
            write!(w, " {x:e}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}

fn bad(line: usize, what: impl std::fmt::Display) -> Error {
    Error::Cache(format!("line {line}: {what}"))
}

struct Lines<R> {
    inner: io::Lines<R>,
    no: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<String> {
        self.no += 1;
        match self.inner.next() {
            Some(l) => Ok(l?),
            None => Err(bad(self.no, "unexpected end of file")),
        }
    }

    /// Reads "key value" and parses the value.
    fn field<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let line = self.next_line()?;
        let no = self.no;
        let mut it = line.split_whitespace();
        if it.next() != Some(key) {
            return Err(bad(no, format!("expected {key:?}")));
        }
        let v = it.next().ok_or_else(|| bad(no, format!("missing value for {key}")))?;
        v.parse().map_err(|_| bad(no, format!("bad value {v:?} for {key}")))
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse().map_err(|_| bad(line, format!("bad number {tok:?}")))
}

pub fn read_eigensystem<R: BufRead>(r: R) -> Result<EigenSystem> {
    let mut lines = Lines { inner: r.lines(), no: 0 };
    let header = lines.next_line()?;
    let mut it = header.split_whitespace();
    if it.next() != Some(MAGIC) {
        return Err(bad(1, "not an eigensystem cache file"));
    }
    let version: u32 = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad(1, "missing version"))?;
    if version != FORMAT_VERSION {
        return Err(Error::Cache(format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let level: u64 = lines.field("level")?;
    let n_max: usize = lines.field("n_max")?;
    let precision: f64 = lines.field("precision")?;
    let count: usize = lines.field("forms")?;
    let mut forms = Vec::with_capacity(count);
    for i in 0..count {
        let line = lines.next_line()?;
        let no = lines.no;
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 8 || tok[0] != "form" || tok[2] != "epsilon" || tok[4] != "weight" || tok[6] != "aq_deviation" {
            return Err(bad(no, "malformed form header"));
        }
        if tok[1].parse::<usize>().ok() != Some(i) {
            return Err(bad(no, format!("expected form {i}")));
        }
        let epsilon: i8 = tok[3].parse().map_err(|_| bad(no, "bad epsilon"))?;
        let weight = if tok[5] == "none" { None } else { Some(parse_f64(tok[5], no)?) };
        let aq_deviation = parse_f64(tok[7], no)?;
        let line = lines.next_line()?;
        let no = lines.no;
        let mut it = line.split_whitespace();
        if it.next() != Some("lambda") {
            return Err(bad(no, "expected lambda"));
        }
        let lambda = it.map(|t| parse_f64(t, no)).collect::<Result<Vec<_>>>()?;
        if lambda.len() != n_max + 1 {
            return Err(bad(no, format!("{} coefficients, expected {}", lambda.len(), n_max + 1)));
        }
        forms.push(Newform { lambda, epsilon, weight, aq_deviation });
    }
    Ok(EigenSystem { level, n_max, precision, forms })
}

/// Writes through a temporary file in the target directory and renames it
/// into place; a failed write leaves any existing file untouched.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        write(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

pub fn save(path: &Path, es: &EigenSystem) -> Result<()> {
    write_atomic(path, |w| write_eigensystem(es, w))
}

pub fn load(path: &Path) -> Result<EigenSystem> {
    let f = fs::File::open(path)?;
    read_eigensystem(BufReader::new(f))
}

/// Loads the cached system for (q, n_max) or computes and stores it.
pub fn load_or_compute<F>(dir: &Path, q: u64, n_max: usize, compute: F) -> Result<EigenSystem>
where
    F: FnOnce() -> Result<EigenSystem>,
{
    let path = cache_path(dir, q, n_max);
    if path.exists() {
        let es = load(&path)?;
        if es.level == q && es.n_max == n_max {
            return Ok(es);
        }
    }
    let es = compute()?;
    save(&path, &es)?;
    Ok(es)
}
