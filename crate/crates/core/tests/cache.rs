use std::fs;
use std::io::{self, Write};

use fourth_moment::cache::*;
use fourth_moment::modsym::{EigenSystem, Newform};

fn sample() -> EigenSystem {
    let lam = |s: f64| (0..=30).map(|n| if n == 0 { 0.0 } else { (n as f64 * s).sin() * 1.7 + 1e-300 * n as f64 }).collect();
    EigenSystem {
        level: 37,
        n_max: 30,
        precision: 1e-8,
        forms: vec![
            Newform { lambda: lam(0.3), epsilon: -1, weight: Some(0.1 + 0.2), aq_deviation: -3.3e-17 },
            Newform { lambda: lam(std::f64::consts::PI), epsilon: 1, weight: None, aq_deviation: 0.0 },
        ],
    }
}

fn bits(es: &EigenSystem) -> Vec<u64> {
    let mut v = vec![es.level, es.n_max as u64, es.precision.to_bits()];
    for f in &es.forms {
        v.push(f.epsilon as u64);
        v.push(f.weight.map_or(u64::MAX, f64::to_bits));
        v.push(f.aq_deviation.to_bits());
        v.extend(f.lambda.iter().map(|x| x.to_bits()));
    }
    v
}

#[test]
fn round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = cache_path(dir.path(), 37, 30);
    let es = sample();
    save(&path, &es).unwrap();
    let back = load(&path).unwrap();
    assert_eq!(bits(&back), bits(&es));
}

#[test]
fn rejects_other_versions_and_garbage() {
    let mut buf = Vec::new();
    write_eigensystem(&sample(), &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let v2 = text.replacen("EIGSYS 1", "EIGSYS 2", 1);
    assert!(read_eigensystem(v2.as_bytes()).is_err());
    let truncated = &text[..text.len() / 2];
    assert!(read_eigensystem(truncated.as_bytes()).is_err());
    assert!(read_eigensystem("hello".as_bytes()).is_err());
}

/// Writes half of the payload and then fails.
fn failing_writer(es: &EigenSystem) -> impl FnOnce(&mut dyn Write) -> io::Result<()> + '_ {
    move |w| {
        let mut buf = Vec::new();
        write_eigensystem(es, &mut buf)?;
        w.write_all(&buf[..buf.len() / 2])?;
        w.flush()?;
        Err(io::Error::new(io::ErrorKind::Other, "simulated interruption"))
    }
}

#[test]
fn interrupted_write_keeps_previous_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = cache_path(dir.path(), 37, 30);
    let old = sample();
    save(&path, &old).unwrap();
    let before = fs::read(&path).unwrap();

    let mut new = sample();
    new.forms[0].epsilon = 1;
    assert!(write_atomic(&path, failing_writer(&new)).is_err());
    assert_eq!(fs::read(&path).unwrap(), before);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1, "temporary file left behind");

    let fresh = dir.path().join("missing.txt");
    assert!(write_atomic(&fresh, failing_writer(&new)).is_err());
    assert!(!fresh.exists());
}

#[test]
fn load_or_compute_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let first = load_or_compute(dir.path(), 37, 30, || Ok(sample())).unwrap();
    let second = load_or_compute(dir.path(), 37, 30, || panic!("should hit the cache")).unwrap();
    assert_eq!(bits(&first), bits(&second));
}
