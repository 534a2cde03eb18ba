//! Matrix sets realizing Hecke operators on weight-2 Manin symbols.

/// Integer 2×2 matrix [a b; c d].
pub type Mat2 = [i64; 4];

/// Heilbronn matrices of determinant p (prime), continued-fraction
/// construction. Together they realize T_p on Manin symbols for p ∤ level.
pub fn heilbronn_cremona(p: i64) -> Vec<Mat2> {
    assert!(p >= 2);
    if p == 2 {
        return vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]];
    }
    let mut out = vec![[1, 0, 0, p]];
    let half = p / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let qq = round_div(a, b);
            let c = a - b * qq;
            a = -b;
            b = c;
            let x3 = qq * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = qq * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

/// Nearest integer to a/b, ties away from zero.
fn round_div(a: i64, b: i64) -> i64 {
    let q = a as f64 / b as f64;
    q.round() as i64
}

/// X_n = {[a b; c d] : ad − bc = n, a > b ≥ 0, d > c ≥ 0}. Realizes T_n
/// for gcd(n, level) = 1 and U_q for n = q (images outside P¹ dropped).
pub fn merel_set(n: i64) -> Vec<Mat2> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let r = a * d - n;
            if r < 0 {
                continue;
            }
            if r == 0 {
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
            } else {
                let mut b = 1;
                while b < a && b <= r {
                    if r % b == 0 && r / b < d {
                        out.push([a, b, r / b, d]);
                    }
                    b += 1;
                }
            }
        }
    }
    out
}
