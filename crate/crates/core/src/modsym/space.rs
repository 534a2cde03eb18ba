//! Manin symbols for Γ₀(q), q prime: the plus-quotient, its cuspidal
//! subspace and exact Hecke matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::heilbronn::{heilbronn_cremona, merel_set, Mat2};
use super::linalg::{self, q, QMatrix};
use crate::arith::{gcd, is_prime, mod_inverse};
use crate::error::{Error, Result};

/// Genus of X₀(q) for prime q.
pub fn genus_formula(q: u64) -> u64 {
    if q < 5 {
        return 0;
    }
    let nu2 = if q % 4 == 1 { 2 } else { 0 };
    let nu3 = if q % 3 == 1 { 2 } else { 0 };
    // g = (q+1)/12 − ν₂/4 − ν₃/3, computed over the denominator 12
    ((q as i64 + 1 - 3 * nu2 - 4 * nu3) / 12) as u64
}

/// Hecke matrix on the cuspidal plus-subspace, exact over Q.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeMatrix {
    pub n: u64,
    pub entries: QMatrix,
}

impl HeckeMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_integral(&self) -> bool {
        linalg::is_integral(&self.entries)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        linalg::to_f64(&self.entries)
    }

    /// Entries as integers, when integral.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
            .collect()
    }

    pub fn mul(&self, other: &HeckeMatrix) -> QMatrix {
        linalg::mat_mul(&self.entries, &other.entries)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.dim()).map(|i| self.entries[i][i].clone()).sum()
    }
}

/// Weight-2 Manin symbols for Γ₀(q) modulo the two- and three-term
/// relations and the star involution.
#[derive(Debug, Clone)]
pub struct ManinSymbolSpace {
    level: u64,
    inv: Vec<u64>,
    /// Sparse relation rows (symbol index, coefficient): x + xS, x + xT + xT², x − x·star.
    relations: Vec<Vec<(usize, i64)>>,
    /// star: (c:d) ↦ (−c:d), as a permutation of symbol indices.
    star: Vec<usize>,
    /// Generator symbols of the plus-quotient.
    gens: Vec<usize>,
    /// Every symbol as an integer vector in generator coordinates, over `denom`.
    proj: Vec<Vec<i64>>,
    denom: i64,
    /// Cuspidal basis in generator coordinates; basis i is 1 at `cusp_free[i]`.
    cusp_basis: QMatrix,
    cusp_free: Vec<usize>,
    full_rank: usize,
}

/// Position of (c:d) in the projective line over F_q: (1:u) ↦ u, (0:1) ↦ q.
fn p1_index(inv: &[u64], level: u64, c: i64, d: i64) -> Option<usize> {
    let c = c.rem_euclid(level as i64) as u64;
    let d = d.rem_euclid(level as i64) as u64;
    if c == 0 {
        return if d == 0 { None } else { Some(level as usize) };
    }
    Some(((d * inv[c as usize]) % level) as usize)
}

/// Union-find with signs: x_i = sign · x_parent.
struct SignedUnion {
    parent: Vec<usize>,
    sign: Vec<i64>,
    zero: Vec<bool>,
}

impl SignedUnion {
    fn new(n: usize) -> Self {
        SignedUnion { parent: (0..n).collect(), sign: vec![1; n], zero: vec![false; n] }
    }

    fn find(&mut self, i: usize) -> (usize, i64) {
        let p = self.parent[i];
        if p == i {
            return (i, 1);
        }
        let (r, s) = self.find(p);
        self.parent[i] = r;
        self.sign[i] *= s;
        (r, self.sign[i])
    }

    /// Impose x_a = s·x_b.
    fn union(&mut self, a: usize, b: usize, s: i64) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        let rel = sa * s * sb; // x_ra = rel · x_rb
        if ra == rb {
            if rel == -1 {
                self.zero[ra] = true;
            }
            return;
        }
        self.parent[ra] = rb;
        self.sign[ra] = rel;
        self.zero[rb] |= self.zero[ra];
    }
}

/// Quotient of Q^{#symbols} by the given relations. Returns generator
/// symbols, projection rows over Q and the rank.
fn quotient(
    n_symbols: usize,
    two_term: &[(usize, usize, i64)],
    three_term: &[[usize; 3]],
) -> (Vec<usize>, QMatrix) {
    let mut uf = SignedUnion::new(n_symbols);
    for &(a, b, s) in two_term {
        uf.union(a, b, s);
    }
    let mut class_of = vec![usize::MAX; n_symbols];
    let mut class_root = Vec::new();
    for i in 0..n_symbols {
        let (r, _) = uf.find(i);
        if !uf.zero[r] && class_of[r] == usize::MAX {
            class_of[r] = class_root.len();
            class_root.push(r);
        }
    }
    // symbol ↦ (class, sign), or None when forced to 0
    let reduce = |uf: &mut SignedUnion, i: usize| -> Option<(usize, i64)> {
        let (r, s) = uf.find(i);
        if uf.zero[r] {
            None
        } else {
            Some((class_of[r], s))
        }
    };
    let k = class_root.len();
    let mut rows: QMatrix = Vec::new();
    for t in three_term {
        let mut row = vec![0i64; k];
        for &i in t {
            if let Some((c, s)) = reduce(&mut uf, i) {
                row[c] += s;
            }
        }
        if row.iter().any(|&x| x != 0) {
            rows.push(row.into_iter().map(q).collect());
        }
    }
    let pivots = linalg::rref(&mut rows, k);
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let dim = free.len();
    // each class in free coordinates
    let mut class_vec: QMatrix = vec![vec![BigRational::zero(); dim]; k];
    for (j, &f) in free.iter().enumerate() {
        class_vec[f][j] = BigRational::one();
    }
    for (r, &p) in pivots.iter().enumerate() {
        for (j, &f) in free.iter().enumerate() {
            class_vec[p][j] = -rows[r][f].clone();
        }
    }
    let proj = (0..n_symbols)
        .map(|i| match reduce(&mut uf, i) {
            None => vec![BigRational::zero(); dim],
            Some((c, s)) => class_vec[c].iter().map(|x| x * q(s)).collect(),
        })
        .collect();
    let gens = free.iter().map(|&f| class_root[f]).collect();
    (gens, proj)
}

impl ManinSymbolSpace {
    /// Builds the space for prime q. Primes below 11 give an empty cuspidal space.
    pub fn new(level: u64) -> Result<Self> {
        if !is_prime(level) {
            return Err(Error::NotPrime(level));
        }
        if level > 1_000_000 {
            return Err(Error::InvalidArgument(format!("level {level} too large")));
        }
        let mut inv = vec![0u64; level as usize];
        for (c, slot) in inv.iter_mut().enumerate().skip(1) {
            *slot = mod_inverse(c as i64, level).expect("prime modulus");
        }
        let ns = level as usize + 1;
        let sym = |i: usize| -> (i64, i64) {
            if i == level as usize {
                (0, 1)
            } else {
                (1, i as i64)
            }
        };
        let idx = |c: i64, d: i64| p1_index(&inv, level, c, d).expect("nonzero point");
        let mut relations = Vec::new();
        let mut two_s = Vec::new();
        let mut two_star = Vec::new();
        let mut three = Vec::new();
        let mut star = Vec::with_capacity(ns);
        for i in 0..ns {
            let (c, d) = sym(i);
            let s = idx(d, -c);
            let t1 = idx(d, -c - d);
            let t2 = {
                let (c1, d1) = (d, -c - d);
                idx(d1, -c1 - d1)
            };
            let e = idx(-c, d);
            star.push(e);
            two_s.push((i, s, -1));
            two_star.push((i, e, 1));
            three.push([i, t1, t2]);
            relations.push(vec![(i, 1), (s, 1)]);
            relations.push(vec![(i, 1), (t1, 1), (t2, 1)]);
            relations.push(vec![(i, 1), (e, -1)]);
        }
        let full_rank = quotient(ns, &two_s, &three).0.len();
        let mut two = two_s;
        two.extend(two_star);
        let (gens, proj_q) = quotient(ns, &two, &three);
        let dim = gens.len();

        let denom = proj_q
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let denom_q = BigRational::from_integer(denom.clone());
        let proj: Vec<Vec<i64>> = proj_q
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| (x * &denom_q).to_integer().to_i64().expect("projection entry fits i64"))
                    .collect()
            })
            .collect();

        // boundary: (c:d) ↦ [cusp(c)] − [cusp(d)], cusp(x) = ∞ if q | x else 0
        let boundary_of = |i: usize| -> [i64; 2] {
            let (c, d) = sym(i);
            let mut v = [0i64; 2];
            v[usize::from(c.rem_euclid(level as i64) != 0)] += 1;
            v[usize::from(d.rem_euclid(level as i64) != 0)] -= 1;
            v
        };
        let bmat: QMatrix = (0..2)
            .map(|r| gens.iter().map(|&g| q(boundary_of(g)[r])).collect())
            .collect();
        let (cusp_basis, cusp_free) = linalg::kernel(&bmat, dim);

        Ok(ManinSymbolSpace {
            level,
            inv,
            relations,
            star,
            gens,
            proj,
            denom: denom.to_i64().expect("denominator fits i64"),
            cusp_basis,
            cusp_free,
            full_rank,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn symbol_count(&self) -> usize {
        self.level as usize + 1
    }

    /// (c, d) representative of symbol i.
    pub fn symbol(&self, i: usize) -> (u64, u64) {
        if i == self.level as usize {
            (0, 1)
        } else {
            (1, i as u64)
        }
    }

    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        p1_index(&self.inv, self.level, c, d)
    }

    pub fn relations(&self) -> &[Vec<(usize, i64)>] {
        &self.relations
    }

    pub fn star(&self) -> &[usize] {
        &self.star
    }

    /// Rank of the quotient by the two- and three-term relations only (2g+1).
    pub fn full_quotient_rank(&self) -> usize {
        self.full_rank
    }

    /// Rank of the plus-quotient (g+1).
    pub fn plus_quotient_rank(&self) -> usize {
        self.gens.len()
    }

    pub fn cuspidal_plus_dimension(&self) -> usize {
        self.cusp_basis.len()
    }

    /// True when the cuspidal space is zero (q ∈ {2,3,5,7,13}).
    pub fn is_empty(&self) -> bool {
        self.cusp_basis.is_empty()
    }

    /// Symbol i in plus-quotient coordinates, scaled by `denom()`.
    pub fn projection(&self, i: usize) -> &[i64] {
        &self.proj[i]
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Boundary map on plus-quotient coordinates (2 × rank).
    pub fn boundary_of_symbol(&self, i: usize) -> [i64; 2] {
        let (c, d) = self.symbol(i);
        let mut v = [0i64; 2];
        v[usize::from(c % self.level != 0)] += 1;
        v[usize::from(d % self.level != 0)] -= 1;
        v
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Σ_{h} proj(x·h) for generator symbol x, as an integer vector over `denom`.
    fn apply_matrices(&self, matrices: &[Mat2], sym: usize, acc: &mut [i64]) {
        let (u, v) = self.symbol(sym);
        let (u, v) = (u as i64, v as i64);
        let ql = self.level as i64;
        for m in matrices {
            let c = (u * (m[0] % ql) + v * (m[2] % ql)).rem_euclid(ql);
            let d = (u * (m[1] % ql) + v * (m[3] % ql)).rem_euclid(ql);
            if let Some(j) = p1_index(&self.inv, self.level, c, d) {
                for (a, b) in acc.iter_mut().zip(&self.proj[j]) {
                    *a += b;
                }
            }
        }
    }

    /// The matrix set realizing T_n (or U_q for n = q).
    pub fn hecke_matrices(&self, n: u64) -> Result<Vec<Mat2>> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        if n != self.level && gcd(n, self.level) != 1 {
            return Err(Error::InvalidArgument(format!(
                "Hecke index {n} shares a factor with level {}",
                self.level
            )));
        }
        if n != self.level && is_prime(n) {
            Ok(heilbronn_cremona(n as i64))
        } else {
            Ok(merel_set(n as i64))
        }
    }

    /// T_n on the whole plus-quotient (columns are images of generators).
    pub fn hecke_on_quotient(&self, n: u64) -> Result<QMatrix> {
        let mats = self.hecke_matrices(n)?;
        self.hecke_on_quotient_with(&mats)
    }

    pub fn hecke_on_quotient_with(&self, mats: &[Mat2]) -> Result<QMatrix> {
        let dim = self.gens.len();
        let mut cols = Vec::with_capacity(dim);
        for &g in &self.gens {
            let mut acc = vec![0i64; dim];
            self.apply_matrices(mats, g, &mut acc);
            cols.push(acc);
        }
        let den = q(self.denom);
        Ok((0..dim)
            .map(|r| (0..dim).map(|c| q(cols[c][r]) / &den).collect())
            .collect())
    }

    /// Restriction of a plus-quotient operator to the cuspidal subspace.
    pub fn restrict_to_cuspidal(&self, t: &QMatrix) -> QMatrix {
        let g = self.cusp_basis.len();
        let images: Vec<Vec<BigRational>> = self
            .cusp_basis
            .iter()
            .map(|b| {
                t.iter()
                    .map(|row| row.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y))
                    .collect()
            })
            .collect();
        (0..g)
            .map(|r| (0..g).map(|c| images[c][self.cusp_free[r]].clone()).collect())
            .collect()
    }

    /// T_n on the cuspidal plus-subspace in floating point (row-major);
    /// equal to `hecke_matrix(n).to_f64()` up to rounding, but cheaper.
    pub fn hecke_cuspidal_f64(&self, n: u64) -> Result<Vec<Vec<f64>>> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let mats = self.hecke_matrices(n)?;
        let dim = self.gens.len();
        let cols: Vec<Vec<i64>> = self
            .gens
            .iter()
            .map(|&g| {
                let mut acc = vec![0i64; dim];
                self.apply_matrices(&mats, g, &mut acc);
                acc
            })
            .collect();
        let den = self.denom as f64;
        let g = self.cusp_basis.len();
        let basis: Vec<Vec<f64>> = self.cusp_basis.iter().map(|b| b.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        Ok((0..g)
            .map(|r| {
                let row = self.cusp_free[r];
                (0..g)
                    .map(|c| basis[c].iter().zip(&cols).map(|(b, col)| b * col[row] as f64).sum::<f64>() / den)
                    .collect()
            })
            .collect())
    }

    /// Matrix of T_n on the cuspidal plus-subspace.
    pub fn hecke_matrix(&self, n: u64) -> Result<HeckeMatrix> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        if n == 1 {
            return Ok(HeckeMatrix { n, entries: linalg::identity(self.cuspidal_plus_dimension()) });
        }
        let t = self.hecke_on_quotient(n)?;
        Ok(HeckeMatrix { n, entries: self.restrict_to_cuspidal(&t) })
    }
}

/// Builds the Manin-symbol space for prime q.
pub fn build_space(q: u64) -> Result<ManinSymbolSpace> {
    ManinSymbolSpace::new(q)
}

/// Dimension of the cuspidal plus-subspace, i.e. the number of newforms.
pub fn cuspidal_plus_dimension(space: &ManinSymbolSpace) -> usize {
    space.cuspidal_plus_dimension()
}

/// Matrix of the n-th Hecke operator on the cuspidal plus-subspace.
pub fn hecke_matrix(space: &ManinSymbolSpace, n: u64) -> Result<HeckeMatrix> {
    space.hecke_matrix(n)
}
