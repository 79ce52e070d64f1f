//! Independent reference computations used by the acceptance criteria.

use std::collections::BTreeSet;

use nilrep_core::{Field, Scalar};

pub type M3 = [[i64; 3]; 3];

pub fn m3_mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn m3_pow(a: &M3, e: i64) -> M3 {
    let base = if e < 0 { m3_inv_unitri(a) } else { *a };
    let mut out = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..e.unsigned_abs() {
        out = m3_mul(&out, &base);
    }
    out
}

/// Inverse of an upper unitriangular 3x3 integer matrix.
pub fn m3_inv_unitri(a: &M3) -> M3 {
    let (x, y, z) = (a[0][1], a[1][2], a[0][2]);
    [[1, -x, x * y - z], [0, 1, -y], [0, 0, 1]]
}

pub fn m3_comm(a: &M3, b: &M3) -> M3 {
    m3_mul(&m3_mul(&m3_inv_unitri(a), &m3_inv_unitri(b)), &m3_mul(a, b))
}

/// Faithful image of `a^x b^y c^z` with `a = 1 + E23`, `b = 1 + E12`, `c = 1 + E13`.
pub fn heis_rep(v: &[i64]) -> M3 {
    let a = [[1, 0, 0], [0, 1, 1], [0, 0, 1]];
    let b = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];
    let c = [[1, 0, 1], [0, 1, 0], [0, 0, 1]];
    m3_mul(&m3_mul(&m3_pow(&a, v[0]), &m3_pow(&b, v[1])), &m3_pow(&c, v[2]))
}

/// Univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct U {
    pub f: Field,
    pub c: Vec<Scalar>,
}

impl U {
    pub fn new(f: Field, mut c: Vec<Scalar>) -> U {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        U { f, c }
    }

    pub fn from_i64(f: Field, c: &[i64]) -> U {
        U::new(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn mul(&self, o: &U) -> U {
        if self.c.is_empty() || o.c.is_empty() {
            return U::new(self.f, vec![]);
        }
        let mut out = vec![self.f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        U::new(self.f, out)
    }

    pub fn rem(&self, d: &U) -> U {
        let mut r = self.c.clone();
        let lead = d.c.last().expect("nonzero divisor").inv();
        while r.len() >= d.c.len() {
            let k = &r[r.len() - 1] * &lead;
            let shift = r.len() - d.c.len();
            for (i, x) in d.c.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&k * x);
            }
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        U::new(self.f, r)
    }

    pub fn div_rem(&self, d: &U) -> (U, U) {
        let mut r = self.c.clone();
        let lead = d.c.last().expect("nonzero divisor").inv();
        let mut q = vec![self.f.zero(); r.len().saturating_sub(d.c.len()) + 1];
        while r.len() >= d.c.len() && !r.is_empty() {
            let k = &r[r.len() - 1] * &lead;
            let shift = r.len() - d.c.len();
            for (i, x) in d.c.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&k * x);
            }
            q[shift] = k;
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        (U::new(self.f, q), U::new(self.f, r))
    }

    /// `f(x^m)`.
    pub fn inflate(&self, m: usize) -> U {
        let mut c = vec![self.f.zero(); self.deg() * m + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * m] = x.clone();
        }
        U::new(self.f, c)
    }

    pub fn monic(&self) -> U {
        let l = self.c.last().expect("nonzero").inv();
        U::new(self.f, self.c.iter().map(|x| x * &l).collect())
    }
}

/// All monic polynomials of degree `d` over GF(p).
fn monics(p: u64, d: usize) -> Vec<U> {
    let f = Field::prime(p).expect("prime");
    let mut out = Vec::new();
    for code in 0..p.pow(d as u32) {
        let mut c: Vec<i64> = (0..d).map(|i| ((code / p.pow(i as u32)) % p) as i64).collect();
        c.push(1);
        out.push(U::from_i64(f, &c));
    }
    out
}

/// Brute-force irreducibility over GF(p): no monic divisor of degree ≤ deg/2.
pub fn irreducible_mod_p(u: &U, p: u64) -> bool {
    (1..=u.deg() / 2).all(|d| monics(p, d).iter().all(|m| !u.rem(m).c.is_empty()))
}

/// Distinct monic irreducible factors over GF(p), by trial division.
pub fn distinct_factors_mod_p(u: &U, p: u64) -> Vec<U> {
    let mut rest = u.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 1 {
        if 2 * d > rest.deg() {
            out.push(rest.clone());
            break;
        }
        for m in monics(p, d) {
            let mut hit = false;
            loop {
                let (q, r) = rest.div_rem(&m);
                if !r.c.is_empty() {
                    break;
                }
                rest = q;
                hit = true;
            }
            if hit {
                out.push(m);
            }
        }
        d += 1;
    }
    out
}

/// Pools of irreducible polynomials (not `x`) certified by brute force or by construction.
pub fn irreducible_pool(f: Field) -> Vec<U> {
    match f {
        Field::Prime(p) => {
            let mut pool = Vec::new();
            for d in 1..=3 {
                for m in monics(p, d) {
                    if !m.c[0].is_zero() && irreducible_mod_p(&m, p) {
                        pool.push(m);
                    }
                }
            }
            pool
        }
        Field::Rationals => {
            // x - a, x^2 - n and x^2 + n for non-square n > 0, x^3 - n for non-cube n
            let mut pool = Vec::new();
            for a in [-3, -2, -1, 1, 2, 3, 5] {
                pool.push(U::from_i64(f, &[-a, 1]));
            }
            for n in [2, 3, 5, 6, 7] {
                pool.push(U::from_i64(f, &[-n, 0, 1]));
            }
            for n in [1, 2, 3] {
                pool.push(U::from_i64(f, &[n, 0, 1]));
            }
            for n in [2, 3, 5] {
                pool.push(U::from_i64(f, &[-n, 0, 0, 1]));
            }
            pool
        }
    }
}

/// Lowest-degree monic `g` with `f | g(x^m)`: the generator of `(f) ∩ k[x^{±m}]`
/// when `f(0) ≠ 0`, found by linear dependence of `x^{mj} mod f`.
pub fn contraction_oracle(f: &U, m: usize, max_deg: usize) -> Option<U> {
    let field = f.f;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..=max_deg {
        let mut xc = vec![field.zero(); m * j + 1];
        xc[m * j] = field.one();
        let r = U::new(field, xc).rem(f);
        let mut v = r.c.clone();
        v.resize(f.deg(), field.zero());
        rows.push(v);
        if let Some(coeffs) = dependency(&rows) {
            return Some(U::new(field, coeffs).monic());
        }
    }
    None
}

/// Coefficients `c` with `Σ c_j rows[j] = 0` and `c_last = 1`, when the last
/// row depends on the earlier ones.
fn dependency(rows: &[Vec<Scalar>]) -> Option<Vec<Scalar>> {
    let n = rows.len();
    let f = rows[0].first().map(Scalar::field)?;
    let width = rows[0].len();
    // columns: the earlier rows; solve Σ_{j<n-1} c_j rows[j] = -rows[n-1]
    let mut aug: Vec<Vec<Scalar>> = (0..width)
        .map(|i| {
            let mut r: Vec<Scalar> = rows[..n - 1].iter().map(|row| row[i].clone()).collect();
            r.push(-&rows[n - 1][i]);
            r
        })
        .collect();
    let cols = n - 1;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..width).find(|&r| !aug[r][col].is_zero()) else { continue };
        aug.swap(row, p);
        let inv = aug[row][col].inv();
        for x in aug[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..width {
            if r != row && !aug[r][col].is_zero() {
                let k = aug[r][col].clone();
                for c in 0..=cols {
                    aug[r][c] = &aug[r][c] - &(&k * &aug[row][c]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut c = vec![f.zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        c[col] = aug[r][cols].clone();
    }
    c[n - 1] = f.one();
    Some(c)
}

/// Subgroup of a finite abelian group `Z_{n_1} × ... × Z_{n_k}` as a set, by closure.
pub fn span(mods: &[i64], gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    let zero = vec![0; mods.len()];
    set.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Vec<i64> = x.iter().zip(g).zip(mods).map(|((a, b), m)| (a + b).rem_euclid(*m)).collect();
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

pub fn set_product(mods: &[i64], a: &BTreeSet<Vec<i64>>, b: &BTreeSet<Vec<i64>>) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.iter().zip(y).zip(mods).map(|((p, q), m)| (p + q).rem_euclid(*m)).collect());
        }
    }
    out
}
