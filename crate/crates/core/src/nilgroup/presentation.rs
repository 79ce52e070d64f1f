//! Consistent polycyclic presentations and collection from the left.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector of a collected word `g_1^{a_1} ... g_n^{a_n}`.
pub type GroupElement = Vec<i64>;

/// A polycyclic presentation refining a central series: for `i < j` every
/// conjugate `g_j^{g_i}` has the form `g_j * w` with `w` in later generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcPresentation {
    pub names: Vec<String>,
    /// Relative orders; 0 marks an infinite cyclic factor.
    pub orders: Vec<u64>,
    /// `g_i^{e_i}` for torsion generators.
    powers: Vec<GroupElement>,
    /// `conj[i][j] = g_j^{g_i} = g_i^{-1} g_j g_i` for `j > i`.
    conj: Vec<Vec<GroupElement>>,
    /// `conj_inv[i][j] = g_j^{g_i^{-1}}`.
    conj_inv: Vec<Vec<GroupElement>>,
    pub class_bound: usize,
}

impl PcPresentation {
    /// Builds and validates a presentation. Missing conjugation relations
    /// mean the generators commute; missing powers of torsion generators are
    /// trivial.
    pub fn new(
        names: Vec<String>,
        orders: Vec<u64>,
        powers: BTreeMap<usize, GroupElement>,
        conj: BTreeMap<(usize, usize), GroupElement>,
        class_bound: usize,
    ) -> Result<PcPresentation> {
        let n = names.len();
        if orders.len() != n {
            return Err(Error::InvalidInput("one relative order per generator".into()));
        }
        let bad = |m: String| Err(Error::InconsistentPresentation(m));
        let id = vec![0i64; n];
        let mut pw = vec![id.clone(); n];
        for (&i, w) in &powers {
            if i >= n || orders[i] == 0 {
                return bad(format!("power relation for non-torsion generator {i}"));
            }
            if w.len() != n || w[..=i].iter().any(|&e| e != 0) {
                return bad(format!("power of {} must involve only later generators", names[i]));
            }
            pw[i] = w.clone();
        }
        let mut cj = vec![vec![id.clone(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = match conj.get(&(i, j)) {
                    Some(w) => w.clone(),
                    None => {
                        let mut g = id.clone();
                        g[j] = 1;
                        g
                    }
                };
                if w.len() != n || w[..j].iter().any(|&e| e != 0) || w[j] != 1 {
                    return bad(format!(
                        "{}^{} must be {} times later generators",
                        names[j], names[i], names[j]
                    ));
                }
                cj[i][j] = w;
            }
        }
        for (&(i, j), _) in &conj {
            if i >= j || j >= n {
                return bad(format!("conjugation relation ({i},{j}) out of order"));
            }
        }
        for (i, w) in pw.iter().enumerate() {
            if orders[i] > 0 && w.iter().enumerate().any(|(k, &e)| orders[k] > 0 && (e < 0 || e as u64 >= orders[k])) {
                return bad(format!("power word of {} is not in normal form", names[i]));
            }
        }
        let mut pres = PcPresentation {
            names,
            orders,
            powers: pw,
            conj: cj,
            conj_inv: vec![vec![id; n]; n],
            class_bound,
        };
        pres.normalize_words()?;
        pres.compute_inverse_conjugates();
        pres.check_consistency()?;
        let class = super::chain::nilpotency_class(&std::sync::Arc::new(pres.clone()));
        if class > pres.class_bound {
            return bad(format!("nilpotency class {class} exceeds declared bound {}", pres.class_bound));
        }
        Ok(pres)
    }

    fn normalize_words(&mut self) -> Result<()> {
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let w = &self.conj[i][j];
                if w.iter().enumerate().any(|(k, &e)| self.orders[k] > 0 && (e < 0 || e as u64 >= self.orders[k])) {
                    return Err(Error::InconsistentPresentation(format!(
                        "conjugate {}^{} is not in normal form",
                        self.names[j], self.names[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Solves `y^{g_i} = g_j` from the last generator down.
    fn compute_inverse_conjugates(&mut self) {
        let n = self.len();
        for i in (0..n).rev() {
            for j in (i + 1..n).rev() {
                // conj[i][j] = g_j * u with u in later generators
                let mut u = self.conj[i][j].clone();
                u[j] = 0;
                let uinv = self.inv(&u);
                let pre = self.apply_inverse_conj(i, &uinv);
                let mut gj = vec![0; n];
                gj[j] = 1;
                self.conj_inv[i][j] = self.mul(&gj, &pre);
            }
        }
    }

    /// Image of `x` (supported on generators after `i`) under `y -> y^{g_i^{-1}}`.
    fn apply_inverse_conj(&self, i: usize, x: &[i64]) -> GroupElement {
        let mut acc = self.identity();
        for (k, &e) in x.iter().enumerate() {
            if e != 0 {
                acc = self.mul(&acc, &self.pow(&self.conj_inv[i][k], e));
            }
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn identity(&self) -> GroupElement {
        vec![0; self.len()]
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut g = self.identity();
        g[i] = 1;
        g
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.len()).map(|i| self.generator(i)).collect()
    }

    pub fn is_identity(x: &[i64]) -> bool {
        x.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero exponent, or `len()` for the identity.
    pub fn depth(&self, x: &[i64]) -> usize {
        x.iter().position(|&e| e != 0).unwrap_or(self.len())
    }

    /// Hirsch number: the number of infinite cyclic factors.
    pub fn hirsch(&self) -> usize {
        self.orders.iter().filter(|&&o| o == 0).count()
    }

    /// Conjugate of the element `t` (supported after `k`) by `g_k^b`.
    fn conj_by_power(&self, k: usize, t: &[i64], b: i64) -> GroupElement {
        if b == 0 || PcPresentation::is_identity(t) {
            return t.to_vec();
        }
        let table = if b > 0 { &self.conj[k] } else { &self.conj_inv[k] };
        if b.abs() <= 16 {
            let mut x = t.to_vec();
            for _ in 0..b.abs() {
                x = self.apply_images(table, &x, k);
            }
            return x;
        }
        // images of the generators after k under conjugation by g_k^{±1},
        // raised to |b| by repeated squaring of the automorphism
        let n = self.len();
        let mut base: Vec<GroupElement> = (0..n).map(|j| if j > k { table[j].clone() } else { self.generator(j) }).collect();
        let mut acc: Vec<GroupElement> = (0..n).map(|j| self.generator(j)).collect();
        let mut e = b.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = (0..n).map(|j| if j > k { self.apply_images(&base, &acc[j], k) } else { acc[j].clone() }).collect();
            }
            e >>= 1;
            if e > 0 {
                base = (0..n).map(|j| if j > k { self.apply_images(&base, &base[j], k) } else { base[j].clone() }).collect();
            }
        }
        self.apply_images(&acc, t, k)
    }

    fn apply_images(&self, images: &[GroupElement], x: &[i64], k: usize) -> GroupElement {
        let mut out = self.identity();
        for (j, &e) in x.iter().enumerate().skip(k + 1) {
            if e != 0 {
                out = self.mul(&out, &self.pow(&images[j], e));
            }
        }
        out
    }

    /// `x * g_k^b`.
    pub fn mul_gen_pow(&self, x: &[i64], k: usize, b: i64) -> GroupElement {
        if b == 0 {
            return x.to_vec();
        }
        let n = self.len();
        let mut tail = vec![0; n];
        tail[k + 1..].copy_from_slice(&x[k + 1..]);
        let tail = self.conj_by_power(k, &tail, b);
        let mut a = x[k] + b;
        let mut rest = tail;
        if self.orders[k] > 0 {
            let e = self.orders[k] as i64;
            let q = a.div_euclid(e);
            a = a.rem_euclid(e);
            if q != 0 {
                let w = self.pow(&self.powers[k], q);
                rest = self.mul(&w, &rest);
            }
        }
        let mut out = x[..k].to_vec();
        out.push(a);
        out.extend_from_slice(&rest[k + 1..]);
        out
    }

    /// Normal form of an exponent vector whose entries may exceed the relative orders.
    pub fn normalize(&self, x: &[i64]) -> GroupElement {
        self.mul(&self.identity(), x)
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> GroupElement {
        let mut acc = x.to_vec();
        for (k, &e) in y.iter().enumerate() {
            if e != 0 {
                acc = self.mul_gen_pow(&acc, k, e);
            }
        }
        acc
    }

    pub fn inv(&self, x: &[i64]) -> GroupElement {
        let mut acc = self.identity();
        for k in (0..self.len()).rev() {
            if x[k] != 0 {
                acc = self.mul_gen_pow(&acc, k, -x[k]);
            }
        }
        acc
    }

    pub fn pow(&self, x: &[i64], e: i64) -> GroupElement {
        if PcPresentation::is_identity(x) || e == 0 {
            return self.identity();
        }
        let (mut base, mut e) = if e < 0 { (self.inv(x), e.unsigned_abs()) } else { (x.to_vec(), e as u64) };
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: &[i64], y: &[i64]) -> GroupElement {
        let a = self.mul(&self.inv(x), &self.inv(y));
        self.mul(&self.mul(&a, x), y)
    }

    /// `y^{-1} x y`.
    pub fn conjugate(&self, x: &[i64], y: &[i64]) -> GroupElement {
        self.mul(&self.mul(&self.inv(y), x), y)
    }

    /// Normal form of a word of signed 1-based generator indices.
    pub fn collect(&self, word: &[i64]) -> Result<GroupElement> {
        let mut acc = self.identity();
        for &s in word {
            let k = s.unsigned_abs() as usize;
            if s == 0 || k > self.len() {
                return Err(Error::InvalidInput(format!("generator index {s} out of range")));
            }
            acc = self.mul_gen_pow(&acc, k - 1, s.signum());
        }
        Ok(acc)
    }

    fn check_consistency(&self) -> Result<()> {
        let n = self.len();
        let mut probes = Vec::new();
        for i in 0..n {
            probes.push(self.generator(i));
            probes.push(self.inv(&self.generator(i)));
            if self.orders[i] > 1 {
                let mut g = self.identity();
                g[i] = self.orders[i] as i64 - 1;
                probes.push(g);
            }
        }
        for a in &probes {
            for b in &probes {
                let ab = self.mul(a, b);
                for c in &probes {
                    if self.mul(&ab, c) != self.mul(a, &self.mul(b, c)) {
                        return Err(Error::InconsistentPresentation(format!(
                            "({} {}) {} differs from {} ({} {})",
                            self.render(a),
                            self.render(b),
                            self.render(c),
                            self.render(a),
                            self.render(b),
                            self.render(c)
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            if self.orders[i] > 0 {
                let g = self.generator(i);
                if self.mul(&self.powers[i], &g) != self.mul(&g, &self.powers[i]) {
                    return Err(Error::InconsistentPresentation(format!(
                        "power of {} does not commute with it",
                        self.names[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn power_word(&self, i: usize) -> &GroupElement {
        &self.powers[i]
    }

    pub fn conj_word(&self, i: usize, j: usize) -> &GroupElement {
        &self.conj[i][j]
    }

    pub fn render(&self, x: &[i64]) -> String {
        let parts: Vec<String> = x
            .iter()
            .zip(&self.names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.names.join(", "))
    }
}
