//! Norton's irreducibility test over Q.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::irreducible_factors;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Field;
use crate::upoly::UPoly;

use super::module::FDModule;

const SEED: u64 = 0x6e6f72746f6e;
const ATTEMPTS: usize = 40;

fn flatten(m: &Matrix) -> Vec<crate::scalar::Scalar> {
    m.to_rows().into_iter().flatten().collect()
}

pub(crate) fn minimal_polynomial(a: &Matrix) -> UPoly {
    let f = a.field;
    let n = a.rows;
    let mut powers = vec![Matrix::identity(f, n)];
    let mut span = Subspace::new(f, n * n);
    span.insert(&flatten(&powers[0]));
    loop {
        let next = powers.last().expect("nonempty").mul(a);
        let v = flatten(&next);
        if !span.insert(&v) {
            let cols: Vec<Vec<_>> = powers.iter().map(flatten).collect();
            let sys = Matrix::from_rows(f, cols).transpose();
            let c = sys.solve(&v).expect("dependent power");
            let mut coeffs: Vec<_> = c.iter().map(|x| -x).collect();
            coeffs.push(f.one());
            return UPoly::new(f, coeffs);
        }
        powers.push(next);
    }
}

pub(crate) fn eval_matrix(p: &UPoly, a: &Matrix) -> Matrix {
    let n = a.rows;
    let mut acc = Matrix::zeros(a.field, n, n);
    for i in (0..p.coeffs.len()).rev() {
        acc = acc.mul(a).add(&Matrix::identity(a.field, n).scale(&p.coeffs[i]));
    }
    acc
}

/// Invariant subspace spanned by the orbit of `v` under `gens`.
pub(crate) fn spin_under(gens: &[Matrix], v: &[crate::scalar::Scalar], field: Field, dim: usize) -> usize {
    let mut s = Subspace::new(field, dim);
    let mut queue = Vec::new();
    if s.insert(v) {
        queue.push(v.to_vec());
    }
    while let Some(w) = queue.pop() {
        for g in gens {
            let u = g.vec_mul(&w);
            if s.insert(&u) {
                queue.push(u);
            }
        }
    }
    s.rank()
}

fn random_element(m: &FDModule, rng: &mut ChaCha8Rng) -> Matrix {
    let n = m.dim;
    let mut acc = Matrix::zeros(m.field, n, n);
    let terms = rng.gen_range(2..=4);
    for _ in 0..terms {
        let mut w = Matrix::identity(m.field, n);
        for _ in 0..rng.gen_range(1..=3) {
            if m.action.is_empty() {
                break;
            }
            w = w.mul(&m.action[rng.gen_range(0..m.action.len())]);
        }
        let c = m.field.from_i64(rng.gen_range(-3..=3));
        acc = acc.add(&w.scale(&c));
    }
    acc
}

pub(crate) fn norton_irreducible(m: &FDModule) -> Result<bool> {
    let n = m.dim;
    let transposed: Vec<Matrix> = m.action.iter().map(Matrix::transpose).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..ATTEMPTS {
        let a = random_element(m, &mut rng);
        for f in irreducible_factors(&minimal_polynomial(&a)) {
            let theta = eval_matrix(&f, &a);
            if n - theta.rank() != f.deg() {
                continue;
            }
            let left = theta.left_kernel();
            if spin_under(&m.action, &left[0], m.field, n) < n {
                return Ok(false);
            }
            let right = theta.right_kernel();
            return Ok(spin_under(&transposed, &right[0], m.field, n) == n);
        }
    }
    Err(Error::Unsupported("no decisive element found for the irreducibility test".into()))
}
