//! Integer row lattices: Hermite and Smith normal forms, kernels,
//! saturation and intersection. Entries are `i128`; inputs at desk scale
//! stay far from overflow and every operation is checked.

pub type IntMatrix = Vec<Vec<i128>>;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        // a = q b + r with r = a.rem_euclid(b)
        let q = (a - a.rem_euclid(b)) / b;
        (g, y, x - q * y)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}

fn combine(rows: &mut [Vec<i128>], i: usize, j: usize, a: i128, b: i128, c: i128, d: i128) {
    // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
    let n = rows[i].len();
    for k in 0..n {
        let x = rows[i][k];
        let y = rows[j][k];
        rows[i][k] = a.checked_mul(x).and_then(|t| t.checked_add(b.checked_mul(y)?)).expect("lattice overflow");
        rows[j][k] = c.checked_mul(x).and_then(|t| t.checked_add(d.checked_mul(y)?)).expect("lattice overflow");
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`, together
/// with the unimodular transform `U` such that `U * rows = H` (zero rows of
/// `H` are kept at the bottom so kernels can be read off).
pub fn hnf_with_transform(rows: &[Vec<i128>], ncols: usize) -> (IntMatrix, IntMatrix) {
    let m = rows.len();
    let mut a: IntMatrix = rows.to_vec();
    let mut u: IntMatrix = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        // gcd-eliminate column entries below r
        for i in (r + 1)..m {
            if a[i][col] != 0 {
                let (g, x, y) = ext_gcd(a[r][col], a[i][col]);
                let p = a[r][col] / g;
                let q = a[i][col] / g;
                combine(&mut a, r, i, x, y, -q, p);
                combine(&mut u, r, i, x, y, -q, p);
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            for v in a[r].iter_mut() {
                *v = -*v;
            }
            for v in u[r].iter_mut() {
                *v = -*v;
            }
        }
        let piv = a[r][col];
        for i in 0..r {
            let q = a[i][col].div_euclid(piv);
            if q != 0 {
                for k in 0..ncols {
                    a[i][k] -= q * a[r][k];
                }
                for k in 0..m {
                    u[i][k] -= q * u[r][k];
                }
            }
        }
        r += 1;
    }
    (a, u)
}

/// Hermite normal form with zero rows removed.
pub fn hnf(rows: &[Vec<i128>], ncols: usize) -> IntMatrix {
    let (h, _) = hnf_with_transform(rows, ncols);
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

/// Integer vectors `c` with `c * rows = 0`, as a basis.
pub fn left_kernel(rows: &[Vec<i128>], ncols: usize) -> IntMatrix {
    let (h, u) = hnf_with_transform(rows, ncols);
    h.iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|&x| x == 0))
        .map(|(_, ur)| ur)
        .collect()
}

pub fn transpose(rows: &[Vec<i128>], ncols: usize) -> IntMatrix {
    (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

/// `span_Q(rows) ∩ Z^n`.
pub fn saturation(rows: &[Vec<i128>], ncols: usize) -> IntMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    // right kernel Y: rows * y = 0  <=>  y^T rows^T = 0
    let t = transpose(rows, ncols);
    let y = left_kernel(&t, rows.len());
    // y is a list of vectors in Z^ncols; want x with x . y_k = 0 for all k
    if y.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
            .collect();
    }
    let yt = transpose(&y, ncols);
    hnf(&left_kernel(&yt, y.len()), ncols)
}

/// Intersection of two row lattices.
pub fn intersect(a: &[Vec<i128>], b: &[Vec<i128>], ncols: usize) -> IntMatrix {
    let mut stacked = a.to_vec();
    stacked.extend(b.iter().cloned());
    let ker = left_kernel(&stacked, ncols);
    let elems: IntMatrix = ker
        .iter()
        .map(|c| {
            (0..ncols)
                .map(|k| (0..a.len()).map(|i| c[i] * a[i][k]).sum())
                .collect()
        })
        .collect();
    hnf(&elems, ncols)
}

/// Coefficients expressing `v` in the rows of an HNF basis, if `v` lies in
/// the lattice.
pub fn solve_in_hnf(h: &[Vec<i128>], v: &[i128]) -> Option<Vec<i128>> {
    let mut rest = v.to_vec();
    let mut coeffs = vec![0; h.len()];
    for (i, row) in h.iter().enumerate() {
        let piv = row.iter().position(|&x| x != 0)?;
        // entries left of the pivot must already vanish
        if rest[..piv].iter().any(|&x| x != 0) {
            return None;
        }
        if rest[piv] % row[piv] != 0 {
            return None;
        }
        let q = rest[piv] / row[piv];
        coeffs[i] = q;
        for k in 0..rest.len() {
            rest[k] -= q * row[k];
        }
    }
    if rest.iter().all(|&x| x == 0) {
        Some(coeffs)
    } else {
        None
    }
}

pub fn contains(h: &[Vec<i128>], v: &[i128]) -> bool {
    solve_in_hnf(h, v).is_some()
}

/// Invariant factors (nonzero diagonal of the Smith normal form), plus the
/// rank deficit as trailing zeros up to `ncols`.
pub fn smith_invariants(rows: &[Vec<i128>], ncols: usize) -> Vec<i128> {
    let mut a: IntMatrix = hnf(rows, ncols);
    let m = a.len();
    let mut t = 0;
    while t < m.min(ncols) {
        // move a nonzero entry of least absolute value to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..ncols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut done = false;
        while !done {
            done = true;
            let piv = a[t][t];
            for i in (t + 1)..m {
                let q = a[i][t].div_euclid(piv);
                if q != 0 {
                    for k in 0..ncols {
                        a[i][k] -= q * a[t][k];
                    }
                }
            }
            for j in (t + 1)..ncols {
                let q = a[t][j].div_euclid(piv);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
            }
            // any remainder smaller than the pivot restarts the step
            let mut smaller: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..ncols {
                    if (i == t || j == t) && (i, j) != (t, t) && a[i][j] != 0 {
                        smaller = Some((i, j));
                    }
                }
            }
            if let Some((i, j)) = smaller {
                a.swap(t, i);
                for row in a.iter_mut() {
                    row.swap(t, j);
                }
                done = false;
                continue;
            }
            // divisibility condition
            let mut fix = None;
            'outer: for i in (t + 1)..m {
                for j in (t + 1)..ncols {
                    if a[i][j] % piv != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = fix {
                for k in 0..ncols {
                    a[t][k] += a[i][k];
                }
                done = false;
            }
        }
        t += 1;
    }
    let mut d: Vec<i128> = (0..ncols).map(|i| if i < m { a[i][i].abs() } else { 0 }).collect();
    let nonzero = d.iter().filter(|&&x| x != 0).count();
    d.sort_by_key(|&x| if x == 0 { i128::MAX } else { x });
    d.truncate(ncols.max(nonzero));
    d
}

/// Order of `Z^n / L`, `None` when infinite.
pub fn index(rows: &[Vec<i128>], ncols: usize) -> Option<i128> {
    let inv = smith_invariants(rows, ncols);
    if inv.iter().any(|&x| x == 0) {
        None
    } else {
        Some(inv.iter().product())
    }
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = ((k + 1)..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_and_index() {
        let l = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(index(&l, 2), Some(6));
        assert_eq!(smith_invariants(&l, 2), vec![1, 6]);
        let l2 = vec![vec![4], vec![6]];
        assert_eq!(hnf(&l2, 1), vec![vec![2]]);
    }

    #[test]
    fn intersection_is_lcm() {
        let a = vec![vec![4]];
        let b = vec![vec![6]];
        assert_eq!(intersect(&a, &b, 1), vec![vec![12]]);
    }

    #[test]
    fn saturation_of_scaled_lattice() {
        let l = vec![vec![2, 4]];
        assert_eq!(saturation(&l, 2), vec![vec![1, 2]]);
    }

    #[test]
    fn kernel_and_det() {
        let k = left_kernel(&[vec![1, 2], vec![2, 4]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(det(&[vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn infinite_index_detected() {
        assert_eq!(index(&[vec![2, 0]], 2), None);
        assert!(contains(&hnf(&[vec![2, 0], vec![0, 3]], 2), &[4, 9]));
        assert!(!contains(&hnf(&[vec![2, 0], vec![0, 3]], 2), &[1, 3]));
    }
}
