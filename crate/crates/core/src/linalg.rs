//! Dense exact linear algebra over the current field tower.

use crate::kfield::KElement;

/// Solve A·x = b by Gaussian elimination. A is row-major, possibly
/// rectangular (rows ≥ cols allowed); returns None if inconsistent or
/// underdetermined in a pivot column needed for b.
pub fn solve(a: &[Vec<KElement>], b: &[KElement]) -> Option<Vec<KElement>> {
    let nrows = a.len();
    if nrows == 0 {
        return Some(vec![]);
    }
    let ncols = a[0].len();
    let ctx = b[0].ctx.clone();
    let mut m: Vec<Vec<KElement>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let piv = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = m[rank][col].inv().ok()?;
        for x in m[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let t = f.mul(&m[rank][c]);
                    m[r][c] = m[r][c].sub(&t);
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    // inconsistent?
    for row in &m {
        if row[..ncols].iter().all(|x| x.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![KElement::zero(&ctx); ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            sol[col] = m[pivot_of_col[col]][ncols].clone();
        }
    }
    Some(sol)
}

/// Inverse of a square matrix, or None if singular.
pub fn invert(a: &[Vec<KElement>]) -> Option<Vec<Vec<KElement>>> {
    let n = a.len();
    if n == 0 {
        return Some(vec![]);
    }
    let ctx = a[0][0].ctx.clone();
    let mut m: Vec<Vec<KElement>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    KElement::one(&ctx)
                } else {
                    KElement::zero(&ctx)
                });
            }
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].inv().ok()?;
        for x in m[col].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for c in 0..2 * n {
                    let t = f.mul(&pivot_row[c]);
                    row[c] = row[c].sub(&t);
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of the right kernel of A.
pub fn kernel(a: &[Vec<KElement>]) -> Vec<Vec<KElement>> {
    let nrows = a.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = a[0].len();
    let ctx = a[0][0].ctx.clone();
    let mut m: Vec<Vec<KElement>> = a.to_vec();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let piv = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = match m[rank][col].inv() {
            Ok(x) => x,
            Err(_) => continue,
        };
        for x in m[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let t = f.mul(&m[rank][c]);
                    m[r][c] = m[r][c].sub(&t);
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    let mut basis = vec![];
    for free in 0..ncols {
        if pivot_of_col[free] != usize::MAX {
            continue;
        }
        let mut v = vec![KElement::zero(&ctx); ncols];
        v[free] = KElement::one(&ctx);
        for col in 0..ncols {
            if pivot_of_col[col] != usize::MAX {
                v[col] = m[pivot_of_col[col]][free].neg();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::FieldContext;

    #[test]
    fn solve_and_invert() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let one = KElement::one(&ctx);
        let a = vec![
            vec![l.clone(), one.clone()],
            vec![one.clone(), one.clone()],
        ];
        let b = vec![l.pow(2), l.clone()];
        let x = solve(&a, &b).unwrap();
        // check A x = b
        for (row, rhs) in a.iter().zip(&b) {
            let mut acc = KElement::zero(&ctx);
            for (c, xi) in row.iter().zip(&x) {
                acc = acc.add(&c.mul(xi));
            }
            assert_eq!(&acc, rhs);
        }
        let ainv = invert(&a).unwrap();
        let mut prod = KElement::zero(&ctx);
        for k in 0..2 {
            prod = prod.add(&a[0][k].mul(&ainv[k][0]));
        }
        assert!(prod.is_one());
    }

    #[test]
    fn kernel_of_rank_one() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let one = KElement::one(&ctx);
        let a = vec![vec![one.clone(), l.clone()]];
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v[0].add(&l.mul(&v[1])).is_zero());
    }
}
