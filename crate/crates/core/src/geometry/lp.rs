//! Exact phase-1 simplex for `A x = b, x >= 0`.

use crate::exact::Field;
use crate::linalg::FieldMatrix;

/// Finds `x >= 0` with `A x = b`, or proves none exists.
///
/// Artificial variables start in the basis and the sum of artificials is
/// minimized. Entering and leaving variables follow the least-index rule,
/// which rules out cycling. The returned vector is re-checked exactly.
pub fn nonnegative_solution<F: Field>(a: &FieldMatrix<F>, b: &[F]) -> Option<Vec<F>> {
    let (m, n) = a.shape();
    assert_eq!(m, b.len(), "right-hand side length");
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<F>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![F::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a.get(i, j).clone() } else { a.get(i, j).clone() };
        }
        row[n + i] = F::one();
        row[rhs] = b[i].abs();
        t.push(row);
    }
    // objective row: reduced costs of sum(artificials) with the artificial basis
    let mut obj = vec![F::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] = obj[j].clone() - &row[j];
        }
        obj[rhs] = obj[rhs].clone() - &row[rhs];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<(usize, F)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = t[i][rhs].clone() / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase-1 objective is bounded below by zero, so a leaving row exists
        let (p, _) = leave.expect("bounded phase-1 objective");
        pivot(&mut t, p, enter);
        basis[p] = enter;
    }

    if !t[m][rhs].is_zero() {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][rhs].clone();
        }
    }
    let ok = x.iter().all(|v| !v.is_negative()) && a.mul_vec(&x).ok()? == b;
    ok.then_some(x)
}

fn pivot<F: Field>(t: &mut [Vec<F>], p: usize, q: usize) {
    let inv = t[p][q].inv().expect("pivot is positive");
    for v in t[p].iter_mut() {
        *v = v.clone() * &inv;
    }
    let pivot_row = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v = v.clone() - f.clone() * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn feasible_system() {
        let a = FieldMatrix::from_rows(vec![vec![r(1), r(1), r(1)], vec![r(1), r(-1), r(0)]]).unwrap();
        let x = nonnegative_solution(&a, &[r(2), r(0)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![r(2), r(0)]);
    }

    #[test]
    fn infeasible_system() {
        let a = FieldMatrix::from_rows(vec![vec![r(1), r(1)]]).unwrap();
        assert!(nonnegative_solution(&a, &[r(-1)]).is_none());
    }

    #[test]
    fn degenerate_cycling_candidate_terminates() {
        // Beale-style degenerate system; least-index pivoting must finish
        let a = FieldMatrix::from_rows(vec![
            vec![Rational::new(1, 4), r(-8), r(-1), r(9)],
            vec![Rational::new(1, 2), r(-12), Rational::new(-1, 2), r(3)],
            vec![r(0), r(0), r(1), r(0)],
        ])
        .unwrap();
        let x = nonnegative_solution(&a, &[r(0), r(0), r(1)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![r(0), r(0), r(1)]);
    }
}
