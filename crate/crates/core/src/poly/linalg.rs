//! Exact Gaussian elimination over a field.

use super::Coefficient;

/// Row-reduces `rows` in place and returns the rank. Rows may be ragged only
/// if empty; all nonempty rows must have the same length and field.
pub fn rank(mut rows: Vec<Vec<Coefficient>>) -> usize {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        let pivot_row: Vec<Coefficient> = rows[rank].iter().map(|c| c.mul(&inv)).collect();
        for r in rank + 1..rows.len() {
            let factor = rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (cell, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                *cell = cell.sub(&p.mul(&factor));
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square matrix.
pub fn determinant(mut rows: Vec<Vec<Coefficient>>) -> Coefficient {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
    let field = rows
        .first()
        .and_then(|r| r.first())
        .map(Coefficient::field)
        .unwrap_or(super::Field::Rational);
    let mut det = Coefficient::one(field);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Coefficient::zero(field);
        };
        if pivot != col {
            rows.swap(col, pivot);
            det = det.neg();
        }
        det = det.mul(&rows[col][col]);
        let inv = rows[col][col].inverse().expect("nonzero pivot");
        for r in col + 1..n {
            let factor = rows[r][col].mul(&inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let t = rows[col][c].mul(&factor);
                rows[r][c] = rows[r][c].sub(&t);
            }
        }
    }
    det
}
