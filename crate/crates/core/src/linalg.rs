//! Dense exact linear algebra over a finite field: reduced row echelon form,
//! rank, row-space membership and left kernels. Pivoting is deterministic
//! (first nonzero column, lowest row), so every basis this module produces is
//! canonical for a fixed row order.

use crate::field::FieldElem;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<FieldElem>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    if rows.is_empty() {
        return pivots;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let inv = rows[r][col].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                    *x = x.sub(&p.mul(&factor));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    pivots
}

pub fn rank(mut rows: Vec<Vec<FieldElem>>) -> usize {
    rref(&mut rows).len()
}

/// Reduce `v` against rows already in reduced echelon form; the result is the
/// canonical representative of `v` modulo the row space.
pub fn reduce_against(rref_rows: &[Vec<FieldElem>], pivots: &[usize], v: &[FieldElem]) -> Vec<FieldElem> {
    let mut v = v.to_vec();
    for (row, &col) in rref_rows.iter().zip(pivots) {
        if !v[col].is_zero() {
            let factor = v[col].clone();
            for c in 0..v.len() {
                let sub = row[c].mul(&factor);
                v[c] = v[c].sub(&sub);
            }
        }
    }
    v
}

pub fn in_row_space(rref_rows: &[Vec<FieldElem>], pivots: &[usize], v: &[FieldElem]) -> bool {
    reduce_against(rref_rows, pivots, v).iter().all(|x| x.is_zero())
}

/// Basis of { c : c^T * rows = 0 }, i.e. the linear combinations of the rows
/// that vanish. Computed by reducing [rows | I] and reading off the identity
/// part of the rows whose matrix part became zero. The result is in reduced
/// echelon form, hence canonical for the given row order.
pub fn left_kernel(rows: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let desc = rows[0]
        .first()
        .map(|x| x.desc().clone())
        .expect("rows must have at least one column");
    let n = rows.len();
    let ncols = rows[0].len();
    let mut aug: Vec<Vec<FieldElem>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { desc.one() } else { desc.zero() });
            }
            r
        })
        .collect();
    // echelon on the matrix part only
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..aug.len()).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][col].inv();
        for x in aug[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = x.sub(&p.mul(&factor));
                }
            }
        }
        r += 1;
        if r == aug.len() {
            break;
        }
    }
    let mut kernel: Vec<Vec<FieldElem>> = aug
        .into_iter()
        .filter(|row| row[..ncols].iter().all(|x| x.is_zero()))
        .map(|row| row[ncols..].to_vec())
        .collect();
    rref(&mut kernel);
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;

    #[test]
    fn rref_and_rank_over_f2() {
        let f2 = field_make(2, 1, None).unwrap();
        let e = |bits: &[i64]| -> Vec<FieldElem> { bits.iter().map(|&b| f2.from_int(b)).collect() };
        let mut rows = vec![e(&[1, 1, 0]), e(&[0, 1, 1]), e(&[1, 0, 1])];
        let pivots = rref(&mut rows);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows.len(), 2);
        assert!(in_row_space(&rows, &pivots, &e(&[1, 0, 1])));
        assert!(!in_row_space(&rows, &pivots, &e(&[1, 0, 0])));
    }

    #[test]
    fn left_kernel_finds_dependency() {
        let f2 = field_make(2, 1, None).unwrap();
        let e = |bits: &[i64]| -> Vec<FieldElem> { bits.iter().map(|&b| f2.from_int(b)).collect() };
        let rows = vec![e(&[1, 1, 0]), e(&[0, 1, 1]), e(&[1, 0, 1])];
        let k = left_kernel(&rows);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], e(&[1, 1, 1]));
        // combination really vanishes
        for col in 0..3 {
            let mut s = f2.zero();
            for (c, row) in k[0].iter().zip(&rows) {
                s = s.add(&c.mul(&row[col]));
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn rank_over_gf4() {
        let f4 = field_make(2, 2, None).unwrap();
        let w = f4.generator();
        let rows = vec![
            vec![f4.one(), w.clone()],
            vec![w.clone(), w.mul(&w)], // w * first row
        ];
        assert_eq!(rank(rows), 1);
    }
}
