//! Internal exact row operations over a finite field.
//!
//! Rows are `Vec<u16>` element codes; every function takes the field
//! explicitly. Nothing here is public API: `Subspace` and the form machinery
//! wrap these in safe, canonical types.

use crate::field::FieldSpec;

/// Reduce `rows` in place to reduced row-echelon form, drop zero rows and
/// return the pivot columns (strictly increasing).
pub(crate) fn rref(field: &FieldSpec, rows: &mut Vec<Vec<u16>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][col]).expect("pivot entry is nonzero");
        if inv != 1 {
            for c in col..ncols {
                rows[r][c] = field.mul(rows[r][c], inv);
            }
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for c in col..ncols {
                    let t = field.mul(factor, rows[r][c]);
                    rows[i][c] = field.sub(rows[i][c], t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(field: &FieldSpec, rows: &mut Vec<Vec<u16>>) -> usize {
    rref(field, rows).len()
}

/// Basis of the right kernel {v : M v = 0} of the matrix with the given rows,
/// where the product is the plain dot product sum_j row[j] * v[j].
pub(crate) fn kernel(field: &FieldSpec, rows: &[Vec<u16>], ncols: usize) -> Vec<Vec<u16>> {
    let mut m: Vec<Vec<u16>> = rows.to_vec();
    let pivots = rref(field, &mut m);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &p in &pivots {
            s[p] = true;
        }
        s
    };
    let mut basis = Vec::with_capacity(ncols - pivots.len());
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![0u16; ncols];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            // pivot row ri: v[pc] + m[ri][free] * v[free] = 0
            v[pc] = field.neg(m[ri][free]);
        }
        basis.push(v);
    }
    basis
}

/// Row-vector times matrix: out[c] = sum_j v[j] * mat[j][c].
pub(crate) fn vec_mat_mul(field: &FieldSpec, v: &[u16], mat: &[Vec<u16>]) -> Vec<u16> {
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut out = vec![0u16; ncols];
    for (j, &vj) in v.iter().enumerate() {
        if vj == 0 {
            continue;
        }
        for c in 0..ncols {
            if mat[j][c] != 0 {
                out[c] = field.add(out[c], field.mul(vj, mat[j][c]));
            }
        }
    }
    out
}

pub(crate) fn mat_mul(field: &FieldSpec, a: &[Vec<u16>], b: &[Vec<u16>]) -> Vec<Vec<u16>> {
    a.iter().map(|r| vec_mat_mul(field, r, b)).collect()
}

/// Reduce `v` against an RREF basis in place; `v` becomes the residual.
pub(crate) fn reduce_vector(field: &FieldSpec, basis: &[Vec<u16>], pivots: &[usize], v: &mut [u16]) {
    for (row, &pc) in basis.iter().zip(pivots) {
        let coeff = v[pc];
        if coeff != 0 {
            for c in pc..v.len() {
                let t = field.mul(coeff, row[c]);
                v[c] = field.sub(v[c], t);
            }
        }
    }
}

/// Coordinates of `v` in the RREF basis, or None when v is outside the span.
pub(crate) fn coordinates_in(
    field: &FieldSpec,
    basis: &[Vec<u16>],
    pivots: &[usize],
    v: &[u16],
) -> Option<Vec<u16>> {
    let mut residual = v.to_vec();
    let mut coords = vec![0u16; basis.len()];
    for (i, (row, &pc)) in basis.iter().zip(pivots).enumerate() {
        let coeff = residual[pc];
        if coeff != 0 {
            coords[i] = coeff;
            for c in pc..residual.len() {
                let t = field.mul(coeff, row[c]);
                residual[c] = field.sub(residual[c], t);
            }
        }
    }
    residual.iter().all(|&x| x == 0).then_some(coords)
}

/// Inverse of a square matrix, or None when singular.
pub(crate) fn invert(field: &FieldSpec, mat: &[Vec<u16>]) -> Option<Vec<Vec<u16>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<u16>> = mat
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![0u16; 2 * n];
            row[..n].copy_from_slice(r);
            row[n + i] = 1;
            row
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients lambda with sum lambda_i basis_i = v, for an arbitrary
/// (not necessarily echelon) independent basis; None if v is outside.
pub(crate) fn solve_coords(field: &FieldSpec, basis: &[Vec<u16>], v: &[u16]) -> Option<Vec<u16>> {
    let k = basis.len();
    let m = v.len();
    // augment rows with identity bookkeeping, reduce, then express v
    let mut aug: Vec<Vec<u16>> = basis
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![0u16; m + k];
            row[..m].copy_from_slice(r);
            row[m + i] = 1;
            row
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() != k || pivots.iter().any(|&p| p >= m) {
        return None; // dependent basis
    }
    let mut res = vec![0u16; m + k];
    res[..m].copy_from_slice(v);
    reduce_vector(field, &aug, &pivots, &mut res);
    if res[..m].iter().any(|&c| c != 0) {
        return None;
    }
    Some(res[m..].iter().map(|&c| field.neg(c)).collect())
}

/// Iterate every coordinate tuple of length `len` over the field, in
/// ascending odometer order (last coordinate fastest).
pub(crate) fn all_tuples(field: &FieldSpec, len: usize) -> TupleIter {
    TupleIter { q: field.order() as u16, current: vec![0; len], done: false }
}

pub(crate) struct TupleIter {
    q: u16,
    current: Vec<u16>,
    done: bool,
}

impl Iterator for TupleIter {
    type Item = Vec<u16>;
    fn next(&mut self) -> Option<Vec<u16>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] + 1 < self.q {
                self.current[i] += 1;
                for c in &mut self.current[i + 1..] {
                    *c = 0;
                }
                break;
            }
        }
        if self.current.is_empty() {
            self.done = true;
        }
        Some(out)
    }
}

/// Normalized representatives of the 1-dimensional subspaces of F_q^len:
/// tuples whose first nonzero coordinate is 1, ascending.
pub(crate) fn projective_reps(field: &FieldSpec, len: usize) -> Vec<Vec<u16>> {
    let mut reps = Vec::new();
    for t in all_tuples(field, len) {
        match t.iter().find(|&&c| c != 0) {
            Some(&first) if first == 1 => reps.push(t),
            _ => {}
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(field: &FieldSpec, a: &[u16], b: &[u16]) -> u16 {
        let mut acc = 0u16;
        for (&x, &y) in a.iter().zip(b) {
            acc = field.add(acc, field.mul(x, y));
        }
        acc
    }

    fn gf(q: u32) -> FieldSpec {
        match q {
            2 => FieldSpec::make(2, 1, None).unwrap(),
            3 => FieldSpec::make(3, 1, None).unwrap(),
            4 => FieldSpec::make(2, 2, None).unwrap(),
            _ => panic!(),
        }
    }

    #[test]
    fn rref_gf2() {
        let f = gf(2);
        let mut rows = vec![vec![1, 1, 0, 0], vec![0, 1, 0, 0]];
        let pivots = rref(&f, &mut rows);
        assert_eq!(rows, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn rref_scaling_gf3() {
        let f = gf(3);
        let mut rows = vec![vec![2, 0], vec![0, 1]];
        rref(&f, &mut rows);
        assert_eq!(rows, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn kernel_is_orthogonal_to_rows() {
        let f = gf(3);
        let rows = vec![vec![1, 2, 0, 1], vec![0, 0, 1, 2]];
        let ker = kernel(&f, &rows, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in &rows {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
    }

    #[test]
    fn projective_reps_counts() {
        assert_eq!(projective_reps(&gf(2), 3).len(), 7);
        assert_eq!(projective_reps(&gf(3), 3).len(), 13);
        assert_eq!(projective_reps(&gf(4), 2).len(), 5);
    }

    #[test]
    fn tuple_iter_counts() {
        assert_eq!(all_tuples(&gf(3), 3).count(), 27);
        assert_eq!(all_tuples(&gf(2), 0).count(), 1);
    }

    #[test]
    fn invert_round_trip() {
        let f = gf(3);
        // det = 4 = 1 mod 3
        let m = vec![vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 2]];
        let inv = invert(&f, &m).unwrap();
        let prod = mat_mul(&f, &m, &inv);
        for (i, row) in prod.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, (i == j) as u16);
            }
        }
        let singular = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]];
        assert!(invert(&f, &singular).is_none());
    }

    #[test]
    fn solve_coords_in_non_echelon_basis() {
        let f = gf(3);
        let basis = vec![vec![1, 1, 0], vec![1, 2, 0]];
        let v = vec![2, 0, 0];
        let coords = solve_coords(&f, &basis, &v).unwrap();
        let rebuilt = vec_mat_mul(&f, &coords, &basis);
        assert_eq!(rebuilt, v);
        assert!(solve_coords(&f, &basis, &[0, 0, 1]).is_none());
    }
}
