//! Canonical subspaces of F_q^m and their lattice operations.
//!
//! Every subspace is stored as the reduced row-echelon basis of its row
//! span, so set equality is byte equality and hashing is well defined. All
//! dimensions here are vector dimensions; projective callers subtract one.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg;

#[derive(Clone)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

/// JSON form: `{"m":…, "rows":[[codes]]}` with rows canonical.
#[derive(Serialize, Deserialize)]
pub struct SubspaceRepr {
    pub m: usize,
    pub rows: Vec<Vec<u16>>,
}

impl Subspace {
    /// The unique RREF representative of the row span of `rows`.
    pub fn canonicalize(field: &FieldSpec, ambient: usize, rows: &[Vec<u16>]) -> Result<Self> {
        let q = field.order();
        for r in rows {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in ambient dimension {}",
                    r.len(),
                    ambient
                )));
            }
            if r.iter().any(|&c| c as u32 >= q) {
                return Err(Error::FieldMismatch);
            }
        }
        let mut m: Vec<Vec<u16>> = rows.to_vec();
        let pivots = linalg::rref(field, &mut m);
        Ok(Subspace { field: field.clone(), ambient, rows: m, pivots })
    }

    pub fn zero(field: &FieldSpec, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: vec![], pivots: vec![] }
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0u16; ambient];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { field: field.clone(), ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    /// Vector dimension.
    pub fn vdim(&self) -> usize {
        self.rows.len()
    }
    /// Projective dimension; -1 for the zero subspace.
    pub fn pdim(&self) -> isize {
        self.rows.len() as isize - 1
    }
    pub fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u16]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut res = v.to_vec();
        linalg::reduce_vector(&self.field, &self.rows, &self.pivots, &mut res);
        res.iter().all(|&c| c == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(r))
    }

    /// Coordinates of `v` in this basis, when v lies in the subspace.
    pub fn coordinates_of(&self, v: &[u16]) -> Option<Vec<u16>> {
        linalg::coordinates_in(&self.field, &self.rows, &self.pivots, v)
    }

    /// X + Y.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows: Vec<Vec<u16>> = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let pivots = linalg::rref(&self.field, &mut rows);
        Ok(Subspace { field: self.field.clone(), ambient: self.ambient, rows, pivots })
    }

    /// X ∩ Y.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.meet_join(other)?.0)
    }

    /// (X ∩ Y, X + Y) by the Zassenhaus block elimination.
    pub fn meet_join(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        self.check_compatible(other)?;
        let m = self.ambient;
        let mut block: Vec<Vec<u16>> = Vec::with_capacity(self.vdim() + other.vdim());
        for r in &self.rows {
            let mut row = vec![0u16; 2 * m];
            row[..m].copy_from_slice(r);
            row[m..].copy_from_slice(r);
            block.push(row);
        }
        for r in &other.rows {
            let mut row = vec![0u16; 2 * m];
            row[..m].copy_from_slice(r);
            block.push(row);
        }
        linalg::rref(&self.field, &mut block);
        let mut join_rows = Vec::new();
        let mut meet_rows = Vec::new();
        for row in &block {
            if row[..m].iter().any(|&c| c != 0) {
                join_rows.push(row[..m].to_vec());
            } else {
                meet_rows.push(row[m..].to_vec());
            }
        }
        let meet = Subspace::canonicalize(&self.field, m, &meet_rows)?;
        let join = Subspace::canonicalize(&self.field, m, &join_rows)?;
        Ok((meet, join))
    }

    /// The annihilator X^0 under the standard dot-product pairing.
    pub fn annihilator(&self) -> Subspace {
        let ker = linalg::kernel(&self.field, &self.rows, self.ambient);
        Subspace::canonicalize(&self.field, self.ambient, &ker)
            .expect("kernel rows share the ambient dimension")
    }

    /// Normalized representative vectors of the projective points of this
    /// subspace, in deterministic order.
    pub fn point_vectors(&self) -> Vec<Vec<u16>> {
        linalg::projective_reps(&self.field, self.vdim())
            .into_iter()
            .map(|coords| linalg::vec_mat_mul(&self.field, &coords, &self.rows))
            .collect()
    }

    /// Every vector of the subspace (q^vdim of them), deterministic order.
    pub fn all_vectors(&self) -> Vec<Vec<u16>> {
        linalg::all_tuples(&self.field, self.vdim())
            .map(|coords| linalg::vec_mat_mul(&self.field, &coords, &self.rows))
            .collect()
    }

    /// Image under the linear map sending coordinate j to `map[j]`.
    pub fn apply_matrix(&self, map: &[Vec<u16>], target_dim: usize) -> Result<Subspace> {
        if map.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "map has {} rows for ambient dimension {}",
                map.len(),
                self.ambient
            )));
        }
        let rows: Vec<Vec<u16>> = self
            .rows
            .iter()
            .map(|r| linalg::vec_mat_mul(&self.field, r, map))
            .collect();
        Subspace::canonicalize(&self.field, target_dim, &rows)
    }

    /// Rows of `self` rewritten in the coordinates of `outer`'s basis.
    /// Requires self ⊆ outer.
    pub fn coordinates_in(&self, outer: &Subspace) -> Result<Vec<Vec<u16>>> {
        self.check_compatible(outer)?;
        self.rows
            .iter()
            .map(|r| {
                outer.coordinates_of(r).ok_or_else(|| {
                    Error::IncidenceViolation("subspace is not contained in the outer space".into())
                })
            })
            .collect()
    }

    pub fn repr(&self) -> SubspaceRepr {
        SubspaceRepr { m: self.ambient, rows: self.rows.clone() }
    }

    /// Rebuild from a JSON representation; the boolean reports whether the
    /// input was already canonical.
    pub fn from_repr(field: &FieldSpec, repr: &SubspaceRepr) -> Result<(Subspace, bool)> {
        let s = Subspace::canonicalize(field, repr.m, &repr.rows)?;
        let canonical = s.rows == repr.rows;
        Ok((s, canonical))
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.ambient == other.ambient && self.rows == other.rows
    }
}
impl Eq for Subspace {}

impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.rows.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (ambient, vdim, canonical matrix entries): the
/// deterministic enumeration order used everywhere.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.vdim().cmp(&other.vdim()))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of F^{}: {:?})", self.vdim(), self.ambient, self.rows)
    }
}

/// Gaussian binomial [m choose i]_q via the stepwise product formula;
/// saturates at u128::MAX on overflow (which any budget check will reject).
pub fn gaussian_binomial(m: usize, i: usize, q: u32) -> u128 {
    if i > m {
        return 0;
    }
    let i = i.min(m - i);
    let mut result: u128 = 1;
    let q = q as u128;
    for j in 1..=i {
        let num = match q.checked_pow((m - i + j) as u32) {
            Some(x) => x - 1,
            None => return u128::MAX,
        };
        let den = q.pow(j as u32) - 1;
        match result.checked_mul(num) {
            Some(x) => result = x / den,
            None => return u128::MAX,
        }
    }
    result
}

/// All i-dimensional subspaces of F_q^m in canonical order.
///
/// The count is predicted by the Gaussian binomial before any enumeration;
/// a prediction beyond `budget` fails fast.
pub fn enumerate_subspaces(
    field: &FieldSpec,
    m: usize,
    i: usize,
    budget: u128,
) -> Result<Vec<Subspace>> {
    if i > m {
        return Err(Error::DimensionMismatch(format!("subspace dim {i} exceeds ambient {m}")));
    }
    let predicted = gaussian_binomial(m, i, field.order());
    if predicted > budget {
        return Err(Error::BudgetExceeded { predicted, budget });
    }
    if i == 0 {
        return Ok(vec![Subspace::zero(field, m)]);
    }
    let mut out = Vec::with_capacity(predicted as usize);
    let mut pivot_sets = combinations(m, i);
    pivot_sets.sort();
    for pivots in pivot_sets {
        let in_pivots = {
            let mut s = vec![false; m];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        // free cells: (row r, col c) with c > pivots[r] and c not a pivot
        let mut free_cells = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in (p + 1)..m {
                if !in_pivots[c] {
                    free_cells.push((r, c));
                }
            }
        }
        for assignment in linalg::all_tuples(field, free_cells.len()) {
            let mut rows = vec![vec![0u16; m]; i];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (&(r, c), &val) in free_cells.iter().zip(&assignment) {
                rows[r][c] = val;
            }
            out.push(Subspace {
                field: field.clone(),
                ambient: m,
                rows,
                pivots: pivots.clone(),
            });
        }
    }
    debug_assert_eq!(out.len() as u128, predicted);
    out.sort();
    Ok(out)
}

/// Subspaces T with lower ⊆ T ⊆ upper and vdim(T) = t, canonical order.
pub fn subspaces_between(
    lower: &Subspace,
    upper: &Subspace,
    t: usize,
    budget: u128,
) -> Result<Vec<Subspace>> {
    if !upper.contains(lower) {
        return Err(Error::IncidenceViolation("lower bound is not inside the upper bound".into()));
    }
    let s = lower.vdim();
    let u = upper.vdim();
    if t < s || t > u {
        return Err(Error::DimensionMismatch(format!(
            "no subspaces of dim {t} between dims {s} and {u}"
        )));
    }
    let field = lower.field().clone();
    // lower in upper-coordinates, plus a coordinate complement from the
    // non-pivot positions
    let lower_coords = lower.coordinates_in(upper)?;
    let lower_c = Subspace::canonicalize(&field, u, &lower_coords)?;
    let mut complement_cols = Vec::new();
    for c in 0..u {
        if !lower_c.pivots().contains(&c) {
            complement_cols.push(c);
        }
    }
    let d_c = complement_cols.len();
    let quotient_subs = enumerate_subspaces(&field, d_c, t - s, budget)?;
    let mut out = Vec::with_capacity(quotient_subs.len());
    for w in quotient_subs {
        let mut rows: Vec<Vec<u16>> = lower_c.rows().to_vec();
        for wr in w.rows() {
            let mut row = vec![0u16; u];
            for (&col, &val) in complement_cols.iter().zip(wr) {
                row[col] = val;
            }
            rows.push(row);
        }
        let in_upper = Subspace::canonicalize(&field, u, &rows)?;
        out.push(in_upper.apply_matrix(upper.rows(), upper.ambient_dim())?);
    }
    out.sort();
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}
