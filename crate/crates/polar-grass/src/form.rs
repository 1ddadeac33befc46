//! Non-degenerate classical forms over finite fields: alternating,
//! quadratic (hyperbolic, elliptic, odd-dimensional) and hermitian.
//!
//! A form owns the singularity machinery used by the polar spaces: point
//! and subspace singularity tests, perps, Witt index via greedy extension
//! and hyperbolic-basis splitting.

use crate::descriptor::PolarFormTag;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Symplectic,
    OrthogonalPlus,
    OrthogonalMinus,
    OrthogonalOdd,
    Hermitian,
}

impl FormKind {
    pub fn is_orthogonal(self) -> bool {
        matches!(
            self,
            FormKind::OrthogonalPlus | FormKind::OrthogonalMinus | FormKind::OrthogonalOdd
        )
    }
}

#[derive(Clone)]
pub struct ClassicalForm {
    kind: FormKind,
    tag: PolarFormTag,
    label: String,
    field: FieldSpec,
    dim: usize,
    /// Gram matrix of the bilinear (or sesquilinear) part.
    gram: Vec<Vec<u16>>,
    /// Upper-triangular quadratic coefficients, orthogonal kinds only.
    quad: Option<Vec<Vec<u16>>>,
    witt: usize,
    validated: bool,
}

impl ClassicalForm {
    /// Standard alternating form on F_q^{2n} with hyperbolic pairs
    /// (e_0, e_1), (e_2, e_3), …
    pub fn symplectic(field: &FieldSpec, n: usize) -> Result<Self> {
        let d = 2 * n;
        let mut gram = vec![vec![0u16; d]; d];
        for i in 0..n {
            gram[2 * i][2 * i + 1] = 1;
            gram[2 * i + 1][2 * i] = field.neg(1);
        }
        Self::from_gram(
            FormKind::Symplectic,
            PolarFormTag::Symplectic,
            format!("Sp({}, GF({}))", d, field.order()),
            field,
            gram,
        )
    }

    /// Hyperbolic quadric Q = x_0 x_1 + x_2 x_3 + … on F_q^{2n}.
    pub fn orthogonal_plus(field: &FieldSpec, n: usize) -> Result<Self> {
        let d = 2 * n;
        let mut quad = vec![vec![0u16; d]; d];
        for i in 0..n {
            quad[2 * i][2 * i + 1] = 1;
        }
        Self::from_quad(
            FormKind::OrthogonalPlus,
            PolarFormTag::OrthogonalPlus,
            format!("O+({}, GF({}))", d, field.order()),
            field,
            quad,
        )
    }

    /// Elliptic quadric: hyperbolic part plus an anisotropic binary tail
    /// x^2 + xy + c y^2 with the least usable c.
    pub fn orthogonal_minus(field: &FieldSpec, n: usize) -> Result<Self> {
        let d = 2 * n;
        if n < 1 {
            return Err(Error::DimensionMismatch("elliptic quadric needs n >= 1".into()));
        }
        let c = anisotropic_binary_coefficient(field)?;
        let mut quad = vec![vec![0u16; d]; d];
        for i in 0..n - 1 {
            quad[2 * i][2 * i + 1] = 1;
        }
        quad[d - 2][d - 2] = 1;
        quad[d - 2][d - 1] = 1;
        quad[d - 1][d - 1] = c;
        Self::from_quad(
            FormKind::OrthogonalMinus,
            PolarFormTag::OrthogonalMinus,
            format!("O-({}, GF({}))", d, field.order()),
            field,
            quad,
        )
    }

    /// Parabolic quadric Q = x_0^2 + x_1 x_2 + … on F_q^{2n+1}.
    pub fn orthogonal_odd(field: &FieldSpec, n: usize) -> Result<Self> {
        let d = 2 * n + 1;
        let mut quad = vec![vec![0u16; d]; d];
        quad[0][0] = 1;
        for i in 0..n {
            quad[2 * i + 1][2 * i + 2] = 1;
        }
        Self::from_quad(
            FormKind::OrthogonalOdd,
            PolarFormTag::OrthogonalOdd,
            format!("O({}, GF({}))", d, field.order()),
            field,
            quad,
        )
    }

    /// Standard hermitian form H(x, y) = Σ x_i conj(y_i) on GF(q0^2)^d.
    pub fn hermitian(field: &FieldSpec, d: usize) -> Result<Self> {
        if !field.has_involution() {
            return Err(Error::NoInvolution(field.e()));
        }
        let mut gram = vec![vec![0u16; d]; d];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self::from_gram(
            FormKind::Hermitian,
            PolarFormTag::Hermitian,
            format!("U({}, GF({}))", d, field.order()),
            field,
            gram,
        )
    }

    /// The Klein quadric in Plücker coordinates (p12, p13, p14, p23, p24, p34):
    /// Q = p12 p34 - p13 p24 + p14 p23.
    pub fn klein(field: &FieldSpec) -> Result<Self> {
        let mut quad = vec![vec![0u16; 6]; 6];
        quad[0][5] = 1;
        quad[1][4] = field.neg(1);
        quad[2][3] = 1;
        Self::from_quad(
            FormKind::OrthogonalPlus,
            PolarFormTag::Klein,
            format!("Klein(GF({}))", field.order()),
            field,
            quad,
        )
    }

    /// Build from an explicit upper-triangular quadratic coefficient matrix;
    /// the bilinear Gram is the polarization U + U^T.
    pub fn from_quad(
        kind: FormKind,
        tag: PolarFormTag,
        label: String,
        field: &FieldSpec,
        quad: Vec<Vec<u16>>,
    ) -> Result<Self> {
        if !kind.is_orthogonal() {
            return Err(Error::BadDescriptor("quadratic data requires an orthogonal kind".into()));
        }
        let d = quad.len();
        if quad.iter().any(|r| r.len() != d) {
            return Err(Error::BadDescriptor("quadratic matrix must be square".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if quad[i][j] != 0 {
                    return Err(Error::BadDescriptor(
                        "quadratic matrix must be upper triangular".into(),
                    ));
                }
            }
        }
        let mut gram = vec![vec![0u16; d]; d];
        for i in 0..d {
            for j in 0..d {
                let a = if i <= j { quad[i][j] } else { 0 };
                let b = if j <= i { quad[j][i] } else { 0 };
                gram[i][j] = field.add(a, b);
            }
        }
        let mut form =
            ClassicalForm { kind, tag, label, field: field.clone(), dim: d, gram, quad: Some(quad), witt: 0, validated: true };
        form.validate_nondegenerate()?;
        form.witt = form.compute_witt_index();
        Ok(form)
    }

    /// Build from an explicit Gram matrix (symplectic or hermitian kinds).
    pub fn from_gram(
        kind: FormKind,
        tag: PolarFormTag,
        label: String,
        field: &FieldSpec,
        gram: Vec<Vec<u16>>,
    ) -> Result<Self> {
        let d = gram.len();
        if gram.iter().any(|r| r.len() != d) {
            return Err(Error::BadDescriptor("Gram matrix must be square".into()));
        }
        match kind {
            FormKind::Symplectic => {
                for i in 0..d {
                    if gram[i][i] != 0 {
                        return Err(Error::BadDescriptor("alternating Gram needs zero diagonal".into()));
                    }
                    for j in 0..d {
                        if gram[j][i] != field.neg(gram[i][j]) {
                            return Err(Error::BadDescriptor("Gram is not alternating".into()));
                        }
                    }
                }
            }
            FormKind::Hermitian => {
                if !field.has_involution() {
                    return Err(Error::NoInvolution(field.e()));
                }
                for i in 0..d {
                    for j in 0..d {
                        if gram[j][i] != field.conj(gram[i][j])? {
                            return Err(Error::BadDescriptor("Gram is not hermitian".into()));
                        }
                    }
                }
            }
            _ => {
                return Err(Error::BadDescriptor(
                    "orthogonal kinds are built from quadratic data".into(),
                ))
            }
        }
        let mut form =
            ClassicalForm { kind, tag, label, field: field.clone(), dim: d, gram, quad: None, witt: 0, validated: true };
        form.validate_nondegenerate()?;
        form.witt = form.compute_witt_index();
        Ok(form)
    }

    /// Deliberately skip the non-degeneracy validation (the axioms checker
    /// exercises degenerate forms on purpose).
    pub fn from_gram_unchecked(
        kind: FormKind,
        tag: PolarFormTag,
        label: String,
        field: &FieldSpec,
        gram: Vec<Vec<u16>>,
    ) -> Self {
        let d = gram.len();
        let mut form = ClassicalForm {
            kind,
            tag,
            label,
            field: field.clone(),
            dim: d,
            gram,
            quad: None,
            witt: 0,
            validated: false,
        };
        form.witt = form.compute_witt_index();
        form
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }
    pub fn tag(&self) -> PolarFormTag {
        self.tag
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn gram(&self) -> &[Vec<u16>] {
        &self.gram
    }
    pub fn quad(&self) -> Option<&Vec<Vec<u16>>> {
        self.quad.as_ref()
    }
    pub fn witt_index(&self) -> usize {
        self.witt
    }
    /// False only for forms built through the unchecked constructor.
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Singular-point count for a non-degenerate form of this kind and
    /// dimension; None when it overflows or the shape is non-standard.
    pub fn point_count(&self) -> Option<u128> {
        point_count_of(self.kind, self.dim, self.field.order() as u128)
    }

    /// Exact count of totally singular subspaces of vector dimension t for
    /// this form's kind and dimension; None on overflow or odd shapes.
    pub fn singular_count(&self, t: usize) -> Option<u128> {
        singular_count_of(self.kind, self.dim, self.field.order() as u128, t)
    }

    /// B(x, y); the second argument is conjugated for hermitian forms.
    pub fn bilinear(&self, x: &[u16], y: &[u16]) -> u16 {
        let f = &self.field;
        let hermitian = self.kind == FormKind::Hermitian;
        let mut acc = 0u16;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut row_acc = 0u16;
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 || self.gram[i][j] == 0 {
                    continue;
                }
                let yc = if hermitian { f.conj(yj).expect("hermitian field has conj") } else { yj };
                row_acc = f.add(row_acc, f.mul(self.gram[i][j], yc));
            }
            acc = f.add(acc, f.mul(xi, row_acc));
        }
        acc
    }

    /// Q(x) for orthogonal kinds; None for the others.
    pub fn quad_value(&self, x: &[u16]) -> Option<u16> {
        let quad = self.quad.as_ref()?;
        let f = &self.field;
        let mut acc = 0u16;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &qij) in quad[i].iter().enumerate().skip(i) {
                if qij == 0 || x[j] == 0 {
                    continue;
                }
                acc = f.add(acc, f.mul(qij, f.mul(xi, x[j])));
            }
        }
        Some(acc)
    }

    /// Is the vector a point of the polar space (isotropic/singular)?
    pub fn is_singular_vector(&self, v: &[u16]) -> bool {
        match self.kind {
            FormKind::Symplectic => true,
            FormKind::Hermitian => self.bilinear(v, v) == 0,
            _ => self.quad_value(v) == Some(0),
        }
    }

    /// Does the whole subspace consist of singular vectors with all pairs
    /// orthogonal? Checking basis vectors and basis pairs suffices.
    pub fn is_totally_singular(&self, x: &Subspace) -> bool {
        let rows = x.rows();
        for (a, ra) in rows.iter().enumerate() {
            if !self.is_singular_vector(ra) {
                return false;
            }
            for rb in rows.iter().skip(a) {
                if self.bilinear(ra, rb) != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// perp(X) = {v : B(v, x) = 0 for all x in X}.
    pub fn perp(&self, x: &Subspace) -> Result<Subspace> {
        if x.ambient_dim() != self.dim {
            return Err(Error::AmbientMismatch { left: x.ambient_dim(), right: self.dim });
        }
        let f = &self.field;
        let hermitian = self.kind == FormKind::Hermitian;
        // constraint row for basis vector b: w[i] = B(e_i, b)
        let mut constraints = Vec::with_capacity(x.vdim());
        for b in x.rows() {
            let mut w = vec![0u16; self.dim];
            for (i, slot) in w.iter_mut().enumerate() {
                let mut acc = 0u16;
                for (j, &bj) in b.iter().enumerate() {
                    if bj == 0 || self.gram[i][j] == 0 {
                        continue;
                    }
                    let bc = if hermitian { f.conj(bj)? } else { bj };
                    acc = f.add(acc, f.mul(self.gram[i][j], bc));
                }
                *slot = acc;
            }
            constraints.push(w);
        }
        let ker = linalg::kernel(f, &constraints, self.dim);
        Subspace::canonicalize(f, self.dim, &ker)
    }

    /// The radical of the bilinear part.
    pub fn radical(&self) -> Result<Subspace> {
        self.perp(&Subspace::full(&self.field, self.dim))
    }

    fn validate_nondegenerate(&self) -> Result<()> {
        let rad = self.radical()?;
        if self.kind.is_orthogonal() {
            // singular radical: radical vectors on the quadric
            for v in rad.all_vectors() {
                if v.iter().any(|&c| c != 0) && self.is_singular_vector(&v) {
                    return Err(Error::DegenerateForm(format!(
                        "radical vector {v:?} lies on the quadric"
                    )));
                }
            }
            Ok(())
        } else if rad.is_zero() {
            Ok(())
        } else {
            Err(Error::DegenerateForm(format!("bilinear radical has dimension {}", rad.vdim())))
        }
    }

    /// B vanishes between every point of X and every point of Y.
    pub fn pairwise_perp(&self, x: &Subspace, y: &Subspace) -> bool {
        x.rows().iter().all(|a| y.rows().iter().all(|b| self.bilinear(a, b) == 0))
    }

    /// Collinearity of two distinct singular points, by the fast bilinear
    /// test. For singular inputs this is equivalent to the spanned line
    /// being totally singular.
    pub fn collinear_vectors(&self, p: &[u16], q: &[u16]) -> bool {
        self.bilinear(p, q) == 0
    }

    /// Collinearity by the definition: the spanned line is 2-dimensional
    /// and totally singular. The axioms checker uses this slower route.
    pub fn collinear_by_span(&self, p: &[u16], q: &[u16]) -> Result<bool> {
        let line =
            Subspace::canonicalize(&self.field, self.dim, &[p.to_vec(), q.to_vec()])?;
        Ok(line.vdim() == 2 && self.is_totally_singular(&line))
    }

    /// First singular vector of perp(X) outside X, in odometer order.
    fn greedy_extension(&self, x: &Subspace) -> Result<Option<Vec<u16>>> {
        let perp = self.perp(x)?;
        for v in perp.all_vectors() {
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            if self.is_singular_vector(&v) && !x.contains_vector(&v) {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    /// Extend a totally singular subspace to a maximal one, deterministically.
    pub fn maximal_singular_through(&self, x: &Subspace) -> Result<Subspace> {
        if !self.is_totally_singular(x) {
            return Err(Error::IncidenceViolation("seed subspace is not totally singular".into()));
        }
        let mut current = x.clone();
        while let Some(v) = self.greedy_extension(&current)? {
            let mut rows: Vec<Vec<u16>> = current.rows().to_vec();
            rows.push(v);
            current = Subspace::canonicalize(&self.field, self.dim, &rows)?;
        }
        Ok(current)
    }

    fn compute_witt_index(&self) -> usize {
        self.maximal_singular_through(&Subspace::zero(&self.field, self.dim))
            .map(|s| s.vdim())
            .unwrap_or(0)
    }

    /// Split off hyperbolic pairs (u_i, v_i) with Q(u_i) = Q(v_i) = 0,
    /// B(u_i, v_j) = δ_ij and all other basis products zero. Returns the
    /// pairs and a basis of the anisotropic remainder.
    pub fn hyperbolic_basis(&self) -> Result<(Vec<(Vec<u16>, Vec<u16>)>, Vec<Vec<u16>>)> {
        let f = &self.field;
        let mut pairs: Vec<(Vec<u16>, Vec<u16>)> = Vec::new();
        let mut rest = Subspace::full(f, self.dim);
        loop {
            let mut found: Option<Vec<u16>> = None;
            for v in rest.all_vectors() {
                if v.iter().any(|&c| c != 0) && self.is_singular_vector(&v) {
                    found = Some(v);
                    break;
                }
            }
            let Some(u) = found else { break };
            let mut partner: Option<Vec<u16>> = None;
            for w in rest.all_vectors() {
                if self.bilinear(&u, &w) != 0 {
                    partner = Some(w);
                    break;
                }
            }
            let w = partner.ok_or_else(|| {
                Error::Internal("singular vector with no partner in a non-degenerate form".into())
            })?;
            // scale so that B(u, w) = 1
            let b = self.bilinear(&u, &w);
            let scale = match self.kind {
                FormKind::Hermitian => f.conj(f.inv(b)?)?,
                _ => f.inv(b)?,
            };
            let w: Vec<u16> = w.iter().map(|&c| f.mul(c, scale)).collect();
            // shift w along u until it is singular; B(u, w + t u) stays 1
            let mut w_singular: Option<Vec<u16>> = None;
            for t in f.elements() {
                let cand: Vec<u16> =
                    w.iter().zip(&u).map(|(&wc, &uc)| f.add(wc, f.mul(t, uc))).collect();
                if self.is_singular_vector(&cand) {
                    w_singular = Some(cand);
                    break;
                }
            }
            let w = w_singular.ok_or_else(|| {
                Error::Internal("hyperbolic partner cannot be made singular".into())
            })?;
            debug_assert_eq!(self.bilinear(&u, &w), 1);
            let plane = Subspace::canonicalize(f, self.dim, &[u.clone(), w.clone()])?;
            pairs.push((u, w));
            rest = rest.meet(&self.perp(&plane)?)?;
            if rest.is_zero() {
                break;
            }
        }
        Ok((pairs, rest.rows().to_vec()))
    }

    /// The companion form of the bilinear part, when it is alternating
    /// (always in characteristic 2 for quadratic forms).
    pub fn bilinear_companion(&self) -> Result<ClassicalForm> {
        for i in 0..self.dim {
            if self.gram[i][i] != 0 {
                return Err(Error::BadDescriptor("bilinear part is not alternating".into()));
            }
            for j in 0..self.dim {
                if self.gram[j][i] != self.field.neg(self.gram[i][j]) {
                    return Err(Error::BadDescriptor("bilinear part is not alternating".into()));
                }
            }
        }
        ClassicalForm::from_gram(
            FormKind::Symplectic,
            PolarFormTag::Symplectic,
            format!("B({})", self.label),
            &self.field,
            self.gram.clone(),
        )
    }
}

impl std::fmt::Debug for ClassicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (witt {})", self.label, self.witt)
    }
}

/// Singular-point counts of the standard non-degenerate forms. Residues
/// keep the kind and drop the dimension by two, so this covers them too.
fn point_count_of(kind: FormKind, d: usize, q: u128) -> Option<u128> {
    let proj = |d: usize| -> Option<u128> { Some((q.checked_pow(d as u32)? - 1) / (q - 1)) };
    match kind {
        FormKind::Symplectic => proj(d),
        FormKind::OrthogonalOdd => {
            if d % 2 == 0 {
                return None;
            }
            proj(d - 1)
        }
        FormKind::OrthogonalPlus => {
            if d % 2 != 0 {
                return None;
            }
            let n = (d / 2) as u32;
            Some((q.checked_pow(n - 1)? + 1) * (q.checked_pow(n)? - 1) / (q - 1))
        }
        FormKind::OrthogonalMinus => {
            if d % 2 != 0 {
                return None;
            }
            let n = (d / 2) as u32;
            Some((q.checked_pow(n - 1)? - 1) * (q.checked_pow(n)? + 1) / (q - 1))
        }
        FormKind::Hermitian => {
            // q = q0^2 for the involution to exist
            let q0 = (1..=q).find(|x| x * x == q)?;
            let sign = |k: usize| if k % 2 == 0 { 1i128 } else { -1i128 };
            let a = (q0.checked_pow(d as u32)? as i128 - sign(d)) as u128;
            let b = (q0.checked_pow(d as u32 - 1)? as i128 - sign(d - 1)) as u128;
            Some(a * b / (q - 1))
        }
    }
}

/// Exact count of totally singular subspaces of vector dimension t, via the
/// ordered-flag product over successive residues.
pub fn singular_count_of(kind: FormKind, d: usize, q: u128, t: usize) -> Option<u128> {
    if t == 0 {
        return Some(1);
    }
    let mut numerator: u128 = 1;
    for j in 0..t {
        if d < 2 * j {
            return None;
        }
        let points = point_count_of(kind, d - 2 * j, q)?;
        numerator = numerator
            .checked_mul(points)?
            .checked_mul(q.checked_pow(j as u32)?)?;
    }
    let mut denominator: u128 = 1;
    let qt = q.checked_pow(t as u32)?;
    for j in 0..t {
        denominator = denominator.checked_mul(qt - q.pow(j as u32))?;
    }
    denominator /= (q - 1).pow(t as u32);
    Some(numerator / denominator)
}

/// Least c (by element code) making x^2 + xy + c y^2 anisotropic.
fn anisotropic_binary_coefficient(field: &FieldSpec) -> Result<u16> {
    'next: for c in field.elements() {
        for a in field.elements() {
            for b in field.elements() {
                if a == 0 && b == 0 {
                    continue;
                }
                // a^2 + ab + c b^2
                let val = field.add(
                    field.add(field.mul(a, a), field.mul(a, b)),
                    field.mul(c, field.mul(b, b)),
                );
                if val == 0 {
                    continue 'next;
                }
            }
        }
        return Ok(c);
    }
    Err(Error::Internal("no anisotropic binary quadratic over this field".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldSpec {
        match q {
            2 => FieldSpec::make(2, 1, None).unwrap(),
            3 => FieldSpec::make(3, 1, None).unwrap(),
            4 => FieldSpec::make(2, 2, None).unwrap(),
            _ => panic!(),
        }
    }

    fn e(d: usize, i: usize) -> Vec<u16> {
        let mut v = vec![0u16; d];
        v[i] = 1;
        v
    }

    #[test]
    fn witt_indices_of_standard_models() {
        let f2 = gf(2);
        assert_eq!(ClassicalForm::symplectic(&f2, 2).unwrap().witt_index(), 2);
        assert_eq!(ClassicalForm::symplectic(&f2, 3).unwrap().witt_index(), 3);
        assert_eq!(ClassicalForm::orthogonal_plus(&f2, 3).unwrap().witt_index(), 3);
        assert_eq!(ClassicalForm::orthogonal_plus(&f2, 4).unwrap().witt_index(), 4);
        assert_eq!(ClassicalForm::orthogonal_minus(&f2, 3).unwrap().witt_index(), 2);
        assert_eq!(ClassicalForm::orthogonal_odd(&f2, 2).unwrap().witt_index(), 2);
        assert_eq!(ClassicalForm::klein(&f2).unwrap().witt_index(), 3);
        let f4 = gf(4);
        assert_eq!(ClassicalForm::hermitian(&f4, 4).unwrap().witt_index(), 2);
        let f3 = gf(3);
        assert_eq!(ClassicalForm::symplectic(&f3, 2).unwrap().witt_index(), 2);
        assert_eq!(ClassicalForm::orthogonal_plus(&f3, 2).unwrap().witt_index(), 2);
    }

    #[test]
    fn symplectic_collinearity_on_hyperbolic_pairs() {
        // pairs (e0, e1), (e2, e3): e0 ⊥ e2 but not e0 ⊥ e1
        let f2 = gf(2);
        let sp = ClassicalForm::symplectic(&f2, 2).unwrap();
        assert_eq!(sp.bilinear(&e(4, 0), &e(4, 2)), 0);
        assert_eq!(sp.bilinear(&e(4, 0), &e(4, 1)), 1);
        assert!(sp.collinear_vectors(&e(4, 0), &e(4, 2)));
        assert!(!sp.collinear_vectors(&e(4, 0), &e(4, 1)));
    }

    #[test]
    fn quadric_singularity() {
        let f2 = gf(2);
        let oplus = ClassicalForm::orthogonal_plus(&f2, 3).unwrap();
        let zero = Subspace::zero(&f2, 6);
        assert!(oplus.is_totally_singular(&zero));
        // span(e0, e1) is not singular: Q(e0 + e1) = 1
        let bad = Subspace::canonicalize(&f2, 6, &[e(6, 0), e(6, 1)]).unwrap();
        assert!(!oplus.is_totally_singular(&bad));
        assert_eq!(oplus.quad_value(&[1, 1, 0, 0, 0, 0]), Some(1));
        // span(e0, e2) is singular
        let good = Subspace::canonicalize(&f2, 6, &[e(6, 0), e(6, 2)]).unwrap();
        assert!(oplus.is_totally_singular(&good));
    }

    #[test]
    fn perp_dimensions() {
        let f2 = gf(2);
        let sp = ClassicalForm::symplectic(&f2, 3).unwrap();
        let p = Subspace::canonicalize(&f2, 6, &[e(6, 0)]).unwrap();
        let perp = sp.perp(&p).unwrap();
        assert_eq!(perp.vdim(), 5);
        assert!(perp.contains(&p));
        assert!(sp.radical().unwrap().is_zero());
    }

    #[test]
    fn degenerate_forms_are_rejected_checked_only() {
        let f2 = gf(2);
        // alternating Gram with a two-dimensional radical
        let mut gram = vec![vec![0u16; 4]; 4];
        gram[0][1] = 1;
        gram[1][0] = 1; // -1 = 1 over GF(2)
        let err = ClassicalForm::from_gram(
            FormKind::Symplectic,
            PolarFormTag::Symplectic,
            "degenerate".into(),
            &f2,
            gram.clone(),
        );
        assert!(matches!(err, Err(Error::DegenerateForm(_))));
        let unchecked = ClassicalForm::from_gram_unchecked(
            FormKind::Symplectic,
            PolarFormTag::Symplectic,
            "degenerate".into(),
            &f2,
            gram,
        );
        assert_eq!(unchecked.radical().unwrap().vdim(), 2);
    }

    #[test]
    fn hyperbolic_basis_of_standard_models() {
        let f2 = gf(2);
        for form in [
            ClassicalForm::symplectic(&f2, 3).unwrap(),
            ClassicalForm::orthogonal_plus(&f2, 3).unwrap(),
            ClassicalForm::orthogonal_minus(&f2, 3).unwrap(),
            ClassicalForm::klein(&f2).unwrap(),
            ClassicalForm::hermitian(&gf(4), 4).unwrap(),
        ] {
            let (pairs, rest) = form.hyperbolic_basis().unwrap();
            assert_eq!(pairs.len(), form.witt_index(), "{form:?}");
            for (a, (u, v)) in pairs.iter().enumerate() {
                assert!(form.is_singular_vector(u));
                assert!(form.is_singular_vector(v));
                assert_eq!(form.bilinear(u, v), 1);
                for (u2, v2) in pairs.iter().skip(a + 1) {
                    assert_eq!(form.bilinear(u, u2), 0);
                    assert_eq!(form.bilinear(u, v2), 0);
                    assert_eq!(form.bilinear(v, u2), 0);
                    assert_eq!(form.bilinear(v, v2), 0);
                }
            }
            // remainder is anisotropic
            let rest_space = Subspace::canonicalize(form.field(), form.dim(), &rest).unwrap();
            for v in rest_space.all_vectors() {
                if v.iter().any(|&c| c != 0) {
                    assert!(!form.is_singular_vector(&v));
                }
            }
            assert_eq!(2 * pairs.len() + rest.len(), form.dim());
        }
    }

    #[test]
    fn collinear_fast_path_agrees_with_span_definition() {
        let f2 = gf(2);
        for form in [
            ClassicalForm::symplectic(&f2, 2).unwrap(),
            ClassicalForm::orthogonal_plus(&f2, 3).unwrap(),
            ClassicalForm::klein(&f2).unwrap(),
        ] {
            let reps = crate::linalg::projective_reps(&f2, form.dim());
            let points: Vec<Vec<u16>> =
                reps.into_iter().filter(|v| form.is_singular_vector(v)).collect();
            for p in &points {
                for q in &points {
                    if p == q {
                        continue;
                    }
                    assert_eq!(
                        form.collinear_vectors(p, q),
                        form.collinear_by_span(p, q).unwrap(),
                        "{p:?} {q:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn elliptic_tail_coefficient_gf2() {
        assert_eq!(anisotropic_binary_coefficient(&gf(2)).unwrap(), 1);
        // GF(3): x^2 + xy + 2y^2 has discriminant 1 - 8 = -7 = 2, a non-square
        assert_eq!(anisotropic_binary_coefficient(&gf(3)).unwrap(), 2);
    }
}
