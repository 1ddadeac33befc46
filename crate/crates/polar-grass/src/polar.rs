//! Finite classical polar spaces and their Grassmann graphs.
//!
//! A `PolarSpace` wraps a non-degenerate form, enumerates singular
//! subspaces by incremental extension, builds Γ_k(Π) for every admissible
//! k, provides the closed-form distance with its two-case analysis, and
//! realizes point-residues as quotient polar spaces.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::descriptor::{Budget, GraphDescriptor, PolarFormTag};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::form::{ClassicalForm, FormKind};
use crate::graph::GeometryGraph;
use crate::linalg;
use crate::subspace::{subspaces_between, Subspace};

#[derive(Clone)]
pub struct PolarSpace {
    form: ClassicalForm,
    rank: usize,
    points: Vec<Subspace>,
    lines: OnceLock<Vec<Subspace>>,
}

impl PolarSpace {
    /// Build a polar space from a validated form. Fails when the Witt index
    /// is below 2 (no lines) or the point count exceeds the budget.
    pub fn from_form(form: ClassicalForm, budget: &Budget) -> Result<Self> {
        if form.witt_index() < 2 {
            return Err(Error::WittIndexTooSmall(form.witt_index()));
        }
        Self::from_form_unchecked(form, budget)
    }

    /// Same, but admits degenerate or low-rank forms; used to feed the
    /// axioms checker deliberately broken geometries.
    pub fn from_form_unchecked(form: ClassicalForm, budget: &Budget) -> Result<Self> {
        let points = enumerate_points(&form, budget.max_vertices as u128)?;
        let rank = form.witt_index();
        Ok(PolarSpace { form, rank, points, lines: OnceLock::new() })
    }

    /// Standard model by tag: Sp/O+/O- need even d, Oodd needs odd d,
    /// U needs a field with an involution, Klein fixes d = 6.
    pub fn standard(tag: PolarFormTag, d: usize, field: &FieldSpec, budget: &Budget) -> Result<Self> {
        let form = match tag {
            PolarFormTag::Symplectic => {
                require_even(d, "Sp")?;
                ClassicalForm::symplectic(field, d / 2)?
            }
            PolarFormTag::OrthogonalPlus => {
                require_even(d, "O+")?;
                ClassicalForm::orthogonal_plus(field, d / 2)?
            }
            PolarFormTag::OrthogonalMinus => {
                require_even(d, "O-")?;
                ClassicalForm::orthogonal_minus(field, d / 2)?
            }
            PolarFormTag::OrthogonalOdd => {
                if d % 2 != 1 {
                    return Err(Error::BadDescriptor(format!("Oodd needs odd dimension, got {d}")));
                }
                ClassicalForm::orthogonal_odd(field, (d - 1) / 2)?
            }
            PolarFormTag::Hermitian => ClassicalForm::hermitian(field, d)?,
            PolarFormTag::Klein => {
                if d != 6 {
                    return Err(Error::BadDescriptor(format!("the Klein quadric has d = 6, got {d}")));
                }
                ClassicalForm::klein(field)?
            }
        };
        Self::from_form(form, budget)
    }

    pub fn form(&self) -> &ClassicalForm {
        &self.form
    }
    pub fn field(&self) -> &FieldSpec {
        self.form.field()
    }
    /// Polar-space rank n: maximal singular subspaces have vector
    /// dimension n (projective dimension n - 1).
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    /// Singular lines, enumerated lazily.
    pub fn lines(&self) -> Result<&[Subspace]> {
        if self.lines.get().is_none() {
            let lines = self.enumerate_singular_pdim(1, u128::MAX)?;
            let _ = self.lines.set(lines);
        }
        Ok(self.lines.get().expect("just initialized").as_slice())
    }

    pub fn graph_descriptor(&self, k: usize) -> GraphDescriptor {
        GraphDescriptor::Polar {
            form: self.form.tag(),
            d: self.form.dim(),
            k,
            field: self.field().descriptor(),
            gram: Some(self.form.gram().to_vec()),
            quad: self.form.quad().cloned(),
        }
    }

    /// Exact predicted size of 𝒢_k(Π) from the flag-count product formula,
    /// available for validated forms of standard shape.
    pub fn predicted_singular_count(&self, k: usize) -> Option<u128> {
        if !self.form.is_validated() {
            return None;
        }
        self.form.singular_count(k + 1)
    }

    /// All singular subspaces of projective dimension k, by incremental
    /// extension with canonical deduplication; deterministic order. The
    /// product-formula prediction gates the budget up front and the final
    /// count is cross-checked against it.
    pub fn enumerate_singular_pdim(&self, k: usize, budget: u128) -> Result<Vec<Subspace>> {
        if k + 1 > self.rank {
            return Err(Error::DimensionMismatch(format!(
                "no singular subspaces of projective dimension {k} in rank {}",
                self.rank
            )));
        }
        let predicted = self.predicted_singular_count(k);
        if let Some(predicted) = predicted {
            if predicted > budget {
                return Err(Error::BudgetExceeded { predicted, budget });
            }
        }
        let mut level: Vec<Subspace> = self.points.clone();
        if k == 0 {
            return Ok(level);
        }
        for _ in 0..k {
            let mut next: HashSet<Subspace> = HashSet::new();
            for x in &level {
                let perp = self.form.perp(x)?;
                for p in perp.point_vectors() {
                    if !self.form.is_singular_vector(&p) || x.contains_vector(&p) {
                        continue;
                    }
                    let mut rows: Vec<Vec<u16>> = x.rows().to_vec();
                    rows.push(p);
                    let ext = Subspace::canonicalize(self.field(), self.form.dim(), &rows)?;
                    if next.len() as u128 >= budget && !next.contains(&ext) {
                        return Err(Error::BudgetExceeded {
                            predicted: budget.saturating_add(1),
                            budget,
                        });
                    }
                    next.insert(ext);
                }
            }
            let mut sorted: Vec<Subspace> = next.into_iter().collect();
            sorted.sort();
            level = sorted;
        }
        if let Some(predicted) = predicted {
            if level.len() as u128 != predicted {
                return Err(Error::Internal(format!(
                    "singular enumeration found {} subspaces, the count formula says {}",
                    level.len(),
                    predicted
                )));
            }
        }
        Ok(level)
    }

    /// The polar Grassmann graph Γ_k(Π). For k ≤ n-2 adjacency is a common
    /// (k+1)-dimensional singular subspace; for k = n-1 (the dual polar
    /// graph) it is an (n-2)-dimensional intersection.
    pub fn polar_graph(&self, k: usize, budget: &Budget) -> Result<GeometryGraph> {
        let n = self.rank;
        if k + 1 > n {
            return Err(Error::DimensionMismatch(format!(
                "k = {k} exceeds the maximal projective dimension {}",
                n - 1
            )));
        }
        let vertices = self.enumerate_singular_pdim(k, budget.max_vertices as u128)?;
        let form = self.form.clone();
        let dual = k + 1 == n;
        let target_meet = k; // vdim of the required intersection for k <= n-2
        GeometryGraph::build(vertices, self.graph_descriptor(k), move |x, y| {
            if dual {
                x.meet(y).map(|m| m.vdim() == n - 1).unwrap_or(false)
            } else {
                match x.meet_join(y) {
                    Ok((meet, join)) => {
                        meet.vdim() == target_meet && form.is_totally_singular(&join)
                    }
                    Err(_) => false,
                }
            }
        })
    }

    fn check_vertex(&self, x: &Subspace, k: usize) -> Result<()> {
        if x.vdim() != k + 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected projective dimension {k}, got vector dimension {}",
                x.vdim()
            )));
        }
        if !self.form.is_totally_singular(x) {
            return Err(Error::IncidenceViolation("subspace is not totally singular".into()));
        }
        Ok(())
    }

    /// Closed-form distance in Γ_k(Π).
    ///
    /// For the dual polar graph: d = n - 1 - pdim(X ∩ Y). Otherwise, with
    /// c = pdim(X ∩ Y): d = k - c when points p ∈ X\Y with p ⊥ Y and
    /// q ∈ Y\X with q ⊥ X both exist, else d = k - c + 1.
    pub fn closed_distance(&self, x: &Subspace, y: &Subspace, k: usize) -> Result<usize> {
        self.check_vertex(x, k)?;
        self.check_vertex(y, k)?;
        if x == y {
            return Ok(0);
        }
        let meet = x.meet(y)?;
        let c = meet.vdim() as isize - 1;
        if k + 1 == self.rank {
            return Ok(((self.rank as isize - 1) - c) as usize);
        }
        let base = (k as isize - c) as usize;
        if self.half_witness(x, y) && self.half_witness(y, x) {
            Ok(base)
        } else {
            Ok(base + 1)
        }
    }

    /// Is there a point p in X\Y collinear to all of Y?
    fn half_witness(&self, x: &Subspace, y: &Subspace) -> bool {
        x.point_vectors().iter().any(|p| {
            !y.contains_vector(p) && y.rows().iter().all(|r| self.form.bilinear(p, r) == 0)
        })
    }

    /// Raw ingredients of the distance-case analysis for a pair.
    pub fn pair_data(&self, x: &Subspace, y: &Subspace) -> Result<PairData> {
        let meet = x.meet(y)?;
        Ok(PairData {
            meet_pdim: meet.vdim() as isize - 1,
            perp: self.form.pairwise_perp(x, y),
            witness_x: self.half_witness(x, y),
            witness_y: self.half_witness(y, x),
        })
    }

    /// The three mutually exclusive configurations of a distance-2 pair
    /// in Γ_k(Π), k ≤ n-2; None when the pair matches none of them.
    pub fn distance2_case(&self, x: &Subspace, y: &Subspace, k: usize) -> Result<Option<PairCase>> {
        let data = self.pair_data(x, y)?;
        let k = k as isize;
        let case = if data.meet_pdim == k - 2 && data.perp {
            Some(PairCase::Collinear)
        } else if data.meet_pdim == k - 2 && !data.perp && data.witness_x && data.witness_y {
            Some(PairCase::UniqueMidpoint)
        } else if data.meet_pdim == k - 1 && !data.perp {
            Some(PairCase::DeepIntersection)
        } else {
            None
        };
        Ok(case)
    }

    /// The star [S, U]_k: singular X with S ⊂ X ⊂ U, pdim(S) = k-1 and U
    /// maximal singular.
    pub fn star(&self, s: &Subspace, u: &Subspace, k: usize) -> Result<Vec<Subspace>> {
        if s.vdim() != k || u.vdim() != self.rank {
            return Err(Error::IncidenceViolation(format!(
                "star needs dims (vdim {}, vdim {}), got ({}, {})",
                k,
                self.rank,
                s.vdim(),
                u.vdim()
            )));
        }
        if !self.form.is_totally_singular(u) || !u.contains(s) {
            return Err(Error::IncidenceViolation(
                "star needs incident singular subspaces".into(),
            ));
        }
        subspaces_between(s, u, k + 1, 1 << 24)
    }

    /// The top ⟨U]_k: singular X ⊂ U with pdim(U) = k+1.
    pub fn top(&self, u: &Subspace, k: usize) -> Result<Vec<Subspace>> {
        if u.vdim() != k + 2 {
            return Err(Error::IncidenceViolation(format!(
                "top carrier needs vdim {}, got {}",
                k + 2,
                u.vdim()
            )));
        }
        if !self.form.is_totally_singular(u) {
            return Err(Error::IncidenceViolation("top carrier must be singular".into()));
        }
        let zero = Subspace::zero(self.field(), self.form.dim());
        subspaces_between(&zero, u, k + 1, 1 << 24)
    }

    /// The line [S, U]_k with pdim(S) = k-1, pdim(U) = k+1; q+1 elements.
    pub fn line_set(&self, s: &Subspace, u: &Subspace) -> Result<Vec<Subspace>> {
        if u.vdim() != s.vdim() + 2 {
            return Err(Error::IncidenceViolation(
                "line needs pdim(U) = pdim(S) + 2".into(),
            ));
        }
        if !self.form.is_totally_singular(u) || !u.contains(s) {
            return Err(Error::IncidenceViolation("line needs incident singular subspaces".into()));
        }
        subspaces_between(s, u, s.vdim() + 1, 1 << 24)
    }

    /// The residue Π_S = S^⊥/S with the induced form: a polar space of rank
    /// n - vdim(S) whose points correspond to [S⟩ elements one dimension up.
    pub fn residue(&self, s: &Subspace, budget: &Budget) -> Result<Residue> {
        if !self.form.is_totally_singular(s) || s.is_zero() {
            return Err(Error::IncidenceViolation(
                "residue base must be a nonzero singular subspace".into(),
            ));
        }
        let drop = s.vdim();
        if self.rank < drop + 2 {
            return Err(Error::RankTooSmall { rank: self.rank - drop, need: 2 });
        }
        let field = self.field().clone();
        let perp = self.form.perp(s)?;
        // complement of S inside perp(S), from the canonical perp rows
        let mut complement: Vec<Vec<u16>> = Vec::with_capacity(perp.vdim() - drop);
        let mut current = s.clone();
        for row in perp.rows() {
            if !current.contains_vector(row) {
                complement.push(row.clone());
                let mut rows: Vec<Vec<u16>> = current.rows().to_vec();
                rows.push(row.clone());
                current = Subspace::canonicalize(&field, self.form.dim(), &rows)?;
            }
        }
        let dq = complement.len();
        let label = format!("{}/{:?}", self.form.label(), s.rows());
        let form = match self.form.kind() {
            FormKind::Symplectic | FormKind::Hermitian => {
                let mut gram = vec![vec![0u16; dq]; dq];
                for (i, ci) in complement.iter().enumerate() {
                    for (j, cj) in complement.iter().enumerate() {
                        gram[i][j] = self.form.bilinear(ci, cj);
                    }
                }
                ClassicalForm::from_gram(self.form.kind(), self.form.tag(), label, &field, gram)?
            }
            _ => {
                let mut quad = vec![vec![0u16; dq]; dq];
                for (i, ci) in complement.iter().enumerate() {
                    quad[i][i] = self.form.quad_value(ci).expect("orthogonal kind has Q");
                    for (j, cj) in complement.iter().enumerate().skip(i + 1) {
                        quad[i][j] = self.form.bilinear(ci, cj);
                    }
                }
                ClassicalForm::from_quad(self.form.kind(), self.form.tag(), label, &field, quad)?
            }
        };
        let space = PolarSpace::from_form(form, budget)?;
        Ok(Residue { space, base: s.clone(), complement, ambient: self.form.dim() })
    }

    /// Identify a maximal clique of Γ_k(Π) by the taxonomy: stars and tops
    /// for 1 ≤ k ≤ n-3, tops only at k = n-2, lines at k = n-1 (and maximal
    /// singular subspaces at k = 0).
    pub fn classify_polar_clique(
        &self,
        graph: &GeometryGraph,
        clique: &[u32],
        k: usize,
    ) -> Result<PolarCliqueKind> {
        if clique.is_empty() {
            return Err(Error::Unclassifiable("empty clique".into()));
        }
        for (a, &v) in clique.iter().enumerate() {
            for &w in &clique[a + 1..] {
                if !graph.are_adjacent(v, w) {
                    return Err(Error::NotAClique(v, w));
                }
            }
        }
        let members: Vec<&Subspace> =
            clique.iter().map(|&v| graph.vertex(v)).collect::<Result<_>>()?;
        let mut common = members[0].clone();
        let mut span = members[0].clone();
        for m in &members[1..] {
            common = common.meet(m)?;
            span = span.join(m)?;
        }
        let n = self.rank;
        if k + 1 == n {
            // dual polar: lines [S> with S of projective dimension n-2
            if common.vdim() == n - 1 {
                return Ok(PolarCliqueKind::Line(common));
            }
            return Err(Error::Unclassifiable(format!(
                "dual polar clique with intersection dim {}",
                common.vdim()
            )));
        }
        if k == 0 {
            if self.form.is_totally_singular(&span) && span.vdim() == n {
                return Ok(PolarCliqueKind::MaximalSingular(span));
            }
            return Err(Error::Unclassifiable(
                "point clique does not span a maximal singular subspace".into(),
            ));
        }
        let top_like = span.vdim() == k + 2 && self.form.is_totally_singular(&span);
        let star_like = common.vdim() == k && self.form.is_totally_singular(&span);
        match (star_like, top_like) {
            (true, false) => {
                let carrier = self.form.maximal_singular_through(&span)?;
                Ok(PolarCliqueKind::Star(common, carrier))
            }
            (false, true) => Ok(PolarCliqueKind::Top(span)),
            (true, true) => Err(Error::Unclassifiable("clique fits inside a line".into())),
            (false, false) => Err(Error::Unclassifiable(format!(
                "intersection dim {}, span dim {} (singular: {})",
                common.vdim(),
                span.vdim(),
                self.form.is_totally_singular(&span)
            ))),
        }
    }

    /// Frame test: 2n distinct points whose non-collinearity relation is a
    /// perfect matching.
    pub fn is_frame(&self, pts: &[Subspace]) -> bool {
        let n = self.rank;
        if pts.len() != 2 * n {
            return false;
        }
        let mut seen = HashSet::new();
        for p in pts {
            if p.vdim() != 1 || !self.form.is_totally_singular(p) || !seen.insert(p.clone()) {
                return false;
            }
        }
        for (i, p) in pts.iter().enumerate() {
            let non_collinear = pts
                .iter()
                .enumerate()
                .filter(|(j, r)| i != *j && self.form.bilinear(&p.rows()[0], &r.rows()[0]) != 0)
                .count();
            if non_collinear != 1 {
                return false;
            }
        }
        true
    }

    /// Axioms (P1)-(P4), exhaustively over the enumerated points and lines.
    /// Collinearity here uses the definitional singular-span route, not the
    /// fast bilinear shortcut.
    pub fn axioms_check(&self) -> Result<AxiomsReport> {
        let q = self.field().order() as usize;
        let lines = self.lines()?.to_vec();
        let point_vecs: Vec<Vec<u16>> =
            self.points.iter().map(|p| p.rows()[0].clone()).collect();

        // P1: every line carries at least three points
        let p1 = {
            let mut check = AxiomCheck::pass(format!(
                "{} lines, each with {} points",
                lines.len(),
                q + 1
            ));
            for l in &lines {
                let count = l.point_vectors().len();
                if count < 3 {
                    check = AxiomCheck::fail(format!("line {:?} has only {count} points", l.rows()));
                    break;
                }
            }
            check
        };

        // P2: no point is collinear to every point
        let mut p2 = AxiomCheck::pass(format!("checked {} points", point_vecs.len()));
        'p2: for (i, p) in point_vecs.iter().enumerate() {
            for (j, r) in point_vecs.iter().enumerate() {
                if i != j && !self.form.collinear_by_span(p, r)? {
                    continue 'p2;
                }
            }
            p2 = AxiomCheck::fail(format!("point {p:?} is collinear to all points"));
            break;
        }

        // P3: a point sees one or all points of every line
        let mut p3 = AxiomCheck::pass(format!(
            "checked {} point-line pairs",
            point_vecs.len() * lines.len()
        ));
        'p3: for p in &point_vecs {
            for l in &lines {
                let pts = l.point_vectors();
                let mut seen = 0usize;
                for x in &pts {
                    // representatives are normalized, so same-point is equality
                    if x == p || self.form.collinear_by_span(p, x)? {
                        seen += 1;
                    }
                }
                if seen != 1 && seen != pts.len() {
                    p3 = AxiomCheck::fail(format!(
                        "point {p:?} sees {seen} of {} points of line {:?}",
                        pts.len(),
                        l.rows()
                    ));
                    break 'p3;
                }
            }
        }

        // P4: singular chains terminate; every greedy completion from every
        // point reaches the same maximal dimension (the rank)
        let mut p4 = AxiomCheck::pass(format!(
            "all greedy chains from {} points stop at vector dimension {}",
            self.points.len(),
            self.rank
        ));
        for p in &self.points {
            let maximal = self.form.maximal_singular_through(p)?;
            if maximal.vdim() != self.rank {
                p4 = AxiomCheck::fail(format!(
                    "chain from point {:?} stops at dimension {} instead of {}",
                    p.rows(),
                    maximal.vdim(),
                    self.rank
                ));
                break;
            }
        }

        Ok(AxiomsReport { p1, p2, p3, p4, rank: self.rank, point_count: self.points.len() })
    }
}

fn require_even(d: usize, tag: &str) -> Result<()> {
    if d % 2 != 0 {
        return Err(Error::BadDescriptor(format!("{tag} needs even dimension, got {d}")));
    }
    Ok(())
}

fn enumerate_points(form: &ClassicalForm, budget: u128) -> Result<Vec<Subspace>> {
    let reps = linalg::projective_reps(form.field(), form.dim());
    let mut out = Vec::new();
    for v in reps {
        if form.is_singular_vector(&v) {
            if out.len() as u128 >= budget {
                return Err(Error::BudgetExceeded {
                    predicted: budget.saturating_add(1),
                    budget,
                });
            }
            out.push(Subspace::canonicalize(form.field(), form.dim(), &[v])?);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairData {
    pub meet_pdim: isize,
    pub perp: bool,
    pub witness_x: bool,
    pub witness_y: bool,
}

/// Maximal-clique taxonomy of Γ_k(Π).
#[derive(Clone, Debug, PartialEq)]
pub enum PolarCliqueKind {
    /// [S, U]_k: everything between a (k-1)-dimensional S and a maximal U.
    Star(Subspace, Subspace),
    /// ⟨U]_k: everything inside a (k+1)-dimensional U.
    Top(Subspace),
    /// [S⟩_{n-1}: maximal subspaces through an (n-2)-dimensional S.
    Line(Subspace),
    /// k = 0: the points of a maximal singular subspace.
    MaximalSingular(Subspace),
}

/// The three configurations of a distance-2 pair in Γ_k(Π), k ≤ n-2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    /// (1): pdim(X∩Y) = k-2 and X ⊥ Y.
    Collinear,
    /// (2): pdim(X∩Y) = k-2, X not ⊥ Y, but one-sided collinear witnesses
    /// exist on both sides; such pairs have a unique common neighbor.
    UniqueMidpoint,
    /// (3): pdim(X∩Y) = k-1 and X not ⊥ Y.
    DeepIntersection,
}

/// The residue Π_S realized on the quotient S^⊥/S, with lifting and
/// projection between residue subspaces and [S⟩ elements of the parent.
pub struct Residue {
    pub space: PolarSpace,
    base: Subspace,
    complement: Vec<Vec<u16>>,
    ambient: usize,
}

impl Residue {
    pub fn base(&self) -> &Subspace {
        &self.base
    }

    /// Lift a residue subspace to the parent: S + (rows · complement).
    pub fn lift(&self, x: &Subspace) -> Result<Subspace> {
        let field = self.space.field().clone();
        let mut rows: Vec<Vec<u16>> = self.base.rows().to_vec();
        for r in x.rows() {
            rows.push(linalg::vec_mat_mul(&field, r, &self.complement));
        }
        Subspace::canonicalize(&field, self.ambient, &rows)
    }

    /// Project a parent subspace containing S back to residue coordinates.
    pub fn project(&self, x: &Subspace) -> Result<Subspace> {
        if !x.contains(&self.base) {
            return Err(Error::IncidenceViolation("subspace does not contain the base".into()));
        }
        let field = self.space.field().clone();
        let mut basis: Vec<Vec<u16>> = self.base.rows().to_vec();
        basis.extend(self.complement.iter().cloned());
        let s = self.base.vdim();
        let mut rows = Vec::new();
        for r in x.rows() {
            let coords = linalg::solve_coords(&field, &basis, r).ok_or_else(|| {
                Error::IncidenceViolation("subspace leaves the perp of the base".into())
            })?;
            rows.push(coords[s..].to_vec());
        }
        Subspace::canonicalize(&field, self.complement.len(), &rows)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub pass: bool,
    pub detail: String,
}

impl AxiomCheck {
    fn pass(detail: String) -> Self {
        AxiomCheck { pass: true, detail }
    }
    fn fail(detail: String) -> Self {
        AxiomCheck { pass: false, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomsReport {
    pub p1: AxiomCheck,
    pub p2: AxiomCheck,
    pub p3: AxiomCheck,
    pub p4: AxiomCheck,
    pub rank: usize,
    pub point_count: usize,
}

impl AxiomsReport {
    pub fn all_pass(&self) -> bool {
        self.p1.pass && self.p2.pass && self.p3.pass && self.p4.pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> FieldSpec {
        FieldSpec::make(2, 1, None).unwrap()
    }

    fn sp(d: usize) -> PolarSpace {
        PolarSpace::standard(PolarFormTag::Symplectic, d, &gf2(), &Budget::default()).unwrap()
    }

    fn oplus(d: usize) -> PolarSpace {
        PolarSpace::standard(PolarFormTag::OrthogonalPlus, d, &gf2(), &Budget::default()).unwrap()
    }

    fn e(d: usize, i: usize) -> Vec<u16> {
        let mut v = vec![0u16; d];
        v[i] = 1;
        v
    }

    #[test]
    fn point_and_line_counts() {
        let s4 = sp(4);
        assert_eq!(s4.rank(), 2);
        assert_eq!(s4.points().len(), 15);
        assert_eq!(s4.lines().unwrap().len(), 15);

        let s6 = sp(6);
        assert_eq!(s6.rank(), 3);
        assert_eq!(s6.points().len(), 63);
        assert_eq!(s6.lines().unwrap().len(), 315);
        // maximal singular subspaces: (2+1)(4+1)(8+1) = 135
        assert_eq!(s6.enumerate_singular_pdim(2, u128::MAX).unwrap().len(), 135);

        let o6 = oplus(6);
        assert_eq!(o6.rank(), 3);
        assert_eq!(o6.points().len(), 35);

        let o8 = oplus(8);
        assert_eq!(o8.rank(), 4);
        assert_eq!(o8.points().len(), 135);
        assert_eq!(o8.enumerate_singular_pdim(3, u128::MAX).unwrap().len(), 270);
    }

    #[test]
    fn beyond_rank_is_an_error() {
        let s4 = sp(4);
        assert!(matches!(
            s4.enumerate_singular_pdim(2, u128::MAX),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn budget_uses_the_predicted_count() {
        let s6 = sp(6);
        assert_eq!(s6.predicted_singular_count(1), Some(315));
        match s6.enumerate_singular_pdim(1, 100) {
            Err(Error::BudgetExceeded { predicted: 315, budget: 100 }) => {}
            other => panic!("expected BudgetExceeded with prediction, got {other:?}"),
        }
    }

    #[test]
    fn predicted_counts_match_enumeration_across_kinds() {
        let budget = Budget::default();
        let f2 = gf2();
        let f4 = FieldSpec::make(2, 2, None).unwrap();
        let spaces = vec![
            PolarSpace::standard(PolarFormTag::Symplectic, 6, &f2, &budget).unwrap(),
            PolarSpace::standard(PolarFormTag::OrthogonalPlus, 6, &f2, &budget).unwrap(),
            PolarSpace::standard(PolarFormTag::OrthogonalMinus, 8, &f2, &budget).unwrap(),
            PolarSpace::standard(PolarFormTag::OrthogonalOdd, 7, &f2, &budget).unwrap(),
            PolarSpace::standard(PolarFormTag::Hermitian, 5, &f4, &budget).unwrap(),
            PolarSpace::standard(PolarFormTag::Klein, 6, &f2, &budget).unwrap(),
        ];
        for space in spaces {
            assert_eq!(
                space.predicted_singular_count(0),
                Some(space.points().len() as u128),
                "{:?}",
                space.form()
            );
            for k in 0..space.rank() {
                // the enumeration itself re-checks the prediction internally
                let subs = space.enumerate_singular_pdim(k, 1 << 24).unwrap();
                assert_eq!(Some(subs.len() as u128), space.predicted_singular_count(k));
            }
        }
    }

    #[test]
    fn axioms_pass_on_small_standard_spaces() {
        for space in [sp(4), oplus(6)] {
            let report = space.axioms_check().unwrap();
            assert!(report.all_pass(), "{report:?}");
        }
    }

    #[test]
    fn degenerate_form_fails_p2() {
        // alternating form on F_2^4 with radical span(e2, e3)
        let f2 = gf2();
        let mut gram = vec![vec![0u16; 4]; 4];
        gram[0][1] = 1;
        gram[1][0] = 1;
        let form = ClassicalForm::from_gram_unchecked(
            FormKind::Symplectic,
            PolarFormTag::Symplectic,
            "degenerate Sp(4)".into(),
            &f2,
            gram,
        );
        let space = PolarSpace::from_form_unchecked(form, &Budget::default()).unwrap();
        let report = space.axioms_check().unwrap();
        assert!(!report.p2.pass);
        assert!(report.p2.detail.contains("collinear to all"));
    }

    #[test]
    fn dual_polar_graph_of_sp6() {
        let s6 = sp(6);
        let g = s6.polar_graph(2, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 135);
        assert_eq!(g.diameter(), 3);
    }

    #[test]
    fn gamma1_sp6_shape() {
        let s6 = sp(6);
        let g = s6.polar_graph(1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 315);
        assert_eq!(g.diameter(), 3); // k + 2
    }

    #[test]
    fn clique_taxonomy_by_level() {
        let s6 = sp(6);
        // k = n-2 = 1: every maximal clique is a top
        let g1 = s6.polar_graph(1, &Budget::default()).unwrap();
        let cliques = g1.maximal_cliques(100_000).unwrap();
        assert_eq!(cliques.len(), 135);
        for c in &cliques {
            assert!(matches!(
                s6.classify_polar_clique(&g1, c, 1).unwrap(),
                PolarCliqueKind::Top(_)
            ));
        }
        // k = n-1 = 2: every maximal clique is a line
        let g2 = s6.polar_graph(2, &Budget::default()).unwrap();
        let cliques = g2.maximal_cliques(100_000).unwrap();
        assert_eq!(cliques.len(), 315);
        for c in &cliques {
            assert_eq!(c.len(), 3); // q + 1
            assert!(matches!(
                s6.classify_polar_clique(&g2, c, 2).unwrap(),
                PolarCliqueKind::Line(_)
            ));
        }
        // k = 0: maximal singular subspaces
        let g0 = s6.polar_graph(0, &Budget::default()).unwrap();
        let cliques = g0.maximal_cliques(100_000).unwrap();
        assert_eq!(cliques.len(), 135);
        for c in &cliques {
            assert_eq!(c.len(), 7);
            assert!(matches!(
                s6.classify_polar_clique(&g0, c, 0).unwrap(),
                PolarCliqueKind::MaximalSingular(_)
            ));
        }
    }

    #[test]
    fn stars_and_tops_are_maximal_cliques_below_n_minus_2() {
        // Sp(8,2), k = 1 = n - 3: both families appear
        let f2 = gf2();
        let s8 = sp(8);
        let g = s8.polar_graph(1, &Budget::default()).unwrap();
        let s = Subspace::canonicalize(&f2, 8, &[e(8, 0)]).unwrap();
        let u = s8.form().maximal_singular_through(&s).unwrap();
        let star_ids: Vec<u32> = s8
            .star(&s, &u, 1)
            .unwrap()
            .iter()
            .map(|x| g.id_of(x).unwrap())
            .collect();
        match s8.classify_polar_clique(&g, &star_ids, 1).unwrap() {
            PolarCliqueKind::Star(center, carrier) => {
                assert_eq!(center, s);
                assert_eq!(carrier.vdim(), 4);
            }
            other => panic!("expected a star, got {other:?}"),
        }
        let plane = Subspace::canonicalize(&f2, 8, &[e(8, 0), e(8, 2), e(8, 4)]).unwrap();
        let top_ids: Vec<u32> = s8
            .top(&plane, 1)
            .unwrap()
            .iter()
            .map(|x| g.id_of(x).unwrap())
            .collect();
        assert!(matches!(
            s8.classify_polar_clique(&g, &top_ids, 1).unwrap(),
            PolarCliqueKind::Top(_)
        ));
    }

    #[test]
    fn gamma0_is_the_collinearity_graph() {
        let s4 = sp(4);
        let g = s4.polar_graph(0, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 15);
        for (i, p) in s4.points().iter().enumerate() {
            for (j, r) in s4.points().iter().enumerate() {
                if i == j {
                    continue;
                }
                let adj = g.are_adjacent(i as u32, j as u32);
                let col = s4.form().collinear_by_span(&p.rows()[0], &r.rows()[0]).unwrap();
                assert_eq!(adj, col);
            }
        }
    }

    #[test]
    fn closed_distance_matches_bfs_on_gamma1_sp4() {
        let s4 = sp(4);
        let g = s4.polar_graph(0, &Budget::default()).unwrap();
        let m = g.all_pairs_distances(1000).unwrap();
        for i in 0..g.vertex_count() {
            for j in 0..g.vertex_count() {
                let d = s4
                    .closed_distance(g.vertex(i as u32).unwrap(), g.vertex(j as u32).unwrap(), 0)
                    .unwrap();
                assert_eq!(d, m.get(i, j) as usize);
            }
        }
    }

    #[test]
    fn dual_polar_distance_formula() {
        let s6 = sp(6);
        let g = s6.polar_graph(2, &Budget::default()).unwrap();
        let m = g.all_pairs_distances(1000).unwrap();
        for i in 0..g.vertex_count() {
            for j in 0..g.vertex_count() {
                let x = g.vertex(i as u32).unwrap();
                let y = g.vertex(j as u32).unwrap();
                let d = s6.closed_distance(x, y, 2).unwrap();
                assert_eq!(d, m.get(i, j) as usize);
                // n - 1 - pdim(meet)
                let c = x.meet(y).unwrap().vdim() as isize - 1;
                assert_eq!(d as isize, 2 - c);
            }
        }
    }

    #[test]
    fn stars_tops_lines_in_gamma1_sp8() {
        let f2 = gf2();
        let s8 = sp(8);
        let s = Subspace::canonicalize(&f2, 8, &[e(8, 0)]).unwrap();
        let u = s8.form().maximal_singular_through(&s).unwrap();
        assert_eq!(u.vdim(), 4);
        let star = s8.star(&s, &u, 1).unwrap();
        assert_eq!(star.len(), 7);
        for x in &star {
            assert!(x.contains(&s) && u.contains(x));
        }
        let plane = Subspace::canonicalize(&f2, 8, &[e(8, 0), e(8, 2), e(8, 4)]).unwrap();
        assert!(s8.form().is_totally_singular(&plane));
        let top = s8.top(&plane, 1).unwrap();
        assert_eq!(top.len(), 7);
        let line_carrier = plane;
        let line = s8.line_set(&s, &line_carrier).unwrap();
        assert_eq!(line.len(), 3);
    }

    #[test]
    fn residues_reduce_rank_by_the_base_dimension() {
        let f2 = gf2();
        let o8 = oplus(8);
        let p = Subspace::canonicalize(&f2, 8, &[e(8, 0)]).unwrap();
        assert!(o8.form().is_totally_singular(&p));
        let res = o8.residue(&p, &Budget::default()).unwrap();
        assert_eq!(res.space.rank(), 3);
        assert_eq!(res.space.points().len(), 35); // an O+(6,2) residue

        let s6 = sp(6);
        let p = Subspace::canonicalize(&f2, 6, &[e(6, 0)]).unwrap();
        let res = s6.residue(&p, &Budget::default()).unwrap();
        assert_eq!(res.space.rank(), 2);
        assert_eq!(res.space.points().len(), 15); // an Sp(4,2) residue
    }

    #[test]
    fn residue_bijection_carries_collinearity_to_adjacency() {
        let f2 = gf2();
        let s6 = sp(6);
        let p = Subspace::canonicalize(&f2, 6, &[e(6, 0)]).unwrap();
        let res = s6.residue(&p, &Budget::default()).unwrap();
        let g1 = s6.polar_graph(1, &Budget::default()).unwrap();
        // points of the residue <-> lines through p
        let lifted: Vec<Subspace> =
            res.space.points().iter().map(|x| res.lift(x).unwrap()).collect();
        let mut unique: Vec<Subspace> = lifted.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), res.space.points().len());
        for l in &lifted {
            assert_eq!(l.vdim(), 2);
            assert!(l.contains(&p));
            assert!(s6.form().is_totally_singular(l));
        }
        for (i, a) in res.space.points().iter().enumerate() {
            for (j, b) in res.space.points().iter().enumerate() {
                if i == j {
                    continue;
                }
                let col = res
                    .space
                    .form()
                    .collinear_by_span(&a.rows()[0], &b.rows()[0])
                    .unwrap();
                let ia = g1.id_of(&lifted[i]).unwrap();
                let ib = g1.id_of(&lifted[j]).unwrap();
                assert_eq!(col, g1.are_adjacent(ia, ib));
            }
        }
        // projection inverts lifting
        for (x, l) in res.space.points().iter().zip(&lifted) {
            assert_eq!(&res.project(l).unwrap(), x);
        }
    }

    #[test]
    fn frames() {
        let f2 = gf2();
        let s4 = sp(4);
        let pts: Vec<Subspace> = (0..4)
            .map(|i| Subspace::canonicalize(&f2, 4, &[e(4, i)]).unwrap())
            .collect();
        // pairing (e0, e1), (e2, e3): each point non-collinear to exactly
        // its partner
        assert!(s4.is_frame(&pts));
        assert!(!s4.is_frame(&pts[..3]));
        // 2n mutually collinear points are not a frame
        let p = Subspace::canonicalize(&f2, 4, &[e(4, 0)]).unwrap();
        let collinear_pts: Vec<Subspace> = s4
            .points()
            .iter()
            .filter(|r| {
                s4.form().bilinear(&p.rows()[0], &r.rows()[0]) == 0
            })
            .take(4)
            .cloned()
            .collect();
        assert_eq!(collinear_pts.len(), 4);
        assert!(!s4.is_frame(&collinear_pts));
    }

    #[test]
    fn hermitian_space_counts() {
        let f4 = FieldSpec::make(2, 2, None).unwrap();
        let u4 = PolarSpace::standard(PolarFormTag::Hermitian, 4, &f4, &Budget::default()).unwrap();
        assert_eq!(u4.rank(), 2);
        // Hermitian surface H(3, 4): (q0^3 + 1)(q0^2 + 1) points with q0 = 2
        assert_eq!(u4.points().len(), 45);
        assert!(u4.axioms_check().unwrap().all_pass());
    }

    #[test]
    fn orthogonal_minus_counts() {
        let f2 = gf2();
        let om6 =
            PolarSpace::standard(PolarFormTag::OrthogonalMinus, 6, &f2, &Budget::default()).unwrap();
        assert_eq!(om6.rank(), 2);
        // elliptic quadric in PG(5,2): (2^2+1)(2^3-1) ... = 27 points
        assert_eq!(om6.points().len(), 27);
        assert!(om6.axioms_check().unwrap().all_pass());
    }

    #[test]
    fn orthogonal_odd_matches_symplectic_at_char2() {
        let f2 = gf2();
        let o5 = PolarSpace::standard(PolarFormTag::OrthogonalOdd, 5, &f2, &Budget::default())
            .unwrap();
        assert_eq!(o5.rank(), 2);
        assert_eq!(o5.points().len(), 15);
        assert!(o5.axioms_check().unwrap().all_pass());
    }
}
