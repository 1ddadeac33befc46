//! The Grassmann graph Γ_i(V) over a finite field: construction, the
//! closed-form distance, the star/top/line clique families and the
//! apartment machinery of 4-dimensional spaces.

use std::collections::HashSet;

use crate::descriptor::{Budget, GraphDescriptor};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graph::GeometryGraph;
use crate::linalg;
use crate::subspace::{enumerate_subspaces, subspaces_between, Subspace};

/// Internal cap for the small star/top/line enumerations.
const LOCAL_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug)]
pub struct GrassmannDescriptor {
    pub m: usize,
    pub i: usize,
    pub field: FieldSpec,
}

impl GrassmannDescriptor {
    pub fn new(m: usize, i: usize, field: FieldSpec) -> Result<Self> {
        if i < 1 || i + 1 > m {
            return Err(Error::DimensionMismatch(format!(
                "Grassmann graph needs 1 <= i <= m-1, got i={i}, m={m}"
            )));
        }
        Ok(GrassmannDescriptor { m, i, field })
    }

    /// True when the descriptor is admissible as an embedding domain
    /// (adjacency is non-trivial on both sides).
    pub fn proper_range(&self) -> bool {
        self.i > 1 && self.i + 1 < self.m
    }

    pub fn graph_descriptor(&self) -> GraphDescriptor {
        GraphDescriptor::Grassmann { m: self.m, i: self.i, field: self.field.descriptor() }
    }
}

/// Vertices are all i-dimensional subspaces; edges are pairs meeting in
/// dimension i-1.
pub fn build_grassmann_graph(desc: &GrassmannDescriptor, budget: &Budget) -> Result<GeometryGraph> {
    let vertices =
        enumerate_subspaces(&desc.field, desc.m, desc.i, budget.max_vertices as u128)?;
    let i = desc.i;
    GeometryGraph::build(vertices, desc.graph_descriptor(), |x, y| {
        x.meet(y).map(|meet| meet.vdim() == i - 1).unwrap_or(false)
    })
}

/// d(X, Y) = i - dim(X ∩ Y) = dim(X + Y) - i.
pub fn grassmann_distance(x: &Subspace, y: &Subspace) -> Result<usize> {
    if x.vdim() != y.vdim() {
        return Err(Error::DimensionMismatch(format!(
            "distance needs equal dimensions, got {} and {}",
            x.vdim(),
            y.vdim()
        )));
    }
    let meet = x.meet(y)?;
    Ok(x.vdim() - meet.vdim())
}

/// The star [S⟩_i: all i-dimensional subspaces containing S, vdim(S) = i-1.
pub fn star(s: &Subspace, i: usize) -> Result<Vec<Subspace>> {
    if s.vdim() + 1 != i {
        return Err(Error::IncidenceViolation(format!(
            "star center must have dimension {} for i={}, got {}",
            i - 1,
            i,
            s.vdim()
        )));
    }
    let full = Subspace::full(s.field(), s.ambient_dim());
    subspaces_between(s, &full, i, LOCAL_BUDGET)
}

/// The top ⟨U]_i: all i-dimensional subspaces of U, vdim(U) = i+1.
pub fn top(u: &Subspace, i: usize) -> Result<Vec<Subspace>> {
    if u.vdim() != i + 1 {
        return Err(Error::IncidenceViolation(format!(
            "top carrier must have dimension {} for i={}, got {}",
            i + 1,
            i,
            u.vdim()
        )));
    }
    let zero = Subspace::zero(u.field(), u.ambient_dim());
    subspaces_between(&zero, u, i, LOCAL_BUDGET)
}

/// The line [S, U]_i with vdim(S) = i-1, vdim(U) = i+1, S ⊂ U; always q+1
/// elements.
pub fn line(s: &Subspace, u: &Subspace, i: usize) -> Result<Vec<Subspace>> {
    if s.vdim() + 1 != i || u.vdim() != i + 1 {
        return Err(Error::IncidenceViolation(format!(
            "line needs dims ({}, {}), got ({}, {})",
            i - 1,
            i + 1,
            s.vdim(),
            u.vdim()
        )));
    }
    if !u.contains(s) {
        return Err(Error::IncidenceViolation("line endpoints must be incident".into()));
    }
    subspaces_between(s, u, i, LOCAL_BUDGET)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CliqueKind {
    Star(Subspace),
    Top(Subspace),
}

/// Identify a maximal clique of Γ_i(V) as the star of its common
/// intersection or the top of its common span.
pub fn classify_maximal_clique(g: &GeometryGraph, clique: &[u32]) -> Result<CliqueKind> {
    if clique.is_empty() {
        return Err(Error::Unclassifiable("empty clique".into()));
    }
    for (a, &v) in clique.iter().enumerate() {
        for &w in &clique[a + 1..] {
            if !g.are_adjacent(v, w) {
                return Err(Error::NotAClique(v, w));
            }
        }
    }
    let members: Vec<&Subspace> = clique.iter().map(|&v| g.vertex(v)).collect::<Result<_>>()?;
    let i = members[0].vdim();
    let mut common = members[0].clone();
    let mut span = members[0].clone();
    for m in &members[1..] {
        common = common.meet(m)?;
        span = span.join(m)?;
    }
    let is_star = common.vdim() + 1 == i;
    let is_top = span.vdim() == i + 1;
    match (is_star, is_top) {
        (true, false) => Ok(CliqueKind::Star(common)),
        (false, true) => Ok(CliqueKind::Top(span)),
        (true, true) => Err(Error::Unclassifiable(
            "clique fits a line; star/top labels are ambiguous".into(),
        )),
        (false, false) => Err(Error::Unclassifiable(format!(
            "common intersection has dim {}, span has dim {}",
            common.vdim(),
            span.vdim()
        ))),
    }
}

/// An apartment of 𝒢_2(M) for a 4-dimensional M: the six planes spanned by
/// pairs of a basis, identified by its member set.
#[derive(Clone, Debug, PartialEq)]
pub struct Apartment {
    /// The four basis points (1-dimensional subspaces), canonical order.
    pub points: Vec<Subspace>,
    /// The six member planes, canonical order.
    pub members: Vec<Subspace>,
}

impl Apartment {
    fn from_point_vectors(field: &FieldSpec, ambient: usize, vecs: &[Vec<u16>]) -> Result<Self> {
        debug_assert_eq!(vecs.len(), 4);
        let mut points: Vec<Subspace> = vecs
            .iter()
            .map(|v| Subspace::canonicalize(field, ambient, std::slice::from_ref(v)))
            .collect::<Result<_>>()?;
        let mut members = Vec::with_capacity(6);
        for a in 0..4 {
            for b in (a + 1)..4 {
                members.push(Subspace::canonicalize(
                    field,
                    ambient,
                    &[vecs[a].clone(), vecs[b].clone()],
                )?);
            }
        }
        points.sort();
        members.sort();
        members.dedup();
        if members.len() != 6 {
            return Err(Error::Internal("apartment basis was not independent".into()));
        }
        Ok(Apartment { points, members })
    }

    pub fn contains(&self, x: &Subspace) -> bool {
        self.members.binary_search(x).is_ok()
    }
}

/// Two apartments are adjacent when they share exactly four members.
pub fn apartment_adjacent(a: &Apartment, b: &Apartment) -> bool {
    let mut shared = 0;
    for m in &a.members {
        if b.contains(m) {
            shared += 1;
        }
    }
    shared == 4
}

fn expected_apartment_count(q: u128) -> u128 {
    // |GL(4,q)| / ((q-1)^4 * 4!)
    let gl: u128 = (0..4).map(|i| q.pow(4) - q.pow(i)).product();
    gl / ((q - 1).pow(4) * 24)
}

/// All apartments of 𝒢_2(M), deduplicated by member set. M must have
/// vector dimension 4.
pub fn apartments_of(m_space: &Subspace, budget: u128) -> Result<Vec<Apartment>> {
    if m_space.vdim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "apartments live in a 4-dimensional space, got dim {}",
            m_space.vdim()
        )));
    }
    let field = m_space.field().clone();
    let predicted = expected_apartment_count(field.order() as u128);
    if predicted > budget {
        return Err(Error::BudgetExceeded { predicted, budget });
    }
    let reps = linalg::projective_reps(&field, 4);
    let n = reps.len();
    let mut out = Vec::with_capacity(predicted as usize);
    let mut seen: HashSet<Vec<Subspace>> = HashSet::new();
    let mut scratch: Vec<Vec<u16>> = Vec::with_capacity(4);
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    scratch.clear();
                    scratch.extend([
                        reps[a].clone(),
                        reps[b].clone(),
                        reps[c].clone(),
                        reps[d].clone(),
                    ]);
                    let mut rows = scratch.clone();
                    if linalg::rank(&field, &mut rows) != 4 {
                        continue;
                    }
                    let in_ambient: Vec<Vec<u16>> = scratch
                        .iter()
                        .map(|v| linalg::vec_mat_mul(&field, v, m_space.rows()))
                        .collect();
                    let apt =
                        Apartment::from_point_vectors(&field, m_space.ambient_dim(), &in_ambient)?;
                    if seen.insert(apt.members.clone()) {
                        out.push(apt);
                    }
                }
            }
        }
    }
    if out.len() as u128 != predicted {
        return Err(Error::Internal(format!(
            "apartment enumeration found {} members, expected {}",
            out.len(),
            predicted
        )));
    }
    out.sort_by(|x, y| x.members.cmp(&y.members));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ApartmentConnectivity {
    pub apartment_count: usize,
    pub connected: bool,
}

/// Build the apartment-adjacency graph of 𝒢_2(M) and test connectivity.
pub fn apartment_graph_connected(m_space: &Subspace, budget: u128) -> Result<ApartmentConnectivity> {
    let apartments = apartments_of(m_space, budget)?;
    let n = apartments.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in (a + 1)..n {
            if apartment_adjacent(&apartments[a], &apartments[b]) {
                adj[a].push(b as u32);
                adj[b].push(a as u32);
            }
        }
    }
    for ns in &mut adj {
        ns.sort_unstable();
    }
    Ok(ApartmentConnectivity {
        apartment_count: n,
        connected: crate::graph::algo::is_connected(&adj),
    })
}

/// An apartment of 𝒢_2(M) containing both A and B, via deterministic
/// lexicographically-least basis completion.
pub fn apartment_through(a: &Subspace, b: &Subspace, m_space: &Subspace) -> Result<Apartment> {
    if a.vdim() != 2 || b.vdim() != 2 || m_space.vdim() != 4 {
        return Err(Error::DimensionMismatch(
            "apartment_through needs planes inside a 4-dimensional space".into(),
        ));
    }
    if !m_space.contains(a) || !m_space.contains(b) {
        return Err(Error::IncidenceViolation("planes must lie inside the given space".into()));
    }
    let field = m_space.field().clone();
    // work in M-coordinates
    let a_c = Subspace::canonicalize(&field, 4, &a.coordinates_in(m_space)?)?;
    let b_c = Subspace::canonicalize(&field, 4, &b.coordinates_in(m_space)?)?;
    let meet = a_c.meet(&b_c)?;

    let mut vecs: Vec<Vec<u16>> = Vec::with_capacity(4);
    let mut current = Subspace::zero(&field, 4);
    let mut push = |v: Vec<u16>, current: &mut Subspace| -> Result<()> {
        let mut rows: Vec<Vec<u16>> = current.rows().to_vec();
        rows.push(v.clone());
        *current = Subspace::canonicalize(&field, 4, &rows)?;
        vecs.push(v);
        Ok(())
    };

    // first the meet, then completions of A, then B, then M, always taking
    // the lexicographically least usable point representative
    let first_outside = |space: &Subspace, current: &Subspace| -> Option<Vec<u16>> {
        space.point_vectors().into_iter().find(|v| !current.contains_vector(v))
    };
    for row in meet.rows() {
        push(row.clone(), &mut current)?;
    }
    while current.meet(&a_c)?.vdim() < 2 {
        let v = first_outside(&a_c, &current).ok_or(Error::NoCommonApartment)?;
        push(v, &mut current)?;
    }
    while current.meet(&b_c)?.vdim() < 2 {
        let v = first_outside(&b_c, &current).ok_or(Error::NoCommonApartment)?;
        push(v, &mut current)?;
    }
    let full = Subspace::full(&field, 4);
    while current.vdim() < 4 {
        let v = first_outside(&full, &current).ok_or(Error::NoCommonApartment)?;
        push(v, &mut current)?;
    }

    let in_ambient: Vec<Vec<u16>> = vecs
        .iter()
        .map(|v| linalg::vec_mat_mul(&field, v, m_space.rows()))
        .collect();
    let apt = Apartment::from_point_vectors(&field, m_space.ambient_dim(), &in_ambient)?;
    if !apt.contains(a) || !apt.contains(b) {
        return Err(Error::NoCommonApartment);
    }
    Ok(apt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::Budget;

    fn gf(q: u32) -> FieldSpec {
        match q {
            2 => FieldSpec::make(2, 1, None).unwrap(),
            3 => FieldSpec::make(3, 1, None).unwrap(),
            _ => panic!(),
        }
    }

    fn span(field: &FieldSpec, m: usize, rows: &[&[u16]]) -> Subspace {
        let rows: Vec<Vec<u16>> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::canonicalize(field, m, &rows).unwrap()
    }

    fn g24() -> GeometryGraph {
        let desc = GrassmannDescriptor::new(4, 2, gf(2)).unwrap();
        build_grassmann_graph(&desc, &Budget::default()).unwrap()
    }

    #[test]
    fn gamma_2_f2_4_shape() {
        let g = g24();
        assert_eq!(g.vertex_count(), 35);
        for v in 0..35 {
            assert_eq!(g.degree(v).unwrap(), 18);
        }
        assert_eq!(g.diameter(), 2);
    }

    #[test]
    fn distance_formula_matches_bfs_exhaustively() {
        let g = g24();
        let m = g.all_pairs_distances(1000).unwrap();
        for v in 0..g.vertex_count() {
            for w in 0..g.vertex_count() {
                let formula =
                    grassmann_distance(g.vertex(v as u32).unwrap(), g.vertex(w as u32).unwrap())
                        .unwrap();
                assert_eq!(formula, m.get(v, w) as usize);
            }
        }
    }

    #[test]
    fn star_top_line_sizes() {
        let f2 = gf(2);
        let s = span(&f2, 4, &[&[1, 0, 0, 0]]);
        let st = star(&s, 2).unwrap();
        assert_eq!(st.len(), 7);
        for x in &st {
            assert!(x.contains(&s));
            assert_eq!(x.vdim(), 2);
        }

        let u = span(&f2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let tp = top(&u, 2).unwrap();
        assert_eq!(tp.len(), 7);

        // star ∩ top for incident (S, U) is exactly the line [S, U]
        let ln = line(&s, &u, 2).unwrap();
        assert_eq!(ln.len(), 3);
        let inter: Vec<_> = st.iter().filter(|x| tp.contains(x)).cloned().collect();
        assert_eq!(inter, ln);

        let f3 = gf(3);
        let s3 = span(&f3, 4, &[&[1, 0, 0, 0]]);
        let u3 = span(&f3, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(line(&s3, &u3, 2).unwrap().len(), 4);
    }

    #[test]
    fn line_rejects_non_incident_pairs() {
        let f2 = gf(2);
        let s = span(&f2, 4, &[&[0, 0, 0, 1]]);
        let u = span(&f2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert!(matches!(line(&s, &u, 2), Err(Error::IncidenceViolation(_))));
    }

    #[test]
    fn classify_stars_and_tops() {
        let g = g24();
        let f2 = gf(2);

        let s = span(&f2, 4, &[&[1, 0, 0, 0]]);
        let ids: Vec<u32> =
            star(&s, 2).unwrap().iter().map(|x| g.id_of(x).unwrap()).collect();
        assert_eq!(classify_maximal_clique(&g, &ids).unwrap(), CliqueKind::Star(s));

        let u = span(&f2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let ids: Vec<u32> = top(&u, 2).unwrap().iter().map(|x| g.id_of(x).unwrap()).collect();
        assert_eq!(classify_maximal_clique(&g, &ids).unwrap(), CliqueKind::Top(u));
    }

    #[test]
    fn every_maximal_clique_classifies() {
        let g = g24();
        let cliques = g.maximal_cliques(10_000).unwrap();
        assert_eq!(cliques.len(), 30); // 15 stars + 15 tops
        let mut stars = 0;
        let mut tops = 0;
        for c in &cliques {
            assert_eq!(c.len(), 7);
            match classify_maximal_clique(&g, c).unwrap() {
                CliqueKind::Star(_) => stars += 1,
                CliqueKind::Top(_) => tops += 1,
            }
        }
        assert_eq!((stars, tops), (15, 15));
    }

    #[test]
    fn classify_rejects_non_cliques() {
        let g = g24();
        let x = g.id_of(&span(&gf(2), 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let far = g.id_of(&span(&gf(2), 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert!(matches!(classify_maximal_clique(&g, &[x, far]), Err(Error::NotAClique(_, _))));
    }

    #[test]
    fn annihilator_swaps_stars_and_tops() {
        let f2 = gf(2);
        let s = span(&f2, 4, &[&[1, 0, 0, 0]]);
        let star_images: Vec<Subspace> =
            star(&s, 2).unwrap().iter().map(|x| x.annihilator()).collect();
        let mut expected = top(&s.annihilator(), 2).unwrap();
        let mut got = star_images;
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn standard_basis_apartment() {
        let f2 = gf(2);
        let m = Subspace::full(&f2, 4);
        let e = |i: usize| {
            let mut v = vec![0u16; 4];
            v[i] = 1;
            v
        };
        let apt =
            Apartment::from_point_vectors(&f2, 4, &[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(apt.members.len(), 6);
        for a in 0..4 {
            for b in (a + 1)..4 {
                let plane = span(&f2, 4, &[&e(a), &e(b)]);
                assert!(apt.contains(&plane));
            }
        }
        let _ = m;
    }

    #[test]
    fn apartment_count_and_connectivity() {
        let f2 = gf(2);
        let m = Subspace::full(&f2, 4);
        // 840 = |GL(4,2)| / 4! = 20160 / 24
        assert_eq!(expected_apartment_count(2), 840);
        let report = apartment_graph_connected(&m, 10_000).unwrap();
        assert_eq!(report.apartment_count, 840);
        assert!(report.connected);
    }

    #[test]
    fn apartment_through_every_pair() {
        let f2 = gf(2);
        let m = Subspace::full(&f2, 4);
        let all = enumerate_subspaces(&f2, 4, 2, 1000).unwrap();
        for a in &all {
            for b in &all {
                let apt = apartment_through(a, b, &m).unwrap();
                assert!(apt.contains(a) && apt.contains(b));
            }
        }
    }

    #[test]
    fn apartment_through_disjoint_planes_is_the_joint_basis() {
        let f2 = gf(2);
        let m = Subspace::full(&f2, 4);
        let a = span(&f2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = span(&f2, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let apt = apartment_through(&a, &b, &m).unwrap();
        let e = |i: usize| {
            let mut v = vec![0u16; 4];
            v[i] = 1;
            v
        };
        let expected = Apartment::from_point_vectors(&f2, 4, &[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(apt, expected);
    }
}
