//! Constructing, checking and classifying embeddings of Grassmann and
//! dual polar graphs into polar Grassmann graphs.
//!
//! An embedding is an injective vertex map preserving adjacency and
//! non-adjacency in both directions. The classifier decides between the
//! two branches of the dichotomy: image inside a top ⟨U]_k (type A) or
//! inside a point-residue [S⟩_k (type B). The lemma verifier replays the
//! combinatorial facts the proofs rest on, exhaustively per instance.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::descriptor::{Budget, GraphDescriptor};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::form::FormKind;
use crate::graph::GeometryGraph;
use crate::grassmann::{
    build_grassmann_graph, classify_maximal_clique, CliqueKind, GrassmannDescriptor,
};
use crate::klein::klein_map;
use crate::linalg;
use crate::polar::{PairCase, PolarSpace};
use crate::subspace::{Subspace, SubspaceRepr};

/// Where embedding images live and how their distances are computed.
pub enum Codomain {
    /// A materialized polar Grassmann graph; distances by BFS.
    Materialized { graph: GeometryGraph, space: PolarSpace, k: usize },
    /// Too large to materialize; distances by the closed-form polar
    /// distance, which the verification suites validate against BFS at
    /// smaller parameters.
    ClosedForm { space: PolarSpace, k: usize },
}

impl Codomain {
    pub fn space(&self) -> &PolarSpace {
        match self {
            Codomain::Materialized { space, .. } => space,
            Codomain::ClosedForm { space, .. } => space,
        }
    }
    pub fn k(&self) -> usize {
        match self {
            Codomain::Materialized { k, .. } => *k,
            Codomain::ClosedForm { k, .. } => *k,
        }
    }
    pub fn oracle_label(&self) -> &'static str {
        match self {
            Codomain::Materialized { .. } => "bfs",
            Codomain::ClosedForm { .. } => "closed-form polar distance",
        }
    }
    pub fn descriptor(&self) -> GraphDescriptor {
        self.space().graph_descriptor(self.k())
    }

    fn validate_vertex(&self, s: &Subspace) -> Result<()> {
        let k = self.k();
        if s.vdim() != k + 1 {
            return Err(Error::InvalidCodomainVertex(format!(
                "expected vector dimension {}, got {}",
                k + 1,
                s.vdim()
            )));
        }
        if !self.space().form().is_totally_singular(s) {
            return Err(Error::InvalidCodomainVertex(format!(
                "subspace {:?} is not totally singular",
                s.rows()
            )));
        }
        if let Codomain::Materialized { graph, .. } = self {
            if graph.id_of(s).is_none() {
                return Err(Error::InvalidCodomainVertex(format!(
                    "subspace {:?} is not a vertex of the materialized codomain",
                    s.rows()
                )));
            }
        }
        Ok(())
    }
}

/// What kind of graph the domain is; drives which proof lemmas apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Grassmann { i: usize },
    DualPolar { rank: usize },
    Other,
}

#[derive(Clone, Debug)]
pub enum Provenance {
    Constructed { family: &'static str, witness: Subspace },
    UserSupplied,
}

/// An injective vertex map from a domain graph into a polar Grassmannian,
/// stored as one image subspace per domain vertex id.
pub struct EmbeddingMap {
    domain: GeometryGraph,
    domain_kind: DomainKind,
    codomain: Codomain,
    images: Vec<Subspace>,
    provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct PairFailure {
    pub domain_pair: (u32, u32),
    pub domain_distance: usize,
    pub codomain_distance: usize,
    pub kind: String,
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub adjacency_preserved: bool,
    pub non_adjacency_preserved: bool,
    /// Largest m such that every domain distance ≤ m maps to an equal
    /// codomain distance; capped at the domain diameter.
    pub preserved_distance_horizon: usize,
    pub requested_horizon: usize,
    pub horizon_met: bool,
    pub isometric: bool,
    pub domain_diameter: usize,
    pub distance_oracle: String,
    pub failures: Vec<PairFailure>,
}

impl EmbeddingReport {
    pub fn is_embedding(&self) -> bool {
        self.injective && self.adjacency_preserved && self.non_adjacency_preserved
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Image inside ⟨U]_k for the witnessed singular subspace U.
    TypeA(Subspace),
    /// Image inside [S⟩_k for the witnessed (k-1)-dimensional singular S.
    TypeB(Subspace),
}

#[derive(Clone, Debug)]
pub struct ClassificationEvidence {
    pub intersection_vdim: usize,
    pub span_vdim: usize,
    pub span_singular: bool,
    /// For type B: every image pair sits at codomain distance ≤ 2.
    pub image_diameter_le_2: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    /// Theorem range consistency: k ≤ n - 3.
    pub k_le_n_minus_3: bool,
    pub evidence: ClassificationEvidence,
}

#[derive(Clone, Debug)]
pub enum LemmaStatus {
    Pass { checked: usize, note: String },
    Fail { witness: String },
    NotApplicable { reason: String },
}

impl LemmaStatus {
    pub fn failed(&self) -> bool {
        matches!(self, LemmaStatus::Fail { .. })
    }
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    /// Images of maximal cliques avoid lines of 𝒢_k(Π).
    pub line_lemma: LemmaStatus,
    /// In the type-A case, stars go to stars and tops to tops, or the
    /// pattern is consistently swapped.
    pub star_top_transfer: LemmaStatus,
    /// Images of distance-2 pairs realize case (1) or (3), never the
    /// unique-midpoint case (2).
    pub distance2_cases: LemmaStatus,
    /// For 3-embeddings of dual polar graphs, distance-2 pairs realize (1).
    pub dual_polar_case1: LemmaStatus,
}

impl LemmaReport {
    pub fn any_failure(&self) -> bool {
        self.line_lemma.failed()
            || self.star_top_transfer.failed()
            || self.distance2_cases.failed()
            || self.dual_polar_case1.failed()
    }
}

impl EmbeddingMap {
    pub fn domain(&self) -> &GeometryGraph {
        &self.domain
    }
    pub fn domain_kind(&self) -> DomainKind {
        self.domain_kind
    }
    pub fn codomain(&self) -> &Codomain {
        &self.codomain
    }
    pub fn images(&self) -> &[Subspace] {
        &self.images
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn from_parts(
        domain: GeometryGraph,
        domain_kind: DomainKind,
        codomain: Codomain,
        images: Vec<Subspace>,
        provenance: Provenance,
    ) -> Result<Self> {
        if images.len() != domain.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} domain vertices",
                images.len(),
                domain.vertex_count()
            )));
        }
        for s in &images {
            codomain.validate_vertex(s)?;
        }
        Ok(EmbeddingMap { domain, domain_kind, codomain, images, provenance })
    }

    /// Codomain distances between all image pairs, as a dense matrix over
    /// domain vertex indices.
    fn codomain_distances(&self) -> Result<Vec<Vec<u16>>> {
        let n = self.images.len();
        match &self.codomain {
            Codomain::Materialized { graph, .. } => {
                let ids: Vec<u32> = self
                    .images
                    .iter()
                    .map(|s| {
                        graph.id_of(s).ok_or_else(|| {
                            Error::InvalidCodomainVertex(format!("{:?}", s.rows()))
                        })
                    })
                    .collect::<Result<_>>()?;
                let mut unique: Vec<u32> = ids.clone();
                unique.sort_unstable();
                unique.dedup();
                let rows: Vec<Vec<u32>> = unique
                    .par_iter()
                    .map(|&v| graph.bfs_distances_from(v).expect("valid id"))
                    .collect();
                let row_of: HashMap<u32, usize> =
                    unique.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let mut out = vec![vec![0u16; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        out[i][j] = rows[row_of[&ids[i]]][ids[j] as usize] as u16;
                    }
                }
                Ok(out)
            }
            Codomain::ClosedForm { space, k } => {
                let cells: Vec<Vec<u16>> = (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let mut row = vec![0u16; n];
                        for j in 0..n {
                            row[j] = space
                                .closed_distance(&self.images[i], &self.images[j], *k)
                                .expect("images validated as codomain vertices")
                                as u16;
                        }
                        row
                    })
                    .collect();
                Ok(cells)
            }
        }
    }

    /// Full verification: injectivity, adjacency both ways and distance
    /// preservation up to the requested horizon (and beyond, reported as
    /// the true preserved horizon).
    pub fn check_embedding(&self, requested_horizon: usize) -> Result<EmbeddingReport> {
        let n = self.domain.vertex_count();
        let dom = self.domain.all_pairs_distances(usize::MAX)?;
        let cod = self.codomain_distances()?;

        let mut injective = true;
        let mut seen: HashMap<&Subspace, u32> = HashMap::new();
        let mut failures: Vec<PairFailure> = Vec::new();
        for (v, s) in self.images.iter().enumerate() {
            if let Some(&w) = seen.get(s) {
                injective = false;
                failures.push(PairFailure {
                    domain_pair: (w, v as u32),
                    domain_distance: dom.get(w as usize, v) as usize,
                    codomain_distance: 0,
                    kind: "not injective: equal images".into(),
                });
            } else {
                seen.insert(s, v as u32);
            }
        }

        let mut adjacency_preserved = true;
        let mut non_adjacency_preserved = true;
        let mut horizon_breaker: Option<usize> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let dd = dom.get(i, j) as usize;
                let dc = cod[i][j] as usize;
                if dd == 1 && dc != 1 {
                    adjacency_preserved = false;
                    failures.push(PairFailure {
                        domain_pair: (i as u32, j as u32),
                        domain_distance: dd,
                        codomain_distance: dc,
                        kind: "adjacent pair mapped to non-adjacent images".into(),
                    });
                }
                if dd != 1 && dc == 1 {
                    non_adjacency_preserved = false;
                    failures.push(PairFailure {
                        domain_pair: (i as u32, j as u32),
                        domain_distance: dd,
                        codomain_distance: dc,
                        kind: "non-adjacent pair mapped to adjacent images".into(),
                    });
                }
                if dd != dc {
                    horizon_breaker = Some(horizon_breaker.map_or(dd, |h: usize| h.min(dd)));
                }
            }
        }
        failures.truncate(20);

        let domain_diameter = dom.max() as usize;
        let preserved = match horizon_breaker {
            Some(b) => b.saturating_sub(1),
            None => domain_diameter,
        };
        let requested = requested_horizon.min(domain_diameter);
        Ok(EmbeddingReport {
            injective,
            adjacency_preserved,
            non_adjacency_preserved,
            preserved_distance_horizon: preserved,
            requested_horizon,
            horizon_met: preserved >= requested,
            isometric: preserved >= domain_diameter,
            domain_diameter,
            distance_oracle: self.codomain.oracle_label().into(),
            failures,
        })
    }

    /// The dichotomy: type B when the global intersection of the images is
    /// (k-1)-dimensional, else type A when the global span is singular.
    /// Any other outcome on a verified embedding contradicts the theorem
    /// and surfaces as a hard error.
    pub fn classify(&self) -> Result<Classification> {
        let report = self.check_embedding(2)?;
        if !report.is_embedding() {
            let detail = report
                .failures
                .first()
                .map(|f| format!("{} at pair {:?}", f.kind, f.domain_pair))
                .unwrap_or_else(|| "map fails the embedding checks".into());
            return Err(Error::NotEmbedding(detail));
        }
        let k = self.codomain.k();
        let n = self.codomain.space().rank();
        let mut common = self.images[0].clone();
        let mut span = self.images[0].clone();
        for s in &self.images[1..] {
            common = common.meet(s)?;
            span = span.join(s)?;
        }
        let span_singular = self.codomain.space().form().is_totally_singular(&span);
        let mut evidence = ClassificationEvidence {
            intersection_vdim: common.vdim(),
            span_vdim: span.vdim(),
            span_singular,
            image_diameter_le_2: None,
        };
        let k_flag = k + 3 <= n;
        if common.vdim() == k {
            // all images pass through the same (k-1)-dimensional S, so all
            // pairwise distances are at most 2
            let cod = self.codomain_distances()?;
            let le2 = cod.iter().all(|row| row.iter().all(|&d| d <= 2));
            evidence.image_diameter_le_2 = Some(le2);
            if !le2 {
                return Err(Error::Internal(
                    "type-B image with a pair beyond distance 2; residue distance bound violated"
                        .into(),
                ));
            }
            return Ok(Classification {
                verdict: Verdict::TypeB(common),
                k_le_n_minus_3: k_flag,
                evidence,
            });
        }
        if span_singular {
            if k == 0 {
                return Err(Error::Internal(
                    "type-A verdict at k = 0 contradicts the dichotomy".into(),
                ));
            }
            return Ok(Classification {
                verdict: Verdict::TypeA(span),
                k_le_n_minus_3: k_flag,
                evidence,
            });
        }
        Err(Error::Internal(format!(
            "verified embedding classifies as neither type: common intersection dim {}, \
             span dim {} (singular: {}); this contradicts the dichotomy",
            common.vdim(),
            span.vdim(),
            span_singular
        )))
    }

    /// Replay the combinatorial lemmas behind the two theorems on this
    /// instance, exhaustively.
    pub fn verify_proof_lemmas(&self) -> Result<LemmaReport> {
        let report = self.check_embedding(3)?;
        if !report.is_embedding() {
            return Err(Error::NotEmbedding("lemma checks need a verified embedding".into()));
        }
        let space = self.codomain.space();
        let k = self.codomain.k();
        let form = space.form();

        let cliques = self.domain.maximal_cliques(1 << 20)?;

        // images of maximal cliques are never inside a line of 𝒢_k(Π)
        let mut line_lemma = LemmaStatus::Pass {
            checked: cliques.len(),
            note: "no maximal-clique image inside a line".into(),
        };
        'lines: for c in &cliques {
            let mut common = self.images[c[0] as usize].clone();
            let mut span = common.clone();
            for &v in &c[1..] {
                common = common.meet(&self.images[v as usize])?;
                span = span.join(&self.images[v as usize])?;
            }
            let in_line = common.vdim() == k
                && span.vdim() == k + 2
                && form.is_totally_singular(&span);
            if in_line {
                line_lemma = LemmaStatus::Fail {
                    witness: format!("clique {:?} maps into the line [{:?}, {:?}]", c, common.rows(), span.rows()),
                };
                break 'lines;
            }
        }

        let classification = self.classify()?;

        // star/top transfer within a top (type A only, Grassmann domain)
        let star_top_transfer = match (self.domain_kind, &classification.verdict) {
            (DomainKind::Grassmann { .. }, Verdict::TypeA(_)) => {
                let mut star_goes_to: Option<bool> = None; // true = stars -> stars
                let mut status = None;
                'cliques: for c in &cliques {
                    let domain_kind = classify_maximal_clique(&self.domain, c)?;
                    let mut common = self.images[c[0] as usize].clone();
                    let mut span = common.clone();
                    for &v in &c[1..] {
                        common = common.meet(&self.images[v as usize])?;
                        span = span.join(&self.images[v as usize])?;
                    }
                    let span_singular = form.is_totally_singular(&span);
                    let in_star = common.vdim() == k && span_singular;
                    let in_top = span.vdim() == k + 2 && span_singular;
                    let image_star = match (in_star, in_top) {
                        (true, false) => true,
                        (false, true) => false,
                        other => {
                            status = Some(LemmaStatus::Fail {
                                witness: format!(
                                    "clique {c:?} image container is ambiguous: (star, top) = {other:?}"
                                ),
                            });
                            break 'cliques;
                        }
                    };
                    let expected = match domain_kind {
                        CliqueKind::Star(_) => image_star,
                        CliqueKind::Top(_) => !image_star,
                    };
                    match star_goes_to {
                        None => star_goes_to = Some(expected),
                        Some(prev) if prev != expected => {
                            status = Some(LemmaStatus::Fail {
                                witness: format!(
                                    "inconsistent star/top transfer at clique {c:?}"
                                ),
                            });
                            break 'cliques;
                        }
                        _ => {}
                    }
                }
                status.unwrap_or_else(|| LemmaStatus::Pass {
                    checked: cliques.len(),
                    note: match star_goes_to {
                        Some(true) => "stars map into stars, tops into tops".into(),
                        Some(false) => "stars map into tops, tops into stars".into(),
                        None => "no cliques to check".into(),
                    },
                })
            }
            (DomainKind::Grassmann { .. }, Verdict::TypeB(_)) => LemmaStatus::NotApplicable {
                reason: "image lies in a point-residue, not a top".into(),
            },
            _ => LemmaStatus::NotApplicable { reason: "domain is not a Grassmann graph".into() },
        };

        // distance-2 pairs realize case (1) or (3) for Grassmann domains
        let distance2_cases = match self.domain_kind {
            DomainKind::Grassmann { .. } => {
                self.check_distance2_cases(space, k, |case| {
                    matches!(case, PairCase::Collinear | PairCase::DeepIntersection)
                })?
            }
            _ => LemmaStatus::NotApplicable { reason: "domain is not a Grassmann graph".into() },
        };

        // distance-2 pairs realize exactly case (1) for dual polar domains
        // of 3-embeddings
        let dual_polar_case1 = match self.domain_kind {
            DomainKind::DualPolar { .. } => {
                if report.preserved_distance_horizon < 3 {
                    LemmaStatus::NotApplicable {
                        reason: "map is not a 3-embedding".into(),
                    }
                } else {
                    self.check_distance2_cases(space, k, |case| {
                        matches!(case, PairCase::Collinear)
                    })?
                }
            }
            _ => LemmaStatus::NotApplicable { reason: "domain is not a dual polar graph".into() },
        };

        Ok(LemmaReport { line_lemma, star_top_transfer, distance2_cases, dual_polar_case1 })
    }

    fn check_distance2_cases(
        &self,
        space: &PolarSpace,
        k: usize,
        admissible: impl Fn(PairCase) -> bool,
    ) -> Result<LemmaStatus> {
        let n = self.domain.vertex_count();
        let dom = self.domain.all_pairs_distances(usize::MAX)?;
        let mut checked = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                if dom.get(i, j) != 2 {
                    continue;
                }
                checked += 1;
                let case = space.distance2_case(&self.images[i], &self.images[j], k)?;
                match case {
                    Some(c) if admissible(c) => {}
                    other => {
                        return Ok(LemmaStatus::Fail {
                            witness: format!(
                                "domain pair ({i}, {j}) at distance 2 maps to case {other:?}"
                            ),
                        });
                    }
                }
            }
        }
        Ok(LemmaStatus::Pass { checked, note: "all distance-2 image pairs admissible".into() })
    }

    // ---- serialization ----

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .domain
            .vertices()
            .iter()
            .zip(&self.images)
            .map(|(v, img)| {
                json!([
                    { "m": v.ambient_dim(), "rows": v.rows() },
                    { "m": img.ambient_dim(), "rows": img.rows() },
                ])
            })
            .collect();
        let provenance = match &self.provenance {
            Provenance::Constructed { family, witness } => json!({
                "kind": "constructed",
                "family": family,
                "witness": { "m": witness.ambient_dim(), "rows": witness.rows() },
            }),
            Provenance::UserSupplied => json!({ "kind": "user-supplied" }),
        };
        json!({
            "domain": self.domain.descriptor(),
            "codomain": self.codomain.descriptor(),
            "provenance": provenance,
            "pairs": pairs,
        })
    }

    /// Load a map file: rebuild both geometries from their descriptors,
    /// then match the stored pairs against the domain vertex set. Returns
    /// the map plus warnings for non-canonical subspace rows.
    pub fn from_json(value: &Value, budget: &Budget) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        let domain_desc: GraphDescriptor =
            serde_json::from_value(value.get("domain").cloned().ok_or_else(missing_domain)?)
                .map_err(|e| Error::BadDescriptor(format!("domain: {e}")))?;
        let codomain_desc: GraphDescriptor =
            serde_json::from_value(value.get("codomain").cloned().ok_or_else(missing_domain)?)
                .map_err(|e| Error::BadDescriptor(format!("codomain: {e}")))?;

        let (domain, domain_kind) = build_domain(&domain_desc, budget)?;
        let codomain = build_codomain(&codomain_desc, budget)?;
        let field = codomain.space().field().clone();
        let domain_field = domain
            .descriptor()
            .field()
            .ok_or_else(|| Error::BadDescriptor("domain descriptor carries no field".into()))?
            .resolve()?;

        let pairs = value
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadDescriptor("missing pairs array".into()))?;
        let mut images: Vec<Option<Subspace>> = vec![None; domain.vertex_count()];
        for (idx, pair) in pairs.iter().enumerate() {
            let arr = pair
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::BadDescriptor(format!("pair {idx} is not a 2-array")))?;
            let key_repr: SubspaceRepr = serde_json::from_value(arr[0].clone())
                .map_err(|e| Error::BadDescriptor(format!("pair {idx} key: {e}")))?;
            let img_repr: SubspaceRepr = serde_json::from_value(arr[1].clone())
                .map_err(|e| Error::BadDescriptor(format!("pair {idx} image: {e}")))?;
            let (key, key_canonical) = Subspace::from_repr(&domain_field, &key_repr)?;
            if !key_canonical {
                warnings.push(format!("pair {idx}: domain key rows were not canonical"));
            }
            let (img, img_canonical) = Subspace::from_repr(&field, &img_repr)?;
            if !img_canonical {
                warnings.push(format!("pair {idx}: image rows were not canonical"));
            }
            let id = domain.id_of(&key).ok_or_else(|| {
                Error::BadDescriptor(format!("pair {idx}: key is not a domain vertex"))
            })?;
            if images[id as usize].is_some() {
                return Err(Error::BadDescriptor(format!(
                    "domain vertex {id} appears twice in pairs"
                )));
            }
            images[id as usize] = Some(img);
        }
        let images: Vec<Subspace> = images
            .into_iter()
            .enumerate()
            .map(|(id, s)| {
                s.ok_or_else(|| Error::BadDescriptor(format!("domain vertex {id} has no image")))
            })
            .collect::<Result<_>>()?;
        let map = EmbeddingMap::from_parts(
            domain,
            domain_kind,
            codomain,
            images,
            Provenance::UserSupplied,
        )?;
        Ok((map, warnings))
    }
}

fn missing_domain() -> Error {
    Error::BadDescriptor("missing domain/codomain descriptor".into())
}

/// Rebuild a domain graph from its descriptor.
pub fn build_domain(desc: &GraphDescriptor, budget: &Budget) -> Result<(GeometryGraph, DomainKind)> {
    match desc {
        GraphDescriptor::Grassmann { m, i, field } => {
            let field = field.resolve()?;
            let gd = GrassmannDescriptor::new(*m, *i, field)?;
            Ok((build_grassmann_graph(&gd, budget)?, DomainKind::Grassmann { i: *i }))
        }
        GraphDescriptor::Polar { form, d, k, field, .. } => {
            let field = field.resolve()?;
            let space = PolarSpace::standard(*form, *d, &field, budget)?;
            let kind = if *k + 1 == space.rank() {
                DomainKind::DualPolar { rank: space.rank() }
            } else {
                DomainKind::Other
            };
            Ok((space.polar_graph(*k, budget)?, kind))
        }
        GraphDescriptor::Custom { name } => {
            Err(Error::BadDescriptor(format!("cannot rebuild a custom graph: {name}")))
        }
    }
}

/// Rebuild a codomain from its descriptor, materializing the graph when the
/// predicted vertex count fits the budget.
pub fn build_codomain(desc: &GraphDescriptor, budget: &Budget) -> Result<Codomain> {
    let GraphDescriptor::Polar { form, d, k, field, .. } = desc else {
        return Err(Error::BadDescriptor("codomain must be a polar Grassmann graph".into()));
    };
    let field = field.resolve()?;
    let space = PolarSpace::standard(*form, *d, &field, budget)?;
    match space.predicted_singular_count(*k) {
        Some(count) if count <= budget.max_vertices as u128 => {
            let graph = space.polar_graph(*k, budget)?;
            Ok(Codomain::Materialized { graph, space, k: *k })
        }
        _ => Ok(Codomain::ClosedForm { space, k: *k }),
    }
}

/// Type-A construction: push the whole domain space linearly into a
/// maximal singular subspace U and read i-dimensional subspaces as
/// (i-1)-(projective)-dimensional vertices of Γ_{i-1}(Π) inside ⟨U].
pub fn make_type_a_embedding(
    domain: &GrassmannDescriptor,
    space: &PolarSpace,
    u_max: &Subspace,
    budget: &Budget,
) -> Result<EmbeddingMap> {
    if domain.field != *space.field() {
        return Err(Error::FieldMismatch);
    }
    if !space.form().is_totally_singular(u_max) || u_max.vdim() != space.rank() {
        return Err(Error::IncidenceViolation(
            "type-A carrier must be a maximal singular subspace".into(),
        ));
    }
    if u_max.vdim() < domain.m {
        return Err(Error::DimensionMismatch(format!(
            "carrier dimension {} is below the domain dimension {}",
            u_max.vdim(),
            domain.m
        )));
    }
    let graph = build_grassmann_graph(domain, budget)?;
    let k = domain.i - 1;
    let map_rows: Vec<Vec<u16>> = u_max.rows()[..domain.m].to_vec();
    let images: Vec<Subspace> = graph
        .vertices()
        .iter()
        .map(|x| x.apply_matrix(&map_rows, space.form().dim()))
        .collect::<Result<_>>()?;
    let codomain_graph = space.polar_graph(k, budget)?;
    EmbeddingMap::from_parts(
        graph,
        DomainKind::Grassmann { i: domain.i },
        Codomain::Materialized { graph: codomain_graph, space: space.clone(), k },
        images,
        Provenance::Constructed { family: "type-a", witness: u_max.clone() },
    )
}

/// Type-B construction for m = 4: the Klein bijection from planes of F_q^4
/// onto the quadric, transported isometrically into the residue of a
/// singular point S of an O+(8, q) space, then pulled back to lines
/// through S.
pub fn make_type_b_klein_embedding(
    field: &FieldSpec,
    space: &PolarSpace,
    s_point: &Subspace,
    budget: &Budget,
) -> Result<EmbeddingMap> {
    if space.field() != field {
        return Err(Error::FieldMismatch);
    }
    if space.form().kind() != FormKind::OrthogonalPlus || space.form().dim() != 8 {
        return Err(Error::BadDescriptor(
            "the Klein type-B construction targets O+(8, q)".into(),
        ));
    }
    if s_point.vdim() != 1 || !space.form().is_totally_singular(s_point) {
        return Err(Error::NotSingularPoint);
    }
    let residue = space.residue(s_point, budget)?;
    let klein_form = crate::form::ClassicalForm::klein(field)?;

    // isometry between the Klein quadric and the residue quadric via their
    // hyperbolic bases
    let (kp, kr) = klein_form.hyperbolic_basis()?;
    let (rp, rr) = residue.space.form().hyperbolic_basis()?;
    if !kr.is_empty() || !rr.is_empty() || kp.len() != 3 || rp.len() != 3 {
        return Err(Error::Internal("both rank-3 quadrics must split into 3 pairs".into()));
    }
    let flatten = |pairs: &[(Vec<u16>, Vec<u16>)]| -> Vec<Vec<u16>> {
        pairs.iter().flat_map(|(u, v)| [u.clone(), v.clone()]).collect()
    };
    let basis_k = flatten(&kp);
    let basis_r = flatten(&rp);
    let inv_k = linalg::invert(field, &basis_k)
        .ok_or_else(|| Error::Internal("hyperbolic basis must be invertible".into()))?;
    let iso = linalg::mat_mul(field, &inv_k, &basis_r);

    let domain_desc = GrassmannDescriptor::new(4, 2, field.clone())?;
    let graph = build_grassmann_graph(&domain_desc, budget)?;
    let images: Vec<Subspace> = graph
        .vertices()
        .iter()
        .map(|x| {
            let plücker = klein_map(x)?;
            let in_residue = plücker.apply_matrix(&iso, residue.space.form().dim())?;
            debug_assert!(residue.space.form().is_totally_singular(&in_residue));
            residue.lift(&in_residue)
        })
        .collect::<Result<_>>()?;

    let codomain_graph = space.polar_graph(1, budget)?;
    EmbeddingMap::from_parts(
        graph,
        DomainKind::Grassmann { i: 2 },
        Codomain::Materialized { graph: codomain_graph, space: space.clone(), k: 1 },
        images,
        Provenance::Constructed { family: "type-b-klein", witness: s_point.clone() },
    )
}

/// Embed the dual polar graph of Π' (rank l ≥ 3 on W) into Γ_{l-1}(Π) by
/// identifying W with a singular subspace U of Π of the same dimension.
/// The codomain uses the closed-form distance oracle.
pub fn make_dual_polar_top_embedding(
    domain_space: &PolarSpace,
    codomain_space: &PolarSpace,
    u_max: &Subspace,
    budget: &Budget,
) -> Result<EmbeddingMap> {
    let l = domain_space.rank();
    if l < 3 {
        return Err(Error::RankTooSmall { rank: l, need: 3 });
    }
    if domain_space.field() != codomain_space.field() {
        return Err(Error::FieldMismatch);
    }
    if u_max.vdim() != domain_space.form().dim() {
        return Err(Error::DimensionMismatch(format!(
            "carrier dimension {} must equal the domain ambient dimension {}",
            u_max.vdim(),
            domain_space.form().dim()
        )));
    }
    if !codomain_space.form().is_totally_singular(u_max) {
        return Err(Error::IncidenceViolation("carrier must be totally singular".into()));
    }
    let graph = domain_space.polar_graph(l - 1, budget)?;
    let images: Vec<Subspace> = graph
        .vertices()
        .iter()
        .map(|x| x.apply_matrix(u_max.rows(), codomain_space.form().dim()))
        .collect::<Result<_>>()?;
    EmbeddingMap::from_parts(
        graph,
        DomainKind::DualPolar { rank: l },
        Codomain::ClosedForm { space: codomain_space.clone(), k: l - 1 },
        images,
        Provenance::Constructed { family: "dual-polar-top", witness: u_max.clone() },
    )
}

/// The identity embedding of a polar Grassmann graph into itself; handy
/// for exercising the checker.
pub fn identity_embedding(space: &PolarSpace, k: usize, budget: &Budget) -> Result<EmbeddingMap> {
    let graph = space.polar_graph(k, budget)?;
    let images = graph.vertices().to_vec();
    let codomain_graph = space.polar_graph(k, budget)?;
    let kind = if k + 1 == space.rank() {
        DomainKind::DualPolar { rank: space.rank() }
    } else {
        DomainKind::Other
    };
    EmbeddingMap::from_parts(
        graph,
        kind,
        Codomain::Materialized { graph: codomain_graph, space: space.clone(), k },
        images,
        Provenance::UserSupplied,
    )
}
