//! Exact-arithmetic engine for finite Grassmann and polar Grassmann
//! geometry: finite fields, canonical subspaces, geometry graphs, classical
//! polar spaces, the Klein correspondence and the embedding machinery
//! connecting them.

pub mod descriptor;
pub mod embedding;
pub mod error;
pub mod export;
pub mod field;
pub mod form;
pub mod graph;
pub mod grassmann;
pub mod klein;
mod linalg;
pub mod polar;
pub mod subspace;

pub use descriptor::{Budget, GraphDescriptor, PolarFormTag};
pub use error::{Error, Result};
pub use field::{FieldDescriptor, FieldElement, FieldId, FieldOp, FieldSpec};
pub use graph::{DistanceMatrix, GeometryGraph};
pub use subspace::{enumerate_subspaces, gaussian_binomial, Subspace};

use grassmann::GrassmannDescriptor;

/// Build the geometry graph a descriptor denotes.
pub fn build_geometry_graph(desc: &GraphDescriptor, budget: &Budget) -> Result<GeometryGraph> {
    match desc {
        GraphDescriptor::Grassmann { m, i, field } => {
            let field = field.resolve()?;
            let gd = GrassmannDescriptor::new(*m, *i, field)?;
            grassmann::build_grassmann_graph(&gd, budget)
        }
        GraphDescriptor::Polar { form, d, k, field, .. } => {
            let field = field.resolve()?;
            let space = polar::PolarSpace::standard(*form, *d, &field, budget)?;
            space.polar_graph(*k, budget)
        }
        GraphDescriptor::Custom { name } => {
            Err(Error::BadDescriptor(format!("cannot build a custom graph: {name}")))
        }
    }
}
