//! Serializable descriptors for geometries and graphs.

use serde::{Deserialize, Serialize};

use crate::field::FieldDescriptor;

/// Which classical form a polar descriptor refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarFormTag {
    #[serde(rename = "Sp")]
    Symplectic,
    #[serde(rename = "O+")]
    OrthogonalPlus,
    #[serde(rename = "O-")]
    OrthogonalMinus,
    #[serde(rename = "Oodd")]
    OrthogonalOdd,
    #[serde(rename = "U")]
    Hermitian,
    /// The hyperbolic quadric in Plücker coordinates.
    #[serde(rename = "Klein")]
    Klein,
}

/// Construction descriptor for a geometry graph. Serialized inside graph
/// exports, run reports and embedding files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphDescriptor {
    Grassmann {
        m: usize,
        i: usize,
        field: FieldDescriptor,
    },
    Polar {
        form: PolarFormTag,
        d: usize,
        /// Projective dimension of the singular subspaces taken as vertices.
        k: usize,
        field: FieldDescriptor,
        /// Gram matrix of the (sesqui)linear part, for reproducibility.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gram: Option<Vec<Vec<u16>>>,
        /// Upper-triangular quadratic coefficients, orthogonal kinds only.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quad: Option<Vec<Vec<u16>>>,
    },
    Custom {
        name: String,
    },
}

impl GraphDescriptor {
    pub fn custom(name: impl Into<String>) -> Self {
        GraphDescriptor::Custom { name: name.into() }
    }

    pub fn field(&self) -> Option<&FieldDescriptor> {
        match self {
            GraphDescriptor::Grassmann { field, .. } => Some(field),
            GraphDescriptor::Polar { field, .. } => Some(field),
            GraphDescriptor::Custom { .. } => None,
        }
    }
}

/// Enumeration and search budgets, adjustable from the CLI.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Cap on enumerated vertices per graph.
    pub max_vertices: usize,
    /// Cap on vertices for all-pairs distance materialization.
    pub max_all_pairs_vertices: usize,
    /// Cap on enumerated maximal cliques.
    pub max_cliques: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 200_000, max_all_pairs_vertices: 20_000, max_cliques: 1_000_000 }
    }
}
