//! The Klein correspondence: 2-dimensional subspaces of F_q^4 mapped to
//! singular points of the hyperbolic quadric on the exterior square.

use crate::descriptor::Budget;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::form::ClassicalForm;
use crate::polar::PolarSpace;
use crate::subspace::Subspace;

/// The polar space of the Klein quadric Q = p12 p34 - p13 p24 + p14 p23.
pub fn klein_space(field: &FieldSpec, budget: &Budget) -> Result<PolarSpace> {
    PolarSpace::from_form(ClassicalForm::klein(field)?, budget)
}

/// Plücker coordinates of a plane: for basis rows u, v the point
/// (p12, p13, p14, p23, p24, p34) with p_ij = u_i v_j - u_j v_i, as a
/// canonical 1-dimensional subspace of F_q^6.
pub fn klein_map(x: &Subspace) -> Result<Subspace> {
    if x.ambient_dim() != 4 || x.vdim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "the Klein map takes 2-dimensional subspaces of F_q^4, got dim {} of F_q^{}",
            x.vdim(),
            x.ambient_dim()
        )));
    }
    let f = x.field();
    let u = &x.rows()[0];
    let v = &x.rows()[1];
    let minor = |i: usize, j: usize| f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i]));
    let coords = vec![
        minor(0, 1),
        minor(0, 2),
        minor(0, 3),
        minor(1, 2),
        minor(1, 3),
        minor(2, 3),
    ];
    Subspace::canonicalize(f, 6, &[coords])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::enumerate_subspaces;

    fn gf2() -> FieldSpec {
        FieldSpec::make(2, 1, None).unwrap()
    }

    #[test]
    fn coordinate_plane_maps_to_the_first_basis_point() {
        let f2 = gf2();
        let x = Subspace::canonicalize(
            &f2,
            4,
            &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]],
        )
        .unwrap();
        let p = klein_map(&x).unwrap();
        assert_eq!(p.rows(), &[vec![1, 0, 0, 0, 0, 0]]);
    }

    #[test]
    fn well_defined_under_basis_change() {
        // raw Plücker coordinates of two bases of one plane are proportional
        let f3 = FieldSpec::make(3, 1, None).unwrap();
        let raw = |u: &[u16], v: &[u16]| -> Vec<u16> {
            let minor = |i: usize, j: usize| f3.sub(f3.mul(u[i], v[j]), f3.mul(u[j], v[i]));
            vec![minor(0, 1), minor(0, 2), minor(0, 3), minor(1, 2), minor(1, 3), minor(2, 3)]
        };
        let u = [1u16, 2, 0, 1];
        let v = [0u16, 1, 1, 2];
        // (u + 2v, 2u): same plane, determinant of the change matrix is 2*2 - 0 = 4 = 1... scaled
        let u2: Vec<u16> = u.iter().zip(&v).map(|(&a, &b)| f3.add(a, f3.mul(2, b))).collect();
        let v2: Vec<u16> = u.iter().map(|&a| f3.mul(2, a)).collect();
        let p1 = raw(&u, &v);
        let p2 = raw(&u2, &v2);
        let s1 = Subspace::canonicalize(&f3, 6, &[p1]).unwrap();
        let s2 = Subspace::canonicalize(&f3, 6, &[p2]).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn images_lie_on_the_quadric() {
        let f2 = gf2();
        let form = ClassicalForm::klein(&f2).unwrap();
        for x in enumerate_subspaces(&f2, 4, 2, 1000).unwrap() {
            let p = klein_map(&x).unwrap();
            assert!(form.is_singular_vector(&p.rows()[0]));
        }
    }

    #[test]
    fn bijection_with_adjacency_both_ways_at_q2() {
        let f2 = gf2();
        let space = klein_space(&f2, &Budget::default()).unwrap();
        let planes = enumerate_subspaces(&f2, 4, 2, 1000).unwrap();
        let images: Vec<Subspace> = planes.iter().map(|x| klein_map(x).unwrap()).collect();
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 35);
        assert_eq!(space.points().len(), 35);
        for p in space.points() {
            assert!(sorted.binary_search(p).is_ok());
        }
        for (i, x) in planes.iter().enumerate() {
            for (j, y) in planes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let adjacent = x.meet(y).unwrap().vdim() == 1;
                let collinear = space
                    .form()
                    .collinear_by_span(&images[i].rows()[0], &images[j].rows()[0])
                    .unwrap();
                assert_eq!(adjacent, collinear, "planes {i} and {j}");
            }
        }
    }
}
