//! Finitely presented abelian groups, their homomorphisms, and finite
//! diagram colimits.
//!
//! A group is a presentation: a generator count together with a relation
//! matrix (one relation per row). Everything structural — invariant factors,
//! well-definedness of maps, injectivity, surjectivity — is decided exactly
//! through Smith normal form, never through rank heuristics.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

use super::matrix::{kernel_basis, row_lattice_contains, smith_normal_form, IntMatrix};
use super::Error;

/// A finitely presented abelian group `Z^n / rowspan(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPAbelianGroup {
    n_generators: usize,
    relations: IntMatrix,
}

impl FPAbelianGroup {
    /// Builds a presentation; the relation matrix must have one column per
    /// generator.
    pub fn new(n_generators: usize, relations: IntMatrix) -> Result<Self, Error> {
        if relations.cols() != n_generators {
            return Err(Error::RelationWidth {
                cols: relations.cols(),
                generators: n_generators,
            });
        }
        Ok(FPAbelianGroup {
            n_generators,
            relations,
        })
    }

    /// The free abelian group of rank `n`.
    pub fn free(n: usize) -> Self {
        FPAbelianGroup {
            n_generators: n,
            relations: IntMatrix::zero(0, n),
        }
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Canonical invariants: free rank and invariant factors `>= 2` in
    /// divisibility order. Two presentations of isomorphic groups agree here.
    pub fn invariants(&self) -> GroupInvariants {
        let snf = smith_normal_form(&self.relations);
        let diagonal = snf.diagonal();
        let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
        let torsion = diagonal
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        GroupInvariants {
            free_rank: self.n_generators - rank,
            torsion,
        }
    }

    /// Dimension of the group after tensoring with the rationals.
    pub fn rational_rank(&self) -> usize {
        self.n_generators - self.relations.rank()
    }
}

/// Free rank plus invariant factors of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Renders the invariant-factor form, e.g. `Z^1 (+) Z/2`.
impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" (+) "))
    }
}

/// A homomorphism between presented groups, given by its action on
/// generators: column `j` of the matrix is the image of source generator `j`.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FPAbelianGroup,
    target: FPAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(
        source: FPAbelianGroup,
        target: FPAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, Error> {
        if matrix.rows() != target.n_generators() || matrix.cols() != source.n_generators() {
            return Err(Error::HomShape {
                matrix_rows: matrix.rows(),
                matrix_cols: matrix.cols(),
                source_generators: source.n_generators(),
                target_generators: target.n_generators(),
            });
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FPAbelianGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.n_generators()),
        }
    }

    pub fn source(&self) -> &FPAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FPAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Index of the first source relation whose image falls outside the
    /// integer row lattice of the target relations, if any.
    pub fn offending_relation(&self) -> Option<usize> {
        (0..self.source.relations().rows()).find(|&i| {
            let image = self.matrix.mul_vec(self.source.relations().row(i));
            !row_lattice_contains(self.target.relations(), &image)
        })
    }

    /// True iff the matrix descends to a map on the presented quotients.
    pub fn is_well_defined(&self) -> bool {
        self.offending_relation().is_none()
    }

    /// Rank of the induced map after tensoring with the rationals.
    ///
    /// Computed as `rank[M | R_t^T] - rank[R_t]`: the image of the induced
    /// map is `(im M + V_t) / V_t` where `V_t` is the span of the target
    /// relations.
    pub fn rational_rank(&self) -> Result<usize, Error> {
        if let Some(i) = self.offending_relation() {
            return Err(Error::IllDefined {
                detail: format!("source relation {i} does not map into the target lattice"),
            });
        }
        let combined = self.matrix.hstack(&self.target.relations().transpose());
        Ok(combined.rank() - self.target.relations().rank())
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, Error> {
        if inner.target != self.source {
            return Err(Error::ComposeMismatch);
        }
        Ok(GroupHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }

    /// Equality as maps: same endpoints and columns that agree modulo the
    /// target relations.
    pub fn eq_as_map(&self, other: &GroupHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        (0..self.matrix.cols()).all(|j| {
            let diff: Vec<BigInt> = self
                .matrix
                .column(j)
                .into_iter()
                .zip(other.matrix.column(j))
                .map(|(a, b)| a - b)
                .collect();
            row_lattice_contains(self.target.relations(), &diff)
        })
    }

    /// Cokernel presentation: target generators modulo target relations and
    /// the images of the source generators.
    pub fn cokernel(&self) -> FPAbelianGroup {
        let relations = self.target.relations().vstack(&self.matrix.transpose());
        FPAbelianGroup {
            n_generators: self.target.n_generators(),
            relations,
        }
    }

    /// Exact surjectivity test: the cokernel is the trivial group.
    pub fn is_surjective(&self) -> bool {
        self.cokernel().invariants().is_trivial()
    }

    /// Exact injectivity test.
    ///
    /// An element `[x]` dies iff `M x` lies in the target relation lattice,
    /// i.e. `M x = R_t^T y` for some `y`. Generators of all such `x` are the
    /// projections of a kernel basis of the block matrix `[M | R_t^T]`; the
    /// map is injective iff each of them was already a source relation.
    pub fn is_injective(&self) -> bool {
        let block = self.matrix.hstack(&self.target.relations().transpose());
        kernel_basis(&block).iter().all(|v| {
            let x = &v[..self.source.n_generators()];
            row_lattice_contains(self.source.relations(), x)
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// A finite diagram of presented groups over a totally ordered index set,
/// with arrows only forward.
#[derive(Clone, Debug)]
pub struct GroupDiagram {
    objects: Vec<FPAbelianGroup>,
    arrows: Vec<(usize, usize, GroupHom)>,
}

impl GroupDiagram {
    /// Validates endpoints, well-definedness of every arrow, and
    /// composition-consistency: whenever arrows `i -> j`, `j -> k`, and
    /// `i -> k` are all present, the triangle must commute as maps.
    pub fn new(
        objects: Vec<FPAbelianGroup>,
        arrows: Vec<(usize, usize, GroupHom)>,
    ) -> Result<Self, Error> {
        for (i, j, hom) in &arrows {
            if *i >= *j || *j >= objects.len() {
                return Err(Error::BadArrow {
                    from: *i,
                    to: *j,
                    reason: "indices must satisfy i < j within the diagram".into(),
                });
            }
            if hom.source() != &objects[*i] || hom.target() != &objects[*j] {
                return Err(Error::BadArrow {
                    from: *i,
                    to: *j,
                    reason: "hom endpoints do not match the diagram objects".into(),
                });
            }
            if !hom.is_well_defined() {
                return Err(Error::BadArrow {
                    from: *i,
                    to: *j,
                    reason: "hom is not well-defined".into(),
                });
            }
        }
        let diagram = GroupDiagram { objects, arrows };
        diagram.check_consistency()?;
        Ok(diagram)
    }

    /// Convenience constructor for a chain `G_0 -> G_1 -> ... -> G_m`.
    pub fn chain(objects: Vec<FPAbelianGroup>, homs: Vec<GroupHom>) -> Result<Self, Error> {
        let arrows = homs
            .into_iter()
            .enumerate()
            .map(|(i, h)| (i, i + 1, h))
            .collect();
        GroupDiagram::new(objects, arrows)
    }

    pub fn objects(&self) -> &[FPAbelianGroup] {
        &self.objects
    }

    fn arrow(&self, i: usize, j: usize) -> Option<&GroupHom> {
        self.arrows
            .iter()
            .find(|(a, b, _)| *a == i && *b == j)
            .map(|(_, _, h)| h)
    }

    fn check_consistency(&self) -> Result<(), Error> {
        for (i, j, first) in &self.arrows {
            for (j2, k, second) in &self.arrows {
                if j2 != j {
                    continue;
                }
                if let Some(direct) = self.arrow(*i, *k) {
                    let composed = second.compose(first).expect("endpoints already checked");
                    if !composed.eq_as_map(direct) {
                        return Err(Error::InconsistentDiagram {
                            i: *i,
                            j: *j,
                            k: *k,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Colimit presentation and the canonical map from each object.
    ///
    /// Generators are the disjoint union of the objects' generators;
    /// relations are all object relations together with `x - h(x)` for every
    /// arrow `h` and every source generator `x`.
    pub fn colimit(&self) -> (FPAbelianGroup, Vec<GroupHom>) {
        let offsets: Vec<usize> = self
            .objects
            .iter()
            .scan(0, |acc, g| {
                let off = *acc;
                *acc += g.n_generators();
                Some(off)
            })
            .collect();
        let total: usize = self.objects.iter().map(FPAbelianGroup::n_generators).sum();

        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (k, obj) in self.objects.iter().enumerate() {
            for r in 0..obj.relations().rows() {
                let mut row = vec![BigInt::zero(); total];
                row[offsets[k]..offsets[k] + obj.n_generators()]
                    .clone_from_slice(obj.relations().row(r));
                rows.push(row);
            }
        }
        for (i, j, hom) in &self.arrows {
            for g in 0..self.objects[*i].n_generators() {
                let mut row = vec![BigInt::zero(); total];
                row[offsets[*i] + g] = BigInt::one();
                for t in 0..self.objects[*j].n_generators() {
                    row[offsets[*j] + t] = -hom.matrix()[(t, g)].clone();
                }
                rows.push(row);
            }
        }

        let relations = if rows.is_empty() {
            IntMatrix::zero(0, total)
        } else {
            IntMatrix::from_rows(rows)
        };
        let colimit = FPAbelianGroup {
            n_generators: total,
            relations,
        };

        let maps = self
            .objects
            .iter()
            .enumerate()
            .map(|(k, obj)| {
                let mut m = IntMatrix::zero(total, obj.n_generators());
                for g in 0..obj.n_generators() {
                    m[(offsets[k] + g, g)] = BigInt::one();
                }
                GroupHom {
                    source: obj.clone(),
                    target: colimit.clone(),
                    matrix: m,
                }
            })
            .collect();

        (colimit, maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, rel: IntMatrix) -> FPAbelianGroup {
        FPAbelianGroup::new(n, rel).unwrap()
    }

    fn inv(free: usize, torsion: &[i64]) -> GroupInvariants {
        GroupInvariants {
            free_rank: free,
            torsion: torsion.iter().map(|&d| BigInt::from(d)).collect(),
        }
    }

    #[test]
    fn invariants_of_free_group() {
        let g = FPAbelianGroup::free(1);
        assert_eq!(g.invariants(), inv(1, &[]));
        assert_eq!(g.rational_rank(), 1);
    }

    #[test]
    fn invariants_with_torsion() {
        let g = group(2, IntMatrix::from_array([[-2, 2]]));
        assert_eq!(g.invariants(), inv(1, &[2]));
        assert_eq!(g.rational_rank(), 1);
    }

    #[test]
    fn invariants_torsion_free_quotient() {
        let g = group(3, IntMatrix::from_array([[-1, 1, 1]]));
        assert_eq!(g.invariants(), inv(2, &[]));
        assert_eq!(g.rational_rank(), 2);
    }

    #[test]
    fn zero_group_is_legal() {
        let g = FPAbelianGroup::free(0);
        assert_eq!(g.invariants(), inv(0, &[]));
        assert_eq!(g.invariants().to_string(), "0");
    }

    #[test]
    fn relation_width_is_checked() {
        let err = FPAbelianGroup::new(2, IntMatrix::from_array([[1, 1, 1]])).unwrap_err();
        assert!(matches!(err, Error::RelationWidth { cols: 3, generators: 2 }));
    }

    #[test]
    fn display_forms() {
        assert_eq!(inv(1, &[2]).to_string(), "Z^1 (+) Z/2");
        assert_eq!(inv(2, &[]).to_string(), "Z^2");
        assert_eq!(inv(0, &[2, 4]).to_string(), "Z/2 (+) Z/4");
        assert_eq!(inv(3, &[3, 9]).to_string(), "Z^3 (+) Z/3 (+) Z/9");
    }

    #[test]
    fn identity_is_well_defined() {
        let g = group(2, IntMatrix::from_array([[-2, 2]]));
        assert!(GroupHom::identity(&g).is_well_defined());
    }

    #[test]
    fn torsion_cannot_map_into_free_group() {
        // Z/2 -> Z sending the generator to 1
        let source = group(1, IntMatrix::from_array([[2]]));
        let target = FPAbelianGroup::free(1);
        let h = GroupHom::new(source, target, IntMatrix::from_array([[1]])).unwrap();
        assert!(!h.is_well_defined());
        assert_eq!(h.offending_relation(), Some(0));
    }

    #[test]
    fn node_eta_is_well_defined_with_rational_rank_one() {
        // Z (+) Z/2 on generators (R, M) into Z^2 on (R, M+, M-)
        let source = group(2, IntMatrix::from_array([[-2, 2]]));
        let target = group(3, IntMatrix::from_array([[-1, 1, 1]]));
        let h = GroupHom::new(
            source.clone(),
            target,
            IntMatrix::from_array([[1, 0], [0, 1], [0, 1]]),
        )
        .unwrap();
        assert!(h.is_well_defined());
        assert_eq!(h.rational_rank().unwrap(), 1);
        assert_eq!(source.rational_rank(), 1);
        // injective after tensoring with Q, but not integrally: torsion dies
        assert!(!h.is_injective());
    }

    #[test]
    fn rational_rank_of_identity_and_zero() {
        let g = FPAbelianGroup::free(2);
        assert_eq!(GroupHom::identity(&g).rational_rank().unwrap(), 2);
        let zero = GroupHom::new(g.clone(), g.clone(), IntMatrix::zero(2, 2)).unwrap();
        assert_eq!(zero.rational_rank().unwrap(), 0);
    }

    #[test]
    fn rational_rank_rejects_ill_defined_hom() {
        let source = group(1, IntMatrix::from_array([[2]]));
        let target = FPAbelianGroup::free(1);
        let h = GroupHom::new(source, target, IntMatrix::from_array([[1]])).unwrap();
        assert!(matches!(h.rational_rank(), Err(Error::IllDefined { .. })));
    }

    #[test]
    fn composition_of_well_defined_homs_stays_well_defined() {
        let g0 = group(2, IntMatrix::from_array([[-2, 2]]));
        // same group with a redundant relation appended
        let g1 = group(2, IntMatrix::from_array([[-2, 2], [-4, 4]]));
        // generators permuted
        let g2 = group(2, IntMatrix::from_array([[2, -2], [4, -4]]));
        let h01 = GroupHom::new(g0.clone(), g1.clone(), IntMatrix::identity(2)).unwrap();
        let h12 = GroupHom::new(g1, g2, IntMatrix::from_array([[0, 1], [1, 0]])).unwrap();
        assert!(h01.is_well_defined());
        assert!(h12.is_well_defined());
        let composed = h12.compose(&h01).unwrap();
        assert!(composed.is_well_defined());
        assert_eq!(composed.source(), &g0);
    }

    #[test]
    fn injectivity_and_surjectivity_of_unimodular_map() {
        let g = FPAbelianGroup::free(2);
        let h = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_array([[1, 1], [0, 1]]))
            .unwrap();
        assert!(h.is_isomorphism());

        let double = GroupHom::new(g.clone(), g, IntMatrix::from_array([[2, 0], [0, 1]])).unwrap();
        assert!(double.is_injective());
        assert!(!double.is_surjective());
    }

    #[test]
    fn colimit_of_single_object() {
        let g = group(2, IntMatrix::from_array([[-2, 2]]));
        let d = GroupDiagram::chain(vec![g.clone()], vec![]).unwrap();
        let (colim, maps) = d.colimit();
        assert_eq!(colim.invariants(), g.invariants());
        assert_eq!(maps.len(), 1);
        assert!(maps[0].is_isomorphism());
    }

    #[test]
    fn colimit_of_two_term_isomorphism_chain() {
        let g = group(2, IntMatrix::from_array([[-2, 2]]));
        let d = GroupDiagram::chain(
            vec![g.clone(), g.clone()],
            vec![GroupHom::identity(&g)],
        )
        .unwrap();
        let (colim, maps) = d.colimit();
        assert_eq!(colim.invariants(), g.invariants());
        assert!(maps[1].is_surjective());
    }

    #[test]
    fn colimit_of_node_chain() {
        let source = group(2, IntMatrix::from_array([[-2, 2]]));
        let target = group(3, IntMatrix::from_array([[-1, 1, 1], [-1, 1, 1]]));
        let eta = GroupHom::new(
            source.clone(),
            target.clone(),
            IntMatrix::from_array([[1, 0], [0, 1], [0, 1]]),
        )
        .unwrap();
        let d = GroupDiagram::chain(vec![source, target], vec![eta]).unwrap();
        let (colim, maps) = d.colimit();
        assert_eq!(colim.invariants(), inv(2, &[]));
        assert_eq!(maps.len(), 2);
        for m in &maps {
            assert!(m.is_well_defined());
        }
    }

    #[test]
    fn inconsistent_diagram_is_rejected() {
        let g = FPAbelianGroup::free(1);
        let id = GroupHom::identity(&g);
        let double = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_array([[2]])).unwrap();
        // direct arrow 0 -> 2 disagrees with the composite through 1
        let err = GroupDiagram::new(
            vec![g.clone(), g.clone(), g.clone()],
            vec![
                (0, 1, id.clone()),
                (1, 2, id.clone()),
                (0, 2, double),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InconsistentDiagram { .. }));
    }

    #[test]
    fn consistent_triangle_is_accepted() {
        let g = FPAbelianGroup::free(1);
        let id = GroupHom::identity(&g);
        let d = GroupDiagram::new(
            vec![g.clone(), g.clone(), g.clone()],
            vec![(0, 1, id.clone()), (1, 2, id.clone()), (0, 2, id)],
        )
        .unwrap();
        let (colim, _) = d.colimit();
        assert_eq!(colim.invariants(), inv(1, &[]));
    }
}
