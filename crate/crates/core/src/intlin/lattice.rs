use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix, Rat, RatMatrix};
use super::normal_form::{hermite_normal_form, integer_kernel};
use crate::error::{Error, Result};

/// A lattice in `Q^n`, stored by a canonical basis (columns).
///
/// The basis is the Hermite normal form of the generated Z-module, so two
/// lattices are equal exactly when their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    basis: RatMatrix,
}

impl Lattice {
    /// Lattice generated by the columns of `gens` (which may be dependent).
    pub fn from_generators(gens: &RatMatrix) -> Lattice {
        let (d, scaled) = gens.clear_denominators();
        let hnf = hermite_normal_form(&scaled.transpose());
        let dr = BigRational::from_integer(d);
        let basis = hnf.transpose().map(|x| BigRational::from_integer(x.clone()) / &dr);
        Lattice { basis }
    }

    pub fn from_int_generators(gens: &IntMatrix) -> Lattice {
        Lattice::from_generators(&gens.to_rat())
    }

    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<Rat>]) -> Lattice {
        Lattice::from_generators(&RatMatrix::from_columns(ambient_dim, vectors))
    }

    /// `Z^n`.
    pub fn standard(n: usize) -> Lattice {
        Lattice {
            basis: RatMatrix::identity(n),
        }
    }

    /// Rank-0 lattice in `Q^n`.
    pub fn zero(n: usize) -> Lattice {
        Lattice {
            basis: RatMatrix::zeros(n, 0),
        }
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.columns()
    }

    /// Coordinates of `x` in the basis, if `x` lies in the rational span.
    pub fn span_coordinates(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        let rhs = RatMatrix::from_columns(self.ambient_dim(), &[x.to_vec()]);
        self.basis.solve(&rhs).map(|c| c.column(0))
    }

    /// Coordinate matrix of the columns of `m` in this basis, if they lie in the span.
    pub fn span_coordinates_of(&self, m: &RatMatrix) -> Option<RatMatrix> {
        self.basis.solve(m)
    }

    pub fn in_span(&self, x: &[Rat]) -> bool {
        self.span_coordinates(x).is_some()
    }

    pub fn contains_vector(&self, x: &[Rat]) -> bool {
        self.span_coordinates(x)
            .is_some_and(|c| c.iter().all(|v| v.is_integer()))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Lattice) -> bool {
        other.ambient_dim() == self.ambient_dim()
            && self
                .basis
                .solve(&other.basis)
                .is_some_and(|c| c.is_integral())
    }

    pub fn same_span(&self, other: &Lattice) -> bool {
        self.rank() == other.rank()
            && self.basis.solve(&other.basis).is_some()
            && other.basis.solve(&self.basis).is_some()
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(&self.basis.hstack(&other.basis))
    }

    pub fn with_vectors(&self, vectors: &[Vec<Rat>]) -> Lattice {
        if vectors.is_empty() {
            return self.clone();
        }
        let extra = RatMatrix::from_columns(self.ambient_dim(), vectors);
        Lattice::from_generators(&self.basis.hstack(&extra))
    }

    pub fn scale(&self, s: &Rat) -> Lattice {
        Lattice::from_generators(&self.basis.scale(s))
    }

    /// Image under a linear map (matrix acting on the ambient space).
    pub fn image(&self, map: &RatMatrix) -> Lattice {
        Lattice::from_generators(&(map * &self.basis))
    }

    /// `{x ∈ self : map(x) ∈ target}`.
    pub fn preimage_in(&self, map: &RatMatrix, target: &Lattice) -> Lattice {
        // Solve map·B·c = T·y over the integers in (c, y), keep c.
        let r = self.rank();
        let lhs = &(map * &self.basis);
        let system = lhs.hstack(&-target.basis());
        let (_, int_system) = system.clear_denominators();
        let ker = integer_kernel(&int_system);
        let idx: Vec<usize> = (0..r).collect();
        let coords = ker.select_rows(&idx).to_rat();
        Lattice::from_generators(&(&self.basis * &coords))
    }

    /// `{x ∈ self : rows(x) ∈ Z}` for a rational matrix of linear forms.
    pub fn integral_preimage(&self, forms: &RatMatrix) -> Lattice {
        self.preimage_in(forms, &Lattice::standard(forms.rows()))
    }

    /// `{x ∈ Q^n : map(x) ∈ target}` for an injective `map`.
    pub fn pullback(map: &RatMatrix, target: &Lattice) -> Result<Lattice> {
        if map.rank() != map.cols() {
            return Err(Error::Domain("pullback requires an injective map".into()));
        }
        // target ∩ image(map), then invert map on its image
        let image_annihilator = map.transpose().nullspace().transpose();
        let inside = kernel_lattice(&image_annihilator, target);
        let pre = map
            .solve(inside.basis())
            .expect("vectors of the image have preimages");
        Ok(Lattice::from_generators(&pre))
    }
}

/// The lattice `L ∩ span(S)` for the columns of `s`.
pub fn saturate(s: &RatMatrix, l: &Lattice) -> Result<Lattice> {
    if s.rows() != l.ambient_dim() {
        return Err(Error::Domain("ambient dimension mismatch".into()));
    }
    if l.span_coordinates_of(s).is_none() {
        return Err(Error::Domain(
            "generators do not lie in the span of the lattice".into(),
        ));
    }
    // span(S) is the common zero set of its annihilator
    let annihilator = s.transpose().nullspace().transpose();
    Ok(kernel_lattice(&annihilator, l))
}

/// `{x ∈ L : f(x) = 0}`, always saturated in `L`.
pub fn kernel_lattice(f: &RatMatrix, l: &Lattice) -> Lattice {
    assert_eq!(f.cols(), l.ambient_dim(), "map and lattice dimensions differ");
    let restricted = f * l.basis();
    let (_, int_restricted) = restricted.clear_denominators();
    let ker = integer_kernel(&int_restricted);
    Lattice::from_generators(&(l.basis() * &ker.to_rat()))
}

/// `[Lp : L]` for `L ⊆ Lp` of equal rational span.
pub fn index(l: &Lattice, lp: &Lattice) -> Result<Int> {
    if l.ambient_dim() != lp.ambient_dim() || l.rank() != lp.rank() {
        return Err(Error::Domain("lattices span different subspaces".into()));
    }
    let coords = lp
        .span_coordinates_of(l.basis())
        .ok_or_else(|| Error::Domain("lattices span different subspaces".into()))?;
    let int_coords = coords
        .to_int()
        .ok_or_else(|| Error::Domain("first lattice is not contained in the second".into()))?;
    if int_coords.rows() == 0 {
        return Ok(Int::one());
    }
    let det = int_coords.det();
    if det.is_zero() {
        return Err(Error::Domain("lattices span different subspaces".into()));
    }
    Ok(det.abs())
}

/// `|det|` of the Gram-type integer matrix, for orders of finite groups.
pub fn abs_det(m: &IntMatrix) -> Int {
    if m.rows() == 0 {
        Int::one()
    } else {
        m.det().abs()
    }
}
