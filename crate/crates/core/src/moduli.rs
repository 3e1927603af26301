//! Dimension and genus bookkeeping for the loci of m-minimal ppavs.
//!
//! `r` is the degree of the reduced branch divisor of an `m`-sheeted cyclic
//! cover `N → N_0` of a genus-`g` curve.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::comppair::PresetKind;
use crate::error::{Error, Result};

/// An exact integer, or a value the theory leaves open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Known(i64),
    Unknown,
}

impl Bound {
    pub fn known(&self) -> Option<i64> {
        match self {
            Bound::Known(v) => Some(*v),
            Bound::Unknown => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Known(v) => write!(f, "{v}"),
            Bound::Unknown => f.write_str("unknown"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Known(v) => s.serialize_i64(*v),
            Bound::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocusReport {
    pub g: i64,
    pub m: i64,
    pub r: i64,
    pub dim_ag: i64,
    pub dim_mg: i64,
    pub dim_r_gmr: i64,
    pub dim_jacobian_quotient_locus: i64,
    pub dim_inverse_prym_locus: i64,
    pub dim_prym_quotient_bound: i64,
    pub prym_target_dim_index: i64,
    pub cover_genus: Bound,
    pub prym_dim: i64,
    pub genus_lower: i64,
    pub genus_welters_upper: Bound,
    pub genus_family_lower_bound: i64,
}

impl LocusReport {
    /// `(name, value)` rows in field order.
    pub fn rows(&self) -> Vec<(&'static str, String)> {
        vec![
            ("g", self.g.to_string()),
            ("m", self.m.to_string()),
            ("r", self.r.to_string()),
            ("dim_ag", self.dim_ag.to_string()),
            ("dim_mg", self.dim_mg.to_string()),
            ("dim_r_gmr", self.dim_r_gmr.to_string()),
            ("dim_jacobian_quotient_locus", self.dim_jacobian_quotient_locus.to_string()),
            ("dim_inverse_prym_locus", self.dim_inverse_prym_locus.to_string()),
            ("dim_prym_quotient_bound", self.dim_prym_quotient_bound.to_string()),
            ("prym_target_dim_index", self.prym_target_dim_index.to_string()),
            ("cover_genus", self.cover_genus.to_string()),
            ("prym_dim", self.prym_dim.to_string()),
            ("genus_lower", self.genus_lower.to_string()),
            ("genus_welters_upper", self.genus_welters_upper.to_string()),
            ("genus_family_lower_bound", self.genus_family_lower_bound.to_string()),
        ]
    }

    /// Two aligned columns, one field per line.
    pub fn to_text_table(&self) -> String {
        let rows = self.rows();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        out
    }
}

fn check_gm(g: i64, m: i64) -> Result<()> {
    if g < 2 {
        return Err(Error::Domain(format!("genus {g} < 2")));
    }
    if m < 1 {
        return Err(Error::Domain(format!("degree {m} < 1")));
    }
    Ok(())
}

/// Genus of an `m`-sheeted cover branched over `r` points, from
/// `2g' − 2 = m(2g − 2) + r`; `None` when that is not an integer.
pub fn riemann_hurwitz_genus(g: i64, m: i64, r: i64) -> Option<i64> {
    let twice = m * (2 * g - 2) + r + 2;
    (twice % 2 == 0).then_some(twice / 2)
}

pub fn locus_dimensions(g: i64, m: i64, r: i64) -> Result<LocusReport> {
    check_gm(g, m)?;
    if r < 0 || r % 2 != 0 {
        return Err(Error::Domain(format!("branch degree r = {r} must be even and nonnegative")));
    }
    let (lower, upper, family) = genus_bounds(g, m)?;
    let cover_genus = riemann_hurwitz_genus(g, m, r).map_or(Bound::Unknown, Bound::Known);
    Ok(LocusReport {
        g,
        m,
        r,
        dim_ag: g * (g + 1) / 2,
        dim_mg: 3 * g - 3,
        dim_r_gmr: 3 * g - 3 + r,
        // the quotient map from the Jacobian locus is étale
        dim_jacobian_quotient_locus: 3 * g - 3,
        dim_inverse_prym_locus: 3 * g - 3,
        dim_prym_quotient_bound: 2 * (g - 1 + m) - 3,
        prym_target_dim_index: m * (g - 1) + 1 + r / 2,
        cover_genus,
        prym_dim: (m - 1) * (g - 1) + r / 2,
        genus_lower: lower,
        genus_welters_upper: upper,
        genus_family_lower_bound: family,
    })
}

/// `(lower, upper, family)` bounds on the genus of an m-minimal curve in a
/// g-dimensional ppav.
pub fn genus_bounds(g: i64, m: i64) -> Result<(i64, Bound, i64)> {
    check_gm(g, m)?;
    let upper = match m {
        1 => Bound::Known(g),
        2 => Bound::Known(2 * g + 1),
        _ => Bound::Unknown,
    };
    Ok((g, upper, m * g - m + 1))
}

/// Dimension of each m = 2 family of g-dimensional ppavs.
///
/// Quotients of Jacobians and of pulled-back Jacobians move with a genus-g
/// curve; Pryms of unramified double covers of genus `g + 1` curves move in
/// a `3(g + 1) − 3` dimensional family.
pub fn m2_family_dimensions(g: i64) -> Result<Vec<(PresetKind, i64)>> {
    check_gm(g, 2)?;
    Ok(vec![
        (PresetKind::JacobianQuotient, 3 * g - 3),
        (PresetKind::PrymQuotient, 3 * g),
        (PresetKind::PullbackQuotient, 3 * g - 3),
    ])
}

/// Dimension of the 2-minimal locus in `A_g`: the largest family.
pub fn m2_locus_dimension(g: i64) -> Result<i64> {
    Ok(m2_family_dimensions(g)?
        .into_iter()
        .map(|(_, d)| d)
        .max()
        .expect("three families"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(locus_dimensions(5, 2, 0).unwrap().dim_ag, 15);
        let r = locus_dimensions(6, 2, 0).unwrap();
        assert_eq!((r.dim_r_gmr, r.cover_genus), (15, Bound::Known(11)));
        let r = locus_dimensions(2, 3, 0).unwrap();
        assert_eq!(r.cover_genus, Bound::Known(4));
        assert_eq!(r.prym_dim, 2);
        assert_eq!(r.dim_inverse_prym_locus, 3);
        let r = locus_dimensions(5, 2, 0).unwrap();
        assert_eq!((r.dim_r_gmr, r.cover_genus), (12, Bound::Known(9)));
    }

    #[test]
    fn errors() {
        assert!(matches!(locus_dimensions(2, 2, 3), Err(Error::Domain(_))));
        assert!(locus_dimensions(1, 2, 0).is_err());
        assert!(locus_dimensions(2, 0, 0).is_err());
        assert!(genus_bounds(1, 2).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(genus_bounds(4, 1).unwrap(), (4, Bound::Known(4), 4));
        assert_eq!(genus_bounds(4, 2).unwrap(), (4, Bound::Known(9), 7));
        assert_eq!(genus_bounds(4, 3).unwrap(), (4, Bound::Unknown, 10));
    }

    #[test]
    fn ramified_genus() {
        assert_eq!(riemann_hurwitz_genus(2, 2, 2), Some(4));
        assert_eq!(riemann_hurwitz_genus(2, 2, 1), None);
        assert_eq!(locus_dimensions(3, 2, 4).unwrap().cover_genus, Bound::Known(7));
    }

    #[test]
    fn m2_locus() {
        for g in 2..10 {
            assert_eq!(m2_locus_dimension(g).unwrap(), 3 * g);
            assert_eq!(locus_dimensions(g, 2, 0).unwrap().dim_r_gmr, 3 * g - 3);
        }
    }

    #[test]
    fn json_and_table() {
        let r = locus_dimensions(4, 3, 0).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"genus_welters_upper\":\"unknown\""));
        assert!(json.contains("\"dim_ag\":10"));
        let table = r.to_text_table();
        assert_eq!(table.lines().count(), 15);
        assert!(table.contains("cover_genus                  10"));
    }
}
