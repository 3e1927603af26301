//! JSON forms of lattices, maps and cover fixtures. Every integer and rational
//! is written as a decimal string (`"-3"`, `"5/2"`), so round trips are exact.

use serde::{Deserialize, Serialize};

use crate::comppair::{IdentityCheck, WeltersOutput};
use crate::covers::{cyclic_cover, prym_sublattice, CoverHomology, RibbonGraph, VoltageAssignment};
use crate::error::{Error, Result};
use crate::intlin::{Lattice, Rat, RatMatrix};
use crate::pollat::{LatticeMap, PolarizedLattice};

pub const SCHEMA: &str = "ppav-lattice/1";

pub fn format_rat(x: &Rat) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| Error::Domain(format!("`{s}` is not an exact rational")))
}

/// A matrix as rows of decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &RatMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|r| m.row(r).iter().map(format_rat).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<RatMatrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Domain("matrix entries do not match its shape".into()));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix::from_rows(self.cols, rows))
    }
}

/// A lattice by its canonical basis (columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub ambient_dim: usize,
    pub basis: MatrixJson,
}

impl LatticeJson {
    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeJson {
            ambient_dim: l.ambient_dim(),
            basis: MatrixJson::from_matrix(l.basis()),
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let b = self.basis.to_matrix()?;
        if b.rows() != self.ambient_dim {
            return Err(Error::Domain("basis rows differ from ambient dimension".into()));
        }
        let l = Lattice::from_generators(&b);
        if l.rank() != b.cols() {
            return Err(Error::Domain("basis vectors are dependent".into()));
        }
        Ok(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizedJson {
    pub ambient_dim: usize,
    pub basis: MatrixJson,
    pub form: MatrixJson,
}

impl PolarizedJson {
    pub fn from_polarized(p: &PolarizedLattice) -> Self {
        PolarizedJson {
            ambient_dim: p.ambient_dim(),
            basis: MatrixJson::from_matrix(p.lattice().basis()),
            form: MatrixJson::from_matrix(p.form()),
        }
    }

    pub fn to_polarized(&self) -> Result<PolarizedLattice> {
        let lattice = LatticeJson {
            ambient_dim: self.ambient_dim,
            basis: self.basis.clone(),
        }
        .to_lattice()?;
        PolarizedLattice::new(lattice, self.form.to_matrix()?)
    }
}

pub fn polarized_to_json(p: &PolarizedLattice) -> String {
    serde_json::to_string(&PolarizedJson::from_polarized(p)).expect("plain data serializes")
}

pub fn polarized_from_json(s: &str) -> Result<PolarizedLattice> {
    let j: PolarizedJson =
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("malformed lattice JSON: {e}")))?;
    j.to_polarized()
}

/// A cover with all derived matrices, enough to rebuild and re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFixture {
    pub schema: String,
    pub g: usize,
    pub m: u64,
    pub ribbon: RibbonGraph,
    pub voltages: VoltageAssignment,
    pub total_genus: usize,
    pub base: PolarizedJson,
    pub total: PolarizedJson,
    pub sigma: MatrixJson,
    pub pushforward: MatrixJson,
    pub transfer: MatrixJson,
    pub sub_a: LatticeJson,
    pub sub_b: LatticeJson,
}

impl CoverFixture {
    pub fn from_cover(c: &CoverHomology) -> Self {
        let (sub_a, sub_b) = prym_sublattice(c);
        CoverFixture {
            schema: SCHEMA.to_string(),
            g: c.base_genus(),
            m: c.m(),
            ribbon: c.base_ribbon().clone(),
            voltages: c.voltages().clone(),
            total_genus: c.total_genus(),
            base: PolarizedJson::from_polarized(c.base()),
            total: PolarizedJson::from_polarized(c.total()),
            sigma: MatrixJson::from_matrix(c.sigma().matrix()),
            pushforward: MatrixJson::from_matrix(c.pushforward().matrix()),
            transfer: MatrixJson::from_matrix(c.transfer().matrix()),
            sub_a: LatticeJson::from_lattice(&sub_a),
            sub_b: LatticeJson::from_lattice(&sub_b),
        }
    }

    /// Rebuilds the cover from ribbon and voltages and checks every stored matrix.
    pub fn rebuild(&self) -> Result<CoverHomology> {
        if self.schema != SCHEMA {
            return Err(Error::Domain(format!("unknown schema `{}`", self.schema)));
        }
        let ribbon = RibbonGraph::new(
            self.ribbon.rotations().to_vec(),
            self.ribbon.num_edges(),
        )?;
        let voltages = VoltageAssignment::new(
            self.voltages.modulus(),
            self.voltages.values().iter().map(|&v| v as i64).collect(),
        )?;
        if voltages.modulus() != self.m {
            return Err(Error::Domain("voltage modulus differs from m".into()));
        }
        let cover = cyclic_cover(&ribbon, &voltages)?;
        let rebuilt = CoverFixture::from_cover(&cover);
        if rebuilt != *self {
            return Err(Error::Domain(
                "stored matrices do not match the rebuilt cover".into(),
            ));
        }
        Ok(cover)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("malformed fixture JSON: {e}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MapJson {
    pub matrix: MatrixJson,
}

impl MapJson {
    pub fn from_map(f: &LatticeMap) -> Self {
        MapJson {
            matrix: MatrixJson::from_matrix(f.matrix()),
        }
    }
}

/// Certification report of a Welters construction.
#[derive(Clone, Debug, Serialize)]
pub struct WeltersReport {
    pub m: u64,
    pub ambient: PolarizedJson,
    pub sub_b: LatticeJson,
    pub sub_a: LatticeJson,
    pub k_upper: LatticeJson,
    pub x: PolarizedJson,
    pub u: MapJson,
    pub u_t: MapJson,
    pub j: MapJson,
    pub polarization_types: Vec<(String, String)>,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

impl WeltersReport {
    pub fn new(out: &WeltersOutput, k_upper: &Lattice) -> Self {
        WeltersReport {
            m: out.m,
            ambient: PolarizedJson::from_polarized(out.pair.ambient()),
            sub_b: LatticeJson::from_lattice(out.pair.sub_b()),
            sub_a: LatticeJson::from_lattice(out.pair.sub_a()),
            k_upper: LatticeJson::from_lattice(k_upper),
            x: PolarizedJson::from_polarized(&out.x),
            u: MapJson::from_map(&out.u),
            u_t: MapJson::from_map(&out.u_t),
            j: MapJson::from_map(&out.j),
            polarization_types: out.stage_types.clone(),
            checks: out.checks.clone(),
            passed: out.checks.iter().all(|c| c.passed),
        }
    }
}
