//! Homology of cyclic unramified covers of surfaces, built from a ribbon graph
//! with voltages in `Z/m`.
//!
//! The derived graph has vertex `(v, s)` at index `v·m + s` and edge `(e, s)`
//! at index `e·m + s`, running from `(tail e, s)` to `(head e, s + volt(e))`.
//! The deck transformation `σ` shifts sheets by `+1`.

mod homology;
mod prym;
mod ribbon;

pub use homology::{face_boundary, homology_with_form, intersection, surface_homology, SurfaceHomology};
pub use prym::{
    birational_predicate, classify_mti_k, eta_class, ker_mu_basis, norm_component_group,
    prym_sublattice, verify_kernel_identification, ComponentIndex, KerMuBasis,
    KernelIdentification, LabeledSubgroup,
};
pub use ribbon::{flip, head, surface_ribbon, tail, RibbonGraph, VoltageAssignment};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlin::{Int, IntMatrix, RatMatrix};
use crate::pollat::{LatticeMap, PolarizedLattice};

/// Homology data of an `m`-sheeted cyclic unramified cover `π: N → N_0`.
#[derive(Clone, Debug)]
pub struct CoverHomology {
    base_ribbon: RibbonGraph,
    voltages: VoltageAssignment,
    total_ribbon: RibbonGraph,
    base: SurfaceHomology,
    total: SurfaceHomology,
    sigma: LatticeMap,
    pushforward: LatticeMap,
    transfer: LatticeMap,
    /// Voltage accumulated along each basis cycle of the base, mod m.
    monodromy: Vec<u64>,
}

impl CoverHomology {
    pub fn m(&self) -> u64 {
        self.voltages.modulus()
    }

    pub fn base_ribbon(&self) -> &RibbonGraph {
        &self.base_ribbon
    }

    pub fn voltages(&self) -> &VoltageAssignment {
        &self.voltages
    }

    pub fn total_ribbon(&self) -> &RibbonGraph {
        &self.total_ribbon
    }

    pub fn base(&self) -> &PolarizedLattice {
        &self.base.polarized
    }

    pub fn total(&self) -> &PolarizedLattice {
        &self.total.polarized
    }

    pub fn base_genus(&self) -> usize {
        self.base.genus()
    }

    /// Genus of the cover read from the Euler characteristic of the derived ribbon graph.
    pub fn total_genus(&self) -> usize {
        self.total_ribbon.genus().expect("certified at construction")
    }

    /// Deck action `σ_*`.
    pub fn sigma(&self) -> &LatticeMap {
        &self.sigma
    }

    /// `π_*`, realizing the norm map.
    pub fn pushforward(&self) -> &LatticeMap {
        &self.pushforward
    }

    /// `π^*`, the sum of lifts.
    pub fn transfer(&self) -> &LatticeMap {
        &self.transfer
    }

    pub fn monodromy(&self) -> &[u64] {
        &self.monodromy
    }
}

fn shift(x: u64, by: u64, m: u64) -> u64 {
    (x + by) % m
}

fn derived_ribbon(r: &RibbonGraph, v: &VoltageAssignment) -> Result<RibbonGraph> {
    let m = v.modulus();
    let mu = m as usize;
    let mut rotations = Vec::with_capacity(r.num_vertices() * mu);
    for rot in r.rotations() {
        for s in 0..m {
            let lifted = rot
                .iter()
                .map(|&h| {
                    let e = h / 2;
                    if h % 2 == 0 {
                        tail(e * mu + s as usize)
                    } else {
                        // the head of (e, s') lands on sheet s' + volt(e)
                        let s0 = shift(s, m - v.values()[e], m);
                        head(e * mu + s0 as usize)
                    }
                })
                .collect();
            rotations.push(lifted);
        }
    }
    RibbonGraph::new(rotations, r.num_edges() * mu)
}

fn check_unramified(r: &RibbonGraph, v: &VoltageAssignment) -> Result<()> {
    let m = v.modulus();
    for (i, face) in r.faces().iter().enumerate() {
        let total = face.iter().fold(0u64, |acc, &h| shift(acc, v.along(h), m));
        if total != 0 {
            return Err(Error::Ramified(format!(
                "face {i} carries voltage {total} mod {m}"
            )));
        }
    }
    Ok(())
}

fn ident(identity: &str, ok: bool, detail: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::certification(identity, detail))
    }
}

/// Builds the cover and certifies genus, deck-group and norm/transfer identities.
pub fn cyclic_cover(r: &RibbonGraph, v: &VoltageAssignment) -> Result<CoverHomology> {
    let m = v.modulus();
    if v.values().len() != r.num_edges() {
        return Err(Error::Domain("one voltage per edge is required".into()));
    }
    if !r.is_connected() {
        return Err(Error::Domain("base ribbon graph is disconnected".into()));
    }
    if !v.generates() {
        return Err(Error::DisconnectedCover(format!(
            "voltages {:?} do not generate Z/{m}",
            v.values()
        )));
    }
    check_unramified(r, v)?;
    let total_ribbon = derived_ribbon(r, v)?;
    if !total_ribbon.is_connected() {
        return Err(Error::DisconnectedCover("derived graph is disconnected".into()));
    }
    let base = surface_homology(r)?;
    let total = surface_homology(&total_ribbon)?;
    let (g, gp) = (base.genus() as u64, total.genus() as u64);
    ident(
        "g' = mg − m + 1",
        gp + m == m * g + 1,
        format!("g = {g}, m = {m}, g' = {gp}"),
    )?;

    let mu = m as usize;
    let (e0, e1) = (r.num_edges(), total_ribbon.num_edges());
    let one = |b: bool| if b { Int::from(1) } else { Int::zero() };
    let project = IntMatrix::from_fn(e0, e1, |e, f| one(f / mu == e));
    let lift = IntMatrix::from_fn(e1, e0, |f, e| one(f / mu == e));
    let deck = IntMatrix::from_fn(e1, e1, |f, f0| {
        one(f0 / mu == f / mu && (f0 % mu + 1) % mu == f % mu)
    });
    let to_map = |mat: IntMatrix, src: &SurfaceHomology, dst: &SurfaceHomology| {
        LatticeMap::new(
            mat.to_rat(),
            src.polarized.lattice().clone(),
            dst.polarized.lattice().clone(),
        )
    };
    let sigma = to_map(SurfaceHomology::induced(&total, &deck, &total), &total, &total)?;
    let pushforward = to_map(SurfaceHomology::induced(&total, &project, &base), &total, &base)?;
    let transfer = to_map(SurfaceHomology::induced(&base, &lift, &total), &base, &total)?;

    let volt_row = IntMatrix::from_fn(1, e0, |_, e| Int::from(v.values()[e]));
    let monodromy = (&volt_row * &base.chain_basis)
        .row(0)
        .iter()
        .map(|x| {
            let r = x % Int::from(m);
            let r = if r < Int::zero() { r + Int::from(m) } else { r };
            u64::try_from(r).expect("reduced mod m")
        })
        .collect();

    let cover = CoverHomology {
        base_ribbon: r.clone(),
        voltages: v.clone(),
        total_ribbon,
        base,
        total,
        sigma,
        pushforward,
        transfer,
        monodromy,
    };
    certify_cover(&cover)?;
    Ok(cover)
}

/// The cover of `surface_ribbon(g)` with voltage 1 on `a_1` and 0 elsewhere.
pub fn standard_cover(g: usize, m: u64) -> Result<CoverHomology> {
    let r = surface_ribbon(g)?;
    let v = VoltageAssignment::standard(r.num_edges(), m)?;
    cyclic_cover(&r, &v)
}

fn certify_cover(c: &CoverHomology) -> Result<()> {
    let m = c.m();
    let n = c.total().ambient_dim();
    let n0 = c.base().ambient_dim();
    let s = c.sigma.matrix();
    let e = c.total().form();
    ident("σ symplectic", &(&s.transpose() * e) * s == *e, "σᵀEσ ≠ E")?;
    ident("σ^m = id", s.pow(m as u32) == RatMatrix::identity(n), "σ^m ≠ id")?;
    if m > 1 && c.base_genus() > 1 {
        ident("σ ≠ id", *s != RatMatrix::identity(n), "σ acts trivially")?;
    }
    let push = c.pushforward.matrix();
    let pull = c.transfer.matrix();
    let mr = crate::intlin::Rat::from_integer(Int::from(m));
    ident(
        "π_*π^* = m·id",
        push * pull == RatMatrix::identity(n0).scale(&mr),
        "norm of transfer is not m",
    )?;
    let mut orbit_sum = RatMatrix::zeros(n, n);
    let mut power = RatMatrix::identity(n);
    for _ in 0..m {
        orbit_sum = &orbit_sum + &power;
        power = &power * s;
    }
    ident("π^*π_* = Σσ^i", pull * push == orbit_sum, "transfer of norm is not the orbit sum")?;
    // π^* is adjoint to π_*: E_N(π^* x, y) = E_0(x, π_* y)
    let e0 = c.base().form();
    ident(
        "π^* adjoint to π_*",
        &pull.transpose() * e == e0 * push,
        "transfer is not the adjoint of the norm",
    )
}
