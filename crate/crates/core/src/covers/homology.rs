//! First homology of the surface of a ribbon graph, with its intersection form.
//!
//! Cycles are chains in `Z^E`. The fundamental cycles of a BFS spanning tree
//! give a basis of the cycle space; `H_1` is its quotient by face boundaries,
//! put in Smith coordinates so that `H_1 = Z^{2g}` exactly.

use num_traits::{One, Zero};

use super::ribbon::{head, tail, RibbonGraph};
use crate::error::{Error, Result};
use crate::intlin::{smith_normal_form, Int, IntMatrix, Lattice, Rat, RatMatrix};
use crate::pollat::PolarizedLattice;

/// `H_1` of a ribbon surface together with chain-level data.
#[derive(Clone, Debug)]
pub struct SurfaceHomology {
    pub polarized: PolarizedLattice,
    /// Columns are edge chains representing the basis of `H_1`.
    pub chain_basis: IntMatrix,
    /// Sends an edge chain that is a cycle to its `H_1` coordinates.
    pub coord_map: IntMatrix,
}

impl SurfaceHomology {
    pub fn genus(&self) -> usize {
        self.polarized.rank() / 2
    }

    /// `H_1` coordinates of a cycle.
    pub fn coords_of_cycle(&self, chain: &[Int]) -> Vec<Int> {
        self.coord_map.mul_vec(chain)
    }

    /// Matrix in `H_1` coordinates of a chain map given on edges,
    /// `target.coord_map · edge_map · source.chain_basis`.
    pub fn induced(source: &SurfaceHomology, edge_map: &IntMatrix, target: &SurfaceHomology) -> IntMatrix {
        &(&target.coord_map * edge_map) * &source.chain_basis
    }
}

/// Algebraic intersection number of two cycles of a ribbon graph.
///
/// At each vertex, chains are pushed slightly off in the direction given by
/// the rotation; `prefix[h]` is the flux of `c` through the half-edges that
/// precede `h` at its vertex.
pub fn intersection(r: &RibbonGraph, c: &[Int], d: &[Int]) -> Int {
    let mut prefix = vec![Int::zero(); 2 * r.num_edges()];
    for rot in r.rotations() {
        let mut acc = Int::zero();
        for &h in rot {
            prefix[h] = acc.clone();
            let ce = &c[h / 2];
            if h % 2 == 0 {
                acc -= ce;
            } else {
                acc += ce;
            }
        }
    }
    let mut total = Int::zero();
    for e in 0..r.num_edges() {
        if d[e].is_zero() {
            continue;
        }
        let local = &prefix[head(e)] - &prefix[tail(e)] + &c[e];
        total += &d[e] * local;
    }
    total
}

/// Boundary chain of a face: `+e` when it leaves through `e`'s tail, `−e` otherwise.
pub fn face_boundary(num_edges: usize, face: &[usize]) -> Vec<Int> {
    let mut chain = vec![Int::zero(); num_edges];
    for &h in face {
        if h % 2 == 0 {
            chain[h / 2] += 1;
        } else {
            chain[h / 2] -= 1;
        }
    }
    chain
}

struct CycleBasis {
    /// `E × N`, fundamental cycles as columns.
    gamma: IntMatrix,
    /// Non-tree edges in increasing order; a cycle's coordinates are its values there.
    non_tree: Vec<usize>,
}

fn cycle_basis(r: &RibbonGraph) -> CycleBasis {
    let n_e = r.num_edges();
    let vertex_of = r.vertex_of();
    let ends: Vec<(usize, usize)> = (0..n_e)
        .map(|e| (vertex_of[tail(e)], vertex_of[head(e)]))
        .collect();
    // path[v]: chain from vertex 0 to v along the tree
    let mut path: Vec<Option<Vec<Int>>> = vec![None; r.num_vertices()];
    let mut in_tree = vec![false; n_e];
    path[0] = Some(vec![Int::zero(); n_e]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for e in 0..n_e {
            let (a, b) = ends[e];
            let (other, sign) = if a == v && path[b].is_none() {
                (b, 1)
            } else if b == v && path[a].is_none() {
                (a, -1)
            } else {
                continue;
            };
            let mut p = path[v].clone().expect("visited");
            p[e] += sign;
            path[other] = Some(p);
            in_tree[e] = true;
            queue.push_back(other);
        }
    }
    let non_tree: Vec<usize> = (0..n_e).filter(|&e| !in_tree[e]).collect();
    let columns: Vec<Vec<Int>> = non_tree
        .iter()
        .map(|&e| {
            let (a, b) = ends[e];
            let pa = path[a].as_ref().expect("connected");
            let pb = path[b].as_ref().expect("connected");
            let mut z: Vec<Int> = pa.iter().zip(pb).map(|(x, y)| x - y).collect();
            z[e] += 1;
            z
        })
        .collect();
    CycleBasis {
        gamma: IntMatrix::from_columns(n_e, &columns),
        non_tree,
    }
}

fn int_inverse(u: &IntMatrix) -> IntMatrix {
    u.to_rat()
        .inverse()
        .and_then(|inv| inv.to_int())
        .expect("Smith transforms are unimodular")
}

/// `H_1` of the ribbon surface with bases and coordinate maps.
pub fn surface_homology(r: &RibbonGraph) -> Result<SurfaceHomology> {
    if !r.is_connected() {
        return Err(Error::Domain("ribbon graph is disconnected".into()));
    }
    let genus = r.genus()?;
    let n_e = r.num_edges();
    let basis = cycle_basis(r);
    let n = basis.non_tree.len();
    let restrict = IntMatrix::from_fn(n, n_e, |i, e| {
        if basis.non_tree[i] == e {
            Int::one()
        } else {
            Int::zero()
        }
    });
    let faces = r.faces();
    let boundaries: Vec<Vec<Int>> = faces.iter().map(|f| face_boundary(n_e, f)).collect();
    let face_chains = IntMatrix::from_columns(n_e, &boundaries);
    let face_coords = &restrict * &face_chains;
    let smith = smith_normal_form(&face_coords);
    let rank = smith.rank();
    if smith.diagonal().iter().take(rank).any(|d| !d.is_one()) || n - rank != 2 * genus {
        return Err(Error::certification(
            "H_1 free of rank 2g",
            format!("cycle rank {n}, boundary rank {rank}, genus {genus}"),
        ));
    }
    let keep: Vec<usize> = (rank..n).collect();
    let coord_map = &smith.u.select_rows(&keep) * &restrict;
    let chain_basis = &basis.gamma * &int_inverse(&smith.u).select_columns(&keep);

    let cols = chain_basis.columns();
    let form = RatMatrix::from_fn(2 * genus, 2 * genus, |i, j| {
        Rat::from_integer(intersection(r, &cols[i], &cols[j]))
    });
    // the form must descend: face boundaries pair trivially with every cycle
    for b in &boundaries {
        if cols.iter().any(|c| !intersection(r, b, c).is_zero()) {
            return Err(Error::certification(
                "intersection form descends to H_1",
                "a face boundary has nonzero intersection with a cycle",
            ));
        }
    }
    let polarized = PolarizedLattice::new(Lattice::standard(2 * genus), form)?;
    if !polarized.is_principal() {
        return Err(Error::certification(
            "intersection form is unimodular",
            "the surface form has nontrivial elementary divisors",
        ));
    }
    Ok(SurfaceHomology {
        polarized,
        chain_basis,
        coord_map,
    })
}

/// `H_1` of the ribbon surface with its intersection form, certified principal.
pub fn homology_with_form(r: &RibbonGraph) -> Result<PolarizedLattice> {
    surface_homology(r).map(|h| h.polarized)
}
