use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A ribbon graph. Edge `e` owns half-edges `2e` (tail) and `2e + 1` (head);
/// each vertex lists its half-edges in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonGraph {
    rotations: Vec<Vec<usize>>,
    num_edges: usize,
}

pub fn tail(e: usize) -> usize {
    2 * e
}

pub fn head(e: usize) -> usize {
    2 * e + 1
}

pub fn flip(h: usize) -> usize {
    h ^ 1
}

impl RibbonGraph {
    /// Validates that every half-edge appears exactly once.
    pub fn new(rotations: Vec<Vec<usize>>, num_edges: usize) -> Result<Self> {
        let mut seen = vec![false; 2 * num_edges];
        for rot in &rotations {
            for &h in rot {
                if h >= seen.len() || seen[h] {
                    return Err(Error::Domain(format!("half-edge {h} is out of range or repeated")));
                }
                seen[h] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Domain("some half-edge is not attached to a vertex".into()));
        }
        Ok(RibbonGraph { rotations, num_edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    /// Vertex carrying each half-edge.
    pub fn vertex_of(&self) -> Vec<usize> {
        let mut out = vec![0; 2 * self.num_edges];
        for (v, rot) in self.rotations.iter().enumerate() {
            for &h in rot {
                out[h] = v;
            }
        }
        out
    }

    /// Half-edge following `h` in the cyclic order at its vertex.
    fn next_map(&self) -> Vec<usize> {
        let mut next = vec![0; 2 * self.num_edges];
        for rot in &self.rotations {
            for (i, &h) in rot.iter().enumerate() {
                next[h] = rot[(i + 1) % rot.len()];
            }
        }
        next
    }

    /// Faces as orbits of `next ∘ flip`, each starting at its smallest half-edge.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let next = self.next_map();
        let mut seen = vec![false; 2 * self.num_edges];
        let mut faces = Vec::new();
        for start in 0..2 * self.num_edges {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(h);
                h = next[flip(h)];
            }
            faces.push(face);
        }
        faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges as i64 + self.faces().len() as i64
    }

    pub fn genus(&self) -> Result<usize> {
        let chi = self.euler_characteristic();
        if chi > 2 || chi % 2 != 0 {
            return Err(Error::Domain(format!("Euler characteristic {chi} is not that of a closed surface")));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    pub fn is_connected(&self) -> bool {
        if self.rotations.is_empty() {
            return false;
        }
        let vertex_of = self.vertex_of();
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for e in 0..self.num_edges {
            let (a, b) = (vertex_of[tail(e)], vertex_of[head(e)]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// One vertex with loops `a_1, b_1, …, a_g, b_g` (edges `2i`, `2i + 1`) whose
/// single face reads `∏ [a_i, b_i]`.
pub fn surface_ribbon(g: usize) -> Result<RibbonGraph> {
    if g == 0 {
        return Err(Error::Unsupported("genus 0 surface".into()));
    }
    let mut rot = Vec::with_capacity(4 * g);
    for i in 0..g {
        let (a, b) = (2 * i, 2 * i + 1);
        rot.extend([tail(a), tail(b), head(a), head(b)]);
    }
    RibbonGraph::new(vec![rot], 2 * g)
}

/// Edge voltages in `Z/m`; traversing an edge backwards negates its voltage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoltageAssignment {
    modulus: u64,
    values: Vec<u64>,
}

impl VoltageAssignment {
    pub fn new(modulus: u64, values: Vec<i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("voltage modulus must be positive".into()));
        }
        let m = modulus as i64;
        let values = values.into_iter().map(|v| v.rem_euclid(m) as u64).collect();
        Ok(VoltageAssignment { modulus, values })
    }

    /// Voltage 1 on the first edge and 0 elsewhere.
    pub fn standard(num_edges: usize, modulus: u64) -> Result<Self> {
        let mut values = vec![0; num_edges];
        if num_edges > 0 {
            values[0] = 1;
        }
        VoltageAssignment::new(modulus, values)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Voltage read when leaving through half-edge `h`.
    pub fn along(&self, h: usize) -> u64 {
        let v = self.values[h / 2];
        if h.is_multiple_of(2) {
            v
        } else {
            (self.modulus - v) % self.modulus
        }
    }

    pub fn generates(&self) -> bool {
        let g = self
            .values
            .iter()
            .fold(self.modulus, |acc, &v| num_integer::gcd(acc, v));
        g == 1
    }
}
