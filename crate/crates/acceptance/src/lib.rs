//! Brute-force oracles used by the acceptance suite. Nothing here calls the
//! library's group or pairing code; elements are plain integer tuples.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use ppav_lattice::finquot::FiniteQuotient;
use ppav_lattice::intlin::Rat;

/// `(Z/m)^{2g}` with `⟨x, y⟩ = Σ x_i y_{g+i} − x_{g+i} y_i mod m`, elements
/// encoded as base-`m` integers.
pub struct Torsion {
    pub g: usize,
    pub m: u32,
}

impl Torsion {
    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn size(&self) -> u32 {
        self.m.pow(self.dim() as u32)
    }

    pub fn decode(&self, mut x: u32) -> Vec<u32> {
        (0..self.dim())
            .map(|_| {
                let c = x % self.m;
                x /= self.m;
                c
            })
            .collect()
    }

    pub fn encode(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, c| acc * self.m + c % self.m)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (va, vb) = (self.decode(a), self.decode(b));
        let s: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
        self.encode(&s)
    }

    pub fn pairing(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.decode(a), self.decode(b));
        let g = self.g;
        let m = self.m as i64;
        let mut acc = 0i64;
        for i in 0..g {
            acc += x[i] as i64 * y[g + i] as i64 - x[g + i] as i64 * y[i] as i64;
        }
        acc.rem_euclid(m) as u32
    }

    fn close(&self, set: &BTreeSet<u32>, x: u32) -> BTreeSet<u32> {
        let mut out = set.clone();
        let mut mult = x;
        loop {
            for &s in set {
                out.insert(self.add(s, mult));
            }
            if mult == 0 {
                return out;
            }
            mult = self.add(mult, x);
        }
    }

    pub fn all_subgroups(&self) -> BTreeSet<BTreeSet<u32>> {
        let mut seen = BTreeSet::new();
        let zero = BTreeSet::from([0u32]);
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(s) = frontier.pop() {
            for x in 0..self.size() {
                if !s.contains(&x) {
                    let t = self.close(&s, x);
                    if seen.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
        }
        seen
    }

    /// Subgroups equal to their own orthogonal.
    pub fn lagrangians(&self) -> BTreeSet<BTreeSet<u32>> {
        self.all_subgroups()
            .into_iter()
            .filter(|s| {
                let perp: BTreeSet<u32> = (0..self.size())
                    .filter(|&x| s.iter().all(|&y| self.pairing(x, y) == 0))
                    .collect();
                perp == *s
            })
            .collect()
    }

    /// Elements of a subgroup of `(1/m)Z^{2g} / Z^{2g}` given by its upper lattice.
    pub fn elements_of(&self, k: &FiniteQuotient) -> BTreeSet<u32> {
        let m = Rat::from_integer(BigInt::from(self.m));
        let mut set = BTreeSet::from([0u32]);
        for col in k.upper().basis_vectors() {
            let v: Vec<u32> = col
                .iter()
                .map(|x| {
                    let y = x * &m;
                    assert!(y.is_integer(), "K is not m-torsion");
                    y.to_integer().to_i64().unwrap().rem_euclid(self.m as i64) as u32
                })
                .collect();
            set = self.close(&set, self.encode(&v));
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // subgroups of (Z/2)^2: trivial, three lines, whole
        assert_eq!(Torsion { g: 1, m: 2 }.all_subgroups().len(), 5);
        assert_eq!(Torsion { g: 1, m: 2 }.lagrangians().len(), 3);
        assert_eq!(Torsion { g: 1, m: 3 }.lagrangians().len(), 4);
        // subgroups of Z/4 × Z/4
        assert_eq!(Torsion { g: 1, m: 4 }.all_subgroups().len(), 15);
    }

    #[test]
    fn pairing_is_alternating() {
        let t = Torsion { g: 2, m: 3 };
        for a in 0..t.size() {
            assert_eq!(t.pairing(a, a), 0);
            for b in [1, 5, 40] {
                assert_eq!((t.pairing(a, b) + t.pairing(b, a)) % 3, 0);
            }
        }
    }
}
