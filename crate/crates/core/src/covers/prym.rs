use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::CoverHomology;
use crate::error::{Error, Result};
use crate::finquot::{
    enumerate_mti, is_maximal_isotropic, preimage_under_mult, FiniteQuotient, PairingOnQuotient,
    QuotientElement, DEFAULT_BUDGET,
};
use crate::intlin::{kernel_lattice, saturate, Int, Lattice, Rat};
use crate::pollat::ker_mu;

/// `(A, B) = ((ker π_*)_0, saturated π^* Λ_0)`.
pub fn prym_sublattice(cov: &CoverHomology) -> (Lattice, Lattice) {
    let total = cov.total().lattice();
    let sub_a = kernel_lattice(cov.pushforward().matrix(), total);
    let image = cov.transfer().matrix() * cov.base().lattice().basis();
    let sub_b = saturate(&image, total).expect("transfer lands in the total lattice");
    (sub_a, sub_b)
}

/// Assigns to a point of `ker Nm` the component `P_ℓ` containing it.
#[derive(Clone, Debug)]
pub struct ComponentIndex {
    m: u64,
    monodromy: Vec<u64>,
    pushforward: crate::intlin::RatMatrix,
    base: Lattice,
}

impl ComponentIndex {
    /// `ℓ` for a rational point `x` of the total space with `π_* x ∈ Λ_0`.
    pub fn index(&self, x: &[Rat]) -> Result<u64> {
        let y = self.pushforward.mul_vec(x);
        if !self.base.contains_vector(&y) {
            return Err(Error::Domain("point does not lie in ker Nm".into()));
        }
        let m = Int::from(self.m);
        let total = y
            .iter()
            .zip(&self.monodromy)
            .fold(Int::zero(), |acc, (c, w)| acc + c.to_integer() * Int::from(*w));
        Ok(u64::try_from(total.mod_floor(&m)).expect("reduced mod m"))
    }
}

/// `π_0(ker Nm) = Λ_0 / π_*(Λ)` and the component index.
pub fn norm_component_group(cov: &CoverHomology) -> Result<(FiniteQuotient, ComponentIndex)> {
    let base = cov.base().lattice().clone();
    let image = cov.total().lattice().image(cov.pushforward().matrix());
    let group = FiniteQuotient::new(image, base.clone())?;
    let idx = ComponentIndex {
        m: cov.m(),
        monodromy: cov.monodromy().to_vec(),
        pushforward: cov.pushforward().matrix().clone(),
        base,
    };
    Ok((group, idx))
}

/// `ker π^* = (π^*)^{-1}(Λ) / Λ_0`.
fn ker_transfer(cov: &CoverHomology) -> Result<FiniteQuotient> {
    let upper = Lattice::pullback(cov.transfer().matrix(), cov.total().lattice())?;
    FiniteQuotient::new(cov.base().lattice().clone(), upper)
}

/// The `m`-torsion point `η` of the base defining the cover, as the canonical
/// generator of `ker π^*`.
pub fn eta_class(cov: &CoverHomology) -> Result<QuotientElement> {
    if cov.m() < 2 {
        return Err(Error::Domain("η requires m ≥ 2".into()));
    }
    let q = Arc::new(ker_transfer(cov)?);
    if q.invariants() != [Int::from(cov.m())] {
        return Err(Error::certification(
            "ker π^* ≅ Z/m",
            format!("invariants {:?}", q.invariants()),
        ));
    }
    let generator = q.generators()[0].clone();
    q.element(generator)
}

/// A base cycle with monodromy 1.
fn unit_monodromy_cycle(cov: &CoverHomology) -> Result<Vec<Int>> {
    let m = Int::from(cov.m());
    let mut d = Int::zero();
    let mut x = vec![Int::zero(); cov.monodromy().len()];
    for (i, w) in cov.monodromy().iter().enumerate() {
        let w = Int::from(*w);
        let e = Integer::extended_gcd(&d, &w);
        for xi in x.iter_mut() {
            *xi *= &e.x;
        }
        x[i] += &e.y;
        d = e.gcd;
    }
    let inv = Integer::extended_gcd(&d, &m);
    if !inv.gcd.is_one() {
        return Err(Error::certification("monodromy is onto Z/m", format!("gcd {d}")));
    }
    Ok(x.into_iter().map(|xi| (xi * &inv.x).mod_floor(&m)).collect())
}

/// Generators of `ker μ_B` and related data.
#[derive(Clone, Debug)]
pub struct KerMuBasis {
    pub m: u64,
    pub sub_b: Lattice,
    pub group: Arc<FiniteQuotient>,
    pub pairing: PairingOnQuotient,
    pub eta: QuotientElement,
    /// `ξ = π^*(η̃)/m`, so `Nm(ξ) = η̃`.
    pub xi_bar: QuotientElement,
    /// `P_1 = π^*(λ_1)/m` for a base cycle `λ_1` with monodromy 1.
    pub p1: QuotientElement,
}

/// `ξ̄` and `P_1` in `ker μ_B`, certified to generate `(Z/m)^2`.
pub fn ker_mu_basis(cov: &CoverHomology) -> Result<KerMuBasis> {
    let m = cov.m();
    let eta = eta_class(cov)?;
    let (_, sub_b) = prym_sublattice(cov);
    let pol_b = cov.total().restrict(&sub_b)?;
    let (group, pairing) = ker_mu(&pol_b, m)?;
    let group = Arc::new(group);
    let inv_m = Rat::new(Int::one(), Int::from(m));
    let lift = |v: &[Rat]| -> Vec<Rat> {
        cov.transfer()
            .apply(v)
            .into_iter()
            .map(|x| x * &inv_m)
            .collect()
    };
    let xi = lift(eta.representative());
    let lambda1: Vec<Rat> = unit_monodromy_cycle(cov)?
        .into_iter()
        .map(Rat::from_integer)
        .collect();
    let p1 = lift(&lambda1);
    let xi_bar = group.element(xi)?;
    let p1 = group.element(p1)?;
    let mm = Int::from(m);
    if group.invariants() != [mm.clone(), mm.clone()] {
        return Err(Error::certification(
            "ker μ_B ≅ (Z/m)^2",
            format!("invariants {:?}", group.invariants()),
        ));
    }
    let span = group.subgroup_generated(&[
        xi_bar.representative().to_vec(),
        p1.representative().to_vec(),
    ])?;
    if span.order() != &mm * &mm {
        return Err(Error::certification(
            "ξ̄ and P_1 generate ker μ_B",
            format!("they generate a subgroup of order {}", span.order()),
        ));
    }
    Ok(KerMuBasis {
        m,
        sub_b,
        group,
        pairing,
        eta,
        xi_bar,
        p1,
    })
}

/// `K = ⟨a ξ̄ + b P_1⟩` with its label `(a, b)`.
#[derive(Clone, Debug)]
pub struct LabeledSubgroup {
    pub label: (u64, u64),
    pub subgroup: FiniteQuotient,
}

impl LabeledSubgroup {
    pub fn label_string(&self) -> String {
        format!("{}:{}", self.label.0, self.label.1)
    }
}

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// Cyclic m.t.i. subgroups `⟨a ξ̄ + b P_1⟩`, `gcd(a, b, m) = 1`, labelled
/// `(1, 0), (1, 1), …, (1, m − 1), (0, 1)` first. For prime `m` this is the
/// full list and is cross-checked against exhaustive enumeration.
pub fn classify_mti_k(basis: &KerMuBasis) -> Result<Vec<LabeledSubgroup>> {
    let m = basis.m;
    let mut candidates: Vec<(u64, u64)> = (0..m).map(|b| (1, b)).collect();
    candidates.push((0, 1));
    for a in 0..m {
        for b in 0..m {
            if !candidates.contains(&(a, b)) {
                candidates.push((a, b));
            }
        }
    }
    let mut out: Vec<LabeledSubgroup> = Vec::new();
    for (a, b) in candidates {
        if num_integer::gcd(num_integer::gcd(a, b), m) != 1 {
            continue;
        }
        let x = basis.xi_bar.scaled(a as i64).add(&basis.p1.scaled(b as i64));
        let s = x.cyclic_subgroup();
        if out.iter().any(|l| l.subgroup == s) {
            continue;
        }
        if !is_maximal_isotropic(&basis.group, &s, &basis.pairing) {
            return Err(Error::certification(
                "⟨aξ̄ + bP_1⟩ is m.t.i.",
                format!("label ({a}, {b})"),
            ));
        }
        out.push(LabeledSubgroup {
            label: (a, b),
            subgroup: s,
        });
    }
    if is_prime(m) {
        let all = enumerate_mti(&basis.group, &basis.pairing, DEFAULT_BUDGET)?;
        let matches = all.len() == out.len()
            && all.iter().all(|s| out.iter().any(|l| l.subgroup == *s));
        if !matches {
            return Err(Error::certification(
                "classification matches enumeration",
                format!("{} labelled, {} enumerated", out.len(), all.len()),
            ));
        }
    }
    Ok(out)
}

/// True iff `ℓ P_1 ∉ K` for every `ℓ ≢ 0 mod m`.
pub fn birational_predicate(k: &FiniteQuotient, p1: &QuotientElement) -> bool {
    let m = i64::try_from(p1.parent().exponent()).unwrap_or(i64::MAX);
    (1..m).all(|l| !p1.scaled(l).in_subgroup(k))
}

/// Kernel of `f = λ_B ∘ π^*: JN_0 → B̂` over `K`, next to the subgroups it is
/// compared with.
///
/// Since `Nm̄ ∘ f = [m]`, the preimage `[m]^{-1}(Nm̄ K)` equals `f^{-1}(K + ker Nm̄)`
/// with `ker Nm̄ = ⟨P_1⟩`. It coincides with `f^{-1}(K)` only when `P_1 ∈ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelIdentification {
    /// `f^{-1}(K)`, so that `X ≅ JN_0 / kernel`.
    pub kernel: FiniteQuotient,
    /// `f^{-1}(K + ⟨P_1⟩)`.
    pub kernel_with_p1: FiniteQuotient,
    /// `[m]^{-1}(Nm̄ K)`.
    pub norm_preimage: FiniteQuotient,
    /// `[m]^{-1}⟨η⟩`, computed for prime `m` and birational `K`.
    pub eta_preimage: Option<FiniteQuotient>,
}

impl KernelIdentification {
    pub fn order(&self) -> Int {
        self.kernel.order()
    }

    /// `f^{-1}(K) = [m]^{-1}(Nm̄ K)`.
    pub fn norm_form_agrees(&self) -> bool {
        self.kernel == self.norm_preimage
    }

    /// `f^{-1}(K) = [m]^{-1}⟨η⟩`, when applicable.
    pub fn eta_form_agrees(&self) -> Option<bool> {
        self.eta_preimage.as_ref().map(|e| self.kernel == *e)
    }

    /// Both identifications of `f^{-1}(K)` hold.
    pub fn passed(&self) -> bool {
        self.norm_form_agrees() && self.eta_form_agrees().unwrap_or(true)
    }

    /// `f^{-1}(K + ⟨P_1⟩) = [m]^{-1}(Nm̄ K)`, and `= [m]^{-1}⟨η⟩` when applicable.
    pub fn preimage_identity_holds(&self) -> bool {
        self.kernel_with_p1 == self.norm_preimage
            && self
                .eta_preimage
                .as_ref()
                .is_none_or(|e| *e == self.norm_preimage)
    }
}

pub fn verify_kernel_identification(
    cov: &CoverHomology,
    basis: &KerMuBasis,
    k: &FiniteQuotient,
) -> Result<KernelIdentification> {
    if !basis.group.has_subgroup(k) {
        return Err(Error::Domain("K is not a subgroup of ker μ_B".into()));
    }
    let m = cov.m();
    let base = cov.base().lattice();
    let transfer = cov.transfer().matrix();
    let inv_m = Rat::new(Int::one(), Int::from(m));
    let over = |upper: &Lattice| -> Result<FiniteQuotient> {
        FiniteQuotient::new(base.clone(), Lattice::pullback(transfer, upper)?)
    };
    let kernel = over(k.upper())?;
    let kernel_with_p1 = over(&k.upper().with_vectors(&[basis.p1.representative().to_vec()]))?;

    let norm_image = base.sum(&k.upper().image(cov.pushforward().matrix()));
    let norm_preimage = FiniteQuotient::new(base.clone(), norm_image.scale(&inv_m))?;

    let eta_preimage = if is_prime(m) && birational_predicate(k, &basis.p1) {
        let eta_group = FiniteQuotient::new(
            base.clone(),
            base.with_vectors(&[basis.eta.representative().to_vec()]),
        )?;
        Some(preimage_under_mult(&eta_group, m)?)
    } else {
        None
    };
    Ok(KernelIdentification {
        kernel,
        kernel_with_p1,
        norm_preimage,
        eta_preimage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::standard_cover;
    use crate::intlin::int;
    use crate::pollat::polarization_type;

    #[test]
    fn prym_ranks() {
        for (g, m) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let c = standard_cover(g, m).unwrap();
            let (a, b) = prym_sublattice(&c);
            let gp = c.total_genus();
            assert_eq!(a.rank(), 2 * (gp - g));
            assert_eq!(b.rank(), 2 * g);
            let ty = polarization_type(&c.total().restrict(&b).unwrap());
            let mi = Int::from(m);
            assert!(ty.chain().iter().all(|d| mi.is_multiple_of(d)));
        }
        let c = standard_cover(2, 1).unwrap();
        assert_eq!(prym_sublattice(&c).0.rank(), 0);
    }

    #[test]
    fn component_group() {
        for m in 1..=3u64 {
            let c = standard_cover(2, m).unwrap();
            let (q, idx) = norm_component_group(&c).unwrap();
            assert_eq!(q.order(), int(m as i64));
            if m > 1 {
                let kb = ker_mu_basis(&c).unwrap();
                assert_eq!(idx.index(kb.p1.representative()).unwrap(), 1);
                // Nm(ξ) = η̃ is not integral, so ξ is not a point of ker Nm
                assert!(idx.index(kb.xi_bar.representative()).is_err());
            }
        }
    }

    #[test]
    fn eta_is_m_torsion() {
        for m in 2..=4u64 {
            let c = standard_cover(2, m).unwrap();
            let eta = eta_class(&c).unwrap();
            assert_eq!(eta.order(), int(m as i64));
            assert!(eta.scaled(m as i64).is_zero());
        }
        assert!(eta_class(&standard_cover(2, 1).unwrap()).is_err());
    }

    #[test]
    fn ker_mu_is_m_squared() {
        for (g, m) in [(2usize, 2u64), (2, 3), (3, 2), (2, 4)] {
            let kb = ker_mu_basis(&standard_cover(g, m).unwrap()).unwrap();
            assert_eq!(kb.group.invariants(), &[int(m as i64), int(m as i64)]);
            assert_eq!(kb.xi_bar.order(), int(m as i64));
            assert_eq!(kb.p1.order(), int(m as i64));
        }
    }

    #[test]
    fn classification() {
        for (m, count) in [(2u64, 3usize), (3, 4), (4, 6)] {
            let c = standard_cover(2, m).unwrap();
            let kb = ker_mu_basis(&c).unwrap();
            let ks = classify_mti_k(&kb).unwrap();
            assert_eq!(ks.len(), count);
            assert_eq!(ks[0].label, (1, 0));
            assert_eq!(ks[0].subgroup, kb.xi_bar.cyclic_subgroup());
            for l in &ks {
                let birational = birational_predicate(&l.subgroup, &kb.p1);
                if l.label == (0, 1) {
                    assert!(!birational);
                }
                if l.label.0 == 1 {
                    assert!(birational);
                }
            }
        }
    }

    #[test]
    fn kernel_identification_orders() {
        for (g, m) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let c = standard_cover(g, m).unwrap();
            let kb = ker_mu_basis(&c).unwrap();
            let mi = m as i64;
            for l in classify_mti_k(&kb).unwrap() {
                let id = verify_kernel_identification(&c, &kb, &l.subgroup).unwrap();
                let birational = birational_predicate(&l.subgroup, &kb.p1);
                assert!(id.preimage_identity_holds(), "label {:?}", l.label);
                assert_eq!(id.order(), int(mi.pow(2 * g as u32)));
                assert_eq!(id.kernel_with_p1.order(), int(mi.pow(2 * g as u32 + 1)) / if birational { 1 } else { mi });
                assert_eq!(id.eta_preimage.is_some(), birational);
                // f^{-1}(K) = [m]^{-1} Nm̄(K) exactly when P_1 ∈ K
                assert_eq!(id.norm_form_agrees(), !birational);
                assert_eq!(id.passed(), !birational);
            }
        }
    }

    #[test]
    fn deck_fixed_lattice_is_pullback() {
        let c = standard_cover(2, 3).unwrap();
        let n = c.total().ambient_dim();
        let s = c.sigma().matrix();
        let fixed = kernel_lattice(&(s - &crate::intlin::RatMatrix::identity(n)), c.total().lattice());
        assert_eq!(fixed, prym_sublattice(&c).1);
    }
}
