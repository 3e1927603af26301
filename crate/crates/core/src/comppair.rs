//! Complementary pairs `(A, B)` inside a principal lattice, the endomorphism
//! `j = 1 − m·pr_B`, and the Welters construction `(Λ, Λ_B, K) ↦ (X, u, u^t)`.
//!
//! `pr_B` is the E-orthogonal projection onto `span(B)`. On `A × B` the map
//! `j` acts as `diag(1, 1 − m)`, so it satisfies `(j − 1)(j + m − 1) = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::covers::{ker_mu_basis, prym_sublattice, CoverHomology};
use crate::finquot::{first_mti, is_maximal_isotropic, FiniteQuotient};
use crate::intlin::{kernel_lattice, saturate, Int, Lattice, Rat, RatMatrix};
use crate::pollat::{
    adjoint_map, dual_lattice, dual_polarization, ker_lambda_order, ker_mu, polarization_type,
    LatticeMap, PolarizedLattice,
};

/// Abelian subvarieties `A = B^⊥` and `B` of a principal lattice.
#[derive(Clone, Debug)]
pub struct ComplementaryPair {
    ambient: PolarizedLattice,
    sub_a: Lattice,
    sub_b: Lattice,
    intersection: FiniteQuotient,
}

impl ComplementaryPair {
    pub fn ambient(&self) -> &PolarizedLattice {
        &self.ambient
    }

    pub fn sub_a(&self) -> &Lattice {
        &self.sub_a
    }

    pub fn sub_b(&self) -> &Lattice {
        &self.sub_b
    }

    /// `A ∩ B ≅ Λ / (Λ_A ⊕ Λ_B)`.
    pub fn intersection(&self) -> &FiniteQuotient {
        &self.intersection
    }

    pub fn polarized_a(&self) -> PolarizedLattice {
        self.ambient.restrict(&self.sub_a).expect("checked at construction")
    }

    pub fn polarized_b(&self) -> PolarizedLattice {
        self.ambient.restrict(&self.sub_b).expect("checked at construction")
    }

    /// The same pair with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> ComplementaryPair {
        ComplementaryPair {
            ambient: self.ambient.clone(),
            sub_a: self.sub_b.clone(),
            sub_b: self.sub_a.clone(),
            intersection: self.intersection.clone(),
        }
    }

    /// E-orthogonal projection onto `span(B)`.
    pub fn projection_b(&self) -> RatMatrix {
        self.polarized_b().orthogonal_projection()
    }
}

/// Builds the complementary pair of a saturated, E-nondegenerate sublattice.
pub fn complement(ambient: &PolarizedLattice, sub_b: &Lattice) -> Result<ComplementaryPair> {
    if !ambient.is_principal() {
        return Err(Error::Precondition("ambient lattice must be principal".into()));
    }
    if !ambient.lattice().contains(sub_b) {
        return Err(Error::Domain("sublattice is not contained in the ambient lattice".into()));
    }
    if saturate(sub_b.basis(), ambient.lattice())? != *sub_b {
        return Err(Error::Domain("sublattice is not saturated".into()));
    }
    let pol_b = ambient.restrict(sub_b).map_err(|e| match e {
        Error::Degenerate(_) => Error::Degenerate(
            "form restricted to the sublattice is degenerate (not an abelian subvariety)".into(),
        ),
        other => other,
    })?;
    // A = {x ∈ Λ : E(b, x) = 0 for all b ∈ B}
    let annihilator = &sub_b.basis().transpose() * ambient.form();
    let sub_a = kernel_lattice(&annihilator, ambient.lattice());
    let pol_a = ambient.restrict(&sub_a)?;

    let intersection = FiniteQuotient::new(sub_a.sum(sub_b), ambient.lattice().clone())?;
    let order = intersection.order();
    let ka = ker_lambda_order(&pol_a);
    let kb = ker_lambda_order(&pol_b);
    if order != ka || order != kb {
        return Err(Error::certification(
            "|A∩B| = |ker λ_A| = |ker λ_B|",
            format!("|A∩B| = {order}, |ker λ_A| = {ka}, |ker λ_B| = {kb}"),
        ));
    }
    Ok(ComplementaryPair {
        ambient: ambient.clone(),
        sub_a,
        sub_b: sub_b.clone(),
        intersection,
    })
}

fn scalar(n: usize, k: i64) -> RatMatrix {
    RatMatrix::identity(n).scale(&Rat::from_integer(Int::from(k)))
}

/// `j = 1 − m·pr_B`, certified integral with `(j − 1)(j + m − 1) = 0`,
/// `ker(1 − j) = A` and `ker(j + m − 1) = B`.
pub fn j_endomorphism(pair: &ComplementaryPair, m: u64) -> Result<LatticeMap> {
    let mi = Int::from(m);
    let exponent = pair.intersection.exponent();
    if m == 0 || !num_integer::Integer::is_multiple_of(&mi, &exponent) {
        return Err(Error::Precondition(format!(
            "exponent {exponent} of A∩B does not divide m = {m}"
        )));
    }
    let n = pair.ambient.ambient_dim();
    let m = m as i64;
    let pr = pair.projection_b();
    let j = &RatMatrix::identity(n) - &pr.scale(&Rat::from_integer(Int::from(m)));
    let lattice = pair.ambient.lattice();
    let j_map = LatticeMap::new(j.clone(), lattice.clone(), lattice.clone()).map_err(|_| {
        Error::certification("j(Λ) ⊆ Λ", "m·pr_B is not integral (inconsistent pair)")
    })?;

    let one = RatMatrix::identity(n);
    let j_minus_1 = &j - &one;
    let j_plus_m_minus_1 = &j + &scalar(n, m - 1);
    if !(&j_minus_1 * &j_plus_m_minus_1).is_zero() {
        return Err(Error::certification("(j−1)(j+m−1) = 0", "polynomial does not vanish"));
    }
    if kernel_lattice(&(&one - &j), lattice) != pair.sub_a {
        return Err(Error::certification("ker(1−j) = A", "kernel differs from A"));
    }
    if kernel_lattice(&j_plus_m_minus_1, lattice) != pair.sub_b {
        return Err(Error::certification("ker(j+m−1) = B", "kernel differs from B"));
    }
    Ok(j_map)
}

/// One certified identity of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub passed: bool,
    pub detail: String,
}

impl IdentityCheck {
    fn new(identity: &str, passed: bool, detail: impl Into<String>) -> Self {
        IdentityCheck {
            identity: identity.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Output of the Welters construction.
#[derive(Clone, Debug)]
pub struct WeltersOutput {
    pub pair: ComplementaryPair,
    pub m: u64,
    /// `X = (L_K, m·E)` inside `span(B)`.
    pub x: PolarizedLattice,
    /// `u = pr_B : Λ → Λ_X`.
    pub u: LatticeMap,
    /// `u^t : Λ_X → Λ`.
    pub u_t: LatticeMap,
    pub j: LatticeMap,
    pub checks: Vec<IdentityCheck>,
    /// Polarization types at each stage: ambient, B, B̂, X.
    pub stage_types: Vec<(String, String)>,
}

/// Runs every certification of the Welters construction, without failing fast.
pub fn welters_certify(
    ambient: &PolarizedLattice,
    sub_b: &Lattice,
    k: &FiniteQuotient,
    m: u64,
) -> Result<WeltersOutput> {
    let pair = complement(ambient, sub_b)?;
    let pol_b = pair.polarized_b();
    let ty_b = polarization_type(&pol_b);
    let (b_hat, _mu) = dual_polarization(&pol_b, m)?;
    let (ker_mu_b, pairing) = ker_mu(&pol_b, m)?;
    if !ker_mu_b.has_subgroup(k) {
        return Err(Error::Domain("K is not a subgroup of ker μ_B".into()));
    }
    if !is_maximal_isotropic(&ker_mu_b, k, &pairing) {
        return Err(Error::Precondition(
            "K is not maximal totally isotropic in ker μ_B".into(),
        ));
    }
    let j = j_endomorphism(&pair, m)?;
    let n = ambient.ambient_dim();
    let mut checks = Vec::new();

    let pr = pair.projection_b();
    let b_dual = dual_lattice(&pol_b);
    let image = ambient.lattice().image(&pr);
    checks.push(IdentityCheck::new(
        "pr_B(Λ) = Λ_B^†",
        image == b_dual,
        "JN/A ≅ B̂ at lattice level",
    ));

    let x = PolarizedLattice::new(k.upper().clone(), b_hat.form().clone())?;
    let ty_x = polarization_type(&x);
    checks.push(IdentityCheck::new(
        "X principal",
        ty_x.is_principal(),
        format!("type of X = {ty_x}"),
    ));

    let u = LatticeMap::new(pr.clone(), ambient.lattice().clone(), x.lattice().clone())?;
    let u_t = adjoint_map(&u, ambient, &x)?;
    let mr = Rat::from_integer(Int::from(m));

    let u_ut = u_t.then(&u)?;
    checks.push(IdentityCheck::new(
        "u∘u^t = m·id",
        u_ut.agrees_on_source(&RatMatrix::identity(n).scale(&mr)),
        "on span(X)",
    ));
    let ut_u = u.then(&u_t)?;
    let one_minus_j = &RatMatrix::identity(n) - j.matrix();
    checks.push(IdentityCheck::new(
        "u^t∘u = 1−j",
        ut_u.agrees_on_source(&one_minus_j),
        "on span(Λ)",
    ));
    let mi = m as i64;
    let poly = &(j.matrix() - &RatMatrix::identity(n)) * &(j.matrix() + &scalar(n, mi - 1));
    checks.push(IdentityCheck::new(
        "(j−1)(j+m−1) = 0",
        poly.is_zero(),
        "Prym–Tjurin relation for j = diag(1, 1−m) on A×B",
    ));
    // E((1−j)x, y) = E(x, (1−j)y)
    let e = ambient.form();
    let lhs = &one_minus_j.transpose() * e;
    let rhs = e * &one_minus_j;
    checks.push(IdentityCheck::new(
        "1−j is E-self-adjoint",
        lhs == rhs,
        "pr_B self-adjointness",
    ));
    let order = pair.intersection().order();
    let ka = ker_lambda_order(&pair.polarized_a());
    let kb = ker_lambda_order(&pol_b);
    checks.push(IdentityCheck::new(
        "|A∩B| = |ker λ_A| = |ker λ_B|",
        order == ka && order == kb,
        format!("{order} = {ka} = {kb}"),
    ));

    let stage_types = vec![
        ("ambient".to_string(), polarization_type(ambient).to_string()),
        ("B".to_string(), ty_b.to_string()),
        ("B_hat".to_string(), polarization_type(&b_hat).to_string()),
        ("X".to_string(), ty_x.to_string()),
    ];
    Ok(WeltersOutput {
        pair,
        m,
        x,
        u,
        u_t,
        j,
        checks,
        stage_types,
    })
}

/// Welters construction; fails with the first identity that does not hold.
pub fn welters_construct(
    ambient: &PolarizedLattice,
    sub_b: &Lattice,
    k: &FiniteQuotient,
    m: u64,
) -> Result<WeltersOutput> {
    let out = welters_certify(ambient, sub_b, k, m)?;
    if let Some(failed) = out.checks.iter().find(|c| !c.passed) {
        return Err(Error::certification(&failed.identity, failed.detail.clone()));
    }
    Ok(out)
}

/// The three m = 2 families; the constructions run for any cover degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    /// `B` is the whole Jacobian lattice.
    JacobianQuotient,
    /// `B` is the Prym lattice `(ker Nm)_0`.
    PrymQuotient,
    /// `B` is the saturated pull-back `π^* JN_0`; roles of the previous case exchanged.
    PullbackQuotient,
}

impl PresetKind {
    pub const ALL: [PresetKind; 3] = [
        PresetKind::JacobianQuotient,
        PresetKind::PrymQuotient,
        PresetKind::PullbackQuotient,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PresetKind::JacobianQuotient => "jacobian_quotient",
            PresetKind::PrymQuotient => "prym_quotient",
            PresetKind::PullbackQuotient => "pullback_quotient",
        }
    }
}

impl std::str::FromStr for PresetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown preset `{s}`")))
    }
}

/// `B` for a preset on a cover: the whole Jacobian lattice, the Prym lattice
/// `(ker π_*)_0`, or the saturated pull-back `π^* Λ_0`.
pub fn preset_sub_b(kind: PresetKind, cov: &CoverHomology) -> Lattice {
    let (prym, pullback) = prym_sublattice(cov);
    match kind {
        PresetKind::JacobianQuotient => cov.total().lattice().clone(),
        PresetKind::PrymQuotient => prym,
        PresetKind::PullbackQuotient => pullback,
    }
}

/// Runs the Welters construction for a preset with `m` the cover degree.
///
/// Without an explicit `K`, the pull-back preset uses `⟨ξ̄⟩` and the others
/// the first m.t.i. subgroup of `ker μ_B` in canonical order.
pub fn preset_m2(
    kind: PresetKind,
    cov: &CoverHomology,
    k: Option<&FiniteQuotient>,
    budget: u64,
) -> Result<WeltersOutput> {
    let m = cov.m();
    let sub_b = preset_sub_b(kind, cov);
    let k = match k {
        Some(k) => k.clone(),
        None if kind == PresetKind::PullbackQuotient && m > 1 => {
            ker_mu_basis(cov)?.xi_bar.cyclic_subgroup()
        }
        None => {
            let pol_b = cov.total().restrict(&sub_b)?;
            let (q, pairing) = ker_mu(&pol_b, m)?;
            first_mti(&q, &pairing, budget)?
                .ok_or_else(|| Error::certification("ker μ_B has an m.t.i. subgroup", "none found"))?
        }
    };
    welters_construct(cov.total(), &sub_b, &k, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finquot::{enumerate_mti, DEFAULT_BUDGET};
    use crate::intlin::{int, rat};

    fn e(i: usize, n: usize) -> Vec<Rat> {
        let mut v = vec![rat(0); n];
        v[i] = rat(1);
        v
    }

    #[test]
    fn cover_presets() {
        let c = crate::covers::standard_cover(2, 2).unwrap();
        for (kind, rank) in [
            (PresetKind::JacobianQuotient, 6),
            (PresetKind::PrymQuotient, 2),
            (PresetKind::PullbackQuotient, 4),
        ] {
            let out = preset_m2(kind, &c, None, DEFAULT_BUDGET).unwrap();
            assert_eq!(out.x.rank(), rank, "{}", kind.name());
            assert!(out.x.is_principal());
            assert!(out.checks.iter().all(|c| c.passed));
        }
        // j of the pull-back pair is the involution (j − 1)(j + 1) = 0 induced by σ
        let sub_b = preset_sub_b(PresetKind::PullbackQuotient, &c);
        let pair = complement(c.total(), &sub_b).unwrap();
        let j = j_endomorphism(&pair, 2).unwrap();
        assert_eq!(*j.matrix(), -c.sigma().matrix());
        assert_eq!(*pair.sub_a(), prym_sublattice(&c).0);
        // with B the Prym lattice, j is the deck involution itself
        let j_prym = j_endomorphism(&pair.swapped(), 2).unwrap();
        assert_eq!(j_prym.matrix(), c.sigma().matrix());
    }

    #[test]
    fn whole_lattice_pair() {
        let p = PolarizedLattice::standard(2);
        let pair = complement(&p, p.lattice()).unwrap();
        assert_eq!(pair.sub_a().rank(), 0);
        assert!(pair.intersection().is_trivial());
        let j = j_endomorphism(&pair, 3).unwrap();
        assert_eq!(*j.matrix(), scalar(4, -2));
    }

    #[test]
    fn split_pair() {
        let p = PolarizedLattice::standard(2);
        // B = span(e1, e3): a symplectic plane
        let b = Lattice::from_vectors(4, &[e(0, 4), e(2, 4)]);
        let pair = complement(&p, &b).unwrap();
        assert!(pair.intersection().is_trivial());
        assert_eq!(*pair.sub_a(), Lattice::from_vectors(4, &[e(1, 4), e(3, 4)]));
        let j = j_endomorphism(&pair, 3).unwrap();
        let expected = RatMatrix::diagonal(&[rat(-2), rat(1), rat(-2), rat(1)]);
        assert_eq!(*j.matrix(), expected);
    }

    #[test]
    fn type_m_pair() {
        // B = span(e1, m e3 + e4) in the standard rank-4 lattice: E|B has type (m)
        for m in 2..=4i64 {
            let p = PolarizedLattice::standard(2);
            let mut f = e(3, 4);
            f[2] = rat(m);
            let b = Lattice::from_vectors(4, &[e(0, 4), f]);
            let pair = complement(&p, &b).unwrap();
            assert_eq!(pair.intersection().order(), int(m * m));
            assert_eq!(ker_lambda_order(&pair.polarized_b()), int(m * m));
            let j = j_endomorphism(&pair, m as u64).unwrap();
            // swap identity: j' = 2 − m − j
            let j_swapped = j_endomorphism(&pair.swapped(), m as u64).unwrap();
            assert_eq!(*j_swapped.matrix(), &scalar(4, 2 - m) - j.matrix());
        }
    }

    #[test]
    fn j_precondition() {
        let p = PolarizedLattice::standard(2);
        let mut f = e(3, 4);
        f[2] = rat(3);
        let b = Lattice::from_vectors(4, &[e(0, 4), f]);
        let pair = complement(&p, &b).unwrap();
        assert!(matches!(j_endomorphism(&pair, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn complement_errors() {
        let p = PolarizedLattice::standard(2);
        // isotropic plane span(e1, e2): degenerate
        let iso = Lattice::from_vectors(4, &[e(0, 4), e(1, 4)]);
        assert!(matches!(complement(&p, &iso), Err(Error::Degenerate(_))));
        let mut two = e(2, 4);
        two[2] = rat(2);
        let unsat = Lattice::from_vectors(4, &[e(0, 4), two]);
        assert!(matches!(complement(&p, &unsat), Err(Error::Domain(_))));
    }

    #[test]
    fn welters_on_whole_lattice_matches_quotient() {
        for (g, m) in [(1usize, 2u64), (1, 3), (2, 2)] {
            let p = PolarizedLattice::standard(g);
            let (q, pairing) = crate::pollat::torsion_subgroup(&p, m).unwrap();
            for k in enumerate_mti(&q, &pairing, DEFAULT_BUDGET).unwrap() {
                let out = welters_construct(&p, p.lattice(), &k, m).unwrap();
                let expected = crate::pollat::principal_quotient(&p, &k, m).unwrap();
                assert_eq!(out.x, expected);
                assert!(out.checks.iter().all(|c| c.passed));
            }
        }
    }

    #[test]
    fn welters_m1_is_identity() {
        let p = PolarizedLattice::standard(2);
        let k = FiniteQuotient::trivial(p.lattice().clone());
        let out = welters_construct(&p, p.lattice(), &k, 1).unwrap();
        assert_eq!(out.x, p);
        assert_eq!(out.u, LatticeMap::identity(p.lattice()));
    }

    #[test]
    fn welters_rejects_non_maximal_k() {
        let p = PolarizedLattice::standard(2);
        let k = FiniteQuotient::trivial(p.lattice().clone());
        assert!(matches!(
            welters_construct(&p, p.lattice(), &k, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn welters_type_m_sublattice() {
        // B of type (2) in rank 4; with m = 2 the dual type is (1)
        let p = PolarizedLattice::standard(2);
        let b = Lattice::from_vectors(4, &[e(0, 4), {
            let mut f = e(3, 4);
            f[2] = rat(2);
            f
        }]);
        let pol_b = p.restrict(&b).unwrap();
        let (kmu, pairing) = ker_mu(&pol_b, 2).unwrap();
        let ks = enumerate_mti(&kmu, &pairing, DEFAULT_BUDGET).unwrap();
        assert!(!ks.is_empty());
        for k in ks {
            let out = welters_construct(&p, &b, &k, 2).unwrap();
            assert_eq!(out.x.rank(), 2);
            assert!(out.x.is_principal());
        }
    }
}
