use ppav_lattice::comppair::{complement, preset_m2, IdentityCheck, PresetKind};
use ppav_lattice::covers::{
    birational_predicate, classify_mti_k, eta_class, ker_mu_basis, norm_component_group,
    prym_sublattice, standard_cover, verify_kernel_identification, CoverHomology,
};
use ppav_lattice::finquot::enumerate_mti;
use ppav_lattice::moduli::{locus_dimensions, LocusReport};
use ppav_lattice::pollat::{polarization_type, principal_quotient, torsion_subgroup, PolarizedLattice};
use ppav_lattice::serial::{CoverFixture, LatticeJson, WeltersReport, SCHEMA};
use ppav_lattice::{Error, Result};
use serde::Serialize;

/// A finished report: JSON payload, text rendering, and whether every
/// certified identity held.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
    pub passed: bool,
}

fn output<T: Serialize>(report: &T, text: String, passed: bool) -> Output {
    Output {
        json: serde_json::to_value(report).expect("reports serialize"),
        text,
        passed,
    }
}

#[derive(Serialize)]
struct QuotientEntry {
    index: usize,
    k_upper: LatticeJson,
    order: String,
    polarization_type: String,
    principal: bool,
}

#[derive(Serialize)]
struct QuotientReport {
    schema: &'static str,
    command: &'static str,
    g: usize,
    m: u64,
    mode: String,
    count: usize,
    all_principal: bool,
    subgroups: Vec<QuotientEntry>,
}

pub fn quotient(g: usize, m: u64, all: bool, budget: u64) -> Result<Output> {
    if g == 0 || m == 0 {
        return Err(Error::Domain("g and m must be positive".into()));
    }
    let p = PolarizedLattice::standard(g);
    let (torsion, pairing) = torsion_subgroup(&p, m)?;
    let mut ks = enumerate_mti(&torsion, &pairing, budget)?;
    if !all {
        ks.truncate(1);
    }
    let mut subgroups = Vec::with_capacity(ks.len());
    for (index, k) in ks.iter().enumerate() {
        let x = principal_quotient(&p, k, m)?;
        let ty = polarization_type(&x);
        subgroups.push(QuotientEntry {
            index,
            k_upper: LatticeJson::from_lattice(k.upper()),
            order: k.order().to_string(),
            polarization_type: ty.to_string(),
            principal: ty.is_principal(),
        });
    }
    let all_principal = subgroups.iter().all(|s| s.principal);
    let report = QuotientReport {
        schema: SCHEMA,
        command: "quotient",
        g,
        m,
        mode: if all { "all" } else { "one" }.to_string(),
        count: subgroups.len(),
        all_principal,
        subgroups,
    };
    let mut text = format!(
        "quotient g={g} m={m} mode={}: {} maximal isotropic subgroup(s), all principal: {all_principal}\n",
        report.mode, report.count
    );
    for s in &report.subgroups {
        text.push_str(&format!("  K#{} order {} type {}\n", s.index, s.order, s.polarization_type));
    }
    Ok(output(&report, text, all_principal))
}

#[derive(Serialize)]
struct SubgroupCertificate {
    label: String,
    birational: bool,
    kernel_order: String,
    norm_preimage_order: String,
    kernel_equals_norm_preimage: bool,
    kernel_equals_eta_preimage: Option<bool>,
    preimage_identity: bool,
}

#[derive(Serialize)]
struct CoverCertificate {
    degenerate: bool,
    identities: Vec<IdentityCheck>,
    component_group_order: String,
    ker_pullback_invariants: Vec<String>,
    ker_mu_invariants: Vec<String>,
    subgroups: Vec<SubgroupCertificate>,
}

#[derive(Serialize)]
struct CoverReport {
    schema: &'static str,
    command: &'static str,
    g: usize,
    m: u64,
    total_genus: usize,
    certificate: CoverCertificate,
    fixture: CoverFixture,
}

fn check(identity: &str, passed: bool, detail: impl Into<String>) -> IdentityCheck {
    IdentityCheck {
        identity: identity.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn cover_certificate(c: &CoverHomology) -> Result<CoverCertificate> {
    let m = c.m();
    let g = c.base_genus() as u64;
    // cyclic_cover refuses to return a cover failing these
    let mut identities: Vec<IdentityCheck> = [
        "g' = mg − m + 1",
        "σ symplectic",
        "σ^m = id",
        "π_*π^* = m·id",
        "π^*π_* = Σσ^i",
    ]
    .iter()
    .map(|id| check(id, true, "certified during construction"))
    .collect();
    identities[0].detail = format!("g' = {} = {}·{g} − {m} + 1", c.total_genus(), m);

    let (components, _) = norm_component_group(c)?;
    identities.push(check(
        "|π_0(ker Nm)| = m",
        components.order() == m.into(),
        format!("order {}", components.order()),
    ));
    let (sub_a, sub_b) = prym_sublattice(c);
    let pair = complement(c.total(), &sub_b)?;
    identities.push(check(
        "complement(B) = ker π_*",
        *pair.sub_a() == sub_a,
        "saturated lattice equality",
    ));
    identities.push(check(
        "|A∩B| = |ker λ_A| = |ker λ_B|",
        true,
        format!("order {}", pair.intersection().order()),
    ));

    let mut cert = CoverCertificate {
        degenerate: m == 1,
        identities,
        component_group_order: components.order().to_string(),
        ker_pullback_invariants: Vec::new(),
        ker_mu_invariants: Vec::new(),
        subgroups: Vec::new(),
    };
    if m == 1 {
        return Ok(cert);
    }
    let eta = eta_class(c)?;
    cert.ker_pullback_invariants = eta.parent().invariants().iter().map(|x| x.to_string()).collect();
    cert.identities.push(check("ker π^* ≅ Z/m", true, format!("η of order {}", eta.order())));
    let basis = ker_mu_basis(c)?;
    cert.ker_mu_invariants = basis.group.invariants().iter().map(|x| x.to_string()).collect();
    cert.identities.push(check("ker μ_B ≅ (Z/m)^2", true, "generated by ξ̄ and P_1"));
    for l in classify_mti_k(&basis)? {
        let id = verify_kernel_identification(c, &basis, &l.subgroup)?;
        let birational = birational_predicate(&l.subgroup, &basis.p1);
        cert.identities.push(check(
            &format!("K = ⟨{}⟩: f^{{-1}}(K + ⟨P_1⟩) = [m]^{{-1}}(Nm̄ K)", l.label_string()),
            id.preimage_identity_holds(),
            "preimage under λ_B∘π^*",
        ));
        cert.subgroups.push(SubgroupCertificate {
            label: l.label_string(),
            birational,
            kernel_order: id.order().to_string(),
            norm_preimage_order: id.norm_preimage.order().to_string(),
            kernel_equals_norm_preimage: id.norm_form_agrees(),
            kernel_equals_eta_preimage: id.eta_form_agrees(),
            preimage_identity: id.preimage_identity_holds(),
        });
    }
    Ok(cert)
}

pub fn cover(g: usize, m: u64) -> Result<Output> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let c = standard_cover(g, m)?;
    let certificate = cover_certificate(&c)?;
    let passed = certificate.identities.iter().all(|i| i.passed);
    let report = CoverReport {
        schema: SCHEMA,
        command: "cover",
        g,
        m,
        total_genus: c.total_genus(),
        certificate,
        fixture: CoverFixture::from_cover(&c),
    };
    let cert = &report.certificate;
    let mut text = format!(
        "cover g={g} m={m}: g'={}, |π_0(ker Nm)|={}, ker μ_B invariants [{}]\n",
        report.total_genus,
        cert.component_group_order,
        cert.ker_mu_invariants.join(", ")
    );
    for i in &cert.identities {
        text.push_str(&format!("  [{}] {}\n", if i.passed { "ok" } else { "FAIL" }, i.identity));
    }
    for s in &cert.subgroups {
        text.push_str(&format!(
            "  K=({}) birational={} |ker|={} |[m]^-1 Nm(K)|={}\n",
            s.label, s.birational, s.kernel_order, s.norm_preimage_order
        ));
    }
    Ok(output(&report, text, passed))
}

#[derive(Serialize)]
struct WeltersCommandReport {
    schema: &'static str,
    command: &'static str,
    preset: PresetKind,
    label: Option<String>,
    birational: Option<bool>,
    report: WeltersReport,
}

/// Parses `a:b` into a label.
pub fn parse_label(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Domain(format!("K label `{s}` is not of the form a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Reads a fixture file: either a bare fixture or a `cover` report holding one.
pub fn load_fixture(text: &str) -> Result<CoverFixture> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Domain(format!("malformed fixture JSON: {e}")))?;
    let inner = value.get("fixture").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| Error::Domain(format!("malformed fixture: {e}")))
}

pub fn welters(fixture_text: &str, preset: PresetKind, label: Option<&str>, budget: u64) -> Result<Output> {
    let fixture = load_fixture(fixture_text)?;
    let c = fixture.rebuild()?;
    let m = c.m();
    let (k, label, birational) = match (preset, label) {
        (PresetKind::PullbackQuotient, Some(s)) if m > 1 => {
            let want = parse_label(s)?;
            let basis = ker_mu_basis(&c)?;
            let l = classify_mti_k(&basis)?
                .into_iter()
                .find(|l| l.label == (want.0 % m, want.1 % m))
                .ok_or_else(|| Error::Domain(format!("no classified subgroup with label {s}")))?;
            let birational = birational_predicate(&l.subgroup, &basis.p1);
            (Some(l.subgroup.clone()), Some(l.label_string()), Some(birational))
        }
        (_, Some(_)) => {
            return Err(Error::Domain(
                "a K label applies only to the pullback_quotient preset with m ≥ 2".into(),
            ))
        }
        (_, None) => (None, None, None),
    };
    let out = preset_m2(preset, &c, k.as_ref(), budget)?;
    let k_upper = match &k {
        Some(k) => k.upper().clone(),
        None => out.x.lattice().clone(),
    };
    let report = WeltersReport::new(&out, &k_upper);
    let passed = report.passed;
    let mut text = format!(
        "welters preset={} m={m}{}: X of rank {}, type {}\n",
        preset.name(),
        label.as_ref().map(|l| format!(" K=({l})")).unwrap_or_default(),
        out.x.rank(),
        polarization_type(&out.x)
    );
    if let Some(b) = birational {
        text.push_str(&format!("  birational: {b}\n"));
    }
    for (stage, ty) in &report.polarization_types {
        text.push_str(&format!("  type of {stage}: {ty}\n"));
    }
    for c in &report.checks {
        text.push_str(&format!("  [{}] {}\n", if c.passed { "ok" } else { "FAIL" }, c.identity));
    }
    let full = WeltersCommandReport {
        schema: SCHEMA,
        command: "welters",
        preset,
        label,
        birational,
        report,
    };
    Ok(output(&full, text, passed))
}

#[derive(Serialize)]
struct DimsReport {
    schema: &'static str,
    command: &'static str,
    report: LocusReport,
}

pub fn dims(g: i64, m: i64, r: i64) -> Result<Output> {
    let report = locus_dimensions(g, m, r)?;
    let text = report.to_text_table();
    Ok(output(
        &DimsReport {
            schema: SCHEMA,
            command: "dims",
            report,
        },
        text,
        true,
    ))
}
