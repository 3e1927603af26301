//! Finite abelian groups presented as `L'/L` for nested lattices of equal
//! span, Q/Z-valued pairings on them, and enumeration of (maximal totally
//! isotropic) subgroups.
//!
//! Internally a quotient is put in Smith coordinates: generators `g_1..g_k`
//! of orders `e_1 | ... | e_k` (all `> 1`) and a coordinate map sending any
//! vector of `L'` to its coefficients modulo the `e_i`. Subgroups are
//! enumerated as row-style Hermite normal forms of lattices between
//! `diag(e) Z^k` and `Z^k`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlin::{frac, index, smith_normal_form, Int, Lattice, Rat, RatMatrix};

/// Default bound on the group order for exhaustive subgroup enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// The finite group `upper / lower`.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    lower: Lattice,
    upper: Lattice,
    invariants: Vec<Int>,
    generators: Vec<Vec<Rat>>,
    coord_map: RatMatrix,
}

impl PartialEq for FiniteQuotient {
    fn eq(&self, other: &Self) -> bool {
        self.lower == other.lower && self.upper == other.upper
    }
}

impl Eq for FiniteQuotient {}

impl FiniteQuotient {
    pub fn new(lower: Lattice, upper: Lattice) -> Result<Self> {
        if !upper.contains(&lower) {
            return Err(Error::Domain(
                "lower lattice is not contained in the upper lattice".into(),
            ));
        }
        if lower.rank() != upper.rank() {
            return Err(Error::Domain("quotient of lattices of different rank is infinite".into()));
        }
        let r = upper.rank();
        let n = upper.ambient_dim();
        if r == 0 {
            return Ok(FiniteQuotient {
                lower,
                upper,
                invariants: Vec::new(),
                generators: Vec::new(),
                coord_map: RatMatrix::zeros(0, n),
            });
        }
        let inclusion = upper
            .span_coordinates_of(lower.basis())
            .and_then(|c| c.to_int())
            .expect("containment checked above");
        let snf = smith_normal_form(&inclusion);
        let u_inv = snf
            .u
            .to_rat()
            .inverse()
            .expect("unimodular transform is invertible");
        let new_basis = upper.basis() * &u_inv;
        let bu = upper.basis();
        let left_inverse = (&bu.transpose() * bu)
            .inverse()
            .map(|g| &g * &bu.transpose())
            .expect("lattice basis has full column rank");
        let full_map = &snf.u.to_rat() * &left_inverse;

        let diag = snf.diagonal();
        let keep: Vec<usize> = (0..r).filter(|&i| diag[i] > Int::one()).collect();
        Ok(FiniteQuotient {
            invariants: keep.iter().map(|&i| diag[i].clone()).collect(),
            generators: keep.iter().map(|&i| new_basis.column(i)).collect(),
            coord_map: full_map.select_rows(&keep),
            lower,
            upper,
        })
    }

    pub fn trivial(lattice: Lattice) -> Self {
        FiniteQuotient::new(lattice.clone(), lattice).expect("L/L is always valid")
    }

    pub fn lower(&self) -> &Lattice {
        &self.lower
    }

    pub fn upper(&self) -> &Lattice {
        &self.upper
    }

    pub fn ambient_dim(&self) -> usize {
        self.upper.ambient_dim()
    }

    /// Elementary divisors `> 1`, in divisibility order.
    pub fn invariants(&self) -> &[Int] {
        &self.invariants
    }

    /// Lifts of generators of the cyclic factors, matching [`Self::invariants`].
    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn order(&self) -> Int {
        self.invariants.iter().fold(Int::one(), |acc, e| acc * e)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Largest invariant (1 for the trivial group).
    pub fn exponent(&self) -> Int {
        self.invariants.last().cloned().unwrap_or_else(Int::one)
    }

    pub fn contains_vector(&self, x: &[Rat]) -> bool {
        self.upper.contains_vector(x)
    }

    /// Smith coordinates of `x`, reduced into `[0, e_i)`.
    pub fn coords(&self, x: &[Rat]) -> Result<Vec<Int>> {
        if !self.upper.contains_vector(x) {
            return Err(Error::Domain("vector does not lie in the upper lattice".into()));
        }
        let raw = self.coord_map.mul_vec(x);
        Ok(raw
            .iter()
            .zip(&self.invariants)
            .map(|(c, e)| c.to_integer().mod_floor(e))
            .collect())
    }

    /// Representative `Σ c_i g_i` for Smith coordinates `c`.
    pub fn lift(&self, coords: &[Int]) -> Vec<Rat> {
        assert_eq!(coords.len(), self.generators.len());
        let mut v = vec![Rat::zero(); self.ambient_dim()];
        for (c, g) in coords.iter().zip(&self.generators) {
            let c = BigRational::from_integer(c.clone());
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += &c * gi;
            }
        }
        v
    }

    pub fn element(self: &Arc<Self>, x: Vec<Rat>) -> Result<QuotientElement> {
        if !self.upper.contains_vector(&x) {
            return Err(Error::Domain("vector does not lie in the upper lattice".into()));
        }
        Ok(QuotientElement {
            representative: x,
            parent: Arc::clone(self),
        })
    }

    /// Subgroup `(lower + Σ Z x_i) / lower`.
    pub fn subgroup_generated(&self, elements: &[Vec<Rat>]) -> Result<FiniteQuotient> {
        for x in elements {
            if !self.upper.contains_vector(x) {
                return Err(Error::Domain("generator outside the group".into()));
            }
        }
        FiniteQuotient::new(self.lower.clone(), self.lower.with_vectors(elements))
    }

    /// Whether `s` is a subgroup of `self` (same lower lattice, contained upper lattice).
    pub fn has_subgroup(&self, s: &FiniteQuotient) -> bool {
        s.lower == self.lower && self.upper.contains(&s.upper)
    }

    /// Quotient `self / s` for a subgroup `s`.
    pub fn quotient_by(&self, s: &FiniteQuotient) -> Result<FiniteQuotient> {
        if !self.has_subgroup(s) {
            return Err(Error::Domain("not a subgroup".into()));
        }
        FiniteQuotient::new(s.upper.clone(), self.upper.clone())
    }

    fn small_invariants(&self, budget: u64) -> Result<Vec<i64>> {
        let order = self.order();
        let ord = order.to_u64().unwrap_or(u64::MAX);
        if ord > budget {
            return Err(Error::Budget { order: ord, budget });
        }
        Ok(self
            .invariants
            .iter()
            .map(|e| e.to_i64().expect("bounded by budget"))
            .collect())
    }

    fn subgroup_from_rows(&self, rows: &[Vec<i64>]) -> FiniteQuotient {
        let vectors: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| self.lift(&r.iter().map(|&v| Int::from(v)).collect::<Vec<_>>()))
            .collect();
        FiniteQuotient::new(self.lower.clone(), self.lower.with_vectors(&vectors))
            .expect("rows lie in the upper lattice")
    }
}

/// Elementary divisors `> 1` of `upper/lower`; their product is the order.
pub fn group_invariants(q: &FiniteQuotient) -> Vec<Int> {
    q.invariants().to_vec()
}

/// An element of a [`FiniteQuotient`], given by a lift to the upper lattice.
#[derive(Clone, Debug)]
pub struct QuotientElement {
    representative: Vec<Rat>,
    parent: Arc<FiniteQuotient>,
}

impl QuotientElement {
    pub fn representative(&self) -> &[Rat] {
        &self.representative
    }

    pub fn parent(&self) -> &Arc<FiniteQuotient> {
        &self.parent
    }

    pub fn coords(&self) -> Vec<Int> {
        self.parent
            .coords(&self.representative)
            .expect("representative lies in the upper lattice")
    }

    pub fn is_zero(&self) -> bool {
        self.parent.lower.contains_vector(&self.representative)
    }

    pub fn order(&self) -> Int {
        self.coords()
            .iter()
            .zip(self.parent.invariants())
            .fold(Int::one(), |acc, (c, e)| acc.lcm(&(e / c.gcd(e))))
    }

    pub fn scaled(&self, k: i64) -> QuotientElement {
        let k = BigRational::from_integer(Int::from(k));
        QuotientElement {
            representative: self.representative.iter().map(|x| x * &k).collect(),
            parent: Arc::clone(&self.parent),
        }
    }

    pub fn add(&self, other: &QuotientElement) -> QuotientElement {
        assert!(*self.parent == *other.parent, "elements of different groups");
        QuotientElement {
            representative: self
                .representative
                .iter()
                .zip(&other.representative)
                .map(|(a, b)| a + b)
                .collect(),
            parent: Arc::clone(&self.parent),
        }
    }

    /// Whether the element lies in the subgroup `s` of its parent.
    pub fn in_subgroup(&self, s: &FiniteQuotient) -> bool {
        s.contains_vector(&self.representative)
    }

    /// The cyclic subgroup generated by this element.
    pub fn cyclic_subgroup(&self) -> FiniteQuotient {
        self.parent
            .subgroup_generated(std::slice::from_ref(&self.representative))
            .expect("element of the parent group")
    }
}

impl PartialEq for QuotientElement {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent
            && self.parent.lower.contains_vector(
                &self
                    .representative
                    .iter()
                    .zip(&other.representative)
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            )
    }
}

/// A Q/Z-valued pairing `(x, y) ↦ x^T F y mod Z` on a finite quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingOnQuotient {
    form: RatMatrix,
}

impl PairingOnQuotient {
    /// Checks that `form` is alternating and that `form(upper, lower) ⊆ Z`.
    pub fn new(form: RatMatrix, q: &FiniteQuotient) -> Result<Self> {
        if form.rows() != q.ambient_dim() || !form.is_antisymmetric() {
            return Err(Error::Domain("pairing form must be an alternating ambient matrix".into()));
        }
        let up = q.upper().basis();
        let low = q.lower().basis();
        if !(&(&up.transpose() * &form) * low).is_integral() {
            return Err(Error::Domain(
                "pairing is not well defined on the quotient".into(),
            ));
        }
        Ok(PairingOnQuotient { form })
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    /// Value in `[0, 1)`.
    pub fn value(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let fy = self.form.mul_vec(y);
        let v = x.iter().zip(&fy).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
        frac(&v)
    }

    /// Pairing matrix on the Smith generators of `q`, scaled to integers mod `n`.
    fn generator_matrix(&self, q: &FiniteQuotient) -> (Vec<Vec<i128>>, i128) {
        let gens = q.generators();
        let vals: Vec<Vec<Rat>> = gens
            .iter()
            .map(|x| gens.iter().map(|y| self.value(x, y)).collect())
            .collect();
        let n = vals
            .iter()
            .flatten()
            .fold(Int::one(), |acc, v| acc.lcm(v.denom()));
        let nr = BigRational::from_integer(n.clone());
        let mat = vals
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| (v * &nr).to_integer().to_i128().expect("small pairing value"))
                    .collect()
            })
            .collect();
        (mat, n.to_i128().expect("small pairing denominator"))
    }
}

/// Whether the pairing vanishes identically on the subgroup `s`.
pub fn is_isotropic(s: &FiniteQuotient, p: &PairingOnQuotient) -> bool {
    let b = s.upper().basis();
    (&(&b.transpose() * p.form()) * b).is_integral()
}

/// Orthogonal of `s` inside `q`, as a subgroup of `q`.
pub fn orthogonal(q: &FiniteQuotient, s: &FiniteQuotient, p: &PairingOnQuotient) -> FiniteQuotient {
    let forms = &s.upper().basis().transpose() * p.form();
    let perp = q.upper().integral_preimage(&forms);
    FiniteQuotient::new(q.lower().clone(), perp).expect("orthogonal contains the lower lattice")
}

/// Whether `s` is totally isotropic and not contained in a larger isotropic subgroup.
pub fn is_maximal_isotropic(q: &FiniteQuotient, s: &FiniteQuotient, p: &PairingOnQuotient) -> bool {
    // For alternating pairings every x ⊥ S extends S isotropically.
    q.has_subgroup(s) && is_isotropic(s, p) && orthogonal(q, s, p).upper() == s.upper()
}

/// `[m]^{-1}(S)`: the quotient `((1/m) L_S) / L` where `S = L_S / L`.
pub fn preimage_under_mult(s: &FiniteQuotient, m: u64) -> Result<FiniteQuotient> {
    if m == 0 {
        return Err(Error::Domain("multiplier must be positive".into()));
    }
    let inv = BigRational::new(Int::one(), Int::from(m));
    FiniteQuotient::new(s.lower().clone(), s.upper().scale(&inv))
}

/// All subgroups of `q`, in canonical order.
pub fn enumerate_subgroups(q: &FiniteQuotient, budget: u64) -> Result<Vec<FiniteQuotient>> {
    let d = q.small_invariants(budget)?;
    let rows = hnf_subgroups(&d, None);
    Ok(rows.iter().map(|r| q.subgroup_from_rows(r)).collect())
}

/// All maximal totally isotropic subgroups of `q` under `p`, in canonical order.
pub fn enumerate_mti(
    q: &FiniteQuotient,
    p: &PairingOnQuotient,
    budget: u64,
) -> Result<Vec<FiniteQuotient>> {
    let d = q.small_invariants(budget)?;
    let (pm, n) = p.generator_matrix(q);
    let isotropic = hnf_subgroups(&d, Some((&pm, n)));
    Ok(isotropic
        .iter()
        .filter(|rows| is_lagrangian_rows(&d, rows, &pm, n))
        .map(|rows| q.subgroup_from_rows(rows))
        .collect())
}

/// One maximal totally isotropic subgroup, without enumerating the rest.
pub fn first_mti(
    q: &FiniteQuotient,
    p: &PairingOnQuotient,
    budget: u64,
) -> Result<Option<FiniteQuotient>> {
    let d = q.small_invariants(budget)?;
    let (pm, n) = p.generator_matrix(q);
    let mut found = None;
    search_rows(&d, Some((&pm, n)), &mut |rows| {
        if is_lagrangian_rows(&d, rows, &pm, n) {
            found = Some(rows.to_vec());
            true
        } else {
            false
        }
    });
    Ok(found.map(|rows| q.subgroup_from_rows(&rows)))
}

fn is_lagrangian_rows(d: &[i64], rows: &[Vec<i64>], pm: &[Vec<i128>], n: i128) -> bool {
    let group_order: i128 = d.iter().map(|&e| e as i128).product();
    let sub_order = group_order / rows.iter().enumerate().map(|(i, r)| r[i] as i128).product::<i128>();
    orthogonal_order(d, rows, pm, n) == sub_order
}

fn pair_rows(a: &[i64], b: &[i64], pm: &[Vec<i128>], n: i128) -> i128 {
    let mut acc: i128 = 0;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                acc = (acc + (ai as i128) * (bj as i128) % n * pm[i][j]) % n;
            }
        }
    }
    acc.rem_euclid(n)
}

/// Order of the orthogonal of the subgroup spanned by `rows` in `⊕ Z/d_i`.
fn orthogonal_order(d: &[i64], rows: &[Vec<i64>], pm: &[Vec<i128>], n: i128) -> i128 {
    use crate::intlin::IntMatrix;
    let k = d.len();
    if k == 0 {
        return 1;
    }
    // x ↦ (pairing(row_i, x) · n mod n)_i ; image order = n^k / [Z^k : W Z^k + n Z^k]
    let mut system = IntMatrix::zeros(k, 2 * k);
    for (i, row) in rows.iter().enumerate() {
        for c in 0..k {
            let mut e = vec![0i64; k];
            e[c] = 1;
            system[(i, c)] = Int::from(pair_rows(row, &e, pm, n));
        }
        system[(i, k + i)] = Int::from(n);
    }
    let diag = smith_normal_form(&system).diagonal();
    let lattice_index: i128 = diag.iter().map(|x| x.to_i128().expect("small")).product();
    let image = n.pow(k as u32) / lattice_index;
    let group: i128 = d.iter().map(|&e| e as i128).product();
    group / image
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Row-style HNFs of lattices `M` with `diag(d) Z^k ⊆ M ⊆ Z^k`; if a pairing is
/// given, only those whose rows pair to zero.
fn hnf_subgroups(d: &[i64], pairing: Option<(&Vec<Vec<i128>>, i128)>) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    search_rows(d, pairing, &mut |rows| {
        out.push(rows.to_vec());
        false
    });
    out.sort_by(|a, b| cmp_rows(a, b));
    out
}

/// Depth-first walk over the same HNFs; stops once `visit` returns true.
fn search_rows(
    d: &[i64],
    pairing: Option<(&Vec<Vec<i128>>, i128)>,
    visit: &mut dyn FnMut(&[Vec<i64>]) -> bool,
) {
    let k = d.len();
    let mut rows: Vec<Vec<i64>> = vec![vec![0; k]; k];
    fill_row(d, k, &mut rows, pairing, visit);
}

fn cmp_rows(a: &[Vec<i64>], b: &[Vec<i64>]) -> Ordering {
    a.iter().flatten().cmp(b.iter().flatten())
}

// Rows are chosen bottom-up; `next` is one past the row being filled.
// Returns true once the walk should stop.
fn fill_row(
    d: &[i64],
    next: usize,
    rows: &mut Vec<Vec<i64>>,
    pairing: Option<(&Vec<Vec<i128>>, i128)>,
    visit: &mut dyn FnMut(&[Vec<i64>]) -> bool,
) -> bool {
    if next == 0 {
        return visit(rows);
    }
    let i = next - 1;
    let k = d.len();
    for h in divisors(d[i]) {
        let ranges: Vec<i64> = (i + 1..k).map(|j| rows[j][j]).collect();
        let mut offsets = vec![0i64; ranges.len()];
        loop {
            let mut row = vec![0i64; k];
            row[i] = h;
            for (t, &o) in offsets.iter().enumerate() {
                row[i + 1 + t] = o;
            }
            rows[i] = row;
            if contains_scaled_unit(d, rows, i)
                && isotropic_with_lower(rows, i, pairing)
                && fill_row(d, i, rows, pairing, visit)
            {
                return true;
            }
            if !advance(&mut offsets, &ranges) {
                break;
            }
        }
    }
    rows[i] = vec![0; k];
    false
}

fn advance(offsets: &mut [i64], ranges: &[i64]) -> bool {
    for t in (0..offsets.len()).rev() {
        offsets[t] += 1;
        if offsets[t] < ranges[t] {
            return true;
        }
        offsets[t] = 0;
    }
    false
}

/// `d_i e_i ∈ span_Z(rows[i..])` for upper-triangular rows.
fn contains_scaled_unit(d: &[i64], rows: &[Vec<i64>], i: usize) -> bool {
    let k = d.len();
    let mut v = vec![0i64; k];
    v[i] = d[i];
    for t in i..k {
        if v[t] % rows[t][t] != 0 {
            return false;
        }
        let c = v[t] / rows[t][t];
        if c != 0 {
            for j in t..k {
                v[j] -= c * rows[t][j];
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

fn isotropic_with_lower(rows: &[Vec<i64>], i: usize, pairing: Option<(&Vec<Vec<i128>>, i128)>) -> bool {
    let Some((pm, n)) = pairing else { return true };
    (i..rows.len()).all(|j| pair_rows(&rows[i], &rows[j], pm, n) == 0)
}

/// `|Q|` as a machine integer, for callers that already respect a budget.
pub fn order_u64(q: &FiniteQuotient) -> Option<u64> {
    q.order().to_u64()
}

/// `[upper : lower]` computed directly by determinant (independent of Smith data).
pub fn order_by_index(q: &FiniteQuotient) -> Int {
    index(q.lower(), q.upper()).expect("valid quotient")
}
