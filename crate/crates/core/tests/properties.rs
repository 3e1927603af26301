use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use ppav_lattice::finquot::{enumerate_subgroups, FiniteQuotient};
use ppav_lattice::intlin::{
    index, kernel_lattice, rat, saturate, smith_normal_form, IntMatrix, Lattice, RatMatrix,
};
use ppav_lattice::pollat::{
    adjoint_map, dual_polarization, ker_lambda_order, ker_mu, polarization_type, LatticeMap,
    PolarizedLattice,
};
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |r, c| BigInt::from(entries[r * cols + c]))
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut w = RatMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = RatMatrix::identity(n);
        e = &e + &RatMatrix::from_fn(n, n, |r, c| if r == i && c == j { rat(k) } else { rat(0) });
        w = &w * &e;
    }
    w.to_int().unwrap()
}

/// A principal form of type `(d_1, …, d_g)`: `[[0, D], [−D, 0]]`.
fn typed_lattice(d: &[i64]) -> PolarizedLattice {
    let g = d.len();
    let form = RatMatrix::from_fn(2 * g, 2 * g, |r, c| {
        if r < g && c == r + g {
            rat(d[r])
        } else if r >= g && c + g == r {
            rat(-d[c])
        } else {
            rat(0)
        }
    });
    PolarizedLattice::new(Lattice::standard(2 * g), form).unwrap()
}

/// Every subgroup of `Z/d_1 × …`, found by closing under one more element at a time.
fn brute_force_subgroups(d: &[u32]) -> usize {
    let order: u32 = d.iter().product();
    let decode = |mut x: u32| -> Vec<u32> {
        d.iter()
            .map(|&di| {
                let c = x % di;
                x /= di;
                c
            })
            .collect()
    };
    let encode = |v: &[u32]| -> u32 { v.iter().zip(d).rev().fold(0, |acc, (c, di)| acc * di + c) };
    let add = |a: u32, b: u32| -> u32 {
        let (va, vb) = (decode(a), decode(b));
        let s: Vec<u32> = va.iter().zip(&vb).zip(d).map(|((x, y), di)| (x + y) % di).collect();
        encode(&s)
    };
    let close = |set: &BTreeSet<u32>, x: u32| -> BTreeSet<u32> {
        let mut out = set.clone();
        let mut mult = x;
        loop {
            for &s in set {
                out.insert(add(s, mult));
            }
            if mult == 0 {
                break;
            }
            mult = add(mult, x);
        }
        out
    };
    let mut seen: BTreeSet<BTreeSet<u32>> = BTreeSet::new();
    let mut frontier = vec![BTreeSet::from([0u32])];
    seen.insert(frontier[0].clone());
    while let Some(s) = frontier.pop() {
        for x in 0..order {
            if s.contains(&x) {
                continue;
            }
            let t = close(&s, x);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    seen.len()
}

fn group_with_invariants(d: &[u32]) -> FiniteQuotient {
    let n = d.len();
    let lower = Lattice::from_generators(&RatMatrix::diagonal(
        &d.iter().map(|&x| rat(x as i64)).collect::<Vec<_>>(),
    ));
    FiniteQuotient::new(lower, Lattice::standard(n)).unwrap()
}

#[test]
fn subgroup_counts_match_brute_force() {
    for d in [
        vec![2],
        vec![6],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 2, 2],
        vec![4, 4],
        vec![2, 6],
        vec![2, 2, 4],
    ] {
        let q = group_with_invariants(&d);
        let fast = enumerate_subgroups(&q, 1 << 10).unwrap();
        assert_eq!(fast.len(), brute_force_subgroups(&d), "invariants {d:?}");
        let distinct: BTreeSet<String> = fast.iter().map(|s| format!("{:?}", s.upper())).collect();
        assert_eq!(distinct.len(), fast.len());
    }
}

proptest! {
    #[test]
    fn smith_form_is_a_certified_factorization(entries in prop::collection::vec(-6i64..=6, 12)) {
        let m = int_matrix(3, 4, &entries);
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        let diag = s.diagonal();
        for r in 0..3 {
            for c in 0..4 {
                if r != c {
                    prop_assert!(s.d[(r, c)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(!w[0].is_negative());
        }
    }

    #[test]
    fn lattice_basis_is_canonical(
        entries in prop::collection::vec(-5i64..=5, 9),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6),
    ) {
        let m = int_matrix(3, 3, &entries);
        let w = unimodular(3, &ops);
        let a = Lattice::from_int_generators(&m);
        let b = Lattice::from_int_generators(&(&m * &w));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn saturation_is_idempotent(entries in prop::collection::vec(-5i64..=5, 8)) {
        let s = int_matrix(4, 2, &entries).to_rat();
        let l = Lattice::standard(4);
        let sat = saturate(&s, &l).unwrap();
        prop_assert_eq!(saturate(sat.basis(), &l).unwrap(), sat.clone());
        prop_assert!(sat.contains(&Lattice::from_generators(&s)));
    }

    #[test]
    fn index_is_multiplicative(
        a in prop::collection::vec(-4i64..=4, 4),
        b in prop::collection::vec(-4i64..=4, 4),
    ) {
        let a = int_matrix(2, 2, &a);
        let b = int_matrix(2, 2, &b);
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let top = Lattice::standard(2);
        let mid = Lattice::from_int_generators(&a);
        let low = Lattice::from_int_generators(&(&a * &b));
        let whole = index(&low, &top).unwrap();
        prop_assert_eq!(whole, index(&low, &mid).unwrap() * index(&mid, &top).unwrap());
    }

    #[test]
    fn kernel_rank_identity(entries in prop::collection::vec(-3i64..=3, 10)) {
        let f = int_matrix(2, 5, &entries).to_rat();
        let k = kernel_lattice(&f, &Lattice::standard(5));
        prop_assert_eq!(k.rank(), 5 - f.rank());
        prop_assert!((&f * k.basis()).is_zero());
        prop_assert_eq!(saturate(k.basis(), &Lattice::standard(5)).unwrap(), k);
    }

    #[test]
    fn dual_type_reverses(d1 in 1i64..=3, k in 1i64..=3, extra in 1i64..=2) {
        let d2 = d1 * k;
        let m = d2 * extra;
        let p = typed_lattice(&[d1, d2]);
        let (dual, mu) = dual_polarization(&p, m as u64).unwrap();
        let ty: Vec<BigInt> = polarization_type(&dual).chain().to_vec();
        prop_assert_eq!(ty, vec![BigInt::from(m / d2), BigInt::from(m / d1)]);
        let (kmu, _) = ker_mu(&p, m as u64).unwrap();
        prop_assert_eq!(ker_lambda_order(&p) * kmu.order(), BigInt::from(m).pow(4));
        prop_assert_eq!(mu.source(), dual.lattice());
    }

    #[test]
    fn adjoint_is_an_involution_and_reverses_composition(
        f in prop::collection::vec(-3i64..=3, 16),
        g in prop::collection::vec(-3i64..=3, 16),
    ) {
        let p = PolarizedLattice::standard(2);
        let l = p.lattice().clone();
        let f = LatticeMap::new(int_matrix(4, 4, &f).to_rat(), l.clone(), l.clone()).unwrap();
        let g = LatticeMap::new(int_matrix(4, 4, &g).to_rat(), l.clone(), l.clone()).unwrap();
        let ft = adjoint_map(&f, &p, &p).unwrap();
        prop_assert_eq!(adjoint_map(&ft, &p, &p).unwrap(), f.clone());
        let gf = f.then(&g).unwrap();
        let gt = adjoint_map(&g, &p, &p).unwrap();
        prop_assert_eq!(adjoint_map(&gf, &p, &p).unwrap(), gt.then(&ft).unwrap());
    }
}
