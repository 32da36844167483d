use birkhoff_core::birkhoff::{boundary_circles, boundary_slope, euler_characteristic, genus, section_topology};
use birkhoff_core::flows::{fiber_curves, hopf_fiber_starts, FlowField, Integrator};
use birkhoff_core::framing::{FramingField, RationalFraming};
use birkhoff_core::{Error, LinkingMatrix, Tolerances, WeightedLink};
use num_integer::Integer;
use num_rational::Ratio;
use proptest::prelude::*;

/// Symmetric integer matrix from its strict upper triangle.
fn matrix(m: usize, upper: &[i64]) -> LinkingMatrix {
    let mut rows = vec![vec![0; m]; m];
    let mut k = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            rows[i][j] = upper[k];
            rows[j][i] = upper[k];
            k += 1;
        }
    }
    LinkingMatrix::from_entries((0..m).map(|i| format!("k{i}")).collect(), rows).unwrap()
}

/// Boundary data: multiplicities, upper triangle of Lk, and odd self-linking
/// numbers (the class realized by orbits of non-singular flows on S^3).
fn arb_boundary() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1usize..=6).prop_flat_map(|m| {
        (
            prop::collection::vec(-6i64..=6, m),
            prop::collection::vec(-5i64..=5, m * (m - 1) / 2),
            prop::collection::vec((-6i64..=6).prop_map(|k| 2 * k + 1), m),
        )
    })
}

fn ratios(v: &[i64]) -> Vec<Ratio<i64>> {
    v.iter().map(|&x| Ratio::from_integer(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn chi_plus_circles_is_even((n, upper, slk) in arb_boundary()) {
        let m = n.len();
        let lk = matrix(m, &upper);
        let zero = (0..m).any(|i| {
            let s = boundary_slope(i, &n, &lk).unwrap();
            s.meridian == 0 && s.longitude == 0
        });
        prop_assume!(!zero);
        let chi = euler_characteristic(&n, &lk, &ratios(&slk)).unwrap();
        let b: u64 = (0..m).map(|i| boundary_circles(i, &n, &lk).unwrap()).sum();
        prop_assert_eq!((chi + b as i64).rem_euclid(2), 0);
        prop_assert!(genus(&n, &lk, &ratios(&slk)).is_ok());
    }

    #[test]
    fn meridian_matches_circle_count((n, upper, _slk) in arb_boundary()) {
        let m = n.len();
        let lk = matrix(m, &upper);
        for i in 0..m {
            let s = boundary_slope(i, &n, &lk).unwrap();
            let off: i64 = (0..m).filter(|&j| j != i).map(|j| n[j] * lk.lk(i, j)).sum();
            prop_assert_eq!(s.meridian, -off);
            prop_assert_eq!(s.longitude, n[i]);
            match boundary_circles(i, &n, &lk) {
                Ok(c) => prop_assert_eq!(c, s.meridian.gcd(&s.longitude).unsigned_abs()),
                Err(Error::ZeroBoundary(k)) => prop_assert_eq!((k, s.meridian, s.longitude), (i, 0, 0)),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn permutation_invariance((n, upper, slk) in arb_boundary(), seed in any::<u64>()) {
        let m = n.len();
        let lk = matrix(m, &upper);
        let Ok(before) = genus(&n, &lk, &ratios(&slk)) else { return Ok(()); };
        // Deterministic shuffle from the seed.
        let mut perm: Vec<usize> = (0..m).collect();
        let mut s = seed;
        for i in (1..m).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let n2: Vec<i64> = perm.iter().map(|&p| n[p]).collect();
        let slk2: Vec<i64> = perm.iter().map(|&p| slk[p]).collect();
        let after = genus(&n2, &lk.permuted(&perm), &ratios(&slk2)).unwrap();
        prop_assert_eq!(after.chi, before.chi);
        prop_assert_eq!(after.genus, before.genus);
        let mut a = before.slopes.iter().map(|s| (s.meridian, s.longitude)).collect::<Vec<_>>();
        let mut b = after.slopes.iter().map(|s| (s.meridian, s.longitude)).collect::<Vec<_>>();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn weighted_hopf_closed_form() {
    for n in [vec![1], vec![2, 1], vec![1, 2, 3], vec![4, 0, 1, 1], vec![3, 3, 3, 3, 3]] {
        let m = n.len() as i64;
        let lk = LinkingMatrix::constant(n.len(), 1);
        let chi = euler_characteristic(&n, &lk, &ratios(&vec![-1; n.len()])).unwrap();
        assert_eq!(chi, (2 - m) * n.iter().sum::<i64>());
    }
}

/// Hopf fibres from curves through linking and self-linking, checked against
/// the closed forms only at the end.
#[test]
fn hopf_table_from_curves() {
    let tol = Tolerances::default();
    let field = FlowField::hopf();
    let zeta = RationalFraming::integral(FramingField::AmbientField(field.transverse_fn().unwrap().clone()));
    for m in 1..=12usize {
        let curves = fiber_curves(&field, &hopf_fiber_starts(m), 128, &Integrator::default(), &tol).unwrap();
        let link = WeightedLink::new(curves, vec![1; m], &tol).unwrap();
        let t = section_topology(&link, &vec![zeta.clone(); m], &tol).unwrap();
        let m = m as i64;
        assert_eq!(t.chi, -m * (m - 2), "m = {m}");
        assert_eq!(t.genus, Some(1 + m * (m - 3) / 2), "m = {m}");
        assert!(t.slopes.iter().all(|s| (s.meridian, s.longitude) == (1 - m, 1)));
    }
}

#[test]
fn four_fibers() {
    let tol = Tolerances::default();
    let field = FlowField::hopf();
    let zeta = RationalFraming::integral(FramingField::AmbientField(field.transverse_fn().unwrap().clone()));
    let curves = fiber_curves(&field, &hopf_fiber_starts(4), 256, &Integrator::default(), &tol).unwrap();
    let link = WeightedLink::new(curves, vec![1; 4], &tol).unwrap();
    let t = section_topology(&link, &vec![zeta; 4], &tol).unwrap();
    assert_eq!((t.chi, t.genus), (-8, Some(3)));
    assert!(t.slopes.iter().all(|s| (s.meridian, s.longitude) == (-3, 1)));
    assert_eq!(t.slk, ratios(&[-1, -1, -1, -1]));
}

#[test]
fn framing_count_must_match() {
    let tol = Tolerances::default();
    let field = FlowField::hopf();
    let curves = fiber_curves(&field, &hopf_fiber_starts(2), 64, &Integrator::default(), &tol).unwrap();
    let link = WeightedLink::new(curves, vec![1, 1], &tol).unwrap();
    let zeta = RationalFraming::integral(FramingField::AmbientField(field.transverse_fn().unwrap().clone()));
    assert!(section_topology(&link, &[zeta], &tol).is_err());
}
