use kphi_core::geometry::{
    interleaving_pairs, lk2, point, validate_generic, GenericityCertificate, GeometryError, RationalCoordMap,
};
use kphi_core::{
    build_f, build_gadget, check_extension_parity, lk2_seeded, moment_coords, seeded_coords, van_kampen_number,
    GadgetParams, PLCycle, Simplex, SimplicialComplex,
};
use proptest::prelude::*;

fn params(k: usize, ell: usize) -> GadgetParams {
    GadgetParams::new(k, ell).unwrap()
}

fn complete_graph(n: u32) -> SimplicialComplex {
    let edges: Vec<Vec<u32>> = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    SimplicialComplex::from_facets((0..n).map(|i| format!("v{i}")), edges).unwrap()
}

#[test]
fn f_3_1_map_independent_over_twenty_seeds() {
    let p = params(3, 1);
    let f = build_f(p);
    let d = p.ambient_dim();
    assert!(check_extension_parity(&f, d).holds);
    let m = van_kampen_number(&f, d, &moment_coords(&f, d).unwrap()).unwrap().v;
    assert_eq!(m, 1);
    for seed in 1..=20 {
        let coords = seeded_coords(&f, d, seed).unwrap();
        assert_eq!(van_kampen_number(&f, d, &coords).unwrap().v, m, "seed {seed}");
    }
}

#[test]
fn seeded_maps_are_certified() {
    let p = params(2, 1);
    let f = build_f(p);
    for seed in 1..=20 {
        let c = seeded_coords(&f, 4, seed).unwrap();
        let GenericityCertificate::Seeded { seed: s, pairs_validated, .. } = c.certificate() else {
            panic!("unexpected certificate");
        };
        assert_eq!(*s, seed);
        assert_eq!(validate_generic(&f, &c, &[3, 4]).unwrap(), *pairs_validated);
    }
    let k5 = complete_graph(5);
    let c = seeded_coords(&k5, 2, 1).unwrap();
    assert!(validate_generic(&k5, &c, &[1, 2]).is_ok());
}

#[test]
fn ledger_consistency_and_moment_ledger() {
    let p = params(2, 1);
    let fixtures = [(complete_graph(5), 2), (complete_graph(6), 2), (build_f(p), 4), (build_gadget(p, 3).unwrap(), 4)];
    for (k, d) in &fixtures {
        let moment = van_kampen_number(k, *d, &moment_coords(k, *d).unwrap()).unwrap();
        assert_eq!(moment.ledger.len() % 2, moment.v as usize);
        assert_eq!(moment.ledger, interleaving_pairs(k, *d));
        let seeded = van_kampen_number(k, *d, &seeded_coords(k, *d, 9).unwrap()).unwrap();
        assert_eq!(seeded.crossings % 2, seeded.v as usize);
        assert_eq!(seeded.pairs_checked, moment.pairs_checked);
    }
}

/// The boundary of sigma_i bounds sigma_i itself, so its linking number with
/// S_i equals the parity of crossings between sigma_i and S_i in the ledger.
#[test]
fn linking_of_sigma_boundary_matches_ledger() {
    for (k, ell) in [(2, 1), (3, 1)] {
        let p = params(k, ell);
        let f = build_f(p);
        let d = p.ambient_dim();
        for seed in 1..=4 {
            let coords = seeded_coords(&f, d, seed).unwrap();
            let ledger = van_kampen_number(&f, d, &coords).unwrap().ledger;
            for i in 1..=3 {
                let sigma = p.sigma(i);
                let sphere = f.mark(&format!("S_{i}")).unwrap();
                let hits = ledger
                    .iter()
                    .filter(|(a, b)| (a == &sigma && sphere.contains(b)) || (b == &sigma && sphere.contains(a)))
                    .count();
                let a = PLCycle::from_mark(&f, &format!("sigma_{i}"), &coords).unwrap();
                let b = PLCycle::from_mark(&f, &format!("S_{i}"), &coords).unwrap();
                assert_eq!((a.dim(), b.dim()), (ell, k));
                let lk = lk2_seeded(&a, &b, seed).unwrap();
                assert_eq!(lk.lk as usize, hits % 2, "F({k},{ell}) seed {seed} i {i}");
                assert_eq!(lk2_seeded(&b, &a, seed).unwrap().lk, lk.lk);
            }
        }
    }
}

fn triangle(a: u32, b: u32, c: u32) -> Vec<Simplex> {
    vec![Simplex::new(vec![a, b]).unwrap(), Simplex::new(vec![b, c]).unwrap(), Simplex::new(vec![a, c]).unwrap()]
}

fn linked_coords(shift: i64) -> RationalCoordMap {
    RationalCoordMap::from_points(
        3,
        vec![
            point(&[2, 0, 0]),
            point(&[-1, 2, 0]),
            point(&[-1, -2, 0]),
            point(&[shift, 0, 2]),
            point(&[shift, 0, -2]),
            point(&[5 + shift, 1, 1]),
        ],
    )
    .unwrap()
}

#[test]
fn lk2_fixtures() {
    let coords = linked_coords(0);
    let a = PLCycle::new(triangle(0, 1, 2), &coords).unwrap();
    let b = PLCycle::new(triangle(3, 4, 5), &coords).unwrap();
    assert_eq!(lk2(&a, &b, &point(&[0, 7, 3])).unwrap(), 1);
    assert_eq!(lk2(&b, &a, &point(&[1, -9, 5])).unwrap(), 1);
    let far = b.translated(&point(&[100, 0, 0]));
    assert_eq!(lk2_seeded(&a, &far, 3).unwrap().lk, 0);
    assert_eq!(lk2_seeded(&far, &a, 3).unwrap().lk, 0);
}

#[test]
fn lk2_rejects_touching_cycles() {
    let mut pts: Vec<_> = linked_coords(0).points().to_vec();
    pts[3] = point(&[2, 0, 0]);
    let coords = RationalCoordMap::from_points(3, pts).unwrap();
    let a = PLCycle::new(triangle(0, 1, 2), &coords).unwrap();
    let b = PLCycle::new(triangle(3, 4, 5), &coords).unwrap();
    assert!(matches!(lk2_seeded(&a, &b, 1), Err(GeometryError::NotDisjoint(..))));
}

#[test]
fn lk2_rejects_bad_dimensions_and_non_cycles() {
    let coords = linked_coords(0);
    let a = PLCycle::new(triangle(0, 1, 2), &coords).unwrap();
    let pts = PLCycle::new(vec![Simplex::vertex(3), Simplex::vertex(4)], &coords).unwrap();
    assert!(matches!(lk2_seeded(&a, &pts, 1), Err(GeometryError::LinkDimension { .. })));
    let path = vec![Simplex::new(vec![0, 1]).unwrap(), Simplex::new(vec![1, 2]).unwrap()];
    assert!(matches!(PLCycle::new(path, &coords), Err(GeometryError::NotACycle(_))));
}

#[test]
fn apex_on_cycle_plane_is_degenerate() {
    let coords = linked_coords(0);
    let a = PLCycle::new(triangle(0, 1, 2), &coords).unwrap();
    let b = PLCycle::new(triangle(3, 4, 5), &coords).unwrap();
    // apex on a vertex of B: a cone face meets B at that vertex
    assert_eq!(lk2(&a, &b, &point(&[0, 0, 2])), Err(GeometryError::DegenerateApex));
    // a flat cone in the plane of A still crosses B transversally
    assert_eq!(lk2(&a, &b, &point(&[7, 3, 0])), Ok(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lk2_independent_of_apex(seed in any::<u64>(), shift in prop_oneof![Just(0i64), Just(100i64)]) {
        let coords = linked_coords(shift);
        let a = PLCycle::new(triangle(0, 1, 2), &coords).unwrap();
        let b = PLCycle::new(triangle(3, 4, 5), &coords).unwrap();
        let expected = if shift == 0 { 1 } else { 0 };
        prop_assert_eq!(lk2_seeded(&a, &b, seed).unwrap().lk, expected);
        prop_assert_eq!(lk2_seeded(&b, &a, seed).unwrap().lk, expected);
    }

    #[test]
    fn k5_v_independent_of_seed(seed in any::<u64>()) {
        let k5 = complete_graph(5);
        let coords = seeded_coords(&k5, 2, seed).unwrap();
        prop_assert_eq!(van_kampen_number(&k5, 2, &coords).unwrap().v, 1);
    }
}
