use std::collections::BTreeSet;

use kphi_core::delprod::ProductCell;
use kphi_core::{
    build_f, deleted_product, deleted_product_capped, DeletedProductComplex, GadgetParams, SimplicialComplex,
};
use proptest::prelude::*;

/// Disjoint union of a full a-simplex and a full b-simplex.
fn two_simplices(a: u32, b: u32) -> SimplicialComplex {
    let first: Vec<u32> = (0..=a).collect();
    let second: Vec<u32> = (a + 1..=a + b + 1).collect();
    SimplicialComplex::from_facets((0..=a + b + 1).map(|i| format!("v{i}")), vec![first, second]).unwrap()
}

/// Ordered pairs of disjoint nonempty vertex subsets that are faces, by
/// bitmask enumeration.
fn ordered_disjoint_pairs(k: &SimplicialComplex) -> usize {
    let masks: Vec<u64> = k.all_faces().map(|f| f.vertices().iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    masks.iter().map(|&x| masks.iter().filter(|&&y| x & y == 0).count()).sum()
}

#[test]
fn cross_pairs_of_two_simplices() {
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            let k = two_simplices(a, b);
            let full = deleted_product(&k);
            assert_eq!(full.num_cells(), ordered_disjoint_pairs(&k));
            let in_first = |c: &ProductCell| c.first.vertices().iter().all(|&v| v <= a);
            let in_second = |c: &ProductCell| c.second.vertices().iter().all(|&v| v > a);
            let cross: Vec<ProductCell> = (0..=(a + b) as usize)
                .flat_map(|d| full.cells(d).iter().cloned())
                .filter(|c| (in_first(c) && in_second(c)) || (in_first(&c.swapped()) && in_second(&c.swapped())))
                .collect();
            let per_order = ((1usize << (a + 1)) - 1) * ((1usize << (b + 1)) - 1);
            assert_eq!(cross.len(), 2 * per_order);
            let sub = DeletedProductComplex::from_cells_unchecked(cross);
            // two contractible components, one per factor order
            assert_eq!(sub.betti().unwrap(), [vec![2], vec![0; (a + b) as usize]].concat());
            assert!(sub.check_free_involution().unwrap().free);
        }
    }
}

#[test]
fn boundary_squares_to_zero_on_gadget() {
    let f = build_f(GadgetParams::new(2, 1).unwrap());
    let d = deleted_product_capped(&f, Some(3));
    let chain = d.chain_complex().unwrap();
    assert!(chain.check_boundary_squared().is_ok());
    let r = d.check_free_involution().unwrap();
    assert_eq!(r.total_orbits * 2, d.num_cells());
}

#[test]
fn k5_deleted_product() {
    let edges: Vec<Vec<u32>> = (0..5).flat_map(|a| (a + 1..5).map(move |b| vec![a, b])).collect();
    let k5 = SimplicialComplex::from_facets((0..5).map(|i| format!("v{i}")), edges).unwrap();
    let d = deleted_product(&k5);
    // 20 vertex pairs, 2 * 5 * 6 vertex-edge cells, 30 ordered disjoint edge pairs
    assert_eq!(d.cell_counts(), vec![20, 60, 30]);
    // closed orientable surface of genus 6, chi = -10
    assert_eq!(d.betti().unwrap(), vec![1, 12, 1]);
}

fn complex_strategy() -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::collection::btree_set(0u32..6, 1..4), 1..7)
        .prop_map(|fs| fs.into_iter().map(|s| s.into_iter().collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn subcomplex_cells_are_contained(facets in complex_strategy(), keep in 1usize..7) {
        let labels: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
        let k = SimplicialComplex::from_facets(labels.clone(), facets.clone()).unwrap();
        let l = SimplicialComplex::from_facets(labels, facets[..keep.min(facets.len())].to_vec()).unwrap();
        let dk = deleted_product(&k);
        let dl = deleted_product(&l);
        let all = |d: &DeletedProductComplex| -> BTreeSet<ProductCell> {
            (0..6).flat_map(|i| d.cells(i).iter().cloned()).collect()
        };
        prop_assert!(all(&dl).is_subset(&all(&dk)));
        prop_assert_eq!(dk.num_cells(), ordered_disjoint_pairs(&k));
        prop_assert!(dk.check_free_involution().is_ok());
        prop_assert!(dk.chain_complex().unwrap().check_boundary_squared().is_ok());
    }
}
