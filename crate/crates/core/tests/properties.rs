use deepcore::{
    center, combinatorial_depth, depth, ConeCode, DepthMethod, DepthOptions, PointCloud,
};
use proptest::prelude::*;

fn cloud(d: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0f64, d), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_equals_combinatorial(rows in cloud(3, 5..=10), z in prop::collection::vec(-3.0..3.0f64, 3)) {
        let x = PointCloud::new(rows).unwrap();
        let opts = DepthOptions::default();
        let exact = depth(&x, &z, DepthMethod::Exact, &opts);
        let comb = depth(&x, &z, DepthMethod::Comb, &opts);
        match (exact, comb) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.count, b.count),
            (Err(a), Err(b)) => prop_assert!(a.is_degeneracy() || b.is_degeneracy() || a.to_string() == b.to_string()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|r| r.count), b.map(|r| r.count)),
        }
    }

    #[test]
    fn depth_is_at_most_half(rows in cloud(2, 4..=20), z in prop::collection::vec(-3.0..3.0f64, 2)) {
        let x = PointCloud::new(rows).unwrap();
        let r = depth(&x, &z, DepthMethod::Exact, &DepthOptions::default()).unwrap();
        prop_assert!(r.count <= x.len() / 2);
    }

    #[test]
    fn point_order_does_not_matter(rows in cloud(2, 5..=12), z in prop::collection::vec(-3.0..3.0f64, 2)) {
        let x = PointCloud::new(rows.clone()).unwrap();
        let mut reversed = rows;
        reversed.reverse();
        let y = PointCloud::new(reversed).unwrap();
        let opts = DepthOptions::default();
        prop_assert_eq!(
            depth(&x, &z, DepthMethod::Exact, &opts).unwrap().count,
            depth(&y, &z, DepthMethod::Exact, &opts).unwrap().count
        );
    }

    #[test]
    fn seed_does_not_change_the_depth(rows in cloud(3, 6..=10), seed in 0..1000u64) {
        let x = PointCloud::new(rows).unwrap();
        let z = [0.1, -0.2, 0.3];
        let a = depth(&x, &z, DepthMethod::Exact, &DepthOptions::with_seed(seed)).unwrap();
        let b = depth(&x, &z, DepthMethod::Exact, &DepthOptions::with_seed(seed + 1)).unwrap();
        prop_assert_eq!(a.count, b.count);
    }

    #[test]
    fn scaling_does_not_change_the_depth(rows in cloud(2, 5..=10), s in 1e-3..1e3f64) {
        let x = PointCloud::new(rows.clone()).unwrap();
        let y = PointCloud::new(rows.iter().map(|r| r.iter().map(|v| v * s).collect()).collect()).unwrap();
        let z = [0.25, -0.5];
        let zs = [0.25 * s, -0.5 * s];
        let c1 = combinatorial_depth(&center(&x, &z).unwrap());
        let c2 = combinatorial_depth(&center(&y, &zs).unwrap());
        if let (Ok(a), Ok(b)) = (c1, c2) {
            prop_assert_eq!(a.count, b.count);
        }
    }

    #[test]
    fn cone_code_round_trips(bits in prop::collection::vec(any::<bool>(), 1..200)) {
        let c = ConeCode::from_bits(bits.iter().copied());
        prop_assert_eq!(ConeCode::parse(&c.to_string()).unwrap(), c.clone());
        prop_assert_eq!(c.complement().complement(), c.clone());
        prop_assert_eq!(c.count_ones() + c.complement().count_ones(), bits.len());
        prop_assert_eq!(c.hamming(&c.complement()), bits.len());
        let flipped = c.with_flipped(bits.len() / 2);
        prop_assert_eq!(c.hamming(&flipped), 1);
    }
}
