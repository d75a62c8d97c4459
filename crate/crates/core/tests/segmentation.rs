mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use common::{dot, gaussian, query};
use deepcore::cone_search::generation_cap;
use deepcore::geometry::binomial;
use deepcore::{
    center, enumerate_cones, interior_direction, is_facet, project_onto_plane, sign_vector,
    tukey_depth, CenteredCloud, ConeCode, DepthOptions, Direction, PointCloud,
};

fn expected_regions(n: usize, d: usize) -> usize {
    2 * (0..d).map(|k| binomial(n - 1, k) as usize).sum::<usize>()
}

#[test]
fn region_count_matches_arrangement_formula() {
    for d in 2..=3 {
        for n in 5..=10 {
            for seed in 0..10u64 {
                let x = gaussian(n, d, seed);
                let c = center(&x, &query(&x, seed)).unwrap();
                let e = enumerate_cones(&c, seed).unwrap();
                assert_eq!(
                    e.codes.len(),
                    expected_regions(n, d),
                    "d={d} n={n} seed={seed}"
                );
            }
        }
    }
    assert_eq!(expected_regions(10, 3), 92);
}

/// Sign vectors of the arcs between consecutive critical angles.
fn planar_cells(c: &CenteredCloud) -> BTreeSet<ConeCode> {
    let mut events: Vec<f64> = (0..c.len())
        .flat_map(|i| {
            let p = c.point(i);
            let a = p[1].atan2(p[0]);
            [a + PI / 2.0, a - PI / 2.0]
        })
        .map(|t| t.rem_euclid(2.0 * PI))
        .collect();
    events.sort_by(f64::total_cmp);
    let k = events.len();
    (0..k)
        .map(|i| {
            let hi = if i + 1 < k {
                events[i + 1]
            } else {
                events[0] + 2.0 * PI
            };
            let t = 0.5 * (events[i] + hi);
            sign_vector(c, &Direction::new(vec![t.cos(), t.sin()]).unwrap()).unwrap()
        })
        .collect()
}

#[test]
fn planar_enumeration_matches_angular_sweep() {
    for n in 5..=12 {
        for seed in 0..10u64 {
            let x = gaussian(n, 2, seed + 77);
            let c = center(&x, &query(&x, seed)).unwrap();
            let e = enumerate_cones(&c, seed).unwrap();
            assert_eq!(e.codes, planar_cells(&c), "n={n} seed={seed}");
        }
    }
}

/// Whether some direction on the great circle `x_j^⊥` lies in the closure of
/// cone `code` with every other sign strict, by dense sampling.
fn circle_touches_cone(c: &CenteredCloud, j: usize, code: &ConeCode, samples: usize) -> bool {
    let x = c.point(j);
    let xn = dot(x, x).sqrt();
    let a = [x[0] / xn, x[1] / xn, x[2] / xn];
    let seed = if a[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut u: Vec<f64> = (0..3).map(|k| seed[k] - dot(&seed, &a) * a[k]).collect();
    let un = dot(&u, &u).sqrt();
    u.iter_mut().for_each(|v| *v /= un);
    let w = [
        a[1] * u[2] - a[2] * u[1],
        a[2] * u[0] - a[0] * u[2],
        a[0] * u[1] - a[1] * u[0],
    ];
    (0..samples).any(|s| {
        let t = 2.0 * PI * s as f64 / samples as f64;
        let r: Vec<f64> = (0..3).map(|k| t.cos() * u[k] + t.sin() * w[k]).collect();
        (0..c.len())
            .filter(|&k| k != j)
            .all(|k| (dot(c.point(k), &r) > 0.0) == code.get(k))
    })
}

/// Five points in R^3: each cone has facets on some hyperplanes only and is
/// not bounded by the rest. Every facet decision is cross-checked
/// against sampling of the hyperplane's great circle.
#[test]
fn facet_test_agrees_with_circle_sampling() {
    let x = PointCloud::new(vec![
        vec![1.0, 0.1, 0.2],
        vec![0.2, 1.0, -0.1],
        vec![0.6, -0.5, 0.35],
        vec![-0.9, -0.8, -0.7],
        vec![-0.3, 0.2, 1.0],
    ])
    .unwrap();
    let c = center(&x, &[0.0, 0.0, 0.0]).unwrap();
    let cones = enumerate_cones(&c, 1).unwrap();
    assert_eq!(cones.codes.len(), expected_regions(5, 3));
    let mut non_facets = 0;
    for code in &cones.codes {
        let mut facets = 0;
        for j in 0..5 {
            let mut cache = project_onto_plane(&c, j).unwrap();
            let lp = is_facet(&mut cache, code).unwrap();
            assert_eq!(
                lp,
                circle_touches_cone(&c, j, code, 200_000),
                "cone {code} point {j}"
            );
            facets += lp as usize;
            non_facets += !lp as usize;
        }
        // every cone of a 3-dimensional arrangement has at least 3 facets
        assert!(facets >= 3, "cone {code}");
    }
    assert!(non_facets > 0);

    // the cone around (0.28, -0.22, -0.94) is bounded by x1..x3 only;
    // the hyperplanes of x4 and x5 do not touch it
    let e = Direction::new(vec![0.28, -0.22, -0.94]).unwrap();
    let code = sign_vector(&c, &e).unwrap();
    let flags: Vec<bool> = (0..5)
        .map(|j| is_facet(&mut project_onto_plane(&c, j).unwrap(), &code).unwrap())
        .collect();
    assert_eq!(code.to_string(), "10010");
    assert_eq!(flags, vec![true, true, true, false, false]);
}

#[test]
fn generation_cap_holds_and_is_attained() {
    let mut attained = false;
    for d in 1..=4 {
        for n in d + 2..=10 {
            for seed in 0..10u64 {
                let x = gaussian(n, d, seed);
                let r = tukey_depth(&x, &query(&x, seed), &DepthOptions::with_seed(seed)).unwrap();
                assert!(r.diagnostics.generations as usize <= generation_cap(n));
                attained |= n == 5 && r.diagnostics.generations == 3;
            }
        }
    }
    assert_eq!(generation_cap(5), 3);
    assert!(attained);
}

#[test]
fn witness_direction_realises_the_count() {
    for d in 2..=4 {
        for seed in 0..20u64 {
            let x = gaussian(11, d, seed);
            let z = query(&x, seed);
            let r = tukey_depth(&x, &z, &DepthOptions::with_seed(seed)).unwrap();
            let v = r.witness_direction.expect("witness");
            let c = center(&x, &z).unwrap();
            let closed = (0..11)
                .filter(|&i| dot(c.point(i), v.as_slice()) >= 0.0)
                .count();
            assert_eq!(closed, r.count, "d={d} seed={seed}");
            if let Some(code) = &r.minimizing_code {
                let w = interior_direction(code, &c).unwrap();
                assert_eq!(&sign_vector(&c, &w).unwrap(), code);
            }
        }
    }
}
