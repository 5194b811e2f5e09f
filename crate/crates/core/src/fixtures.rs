//! Named example fans and a generator of random convex lattice polygons.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::int_to_rat;
use crate::fan::{face_fan_from_points, StackyFan};
use crate::geometry::convex_hull_2d;

fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn polygon(rows: &[&[i64]]) -> StackyFan {
    let rays = ints(rows);
    let n = rays.len();
    let cones = (0..n)
        .map(|i| crate::complex::RaySet::from_indices([i, (i + 1) % n]))
        .collect();
    StackyFan::new(2, rays, cones, false).expect("fixture is valid")
}

/// P¹.
pub fn p1() -> StackyFan {
    StackyFan::from_i64(1, &[vec![1], vec![-1]], &[vec![0], vec![1]]).unwrap()
}

/// Weighted projective line with rays (3), (-2).
pub fn weighted_line() -> StackyFan {
    StackyFan::from_i64(1, &[vec![3], vec![-2]], &[vec![0], vec![1]]).unwrap()
}

/// Rays (2), (-2): Picard group with a Z/2 factor.
pub fn torsion_line() -> StackyFan {
    StackyFan::from_i64(1, &[vec![2], vec![-2]], &[vec![0], vec![1]]).unwrap()
}

/// P², rays listed counter-clockwise.
pub fn p2() -> StackyFan {
    StackyFan::from_i64(
        2,
        &[vec![1, 0], vec![0, 1], vec![-1, -1]],
        &[vec![0, 1], vec![1, 2], vec![2, 0]],
    )
    .unwrap()
}

/// P¹ × P¹, clockwise.
pub fn p1xp1() -> StackyFan {
    polygon(&[&[0, 1], &[1, 0], &[0, -1], &[-1, 0]])
}

/// The pentagon, clockwise.
pub fn pentagon() -> StackyFan {
    polygon(&[&[0, 1], &[1, 1], &[1, 0], &[0, -1], &[-1, 0]])
}

/// The hexagon, clockwise.
pub fn hexagon() -> StackyFan {
    polygon(&[&[0, 1], &[1, 1], &[1, 0], &[0, -1], &[-1, -1], &[-1, 0]])
}

/// P¹ × P², Picard rank 2 in dimension 3.
pub fn p1xp2() -> StackyFan {
    let rays = [
        vec![1, 0, 0],
        vec![-1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![0, -1, -1],
    ];
    let mut cones = Vec::new();
    for a in [0, 1] {
        for (b, c) in [(2, 3), (3, 4), (4, 2)] {
            cones.push(vec![a, b, c]);
        }
    }
    StackyFan::from_i64(3, &rays, &cones).unwrap()
}

/// All named fixtures.
pub fn all() -> Vec<(&'static str, StackyFan)> {
    vec![
        ("p1", p1()),
        ("weighted_line", weighted_line()),
        ("torsion_line", torsion_line()),
        ("p2", p2()),
        ("p1xp1", p1xp1()),
        ("pentagon", pentagon()),
        ("hexagon", hexagon()),
        ("p1xp2", p1xp2()),
    ]
}

/// Random convex lattice polygon with exactly `n` vertices in `[-radius, radius]²`,
/// origin strictly inside, rays clockwise.
pub fn random_convex_polygon(n: usize, seed: u64, radius: i64) -> StackyFan {
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k = rng.gen_range(n..=n + 4);
        let pts: Vec<Vec<BigInt>> = (0..k)
            .map(|_| {
                vec![
                    BigInt::from(rng.gen_range(-radius..=radius)),
                    BigInt::from(rng.gen_range(-radius..=radius)),
                ]
            })
            .collect();
        let rat_pts: Vec<_> = pts.iter().map(|p| int_to_rat(p)).collect();
        let hull = convex_hull_2d(&rat_pts);
        if hull.len() != n {
            continue;
        }
        let verts: Vec<Vec<BigInt>> = hull
            .iter()
            .map(|p| p.iter().map(|x| x.to_integer()).collect())
            .collect();
        if let Ok(fan) = face_fan_from_points(&verts) {
            return fan;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_polygons_are_clockwise_fano() {
        for n in 3..=8 {
            for seed in 0..3 {
                let fan = random_convex_polygon(n, seed, 4);
                assert_eq!(fan.n(), n);
                assert!(fan.is_clockwise());
                assert_eq!(fan.classify().unwrap(), crate::fan::FanClass::Fano);
            }
        }
    }

    #[test]
    fn named_orientations() {
        assert!(pentagon().is_clockwise());
        assert!(hexagon().is_clockwise());
        assert!(p1xp1().is_clockwise());
        assert!(!p2().is_clockwise());
    }
}
