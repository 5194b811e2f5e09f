use num_traits::Signed;

use crate::exactlin::Rat;

/// `a × b` for planar vectors.
pub fn cross2(a: &[Rat], b: &[Rat]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn turn(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    let u = [&a[0] - &o[0], &a[1] - &o[1]];
    let v = [&b[0] - &o[0], &b[1] - &o[1]];
    cross2(&u, &v)
}

/// True iff `points`, in the given order, are the clockwise vertices of a
/// strictly convex polygon.
///
/// Every other point must lie strictly to the right of each directed edge,
/// which rules out repeats, collinear triples and polygons that wind twice.
pub fn convex_cyclic_check(points: &[Vec<Rat>]) -> bool {
    let n = points.len();
    if n < 3 || points.iter().any(|p| p.len() != 2) {
        return false;
    }
    (0..n).all(|i| {
        let a = &points[i];
        let b = &points[(i + 1) % n];
        (0..n)
            .filter(|&j| j != i && j != (i + 1) % n)
            .all(|j| turn(a, b, &points[j]).is_negative())
    })
}

/// Vertices of the convex hull in clockwise order, starting from the
/// lexicographically smallest point; collinear boundary points are dropped.
pub fn convex_hull_2d(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut pts: Vec<Vec<Rat>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    // monotone chain; keeps only strict left turns, i.e. counter-clockwise
    let mut lower: Vec<Vec<Rat>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Rat>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // counter-clockwise -> clockwise, keeping the first vertex
    lower[1..].reverse();
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<Rat>> {
        v.iter().map(|&(x, y)| vec![rat(x), rat(y)]).collect()
    }

    #[test]
    fn pentagon_is_clockwise_convex() {
        let p = pts(&[(0, 1), (1, 1), (1, 0), (0, -1), (-1, 0)]);
        assert!(convex_cyclic_check(&p));
        let mut rev = p.clone();
        rev.reverse();
        assert!(!convex_cyclic_check(&rev));
    }

    #[test]
    fn collinear_triple_fails() {
        assert!(!convex_cyclic_check(&pts(&[(0, 0), (1, 0), (2, 0), (1, -1)])));
        assert!(!convex_cyclic_check(&pts(&[(0, 1), (1, 0)])));
    }

    #[test]
    fn pentagram_order_fails() {
        let p = pts(&[(0, 2), (1, -2), (-2, 0), (2, 0), (-1, -2)]);
        assert!(!convex_cyclic_check(&p));
    }

    #[test]
    fn hull_drops_interior_and_edge_points() {
        let h = convex_hull_2d(&pts(&[(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 1)]));
        assert_eq!(h, pts(&[(0, 0), (0, 2), (2, 2), (2, 0)]));
        assert!(convex_cyclic_check(&h));
    }
}
