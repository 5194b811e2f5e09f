//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's cohomology, homology or hull code.

#![allow(dead_code)]

use std::collections::HashMap;

use torex_core::StackyFan;

const PRIME: i64 = 1_000_003;

pub fn rays_i64(fan: &StackyFan) -> Vec<Vec<i64>> {
    fan.rays
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

pub fn cones_u64(fan: &StackyFan) -> Vec<u64> {
    fan.max_cones.iter().map(|c| c.0).collect()
}

fn rank_mod_p(mut m: Vec<Vec<i64>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] % PRIME != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c].rem_euclid(PRIME), PRIME - 2);
        for r in 0..rows {
            if r != rank && m[r][c] % PRIME != 0 {
                let f = m[r][c].rem_euclid(PRIME) * inv % PRIME;
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(PRIME);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut r = 1;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

/// Reduced homology ranks `H̃_{-1}, H̃_0, …` of the complex of all subsets
/// of `cone ∩ allowed` over the maximal cones.
pub fn reduced_homology(cones: &[u64], allowed: u64, len: usize) -> Vec<usize> {
    let mut faces: Vec<u64> = Vec::new();
    for &c in cones {
        let top = c & allowed;
        let mut s = top;
        loop {
            faces.push(s);
            if s == 0 {
                break;
            }
            s = (s - 1) & top;
        }
    }
    faces.sort_unstable();
    faces.dedup();
    let size = |f: u64| f.count_ones() as usize;
    let by: Vec<Vec<u64>> = (0..=len + 1)
        .map(|k| faces.iter().copied().filter(|&f| size(f) == k).collect())
        .collect();
    let boundary = |k: usize| -> usize {
        // C_k (size k) -> C_{k-1}
        if k == 0 || k > len || by[k].is_empty() {
            return 0;
        }
        let rows: Vec<Vec<i64>> = by[k - 1]
            .iter()
            .map(|&g| {
                by[k]
                    .iter()
                    .map(|&f| {
                        if f & g != g || size(f) != size(g) + 1 {
                            return 0;
                        }
                        let v = f & !g;
                        let below = (f & (v - 1)).count_ones();
                        if below % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect();
        rank_mod_p(rows)
    };
    (0..len).map(|k| by[k].len() - boundary(k) - boundary(k + 1)).collect()
}

/// `h^p(O(Σ r_i E_i))` as `Σ_m dim H̃_{p-1}` of the complex spanned by rays
/// with `r_i + m·v_i < 0`, summing over `m` in the box `[-b, b]^d`.
pub struct BruteCohomology {
    rays: Vec<Vec<i64>>,
    cones: Vec<u64>,
    d: usize,
    cache: HashMap<u64, Vec<usize>>,
}

impl BruteCohomology {
    pub fn new(fan: &StackyFan) -> Self {
        Self {
            rays: rays_i64(fan),
            cones: cones_u64(fan),
            d: fan.d,
            cache: HashMap::new(),
        }
    }

    pub fn dims(&mut self, r: &[i64], b: i64) -> Vec<usize> {
        let d = self.d;
        let mut out = vec![0usize; d + 1];
        let mut m = vec![-b; d];
        loop {
            let mut neg = 0u64;
            for (i, v) in self.rays.iter().enumerate() {
                let s: i64 = r[i] + v.iter().zip(&m).map(|(a, x)| a * x).sum::<i64>();
                if s < 0 {
                    neg |= 1 << i;
                }
            }
            let cones = &self.cones;
            let h = self
                .cache
                .entry(neg)
                .or_insert_with(|| reduced_homology(cones, neg, d + 1));
            // h[k] = H̃_{k-1}, contributes to H^k
            for p in 0..=d {
                out[p] += h[p];
            }
            let mut j = 0;
            loop {
                if j == d {
                    return out;
                }
                m[j] += 1;
                if m[j] <= b {
                    break;
                }
                m[j] = -b;
                j += 1;
            }
        }
    }
}

/// Vertices of the convex hull of integer points, by gift wrapping.
pub fn hull_vertex_count(points: &[(i128, i128)]) -> usize {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts.len();
    }
    let cross = |o: (i128, i128), a: (i128, i128), b: (i128, i128)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let start = pts[0];
    let mut count = 0;
    let mut cur = start;
    loop {
        count += 1;
        let mut next = if pts[0] == cur { pts[1] } else { pts[0] };
        for &q in &pts {
            if q == cur {
                continue;
            }
            let c = cross(cur, next, q);
            let farther = c == 0 && {
                let dn = (next.0 - cur.0).pow(2) + (next.1 - cur.1).pow(2);
                let dq = (q.0 - cur.0).pow(2) + (q.1 - cur.1).pow(2);
                dq > dn
            };
            if c < 0 || farther {
                next = q;
            }
        }
        cur = next;
        if cur == start || count > pts.len() {
            return count;
        }
    }
}
