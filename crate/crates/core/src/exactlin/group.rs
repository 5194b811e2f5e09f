use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::{row_hermite, smith_normal_form};
use crate::bigjson;

/// Element of a finitely generated abelian group in canonical coordinates:
/// a free part in `Z^k` and torsion residues reduced modulo their factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupElement {
    #[serde(with = "bigjson::vec")]
    pub free: Vec<BigInt>,
    #[serde(with = "bigjson::vec")]
    pub torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn from_i64(free: &[i64], torsion: &[i64]) -> Self {
        Self {
            free: free.iter().map(|&x| BigInt::from(x)).collect(),
            torsion: torsion.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }
}

/// `Z^ambient / im(M)` presented in Smith coordinates.
#[derive(Clone, Debug)]
pub struct FgAbelianGroup {
    ambient: usize,
    torsion: Vec<BigInt>,
    free_rows: IntMatrix,
    torsion_rows: IntMatrix,
    free_section: IntMatrix,
    torsion_section: IntMatrix,
}

/// Cokernel of the integer matrix `m` acting on column vectors of
/// `Z^{m.rows()}`.
///
/// Free coordinates are normalized so that the images of the ambient unit
/// vectors form a matrix in row Hermite normal form.
pub fn cokernel(m: &IntMatrix) -> FgAbelianGroup {
    let ambient = m.rows();
    let snf = smith_normal_form(m);
    let rank = snf.invariant_factors.len();

    let tors_idx: Vec<usize> = (0..rank)
        .filter(|&i| snf.d[(i, i)] > BigInt::one())
        .collect();
    let free_idx: Vec<usize> = (rank..ambient).collect();
    let torsion: Vec<BigInt> = tors_idx.iter().map(|&i| snf.d[(i, i)].clone()).collect();

    let mut torsion_rows = snf.u.select_rows(&tors_idx);
    for (r, d) in torsion.iter().enumerate() {
        for j in 0..ambient {
            torsion_rows[(r, j)] = torsion_rows[(r, j)].mod_floor(d);
        }
    }
    let torsion_section = snf.u_inv.select_cols(&tors_idx);

    let (free_rows, t, t_inv) = row_hermite(&snf.u.select_rows(&free_idx));
    debug_assert_eq!(t.rows(), free_idx.len());
    let free_section = snf.u_inv.select_cols(&free_idx).mul(&t_inv);

    FgAbelianGroup {
        ambient,
        torsion,
        free_rows,
        torsion_rows,
        free_section,
        torsion_section,
    }
}

impl FgAbelianGroup {
    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn free_rank(&self) -> usize {
        self.free_rows.rows()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Linear map `Z^ambient -> Z^k` onto the free coordinates.
    pub fn free_projection(&self) -> &IntMatrix {
        &self.free_rows
    }

    pub fn project(&self, x: &[BigInt]) -> GroupElement {
        assert_eq!(x.len(), self.ambient, "ambient length mismatch");
        let free = self.free_rows.mul_vec(x);
        let torsion = self
            .torsion_rows
            .mul_vec(x)
            .into_iter()
            .zip(&self.torsion)
            .map(|(t, d)| t.mod_floor(d))
            .collect();
        GroupElement { free, torsion }
    }

    pub fn section(&self, e: &GroupElement) -> Vec<BigInt> {
        assert_eq!(e.free.len(), self.free_rank());
        assert_eq!(e.torsion.len(), self.torsion.len());
        let mut out = self.free_section.mul_vec(&e.free);
        for (o, t) in out.iter_mut().zip(self.torsion_section.mul_vec(&e.torsion)) {
            *o += t;
        }
        out
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank()],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.combine(a, b, |x, y| x + y)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.combine(a, b, |x, y| x - y)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.sub(&self.zero(), a)
    }

    pub fn is_valid(&self, e: &GroupElement) -> bool {
        e.free.len() == self.free_rank()
            && e.torsion.len() == self.torsion.len()
            && e.torsion
                .iter()
                .zip(&self.torsion)
                .all(|(t, d)| !t.is_negative() && t < d)
    }

    /// Every torsion value, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut v = prefix.clone();
                    v.push(k.clone());
                    next.push(v);
                    k += 1;
                }
            }
            out = next;
        }
        out
    }

    fn combine(
        &self,
        a: &GroupElement,
        b: &GroupElement,
        op: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> GroupElement {
        GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| op(x, y)).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion)
                .map(|((x, y), d)| op(x, y).mod_floor(d))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn weighted_line_generators() {
        let g = cokernel(&IntMatrix::from_i64(&[vec![3], vec![-2]]));
        assert_eq!(g.free_rank(), 1);
        assert!(g.torsion().is_empty());
        assert_eq!(g.project(&ints(&[1, 0])).free, ints(&[2]));
        assert_eq!(g.project(&ints(&[0, 1])).free, ints(&[3]));
        assert!(g.project(&ints(&[3, -2])).free.iter().all(Zero::is_zero));
    }

    #[test]
    fn empty_relations_give_free_group() {
        let g = cokernel(&IntMatrix::zeros(2, 0));
        assert_eq!(g.free_rank(), 2);
        assert!(g.torsion().is_empty());
    }

    #[test]
    fn torsion_generators() {
        let g = cokernel(&IntMatrix::from_i64(&[vec![2], vec![-2]]));
        assert_eq!(g.torsion(), &ints(&[2])[..]);
        assert_eq!(g.project(&ints(&[1, 0])), GroupElement::from_i64(&[1], &[1]));
        assert_eq!(g.project(&ints(&[0, 1])), GroupElement::from_i64(&[1], &[0]));
    }

    #[test]
    fn section_is_right_inverse() {
        let g = cokernel(&IntMatrix::from_i64(&[vec![2, 0], vec![-2, 4], vec![0, 6]]));
        for e in [
            GroupElement {
                free: ints(&[5]),
                torsion: vec![BigInt::from(1)],
            },
            g.zero(),
        ] {
            if g.is_valid(&e) {
                assert_eq!(g.project(&g.section(&e)), e);
            }
        }
    }
}
