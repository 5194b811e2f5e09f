//! Picard groups of stacky fans and the functionals `f`, `α` on them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, TorexError};
use crate::exactlin::{
    cokernel, dot, int_to_rat, nullspace, primitive_integer, rat, smith_normal_form,
    solve_rational, FgAbelianGroup, GroupElement, IntMatrix, Rat, RatMatrix,
};
use crate::fan::{FanClass, StackyFan};
use crate::geometry::{affine_solutions, minimize_with_equalities};

/// `Pic = Z^n / {Σ (w·v_i) e_i}`.
#[derive(Clone, Debug)]
pub struct PicardGroup {
    fan: StackyFan,
    group: FgAbelianGroup,
    relations: IntMatrix,
}

pub fn picard_group(fan: &StackyFan) -> Result<PicardGroup> {
    PicardGroup::new(fan)
}

impl PicardGroup {
    pub fn new(fan: &StackyFan) -> Result<Self> {
        fan.ensure_valid()?;
        let relations = IntMatrix::from_rows(fan.rays.clone());
        let relations = if fan.n() == 0 {
            IntMatrix::zeros(0, fan.d)
        } else {
            relations
        };
        Ok(Self {
            fan: fan.clone(),
            group: cokernel(&relations),
            relations,
        })
    }

    pub fn fan(&self) -> &StackyFan {
        &self.fan
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Free rank `k = n - d`.
    pub fn k(&self) -> usize {
        self.group.free_rank()
    }

    pub fn n(&self) -> usize {
        self.fan.n()
    }

    pub fn d(&self) -> usize {
        self.fan.d
    }

    pub fn torsion(&self) -> &[BigInt] {
        self.group.torsion()
    }

    pub fn class_of(&self, r: &[BigInt]) -> GroupElement {
        self.group.project(r)
    }

    pub fn class_of_i64(&self, r: &[i64]) -> GroupElement {
        self.class_of(&r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    /// Class of the divisor `E_i`.
    pub fn e(&self, i: usize) -> GroupElement {
        let mut v = vec![BigInt::zero(); self.n()];
        v[i] = BigInt::one();
        self.class_of(&v)
    }

    /// Class of `Σ_{i ∈ s} E_i`.
    pub fn e_sum(&self, s: crate::complex::RaySet) -> GroupElement {
        let v: Vec<BigInt> = (0..self.n())
            .map(|i| BigInt::from(s.contains(i) as i64))
            .collect();
        self.class_of(&v)
    }

    pub fn representative(&self, c: &GroupElement) -> Vec<BigInt> {
        self.group.section(c)
    }

    /// `Σ (w·v_i) e_i`.
    pub fn relation(&self, w: &[BigInt]) -> Vec<BigInt> {
        self.relations.mul_vec(w)
    }

    pub fn canonical_class(&self) -> GroupElement {
        self.class_of(&vec![BigInt::from(-1); self.n()])
    }

    /// Free coordinates of a real divisor `Σ x_i E_i`.
    pub fn real_proj(&self, x: &[Rat]) -> Vec<Rat> {
        self.group.free_projection().to_rational().mul_vec(x)
    }

    /// Free coordinates of a class as rationals.
    pub fn real(&self, c: &GroupElement) -> Vec<Rat> {
        int_to_rat(&c.free)
    }

    /// Free images of `E_0..E_{n-1}` as columns of a `k × n` matrix.
    pub fn generator_matrix(&self) -> RatMatrix {
        self.group.free_projection().to_rational()
    }

    pub fn generator(&self, i: usize) -> Vec<Rat> {
        self.generator_matrix().col(i)
    }

    /// Covector `φ` on `Pic_R` with `φ(E_i) = values[i]`. The values must
    /// vanish on the relations.
    pub fn functional_from_values(&self, values: &[Rat]) -> Result<Vec<Rat>> {
        let g = self.generator_matrix();
        solve_rational(&g.transpose(), values).ok_or_else(|| {
            TorexError::InvalidArgument("values do not descend to the Picard group".into())
        })
    }

    pub fn is_valid_class(&self, c: &GroupElement) -> bool {
        self.group.is_valid(c)
    }

    pub fn check_class(&self, c: &GroupElement) -> Result<()> {
        if self.is_valid_class(c) {
            Ok(())
        } else {
            Err(TorexError::InvalidClass(format!(
                "expected {} free coordinates and torsion residues modulo {:?}",
                self.k(),
                self.torsion().iter().map(ToString::to_string).collect::<Vec<_>>()
            )))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.group.add(a, b)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.group.sub(a, b)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.group.neg(a)
    }

    pub fn zero(&self) -> GroupElement {
        self.group.zero()
    }

    /// Class with free part `free` and every torsion value.
    pub fn classes_over(&self, free: &[BigInt]) -> Vec<GroupElement> {
        self.group
            .torsion_elements()
            .into_iter()
            .map(|t| GroupElement {
                free: free.to_vec(),
                torsion: t,
            })
            .collect()
    }
}

/// The relation `r > 0`, `Σ r = 1`, `Σ r_i v_i = 0` maximizing `min r_i`,
/// ties broken by lexicographically smallest `r`.
pub fn f_functional(fan: &StackyFan) -> Result<Vec<Rat>> {
    let n = fan.n();
    let d = fan.d;
    // unknowns (r_0..r_{n-1}, t)
    let mut eq_rows: Vec<Vec<Rat>> = Vec::new();
    let mut eq_b: Vec<Rat> = Vec::new();
    let mut sum = vec![rat(1); n];
    sum.push(Rat::zero());
    eq_rows.push(sum);
    eq_b.push(rat(1));
    for k in 0..d {
        let mut row: Vec<Rat> = (0..n).map(|i| Rat::from_integer(fan.rays[i][k].clone())).collect();
        row.push(Rat::zero());
        eq_rows.push(row);
        eq_b.push(Rat::zero());
    }
    // t - r_i ≤ 0
    let rows: Vec<(Vec<Rat>, Rat, bool)> = (0..n)
        .map(|i| {
            let mut a = vec![Rat::zero(); n + 1];
            a[i] = rat(-1);
            a[n] = rat(1);
            (a, Rat::zero(), false)
        })
        .collect();
    let mut objective = vec![Rat::zero(); n + 1];
    objective[n] = rat(-1);
    let eq = RatMatrix::from_rows(eq_rows.clone());
    let best = minimize_with_equalities(&eq, &eq_b, &rows, &objective)
        .ok_or(TorexError::NoInteriorRelation)?;
    let t_star = -best;
    if !t_star.is_positive() {
        return Err(TorexError::NoInteriorRelation);
    }
    let mut fix_t = vec![Rat::zero(); n + 1];
    fix_t[n] = rat(1);
    eq_rows.push(fix_t);
    eq_b.push(t_star);
    for i in 0..n {
        let eq = RatMatrix::from_rows(eq_rows.clone());
        let (_, basis) = affine_solutions(&eq, &eq_b).ok_or(TorexError::NoInteriorRelation)?;
        if basis.is_empty() {
            break;
        }
        let mut obj = vec![Rat::zero(); n + 1];
        obj[i] = rat(1);
        let m = minimize_with_equalities(&eq, &eq_b, &rows, &obj)
            .ok_or(TorexError::NoInteriorRelation)?;
        eq_rows.push(obj);
        eq_b.push(m);
    }
    let eq = RatMatrix::from_rows(eq_rows);
    let (x, _) = affine_solutions(&eq, &eq_b).ok_or(TorexError::NoInteriorRelation)?;
    Ok(x[..n].to_vec())
}

/// The relation `Σ α_i = 0`, `Σ α_i v_i = 0` of a Picard rank 2 fan, as a
/// primitive integer vector with positive first entry.
pub fn alpha_functional(fan: &StackyFan) -> Result<Vec<BigInt>> {
    let k = fan.rank();
    if k != 2 {
        return Err(TorexError::NotRankTwo(k));
    }
    if fan.classify()? != FanClass::Fano {
        return Err(TorexError::NotFano);
    }
    let n = fan.n();
    let mut rows = vec![vec![rat(1); n]];
    for j in 0..fan.d {
        rows.push((0..n).map(|i| Rat::from_integer(fan.rays[i][j].clone())).collect());
    }
    let ns = nullspace(&RatMatrix::from_rows(rows));
    if ns.len() != 1 {
        return Err(TorexError::InvalidFan("rays do not span".into()));
    }
    let mut a = primitive_integer(&ns[0]);
    if let Some(i) = a.iter().position(Zero::is_zero) {
        return Err(TorexError::ZeroAlphaEntry(i));
    }
    if a[0].is_negative() {
        a.iter_mut().for_each(|x| *x = -x.clone());
    }
    Ok(a)
}

/// `Pic_R` modulo the line through the image of `K`.
#[derive(Clone, Debug)]
pub struct PicHat {
    /// `(k-1) × k` integer projection.
    pub projection: IntMatrix,
    /// `k × (k-1)` integer section with `projection · section = 1`.
    pub section: IntMatrix,
    /// Free coordinates of `K`.
    pub kappa: Vec<Rat>,
}

pub fn pic_hat(pic: &PicardGroup) -> Result<PicHat> {
    let k = pic.k();
    if k < 2 {
        return Err(TorexError::RankTooLow(k));
    }
    let kappa = pic.canonical_class().free;
    let col = IntMatrix::from_cols(k, vec![kappa.clone()]);
    let snf = smith_normal_form(&col);
    let rest: Vec<usize> = (1..k).collect();
    Ok(PicHat {
        projection: snf.u.select_rows(&rest),
        section: snf.u_inv.select_cols(&rest),
        kappa: int_to_rat(&kappa),
    })
}

impl PicHat {
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn hat_of(&self, x: &[Rat]) -> Vec<Rat> {
        self.projection.to_rational().mul_vec(x)
    }

    pub fn lift(&self, y: &[Rat]) -> Vec<Rat> {
        self.section.to_rational().mul_vec(y)
    }

    /// Lift into the hyperplane `φ = 0`, given `φ(κ) ≠ 0`.
    pub fn lift_into_kernel(&self, y: &[Rat], phi: &[Rat]) -> Vec<Rat> {
        let s = self.lift(y);
        let c = dot(phi, &s) / dot(phi, &self.kappa);
        s.iter().zip(&self.kappa).map(|(a, b)| a - &c * b).collect()
    }

    /// `Ê_i` for every ray.
    pub fn e_hats(&self, pic: &PicardGroup) -> Vec<Vec<Rat>> {
        (0..pic.n()).map(|i| self.hat_of(&pic.generator(i))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_frac;
    use crate::fixtures;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn weighted_line_group() {
        let pic = picard_group(&fixtures::weighted_line()).unwrap();
        assert_eq!(pic.k(), 1);
        assert_eq!(pic.e(0).free, z(&[2]));
        assert_eq!(pic.e(1).free, z(&[3]));
        assert_eq!(pic.canonical_class().free, z(&[-5]));
    }

    #[test]
    fn torsion_line_group() {
        let pic = picard_group(&fixtures::torsion_line()).unwrap();
        assert_eq!(pic.torsion(), &z(&[2])[..]);
        assert_eq!(pic.e(0), GroupElement::from_i64(&[1], &[1]));
        assert_eq!(pic.e(1), GroupElement::from_i64(&[1], &[0]));
    }

    #[test]
    fn p2_and_square() {
        let pic = picard_group(&fixtures::p2()).unwrap();
        for i in 0..3 {
            assert_eq!(pic.e(i).free, z(&[1]));
        }
        assert_eq!(pic.canonical_class().free, z(&[-3]));
        let sq = picard_group(&fixtures::p1xp1()).unwrap();
        // opposite rays share a class
        assert_eq!(sq.e(0), sq.e(2));
        assert_eq!(sq.e(1), sq.e(3));
        assert_ne!(sq.e(0), sq.e(1));
        let two_e0 = sq.add(&sq.e(0), &sq.e(0));
        let two_e1 = sq.add(&sq.e(1), &sq.e(1));
        assert_eq!(sq.canonical_class(), sq.neg(&sq.add(&two_e0, &two_e1)));
    }

    #[test]
    fn relations_are_killed() {
        for (_, fan) in fixtures::all() {
            let pic = picard_group(&fan).unwrap();
            for j in 0..fan.d {
                let mut w = vec![BigInt::zero(); fan.d];
                w[j] = BigInt::one();
                assert_eq!(pic.class_of(&pic.relation(&w)), pic.zero());
            }
        }
    }

    #[test]
    fn f_values() {
        assert_eq!(f_functional(&fixtures::p1xp1()).unwrap(), vec![rat_frac(1, 4); 4]);
        assert_eq!(f_functional(&fixtures::p2()).unwrap(), vec![rat_frac(1, 3); 3]);
        assert_eq!(
            f_functional(&fixtures::weighted_line()).unwrap(),
            vec![rat_frac(2, 5), rat_frac(3, 5)]
        );
    }

    #[test]
    fn f_constraints_on_pentagon() {
        let fan = fixtures::pentagon();
        let r = f_functional(&fan).unwrap();
        assert!(r.iter().all(|x| x.is_positive()));
        assert_eq!(r.iter().fold(Rat::zero(), |a, b| a + b), rat(1));
        for k in 0..2 {
            let s = (0..5).fold(Rat::zero(), |a, i| a + &r[i] * Rat::from_integer(fan.rays[i][k].clone()));
            assert!(s.is_zero());
        }
        let pic = picard_group(&fan).unwrap();
        let phi = pic.functional_from_values(&r).unwrap();
        assert_eq!(dot(&phi, &pic.real(&pic.canonical_class())), rat(-1));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_functional(&fixtures::p1xp1()).unwrap(), z(&[1, -1, 1, -1]));
        assert!(matches!(
            alpha_functional(&fixtures::p2()),
            Err(TorexError::NotRankTwo(1))
        ));
        let a = alpha_functional(&fixtures::p1xp2()).unwrap();
        assert!(a.iter().any(|x| x.is_positive()) && a.iter().any(|x| x.is_negative()));
    }

    #[test]
    fn hat_kills_canonical_class() {
        let pic = picard_group(&fixtures::pentagon()).unwrap();
        let hat = pic_hat(&pic).unwrap();
        assert_eq!(hat.dim(), 2);
        assert!(hat.hat_of(&pic.real(&pic.canonical_class())).iter().all(Zero::is_zero));
        let eh = hat.e_hats(&pic);
        let total = eh.iter().fold(vec![Rat::zero(); 2], |a, e| vec![&a[0] + &e[0], &a[1] + &e[1]]);
        assert!(total.iter().all(Zero::is_zero));
        assert!(matches!(pic_hat(&picard_group(&fixtures::p2()).unwrap()), Err(TorexError::RankTooLow(1))));
    }
}
