//! Newton-polygon analysis over a base point: branch valuations and the
//! zero/pole divisors feeding the counting functions.
//!
//! An a-point over `z0` is counted with the total valuation of all Puiseux
//! branches at `z0`, read off the polygon. A segment of slope `s` and
//! horizontal length `ℓ` carries `ℓ` branches of valuation `−s`, so each
//! segment contributes the integer `|s|·ℓ = |Δord|`.

use num_rational::Ratio;

use crate::equation::AlgebroidEquation;
use crate::error::{Error, Result};
use crate::mapping::{pushforward, shifted, SmallFunctionTarget};
use crate::polyalg::distinct_roots;
use crate::scalar::{Cx, Scalar};

/// Lower-hull edge between two polygon vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullSegment {
    pub start: (usize, usize),
    pub end: (usize, usize),
    /// `Δord / Δt`.
    pub slope: Ratio<i64>,
    /// `Δt`.
    pub length: usize,
}

impl HullSegment {
    /// `slope × length`, always an integer.
    pub fn rise(&self) -> i64 {
        self.end.1 as i64 - self.start.1 as i64
    }
}

/// Points `(t, ord_{z0} B_t)` and their lower convex hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub points: Vec<(usize, usize)>,
    pub hull: Vec<HullSegment>,
}

impl NewtonPolygon {
    /// Total valuation of the branches that vanish at the base point.
    pub fn zero_order(&self) -> usize {
        self.hull.iter().filter(|s| s.rise() < 0).map(|s| (-s.rise()) as usize).sum()
    }

    /// Total pole order of the branches that blow up at the base point.
    pub fn pole_order(&self) -> usize {
        self.hull.iter().filter(|s| s.rise() > 0).map(|s| s.rise() as usize).sum()
    }

    pub fn hull_length(&self) -> usize {
        self.hull.iter().map(|s| s.length).sum()
    }
}

/// Points with multiplicities; the base point `0` is tracked separately.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DivisorList<T: Scalar> {
    pub entries: Vec<(Cx<T>, usize)>,
    pub origin_multiplicity: usize,
}

impl<T: Scalar> DivisorList<T> {
    pub fn new() -> Self {
        Self { entries: Vec::new(), origin_multiplicity: 0 }
    }

    /// Add `mult` at `z`, merging with an existing entry within `merge`.
    pub fn add(&mut self, z: Cx<T>, mult: usize, merge: T) {
        if mult == 0 {
            return;
        }
        if z.norm() <= merge {
            self.origin_multiplicity += mult;
            return;
        }
        if let Some(e) = self.entries.iter_mut().find(|(p, _)| (*p - z).norm() <= merge * (T::one() + z.norm())) {
            e.1 += mult;
        } else {
            self.entries.push((z, mult));
        }
    }

    pub fn total(&self) -> usize {
        self.origin_multiplicity + self.entries.iter().map(|e| e.1).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }
}

/// Newton polygon of `eq` over `z0`.
pub fn newton_polygon<T: Scalar>(eq: &AlgebroidEquation<T>, z0: Cx<T>) -> Result<NewtonPolygon> {
    let tol = T::lit(eq.tolerances().val);
    let mut points = Vec::new();
    for (t, c) in eq.coeffs().iter().enumerate() {
        if !c.is_zero() {
            points.push((t, c.valuation_with(z0, tol)?));
        }
    }
    Ok(NewtonPolygon { hull: lower_hull(&points), points })
}

fn cross(o: (usize, usize), a: (usize, usize), b: (usize, usize)) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

/// Lower convex hull of points sorted by `t`, in exact integer arithmetic.
fn lower_hull(points: &[(usize, usize)]) -> Vec<HullSegment> {
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &p in points {
        while stack.len() >= 2 && cross(stack[stack.len() - 2], stack[stack.len() - 1], p) <= 0 {
            stack.pop();
        }
        stack.push(p);
    }
    stack
        .windows(2)
        .map(|w| {
            let length = w[1].0 - w[0].0;
            let rise = w[1].1 as i64 - w[0].1 as i64;
            HullSegment { start: w[0], end: w[1], slope: Ratio::new(rise, length as i64), length }
        })
        .collect()
}

/// Poles of the branches over the roots of the leading coefficient.
pub fn pole_divisor<T: Scalar>(eq: &AlgebroidEquation<T>) -> Result<DivisorList<T>> {
    let merge = T::lit(eq.tolerances().merge);
    let mut d = DivisorList::new();
    for (z0, _) in eq.poles()? {
        d.add(z0, newton_polygon(eq, z0)?.pole_order(), merge);
    }
    Ok(d)
}

/// Zeros of `W − a`, read from the equation of `w − a` over the roots of its
/// constant coefficient.
pub fn zero_divisor<T: Scalar>(eq: &AlgebroidEquation<T>, target: &SmallFunctionTarget<T>) -> Result<DivisorList<T>> {
    let shifted_eq = match pushforward(&shifted(&target.expr)?, eq) {
        Ok(m) => m,
        Err(Error::PoleAlongCurve) => return Err(Error::TargetEqualsFunction),
        Err(e) => return Err(e),
    };
    zeros_of(&shifted_eq)
}

/// Zeros of the branches of `eq` over the roots of `B_0`.
pub fn zeros_of<T: Scalar>(eq: &AlgebroidEquation<T>) -> Result<DivisorList<T>> {
    let b0 = eq.coeff(0);
    if b0.is_zero() {
        return Err(Error::TargetEqualsFunction);
    }
    let merge = T::lit(eq.tolerances().merge);
    let mut d = DivisorList::new();
    for (z0, _) in distinct_roots(b0, eq.tolerances())? {
        d.add(z0, newton_polygon(eq, z0)?.zero_order(), merge);
    }
    Ok(d)
}

/// Largest point modulus in a divisor (0 for an empty divisor).
pub fn max_modulus<T: Scalar>(d: &DivisorList<T>) -> T {
    d.entries.iter().map(|(z, _)| z.norm()).fold(T::zero(), T::max)
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::mapping::{map_invert, MapExpr};
    use crate::scalar::creal;

    fn eq(c: &[&[f64]]) -> AlgebroidEquation<f64> {
        AlgebroidEquation::from_real(c).unwrap()
    }

    fn sqrt_z() -> AlgebroidEquation<f64> {
        eq(&[&[0.0, -1.0], &[], &[1.0]])
    }

    #[test]
    fn polygon_examples() {
        let p = newton_polygon(&sqrt_z(), creal(0.0)).unwrap();
        assert_eq!(p.points, vec![(0, 1), (2, 0)]);
        assert_eq!(p.hull.len(), 1);
        assert_eq!(p.hull[0].slope, Ratio::new(-1, 2));
        assert_eq!(p.hull[0].length, 2);

        let p = newton_polygon(&sqrt_z(), creal(4.0)).unwrap();
        assert_eq!(p.points, vec![(0, 0), (2, 0)]);
        assert_eq!(p.hull[0].slope, Ratio::zero());

        let p = newton_polygon(&eq(&[&[-1.0], &[], &[0.0, 1.0]]), creal(0.0)).unwrap();
        assert_eq!(p.points, vec![(0, 0), (2, 1)]);
        assert_eq!(p.hull[0].slope, Ratio::new(1, 2));
    }

    #[test]
    fn mixed_slopes() {
        // z W^2 + W + z: one branch ~ -z (zero), one ~ -1/z (pole)
        let e = eq(&[&[0.0, 1.0], &[1.0], &[0.0, 1.0]]);
        let p = newton_polygon(&e, creal(0.0)).unwrap();
        assert_eq!(p.hull.len(), 2);
        assert_eq!(p.zero_order(), 1);
        assert_eq!(p.pole_order(), 1);
        assert_eq!(p.hull_length(), 2);
    }

    #[test]
    fn pole_divisor_examples() {
        assert!(pole_divisor(&sqrt_z()).unwrap().is_empty());
        let d = pole_divisor(&eq(&[&[-1.0], &[], &[0.0, 1.0]])).unwrap();
        assert_eq!(d.origin_multiplicity, 1);
        assert_eq!(d.total(), 1);
        let d = pole_divisor(&eq(&[&[-1.0], &[0.0, 1.0]])).unwrap();
        assert_eq!(d.origin_multiplicity, 1);
    }

    #[test]
    fn zero_divisor_examples() {
        let zero = SmallFunctionTarget::constant(creal(0.0));
        let d = zero_divisor(&sqrt_z(), &zero).unwrap();
        assert_eq!((d.origin_multiplicity, d.total()), (1, 1));

        let one = SmallFunctionTarget::constant(creal(1.0));
        let d = zero_divisor(&sqrt_z(), &one).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert!((d.entries[0].0 - creal(1.0)).norm() < 1e-10);
        assert_eq!(d.entries[0].1, 1);

        let d = zero_divisor(&eq(&[&[0.0, 0.0, -1.0], &[1.0]]), &zero).unwrap();
        assert_eq!(d.origin_multiplicity, 2);

        let itself = SmallFunctionTarget::new(MapExpr::w(), "w");
        assert_eq!(zero_divisor(&sqrt_z(), &itself), Err(Error::TargetEqualsFunction));
    }

    #[test]
    fn inversion_duality() {
        let e = eq(&[&[-1.0, 0.0, 1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0, -1.0]]);
        let poles = pole_divisor(&e).unwrap();
        let inv = map_invert(&e).unwrap().equation().unwrap();
        let zeros = zero_divisor(&inv, &SmallFunctionTarget::constant(creal(0.0))).unwrap();
        assert_eq!(poles.total(), zeros.total());
        assert_eq!(poles.origin_multiplicity, zeros.origin_multiplicity);
        for (z, m) in &poles.entries {
            assert!(zeros.entries.iter().any(|(y, n)| (y - z).norm() < 1e-8 && n == m));
        }
    }
}
