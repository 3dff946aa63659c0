//! Algebroid mappings realized as rational expressions `m(z, w)`: their
//! arithmetic and differentiation, and the pushforward building the
//! equation of `m ∘ W`.

use std::fmt;

use num_traits::One;

use crate::equation::AlgebroidEquation;
use crate::error::{Error, Result};
use crate::polyalg::{resultant_param, BiPolynomial, ParamPolynomial, Polynomial, Series};
use crate::scalar::{creal, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Rational expression `num(z, w) / den(z, w)`.
///
/// Kept reduced by the bivariate GCD heuristics; not reduced modulo the
/// defining equation, so two expressions may agree on the curve while
/// differing syntactically (see [`MapExpr::agrees_on_curve`]).
#[derive(Clone, PartialEq)]
pub struct MapExpr<T: Scalar> {
    num: BiPolynomial<T>,
    den: BiPolynomial<T>,
}

/// Field operation for [`map_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<T: Scalar> MapExpr<T> {
    pub fn new(num: BiPolynomial<T>, den: BiPolynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: BiPolynomial<T>, den: BiPolynomial<T>) -> Self {
        if num.is_zero() {
            return Self { num, den: BiPolynomial::one() };
        }
        let (num, den) = match num.gcd(&den) {
            Ok(g) if g.deg_w() > 0 || g.deg_z() > 0 => match (num.div_exact(&g), den.div_exact(&g)) {
                (Ok(n), Ok(d)) => (n, d),
                _ => (num, den),
            },
            _ => (num, den),
        };
        let lc = den.leading_w().leading();
        Self { num: num.scale(Cx::<T>::one() / lc), den: den.scale(Cx::<T>::one() / lc) }
    }

    pub fn from_poly(num: BiPolynomial<T>) -> Self {
        Self { num, den: BiPolynomial::one() }
    }

    /// The identity mapping `w`.
    pub fn w() -> Self {
        Self::from_poly(BiPolynomial::w())
    }

    pub fn z() -> Self {
        Self::from_poly(BiPolynomial::z())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::from_poly(BiPolynomial::constant(c))
    }

    pub fn from_z(p: Polynomial<T>) -> Self {
        Self::from_poly(BiPolynomial::from_z(p))
    }

    pub fn num(&self) -> &BiPolynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &BiPolynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Independent of `w`.
    pub fn is_meromorphic(&self) -> bool {
        self.num.deg_w() == 0 && self.den.deg_w() == 0
    }

    pub fn eval(&self, z: Cx<T>, w: Cx<T>) -> Cx<T> {
        self.num.eval(z, w) / self.den.eval(z, w)
    }

    /// Syntactic equality of the two rational expressions.
    pub fn equals(&self, other: &Self) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        let scale = lhs.max_abs().max(rhs.max_abs());
        (&lhs - &rhs).max_abs() <= T::lit(Tolerances::for_scalar::<T>().gcd) * scale
    }

    /// `m(z0 + h, w(h))` for a branch series `w`.
    pub fn series_along(&self, z0: Cx<T>, w: &Series<T>) -> Result<Series<T>> {
        let n = Series::of_bivariate(&self.num, z0, w);
        let d = Series::of_bivariate(&self.den, z0, w);
        n.div(&d)
    }

    /// Whether the two expressions agree on every branch at `samples`.
    pub fn agrees_on_curve(&self, other: &Self, eq: &AlgebroidEquation<T>, samples: &[Cx<T>]) -> Result<bool> {
        let tol = T::lit(eq.tolerances().gcd).sqrt();
        for &z in samples {
            for w in eq.finite_roots_at(z)? {
                let (a, b) = (self.eval(z, w), other.eval(z, w));
                if (a - b).norm() > tol * (T::one() + a.norm().max(b.norm())) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl<T: Scalar> fmt::Debug for MapExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

/// A target `a_j` for counting functions, with its smallness assertion.
#[derive(Clone, Debug)]
pub struct SmallFunctionTarget<T: Scalar> {
    pub expr: MapExpr<T>,
    pub label: String,
    /// Smallness with respect to `W` is asserted by the user, not decided.
    pub asserted_small: bool,
}

impl<T: Scalar> SmallFunctionTarget<T> {
    pub fn new(expr: MapExpr<T>, label: impl Into<String>) -> Self {
        Self { expr, label: label.into(), asserted_small: true }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(MapExpr::constant(c), format!("{c}"))
    }
}

/// Field operations on rational expressions in `(z, w)`.
pub fn map_arith<T: Scalar>(op: MapOp, a: &MapExpr<T>, b: &MapExpr<T>) -> Result<MapExpr<T>> {
    match op {
        MapOp::Add | MapOp::Sub => {
            let l = &a.num * &b.den;
            let r = &b.num * &a.den;
            let num = if op == MapOp::Add { &l + &r } else { &l - &r };
            let scale = l.max_abs().max(r.max_abs());
            let num = num.chop(T::lit(Tolerances::for_scalar::<T>().coeff) * scale);
            MapExpr::new(num, &a.den * &b.den)
        }
        MapOp::Mul => MapExpr::new(&a.num * &b.num, &a.den * &b.den),
        MapOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            MapExpr::new(&a.num * &b.den, &a.den * &b.num)
        }
    }
}

/// Equation of `−W`: `B_t ↦ (−1)^{v−t} B_t`.
pub fn map_negate<T: Scalar>(eq: &AlgebroidEquation<T>) -> AlgebroidEquation<T> {
    let v = eq.v();
    let coeffs = eq
        .coeffs()
        .iter()
        .enumerate()
        .map(|(t, c)| if (v - t) % 2 == 1 { -c } else { c.clone() })
        .collect();
    rebuild(eq, coeffs).expect("negation preserves validity")
}

/// Result of inverting `W`.
#[derive(Clone, Debug, PartialEq)]
pub enum Inverted<T: Scalar> {
    Equation(AlgebroidEquation<T>),
    /// `1/W ≡ ∞` for `W ≡ 0`.
    Infinity,
}

impl<T: Scalar> Inverted<T> {
    pub fn equation(self) -> Option<AlgebroidEquation<T>> {
        match self {
            Inverted::Equation(e) => Some(e),
            Inverted::Infinity => None,
        }
    }
}

/// Equation of `1/W`: `X^v Ψ(z, 1/X)`, i.e. the coefficients reversed.
pub fn map_invert<T: Scalar>(eq: &AlgebroidEquation<T>) -> Result<Inverted<T>> {
    if eq.coeff(0).is_zero() {
        return if eq.v() == 1 { Ok(Inverted::Infinity) } else { Err(Error::ZeroBranch) };
    }
    let coeffs = eq.coeffs().iter().rev().cloned().collect();
    Ok(Inverted::Equation(rebuild(eq, coeffs)?))
}

fn rebuild<T: Scalar>(eq: &AlgebroidEquation<T>, coeffs: Vec<Polynomial<T>>) -> Result<AlgebroidEquation<T>> {
    AlgebroidEquation::with_tolerances(coeffs, *eq.tolerances())
}

/// Finish a resultant in `(z, X)` as an equation in `X` of degree `v`.
fn equation_from_resultant<T: Scalar>(
    res: BiPolynomial<T>,
    eq: &AlgebroidEquation<T>,
) -> Result<AlgebroidEquation<T>> {
    if res.is_zero() || res.deg_w() != eq.v() {
        return Err(Error::PoleAlongCurve);
    }
    Ok(rebuild(eq, res.cols().to_vec())?.normalized())
}

/// Equation of the branch derivatives `W'`, from
/// `Res_Y(Ψ(z, Y), Ψ_z(z, Y) + Ψ_W(z, Y)·X)` with the `X`-free content removed.
pub fn map_derivative<T: Scalar>(eq: &AlgebroidEquation<T>) -> Result<AlgebroidEquation<T>> {
    if !eq.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    let psi = eq.to_bivariate();
    let (pz, pw) = (psi.partial_z(), psi.partial_w());
    let n = pz.deg_w().max(pw.deg_w()) + 1;
    let q = ParamPolynomial::new(
        (0..n)
            .map(|j| BiPolynomial::new(vec![pz.coeff_w(j), pw.coeff_w(j)]))
            .collect(),
    );
    let res = resultant_param(&ParamPolynomial::from_zw(&psi), &q);
    equation_from_resultant(res, eq)
}

/// `d/dz m(z, w(z)) = m_z + m_w · (−Ψ_z / Ψ_W)` as a rational expression.
pub fn map_expr_derivative<T: Scalar>(m: &MapExpr<T>, eq: &AlgebroidEquation<T>) -> Result<MapExpr<T>> {
    if !eq.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    let psi = eq.to_bivariate();
    let (pz, pw) = (psi.partial_z(), psi.partial_w());
    let (n, d) = (&m.num, &m.den);
    // m_z = (n_z d − n d_z)/d², m_w = (n_w d − n d_w)/d²
    let mz = &(&n.partial_z() * d) - &(n * &d.partial_z());
    let mw = &(&n.partial_w() * d) - &(n * &d.partial_w());
    let num = &(&mz * &pw) - &(&mw * &pz);
    let den = &(d * d) * &pw;
    MapExpr::new(num, den)
}

/// Equation of `m ∘ W`, from `Res_Y(Ψ(z, Y), X·den(z, Y) − num(z, Y))`.
pub fn pushforward<T: Scalar>(m: &MapExpr<T>, eq: &AlgebroidEquation<T>) -> Result<AlgebroidEquation<T>> {
    let n = m.num.deg_w().max(m.den.deg_w()) + 1;
    let q = ParamPolynomial::new(
        (0..n)
            .map(|j| BiPolynomial::new(vec![-&m.num.coeff_w(j), m.den.coeff_w(j)]))
            .collect(),
    );
    let res = resultant_param(&ParamPolynomial::from_zw(&eq.to_bivariate()), &q);
    equation_from_resultant(res, eq)
}

/// `w − a` for a target `a`.
pub fn shifted<T: Scalar>(a: &MapExpr<T>) -> Result<MapExpr<T>> {
    map_arith(MapOp::Sub, &MapExpr::w(), a)
}

/// `1 / (w − a)` for a target `a`.
pub fn reciprocal_shift<T: Scalar>(a: &MapExpr<T>) -> Result<MapExpr<T>> {
    map_arith(MapOp::Div, &MapExpr::constant(creal(T::one())), &shifted(a)?)
}
