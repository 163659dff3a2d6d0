//! Spectral curves `(x(z), y(z))` with validated ramification data.
//!
//! Admissible curves have simple rational ramification points on both sides,
//! cross-regularity at them, and no coinciding ramification. The local sheet
//! involution at a ramification point is computed order by order as a
//! truncated series; it is never expressed in closed algebraic form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::poly::{Rat, Var};
use crate::ratfunc::{rational_roots, CasError, RationalFunction};
use crate::series::LocalSeries;

/// Which covering a ramification point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::X => f.write_str("x"),
            Side::Y => f.write_str("y"),
        }
    }
}

/// Rejection reasons for curve validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveError {
    /// One of the coverings is constant.
    DegenerateCurve(Side),
    /// The derivative numerator has irrational (or undetected) roots.
    IrrationalRamification(Side),
    /// A ramification point of multiplicity above one.
    NonSimpleRamification(Side, Rat),
    /// The two coverings ramify at the same point.
    CoincidingRamification(Rat),
    /// The other covering is singular or critical at a ramification point.
    RegularityViolation(Side, Rat),
    /// Requested series order below one.
    InvalidOrder,
    /// Arithmetic failure bubbled up from the exact kernel.
    Cas(CasError),
}

impl From<CasError> for CurveError {
    fn from(e: CasError) -> Self {
        CurveError::Cas(e)
    }
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::DegenerateCurve(s) => write!(f, "{} is constant", s),
            CurveError::IrrationalRamification(s) => write!(
                f,
                "d{} has roots outside the rationals; curve not supported",
                s
            ),
            CurveError::NonSimpleRamification(s, p) => {
                write!(f, "{} has a non-simple ramification point at {}", s, p)
            }
            CurveError::CoincidingRamification(p) => {
                write!(f, "x and y both ramify at {}", p)
            }
            CurveError::RegularityViolation(s, p) => write!(
                f,
                "{} is singular or critical at the other covering's ramification point {}",
                s, p
            ),
            CurveError::InvalidOrder => f.write_str("series order must be at least 1"),
            CurveError::Cas(e) => write!(f, "{}", e),
        }
    }
}

/// The ramification points of one covering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationSet {
    pub points: Vec<Rat>,
    pub which: Side,
}

/// A validated genus-zero spectral curve.
#[derive(Clone, PartialEq, Eq)]
pub struct SpectralCurve {
    var: Var,
    x: RationalFunction,
    y: RationalFunction,
    dx: RationalFunction,
    dy: RationalFunction,
    x_ram: Vec<Rat>,
    y_ram: Vec<Rat>,
}

impl SpectralCurve {
    /// Validates initial data `(x(z), y(z))` and computes ramification sets.
    pub fn validate(
        x: RationalFunction,
        y: RationalFunction,
        var: &Var,
    ) -> Result<Self, CurveError> {
        let dx = x.derivative(var);
        let dy = y.derivative(var);
        if dx.is_zero() {
            return Err(CurveError::DegenerateCurve(Side::X));
        }
        if dy.is_zero() {
            return Err(CurveError::DegenerateCurve(Side::Y));
        }
        let x_ram = Self::simple_rational_roots(&dx, Side::X)?;
        let y_ram = Self::simple_rational_roots(&dy, Side::Y)?;
        for a in &x_ram {
            if y_ram.contains(a) {
                return Err(CurveError::CoincidingRamification(a.clone()));
            }
        }
        // cross-regularity: the other covering must be finite with nonzero
        // differential at each ramification point
        for a in &x_ram {
            let regular = y.eval_var(var, a).is_ok();
            let critical = match dy.eval_var(var, a) {
                Ok(v) => v.is_zero(),
                Err(_) => true,
            };
            if !regular || critical {
                return Err(CurveError::RegularityViolation(Side::Y, a.clone()));
            }
        }
        for b in &y_ram {
            let regular = x.eval_var(var, b).is_ok();
            let critical = match dx.eval_var(var, b) {
                Ok(v) => v.is_zero(),
                Err(_) => true,
            };
            if !regular || critical {
                return Err(CurveError::RegularityViolation(Side::X, b.clone()));
            }
        }
        Ok(SpectralCurve {
            var: var.clone(),
            x,
            y,
            dx,
            dy,
            x_ram,
            y_ram,
        })
    }

    /// Roots of the (reduced) derivative numerator; rejects irrational or
    /// repeated roots. Reduction guarantees these are never poles of the
    /// covering itself.
    fn simple_rational_roots(df: &RationalFunction, side: Side) -> Result<Vec<Rat>, CurveError> {
        let num = df.num();
        if num.as_constant().is_some() {
            return Ok(Vec::new());
        }
        let (roots, exhausted) = rational_roots(num);
        if !exhausted {
            return Err(CurveError::IrrationalRamification(side));
        }
        let mut points = Vec::with_capacity(roots.len());
        for (r, mult) in roots {
            if mult > 1 {
                return Err(CurveError::NonSimpleRamification(side, r));
            }
            points.push(r);
        }
        points.sort();
        Ok(points)
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn x(&self) -> &RationalFunction {
        &self.x
    }

    pub fn y(&self) -> &RationalFunction {
        &self.y
    }

    pub fn dx(&self) -> &RationalFunction {
        &self.dx
    }

    pub fn dy(&self) -> &RationalFunction {
        &self.dy
    }

    /// Ramification points of `x` (the α's), sorted.
    pub fn x_ram(&self) -> &[Rat] {
        &self.x_ram
    }

    /// Ramification points of `y` (the β's), sorted.
    pub fn y_ram(&self) -> &[Rat] {
        &self.y_ram
    }

    pub fn ramification(&self, which: Side) -> RamificationSet {
        RamificationSet {
            points: match which {
                Side::X => self.x_ram.clone(),
                Side::Y => self.y_ram.clone(),
            },
            which,
        }
    }

    /// Interchanges the two coverings. Valid curves stay valid; the
    /// ramification sets swap roles.
    pub fn swap(&self) -> SpectralCurve {
        SpectralCurve {
            var: self.var.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
            dx: self.dy.clone(),
            dy: self.dx.clone(),
            x_ram: self.y_ram.clone(),
            y_ram: self.x_ram.clone(),
        }
    }

    /// The local Galois involution at the simple ramification point `alpha`:
    /// `σ(α + t) = α − t + Σ_{k≥2} c_k t^k` with
    /// `x(σ(α+t)) − x(α+t) = O(t^{order+1})`, solved order by order.
    pub fn galois_involution_series(
        &self,
        alpha: &Rat,
        order: i64,
    ) -> Result<LocalSeries, CurveError> {
        if order < 1 {
            return Err(CurveError::InvalidOrder);
        }
        debug_assert!(self.x_ram.contains(alpha), "not a ramification point");
        let xs = LocalSeries::expand(&self.x, &self.var, alpha, order + 1)?;
        let x2 = xs
            .try_coeff(2)?
            .as_constant()
            .expect("univariate expansion");
        debug_assert!(!x2.is_zero(), "simple ramification");
        // coefficients of σ − α, starting from −t
        let mut sig: Vec<RationalFunction> = vec![
            RationalFunction::constant(alpha.clone()),
            RationalFunction::from_int(-1),
        ];
        let two_x2 = RationalFunction::constant(&x2 + &x2);
        for m in 2..=order {
            sig.push(RationalFunction::zero());
            let guess = LocalSeries::from_coeffs(&self.var, alpha, 0, sig.clone(), order);
            let err = xs.compose(&guess)?.sub(&xs);
            // unknown c_m responds linearly: coeff_{m+1}(err) = 2 x₂ c_m
            let e = err.try_coeff(m + 1)?;
            let cm = &e / &two_x2;
            sig[m as usize] = cm;
        }
        let sigma = LocalSeries::from_coeffs(&self.var, alpha, 0, sig, order);
        // the defining equation holds through the requested order
        let resid = xs.compose(&sigma)?.sub(&xs.truncate_to(order + 1));
        debug_assert!(
            resid.order().map(|o| o > order).unwrap_or(true),
            "involution solve failed"
        );
        Ok(sigma)
    }
}

impl fmt::Debug for SpectralCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}, y = {}", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat_frac, rat_int, MultiPoly};

    fn zvar() -> Var {
        Var::new("z")
    }

    fn zp() -> MultiPoly {
        MultiPoly::variable(&zvar())
    }

    fn poly(p: MultiPoly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }

    pub(crate) fn airy() -> SpectralCurve {
        SpectralCurve::validate(poly(zp().pow(2)), poly(zp()), &zvar()).unwrap()
    }

    pub(crate) fn quad() -> SpectralCurve {
        SpectralCurve::validate(poly(zp().pow(2)), poly(&zp().pow(2) + &zp()), &zvar()).unwrap()
    }

    #[test]
    fn validate_airy() {
        let c = airy();
        assert_eq!(c.x_ram(), &[Rat::zero()]);
        assert!(c.y_ram().is_empty());
    }

    #[test]
    fn validate_quad() {
        let c = quad();
        assert_eq!(c.x_ram(), &[Rat::zero()]);
        assert_eq!(c.y_ram(), &[rat_frac(-1, 2)]);
    }

    #[test]
    fn reject_coinciding() {
        let e = SpectralCurve::validate(poly(zp().pow(2)), poly(zp().pow(2)), &zvar());
        assert_eq!(e.unwrap_err(), CurveError::CoincidingRamification(Rat::zero()));
    }

    #[test]
    fn reject_non_simple() {
        let e = SpectralCurve::validate(poly(zp().pow(3)), poly(zp()), &zvar());
        assert_eq!(
            e.unwrap_err(),
            CurveError::NonSimpleRamification(Side::X, Rat::zero())
        );
    }

    #[test]
    fn reject_irrational() {
        // dy = 3z^2 + 1 has no rational roots
        let y = &zp().pow(3) + &zp();
        let e = SpectralCurve::validate(poly(zp().pow(2)), poly(y), &zvar());
        assert_eq!(e.unwrap_err(), CurveError::IrrationalRamification(Side::Y));
    }

    #[test]
    fn reject_singular_at_ramification() {
        // y = 1/z has a pole at the ramification point 0 of x = z^2
        let y = RationalFunction::new(MultiPoly::one(), zp()).unwrap();
        let e = SpectralCurve::validate(poly(zp().pow(2)), y, &zvar());
        assert_eq!(
            e.unwrap_err(),
            CurveError::RegularityViolation(Side::Y, Rat::zero())
        );
    }

    #[test]
    fn swap_involution() {
        let c = quad();
        let s = c.swap();
        assert_eq!(s.x_ram(), &[rat_frac(-1, 2)]);
        assert_eq!(s.y_ram(), &[Rat::zero()]);
        assert_eq!(s.swap(), c);
    }

    #[test]
    fn galois_airy_is_global() {
        let c = airy();
        let s = c.galois_involution_series(&Rat::zero(), 8).unwrap();
        // σ(t) = −t exactly
        assert_eq!(s.coeff(1), RationalFunction::from_int(-1));
        for k in 2..=8 {
            assert!(s.coeff(k).is_zero(), "c_{} should vanish", k);
        }
    }

    #[test]
    fn galois_cubic_correction() {
        // x = z^2 + z^3 at 0: σ(t) = −t − t^2 + O(t^3)
        let x = &zp().pow(2) + &zp().pow(3);
        let c = SpectralCurve::validate(poly(x), poly(zp()), &zvar()).unwrap();
        let s = c.galois_involution_series(&Rat::zero(), 2).unwrap();
        assert_eq!(s.coeff(1), RationalFunction::from_int(-1));
        assert_eq!(s.coeff(2), RationalFunction::from_int(-1));
    }

    #[test]
    fn galois_is_involution() {
        let x = &zp().pow(2) + &zp().pow(3).scale(&rat_int(5));
        let c = SpectralCurve::validate(poly(x), poly(zp()), &zvar()).unwrap();
        let order = 7;
        let s = c.galois_involution_series(&Rat::zero(), order).unwrap();
        // σ(σ(t)) = t through the requested order
        let ss = s.compose(&s).unwrap();
        let idt = LocalSeries::identity(&zvar(), &Rat::zero(), order);
        let diff = ss.sub(&idt);
        assert!(diff.order().map(|o| o > order).unwrap_or(true));
        // σ'(0) = −1
        assert_eq!(s.coeff(1), RationalFunction::from_int(-1));
    }

    #[test]
    fn galois_off_origin() {
        // x = z^2 + z ramifies at -1/2; solve there and check the equation
        let c = SpectralCurve::validate(poly(&zp().pow(2) + &zp()), poly(zp()), &zvar()).unwrap();
        let a = rat_frac(-1, 2);
        assert_eq!(c.x_ram(), &[a.clone()]);
        let order = 6;
        let s = c.galois_involution_series(&a, order).unwrap();
        let xs = LocalSeries::expand(c.x(), &zvar(), &a, order + 1).unwrap();
        let resid = xs.compose(&s).unwrap().sub(&xs.truncate_to(order));
        assert!(resid.order().map(|o| o > order).unwrap_or(true));
        // x = z^2 + z has the global involution z ↦ −1 − z, so σ = −1 − (α+t) = α − t
        assert_eq!(s.coeff(0), RationalFunction::constant(a));
        assert_eq!(s.coeff(1), RationalFunction::from_int(-1));
        assert!(s.coeff(2).is_zero());
    }
}
