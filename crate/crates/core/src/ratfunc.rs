//! Rational functions in canonical reduced form.
//!
//! A value is `num/den` with `gcd(num, den) = 1` and the denominator
//! integer-primitive with positive leading coefficient, so equality is
//! structural and identical inputs always produce bit-identical outputs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Int, MultiPoly, Rat, Var};

/// Errors from exact rational-function arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CasError {
    /// Denominator is identically zero.
    DivisionByZero,
    /// A substitution made the denominator identically zero.
    PoleEverywhere,
    /// The limit point is a genuine pole.
    PoleAtLimit,
    /// A series did not carry enough terms to determine the result.
    InsufficientTruncation,
    /// A series/expansion order outside the supported range.
    InvalidOrder,
}

impl fmt::Display for CasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CasError::DivisionByZero => f.write_str("division by zero"),
            CasError::PoleEverywhere => f.write_str("denominator vanishes identically"),
            CasError::PoleAtLimit => f.write_str("genuine pole at the limit point"),
            CasError::InsufficientTruncation => {
                f.write_str("series truncation too low for the requested coefficient")
            }
            CasError::InvalidOrder => f.write_str("invalid expansion order"),
        }
    }
}

/// A multivariate rational function over ℚ in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Canonical form of `num/den`. This is the normalization entry point:
    /// common factors cancel and the denominator is made integer-primitive
    /// with positive leading coefficient.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, CasError> {
        if den.is_zero() {
            return Err(CasError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            });
        }
        let g = MultiPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Normalizes content/sign only; requires `gcd(num, den) = 1`, `den ≠ 0`.
    fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            };
        }
        let mut c = den.rational_content();
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        let ci = c.recip();
        Self {
            num: num.scale(&ci),
            den: den.scale(&ci),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn variable(v: &Var) -> Self {
        Self::from_poly(MultiPoly::variable(v))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(c)` iff the value is the constant `c`.
    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// Sorted union of numerator and denominator variables.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.num.vars().to_vec();
        for v in self.den.vars() {
            if let Err(i) = vs.binary_search(v) {
                vs.insert(i, v.clone());
            }
        }
        vs
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn recip(&self) -> Result<Self, CasError> {
        if self.is_zero() {
            return Err(CasError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, CasError> {
        Ok(self * &rhs.recip()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, n: i64) -> Result<Self, CasError> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        Ok(Self::from_coprime(
            self.num.pow(n as u32),
            self.den.pow(n as u32),
        ))
    }

    /// Exact partial derivative (quotient rule, normalized).
    pub fn derivative(&self, v: &Var) -> Self {
        if !self.contains_var(v) {
            return Self::zero();
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone()).expect("nonzero den");
        }
        // f = n/d, f' = (n'·dh − n·(d'/g)) / (d·dh) with g = gcd(d, d'), d = g·dh
        let g = MultiPoly::gcd(&self.den, &dd);
        let dh = self.den.exact_div(&g).expect("gcd divides");
        let dg = dd.exact_div(&g).expect("gcd divides");
        let num = &(&dn * &dh) - &(&self.num * &dg);
        let den = &self.den * &dh;
        Self::new(num, den).expect("nonzero den")
    }

    /// Renames a variable; exponents add if `new` is already present.
    pub fn rename_var(&self, old: &Var, new: &Var) -> Self {
        if old == new || !self.contains_var(old) {
            return self.clone();
        }
        Self::new(
            self.num.rename_var(old, new),
            self.den.rename_var(old, new),
        )
        .expect("rename keeps den nonzero")
    }

    /// Substitutes `v := g` exactly.
    pub fn substitute(&self, v: &Var, g: &Self) -> Result<Self, CasError> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let num = Self::compose_poly(&self.num, v, g);
        let den = Self::compose_poly(&self.den, v, g);
        if den.is_zero() {
            return Err(CasError::PoleEverywhere);
        }
        num.try_div(&den).map_err(|_| CasError::PoleEverywhere)
    }

    /// Horner evaluation of a polynomial at a rational-function point.
    fn compose_poly(p: &MultiPoly, v: &Var, g: &Self) -> Self {
        let coeffs = p.coeffs_in(v);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::from_poly(c.clone());
        }
        acc
    }

    /// Evaluates one variable at a rational point. Errors if the denominator
    /// vanishes identically on that slice.
    pub fn eval_var(&self, v: &Var, a: &Rat) -> Result<Self, CasError> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let den = self.den.eval_var(v, a);
        if den.is_zero() {
            return Err(CasError::PoleEverywhere);
        }
        Self::new(self.num.eval_var(v, a), den)
    }

    /// Multiplicity of `(v - a)` in `p` (`p ≠ 0`).
    pub(crate) fn poly_order_at(p: &MultiPoly, v: &Var, a: &Rat) -> u32 {
        debug_assert!(!p.is_zero());
        let lin = MultiPoly::linear(v, a);
        let mut ord = 0;
        let mut cur = p.clone();
        while cur.eval_var(v, a).is_zero() {
            cur = cur.exact_div(&lin).expect("root divides");
            ord += 1;
        }
        ord
    }

    /// Order of vanishing at `v = a`: positive for zeros, negative for poles,
    /// `None` for the zero function.
    pub fn order_at(&self, v: &Var, a: &Rat) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let on = Self::poly_order_at(&self.num, v, a) as i64;
        let od = Self::poly_order_at(&self.den, v, a) as i64;
        Some(on - od)
    }

    /// Coefficient of `(v - a)^{-1}` in the Laurent expansion at `a`; a
    /// rational function of the remaining variables. Regular points give 0.
    pub fn residue_at(&self, v: &Var, a: &Rat) -> Self {
        match self.order_at(v, a) {
            None => Self::zero(),
            Some(ord) if ord >= 0 => Self::zero(),
            Some(_) => {
                let ser = crate::series::LocalSeries::expand(self, v, a, -1)
                    .expect("rational function expansion");
                ser.coeff(-1)
            }
        }
    }

    /// Finite limit as `v → a` where `a` is a rational function of the other
    /// variables. Removable singularities are cancelled exactly.
    pub fn limit_at(&self, v: &Var, a: &Self) -> Result<Self, CasError> {
        if a.contains_var(v) {
            return Err(CasError::InvalidOrder);
        }
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let mut nc: Vec<Self> = self
            .num
            .coeffs_in(v)
            .into_iter()
            .map(Self::from_poly)
            .collect();
        let mut dc: Vec<Self> = self
            .den
            .coeffs_in(v)
            .into_iter()
            .map(Self::from_poly)
            .collect();
        let mut on = 0i64;
        let mut od = 0i64;
        while let Some(next) = Self::deflate_at(&nc, a) {
            nc = next;
            on += 1;
        }
        while let Some(next) = Self::deflate_at(&dc, a) {
            dc = next;
            od += 1;
        }
        if on < od {
            return Err(CasError::PoleAtLimit);
        }
        if on > od {
            return Ok(Self::zero());
        }
        let nv = Self::eval_uni(&nc, a);
        let dv = Self::eval_uni(&dc, a);
        nv.try_div(&dv).map_err(|_| CasError::PoleAtLimit)
    }

    /// Horner value of a coefficient list at a rational-function point.
    fn eval_uni(coeffs: &[Self], a: &Self) -> Self {
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * a) + c;
        }
        acc
    }

    /// True iff the denominator, factored per variable in `vars`, vanishes
    /// only at the given points: after dividing out all `(v - p)` factors the
    /// remaining polynomial must be constant.
    pub fn poles_only_at(&self, vars: &[Var], points: &[Rat]) -> bool {
        let mut rest = self.den().clone();
        for v in vars {
            for p in points {
                let lin = MultiPoly::linear(v, p);
                while rest.eval_var(v, p).is_zero() {
                    rest = rest.exact_div(&lin).expect("root divides");
                }
            }
        }
        rest.as_constant().is_some()
    }

    /// If the value at `a` is zero, returns the quotient coefficients after
    /// dividing by `(v - a)`; otherwise `None`.
    fn deflate_at(coeffs: &[Self], a: &Self) -> Option<Vec<Self>> {
        if !Self::eval_uni(coeffs, a).is_zero() {
            return None;
        }
        let d = coeffs.len() - 1;
        if d == 0 {
            // a nonzero polynomial of degree 0 cannot vanish
            return None;
        }
        // synthetic division: q_{d-1} = c_d, q_{k-1} = c_k + a·q_k
        let mut q = vec![Self::zero(); d];
        q[d - 1] = coeffs[d].clone();
        for k in (1..d).rev() {
            q[k - 1] = &coeffs[k] + &(a * &q[k]);
        }
        Some(q)
    }
}

impl core::ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = MultiPoly::gcd(&self.den, &rhs.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.exact_div(&g).expect("gcd divides"),
                rhs.den.exact_div(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &db) + &(&rhs.num * &da);
        let den = &self.den * &db;
        RationalFunction::new(num, den).expect("nonzero den")
    }
}

impl core::ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl core::ops::Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl core::ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // cross-cancellation keeps the product reduced without a final gcd
        let g1 = MultiPoly::gcd(&self.num, &rhs.den);
        let g2 = MultiPoly::gcd(&rhs.num, &self.den);
        let n1 = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.exact_div(&g1).expect("gcd divides")
        };
        let d2 = if g1.is_one() {
            rhs.den.clone()
        } else {
            rhs.den.exact_div(&g1).expect("gcd divides")
        };
        let n2 = if g2.is_one() {
            rhs.num.clone()
        } else {
            rhs.num.exact_div(&g2).expect("gcd divides")
        };
        let d1 = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.exact_div(&g2).expect("gcd divides")
        };
        RationalFunction::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl core::ops::Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::try_div`] when the
    /// divisor may vanish.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.try_div(rhs).expect("division by zero")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All rational roots of a nonzero univariate polynomial, with
/// multiplicities, plus a flag telling whether they exhaust the degree.
pub fn rational_roots(p: &MultiPoly) -> (Vec<(Rat, u32)>, bool) {
    assert!(!p.is_zero(), "rational_roots of zero polynomial");
    assert!(p.vars().len() <= 1, "rational_roots needs univariate input");
    if p.vars().is_empty() {
        return (Vec::new(), true);
    }
    let v = p.vars()[0].clone();
    let prim = p.primitive_abs();
    let mut coeffs: Vec<Rat> = prim
        .coeffs_in(&v)
        .into_iter()
        .map(|c| c.as_constant().expect("univariate"))
        .collect();
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    // factor out z^k
    let mut zero_mult = 0u32;
    while coeffs[0].is_zero() {
        coeffs.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    let mut deg = coeffs.len() - 1;
    if deg == 0 {
        return (roots, true);
    }
    let trailing = coeffs[0].numer().abs();
    let leading = coeffs[deg].numer().abs();
    let (pd, p_ok) = divisors(&trailing);
    let (qd, q_ok) = divisors(&leading);
    let mut candidates: Vec<Rat> = Vec::new();
    for pn in &pd {
        for qn in &qd {
            let c = Rat::new(pn.clone(), qn.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    candidates.sort();
    for cand in candidates {
        let mut mult = 0u32;
        loop {
            if deg == 0 {
                break;
            }
            // Horner evaluation and deflation in one pass
            let mut q = vec![Rat::zero(); deg];
            let mut acc = coeffs[deg].clone();
            for k in (0..deg).rev() {
                q[k] = acc.clone();
                acc = &coeffs[k] + &(&cand * &acc);
            }
            if !acc.is_zero() {
                break;
            }
            coeffs = q;
            deg -= 1;
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
        if deg == 0 {
            break;
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, deg == 0 && p_ok && q_ok)
}

/// Positive divisors of `|n|` and whether the factorization was complete.
/// Trial division up to a fixed bound; an incomplete factorization can only
/// under-report divisors, which callers treat as rejection.
fn divisors(n: &Int) -> (Vec<Int>, bool) {
    if n.is_zero() {
        return (vec![Int::one()], true);
    }
    let mut rest = n.abs();
    let mut factors: Vec<(Int, u32)> = Vec::new();
    let mut complete = true;
    let mut d = Int::from(2);
    let bound = Int::from(1_000_000u64);
    while &(&d * &d) <= &rest && d <= bound {
        if rest.is_multiple_of(&d) {
            let mut e = 0u32;
            while rest.is_multiple_of(&d) {
                rest = rest / &d;
                e += 1;
            }
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    if rest > Int::one() {
        factors.push((rest.clone(), 1));
        if &(&d * &d) <= &rest {
            // stopped at the trial bound; remainder may be composite
            complete = false;
        }
    }
    let mut divs = vec![Int::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d0 in &divs {
            let mut pk = Int::one();
            for _ in 0..=e {
                next.push(d0 * &pk);
                pk = &pk * &p;
            }
        }
        divs = next;
        if divs.len() > 4096 {
            return (divs, false);
        }
    }
    (divs, complete)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat_frac, rat_int};

    fn v(n: &str) -> Var {
        Var::new(n)
    }

    fn parse1(num: MultiPoly, den: MultiPoly) -> RationalFunction {
        RationalFunction::new(num, den).unwrap()
    }

    fn zp() -> MultiPoly {
        MultiPoly::variable(&v("z"))
    }

    #[test]
    fn normalize_examples() {
        // (2z, 4z^2) -> 1/(2z)
        let f = parse1(zp().scale(&rat_int(2)), (&zp() * &zp()).scale(&rat_int(4)));
        assert_eq!(f, parse1(MultiPoly::one(), zp().scale(&rat_int(2))));
        // (z^2-1, z-1) -> z+1
        let g = parse1(
            &(&zp() * &zp()) - &MultiPoly::one(),
            &zp() - &MultiPoly::one(),
        );
        assert_eq!(g, RationalFunction::from_poly(&zp() + &MultiPoly::one()));
        // ((z1-z2)^2, (z2-z1)^2) -> 1
        let z1 = MultiPoly::variable(&v("z1"));
        let z2 = MultiPoly::variable(&v("z2"));
        let d = &z1 - &z2;
        let h = parse1(&d * &d, &(-&d) * &(-&d));
        assert!(h.is_one());
        // zero denominator
        assert_eq!(
            RationalFunction::new(MultiPoly::one(), MultiPoly::zero()),
            Err(CasError::DivisionByZero)
        );
    }

    #[test]
    fn derivative_examples() {
        let zv = v("z");
        // d/dz z^3 = 3z^2
        let f = RationalFunction::from_poly(zp().pow(3));
        assert_eq!(
            f.derivative(&zv),
            RationalFunction::from_poly(zp().pow(2).scale(&rat_int(3)))
        );
        // d/dz 1/(z-a) = -1/(z-a)^2
        let a = MultiPoly::variable(&v("a"));
        let den = &zp() - &a;
        let g = parse1(MultiPoly::one(), den.clone());
        let expect = parse1(-&MultiPoly::one(), &den * &den);
        assert_eq!(g.derivative(&zv), expect);
        // constants differentiate to zero
        assert!(RationalFunction::from_poly(a).derivative(&zv).is_zero());
    }

    #[test]
    fn substitute_examples() {
        let zv = v("z");
        // f = 1/z, g = z^2 -> 1/z^2
        let f = parse1(MultiPoly::one(), zp());
        let g = RationalFunction::from_poly(zp().pow(2));
        assert_eq!(
            f.substitute(&zv, &g).unwrap(),
            parse1(MultiPoly::one(), zp().pow(2))
        );
        // f = u - v, v -> u gives 0
        let u = RationalFunction::variable(&v("u"));
        let h = &u - &RationalFunction::variable(&v("v"));
        assert!(h.substitute(&v("v"), &u).unwrap().is_zero());
        // f = 1/(z-1), z -> 1 is a pole everywhere
        let p = parse1(MultiPoly::one(), &zp() - &MultiPoly::one());
        assert_eq!(
            p.substitute(&zv, &RationalFunction::one()),
            Err(CasError::PoleEverywhere)
        );
    }

    #[test]
    fn residue_examples() {
        let zv = v("z");
        // 1/z at 0 -> 1
        let f = parse1(MultiPoly::one(), zp());
        assert!(f.residue_at(&zv, &Rat::zero()).is_one());
        // 1/z^2 at 0 -> 0
        let g = parse1(MultiPoly::one(), zp().pow(2));
        assert!(g.residue_at(&zv, &Rat::zero()).is_zero());
        // partial-fractions oracle: residue of 1/((z-q) z^2) in z at 0 is
        // the coefficient of 1/z in -1/(q z) - 1/z^2·(1/1)..., i.e. -1/q^2
        let q = MultiPoly::variable(&v("q"));
        let h = parse1(MultiPoly::one(), &(&zp() - &q) * &zp().pow(2));
        let expect = parse1(-&MultiPoly::one(), &q * &q);
        assert_eq!(h.residue_at(&zv, &Rat::zero()), expect);
        // and the residue at z = q is +1/q^2 (sum of residues of a O(z^-3) function is 0
        // together with the double pole contributing 0 at infinity)
        // direct check via partial fractions: 1/((z-q)z^2) = 1/q^2·1/(z-q) - 1/q^2·1/z - 1/q·1/z^2
        let sum = &h.residue_at(&zv, &Rat::zero())
            + &parse1(MultiPoly::one(), &q * &q);
        assert!(sum.is_zero());
    }

    #[test]
    fn residue_of_total_derivative_vanishes() {
        let zv = v("z");
        // f with poles at 0 and 1
        let f = parse1(
            &zp().pow(3) + &MultiPoly::from_int(7),
            &zp().pow(2) * &(&zp() - &MultiPoly::one()).pow(3),
        );
        let df = f.derivative(&zv);
        assert!(df.residue_at(&zv, &Rat::zero()).is_zero());
        assert!(df.residue_at(&zv, &Rat::one()).is_zero());
        assert!(df.residue_at(&zv, &rat_int(5)).is_zero());
    }

    #[test]
    fn limit_examples() {
        let uv = v("u");
        let vv = v("v");
        let u = MultiPoly::variable(&uv);
        let w = MultiPoly::variable(&vv);
        // (u^2 - v^2)/(u - v) as v -> u gives 2u
        let f = parse1(&(&u * &u) - &(&w * &w), &u - &w);
        let lim = f.limit_at(&vv, &RationalFunction::variable(&uv)).unwrap();
        assert_eq!(lim, RationalFunction::from_poly(u.scale(&rat_int(2))));
        // 1/(u - v) as v -> u is a pole
        let g = parse1(MultiPoly::one(), &u - &w);
        assert_eq!(
            g.limit_at(&vv, &RationalFunction::variable(&uv)),
            Err(CasError::PoleAtLimit)
        );
    }

    #[test]
    fn airy_cylinder_diagonal_limit() {
        // 1/(4 z1 z2 (z1+z2)^2) as z2 -> z1 gives 1/(16 z1^4)
        let z1v = v("z1");
        let z2v = v("z2");
        let z1 = MultiPoly::variable(&z1v);
        let z2 = MultiPoly::variable(&z2v);
        let den = (&(&z1 * &z2) * &(&z1 + &z2).pow(2)).scale(&rat_int(4));
        let f = parse1(MultiPoly::one(), den);
        let lim = f.limit_at(&z2v, &RationalFunction::variable(&z1v)).unwrap();
        let expect = parse1(MultiPoly::one(), z1.pow(4).scale(&rat_int(16)));
        assert_eq!(lim, expect);
    }

    #[test]
    fn equals_examples() {
        let f = parse1(&zp().pow(2) - &MultiPoly::one(), &zp() - &MultiPoly::one());
        let g = RationalFunction::from_poly(&zp() + &MultiPoly::one());
        assert_eq!(f, g);
        let z1 = MultiPoly::variable(&v("z1"));
        let z2 = MultiPoly::variable(&v("z2"));
        let a = parse1(MultiPoly::one(), (&z1 - &z2).pow(2));
        let b = parse1(MultiPoly::one(), (&z2 - &z1).pow(2));
        assert_eq!(a, b);
        let c = parse1(MultiPoly::one(), zp());
        let d = parse1(MultiPoly::one(), zp().pow(2));
        assert_ne!(c, d);
        // equals(f,g) iff normalize(f-g) has zero numerator
        assert!((&f - &g).is_zero());
    }

    #[test]
    fn rational_roots_examples() {
        // 2z -> root 0
        let (r, full) = rational_roots(&zp().scale(&rat_int(2)));
        assert_eq!(r, vec![(Rat::zero(), 1)]);
        assert!(full);
        // 2z + 1 -> root -1/2
        let (r, full) = rational_roots(&(&zp().scale(&rat_int(2)) + &MultiPoly::one()));
        assert_eq!(r, vec![(rat_frac(-1, 2), 1)]);
        assert!(full);
        // z^2 + 1 -> none, degree not exhausted
        let (r, full) = rational_roots(&(&zp().pow(2) + &MultiPoly::one()));
        assert!(r.is_empty());
        assert!(!full);
        // (z-1)^2 (z+2) -> multiplicities
        let p = &(&zp() - &MultiPoly::one()).pow(2) * &(&zp() + &MultiPoly::from_int(2));
        let (r, full) = rational_roots(&p);
        assert_eq!(r, vec![(rat_int(-2), 1), (rat_int(1), 2)]);
        assert!(full);
    }
}
