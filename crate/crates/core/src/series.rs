//! Truncated Laurent series in one local variable.
//!
//! A `LocalSeries` expands values in `t = var − base` with coefficients that
//! are rational functions of the remaining variables. Every series carries
//! `trunc`: all coefficients of exponents `≤ trunc` are exactly known, and
//! arithmetic lowers the truncation to the weakest operand, so a requested
//! coefficient is either exact or an explicit error — never silently wrong.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::poly::{MultiPoly, Rat, Var};
use crate::ratfunc::{CasError, RationalFunction};

/// Truncation marker for series that are exactly zero: effectively infinite.
pub(crate) const HUGE_TRUNC: i64 = i64::MAX / 8;

/// Truncated Laurent series in `t = var − base`.
///
/// `coeffs[k]` is the coefficient of `t^(min_order + k)`. The stored list may
/// stop short of `trunc`; missing trailing coefficients are exact zeros. The
/// leading stored coefficient is nonzero, and an empty list means the series
/// vanishes through `trunc`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalSeries {
    var: Var,
    base: Rat,
    min_order: i64,
    coeffs: Vec<RationalFunction>,
    trunc: i64,
}

impl LocalSeries {
    /// The zero series, known exact through `trunc`.
    pub fn zero(var: &Var, base: &Rat, trunc: i64) -> Self {
        LocalSeries {
            var: var.clone(),
            base: base.clone(),
            min_order: 0,
            coeffs: Vec::new(),
            trunc,
        }
    }

    /// Builds a series from coefficients of `t^(min_order + k)`, trimming
    /// leading/trailing zeros and anything beyond `trunc`.
    pub fn from_coeffs(
        var: &Var,
        base: &Rat,
        mut min_order: i64,
        mut coeffs: Vec<RationalFunction>,
        trunc: i64,
    ) -> Self {
        while let Some(first) = coeffs.first() {
            if first.is_zero() {
                coeffs.remove(0);
                min_order += 1;
            } else {
                break;
            }
        }
        while coeffs.len() as i64 > trunc - min_order + 1 {
            coeffs.pop();
        }
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Self::zero(var, base, trunc);
        }
        LocalSeries {
            var: var.clone(),
            base: base.clone(),
            min_order,
            coeffs,
            trunc,
        }
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn base(&self) -> &Rat {
        &self.base
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Order of the first (known) nonzero coefficient; `None` if the series
    /// vanishes through its truncation.
    pub fn order(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_order)
        }
    }

    pub fn is_zero_through_trunc(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Effective minimum order used for truncation bookkeeping.
    fn eff_min(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.trunc + 1
        } else {
            self.min_order
        }
    }

    /// Exact coefficient of `t^k`; errors if `k` exceeds the truncation.
    pub fn try_coeff(&self, k: i64) -> Result<RationalFunction, CasError> {
        if k > self.trunc {
            return Err(CasError::InsufficientTruncation);
        }
        if self.coeffs.is_empty() || k < self.min_order {
            return Ok(RationalFunction::zero());
        }
        let idx = (k - self.min_order) as usize;
        Ok(self
            .coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(RationalFunction::zero))
    }

    /// Exact coefficient of `t^k`; panics if `k` exceeds the truncation.
    pub fn coeff(&self, k: i64) -> RationalFunction {
        self.try_coeff(k).expect("coefficient beyond truncation")
    }

    pub fn truncate_to(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        Self::from_coeffs(
            &self.var,
            &self.base,
            self.min_order,
            self.coeffs
                .iter()
                .take((trunc - self.min_order + 1).max(0) as usize)
                .cloned()
                .collect(),
            trunc,
        )
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.min_order += k;
        s.trunc += k;
        s
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero(&self.var, &self.base, self.trunc);
        }
        LocalSeries {
            var: self.var.clone(),
            base: self.base.clone(),
            min_order: self.min_order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            trunc: self.trunc,
        }
    }

    pub fn neg(&self) -> Self {
        LocalSeries {
            var: self.var.clone(),
            base: self.base.clone(),
            min_order: self.min_order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.var, rhs.var);
        debug_assert_eq!(self.base, rhs.base);
        let trunc = self.trunc.min(rhs.trunc);
        if self.coeffs.is_empty() {
            return rhs.truncate_to(trunc);
        }
        if rhs.coeffs.is_empty() {
            return self.truncate_to(trunc);
        }
        let min = self.min_order.min(rhs.min_order);
        // stored extents bound the loop; beyond them coefficients are zero
        let hi_stored = (self.min_order + self.coeffs.len() as i64)
            .max(rhs.min_order + rhs.coeffs.len() as i64)
            - 1;
        let hi = hi_stored.min(trunc);
        let mut coeffs = Vec::with_capacity((hi - min + 1).max(0) as usize);
        for k in min..=hi {
            let a = self.try_coeff(k).unwrap_or_else(|_| RationalFunction::zero());
            let b = rhs.try_coeff(k).unwrap_or_else(|_| RationalFunction::zero());
            coeffs.push(&a + &b);
        }
        Self::from_coeffs(&self.var, &self.base, min, coeffs, trunc)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.var, rhs.var);
        debug_assert_eq!(self.base, rhs.base);
        let trunc = (self.trunc + rhs.eff_min()).min(rhs.trunc + self.eff_min());
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero(&self.var, &self.base, trunc.min(HUGE_TRUNC));
        }
        let min = self.min_order + rhs.min_order;
        // coefficients beyond the reachable stored extent are exact zeros
        let reach = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = ((trunc - min + 1).max(0) as usize).min(reach);
        let mut coeffs = vec![RationalFunction::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[k] = &coeffs[k] + &(a * b);
            }
        }
        Self::from_coeffs(&self.var, &self.base, min, coeffs, trunc)
    }

    /// One coefficient of the product `self · rhs`, without materializing
    /// the product series.
    pub fn convolve_coeff(&self, rhs: &Self, k: i64) -> Result<RationalFunction, CasError> {
        let bound = (self.trunc + rhs.eff_min()).min(rhs.trunc + self.eff_min());
        if k > bound {
            return Err(CasError::InsufficientTruncation);
        }
        let mut acc = RationalFunction::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ei = self.min_order + i as i64;
            let j = k - ei;
            if j < rhs.min_order {
                continue;
            }
            let idx = (j - rhs.min_order) as usize;
            if let Some(b) = rhs.coeffs.get(idx) {
                if !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse. Needs a known nonzero leading coefficient.
    pub fn inverse(&self) -> Result<Self, CasError> {
        if self.coeffs.is_empty() {
            return Err(CasError::InsufficientTruncation);
        }
        let m = self.min_order;
        let len = self.coeffs.len();
        // for exact (huge-truncation) inputs, materialize only the stored extent
        let n_terms = if self.trunc >= HUGE_TRUNC / 2 {
            len
        } else {
            (self.trunc - m + 1).max(1) as usize
        };
        let trunc = (self.trunc - 2 * m).min(-m + n_terms as i64 - 1);
        let a = |j: usize| -> Option<&RationalFunction> {
            self.coeffs.get(j).filter(|c| !c.is_zero())
        };
        let c0 = self.coeffs[0].recip().map_err(|_| CasError::DivisionByZero)?;
        let mut out: Vec<RationalFunction> = Vec::with_capacity(n_terms);
        out.push(c0.clone());
        for k in 1..n_terms {
            // b_k = -(Σ_{j=1..k} a_j b_{k-j}) / a_0
            let mut acc = RationalFunction::zero();
            for j in 1..=k {
                if let Some(aj) = a(j) {
                    if !out[k - j].is_zero() {
                        acc = &acc + &(aj * &out[k - j]);
                    }
                }
            }
            out.push(&(-&acc) * &c0);
        }
        Ok(Self::from_coeffs(&self.var, &self.base, -m, out, trunc))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, CasError> {
        Ok(self.mul(&rhs.inverse()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self, CasError> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        // identity with effectively-unbounded truncation so powers don't clamp it
        let mut result = Self::from_coeffs(
            &self.var,
            &self.base,
            0,
            vec![RationalFunction::one()],
            HUGE_TRUNC,
        );
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Expansion of a polynomial at `v = base`, exact, padded through `trunc`.
    pub fn expand_poly(p: &MultiPoly, v: &Var, base: &Rat, trunc: i64) -> Self {
        let mut dense = p.coeffs_in(v);
        let d = dense.len() - 1;
        // in-place Taylor shift: rewrite Σ c_k v^k as Σ b_k (v − base)^k
        if !base.is_zero() {
            let b = MultiPoly::constant(base.clone());
            for i in 0..=d {
                for j in (i..d).rev() {
                    let t = &dense[j + 1] * &b;
                    dense[j] = &dense[j] + &t;
                }
            }
        }
        let coeffs: Vec<RationalFunction> = dense
            .into_iter()
            .take((trunc + 1).max(0) as usize)
            .map(RationalFunction::from_poly)
            .collect();
        Self::from_coeffs(v, base, 0, coeffs, trunc)
    }

    /// Laurent expansion of a rational function at `v = base`, correct
    /// through `t^order`. The expansion variable must not appear in the
    /// coefficients of the result.
    pub fn expand(
        f: &RationalFunction,
        v: &Var,
        base: &Rat,
        order: i64,
    ) -> Result<Self, CasError> {
        if f.is_zero() {
            return Ok(Self::zero(v, base, order));
        }
        if !f.contains_var(v) {
            return Ok(Self::from_coeffs(v, base, 0, vec![f.clone()], order));
        }
        let md = RationalFunction::poly_order_at(f.den(), v, base) as i64;
        let mn = RationalFunction::poly_order_at(f.num(), v, base) as i64;
        // result trunc = min(Tn − md, Td − 2md + mn) must reach `order`
        let tn = (order + md + 1).max(mn);
        let td = (order + 2 * md - mn + 1).max(md);
        let num = Self::expand_poly(f.num(), v, base, tn);
        let den = Self::expand_poly(f.den(), v, base, td);
        Ok(num.div(&den)?.truncate_to(order))
    }

    /// The series `base + t` representing the expansion variable itself.
    pub fn identity(v: &Var, base: &Rat, trunc: i64) -> Self {
        Self::from_coeffs(
            v,
            base,
            0,
            vec![
                RationalFunction::constant(base.clone()),
                RationalFunction::one(),
            ],
            trunc,
        )
    }

    /// Composition `self ∘ g` where `g` is a series whose value tends to
    /// `self.base` (i.e. `g − self.base` has positive order). The result is a
    /// series in `g`'s local variable.
    pub fn compose(&self, g: &Self) -> Result<Self, CasError> {
        let shifted = g.sub(&Self::from_coeffs(
            &g.var,
            &g.base,
            0,
            vec![RationalFunction::constant(self.base.clone())],
            HUGE_TRUNC,
        ));
        if let Some(m) = shifted.order() {
            if m < 1 {
                return Err(CasError::InvalidOrder);
            }
        }
        if self.coeffs.is_empty() {
            return Ok(Self::zero(&g.var, &g.base, self.trunc));
        }
        let mut acc = Self::zero(&g.var, &g.base, HUGE_TRUNC);
        // positive and negative powers of the shifted argument; the loops are
        // bounded by the stored extent, beyond which coefficients are zero
        if self.min_order < 0 {
            let inv = shifted.inverse()?;
            let mut p = inv.clone();
            for k in 1..=(-self.min_order) {
                let c = self.try_coeff(-k).expect("within stored range");
                if !c.is_zero() {
                    acc = acc.add(&p.scale(&c));
                }
                if k < -self.min_order {
                    p = p.mul(&inv);
                }
            }
        }
        let top = (self.min_order + self.coeffs.len() as i64 - 1).max(0);
        let mut p = Self::from_coeffs(
            &g.var,
            &g.base,
            0,
            vec![RationalFunction::one()],
            HUGE_TRUNC,
        );
        for k in 0..=top {
            if k >= self.min_order {
                let c = self.try_coeff(k).expect("within stored range");
                if !c.is_zero() {
                    acc = acc.add(&p.scale(&c));
                }
            }
            if k < top {
                p = p.mul(&shifted);
            }
        }
        Ok(acc.truncate_to(self.trunc))
    }

    /// Evaluates a polynomial with some variables replaced by series (all
    /// sharing the same local variable and base point). Unassigned variables
    /// stay symbolic in the coefficients.
    pub fn eval_poly(
        p: &MultiPoly,
        assign: &[(Var, &LocalSeries)],
        var: &Var,
        base: &Rat,
        trunc_cap: i64,
    ) -> Self {
        // positions of assigned variables in p's variable list
        let pvars = p.vars().to_vec();
        let mut slots: Vec<Option<usize>> = vec![None; pvars.len()];
        for (i, v) in pvars.iter().enumerate() {
            if let Some(j) = assign.iter().position(|(a, _)| a == v) {
                slots[i] = Some(j);
            }
        }
        // power tables per assigned series
        let mut maxdeg = vec![0u32; assign.len()];
        for (e, _) in p.terms() {
            for (i, s) in slots.iter().enumerate() {
                if let Some(j) = *s {
                    maxdeg[j] = maxdeg[j].max(e[i]);
                }
            }
        }
        let mut powers: Vec<Vec<LocalSeries>> = Vec::with_capacity(assign.len());
        for (j, (_, s)) in assign.iter().enumerate() {
            let mut tbl = Vec::with_capacity(maxdeg[j] as usize + 1);
            tbl.push(Self::from_coeffs(
                var,
                base,
                0,
                vec![RationalFunction::one()],
                HUGE_TRUNC,
            ));
            for k in 1..=maxdeg[j] {
                let next = tbl[k as usize - 1].mul(s);
                tbl.push(next);
            }
            powers.push(tbl);
        }
        let mut acc = Self::zero(var, base, HUGE_TRUNC);
        for (e, c) in p.terms() {
            // symbolic part of the monomial
            let mut sym = MultiPoly::constant(c.clone());
            for (i, v) in pvars.iter().enumerate() {
                if slots[i].is_none() && e[i] > 0 {
                    sym = &sym * &MultiPoly::monomial(v, e[i], Rat::one());
                }
            }
            let mut term: Option<LocalSeries> = None;
            for (i, s) in slots.iter().enumerate() {
                if let Some(j) = *s {
                    if e[i] > 0 {
                        let pw = &powers[j][e[i] as usize];
                        term = Some(match term {
                            None => pw.clone(),
                            Some(t) => t.mul(pw),
                        });
                    }
                }
            }
            let term = match term {
                None => Self::from_coeffs(
                    var,
                    base,
                    0,
                    vec![RationalFunction::from_poly(sym)],
                    HUGE_TRUNC,
                ),
                Some(t) => t.scale(&RationalFunction::from_poly(sym)),
            };
            acc = acc.add(&term);
        }
        acc.truncate_to(trunc_cap)
    }

    /// Evaluates a rational function at series points.
    pub fn eval_ratfunc(
        f: &RationalFunction,
        assign: &[(Var, &LocalSeries)],
        var: &Var,
        base: &Rat,
        trunc_cap: i64,
    ) -> Result<Self, CasError> {
        let num = Self::eval_poly(f.num(), assign, var, base, trunc_cap);
        let den = Self::eval_poly(f.den(), assign, var, base, trunc_cap);
        num.div(&den)
    }

    /// Sums finitely many stored terms back into a rational function
    /// (used by tests to compare expansions against their source).
    pub fn resum(&self) -> RationalFunction {
        let t = &RationalFunction::variable(&self.var)
            - &RationalFunction::constant(self.base.clone());
        let mut acc = RationalFunction::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = self.min_order + k as i64;
            acc = &acc + &(c * &t.pow(e).expect("t nonzero"));
        }
        acc
    }
}

impl fmt::Display for LocalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "O(({} - {})^{})", self.var, self.base, self.trunc + 1);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})*t^{}", c, self.min_order + k as i64)?;
        }
        write!(f, " + O(t^{}) [t = {} - {}]", self.trunc + 1, self.var, self.base)
    }
}

impl fmt::Debug for LocalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn v(n: &str) -> Var {
        Var::new(n)
    }

    fn zp() -> MultiPoly {
        MultiPoly::variable(&v("z"))
    }

    fn rf(num: MultiPoly, den: MultiPoly) -> RationalFunction {
        RationalFunction::new(num, den).unwrap()
    }

    #[test]
    fn expand_simple_pole() {
        // 1/(z-a) at a: t^-1 exactly
        let a = rat_int(3);
        let f = rf(MultiPoly::one(), MultiPoly::linear(&v("z"), &a));
        let s = LocalSeries::expand(&f, &v("z"), &a, 2).unwrap();
        assert_eq!(s.order(), Some(-1));
        assert!(s.coeff(-1).is_one());
        assert!(s.coeff(0).is_zero());
        assert!(s.coeff(2).is_zero());
    }

    #[test]
    fn expand_monomial() {
        // z^2 at 0 is t^2
        let f = RationalFunction::from_poly(zp().pow(2));
        let s = LocalSeries::expand(&f, &v("z"), &Rat::zero(), 3).unwrap();
        assert_eq!(s.order(), Some(2));
        assert!(s.coeff(2).is_one());
        assert!(s.coeff(3).is_zero());
        // z^2 at 1 is 1 + 2t + t^2
        let s1 = LocalSeries::expand(&f, &v("z"), &Rat::one(), 5).unwrap();
        assert!(s1.coeff(0).is_one());
        assert_eq!(s1.coeff(1), RationalFunction::from_int(2));
        assert!(s1.coeff(1).is_zero() == false);
        assert!(s1.coeff(3).is_zero());
    }

    #[test]
    fn series_resummation_matches() {
        let zv = v("z");
        let f = rf(
            &zp().pow(2) + &MultiPoly::one(),
            zp().pow(2),
        );
        let s = LocalSeries::expand(&f, &zv, &Rat::zero(), 6).unwrap();
        // difference of f and the resummed truncated series is regular to higher order
        let diff = &f - &s.resum();
        if !diff.is_zero() {
            let ord = diff.order_at(&zv, &Rat::zero()).unwrap();
            assert!(ord > 6);
        }
    }

    #[test]
    fn mul_truncation_bookkeeping() {
        let zv = v("z");
        let z0 = Rat::zero();
        // a = t^-2 known through t^2; b = t known through t^5
        let a = LocalSeries::from_coeffs(
            &zv,
            &z0,
            -2,
            vec![
                RationalFunction::one(),
                RationalFunction::zero(),
                RationalFunction::zero(),
                RationalFunction::zero(),
                RationalFunction::one(),
            ],
            2,
        );
        let b = LocalSeries::from_coeffs(
            &zv,
            &z0,
            1,
            (0..5).map(|_| RationalFunction::one()).collect(),
            5,
        );
        let p = a.mul(&b);
        // trunc = min(2 + 1, 5 + (-2)) = 3
        assert_eq!(p.trunc(), 3);
        assert_eq!(p.order(), Some(-1));
    }

    #[test]
    fn inverse_and_div() {
        let zv = v("z");
        let z0 = Rat::zero();
        // s = t + t^2, 1/s = t^-1 (1 - t + t^2 - ...)
        let s = LocalSeries::from_coeffs(
            &zv,
            &z0,
            1,
            vec![RationalFunction::one(), RationalFunction::one()],
            2,
        );
        let inv = s.inverse().unwrap();
        assert_eq!(inv.order(), Some(-1));
        assert!(inv.coeff(-1).is_one());
        assert_eq!(inv.coeff(0), RationalFunction::from_int(-1));
        assert_eq!(inv.trunc(), 0);
        let one = s.mul(&inv);
        assert!(one.coeff(0).is_one());
    }

    #[test]
    fn compose_example() {
        // x(z) = z^2 + z^3 composed with sigma(t) = -t - t^2 reproduces
        // t^2 + t^3 through order 3
        let zv = v("z");
        let z0 = Rat::zero();
        let x = &zp().pow(2) + &zp().pow(3);
        let xs = LocalSeries::expand_poly(&x, &zv, &z0, 8);
        let sigma = LocalSeries::from_coeffs(
            &zv,
            &z0,
            1,
            vec![RationalFunction::from_int(-1), RationalFunction::from_int(-1)],
            2,
        );
        let comp = xs.compose(&sigma).unwrap();
        assert!(comp.coeff(2).is_one());
        assert!(comp.coeff(3).is_one());
        // x(sigma) - x = O(t^4): direct difference of the two expansions through 3
        let direct = xs.truncate_to(comp.trunc());
        let diff = comp.sub(&direct);
        assert_eq!(diff.order(), None);
    }

    #[test]
    fn eval_poly_with_spectator() {
        // evaluate (u - w)^2 at u := t-series with w symbolic
        let uv = v("u");
        let wv = v("w");
        let zv = v("q");
        let z0 = Rat::zero();
        let p = (&MultiPoly::variable(&uv) - &MultiPoly::variable(&wv)).pow(2);
        let s = LocalSeries::identity(&zv, &z0, 6); // u := q (= 0 + t)
        let out = LocalSeries::eval_poly(&p, &[(uv, &s)], &zv, &z0, 6);
        // (t - w)^2 = w^2 - 2wt + t^2
        let w = RationalFunction::variable(&wv);
        assert_eq!(out.coeff(0), &w * &w);
        assert_eq!(out.coeff(1), (&w * &RationalFunction::from_int(-2)));
        assert!(out.coeff(2).is_one());
    }
}
