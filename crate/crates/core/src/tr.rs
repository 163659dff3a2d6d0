//! The topological-recursion engine.
//!
//! Correlator densities are produced by the residue formula: at every simple
//! ramification point of `x` the kernel built from the two-sheet involution
//! is multiplied against lower correlators evaluated at `(q, σ(q))` in series
//! space, and the coefficient of `t^{-1}` is extracted exactly. Densities are
//! the differentials divided by `∏ dx`; running the engine on the swapped
//! curve produces the y-side family.
//!
//! Truncation orders are estimated from the input pole orders and escalated
//! until the residue coefficient is exactly determined; a `+4` re-run is the
//! stability check used by the test suites.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::curve::{CurveError, SpectralCurve};
use crate::poly::{Rat, Var};
use crate::ratfunc::{CasError, RationalFunction};
use crate::series::LocalSeries;

/// Errors from the recursion engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrError {
    /// Correlators with `2g + n − 2 < 1` are not produced by the recursion.
    UnsupportedEulerCharacteristic,
    /// The kernel denominator series does not start at order one.
    DegenerateKernel,
    Curve(CurveError),
    Cas(CasError),
}

impl From<CurveError> for TrError {
    fn from(e: CurveError) -> Self {
        TrError::Curve(e)
    }
}

impl From<CasError> for TrError {
    fn from(e: CasError) -> Self {
        TrError::Cas(e)
    }
}

impl fmt::Display for TrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrError::UnsupportedEulerCharacteristic => {
                f.write_str("correlator outside the recursion range (2g + n - 2 < 1)")
            }
            TrError::DegenerateKernel => f.write_str("kernel denominator does not vanish simply"),
            TrError::Curve(e) => write!(f, "{}", e),
            TrError::Cas(e) => write!(f, "{}", e),
        }
    }
}

/// Where a correlator value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Produced by the residue recursion.
    TrRun,
    /// Assembled from the decorated-tree sum.
    TreeFormula,
    /// A closed-form expression.
    ClosedForm,
}

/// A correlator density `W^{(g)}_{n,m}` tagged with its variables.
#[derive(Clone, Debug)]
pub struct Correlator {
    pub g: u32,
    pub n: usize,
    pub m: usize,
    pub vars: Vec<Var>,
    pub value: RationalFunction,
    pub provenance: Provenance,
}

impl Correlator {
    /// The same density with its variables renamed in order.
    pub fn with_vars(&self, vars: &[Var]) -> Correlator {
        assert_eq!(vars.len(), self.vars.len());
        let mut value = self.value.clone();
        // two-phase rename avoids collisions between old and new names
        let tmp: Vec<Var> = (0..vars.len())
            .map(|i| Var::new(&format!("__r{}", i)))
            .collect();
        for (old, t) in self.vars.iter().zip(&tmp) {
            value = value.rename_var(old, t);
        }
        for (t, new) in tmp.iter().zip(vars) {
            value = value.rename_var(t, new);
        }
        Correlator {
            g: self.g,
            n: self.n,
            m: self.m,
            vars: vars.to_vec(),
            value,
            provenance: self.provenance,
        }
    }
}

/// The recursion kernel expanded at one ramification point.
#[derive(Clone, Debug)]
pub struct KernelSeries {
    pub alpha: Rat,
    pub spectator: Var,
    pub series: LocalSeries,
}

/// Canonical variable for the i-th slot (0-based) of an x-side density.
pub(crate) fn slot_var(i: usize) -> Var {
    Var::new(&format!("z{}", i + 1))
}

pub(crate) fn slot_vars(n: usize) -> Vec<Var> {
    (0..n).map(slot_var).collect()
}

/// The Bergman-kernel density `1/(u − v)²`.
pub fn bergman_density(u: &Var, v: &Var) -> RationalFunction {
    let d = &RationalFunction::variable(u) - &RationalFunction::variable(v);
    (&d * &d).recip().expect("distinct variables")
}

/// A memoizing recursion engine bound to one validated curve.
pub struct Engine {
    curve: SpectralCurve,
    memo: BTreeMap<(u32, usize), RationalFunction>,
    extra_order: i64,
}

impl Engine {
    pub fn new(curve: SpectralCurve) -> Self {
        Engine {
            curve,
            memo: BTreeMap::new(),
            extra_order: 0,
        }
    }

    /// An engine that expands every residue with additional truncation
    /// margin; results must not depend on it.
    pub fn with_extra_order(curve: SpectralCurve, extra: i64) -> Self {
        Engine {
            curve,
            memo: BTreeMap::new(),
            extra_order: extra,
        }
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    /// The correlator `W^{(g)}_{n,0}` for `2g + n − 2 ≥ 1`.
    pub fn correlator(&mut self, g: u32, n: usize) -> Result<Correlator, TrError> {
        if n < 1 || (2 * g as i64) + (n as i64) - 2 < 1 {
            return Err(TrError::UnsupportedEulerCharacteristic);
        }
        let value = self.density(g, n)?;
        Ok(Correlator {
            g,
            n,
            m: 0,
            vars: slot_vars(n),
            value,
            provenance: Provenance::TrRun,
        })
    }

    /// Density in canonical variables `z1..zn`, including the unstable base
    /// cases `(0,1)` (the other covering) and `(0,2)` (Bergman density).
    pub fn density(&mut self, g: u32, n: usize) -> Result<RationalFunction, TrError> {
        if let Some(v) = self.memo.get(&(g, n)) {
            return Ok(v.clone());
        }
        let value = self.compute_density(g, n)?;
        self.memo.insert((g, n), value.clone());
        Ok(value)
    }

    fn compute_density(&mut self, g: u32, n: usize) -> Result<RationalFunction, TrError> {
        let zc = self.curve.var().clone();
        if g == 0 && n == 1 {
            return Ok(self.curve.y().rename_var(&zc, &slot_var(0)));
        }
        if g == 0 && n == 2 {
            let (u, v) = (slot_var(0), slot_var(1));
            let b = bergman_density(&u, &v);
            let dxu = self.curve.dx().rename_var(&zc, &u);
            let dxv = self.curve.dx().rename_var(&zc, &v);
            return Ok(&b / &(&dxu * &dxv));
        }
        if (2 * g as i64) + (n as i64) - 2 < 1 {
            return Err(TrError::UnsupportedEulerCharacteristic);
        }
        // pre-compute every lower density the bracket needs
        let mut needed: Vec<(u32, usize)> = Vec::new();
        if g >= 1 {
            needed.push((g - 1, n + 1));
        }
        for a_size in 0..n {
            for g1 in 0..=g {
                let g2 = g - g1;
                if (g1 == 0 && a_size == 0) || (g2 == 0 && a_size == n - 1) {
                    continue;
                }
                needed.push((g1, a_size + 1));
                needed.push((g2, n - a_size));
            }
        }
        for key in needed {
            self.density(key.0, key.1)?;
        }
        let alphas: Vec<Rat> = self.curve.x_ram().to_vec();
        let mut sum = RationalFunction::zero();
        for alpha in &alphas {
            let r = self.residue_at_branch(g, n, alpha)?;
            sum = &sum + &r;
        }
        let out = slot_var(n - 1);
        let dxn = self.curve.dx().rename_var(&zc, &out);
        Ok(&sum / &dxn)
    }

    /// One branch-point contribution to `W^{(g)}_{n,0}`, before dividing by
    /// `dx` in the new variable.
    fn residue_at_branch(
        &self,
        g: u32,
        n: usize,
        alpha: &Rat,
    ) -> Result<RationalFunction, TrError> {
        let mut order = self.estimate_order(g, n, alpha) + self.extra_order;
        let mut attempts = 0;
        loop {
            match self.try_residue(g, n, alpha, order) {
                Ok(v) => return Ok(v),
                Err(TrError::Cas(CasError::InsufficientTruncation)) if attempts < 12 => {
                    attempts += 1;
                    order += 8;
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Pole orders of the cached densities bound the expansion order needed;
    /// the retry loop covers any shortfall.
    fn estimate_order(&self, g: u32, n: usize, alpha: &Rat) -> i64 {
        let mut worst: i64 = 2;
        let probe = |key: &(u32, usize), slots: usize| -> i64 {
            match self.memo.get(key) {
                None => 0,
                Some(d) => {
                    let v = slot_var(key.1 - 1);
                    if d.is_zero() || !d.contains_var(&v) {
                        0
                    } else {
                        slots as i64
                            * RationalFunction::poly_order_at(d.den(), &v, alpha) as i64
                    }
                }
            }
        };
        if g >= 1 {
            worst = worst.max(probe(&(g - 1, n + 1), 2) + 2);
        }
        for a_size in 0..n {
            for g1 in 0..=g {
                let g2 = g - g1;
                if (g1 == 0 && a_size == 0) || (g2 == 0 && a_size == n - 1) {
                    continue;
                }
                let p = probe(&(g1, a_size + 1), 1) + probe(&(g2, n - a_size), 1);
                worst = worst.max(p);
            }
        }
        worst + 6
    }

    fn try_residue(
        &self,
        g: u32,
        n: usize,
        alpha: &Rat,
        order: i64,
    ) -> Result<RationalFunction, TrError> {
        let zc = self.curve.var().clone();
        let sigma = self.curve.galois_involution_series(alpha, order)?;
        let q = LocalSeries::identity(&zc, alpha, order);
        let kfac = self.kernel_with_dx2(alpha, &slot_var(n - 1), order, &sigma, &q)?;
        let u = Var::new("__u");
        let v = Var::new("__v");
        let mut res = RationalFunction::zero();
        if g >= 1 {
            let d = self
                .memo
                .get(&(g - 1, n + 1))
                .expect("precomputed")
                .rename_var(&slot_var(n - 1), &u)
                .rename_var(&slot_var(n), &v);
            let ev = LocalSeries::eval_ratfunc(
                &d,
                &[(u.clone(), &q), (v.clone(), &sigma)],
                &zc,
                alpha,
                order,
            )?;
            res = &res + &Self::residue_single(&kfac, &ev)?;
        }
        // stable splittings over ordered pairs; spectators are z1..z(n-1)
        let spect: Vec<Var> = slot_vars(n - 1);
        let full = if n > 1 { (1u64 << (n - 1)) - 1 } else { 0 };
        for mask in 0..=full {
            let a_size = mask.count_ones() as usize;
            for g1 in 0..=g {
                let g2 = g - g1;
                if (g1 == 0 && a_size == 0) || (g2 == 0 && a_size == n - 1) {
                    continue;
                }
                let d1 = self.assign_density(g1, mask, &spect, &u)?;
                let d2 = self.assign_density(g2, full & !mask, &spect, &v)?;
                let e1 = LocalSeries::eval_ratfunc(&d1, &[(u.clone(), &q)], &zc, alpha, order)?;
                let e2 =
                    LocalSeries::eval_ratfunc(&d2, &[(v.clone(), &sigma)], &zc, alpha, order)?;
                res = &res + &Self::residue_pair(&kfac, &e1, &e2)?;
            }
        }
        Ok(res)
    }

    /// `Σ_j s_j · kfac_{−1−j}`: the residue coefficient of `kfac · s`
    /// extracted without building the product series.
    fn residue_single(
        kfac: &LocalSeries,
        s: &LocalSeries,
    ) -> Result<RationalFunction, CasError> {
        let kmin = kfac.order().unwrap_or(kfac.trunc() + 1);
        let smin = s.order().unwrap_or(s.trunc() + 1);
        if (s.trunc() + kmin).min(kfac.trunc() + smin) < -1 {
            return Err(CasError::InsufficientTruncation);
        }
        let mut acc = RationalFunction::zero();
        for j in smin..=(-1 - kmin) {
            let cj = s.try_coeff(j)?;
            if cj.is_zero() {
                continue;
            }
            acc = &acc + &(&cj * &kfac.try_coeff(-1 - j)?);
        }
        Ok(acc)
    }

    /// Residue coefficient of `kfac · a · b`, with the coefficients of
    /// `a · b` obtained by direct convolution.
    fn residue_pair(
        kfac: &LocalSeries,
        a: &LocalSeries,
        b: &LocalSeries,
    ) -> Result<RationalFunction, CasError> {
        let kmin = kfac.order().unwrap_or(kfac.trunc() + 1);
        let amin = a.order().unwrap_or(a.trunc() + 1);
        let bmin = b.order().unwrap_or(b.trunc() + 1);
        let pmin = amin + bmin;
        let ptrunc = (a.trunc() + bmin).min(b.trunc() + amin);
        if (ptrunc + kmin).min(kfac.trunc() + pmin) < -1 {
            return Err(CasError::InsufficientTruncation);
        }
        let mut acc = RationalFunction::zero();
        for j in pmin..=(-1 - kmin) {
            let cj = a.convolve_coeff(b, j)?;
            if cj.is_zero() {
                continue;
            }
            acc = &acc + &(&cj * &kfac.try_coeff(-1 - j)?);
        }
        Ok(acc)
    }

    /// Cached density for one splitting side: spectator slots renamed to the
    /// subset of `spect` selected by `mask`, last slot renamed to `slot`.
    fn assign_density(
        &self,
        g: u32,
        mask: u64,
        spect: &[Var],
        slot: &Var,
    ) -> Result<RationalFunction, TrError> {
        let picked: Vec<&Var> = spect
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v)
            .collect();
        let n = picked.len() + 1;
        let d = self.memo.get(&(g, n)).expect("precomputed");
        // temporaries avoid collisions with canonical names
        let mut out = d.clone();
        for (i, _) in picked.iter().enumerate() {
            out = out.rename_var(&slot_var(i), &Var::new(&format!("__s{}", i)));
        }
        out = out.rename_var(&slot_var(n - 1), slot);
        for (i, target) in picked.iter().enumerate() {
            out = out.rename_var(&Var::new(&format!("__s{}", i)), target);
        }
        Ok(out)
    }

    /// The kernel times `x'(q)²`:
    /// `[1/(z − q) − 1/(z − σ(q))] · x'(q) / (2 (y(q) − y(σ(q))))`.
    fn kernel_with_dx2(
        &self,
        alpha: &Rat,
        spectator: &Var,
        order: i64,
        sigma: &LocalSeries,
        q: &LocalSeries,
    ) -> Result<LocalSeries, TrError> {
        let zc = self.curve.var().clone();
        let zrf = RationalFunction::variable(spectator);
        // (z − q) and (z − σ(q)) as series with rational-function coefficients
        let zconst = LocalSeries::from_coeffs(
            &zc,
            alpha,
            0,
            vec![zrf],
            crate::series::HUGE_TRUNC,
        );
        let a = zconst.sub(q);
        let b = zconst.sub(sigma);
        let numer = a.inverse()?.sub(&b.inverse()?);
        let xp = LocalSeries::expand(self.curve.dx(), &zc, alpha, order)?;
        let ys = LocalSeries::expand(self.curve.y(), &zc, alpha, order)?;
        let ysig = ys.compose(sigma)?;
        let ydiff = ys.sub(&ysig);
        match ydiff.order() {
            None => return Err(TrError::Cas(CasError::InsufficientTruncation)),
            Some(1) => {}
            Some(_) => return Err(TrError::DegenerateKernel),
        }
        let denom = ydiff.scale(&RationalFunction::from_int(2));
        Ok(numer.mul(&xp).div(&denom)?)
    }

    /// The recursion kernel `K` expanded at `alpha` (without the `x'(q)²`
    /// factor that the engine folds into its residue integrand).
    pub fn kernel_series(
        &self,
        alpha: &Rat,
        spectator: &Var,
        order: i64,
    ) -> Result<KernelSeries, TrError> {
        let zc = self.curve.var().clone();
        let sigma = self.curve.galois_involution_series(alpha, order + 4)?;
        let q = LocalSeries::identity(&zc, alpha, order + 4);
        let with_dx2 = self.kernel_with_dx2(alpha, spectator, order + 4, &sigma, &q)?;
        let xp = LocalSeries::expand(self.curve.dx(), &zc, alpha, order + 4)?;
        let series = with_dx2.div(&xp.pow(2)?)?.truncate_to(order);
        Ok(KernelSeries {
            alpha: alpha.clone(),
            spectator: spectator.clone(),
            series,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiPoly;

    fn zvar() -> Var {
        Var::new("z")
    }

    fn poly(p: MultiPoly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }

    fn zp() -> MultiPoly {
        MultiPoly::variable(&zvar())
    }

    fn airy() -> SpectralCurve {
        SpectralCurve::validate(poly(zp().pow(2)), poly(zp()), &zvar()).unwrap()
    }

    fn quad() -> SpectralCurve {
        SpectralCurve::validate(poly(zp().pow(2)), poly(&zp().pow(2) + &zp()), &zvar()).unwrap()
    }

    /// `c / ∏ zi^e`
    fn inv_mono(c: i64, d: i64, vars: &[Var], e: u32) -> RationalFunction {
        let mut den = MultiPoly::one();
        for v in vars {
            den = &den * &MultiPoly::variable(v).pow(e);
        }
        &RationalFunction::constant(crate::poly::rat_frac(c, d)) / &poly(den)
    }

    #[test]
    fn airy_w03() {
        let mut e = Engine::new(airy());
        let w = e.correlator(0, 3).unwrap();
        // density of −dz1 dz2 dz3 / (2 z1² z2² z3²) is −1/(16 z1³ z2³ z3³)
        let expect = inv_mono(-1, 16, &w.vars, 3);
        assert_eq!(w.value, expect);
    }

    #[test]
    fn airy_w04() {
        let mut e = Engine::new(airy());
        let w = e.correlator(0, 4).unwrap();
        // (3/4)(∏ dzi/zi²)(Σ 1/zi²) divided by ∏ 2zi
        let vars = slot_vars(4);
        let mut sum = RationalFunction::zero();
        for v in &vars {
            sum = &sum + &RationalFunction::variable(v).pow(-2).unwrap();
        }
        let expect = &inv_mono(3, 64, &vars, 3) * &sum;
        assert_eq!(w.value, expect);
    }

    #[test]
    fn airy_w11() {
        let mut e = Engine::new(airy());
        let w = e.correlator(1, 1).unwrap();
        // ω^{(1)}_{1,0} = −dz/(16 z⁴), density −1/(32 z⁵)
        let expect = inv_mono(-1, 32, &w.vars, 5);
        assert_eq!(w.value, expect);
    }

    #[test]
    fn symmetry_and_poles() {
        let mut e = Engine::new(quad());
        let w = e.correlator(0, 3).unwrap();
        let swapped = w
            .value
            .rename_var(&w.vars[0], &Var::new("__t"))
            .rename_var(&w.vars[1], &w.vars[0])
            .rename_var(&Var::new("__t"), &w.vars[1]);
        assert_eq!(w.value, swapped);
        // poles only at the single ramification point 0
        assert!(w.value.poles_only_at(&w.vars, &[Rat::zero()]));
        let w4 = e.correlator(0, 4).unwrap();
        assert!(w4.value.poles_only_at(&w4.vars, &[Rat::zero()]));
    }

    #[test]
    fn swapped_airy_vanishes() {
        // y(z) = z has no ramification points: all stable correlators vanish
        let mut e = Engine::new(airy().swap());
        for n in 3..=5 {
            assert!(e.density(0, n).unwrap().is_zero());
        }
        assert!(e.density(1, 1).unwrap().is_zero());
    }

    #[test]
    fn truncation_stability_plus_four() {
        let base = {
            let mut e = Engine::new(quad());
            (e.density(0, 3).unwrap(), e.density(1, 1).unwrap())
        };
        let padded = {
            let mut e = Engine::with_extra_order(quad(), 4);
            (e.density(0, 3).unwrap(), e.density(1, 1).unwrap())
        };
        assert_eq!(base, padded);
    }

    #[test]
    fn unsupported_topologies() {
        let mut e = Engine::new(airy());
        assert!(matches!(
            e.correlator(0, 2),
            Err(TrError::UnsupportedEulerCharacteristic)
        ));
        assert!(matches!(
            e.correlator(0, 0),
            Err(TrError::UnsupportedEulerCharacteristic)
        ));
    }

    #[test]
    fn airy_kernel_leading_behaviour() {
        // kernel numerator 1/(z−q) − 1/(z+q) over 2·(2q)·(2q): series starts
        // at t⁰ with coefficient 1/(2z²)·... checked against the closed form
        // q/((z²−q²)·4q²) = 1/(4q(z²−q²))... its t-expansion: 1/(4t z²)·(1+t²/z²+…)
        let e = Engine::new(airy());
        let spec = Var::new("s");
        let k = e.kernel_series(&Rat::zero(), &spec, 3).unwrap();
        // K = [1/(z−q)−1/(z+q)]/(2·2q·2q) = 1/(4q(z²−q²)) with q = t
        assert_eq!(k.series.order(), Some(-1));
        let s = RationalFunction::variable(&spec);
        let quarter = RationalFunction::constant(crate::poly::rat_frac(1, 4));
        assert_eq!(k.series.coeff(-1), &quarter / &(&s * &s));
        assert!(k.series.coeff(0).is_zero());
        assert_eq!(k.series.coeff(1), &quarter / &(&s * &s).pow(2).unwrap());
    }
}
