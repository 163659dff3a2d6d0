//! Multivariate polynomials over the exact rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under lexicographic
//! order over the sorted variable list, so every polynomial has one canonical
//! representation and iteration order is deterministic. The gcd is computed
//! by content/primitive-part recursion on a chosen main variable with a
//! primitive pseudo-remainder sequence.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational `p/q`. Panics on `q == 0`.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// An interned variable name. Clones are cheap; ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// A multivariate polynomial with rational coefficients.
///
/// Invariants: `vars` is sorted strictly ascending, every variable carries a
/// nonzero exponent in at least one term, no zero coefficients are stored,
/// and every exponent vector has length `vars.len()`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    pub fn variable(v: &Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        MultiPoly {
            vars: vec![v.clone()],
            terms,
        }
    }

    /// The monomial `c * v^k`.
    pub fn monomial(v: &Var, k: u32, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if k == 0 {
            return Self::constant(c);
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![k], c);
        MultiPoly {
            vars: vec![v.clone()],
            terms,
        }
    }

    /// The linear polynomial `v - a`.
    pub fn linear(v: &Var, a: &Rat) -> Self {
        &Self::variable(v) - &Self::constant(a.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` iff the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        if self.vars.is_empty() {
            Some(
                self.terms
                    .get(&Vec::new())
                    .cloned()
                    .unwrap_or_else(Rat::zero),
            )
        } else {
            None
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.vars.binary_search(v).is_ok()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        match self.vars.binary_search(v) {
            Err(_) => 0,
            Ok(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Drops zero coefficients and unused variable columns.
    fn compact(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            return Self::zero();
        }
        let n = self.vars.len();
        let mut used = vec![false; n];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        let vars: Vec<Var> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c))
            .collect();
        MultiPoly { vars, terms }
    }

    /// Sorted union of two variable lists.
    fn merge_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }

    /// Positions of `vars` inside the superset `new_vars`.
    fn positions(vars: &[Var], new_vars: &[Var]) -> Vec<usize> {
        vars.iter()
            .map(|v| new_vars.binary_search(v).expect("superset"))
            .collect()
    }

    fn remap(terms: &BTreeMap<Vec<u32>, Rat>, pos: &[usize], width: usize) -> BTreeMap<Vec<u32>, Rat> {
        terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u32; width];
                for (i, &p) in pos.iter().enumerate() {
                    ne[p] = e[i];
                }
                (ne, c.clone())
            })
            .collect()
    }

    /// Rewrites both polynomials over the union variable list.
    fn aligned(a: &Self, b: &Self) -> (Vec<Var>, BTreeMap<Vec<u32>, Rat>, BTreeMap<Vec<u32>, Rat>) {
        if a.vars == b.vars {
            return (a.vars.clone(), a.terms.clone(), b.terms.clone());
        }
        let vars = Self::merge_vars(&a.vars, &b.vars);
        let ta = Self::remap(&a.terms, &Self::positions(&a.vars, &vars), vars.len());
        let tb = Self::remap(&b.terms, &Self::positions(&b.vars, &vars), vars.len());
        (vars, ta, tb)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: &Var) -> Self {
        let i = match self.vars.binary_search(v) {
            Err(_) => return Self::zero(),
            Ok(i) => i,
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            terms.insert(ne, c * rat_int(e[i] as i64));
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
        .compact()
    }

    /// Renames `old` to `new`; if `new` is already present the exponents add.
    pub fn rename_var(&self, old: &Var, new: &Var) -> Self {
        let i = match self.vars.binary_search(old) {
            Err(_) => return self.clone(),
            Ok(i) => i,
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let existing = vars.binary_search(new);
        let j = match existing {
            Ok(j) => j,
            Err(j) => {
                vars.insert(j, new.clone());
                j
            }
        };
        let fresh = existing.is_err();
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            let mut ne: Vec<u32> = Vec::with_capacity(vars.len());
            for (p, &x) in e.iter().enumerate() {
                if p != i {
                    ne.push(x);
                }
            }
            if fresh {
                ne.insert(j, k);
            } else {
                ne[j] += k;
            }
            let entry = terms.entry(ne).or_insert_with(Rat::zero);
            *entry += c;
        }
        MultiPoly { vars, terms }.compact()
    }

    /// Evaluates one variable at a rational point.
    pub fn eval_var(&self, v: &Var, a: &Rat) -> Self {
        let i = match self.vars.binary_search(v) {
            Err(_) => return self.clone(),
            Ok(i) => i,
        };
        let maxdeg = self.degree_in(v) as usize;
        let mut powers = Vec::with_capacity(maxdeg + 1);
        powers.push(Rat::one());
        for k in 1..=maxdeg {
            let p = &powers[k - 1] * a;
            powers.push(p);
        }
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne: Vec<u32> = Vec::with_capacity(vars.len());
            for (p, &x) in e.iter().enumerate() {
                if p != i {
                    ne.push(x);
                }
            }
            let add = c * &powers[e[i] as usize];
            let entry = terms.entry(ne).or_insert_with(Rat::zero);
            *entry += add;
        }
        MultiPoly { vars, terms }.compact()
    }

    /// Dense coefficient list in `v`: `self = Σ coeffs[k] v^k`, coefficients
    /// free of `v`.
    pub fn coeffs_in(&self, v: &Var) -> Vec<MultiPoly> {
        let i = match self.vars.binary_search(v) {
            Err(_) => return vec![self.clone()],
            Ok(i) => i,
        };
        let d = self.degree_in(v) as usize;
        let mut rest_vars = self.vars.clone();
        rest_vars.remove(i);
        let mut buckets: Vec<BTreeMap<Vec<u32>, Rat>> = vec![BTreeMap::new(); d + 1];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut ne: Vec<u32> = Vec::with_capacity(rest_vars.len());
            for (p, &x) in e.iter().enumerate() {
                if p != i {
                    ne.push(x);
                }
            }
            buckets[k].insert(ne, c.clone());
        }
        buckets
            .into_iter()
            .map(|terms| {
                MultiPoly {
                    vars: rest_vars.clone(),
                    terms,
                }
                .compact()
            })
            .collect()
    }

    /// Rebuilds `Σ coeffs[k] v^k`.
    pub fn from_coeffs_in(v: &Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = c * &MultiPoly::monomial(v, k as u32, Rat::one());
            acc = &acc + &t;
        }
        acc
    }

    /// Leading coefficient under the lexicographic term order.
    pub fn leading_coeff(&self) -> Rat {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Positive rational `c` with `self/c` integer-coefficient and coprime.
    /// Zero polynomial has content zero.
    pub fn rational_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut g = Int::zero();
        let mut l = Int::one();
        for c in self.terms.values() {
            g = g.gcd(&c.numer().abs());
            l = l.lcm(c.denom());
        }
        Rat::new(g, l)
    }

    /// `self / (content × sign of leading coeff)`: integer-primitive with
    /// positive leading coefficient. Zero stays zero.
    pub fn primitive_abs(&self) -> MultiPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.rational_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Splits off the largest pure monomial factor: `self = mono · rest`
    /// where `mono` has coefficient one. Returns (exponents per var, rest).
    fn extract_monomial(&self) -> (Vec<u32>, MultiPoly) {
        if self.is_zero() {
            return (Vec::new(), Self::zero());
        }
        let n = self.vars.len();
        let mut mins = vec![u32::MAX; n];
        for e in self.terms.keys() {
            for i in 0..n {
                mins[i] = mins[i].min(e[i]);
            }
        }
        if mins.iter().all(|&m| m == 0) {
            return (mins, self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let ne: Vec<u32> = e.iter().zip(&mins).map(|(&x, &m)| x - m).collect();
                (ne, c.clone())
            })
            .collect();
        (
            mins,
            MultiPoly {
                vars: self.vars.clone(),
                terms,
            }
            .compact(),
        )
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (vars, mut r, td) = Self::aligned(self, d);
        let (de, dc) = td.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut q: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        while let Some((re, rc)) = r.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let mut qe = Vec::with_capacity(re.len());
            for (a, b) in re.iter().zip(&de) {
                if a < b {
                    return None;
                }
                qe.push(a - b);
            }
            let qc = &rc / &dc;
            // r -= qc·x^qe · d
            for (e, c) in &td {
                let me: Vec<u32> = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                let sub = c * &qc;
                match r.entry(me) {
                    alloc::collections::btree_map::Entry::Occupied(mut o) => {
                        let nv = &*o.get() - &sub;
                        if nv.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = nv;
                        }
                    }
                    alloc::collections::btree_map::Entry::Vacant(vac) => {
                        vac.insert(-sub);
                    }
                }
            }
            q.insert(qe, qc);
        }
        Some(MultiPoly { vars, terms: q }.compact())
    }

    /// Pseudo-remainder of `self` by `d` in the main variable `v`
    /// (`lc(d)^(deg self − deg d + 1) · self mod d`).
    fn prem(&self, d: &MultiPoly, v: &Var) -> MultiPoly {
        let da = self.degree_in(v) as usize;
        let db = d.degree_in(v) as usize;
        debug_assert!(db > 0 && da >= db);
        let mut r = self.coeffs_in(v);
        let bc = d.coeffs_in(v);
        let lb = bc[db].clone();
        for i in (db..=da).rev() {
            let ri = r[i].clone();
            for item in r.iter_mut() {
                *item = &*item * &lb;
            }
            if !ri.is_zero() {
                for (j, b) in bc.iter().enumerate() {
                    let t = &ri * b;
                    r[i - db + j] = &r[i - db + j] - &t;
                }
            }
            debug_assert!(r[i].is_zero());
        }
        Self::from_coeffs_in(v, &r[..db])
    }

    /// Content (w.r.t. `v`) and primitive part: `self = content · pp` with
    /// `content` free of `v`.
    fn content_and_pp(&self, v: &Var) -> (MultiPoly, MultiPoly) {
        let coeffs = self.coeffs_in(v);
        let mut content = MultiPoly::zero();
        for c in &coeffs {
            if c.is_zero() {
                continue;
            }
            content = Self::gcd(&content, c);
            if content.is_one() {
                break;
            }
        }
        if content.is_one() {
            return (content, self.clone());
        }
        let pp = self.exact_div(&content).expect("content divides");
        (content, pp)
    }

    /// Greatest common divisor, integer-primitive with positive leading
    /// coefficient. `gcd(0, p) = primitive(p)`.
    ///
    /// An evaluation/reconstruction heuristic (verified by exact trial
    /// division) handles the bulk of the work; the primitive
    /// pseudo-remainder sequence is the fallback.
    pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        if a.is_zero() {
            return b.primitive_abs();
        }
        if b.is_zero() {
            return a.primitive_abs();
        }
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return Self::one();
        }
        // disjoint variable sets are coprime up to content
        if !a.vars.iter().any(|v| b.contains_var(v)) {
            return Self::one();
        }
        // Pull out pure monomial factors first; they are common in the
        // denominators this crate produces.
        let (ma, a1) = a.extract_monomial();
        let (mb, b1) = b.extract_monomial();
        let mut mono = MultiPoly::one();
        for (i, v) in a.vars.iter().enumerate() {
            if let Ok(j) = b.vars.binary_search(v) {
                let k = ma[i].min(mb[j]);
                if k > 0 {
                    mono = &mono * &MultiPoly::monomial(v, k, Rat::one());
                }
            }
        }
        let pa = a1.primitive_abs();
        let pb = b1.primitive_abs();
        let mut core = match Self::gcd_heuristic(&pa, &pb) {
            Some(g) => g,
            None => Self::gcd_inner(&pa, &pb),
        };
        // guard against an under-reduced heuristic answer
        loop {
            let ra = pa.exact_div(&core).expect("verified divisor");
            let rb = pb.exact_div(&core).expect("verified divisor");
            if ra.as_constant().is_some() || rb.as_constant().is_some() {
                break;
            }
            let extra = match Self::gcd_heuristic(&ra, &rb) {
                Some(g) => g,
                None => Self::gcd_inner(&ra, &rb),
            };
            if extra.is_one() {
                break;
            }
            core = &core * &extra;
        }
        (&mono * &core).primitive_abs()
    }

    /// Max absolute numerator over the coefficients.
    fn max_norm(&self) -> Int {
        let mut n = Int::zero();
        for c in self.terms.values() {
            let a = c.numer().abs();
            if a > n {
                n = a;
            }
        }
        n
    }

    /// Evaluation/reconstruction gcd for integer-primitive inputs: evaluate
    /// one variable at a large integer, recurse, lift the image back through
    /// balanced base-ξ digits, and verify by exact division.
    fn gcd_heuristic(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
        match (a.as_constant(), b.as_constant()) {
            (Some(ca), Some(cb)) => {
                let g = ca.numer().gcd(cb.numer());
                return Some(MultiPoly::constant(Rat::from_integer(g)));
            }
            (Some(ca), None) => {
                let content = b.rational_content();
                let g = ca.numer().gcd(content.numer());
                return Some(MultiPoly::constant(Rat::from_integer(g)));
            }
            (None, Some(cb)) => {
                let content = a.rational_content();
                let g = cb.numer().gcd(content.numer());
                return Some(MultiPoly::constant(Rat::from_integer(g)));
            }
            _ => {}
        }
        // prefer a shared variable of low degree
        let mut pick: Option<(Var, u32)> = None;
        for v in &a.vars {
            let d = if b.contains_var(v) {
                a.degree_in(v).min(b.degree_in(v))
            } else {
                a.degree_in(v)
            };
            if pick.as_ref().map(|(_, best)| d < *best).unwrap_or(true) {
                pick = Some((v.clone(), d));
            }
        }
        let (v, _) = pick?;
        let na = a.max_norm();
        let nb = b.max_norm();
        let mut xi: Int = Int::from(2) * na.min(nb) + Int::from(29);
        for _ in 0..6 {
            let av = a.eval_var(&v, &Rat::from_integer(xi.clone()));
            let bv = b.eval_var(&v, &Rat::from_integer(xi.clone()));
            if !av.is_zero() && !bv.is_zero() {
                if let Some(img) = Self::gcd_heuristic(&av, &bv) {
                    let cand = Self::lift_digits(&img, &xi, &v).primitive_abs();
                    if !cand.is_zero()
                        && a.exact_div(&cand).is_some()
                        && b.exact_div(&cand).is_some()
                    {
                        return Some(cand);
                    }
                }
            }
            xi = xi * Int::from(73794u32) / Int::from(27011u32);
        }
        None
    }

    /// Reconstructs a polynomial in `v` from its value via balanced base-ξ
    /// digits applied coefficient-wise.
    fn lift_digits(img: &MultiPoly, xi: &Int, v: &Var) -> MultiPoly {
        let half = xi / Int::from(2);
        let mut cur = img.clone();
        let mut acc = MultiPoly::zero();
        let mut k = 0u32;
        while !cur.is_zero() {
            // digit: coefficient-wise symmetric remainder mod ξ
            let digit_terms: BTreeMap<Vec<u32>, Rat> = cur
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let mut r = c.numer().mod_floor(xi);
                    if r > half {
                        r = r - xi;
                    }
                    if r.is_zero() {
                        None
                    } else {
                        Some((e.clone(), Rat::from_integer(r)))
                    }
                })
                .collect();
            let digit = MultiPoly {
                vars: cur.vars.clone(),
                terms: digit_terms,
            }
            .compact();
            if !digit.is_zero() {
                acc = &acc + &(&digit * &MultiPoly::monomial(v, k, Rat::one()));
            }
            let rest = &cur - &digit;
            cur = rest.scale(&Rat::new(Int::one(), xi.clone()));
            debug_assert!(
                cur.terms.values().all(|c| c.denom().is_one()),
                "exact digit division"
            );
            k += 1;
            if k > 4096 {
                return MultiPoly::zero();
            }
        }
        acc
    }

    fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return Self::one();
        }
        // main variable: shared, smallest min-degree
        let mut main: Option<(Var, u32)> = None;
        for v in &a.vars {
            if b.contains_var(v) {
                let d = a.degree_in(v).min(b.degree_in(v));
                if main.as_ref().map(|(_, best)| d < *best).unwrap_or(true) {
                    main = Some((v.clone(), d));
                }
            }
        }
        let v = match main {
            None => return Self::one(),
            Some((v, _)) => v,
        };
        let (ca, pa) = a.content_and_pp(&v);
        let (cb, pb) = b.content_and_pp(&v);
        let cg = Self::gcd(&ca, &cb);
        let (mut r0, mut r1) = if pa.degree_in(&v) >= pb.degree_in(&v) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        loop {
            if r1.degree_in(&v) == 0 {
                // nonzero and free of v: primitive parts are coprime
                return cg;
            }
            let r2 = r0.prem(&r1, &v);
            if r2.is_zero() {
                break;
            }
            let (_, pp) = r2.content_and_pp(&v);
            r0 = r1;
            r1 = pp.primitive_abs();
        }
        let (_, g) = r1.content_and_pp(&v);
        (&cg * &g.primitive_abs()).primitive_abs()
    }
}

impl core::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (vars, mut ta, tb) = MultiPoly::aligned(self, rhs);
        for (e, c) in tb {
            match ta.entry(e) {
                alloc::collections::btree_map::Entry::Occupied(mut o) => {
                    let nv = &*o.get() + &c;
                    if nv.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = nv;
                    }
                }
                alloc::collections::btree_map::Entry::Vacant(vac) => {
                    vac.insert(c);
                }
            }
        }
        MultiPoly { vars, terms: ta }.compact()
    }
}

impl core::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl core::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl core::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let (vars, ta, tb) = MultiPoly::aligned(self, rhs);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += c;
            }
        }
        MultiPoly { vars, terms }.compact()
    }
}

/// Prints a rational coefficient as `p` or `p/q`.
pub fn format_rat(c: &Rat) -> String {
    use alloc::string::ToString;
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        let mut s = c.numer().to_string();
        s.push('/');
        s.push_str(&c.denom().to_string());
        s
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        // descending term order reads naturally (z^2 + z + 1)
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let is_const_term = e.iter().all(|&k| k == 0);
            let show_coeff = is_const_term || !abs.is_one();
            if show_coeff {
                f.write_str(&format_rat(&abs))?;
            }
            let mut need_star = show_coeff;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if need_star {
                    f.write_str("*")?;
                }
                write!(f, "{}", self.vars[i])?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
                need_star = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Var {
        Var::new(n)
    }

    fn z() -> MultiPoly {
        MultiPoly::variable(&v("z"))
    }

    #[test]
    fn arithmetic_basics() {
        let p = &(&z() * &z()) + &MultiPoly::from_int(1); // z^2 + 1
        let q = &z() - &MultiPoly::from_int(1); // z - 1
        let r = &p * &q;
        assert_eq!(r.degree_in(&v("z")), 3);
        let back = r.exact_div(&q).unwrap();
        assert_eq!(back, p);
        assert!(r.exact_div(&(&z() + &MultiPoly::from_int(1))).is_none());
    }

    #[test]
    fn multivariate_alignment() {
        let a = MultiPoly::variable(&v("u"));
        let b = MultiPoly::variable(&v("w"));
        let s = &a + &b;
        assert_eq!(s.vars().len(), 2);
        let p = &s * &s;
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.degree_in(&v("u")), 2);
    }

    #[test]
    fn derivative_product_rule() {
        let zv = v("z");
        let f = &(&z() * &z()) + &MultiPoly::from_int(3);
        let g = &z() - &MultiPoly::from_int(2);
        let lhs = (&f * &g).derivative(&zv);
        let rhs = &(&f.derivative(&zv) * &g) + &(&f * &g.derivative(&zv));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_univariate() {
        let a = &(&z() * &z()) - &MultiPoly::from_int(1); // (z-1)(z+1)
        let b = &z() - &MultiPoly::from_int(1);
        let g = MultiPoly::gcd(&a, &b);
        assert_eq!(g, b.primitive_abs());
        // gcd is sign-normalized
        let g2 = MultiPoly::gcd(&a, &(-&b));
        assert_eq!(g2, b.primitive_abs());
        let _ = MultiPoly::gcd(&a, &MultiPoly::zero());
        assert_eq!(MultiPoly::gcd(&a, &MultiPoly::zero()), a.primitive_abs());
    }

    #[test]
    fn gcd_multivariate() {
        let u = MultiPoly::variable(&v("u"));
        let w = MultiPoly::variable(&v("w"));
        let d = &u - &w;
        let a = &(&d * &d) * &(&u + &w);
        let b = &d * &u;
        let g = MultiPoly::gcd(&a, &b);
        assert_eq!(g, d.primitive_abs());
        // disjoint variable sets are coprime
        let c = MultiPoly::gcd(&u, &w);
        assert!(c.is_one());
    }

    #[test]
    fn gcd_with_content() {
        // gcd(2(z^2-1), 4(z-1)) = 2(z-1) up to primitivity -> primitive gcd is (z-1)
        let a = (&(&z() * &z()) - &MultiPoly::from_int(1)).scale(&rat_int(2));
        let b = (&z() - &MultiPoly::from_int(1)).scale(&rat_int(4));
        let g = MultiPoly::gcd(&a, &b);
        assert_eq!(g, &z() - &MultiPoly::from_int(1));
    }

    #[test]
    fn rename_and_eval() {
        let zv = v("z");
        let uv = v("u");
        let p = &(&z() * &z()) + &z(); // z^2 + z
        let q = p.rename_var(&zv, &uv);
        assert!(q.contains_var(&uv));
        assert!(!q.contains_var(&zv));
        let val = p.eval_var(&zv, &rat_int(3));
        assert_eq!(val.as_constant().unwrap(), rat_int(12));
    }

    #[test]
    fn display_roundtrip_shape() {
        use alloc::string::ToString;
        let p = &(&z() * &z()).scale(&rat_frac(1, 2)) - &MultiPoly::from_int(3);
        assert_eq!(p.to_string(), "1/2*z^2 - 3");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }
}
