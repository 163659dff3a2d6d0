//! Tree-weighted functional relations between the two correlator families.
//!
//! Every evaluation happens on the z-plane: the y-side variables are points
//! `w_j`, the inverse map is realized as `x(w_j)` and its y-derivative as
//! `x'(w)/y'(w)`, so no functional inversion or branch choice ever occurs.
//! The weighted sums over decorated trees are compared against an
//! independent run of the recursion on the swapped curve, and against the
//! closed pair-of-pants and single-circle partition forms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::curve::SpectralCurve;
use crate::poly::Var;
use crate::ratfunc::RationalFunction;
use crate::tr::{slot_var, slot_vars, Correlator, Engine, Provenance, TrError};
use crate::trees::{enumerate_trees, set_partitions, Tree, TreeError};

/// Errors from the transform layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XyError {
    /// The requested `(n, m)` has no implemented relation.
    UnsupportedTopology,
    Tr(TrError),
    Tree(TreeError),
}

impl From<TrError> for XyError {
    fn from(e: TrError) -> Self {
        XyError::Tr(e)
    }
}

impl From<TreeError> for XyError {
    fn from(e: TreeError) -> Self {
        XyError::Tree(e)
    }
}

impl fmt::Display for XyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XyError::UnsupportedTopology => f.write_str("no relation for this (n, m)"),
            XyError::Tr(e) => write!(f, "{}", e),
            XyError::Tree(e) => write!(f, "{}", e),
        }
    }
}

/// Variable names for the two slot families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedVars {
    pub zs: Vec<Var>,
    pub ws: Vec<Var>,
}

impl MixedVars {
    pub fn canonical(n: usize, m: usize) -> Self {
        MixedVars {
            zs: slot_vars(n),
            ws: (0..m).map(wslot_var).collect(),
        }
    }
}

/// Canonical variable for the j-th y-type slot (0-based).
pub(crate) fn wslot_var(j: usize) -> Var {
    Var::new(&format!("w{}", j + 1))
}

/// `(1/y'(w)) ∂f/∂w`: the derivative with respect to `y(w)` on the z-plane.
/// The sign in `(−d/dy)^r` is applied by callers.
pub fn y_derivative(f: &RationalFunction, w: &Var, curve: &SpectralCurve) -> RationalFunction {
    let dyw = curve.dy().rename_var(curve.var(), w);
    &f.derivative(w) / &dyw
}

/// `x'(w)/y'(w)`, the z-plane realization of `dX/dy` at a y-slot.
pub fn dx_dy(curve: &SpectralCurve, w: &Var) -> RationalFunction {
    let dxw = curve.dx().rename_var(curve.var(), w);
    let dyw = curve.dy().rename_var(curve.var(), w);
    &dxw / &dyw
}

/// The cached genus-zero density with its canonical slots renamed in order.
fn density_with_vars(
    engine: &mut Engine,
    k: usize,
    targets: &[Var],
) -> Result<RationalFunction, TrError> {
    debug_assert_eq!(k, targets.len());
    let mut value = engine.density(0, k)?;
    // two-phase rename: targets may overlap the canonical names
    for i in 0..k {
        value = value.rename_var(&slot_var(i), &Var::new(&format!("__x{}", i)));
    }
    for (i, t) in targets.iter().enumerate() {
        value = value.rename_var(&Var::new(&format!("__x{}", i)), t);
    }
    Ok(value)
}

/// The weight of one decorated tree, evaluated on the z-plane:
/// iterated `(−d/dy(w_j))^{r_j−1}` applied to the product of the y-slot
/// prefactors `−x'(w_k)/y'(w_k)` and one genus-zero correlator per black
/// vertex with arguments `z_I, w_J`.
pub fn tree_weight(
    engine: &mut Engine,
    tree: &Tree,
    vars: &MixedVars,
) -> Result<RationalFunction, XyError> {
    debug_assert_eq!(vars.zs.len(), tree.n);
    debug_assert_eq!(vars.ws.len(), tree.m);
    let curve = engine.curve().clone();
    let mut product = RationalFunction::one();
    for w in &vars.ws {
        product = &product * &(-&dx_dy(&curve, w));
    }
    for black in &tree.blacks {
        let mut targets: Vec<Var> = Vec::with_capacity(black.valence());
        for &i in &black.boxes {
            targets.push(vars.zs[i - 1].clone());
        }
        for &j in &black.circles {
            targets.push(vars.ws[j - 1].clone());
        }
        let w = density_with_vars(engine, targets.len(), &targets)?;
        product = &product * &w;
    }
    let mut result = product;
    for (j, w) in vars.ws.iter().enumerate() {
        let r = tree.circle_valence(j + 1);
        for _ in 1..r {
            result = -&y_derivative(&result, w, &curve);
        }
    }
    Ok(result)
}

/// Correlator from the weighted tree sum `Σ_T φ(T)/Aut(T)` over all trees
/// with `n` boxes and `m` circles.
pub fn xy_wnm(engine: &mut Engine, n: usize, m: usize) -> Result<Correlator, XyError> {
    if m < 1 || n + m < 2 {
        return Err(XyError::UnsupportedTopology);
    }
    let vars = MixedVars::canonical(n, m);
    let trees = enumerate_trees(n, m)?;
    let mut sum = RationalFunction::zero();
    for t in &trees {
        let w = tree_weight(engine, t, &vars)?;
        let aut = RationalFunction::from_int(t.aut() as i64);
        sum = &sum + &(&w / &aut);
    }
    let mut all_vars = vars.zs.clone();
    all_vars.extend(vars.ws.clone());
    Ok(Correlator {
        g: 0,
        n,
        m,
        vars: all_vars,
        value: sum,
        provenance: Provenance::TreeFormula,
    })
}

/// The y-side correlator `W^{(0)}_{0,m}` from the tree sum (`m ≥ 2`; the
/// `m = 2` sum reproduces the Bergman-kernel transfer).
pub fn xy_w0m(engine: &mut Engine, m: usize) -> Result<Correlator, XyError> {
    if m < 2 {
        return Err(XyError::UnsupportedTopology);
    }
    xy_wnm(engine, 0, m)
}

/// `W^{(0)}_{n,1}` as the ordered-partition sum
/// `Σ_k Σ_{I_1⊎…⊎I_k={1..n}} (−1)^k (d/dy)^{k−1} [x'(w)/y'(w) ∏ W^{(0)}_{|I_i|+1,0}(z_{I_i}, w)]`
/// (the `1/k!` against ordered tuples leaves each unordered partition once).
pub fn wn1_partition(engine: &mut Engine, n: usize) -> Result<Correlator, XyError> {
    wn1_partition_truncated(engine, n, n)
}

/// The same sum restricted to partitions with at most `kmax` blocks; the
/// full value needs `kmax = n`, and truncating at two blocks is the negative
/// control for the shorter relation it contradicts.
pub fn wn1_partition_truncated(
    engine: &mut Engine,
    n: usize,
    kmax: usize,
) -> Result<Correlator, XyError> {
    if n < 1 {
        return Err(XyError::UnsupportedTopology);
    }
    let curve = engine.curve().clone();
    let vars = MixedVars::canonical(n, 1);
    let w = &vars.ws[0];
    let pref = dx_dy(&curve, w);
    let mut sum = RationalFunction::zero();
    for parts in set_partitions(n) {
        let k = parts.len();
        if k > kmax {
            continue;
        }
        let mut inner = pref.clone();
        for block in &parts {
            let mut targets: Vec<Var> =
                block.iter().map(|&i| vars.zs[i].clone()).collect();
            targets.push(w.clone());
            let d = density_with_vars(engine, targets.len(), &targets)?;
            inner = &inner * &d;
        }
        for _ in 1..k {
            inner = y_derivative(&inner, w, &curve);
        }
        if k % 2 == 1 {
            inner = -&inner;
        }
        sum = &sum + &inner;
    }
    let mut all_vars = vars.zs.clone();
    all_vars.push(w.clone());
    Ok(Correlator {
        g: 0,
        n,
        m: 1,
        vars: all_vars,
        value: sum,
        provenance: Provenance::ClosedForm,
    })
}

/// Cylinder with mixed boundaries: `W^{(0)}_{1,1} = −(x'(w)/y'(w)) W^{(0)}_{2,0}(z1, w)`.
pub fn w11_closed_form(engine: &mut Engine) -> Result<Correlator, XyError> {
    let curve = engine.curve().clone();
    let vars = MixedVars::canonical(1, 1);
    let w = &vars.ws[0];
    let b = density_with_vars(engine, 2, &[vars.zs[0].clone(), w.clone()])?;
    let value = -&(&dx_dy(&curve, w) * &b);
    Ok(Correlator {
        g: 0,
        n: 1,
        m: 1,
        vars: alloc::vec![vars.zs[0].clone(), w.clone()],
        value,
        provenance: Provenance::ClosedForm,
    })
}

/// Pair of pants with one y-boundary:
/// `W^{(0)}_{2,1} = −(dX/dy) W_{3,0}(z1, z2, w) + d/dy[(dX/dy) W_{2,0}(z2,w) W_{2,0}(z1,w)]`
/// (the sign of the derivative term follows from applying the insertion
/// step to the cylinder relation, matching the three-boundary form).
pub fn w21_closed_form(engine: &mut Engine) -> Result<Correlator, XyError> {
    let curve = engine.curve().clone();
    let vars = MixedVars::canonical(2, 1);
    let w = &vars.ws[0];
    let z1 = &vars.zs[0];
    let z2 = &vars.zs[1];
    let pref = dx_dy(&curve, w);
    let w30 = density_with_vars(engine, 3, &[z1.clone(), z2.clone(), w.clone()])?;
    let w20_a = density_with_vars(engine, 2, &[z2.clone(), w.clone()])?;
    let w20_b = density_with_vars(engine, 2, &[z1.clone(), w.clone()])?;
    let first = -&(&pref * &w30);
    let inner = &(&pref * &w20_a) * &w20_b;
    let second = y_derivative(&inner, w, &curve);
    let value = &first + &second;
    Ok(Correlator {
        g: 0,
        n: 2,
        m: 1,
        vars: alloc::vec![z1.clone(), z2.clone(), w.clone()],
        value,
        provenance: Provenance::ClosedForm,
    })
}

/// Pair of pants with three y-boundaries, as a closed form:
/// the product term plus one total y-derivative per boundary.
pub fn w03_closed_form(engine: &mut Engine) -> Result<Correlator, XyError> {
    let curve = engine.curve().clone();
    let vars = MixedVars::canonical(0, 3);
    let ws = &vars.ws;
    let mut pref = RationalFunction::one();
    for w in ws {
        pref = &pref * &dx_dy(&curve, w);
    }
    let w30 = density_with_vars(engine, 3, &[ws[0].clone(), ws[1].clone(), ws[2].clone()])?;
    let mut value = -&(&pref * &w30);
    // derivative term at boundary i pairs it with both others
    for i in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let a = density_with_vars(engine, 2, &[ws[i].clone(), ws[others[0]].clone()])?;
        let b = density_with_vars(engine, 2, &[ws[i].clone(), ws[others[1]].clone()])?;
        let inner = &(&pref * &a) * &b;
        value = &value + &y_derivative(&inner, &ws[i], &curve);
    }
    Ok(Correlator {
        g: 0,
        n: 0,
        m: 3,
        vars: ws.clone(),
        value,
        provenance: Provenance::ClosedForm,
    })
}

/// The swapped-curve recursion output `W^{(0)}_{0,m}` in the w-variables:
/// the independent oracle for the tree sums.
pub fn swap_side_w0m(curve: &SpectralCurve, m: usize) -> Result<Correlator, TrError> {
    let mut engine = Engine::new(curve.swap());
    let value = engine.density(0, m)?;
    let c = Correlator {
        g: 0,
        n: m,
        m: 0,
        vars: slot_vars(m),
        value,
        provenance: Provenance::TrRun,
    };
    let ws: Vec<Var> = (0..m).map(wslot_var).collect();
    let renamed = c.with_vars(&ws);
    Ok(Correlator {
        g: 0,
        n: 0,
        m,
        vars: ws,
        value: renamed.value,
        provenance: Provenance::TrRun,
    })
}

/// One verified identity in a report.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// `lhs − rhs` in canonical form; zero iff the identity holds.
    pub residual: RationalFunction,
}

impl IdentityCheck {
    pub fn compare(name: &str, lhs: &RationalFunction, rhs: &RationalFunction) -> Self {
        let residual = lhs - rhs;
        IdentityCheck {
            name: String::from(name),
            passed: residual.is_zero(),
            residual,
        }
    }
}

/// A verification report: each identity with pass/fail and residual, plus
/// the hypotheses the relations rest on that no finite computation checks.
#[derive(Clone, Debug)]
pub struct XyReport {
    pub checks: Vec<IdentityCheck>,
    pub assumptions: Vec<String>,
}

impl XyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn standard_assumptions() -> Vec<String> {
        alloc::vec![String::from(
            "commuting loop insertions on the moduli (assumed, not machine-checkable)"
        )]
    }
}

/// Verifies the functional relations for one `(n, m)`:
/// `n = 0`: tree sum against the swapped-curve recursion;
/// `n ≥ 1, m = 1`: tree sum against the partition form and, where available,
/// the closed forms. Failures are reported as data, not errors.
pub fn verify_xy(curve: &SpectralCurve, n: usize, m: usize) -> Result<XyReport, XyError> {
    let mut engine = Engine::new(curve.clone());
    let mut checks = Vec::new();
    if n == 0 {
        if m < 2 {
            return Err(XyError::UnsupportedTopology);
        }
        let lhs = xy_w0m(&mut engine, m)?;
        let rhs = swap_side_w0m(curve, m)?;
        checks.push(IdentityCheck::compare(
            &format!("w0{}.trees-vs-swap-recursion", m),
            &lhs.value,
            &rhs.value,
        ));
    } else if m == 1 {
        let tree = xy_wnm(&mut engine, n, 1)?;
        let part = wn1_partition(&mut engine, n)?;
        checks.push(IdentityCheck::compare(
            &format!("w{}1.trees-vs-partition", n),
            &tree.value,
            &part.value,
        ));
        if n == 1 {
            let closed = w11_closed_form(&mut engine)?;
            checks.push(IdentityCheck::compare(
                "w11.trees-vs-closed-form",
                &tree.value,
                &closed.value,
            ));
        }
        if n == 2 {
            let closed = w21_closed_form(&mut engine)?;
            checks.push(IdentityCheck::compare(
                "w21.trees-vs-closed-form",
                &tree.value,
                &closed.value,
            ));
        }
    } else {
        return Err(XyError::UnsupportedTopology);
    }
    Ok(XyReport {
        checks,
        assumptions: XyReport::standard_assumptions(),
    })
}
