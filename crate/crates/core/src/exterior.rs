//! Exterior calculus on a three-dimensional affine chart.
//!
//! A chart is either a plain affine 3-space (coordinates such as
//! `x1, x3, x4`) or the graph chart of a hypersurface `f = 0` in affine
//! 4-space, where the last coordinate is dependent: its differential is
//! eliminated through `dX4 = -(f_1 dX1 + f_2 dX2 + f_3 dX3) / f_4` and all
//! coefficients live in the polynomial ring localized at `f_4`. Forms and
//! multivector fields carry a single tracked denominator exponent `e`,
//! meaning the object equals (polynomial part) / f_4^e.
//!
//! # Sign conventions
//!
//! Wedge products use the Koszul sign of merging sorted index sets.
//! Contraction of a multivector `∂_T` into a form `e_S` (both on sorted
//! variable sets) is "from the right": writing `e_S = σ · e_{S∖T} ∧ e_T`,
//! we set `ι_{∂_T} e_S = σ · e_{S∖T}` and extend bilinearly; the pairing
//! of equal sorted sets is `+1`. With the volume form `Vol = dx1∧dx3∧dx4`
//! this makes the bivector/one-form identification send `dx1` to `∂3∧∂4`,
//! `dx3` to `-∂1∧∂4` and `dx4` to `∂1∧∂3`; every other sign follows by
//! multilinearity. Any self-consistent extension of those three
//! identifications would do; this is the one implemented throughout.

use crate::poly::{rat, Polynomial, Rational};
use crate::vars::Var;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("wedge degree {0} exceeds the chart dimension 3")]
    DegreeOverflow(usize),
    #[error("cannot contract a degree-{0} multivector into a degree-{1} form")]
    DegreeMismatch(usize, usize),
    #[error("the hypersurface chart is degenerate: the dependent partial vanishes")]
    DegenerateChart,
}

/// Substitution eliminating the differential of the dependent coordinate:
/// `d(var) = (sum numerators[i] * d(form_vars[i])) / den`.
#[derive(Clone, PartialEq, Debug)]
pub struct DependentDifferential {
    pub var: Var,
    pub numerators: Vec<Polynomial>,
    pub den: Polynomial,
}

/// The ambient data of a chart: its coordinates, the optional
/// hypersurface relation, and the volume denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartContext {
    coords: Vec<Var>,
    form_vars: Vec<Var>,
    relation: Option<Polynomial>,
    dependent: Option<DependentDifferential>,
    volume_den: Polynomial,
}

impl ChartContext {
    /// A plain affine 3-space; volume form is the wedge of the coordinate
    /// differentials and all denominators are trivial.
    pub fn affine(coords: [Var; 3]) -> Arc<Self> {
        let coords = coords.to_vec();
        assert!(coords.windows(2).all(|w| w[0] < w[1]), "coordinates must be sorted");
        Arc::new(ChartContext {
            form_vars: coords.clone(),
            coords,
            relation: None,
            dependent: None,
            volume_den: Polynomial::one(),
        })
    }

    /// The graph chart of `relation = 0` in affine 4-space, with the last
    /// coordinate dependent. Fails when `∂relation/∂coords[3]` vanishes
    /// identically, since then the chart sees no graph at all.
    pub fn hypersurface(coords: [Var; 4], relation: Polynomial) -> Result<Arc<Self>, ExteriorError> {
        assert!(coords.windows(2).all(|w| w[0] < w[1]), "coordinates must be sorted");
        let dep_var = coords[3];
        let den = relation.partial_derivative(dep_var);
        if den.is_zero() {
            return Err(ExteriorError::DegenerateChart);
        }
        let form_vars = coords[..3].to_vec();
        let numerators = form_vars
            .iter()
            .map(|&v| -&relation.partial_derivative(v))
            .collect();
        Ok(Arc::new(ChartContext {
            coords: coords.to_vec(),
            form_vars,
            relation: Some(relation),
            dependent: Some(DependentDifferential {
                var: dep_var,
                numerators,
                den: den.clone(),
            }),
            volume_den: den,
        }))
    }

    pub fn coords(&self) -> &[Var] {
        &self.coords
    }

    pub fn form_vars(&self) -> &[Var] {
        &self.form_vars
    }

    pub fn relation(&self) -> Option<&Polynomial> {
        self.relation.as_ref()
    }

    pub fn volume_den(&self) -> &Polynomial {
        &self.volume_den
    }

    fn den_poly(&self) -> Option<&Polynomial> {
        self.dependent.as_ref().map(|d| &d.den)
    }

    fn same_chart(a: &Arc<ChartContext>, b: &Arc<ChartContext>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Koszul sign of concatenating two disjoint sorted sets into one sorted
/// set; `None` when they overlap.
fn merge_sorted(a: &[Var], b: &[Var]) -> Option<(Vec<Var>, i64)> {
    let mut inversions = 0u32;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<Var> = a.iter().chain(b.iter()).copied().collect();
    merged.sort();
    Some((merged, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// For `t ⊆ s`, the sign `σ` with `e_s = σ · e_{s∖t} ∧ e_t`, together with
/// `s∖t`. `None` when `t` is not contained in `s`.
fn split_sign(s: &[Var], t: &[Var]) -> Option<(Vec<Var>, i64)> {
    if !t.iter().all(|v| s.contains(v)) {
        return None;
    }
    let rest: Vec<Var> = s.iter().copied().filter(|v| !t.contains(v)).collect();
    let mut inversions = 0u32;
    for &x in &rest {
        for &y in t {
            if x > y {
                inversions += 1;
            }
        }
    }
    Some((rest, if inversions % 2 == 0 { 1 } else { -1 }))
}

type Terms = BTreeMap<Vec<Var>, Polynomial>;

fn add_into(terms: &mut Terms, key: Vec<Var>, value: Polynomial) {
    if value.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = &*e.get() + &value;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Normalizes a term map: drops zero coefficients and divides out the
/// denominator wherever every coefficient allows it.
fn normalize(ctx: &ChartContext, terms: &mut Terms, den_exp: &mut u32) {
    terms.retain(|_, p| !p.is_zero());
    if terms.is_empty() {
        *den_exp = 0;
        return;
    }
    let Some(den) = ctx.den_poly() else {
        assert_eq!(*den_exp, 0, "denominator on a chart without a relation");
        return;
    };
    while *den_exp > 0 {
        let reduced: Option<Terms> = terms
            .iter()
            .map(|(k, p)| p.exact_div(den).ok().map(|q| (k.clone(), q)))
            .collect();
        match reduced {
            Some(r) => {
                *terms = r;
                *den_exp -= 1;
            }
            None => break,
        }
    }
}

macro_rules! graded_common {
    ($T:ident) => {
        impl $T {
            pub fn zero(ctx: Arc<ChartContext>, degree: usize) -> Self {
                assert!(degree <= 3);
                $T {
                    ctx,
                    degree,
                    terms: Terms::new(),
                    den_exp: 0,
                }
            }

            pub fn from_terms(
                ctx: Arc<ChartContext>,
                degree: usize,
                entries: impl IntoIterator<Item = (Vec<Var>, Polynomial)>,
                den_exp: u32,
            ) -> Self {
                assert!(degree <= 3);
                let mut terms = Terms::new();
                for (key, value) in entries {
                    assert_eq!(key.len(), degree, "key size must match the degree");
                    assert!(key.windows(2).all(|w| w[0] < w[1]), "keys must be sorted sets");
                    assert!(
                        key.iter().all(|v| ctx.form_vars.contains(v)),
                        "key variable outside the chart differentials"
                    );
                    add_into(&mut terms, key, value);
                }
                let mut out = $T {
                    ctx,
                    degree,
                    terms,
                    den_exp,
                };
                out.normalize();
                out
            }

            fn normalize(&mut self) {
                normalize(&self.ctx, &mut self.terms, &mut self.den_exp);
            }

            pub fn context(&self) -> &Arc<ChartContext> {
                &self.ctx
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn den_exp(&self) -> u32 {
                self.den_exp
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn terms(&self) -> impl Iterator<Item = (&Vec<Var>, &Polynomial)> + '_ {
                self.terms.iter()
            }

            /// Numerator coefficient at `key` (the object equals the
            /// coefficient map divided by `f_4^den_exp`).
            pub fn coefficient(&self, key: &[Var]) -> Polynomial {
                self.terms.get(key).cloned().unwrap_or_else(Polynomial::zero)
            }

            pub fn scale(&self, c: &Rational) -> Self {
                let mut out = self.clone();
                out.terms = out
                    .terms
                    .into_iter()
                    .map(|(k, p)| (k, p.scale(c)))
                    .collect();
                out.normalize();
                out
            }

            pub fn mul_poly(&self, p: &Polynomial) -> Self {
                let mut out = self.clone();
                out.terms = out.terms.into_iter().map(|(k, q)| (k, &q * p)).collect();
                out.normalize();
                out
            }

            pub fn add(&self, other: &Self) -> Self {
                assert!(ChartContext::same_chart(&self.ctx, &other.ctx), "chart mismatch");
                assert_eq!(self.degree, other.degree, "degree mismatch in addition");
                let target = self.den_exp.max(other.den_exp);
                let mut terms = Terms::new();
                for (obj, exp) in [(self, self.den_exp), (other, other.den_exp)] {
                    let lift = match self.ctx.den_poly() {
                        Some(den) => den.pow(target - exp),
                        None => Polynomial::one(),
                    };
                    for (k, p) in &obj.terms {
                        add_into(&mut terms, k.clone(), &*p * &lift);
                    }
                }
                let mut out = $T {
                    ctx: self.ctx.clone(),
                    degree: self.degree,
                    terms,
                    den_exp: target,
                };
                out.normalize();
                out
            }

            pub fn neg(&self) -> Self {
                self.scale(&rat(-1))
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.neg())
            }
        }
    };
}

/// A differential form of degree 0..=3 on the chart, with polynomial
/// numerators over the independent differentials and a tracked power of
/// the chart denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartForm {
    ctx: Arc<ChartContext>,
    degree: usize,
    terms: Terms,
    den_exp: u32,
}

/// A multivector field of degree 0..=3 on the chart; keys are wedges of
/// coordinate derivations.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartMultivector {
    ctx: Arc<ChartContext>,
    degree: usize,
    terms: Terms,
    den_exp: u32,
}

graded_common!(ChartForm);
graded_common!(ChartMultivector);

impl ChartForm {
    pub fn scalar(ctx: Arc<ChartContext>, p: Polynomial) -> Self {
        ChartForm::from_terms(ctx, 0, [(vec![], p)], 0)
    }

    pub fn scalar_with_den(ctx: Arc<ChartContext>, p: Polynomial, den_exp: u32) -> Self {
        ChartForm::from_terms(ctx, 0, [(vec![], p)], den_exp)
    }

    /// Builds a one-form from raw `coefficient * d(coordinate)` data,
    /// eliminating the dependent differential if the chart has one.
    pub fn one_form(
        ctx: Arc<ChartContext>,
        components: impl IntoIterator<Item = (Var, Polynomial)>,
    ) -> Self {
        let dependent = ctx.dependent.clone();
        let mut terms = Terms::new();
        let mut den_exp = 0;
        match dependent {
            None => {
                for (v, p) in components {
                    assert!(ctx.form_vars.contains(&v), "unknown differential");
                    add_into(&mut terms, vec![v], p);
                }
            }
            Some(dep) => {
                den_exp = 1;
                for (v, p) in components {
                    if v == dep.var {
                        for (fv, num) in ctx.form_vars.iter().zip(&dep.numerators) {
                            add_into(&mut terms, vec![*fv], &p * num);
                        }
                    } else {
                        assert!(ctx.form_vars.contains(&v), "unknown differential");
                        add_into(&mut terms, vec![v], &p * &dep.den);
                    }
                }
            }
        }
        let mut out = ChartForm {
            ctx,
            degree: 1,
            terms,
            den_exp,
        };
        out.normalize();
        out
    }

    /// Exterior product with Koszul signs; denominator exponents add.
    pub fn wedge(&self, other: &ChartForm) -> Result<ChartForm, ExteriorError> {
        assert!(ChartContext::same_chart(&self.ctx, &other.ctx), "chart mismatch");
        let degree = self.degree + other.degree;
        if degree > 3 {
            return Err(ExteriorError::DegreeOverflow(degree));
        }
        let mut terms = Terms::new();
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                if let Some((key, sign)) = merge_sorted(ka, kb) {
                    add_into(&mut terms, key, (pa * pb).scale(&rat(sign)));
                }
            }
        }
        let mut out = ChartForm {
            ctx: self.ctx.clone(),
            degree,
            terms,
            den_exp: self.den_exp + other.den_exp,
        };
        out.normalize();
        Ok(out)
    }

    /// Exterior derivative. Coefficients are differentiated by the
    /// quotient rule `d(p/f^e) = (f dp - e p df)/f^{e+1}`, and on a
    /// hypersurface chart the dependent differential is eliminated before
    /// returning.
    pub fn exterior_derivative(&self) -> ChartForm {
        assert!(self.degree <= 2, "d of a top-degree form");
        let ctx = self.ctx.clone();
        let mut terms = Terms::new();
        let (new_exp, den, dep) = match &ctx.dependent {
            None => (0u32, Polynomial::one(), None),
            Some(dep) => (self.den_exp + 2, dep.den.clone(), Some(dep.clone())),
        };
        let e = rat(self.den_exp as i64);
        for (key, p) in &self.terms {
            for &u in ctx.coords.iter() {
                let g = p.partial_derivative(u);
                if g.is_zero() && self.den_exp == 0 {
                    continue;
                }
                // numerator of the du-component of d(p / den^e), over
                // den^{e+1}
                let q = match &ctx.dependent {
                    None => g,
                    Some(_) => &(&den * &g) - &(&p.scale(&e) * &den.partial_derivative(u)),
                };
                if q.is_zero() {
                    continue;
                }
                // route du into independent differentials, over den^{e+2}
                let routed: Vec<(Var, Polynomial)> = match &dep {
                    Some(d) if u == d.var => ctx
                        .form_vars
                        .iter()
                        .zip(&d.numerators)
                        .map(|(&v, n)| (v, &q * n))
                        .collect(),
                    Some(_) => vec![(u, &q * &den)],
                    None => vec![(u, q)],
                };
                for (v, c) in routed {
                    if let Some((merged, sign)) = merge_sorted(&[v], key) {
                        add_into(&mut terms, merged, c.scale(&rat(sign)));
                    }
                }
            }
        }
        let mut out = ChartForm {
            ctx,
            degree: self.degree + 1,
            terms,
            den_exp: new_exp,
        };
        out.normalize();
        out
    }

    /// Divides a top-degree form by the chart volume form, yielding the
    /// scalar `coefficient * volume_den / f_4^e`.
    pub fn divide_by_volume(&self) -> ChartForm {
        assert_eq!(self.degree, 3, "only top forms divide by the volume");
        let top: Vec<Var> = self.ctx.form_vars.clone();
        let p = self.coefficient(&top);
        ChartForm::scalar_with_den(self.ctx.clone(), &p * &self.ctx.volume_den, self.den_exp)
    }

    /// Equality in the coordinate ring of the chart: cross-multiplies the
    /// denominators and tests divisibility of the difference by the
    /// hypersurface relation (plain equality when there is none).
    pub fn equal_mod_relation(&self, other: &ChartForm) -> bool {
        assert!(ChartContext::same_chart(&self.ctx, &other.ctx), "chart mismatch");
        if self.degree != other.degree {
            return self.is_zero() && other.is_zero();
        }
        let Some(relation) = &self.ctx.relation else {
            return self == other;
        };
        let den = self.ctx.den_poly().expect("relation implies a denominator");
        let lift_a = den.pow(other.den_exp);
        let lift_b = den.pow(self.den_exp);
        let mut keys: std::collections::BTreeSet<&Vec<Var>> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.iter().all(|key| {
            let diff = &(&self.coefficient(key) * &lift_a) - &(&other.coefficient(key) * &lift_b);
            diff.is_zero() || relation.divides(&diff)
        })
    }
}

impl ChartMultivector {
    /// A vector field from `coefficient * ∂/∂(coordinate)` components.
    pub fn vector(
        ctx: Arc<ChartContext>,
        components: impl IntoIterator<Item = (Var, Polynomial)>,
    ) -> Self {
        let entries: Vec<_> = components.into_iter().map(|(v, p)| (vec![v], p)).collect();
        ChartMultivector::from_terms(ctx, 1, entries, 0)
    }

    /// Interior product into a form: for `∂_T` against `e_S` with `T ⊆ S`
    /// this yields `σ e_{S∖T}` in the convention of the module docs.
    pub fn contract(&self, form: &ChartForm) -> Result<ChartForm, ExteriorError> {
        assert!(ChartContext::same_chart(&self.ctx, &form.ctx), "chart mismatch");
        if self.degree > form.degree {
            return Err(ExteriorError::DegreeMismatch(self.degree, form.degree));
        }
        let mut terms = Terms::new();
        for (kt, q) in &self.terms {
            for (ks, p) in &form.terms {
                if let Some((rest, sign)) = split_sign(ks, kt) {
                    add_into(&mut terms, rest, (q * p).scale(&rat(sign)));
                }
            }
        }
        let mut out = ChartForm {
            ctx: form.ctx.clone(),
            degree: form.degree - self.degree,
            terms,
            den_exp: self.den_exp + form.den_exp,
        };
        out.normalize();
        Ok(out)
    }
}

/// The bivector `B` with `ι_B Vol = ω`, for a one-form `ω` on a chart
/// without a relation.
pub fn bivector_from_form(form: &ChartForm) -> ChartMultivector {
    let ctx = form.ctx.clone();
    assert!(ctx.dependent.is_none(), "identification needs a free 3-chart");
    assert_eq!(form.degree, 1);
    let top = ctx.form_vars.clone();
    let mut terms = Terms::new();
    for (key, p) in &form.terms {
        let pair: Vec<Var> = top.iter().copied().filter(|v| *v != key[0]).collect();
        let (_, sign) = split_sign(&top, &pair).expect("complement is a subset");
        add_into(&mut terms, pair, (p * &ctx.volume_den).scale(&rat(sign)));
    }
    let den_exp = form.den_exp;
    let mut out = ChartMultivector {
        ctx,
        degree: 2,
        terms,
        den_exp,
    };
    out.normalize();
    out
}

/// Inverse of [`bivector_from_form`].
pub fn form_from_bivector(bivector: &ChartMultivector) -> ChartForm {
    let ctx = bivector.ctx.clone();
    assert!(ctx.dependent.is_none(), "identification needs a free 3-chart");
    assert_eq!(bivector.degree, 2);
    let top = ctx.form_vars.clone();
    let mut terms = Terms::new();
    for (pair, q) in &bivector.terms {
        let v: Vec<Var> = top.iter().copied().filter(|v| !pair.contains(v)).collect();
        let (_, sign) = split_sign(&top, pair).expect("pair is a subset");
        let coeff = q
            .exact_div(&ctx.volume_den)
            .expect("bivector coefficients divisible by the volume denominator");
        add_into(&mut terms, v, coeff.scale(&rat(sign)));
    }
    let den_exp = bivector.den_exp;
    let mut out = ChartForm {
        ctx,
        degree: 1,
        terms,
        den_exp,
    };
    out.normalize();
    out
}

/// Schouten bracket of a vector field with a bivector field, by the local
/// formulas
/// `[a∂i, b∂j∧∂k] = a b_i ∂j∧∂k - b a_j ∂i∧∂k + b a_k ∂i∧∂j` (i ∉ {j,k})
/// and `[a∂i, b∂j∧∂k] = (a b_i - b a_i) ∂j∧∂k` (i ∈ {j,k}),
/// extended bilinearly.
pub fn schouten_vector_bivector(
    v: &ChartMultivector,
    b: &ChartMultivector,
) -> ChartMultivector {
    assert!(ChartContext::same_chart(&v.ctx, &b.ctx), "chart mismatch");
    assert_eq!(v.degree, 1);
    assert_eq!(b.degree, 2);
    assert_eq!(v.den_exp, 0, "polynomial coefficients required");
    assert_eq!(b.den_exp, 0, "polynomial coefficients required");
    let ctx = v.ctx.clone();
    let mut terms = Terms::new();
    for (kv, a) in &v.terms {
        let i = kv[0];
        for (kb, coeff) in &b.terms {
            let (j, k) = (kb[0], kb[1]);
            if i == j || i == k {
                let value = &(a * &coeff.partial_derivative(i))
                    - &(coeff * &a.partial_derivative(i));
                add_into(&mut terms, kb.clone(), value);
            } else {
                add_into(&mut terms, kb.clone(), a * &coeff.partial_derivative(i));
                if let Some((key, sign)) = merge_sorted(&[i], &[k]) {
                    let value = (coeff * &a.partial_derivative(j)).scale(&rat(-sign));
                    add_into(&mut terms, key, value);
                }
                if let Some((key, sign)) = merge_sorted(&[i], &[j]) {
                    let value = (coeff * &a.partial_derivative(k)).scale(&rat(sign));
                    add_into(&mut terms, key, value);
                }
            }
        }
    }
    let mut out = ChartMultivector {
        ctx,
        degree: 2,
        terms,
        den_exp: 0,
    };
    out.normalize();
    out
}

/// Schouten bracket of two bivectors through their one-form avatars:
/// `[ω_A, ω_B] = (ω_A ∧ dω_B + dω_A ∧ ω_B) / Vol`, a scalar with a
/// tracked denominator exponent.
pub fn schouten_bivector_bivector(omega_a: &ChartForm, omega_b: &ChartForm) -> ChartForm {
    assert_eq!(omega_a.degree, 1);
    assert_eq!(omega_b.degree, 1);
    let left = omega_a
        .wedge(&omega_b.exterior_derivative())
        .expect("1 + 2 = 3 fits the chart");
    let right = omega_a
        .exterior_derivative()
        .wedge(omega_b)
        .expect("2 + 1 = 3 fits the chart");
    left.add(&right).divide_by_volume()
}

/// Independent evaluation of the bivector-bivector bracket straight from
/// the contraction definition: `[A,B](Vol) = A(d(B(Vol))) + B(d(A(Vol)))`
/// (the `A∧B (dVol)` term vanishes because `Vol` is a top form).
pub fn schouten_bondal_oracle(a: &ChartMultivector, b: &ChartMultivector) -> ChartForm {
    let ctx = a.ctx.clone();
    assert!(ctx.dependent.is_none(), "oracle runs on a free 3-chart");
    assert_eq!(a.degree, 2);
    assert_eq!(b.degree, 2);
    let vol = ChartForm::from_terms(
        ctx.clone(),
        3,
        [(ctx.form_vars.clone(), Polynomial::one())],
        0,
    );
    let term_a = a
        .contract(&b.contract(&vol).unwrap().exterior_derivative())
        .unwrap();
    let term_b = b
        .contract(&a.contract(&vol).unwrap().exterior_derivative())
        .unwrap();
    term_a.add(&term_b)
}

fn fmt_graded(
    f: &mut fmt::Formatter<'_>,
    terms: &Terms,
    den_exp: u32,
    symbol: &str,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (key, p)) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "({p})")?;
        for v in key {
            write!(f, " {symbol}{v}")?;
        }
    }
    if den_exp > 0 {
        write!(f, " / f^{den_exp}")?;
    }
    Ok(())
}

impl fmt::Display for ChartForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_graded(f, &self.terms, self.den_exp, "d")
    }
}

impl fmt::Display for ChartMultivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_graded(f, &self.terms, self.den_exp, "@")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars;

    fn quintic_ctx() -> Arc<ChartContext> {
        ChartContext::affine([
            vars::chart_small_x(1),
            vars::chart_small_x(3),
            vars::chart_small_x(4),
        ])
    }

    fn xv(i: usize) -> Var {
        vars::chart_small_x(i)
    }

    fn xp(i: usize) -> Polynomial {
        Polynomial::var(xv(i))
    }

    fn dx(ctx: &Arc<ChartContext>, i: usize) -> ChartForm {
        ChartForm::one_form(ctx.clone(), [(xv(i), Polynomial::one())])
    }

    #[test]
    fn wedge_signs_and_coefficients() {
        let ctx = quintic_ctx();
        let d1 = dx(&ctx, 1);
        let d3 = dx(&ctx, 3);
        let w13 = d1.wedge(&d3).unwrap();
        assert_eq!(w13.coefficient(&[xv(1), xv(3)]), Polynomial::one());
        let w31 = d3.wedge(&d1).unwrap();
        assert_eq!(w31, w13.neg());

        // (x4 dx1) ∧ (x1 dx4) = x1 x4 dx1∧dx4
        let a = ChartForm::one_form(ctx.clone(), [(xv(1), xp(4))]);
        let b = ChartForm::one_form(ctx.clone(), [(xv(4), xp(1))]);
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.coefficient(&[xv(1), xv(4)]), &xp(1) * &xp(4));

        let top = w13.wedge(&dx(&ctx, 4)).unwrap();
        assert!(matches!(
            top.wedge(&d1),
            Err(ExteriorError::DegreeOverflow(4))
        ));
    }

    #[test]
    fn exterior_derivative_basics() {
        let ctx = quintic_ctx();
        // d(x1 dx3) = dx1 ∧ dx3
        let form = ChartForm::one_form(ctx.clone(), [(xv(3), xp(1))]);
        let d = form.exterior_derivative();
        assert_eq!(d.coefficient(&[xv(1), xv(3)]), Polynomial::one());
        assert_eq!(d.terms().count(), 1);
    }

    #[test]
    fn contraction_convention() {
        let ctx = quintic_ctx();
        let vol = dx(&ctx, 1)
            .wedge(&dx(&ctx, 3))
            .unwrap()
            .wedge(&dx(&ctx, 4))
            .unwrap();
        let pair = |a: usize, b: usize| {
            ChartMultivector::from_terms(
                ctx.clone(),
                2,
                [(vec![xv(a), xv(b)], Polynomial::one())],
                0,
            )
        };
        assert_eq!(pair(3, 4).contract(&vol).unwrap(), dx(&ctx, 1));
        assert_eq!(pair(1, 4).contract(&vol).unwrap(), dx(&ctx, 3).neg());
        assert_eq!(pair(1, 3).contract(&vol).unwrap(), dx(&ctx, 4));

        let v1 = ChartMultivector::vector(ctx.clone(), [(xv(1), Polynomial::one())]);
        assert_eq!(
            v1.contract(&dx(&ctx, 1)).unwrap(),
            ChartForm::scalar(ctx.clone(), Polynomial::one())
        );
        assert_eq!(
            pair(1, 3)
                .contract(&dx(&ctx, 1).wedge(&dx(&ctx, 3)).unwrap())
                .unwrap(),
            ChartForm::scalar(ctx.clone(), Polynomial::one())
        );
        assert!(matches!(
            pair(1, 3).contract(&dx(&ctx, 1)),
            Err(ExteriorError::DegreeMismatch(2, 1))
        ));
    }

    #[test]
    fn bivector_identification_round_trip() {
        let ctx = quintic_ctx();
        let b = bivector_from_form(&dx(&ctx, 1));
        assert_eq!(b.coefficient(&[xv(3), xv(4)]), Polynomial::one());
        let b3 = bivector_from_form(&dx(&ctx, 3));
        assert_eq!(b3.coefficient(&[xv(1), xv(4)]), -&Polynomial::one());
        let b4 = bivector_from_form(&dx(&ctx, 4));
        assert_eq!(b4.coefficient(&[xv(1), xv(3)]), Polynomial::one());

        let omega = ChartForm::one_form(
            ctx.clone(),
            [(xv(1), &xp(3) * &xp(4)), (xv(3), xp(1).pow(2)), (xv(4), -&xp(3))],
        );
        assert_eq!(form_from_bivector(&bivector_from_form(&omega)), omega);
    }

    #[test]
    fn vector_bivector_bracket_formulas() {
        let ctx = quintic_ctx();
        let one = Polynomial::one();
        let d34 = |p: Polynomial| {
            ChartMultivector::from_terms(ctx.clone(), 2, [(vec![xv(3), xv(4)], p)], 0)
        };
        // [∂1, x1 ∂3∧∂4] = ∂3∧∂4
        let v = ChartMultivector::vector(ctx.clone(), [(xv(1), one.clone())]);
        assert_eq!(schouten_vector_bivector(&v, &d34(xp(1))), d34(one.clone()));
        // [x1 ∂1, x1 ∂1∧∂3] = 0
        let v = ChartMultivector::vector(ctx.clone(), [(xv(1), xp(1))]);
        let b = ChartMultivector::from_terms(ctx.clone(), 2, [(vec![xv(1), xv(3)], xp(1))], 0);
        assert!(schouten_vector_bivector(&v, &b).is_zero());
    }

    #[test]
    fn bondal_oracle_and_bracket_agree_on_simple_inputs() {
        let ctx = quintic_ctx();
        let b34 = bivector_from_form(&dx(&ctx, 1)); // ∂3∧∂4
        assert!(schouten_bondal_oracle(&b34, &b34).is_zero());

        // frozen value: [∂3∧∂4, x3 ∂1∧∂3] evaluated on the volume form is 1
        let b = ChartMultivector::from_terms(ctx.clone(), 2, [(vec![xv(1), xv(3)], xp(3))], 0);
        let by_oracle = schouten_bondal_oracle(&b34, &b);
        assert_eq!(by_oracle, ChartForm::scalar(ctx.clone(), Polynomial::one()));
        let by_forms =
            schouten_bivector_bivector(&form_from_bivector(&b34), &form_from_bivector(&b));
        assert_eq!(by_forms, by_oracle);
    }

    #[test]
    fn bracket_is_symmetric() {
        let ctx = quintic_ctx();
        let a = ChartForm::one_form(ctx.clone(), [(xv(1), xp(3).pow(2)), (xv(4), xp(1))]);
        let b = ChartForm::one_form(ctx.clone(), [(xv(3), &xp(1) * &xp(4))]);
        assert_eq!(
            schouten_bivector_bivector(&a, &b),
            schouten_bivector_bivector(&b, &a)
        );
    }

    fn cubic_fermat_ctx() -> Arc<ChartContext> {
        // chart of 1 + X1^3 + X2^3 + X3^3 + X4^3 = 0
        let coords = [1, 2, 3, 4].map(vars::chart_big_x);
        let f = coords
            .iter()
            .map(|&v| Polynomial::var(v).pow(3))
            .fold(Polynomial::one(), |acc, p| &acc + &p);
        ChartContext::hypersurface(coords, f).unwrap()
    }

    #[test]
    fn hypersurface_relation_differential_vanishes() {
        let ctx = cubic_fermat_ctx();
        let f = ctx.relation().unwrap().clone();
        let df = ChartForm::scalar(ctx.clone(), f.clone()).exterior_derivative();
        assert!(df.is_zero());
        // d of a multiple of the relation has numerators divisible by f
        let q = &Polynomial::var(vars::chart_big_x(1)) * &f;
        let dq = ChartForm::scalar(ctx.clone(), q).exterior_derivative();
        assert!(!dq.is_zero());
        assert!(dq.terms().all(|(_, num)| f.divides(num)));
        assert!(dq.equal_mod_relation(&ChartForm::zero(ctx.clone(), 1)));
    }

    #[test]
    fn equality_mod_relation() {
        let ctx = cubic_fermat_ctx();
        let f = ctx.relation().unwrap().clone();
        let x1 = vars::chart_big_x(1);
        let a = ChartForm::one_form(ctx.clone(), [(x1, Polynomial::var(x1))]);
        let noise = ChartForm::one_form(ctx.clone(), [(x1, &f * &Polynomial::var(x1))]);
        assert!(a.equal_mod_relation(&a.add(&noise)));
        let d1 = ChartForm::one_form(ctx.clone(), [(x1, Polynomial::one())]);
        let d3 = ChartForm::one_form(ctx.clone(), [(vars::chart_big_x(3), Polynomial::one())]);
        assert!(!d1.equal_mod_relation(&d3));
    }

    #[test]
    fn denominators_appear_and_reduce() {
        let ctx = cubic_fermat_ctx();
        let x4 = vars::chart_big_x(4);
        // dX4 eliminates into (numerators)/f_4
        let form = ChartForm::one_form(ctx.clone(), [(x4, Polynomial::one())]);
        assert_eq!(form.den_exp(), 1);
        // multiplying back by f_4 clears the denominator
        let cleared = form.mul_poly(ctx.volume_den());
        assert_eq!(cleared.den_exp(), 0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_chart_poly() -> impl Strategy<Value = Polynomial> {
            let term = (0usize..3, 0u32..3, -4i64..5).prop_map(|(v, e, c)| {
                let var = [xv(1), xv(3), xv(4)][v];
                Polynomial::monomial(crate::poly::Monomial::from_pairs([(var, e)]), rat(c))
            });
            prop::collection::vec(term, 0..5)
                .prop_map(|ts| ts.iter().fold(Polynomial::zero(), |acc, t| &acc + t))
        }

        fn arb_one_form() -> impl Strategy<Value = ChartForm> {
            (arb_chart_poly(), arb_chart_poly(), arb_chart_poly()).prop_map(|(a, b, c)| {
                let ctx = quintic_ctx();
                ChartForm::one_form(ctx, [(xv(1), a), (xv(3), b), (xv(4), c)])
            })
        }

        proptest! {
            #[test]
            fn d_squared_is_zero(p in arb_chart_poly(), omega in arb_one_form()) {
                let ctx = quintic_ctx();
                let s = ChartForm::scalar(ctx, p);
                prop_assert!(s.exterior_derivative().exterior_derivative().is_zero());
                prop_assert!(omega.exterior_derivative().exterior_derivative().is_zero());
            }

            #[test]
            fn wedge_graded_commutative(a in arb_one_form(), b in arb_one_form()) {
                // odd degrees anticommute
                prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().neg());
                let da = a.exterior_derivative();
                // degree 1 against degree 2 commutes
                prop_assert_eq!(b.wedge(&da).unwrap(), da.wedge(&b).unwrap());
            }

            #[test]
            fn bracket_symmetric_and_matches_oracle(a in arb_one_form(), b in arb_one_form()) {
                let lhs = schouten_bivector_bivector(&a, &b);
                prop_assert_eq!(&lhs, &schouten_bivector_bivector(&b, &a));
                let oracle = schouten_bondal_oracle(&bivector_from_form(&a), &bivector_from_form(&b));
                prop_assert_eq!(lhs, oracle);
            }

            #[test]
            fn d_squared_vanishes_on_hypersurface_chart(c0 in -4i64..5, c1 in -4i64..5, e1 in 0u32..3) {
                let ctx = cubic_fermat_ctx();
                let x1 = vars::chart_big_x(1);
                let x4 = vars::chart_big_x(4);
                let p = &Polynomial::var(x1).pow(e1).scale(&rat(c0))
                    + &Polynomial::var(x4).scale(&rat(c1));
                let s = ChartForm::scalar(ctx.clone(), p.clone());
                prop_assert!(s.exterior_derivative().exterior_derivative().is_zero());
                let omega = ChartForm::one_form(ctx, [(x1, p.clone()), (x4, &p * &p)]);
                prop_assert!(omega.exterior_derivative().exterior_derivative().is_zero());
            }
        }
    }
}
