//! Homogeneous one-forms and vector fields on projective space, plus
//! restriction to an affine chart.
//!
//! Restriction substitutes the chart images of the homogeneous
//! coordinates and expands differentials by the chain rule; the twist by
//! the square of the dehomogenized coordinate is absorbed by sending that
//! coordinate to the constant 1.

use crate::exterior::{ChartContext, ChartForm, ChartMultivector};
use crate::poly::Polynomial;
use crate::vars::Var;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A form `sum c_i dZ_i` with polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct ProjectiveOneForm {
    components: BTreeMap<Var, Polynomial>,
}

impl ProjectiveOneForm {
    pub fn new(components: impl IntoIterator<Item = (Var, Polynomial)>) -> Self {
        let components = components
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        ProjectiveOneForm { components }
    }

    pub fn component(&self, v: Var) -> Polynomial {
        self.components
            .get(&v)
            .cloned()
            .unwrap_or_else(Polynomial::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Var, &Polynomial)> + '_ {
        self.components.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut components = self.components.clone();
        for (v, p) in &other.components {
            let sum = &self.component(*v) + p;
            if sum.is_zero() {
                components.remove(v);
            } else {
                components.insert(*v, sum);
            }
        }
        ProjectiveOneForm { components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Restriction to a chart: every homogeneous coordinate is replaced
    /// by its image under `assignment` (the dehomogenized one by 1) and
    /// `dZ_i` becomes the full differential of that image.
    pub fn restrict(
        &self,
        ctx: &Arc<ChartContext>,
        assignment: &BTreeMap<Var, Polynomial>,
    ) -> ChartForm {
        let mut pieces: Vec<(Var, Polynomial)> = Vec::new();
        for (&zvar, coeff) in &self.components {
            let image = assignment
                .get(&zvar)
                .unwrap_or_else(|| panic!("no chart image for {zvar}"));
            let coeff = coeff.substitute(assignment);
            if coeff.is_zero() {
                continue;
            }
            for &v in ctx.coords() {
                let partial = image.partial_derivative(v);
                if !partial.is_zero() {
                    pieces.push((v, &coeff * &partial));
                }
            }
        }
        ChartForm::one_form(ctx.clone(), pieces)
    }
}

/// The one-form `ε_ij = Z_j dZ_i - Z_i dZ_j` spanning sections of the
/// twisted cotangent bundle.
pub fn epsilon(i: usize, j: usize) -> ProjectiveOneForm {
    ProjectiveOneForm::new([
        (crate::vars::z(i), Polynomial::var(crate::vars::z(j))),
        (crate::vars::z(j), -&Polynomial::var(crate::vars::z(i))),
    ])
}

/// A vector field `sum c_i ∂/∂Z_i` with polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct ProjectiveVectorField {
    components: BTreeMap<Var, Polynomial>,
}

impl ProjectiveVectorField {
    pub fn new(components: impl IntoIterator<Item = (Var, Polynomial)>) -> Self {
        let components = components
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        ProjectiveVectorField { components }
    }

    pub fn component(&self, v: Var) -> Polynomial {
        self.components
            .get(&v)
            .cloned()
            .unwrap_or_else(Polynomial::zero)
    }

    /// Applies the derivation to a polynomial in the homogeneous
    /// coordinates.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&v, c) in &self.components {
            out += &(c * &p.partial_derivative(v));
        }
        out
    }

    /// Restriction to an affine chart `x_i = Z_i / Z_h`: on the free
    /// coordinate attached to the ambient variable `Z_i` the restricted
    /// field acts as `(c_i - x_i * c_h)` after substitution.
    pub fn restrict(
        &self,
        ctx: &Arc<ChartContext>,
        assignment: &BTreeMap<Var, Polynomial>,
        dehomogenized: Var,
        free: &[(Var, Var)],
    ) -> ChartMultivector {
        let c_h = self.component(dehomogenized);
        let components: Vec<(Var, Polynomial)> = free
            .iter()
            .map(|&(ambient, chart)| {
                let raw = &self.component(ambient) - &(&Polynomial::var(chart) * &c_h);
                (chart, raw.substitute(assignment))
            })
            .collect();
        ChartMultivector::vector(ctx.clone(), components)
    }
}
