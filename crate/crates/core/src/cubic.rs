//! Smooth cubic threefolds in P^4: bracket table, Poisson variety and
//! Poisson cohomology.
//!
//! The production bracket path is the closed-form table
//! `C_0123 = F_4, C_0124 = -F_3, C_0134 = F_2, C_0234 = -F_1,
//! C_1234 = F_0` (with `F_m` the partials of the defining cubic),
//! extended to arbitrary index quadruples by total antisymmetry. The
//! chart computation of `½[ε_ij, ε_kl]` through the one-form calculus is
//! kept as a verification oracle for that table.

use crate::exterior::{schouten_bivector_bivector, ChartContext, ChartForm};
use crate::linalg::{coordinates_in_monomial_basis, polynomial_coordinate_matrix, RationalMatrix};
use crate::poly::{rat, ratio, Monomial, Polynomial, Rational};
use crate::projective::epsilon;
use crate::report::{CohomologyReport, EntryCheck};
use crate::util::quadruple_sign;
use crate::vars;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// The ten index pairs `i < j` over `0..5`, in lexicographic order; this
/// fixes coordinates on so(5) and the column order of the differential
/// matrix.
pub const PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// The five sorted index quadruples over `0..5`.
pub const QUADRUPLES: [[usize; 4]; 5] = [
    [0, 1, 2, 3],
    [0, 1, 2, 4],
    [0, 1, 3, 4],
    [0, 2, 3, 4],
    [1, 2, 3, 4],
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CubicError {
    #[error("the defining equation must be a nonzero homogeneous cubic in Z0..Z4")]
    InvalidEquation,
    #[error("every dehomogenization chart has an identically vanishing dependent partial")]
    ChartDegenerate,
    #[error("the bivector must be a nonzero projective point")]
    ZeroBivector,
    #[error("the bivector is not a Poisson structure")]
    NotPoisson,
    #[error("bracket expansion and Pluecker criteria disagree; the partials are degenerate")]
    InconsistentCheck,
}

/// A cubic hypersurface `F = 0` in P^4 with its five partials.
#[derive(Clone, PartialEq, Debug)]
pub struct CubicThreefold {
    equation: Polynomial,
    partials: [Polynomial; 5],
}

impl CubicThreefold {
    pub fn new(equation: Polynomial) -> Result<Self, CubicError> {
        if equation.is_zero() || !equation.is_homogeneous_of_degree(3) {
            return Err(CubicError::InvalidEquation);
        }
        let allowed: Vec<_> = (0..5).map(vars::z).collect();
        if !equation.support_vars().iter().all(|v| allowed.contains(v)) {
            return Err(CubicError::InvalidEquation);
        }
        let partials = std::array::from_fn(|i| equation.partial_derivative(vars::z(i)));
        Ok(CubicThreefold { equation, partials })
    }

    /// The Fermat cubic `Z0^3 + Z1^3 + Z2^3 + Z3^3 + Z4^3`.
    pub fn fermat() -> Self {
        let f = (0..5)
            .map(|i| Polynomial::var(vars::z(i)).pow(3))
            .fold(Polynomial::zero(), |acc, p| &acc + &p);
        CubicThreefold::new(f).expect("the Fermat cubic is a valid equation")
    }

    pub fn equation(&self) -> &Polynomial {
        &self.equation
    }

    pub fn partial(&self, i: usize) -> &Polynomial {
        &self.partials[i]
    }

    /// Rank of the five partials inside the 15-dimensional space of
    /// quadrics. Rank 5 is necessary for smoothness and is what makes the
    /// Pluecker shortcut for the Poisson condition valid.
    pub fn partials_rank(&self) -> usize {
        let refs: Vec<&Polynomial> = self.partials.iter().collect();
        polynomial_coordinate_matrix(&refs).rank()
    }

    pub fn has_independent_partials(&self) -> bool {
        self.partials_rank() == 5
    }
}

/// Antisymmetric coefficients of a bivector `ω = Σ a_ij ε_ij` on so(5).
#[derive(Clone, PartialEq, Debug)]
pub struct So5 {
    entries: [Rational; 10],
}

impl So5 {
    pub fn zero() -> Self {
        So5 {
            entries: std::array::from_fn(|_| Rational::zero()),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize), Rational)>) -> Self {
        let mut a = So5::zero();
        for ((i, j), c) in entries {
            match PAIRS.iter().position(|&p| p == (i, j)) {
                Some(k) => a.entries[k] = &a.entries[k] + &c,
                None => {
                    let k = PAIRS
                        .iter()
                        .position(|&p| p == (j, i))
                        .unwrap_or_else(|| panic!("invalid so(5) index pair ({i},{j})"));
                    a.entries[k] = &a.entries[k] - &c;
                }
            }
        }
        a
    }

    /// The decomposable bivector `u ∧ v`, a point of the Grassmannian.
    pub fn from_wedge(u: &[Rational; 5], v: &[Rational; 5]) -> Self {
        So5 {
            entries: std::array::from_fn(|k| {
                let (i, j) = PAIRS[k];
                &(&u[i] * &v[j]) - &(&u[j] * &v[i])
            }),
        }
    }

    /// `a_ij`, read antisymmetrically for `i > j`.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        if i == j {
            return Rational::zero();
        }
        match PAIRS.iter().position(|&p| p == (i, j)) {
            Some(k) => self.entries[k].clone(),
            None => {
                let k = PAIRS
                    .iter()
                    .position(|&p| p == (j, i))
                    .expect("index out of range for so(5)");
                -self.entries[k].clone()
            }
        }
    }

    pub fn coordinates(&self) -> &[Rational; 10] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        So5 {
            entries: std::array::from_fn(|k| &self.entries[k] * c),
        }
    }
}

/// The closed-form bracket table `C_ijkl`, stored on sorted quadruples
/// and extended by total antisymmetry.
#[derive(Clone, PartialEq, Debug)]
pub struct CubicBracketTable {
    entries: [Polynomial; 5],
}

impl CubicBracketTable {
    pub fn entry(&self, quad: [usize; 4]) -> Polynomial {
        match quadruple_sign(quad) {
            None => Polynomial::zero(),
            Some((sorted, sign)) => {
                let k = QUADRUPLES
                    .iter()
                    .position(|&q| q == sorted)
                    .expect("index out of range for the bracket table");
                self.entries[k].scale(&rat(sign))
            }
        }
    }

    /// The entry on a sorted quadruple, by table position.
    pub fn sorted_entry(&self, k: usize) -> &Polynomial {
        &self.entries[k]
    }

    pub fn with_entry(&self, k: usize, value: Polynomial) -> Self {
        let mut t = self.clone();
        t.entries[k] = value;
        t
    }
}

/// The ten basis one-forms `ε_ij = Z_j dZ_i - Z_i dZ_j` on P^4.
pub fn epsilon_basis() -> Vec<((usize, usize), crate::projective::ProjectiveOneForm)> {
    PAIRS.iter().map(|&(i, j)| ((i, j), epsilon(i, j))).collect()
}

/// Closed-form table: each entry is a signed partial of the equation,
/// the sign alternating with the missing index.
pub fn bracket_table(x: &CubicThreefold) -> CubicBracketTable {
    let entries = std::array::from_fn(|k| {
        let missing = (0..5)
            .find(|m| !QUADRUPLES[k].contains(m))
            .expect("a quadruple misses exactly one index");
        let sign = if missing % 2 == 0 { 1 } else { -1 };
        x.partial(missing).scale(&rat(sign))
    });
    CubicBracketTable { entries }
}

/// The five Pluecker quadrics `α_ijkl = a_ij a_kl - a_ik a_jl + a_il a_jk`
/// evaluated at `a`, in the order of [`QUADRUPLES`].
pub fn plucker_alphas(a: &So5) -> [Rational; 5] {
    std::array::from_fn(|k| {
        let [i, j, kk, l] = QUADRUPLES[k];
        &(&(&a.get(i, j) * &a.get(kk, l)) - &(&a.get(i, kk) * &a.get(j, l)))
            + &(&a.get(i, l) * &a.get(j, kk))
    })
}

/// `[ω, ω]` expanded as the double sum `Σ_ij Σ_kl a_ij a_kl [ε_ij, ε_kl]`
/// over the bracket table.
pub fn bracket_square(x: &CubicThreefold, a: &So5) -> Polynomial {
    let table = bracket_table(x);
    let mut out = Polynomial::zero();
    for &(i, j) in &PAIRS {
        for &(k, l) in &PAIRS {
            let coeff = &(&a.get(i, j) * &a.get(k, l)) * &rat(2);
            if coeff.is_zero() {
                continue;
            }
            out += &table.entry([i, j, k, l]).scale(&coeff);
        }
    }
    out
}

/// `[ω, ω]` through the Pluecker quadrics:
/// `4 (α_1234 F_0 - α_0234 F_1 + α_0134 F_2 - α_0124 F_3 + α_0123 F_4)`.
pub fn bracket_square_closed_form(x: &CubicThreefold, a: &So5) -> Polynomial {
    let alphas = plucker_alphas(a);
    let table = bracket_table(x);
    let mut out = Polynomial::zero();
    for (k, alpha) in alphas.iter().enumerate() {
        out += &table.sorted_entry(k).scale(&(alpha * &rat(4)));
    }
    out
}

/// Poisson test: vanishing of the expanded `[ω, ω]`. When the partials
/// are independent this is cross-checked against the vanishing of all
/// five Pluecker quadrics; a disagreement means the caller fed in a
/// degenerate cubic.
pub fn is_poisson(x: &CubicThreefold, a: &So5) -> Result<bool, CubicError> {
    let expansion_zero = bracket_square(x, a).is_zero();
    if x.has_independent_partials() {
        let alphas_zero = plucker_alphas(a).iter().all(Rational::is_zero);
        if alphas_zero != expansion_zero {
            return Err(CubicError::InconsistentCheck);
        }
    }
    Ok(expansion_zero)
}

/// The 15 quadric monomials `Z_i Z_j`, `i <= j`, descending graded-lex.
pub fn quadric_monomials() -> Vec<Monomial> {
    let mut out = Vec::with_capacity(15);
    for i in 0..5 {
        for j in i..5 {
            out.push(Monomial::from_pairs([(vars::z(i), 1), (vars::z(j), 1)]));
        }
    }
    out
}

/// Matrix of `d_ω = ½[ω, ·]` from the twisted one-forms to the quadrics:
/// 15 rows (quadric monomials), 10 columns (pairs), with
/// `d_ω(ε_kl) = Σ_ij a_ij C_ijkl`.
pub fn c_matrix(x: &CubicThreefold, a: &So5) -> RationalMatrix {
    let table = bracket_table(x);
    let basis = quadric_monomials();
    let columns = PAIRS
        .iter()
        .map(|&(k, l)| {
            let mut image = Polynomial::zero();
            for &(i, j) in &PAIRS {
                let coeff = a.get(i, j);
                if !coeff.is_zero() {
                    image += &table.entry([i, j, k, l]).scale(&coeff);
                }
            }
            coordinates_in_monomial_basis(&image, &basis)
        })
        .collect();
    RationalMatrix::from_columns(columns)
}

/// Poisson cohomology dimensions `(1, 0, 20 - r, 15 - r)` with
/// `r = rank(C_ω)`.
pub fn cohomology(x: &CubicThreefold, a: &So5) -> Result<CohomologyReport, CubicError> {
    if a.is_zero() {
        return Err(CubicError::ZeroBivector);
    }
    if !is_poisson(x, a)? {
        return Err(CubicError::NotPoisson);
    }
    let r = c_matrix(x, a).rank();
    Ok(CohomologyReport {
        ranks: vec![r],
        dims: [1, 0, 20 - r, 15 - r],
    })
}

/// Per-entry result of recomputing the bracket table on a chart.
#[derive(Clone, PartialEq, Debug)]
pub struct BracketTableCheck {
    /// Index of the coordinate set to 1.
    pub dehomogenized: usize,
    pub entries: Vec<EntryCheck>,
}

impl BracketTableCheck {
    pub fn all_pass(&self) -> bool {
        crate::report::all_pass(&self.entries)
    }
}

/// Substitution of the chart at `Z_m = 1`: the remaining coordinates map
/// to `X1..X4` in increasing index order.
fn chart_assignment(m: usize) -> (BTreeMap<crate::vars::Var, Polynomial>, [crate::vars::Var; 4]) {
    let mut assignment = BTreeMap::new();
    assignment.insert(vars::z(m), Polynomial::one());
    let mut coords = Vec::with_capacity(4);
    for (slot, i) in (0..5).filter(|&i| i != m).enumerate() {
        let xv = vars::chart_big_x(slot + 1);
        assignment.insert(vars::z(i), Polynomial::var(xv));
        coords.push(xv);
    }
    (assignment, coords.try_into().expect("four chart coordinates"))
}

/// Recomputes every table entry as `½[ε_ij, ε_kl]` on a dehomogenization
/// chart and compares with the closed form modulo the chart relation.
/// Charts are tried in the order `Z0, .., Z4`; a chart is skipped when
/// its dependent partial vanishes identically.
pub fn verify_table_against_chart(
    x: &CubicThreefold,
    table: &CubicBracketTable,
) -> Result<BracketTableCheck, CubicError> {
    for m in 0..5 {
        let (assignment, coords) = chart_assignment(m);
        let f = x.equation().substitute(&assignment);
        let Ok(ctx) = ChartContext::hypersurface(coords, f) else {
            continue;
        };
        let restricted: BTreeMap<(usize, usize), ChartForm> = PAIRS
            .iter()
            .map(|&(i, j)| ((i, j), epsilon(i, j).restrict(&ctx, &assignment)))
            .collect();
        let entries = QUADRUPLES
            .iter()
            .enumerate()
            .map(|(k, &[i, j, kk, l])| {
                let chart_value =
                    schouten_bivector_bivector(&restricted[&(i, j)], &restricted[&(kk, l)])
                        .scale(&ratio(1, 2));
                let expected = ChartForm::scalar(
                    ctx.clone(),
                    table.sorted_entry(k).substitute(&assignment),
                );
                EntryCheck::new(
                    format!("C_{i}{j}{kk}{l}"),
                    chart_value.equal_mod_relation(&expected),
                )
            })
            .collect();
        return Ok(BracketTableCheck {
            dehomogenized: m,
            entries,
        });
    }
    Err(CubicError::ChartDegenerate)
}

/// Chart verification of the closed-form table itself.
pub fn verify_bracket_table(x: &CubicThreefold) -> Result<BracketTableCheck, CubicError> {
    verify_table_against_chart(x, &bracket_table(x))
}
