//! The moment-vector construction of separating parity-query plans.
//!
//! Item `j` is assigned the field element `xi_j` with value `j` and the
//! column `(xi_j, xi_j^3, ..., xi_j^(2d-1))` over GF(2^m), flattened to
//! `d*m` bits. Any nonzero combination of at most `2d` such columns is
//! nonzero, so the row space of the resulting matrix separates all sets of
//! at most `d` items. Row reduction keeps only independent query rows.

mod plan;

pub use plan::{PlanFile, QueryPlan};

use crate::error::{Error, Result};
use crate::f2linalg::{complement_basis, kernel_basis, row_reduce, BitMatrix, BitVector};
use crate::gf2m::{FieldElement, FieldSpec, MAX_DEGREE};

/// Largest `d*m*n` (bits of moment matrix) a plan may have by default.
pub const DEFAULT_SIZE_CAP: u128 = 1 << 26;

/// `sum_{x in set} x^k`.
pub fn power_sum(field: &FieldSpec, set: &[FieldElement], k: u64) -> FieldElement {
    set.iter().fold(FieldElement::ZERO, |acc, &x| field.add(acc, field.pow(x, k)))
}

/// Least odd `k <= |A|` with a nonvanishing power sum over `A`.
///
/// `A` is treated as a set; repeated elements are ignored. Fails when `A`
/// contains no nonzero element.
pub fn power_sum_witness(field: &FieldSpec, set: &[FieldElement]) -> Result<u64> {
    let mut a = set.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::DegenerateWitnessSet);
    }
    if let Some(bad) = a.iter().find(|x| !field.contains(**x)) {
        return Err(Error::InvalidElement { m: field.degree(), value: bad.0 });
    }
    (1..=a.len() as u64)
        .step_by(2)
        .find(|&k| !power_sum(field, &a, k).is_zero())
        .ok_or(Error::NoPowerSumWitness { size: a.len() })
}

/// The flattened moment vector of `xi`: block `k` holds the coordinates of
/// `xi^(2k+1)` at positions `k*m .. (k+1)*m`.
pub fn moment_vector(field: &FieldSpec, xi: FieldElement, d: usize) -> BitVector {
    let m = field.degree() as usize;
    let xi2 = field.square(xi);
    let mut out = BitVector::zeros(d * m);
    let mut power = xi;
    for block in 0..d {
        for i in 0..m {
            if (power.0 >> i) & 1 == 1 {
                out.set(block * m + i, true);
            }
        }
        power = field.mul(power, xi2);
    }
    out
}

/// Moment vectors of every nonzero element, in increasing element order.
pub fn build_b(field: &FieldSpec, d: usize) -> Vec<BitVector> {
    field.nonzero_elements().map(|xi| moment_vector(field, xi, d)).collect()
}

/// `b` followed by unit vectors completing it to a spanning set of F2^(dm).
pub fn extend_to_generating(field: &FieldSpec, d: usize, b: &[BitVector]) -> Result<Vec<BitVector>> {
    let dim = d * field.degree() as usize;
    let extra = complement_basis(b, dim)?;
    Ok(b.iter().cloned().chain(extra).collect())
}

/// The `d*m x n` matrix whose column `j` is the moment vector of `elements[j]`.
pub fn moment_matrix(field: &FieldSpec, elements: &[FieldElement], d: usize) -> BitMatrix {
    let cols: Vec<BitVector> = elements.iter().map(|&xi| moment_vector(field, xi, d)).collect();
    BitMatrix::from_columns(d * field.degree() as usize, &cols).expect("moment columns share one length")
}

/// Smallest `m` with `n < 2^m`.
pub fn minimal_degree(n: usize) -> u32 {
    (usize::BITS - n.leading_zeros()).max(1)
}

#[derive(Clone, Debug)]
pub struct PlanConfig {
    /// Field degree; must satisfy `n < 2^m`. Defaults to the smallest such `m`.
    pub m: Option<u32>,
    pub size_cap: u128,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig { m: None, size_cap: DEFAULT_SIZE_CAP }
    }
}

pub fn build_query_plan(n: usize, d: usize) -> Result<QueryPlan> {
    build_query_plan_with(n, d, &PlanConfig::default())
}

/// Builds the plan for `n` items and at most `d` marked ones, with at most
/// `d*m` queries.
///
/// Plans with `d*m > n` are still separating but fall outside the
/// theorem's hypothesis; see [`QueryPlan::within_theorem_hypothesis`].
pub fn build_query_plan_with(n: usize, d: usize, config: &PlanConfig) -> Result<QueryPlan> {
    if n < 1 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    if d < 1 {
        return Err(Error::InvalidParameters("d must be at least 1".into()));
    }
    let min_m = minimal_degree(n);
    let m = config.m.unwrap_or(min_m);
    if m < min_m {
        return Err(Error::InvalidParameters(format!("m = {m} is too small for n = {n}: need n < 2^m")));
    }
    if m > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(m));
    }
    let required = (d as u128) * u128::from(m) * (n as u128);
    if required > config.size_cap {
        return Err(Error::SizeCapExceeded { required, cap: config.size_cap });
    }

    let field = FieldSpec::new(m)?;
    let elements: Vec<FieldElement> = (1..=n as u32).map(FieldElement).collect();
    let moments = moment_matrix(&field, &elements, d);
    let reduction = row_reduce(&moments);
    let matrix = BitMatrix::from_rows(n, reduction.basis_rows().to_vec())?;
    let plan = QueryPlan::with_field(n, d, field, elements, matrix)?;
    debug_assert!(plan.moment_map().is_some());
    Ok(plan)
}

/// Basis of the kernel of the plan matrix: a subspace of codimension `f`
/// whose nonzero members all have weight above `2d` when the plan separates.
pub fn lemma23_kernel(plan: &QueryPlan) -> Vec<BitVector> {
    kernel_basis(plan.matrix())
}
