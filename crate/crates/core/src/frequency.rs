//! Letter densities along `u_i` and `v_i`, their product lower bounds, and
//! the excess `|u_i|_0/|u_i| + |v_i|_1/|v_i| >= 3/2` that rules out uniform
//! letter frequencies for the built-in family.
//!
//! Everything here is exact rational arithmetic.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::construction::{generate_word, parikh_uv, word_length, Which};
use crate::error::Result;
use crate::family::ParameterFamily;
use crate::rational::ExactRational;
use crate::words::{check_cap, serialize_big};

fn ratio(num: &BigUint, den: &BigUint) -> ExactRational {
    ExactRational::from_biguints(num, den)
}

fn one_plus_recip(x: ExactRational) -> ExactRational {
    (ExactRational::one() + x).recip()
}

/// `(|u_i|_0 / |u_i|, |v_i|_1 / |v_i|)`.
pub fn ratios_exact(fam: &ParameterFamily, i: usize) -> Result<(ExactRational, ExactRational)> {
    let (u, v) = parikh_uv(fam, 0, i)?;
    Ok((ratio(&u.zeros, &u.len()), ratio(&v.ones, &v.len())))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductBounds {
    pub i: usize,
    /// `(1 + l_0/m_0)^{-1} Π_{j=1}^{i-1} (1 + l_j n_{j-1} / (m_j l_{j-1}))^{-1}`.
    pub bound_u0: ExactRational,
    /// `Π_{j=0}^{i-1} (1 + m_j/n_j)^{-1}`.
    pub bound_v1: ExactRational,
    /// `Π_{j=1}^{i} 1/(1 + 2^{-2^j})`, built-in family only.
    pub specialized: Option<ExactRational>,
    /// Both general bounds equal the specialized product.
    pub specialized_matches: Option<bool>,
}

/// Lower bounds for the two densities. At `i = 0` both are 1.
pub fn product_bounds(fam: &ParameterFamily, i: usize) -> Result<ProductBounds> {
    let (mut bound_u0, mut bound_v1) = (ExactRational::one(), ExactRational::one());
    if i >= 1 {
        bound_u0 = one_plus_recip(ratio(&fam.l(0)?, &fam.m(0)?));
        for j in 1..i {
            let (cur, prev) = (fam.level(j)?, fam.level(j - 1)?);
            bound_u0 = bound_u0 * one_plus_recip(ratio(&(&cur.l * &prev.n), &(&cur.m * &prev.l)));
        }
        for j in 0..i {
            bound_v1 = bound_v1 * one_plus_recip(ratio(&fam.m(j)?, &fam.n(j)?));
        }
    }
    let specialized = fam.is_paper_star().then(|| p_product(i));
    let specialized_matches = specialized.as_ref().map(|s| *s == bound_u0 && *s == bound_v1);
    Ok(ProductBounds {
        i,
        bound_u0,
        bound_v1,
        specialized,
        specialized_matches,
    })
}

/// Index convention for `P_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PConvention {
    /// `P_i = Π_{j=1}^{i} 1/(1 + 2^{-2^j})`, so `P_0 = 1`.
    ProductFromOne,
    /// `P_i = Π_{j=1}^{i+1} 1/(1 + 2^{-2^j})`, so `P_0 = 4/5`.
    ProductShifted,
}

impl PConvention {
    pub const ALL: [PConvention; 2] = [PConvention::ProductFromOne, PConvention::ProductShifted];

    pub fn p(self, i: usize) -> ExactRational {
        match self {
            PConvention::ProductFromOne => p_product(i),
            PConvention::ProductShifted => p_product(i + 1),
        }
    }
}

/// `Π_{j=1}^{k} 1/(1 + 2^{-2^j})`.
fn p_product(k: usize) -> ExactRational {
    (1..=k)
        .map(|j| one_plus_recip(ExactRational::pow2(-(1i64 << j))))
        .product()
}

/// `(3/4) / (1 - 2^{-2^{i+1}})`.
pub fn p_closed_form(i: usize) -> ExactRational {
    ExactRational::ratio(3, 4) / (ExactRational::one() - ExactRational::pow2(-(1i64 << (i + 1))))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub i: usize,
    pub convention: PConvention,
    pub product: ExactRational,
    pub closed_form: ExactRational,
    pub holds: bool,
}

pub fn p_closed_form_check(i: usize, convention: PConvention) -> ClosedFormCheck {
    let product = convention.p(i);
    let closed_form = p_closed_form(i);
    ClosedFormCheck {
        i,
        convention,
        holds: product == closed_form,
        product,
        closed_form,
    }
}

/// The conventions under which the closed form holds for every `i <= i_max`.
pub fn validated_p_conventions(i_max: usize) -> Vec<PConvention> {
    PConvention::ALL
        .into_iter()
        .filter(|&c| (0..=i_max).all(|i| p_closed_form_check(i, c).holds))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FrequencyReport {
    pub i: usize,
    pub ratio_u0: ExactRational,
    pub ratio_v1: ExactRational,
    pub bound_u0: ExactRational,
    pub bound_v1: ExactRational,
    pub bounds_hold: bool,
    /// `|v_i| / |u_i| <= n_{i-1} / l_{i-1}`; vacuous at `i = 0`.
    pub length_ratio_ok: bool,
    pub excess: ExactRational,
    /// `P_i` with `P_0 = 1`, built-in family only.
    pub p_i: Option<ExactRational>,
    pub specialized_matches: Option<bool>,
    /// `excess >= 3/2`; asserted for the built-in family only.
    pub floor_ok: Option<bool>,
}

pub fn excess_check(fam: &ParameterFamily, i: usize) -> Result<FrequencyReport> {
    let (ratio_u0, ratio_v1) = ratios_exact(fam, i)?;
    let bounds = product_bounds(fam, i)?;
    let length_ratio_ok = if i == 0 {
        true
    } else {
        let (lu, lv) = (word_length(fam, 0, i, Which::U)?, word_length(fam, 0, i, Which::V)?);
        let prev = fam.level(i - 1)?;
        &lv * &prev.l <= &prev.n * &lu
    };
    let excess = &ratio_u0 + &ratio_v1;
    let floor_ok = fam.is_paper_star().then(|| excess >= ExactRational::ratio(3, 2));
    Ok(FrequencyReport {
        i,
        bounds_hold: ratio_u0 >= bounds.bound_u0 && ratio_v1 >= bounds.bound_v1,
        length_ratio_ok,
        p_i: fam.is_paper_star().then(|| PConvention::ProductFromOne.p(i)),
        specialized_matches: bounds.specialized_matches,
        floor_ok,
        excess,
        ratio_u0,
        ratio_v1,
        bound_u0: bounds.bound_u0,
        bound_v1: bounds.bound_v1,
    })
}

/// Largest `u_{i+1}` materialized to confirm the position of `v_i`.
const OCCURRENCE_CHECK_LIMIT: u64 = 1 << 25;

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionRow {
    pub i: usize,
    /// Density of 0 in the prefix `u_i`.
    pub density_u0: ExactRational,
    /// Density of 1 in the factor `v_i`.
    pub density_v1: ExactRational,
    pub excess: ExactRational,
    /// `excess - 1`.
    pub gap: ExactRational,
    pub gap_ok: bool,
    /// `v_i` starts at `m_i |u_i|` inside `u_{i+1} = u_i^{m_i} v_i^{l_i}`, itself a prefix of `u`.
    #[serde(serialize_with = "serialize_big")]
    pub v_position: BigUint,
    /// Confirmation on the materialized words when they fit.
    pub v_occurrence_checked: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub family: String,
    pub rows: Vec<ObstructionRow>,
    pub min_gap: ExactRational,
    /// Every gap is at least 1/2, so letter densities along `u_i` and `v_i`
    /// cannot both converge to frequencies summing to 1.
    pub obstruction_holds: bool,
}

pub fn obstruction_report(fam: &ParameterFamily, i_max: usize) -> Result<ObstructionReport> {
    let half = ExactRational::ratio(1, 2);
    let mut rows = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let (density_u0, density_v1) = ratios_exact(fam, i)?;
        let excess = &density_u0 + &density_v1;
        let gap = &excess - &ExactRational::one();
        let v_position = fam.m(i)? * word_length(fam, 0, i, Which::U)?;
        let next_len = word_length(fam, 0, i + 1, Which::U)?;
        let v_occurrence_checked = if fam.l(i)? >= BigUint::from(1u32) && next_len <= BigUint::from(OCCURRENCE_CHECK_LIMIT) {
            check_cap(&next_len)?;
            let next = generate_word(fam, 0, i + 1, Which::U)?;
            let v = generate_word(fam, 0, i, Which::V)?;
            let pos = v_position.to_usize().expect("below limit");
            Some(pos + v.len() <= next.len() && next.slice(pos..pos + v.len()) == v)
        } else {
            None
        };
        rows.push(ObstructionRow {
            i,
            gap_ok: gap >= half,
            density_u0,
            density_v1,
            excess,
            gap,
            v_position,
            v_occurrence_checked,
        });
    }
    let min_gap = rows.iter().map(|r| r.gap.clone()).min().expect("at least one row");
    let obstruction_holds = rows.iter().all(|r| r.gap_ok && r.v_occurrence_checked != Some(false));
    Ok(ObstructionReport {
        family: fam.name().to_string(),
        rows,
        min_gap,
        obstruction_holds,
    })
}
