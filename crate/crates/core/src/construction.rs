//! The substitutions `σ_h(0) = 0^{m_h} 1^{l_h}`, `σ_h(1) = 0^{m_h} 1^{n_h}`
//! and the words they generate.
//!
//! `u_i^(h) = σ_h σ_{h+1} … σ_{h+i-1}(0)` and `v_i^(h)` (same, from letter 1)
//! satisfy `u_{i+1} = u_i^{m_{h+i}} v_i^{l_{h+i}}` and
//! `v_{i+1} = u_i^{m_{h+i}} v_i^{n_{h+i}}`. Lengths and Parikh vectors always
//! come from that recurrence; words are only built after the predicted length
//! has been checked against the materialization cap.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::ParameterFamily;
use crate::rational::ExactRational;
use crate::words::{check_cap, occurrences, serialize_big, FiniteWord, Letter, ParikhVector, RunWord, Substitution};

/// `u` words start from letter 0, `v` words from letter 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    U,
    V,
}

impl Which {
    pub fn letter(self) -> Letter {
        match self {
            Which::U => Letter::Zero,
            Which::V => Letter::One,
        }
    }
}

pub fn sigma(fam: &ParameterFamily, h: usize) -> Result<Substitution> {
    let lv = fam.level(h)?;
    let m = check_cap(&lv.m)?;
    let mut image0 = FiniteWord::run(Letter::Zero, m);
    image0.push_run(Letter::One, check_cap(&(&lv.m + &lv.l))? - m);
    let mut image1 = FiniteWord::run(Letter::Zero, m);
    image1.push_run(Letter::One, check_cap(&(&lv.m + &lv.n))? - m);
    Substitution::new(image0, image1)
}

/// `σ_h(letter)` as runs; never materialized.
pub fn sigma_runs(fam: &ParameterFamily, h: usize, letter: Letter) -> Result<RunWord> {
    let lv = fam.level(h)?;
    let ones = match letter {
        Letter::Zero => lv.l.clone(),
        Letter::One => lv.n.clone(),
    };
    Ok(RunWord::from_runs([(Letter::Zero, lv.m.clone()), (Letter::One, ones)]))
}

/// Exact `(U_i^(h), V_i^(h))`.
pub fn parikh_uv(fam: &ParameterFamily, h: usize, i: usize) -> Result<(ParikhVector, ParikhVector)> {
    let mut u = ParikhVector::unit(Letter::Zero);
    let mut v = ParikhVector::unit(Letter::One);
    for k in 0..i {
        let lv = fam.level(h + k)?;
        let mu = u.scale(&lv.m);
        let next_u = &mu + &v.scale(&lv.l);
        let next_v = &mu + &v.scale(&lv.n);
        u = next_u;
        v = next_v;
    }
    Ok((u, v))
}

/// `(|u_k^(h)|, |v_k^(h)|)` for `k = 0..=i`.
fn uv_lengths(fam: &ParameterFamily, h: usize, i: usize) -> Result<Vec<(BigUint, BigUint)>> {
    let mut out = Vec::with_capacity(i + 1);
    let (mut u, mut v) = (BigUint::one(), BigUint::one());
    out.push((u.clone(), v.clone()));
    for k in 0..i {
        let lv = fam.level(h + k)?;
        let mu = &lv.m * &u;
        let next_v = &mu + &lv.n * &v;
        u = mu + &lv.l * &v;
        v = next_v;
        out.push((u.clone(), v.clone()));
    }
    Ok(out)
}

pub fn word_length(fam: &ParameterFamily, h: usize, i: usize, which: Which) -> Result<BigUint> {
    let lens = uv_lengths(fam, h, i)?;
    let (u, v) = &lens[i];
    Ok(match which {
        Which::U => u.clone(),
        Which::V => v.clone(),
    })
}

/// Prefix of length `min(limit, |w|)` of `u_k^(h)` or `v_k^(h)`.
fn expand(
    fam: &ParameterFamily,
    h: usize,
    k: usize,
    letter: Letter,
    limit: usize,
    lens: &[(BigUint, BigUint)],
) -> Result<FiniteWord> {
    if limit == 0 {
        return Ok(FiniteWord::new());
    }
    if k == 0 {
        return Ok(FiniteWord::run(letter, 1));
    }
    let lv = fam.level(h + k - 1)?;
    let (reps_u, reps_v) = match letter {
        Letter::Zero => (&lv.m, &lv.l),
        Letter::One => (&lv.m, &lv.n),
    };
    let (len_u, len_v) = &lens[k - 1];
    let mut out = FiniteWord::with_capacity(limit.min(1 << 24));
    for (child, reps, child_len) in [(Letter::Zero, reps_u, len_u), (Letter::One, reps_v, len_v)] {
        let remaining = limit - out.len();
        if remaining == 0 {
            break;
        }
        let block = expand(fam, h, k - 1, child, remaining, lens)?;
        let needed = BigUint::from(remaining).div_ceil(child_len);
        let copies = needed.min(reps.clone()).to_usize().unwrap_or(usize::MAX);
        for _ in 0..copies {
            out.append_truncated(&block, limit);
        }
    }
    Ok(out)
}

/// `u_i^(h)` or `v_i^(h)`; fails with the exact predicted length when it
/// exceeds the cap.
pub fn generate_word(fam: &ParameterFamily, h: usize, i: usize, which: Which) -> Result<FiniteWord> {
    let lens = uv_lengths(fam, h, i)?;
    let len = match which {
        Which::U => &lens[i].0,
        Which::V => &lens[i].1,
    };
    let len = check_cap(len)?;
    expand(fam, h, i, which.letter(), len, &lens)
}

/// The first `len` letters of the infinite word `u^(h)`.
pub fn prefix_stream(fam: &ParameterFamily, h: usize, len: usize) -> Result<FiniteWord> {
    check_cap(&BigUint::from(len))?;
    // smallest rank whose u-word already covers the request
    let mut rank = 0;
    let mut lens = uv_lengths(fam, h, 0)?;
    while lens[rank].0 < BigUint::from(len) {
        rank += 1;
        lens = uv_lengths(fam, h, rank)?;
    }
    expand(fam, h, rank, Letter::Zero, len, &lens)
}

/// `σ̂_h(v) = 1^{l_h} σ_h(v) 0^{m_h} 1^{l_h}`.
pub fn hat_sigma(fam: &ParameterFamily, h: usize, v: &FiniteWord) -> Result<FiniteWord> {
    let lv = fam.level(h)?;
    let predicted = hat_sigma_parikh(fam, h, &v.parikh())?.len();
    let total = check_cap(&predicted)?;
    let sub = sigma(fam, h)?;
    let l = lv.l.to_usize().expect("bounded by cap");
    let m = lv.m.to_usize().expect("bounded by cap");
    let mut out = FiniteWord::with_capacity(total);
    out.push_run(Letter::One, l);
    for letter in v.iter() {
        out.append(sub.image(letter));
    }
    out.push_run(Letter::Zero, m);
    out.push_run(Letter::One, l);
    Ok(out)
}

/// [`hat_sigma`] in run-length form, usable at any level.
pub fn hat_sigma_runs(fam: &ParameterFamily, h: usize, v: &RunWord) -> Result<RunWord> {
    let lv = fam.level(h)?;
    let images = [sigma_runs(fam, h, Letter::Zero)?, sigma_runs(fam, h, Letter::One)?];
    let mut out = RunWord::run(Letter::One, lv.l.clone());
    for (letter, count) in v.runs() {
        let reps = count.to_usize().ok_or_else(|| {
            Error::InvalidArgument(format!("run of {count} letters is too long to substitute"))
        })?;
        for _ in 0..reps {
            out.append(&images[letter.index()]);
        }
    }
    out.push_run(Letter::Zero, lv.m.clone());
    out.push_run(Letter::One, lv.l.clone());
    Ok(out)
}

/// Parikh vector of `σ̂_h(v)`: `[[m, m], [l, n]] V + (m, 2l)`.
pub fn hat_sigma_parikh(fam: &ParameterFamily, h: usize, v: &ParikhVector) -> Result<ParikhVector> {
    let lv = fam.level(h)?;
    Ok(ParikhVector::new(
        &lv.m * (&v.zeros + &v.ones + 1u32),
        &lv.l * &v.zeros + &lv.n * &v.ones + &lv.l * 2u32,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct Inequality {
    pub name: String,
    #[serde(serialize_with = "serialize_big")]
    pub lhs: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub rhs: BigUint,
    pub holds: bool,
}

impl Inequality {
    fn lt(name: impl Into<String>, lhs: BigUint, rhs: BigUint) -> Self {
        let holds = lhs < rhs;
        Inequality {
            name: name.into(),
            lhs,
            rhs,
            holds,
        }
    }
}

/// Outcome of the hypothesis checks at one level.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub level: usize,
    pub structural_ok: bool,
    pub ratio_growth_ok: bool,
    pub vector_lemma_ok: bool,
    /// Smaller of the two consecutive ratio quotients; `None` at level 0.
    pub min_growth_factor: Option<ExactRational>,
    pub details: Vec<Inequality>,
}

impl HypothesisReport {
    pub fn all_ok(&self) -> bool {
        self.structural_ok && self.ratio_growth_ok && self.vector_lemma_ok
    }

    /// What the complexity results consume: ordering plus the three vector inequalities.
    pub fn complexity_ok(&self) -> bool {
        self.structural_ok && self.vector_lemma_ok
    }
}

/// Exact evaluation of the structural, ratio-growth and vector-lemma
/// conditions linking levels `i - 1` and `i`. At `i = 0` only the ordering
/// `l_0 < m_0 < n_0` is checked; the other groups hold vacuously.
pub fn hypothesis_check(fam: &ParameterFamily, i: usize) -> Result<HypothesisReport> {
    let cur = fam.level(i)?;
    let mut details = vec![
        Inequality::lt(format!("l_{i} < m_{i}"), cur.l.clone(), cur.m.clone()),
        Inequality::lt(format!("m_{i} < n_{i}"), cur.m.clone(), cur.n.clone()),
    ];
    if i == 0 {
        let structural_ok = details.iter().all(|d| d.holds);
        return Ok(HypothesisReport {
            level: 0,
            structural_ok,
            ratio_growth_ok: true,
            vector_lemma_ok: true,
            min_growth_factor: None,
            details,
        });
    }
    let p = i - 1;
    let prev = fam.level(p)?;
    let (l0, m0, n0) = (&prev.l, &prev.m, &prev.n);
    let (l1, m1, n1) = (&cur.l, &cur.m, &cur.n);

    details.push(Inequality::lt(format!("l_{p} < m_{p}"), l0.clone(), m0.clone()));
    details.push(Inequality::lt(format!("m_{p} < n_{p}"), m0.clone(), n0.clone()));
    details.push(Inequality::lt(format!("l_{p} < l_{i}"), l0.clone(), l1.clone()));
    details.push(Inequality::lt(format!("m_{p} < m_{i}"), m0.clone(), m1.clone()));
    details.push(Inequality::lt(format!("n_{p} < n_{i}"), n0.clone(), n1.clone()));
    let structural_ok = details.iter().all(|d| d.holds);

    // m_p/l_p < m_i/l_i and n_p/m_p < n_i/m_i by cross multiplication
    let ratio_ml = Inequality::lt(format!("m_{p}/l_{p} < m_{i}/l_{i}"), m0 * l1, m1 * l0);
    let ratio_nm = Inequality::lt(format!("n_{p}/m_{p} < n_{i}/m_{i}"), n0 * m1, n1 * m0);
    let ratio_growth_ok = ratio_ml.holds && ratio_nm.holds;
    let growth_ml = ExactRational::from_biguints(&(m1 * l0), &(m0 * l1));
    let growth_nm = ExactRational::from_biguints(&(n1 * m0), &(n0 * m1));
    details.push(ratio_ml);
    details.push(ratio_nm);

    let v1 = Inequality::lt(format!("n_{p} l_{i} + l_{p} < l_{p} m_{i}"), n0 * l1 + l0, l0 * m1);
    let v2 = Inequality::lt(format!("m_{i} + 2 l_{i} + 1 < n_{i}"), m1 + l1 * 2u32 + 1u32, n1.clone());
    let v3 = Inequality::lt(
        format!("l_{p} m_{i} + 2 n_{p} l_{i} < n_{p} (n_{i} - 1)"),
        l0 * m1 + n0 * l1 * 2u32,
        n0 * (n1 - 1u32),
    );
    let vector_lemma_ok = v1.holds && v2.holds && v3.holds;
    details.extend([v1, v2, v3]);

    Ok(HypothesisReport {
        level: i,
        structural_ok,
        ratio_growth_ok,
        vector_lemma_ok,
        min_growth_factor: Some(growth_ml.min(growth_nm)),
        details,
    })
}

/// Largest `k <= upto` such that the complexity hypotheses hold at every
/// index `1..=k` and the ordering holds at level 0. `None` when level 0 fails.
pub fn validated_through(fam: &ParameterFamily, upto: usize) -> Result<Option<usize>> {
    if !hypothesis_check(fam, 0)?.structural_ok {
        return Ok(None);
    }
    let mut last = 0;
    for i in 1..=upto {
        if i >= fam.available_levels() || !hypothesis_check(fam, i)?.complexity_ok() {
            break;
        }
        last = i;
    }
    Ok(Some(last))
}

/// A window length `N_i` such that every factor of `u` of that length contains `u_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceBound {
    pub i: usize,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
}

pub fn recurrence_bound(fam: &ParameterFamily, i: usize) -> Result<RecurrenceBound> {
    let mut value = fam.n(i)? + 1u32;
    for j in (1..=i).rev() {
        let lv = fam.level(j - 1)?;
        value = (&lv.m + &lv.n) * (value + 1u32);
    }
    Ok(RecurrenceBound { i, value })
}

/// Length of a prefix of `u` guaranteed to contain every factor of `u` of
/// length at most `len`, or `None` when the family has too few levels.
///
/// A factor of length `len` touches at most `k = (len - 2) / |u_i| + 2`
/// consecutive level-`i` images. When `k <= l_i` the corresponding factor of
/// `u^(i)` has at most one letter change and occurs in `σ_i(00)`, whose image
/// `u_{i+1} u_{i+1}` is a prefix of `u` as soon as `m_{i+1} >= 2`.
pub fn factor_complete_prefix(fam: &ParameterFamily, len: usize) -> Result<Option<BigUint>> {
    if len == 0 {
        return Ok(Some(BigUint::zero()));
    }
    let mut i = 0;
    while i + 1 < fam.available_levels() {
        let lens = uv_lengths(fam, 0, i + 1)?;
        let (u_i, u_next) = (&lens[i].0, &lens[i + 1].0);
        let k = if len <= 1 {
            BigUint::one()
        } else {
            BigUint::from(len - 2) / u_i + 2u32
        };
        if k <= fam.l(i)? && fam.m(i + 1)? >= BigUint::from(2u32) {
            return Ok(Some(u_next + k * u_i));
        }
        i += 1;
    }
    Ok(None)
}

/// Result of scanning every window of a text for a pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowScan {
    pub windows: usize,
    /// Start of the first window that misses the pattern.
    pub first_miss: Option<usize>,
}

impl WindowScan {
    pub fn all_contain(&self) -> bool {
        self.first_miss.is_none()
    }
}

/// Checks that every window of `width` letters of `text` contains `pattern`.
pub fn scan_windows(text: &FiniteWord, pattern: &FiniteWord, width: usize) -> Result<WindowScan> {
    if width > text.len() {
        return Err(Error::InvalidArgument(format!(
            "window width {width} exceeds text length {}",
            text.len()
        )));
    }
    let windows = text.len() - width + 1;
    if pattern.len() > width {
        return Ok(WindowScan {
            windows,
            first_miss: Some(0),
        });
    }
    let occ = occurrences(text, pattern)?;
    let slack = width - pattern.len();
    // window s is covered iff the first occurrence p >= s satisfies p <= s + slack
    let mut next = 0;
    for s in 0..windows {
        while next < occ.len() && occ[next] < s {
            next += 1;
        }
        if next == occ.len() || occ[next] > s + slack {
            return Ok(WindowScan {
                windows,
                first_miss: Some(s),
            });
        }
    }
    Ok(WindowScan {
        windows,
        first_miss: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mini() -> ParameterFamily {
        ParameterFamily::mini()
    }

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn runs(parts: &[(Letter, usize)]) -> FiniteWord {
        let mut out = FiniteWord::new();
        for &(l, n) in parts {
            out.push_run(l, n);
        }
        out
    }

    use Letter::{One as I, Zero as O};

    #[test]
    fn sigma_examples() {
        let paper = ParameterFamily::paper_star();
        let s0 = sigma(&paper, 0).unwrap();
        assert_eq!(s0.image(O), &runs(&[(O, 256), (I, 64)]));
        assert_eq!(sigma(&paper, 1).unwrap().image(O).len(), 65792);
        assert_eq!(sigma(&mini(), 0).unwrap().image(I), &runs(&[(O, 8), (I, 32)]));
    }

    #[test]
    fn parikh_uv_examples() {
        let paper = ParameterFamily::paper_star();
        let (u1, v1) = parikh_uv(&paper, 0, 1).unwrap();
        assert_eq!(u1, ParikhVector::from_counts(256, 64));
        assert_eq!(v1, ParikhVector::from_counts(256, 1024));
        let (u2, _) = parikh_uv(&paper, 0, 2).unwrap();
        assert_eq!(u2, ParikhVector::from_counts(16842752, 4456448));
        let (u0, v0) = parikh_uv(&mini(), 2, 0).unwrap();
        assert_eq!((u0, v0), (ParikhVector::unit(O), ParikhVector::unit(I)));
    }

    #[test]
    fn generate_word_examples() {
        let paper = ParameterFamily::paper_star();
        let u1 = generate_word(&paper, 0, 1, Which::U).unwrap();
        assert_eq!(u1, runs(&[(O, 256), (I, 64)]));
        assert_eq!(generate_word(&paper, 3, 0, Which::V).unwrap(), w("1"));
        let u2 = generate_word(&paper, 0, 2, Which::U).unwrap();
        assert_eq!(u2.len(), 21_299_200);
        assert_eq!(u2.parikh(), parikh_uv(&paper, 0, 2).unwrap().0);
        assert_eq!(generate_word(&mini(), 0, 2, Which::V).unwrap().len(), 82560);
    }

    #[test]
    fn generate_word_reports_predicted_length() {
        let paper = ParameterFamily::paper_star();
        match generate_word(&paper, 0, 2, Which::V) {
            Err(Error::SizeLimit { predicted, .. }) => {
                assert_eq!(predicted, word_length(&paper, 0, 2, Which::V).unwrap());
                assert_eq!(predicted, BigUint::from(65536u64 * 320 + (1u64 << 20) * 1280));
            }
            other => panic!("expected size limit, got {other:?}"),
        }
    }

    #[test]
    fn recurrence_of_words_holds_at_every_level() {
        let fam = mini();
        for h in 0..2 {
            for i in 0..(3 - h) {
                let u = generate_word(&fam, h, i, Which::U).unwrap();
                let v = generate_word(&fam, h, i, Which::V).unwrap();
                let lv = fam.level(h + i).unwrap();
                let (m, l, n) = (lv.m.to_usize().unwrap(), lv.l.to_usize().unwrap(), lv.n.to_usize().unwrap());
                if u.len() * m + v.len() * n > 1 << 22 {
                    continue;
                }
                assert_eq!(generate_word(&fam, h, i + 1, Which::U).unwrap(), u.repeat(m).concat(&v.repeat(l)));
                assert_eq!(generate_word(&fam, h, i + 1, Which::V).unwrap(), u.repeat(m).concat(&v.repeat(n)));
                // composition with σ_h from the outside
                if i > 0 {
                    let inner = generate_word(&fam, h + 1, i - 1, Which::U).unwrap();
                    assert_eq!(sigma(&fam, h).unwrap().apply(&inner).unwrap(), u);
                }
            }
        }
    }

    #[test]
    fn prefix_examples() {
        let paper = ParameterFamily::paper_star();
        assert_eq!(prefix_stream(&paper, 0, 5).unwrap(), w("00000"));
        assert_eq!(prefix_stream(&paper, 0, 320).unwrap(), generate_word(&paper, 0, 1, Which::U).unwrap());
        assert_eq!(prefix_stream(&paper, 0, 0).unwrap(), FiniteWord::new());
        let fam = mini();
        let u2 = generate_word(&fam, 0, 2, Which::U).unwrap();
        let long = prefix_stream(&fam, 0, 100_000).unwrap();
        assert!(long.starts_with(&u2));
        assert_eq!(prefix_stream(&fam, 1, 67).unwrap(), generate_word(&fam, 1, 1, Which::U).unwrap());
    }

    #[test]
    fn u_is_a_proper_prefix_of_v() {
        let fam = mini();
        for i in 1..3 {
            let u = generate_word(&fam, 0, i, Which::U).unwrap();
            let v = generate_word(&fam, 0, i, Which::V).unwrap();
            assert!(u.len() < v.len());
            assert!(v.starts_with(&u));
        }
    }

    #[test]
    fn hat_sigma_examples() {
        let paper = ParameterFamily::paper_star();
        assert_eq!(
            hat_sigma(&paper, 0, &FiniteWord::new()).unwrap(),
            runs(&[(I, 64), (O, 256), (I, 64)])
        );
        assert_eq!(
            hat_sigma_parikh(&paper, 0, &ParikhVector::default()).unwrap(),
            ParikhVector::from_counts(256, 128)
        );
        let fam = mini();
        let out = hat_sigma(&fam, 0, &FiniteWord::run(I, 3)).unwrap();
        let mut expected = runs(&[(I, 2)]);
        for _ in 0..3 {
            expected.append(&runs(&[(O, 8), (I, 32)]));
        }
        expected.append(&runs(&[(O, 8), (I, 2)]));
        assert_eq!(out, expected);
        assert_eq!(RunWord::from(&out), hat_sigma_runs(&fam, 0, &RunWord::from(&FiniteWord::run(I, 3))).unwrap());
    }

    #[test]
    fn hypothesis_examples() {
        let paper = ParameterFamily::paper_star();
        for i in 1..=12 {
            let r = hypothesis_check(&paper, i).unwrap();
            assert!(r.all_ok(), "level {i}: {r:?}");
        }
        for i in 0..6 {
            assert!(hypothesis_check(&mini(), i).unwrap().all_ok(), "mini level {i}");
        }
        let r = hypothesis_check(&mini(), 1).unwrap();
        assert!(r.vector_lemma_ok);
        assert_eq!(r.details.iter().find(|d| d.name.starts_with("n_0 l_1")).unwrap().lhs, 98u32.into());
        let bad = ParameterFamily::custom_u64(&[2, 3, 5], &[8, 64, 64], &[32, 2048, 1 << 20]).unwrap();
        let r = hypothesis_check(&bad, 2).unwrap();
        assert!(!r.vector_lemma_ok);
        assert!(!r.structural_ok);
        assert_eq!(validated_through(&bad, 5).unwrap(), Some(1));
    }

    #[test]
    fn recurrence_bound_examples() {
        let paper = ParameterFamily::paper_star();
        assert_eq!(recurrence_bound(&paper, 0).unwrap().value, 1025u32.into());
        assert_eq!(recurrence_bound(&paper, 1).unwrap().value, BigUint::from(1280u64 * ((1 << 20) + 2)));
        assert_eq!(recurrence_bound(&mini(), 0).unwrap().value, 33u32.into());
        assert_eq!(recurrence_bound(&mini(), 1).unwrap().value, BigUint::from(40u32 * 2050));
    }

    #[test]
    fn complete_prefix_bounds() {
        let paper = ParameterFamily::paper_star();
        assert_eq!(factor_complete_prefix(&paper, 64).unwrap(), Some(BigUint::from(320u32 + 64)));
        let fam = mini();
        assert_eq!(factor_complete_prefix(&fam, 2001).unwrap(), Some(BigUint::from(3_525_760u32 + 4 * 760)));
        let short = ParameterFamily::custom_u64(&[2], &[8], &[32]).unwrap();
        assert_eq!(factor_complete_prefix(&short, 10).unwrap(), None);
    }

    #[test]
    fn window_scan() {
        let text = w("0010010001");
        assert!(scan_windows(&text, &w("1"), 4).unwrap().all_contain());
        assert_eq!(scan_windows(&text, &w("1"), 3).unwrap().first_miss, Some(6));
        assert!(scan_windows(&text, &w("1"), 11).is_err());
    }

    proptest! {
        #[test]
        fn hat_sigma_parikh_is_affine(bits in proptest::collection::vec(any::<bool>(), 0..40), h in 0usize..2) {
            let fam = mini();
            let v = FiniteWord::from_letters(bits.into_iter().map(Letter::from_bit));
            let out = hat_sigma(&fam, h, &v).unwrap();
            prop_assert_eq!(out.parikh(), hat_sigma_parikh(&fam, h, &v.parikh()).unwrap());
        }

        #[test]
        fn symbolic_and_materialized_parikh_agree(h in 0usize..3, i in 0usize..3, v in any::<bool>()) {
            let fam = mini();
            let which = if v { Which::V } else { Which::U };
            if let Ok(word) = generate_word(&fam, h, i, which) {
                let (pu, pv) = parikh_uv(&fam, h, i).unwrap();
                prop_assert_eq!(word.parikh(), if v { pv } else { pu });
            }
        }

        #[test]
        fn prefixes_are_compatible(len in 0usize..5000) {
            let fam = mini();
            let p = prefix_stream(&fam, 0, len).unwrap();
            let u3 = prefix_stream(&fam, 0, 5000).unwrap();
            prop_assert!(u3.starts_with(&p));
        }
    }
}
