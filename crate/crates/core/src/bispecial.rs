//! Long bispecial factors `a_i, b_i, c_i, d_i`, the complexity they induce,
//! and desubstitution.
//!
//! With `σ̂_h(v) = 1^{l_h} σ_h(v) 0^{m_h} 1^{l_h}`, rank-`i` factors of
//! `u^(h)` are `σ̂_h ∘ … ∘ σ̂_{h+i-1}` applied to the rank-0 seeds at level
//! `h + i`: `ε`, `1^l`, `0^{m-1}` and `1^{n-1}`. The first two are strong, the
//! last two weak. Their lengths, read off at level 0, are the breakpoints of
//! the first difference `s(n)` of the complexity.

use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::construction::{hat_sigma, hat_sigma_parikh, hypothesis_check, sigma_runs};
use crate::error::{Error, Result};
use crate::family::ParameterFamily;
use crate::oracle::BispecialType;
use crate::rational::ExactRational;
use crate::words::{check_cap, FiniteWord, Letter, ParikhVector, RunWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    A,
    B,
    C,
    D,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::A, Kind::B, Kind::C, Kind::D];

    pub fn bispecial_type(self) -> BispecialType {
        match self {
            Kind::A | Kind::B => BispecialType::Strong,
            Kind::C | Kind::D => BispecialType::Weak,
        }
    }

    fn seed_parikh(self, fam: &ParameterFamily, level: usize) -> Result<ParikhVector> {
        if self == Kind::A {
            return Ok(ParikhVector::default());
        }
        let lv = fam.level(level)?;
        Ok(match self {
            Kind::A => ParikhVector::default(),
            Kind::B => ParikhVector::new(BigUint::zero(), lv.l.clone()),
            Kind::C => ParikhVector::new(&lv.m - 1u32, BigUint::zero()),
            Kind::D => ParikhVector::new(BigUint::zero(), &lv.n - 1u32),
        })
    }

    fn seed_word(self, fam: &ParameterFamily, level: usize) -> Result<FiniteWord> {
        let p = self.seed_parikh(fam, level)?;
        let (letter, count) = if p.zeros.is_zero() {
            (Letter::One, &p.ones)
        } else {
            (Letter::Zero, &p.zeros)
        };
        Ok(FiniteWord::run(letter, check_cap(count)?))
    }
}

/// One of `a_i^(h)`, `b_i^(h)`, `c_i^(h)`, `d_i^(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BispecialKind {
    pub kind: Kind,
    pub rank: usize,
    pub level: usize,
}

impl BispecialKind {
    pub fn new(kind: Kind, rank: usize, level: usize) -> Self {
        BispecialKind { kind, rank, level }
    }
}

/// The four rank-0 bispecial factors of `u^(h)` with their types.
pub fn short_bispecials(fam: &ParameterFamily, h: usize) -> Result<Vec<(FiniteWord, BispecialType)>> {
    Kind::ALL
        .into_iter()
        .map(|k| Ok((k.seed_word(fam, h)?, k.bispecial_type())))
        .collect()
}

pub fn bispecial_parikh(fam: &ParameterFamily, k: BispecialKind) -> Result<ParikhVector> {
    let mut v = k.kind.seed_parikh(fam, k.level + k.rank)?;
    for j in (k.level..k.level + k.rank).rev() {
        v = hat_sigma_parikh(fam, j, &v)?;
    }
    Ok(v)
}

pub fn bispecial_length(fam: &ParameterFamily, k: BispecialKind) -> Result<BigUint> {
    Ok(bispecial_parikh(fam, k)?.len())
}

pub fn bispecial_word(fam: &ParameterFamily, k: BispecialKind) -> Result<FiniteWord> {
    check_cap(&bispecial_length(fam, k)?)?;
    let mut w = k.kind.seed_word(fam, k.level + k.rank)?;
    for j in (k.level..k.level + k.rank).rev() {
        w = hat_sigma(fam, j, &w)?;
    }
    Ok(w)
}

/// Breakpoints of rank `i` at level 0: `|b_i| < |c_i| < |a_{i+1}| < |d_i|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankBreakpoints {
    pub rank: usize,
    pub b: ParikhVector,
    pub c: ParikhVector,
    pub a_next: ParikhVector,
    pub d: ParikhVector,
}

impl RankBreakpoints {
    fn compute(fam: &ParameterFamily, rank: usize) -> Result<Self> {
        let at = |kind, rank| bispecial_parikh(fam, BispecialKind::new(kind, rank, 0));
        Ok(RankBreakpoints {
            rank,
            b: at(Kind::B, rank)?,
            c: at(Kind::C, rank)?,
            a_next: at(Kind::A, rank + 1)?,
            d: at(Kind::D, rank)?,
        })
    }

    pub fn lengths(&self) -> [BigUint; 4] {
        [self.b.len(), self.c.len(), self.a_next.len(), self.d.len()]
    }

    /// CSV row `rank,|b_i|,|c_i|,|a_{i+1}|,|d_i|`.
    pub fn csv_row(&self) -> String {
        let [b, c, a, d] = self.lengths();
        format!("{},{b},{c},{a},{d}", self.rank)
    }
}

pub const BREAKPOINT_CSV_HEADER: &str = "rank,b,c,a_next,d";

/// Lazily extended breakpoint table of one family, restricted to validated ranks.
#[derive(Debug)]
pub struct Breakpoints<'a> {
    fam: &'a ParameterFamily,
    ranks: RwLock<Vec<RankBreakpoints>>,
}

impl<'a> Breakpoints<'a> {
    pub fn new(fam: &'a ParameterFamily) -> Self {
        Breakpoints {
            fam,
            ranks: RwLock::new(Vec::new()),
        }
    }

    pub fn family(&self) -> &ParameterFamily {
        self.fam
    }

    /// Breakpoints of rank `i`. Refuses ranks whose hypotheses (the level
    /// ordering and the three vector inequalities at every index up to `i`)
    /// fail, and ranks where the length chain itself breaks.
    pub fn rank(&self, i: usize) -> Result<RankBreakpoints> {
        if let Some(r) = self.ranks.read().expect("breakpoint cache poisoned").get(i) {
            return Ok(r.clone());
        }
        let mut ranks = self.ranks.write().expect("breakpoint cache poisoned");
        while ranks.len() <= i {
            let k = ranks.len();
            let report = hypothesis_check(self.fam, k)?;
            if !report.complexity_ok() {
                let failed: Vec<_> = report.details.iter().filter(|d| !d.holds).map(|d| d.name.clone()).collect();
                return Err(Error::Unvalidated {
                    level: k,
                    detail: failed.join("; "),
                });
            }
            let r = RankBreakpoints::compute(self.fam, k)?;
            let [b, c, a, d] = r.lengths();
            let chain_ok = b < c && c < a && a < d && ranks.last().is_none_or(|p| p.d.len() < b);
            if !chain_ok {
                return Err(Error::Unvalidated {
                    level: k,
                    detail: "breakpoint lengths are not increasing".into(),
                });
            }
            ranks.push(r);
        }
        Ok(ranks[i].clone())
    }

    /// `s(n)`: 1 at `n = 0`, 3 on `(|b_i|, |c_i|]` and `(|a_{i+1}|, |d_i|]`, 2 elsewhere.
    pub fn s(&self, n: &BigUint) -> Result<u8> {
        if n.is_zero() {
            return Ok(1);
        }
        let mut i = 0;
        loop {
            let r = self.rank(i)?;
            let [b, c, a, d] = r.lengths();
            if *n <= b {
                return Ok(2);
            }
            if *n <= c {
                return Ok(3);
            }
            if *n <= a {
                return Ok(2);
            }
            if *n <= d {
                return Ok(3);
            }
            i += 1;
        }
    }

    /// `p(n) = 1 + Σ_{k<n} s(k)`, summed interval by interval.
    pub fn p(&self, n: &BigUint) -> Result<BigUint> {
        if n.is_zero() {
            return Ok(BigUint::one());
        }
        // p(n) = 2n + #{1 <= k <= n-1 : s(k) = 3}
        let last = n - 1u32;
        let mut threes = BigUint::zero();
        let mut i = 0;
        loop {
            let r = self.rank(i)?;
            let [b, c, a, d] = r.lengths();
            if last <= b {
                break;
            }
            threes += last.clone().min(c) - &b;
            if last > a {
                threes += last.clone().min(d) - &a;
            }
            i += 1;
        }
        Ok(n * 2u32 + threes)
    }
}

pub fn s_symbolic(fam: &ParameterFamily, n: &BigUint) -> Result<u8> {
    Breakpoints::new(fam).s(n)
}

pub fn p_symbolic(fam: &ParameterFamily, n: &BigUint) -> Result<BigUint> {
    Breakpoints::new(fam).p(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingReport {
    pub i_max: usize,
    /// `D_{i-1} < B_i < C_i < A_{i+1} < D_i` for `1 <= i <= i_max`.
    pub parikh_chain_ok: bool,
    /// `|b_i| < |c_i| < |a_{i+1}| < |d_i| < |b_{i+1}|` for `0 <= i <= i_max`.
    pub length_chain_ok: bool,
    pub first_failure: Option<String>,
}

impl OrderingReport {
    pub fn holds(&self) -> bool {
        self.parikh_chain_ok && self.length_chain_ok
    }
}

/// Exact check of the Parikh and length chains; failures are reported, not raised.
pub fn ordering_check(fam: &ParameterFamily, i_max: usize) -> Result<OrderingReport> {
    let ranks: Vec<RankBreakpoints> = (0..=i_max + 1)
        .map(|i| RankBreakpoints::compute(fam, i))
        .collect::<Result<_>>()?;
    let mut first_failure = None;
    let mut note = |msg: String| {
        if first_failure.is_none() {
            first_failure = Some(msg);
        }
    };
    let mut length_chain_ok = true;
    for i in 0..=i_max {
        let [b, c, a, d] = ranks[i].lengths();
        let next_b = ranks[i + 1].b.len();
        for (name, lo, hi) in [
            ("|b|<|c|", &b, &c),
            ("|c|<|a_next|", &c, &a),
            ("|a_next|<|d|", &a, &d),
            ("|d|<|b_next|", &d, &next_b),
        ] {
            if lo >= hi {
                length_chain_ok = false;
                note(format!("rank {i}: {name} fails"));
            }
        }
    }
    let mut parikh_chain_ok = true;
    for i in 1..=i_max {
        let (prev, cur) = (&ranks[i - 1], &ranks[i]);
        for (name, lo, hi) in [
            ("D_prev<B", &prev.d, &cur.b),
            ("B<C", &cur.b, &cur.c),
            ("C<A_next", &cur.c, &cur.a_next),
            ("A_next<D", &cur.a_next, &cur.d),
        ] {
            if !lo.precedes(hi) {
                parikh_chain_ok = false;
                note(format!("rank {i}: {name} fails"));
            }
        }
    }
    Ok(OrderingReport {
        i_max,
        parikh_chain_ok,
        length_chain_ok,
        first_failure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LiminfWitness {
    pub i: usize,
    /// `p(|b_{i+1}|) / |b_{i+1}|`.
    pub value: ExactRational,
    /// `2 + 1/|b_{i+1}| + 1/l_{i+1}`.
    pub bound: ExactRational,
    pub value_le_bound: bool,
    /// `B_{i+1} > l_{i+1} (D_i + (1, 1))` in both coordinates.
    pub vector_ok: bool,
}

pub fn liminf_witness(fam: &ParameterFamily, i: usize) -> Result<LiminfWitness> {
    let bp = Breakpoints::new(fam);
    let b_next = bp.rank(i + 1)?.b;
    let d = bp.rank(i)?.d;
    let len = b_next.len();
    let p = bp.p(&len)?;
    let l_next = fam.l(i + 1)?;
    let value = ExactRational::from_biguints(&p, &len);
    let bound = ExactRational::from_integer(2)
        + ExactRational::from_biguints(&BigUint::one(), &len)
        + ExactRational::from_biguints(&BigUint::one(), &l_next);
    let vector_ok = b_next.zeros > &l_next * (&d.zeros + 1u32) && b_next.ones > &l_next * (&d.ones + 1u32);
    Ok(LiminfWitness {
        i,
        value_le_bound: value <= bound,
        value,
        bound,
        vector_ok,
    })
}

/// Premise and conclusion of an implication checked on one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub premise: bool,
    pub conclusion: bool,
}

impl Implication {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

/// `V < W ⟹ V' < W'` where `'` is the Parikh map of `σ̂_h`.
pub fn hat_image_preserves_order(fam: &ParameterFamily, h: usize, v: &ParikhVector, w: &ParikhVector) -> Result<Implication> {
    let (v2, w2) = (hat_sigma_parikh(fam, h, v)?, hat_sigma_parikh(fam, h, w)?);
    Ok(Implication {
        premise: v.precedes(w),
        conclusion: v2.precedes(&w2),
    })
}

/// `W > λ (V + (1, 1))` coordinatewise and strictly.
pub fn scaled_dominates(w: &ParikhVector, lambda: &ExactRational, v: &ParikhVector) -> bool {
    let coord = |x: &BigUint| ExactRational::from_biguints(x, &BigUint::one());
    let one = ExactRational::one();
    coord(&w.zeros) > lambda * &(&coord(&v.zeros) + &one) && coord(&w.ones) > lambda * &(&coord(&v.ones) + &one)
}

/// `W > λ(V + (1,1)) ⟹ W' > λ(V' + (1,1))`.
pub fn hat_image_preserves_scaled_order(
    fam: &ParameterFamily,
    h: usize,
    lambda: &ExactRational,
    v: &ParikhVector,
    w: &ParikhVector,
) -> Result<Implication> {
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument(format!("λ = {lambda} must be positive")));
    }
    let (v2, w2) = (hat_sigma_parikh(fam, h, v)?, hat_sigma_parikh(fam, h, w)?);
    Ok(Implication {
        premise: scaled_dominates(w, lambda, v),
        conclusion: scaled_dominates(&w2, lambda, &v2),
    })
}

/// `w = s σ_h(v) p` with `s` a non-empty suffix and `p` a non-empty prefix of an image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Desubstitution {
    pub s: RunWord,
    pub v: FiniteWord,
    pub p: RunWord,
}

impl Desubstitution {
    pub fn reconstruct(&self, fam: &ParameterFamily, h: usize) -> Result<RunWord> {
        let images = [sigma_runs(fam, h, Letter::Zero)?, sigma_runs(fam, h, Letter::One)?];
        let mut out = self.s.clone();
        for letter in self.v.iter() {
            out.append(&images[letter.index()]);
        }
        out.append(&self.p);
        Ok(out)
    }
}

/// Splits a long word at its occurrences of `10`, which are exactly the
/// borders between consecutive images of `σ_h`.
pub fn desubstitute(fam: &ParameterFamily, h: usize, w: &RunWord) -> Result<Desubstitution> {
    let lv = fam.level(h)?;
    let runs = w.runs();
    let borders: Vec<usize> = (1..runs.len())
        .filter(|&k| runs[k - 1].0 == Letter::One && runs[k].0 == Letter::Zero)
        .collect();
    let (first, last) = match (borders.first(), borders.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::NotLong),
    };
    let bad = |what: String| Error::NotDecomposable(what);

    // s: 1^k with k <= n, or 0^a 1^{l or n} with a <= m
    let s = RunWord::from_runs(runs[..first].iter().cloned());
    match &runs[..first] {
        [(Letter::One, k)] if *k <= lv.n => {}
        [(Letter::Zero, a), (Letter::One, k)] if *a <= lv.m && (*k == lv.l || *k == lv.n) => {}
        _ => return Err(bad(format!("leading segment {s} is not a suffix of an image"))),
    }
    // p: 0^a with a <= m, or 0^m 1^k with k <= n
    let p = RunWord::from_runs(runs[last..].iter().cloned());
    match &runs[last..] {
        [(Letter::Zero, a)] if *a <= lv.m => {}
        [(Letter::Zero, a), (Letter::One, k)] if *a == lv.m && *k <= lv.n => {}
        _ => return Err(bad(format!("trailing segment {p} is not a prefix of an image"))),
    }
    let mut v = FiniteWord::with_capacity(borders.len() - 1);
    for pair in runs[first..last].chunks(2) {
        match pair {
            [(Letter::Zero, a), (Letter::One, k)] if *a == lv.m && *k == lv.l => v.push(Letter::Zero),
            [(Letter::Zero, a), (Letter::One, k)] if *a == lv.m && *k == lv.n => v.push(Letter::One),
            _ => {
                let seg = RunWord::from_runs(pair.iter().cloned());
                return Err(bad(format!("inner segment {seg} is not an image")));
            }
        }
    }
    Ok(Desubstitution { s, v, p })
}

/// [`desubstitute`] for an explicit word.
pub fn desubstitute_word(fam: &ParameterFamily, h: usize, w: &FiniteWord) -> Result<Desubstitution> {
    desubstitute(fam, h, &RunWord::from(w))
}
