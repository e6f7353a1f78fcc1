//! Binary words, Parikh vectors and two-letter substitutions.
//!
//! [`FiniteWord`] is bit-packed so that prefixes of tens of millions of
//! letters stay small. [`RunWord`] stores a word as runs with
//! arbitrary-precision lengths and is used wherever the construction produces
//! words far too long to materialize.

use std::cmp::Ordering as CmpOrdering;
use std::fmt;
use std::ops::{Add, AddAssign, Range};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default upper bound on the number of letters any operation may materialize.
pub const DEFAULT_MATERIALIZATION_CAP: u64 = 1 << 28;

static MATERIALIZATION_CAP: AtomicU64 = AtomicU64::new(DEFAULT_MATERIALIZATION_CAP);

/// Current materialization cap in letters.
pub fn materialization_cap() -> u64 {
    MATERIALIZATION_CAP.load(Ordering::Relaxed)
}

/// Replaces the process-wide materialization cap.
pub fn set_materialization_cap(cap: u64) {
    MATERIALIZATION_CAP.store(cap, Ordering::Relaxed);
}

/// Checks a predicted word length against the cap and converts it to `usize`.
pub fn check_cap(predicted: &BigUint) -> Result<usize> {
    let cap = materialization_cap();
    match predicted.to_u64() {
        Some(len) if len <= cap => usize::try_from(len).map_err(|_| Error::SizeLimit {
            predicted: predicted.clone(),
            cap,
        }),
        _ => Err(Error::SizeLimit {
            predicted: predicted.clone(),
            cap,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    One,
}

impl Letter {
    pub const ALL: [Letter; 2] = [Letter::Zero, Letter::One];

    #[inline]
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Letter::One
        } else {
            Letter::Zero
        }
    }

    #[inline]
    pub fn bit(self) -> bool {
        self == Letter::One
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn other(self) -> Self {
        Letter::from_bit(!self.bit())
    }

    pub fn as_char(self) -> char {
        if self.bit() {
            '1'
        } else {
            '0'
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            '0' => Ok(Letter::Zero),
            '1' => Ok(Letter::One),
            other => Err(Error::InvalidArgument(format!("not a binary letter: {other:?}"))),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite word over {0, 1}, one bit per letter.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    bits: BitVec<u64, Lsb0>,
}

impl FiniteWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(letters: usize) -> Self {
        FiniteWord {
            bits: BitVec::with_capacity(letters),
        }
    }

    /// `letter^count`.
    pub fn run(letter: Letter, count: usize) -> Self {
        FiniteWord {
            bits: BitVec::repeat(letter.bit(), count),
        }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        FiniteWord {
            bits: letters.into_iter().map(Letter::bit).collect(),
        }
    }

    /// Builds a word from bytes holding the values 0 and 1.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        FiniteWord {
            bits: bytes.iter().map(|&b| b != 0).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<Letter> {
        self.bits.get(index).map(|b| Letter::from_bit(*b))
    }

    pub fn push(&mut self, letter: Letter) {
        self.bits.push(letter.bit());
    }

    pub fn push_run(&mut self, letter: Letter, count: usize) {
        let len = self.bits.len();
        self.bits.resize(len + count, letter.bit());
    }

    pub fn append(&mut self, other: &FiniteWord) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    /// Appends at most `limit - self.len()` letters of `other`.
    pub(crate) fn append_truncated(&mut self, other: &FiniteWord, limit: usize) {
        let room = limit.saturating_sub(self.len());
        let take = room.min(other.len());
        self.bits.extend_from_bitslice(&other.bits[..take]);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut out = FiniteWord::with_capacity(self.len() + other.len());
        out.append(self);
        out.append(other);
        out
    }

    /// `self^times`.
    pub fn repeat(&self, times: usize) -> FiniteWord {
        let mut out = FiniteWord::with_capacity(self.len() * times);
        for _ in 0..times {
            out.append(self);
        }
        out
    }

    pub fn slice(&self, range: Range<usize>) -> FiniteWord {
        FiniteWord {
            bits: self.bits[range].to_bitvec(),
        }
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.bits.iter().by_vals().map(Letter::from_bit)
    }

    pub fn count(&self, letter: Letter) -> usize {
        match letter {
            Letter::One => self.bits.count_ones(),
            Letter::Zero => self.bits.count_zeros(),
        }
    }

    /// Number of occurrences of `letter` in `range`.
    pub fn count_in(&self, letter: Letter, range: Range<usize>) -> usize {
        let ones = self.bits[range.clone()].count_ones();
        match letter {
            Letter::One => ones,
            Letter::Zero => range.len() - ones,
        }
    }

    pub fn parikh(&self) -> ParikhVector {
        let ones = self.bits.count_ones();
        ParikhVector::from_counts((self.len() - ones) as u64, ones as u64)
    }

    /// One byte (0 or 1) per letter.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits.iter().by_vals().map(u8::from).collect()
    }

    pub fn starts_with(&self, prefix: &FiniteWord) -> bool {
        prefix.len() <= self.len() && self.bits[..prefix.len()] == prefix.bits
    }

    /// True when `self` occurs as a factor of `text`.
    pub fn is_factor_of(&self, text: &FiniteWord) -> bool {
        self.is_empty() || !occurrences_limited(text, self, 1).is_empty()
    }
}

impl PartialOrd for FiniteWord {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order with 0 < 1 and a proper prefix before its extensions.
impl Ord for FiniteWord {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.iter().cmp(other.iter())
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = FiniteWord::with_capacity(s.len());
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            w.push(Letter::try_from(c)?);
        }
        Ok(w)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.iter() {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "FiniteWord(ε)");
        }
        write!(f, "FiniteWord({})", RunWord::from(self))
    }
}

/// The pair (|w|_0, |w|_1).
/// Serialized as the string of its letters.
impl serde::Serialize for FiniteWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Writes huge integers compactly; exact decimal up to 256 bits.
pub(crate) fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.bits() <= 256 {
        s.serialize_str(&v.to_string())
    } else {
        s.serialize_str(&format!("<{}-bit integer>", v.bits()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
pub struct ParikhVector {
    #[serde(serialize_with = "serialize_big")]
    pub zeros: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub ones: BigUint,
}

impl ParikhVector {
    pub fn new(zeros: BigUint, ones: BigUint) -> Self {
        ParikhVector { zeros, ones }
    }

    pub fn from_counts(zeros: u64, ones: u64) -> Self {
        ParikhVector::new(BigUint::from(zeros), BigUint::from(ones))
    }

    pub fn unit(letter: Letter) -> Self {
        match letter {
            Letter::Zero => ParikhVector::from_counts(1, 0),
            Letter::One => ParikhVector::from_counts(0, 1),
        }
    }

    pub fn len(&self) -> BigUint {
        &self.zeros + &self.ones
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_zero() && self.ones.is_zero()
    }

    pub fn count(&self, letter: Letter) -> &BigUint {
        match letter {
            Letter::Zero => &self.zeros,
            Letter::One => &self.ones,
        }
    }

    /// `V < W`: componentwise `<=` with strictly smaller total length.
    pub fn precedes(&self, other: &ParikhVector) -> bool {
        self.zeros <= other.zeros && self.ones <= other.ones && self.len() < other.len()
    }

    pub fn scale(&self, k: &BigUint) -> ParikhVector {
        ParikhVector::new(&self.zeros * k, &self.ones * k)
    }
}

impl Add for &ParikhVector {
    type Output = ParikhVector;

    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        ParikhVector::new(&self.zeros + &rhs.zeros, &self.ones + &rhs.ones)
    }
}

impl Add for ParikhVector {
    type Output = ParikhVector;

    fn add(self, rhs: ParikhVector) -> ParikhVector {
        &self + &rhs
    }
}

impl AddAssign<&ParikhVector> for ParikhVector {
    fn add_assign(&mut self, rhs: &ParikhVector) {
        self.zeros += &rhs.zeros;
        self.ones += &rhs.ones;
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.zeros, self.ones)
    }
}

pub fn parikh(w: &FiniteWord) -> ParikhVector {
    w.parikh()
}

/// A morphism of {0,1}* given by the images of both letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    image0: FiniteWord,
    image1: FiniteWord,
}

impl Substitution {
    pub fn new(image0: FiniteWord, image1: FiniteWord) -> Result<Self> {
        if image0.is_empty() || image1.is_empty() {
            return Err(Error::InvalidArgument(
                "substitution images must be non-empty".into(),
            ));
        }
        Ok(Substitution { image0, image1 })
    }

    pub fn image(&self, letter: Letter) -> &FiniteWord {
        match letter {
            Letter::Zero => &self.image0,
            Letter::One => &self.image1,
        }
    }

    /// Incidence matrix: column `j` is the Parikh vector of the image of letter `j`.
    pub fn matrix(&self) -> [[BigUint; 2]; 2] {
        let p0 = self.image0.parikh();
        let p1 = self.image1.parikh();
        [[p0.zeros, p1.zeros], [p0.ones, p1.ones]]
    }

    /// Length of `self(w)` without building it.
    pub fn image_len(&self, w: &ParikhVector) -> BigUint {
        &w.zeros * self.image0.len() + &w.ones * self.image1.len()
    }

    pub fn apply(&self, w: &FiniteWord) -> Result<FiniteWord> {
        let len = check_cap(&self.image_len(&w.parikh()))?;
        let mut out = FiniteWord::with_capacity(len);
        for letter in w.iter() {
            out.append(self.image(letter));
        }
        Ok(out)
    }
}

pub fn apply_substitution(s: &Substitution, w: &FiniteWord) -> Result<FiniteWord> {
    s.apply(w)
}

fn failure_table(pattern: &[bool]) -> Vec<usize> {
    let mut fail = vec![0usize; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

fn occurrences_limited(text: &FiniteWord, pattern: &FiniteWord, limit: usize) -> Vec<usize> {
    let pat: Vec<bool> = pattern.bits.iter().by_vals().collect();
    let fail = failure_table(&pat);
    let mut found = Vec::new();
    let mut k = 0;
    for (i, c) in text.bits.iter().by_vals().enumerate() {
        while k > 0 && c != pat[k] {
            k = fail[k - 1];
        }
        if c == pat[k] {
            k += 1;
        }
        if k == pat.len() {
            found.push(i + 1 - pat.len());
            if found.len() == limit {
                break;
            }
            k = fail[k - 1];
        }
    }
    found
}

/// Start positions of all (possibly overlapping) occurrences of `pattern`.
pub fn occurrences(text: &FiniteWord, pattern: &FiniteWord) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument("pattern must be non-empty".into()));
    }
    Ok(occurrences_limited(text, pattern, usize::MAX))
}

pub fn count_occurrences(text: &FiniteWord, pattern: &FiniteWord) -> Result<u64> {
    occurrences(text, pattern).map(|v| v.len() as u64)
}

/// A binary word stored as maximal runs with arbitrary-precision lengths.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RunWord {
    runs: Vec<(Letter, BigUint)>,
}

impl RunWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run(letter: Letter, count: BigUint) -> Self {
        let mut w = RunWord::new();
        w.push_run(letter, count);
        w
    }

    pub fn from_runs<I: IntoIterator<Item = (Letter, BigUint)>>(runs: I) -> Self {
        let mut w = RunWord::new();
        for (letter, count) in runs {
            w.push_run(letter, count);
        }
        w
    }

    /// Appends `letter^count`, merging with the last run when possible.
    pub fn push_run(&mut self, letter: Letter, count: BigUint) {
        if count.is_zero() {
            return;
        }
        match self.runs.last_mut() {
            Some((last, n)) if *last == letter => *n += count,
            _ => self.runs.push((letter, count)),
        }
    }

    pub fn append(&mut self, other: &RunWord) {
        for (letter, count) in &other.runs {
            self.push_run(*letter, count.clone());
        }
    }

    pub fn runs(&self) -> &[(Letter, BigUint)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|(_, n)| n).sum()
    }

    pub fn parikh(&self) -> ParikhVector {
        let mut p = ParikhVector::default();
        for (letter, n) in &self.runs {
            match letter {
                Letter::Zero => p.zeros += n,
                Letter::One => p.ones += n,
            }
        }
        p
    }

    pub fn to_finite(&self) -> Result<FiniteWord> {
        let len = check_cap(&self.len())?;
        let mut w = FiniteWord::with_capacity(len);
        for (letter, n) in &self.runs {
            // within the cap, so every run fits in usize
            w.push_run(*letter, n.to_usize().unwrap_or(usize::MAX));
        }
        Ok(w)
    }
}

impl From<&FiniteWord> for RunWord {
    fn from(w: &FiniteWord) -> Self {
        let mut runs: Vec<(Letter, usize)> = Vec::new();
        for letter in w.iter() {
            match runs.last_mut() {
                Some((last, n)) if *last == letter => *n += 1,
                _ => runs.push((letter, 1)),
            }
        }
        RunWord {
            runs: runs
                .into_iter()
                .map(|(l, n)| (l, BigUint::from(n)))
                .collect(),
        }
    }
}

/// `ε` for the empty word, otherwise runs such as `1^64 0^256 1^64`.
impl fmt::Display for RunWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "ε");
        }
        for (i, (letter, n)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{letter}^{n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = FiniteWord> {
        proptest::collection::vec(any::<bool>(), 0..max)
            .prop_map(|v| FiniteWord::from_letters(v.into_iter().map(Letter::from_bit)))
    }

    #[test]
    fn parikh_examples() {
        assert_eq!(parikh(&FiniteWord::new()), ParikhVector::from_counts(0, 0));
        let mut u1 = FiniteWord::run(Letter::Zero, 256);
        u1.push_run(Letter::One, 64);
        assert_eq!(parikh(&u1), ParikhVector::from_counts(256, 64));
        assert_eq!(parikh(&w("10110")), ParikhVector::from_counts(2, 3));
    }

    #[test]
    fn substitution_examples() {
        let mut img0 = FiniteWord::run(Letter::Zero, 256);
        img0.push_run(Letter::One, 64);
        let mut img1 = FiniteWord::run(Letter::Zero, 256);
        img1.push_run(Letter::One, 1024);
        let s = Substitution::new(img0.clone(), img1.clone()).unwrap();
        assert_eq!(apply_substitution(&s, &FiniteWord::new()).unwrap(), FiniteWord::new());
        let out = apply_substitution(&s, &w("01")).unwrap();
        assert_eq!(out, img0.concat(&img1));
        assert_eq!(out.len(), 256 + 64 + 256 + 1024);
        assert!(Substitution::new(FiniteWord::new(), img1).is_err());
    }

    #[test]
    fn substitution_respects_cap() {
        let big = FiniteWord::run(Letter::Zero, 1 << 20);
        let s = Substitution::new(big.clone(), big).unwrap();
        let input = FiniteWord::run(Letter::One, 1 << 9);
        match s.apply(&input) {
            Err(Error::SizeLimit { predicted, .. }) => {
                assert_eq!(predicted, BigUint::from(1u64 << 29))
            }
            other => panic!("expected size limit, got {other:?}"),
        }
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(count_occurrences(&w("000"), &w("00")).unwrap(), 2);
        let mut u1 = FiniteWord::run(Letter::Zero, 256);
        u1.push_run(Letter::One, 64);
        assert_eq!(count_occurrences(&u1, &w("01")).unwrap(), 1);
        assert!(matches!(
            count_occurrences(&u1, &FiniteWord::new()),
            Err(Error::InvalidArgument(_))
        ));
        assert_eq!(occurrences(&w("0101010"), &w("010")).unwrap(), vec![0, 2, 4]);
    }

    #[test]
    fn run_word_display_and_roundtrip() {
        let word = w("1100011");
        let runs = RunWord::from(&word);
        assert_eq!(runs.to_string(), "1^2 0^3 1^2");
        assert_eq!(runs.to_finite().unwrap(), word);
        assert_eq!(RunWord::new().to_string(), "ε");
        assert_eq!(runs.parikh(), word.parikh());
    }

    #[test]
    fn lexicographic_order() {
        assert!(w("0") < w("00"));
        assert!(w("01") < w("1"));
        assert!(FiniteWord::new() < w("0"));
    }

    #[test]
    fn paper_order_on_parikh_vectors() {
        let v = ParikhVector::from_counts(1, 2);
        assert!(v.precedes(&ParikhVector::from_counts(1, 3)));
        assert!(!v.precedes(&v));
        assert!(!v.precedes(&ParikhVector::from_counts(0, 5)));
    }

    proptest! {
        #[test]
        fn parikh_is_additive(a in word_strategy(200), b in word_strategy(200)) {
            prop_assert_eq!(parikh(&a.concat(&b)), &parikh(&a) + &parikh(&b));
        }

        #[test]
        fn substitution_matches_its_matrix(
            i0 in word_strategy(12).prop_filter("non-empty", |w| !w.is_empty()),
            i1 in word_strategy(12).prop_filter("non-empty", |w| !w.is_empty()),
            x in word_strategy(60),
            y in word_strategy(60),
        ) {
            let s = Substitution::new(i0.clone(), i1.clone()).unwrap();
            let image = s.apply(&x).unwrap();
            // direct concatenation oracle
            let mut direct = FiniteWord::new();
            for letter in x.iter() {
                direct.append(if letter == Letter::Zero { &i0 } else { &i1 });
            }
            prop_assert_eq!(&image, &direct);
            prop_assert_eq!(image.len(), x.count(Letter::Zero) * i0.len() + x.count(Letter::One) * i1.len());
            let m = s.matrix();
            let px = parikh(&x);
            let expected = ParikhVector::new(
                &m[0][0] * &px.zeros + &m[0][1] * &px.ones,
                &m[1][0] * &px.zeros + &m[1][1] * &px.ones,
            );
            prop_assert_eq!(parikh(&image), expected);
            // morphism property
            prop_assert_eq!(s.apply(&x.concat(&y)).unwrap(), image.concat(&s.apply(&y).unwrap()));
        }

        #[test]
        fn occurrences_match_naive_scan(text in word_strategy(120), pat in word_strategy(6).prop_filter("non-empty", |w| !w.is_empty())) {
            let naive = (0..=text.len().saturating_sub(pat.len()))
                .filter(|&i| i + pat.len() <= text.len() && text.slice(i..i + pat.len()) == pat)
                .count() as u64;
            prop_assert_eq!(count_occurrences(&text, &pat).unwrap(), naive);
            if !text.is_empty() {
                prop_assert_eq!(count_occurrences(&text, &text).unwrap(), 1);
            }
        }
    }
}
