//! Exhaustive factor statistics of a finite text.
//!
//! A [`FactorIndex`] holds the suffix array and LCP array of its text.
//! Distinct-factor counts come from the LCP array; bispecial factors come
//! from a bottom-up walk over LCP intervals (the internal nodes of the suffix
//! tree, i.e. the right-special factors). [`FactorIndex::classify_bispecial`]
//! answers single queries by binary search instead, so the two routes can be
//! compared.

mod sais;

use std::cmp::Ordering;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::words::{FiniteWord, Letter};

pub use sais::{lcp_array, suffix_array};

/// Default limit on the memory a single index may use.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Peak bytes per text letter during construction.
const BYTES_PER_LETTER: u64 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BispecialType {
    Strong,
    Weak,
    Ordinary,
    None,
}

impl BispecialType {
    /// `m(w)`: +1, -1, 0, or `None` for factors that are not bispecial.
    pub fn m_value(self) -> Option<i32> {
        match self {
            BispecialType::Strong => Some(1),
            BispecialType::Weak => Some(-1),
            BispecialType::Ordinary => Some(0),
            BispecialType::None => None,
        }
    }

    /// From the set of two-sided extensions `awb`, bit `2a + b`.
    fn from_masks(left: u8, right: u8, pairs: u8) -> Self {
        if left != 0b11 || right != 0b11 {
            return BispecialType::None;
        }
        match pairs {
            0b1111 => BispecialType::Strong,
            0b1001 | 0b0110 => BispecialType::Weak,
            _ => BispecialType::Ordinary,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedFactor {
    pub word: FiniteWord,
    pub kind: BispecialType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CassaigneRow {
    pub n: usize,
    pub s_hat: i64,
    pub rhs: i64,
    pub holds: bool,
}

pub struct FactorIndex {
    text: FiniteWord,
    bytes: Vec<u8>,
    sa: Vec<u32>,
    lcp: Vec<u32>,
    max_n: usize,
    /// `counts[n]` is the number of distinct factors of length `n`.
    counts: Vec<u64>,
}

impl std::fmt::Debug for FactorIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorIndex")
            .field("len", &self.bytes.len())
            .field("max_n", &self.max_n)
            .finish()
    }
}

/// Builds an index under [`DEFAULT_MEMORY_BUDGET`].
pub fn build_index(text: &FiniteWord, max_n: usize) -> Result<FactorIndex> {
    FactorIndex::build(text, max_n, DEFAULT_MEMORY_BUDGET)
}

impl FactorIndex {
    pub fn build(text: &FiniteWord, max_n: usize, memory_budget: u64) -> Result<Self> {
        if max_n > text.len() {
            return Err(Error::InvalidArgument(format!(
                "max_n = {max_n} exceeds text length {}",
                text.len()
            )));
        }
        let needed = Self::estimated_bytes(text.len());
        if needed > memory_budget {
            return Err(Error::MemoryBudget {
                needed,
                budget: memory_budget,
            });
        }
        let bytes = text.to_bytes();
        let sa = {
            let s: Vec<u32> = bytes.iter().map(|&b| u32::from(b)).collect();
            suffix_array(&s, 1)
        };
        let lcp = lcp_array(&bytes, &sa);

        let n = bytes.len();
        let mut diff = vec![0i64; max_n + 2];
        for k in 0..n {
            let lo = lcp[k] as usize + 1;
            let hi = (n - sa[k] as usize).min(max_n);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut counts = Vec::with_capacity(max_n + 1);
        counts.push(1);
        let mut acc = 0i64;
        for d in &diff[1..=max_n] {
            acc += d;
            counts.push(acc as u64);
        }
        Ok(FactorIndex {
            text: text.clone(),
            bytes,
            sa,
            lcp,
            max_n,
            counts,
        })
    }

    pub fn estimated_bytes(len: usize) -> u64 {
        len as u64 * BYTES_PER_LETTER + 4096
    }

    pub fn text(&self) -> &FiniteWord {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    fn check_range(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            Err(Error::OutOfRange { n, max: self.max_n })
        } else {
            Ok(())
        }
    }

    /// `p̂(n)`, the number of distinct factors of length `n`.
    pub fn complexity_hat(&self, n: usize) -> Result<u64> {
        self.check_range(n)?;
        Ok(self.counts[n])
    }

    /// Distinct factors of length `n`, in lexicographic order.
    pub fn factors(&self, n: usize) -> Result<Vec<FiniteWord>> {
        self.check_range(n)?;
        if n == 0 {
            return Ok(vec![FiniteWord::new()]);
        }
        let len = self.bytes.len();
        Ok((0..len)
            .filter(|&k| len - self.sa[k] as usize >= n && (self.lcp[k] as usize) < n)
            .map(|k| {
                let p = self.sa[k] as usize;
                FiniteWord::from_bytes(&self.bytes[p..p + n])
            })
            .collect())
    }

    /// Sorted factor table of length `n`, one factor per line.
    pub fn factor_table(&self, n: usize) -> Result<String> {
        let mut out = String::new();
        for w in self.factors(n)? {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        Ok(out)
    }

    fn compare_at(&self, pos: usize, pattern: &[u8]) -> Ordering {
        let end = (pos + pattern.len()).min(self.bytes.len());
        let head = &self.bytes[pos..end];
        match head.cmp(&pattern[..head.len()]) {
            Ordering::Equal if head.len() < pattern.len() => Ordering::Less,
            other => other,
        }
    }

    /// Range of suffix-array ranks whose suffixes start with `pattern`.
    fn sa_range(&self, pattern: &[u8]) -> Range<usize> {
        let lo = self.sa.partition_point(|&p| self.compare_at(p as usize, pattern) == Ordering::Less);
        let hi = self.sa.partition_point(|&p| self.compare_at(p as usize, pattern) != Ordering::Greater);
        lo..hi
    }

    pub fn contains(&self, w: &FiniteWord) -> bool {
        !self.sa_range(&w.to_bytes()).is_empty()
    }

    /// Letters `a` such that `a w` is a factor.
    pub fn left_extensions(&self, w: &FiniteWord) -> Vec<Letter> {
        Letter::ALL
            .into_iter()
            .filter(|&a| self.contains(&FiniteWord::run(a, 1).concat(w)))
            .collect()
    }

    /// Letters `b` such that `w b` is a factor.
    pub fn right_extensions(&self, w: &FiniteWord) -> Vec<Letter> {
        Letter::ALL
            .into_iter()
            .filter(|&b| self.contains(&w.concat(&FiniteWord::run(b, 1))))
            .collect()
    }

    /// Classifies `w` by direct factor lookups of `aw`, `wb` and `awb`.
    pub fn classify_bispecial(&self, w: &FiniteWord) -> Result<BispecialType> {
        self.check_range(w.len() + 2)?;
        let mask = |letters: Vec<Letter>| letters.iter().fold(0u8, |m, l| m | 1 << l.index());
        let left = mask(self.left_extensions(w));
        let right = mask(self.right_extensions(w));
        let mut pairs = 0u8;
        for a in Letter::ALL {
            for b in Letter::ALL {
                let mut awb = FiniteWord::run(a, 1);
                awb.append(w);
                awb.push(b);
                if self.contains(&awb) {
                    pairs |= 1 << (2 * a.index() + b.index());
                }
            }
        }
        Ok(BispecialType::from_masks(left, right, pairs))
    }

    /// Every bispecial factor of length at most `max_len`, sorted by length
    /// then lexicographically, found by walking the LCP intervals.
    pub fn bispecials(&self, max_len: usize) -> Result<Vec<ClassifiedFactor>> {
        self.check_range(max_len + 2)?;
        struct Node {
            depth: usize,
            lb: usize,
            left: u8,
            right: u8,
            pairs: u8,
        }
        let n = self.bytes.len();
        let mut found = Vec::new();
        if n == 0 {
            return Ok(found);
        }
        let leaf_left = |k: usize| {
            let p = self.sa[k] as usize;
            if p > 0 {
                1u8 << self.bytes[p - 1]
            } else {
                0
            }
        };
        let attach = |node: &mut Node, child_lb: usize, child_left: u8| {
            let p = self.sa[child_lb] as usize + node.depth;
            if p < n {
                let b = self.bytes[p];
                node.right |= 1 << b;
                for a in 0..2u8 {
                    if child_left & (1 << a) != 0 {
                        node.pairs |= 1 << (2 * a + b);
                    }
                }
            }
            node.left |= child_left;
        };
        let mut finish = |node: &Node| {
            if node.depth <= max_len {
                let kind = BispecialType::from_masks(node.left, node.right, node.pairs);
                if kind != BispecialType::None {
                    let p = self.sa[node.lb] as usize;
                    found.push(ClassifiedFactor {
                        word: FiniteWord::from_bytes(&self.bytes[p..p + node.depth]),
                        kind,
                    });
                }
            }
        };

        let mut stack = vec![Node {
            depth: 0,
            lb: 0,
            left: 0,
            right: 0,
            pairs: 0,
        }];
        for k in 0..n {
            let (mut child_lb, mut child_left) = (k, leaf_left(k));
            let h = if k + 1 < n { self.lcp[k + 1] as usize } else { 0 };
            while stack.last().expect("root stays").depth > h {
                let mut node = stack.pop().expect("checked");
                attach(&mut node, child_lb, child_left);
                finish(&node);
                (child_lb, child_left) = (node.lb, node.left);
                if stack.last().expect("root stays").depth < h {
                    stack.push(Node {
                        depth: h,
                        lb: node.lb,
                        left: 0,
                        right: 0,
                        pairs: 0,
                    });
                }
            }
            let top = stack.last_mut().expect("root stays");
            if top.depth < h {
                stack.push(Node {
                    depth: h,
                    lb: child_lb,
                    left: 0,
                    right: 0,
                    pairs: 0,
                });
            }
            attach(stack.last_mut().expect("non-empty"), child_lb, child_left);
        }
        let mut root = stack.pop().expect("root");
        // the empty suffix is not in the array but still has a left letter
        root.left |= 1 << self.bytes[n - 1];
        debug_assert!(stack.is_empty());
        finish(&root);
        found.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
        Ok(found)
    }

    /// `ŝ(n) = p̂(n+1) - p̂(n)` against `1 + Σ m̂(w)` over bispecials with `|w| < n`.
    pub fn s_hat_and_cassaigne(&self, n_max: usize) -> Result<Vec<CassaigneRow>> {
        self.check_range(n_max + 2)?;
        let bisp = self.bispecials(n_max.saturating_sub(1))?;
        let mut by_len = vec![0i64; n_max + 1];
        for b in &bisp {
            by_len[b.word.len()] += i64::from(b.kind.m_value().unwrap_or(0));
        }
        let mut rows = Vec::with_capacity(n_max + 1);
        let mut rhs = 1i64;
        for n in 0..=n_max {
            if n > 0 {
                rhs += by_len[n - 1];
            }
            let s_hat = self.counts[n + 1] as i64 - self.counts[n] as i64;
            rows.push(CassaigneRow {
                n,
                s_hat,
                rhs,
                holds: s_hat == rhs,
            });
        }
        Ok(rows)
    }
}

/// Exact frequency of `letter` in `text[start..start + width]`.
pub fn window_density(text: &FiniteWord, letter: Letter, start: usize, width: usize) -> Result<ExactRational> {
    if width == 0 || start.checked_add(width).is_none_or(|end| end > text.len()) {
        return Err(Error::InvalidArgument(format!(
            "window [{start}, {start}+{width}) does not fit in a text of length {}",
            text.len()
        )));
    }
    let count = text.count_in(letter, start..start + width);
    Ok(ExactRational::ratio(count as i64, width as i64))
}
