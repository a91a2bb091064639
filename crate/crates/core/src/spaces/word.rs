//! Reduced words in a finitely generated free group.
//!
//! A word is a sequence of nonzero signed letters: `+i` is the `i`-th
//! generator, `-i` its inverse, with `i` starting at 1.  The reduced
//! invariant (no letter followed by its own inverse) is maintained by every
//! constructor, so equality of group elements is equality of words.

use std::fmt;

use crate::{Error, Result};

/// A freely reduced word.  The identity is the empty word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord {
    letters: Vec<i16>,
}

impl ReducedWord {
    /// Reduces an arbitrary letter sequence.  Zero letters are rejected.
    pub fn new(letters: &[i16]) -> Result<Self> {
        let mut buffer: Vec<i16> = Vec::with_capacity(letters.len());
        for &x in letters {
            if x == 0 {
                return Err(Error::Config("letter 0 is not a generator".into()));
            }
            if buffer.last().is_some_and(|&y| x == -y) {
                buffer.pop();
            } else {
                buffer.push(x);
            }
        }
        Ok(Self { letters: buffer })
    }

    /// Builds a word from letters already known to be reduced.
    /// Panics in debug builds if the sequence is not reduced.
    pub(crate) fn from_reduced(letters: Vec<i16>) -> Self {
        debug_assert!(letters.iter().all(|&x| x != 0));
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        Self { letters }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// Word length `|s|`, the distance to the identity.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[i16] {
        &self.letters
    }

    /// Largest generator index used, or 0 for the identity.
    pub fn max_rank(&self) -> usize {
        self.letters
            .iter()
            .map(|&x| x.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|&x| -x).collect(),
        }
    }

    /// Group multiplication with free reduction at the seam.
    pub fn mul(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        for &x in &other.letters {
            if letters.last().is_some_and(|&y| x == -y) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        Self { letters }
    }

    /// Prefix of the first `n` letters.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            letters: self.letters[..n.min(self.letters.len())].to_vec(),
        }
    }

    /// Length of the longest common prefix with `other`.
    pub fn common_prefix_len(&self, other: &Self) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Word metric `d(s, t) = |s| + |t| - 2 lcp(s, t)`, the distance in the
    /// Cayley tree.  Agrees with `|s^-1 t|` because the only cancellation in
    /// `s^-1 t` is the shared prefix.
    pub fn distance(&self, other: &Self) -> u32 {
        let p = self.common_prefix_len(other);
        (self.len() + other.len() - 2 * p) as u32
    }

    /// Parses `a..z` as generators 1..26 and `A..Z` as their inverses,
    /// checking letters against `rank`.  The empty string and `"e"` denote
    /// the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if text == "e" {
            return Ok(Self::identity());
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let x = match c {
                'a'..='z' => (c as i16) - ('a' as i16) + 1,
                'A'..='Z' => -((c as i16) - ('A' as i16) + 1),
                _ => {
                    return Err(Error::InvalidLetter {
                        letter: c.to_string(),
                        rank,
                    })
                }
            };
            if x.unsigned_abs() as usize > rank {
                return Err(Error::InvalidLetter {
                    letter: c.to_string(),
                    rank,
                });
            }
            letters.push(x);
        }
        Self::new(&letters)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for &x in &self.letters {
            let idx = (x.unsigned_abs() - 1) as u8;
            let c = if x > 0 { b'a' + idx } else { b'A' + idx } as char;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ReducedWord {
    // Words read better unquoted in assertion output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Iterates all reduced words of the given length in deterministic
/// (lexicographic by signed letter) order.  Letter order is
/// `1, -1, 2, -2, ...` to match ball enumeration by generator.
pub fn words_of_length(rank: usize, len: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let alphabet: Vec<i16> = (1..=rank as i16).flat_map(|i| [i, -i]).collect();
    let mut stack: Vec<i16> = Vec::with_capacity(len);
    fn rec(alphabet: &[i16], stack: &mut Vec<i16>, len: usize, out: &mut Vec<ReducedWord>) {
        if stack.len() == len {
            out.push(ReducedWord::from_reduced(stack.clone()));
            return;
        }
        for &x in alphabet {
            if stack.last().is_some_and(|&y| x == -y) {
                continue;
            }
            stack.push(x);
            rec(alphabet, stack, len, out);
            stack.pop();
        }
    }
    rec(&alphabet, &mut stack, len, &mut out);
    out
}
