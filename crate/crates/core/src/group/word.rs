use std::fmt;

use super::GroupPresentation;
use crate::error::{contract, Result};
use crate::hyperbolic::MobiusIsometry;

/// A freely reduced word in the generators. Letter `+i` stands for
/// generator `i - 1` and `-i` for its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<i8>,
}

/// All letters for `n` generators, in enumeration order.
pub(crate) fn alphabet(n: usize) -> Vec<i8> {
    (1..=n as i8).flat_map(|i| [i, -i]).collect()
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<i8>) -> Result<Self> {
        if letters.contains(&0) {
            return contract("word letters are 1-based signed generator indices; 0 is not a letter");
        }
        if letters.windows(2).any(|w| w[0] == -w[1]) {
            return contract(format!("word {letters:?} is not freely reduced"));
        }
        Ok(Self { letters })
    }

    pub(crate) fn from_reduced(letters: Vec<i8>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[i8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// The group element `g_{l1} g_{l2} … g_{ln}`: the rightmost letter acts first.
    pub fn evaluate(&self, group: &GroupPresentation) -> Result<MobiusIsometry> {
        let mut acc = MobiusIsometry::identity(group.dim());
        for &l in &self.letters {
            acc = acc * group.letter(l)?;
        }
        Ok(acc.renormalized())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l > 0 {
                write!(f, "g{l}")?;
            } else {
                write!(f, "g{}^-1", -l)?;
            }
        }
        Ok(())
    }
}
