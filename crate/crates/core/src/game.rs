//! Coalitions of firms and transferable-utility games in characteristic
//! function form.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Hard ceiling on the player count representable by a [`Coalition`].
pub const MAX_PLAYERS: usize = 20;

/// A nonempty set of players stored as a bitmask; player `i` (zero based)
/// is bit `i`. Displayed one based, e.g. `{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u32);

impl Coalition {
    pub fn from_mask(mask: u32) -> Self {
        debug_assert!(mask != 0, "empty coalition");
        Coalition(mask)
    }

    pub fn singleton(i: usize) -> Self {
        Coalition(1 << i)
    }

    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    /// From zero-based member indices.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        Coalition(members.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn least_member(self) -> usize {
        self.0.trailing_zeros() as usize
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    /// Lexicographic order on the sorted member lists: `{1} < {1,2} < {1,2,3} < {1,3} < {2}`.
    pub fn lex_cmp(self, other: Coalition) -> Ordering {
        self.members().cmp(other.members())
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// All nonempty coalitions of `n` players in lexicographic member order.
pub fn coalitions_lex(n: usize) -> Vec<Coalition> {
    let mut all: Vec<Coalition> = (1..(1u32 << n)).map(Coalition).collect();
    all.sort_by(|a, b| a.lex_cmp(*b));
    all
}

/// A TU game `(N, v)` given on every nonempty coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicGame {
    n: usize,
    /// Indexed by coalition mask; slot 0 holds `v(∅) = 0`.
    values: Vec<Rational>,
}

impl CharacteristicGame {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::Dimension(format!("player count {n} outside 1..={MAX_PLAYERS}")));
        }
        if values.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "{} values for {n} players, expected {}",
                values.len(),
                1usize << n
            )));
        }
        let mut values = values;
        values[0] = Rational::zero();
        Ok(CharacteristicGame { n, values })
    }

    pub fn from_fn<F: FnMut(Coalition) -> Rational>(n: usize, mut v: F) -> Self {
        assert!(n >= 1 && n <= MAX_PLAYERS);
        let mut values = Vec::with_capacity(1 << n);
        values.push(Rational::zero());
        for mask in 1..(1u32 << n) {
            values.push(v(Coalition(mask)));
        }
        CharacteristicGame { n, values }
    }

    /// `v(S) = Σ_{i∈S} w_i`.
    pub fn additive(weights: &[Rational]) -> Self {
        Self::from_fn(weights.len(), |s| s.members().map(|i| &weights[i]).sum())
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: Coalition) -> &Rational {
        &self.values[s.0 as usize]
    }

    pub fn grand_value(&self) -> &Rational {
        self.value(Coalition::grand(self.n))
    }

    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        (1..(1u32 << self.n)).map(Coalition)
    }
}
