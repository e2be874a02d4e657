//! Trading strategies.
//!
//! A type-`i` agent can hold its production good `i+1`, the remaining good
//! `i+2`, or money, and decides for every ordered pair of objects whether it
//! trades the first away for the second. Three independent bits per type pin
//! all decisions; the rest follow from complements, from "always accept your
//! own consumption good", and from "never trade an object for itself".
//!
//! Goods are indexed 0..3 (type `i` consumes good `i` and produces good
//! `(i+1) % 3`); money is a distinct symbol, never an arithmetic index.

use std::fmt;

use crate::error::{Error, Result};

pub const N_TYPES: usize = 3;

/// A tradeable object: one of the three goods or fiat money.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Obj {
    Good(usize),
    Money,
}

impl Obj {
    /// Column index used by 3x4 holding grids (goods 0..2, money 3).
    pub fn column(self) -> usize {
        match self {
            Obj::Good(g) => {
                debug_assert!(g < 3);
                g
            }
            Obj::Money => 3,
        }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Good(g) => write!(f, "good{}", g + 1),
            Obj::Money => write!(f, "money"),
        }
    }
}

/// Good produced (and held right after production) by type `i`.
pub fn production_good(i: usize) -> usize {
    (i + 1) % 3
}

/// The third good: neither consumed nor produced by type `i`.
pub fn other_good(i: usize) -> usize {
    (i + 2) % 3
}

/// The three objects type `i` can hold, in slot order (production good,
/// other good, money).
pub fn holdings_of(i: usize) -> [Obj; 3] {
    [
        Obj::Good(production_good(i)),
        Obj::Good(other_good(i)),
        Obj::Money,
    ]
}

/// The decision bit controlled by each slot of a [`TypeStrategy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitKind {
    /// Trade the production good `i+1` for money.
    ProdForMoney,
    /// Trade the other good `i+2` for money.
    OtherForMoney,
    /// Trade the production good `i+1` for the other good `i+2`.
    ProdForOther,
}

impl BitKind {
    pub const ALL: [BitKind; 3] = [
        BitKind::ProdForMoney,
        BitKind::OtherForMoney,
        BitKind::ProdForOther,
    ];

    /// The (give, get) holding slots this bit decides (prod 0, other 1,
    /// money 2); the bit is 1 when the give slot's value is the smaller.
    pub fn slots(self) -> (usize, usize) {
        match self {
            BitKind::ProdForMoney => (0, 2),
            BitKind::OtherForMoney => (1, 2),
            BitKind::ProdForOther => (0, 1),
        }
    }

    /// The (give, get) object pair this bit decides, for type `i`.
    pub fn pair(self, i: usize) -> (Obj, Obj) {
        match self {
            BitKind::ProdForMoney => (Obj::Good(production_good(i)), Obj::Money),
            BitKind::OtherForMoney => (Obj::Good(other_good(i)), Obj::Money),
            BitKind::ProdForOther => (Obj::Good(production_good(i)), Obj::Good(other_good(i))),
        }
    }
}

/// One type's strategy triple (s_{i+1,m}, s_{i+2,m}, s_{i+1,i+2}).
///
/// Only six of the eight bit patterns are admissible: (0,1,1) and (1,0,0)
/// are intransitive and rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeStrategy {
    pub prod_for_money: bool,
    pub other_for_money: bool,
    pub prod_for_other: bool,
}

impl TypeStrategy {
    /// The admissible strategy set, in the conventional order.
    pub const ALL: [TypeStrategy; 6] = [
        TypeStrategy::from_bools(true, true, true),
        TypeStrategy::from_bools(true, false, true),
        TypeStrategy::from_bools(true, true, false),
        TypeStrategy::from_bools(false, true, false),
        TypeStrategy::from_bools(false, false, true),
        TypeStrategy::from_bools(false, false, false),
    ];

    pub const fn from_bools(prod_for_money: bool, other_for_money: bool, prod_for_other: bool) -> Self {
        TypeStrategy {
            prod_for_money,
            other_for_money,
            prod_for_other,
        }
    }

    pub fn new(bits: [u8; 3]) -> Result<Self> {
        for b in bits {
            if b > 1 {
                return Err(Error::Domain(format!("strategy bit {b} is not binary")));
            }
        }
        let s = TypeStrategy::from_bools(bits[0] == 1, bits[1] == 1, bits[2] == 1);
        if !s.is_transitive() {
            return Err(Error::Domain(format!(
                "strategy triple ({},{},{}) is intransitive",
                bits[0], bits[1], bits[2]
            )));
        }
        Ok(s)
    }

    pub fn is_transitive(&self) -> bool {
        let (a, b, c) = (self.prod_for_money, self.other_for_money, self.prod_for_other);
        // rejected patterns: (0,1,1) and (1,0,0)
        !((!a && b && c) || (a && !b && !c))
    }

    pub fn bits(&self) -> [u8; 3] {
        [
            self.prod_for_money as u8,
            self.other_for_money as u8,
            self.prod_for_other as u8,
        ]
    }

    pub fn bit(&self, kind: BitKind) -> bool {
        match kind {
            BitKind::ProdForMoney => self.prod_for_money,
            BitKind::OtherForMoney => self.other_for_money,
            BitKind::ProdForOther => self.prod_for_other,
        }
    }

    pub fn with_bit(mut self, kind: BitKind, value: bool) -> Self {
        match kind {
            BitKind::ProdForMoney => self.prod_for_money = value,
            BitKind::OtherForMoney => self.other_for_money = value,
            BitKind::ProdForOther => self.prod_for_other = value,
        }
        self
    }

    /// Willingness of a type-`i` agent playing this triple to trade `give`
    /// away for `get`. Assumes `give` is an object type `i` can hold.
    pub fn willing(&self, i: usize, give: Obj, get: Obj) -> bool {
        debug_assert!(give != Obj::Good(i), "type {i} never holds its consumption good");
        if get == Obj::Good(i) {
            return true; // own consumption good is always accepted
        }
        if give == get {
            return false;
        }
        let prod = Obj::Good(production_good(i));
        let other = Obj::Good(other_good(i));
        match (give, get) {
            (j, Obj::Money) if j == prod => self.prod_for_money,
            (Obj::Money, j) if j == prod => !self.prod_for_money,
            (j, Obj::Money) if j == other => self.other_for_money,
            (Obj::Money, j) if j == other => !self.other_for_money,
            (j, k) if j == prod && k == other => self.prod_for_other,
            (j, k) if j == other && k == prod => !self.prod_for_other,
            _ => unreachable!("invalid object pair for type {i}: {give:?} -> {get:?}"),
        }
    }
}

impl fmt::Display for TypeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.bits();
        write!(f, "{}{}{}", b[0], b[1], b[2])
    }
}

/// A symmetric strategy profile: one admissible triple per type.
///
/// The display form is the 3x3 binary matrix with rows ordered
/// (trade `i+1` for m; trade `i+2` for m; trade `i+1` for `i+2`) and one
/// column per type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategyProfile(pub [TypeStrategy; 3]);

impl StrategyProfile {
    pub fn new(triples: [TypeStrategy; 3]) -> Self {
        StrategyProfile(triples)
    }

    pub fn from_display_matrix(m: [[u8; 3]; 3]) -> Result<Self> {
        let mut triples = [TypeStrategy::ALL[0]; 3];
        for (col, triple) in triples.iter_mut().enumerate() {
            *triple = TypeStrategy::new([m[0][col], m[1][col], m[2][col]])?;
        }
        Ok(StrategyProfile(triples))
    }

    pub fn display_matrix(&self) -> [[u8; 3]; 3] {
        let mut m = [[0u8; 3]; 3];
        for col in 0..3 {
            let b = self.0[col].bits();
            for row in 0..3 {
                m[row][col] = b[row];
            }
        }
        m
    }

    /// Profile with full acceptance of money and the given third-row bits
    /// (the commodity-for-commodity decisions of types 1..3).
    pub fn full_money(s3: [u8; 3]) -> Result<Self> {
        Self::from_display_matrix([[1, 1, 1], [1, 1, 1], s3])
    }

    /// The third display row: each type's production-good-for-other-good bit.
    pub fn third_row(&self) -> [u8; 3] {
        let m = self.display_matrix();
        m[2]
    }

    /// All 6^3 = 216 admissible profiles, in a fixed deterministic order.
    pub fn all() -> Vec<StrategyProfile> {
        let mut out = Vec::with_capacity(216);
        for a in TypeStrategy::ALL {
            for b in TypeStrategy::ALL {
                for c in TypeStrategy::ALL {
                    out.push(StrategyProfile([a, b, c]));
                }
            }
        }
        out
    }

    /// Does a type-`i` agent trade `holding` away for `offered` under this
    /// profile? Errors on `holding == Good(i)` (never held) and on malformed
    /// object pairs.
    pub fn accepts(&self, i: usize, holding: Obj, offered: Obj) -> Result<bool> {
        if i >= N_TYPES {
            return Err(Error::Domain(format!("type index {i} out of range")));
        }
        if holding == Obj::Good(i) {
            return Err(Error::Domain(format!(
                "type {} never holds its own consumption good",
                i + 1
            )));
        }
        if holding == offered {
            return Ok(false);
        }
        if let Obj::Good(g) = holding {
            if g >= 3 {
                return Err(Error::Domain(format!("good index {g} out of range")));
            }
        }
        if let Obj::Good(g) = offered {
            if g >= 3 {
                return Err(Error::Domain(format!("good index {g} out of range")));
            }
        }
        Ok(self.0[i].willing(i, holding, offered))
    }

    /// Internal fast path; same semantics as [`StrategyProfile::accepts`]
    /// on valid inputs.
    #[inline]
    pub(crate) fn willing(&self, i: usize, give: Obj, get: Obj) -> bool {
        self.0[i].willing(i, give, get)
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.0[0], self.0[1], self.0[2])
    }
}
