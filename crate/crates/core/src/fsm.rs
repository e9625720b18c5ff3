//! The sequential reference comparator for Gray code words.
//!
//! A four-state machine reads `g_i h_i` from the most significant bit down.
//! Its state encodes what is known after the prefix `g_{1,i}, h_{1,i}`:
//!
//! | state | meaning                          |
//! |-------|----------------------------------|
//! | `00`  | prefixes equal, parity 0         |
//! | `11`  | prefixes equal, parity 1         |
//! | `10`  | `<g> > <h>` (absorbing)          |
//! | `01`  | `<g> < <h>` (absorbing)          |
//!
//! The transition operator [`diamond`] is associative on stable inputs, and
//! [`out_op`] turns the state before position `i` plus `g_i h_i` into bit `i`
//! of the max and min outputs. [`diamond_m`] and [`out_m`] are the
//! metastable closures of both, stored as 9x9 tables; `*_closure` variants
//! recompute them by brute force.
//!
//! Positions are 1-indexed throughout (`s^(0)` is the initial state `00`,
//! `s^(i)` follows `g_i h_i`). State diagrams elsewhere sometimes label the
//! prefix `g_{0,i-1}`; that is the same prefix written 0-indexed.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gray::{GrayError, ValidGrayWord};
use crate::ternary::{closure_eval, LogicError, TernaryWord, Trit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsmError {
    #[error("metastable input {0} given to a stable-only operator")]
    Metastable(StatePair),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("prefix length {index} exceeds width {width}")]
    Index { index: usize, width: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Gray(#[from] GrayError),
}

/// Two trits `s_1 s_2`: an FSM state, or an input pair `g_i h_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StatePair(pub Trit, pub Trit);

impl StatePair {
    pub const EQ_EVEN: StatePair = StatePair(Trit::Zero, Trit::Zero);
    pub const LESS: StatePair = StatePair(Trit::Zero, Trit::One);
    pub const EQ_ODD: StatePair = StatePair(Trit::One, Trit::One);
    pub const GREATER: StatePair = StatePair(Trit::One, Trit::Zero);

    /// All nine ternary pairs, in `0 < 1 < M` lexicographic order.
    pub fn all() -> impl Iterator<Item = StatePair> {
        Trit::ALL
            .into_iter()
            .flat_map(|a| Trit::ALL.into_iter().map(move |b| StatePair(a, b)))
    }

    pub fn stable() -> impl Iterator<Item = StatePair> {
        Self::all().filter(|p| p.is_binary())
    }

    pub fn is_binary(self) -> bool {
        !self.0.is_meta() && !self.1.is_meta()
    }

    /// The pair with the first component inverted, `N s`.
    pub fn hat(self) -> HatStatePair {
        HatStatePair(!self.0, self.1)
    }

    fn index(self) -> usize {
        3 * self.0.index() + self.1.index()
    }

    fn to_word(self) -> TernaryWord {
        TernaryWord::new(vec![self.0, self.1]).expect("two trits")
    }

    fn from_word(w: &TernaryWord) -> StatePair {
        StatePair(w.trits()[0], w.trits()[1])
    }

    fn bools(self) -> Result<(bool, bool), FsmError> {
        match (self.0.to_bool(), self.1.to_bool()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(FsmError::Metastable(self)),
        }
    }
}

impl fmt::Display for StatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl FromStr for StatePair {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let w: TernaryWord = s.parse()?;
        if w.width() != 2 {
            return Err(LogicError::Width {
                expected: 2,
                got: w.width(),
            });
        }
        Ok(StatePair::from_word(&w))
    }
}

/// A state pair carried with its first bit inverted: `(NOT s_1, s_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HatStatePair(pub Trit, pub Trit);

impl HatStatePair {
    /// Undo the inversion. `hat` is an involution, so this is `N` again.
    pub fn unhat(self) -> StatePair {
        StatePair(!self.0, self.1)
    }

    pub fn hat(self) -> StatePair {
        self.unhat()
    }
}

impl fmt::Display for HatStatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

fn pair(a: bool, b: bool) -> StatePair {
    StatePair(Trit::from_bool(a), Trit::from_bool(b))
}

fn diamond_bool(s: (bool, bool), b: (bool, bool)) -> StatePair {
    match s {
        (false, false) => pair(b.0, b.1),
        (true, true) => pair(!b.0, !b.1),
        (a, c) => pair(a, c),
    }
}

fn out_bool(s: (bool, bool), b: (bool, bool)) -> StatePair {
    let (g, h) = b;
    match s {
        (false, false) => pair(g || h, g && h),
        (true, false) => pair(g, h),
        (true, true) => pair(g && h, g || h),
        (false, true) => pair(h, g),
    }
}

/// The FSM transition `s ◇ b`. Rejects metastable inputs.
pub fn diamond(s: StatePair, b: StatePair) -> Result<StatePair, FsmError> {
    Ok(diamond_bool(s.bools()?, b.bools()?))
}

/// Output bits `(max_i, min_i)` from state `s^(i-1)` and input `g_i h_i`.
pub fn out_op(s: StatePair, b: StatePair) -> Result<StatePair, FsmError> {
    Ok(out_bool(s.bools()?, b.bools()?))
}

/// Sorts two stable Gray code words by running the FSM. Returns `(max, min)`.
pub fn fsm_sort2(g: &TernaryWord, h: &TernaryWord) -> Result<(TernaryWord, TernaryWord), FsmError> {
    if g.width() != h.width() {
        return Err(FsmError::WidthMismatch(g.width(), h.width()));
    }
    let mut state = StatePair::EQ_EVEN;
    let mut max = Vec::with_capacity(g.width());
    let mut min = Vec::with_capacity(g.width());
    for (&gi, &hi) in g.trits().iter().zip(h.trits()) {
        let input = StatePair(gi, hi);
        let o = out_op(state, input)?;
        max.push(o.0);
        min.push(o.1);
        state = diamond(state, input)?;
    }
    Ok((TernaryWord::new(max)?, TernaryWord::new(min)?))
}

fn closure2(
    f: fn(StatePair, StatePair) -> Result<StatePair, FsmError>,
    x: StatePair,
    y: StatePair,
) -> StatePair {
    let w = closure_eval(
        |args: &[TernaryWord]| {
            f(
                StatePair::from_word(&args[0]),
                StatePair::from_word(&args[1]),
            )
            .map(StatePair::to_word)
        },
        &[x.to_word(), y.to_word()],
    )
    .expect("stable operators are total on resolutions");
    StatePair::from_word(&w)
}

/// `x ⋄_M y` by enumerating resolutions.
pub fn diamond_m_closure(x: StatePair, y: StatePair) -> StatePair {
    closure2(diamond, x, y)
}

/// `out_M(s, b)` by enumerating resolutions.
pub fn out_m_closure(s: StatePair, b: StatePair) -> StatePair {
    closure2(out_op, s, b)
}

const Z: Trit = Trit::Zero;
const O: Trit = Trit::One;
const M: Trit = Trit::Meta;

macro_rules! tp {
    ($a:ident $b:ident) => {
        StatePair($a, $b)
    };
}

// Rows: first operand; columns: second operand. Both ordered
// 00 01 0M 10 11 1M M0 M1 MM.
#[rustfmt::skip]
const DIAMOND_M: [[StatePair; 9]; 9] = [
    [tp!(Z Z), tp!(Z O), tp!(Z M), tp!(O Z), tp!(O O), tp!(O M), tp!(M Z), tp!(M O), tp!(M M)],
    [tp!(Z O), tp!(Z O), tp!(Z O), tp!(Z O), tp!(Z O), tp!(Z O), tp!(Z O), tp!(Z O), tp!(Z O)],
    [tp!(Z M), tp!(Z O), tp!(Z M), tp!(M M), tp!(M O), tp!(M M), tp!(M M), tp!(M O), tp!(M M)],
    [tp!(O Z), tp!(O Z), tp!(O Z), tp!(O Z), tp!(O Z), tp!(O Z), tp!(O Z), tp!(O Z), tp!(O Z)],
    [tp!(O O), tp!(O Z), tp!(O M), tp!(Z O), tp!(Z Z), tp!(Z M), tp!(M O), tp!(M Z), tp!(M M)],
    [tp!(O M), tp!(O Z), tp!(O M), tp!(M M), tp!(M Z), tp!(M M), tp!(M M), tp!(M Z), tp!(M M)],
    [tp!(M Z), tp!(M M), tp!(M M), tp!(O Z), tp!(O M), tp!(O M), tp!(M Z), tp!(M M), tp!(M M)],
    [tp!(M O), tp!(M M), tp!(M M), tp!(Z O), tp!(Z M), tp!(Z M), tp!(M O), tp!(M M), tp!(M M)],
    [tp!(M M), tp!(M M), tp!(M M), tp!(M M), tp!(M M), tp!(M M), tp!(M M), tp!(M M), tp!(M M)],
];

#[rustfmt::skip]
const OUT_M: [[StatePair; 9]; 9] = [
    [tp!(Z Z), tp!(O Z), tp!(M Z), tp!(O Z), tp!(O O), tp!(O M), tp!(M Z), tp!(O M), tp!(M M)],
    [tp!(Z Z), tp!(O Z), tp!(M Z), tp!(Z O), tp!(O O), tp!(M O), tp!(Z M), tp!(O M), tp!(M M)],
    [tp!(Z Z), tp!(O Z), tp!(M Z), tp!(M M), tp!(O O), tp!(M M), tp!(M M), tp!(O M), tp!(M M)],
    [tp!(Z Z), tp!(Z O), tp!(Z M), tp!(O Z), tp!(O O), tp!(O M), tp!(M Z), tp!(M O), tp!(M M)],
    [tp!(Z Z), tp!(Z O), tp!(Z M), tp!(Z O), tp!(O O), tp!(M O), tp!(Z M), tp!(M O), tp!(M M)],
    [tp!(Z Z), tp!(Z O), tp!(Z M), tp!(M M), tp!(O O), tp!(M M), tp!(M M), tp!(M O), tp!(M M)],
    [tp!(Z Z), tp!(M M), tp!(M M), tp!(O Z), tp!(O O), tp!(O M), tp!(M Z), tp!(M M), tp!(M M)],
    [tp!(Z Z), tp!(M M), tp!(M M), tp!(Z O), tp!(O O), tp!(M O), tp!(Z M), tp!(M M), tp!(M M)],
    [tp!(Z Z), tp!(M M), tp!(M M), tp!(M M), tp!(O O), tp!(M M), tp!(M M), tp!(M M), tp!(M M)],
];

/// `x ⋄_M y`, the metastable closure of [`diamond`].
#[inline]
pub fn diamond_m(x: StatePair, y: StatePair) -> StatePair {
    DIAMOND_M[x.index()][y.index()]
}

/// `out_M(s, b)`, the metastable closure of [`out_op`].
#[inline]
pub fn out_m(s: StatePair, b: StatePair) -> StatePair {
    OUT_M[s.index()][b.index()]
}

pub fn hat(x: StatePair) -> HatStatePair {
    x.hat()
}

/// `x ⋄̂_M y := N(Nx ⋄_M Ny)`: the closed transition on hat-form pairs.
pub fn hat_diamond_m(x: HatStatePair, y: HatStatePair) -> HatStatePair {
    diamond_m(x.unhat(), y.unhat()).hat()
}

/// `s^(i)_M`: the superposition of the FSM state after `i` steps over every
/// resolution of the length-`i` prefixes. `i = 0` yields `00`.
pub fn prefix_state_oracle(
    g: &ValidGrayWord,
    h: &ValidGrayWord,
    i: usize,
) -> Result<StatePair, FsmError> {
    if g.width() != h.width() {
        return Err(FsmError::WidthMismatch(g.width(), h.width()));
    }
    if i > g.width() {
        return Err(FsmError::Index {
            index: i,
            width: g.width(),
        });
    }
    if i == 0 {
        return Ok(StatePair::EQ_EVEN);
    }
    let gp = g.word().slice(1, i)?;
    let hp = h.word().slice(1, i)?;
    let w = closure_eval(
        |args: &[TernaryWord]| {
            let state = args[0]
                .trits()
                .iter()
                .zip(args[1].trits())
                .try_fold(StatePair::EQ_EVEN, |s, (&a, &b)| {
                    diamond(s, StatePair(a, b))
                })?;
            Ok::<_, FsmError>(state.to_word())
        },
        &[gp, hp],
    )?;
    Ok(StatePair::from_word(&w))
}

/// `⋄_M` folded over `pairs` along every binary bracketing, one result per
/// tree (Catalan many).
pub fn all_bracketings(pairs: &[StatePair]) -> Vec<StatePair> {
    if pairs.len() <= 1 {
        return pairs.to_vec();
    }
    let mut out = Vec::new();
    for split in 1..pairs.len() {
        for l in all_bracketings(&pairs[..split]) {
            for r in all_bracketings(&pairs[split..]) {
                out.push(diamond_m(l, r));
            }
        }
    }
    out
}

/// The column pairs `g_i h_i` of two words of equal width.
pub fn column_pairs(g: &TernaryWord, h: &TernaryWord) -> Vec<StatePair> {
    g.trits()
        .iter()
        .zip(h.trits())
        .map(|(&a, &b)| StatePair(a, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gray::{decode, enumerate_valid, max_min_oracle, CodeValue};

    fn p(s: &str) -> StatePair {
        s.parse().unwrap()
    }

    fn vw(s: &str) -> ValidGrayWord {
        ValidGrayWord::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn diamond_examples() {
        assert_eq!(diamond(p("11"), p("01")), Ok(p("10")));
        assert_eq!(diamond(p("00"), p("10")), Ok(p("10")));
        assert_eq!(diamond(p("10"), p("11")), Ok(p("10")));
        assert_eq!(
            diamond(p("0M"), p("11")),
            Err(FsmError::Metastable(p("0M")))
        );
    }

    #[test]
    fn diamond_table() {
        let cols = ["00", "01", "11", "10"];
        let rows = [
            ("00", ["00", "01", "11", "10"]),
            ("01", ["01", "01", "01", "01"]),
            ("11", ["11", "10", "00", "01"]),
            ("10", ["10", "10", "10", "10"]),
        ];
        for (r, vals) in rows {
            for (c, v) in cols.iter().zip(vals) {
                assert_eq!(diamond(p(r), p(c)).unwrap(), p(v), "{r} ◇ {c}");
            }
        }
    }

    #[test]
    fn out_examples() {
        assert_eq!(out_op(p("01"), p("10")), Ok(p("01")));
        assert_eq!(out_op(p("00"), p("01")), Ok(p("10")));
        assert_eq!(out_op(p("11"), p("01")), Ok(p("01")));
        assert!(out_op(p("M1"), p("01")).is_err());
    }

    #[test]
    fn out_table() {
        let cols = ["00", "01", "11", "10"];
        let rows = [
            ("00", ["00", "10", "11", "10"]),
            ("01", ["00", "10", "11", "01"]),
            ("11", ["00", "01", "11", "01"]),
            ("10", ["00", "01", "11", "10"]),
        ];
        for (r, vals) in rows {
            for (c, v) in cols.iter().zip(vals) {
                assert_eq!(out_op(p(r), p(c)).unwrap(), p(v), "out({r}, {c})");
            }
        }
    }

    #[test]
    fn diamond_is_associative_on_stable_inputs() {
        let mut checked = 0;
        for a in StatePair::stable() {
            for b in StatePair::stable() {
                for c in StatePair::stable() {
                    let left = diamond(diamond(a, b).unwrap(), c).unwrap();
                    let right = diamond(a, diamond(b, c).unwrap()).unwrap();
                    assert_eq!(left, right, "({a}◇{b})◇{c}");
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 64);
    }

    #[test]
    fn fsm_sort2_examples() {
        let w = |s: &str| s.parse::<TernaryWord>().unwrap();
        assert_eq!(
            fsm_sort2(&w("0100"), &w("0111")).unwrap(),
            (w("0100"), w("0111"))
        );
        assert_eq!(
            fsm_sort2(&w("0111"), &w("0100")).unwrap(),
            (w("0100"), w("0111"))
        );
        assert_eq!(
            fsm_sort2(&w("0110"), &w("0110")).unwrap(),
            (w("0110"), w("0110"))
        );
        assert_eq!(
            fsm_sort2(&w("1000"), &w("0000")).unwrap(),
            (w("1000"), w("0000"))
        );
        assert!(fsm_sort2(&w("0M00"), &w("0000")).is_err());
        assert!(fsm_sort2(&w("000"), &w("0000")).is_err());
    }

    #[test]
    fn fsm_sort2_sorts_all_stable_pairs() {
        for width in 1..=7 {
            let n = 1u64 << width;
            for x in 0..n {
                for y in 0..n {
                    let g = crate::gray::encode(CodeValue::new(x, width).unwrap());
                    let h = crate::gray::encode(CodeValue::new(y, width).unwrap());
                    let (max, min) = fsm_sort2(&g, &h).unwrap();
                    assert_eq!(decode(&max).unwrap().value(), x.max(y));
                    assert_eq!(decode(&min).unwrap().value(), x.min(y));
                }
            }
        }
    }

    #[test]
    fn lookup_tables_match_closures() {
        for x in StatePair::all() {
            for y in StatePair::all() {
                assert_eq!(diamond_m(x, y), diamond_m_closure(x, y), "{x} ⋄M {y}");
                assert_eq!(out_m(x, y), out_m_closure(x, y), "outM({x}, {y})");
            }
        }
    }

    #[test]
    fn closures_agree_with_stable_operators() {
        for x in StatePair::stable() {
            for y in StatePair::stable() {
                assert_eq!(diamond_m(x, y), diamond(x, y).unwrap());
                assert_eq!(out_m(x, y), out_op(x, y).unwrap());
            }
        }
    }

    #[test]
    fn diamond_m_examples() {
        assert_eq!(diamond_m(p("00"), p("MM")), p("MM"));
        assert_eq!(diamond_m(p("10"), p("MM")), p("10"));
        assert_eq!(diamond_m(p("00"), p("01")), p("01"));
    }

    #[test]
    fn out_m_examples() {
        assert_eq!(out_m(p("0M"), p("0M")).0, Trit::Meta);
        for g in Trit::ALL {
            for h in Trit::ALL {
                assert_eq!(out_m(p("10"), StatePair(g, h)), StatePair(g, h));
            }
        }
        assert_eq!(out_m(p("00"), p("01")), p("10"));
    }

    #[test]
    fn hat_examples() {
        assert_eq!(hat(p("10")), HatStatePair(Trit::Zero, Trit::Zero));
        assert_eq!(hat(p("0M")).hat(), p("0M"));
        for x in StatePair::all() {
            assert_eq!(x.hat().unhat(), x);
        }
        assert_eq!(hat_diamond_m(hat(p("00")), hat(p("01"))), hat(p("01")));
    }

    #[test]
    fn prefix_state_examples() {
        let z = vw("0M10");
        assert_eq!(prefix_state_oracle(&z, &z, 0), Ok(p("00")));
        assert_eq!(prefix_state_oracle(&z, &z, 2), Ok(p("MM")));
        assert_eq!(
            prefix_state_oracle(&vw("1000"), &vw("0000"), 1),
            Ok(p("10"))
        );
        assert!(prefix_state_oracle(&z, &z, 5).is_err());
        assert!(prefix_state_oracle(&z, &vw("010"), 1).is_err());
    }

    #[test]
    fn bracketing_count_is_catalan() {
        let pairs = vec![StatePair::EQ_EVEN; 5];
        assert_eq!(all_bracketings(&pairs).len(), 14);
    }

    #[test]
    fn closed_diamond_is_order_independent_on_valid_strings() {
        for width in 1..=5 {
            let all = enumerate_valid(width).unwrap();
            for g in &all {
                for h in &all {
                    let pairs = column_pairs(g.word(), h.word());
                    let expected = prefix_state_oracle(g, h, width).unwrap();
                    for got in all_bracketings(&pairs) {
                        assert_eq!(got, expected, "{g} {h}");
                    }
                }
            }
        }
    }

    #[test]
    fn out_m_of_prefix_state_gives_output_bits() {
        for width in 1..=6 {
            let all = enumerate_valid(width).unwrap();
            for g in &all {
                for h in &all {
                    let (max, min) = max_min_oracle(g, h).unwrap();
                    for i in 1..=width {
                        let s = prefix_state_oracle(g, h, i - 1).unwrap();
                        let b = StatePair(g.word().bit(i).unwrap(), h.word().bit(i).unwrap());
                        let o = out_m(s, b);
                        assert_eq!(o.0, max.word().bit(i).unwrap(), "{g} {h} bit {i}");
                        assert_eq!(o.1, min.word().bit(i).unwrap(), "{g} {h} bit {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn hat_fold_tracks_prefix_states() {
        for width in 1..=6 {
            let all = enumerate_valid(width).unwrap();
            for g in &all {
                for h in &all {
                    let mut acc: Option<HatStatePair> = None;
                    for i in 1..=width {
                        let d = StatePair(g.word().bit(i).unwrap(), h.word().bit(i).unwrap()).hat();
                        let next = match acc {
                            None => d,
                            Some(a) => hat_diamond_m(a, d),
                        };
                        assert_eq!(next, prefix_state_oracle(g, h, i).unwrap().hat());
                        acc = Some(next);
                    }
                }
            }
        }
    }
}
