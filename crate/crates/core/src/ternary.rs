//! Three-valued signals and their worst-case (metastable closure) semantics.
//!
//! A [`Trit`] is `0`, `1` or `M`. `M` stands for a signal that may resolve to
//! either Boolean value; every operation here treats it as a wild card and
//! keeps only what holds for *all* resolutions.
//!
//! Words are written most significant bit first: `g = g_1 g_2 ... g_B`, so
//! `"0M10"` has `g_1 = 0` and `g_4 = 0`. Bit accessors are 1-indexed to match.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("{op} expects {expected} operand(s), got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid trit character {0:?} (expected '0', '1' or 'M')")]
    BadChar(char),
    #[error("a ternary word needs at least one bit")]
    EmptyWord,
    #[error("cannot superpose an empty set of words")]
    EmptySet,
    #[error("width mismatch: expected {expected} bits, got {got}")]
    Width { expected: usize, got: usize },
    #[error("bit index {index} out of range for a {width}-bit word")]
    Index { index: usize, width: usize },
    #[error("too many metastable bits to enumerate ({0})")]
    TooManyMeta(usize),
}

/// A single signal value: stable `0`, stable `1`, or metastable `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trit {
    Zero,
    One,
    Meta,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Zero, Trit::One, Trit::Meta];

    #[inline]
    pub const fn from_bool(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    #[inline]
    pub const fn to_bool(self) -> Option<bool> {
        match self {
            Trit::Zero => Some(false),
            Trit::One => Some(true),
            Trit::Meta => None,
        }
    }

    #[inline]
    pub const fn is_meta(self) -> bool {
        matches!(self, Trit::Meta)
    }

    pub const fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Meta => 'M',
        }
    }

    /// Dense index used by lookup tables: 0, 1, M -> 0, 1, 2.
    #[inline]
    pub(crate) const fn index(self) -> usize {
        self as usize
    }

    /// Superposition of two values: keeps agreement, otherwise `M`.
    #[inline]
    pub fn merge(self, other: Trit) -> Trit {
        if self == other {
            self
        } else {
            Trit::Meta
        }
    }
}

impl TryFrom<char> for Trit {
    type Error = LogicError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c {
            '0' => Ok(Trit::Zero),
            '1' => Ok(Trit::One),
            'M' => Ok(Trit::Meta),
            other => Err(LogicError::BadChar(other)),
        }
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl Not for Trit {
    type Output = Trit;

    #[inline]
    fn not(self) -> Trit {
        match self {
            Trit::Zero => Trit::One,
            Trit::One => Trit::Zero,
            Trit::Meta => Trit::Meta,
        }
    }
}

impl BitAnd for Trit {
    type Output = Trit;

    #[inline]
    fn bitand(self, rhs: Trit) -> Trit {
        match (self, rhs) {
            (Trit::Zero, _) | (_, Trit::Zero) => Trit::Zero,
            (Trit::One, Trit::One) => Trit::One,
            _ => Trit::Meta,
        }
    }
}

impl BitOr for Trit {
    type Output = Trit;

    #[inline]
    fn bitor(self, rhs: Trit) -> Trit {
        match (self, rhs) {
            (Trit::One, _) | (_, Trit::One) => Trit::One,
            (Trit::Zero, Trit::Zero) => Trit::Zero,
            _ => Trit::Meta,
        }
    }
}

/// The basic gates of the computational model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    Not,
}

impl BoolOp {
    pub const fn arity(self) -> usize {
        match self {
            BoolOp::And | BoolOp::Or => 2,
            BoolOp::Not => 1,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            BoolOp::And => "AND",
            BoolOp::Or => "OR",
            BoolOp::Not => "NOT",
        }
    }

    /// Plain Boolean semantics.
    pub fn eval_bool(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Not => !a,
        }
    }
}

/// Evaluates a gate on ternary inputs. `b` must be present exactly for the
/// two-input gates.
pub fn eval_gate(kind: BoolOp, a: Trit, b: Option<Trit>) -> Result<Trit, LogicError> {
    let got = 1 + usize::from(b.is_some());
    match (kind, b) {
        (BoolOp::And, Some(b)) => Ok(a & b),
        (BoolOp::Or, Some(b)) => Ok(a | b),
        (BoolOp::Not, None) => Ok(!a),
        _ => Err(LogicError::Arity {
            op: kind.name(),
            expected: kind.arity(),
            got,
        }),
    }
}

/// A fixed-width string of trits, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryWord(Vec<Trit>);

impl TernaryWord {
    pub fn new(bits: Vec<Trit>) -> Result<Self, LogicError> {
        if bits.is_empty() {
            return Err(LogicError::EmptyWord);
        }
        Ok(TernaryWord(bits))
    }

    /// Builds a word from Boolean values (MSB first).
    pub fn from_bools(bits: &[bool]) -> Result<Self, LogicError> {
        Self::new(bits.iter().map(|&b| Trit::from_bool(b)).collect())
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn trits(&self) -> &[Trit] {
        &self.0
    }

    pub fn into_trits(self) -> Vec<Trit> {
        self.0
    }

    /// `g_i`, with `i` in `1..=width`.
    pub fn bit(&self, i: usize) -> Result<Trit, LogicError> {
        if i == 0 || i > self.0.len() {
            return Err(LogicError::Index {
                index: i,
                width: self.0.len(),
            });
        }
        Ok(self.0[i - 1])
    }

    /// `g_{i,j} = g_i ... g_j` (1-indexed, inclusive).
    pub fn slice(&self, i: usize, j: usize) -> Result<TernaryWord, LogicError> {
        if i == 0 || i > j || j > self.0.len() {
            return Err(LogicError::Index {
                index: if i == 0 || i > j { i } else { j },
                width: self.0.len(),
            });
        }
        Ok(TernaryWord(self.0[i - 1..j].to_vec()))
    }

    pub fn concat(&self, other: &TernaryWord) -> TernaryWord {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        TernaryWord(bits)
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|t| !t.is_meta())
    }

    pub fn meta_count(&self) -> usize {
        self.0.iter().filter(|t| t.is_meta()).count()
    }

    /// Positionwise superposition `self * other`.
    pub fn superpose_with(&self, other: &TernaryWord) -> Result<TernaryWord, LogicError> {
        if self.width() != other.width() {
            return Err(LogicError::Width {
                expected: self.width(),
                got: other.width(),
            });
        }
        Ok(TernaryWord(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.merge(b))
                .collect(),
        ))
    }

    /// True if `other` is obtained from `self` by resolving some `M` bits.
    pub fn covers(&self, other: &TernaryWord) -> bool {
        self.width() == other.width()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(&a, &b)| a.is_meta() || a == b)
    }
}

impl FromStr for TernaryWord {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(Trit::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        TernaryWord::new(bits)
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{}", t.to_char())?;
        }
        Ok(())
    }
}

impl From<Trit> for TernaryWord {
    fn from(t: Trit) -> Self {
        TernaryWord(vec![t])
    }
}

/// The binary words agreeing with a ternary word on its stable positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionSet {
    words: Vec<TernaryWord>,
}

impl ResolutionSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &TernaryWord) -> bool {
        self.words.contains(w)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TernaryWord> {
        self.words.iter()
    }

    pub fn into_vec(self) -> Vec<TernaryWord> {
        self.words
    }
}

impl<'a> IntoIterator for &'a ResolutionSet {
    type Item = &'a TernaryWord;
    type IntoIter = std::slice::Iter<'a, TernaryWord>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// Lazily enumerates `res(x)`. Resolutions are produced in ascending binary
/// order of the substituted `M` positions (first `M` is the most significant).
#[derive(Debug, Clone)]
pub struct Resolutions {
    template: Vec<Trit>,
    meta_positions: Vec<usize>,
    next: u64,
    end: u64,
}

impl Resolutions {
    pub fn new(x: &TernaryWord) -> Result<Self, LogicError> {
        let meta_positions: Vec<usize> =
            x.0.iter()
                .enumerate()
                .filter(|(_, t)| t.is_meta())
                .map(|(i, _)| i)
                .collect();
        if meta_positions.len() >= 64 {
            return Err(LogicError::TooManyMeta(meta_positions.len()));
        }
        Ok(Resolutions {
            template: x.0.clone(),
            end: 1u64 << meta_positions.len(),
            meta_positions,
            next: 0,
        })
    }
}

impl Iterator for Resolutions {
    type Item = TernaryWord;

    fn next(&mut self) -> Option<TernaryWord> {
        if self.next >= self.end {
            return None;
        }
        let k = self.meta_positions.len();
        let mut bits = self.template.clone();
        for (n, &pos) in self.meta_positions.iter().enumerate() {
            bits[pos] = Trit::from_bool((self.next >> (k - 1 - n)) & 1 == 1);
        }
        self.next += 1;
        Some(TernaryWord(bits))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// `res(x)`: every binary word obtained by replacing each `M` in `x`.
pub fn resolutions(x: &TernaryWord) -> ResolutionSet {
    // Words with 64+ metastable bits cannot be materialised anyway.
    let words = Resolutions::new(x).map(|r| r.collect()).unwrap_or_default();
    ResolutionSet { words }
}

/// Superposition `*S` of a nonempty set of equal-width words.
pub fn superpose<'a, I>(words: I) -> Result<TernaryWord, LogicError>
where
    I: IntoIterator<Item = &'a TernaryWord>,
{
    let mut iter = words.into_iter();
    let first = iter.next().ok_or(LogicError::EmptySet)?;
    iter.try_fold(first.clone(), |acc, w| acc.superpose_with(w))
}

/// Metastable closure of `f` evaluated at `args`: the superposition of `f`
/// over every combination of resolutions of the arguments.
///
/// `f` receives fully binary words, one per argument, in the same order.
/// Enumeration stops early once every output bit is `M`.
pub fn closure_eval<F, E>(mut f: F, args: &[TernaryWord]) -> Result<TernaryWord, E>
where
    F: FnMut(&[TernaryWord]) -> Result<TernaryWord, E>,
    E: From<LogicError>,
{
    let metas: Vec<(usize, usize)> = args
        .iter()
        .enumerate()
        .flat_map(|(a, w)| {
            w.0.iter()
                .enumerate()
                .filter(|(_, t)| t.is_meta())
                .map(move |(i, _)| (a, i))
        })
        .collect();
    if metas.len() >= 64 {
        return Err(LogicError::TooManyMeta(metas.len()).into());
    }

    let mut resolved: Vec<TernaryWord> = args.to_vec();
    let mut acc: Option<TernaryWord> = None;
    let k = metas.len();
    for mask in 0..(1u64 << k) {
        for (n, &(a, i)) in metas.iter().enumerate() {
            resolved[a].0[i] = Trit::from_bool((mask >> (k - 1 - n)) & 1 == 1);
        }
        let y = f(&resolved)?;
        let merged = match acc {
            None => y,
            Some(prev) => prev.superpose_with(&y)?,
        };
        let saturated = merged.0.iter().all(|t| t.is_meta());
        acc = Some(merged);
        if saturated {
            break;
        }
    }
    Ok(acc.expect("at least one resolution is always evaluated"))
}
