//! Binary reflected Gray code and valid strings.
//!
//! A valid string of width `B` is either a codeword `rg_B(x)` or the
//! superposition `rg_B(x) * rg_B(x+1)` of two consecutive codewords. Valid
//! strings are totally ordered by their *rank*: `2x` for `rg_B(x)` and `2x+1`
//! for the superposition that sits between `x` and `x+1`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::ternary::{closure_eval, LogicError, TernaryWord, Trit};

/// Widest word accepted anywhere in the crate; ranks stay within `u64`.
pub const MAX_WIDTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrayError {
    #[error("width {0} outside supported range 1..={MAX_WIDTH}")]
    Width(usize),
    #[error("value {value} does not fit in {width} bits")]
    Range { value: u64, width: usize },
    #[error("rank {rank} out of range for width {width}")]
    Rank { rank: u64, width: usize },
    #[error("metastable bit at position {0} where a stable bit is required")]
    Metastable(usize),
    #[error("{0} is not a valid string")]
    Invalid(TernaryWord),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

pub(crate) fn check_width(width: usize) -> Result<(), GrayError> {
    if width == 0 || width > MAX_WIDTH {
        Err(GrayError::Width(width))
    } else {
        Ok(())
    }
}

/// An integer `x` in `[0, 2^B)` together with its width `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeValue {
    value: u64,
    width: usize,
}

impl CodeValue {
    pub fn new(value: u64, width: usize) -> Result<Self, GrayError> {
        check_width(width)?;
        if value >> width != 0 {
            return Err(GrayError::Range { value, width });
        }
        Ok(CodeValue { value, width })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> usize {
        self.width
    }
}

/// `rg_B(x)`.
pub fn encode(x: CodeValue) -> TernaryWord {
    let g = x.value ^ (x.value >> 1);
    let bits = (0..x.width)
        .rev()
        .map(|i| Trit::from_bool((g >> i) & 1 == 1))
        .collect();
    TernaryWord::new(bits).expect("width checked by CodeValue")
}

/// `<g>`: decodes a stable codeword, MSB first, using
/// `<g> = 2 * <g_{1,B-1}> + XOR(par(g_{1,B-1}), g_B)`.
pub fn decode(g: &TernaryWord) -> Result<CodeValue, GrayError> {
    check_width(g.width())?;
    let mut value = 0u64;
    let mut parity = false;
    for (i, t) in g.trits().iter().enumerate() {
        let bit = t.to_bool().ok_or(GrayError::Metastable(i + 1))?;
        parity ^= bit;
        value = 2 * value + u64::from(parity);
    }
    CodeValue::new(value, g.width())
}

/// `par(g_{1,len})`; the empty prefix has parity 0.
pub fn parity(g: &TernaryWord, prefix_len: usize) -> Result<bool, GrayError> {
    if prefix_len > g.width() {
        return Err(LogicError::Index {
            index: prefix_len,
            width: g.width(),
        }
        .into());
    }
    g.trits()[..prefix_len]
        .iter()
        .enumerate()
        .try_fold(false, |acc, (i, t)| {
            t.to_bool()
                .map(|b| acc ^ b)
                .ok_or(GrayError::Metastable(i + 1))
        })
}

/// A word certified to be a valid string, with its position in the total order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValidGrayWord {
    word: TernaryWord,
    rank: u64,
}

impl ValidGrayWord {
    /// Certifies `word`, failing if it is not a valid string.
    pub fn new(word: TernaryWord) -> Result<Self, GrayError> {
        match is_valid(&word) {
            Some(rank) => Ok(ValidGrayWord { word, rank }),
            None => {
                check_width(word.width())?;
                Err(GrayError::Invalid(word))
            }
        }
    }

    /// The valid string of the given width at position `rank`.
    pub fn from_rank(width: usize, rank: u64) -> Result<Self, GrayError> {
        check_width(width)?;
        let max_rank = (1u64 << (width + 1)) - 2;
        if rank > max_rank {
            return Err(GrayError::Rank { rank, width });
        }
        let x = rank / 2;
        let lo = encode(CodeValue::new(x, width)?);
        let word = if rank.is_multiple_of(2) {
            lo
        } else {
            lo.superpose_with(&encode(CodeValue::new(x + 1, width)?))?
        };
        Ok(ValidGrayWord { word, rank })
    }

    pub fn word(&self) -> &TernaryWord {
        &self.word
    }

    pub fn into_word(self) -> TernaryWord {
        self.word
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn width(&self) -> usize {
        self.word.width()
    }

    /// Number of valid strings of width `width`: `2^{B+1} - 1`.
    pub fn count(width: usize) -> Result<u64, GrayError> {
        check_width(width)?;
        Ok((1u64 << (width + 1)) - 1)
    }
}

impl PartialOrd for ValidGrayWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValidGrayWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl fmt::Display for ValidGrayWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// All valid strings of width `width`, in ascending rank order.
pub fn enumerate_valid(width: usize) -> Result<Vec<ValidGrayWord>, GrayError> {
    let count = ValidGrayWord::count(width)?;
    (0..count)
        .map(|rank| ValidGrayWord::from_rank(width, rank))
        .collect()
}

/// Returns the rank of `w` if it is a valid string, `None` otherwise.
///
/// Runs in `O(B)`: a valid string has at most one `M`, and resolving it must
/// yield two codewords with adjacent values.
pub fn is_valid(w: &TernaryWord) -> Option<u64> {
    if w.width() == 0 || w.width() > MAX_WIDTH {
        return None;
    }
    let mut metas = w
        .trits()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_meta())
        .map(|(i, _)| i);
    match (metas.next(), metas.next()) {
        (None, _) => decode(w).ok().map(|x| 2 * x.value()),
        (Some(pos), None) => {
            let mut bits = w.trits().to_vec();
            bits[pos] = Trit::Zero;
            let a = decode(&TernaryWord::new(bits.clone()).ok()?).ok()?.value();
            bits[pos] = Trit::One;
            let b = decode(&TernaryWord::new(bits).ok()?).ok()?.value();
            (a.abs_diff(b) == 1).then(|| 2 * a.min(b) + 1)
        }
        _ => None,
    }
}

/// `(max^rg_M{g,h}, min^rg_M{g,h})`, computed as the metastable closure of
/// the stable Gray code max/min.
pub fn max_min_oracle(
    g: &ValidGrayWord,
    h: &ValidGrayWord,
) -> Result<(ValidGrayWord, ValidGrayWord), GrayError> {
    let width = g.width();
    if h.width() != width {
        return Err(GrayError::WidthMismatch(width, h.width()));
    }
    let joined = closure_eval(
        |args: &[TernaryWord]| {
            let (x, y) = (&args[0], &args[1]);
            let (hi, lo) = if decode(x)?.value() >= decode(y)?.value() {
                (x, y)
            } else {
                (y, x)
            };
            Ok::<_, GrayError>(hi.concat(lo))
        },
        &[g.word.clone(), h.word.clone()],
    )?;
    let max = ValidGrayWord::new(joined.slice(1, width)?)?;
    let min = ValidGrayWord::new(joined.slice(width + 1, 2 * width)?)?;
    Ok((max, min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TernaryWord {
        s.parse().unwrap()
    }

    fn v(s: &str) -> ValidGrayWord {
        ValidGrayWord::new(w(s)).unwrap()
    }

    /// The reflection recursion, written out directly.
    fn rg(x: u64, width: usize) -> String {
        if width == 1 {
            return x.to_string();
        }
        let half = 1u64 << (width - 1);
        if x < half {
            format!("0{}", rg(x, width - 1))
        } else {
            format!("1{}", rg((1u64 << width) - 1 - x, width - 1))
        }
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(CodeValue::new(3, 4).unwrap()), w("0010"));
        assert_eq!(encode(CodeValue::new(0, 1).unwrap()), w("0"));
        assert_eq!(encode(CodeValue::new(12, 4).unwrap()), w("1010"));
        assert!(CodeValue::new(16, 4).is_err());
        assert!(CodeValue::new(0, 0).is_err());
        assert!(CodeValue::new(0, 33).is_err());
    }

    #[test]
    fn encode_matches_reflection_recursion() {
        for width in 1..=10 {
            for x in 0..(1u64 << width) {
                let got = encode(CodeValue::new(x, width).unwrap());
                assert_eq!(got.to_string(), rg(x, width));
            }
        }
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&w("1100")).unwrap().value(), 8);
        assert_eq!(decode(&w("0")).unwrap().value(), 0);
        assert_eq!(decode(&w("1000")).unwrap().value(), 15);
        assert_eq!(decode(&w("0M10")), Err(GrayError::Metastable(2)));
    }

    #[test]
    fn four_bit_table() {
        let table = [
            "0000", "0001", "0011", "0010", "0110", "0111", "0101", "0100", "1100", "1101", "1111",
            "1110", "1010", "1011", "1001", "1000",
        ];
        for (x, s) in table.iter().enumerate() {
            assert_eq!(encode(CodeValue::new(x as u64, 4).unwrap()).to_string(), *s);
        }
    }

    #[test]
    fn decode_inverts_encode() {
        for width in 1..=16 {
            for x in 0..(1u64 << width) {
                let c = CodeValue::new(x, width).unwrap();
                assert_eq!(decode(&encode(c)).unwrap(), c);
            }
        }
        // Spot checks at the top of the range.
        for x in [0, 1, u32::MAX as u64 - 1, u32::MAX as u64] {
            let c = CodeValue::new(x, 32).unwrap();
            assert_eq!(decode(&encode(c)).unwrap(), c);
        }
    }

    #[test]
    fn adjacent_codewords_differ_in_one_bit() {
        for width in 1..=12 {
            for x in 0..(1u64 << width) - 1 {
                let a = encode(CodeValue::new(x, width).unwrap());
                let b = encode(CodeValue::new(x + 1, width).unwrap());
                let diff = a
                    .trits()
                    .iter()
                    .zip(b.trits())
                    .filter(|(p, q)| p != q)
                    .count();
                assert_eq!(diff, 1, "rg({x}) vs rg({})", x + 1);
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&w("0110"), 4), Ok(false));
        assert_eq!(parity(&w("0110"), 2), Ok(true));
        assert_eq!(parity(&w("MMMM"), 0), Ok(false));
        assert_eq!(parity(&w("1M"), 2), Err(GrayError::Metastable(2)));
        assert_eq!(parity(&w("1M"), 1), Ok(true));
        assert!(parity(&w("1"), 2).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let four = enumerate_valid(4).unwrap();
        assert_eq!(four.len(), 31);
        assert_eq!(four[2].word(), &w("0001"));
        assert_eq!(four[7].word(), &w("0M10"));
        let one: Vec<String> = enumerate_valid(1)
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(one, ["0", "M", "1"]);
        for width in 1..=10 {
            let all = enumerate_valid(width).unwrap();
            assert_eq!(all.len() as u64, (1u64 << (width + 1)) - 1);
            for (r, g) in all.iter().enumerate() {
                assert_eq!(g.rank(), r as u64);
                assert!(g.word().meta_count() <= 1);
            }
        }
    }

    #[test]
    fn valid_input_table_order() {
        let expected = [
            "0000", "000M", "0001", "00M1", "0011", "001M", "0010", "0M10", "0110", "011M", "0111",
            "01M1", "0101", "010M", "0100", "M100", "1100", "110M", "1101", "11M1", "1111", "111M",
            "1110", "1M10", "1010", "101M", "1011", "10M1", "1001", "100M", "1000",
        ];
        let got: Vec<String> = enumerate_valid(4)
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(got, expected);
    }

    /// Membership by brute force: is `w` one of the enumerated strings?
    fn valid_by_enumeration(word: &TernaryWord) -> Option<u64> {
        enumerate_valid(word.width())
            .unwrap()
            .into_iter()
            .find(|g| g.word() == word)
            .map(|g| g.rank())
    }

    #[test]
    fn is_valid_examples() {
        assert_eq!(is_valid(&w("0M10")), Some(7));
        assert_eq!(is_valid(&w("00M1")), Some(3));
        assert_eq!(is_valid(&w("MM")), None);
        assert_eq!(valid_by_enumeration(&w("MM")), None);
        assert_eq!(is_valid(&w("M000")), None);
    }

    #[test]
    fn structural_validity_matches_enumeration() {
        for width in 1..=6u32 {
            for code in 0..3u32.pow(width) {
                let mut c = code;
                let bits = (0..width)
                    .map(|_| {
                        let t = Trit::ALL[(c % 3) as usize];
                        c /= 3;
                        t
                    })
                    .collect();
                let word = TernaryWord::new(bits).unwrap();
                assert_eq!(is_valid(&word), valid_by_enumeration(&word), "{word}");
            }
        }
    }

    #[test]
    fn substrings_of_valid_strings_are_valid() {
        for width in 1..=8 {
            for g in enumerate_valid(width).unwrap() {
                for i in 1..=width {
                    for j in i..=width {
                        let sub = g.word().slice(i, j).unwrap();
                        assert!(is_valid(&sub).is_some(), "{g} [{i},{j}] -> {sub}");
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(max_min_oracle(&v("1001"), &v("1000")).unwrap().0, v("1000"));
        assert_eq!(max_min_oracle(&v("0M10"), &v("0010")).unwrap().0, v("0M10"));
        assert_eq!(max_min_oracle(&v("0M10"), &v("0110")).unwrap().0, v("0110"));
        assert_eq!(max_min_oracle(&v("0M10"), &v("0110")).unwrap().1, v("0M10"));
        assert_eq!(
            max_min_oracle(&v("01"), &v("011")),
            Err(GrayError::WidthMismatch(2, 3))
        );
        assert!(ValidGrayWord::new(w("MM")).is_err());
    }

    #[test]
    fn oracle_is_max_and_min_of_the_total_order() {
        for width in 1..=6 {
            let all = enumerate_valid(width).unwrap();
            for g in &all {
                for h in &all {
                    let (max, min) = max_min_oracle(g, h).unwrap();
                    let (hi, lo) = if g.rank() >= h.rank() { (g, h) } else { (h, g) };
                    assert_eq!((&max, &min), (hi, lo), "{g} {h}");
                }
            }
        }
    }

    #[test]
    fn from_rank_rejects_out_of_range() {
        assert!(ValidGrayWord::from_rank(2, 6).is_ok());
        assert_eq!(
            ValidGrayWord::from_rank(2, 7),
            Err(GrayError::Rank { rank: 7, width: 2 })
        );
    }
}
