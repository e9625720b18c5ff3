//! Comparator schedules and `n`-channel sorters built from `2-sort(B)`.
//!
//! Networks are descending by default: comparator `(i, j)` with `i < j`
//! routes the maximum to channel `i`, so channel 0 ends with the largest
//! rank.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gray::{GrayError, ValidGrayWord};
use crate::netlist::{Netlist, NetlistBuilder};
use crate::synth::{build_two_sort, input_name, SynthError};

/// Largest channel count accepted by [`validate_schedule`].
pub const MAX_VALIDATE_CHANNELS: usize = 20;
/// Largest channel count of any schedule.
pub const MAX_CHANNELS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("schedule has {0} channels; between 1 and {MAX_CHANNELS} supported")]
    Channels(usize),
    #[error("comparator ({0}, {1}) must satisfy i < j < channels")]
    Comparator(usize, usize),
    #[error("channel {channel} is used twice in layer {layer}")]
    Overlap { layer: usize, channel: usize },
    #[error("zero-one validation supports at most {MAX_VALIDATE_CHANNELS} channels, got {0}")]
    TooLargeToValidate(usize),
    #[error("malformed schedule document at {location}: {message}")]
    Format { location: String, message: String },
    #[error("unknown network variant {0:?}")]
    UnknownVariant(String),
    #[error("expected {expected} words, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Gray(#[from] GrayError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparatorSchedule {
    channels: usize,
    layers: Vec<Vec<(usize, usize)>>,
}

impl ComparatorSchedule {
    pub fn new(channels: usize, layers: Vec<Vec<(usize, usize)>>) -> Result<Self, NetworkError> {
        if channels == 0 || channels > MAX_CHANNELS {
            return Err(NetworkError::Channels(channels));
        }
        for (l, layer) in layers.iter().enumerate() {
            let mut used = vec![false; channels];
            for &(i, j) in layer {
                if i >= j || j >= channels {
                    return Err(NetworkError::Comparator(i, j));
                }
                for c in [i, j] {
                    if std::mem::replace(&mut used[c], true) {
                        return Err(NetworkError::Overlap {
                            layer: l,
                            channel: c,
                        });
                    }
                }
            }
        }
        Ok(ComparatorSchedule { channels, layers })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn layers(&self) -> &[Vec<(usize, usize)>] {
        &self.layers
    }

    pub fn comparators(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn comparator_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Copy with the `k`-th comparator (in schedule order) removed.
    pub fn without_comparator(&self, k: usize) -> ComparatorSchedule {
        let mut seen = 0;
        let layers = self
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .copied()
                    .filter(|_| {
                        seen += 1;
                        seen - 1 != k
                    })
                    .collect()
            })
            .collect();
        ComparatorSchedule {
            channels: self.channels,
            layers,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let raw: ComparatorSchedule =
            serde_json::from_str(text).map_err(|e| NetworkError::Format {
                location: format!("line {}, column {}", e.line(), e.column()),
                message: e.to_string(),
            })?;
        ComparatorSchedule::new(raw.channels, raw.layers).map_err(|e| NetworkError::Format {
            location: "layers".into(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetworkVariant {
    Sort4,
    Sort7,
    /// 10 channels, fewest comparators.
    Sort10Size,
    /// 10 channels, fewest layers.
    Sort10Depth,
    /// Batcher's odd-even mergesort on any channel count (extension).
    Batcher(usize),
}

impl NetworkVariant {
    /// Variant for a channel count and `size`/`depth` preference, falling
    /// back to Batcher's network for counts without a stored schedule.
    pub fn for_channels(channels: usize, depth_optimal: bool) -> NetworkVariant {
        match (channels, depth_optimal) {
            (4, _) => NetworkVariant::Sort4,
            (7, _) => NetworkVariant::Sort7,
            (10, false) => NetworkVariant::Sort10Size,
            (10, true) => NetworkVariant::Sort10Depth,
            (n, _) => NetworkVariant::Batcher(n),
        }
    }
}

impl fmt::Display for NetworkVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkVariant::Sort4 => f.write_str("SORT4"),
            NetworkVariant::Sort7 => f.write_str("SORT7"),
            NetworkVariant::Sort10Size => f.write_str("SORT10_SIZE"),
            NetworkVariant::Sort10Depth => f.write_str("SORT10_DEPTH"),
            NetworkVariant::Batcher(n) => write!(f, "BATCHER({n})"),
        }
    }
}

impl FromStr for NetworkVariant {
    type Err = NetworkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        match upper.as_str() {
            "SORT4" => Ok(NetworkVariant::Sort4),
            "SORT7" => Ok(NetworkVariant::Sort7),
            "SORT10_SIZE" => Ok(NetworkVariant::Sort10Size),
            "SORT10_DEPTH" => Ok(NetworkVariant::Sort10Depth),
            _ => upper
                .strip_prefix("BATCHER(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|n| n.parse().ok())
                .map(NetworkVariant::Batcher)
                .ok_or_else(|| NetworkError::UnknownVariant(s.to_string())),
        }
    }
}

const SORT4: &[&[(usize, usize)]] = &[&[(0, 1), (2, 3)], &[(0, 2), (1, 3)], &[(1, 2)]];

const SORT7: &[&[(usize, usize)]] = &[
    &[(0, 6), (2, 3), (4, 5)],
    &[(0, 2), (1, 4), (3, 6)],
    &[(0, 1), (2, 5), (3, 4)],
    &[(1, 2), (4, 6)],
    &[(2, 3), (4, 5)],
    &[(1, 2), (3, 4), (5, 6)],
];

const SORT10_SIZE: &[&[(usize, usize)]] = &[
    &[(0, 8), (1, 9), (2, 7), (3, 5), (4, 6)],
    &[(0, 2), (1, 4), (5, 8), (7, 9)],
    &[(0, 3), (2, 4), (5, 7), (6, 9)],
    &[(0, 1), (3, 6), (8, 9)],
    &[(1, 5), (2, 3), (4, 8), (6, 7)],
    &[(1, 2), (3, 5), (4, 6), (7, 8)],
    &[(2, 3), (4, 5), (6, 7)],
    &[(3, 4), (5, 6)],
];

const SORT10_DEPTH: &[&[(usize, usize)]] = &[
    &[(0, 1), (2, 5), (3, 6), (4, 7), (8, 9)],
    &[(0, 6), (1, 8), (2, 4), (3, 9), (5, 7)],
    &[(0, 2), (1, 3), (4, 5), (6, 8), (7, 9)],
    &[(0, 1), (2, 7), (3, 5), (4, 6), (8, 9)],
    &[(1, 2), (3, 4), (5, 6), (7, 8)],
    &[(1, 3), (2, 4), (5, 7), (6, 8)],
    &[(2, 3), (4, 5), (6, 7)],
];

fn from_table(channels: usize, table: &[&[(usize, usize)]]) -> ComparatorSchedule {
    ComparatorSchedule::new(channels, table.iter().map(|l| l.to_vec()).collect())
        .expect("stored schedules are well formed")
}

/// Odd-even mergesort for the next power of two, with comparators touching
/// channels `>= n` dropped. Those would only ever move padding.
pub fn batcher_schedule(n: usize) -> Result<ComparatorSchedule, NetworkError> {
    if n == 0 || n > MAX_CHANNELS {
        return Err(NetworkError::Channels(n));
    }
    let size = n.next_power_of_two();
    let mut layers = Vec::new();
    let mut p = 1;
    while p < size {
        let mut k = p;
        while k >= 1 {
            let mut layer = Vec::new();
            let mut j = k % p;
            while j + k < size {
                for i in 0..k.min(size - j - k) {
                    let (a, b) = (i + j, i + j + k);
                    if a / (2 * p) == b / (2 * p) && b < n {
                        layer.push((a, b));
                    }
                }
                j += 2 * k;
            }
            if !layer.is_empty() {
                layers.push(layer);
            }
            k /= 2;
        }
        p *= 2;
    }
    ComparatorSchedule::new(n, layers)
}

pub fn builtin_schedule(v: NetworkVariant) -> Result<ComparatorSchedule, NetworkError> {
    Ok(match v {
        NetworkVariant::Sort4 => from_table(4, SORT4),
        NetworkVariant::Sort7 => from_table(7, SORT7),
        NetworkVariant::Sort10Size => from_table(10, SORT10_SIZE),
        NetworkVariant::Sort10Depth => from_table(10, SORT10_DEPTH),
        NetworkVariant::Batcher(n) => batcher_schedule(n)?,
    })
}

/// Zero-one principle: the schedule sorts everything iff it sorts all `2^n`
/// binary vectors.
pub fn validate_schedule(s: &ComparatorSchedule) -> Result<bool, NetworkError> {
    let n = s.channels();
    if n > MAX_VALIDATE_CHANNELS {
        return Err(NetworkError::TooLargeToValidate(n));
    }
    let comps: Vec<(usize, usize)> = s.comparators().collect();
    // Bit c of a vector is channel c; descending means ones occupy the low
    // channels.
    Ok((0u32..1 << n).all(|mut v| {
        for &(i, j) in &comps {
            let (bi, bj) = (v >> i & 1, v >> j & 1);
            if bi < bj {
                v ^= (1 << i) | (1 << j);
            }
        }
        v & (v + 1) == 0
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Maximum to the lower channel.
    #[default]
    Descending,
    Ascending,
}

pub fn channel_port(prefix: &str, channel: usize, bit: usize) -> String {
    input_name(&format!("{prefix}{channel}"), bit)
}

/// One `2-sort(B)` per comparator. Inputs `in{c}_{i}`, outputs `out{c}_{i}`
/// for channel `c` (from 0) and bit `i` (from 1).
pub fn build_schedule_sort(
    s: &ComparatorSchedule,
    width: usize,
    orientation: Orientation,
) -> Result<Netlist, NetworkError> {
    let comparator = build_two_sort(width)?;
    let mut nb = NetlistBuilder::new(format!("sort_{}x{}", s.channels(), width));
    let mut wires: Vec<Vec<String>> = (0..s.channels())
        .map(|c| {
            (1..=width)
                .map(|i| nb.input(channel_port("in", c, i)))
                .collect()
        })
        .collect();
    for (i, j) in s.comparators() {
        let mut bind = HashMap::new();
        for k in 1..=width {
            bind.insert(input_name("g", k), wires[i][k - 1].clone());
            bind.insert(input_name("h", k), wires[j][k - 1].clone());
        }
        let out = nb
            .instantiate(&comparator, &bind)
            .expect("comparator ports are bound");
        let (hi, lo) = match orientation {
            Orientation::Descending => (i, j),
            Orientation::Ascending => (j, i),
        };
        for k in 1..=width {
            wires[hi][k - 1] = out[&input_name("max", k)].clone();
            wires[lo][k - 1] = out[&input_name("min", k)].clone();
        }
    }
    for (c, bits) in wires.iter().enumerate() {
        for (k, s) in bits.iter().enumerate() {
            nb.output(channel_port("out", c, k + 1), s);
        }
    }
    Ok(nb.finish().expect("generated netlist is well formed"))
}

pub fn build_n_sort(v: NetworkVariant, width: usize) -> Result<Netlist, NetworkError> {
    build_schedule_sort(&builtin_schedule(v)?, width, Orientation::Descending)
}

/// Reference result of a descending network: stable sort by rank, largest first.
pub fn oracle_sort_valid(inputs: &[ValidGrayWord]) -> Result<Vec<ValidGrayWord>, NetworkError> {
    if let Some(first) = inputs.first() {
        if let Some(bad) = inputs.iter().find(|w| w.width() != first.width()) {
            return Err(GrayError::WidthMismatch(first.width(), bad.width()).into());
        }
    }
    let mut out = inputs.to_vec();
    out.sort_by_key(|w| std::cmp::Reverse(w.rank()));
    Ok(out)
}
