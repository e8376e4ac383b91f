use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcomes below this probability are dropped from a distribution.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// A measured bitstring. Bit `j` is the outcome of the `j`-th MEASZ op.
pub type Bits = u128;

/// Renders `bits` with bit 0 first, e.g. `0b011` over three bits is `"110"`.
pub fn bits_to_string(bits: Bits, len: usize) -> String {
    (0..len).map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses the [`bits_to_string`] form.
pub fn bits_from_str(s: &str) -> Option<Bits> {
    let mut b: Bits = 0;
    for (j, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => b |= 1 << j,
            _ => return None,
        }
    }
    Some(b)
}

/// Exact distribution over measured bitstrings.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    num_bits: usize,
    probs: BTreeMap<Bits, f64>,
}

impl OutcomeDistribution {
    /// Builds from raw weights, dropping entries below [`SUPPORT_THRESHOLD`].
    pub fn from_weights(num_bits: usize, weights: impl IntoIterator<Item = (Bits, f64)>) -> OutcomeDistribution {
        let mut probs = BTreeMap::new();
        for (k, w) in weights {
            *probs.entry(k).or_insert(0.0) += w;
        }
        probs.retain(|_, p| *p > SUPPORT_THRESHOLD);
        OutcomeDistribution { num_bits, probs }
    }

    pub fn deterministic(num_bits: usize, bits: Bits) -> OutcomeDistribution {
        OutcomeDistribution { num_bits, probs: BTreeMap::from([(bits, 1.0)]) }
    }

    /// Parses `{"00": 0.5, "11": 0.5}`-style pairs; handy in tests.
    pub fn from_pairs(pairs: &[(&str, f64)]) -> OutcomeDistribution {
        let num_bits = pairs.first().map_or(0, |(s, _)| s.len());
        OutcomeDistribution::from_weights(
            num_bits,
            pairs.iter().map(|(s, p)| (bits_from_str(s).expect("bitstring"), *p)),
        )
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn get(&self, bits: Bits) -> f64 {
        self.probs.get(&bits).copied().unwrap_or(0.0)
    }

    pub fn prob(&self, s: &str) -> f64 {
        bits_from_str(s).map_or(0.0, |b| self.get(b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bits, f64)> + '_ {
        self.probs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn support(&self) -> impl Iterator<Item = Bits> + '_ {
        self.probs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Divides by the total mass.
    pub fn normalized(&self) -> OutcomeDistribution {
        let t = self.total();
        OutcomeDistribution {
            num_bits: self.num_bits,
            probs: self.probs.iter().map(|(k, v)| (*k, v / t)).collect(),
        }
    }

    /// Marginal over the listed bits, which become bits `0..bits.len()`.
    pub fn marginal(&self, bits: &[usize]) -> OutcomeDistribution {
        OutcomeDistribution::from_weights(
            bits.len(),
            self.iter().map(|(k, p)| (select_bits(k, bits), p)),
        )
    }

    /// Largest per-outcome absolute difference over the union of supports.
    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> f64 {
        let mut d: f64 = 0.0;
        for (k, p) in self.iter() {
            d = d.max((p - other.get(k)).abs());
        }
        for (k, p) in other.iter() {
            d = d.max((p - self.get(k)).abs());
        }
        d
    }

    /// Cumulative table for repeated sampling.
    pub fn sampler(&self) -> Sampler {
        let mut acc = 0.0;
        let mut keys = Vec::with_capacity(self.len());
        let mut cum = Vec::with_capacity(self.len());
        for (k, p) in self.iter() {
            acc += p;
            keys.push(k);
            cum.push(acc);
        }
        Sampler { keys, cum }
    }
}

impl fmt::Display for OutcomeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, p)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {:.6}", bits_to_string(k, self.num_bits), p)?;
        }
        f.write_str("}")
    }
}

/// Gathers the listed bits of `bits` into a packed value.
pub fn select_bits(bits: Bits, which: &[usize]) -> Bits {
    which
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | ((bits >> b & 1) << j))
}

#[derive(Clone, Debug)]
pub struct Sampler {
    keys: Vec<Bits>,
    cum: Vec<f64>,
}

impl Sampler {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Bits {
        let total = *self.cum.last().expect("empty distribution");
        let u = rng.gen::<f64>() * total;
        let i = self.cum.partition_point(|&c| c <= u).min(self.keys.len() - 1);
        self.keys[i]
    }
}

/// Per-shot generator: the stream index makes each shot independent of how
/// shots are scheduled across workers.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}
