use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::code::{compile_with, CompileOptions, EncodedCircuit, Gadget, GadgetMode, ModeOverride};
use crate::error::CodeError;
use crate::passes::align_transversal_h;
use crate::sim::{bits_from_str, Bits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BenchmarkId {
    Bell,
    TransversalBell,
    XxToffoli,
    HhToffoli,
    TransversalToffoli,
}

const BELL: &str = "qubits 2\nh 0\ncx 0 1\nmeasz 0\nmeasz 1\n";
const XX_TOFFOLI: &str = "qubits 3\nx 0\nx 1\nh 2\nccz 0 1 2\nh 2\nmeasz 0\nmeasz 1\nmeasz 2\n";
const HH_TOFFOLI: &str = "qubits 3\nh 0\ncx 0 1\nh 2\nccz 0 1 2\nh 2\nmeasz 0\nmeasz 1\nmeasz 2\n";

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 5] = [
        BenchmarkId::Bell,
        BenchmarkId::TransversalBell,
        BenchmarkId::XxToffoli,
        BenchmarkId::HhToffoli,
        BenchmarkId::TransversalToffoli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkId::Bell => "BELL",
            BenchmarkId::TransversalBell => "TRANSVERSAL_BELL",
            BenchmarkId::XxToffoli => "XX_TOFFOLI",
            BenchmarkId::HhToffoli => "HH_TOFFOLI",
            BenchmarkId::TransversalToffoli => "TRANSVERSAL_TOFFOLI",
        }
    }

    /// The unencoded logical circuit. The transversal variants are the
    /// targeted ones after [`align_transversal_h`].
    pub fn logical(self) -> Circuit {
        let parse = |s: &str| Circuit::parse(s).expect("built-in benchmark parses");
        match self {
            BenchmarkId::Bell => parse(BELL),
            BenchmarkId::XxToffoli => parse(XX_TOFFOLI),
            BenchmarkId::HhToffoli => parse(HH_TOFFOLI),
            BenchmarkId::TransversalBell => align_transversal_h(&parse(BELL)).expect("supported gates"),
            BenchmarkId::TransversalToffoli => align_transversal_h(&parse(HH_TOFFOLI)).expect("supported gates"),
        }
    }

    /// Block size: 2 for the Bell pair, 3 for anything with a CCZ.
    pub fn m(self) -> usize {
        match self {
            BenchmarkId::Bell | BenchmarkId::TransversalBell => 2,
            _ => 3,
        }
    }

    /// Successful logical outcomes, written bit 0 first.
    pub fn success_set(self) -> &'static [&'static str] {
        match self {
            BenchmarkId::Bell | BenchmarkId::TransversalBell => &["00", "11"],
            BenchmarkId::XxToffoli => &["111"],
            BenchmarkId::HhToffoli | BenchmarkId::TransversalToffoli => &["000", "111"],
        }
    }

    pub fn is_success(self, logical: Bits) -> bool {
        self.success_set().iter().any(|s| bits_from_str(s) == Some(logical))
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkId {
    type Err = String;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        BenchmarkId::ALL
            .into_iter()
            .find(|b| b.name() == key)
            .ok_or_else(|| format!("unknown benchmark `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Configuration {
    Unencoded,
    NonFt,
    Ft,
}

impl Configuration {
    pub const ALL: [Configuration; 3] = [Configuration::Unencoded, Configuration::NonFt, Configuration::Ft];

    pub fn as_str(self) -> &'static str {
        match self {
            Configuration::Unencoded => "unencoded",
            Configuration::NonFt => "nonft",
            Configuration::Ft => "ft",
        }
    }

    pub fn mode(self) -> Option<GadgetMode> {
        match self {
            Configuration::Unencoded => None,
            Configuration::NonFt => Some(GadgetMode::NonFt),
            Configuration::Ft => Some(GadgetMode::Ft),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Configuration {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Configuration::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown configuration `{s}` (expected unencoded, nonft or ft)"))
    }
}

/// Which FT gadgets are downgraded in the FT configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Leading targeted H gates of the two targeted Toffoli circuits run
    /// without flags, as on the 36-qubit device.
    #[default]
    PaperFaithful,
    FullFt,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::PaperFaithful => "paper-faithful",
            Preset::FullFt => "full-ft",
        }
    }

    /// Number of leading targeted H gadgets forced to NON_FT.
    pub fn downgraded_h(self, id: BenchmarkId) -> usize {
        match (self, id) {
            (Preset::FullFt, _) => 0,
            (Preset::PaperFaithful, BenchmarkId::XxToffoli) => 1,
            (Preset::PaperFaithful, BenchmarkId::HhToffoli) => 3,
            (Preset::PaperFaithful, _) => 0,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "paper-faithful" => Ok(Preset::PaperFaithful),
            "full-ft" => Ok(Preset::FullFt),
            _ => Err(format!("unknown preset `{s}` (expected paper-faithful or full-ft)")),
        }
    }
}

/// A benchmark in one configuration.
#[derive(Clone, Debug)]
pub enum Built {
    Unencoded(Circuit),
    Encoded(EncodedCircuit),
}

impl Built {
    pub fn circuit(&self) -> &Circuit {
        match self {
            Built::Unencoded(c) => c,
            Built::Encoded(ec) => &ec.circuit,
        }
    }
}

pub fn compile_options(id: BenchmarkId, mode: GadgetMode, preset: Preset) -> CompileOptions {
    let mut options = CompileOptions::new(mode).with_m(id.m());
    if mode == GadgetMode::Ft {
        options.overrides = (0..preset.downgraded_h(id))
            .map(|ordinal| ModeOverride { gadget: Gadget::TargetedH, ordinal, mode: GadgetMode::NonFt })
            .collect();
    }
    options
}

pub fn build_benchmark(id: BenchmarkId, config: Configuration, preset: Preset) -> Result<Built, CodeError> {
    let logical = id.logical();
    match config.mode() {
        None => Ok(Built::Unencoded(logical)),
        Some(mode) => Ok(Built::Encoded(compile_with(&logical, &compile_options(id, mode, preset))?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_distribution;

    #[test]
    fn names_round_trip() {
        for id in BenchmarkId::ALL {
            assert_eq!(id.name().parse::<BenchmarkId>().unwrap(), id);
            assert_eq!(id.name().to_lowercase().replace('_', "-").parse::<BenchmarkId>().unwrap(), id);
        }
        assert!("toffoli".parse::<BenchmarkId>().is_err());
    }

    #[test]
    fn unencoded_outputs_are_successes() {
        for id in BenchmarkId::ALL {
            let d = run_distribution(&id.logical()).unwrap();
            for (bits, p) in d.iter() {
                assert!(id.is_success(bits), "{id}: outcome {bits:b} with p = {p}");
            }
        }
        let xx = run_distribution(&BenchmarkId::XxToffoli.logical()).unwrap();
        assert!((xx.prob("111") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transversal_variants_use_one_marker() {
        assert_eq!(BenchmarkId::TransversalBell.logical().to_text(), "qubits 2\nhtrans\ncz 0 1\nh 1\nmeasz 0\nmeasz 1\n");
        let t = BenchmarkId::TransversalToffoli.logical();
        assert_eq!(t.kind_counts()[&crate::circuit::GateKind::TransversalH], 1);
        assert_eq!(t.kind_counts()[&crate::circuit::GateKind::H], 2);
    }

    #[test]
    fn presets_only_touch_targeted_toffolis() {
        let count = |id, preset| match build_benchmark(id, Configuration::Ft, preset).unwrap() {
            Built::Encoded(ec) => (ec.num_ancillas(), ec.mode),
            Built::Unencoded(_) => unreachable!(),
        };
        assert_eq!(count(BenchmarkId::XxToffoli, Preset::PaperFaithful).1, "mixed");
        assert_eq!(count(BenchmarkId::XxToffoli, Preset::FullFt).1, "ft");
        assert_eq!(count(BenchmarkId::XxToffoli, Preset::FullFt).0 - count(BenchmarkId::XxToffoli, Preset::PaperFaithful).0, 5);
        assert_eq!(count(BenchmarkId::HhToffoli, Preset::FullFt).0 - count(BenchmarkId::HhToffoli, Preset::PaperFaithful).0, 15);
        assert_eq!(count(BenchmarkId::TransversalToffoli, Preset::PaperFaithful), count(BenchmarkId::TransversalToffoli, Preset::FullFt));
    }
}
