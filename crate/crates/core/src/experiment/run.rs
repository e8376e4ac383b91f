use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::benchmark::{build_benchmark, BenchmarkId, Built, Configuration, Preset};
use crate::code::EncodedCircuit;
use crate::error::FaultError;
use crate::noise::{fault_sites, sample_insertions, FaultSite, NoiseModel};
use crate::sim::{shot_rng, Bits, Insertion, OutcomeDistribution, Program};

/// Shots per run, as on the device.
pub const DEFAULT_SHOTS: usize = 2056;
/// Independent runs (seeds) per experiment.
pub const DEFAULT_RUNS: usize = 3;

/// How the numbers were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSpec {
    pub shots: usize,
    pub seed: u64,
    /// Exact up to one fault instead of sampled.
    pub exact: bool,
}

impl RunSpec {
    pub fn sampled(shots: usize, seed: u64) -> RunSpec {
        RunSpec { shots, seed, exact: false }
    }

    pub fn exact() -> RunSpec {
        RunSpec { shots: 0, seed: 0, exact: true }
    }
}

/// One row of a results table. Field order is the export order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub benchmark: BenchmarkId,
    pub configuration: Configuration,
    pub preset: Preset,
    /// 1-based run number within an experiment.
    pub run: usize,
    pub shots: usize,
    pub seed: u64,
    pub exact: bool,
    pub noise: NoiseModel,
    /// Success fraction of the unencoded circuit under the same noise.
    pub unencoded_fidelity: f64,
    /// Success fraction over accepted shots; equals the baseline for
    /// unencoded rows, 0 when nothing was accepted.
    pub encoded_fidelity: f64,
    pub rejection_rate: f64,
    /// Exact mode: probability of two or more faults, which the numbers
    /// leave out. 0 when sampled.
    pub remainder: f64,
    pub above_break_even: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Rejected,
    Success,
    Failure,
}

/// A circuit plus how to judge its measured bits.
struct Target<'a> {
    program: Program,
    sites: Vec<FaultSite>,
    id: BenchmarkId,
    decoder: Option<&'a EncodedCircuit>,
}

impl Target<'_> {
    fn judge(&self, bits: Bits) -> Verdict {
        let logical = match self.decoder {
            None => bits,
            Some(ec) => {
                let shot = ec.decode_shot(bits);
                if !shot.accepted {
                    return Verdict::Rejected;
                }
                shot.logical
            }
        };
        if self.id.is_success(logical) {
            Verdict::Success
        } else {
            Verdict::Failure
        }
    }
}

/// Probability (or count) mass by verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Tally {
    success: f64,
    failure: f64,
    rejected: f64,
}

impl Tally {
    fn add(&mut self, v: Verdict, w: f64) {
        match v {
            Verdict::Success => self.success += w,
            Verdict::Failure => self.failure += w,
            Verdict::Rejected => self.rejected += w,
        }
    }

    fn add_dist(&mut self, target: &Target, dist: &OutcomeDistribution, weight: f64) {
        for (bits, p) in dist.iter() {
            self.add(target.judge(bits), weight * p);
        }
    }

    fn fidelity(&self) -> f64 {
        let accepted = self.success + self.failure;
        if accepted > 0.0 {
            self.success / accepted
        } else {
            0.0
        }
    }

    fn rejection(&self) -> f64 {
        let total = self.success + self.failure + self.rejected;
        if total > 0.0 {
            self.rejected / total
        } else {
            0.0
        }
    }
}

/// Every shot draws its fault pattern and then its outcome from its own
/// stream, so the tally does not depend on scheduling. Shots with the same
/// pattern share one exact simulation.
fn sample(target: &Target, shots: usize, seed: u64) -> Tally {
    let patterns: Vec<Vec<Insertion>> = (0..shots)
        .into_par_iter()
        .map(|i| sample_insertions(&target.sites, &mut shot_rng(seed, i as u64)))
        .collect();
    let mut groups: BTreeMap<&[Insertion], Vec<usize>> = BTreeMap::new();
    for (i, p) in patterns.iter().enumerate() {
        groups.entry(p.as_slice()).or_default().push(i);
    }
    let groups: Vec<_> = groups.into_iter().collect();
    let counts: Vec<[usize; 3]> = groups
        .par_iter()
        .map(|(pattern, shots)| {
            let sampler = target.program.run::<f64>(pattern).sampler();
            let mut c = [0usize; 3];
            for &i in shots {
                let mut rng = shot_rng(seed, i as u64);
                sample_insertions(&target.sites, &mut rng);
                c[target.judge(sampler.sample(&mut rng)) as usize] += 1;
            }
            c
        })
        .collect();
    let mut tally = Tally::default();
    for c in counts {
        tally.rejected += c[Verdict::Rejected as usize] as f64;
        tally.success += c[Verdict::Success as usize] as f64;
        tally.failure += c[Verdict::Failure as usize] as f64;
    }
    tally
}

/// Exact tally over the fault-free pattern and every single-fault pattern;
/// also returns the probability mass of everything else.
fn exact(target: &Target) -> (Tally, f64) {
    let sites: Vec<&FaultSite> = target.sites.iter().filter(|s| s.rate > 0.0).collect();
    // others[s] = product of (1 - p) over every site but s
    let mut others = vec![1.0; sites.len()];
    let mut acc = 1.0;
    for (s, site) in sites.iter().enumerate() {
        others[s] = acc;
        acc *= 1.0 - site.rate;
    }
    let none = acc;
    acc = 1.0;
    for (s, site) in sites.iter().enumerate().rev() {
        others[s] *= acc;
        acc *= 1.0 - site.rate;
    }

    let mut faults = Vec::new();
    let mut weights = Vec::new();
    for (s, site) in sites.iter().enumerate() {
        let w = others[s] * site.rate / site.alternatives.len() as f64;
        for alt in &site.alternatives {
            faults.push(alt.insertions());
            weights.push(w);
        }
    }
    let mut tally = Tally::default();
    tally.add_dist(target, &target.program.run::<f64>(&[]), none);
    let dists = target.program.run_each::<f64>(&faults);
    for (d, &w) in dists.iter().zip(&weights) {
        tally.add_dist(target, d, w);
    }
    let covered = none + sites.iter().enumerate().map(|(s, site)| others[s] * site.rate).sum::<f64>();
    (tally, (1.0 - covered).max(0.0))
}

fn measure(target: &Target, spec: RunSpec) -> (Tally, f64) {
    if spec.exact {
        exact(target)
    } else {
        (sample(target, spec.shots, spec.seed), 0.0)
    }
}

fn target<'a>(built: &'a Built, id: BenchmarkId, nm: &NoiseModel) -> Result<Target<'a>, FaultError> {
    let circuit = built.circuit();
    Ok(Target {
        program: Program::compile(circuit)?,
        sites: fault_sites(circuit, nm),
        id,
        decoder: match built {
            Built::Unencoded(_) => None,
            Built::Encoded(ec) => Some(ec),
        },
    })
}

fn check_spec(spec: RunSpec) -> Result<(), FaultError> {
    if !spec.exact && spec.shots == 0 {
        return Err(FaultError::NoShots);
    }
    Ok(())
}

/// Fidelity of the unencoded circuit, the baseline for every row.
fn baseline(id: BenchmarkId, nm: &NoiseModel, spec: RunSpec) -> Result<(f64, f64), FaultError> {
    let built = build_benchmark(id, Configuration::Unencoded, Preset::default())?;
    let (tally, remainder) = measure(&target(&built, id, nm)?, spec);
    Ok((tally.fidelity(), remainder))
}

fn report_with_baseline(
    id: BenchmarkId,
    config: Configuration,
    preset: Preset,
    nm: &NoiseModel,
    spec: RunSpec,
    run: usize,
    (unencoded_fidelity, base_remainder): (f64, f64),
) -> Result<ExperimentReport, FaultError> {
    let (encoded_fidelity, rejection_rate, remainder) = if config == Configuration::Unencoded {
        (unencoded_fidelity, 0.0, base_remainder)
    } else {
        let built = build_benchmark(id, config, preset)?;
        let (tally, remainder) = measure(&target(&built, id, nm)?, spec);
        (tally.fidelity(), tally.rejection(), remainder)
    };
    Ok(ExperimentReport {
        benchmark: id,
        configuration: config,
        preset,
        run,
        shots: spec.shots,
        seed: spec.seed,
        exact: spec.exact,
        noise: *nm,
        unencoded_fidelity,
        encoded_fidelity,
        rejection_rate,
        remainder,
        above_break_even: config != Configuration::Unencoded && encoded_fidelity > unencoded_fidelity,
    })
}

/// Runs one benchmark in one configuration under `nm`.
pub fn run_experiment(
    id: BenchmarkId,
    config: Configuration,
    preset: Preset,
    nm: &NoiseModel,
    spec: RunSpec,
    run: usize,
) -> Result<ExperimentReport, FaultError> {
    check_spec(spec)?;
    let nm = nm.validated()?;
    report_with_baseline(id, config, preset, &nm, spec, run, baseline(id, &nm, spec)?)
}

/// All three configurations at every noise point. Rows come back grouped
/// by noise point in grid order, then unencoded, NON_FT, FT.
pub fn breakeven_sweep(
    id: BenchmarkId,
    grid: &[NoiseModel],
    preset: Preset,
    spec: RunSpec,
    run: usize,
) -> Result<Vec<[ExperimentReport; 3]>, FaultError> {
    check_spec(spec)?;
    if grid.is_empty() {
        return Err(FaultError::EmptyGrid);
    }
    grid.iter()
        .map(|nm| {
            let nm = nm.validated()?;
            let base = baseline(id, &nm, spec)?;
            let row = |c| report_with_baseline(id, c, preset, &nm, spec, run, base);
            Ok([row(Configuration::Unencoded)?, row(Configuration::NonFt)?, row(Configuration::Ft)?])
        })
        .collect()
}

/// `base` with `p2` replaced by each value (and `p3` following as `2 * p2`).
pub fn p2_grid(base: &NoiseModel, p2s: &[f64]) -> Vec<NoiseModel> {
    p2s.iter().map(|&p2| NoiseModel { p2, p3: 2.0 * p2, ..*base }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_is_perfect_in_both_modes() {
        for id in BenchmarkId::ALL {
            for config in Configuration::ALL {
                for spec in [RunSpec::exact(), RunSpec::sampled(64, 7)] {
                    let r = run_experiment(id, config, Preset::default(), &NoiseModel::zero(), spec, 1).unwrap();
                    assert_eq!((r.unencoded_fidelity, r.encoded_fidelity, r.rejection_rate), (1.0, 1.0, 0.0), "{id} {config}");
                    assert!(!r.above_break_even);
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let nm = NoiseModel::new(1e-3, 1e-2, 1e-2, 1e-2).unwrap();
        let a = run_experiment(BenchmarkId::Bell, Configuration::Ft, Preset::default(), &nm, RunSpec::sampled(300, 3), 1).unwrap();
        let b = run_experiment(BenchmarkId::Bell, Configuration::Ft, Preset::default(), &nm, RunSpec::sampled(300, 3), 1).unwrap();
        assert_eq!(a, b);
        assert!(a.rejection_rate > 0.0);
    }

    #[test]
    fn sampling_agrees_with_exact_at_low_noise() {
        let nm = NoiseModel::new(1e-3, 5e-3, 5e-3, 5e-3).unwrap();
        let ex = run_experiment(BenchmarkId::TransversalBell, Configuration::NonFt, Preset::default(), &nm, RunSpec::exact(), 1).unwrap();
        let sa = run_experiment(BenchmarkId::TransversalBell, Configuration::NonFt, Preset::default(), &nm, RunSpec::sampled(20_000, 11), 1).unwrap();
        // binomial standard error at 20k shots is well under 0.5%; the exact
        // side misses at most its remainder
        let slack = 0.01 + ex.remainder;
        assert!((ex.rejection_rate - sa.rejection_rate).abs() < slack, "{} vs {}", ex.rejection_rate, sa.rejection_rate);
        assert!((ex.encoded_fidelity - sa.encoded_fidelity).abs() < slack);
    }

    #[test]
    fn exact_single_fault_weights_sum_with_remainder_to_one() {
        let built = build_benchmark(BenchmarkId::Bell, Configuration::Ft, Preset::FullFt).unwrap();
        let nm = NoiseModel::default();
        let (tally, remainder) = exact(&target(&built, BenchmarkId::Bell, &nm).unwrap());
        let total = tally.success + tally.failure + tally.rejected;
        assert!((total + remainder - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let nm = NoiseModel::zero();
        assert!(matches!(
            run_experiment(BenchmarkId::Bell, Configuration::Ft, Preset::default(), &nm, RunSpec::sampled(0, 1), 1),
            Err(FaultError::NoShots)
        ));
        assert!(matches!(breakeven_sweep(BenchmarkId::Bell, &[], Preset::default(), RunSpec::exact(), 1), Err(FaultError::EmptyGrid)));
    }
}
