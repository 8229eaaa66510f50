//! Monte Carlo experiment runner.
//!
//! Trial `i` of a cell draws from `ChaCha8Rng::seed_from_u64(trial_seed(base_seed, i))`
//! with the stream set to [`stream_id`]`(k, δ, decoder)`, so every trial can
//! be replayed on its own and the aggregate does not depend on scheduling.
//! With the `parallel` feature trials run on the rayon pool; results are
//! collected in trial order either way.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{for_each_supersequence, sample_uniform, supersequence_count};
use crate::codec::{ceil_log2, GcCode, GcParams};
use crate::oracle::{Oracle, OracleBudget};
use crate::vt::VtCode;
use crate::{Error, Result};

/// Largest supersequence list the naive decoder will enumerate per trial.
pub const NAIVE_LIST_LIMIT: u128 = 1 << 20;

pub const TABLE2_HEADER: &str = "k,delta,ell,c,trials,L_av,L_max,pr_fail,seed";
pub const COMPARE_HEADER: &str = "k,delta,decoder,n,trials,L_av,L_max,pr_fail,seed";

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `splitmix64(base_seed ⊕ splitmix64(trial_index))`.
pub fn trial_seed(base_seed: u64, trial_index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(trial_index))
}

/// `k << 16 | δ << 8 | decoder tag`, the ChaCha stream of a cell.
pub fn stream_id(k: usize, delta: usize, decoder: DecoderKind) -> u64 {
    (k as u64) << 16 | (delta as u64 & 0xff) << 8 | decoder.tag()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One uniformly drawn deletion pattern per trial.
    Uniform,
    /// The exact worst case over all patterns per trial.
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    Gc,
    VtA17,
    Naive,
}

impl DecoderKind {
    fn tag(self) -> u64 {
        match self {
            Self::Gc => 0,
            Self::VtA17 => 1,
            Self::Naive => 2,
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gc => "gc",
            Self::VtA17 => "vt-a17",
            Self::Naive => "naive",
        })
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gc" => Ok(Self::Gc),
            "vt-a17" => Ok(Self::VtA17),
            "naive" => Ok(Self::Naive),
            _ => Err(Error::InvalidParams(format!("unknown decoder {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Adversarial => "adversarial",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "adversarial" => Ok(Self::Adversarial),
            _ => Err(Error::InvalidParams(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CRule {
    /// `c = δ + offset`
    DeltaPlus(usize),
    Fixed(usize),
}

impl CRule {
    pub fn apply(self, delta: usize) -> usize {
        match self {
            Self::DeltaPlus(offset) => delta + offset,
            Self::Fixed(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllRule {
    CeilLog2,
    Fixed(usize),
}

impl EllRule {
    pub fn apply(self, k: usize) -> usize {
        match self {
            Self::CeilLog2 => ceil_log2(k),
            Self::Fixed(ell) => ell,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub k_list: Vec<usize>,
    pub delta_list: Vec<usize>,
    pub c_rule: CRule,
    pub ell_rule: EllRule,
    pub trials: u64,
    pub base_seed: u64,
    pub mode: Mode,
    pub decoder: DecoderKind,
    pub budget: OracleBudget,
}

impl Default for ExperimentConfig {
    /// The standard grid: k = 32..1024, δ = 1..3, c = δ+1, ℓ = ⌈log₂ k⌉.
    fn default() -> Self {
        Self {
            k_list: vec![32, 64, 128, 256, 512, 1024],
            delta_list: vec![1, 2, 3],
            c_rule: CRule::DeltaPlus(1),
            ell_rule: EllRule::CeilLog2,
            trials: 10_000,
            base_seed: 0,
            mode: Mode::Uniform,
            decoder: DecoderKind::Gc,
            budget: OracleBudget::default(),
        }
    }
}

impl ExperimentConfig {
    /// GC parameters of one grid cell.
    pub fn gc_params(&self, k: usize, delta: usize) -> Result<GcParams> {
        GcParams::new(k, self.ell_rule.apply(k), self.c_rule.apply(delta), delta)
    }

    /// Every cell, `k` outer and `δ` inner, in list order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.k_list
            .iter()
            .flat_map(|&k| self.delta_list.iter().map(move |&d| (k, d)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub k: usize,
    pub delta: usize,
    pub decoder: DecoderKind,
    pub n: usize,
    /// GC parameters; `None` for the other decoders.
    pub ell: Option<usize>,
    pub c: Option<usize>,
    pub trials: u64,
    pub l_av: f64,
    /// Standard error of `l_av`.
    pub l_av_stderr: f64,
    pub l_max: usize,
    /// Fraction of trials with list size at least 2.
    pub pr_fail: f64,
    pub seed: u64,
    pub wall: Duration,
}

enum Decoder {
    Gc(GcCode),
    Vt(VtCode),
    Naive { n: usize },
}

/// A prepared grid cell.
pub struct CellRunner {
    k: usize,
    delta: usize,
    kind: DecoderKind,
    base_seed: u64,
    decoder: Decoder,
    oracle: Option<Oracle>,
}

impl CellRunner {
    pub fn new(config: &ExperimentConfig, k: usize, delta: usize, kind: DecoderKind) -> Result<Self> {
        let decoder = match kind {
            DecoderKind::Gc => Decoder::Gc(GcCode::new(config.gc_params(k, delta)?)?),
            DecoderKind::VtA17 => {
                if delta == 0 {
                    return Err(Error::InvalidParams("delta must be at least 1".into()));
                }
                Decoder::Vt(VtCode::for_message_len(k)?)
            }
            DecoderKind::Naive => {
                let n = config.gc_params(k, delta)?.n();
                let size = supersequence_count(n, delta);
                if size > NAIVE_LIST_LIMIT {
                    return Err(Error::BudgetExceeded(format!(
                        "naive list of {size} strings exceeds {NAIVE_LIST_LIMIT}"
                    )));
                }
                Decoder::Naive { n }
            }
        };
        let oracle = match (config.mode, &decoder) {
            (Mode::Uniform, _) => None,
            (Mode::Adversarial, Decoder::Gc(code)) => {
                let n = code.params().n();
                if n > config.budget.max_n {
                    return Err(Error::BudgetExceeded(format!(
                        "adversarial mode needs n <= {}, got {n}",
                        config.budget.max_n
                    )));
                }
                Some(Oracle::new(code.clone(), config.budget))
            }
            (Mode::Adversarial, _) => {
                return Err(Error::InvalidParams(
                    "adversarial mode is only available for the gc decoder".into(),
                ))
            }
        };
        Ok(Self {
            k,
            delta,
            kind,
            base_seed: config.base_seed,
            decoder,
            oracle,
        })
    }

    pub fn n(&self) -> usize {
        match &self.decoder {
            Decoder::Gc(code) => code.params().n(),
            Decoder::Vt(code) => code.params().n(),
            Decoder::Naive { n } => *n,
        }
    }

    pub fn rng(&self, trial_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(self.base_seed, trial_index));
        rng.set_stream(stream_id(self.k, self.delta, self.kind));
        rng
    }

    /// List size of one trial. A list that misses the transmitted codeword
    /// is a decoder bug and is reported as [`Error::MembershipViolation`].
    pub fn run_trial(&self, trial_index: u64) -> Result<usize> {
        let mut rng = self.rng(trial_index);
        let violation = Error::MembershipViolation { trial: trial_index };
        match &self.decoder {
            Decoder::Gc(code) => {
                let u = random_bits(&mut rng, self.k);
                if let Some(oracle) = &self.oracle {
                    return oracle.exact_worst_case_list(&u);
                }
                let x = code.encode(&u)?;
                let y = sample_uniform(x.len(), self.delta, &mut rng)?.apply(x.bits())?;
                let list = code.list_decode(&y).map_err(|_| violation.clone())?;
                if !list.contains_codeword(x.bits()) {
                    return Err(violation);
                }
                Ok(list.len())
            }
            Decoder::Vt(code) => {
                let u = random_bits(&mut rng, self.k);
                let x = code.encode(&u)?;
                let y = sample_uniform(x.len(), self.delta, &mut rng)?.apply(&x)?;
                let list = code.a17_list_decode(&y, self.delta).map_err(|_| violation.clone())?;
                if list.binary_search(&x).is_err() {
                    return Err(violation);
                }
                Ok(list.len())
            }
            Decoder::Naive { n } => {
                let x = random_bits(&mut rng, *n);
                let y = sample_uniform(*n, self.delta, &mut rng)?.apply(&x)?;
                let (mut size, mut hit) = (0, false);
                for_each_supersequence(&y, *n, |s| {
                    size += 1;
                    hit |= s == x.as_slice();
                });
                if !hit {
                    return Err(violation);
                }
                Ok(size)
            }
        }
    }

    pub fn run_trials_sequential(&self, trials: u64) -> Result<Vec<usize>> {
        (0..trials).map(|i| self.run_trial(i)).collect()
    }

    #[cfg(feature = "parallel")]
    pub fn run_trials_parallel(&self, trials: u64) -> Result<Vec<usize>> {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(|i| self.run_trial(i)).collect()
    }

    pub fn run_trials(&self, trials: u64) -> Result<Vec<usize>> {
        #[cfg(feature = "parallel")]
        return self.run_trials_parallel(trials);
        #[cfg(not(feature = "parallel"))]
        return self.run_trials_sequential(trials);
    }

    /// Runs `trials` trials and aggregates them.
    pub fn run(&self, trials: u64) -> Result<CellResult> {
        let start = Instant::now();
        let sizes = self.run_trials(trials)?;
        let (ell, c) = match &self.decoder {
            Decoder::Gc(code) => (Some(code.params().ell()), Some(code.params().c())),
            _ => (None, None),
        };
        Ok(summarize(&sizes, self, ell, c, start.elapsed()))
    }
}

fn random_bits<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn summarize(sizes: &[usize], cell: &CellRunner, ell: Option<usize>, c: Option<usize>, wall: Duration) -> CellResult {
    let t = sizes.len() as f64;
    let sum: usize = sizes.iter().sum();
    let l_av = sum as f64 / t;
    let var = if sizes.len() > 1 {
        sizes.iter().map(|&s| (s as f64 - l_av).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    CellResult {
        k: cell.k,
        delta: cell.delta,
        decoder: cell.kind,
        n: cell.n(),
        ell,
        c,
        trials: sizes.len() as u64,
        l_av,
        l_av_stderr: (var / t).sqrt(),
        l_max: sizes.iter().copied().max().unwrap_or(0),
        pr_fail: sizes.iter().filter(|&&s| s >= 2).count() as f64 / t,
        seed: cell.base_seed,
        wall,
    }
}

/// Sweeps the `(k, δ)` grid with the configured decoder. Returns no rows
/// when `trials` is zero.
pub fn run_table2(config: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let runners = config
        .cells()
        .map(|(k, d)| CellRunner::new(config, k, d, config.decoder))
        .collect::<Result<Vec<_>>>()?;
    if config.trials == 0 {
        return Ok(Vec::new());
    }
    runners.iter().map(|r| r.run(config.trials)).collect()
}

/// GC against the VT baseline on every cell; rows come in `(k, δ)` order
/// with the GC row first.
pub fn run_compare(config: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let mut runners = Vec::new();
    for (k, d) in config.cells() {
        for kind in [DecoderKind::Gc, DecoderKind::VtA17] {
            runners.push(CellRunner::new(config, k, d, kind)?);
        }
    }
    if config.trials == 0 {
        return Ok(Vec::new());
    }
    runners.iter().map(|r| r.run(config.trials)).collect()
}

/// `x` with six significant digits, trailing zeros kept.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.5}");
    }
    let mut exp = x.abs().log10().floor() as i32;
    let digits = |e: i32| (5 - e).max(0) as usize;
    let mut s = format!("{:.*}", digits(exp), x);
    // rounding may carry into a new leading digit, e.g. 9.999999 → 10.00000
    if s.trim_start_matches('-').parse::<f64>().unwrap_or(0.0) >= 10f64.powi(exp + 1) {
        exp += 1;
        s = format!("{:.*}", digits(exp), x);
    }
    s
}

pub fn write_table2_csv<W: Write>(rows: &[CellResult], mut w: W) -> io::Result<()> {
    writeln!(w, "{TABLE2_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            r.delta,
            r.ell.unwrap_or(0),
            r.c.unwrap_or(0),
            r.trials,
            format_sig6(r.l_av),
            r.l_max,
            format_sig6(r.pr_fail),
            r.seed
        )?;
    }
    Ok(())
}

pub fn write_compare_csv<W: Write>(rows: &[CellResult], mut w: W) -> io::Result<()> {
    writeln!(w, "{COMPARE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            r.delta,
            r.decoder,
            r.n,
            r.trials,
            format_sig6(r.l_av),
            r.l_max,
            format_sig6(r.pr_fail),
            r.seed
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            k_list: vec![16, 32],
            delta_list: vec![1, 2],
            trials,
            base_seed: 7,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn splitmix_reference_values() {
        // the reference generator seeded with 0 outputs splitmix64(0), splitmix64(γ), ...
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(splitmix64(0x9e37_79b9_7f4a_7c15), 0x6e78_9e6a_a1b9_65f4);
        assert_ne!(trial_seed(1, 0), trial_seed(0, 1));
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(1.0183), "1.01830");
        assert_eq!(format_sig6(1.0), "1.00000");
        assert_eq!(format_sig6(0.0183), "0.0183000");
        assert_eq!(format_sig6(0.0), "0.00000");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(9.9999999), "10.0000");
        assert_eq!(format_sig6(0.00007), "0.0000700000");
    }

    #[test]
    fn rules() {
        assert_eq!(CRule::DeltaPlus(1).apply(3), 4);
        assert_eq!(CRule::Fixed(6).apply(2), 6);
        assert_eq!(EllRule::CeilLog2.apply(1024), 10);
        assert_eq!(EllRule::CeilLog2.apply(100), 7);
        let cells: Vec<_> = ExperimentConfig::default().cells().collect();
        assert_eq!(cells.len(), 18);
        assert_eq!(cells[0], (32, 1));
        assert_eq!(cells[17], (1024, 3));
    }

    #[test]
    fn trials_are_replayable() {
        let cfg = small(50);
        let runner = CellRunner::new(&cfg, 32, 2, DecoderKind::Gc).unwrap();
        let sizes = runner.run_trials_sequential(50).unwrap();
        assert!(sizes.iter().all(|&s| s >= 1));
        for (i, &s) in sizes.iter().enumerate() {
            assert_eq!(runner.run_trial(i as u64).unwrap(), s);
        }
        assert_eq!(runner.run_trials(50).unwrap(), sizes);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let cfg = small(200);
        for kind in [DecoderKind::Gc, DecoderKind::VtA17] {
            let runner = CellRunner::new(&cfg, 32, 2, kind).unwrap();
            assert_eq!(
                runner.run_trials_parallel(200).unwrap(),
                runner.run_trials_sequential(200).unwrap()
            );
        }
    }

    #[test]
    fn streams_differ_between_decoders() {
        let cfg = small(1);
        let gc = CellRunner::new(&cfg, 32, 2, DecoderKind::Gc).unwrap();
        let vt = CellRunner::new(&cfg, 32, 2, DecoderKind::VtA17).unwrap();
        assert_ne!(gc.rng(0).random::<u64>(), vt.rng(0).random::<u64>());
    }

    #[test]
    fn single_trial_average_is_that_trial() {
        let cfg = small(1);
        let runner = CellRunner::new(&cfg, 32, 1, DecoderKind::Gc).unwrap();
        let r = runner.run(1).unwrap();
        assert_eq!(r.l_av, runner.run_trial(0).unwrap() as f64);
        assert_eq!(r.l_max, runner.run_trial(0).unwrap());
        assert_eq!(r.l_av_stderr, 0.0);
    }

    #[test]
    fn table2_rows_and_csv() {
        let rows = run_table2(&small(30)).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.l_av >= 1.0 && r.l_av <= r.l_max as f64);
            assert!((0.0..=1.0).contains(&r.pr_fail));
        }
        let mut a = Vec::new();
        write_table2_csv(&rows, &mut a).unwrap();
        let mut b = Vec::new();
        write_table2_csv(&run_table2(&small(30)).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("k,delta,ell,c,trials,L_av,L_max,pr_fail,seed\n16,1,4,2,30,"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn zero_trials_gives_no_rows() {
        assert!(run_table2(&small(0)).unwrap().is_empty());
        assert!(run_compare(&small(0)).unwrap().is_empty());
    }

    #[test]
    fn bad_rules_are_config_errors() {
        let cfg = ExperimentConfig {
            c_rule: CRule::Fixed(2),
            ..small(5)
        };
        assert!(run_table2(&cfg).is_err(), "c = 2 with δ = 2");
    }

    #[test]
    fn compare_rows() {
        let cfg = ExperimentConfig {
            k_list: vec![16],
            delta_list: vec![2],
            ..small(40)
        };
        let rows = run_compare(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].decoder, rows[1].decoder), (DecoderKind::Gc, DecoderKind::VtA17));
        assert!(rows[1].l_max > rows[0].l_max);
        let mut out = Vec::new();
        write_compare_csv(&rows, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().lines().nth(2).unwrap().starts_with("16,2,vt-a17,"));
    }

    #[test]
    fn naive_and_adversarial() {
        let cfg = ExperimentConfig {
            k_list: vec![8],
            delta_list: vec![1],
            ell_rule: EllRule::Fixed(4),
            ..small(5)
        };
        let naive = CellRunner::new(&cfg, 8, 1, DecoderKind::Naive).unwrap();
        assert_eq!(naive.run_trial(0).unwrap(), 1 + 24);
        assert!(CellRunner::new(&cfg, 1024, 3, DecoderKind::Naive).is_err());

        let adv = ExperimentConfig {
            mode: Mode::Adversarial,
            ..cfg.clone()
        };
        let runner = CellRunner::new(&adv, 8, 1, DecoderKind::Gc).unwrap();
        let uniform = CellRunner::new(&cfg, 8, 1, DecoderKind::Gc).unwrap();
        for i in 0..5 {
            assert!(runner.run_trial(i).unwrap() >= uniform.run_trial(i).unwrap());
        }
        assert!(CellRunner::new(&adv, 32, 1, DecoderKind::Gc).is_err());
        assert!(CellRunner::new(&adv, 8, 1, DecoderKind::VtA17).is_err());
    }
}
