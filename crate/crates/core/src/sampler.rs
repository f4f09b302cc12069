//! Random presentations at density `d`.
//!
//! Two instances of the density model are provided. `FixedCount` draws
//! exactly `round(|B_ℓ|^d)` distinct uniform words of length at most `ℓ`.
//! `Bernoulli` keeps every word of `B_ℓ` independently with probability
//! `|B_ℓ|^{d−1}`, realized per length stratum as a binomial count followed
//! by that many distinct uniform words. Neither enumerates `B_ℓ`.
//!
//! Randomness comes from ChaCha8 seeded with the master seed; trial `t` of a
//! sweep uses stream `t`, so every trial is reproducible on its own.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use thiserror::Error;

use crate::forms::parse_rational;
use crate::words::{count_cyclically_reduced, universe_size, Letter, Word, WordError};

/// Largest presentation a sampler will build.
pub const DEFAULT_RELATOR_LIMIT: u64 = 5_000_000;

/// Cap on draws rejected as duplicates while building one presentation.
pub const DUPLICATE_RETRY_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplerError {
    #[error("invalid model parameter: {0}")]
    Parameter(String),
    #[error("about {expected} relators requested, above the limit {limit}")]
    MemoryGuard { expected: String, limit: u64 },
    #[error("more than {0} duplicate draws; the relator count is too close to |B_ell|")]
    DuplicateRetries(u64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Model {
    Bernoulli,
    FixedCount,
    /// Written by hand or by another tool.
    Manual,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Bernoulli => "bernoulli",
            Model::FixedCount => "fixed",
            Model::Manual => "manual",
        })
    }
}

impl FromStr for Model {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Model, SamplerError> {
        match s {
            "bernoulli" => Ok(Model::Bernoulli),
            "fixed" | "fixed-count" => Ok(Model::FixedCount),
            "manual" => Ok(Model::Manual),
            _ => Err(SamplerError::Parameter(format!("unknown model {s:?} (bernoulli, fixed, manual)"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModelConfig {
    pub m: u8,
    pub ell: usize,
    pub d: Rational64,
    pub model: Model,
    pub seed: u64,
    /// Draw only words of length exactly `ℓ` instead of at most `ℓ`.
    pub exact_length: bool,
    pub relator_limit: u64,
}

impl ModelConfig {
    pub fn new(m: u8, ell: usize, d: Rational64, model: Model, seed: u64) -> ModelConfig {
        ModelConfig { m, ell, d, model, seed, exact_length: false, relator_limit: DEFAULT_RELATOR_LIMIT }
    }

    fn validate(&self) -> Result<(), SamplerError> {
        if self.m < 2 || self.m > crate::words::MAX_TEXT_GENERATORS {
            return Err(SamplerError::Parameter(format!("m must be in 2..=26, got {}", self.m)));
        }
        if self.ell == 0 {
            return Err(SamplerError::Parameter("ell must be at least 1".into()));
        }
        if self.d < Rational64::zero() || self.d > Rational64::one() {
            return Err(SamplerError::Parameter(format!("d must be in [0, 1], got {}", self.d)));
        }
        if self.model == Model::Manual {
            return Err(SamplerError::Parameter("the manual model cannot be sampled".into()));
        }
        Ok(())
    }

    /// Lengths words are drawn from.
    fn lengths(&self) -> std::ops::RangeInclusive<usize> {
        if self.exact_length {
            self.ell..=self.ell
        } else {
            1..=self.ell
        }
    }

    /// Size of the universe sampled from.
    pub fn universe(&self) -> BigUint {
        if self.exact_length {
            count_cyclically_reduced(self.m, self.ell)
        } else {
            universe_size(self.m, self.ell)
        }
    }
}

/// Master seed plus stream number; distinct streams never overlap.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniform cyclically reduced word of length `n`, by rejection from
/// uniform freely reduced words.
pub fn uniform_cyclically_reduced<R: Rng + ?Sized>(m: u8, n: usize, rng: &mut R) -> Word {
    assert!(n >= 1 && m >= 1);
    let letters = 2 * m as usize;
    loop {
        let mut w = Vec::with_capacity(n);
        w.push(Letter::from_index(rng.random_range(0..letters)));
        for _ in 1..n {
            let prev = *w.last().expect("nonempty");
            // Skip the inverse of the previous letter.
            let mut i = rng.random_range(0..letters - 1);
            if i >= prev.inverse().index() {
                i += 1;
            }
            w.push(Letter::from_index(i));
        }
        if n == 1 || w[0] != w[n - 1].inverse() {
            return Word::new(w);
        }
    }
}

/// Uniform integer in `0..bound` by rejection on random bits.
fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = if bits % 32 == 0 { u32::MAX } else { (1u32 << (bits % 32)) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= top_mask;
        }
        let x = BigUint::new(digits);
        if &x < bound {
            return x;
        }
    }
}

/// A uniform word of the universe: a length weighted by its stratum size,
/// then a uniform word of that length.
fn uniform_universe_word<R: Rng + ?Sized>(cfg: &ModelConfig, strata: &[(usize, BigUint)], total: &BigUint, rng: &mut R) -> Word {
    let mut x = uniform_below(total, rng);
    for (n, c) in strata {
        if &x < c {
            return uniform_cyclically_reduced(cfg.m, *n, rng);
        }
        x -= c;
    }
    unreachable!("x is below the total")
}

/// `round(B^{p/q})`, exact.
pub fn rounded_power(b: &BigUint, d: Rational64) -> BigUint {
    let (p, q) = (*d.numer() as u32, *d.denom() as u32);
    let x = num_traits::pow(b.clone(), p as usize);
    let floor = x.nth_root(q);
    // Round up iff floor + 1/2 ≤ x^{1/q}, i.e. (2·floor + 1)^q ≤ 2^q·x.
    let twice = &floor * 2u32 + 1u32;
    if num_traits::pow(twice, q as usize) <= x << q as usize {
        floor + 1u32
    } else {
        floor
    }
}

/// Natural logarithm of a big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// A set of distinct relators plus the parameters that produced it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub m: u8,
    pub ell: usize,
    pub model: Model,
    pub d: Rational64,
    pub seed: u64,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Checks distinctness, cyclic reducedness, lengths and generators.
    pub fn validate(&self) -> Result<(), SamplerError> {
        let mut seen = HashSet::new();
        for (i, r) in self.relators.iter().enumerate() {
            let bad = |message: String| SamplerError::Parse { line: i + 2, message };
            if r.is_empty() || !r.is_cyclically_reduced() {
                return Err(bad(format!("{r} is not a nonempty cyclically reduced word")));
            }
            if r.len() > self.ell {
                return Err(bad(format!("{r} is longer than ell={}", self.ell)));
            }
            if r.max_generator() > self.m {
                return Err(bad(format!("{r} uses more than {} generators", self.m)));
            }
            if !seen.insert(r) {
                return Err(bad(format!("duplicate relator {r}")));
            }
        }
        Ok(())
    }

    /// Parses a presentation file, freely and cyclically reducing relators
    /// when `reduce` is set instead of rejecting them.
    pub fn parse(text: &str, reduce: bool) -> Result<Presentation, SamplerError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();
        let mut p = Presentation { m: 2, ell: 0, model: Model::Manual, d: Rational64::zero(), seed: 0, relators: Vec::new() };
        let mut header = false;
        if let Some(&(line, first)) = lines.peek() {
            if let Some(rest) = first.strip_prefix("presentation") {
                header = true;
                lines.next();
                let err = |message: String| SamplerError::Parse { line, message };
                for field in rest.split_whitespace() {
                    let (key, value) = field.split_once('=').ok_or_else(|| err(format!("expected key=value, got {field:?}")))?;
                    match key {
                        "m" => p.m = value.parse().map_err(|_| err(format!("bad m {value:?}")))?,
                        "ell" => p.ell = value.parse().map_err(|_| err(format!("bad ell {value:?}")))?,
                        "model" => p.model = value.parse()?,
                        "d" => p.d = parse_rational(value).map_err(|e| err(e.to_string()))?,
                        "seed" => p.seed = value.parse().map_err(|_| err(format!("bad seed {value:?}")))?,
                        _ => return Err(err(format!("unknown field {key:?}"))),
                    }
                }
            }
        }
        for (line, text) in lines {
            let w = Word::parse_relator(text, MAX_GENERATORS_ALLOWED, reduce)
                .map_err(|e| SamplerError::Parse { line, message: e.to_string() })?;
            p.relators.push(w);
        }
        if !header {
            p.m = p.relators.iter().map(Word::max_generator).max().unwrap_or(2).max(2);
            p.ell = p.relators.iter().map(Word::len).max().unwrap_or(0);
        }
        if reduce {
            let mut seen = HashSet::new();
            p.relators.retain(|r| !r.is_empty() && seen.insert(r.clone()));
        }
        p.validate()?;
        Ok(p)
    }
}

const MAX_GENERATORS_ALLOWED: u8 = crate::words::MAX_TEXT_GENERATORS;

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "presentation m={} ell={} model={} d={}/{} seed={}",
            self.m,
            self.ell,
            self.model,
            self.d.numer(),
            self.d.denom(),
            self.seed
        )?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Presentation, SamplerError> {
        Presentation::parse(s, false)
    }
}

/// Samples with stream 0 of the configured seed.
pub fn sample_presentation(cfg: &ModelConfig) -> Result<Presentation, SamplerError> {
    sample_presentation_stream(cfg, 0)
}

/// Samples with an explicit stream of the master seed.
pub fn sample_presentation_stream(cfg: &ModelConfig, stream: u64) -> Result<Presentation, SamplerError> {
    cfg.validate()?;
    let mut rng = trial_rng(cfg.seed, stream);
    let relators = match cfg.model {
        Model::FixedCount => sample_fixed(cfg, &mut rng)?,
        Model::Bernoulli => sample_bernoulli(cfg, &mut rng)?,
        Model::Manual => unreachable!("rejected by validate"),
    };
    Ok(Presentation { m: cfg.m, ell: cfg.ell, model: cfg.model, d: cfg.d, seed: cfg.seed, relators })
}

fn sample_fixed(cfg: &ModelConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Word>, SamplerError> {
    let total = cfg.universe();
    let count = rounded_power(&total, cfg.d);
    let n = count
        .to_u64()
        .filter(|&n| n <= cfg.relator_limit)
        .ok_or_else(|| SamplerError::MemoryGuard { expected: count.to_string(), limit: cfg.relator_limit })?;
    let strata: Vec<(usize, BigUint)> = cfg.lengths().map(|n| (n, count_cyclically_reduced(cfg.m, n))).collect();
    draw_distinct(n as usize, rng, |rng| uniform_universe_word(cfg, &strata, &total, rng))
}

fn sample_bernoulli(cfg: &ModelConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Word>, SamplerError> {
    let ln_total = ln_big(&cfg.universe());
    let d = *cfg.d.numer() as f64 / *cfg.d.denom() as f64;
    let p = ((d - 1.0) * ln_total).exp().min(1.0);
    let expected = (d * ln_total).exp();
    if expected > cfg.relator_limit as f64 {
        return Err(SamplerError::MemoryGuard { expected: format!("{expected:.0}"), limit: cfg.relator_limit });
    }
    let mut out = Vec::new();
    for n in cfg.lengths() {
        let c = count_cyclically_reduced(cfg.m, n);
        let k = match c.to_u64() {
            Some(c) => Binomial::new(c, p).expect("0 <= p <= 1").sample(rng),
            // Far beyond 64 bits the binomial is Poisson to any precision.
            None => {
                let mean = (ln_big(&c) + p.ln()).exp();
                if mean > 0.0 {
                    Poisson::new(mean).expect("positive mean").sample(rng) as u64
                } else {
                    0
                }
            }
        };
        if k > cfg.relator_limit {
            return Err(SamplerError::MemoryGuard { expected: k.to_string(), limit: cfg.relator_limit });
        }
        out.extend(draw_distinct(k as usize, rng, |rng| uniform_cyclically_reduced(cfg.m, n, rng))?);
    }
    Ok(out)
}

fn draw_distinct(
    n: usize,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Word,
) -> Result<Vec<Word>, SamplerError> {
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    let mut rejected = 0u64;
    while out.len() < n {
        let w = draw(rng);
        if seen.insert(w.clone()) {
            out.push(w);
        } else {
            rejected += 1;
            if rejected > DUPLICATE_RETRY_LIMIT {
                return Err(SamplerError::DuplicateRetries(DUPLICATE_RETRY_LIMIT));
            }
        }
    }
    Ok(out)
}

/// `(2m−1)^{(d−ε/4)ℓ} ≤ |R| ≤ (2m−1)^{(d+ε/4)ℓ}`, compared exactly.
pub fn q_event(p: &Presentation, d: Rational64, eps: Rational64) -> bool {
    let base = BigUint::from(2 * p.m as u32 - 1);
    let count = BigUint::from(p.relators.len());
    let quarter = eps / 4;
    let ell = p.ell as i64;
    let lower = (d - quarter) * ell;
    let upper = (d + quarter) * ell;
    power_le(&base, lower, &count) && !power_lt(&base, upper, &count)
}

/// `base^e ≤ x` for a rational exponent `e`.
fn power_le(base: &BigUint, e: Rational64, x: &BigUint) -> bool {
    // base^{u/v} ≤ x  ⇔  base^u ≤ x^v (v > 0), with negative u moved across.
    let (u, v) = (*e.numer(), *e.denom() as usize);
    let xv = num_traits::pow(x.clone(), v);
    if u >= 0 {
        num_traits::pow(base.clone(), u as usize) <= xv
    } else {
        BigUint::one() <= xv * num_traits::pow(base.clone(), (-u) as usize)
    }
}

/// `base^e < x`.
fn power_lt(base: &BigUint, e: Rational64, x: &BigUint) -> bool {
    let (u, v) = (*e.numer(), *e.denom() as usize);
    let xv = num_traits::pow(x.clone(), v);
    if u >= 0 {
        num_traits::pow(base.clone(), u as usize) < xv
    } else {
        BigUint::one() < xv * num_traits::pow(base.clone(), (-u) as usize)
    }
}
