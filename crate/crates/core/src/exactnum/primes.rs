//! Sieve, least prime factor and coprimality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::bigrat::gcd_u64;

/// Least prime factor of a positive integer. `1` has none, which we model as
/// a value larger than every prime so that `lpf(1) > t` holds for all `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lpf {
    Prime(u64),
    Infinity,
}

impl Lpf {
    pub fn exceeds(self, threshold: u64) -> bool {
        match self {
            Lpf::Prime(p) => p > threshold,
            Lpf::Infinity => true,
        }
    }
}

impl fmt::Display for Lpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lpf::Prime(p) => write!(f, "{p}"),
            Lpf::Infinity => f.write_str("inf"),
        }
    }
}

/// Smallest-prime-factor table built by a linear sieve.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        assert!(limit < u32::MAX as u64, "prime table limit too large");
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for x in 2..=n {
            if spf[x] == 0 {
                spf[x] = x as u32;
                primes.push(x as u32);
            }
            let sx = spf[x];
            for &p in &primes {
                if p > sx || x * p as usize > n {
                    break;
                }
                spf[x * p as usize] = p;
            }
        }
        PrimeTable { limit, spf, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes up to the table limit, increasing.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|&p| p as u64)
    }

    /// Least prime factor; falls back to trial division above the table.
    pub fn lpf(&self, u: u64) -> Result<Lpf> {
        match u {
            0 => Err(Error::ZeroInput("lpf")),
            1 => Ok(Lpf::Infinity),
            _ if u <= self.limit => Ok(Lpf::Prime(self.spf[u as usize] as u64)),
            _ => Ok(Lpf::Prime(trial_division_lpf(u))),
        }
    }
}

fn trial_division_lpf(u: u64) -> u64 {
    if u % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= u {
        if u % d == 0 {
            return d;
        }
        d += 2;
    }
    u
}

/// Least prime factor by trial division.
pub fn lpf(u: u64) -> Result<Lpf> {
    match u {
        0 => Err(Error::ZeroInput("lpf")),
        1 => Ok(Lpf::Infinity),
        _ => Ok(Lpf::Prime(trial_division_lpf(u))),
    }
}

pub fn is_prime(u: u64) -> bool {
    u >= 2 && trial_division_lpf(u) == u
}

pub fn coprime(v: u64, w: u64) -> Result<bool> {
    if v == 0 || w == 0 {
        return Err(Error::ZeroInput("coprime"));
    }
    Ok(gcd_u64(v, w) == 1)
}

/// The first `count` primes in increasing order.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = count.max(6) as f64;
    let bound = (k * (k.ln() + k.ln().ln())).ceil() as u64 + 1;
    PrimeTable::new(bound).primes().take(count).collect()
}

/// Smallest prime `>= from`.
pub fn next_prime(from: u64) -> u64 {
    let mut c = from.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}
