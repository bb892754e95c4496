//! Security and key-size estimates for McEliece-style parameters: the
//! information-set-decoding work factor, systematic key size, unique and
//! Johnson decoding radii, and a keyspace count.

use num_bigint::BigUint;
use num_traits::One;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimateError {
    #[error("need 0 < k < n, got n = {n}, k = {k}")]
    BadDimension { n: usize, k: usize },
    #[error("tau = {tau} must be below n - k = {max}")]
    TauTooLarge { tau: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecurityEstimate {
    pub n: usize,
    pub k: usize,
    pub log2_q: u32,
    pub tau: usize,
    /// `log2( C(n,k) / C(n-τ,k) · k³ · log2(q)² )`.
    pub work_factor_log2: f64,
    /// `k(n-k) log2(q) / 8192`.
    pub key_size_kb: f64,
    pub tau_unique: usize,
    /// `⌊n - √(n(k-1))⌋`.
    pub tau_list: usize,
    /// `log2(n! · (q - √q))`, a count of parameter choices rather than of
    /// inequivalent codes.
    pub keyspace_log2: f64,
}

/// log2 of a big integer, accurate to f64 precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v = x.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Smallest `s` with `s² >= x`.
fn ceil_sqrt(x: u128) -> u128 {
    let mut s = (x as f64).sqrt() as u128;
    while s * s < x {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= x {
        s -= 1;
    }
    s
}

pub fn key_size_kb(n: usize, k: usize, log2_q: u32) -> f64 {
    (k * (n - k)) as f64 * f64::from(log2_q) / 8192.0
}

pub fn tau_list(n: usize, k: usize) -> usize {
    let radicand = n as u128 * (k as u128).saturating_sub(1);
    n - ceil_sqrt(radicand) as usize
}

pub fn security_estimate(n: usize, k: usize, log2_q: u32, tau: usize) -> Result<SecurityEstimate, EstimateError> {
    if k == 0 || k >= n {
        return Err(EstimateError::BadDimension { n, k });
    }
    if tau >= n - k {
        return Err(EstimateError::TauTooLarge { tau, max: n - k });
    }
    let ratio = log2_big(&binomial(n, k)) - log2_big(&binomial(n - tau, k));
    let work_factor_log2 = ratio + 3.0 * (k as f64).log2() + 2.0 * f64::from(log2_q).log2();
    let q = 2f64.powi(log2_q as i32);
    Ok(SecurityEstimate {
        n,
        k,
        log2_q,
        tau,
        work_factor_log2,
        key_size_kb: key_size_kb(n, k, log2_q),
        tau_unique: (n - k) / 2,
        tau_list: tau_list(n, k),
        keyspace_log2: log2_big(&factorial(n)) + (q - q.sqrt()).log2(),
    })
}

/// A named row of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRow {
    pub label: &'static str,
    pub n: usize,
    pub k: usize,
    pub log2_q: u32,
    pub tau: usize,
}

/// The twisted example at both radii and two binary Goppa proposals of
/// similar strength.
pub const REFERENCE_ROWS: [ReferenceRow; 4] = [
    ReferenceRow { label: "twisted RS, unique decoding", n: 255, k: 117, log2_q: 16, tau: 69 },
    ReferenceRow { label: "twisted RS, list decoding", n: 255, k: 117, log2_q: 16, tau: 83 },
    ReferenceRow { label: "binary Goppa, 2^100 level", n: 2048, k: 1608, log2_q: 1, tau: 40 },
    ReferenceRow { label: "binary Goppa, 2^128 level", n: 3262, k: 2482, log2_q: 1, tau: 66 },
];

impl SecurityEstimate {
    pub fn to_text(&self) -> String {
        format!(
            "n = {}\nk = {}\nlog2_q = {}\ntau = {}\nwork_factor_log2 = {:.4}\nkey_size_kb = {:.4}\n\
             tau_unique = {}\ntau_list = {}\nkeyspace_log2 = {:.2}\n",
            self.n,
            self.k,
            self.log2_q,
            self.tau,
            self.work_factor_log2,
            self.key_size_kb,
            self.tau_unique,
            self.tau_list,
            self.keyspace_log2
        )
    }
}
