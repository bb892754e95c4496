//! Unique decoding: a Gao-style RS decoder and the guess-and-sift decoder for
//! twisted codes.
//!
//! The twisted decoder guesses the hook coefficients `g_1..g_ell`, strips
//! `Σ g_i η_i X^(k-1+t_i)` from the received word, RS-decodes the rest and
//! keeps a candidate only when its hook coefficients equal the guesses and
//! the rebuilt twisted codeword lies within the radius.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::code::{CodeError, TwistedCodeParams};
use crate::gf::{Elem, FieldTower};
use crate::poly::{check_distinct, interpolate_with, Poly, PolyError};

/// Default ceiling on RS decoding rounds (`q^ell`).
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecodeError {
    #[error("radius {tau} exceeds the unique-decoding bound {max}")]
    RadiusTooLarge { tau: usize, max: usize },
    #[error("received word has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension k = {k} must satisfy 0 < k < n = {n}")]
    BadDimension { n: usize, k: usize },
    #[error("{rounds} guesses exceed the budget of {budget} RS rounds")]
    BudgetExceeded { rounds: u128, budget: u128 },
    #[error("two guesses decoded inside the unique radius: {first:?} and {second:?}")]
    Ambiguous { first: Vec<Elem>, second: Vec<Elem> },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// The largest radius with unique decoding for an `[n, k]` RS code.
pub fn max_radius(n: usize, k: usize) -> usize {
    (n - k) / 2
}

/// Precomputed data for repeated RS decoding at fixed evaluation points.
#[derive(Debug, Clone)]
pub struct RsDecoder {
    field: FieldTower,
    alpha: Vec<Elem>,
    k: usize,
    vanishing: Poly,
}

impl RsDecoder {
    pub fn new(field: &FieldTower, alpha: &[Elem], k: usize) -> Result<Self, DecodeError> {
        check_distinct(alpha)?;
        if k == 0 || k >= alpha.len() {
            return Err(DecodeError::BadDimension { n: alpha.len(), k });
        }
        Ok(RsDecoder {
            field: field.clone(),
            alpha: alpha.to_vec(),
            k,
            vanishing: Poly::from_roots(field, alpha),
        })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Euclid stops at the first remainder of degree below `⌈(n+k)/2⌉`.
    fn stop_degree(&self) -> usize {
        (self.n() + self.k).div_ceil(2)
    }

    fn interpolate(&self, received: &[Elem]) -> Vec<Elem> {
        let p = interpolate_with(&self.field, &self.alpha, received, &self.vanishing);
        let mut c = p.coeffs().to_vec();
        c.resize(self.n(), Elem::ZERO);
        c
    }

    fn check_radius(&self, received: &[Elem], tau: usize) -> Result<(), DecodeError> {
        if received.len() != self.n() {
            return Err(DecodeError::LengthMismatch { expected: self.n(), got: received.len() });
        }
        let max = max_radius(self.n(), self.k);
        if tau > max {
            return Err(DecodeError::RadiusTooLarge { tau, max });
        }
        Ok(())
    }

    /// The unique polynomial of degree `< k` whose evaluation is within `tau`
    /// of `received`, or `None`.
    pub fn decode(&self, received: &[Elem], tau: usize) -> Result<Option<Poly>, DecodeError> {
        self.check_radius(received, tau)?;
        let interp = self.interpolate(received);
        let mut work = GaoWork::new(self.n());
        let Some(f) = work.run(&self.field, self.vanishing.coeffs(), &interp, self.k, self.stop_degree())
        else {
            return Ok(None);
        };
        let poly = Poly::from_coeffs(f);
        let dist = received
            .iter()
            .zip(&self.alpha)
            .filter(|(&r, &a)| poly.eval(&self.field, a) != r)
            .count();
        Ok((dist <= tau).then_some(poly))
    }
}

/// One-shot RS decoding; see [`RsDecoder::decode`].
pub fn rs_decode(
    field: &FieldTower,
    received: &[Elem],
    alpha: &[Elem],
    k: usize,
    tau: usize,
) -> Result<Option<Poly>, DecodeError> {
    RsDecoder::new(field, alpha, k)?.decode(received, tau)
}

/// Scratch buffers for the partial extended Euclid on `(M, R)`.
struct GaoWork {
    r0: Vec<Elem>,
    r1: Vec<Elem>,
    v0: Vec<Elem>,
    v1: Vec<Elem>,
}

fn degree(p: &[Elem]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

impl GaoWork {
    fn new(n: usize) -> Self {
        GaoWork {
            r0: vec![Elem::ZERO; n + 1],
            r1: vec![Elem::ZERO; n + 1],
            v0: vec![Elem::ZERO; n + 1],
            v1: vec![Elem::ZERO; n + 1],
        }
    }

    /// Runs Euclid on `(m, interp)` down to degree `< stop`, then divides.
    /// Returns the `k` message coefficients on exact division with quotient
    /// degree `< k`.
    fn run(&mut self, f: &FieldTower, m: &[Elem], interp: &[Elem], k: usize, stop: usize) -> Option<Vec<Elem>> {
        let zero = Elem::ZERO;
        self.r0.fill(zero);
        self.r0[..m.len()].copy_from_slice(m);
        self.r1.fill(zero);
        self.r1[..interp.len()].copy_from_slice(interp);
        self.v0.fill(zero);
        self.v1.fill(zero);
        self.v1[0] = Elem::ONE;

        let mut d0 = degree(&self.r0);
        let mut d1 = degree(&self.r1);
        while let Some(deg0) = d0 {
            if deg0 < stop {
                break;
            }
            let Some(deg1) = d1 else {
                // The remainder sequence ended on a gcd of degree >= stop:
                // the received word agrees with zero in at least `stop` places.
                return Some(vec![zero; k]);
            };
            let lead_inv = f.inv(self.r1[deg1]).expect("leading coefficient is nonzero");
            let mut cur = Some(deg0);
            while let Some(dr) = cur {
                if dr < deg1 {
                    break;
                }
                let shift = dr - deg1;
                let c = f.mul(self.r0[dr], lead_inv);
                f.axpy(&mut self.r0[shift..=dr], c, &self.r1[..=deg1]);
                self.r0[dr] = zero;
                if let Some(dv) = degree(&self.v1) {
                    if dv + shift < self.v0.len() {
                        f.axpy(&mut self.v0[shift..=shift + dv], c, &self.v1[..=dv]);
                    } else {
                        return None;
                    }
                }
                cur = degree(&self.r0[..dr]);
            }
            std::mem::swap(&mut self.r0, &mut self.r1);
            std::mem::swap(&mut self.v0, &mut self.v1);
            d0 = d1;
            d1 = cur;
        }

        // f = r0 / v0, exact.
        let dv = degree(&self.v0)?;
        let Some(dr) = d0 else {
            return Some(vec![zero; k]);
        };
        if dr < dv || dr - dv >= k {
            return None;
        }
        let inv = f.inv(self.v0[dv]).expect("leading coefficient is nonzero");
        let mut quotient = vec![zero; k];
        for i in (dv..=dr).rev() {
            let c = f.mul(self.r0[i], inv);
            if c.is_zero() {
                continue;
            }
            quotient[i - dv] = c;
            f.axpy(&mut self.r0[i - dv..=i], c, &self.v0[..=dv]);
        }
        self.r0[..dv].iter().all(|c| c.is_zero()).then_some(quotient)
    }
}

/// Whether the twisted decoder stops at the first accepted guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    FirstAccept,
    /// Scans every guess; a second acceptance is an error.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Defaults to `⌊(n-k)/2⌋`.
    pub tau: Option<usize>,
    pub budget: u128,
    pub mode: SearchMode,
    pub parallel: bool,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions { tau: None, budget: DEFAULT_BUDGET, mode: SearchMode::FirstAccept, parallel: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeStats {
    /// Guesses tried, i.e. RS decoding rounds.
    pub rounds: u64,
    /// Rounds where RS decoding produced a polynomial of degree `< k`.
    pub rs_successes: u64,
    /// RS successes discarded because a hook coefficient differed from its guess.
    pub sifted: u64,
    /// Sifted-in candidates whose twisted codeword was too far from the word.
    pub distance_rejections: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub message: Vec<Elem>,
    pub codeword: Vec<Elem>,
    pub error_positions: Vec<usize>,
    pub guesses: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub result: Option<DecodeResult>,
    pub stats: DecodeStats,
}

#[derive(Default)]
struct Counters {
    rounds: AtomicU64,
    rs_successes: AtomicU64,
    sifted: AtomicU64,
    distance_rejections: AtomicU64,
}

impl Counters {
    fn snapshot(&self) -> DecodeStats {
        DecodeStats {
            rounds: self.rounds.load(Ordering::Relaxed),
            rs_successes: self.rs_successes.load(Ordering::Relaxed),
            sifted: self.sifted.load(Ordering::Relaxed),
            distance_rejections: self.distance_rejections.load(Ordering::Relaxed),
        }
    }
}

struct TwistedSearch<'a> {
    params: &'a TwistedCodeParams,
    rs: RsDecoder,
    received: &'a [Elem],
    interp: Vec<Elem>,
    tau: usize,
    q: u128,
    counters: Counters,
}

impl TwistedSearch<'_> {
    /// Guess tuple number `index`: base-q digits, `g_1` most significant,
    /// each digit read as an element bit pattern.
    fn guesses(&self, mut index: u128) -> Vec<Elem> {
        let ell = self.params.ell();
        let mut g = vec![Elem::ZERO; ell];
        for slot in g.iter_mut().rev() {
            *slot = self.params.field.elem((index % self.q) as u64).expect("digit below q");
            index /= self.q;
        }
        g
    }

    fn try_guess(&self, index: u128, work: &mut GaoWork, shifted: &mut Vec<Elem>) -> Option<DecodeResult> {
        let f = &self.params.field;
        let k = self.params.k;
        let g = self.guesses(index);
        shifted.clone_from(&self.interp);
        for (tw, &gi) in self.params.twists.iter().zip(&g) {
            let d = k - 1 + tw.twist;
            shifted[d] = f.sub(shifted[d], f.mul(gi, tw.coeff));
        }
        self.counters.rounds.fetch_add(1, Ordering::Relaxed);
        let message = work.run(f, self.rs.vanishing.coeffs(), shifted, k, self.rs.stop_degree())?;
        self.counters.rs_successes.fetch_add(1, Ordering::Relaxed);
        if self.params.twists.iter().zip(&g).any(|(tw, &gi)| message[tw.hook] != gi) {
            self.counters.sifted.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        let codeword = self.params.encode(&message).expect("message has length k");
        let error_positions: Vec<usize> =
            (0..codeword.len()).filter(|&i| codeword[i] != self.received[i]).collect();
        if error_positions.len() > self.tau {
            self.counters.distance_rejections.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        Some(DecodeResult { message, codeword, error_positions, guesses: g })
    }
}

/// Guess-and-sift decoding of a twisted RS code.
///
/// Guesses are tried in lexicographic order over the `ell`-tuple, each
/// coordinate in field enumeration order. Exactly `q^ell` rounds run when
/// decoding fails.
pub fn twisted_decode(
    received: &[Elem],
    params: &TwistedCodeParams,
    opts: &DecodeOptions,
) -> Result<DecodeReport, DecodeError> {
    params.check()?;
    let (n, k) = (params.n(), params.k);
    let tau = opts.tau.unwrap_or(max_radius(n, k));
    let rs = RsDecoder::new(&params.field, &params.alpha, k)?;
    rs.check_radius(received, tau)?;
    let q = 1u128 << params.field.degree();
    let total = (0..params.ell()).try_fold(1u128, |acc, _| acc.checked_mul(q));
    let total = match total {
        Some(t) if t <= opts.budget => t,
        other => {
            return Err(DecodeError::BudgetExceeded { rounds: other.unwrap_or(u128::MAX), budget: opts.budget })
        }
    };
    let search = TwistedSearch {
        params,
        interp: rs.interpolate(received),
        rs,
        received,
        tau,
        q,
        counters: Counters::default(),
    };
    let accepted = match (opts.parallel, opts.mode) {
        (false, mode) => {
            let mut work = GaoWork::new(n);
            let mut shifted = Vec::with_capacity(n);
            let mut found: Option<DecodeResult> = None;
            for index in 0..total {
                if let Some(r) = search.try_guess(index, &mut work, &mut shifted) {
                    if let Some(first) = &found {
                        return Err(DecodeError::Ambiguous { first: first.guesses.clone(), second: r.guesses });
                    }
                    found = Some(r);
                    if mode == SearchMode::FirstAccept {
                        break;
                    }
                }
            }
            found
        }
        (true, SearchMode::FirstAccept) => (0..total as u64)
            .into_par_iter()
            .map_init(
                || (GaoWork::new(n), Vec::with_capacity(n)),
                |(work, shifted), index| search.try_guess(u128::from(index), work, shifted),
            )
            .find_first(Option::is_some)
            .flatten(),
        (true, SearchMode::Exhaustive) => {
            let mut all: Vec<DecodeResult> = (0..total as u64)
                .into_par_iter()
                .map_init(
                    || (GaoWork::new(n), Vec::with_capacity(n)),
                    |(work, shifted), index| search.try_guess(u128::from(index), work, shifted),
                )
                .flatten()
                .collect();
            if all.len() > 1 {
                return Err(DecodeError::Ambiguous {
                    first: all[0].guesses.clone(),
                    second: all[1].guesses.clone(),
                });
            }
            all.pop()
        }
    };
    Ok(DecodeReport { result: accepted, stats: search.counters.snapshot() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{family_f_params, FamilyProfile, FamilyVariant};
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn add_errors(f: &FieldTower, word: &mut [Elem], weight: usize, rng: &mut ChaCha20Rng) {
        for i in sample(rng, word.len(), weight) {
            word[i] = f.add(word[i], f.random_nonzero(rng));
        }
    }

    #[test]
    fn rs_zero_errors_and_radius_contract() {
        let f = FieldTower::new(4, 0).unwrap();
        let alpha: Vec<Elem> = (1..=15).map(|v| f.elem(v).unwrap()).collect();
        let msg = Poly::from_coeffs((1..=5).map(|v| f.elem(v).unwrap()).collect());
        let cw: Vec<Elem> = alpha.iter().map(|&a| msg.eval(&f, a)).collect();
        assert_eq!(rs_decode(&f, &cw, &alpha, 5, 5).unwrap(), Some(msg));
        assert!(matches!(
            rs_decode(&f, &cw, &alpha, 5, 6),
            Err(DecodeError::RadiusTooLarge { tau: 6, max: 5 })
        ));
        assert_eq!(rs_decode(&f, &[Elem::ZERO; 15], &alpha, 5, 5).unwrap(), Some(Poly::zero()));
    }

    #[test]
    fn rs_corrects_up_to_radius() {
        let f = FieldTower::new(4, 0).unwrap();
        let alpha: Vec<Elem> = (1..=15).map(|v| f.elem(v).unwrap()).collect();
        let dec = RsDecoder::new(&f, &alpha, 5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..200 {
            let msg = Poly::from_coeffs((0..5).map(|_| f.random(&mut rng)).collect());
            let mut word: Vec<Elem> = alpha.iter().map(|&a| msg.eval(&f, a)).collect();
            add_errors(&f, &mut word, 5, &mut rng);
            assert_eq!(dec.decode(&word, 5).unwrap(), Some(msg));
        }
    }

    #[test]
    fn twisted_zero_errors_returns_hook_coefficients() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let p = family_f_params(15, 5, 1, 4, FamilyVariant::Plain, FamilyProfile::Relaxed, &mut rng).unwrap();
        let msg: Vec<Elem> = (0..5).map(|_| p.field.random(&mut rng)).collect();
        let cw = p.encode(&msg).unwrap();
        let report = twisted_decode(&cw, &p, &DecodeOptions::default()).unwrap();
        let res = report.result.unwrap();
        assert_eq!(res.message, msg);
        assert_eq!(res.guesses, vec![msg[p.twists[0].hook]]);
        assert!(res.error_positions.is_empty());
        assert!(report.stats.rounds <= 256);
    }

    #[test]
    fn twisted_parallel_matches_sequential() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let p = family_f_params(15, 5, 1, 4, FamilyVariant::Plain, FamilyProfile::Relaxed, &mut rng).unwrap();
        for _ in 0..5 {
            let msg: Vec<Elem> = (0..5).map(|_| p.field.random(&mut rng)).collect();
            let mut word = p.encode(&msg).unwrap();
            add_errors(&p.field, &mut word, 5, &mut rng);
            let seq = twisted_decode(&word, &p, &DecodeOptions::default()).unwrap();
            let par = twisted_decode(&word, &p, &DecodeOptions { parallel: true, ..Default::default() }).unwrap();
            assert_eq!(seq.result, par.result);
            let ex = twisted_decode(
                &word,
                &p,
                &DecodeOptions { parallel: true, mode: SearchMode::Exhaustive, ..Default::default() },
            )
            .unwrap();
            assert_eq!(ex.result, seq.result);
            assert_eq!(ex.stats.rounds, 256);
        }
    }

    #[test]
    fn budget_guard() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let p = family_f_params(15, 5, 1, 4, FamilyVariant::Plain, FamilyProfile::Relaxed, &mut rng).unwrap();
        let cw = p.encode(&[Elem::ZERO; 5]).unwrap();
        let opts = DecodeOptions { budget: 255, ..Default::default() };
        assert_eq!(
            twisted_decode(&cw, &p, &opts),
            Err(DecodeError::BudgetExceeded { rounds: 256, budget: 255 })
        );
    }
}
