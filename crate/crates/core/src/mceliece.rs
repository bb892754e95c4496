//! Textbook McEliece over twisted RS codes with a systematic public key.
//!
//! Research code: no CCA transform, no KEM wrapper and no constant-time
//! guarantees.
//!
//! Binary formats (all integers little-endian, elements `⌈m/8⌉` bytes each):
//!
//! ```text
//! key:        "TRS1" | version u8 | role u8 (0 public, 1 secret) | m0 u8
//!             | modulus u64 | levels u8 | n u16 | k u16 | tau u16 | payload
//! public:     A (k × (n-k), row-major)
//! secret:     t[levels] u16 | h[levels] u16 | eta[levels] | alpha[n]
//!             | T (k × k, row-major) | seed [32]
//! ciphertext: "TRSC" | n u16 | elements[n]
//! ```
//!
//! `modulus` is the top-field modulus with its leading term dropped. `T` is
//! the basis change with `G = T · [I | A]` for the secret generator `G`.
//! Version 1 keys derive all randomness from ChaCha20 seeded with `seed`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::code::{
    family_f_params, systematic_form, CodeError, FamilyProfile, FamilyVariant, Twist, TwistedCodeParams,
};
use crate::decode::{max_radius, twisted_decode, DecodeError, DecodeOptions, DecodeStats};
use crate::gf::{Elem, FieldTower, GfError};
use crate::linalg::Matrix;

pub const KEY_MAGIC: &[u8; 4] = b"TRS1";
pub const CIPHERTEXT_MAGIC: &[u8; 4] = b"TRSC";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 22;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CryptoError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("expected a {expected} key, found a {found} key")]
    WrongRole { expected: &'static str, found: &'static str },
    #[error("unknown key role byte {0}")]
    UnknownRole(u8),
    #[error("file truncated: need {need} bytes, have {have}")]
    Truncated { need: usize, have: usize },
    #[error("{0} unexpected trailing bytes")]
    TrailingBytes(usize),
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("message has length {got}, expected {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("message of {len} bytes exceeds capacity of {capacity} bytes")]
    MessageTooLong { len: usize, capacity: usize },
    #[error("malformed message encoding: {0}")]
    MalformedMessage(&'static str),
    #[error("decoding failure: no codeword within distance {tau}")]
    DecodingFailure { tau: usize, stats: DecodeStats },
    #[error("integrity failure: {0}")]
    Integrity(&'static str),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub field: FieldTower,
    pub n: usize,
    pub k: usize,
    pub tau: usize,
    /// The non-identity part of the systematic generator `[I | A]`.
    pub a: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    pub params: TwistedCodeParams,
    pub tau: usize,
    /// `T` with `G = T · [I | A]`.
    pub transform: Matrix,
    pub seed: [u8; 32],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub public: PublicKey,
    pub secret: SecretKey,
}

/// Expands a `u64` seed to the 32-byte seed format: little-endian in the
/// first 8 bytes, the rest zero.
pub fn seed_from_u64(seed: u64) -> [u8; 32] {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s
}

/// Keygen request parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyParams {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub base_degree: u32,
    pub variant: FamilyVariant,
    pub profile: FamilyProfile,
}

pub fn keygen(p: &KeyParams, seed: [u8; 32]) -> Result<KeyPair, CryptoError> {
    let mut rng = ChaCha20Rng::from_seed(seed);
    let params = family_f_params(p.n, p.k, p.ell, p.base_degree, p.variant, p.profile, &mut rng)?;
    keypair_from_params(params, seed)
}

/// Builds the key pair for explicit secret parameters.
pub fn keypair_from_params(params: TwistedCodeParams, seed: [u8; 32]) -> Result<KeyPair, CryptoError> {
    let f = params.field.clone();
    let (n, k) = (params.n(), params.k);
    let g = params.generator_matrix()?;
    let sys = systematic_form(&f, &g)?;
    let transform = g.matrix.select_columns(&(0..k).collect::<Vec<_>>());
    let a = sys.matrix.select_columns(&(k..n).collect::<Vec<_>>());
    let tau = max_radius(n, k);
    Ok(KeyPair {
        public: PublicKey { field: f, n, k, tau, a },
        secret: SecretKey { params, tau, transform, seed },
    })
}

impl PublicKey {
    /// `m · [I | A]`.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>, CryptoError> {
        if message.len() != self.k {
            return Err(CryptoError::MessageLength { expected: self.k, got: message.len() });
        }
        let mut c = message.to_vec();
        c.extend(self.a.vec_mul(&self.field, message).expect("length checked"));
        Ok(c)
    }

    /// The full systematic generator `[I | A]`.
    pub fn systematic_generator(&self) -> Matrix {
        Matrix::identity(self.k).hstack(&self.a).expect("row counts agree")
    }
}

/// Adds exactly `weight` errors with uniformly random support and nonzero
/// values.
pub fn add_random_errors(f: &FieldTower, word: &mut [Elem], weight: usize, rng: &mut ChaCha20Rng) {
    for i in sample(rng, word.len(), weight.min(word.len())) {
        word[i] = f.add(word[i], f.random_nonzero(rng));
    }
}

/// `m · [I | A] + e` with `e` of weight exactly `tau`.
pub fn encrypt(public: &PublicKey, message: &[Elem], seed: [u8; 32]) -> Result<Vec<Elem>, CryptoError> {
    let mut c = public.encode(message)?;
    let mut rng = ChaCha20Rng::from_seed(seed);
    add_random_errors(&public.field, &mut c, public.tau, &mut rng);
    Ok(c)
}

/// Decodes with the secret code and maps the result back to public-key
/// message coordinates.
pub fn decrypt(secret: &SecretKey, ciphertext: &[Elem], opts: &DecodeOptions) -> Result<Vec<Elem>, CryptoError> {
    decrypt_with_stats(secret, ciphertext, opts).map(|(m, _)| m)
}

pub fn decrypt_with_stats(
    secret: &SecretKey,
    ciphertext: &[Elem],
    opts: &DecodeOptions,
) -> Result<(Vec<Elem>, DecodeStats), CryptoError> {
    let p = &secret.params;
    let f = &p.field;
    let opts = DecodeOptions { tau: Some(opts.tau.unwrap_or(secret.tau)), ..opts.clone() };
    let report = twisted_decode(ciphertext, p, &opts)?;
    let Some(res) = report.result else {
        return Err(CryptoError::DecodingFailure { tau: opts.tau.unwrap_or(secret.tau), stats: report.stats });
    };
    let m = secret.transform.vec_mul(f, &res.message).map_err(|_| CryptoError::Integrity("transform shape"))?;
    if m[..] != res.codeword[..p.k] {
        return Err(CryptoError::Integrity("decoded codeword is not systematic in the public basis"));
    }
    Ok((m, report.stats))
}

struct Header {
    role: u8,
    base_degree: u32,
    modulus: u64,
    levels: u32,
    n: usize,
    k: usize,
    tau: usize,
}

fn write_header(out: &mut Vec<u8>, role: u8, f: &FieldTower, n: usize, k: usize, tau: usize) {
    out.extend_from_slice(KEY_MAGIC);
    out.push(FORMAT_VERSION);
    out.push(role);
    out.push(f.base_degree() as u8);
    out.extend_from_slice(&f.modulus().to_le_bytes());
    out.push(f.levels() as u8);
    out.extend_from_slice(&(n as u16).to_le_bytes());
    out.extend_from_slice(&(k as u16).to_le_bytes());
    out.extend_from_slice(&(tau as u16).to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], CryptoError> {
        let need = self.pos + len;
        if need > self.bytes.len() {
            return Err(CryptoError::Truncated { need, have: self.bytes.len() });
        }
        let s = &self.bytes[self.pos..need];
        self.pos = need;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, CryptoError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<usize, CryptoError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]) as usize)
    }

    fn elem(&mut self, f: &FieldTower) -> Result<Elem, CryptoError> {
        Ok(f.read_elem(self.take(f.byte_width())?)?)
    }

    fn elems(&mut self, f: &FieldTower, count: usize) -> Result<Vec<Elem>, CryptoError> {
        (0..count).map(|_| self.elem(f)).collect()
    }

    fn finish(&self) -> Result<(), CryptoError> {
        match self.bytes.len() - self.pos {
            0 => Ok(()),
            extra => Err(CryptoError::TrailingBytes(extra)),
        }
    }
}

fn role_name(role: u8) -> &'static str {
    match role {
        0 => "public",
        1 => "secret",
        _ => "unknown",
    }
}

fn read_header(r: &mut Reader<'_>) -> Result<Header, CryptoError> {
    if r.take(4)? != KEY_MAGIC {
        return Err(CryptoError::BadMagic);
    }
    let version = r.u8()?;
    if version != FORMAT_VERSION {
        return Err(CryptoError::UnsupportedVersion(version));
    }
    let role = r.u8()?;
    if role > 1 {
        return Err(CryptoError::UnknownRole(role));
    }
    let base_degree = u32::from(r.u8()?);
    let m = r.take(8)?;
    let modulus = u64::from_le_bytes(m.try_into().expect("8 bytes"));
    let levels = u32::from(r.u8()?);
    let (n, k, tau) = (r.u16()?, r.u16()?, r.u16()?);
    if k == 0 || k >= n {
        return Err(CryptoError::HeaderMismatch(format!("k = {k} must satisfy 0 < k < n = {n}")));
    }
    if tau > max_radius(n, k) {
        return Err(CryptoError::HeaderMismatch(format!("tau = {tau} above {}", max_radius(n, k))));
    }
    Ok(Header { role, base_degree, modulus, levels, n, k, tau })
}

fn expect_role(h: &Header, role: u8) -> Result<(), CryptoError> {
    if h.role != role {
        return Err(CryptoError::WrongRole { expected: role_name(role), found: role_name(h.role) });
    }
    Ok(())
}

/// Reads only the role byte of a key file: `Some(false)` public,
/// `Some(true)` secret.
pub fn key_role(bytes: &[u8]) -> Result<bool, CryptoError> {
    let h = read_header(&mut Reader { bytes, pos: 0 })?;
    Ok(h.role == 1)
}

impl PublicKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.a.data().len() * self.field.byte_width());
        write_header(&mut out, 0, &self.field, self.n, self.k, self.tau);
        for &x in self.a.data() {
            self.field.write_elem(x, &mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CryptoError> {
        let mut r = Reader { bytes, pos: 0 };
        let h = read_header(&mut r)?;
        expect_role(&h, 0)?;
        let field = FieldTower::with_modulus(h.base_degree, h.levels, h.modulus)?;
        let data = r.elems(&field, h.k * (h.n - h.k))?;
        r.finish()?;
        let a = Matrix::from_vec(h.k, h.n - h.k, data).expect("length matches");
        Ok(PublicKey { field, n: h.n, k: h.k, tau: h.tau, a })
    }
}

impl SecretKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.params;
        let f = &p.field;
        let mut out = Vec::new();
        write_header(&mut out, 1, f, p.n(), p.k, self.tau);
        for tw in &p.twists {
            out.extend_from_slice(&(tw.twist as u16).to_le_bytes());
        }
        for tw in &p.twists {
            out.extend_from_slice(&(tw.hook as u16).to_le_bytes());
        }
        for tw in &p.twists {
            f.write_elem(tw.coeff, &mut out);
        }
        for &a in &p.alpha {
            f.write_elem(a, &mut out);
        }
        for &x in self.transform.data() {
            f.write_elem(x, &mut out);
        }
        out.extend_from_slice(&self.seed);
        out
    }

    /// Parses and re-validates: parameters must be valid and the stored
    /// transform must equal the left block of the generator.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CryptoError> {
        let mut r = Reader { bytes, pos: 0 };
        let h = read_header(&mut r)?;
        expect_role(&h, 1)?;
        let field = FieldTower::with_modulus(h.base_degree, h.levels, h.modulus)?;
        let ell = h.levels as usize;
        let t: Vec<usize> = (0..ell).map(|_| r.u16()).collect::<Result<_, _>>()?;
        let hooks: Vec<usize> = (0..ell).map(|_| r.u16()).collect::<Result<_, _>>()?;
        let eta = r.elems(&field, ell)?;
        let alpha = r.elems(&field, h.n)?;
        let tdata = r.elems(&field, h.k * h.k)?;
        let seed: [u8; 32] = r.take(32)?.try_into().expect("32 bytes");
        r.finish()?;
        let twists = t
            .into_iter()
            .zip(hooks)
            .zip(eta)
            .map(|((twist, hook), coeff)| Twist { twist, hook, coeff })
            .collect();
        let params = TwistedCodeParams::new(field, h.k, twists, alpha)?;
        let transform = Matrix::from_vec(h.k, h.k, tdata).expect("length matches");
        let g = params.generator_matrix()?.matrix;
        if g.select_columns(&(0..h.k).collect::<Vec<_>>()) != transform {
            return Err(CryptoError::Integrity("stored basis change does not match the code"));
        }
        Ok(SecretKey { params, tau: h.tau, transform, seed })
    }

    /// Recomputes the public key.
    pub fn public_key(&self) -> Result<PublicKey, CryptoError> {
        let mut kp = keypair_from_params(self.params.clone(), self.seed)?;
        kp.public.tau = self.tau;
        Ok(kp.public)
    }
}

pub fn ciphertext_to_bytes(f: &FieldTower, c: &[Elem]) -> Vec<u8> {
    let mut out = Vec::with_capacity(6 + c.len() * f.byte_width());
    out.extend_from_slice(CIPHERTEXT_MAGIC);
    out.extend_from_slice(&(c.len() as u16).to_le_bytes());
    for &x in c {
        f.write_elem(x, &mut out);
    }
    out
}

pub fn ciphertext_from_bytes(f: &FieldTower, bytes: &[u8]) -> Result<Vec<Elem>, CryptoError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != CIPHERTEXT_MAGIC {
        return Err(CryptoError::BadMagic);
    }
    let n = r.u16()?;
    let c = r.elems(f, n)?;
    r.finish()?;
    Ok(c)
}

/// Bytes that fit in `k` symbols of `base_degree` bits after the 2-byte
/// length prefix.
pub fn message_capacity(k: usize, base_degree: u32) -> usize {
    (k * base_degree as usize / 8).saturating_sub(2)
}

/// Packs `u16` length ‖ bytes into `base_degree`-bit symbols (least
/// significant bit first), zero-padded to `k` symbols.
pub fn encode_message(bytes: &[u8], k: usize, base_degree: u32) -> Result<Vec<Elem>, CryptoError> {
    let capacity = message_capacity(k, base_degree);
    if bytes.len() > capacity || bytes.len() > usize::from(u16::MAX) {
        return Err(CryptoError::MessageTooLong { len: bytes.len(), capacity });
    }
    let mut stream = (bytes.len() as u16).to_le_bytes().to_vec();
    stream.extend_from_slice(bytes);
    let w = base_degree as usize;
    let bit = |i: usize| stream.get(i / 8).map_or(0u64, |b| u64::from((b >> (i % 8)) & 1));
    Ok((0..k)
        .map(|s| {
            let v = (0..w).fold(0u64, |acc, j| acc | (bit(s * w + j) << j));
            Elem::from_value_unchecked(v)
        })
        .collect())
}

/// Inverse of [`encode_message`].
pub fn decode_message(symbols: &[Elem], base_degree: u32) -> Result<Vec<u8>, CryptoError> {
    let w = base_degree as usize;
    let limit = if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
    if symbols.iter().any(|s| s.value() > limit) {
        return Err(CryptoError::MalformedMessage("symbol wider than the base field"));
    }
    let total_bits = symbols.len() * w;
    let mut stream = vec![0u8; total_bits.div_ceil(8)];
    for (s, sym) in symbols.iter().enumerate() {
        for j in 0..w {
            if (sym.value() >> j) & 1 == 1 {
                let i = s * w + j;
                stream[i / 8] |= 1 << (i % 8);
            }
        }
    }
    if stream.len() < 2 {
        return Err(CryptoError::MalformedMessage("too short for the length prefix"));
    }
    let len = usize::from(u16::from_le_bytes([stream[0], stream[1]]));
    if len > message_capacity(symbols.len(), base_degree) {
        return Err(CryptoError::MalformedMessage("length prefix exceeds capacity"));
    }
    if stream[2 + len..].iter().any(|&b| b != 0) {
        return Err(CryptoError::MalformedMessage("nonzero padding"));
    }
    Ok(stream[2..2 + len].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> KeyParams {
        KeyParams {
            n: 15,
            k: 5,
            ell: 1,
            base_degree: 4,
            variant: FamilyVariant::Plain,
            profile: FamilyProfile::Relaxed,
        }
    }

    #[test]
    fn keygen_is_deterministic() {
        let a = keygen(&toy(), seed_from_u64(1)).unwrap();
        let b = keygen(&toy(), seed_from_u64(1)).unwrap();
        assert_eq!(a.public.to_bytes(), b.public.to_bytes());
        assert_eq!(a.secret.to_bytes(), b.secret.to_bytes());
        let c = keygen(&toy(), seed_from_u64(2)).unwrap();
        assert_ne!(a.secret.to_bytes(), c.secret.to_bytes());
    }

    #[test]
    fn public_row_space_matches_secret() {
        let kp = keygen(&toy(), seed_from_u64(3)).unwrap();
        let f = &kp.public.field;
        let g = kp.secret.params.generator_matrix().unwrap().matrix;
        let stacked = g.vstack(&kp.public.systematic_generator()).unwrap();
        assert_eq!(stacked.rank(f), 5);
        assert_eq!(kp.secret.transform.mul(f, &kp.public.systematic_generator()).unwrap(), g);
    }

    #[test]
    fn round_trip_and_error_weight() {
        let kp = keygen(&toy(), seed_from_u64(4)).unwrap();
        let f = &kp.public.field;
        let msg: Vec<Elem> = (1..=5).map(|v| f.elem(v * 37).unwrap()).collect();
        let c = encrypt(&kp.public, &msg, seed_from_u64(99)).unwrap();
        let cw = kp.public.encode(&msg).unwrap();
        assert_eq!(c.iter().zip(&cw).filter(|(a, b)| a != b).count(), kp.public.tau);
        assert_eq!(decrypt(&kp.secret, &c, &DecodeOptions::default()).unwrap(), msg);
        assert_eq!(decrypt(&kp.secret, &cw, &DecodeOptions::default()).unwrap(), msg);
    }

    #[test]
    fn key_serialization_round_trip() {
        let kp = keygen(&toy(), seed_from_u64(5)).unwrap();
        let pb = kp.public.to_bytes();
        assert_eq!(pb.len(), HEADER_LEN + 5 * 10);
        assert_eq!(PublicKey::from_bytes(&pb).unwrap(), kp.public);
        let sb = kp.secret.to_bytes();
        let sk = SecretKey::from_bytes(&sb).unwrap();
        assert_eq!(sk.to_bytes(), sb);
        assert_eq!(sk.public_key().unwrap(), kp.public);

        let mut bad = pb.clone();
        bad[0] = b'X';
        assert_eq!(PublicKey::from_bytes(&bad), Err(CryptoError::BadMagic));
        assert!(matches!(PublicKey::from_bytes(&pb[..pb.len() - 1]), Err(CryptoError::Truncated { .. })));
        assert!(matches!(PublicKey::from_bytes(&sb), Err(CryptoError::WrongRole { .. })));
        let mut dup = sb.clone();
        // alpha[1] := alpha[0]
        let w = kp.public.field.byte_width();
        let alpha0 = HEADER_LEN + 2 + 2 + w;
        let first = dup[alpha0..alpha0 + w].to_vec();
        dup[alpha0 + w..alpha0 + 2 * w].copy_from_slice(&first);
        assert!(matches!(SecretKey::from_bytes(&dup), Err(CryptoError::Code(CodeError::InvalidParams(_)))));
    }

    #[test]
    fn ciphertext_format() {
        let f = FieldTower::new(4, 1).unwrap();
        let c: Vec<Elem> = (0..15).map(|v| f.elem(v * 17).unwrap()).collect();
        let b = ciphertext_to_bytes(&f, &c);
        assert_eq!(ciphertext_from_bytes(&f, &b).unwrap(), c);
        assert_eq!(ciphertext_from_bytes(&f, &b[1..]), Err(CryptoError::BadMagic));
    }

    #[test]
    fn message_codec() {
        let m = encode_message(b"hi there", 30, 8).unwrap();
        assert_eq!(decode_message(&m, 8).unwrap(), b"hi there");
        let m = encode_message(b"", 5, 4).unwrap();
        assert_eq!(decode_message(&m, 4).unwrap(), b"");
        assert!(matches!(encode_message(b"abc", 5, 4), Err(CryptoError::MessageTooLong { .. })));
        let m = encode_message(b"abcdef", 13, 7).unwrap();
        assert_eq!(decode_message(&m, 7).unwrap(), b"abcdef");
    }
}
