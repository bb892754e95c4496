use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use twisted_rs::code::{
    family_shape, mds_brute_check_with_limit, CodeError, FamilyProfile, FamilyVariant, TwistedCodeParams,
};
use twisted_rs::decode::{DecodeOptions, SearchMode};
use twisted_rs::estimate::{security_estimate, SecurityEstimate, REFERENCE_ROWS};
use twisted_rs::mceliece::{
    ciphertext_from_bytes, ciphertext_to_bytes, decode_message, decrypt_with_stats, encode_message, encrypt,
    key_role, keygen, message_capacity, seed_from_u64, CryptoError, KeyParams, PublicKey, SecretKey,
};
use twisted_rs::schur::{distinguisher_report, Separation};
use twisted_rs::{Elem, FieldTower, Matrix};

const EXIT_HELP: &str = "\
Exit codes:
  0  success
  2  usage error (bad or missing flags)
  3  parameter rejected (a family inequality or code precondition fails)
  4  file I/O error
  5  malformed key, ciphertext, matrix or message
  6  decoding failure (no codeword within the decoding radius)
  7  invariant failure (a computed check disagrees with its certificate)";

#[derive(Parser)]
#[command(name = "twrs", version, about = "Twisted Reed-Solomon codes: parameters, McEliece keys and square-code analysis")]
#[command(after_help = EXIT_HELP)]
struct Cli {
    /// Worker threads for parallel decoding; 1 disables parallelism.
    #[arg(long, global = true, env = "TWRS_THREADS", default_value_t = 1)]
    threads: usize,
    /// `text` for reading, `kv` for `key = value` lines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "F")]
    F,
    #[value(name = "Ftilde")]
    Ftilde,
}

impl From<VariantArg> for FamilyVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::F => FamilyVariant::Plain,
            VariantArg::Ftilde => FamilyVariant::Multiplicative,
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Number of twists, one per tower level.
    #[arg(long = "l", default_value_t = 1)]
    ell: usize,
    /// Base field size, a power of two (`256` or `2^8`).
    #[arg(long, value_parser = parse_q0)]
    q0: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::F)]
    variant: VariantArg,
    /// Enforce only the structural requirements (needed for toy sizes).
    #[arg(long)]
    relaxed: bool,
}

impl FamilyArgs {
    fn profile(&self) -> FamilyProfile {
        if self.relaxed {
            FamilyProfile::Relaxed
        } else {
            FamilyProfile::Strict
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Derive the family parameters r, t, h, q and evaluate every inequality.
    Params(FamilyArgs),
    /// Generate a key pair, written to PREFIX.pub and PREFIX.sec.
    Keygen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt bytes (--input) or raw field symbols (--symbols).
    Encrypt {
        /// Public key (a secret key also works).
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, conflicts_with = "symbols", required_unless_present = "symbols")]
        input: Option<PathBuf>,
        /// k comma-separated hexadecimal field elements.
        #[arg(long)]
        symbols: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext with a secret key.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Write the decoded message bytes here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Decoding radius; defaults to the key's.
        #[arg(long)]
        tau: Option<usize>,
        /// Maximum number of guesses.
        #[arg(long)]
        budget: Option<u128>,
        /// Scan every guess and fail on ambiguity.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Square-code analysis of a key file or a matrix file.
    #[command(after_help = "\
Matrix files hold `q0 = 2^m`, `levels = L` and optionally `modulus = 0x..`
header lines, then one generator row per line as space-separated hex values.
Lines starting with `#` are ignored.")]
    Analyze {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        key: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Shorten at every single position.
        #[arg(long)]
        singles: bool,
        /// Number of random two-position shortenings.
        #[arg(long, default_value_t = 0)]
        pairs: usize,
        /// Seed for the random shortenings.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Work factor, key size and decoding radii.
    Estimate {
        #[arg(long, required_unless_present = "table")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "table")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "table")]
        log2q: Option<u32>,
        #[arg(long, required_unless_present = "table")]
        tau: Option<usize>,
        /// Print the reference comparison rows.
        #[arg(long)]
        table: bool,
    },
}

fn parse_q0(s: &str) -> Result<u32, String> {
    let d = match s.strip_prefix("2^") {
        Some(e) => e.parse::<u32>().map_err(|e| e.to_string())?,
        None => {
            let v: u64 = s.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
            if !v.is_power_of_two() || v < 2 {
                return Err(format!("{v} is not a power of two"));
            }
            v.trailing_zeros()
        }
    };
    if d == 0 || d > 64 {
        return Err(format!("2^{d} is out of range"));
    }
    Ok(d)
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(4, format!("{}: {e}", path.display()))
}

fn code_failure(e: CodeError) -> Failure {
    match e {
        CodeError::Parse { .. } => Failure::new(5, e.to_string()),
        _ => Failure::new(3, format!("parameter rejected: {e}")),
    }
}

fn crypto_failure(e: CryptoError) -> Failure {
    match e {
        CryptoError::DecodingFailure { .. } => Failure::new(6, e.to_string()),
        CryptoError::Code(c) => code_failure(c),
        CryptoError::MessageLength { .. } | CryptoError::MessageTooLong { .. } => Failure::new(3, e.to_string()),
        CryptoError::Integrity(_) => Failure::new(7, e.to_string()),
        _ => Failure::new(5, e.to_string()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Collects output lines in either layout.
struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn new(format: Format) -> Self {
        Out { format, text: String::new() }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Text => writeln!(self.text, "{key:<24} {value}"),
            Format::Kv => writeln!(self.text, "{key} = {value}"),
        }
        .expect("string write");
    }

    fn raw(&mut self, s: &str) {
        self.text += s;
    }
}

fn hex_list(xs: &[Elem]) -> String {
    xs.iter().map(|x| format!("{x:x}")).collect::<Vec<_>>().join(",")
}

fn params_cmd(a: &FamilyArgs, out: &mut Out) -> Result<(), Failure> {
    let shape = family_shape(a.n, a.k, a.ell, a.q0, a.variant.into());
    let profile = a.profile();
    let (t, h) = shape.twists_and_hooks(profile);
    let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    out.kv("n", a.n);
    out.kv("k", a.k);
    out.kv("l", a.ell);
    out.kv("q0", format!("2^{}", a.q0));
    out.kv("variant", shape.variant);
    out.kv("profile", if a.relaxed { "relaxed" } else { "strict" });
    out.kv("r", shape.r);
    out.kv("t", join(&t));
    out.kv("h", join(&h));
    out.kv("q", format!("2^{}", shape.field_degree));
    for c in &shape.checks {
        let status = match (c.holds, c.structural || !a.relaxed) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "fail (ignored)",
        };
        out.kv(&format!("check[{}]", c.name), format!("{status} ({})", c.detail));
    }
    match shape.first_failure(profile) {
        Some(c) => {
            out.kv("valid", "false");
            Err(Failure::new(3, format!("parameter rejected: {} ({})", c.name, c.detail)))
        }
        None => {
            out.kv("valid", "true");
            Ok(())
        }
    }
}

fn keygen_cmd(a: &FamilyArgs, seed: u64, prefix: &Path, out: &mut Out) -> Result<(), Failure> {
    let kp_params = KeyParams {
        n: a.n,
        k: a.k,
        ell: a.ell,
        base_degree: a.q0,
        variant: a.variant.into(),
        profile: a.profile(),
    };
    let kp = keygen(&kp_params, seed_from_u64(seed)).map_err(crypto_failure)?;
    let pub_path = prefix.with_extension("pub");
    let sec_path = prefix.with_extension("sec");
    let pub_bytes = kp.public.to_bytes();
    write(&pub_path, &pub_bytes)?;
    write(&sec_path, &kp.secret.to_bytes())?;
    out.kv("seed", seed);
    out.kv("n", kp.public.n);
    out.kv("k", kp.public.k);
    out.kv("tau", kp.public.tau);
    out.kv("q", format!("2^{}", kp.public.field.degree()));
    out.kv("variant", kp_params.variant);
    out.kv("public_key_bytes", pub_bytes.len());
    out.kv("message_capacity_bytes", message_capacity(kp.public.k, kp.public.field.base_degree()));
    out.kv("public_key", pub_path.display());
    out.kv("secret_key", sec_path.display());
    Ok(())
}

fn load_public(path: &Path) -> Result<PublicKey, Failure> {
    let bytes = read(path)?;
    if key_role(&bytes).map_err(crypto_failure)? {
        SecretKey::from_bytes(&bytes).and_then(|s| s.public_key()).map_err(crypto_failure)
    } else {
        PublicKey::from_bytes(&bytes).map_err(crypto_failure)
    }
}

fn parse_symbols(f: &FieldTower, s: &str) -> Result<Vec<Elem>, Failure> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            let v = u64::from_str_radix(x.trim_start_matches("0x"), 16)
                .map_err(|_| Failure::new(2, format!("bad symbol `{x}`")))?;
            f.elem(v).map_err(|e| Failure::new(2, format!("symbol `{x}`: {e}")))
        })
        .collect()
}

fn encrypt_cmd(
    key: &Path,
    seed: u64,
    input: Option<&Path>,
    symbols: Option<&str>,
    dest: &Path,
    out: &mut Out,
) -> Result<(), Failure> {
    let pk = load_public(key)?;
    let f = &pk.field;
    let msg = match (input, symbols) {
        (Some(p), _) => encode_message(&read(p)?, pk.k, f.base_degree()).map_err(crypto_failure)?,
        (None, Some(s)) => parse_symbols(f, s)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let c = encrypt(&pk, &msg, seed_from_u64(seed)).map_err(crypto_failure)?;
    write(dest, &ciphertext_to_bytes(f, &c))?;
    out.kv("seed", seed);
    out.kv("n", pk.n);
    out.kv("tau", pk.tau);
    out.kv("ciphertext", dest.display());
    Ok(())
}

fn decrypt_cmd(
    key: &Path,
    input: &Path,
    dest: Option<&Path>,
    opts: DecodeOptions,
    out: &mut Out,
) -> Result<(), Failure> {
    let bytes = read(key)?;
    let sk = SecretKey::from_bytes(&bytes).map_err(crypto_failure)?;
    let f = &sk.params.field;
    let c = ciphertext_from_bytes(f, &read(input)?).map_err(crypto_failure)?;
    if c.len() != sk.params.n() {
        return Err(Failure::new(5, format!("ciphertext has length {}, key has n = {}", c.len(), sk.params.n())));
    }
    let (m, stats) = decrypt_with_stats(&sk, &c, &opts).map_err(crypto_failure)?;
    out.kv("tau", opts.tau.unwrap_or(sk.tau));
    out.kv("rounds", stats.rounds);
    out.kv("rs_successes", stats.rs_successes);
    out.kv("sifted", stats.sifted);
    out.kv("distance_rejections", stats.distance_rejections);
    out.kv("symbols", hex_list(&m));
    match decode_message(&m, f.base_degree()) {
        Ok(msg) => {
            out.kv("message_bytes", msg.len());
            if let Some(p) = dest {
                write(p, &msg)?;
                out.kv("message", p.display());
            }
        }
        Err(e) => {
            out.kv("message_bytes", "none");
            if dest.is_some() {
                return Err(crypto_failure(e));
            }
        }
    }
    Ok(())
}

fn parse_matrix_file(text: &str) -> Result<(FieldTower, Matrix), Failure> {
    let bad = |line: usize, msg: &str| Failure::new(5, format!("matrix file line {line}: {msg}"));
    let (mut base, mut levels, mut modulus) = (None, None, None);
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            let v = v.trim();
            match k.trim() {
                "q0" => base = Some(parse_q0(v).map_err(|e| bad(i + 1, &e))?),
                "levels" => levels = Some(v.parse::<u32>().map_err(|_| bad(i + 1, "bad levels"))?),
                "modulus" => {
                    modulus = Some(
                        u64::from_str_radix(v.trim_start_matches("0x"), 16).map_err(|_| bad(i + 1, "bad modulus"))?,
                    )
                }
                other => return Err(bad(i + 1, &format!("unknown key `{other}`"))),
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|x| u64::from_str_radix(x, 16).map_err(|_| bad(i + 1, "bad element")))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((i + 1, row));
    }
    let base = base.ok_or_else(|| Failure::new(5, "matrix file: missing `q0`"))?;
    let levels = levels.unwrap_or(0);
    let field = match modulus {
        Some(m) => FieldTower::with_modulus(base, levels, m),
        None => FieldTower::new(base, levels),
    }
    .map_err(|e| Failure::new(5, format!("matrix file: {e}")))?;
    let elems = rows
        .into_iter()
        .map(|(line, r)| r.into_iter().map(|v| field.elem(v).map_err(|e| bad(line, &e.to_string()))).collect())
        .collect::<Result<Vec<Vec<Elem>>, _>>()?;
    if elems.is_empty() {
        return Err(Failure::new(5, "matrix file: no rows"));
    }
    let m = Matrix::from_rows(elems).map_err(|e| Failure::new(5, format!("matrix file: {e}")))?;
    Ok((field, m))
}

fn systematic_generator(pk: &PublicKey) -> Matrix {
    Matrix::identity(pk.k).hstack(&pk.a).expect("row counts agree")
}

/// Certificate, minors and duality checks on secret parameters.
fn secret_checks(p: &TwistedCodeParams, out: &mut Out) -> Result<(), Failure> {
    let f = &p.field;
    let cert = p.mds_tower_certificate();
    out.kv("mds_certificate", cert);
    let g = p.generator_matrix().map_err(code_failure)?.matrix;
    let brute = match mds_brute_check_with_limit(f, &g, 5_000_000) {
        Ok(b) => Some(b),
        Err(CodeError::BruteForceTooLarge { .. }) => None,
        Err(e) => return Err(code_failure(e)),
    };
    out.kv("mds_brute_check", brute.map_or("skipped (too many minors)".to_string(), |b| b.to_string()));
    if cert && brute == Some(false) {
        return Err(Failure::new(7, "invariant failure: MDS certificate holds but a minor vanishes"));
    }
    if p.alpha_is_multiplicative_group() {
        match p.dual() {
            Ok(d) => {
                let triples: Vec<String> =
                    d.params.twists.iter().map(|t| format!("({},{},{:x})", t.twist, t.hook, t.coeff)).collect();
                out.kv("dual_verified", true);
                out.kv("dual_twists", triples.join(" "));
                let h = p.parity_check_from_vandermonde().map_err(code_failure)?.matrix;
                let ok = g.mul(f, &h.transpose()).map(|x| x.is_zero()).unwrap_or(false);
                out.kv("dual_vandermonde_verified", ok);
                if !ok {
                    return Err(Failure::new(7, "invariant failure: G * H^T != 0 for the explicit parity check"));
                }
            }
            Err(CodeError::DualVerificationFailed) => {
                out.kv("dual_verified", false);
                return Err(Failure::new(7, "invariant failure: explicit dual is not orthogonal"));
            }
            Err(e) => out.kv("dual_verified", format!("not applicable ({e})")),
        }
    } else {
        out.kv("dual_verified", "not applicable (points are not a multiplicative group)");
    }
    Ok(())
}

fn analyze_cmd(
    key: Option<&Path>,
    matrix: Option<&Path>,
    singles: bool,
    pairs: usize,
    seed: u64,
    out: &mut Out,
) -> Result<(), Failure> {
    let mut secret = None;
    let (field, g) = match (key, matrix) {
        (Some(p), _) => {
            let bytes = read(p)?;
            let pk = if key_role(&bytes).map_err(crypto_failure)? {
                let sk = SecretKey::from_bytes(&bytes).map_err(crypto_failure)?;
                let pk = sk.public_key().map_err(crypto_failure)?;
                secret = Some(sk);
                pk
            } else {
                PublicKey::from_bytes(&bytes).map_err(crypto_failure)?
            };
            (pk.field.clone(), systematic_generator(&pk))
        }
        (None, Some(p)) => {
            let text = String::from_utf8(read(p)?).map_err(|_| Failure::new(5, "matrix file is not UTF-8"))?;
            parse_matrix_file(&text)?
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let n = g.cols();
    let mut shortenings: Vec<Vec<usize>> = Vec::new();
    if singles {
        shortenings.extend((0..n).map(|i| vec![i]));
    }
    if pairs > 0 && n >= 2 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        shortenings.extend((0..pairs).map(|_| sample(&mut rng, n, 2).into_vec()));
    }
    let params = secret.as_ref().map(|s| &s.params);
    let report = distinguisher_report(&field, &g, params, &shortenings).map_err(|e| match e {
        twisted_rs::schur::SchurError::RankDeficient { .. } => Failure::new(5, format!("malformed generator: {e}")),
        _ => Failure::new(3, e.to_string()),
    })?;
    out.kv("seed", seed);
    match out.format {
        Format::Kv => out.raw(&report.to_text()),
        Format::Text => {
            out.kv("n", report.n);
            out.kv("k", report.k);
            out.kv("dim_square", format!("{} ({})", report.dim_square, report.square_verdict));
            out.kv("dim_dual_square", format!("{} ({})", report.dim_dual_square, report.dual_square_verdict));
            if let (Some(c7), Some(t6)) = (report.bound_cor7, report.bound_thm6) {
                out.kv("lower_bounds", format!("cor7 {c7}, thm6 {t6}"));
            }
            if let Some((inner, outer)) = report.grs_envelope {
                out.kv("grs_envelope", format!("GRS_{inner} <= C <= GRS_{outer}"));
            }
            if let Separation::Bounds { delta, outer_min, inner_max } = report.separation {
                let inner = inner_max.map_or("vacuous".to_string(), |v| format!("{v:.2}"));
                out.kv("separation", format!("delta {delta}, supercode dim >= {outer_min}, subcode dim <= {inner}"));
            }
            if !report.shortened_dims.is_empty() {
                let full = report.shortened_dims.values().filter(|d| d.square == d.length).count();
                out.kv(
                    "shortenings",
                    format!("{} measured, {full} with square = shortened length", report.shortened_dims.len()),
                );
            }
        }
    }
    if let Some(sk) = &secret {
        secret_checks(&sk.params, out)?;
    }
    Ok(())
}

fn estimate_line(out: &mut Out, e: &SecurityEstimate) {
    match out.format {
        Format::Kv => out.raw(&e.to_text()),
        Format::Text => {
            out.kv("parameters", format!("n = {}, k = {}, q = 2^{}, tau = {}", e.n, e.k, e.log2_q, e.tau));
            out.kv("work factor", format!("W_I >= 2^{} (log2 W_I = {:.3})", e.work_factor_log2.floor(), e.work_factor_log2));
            out.kv("key size", format!("K_sys = {:.1} KB ({:.4})", e.key_size_kb, e.key_size_kb));
            out.kv("unique radius", e.tau_unique);
            out.kv("list radius", format!("{} (Johnson)", e.tau_list));
            out.kv("keyspace", format!("n!(q - sqrt q) = 2^{:.2} parameter choices (upper estimate)", e.keyspace_log2));
        }
    }
}

fn estimate_cmd(
    n: Option<usize>,
    k: Option<usize>,
    log2q: Option<u32>,
    tau: Option<usize>,
    table: bool,
    out: &mut Out,
) -> Result<(), Failure> {
    let reject = |e: twisted_rs::estimate::EstimateError| Failure::new(3, format!("parameter rejected: {e}"));
    if let (Some(n), Some(k), Some(q), Some(t)) = (n, k, log2q, tau) {
        let e = security_estimate(n, k, q, t).map_err(reject)?;
        estimate_line(out, &e);
    }
    if table {
        for row in REFERENCE_ROWS {
            let e = security_estimate(row.n, row.k, row.log2_q, row.tau).map_err(reject)?;
            out.raw("\n");
            match out.format {
                Format::Kv => out.raw(&format!("# {}\n", row.label)),
                Format::Text => out.raw(&format!("[{}]\n", row.label)),
            }
            estimate_line(out, &e);
        }
    }
    Ok(())
}

fn run(cli: Cli, out: &mut Out) -> Result<(), Failure> {
    if cli.threads == 0 {
        return Err(Failure::new(2, "--threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Failure::new(2, format!("thread pool: {e}")))?;
    match cli.command {
        Command::Params(a) => params_cmd(&a, out),
        Command::Keygen { family, seed, out: prefix } => keygen_cmd(&family, seed, &prefix, out),
        Command::Encrypt { key, seed, input, symbols, out: dest } => {
            encrypt_cmd(&key, seed, input.as_deref(), symbols.as_deref(), &dest, out)
        }
        Command::Decrypt { key, input, out: dest, tau, budget, exhaustive } => {
            let mut opts = DecodeOptions { tau, parallel: cli.threads > 1, ..DecodeOptions::default() };
            if let Some(b) = budget {
                opts.budget = b;
            }
            if exhaustive {
                opts.mode = SearchMode::Exhaustive;
            }
            decrypt_cmd(&key, &input, dest.as_deref(), opts, out)
        }
        Command::Analyze { key, matrix, singles, pairs, seed } => {
            analyze_cmd(key.as_deref(), matrix.as_deref(), singles, pairs, seed, out)
        }
        Command::Estimate { n, k, log2q, tau, table } => estimate_cmd(n, k, log2q, tau, table, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.format);
    let res = run(cli, &mut out);
    print!("{}", out.text);
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("twrs: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
