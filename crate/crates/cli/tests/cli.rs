use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn twrs(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twrs"))
        .args(args)
        .current_dir(dir)
        .env_remove("TWRS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn kv(o: &Output, key: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.split_once(" = ").filter(|(k, _)| k.trim() == key).map(|(_, v)| v.trim().to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{}", stdout(o)))
}

fn toy_keys(dir: &Path, seed: &str) {
    let o = twrs(
        &["keygen", "--n", "15", "--k", "5", "--q0", "16", "--relaxed", "--seed", seed, "--out", "toy"],
        dir,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn params_full_size_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = twrs(&["params", "--n", "255", "--k", "117", "--l", "1", "--q0", "256", "--format", "kv"], dir.path());
    assert!(o.status.success());
    assert_eq!(kv(&o, "r"), "88");
    assert_eq!(kv(&o, "t"), "57");
    assert_eq!(kv(&o, "h"), "88");
    assert_eq!(kv(&o, "q"), "2^16");
    assert_eq!(kv(&o, "valid"), "true");
}

#[test]
fn params_rejection_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = twrs(&["params", "--n", "100", "--k", "10", "--q0", "256"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2*sqrt(n) + 6 < k"));
}

#[test]
fn estimate_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = twrs(&["estimate", "--n", "255", "--k", "117", "--log2q", "16", "--tau", "69"], dir.path());
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("W_I >= 2^105"), "{s}");
    assert!(s.contains("K_sys = 31.5 KB"), "{s}");
}

#[test]
fn estimate_rejects_large_tau() {
    let dir = tempfile::tempdir().unwrap();
    let o = twrs(&["estimate", "--n", "15", "--k", "5", "--log2q", "8", "--tau", "10"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = twrs(&["keygen", "--n", "15"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_documents_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let s = stdout(&twrs(&["--help"], dir.path()));
    for code in ["3  parameter rejected", "4  file I/O", "5  malformed", "6  decoding failure", "7  invariant"] {
        assert!(s.contains(code), "{code} missing from help");
    }
}

#[test]
fn symbol_round_trip_and_reproducible_keys() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    toy_keys(a.path(), "11");
    toy_keys(b.path(), "11");
    assert_eq!(fs::read(a.path().join("toy.pub")).unwrap(), fs::read(b.path().join("toy.pub")).unwrap());
    assert_eq!(fs::read(a.path().join("toy.sec")).unwrap(), fs::read(b.path().join("toy.sec")).unwrap());

    let o = twrs(&["encrypt", "--key", "toy.pub", "--seed", "5", "--symbols", "a,0,ff,3,1c", "--out", "c"], a.path());
    assert!(o.status.success());
    assert_eq!(kv(&twrs(&["encrypt", "--key", "toy.pub", "--seed", "5", "--symbols", "a,0,ff,3,1c", "--out", "c",
        "--format", "kv"], a.path()), "seed"), "5");
    let o = twrs(&["decrypt", "--key", "toy.sec", "--input", "c", "--format", "kv"], a.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(kv(&o, "symbols"), "a,0,ff,3,1c");
}

#[test]
fn byte_message_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = twrs(&["keygen", "--n", "31", "--k", "12", "--q0", "32", "--relaxed", "--seed", "2", "--out", "k",
        "--format", "kv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(kv(&o, "message_capacity_bytes"), "5");
    fs::write(d.join("m.txt"), b"hello").unwrap();
    assert!(twrs(&["encrypt", "--key", "k.pub", "--seed", "9", "--input", "m.txt", "--out", "c"], d).status.success());
    let o = twrs(&["decrypt", "--key", "k.sec", "--input", "c", "--out", "m.out"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(d.join("m.out")).unwrap(), b"hello");

    fs::write(d.join("long.txt"), b"too long!").unwrap();
    let o = twrs(&["encrypt", "--key", "k.pub", "--seed", "9", "--input", "long.txt", "--out", "c2"], d);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tampered_ciphertext_is_a_decoding_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    toy_keys(d, "4");
    // The zero message makes the ciphertext equal to the error vector.
    let o = twrs(&["encrypt", "--key", "toy.pub", "--seed", "8", "--symbols", "0,0,0,0,0", "--out", "c",
        "--format", "kv"], d);
    let tau: usize = kv(&o, "tau").parse().unwrap();
    let mut bytes = fs::read(d.join("c")).unwrap();
    let body = &mut bytes[6..];
    assert_eq!(body.iter().filter(|&&b| b != 0).count(), tau);
    let mut added = 0;
    for b in body.iter_mut() {
        if *b == 0 && added < 3 {
            *b = 0x5a;
            added += 1;
        }
    }
    assert_eq!(body.iter().filter(|&&b| b != 0).count(), tau + 3);
    fs::write(d.join("c"), &bytes).unwrap();
    let o = twrs(&["decrypt", "--key", "toy.sec", "--input", "c"], d);
    assert_eq!(o.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&o.stderr).contains("decoding failure"));
}

#[test]
fn malformed_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = twrs(&["decrypt", "--key", "absent.sec", "--input", "c"], d);
    assert_eq!(o.status.code(), Some(4));
    fs::write(d.join("junk.sec"), b"not a key at all, clearly").unwrap();
    fs::write(d.join("c"), b"TRSC").unwrap();
    let o = twrs(&["decrypt", "--key", "junk.sec", "--input", "c"], d);
    assert_eq!(o.status.code(), Some(5));
    toy_keys(d, "1");
    let o = twrs(&["decrypt", "--key", "toy.pub", "--input", "c"], d);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn analyze_secret_key_reports_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = twrs(&["keygen", "--n", "15", "--k", "5", "--q0", "16", "--relaxed", "--variant", "Ftilde", "--seed", "3",
        "--out", "g"], d);
    assert!(o.status.success());
    let o = twrs(&["analyze", "--key", "g.sec", "--singles", "--pairs", "4", "--format", "kv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(kv(&o, "mds_certificate"), "true");
    assert_eq!(kv(&o, "mds_brute_check"), "true");
    assert_eq!(kv(&o, "dual_verified"), "true");
    assert_eq!(kv(&o, "dim_dual_square"), "15");
    let sq: usize = kv(&o, "dim_square").parse().unwrap();
    let c7: usize = kv(&o, "bound_cor7").parse().unwrap();
    assert!(c7 <= sq);
    assert!(stdout(&o).contains("# positions"));
}

#[test]
fn analyze_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // A [7,3] Reed-Solomon code over GF(8): rows are 1, x, x^2 at the nonzero elements.
    let f = twisted_rs::FieldTower::new(3, 0).unwrap();
    let alpha: Vec<_> = f.elements().filter(|x| !x.is_zero()).collect();
    let mut text = String::from("q0 = 2^3\nlevels = 0\n");
    for e in 0..3u64 {
        let row: Vec<String> = alpha.iter().map(|&a| format!("{:x}", f.pow(a, e))).collect();
        text += &row.join(" ");
        text += "\n";
    }
    fs::write(d.join("m.txt"), text).unwrap();
    let o = twrs(&["analyze", "--matrix", "m.txt", "--format", "kv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(kv(&o, "dim_square"), "5");
    assert_eq!(kv(&o, "verdict_square"), "GRS-like");

    fs::write(d.join("bad.txt"), "q0 = 2^3\n1 2 zz\n").unwrap();
    assert_eq!(twrs(&["analyze", "--matrix", "bad.txt"], d).status.code(), Some(5));
}

#[test]
fn threads_flag_gives_same_result() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    toy_keys(d, "6");
    assert!(twrs(&["encrypt", "--key", "toy.sec", "--seed", "1", "--symbols", "1,2,3,4,5", "--out", "c"], d)
        .status
        .success());
    let o = twrs(&["--threads", "4", "decrypt", "--key", "toy.sec", "--input", "c", "--format", "kv"], d);
    assert!(o.status.success());
    assert_eq!(kv(&o, "symbols"), "1,2,3,4,5");
}
