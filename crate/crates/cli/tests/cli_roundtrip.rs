//! End-to-end runs of the `rec` binary: files in, files out, exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

fn rec() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rec"))
}

fn write_records(path: &Path, values: &[f64]) {
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    fs::write(path, text).unwrap();
}

fn read_records(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect()
}

#[test]
fn encode_decode_roundtrip_every_codec() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("xs.txt");
    write_records(&input, &(0..64).map(|i| (i % 16) as f64).collect::<Vec<_>>());
    for codec in ["rejection", "pfr", "dq", "lq"] {
        let container = dir.path().join(format!("{codec}.recb"));
        let output = dir.path().join(format!("{codec}.out.txt"));
        let status = rec()
            .args(["encode", "--mechanism", "uniform-additive", "--params", "16"])
            .args(["--codec", codec, "--seed", "7"])
            .arg(&input)
            .args(["--out".as_ref(), container.as_os_str()])
            .status()
            .unwrap();
        assert!(status.success(), "{codec} encode failed");
        let status = rec()
            .arg("decode")
            .arg(&container)
            .args(["--out".as_ref(), output.as_os_str()])
            .status()
            .unwrap();
        assert!(status.success(), "{codec} decode failed");
        let xs = read_records(&input);
        let ys = read_records(&output);
        assert_eq!(xs.len(), ys.len());
        for (x, y) in xs.iter().zip(&ys) {
            // every codec here simulates an additive perturbation bounded
            // by half a grid step
            assert!((y - x).abs() <= 0.5 + 1e-12, "{codec}: x={x} y={y}");
        }
    }
}

#[test]
fn encode_twice_is_byte_identical_and_decode_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("xs.txt");
    write_records(&input, &[0.0, 3.0, 15.0, 8.0, 8.0]);
    let (a, b) = (dir.path().join("a.recb"), dir.path().join("b.recb"));
    for out in [&a, &b] {
        let status = rec()
            .args(["encode", "--mechanism", "uniform-additive", "--params", "16"])
            .args(["--codec", "pfr", "--seed", "99"])
            .arg(&input)
            .args(["--out".as_ref(), out.as_os_str()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let (d1, d2) = (dir.path().join("d1.txt"), dir.path().join("d2.txt"));
    for out in [&d1, &d2] {
        let status = rec()
            .arg("decode")
            .arg(&a)
            .args(["--out".as_ref(), out.as_os_str()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(fs::read(&d1).unwrap(), fs::read(&d2).unwrap());
}

#[test]
fn corrupted_magic_is_refused_with_format_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("xs.txt");
    write_records(&input, &[1.0, 2.0]);
    let container = dir.path().join("c.recb");
    assert!(rec()
        .args(["encode", "--mechanism", "uniform-additive", "--params", "4"])
        .args(["--codec", "dq", "--seed", "1"])
        .arg(&input)
        .args(["--out".as_ref(), container.as_os_str()])
        .status()
        .unwrap()
        .success());
    let mut bytes = fs::read(&container).unwrap();
    bytes[0] = b'Z';
    fs::write(&container, bytes).unwrap();
    let status = rec()
        .arg("decode")
        .arg(&container)
        .args(["--out".as_ref(), dir.path().join("d.txt").as_os_str()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn out_of_alphabet_record_is_a_codec_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("xs.txt");
    write_records(&input, &[1.0, 99.0]);
    let status = rec()
        .args(["encode", "--mechanism", "uniform-additive", "--params", "4"])
        .args(["--codec", "rejection", "--seed", "1"])
        .arg(&input)
        .args(["--out".as_ref(), dir.path().join("c.recb").as_os_str()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn gaussian_selection_requires_finite_budget() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("xs.txt");
    write_records(&input, &[0.1, -0.3]);
    let container = dir.path().join("g.recb");
    // refused without a budget
    let status = rec()
        .args(["encode", "--mechanism", "gaussian", "--params", "1,0.5"])
        .args(["--codec", "pfr", "--seed", "5"])
        .arg(&input)
        .args(["--out".as_ref(), container.as_os_str()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // accepted with one
    let status = rec()
        .args(["encode", "--mechanism", "gaussian", "--params", "1,0.5"])
        .args(["--codec", "pfr", "--seed", "5", "--budget", "1000000"])
        .arg(&input)
        .args(["--out".as_ref(), container.as_os_str()])
        .status()
        .unwrap();
    assert!(status.success());
    let out = dir.path().join("g.txt");
    assert!(rec()
        .arg("decode")
        .arg(&container)
        .args(["--out".as_ref(), out.as_os_str()])
        .status()
        .unwrap()
        .success());
    assert_eq!(read_records(&out).len(), 2);
}

#[test]
fn verify_subset_passes_and_fault_injection_fails() {
    let status = rec()
        .args(["verify", "--suite", "ordered-uniforms", "--seed", "42"])
        .status()
        .unwrap();
    assert!(status.success());
    let status = rec()
        .args(["verify", "--suite", "randomness", "--inject-fault", "biased-uniform"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn empty_input_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "").unwrap();
    let container = dir.path().join("empty.recb");
    assert!(rec()
        .args(["encode", "--mechanism", "uniform-additive", "--params", "16"])
        .args(["--codec", "dq", "--seed", "3"])
        .arg(&input)
        .args(["--out".as_ref(), container.as_os_str()])
        .status()
        .unwrap()
        .success());
    let out = dir.path().join("empty.out");
    assert!(rec()
        .arg("decode")
        .arg(&container)
        .args(["--out".as_ref(), out.as_os_str()])
        .status()
        .unwrap()
        .success());
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
}
