use std::path::Path;
use std::process::{Command, Stdio};

use bdae_core::io::encode_pgm;
use bdae_core::phantom::shepp_logan;
use bdae_core::{psnr, read_image};

fn bdae(args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_bdae"))
        .args(args)
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .unwrap();
    status.code().unwrap()
}

fn phantom(dir: &Path, size: usize) -> String {
    let path = dir.join("phantom.pgm");
    std::fs::write(&path, encode_pgm(&shepp_logan(size))).unwrap();
    path.to_str().unwrap().to_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zero_sigma_keeps_clean_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = phantom(dir.path(), 32);
    let out = dir.path().join("out.pgm");
    let code = bdae(&[
        "denoise",
        "--input",
        &input,
        "--output",
        s(&out),
        "--noise",
        "gaussian",
        "--sigma",
        "0",
    ]);
    assert_eq!(code, 0);
    let p = psnr(&read_image(&input).unwrap(), &read_image(&out).unwrap()).unwrap();
    assert!(p > 30.0, "psnr {p}");
}

#[test]
fn tl_report_shows_improvement() {
    let dir = tempfile::tempdir().unwrap();
    let input = phantom(dir.path(), 64);
    let out = dir.path().join("out.pgm");
    let report = dir.path().join("report.json");
    let diff = dir.path().join("diff.pgm");
    let code = bdae(&[
        "denoise",
        "--input",
        &input,
        "--output",
        s(&out),
        "--noise",
        "gaussian",
        "--sigma",
        "25",
        "--seed",
        "3",
        "--method",
        "tl",
        "--report",
        s(&report),
        "--diff",
        s(&diff),
    ]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(json["method"], "tl");
    let noisy = json["psnr_noisy"].as_f64().unwrap();
    let denoised = json["psnr_denoised"].as_f64().unwrap();
    assert!(denoised > noisy, "{denoised} <= {noisy}");
    assert!(json["iterations_run"].as_u64().unwrap() >= 1);
    assert_eq!(read_image(&diff).unwrap().dims(), (64, 64));
}

#[test]
fn impulse_run_records_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let input = phantom(dir.path(), 16);
    let out = dir.path().join("out.pgm");
    let report = dir.path().join("report.json");
    let code = bdae(&[
        "denoise",
        "--input",
        &input,
        "--output",
        s(&out),
        "--noise",
        "impulse",
        "--fraction",
        "0.3",
        "--epsilon",
        "2",
        "--max-outer-iters",
        "3",
        "--report",
        s(&report),
    ]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(json["config_echo"]["impulse_epsilon"], 2.0);
    assert_eq!(json["config_echo"]["mu"], 5.0);
}

#[test]
fn flag_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = phantom(dir.path(), 16);
    let out = dir.path().join("out.pgm");
    assert_eq!(
        bdae(&["denoise", "--output", s(&out), "--noise", "gaussian"]),
        1
    );
    assert_eq!(
        bdae(&[
            "denoise",
            "--input",
            &input,
            "--output",
            s(&out),
            "--noise",
            "gaussian",
            "--fraction",
            "0.5"
        ]),
        1
    );
    assert_eq!(
        bdae(&[
            "denoise",
            "--input",
            &input,
            "--output",
            s(&out),
            "--noise",
            "gaussian",
            "--lambda",
            "-1"
        ]),
        1
    );
    assert_eq!(bdae(&["frobnicate"]), 1);
    assert!(!out.exists());
}

#[test]
fn unreadable_image_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P2\n2 2\n255\n0 0 0 0\n").unwrap();
    let out = dir.path().join("out.pgm");
    assert_eq!(
        bdae(&[
            "denoise",
            "--input",
            s(&bad),
            "--output",
            s(&out),
            "--noise",
            "gaussian"
        ]),
        2
    );
    let missing = dir.path().join("missing.pgm");
    assert_eq!(
        bdae(&[
            "denoise",
            "--input",
            s(&missing),
            "--output",
            s(&out),
            "--noise",
            "gaussian"
        ]),
        2
    );
}

#[test]
fn solver_rejection_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = dir.path().join("tiny.pgm");
    std::fs::write(&tiny, encode_pgm(&shepp_logan(4))).unwrap();
    let out = dir.path().join("out.pgm");
    assert_eq!(
        bdae(&[
            "denoise",
            "--input",
            s(&tiny),
            "--output",
            s(&out),
            "--noise",
            "gaussian"
        ]),
        3
    );
}

#[test]
fn benchmark_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let images = dir.path().join("images");
    std::fs::create_dir(&images).unwrap();
    phantom(&images, 64);
    std::fs::write(images.join("notes.txt"), "ignored").unwrap();
    let out = dir.path().join("table.csv");
    let code = bdae(&[
        "benchmark",
        "--images",
        s(&images),
        "--sigmas",
        "50",
        "--methods",
        "bdae,tl",
        "--out",
        s(&out),
    ]);
    assert_eq!(code, 0);

    let mut reader = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_owned)
        .collect();
    assert_eq!(header.join(","), bdae_cli::CSV_HEADER);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let denoised = |method: &str| -> f64 {
        let row = rows.iter().find(|r| &r[1] == method).unwrap();
        assert_eq!(&row[0], "phantom.pgm");
        assert_eq!(&row[2], "gaussian");
        assert_eq!(&row[8], "");
        row[6].parse().unwrap()
    };
    let (b, t) = (denoised("bdae"), denoised("tl"));
    assert!(b >= t - 1.0, "bdae {b} vs tl {t}");
}

#[test]
fn benchmark_without_images_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    assert_eq!(
        bdae(&[
            "benchmark",
            "--images",
            s(dir.path()),
            "--sigmas",
            "25",
            "--out",
            s(&out)
        ]),
        2
    );
}
