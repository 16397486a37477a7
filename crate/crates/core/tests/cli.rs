use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

fn run(dir: &Path, config: &str, args: &[&str]) -> (i32, String) {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, config).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_photon-cluster"))
        .arg("--config")
        .arg(&cfg)
        .args(args)
        .output()
        .unwrap();
    (
        output.status.code().unwrap(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

const SMALL: &str = "dims = [2, 2, 4]\n";

#[test]
fn fidelity_csv_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let (code, err) = run(
            dir.path(),
            SMALL,
            &["--out", out.to_str().unwrap(), "fidelity"],
        );
        assert_eq!(code, 0, "{err}");
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# config: {"), "{comment}");
    assert!(comment.contains("\"dims\":[2,2,4]"));
    assert_eq!(lines.next().unwrap(), "k_photons,f0,f1,p_success");
    assert_eq!(lines.count(), 16);
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    let config = "mode = \"chiral\"\ndims = [2, 2, 4]\n[sweep]\naxis1 = { values = [10.0, 100.0] }\naxis2 = { start = 0.0001, stop = 0.01, points = 3, scale = \"log\" }\n";
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let (code, err) = run(
        dir.path(),
        config,
        &["--jobs", "1", "--out", a.to_str().unwrap(), "sweep"],
    );
    assert_eq!(code, 0, "{err}");
    let (code, err) = run(
        dir.path(),
        config,
        &["--jobs", "4", "--out", b.to_str().unwrap(), "sweep"],
    );
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 2 + 6);
    assert!(text.lines().nth(1).unwrap().starts_with("axis1,axis2,beta"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.csv");
    let out = out.to_str().unwrap();

    let (code, err) = run(dir.path(), "dims = [2, 0]\n", &["--out", out, "fidelity"]);
    assert_eq!(code, 1);
    assert!(err.contains("dims"), "{err}");

    let (code, err) = run(
        dir.path(),
        "[error_model]\np = \"x\"\n",
        &["--out", out, "fidelity"],
    );
    assert_eq!(code, 1);
    assert!(err.contains("error_model.p"), "{err}");

    let (code, _) = run(
        dir.path(),
        "dims = [5, 5, 3]\n",
        &["--out", out, "fidelity"],
    );
    assert_eq!(code, 3);

    let (code, err) = run(
        dir.path(),
        "dims = [2, 2, 8]\n",
        &["--out", out, "schedule"],
    );
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("schedule: PASS"));

    let (code, _) = run(dir.path(), "dims = [12]\n", &["--out", out, "schedule"]);
    assert_eq!(code, 2);

    let (code, err) = run(dir.path(), "", &["--out", out, "oracle-check"]);
    assert_eq!(code, 0, "{err}");

    let (code, _) = run(dir.path(), "", &["--out", out, "reflection"]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(out).unwrap().lines().count(), 2 + 601);
}
