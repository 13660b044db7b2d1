use std::fs;
use std::io::Write;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::tempdir;

fn curved() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curved"))
}

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenes")
        .join(name)
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn run_with_stdin(cmd: &mut Command, input: &str) -> Output {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn every_command_has_help() {
    for sub in ["simulate", "timelapse", "bench", "serve"] {
        let out = run(curved().args([sub, "--help"]));
        assert!(out.status.success(), "{sub}");
        assert!(!out.stdout.is_empty());
    }
    assert!(run(curved().arg("--help")).status.success());
}

#[test]
fn unknown_flags_and_missing_command_are_rejected() {
    assert_eq!(
        run(curved().args(["simulate", "--bogus"])).status.code(),
        Some(2)
    );
    assert_eq!(run(&mut curved()).status.code(), Some(2));
}

#[test]
fn simulate_zero_steps_writes_initial_frame() {
    let dir = tempdir().unwrap();
    let out = run(curved()
        .args(["simulate", "--steps", "0", "--scene"])
        .arg(scene("square_rotation.json"))
        .arg("--out")
        .arg(dir.path()));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(files_in(dir.path()), ["frame_000000.svg"]);
}

#[test]
fn simulate_writes_one_file_per_step() {
    let dir = tempdir().unwrap();
    let out = run(curved()
        .args([
            "simulate", "--steps", "3", "--dt", "1/30", "--format", "ppm", "--scene",
        ])
        .arg(scene("square_rotation.json"))
        .arg("--out")
        .arg(dir.path()));
    assert!(out.status.success());
    let names = files_in(dir.path());
    assert_eq!(
        names,
        [
            "frame_000000.ppm",
            "frame_000001.ppm",
            "frame_000002.ppm",
            "frame_000003.ppm"
        ]
    );
    let bytes = fs::read(dir.path().join("frame_000003.ppm")).unwrap();
    assert!(bytes.starts_with(b"P6\n"));
}

#[test]
fn missing_scene_names_the_path() {
    let dir = tempdir().unwrap();
    let missing = dir.path().join("nowhere.json");
    let out = run(curved()
        .args(["simulate", "--steps", "1", "--scene"])
        .arg(&missing)
        .arg("--out")
        .arg(dir.path()));
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.json"));
}

#[test]
fn invalid_scene_is_reported() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"k_norm": 3}"#).unwrap();
    let out = run(curved()
        .args(["timelapse", "--steps", "1", "--scene"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("t.svg")));
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("k_norm"), "{err}");
}

fn timelapse(scene_name: &str, steps: usize, every: usize) -> String {
    let dir = tempdir().unwrap();
    let file = dir.path().join("t.svg");
    let out = run(curved()
        .args([
            "timelapse",
            "--steps",
            &steps.to_string(),
            "--every",
            &every.to_string(),
            "--scene",
        ])
        .arg(scene(scene_name))
        .arg("--out")
        .arg(&file));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    fs::read_to_string(file).unwrap()
}

#[test]
fn timelapse_layer_counts() {
    assert_eq!(
        timelapse("square_rotation.json", 12, 12)
            .matches("class=\"layer\"")
            .count(),
        2
    );
    assert_eq!(
        timelapse("square_rotation.json", 3, 1)
            .matches("class=\"layer\"")
            .count(),
        4
    );
}

#[test]
fn timelapse_records_antipodal_reset() {
    let svg = timelapse("boundary_crossing.json", 60, 1);
    let thetas: Vec<f64> = svg
        .split("data-theta=\"")
        .skip(1)
        .map(|s| s[..s.find('"').unwrap()].parse().unwrap())
        .collect();
    assert_eq!(thetas.len(), 61);
    let jumps: Vec<f64> = thetas
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > 1e-3)
        .collect();
    assert_eq!(jumps.len(), 1, "{thetas:?}");
    assert!((jumps[0] - std::f64::consts::PI).abs() < 2e-3);
}

#[test]
fn bench_lattice_rows_and_overwrite() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    fs::write(&csv, "stale contents\n".repeat(100)).unwrap();
    let out = run(curved()
        .args([
            "bench",
            "--shapes",
            "1,2,3",
            "--vertices",
            "3,4,5",
            "--tess",
            "1,2,3",
            "--reps",
            "2",
            "--out",
        ])
        .arg(&csv));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 28);
    assert_eq!(lines[0], "s,v,i,median_ms");
    assert!(!text.contains("stale"));
}

#[test]
fn bench_rejects_zero_reps() {
    let dir = tempdir().unwrap();
    let out = run(curved()
        .args(["bench", "--reps", "0", "--out"])
        .arg(dir.path().join("b.csv")));
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("b.csv").exists());
}

#[test]
fn serve_exits_after_handshake_on_eof() {
    let out = run_with_stdin(
        curved()
            .args(["serve", "--scene"])
            .arg(scene("square_rotation.json")),
        "",
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with(r#"{"type":"handshake","version":"curved/1""#));
}

#[test]
fn serve_rejects_bad_transport() {
    let out = run(curved()
        .args(["serve", "--transport", "pigeon", "--scene"])
        .arg(scene("square_rotation.json")));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn serve_bind_failure_is_an_error() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port();
    let out = run(curved()
        .args(["serve", "--transport", &format!("tcp:{port}"), "--scene"])
        .arg(scene("square_rotation.json")));
    assert!(!out.status.success());
}

#[test]
fn replayed_script_is_deterministic() {
    let script = concat!(
        "{\"type\":\"handshake\",\"version\":\"curved/1\"}\n",
        "{\"type\":\"input\",\"action\":\"thrust\",\"value\":40,\"tick\":2}\n",
        "{\"type\":\"input\",\"action\":\"rotate\",\"value\":1.5,\"tick\":5}\n",
        "{\"type\":\"input\",\"action\":\"curvature_delta\",\"value\":0.25,\"tick\":9}\n",
    );
    let go = || {
        run_with_stdin(
            curved()
                .args(["serve", "--replay", "--ticks", "30", "--scene"])
                .arg(scene("boundary_crossing.json")),
            script,
        )
    };
    let a = go();
    let b = go();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 31);
}

#[test]
fn serve_over_tcp() {
    use std::io::{BufRead, BufReader};
    use std::net::TcpStream;
    use std::time::{Duration, Instant};

    let port = {
        let l = TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let mut child = curved()
        .args(["serve", "--transport", &format!("tcp:{port}"), "--scene"])
        .arg(scene("square_rotation.json"))
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    let start = Instant::now();
    let stream = loop {
        match TcpStream::connect(("127.0.0.1", port)) {
            Ok(s) => break s,
            Err(_) if start.elapsed() < Duration::from_secs(10) => {
                std::thread::sleep(Duration::from_millis(20))
            }
            Err(e) => panic!("cannot connect: {e}"),
        }
    };
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut line = String::new();
    reader.read_line(&mut line).unwrap();
    assert!(line.contains("\"handshake\""));
    (&stream)
        .write_all(b"{\"type\":\"input\",\"action\":\"fly\"}\n")
        .unwrap();
    let mut saw_error = false;
    for _ in 0..200 {
        line.clear();
        reader.read_line(&mut line).unwrap();
        if line.contains("unknown_action") {
            saw_error = true;
            break;
        }
        assert!(line.contains("\"frame\""), "{line}");
    }
    assert!(saw_error);
    stream.shutdown(std::net::Shutdown::Both).unwrap();
    let status = child.wait().unwrap();
    assert!(status.success());
}
