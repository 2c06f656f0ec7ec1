use std::io::Write;
use std::process::{Command, Output, Stdio};

use composition_codec::channel::{apply_error, Direction, ErrorSpec};
use composition_codec::format::to_text;
use composition_codec::{fragment, BinaryString, Composition};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_composition-codec"))
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn params_ecc() {
    let o = run(&["params", "--k", "5", "--ecc"], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k=5\nn=11\nredundancy=6\ncapacity=35\n");

    let o = run(&["params", "--k", "4", "--json"], "");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 7);
    assert_eq!(v["capacity"], "20");
}

#[test]
fn encode_ecc_example() {
    let o = run(&["encode", "--ecc", "--k", "2", "--message", "00"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "00000100001\n");

    let o = run(&["encode", "--k", "8", "--message", "0xa5"], "");
    assert!(o.status.success());
    // 2*C(9,4) = 252 < 256 <= C(11,5) = 462
    assert_eq!(stdout(&o).trim().len(), 12);
}

#[test]
fn decode_ecc_repairs_class_four() {
    let c = fragment(&"00000100001".parse::<BinaryString>().unwrap());
    let e = ErrorSpec {
        class: 4,
        target: Composition { zeros: 3, ones: 1 },
        direction: Direction::OneToZero,
    };
    let corrupted = apply_error(&c, &e).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupted.cm");
    std::fs::write(&path, to_text(&corrupted)).unwrap();

    let o = run(
        &[
            "decode",
            "--ecc",
            "--k",
            "2",
            "--in",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "00\n");
    assert!(stderr(&o).contains("corrected class 4"), "{}", stderr(&o));

    let o = run(
        &[
            "decode",
            "--ecc",
            "--k",
            "2",
            "--json",
            "--in",
            path.to_str().unwrap(),
        ],
        "",
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["message"], "00");
    assert_eq!(v["correction"]["class"], 4);
    assert_eq!(v["correction"]["observed"], serde_json::json!([4, 0]));
    assert_eq!(v["correction"]["corrected"], serde_json::json!([3, 1]));
}

fn pipeline(k: usize, message: &str, ecc: bool, seed: Option<u64>) -> String {
    let flag = |mut v: Vec<String>| {
        if ecc {
            v.push("--ecc".into());
        }
        v
    };
    let kk = k.to_string();
    let enc = run(
        &flag(vec![
            "encode".into(),
            "--k".into(),
            kk.clone(),
            "--message".into(),
            message.into(),
        ])
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>(),
        "",
    );
    assert!(enc.status.success(), "{}", stderr(&enc));
    let frag = run(&["fragment"], &stdout(&enc));
    assert!(frag.status.success(), "{}", stderr(&frag));
    let mut cm = stdout(&frag);
    if let Some(seed) = seed {
        let cor = run(&["corrupt", "--seed", &seed.to_string()], &cm);
        assert!(cor.status.success(), "{}", stderr(&cor));
        assert!(stderr(&cor).starts_with("applied class="));
        cm = stdout(&cor);
    }
    let dec = run(
        &flag(vec!["decode".into(), "--k".into(), kk])
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
        &cm,
    );
    assert!(dec.status.success(), "seed {seed:?}: {}", stderr(&dec));
    stdout(&dec).trim().to_string()
}

#[test]
fn pipelines_reproduce_the_message() {
    assert_eq!(pipeline(6, "101101", false, None), "101101");
    for seed in 0..12 {
        assert_eq!(
            pipeline(7, "1100101", true, Some(seed)),
            "1100101",
            "seed {seed}"
        );
    }
}

#[test]
fn corrupt_respects_class_and_json() {
    let frag = run(&["fragment", "--message", "0010111", "--json"], "");
    let v: serde_json::Value = serde_json::from_str(&stdout(&frag)).unwrap();
    assert_eq!(v["n"], 7);
    let o = run(&["corrupt", "--class", "3", "--seed", "5"], &stdout(&frag));
    assert!(o.status.success());
    assert!(stderr(&o).starts_with("applied class=3 "), "{}", stderr(&o));
}

#[test]
fn reconstruct_lists_string_and_reversal() {
    let frag = run(&["fragment", "--message", "0110100"], "");
    let o = run(&["reconstruct"], &stdout(&frag));
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0010110\n0110100\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nope"], "").status.code(), Some(1));
    assert_eq!(run(&["decode", "--ecc"], "").status.code(), Some(1));

    let o = run(&["decode", "--k", "2"], "n=3\n1 0 1 x\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).starts_with("error[malformed-input]"),
        "{}",
        stderr(&o)
    );

    // two errors in different classes cannot be corrected
    let c = fragment(&"00000100001".parse::<BinaryString>().unwrap());
    let two = [
        ErrorSpec {
            class: 2,
            target: Composition { zeros: 2, ones: 0 },
            direction: Direction::ZeroToOne,
        },
        ErrorSpec {
            class: 3,
            target: Composition { zeros: 3, ones: 0 },
            direction: Direction::ZeroToOne,
        },
    ]
    .iter()
    .fold(c, |acc, e| apply_error(&acc, e).unwrap());
    let o = run(&["decode", "--ecc", "--k", "2"], &to_text(&two));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error["));
}

#[test]
fn experiment_reports_are_identical_across_pools() {
    let report = |threads: &str| {
        let o = bin()
            .args([
                "experiment",
                "ecc_sweep",
                "--k-range",
                "3..4",
                "--trials",
                "40",
                "--seed",
                "9",
                "--json",
            ])
            .env("COMPOSITION_CODEC_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        stdout(&o)
    };
    let one = report("1");
    assert_eq!(one, report("4"));
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["mode"], "ecc_sweep");
    assert_eq!(v["trials"], 80);
    assert_eq!(v["failures"], 0);
}

#[test]
fn experiment_text_summary() {
    let o = run(&["experiment", "distance_check"], "");
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("mode=distance_check trials=9 successes=9 failures=0"));
    assert!(stderr(&o).starts_with("wall time"));
}
