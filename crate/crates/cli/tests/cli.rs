use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use logicsat::cnf::{evaluate, Model};
use logicsat::dimacs::parse_dimacs;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_logicsat"));
    c.env_remove("LOGICSAT_SEED");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logicsat-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn model_from(stdout: &str, num_vars: u32) -> Model {
    let mut m = Model::new(num_vars);
    let line = stdout.lines().find(|l| l.starts_with("v ")).expect("model line");
    for tok in line[2..].split_whitespace() {
        let v: i64 = tok.parse().unwrap();
        if v != 0 {
            m.set(v.unsigned_abs() as u32, v > 0);
        }
    }
    m
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn sat_exit_code_and_model() {
    let dir = scratch("sat");
    let file = dir.join("sat.cnf");
    let text = "c small\np cnf 5 4\n1 -2 0\n2 3 0\n-1 -3 4 0\n-4 5 -2 0\n";
    write(&file, text);
    for extra in [&[][..], &["--no-rules"][..], &["--no-split"][..]] {
        let mut args = vec!["solve", file.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(10), "{extra:?}");
        let out = stdout(&o);
        assert!(out.lines().any(|l| l == "s SATISFIABLE"));
        let (f, _) = parse_dimacs(text.as_bytes()).unwrap();
        assert_eq!(evaluate(&f, &model_from(&out, 5)), Ok(true));
        assert!(out.lines().any(|l| l.starts_with("c stats {")));
    }
}

#[test]
fn unsat_exit_code() {
    let dir = scratch("unsat");
    let file = dir.join("u.cnf");
    write(&file, "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n");
    let o = run(&["solve", file.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).contains("c verify: exhaustive enumeration agrees"));
}

#[test]
fn parse_error_exit_code() {
    let dir = scratch("bad");
    let file = dir.join("bad.cnf");
    write(&file, "p cnf 3 1\n1 two 0\n");
    let o = run(&["solve", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid token"));
    let o = run(&["solve", dir.join("missing.cnf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gen_hwb_is_deterministic_and_parses() {
    let dir = scratch("gen");
    let (a, b) = (dir.join("a.cnf"), dir.join("b.cnf"));
    assert_eq!(run(&["gen-hwb", "4", "-o", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["gen-hwb", "4", "-o", b.to_str().unwrap()]).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let (f, diag) = parse_dimacs(&ta).unwrap();
    assert!(diag.warnings.is_empty());
    assert_eq!(f, logicsat::hwb::build_miter(4));
    assert_eq!(run(&["gen-hwb", "1"]).status.code(), Some(1));
}

#[test]
fn hwb_miter_eight_is_unsat() {
    let dir = scratch("m8");
    let file = dir.join("m8.cnf");
    run(&["gen-hwb", "8", "-o", file.to_str().unwrap()]);
    let o = run(&["solve", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).lines().any(|l| l == "s UNSATISFIABLE"));
}

#[test]
fn extract_reports_rule_one() {
    let dir = scratch("extract");
    let file = dir.join("r1.cnf");
    write(&file, "p cnf 4 6\n1 2 3 0\n1 -2 -3 0\n-1 2 -3 0\n-1 -2 3 0\n1 4 0\n-2 4 0\n");
    let o = run(&["extract", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "xors 1"), "{out}");
    assert!(out.lines().any(|l| l == "rules r1=1 r2=0 r3=0 r4=0 r5=0 r6=0 r7=0"), "{out}");
    assert!(out.lines().any(|l| l == "r1 A=1 B=2 C=3 D=4"), "{out}");
}

#[test]
fn seed_flag_and_environment_fallback() {
    let dir = scratch("seed");
    let file = dir.join("m6.cnf");
    run(&["gen-hwb", "6", "-o", file.to_str().unwrap()]);
    let o = bin()
        .args(["solve", file.to_str().unwrap()])
        .env("LOGICSAT_SEED", "7")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("\"seed\":7"));
    let o = run(&["solve", file.to_str().unwrap(), "--seed", "9"]);
    assert!(stdout(&o).contains("\"seed\":9"));
}

#[test]
fn stats_out_appends_records() {
    let dir = scratch("stats");
    let file = dir.join("m5.cnf");
    let stats = dir.join("stats.jsonl");
    run(&["gen-hwb", "5", "-o", file.to_str().unwrap()]);
    for _ in 0..2 {
        run(&["solve", file.to_str().unwrap(), "--stats-out", stats.to_str().unwrap()]);
    }
    let text = std::fs::read_to_string(&stats).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], lines[1]);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "UNSAT");
}

#[test]
fn bench_over_small_miters_and_replay() {
    let dir = scratch("bench");
    let corpus = dir.join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    for n in 6..=10 {
        let path = corpus.join(format!("hwb-n{n:02}.cnf"));
        run(&["gen-hwb", &n.to_string(), "-o", path.to_str().unwrap()]);
    }
    write(&corpus.join("broken.cnf"), "p cnf 1 1\n1 x 0\n");
    let records = dir.join("records.jsonl");
    let o = run(&[
        "bench",
        corpus.to_str().unwrap(),
        "--jobs",
        "2",
        "--records",
        records.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping broken.cnf"));
    let table = stdout(&o);
    assert!(table.contains("c verdicts agree on all 5 instances"), "{table}");
    let text = std::fs::read_to_string(&records).unwrap();
    let parsed: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(parsed.len(), 10);
    assert!(parsed.iter().all(|r| r["verdict"] == "UNSAT"));

    let replay = run(&["bench", "--replay", records.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(stdout(&replay), table);
}

#[test]
fn checked_in_record_seed_replays() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fuzz/corpus/bench_records/two_instances.jsonl");
    let text = std::fs::read_to_string(path).unwrap();
    let records = logicsat_cli::bench::parse_records(&text).unwrap();
    assert_eq!(records.len(), 4);
    let table = logicsat_cli::bench::render_table(&records);
    assert!(table.contains("c verdicts agree on all 2 instances"), "{table}");
}
