use bidegree::cli::{main_with, VERDICT_FAILURE};

fn run(args: &str) -> u8 {
    main_with(std::iter::once("bidegree").chain(args.split_whitespace()))
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("bidegree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn successful_commands_exit_zero() {
    assert_eq!(run("count --m 4 --n 4 --s 2,2,2,2 --t 2,2,2,2"), 0);
    assert_eq!(run("count --n 5 --digraph --s 2,2,2,2,2 --t 2,2,2,2,2 --count-mode asymptotic"), 0);
    assert_eq!(run("pmf --m 2 --n 2 --model bk --k 2 --s 1,1 --t 1,1"), 0);
    assert_eq!(run("pmf --m 2 --n 3 --model vp --p 0.5 --s 2,1 --t 1,1,1"), 0);
    assert_eq!(run("check normalization --m 2 --n 2 --model gk --k 2"), 0);
}

#[test]
fn sample_writes_json_lines() {
    let path = scratch("samples.jsonl");
    let cmd = format!("sample --m 3 --n 4 --model gt --t 1,2,0,3 --trials 5 --seed 9 --out {}", path.display());
    assert_eq!(run(&cmd), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let recs = bidegree::harness::read_samples_jsonl(&text).unwrap();
    assert_eq!(recs.len(), 5);
    assert!(recs.iter().all(|r| r.t == [1, 2, 0, 3] && r.k == 6));
}

#[test]
fn report_files_are_reproducible() {
    let path = scratch("report.csv");
    let cmd = format!(
        "report concentration --m 8 --n 8 --model gp --p 0.4 --trials 50 --seed 4 --format csv --out {}",
        path.display()
    );
    assert_eq!(run(&cmd), 0);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(run(&cmd), 0);
    assert_eq!(first, std::fs::read(&path).unwrap());
}

#[test]
fn compare_emits_ratio_report() {
    let path = scratch("compare.json");
    let cmd = format!("compare --m 3 --n 3 --model gk --k 4 --trials 20 --seed 1 --out {}", path.display());
    assert_eq!(run(&cmd), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["provenance"]["config"]["model_prime"]["family"], "bk");
    assert_eq!(report["rows"].as_array().unwrap().len(), 20);
}

#[test]
fn error_exit_codes() {
    // domain and configuration problems
    assert_eq!(run("pmf --m 2 --n 2 --model zz --p 0.5 --s 1,1 --t 1,1"), 1);
    assert_eq!(run("pmf --m 2 --n 2 --model gp --p 1.5 --s 1,1 --t 1,1"), 1);
    assert_eq!(run("count --m 2 --n 2 --s 1,1"), 1);
    assert_eq!(run("frobnicate"), 1);
    assert_eq!(run("check nonsense --m 2 --n 2"), 1);
    // capacity
    assert_eq!(run("count --m 20 --n 20 --s 1 --t 1"), 1);
    let s = vec!["10"; 20].join(",");
    assert_eq!(run(&format!("count --m 20 --n 20 --s {s} --t {s}")), 2);
    assert_eq!(run("check tv_exact --m 4 --n 4 --model gk --k 8"), 2);
    // a failing verdict
    assert_eq!(run("check enum_accuracy --digraph --sizes 3,4"), VERDICT_FAILURE);
}
