use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use cellpath::physarum::MAZE_50X50;
use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;
use walkdir::WalkDir;

const LEE_MAZE: &str = "S..#\n.#..\n...E\n";
const BLOCKED: &str = "S#.\n.#E\n";
const GRAPH: &str = "4\n0 1 1\n1 3 1\n0 2 0.5\n2 3 2\n";
const STOCHASTIC: &str = "4\n0 1 1 1 1\n1 3 1 1 1\n0 2 2 0.5 0.5 1.5 0.5\n2 3 1 3 1\n";
const LATTICE: &str = "2 2 vn4 3\n0 0 inf inf 1 1\n0 1 inf 1 2 inf\n1 0 1 inf inf 2\n1 1 3 0 inf inf\n";

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in [
            ("lee.txt", LEE_MAZE),
            ("blocked.txt", BLOCKED),
            ("graph.txt", GRAPH),
            ("stochastic.txt", STOCHASTIC),
            ("lattice.txt", LATTICE),
            ("maze50.txt", MAZE_50X50),
            ("garbage.txt", "3 x\n??\n"),
        ] {
            fs::write(dir.path().join(name), text).unwrap();
        }
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Runs the binary with `args`, the input and a fresh output directory.
    fn run(&self, input: &str, out: &str, args: &[&str]) -> (i32, PathBuf, String) {
        let out = self.path(out);
        let o = Command::new(env!("CARGO_BIN_EXE_cellpath"))
            .arg("--input")
            .arg(self.path(input))
            .arg("--out")
            .arg(&out)
            .args(args)
            .output()
            .unwrap();
        (o.status.code().unwrap(), out, String::from_utf8_lossy(&o.stderr).into_owned())
    }
}

fn result(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("result.json")).unwrap()).unwrap()
}

fn tree_hash(root: &Path) -> String {
    let mut h = Sha256::new();
    for e in WalkDir::new(root).sort_by_file_name() {
        let e = e.unwrap();
        if e.file_type().is_file() {
            h.update(e.path().strip_prefix(root).unwrap().to_string_lossy().as_bytes());
            h.update(fs::read(e.path()).unwrap());
        }
    }
    format!("{:x}", h.finalize())
}

fn scenarios() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("lattice.txt", vec!["--algo", "wave", "--source", "0,0", "--dest", "1,1", "--emit-frames", "ascii"]),
        ("lee.txt", vec!["--algo", "lee", "--emit-frames", "ascii"]),
        ("graph.txt", vec!["--algo", "graph-ca", "--source", "0", "--dest", "3"]),
        ("stochastic.txt", vec!["--algo", "dla", "--source", "0", "--dest", "3", "--seed", "11"]),
        ("maze50.txt", vec!["--algo", "physarum", "--emit-frames", "pgm", "--every", "100"]),
        ("lee.txt", vec!["--algo", "oracle"]),
    ]
}

#[test]
fn exit_codes() {
    let fx = Fixture::new();
    assert_eq!(fx.run("lee.txt", "a", &["--algo", "lee"]).0, 0);
    let (code, out, _) = fx.run("blocked.txt", "b", &["--algo", "lee"]);
    assert_eq!(code, 2);
    let r = result(&out);
    assert_eq!(r["found"], false);
    assert!(r["error"].as_str().unwrap().contains("no path"));
    let (code, _, err) = fx.run("garbage.txt", "c", &["--algo", "lee"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    let (code, _, err) = fx.run("stochastic.txt", "d", &["--algo", "dla", "--source", "0", "--dest", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("seed"));
    let (code, _, err) = fx.run("graph.txt", "e", &["--algo", "graph-ca", "--source", "0", "--dest", "3", "--emit-frames", "pgm"]);
    assert_eq!(code, 1);
    assert!(err.contains("unsupported"));
    assert_eq!(fx.run("lee.txt", "f", &["--algo", "lee", "--emit-frames", "pgm"]).0, 1);
    assert_eq!(fx.run("missing.txt", "g", &["--algo", "lee"]).0, 1);
}

#[test]
fn verify_reports_agreement_for_every_solver() {
    let fx = Fixture::new();
    for (i, (input, args)) in scenarios().into_iter().enumerate() {
        if args[1] == "oracle" {
            continue;
        }
        let mut args = args;
        args.push("--verify");
        let (code, out, err) = fx.run(input, &format!("v{i}"), &args);
        assert_eq!(code, 0, "{args:?}: {err}");
        let r = result(&out);
        if args[1] == "physarum" {
            // tubes need only come within 10% of the shortest route
            assert_eq!(r["details"]["within_tolerance"], true, "{r}");
            continue;
        }
        assert_eq!(r["oracle_match"], true, "{args:?}: {r}");
        assert_eq!(r["cost"], r["oracle_cost"]);
    }
}

#[test]
fn results_follow_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/result.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let fx = Fixture::new();
    let mut runs: Vec<(&str, Vec<&str>)> = scenarios();
    runs.push(("blocked.txt", vec!["--algo", "lee", "--verify"]));
    runs.push(("graph.txt", vec!["--algo", "oracle", "--source", "0", "--dest", "3"]));
    runs.push(("lattice.txt", vec!["--algo", "oracle", "--source", "0,0", "--dest", "1,1", "--metric", "raw"]));
    for (i, (input, args)) in runs.into_iter().enumerate() {
        let (code, out, err) = fx.run(input, &format!("s{i}"), &args);
        assert!(code == 0 || code == 2, "{args:?}: {err}");
        let r = result(&out);
        let errors: Vec<String> = validator.iter_errors(&r).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn output_trees_are_identical_across_reruns_and_parallel() {
    let fx = Fixture::new();
    for (i, (input, args)) in scenarios().into_iter().enumerate() {
        let (_, a, _) = fx.run(input, &format!("p{i}a"), &args);
        let (_, b, _) = fx.run(input, &format!("p{i}b"), &args);
        let mut par = args.clone();
        par.push("--parallel");
        let (_, c, _) = fx.run(input, &format!("p{i}c"), &par);
        let h = tree_hash(&a);
        assert_eq!(h, tree_hash(&b), "{args:?}");
        assert_eq!(h, tree_hash(&c), "{args:?} with --parallel");
    }
}

#[test]
fn trace_and_frame_files() {
    let fx = Fixture::new();
    let (_, out, _) = fx.run("graph.txt", "t1", &["--algo", "graph-ca", "--source", "0", "--dest", "3"]);
    let csv = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(csv.starts_with("step,node,pred,cost\n0,0,,0\n0,1,,inf\n"));
    let (_, out, _) = fx.run("stochastic.txt", "t2", &["--algo", "dla", "--source", "0", "--dest", "3", "--seed", "2"]);
    assert!(fs::read_to_string(out.join("convergence.csv")).unwrap().starts_with("episode,"));
    let (_, out, _) = fx.run("maze50.txt", "t3", &["--algo", "physarum", "--emit-frames", "pgm", "--every", "250"]);
    let frame = fs::read(out.join("frames/frame_00250.pgm")).unwrap();
    assert!(frame.starts_with(b"P5\n50 50\n255\n"));
    assert_eq!(frame.len(), b"P5\n50 50\n255\n".len() + 2500);
}

#[test]
fn maze_endpoints_can_be_overridden() {
    let fx = Fixture::new();
    let (code, out, _) = fx.run("lee.txt", "m", &["--algo", "lee", "--source", "2,0", "--dest", "0,2", "--verify"]);
    assert_eq!(code, 0);
    let r = result(&out);
    assert_eq!(r["cost"], 4.0);
    assert_eq!(r["oracle_match"], true);
}
