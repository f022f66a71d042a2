mod common;

use common::*;
use deko::cutnorm::cut_norm_exact;
use deko::hom::density;
use deko::sampling::{exact_sample_distribution, SampleDistribution};
use deko::{io, DecoratedGraph, MomentFunctionSequence, PatternGraph, StepGraphon, StepPartition};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
    graph: DecoratedGraph,
    graphon: StepGraphon,
    pattern: PatternGraph,
    kernel: deko::KernelMatrix,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let mut r = rng(3);
        let space = spaces().remove(1);
        let fam = family(&space);
        let graph = graph(&space, 7, &mut r);
        let graphon = planted_graphon(&space, 6, &mut r);
        let pattern = pattern(&fam, 3, &mut r);
        let kernel = planted_kernel(8, &mut r);
        io::save(&dir.path().join("g.json"), &graph).unwrap();
        io::save(&dir.path().join("w.json"), &graphon).unwrap();
        io::save(&dir.path().join("f.json"), &pattern).unwrap();
        io::save(&dir.path().join("x.json"), &kernel).unwrap();
        io::save(&dir.path().join("space.json"), &*space).unwrap();
        Fixture {
            dir,
            graph,
            graphon,
            pattern,
            kernel,
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_deko"))
            .current_dir(self.dir.path())
            .env_remove("DEKO_THREADS")
            .args(args)
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    }

    fn json(&self, args: &[&str]) -> Value {
        serde_json::from_str(&self.ok(args)).unwrap()
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn density_matches_library() {
    let fx = Fixture::new();
    let v = fx.json(&["density", "--pattern", "f.json", "--graph", "g.json"]);
    assert_eq!(v["value"].as_f64().unwrap(), density(&fx.pattern, &fx.graph).unwrap());
    let v = fx.json(&["density", "--pattern", "f.json", "--graphon", "w.json"]);
    let exact = deko::graphon::density_graphon(&fx.pattern, &fx.graphon).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), exact);
    let est = fx.json(&["density", "--pattern", "f.json", "--graph", "g.json", "--estimate", "--reps", "2000", "--seed", "1"]);
    assert!(est["stderr"].as_f64().unwrap() >= 0.0);
}

#[test]
fn moments_feed_density_and_reconstruct() {
    let fx = Fixture::new();
    fx.ok(&["moments", "--graphon", "w.json", "--out", "s.json"]);
    let s: MomentFunctionSequence = io::load(&fx.path("s.json")).unwrap();
    assert_eq!(s.m(), fx.graphon.m());
    let via_moments = fx.json(&["density", "--pattern", "f.json", "--moments", "s.json"]);
    let via_graphon = fx.json(&["density", "--pattern", "f.json", "--graphon", "w.json"]);
    let (a, b) = (via_moments["value"].as_f64().unwrap(), via_graphon["value"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-12);

    fx.ok(&["reconstruct", "--moments", "s.json", "--out", "w2.json"]);
    let w2: StepGraphon = io::load(&fx.path("w2.json")).unwrap();
    for (p, q) in w2.upper().iter().zip(fx.graphon.upper()) {
        assert_eq!(p.support().len(), q.support().len());
        for ((c, u), (d, v)) in p.support().iter().zip(q.support()) {
            assert_eq!(c, d);
            assert!((u - v).abs() <= 1e-12);
        }
    }
}

#[test]
fn sample_outputs_parse_as_distributions() {
    let fx = Fixture::new();
    let exact: SampleDistribution = io::from_str(&fx.ok(&["sample", "--graph", "g.json", "--k", "3", "--exact"])).unwrap();
    assert_eq!(exact, exact_sample_distribution(&fx.graph, 3).unwrap());
    let drawn: SampleDistribution =
        io::from_str(&fx.ok(&["sample", "--graph", "g.json", "--k", "3", "--reps", "500", "--seed", "4"])).unwrap();
    assert_eq!(drawn.total(), 500);
}

#[test]
fn cutnorm_reports_a_valid_witness() {
    let fx = Fixture::new();
    let v = fx.json(&["cutnorm", "--matrix", "x.json"]);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["value"].as_f64().unwrap(), cut_norm_exact(&fx.kernel).unwrap().value);
    let rows: Vec<usize> = serde_json::from_value(v["witness_S"].clone()).unwrap();
    let cols: Vec<usize> = serde_json::from_value(v["witness_T"].clone()).unwrap();
    let mean = deko::cutnorm::rectangle_mean(&fx.kernel, &rows, &cols);
    assert!((mean.abs() - v["value"].as_f64().unwrap()).abs() <= 1e-12);
    let h = fx.json(&["cutnorm", "--matrix", "x.json", "--heuristic", "--seed", "2"]);
    assert_eq!(h["mode"], "heuristic");
    assert!(h["value"].as_f64().unwrap() <= v["value"].as_f64().unwrap() + 1e-12);
}

#[test]
fn regularity_groups_form_a_partition() {
    let fx = Fixture::new();
    for source in [["--matrix", "x.json"], ["--graphon", "w.json"]] {
        let v = fx.json(&["regularity", source[0], source[1], "--eps", "0.5"]);
        let m = v["m"].as_u64().unwrap() as usize;
        let groups: Vec<Vec<usize>> = serde_json::from_value(v["groups"].clone()).unwrap();
        let p = StepPartition::new(m, groups).unwrap();
        assert!(p.is_equal_measure());
        assert_eq!(v["eps"].as_f64().unwrap(), 0.5);
        assert!(v["certified"].as_bool().unwrap());
    }
}

#[test]
fn converge_writes_report_and_csv() {
    let fx = Fixture::new();
    for (i, n) in [4usize, 8, 12].iter().enumerate() {
        let name = format!("w{i}.json");
        fx.ok(&["wrandom", "--graphon", "w.json", "--n", &n.to_string(), "--seed", &i.to_string(), "--out", &name]);
        let g: DecoratedGraph = io::load(&fx.path(&name)).unwrap();
        assert_eq!(g.n(), *n);
    }
    fx.ok(&[
        "converge", "--graphs", "w0.json", "w1.json", "w2.json", "--kmax", "2", "--report", "r.json", "--csv", "t.csv",
        "--sampling", "--reps", "200", "--seed", "5",
    ]);
    let report: Value = serde_json::from_str(&read(&fx.path("r.json"))).unwrap();
    let size = report["catalog_size"].as_u64().unwrap() as usize;
    assert_eq!(report["trace"].as_array().unwrap().len(), size);
    assert!(report["sampling"].is_object());
    assert_eq!(read(&fx.path("t.csv")).lines().count(), size + 1);
}

#[test]
fn catalog_lists_canonical_patterns() {
    let fx = Fixture::new();
    let text = fx.ok(&["catalog", "--space", "space.json", "--kmax", "3"]);
    let reprs: Vec<Value> = serde_json::from_str(&text).unwrap();
    for r in &reprs {
        io::from_str::<PatternGraph>(&r.to_string()).unwrap();
    }
    assert!(!reprs.is_empty());
}

#[test]
fn out_file_matches_stdout() {
    let fx = Fixture::new();
    let stdout = fx.ok(&["cutnorm", "--matrix", "x.json"]);
    fx.ok(&["cutnorm", "--matrix", "x.json", "--out", "c.json"]);
    assert_eq!(stdout, read(&fx.path("c.json")));
}

#[test]
fn config_supplies_defaults() {
    let fx = Fixture::new();
    std::fs::write(fx.path("deko.toml"), "eps = 0.5\nthreads = 2\n").unwrap();
    let v = fx.json(&["--config", "deko.toml", "regularity", "--matrix", "x.json"]);
    assert_eq!(v["eps"].as_f64().unwrap(), 0.5);
    let v = fx.json(&["--config", "deko.toml", "regularity", "--matrix", "x.json", "--eps", "0.75"]);
    assert_eq!(v["eps"].as_f64().unwrap(), 0.75);

    std::fs::write(fx.path("bad.toml"), "epsilon = 0.5\n").unwrap();
    assert_eq!(fx.run(&["--config", "bad.toml", "regularity", "--matrix", "x.json"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let fx = Fixture::new();
    assert_eq!(fx.run(&["density", "--pattern", "missing.json", "--graph", "g.json"]).status.code(), Some(2));
    assert_eq!(fx.run(&["sample", "--graph", "g.json", "--k", "3"]).status.code(), Some(2));
    let guarded = fx.run(&["density", "--pattern", "f.json", "--graph", "g.json", "--guard", "1"]);
    assert_eq!(guarded.status.code(), Some(3));
    assert!(!guarded.stderr.is_empty());
    assert_eq!(fx.run(&["--help"]).status.code(), Some(0));
}
