use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use laddertw::decomposition::validate;
use laddertw::generate::{plant_ladder, Attachment};
use laddertw::graph::families;
use laddertw::io::{read_gr, read_td, write_gr};
use laddertw::reducer::{replay, ReductionReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn laddertw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laddertw"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn tw_prints_the_width_and_a_valid_witness() {
    let dir = TempDir::new().unwrap();
    let gr = put(&dir, "p.gr", &write_gr(&families::petersen()));
    let td = path(&dir, "p.td");
    let o = laddertw(&["tw", &gr, "--witness", &td]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "4\n");
    let (d, n) = read_td(&fs::read_to_string(&td).unwrap()).unwrap();
    assert_eq!(n, 10);
    assert!(validate(&families::petersen(), &d).unwrap().ok);
    assert_eq!(d.width(), 4);

    let o = laddertw(&["validate", &gr, &td]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "valid width 4\n");
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = TempDir::new().unwrap();
    let gr = put(&dir, "g.gr", &write_gr(&families::grid(6, 6)));
    let o = Command::new(env!("CARGO_BIN_EXE_laddertw"))
        .args(["tw", &gr])
        .env("LADDERTW_MAX_STATES", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert!(stderr(&o).contains("budget exceeded"));
}

#[test]
fn validation_failures_exit_1() {
    let dir = TempDir::new().unwrap();
    let gr = put(&dir, "p.gr", "p tw 3 2\n1 2\n2 3\n");
    let cases = [
        ("s td 2 2 3\nb 1 1 2\nb 2 2\n1 2\n", "tw1: vertex 3"),
        ("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n", "tw2: edge 2 3"),
        ("s td 3 2 3\nb 1 1 2\nb 2 3\nb 3 2 3\n1 2\n2 3\n", "tw3: bags containing vertex 2"),
        ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n", "not a tree"),
    ];
    for (td, expect) in cases {
        let td = put(&dir, "x.td", td);
        let o = laddertw(&["validate", &gr, &td]);
        assert_eq!(code(&o), 1);
        assert!(stdout(&o).contains(expect), "{}", stdout(&o));
    }
}

#[test]
fn malformed_input_and_usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = put(&dir, "bad.gr", "p tw 2 1\n1 5\n");
    let o = laddertw(&["tw", &bad]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"));

    let o = laddertw(&["tw", &path(&dir, "missing.gr")]);
    assert_eq!(code(&o), 2);

    for args in [&["tw", &bad, "--bogus"][..], &["frobnicate"], &[]] {
        let o = laddertw(args);
        assert_eq!(code(&o), 2);
        assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
    }

    let gr = put(&dir, "c.gr", &write_gr(&families::cycle(5)));
    let o = laddertw(&["reduce", &gr, "--policy", "general=3"]);
    assert_eq!(code(&o), 2);
    let o = laddertw(&["reduce", &gr, "--policy", "colour=blue"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn ladders_are_listed_with_file_numbering() {
    let dir = TempDir::new().unwrap();
    let gr = put(&dir, "l.gr", &write_gr(&families::ladder_grid(4)));
    let o = laddertw(&["ladders", &gr, "--min-length", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1, "{out}");
    assert!(out.starts_with("length 3 "), "{out}");
    // a bare ladder is cut by the rails of any square
    assert!(out.contains("disconnecting yes"));
}

#[test]
fn reduce_report_replays_to_the_output() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let host = families::complete(5);
    let (g, _) = plant_ladder(&host, None, 8, Attachment::Free, &mut rng);
    let (g, _) = plant_ladder(&g, None, 3, Attachment::DegreeTwoCorner, &mut rng);
    let gr = put(&dir, "in.gr", &write_gr(&g));
    for flags in [&[][..], &["--aggressive"], &["--policy", "length5,suppress-degree2=true"]] {
        let (report, out) = (path(&dir, "r.json"), path(&dir, "out.gr"));
        let mut args = vec!["reduce", &gr, "--report", &report, "-o", &out];
        args.extend_from_slice(flags);
        let o = laddertw(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let report: ReductionReport =
            serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
        assert!(!report.steps.is_empty());
        let input = read_gr(&fs::read_to_string(&gr).unwrap()).unwrap();
        let replayed = write_gr(&replay(&input, &report).unwrap());
        assert_eq!(replayed, fs::read_to_string(&out).unwrap());
    }
    // without -o the graph goes to standard output
    let o = laddertw(&["reduce", &gr]);
    assert!(read_gr(&stdout(&o)).unwrap().num_vertices() < g.num_vertices());
}

#[test]
fn phylo_subcommands() {
    let dir = TempDir::new().unwrap();
    let t1 = put(&dir, "t1.nwk", "((a,b),(c,d),(e,(f,g)));\n");
    let t2 = put(&dir, "t2.nwk", "((a,c),(b,d),(e,(f,g)));\n");
    let out = path(&dir, "d.gr");
    let o = laddertw(&["phylo", "display", &t1, &t2, "-o", &out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let d = read_gr(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.num_vertices(), 7 + 5 + 5);
    assert!(d.vertex_by_label("f").is_some());

    let o = laddertw(&["phylo", "reduce", &t1, &t2]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let trees: Vec<&str> = text.lines().collect();
    assert_eq!(trees.len(), 2);
    assert!(trees[0].contains("e~f~g") || trees[0].contains("f~g"), "{trees:?}");
    assert!(stderr(&o).contains("cherry"));

    let o = laddertw(&["phylo", "reduce", &t1, &t2, "--keep", "3"]);
    assert_eq!(code(&o), 2);

    let t3 = put(&dir, "t3.nwk", "(a,b,(c,x));\n");
    let o = laddertw(&["phylo", "display", &t1, &t3]);
    assert_eq!(code(&o), 2);
    let t4 = put(&dir, "t4.nwk", "(a,b,(c,d);\n");
    assert_eq!(code(&laddertw(&["phylo", "display", &t1, &t4])), 2);
}

#[test]
fn tight_search_writes_a_checkable_witness() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "w");
    let o = laddertw(&["tight-search", "--tw", "3", "--max-n", "14", "--out-dir", &out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("treewidth 3 -> 4"));
    let read = |name: &str| fs::read_to_string(Path::new(&out).join(name)).unwrap();
    for (g, td, w) in [("before.gr", "before.td", 3), ("after.gr", "after.td", 4)] {
        let g = read_gr(&read(g)).unwrap();
        let (td, _) = read_td(&read(td)).unwrap();
        assert!(validate(&g, &td).unwrap().ok);
        assert_eq!(td.width(), w);
    }
    let o = laddertw(&["tight-search", "--tw", "3", "--max-n", "8", "--trials", "50"]);
    assert_eq!(code(&o), 3);
}
