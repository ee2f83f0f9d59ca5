use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use molfp::fingerprints::{Family, FingerprintConfig};
use molfp::matrix::Matrix;
use molfp::similarity::{bulk_top_k, Metric};
use molfp::smiles::mol_from_smiles;
use tempfile::TempDir;

fn molfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molfp"))
        .args(args)
        .env_remove("MOLFP_JOBS")
        .output()
        .expect("run molfp")
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.path().join(name);
        fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_string()
    }
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
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

const THREE: &str = "CCO ethanol\nc1ccccc1 benzene\nCC(=O)O acetic acid\n";

#[test]
fn compute_dense_shape() {
    let d = Dir::new();
    let input = d.file("in.smi", THREE);
    let out = d.path("out.txt");
    let o = molfp(&["compute", &input, &out, "--fingerprint", "ecfp"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = read(&out);
    assert!(text.starts_with("DENSEv1 3 2048 u8\n"));
    assert!(text.ends_with('\n'));
    let m = Matrix::from_text(&text).unwrap();
    assert_eq!((m.rows(), m.cols()), (3, 2048));
}

#[test]
fn compute_is_independent_of_jobs() {
    let d = Dir::new();
    let corpus = d.path("c.smi");
    assert_eq!(
        code(&molfp(&[
            "generate", &corpus, "--count", "60", "--seed", "3"
        ])),
        0
    );
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        for form in ["dense", "sparse"] {
            let out = d.path(&format!("o{jobs}{form}"));
            let o = molfp(&[
                "compute",
                &corpus,
                &out,
                "--fingerprint",
                "path",
                "--output",
                form,
                "--jobs",
                jobs,
            ]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            outputs.push((form, read(out)));
        }
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[1], outputs[3]);
}

#[test]
fn invalid_molecule_raise_cites_line() {
    let d = Dir::new();
    let input = d.file("in.smi", "# molecules\nCCO\n\n[H]=[H] bad\n");
    let o = molfp(&["compute", &input, &d.path("o.txt"), "--on-error", "raise"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("in.smi:4:"), "{}", stderr(&o));
}

#[test]
fn skip_writes_error_table() {
    let d = Dir::new();
    let input = d.file("in.smi", "CCO\n[H]=[H]\nC1CC\nCCN\n");
    let out = d.path("o.txt");
    let o = molfp(&[
        "compute",
        &input,
        &out,
        "--on-error",
        "skip",
        "--output",
        "sparse",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(Matrix::from_text(&read(&out)).unwrap().rows(), 2);
    let errors = read(format!("{out}.errors.tsv"));
    let lines: Vec<&str> = errors.lines().collect();
    assert_eq!(lines[0], "index\tline\terror");
    assert!(lines[1].starts_with("1\t2\tValenceError"));
    assert!(lines[2].starts_with("2\t3\tUnclosedRing"));
}

#[test]
fn canonical_output() {
    let d = Dir::new();
    let input = d.file("in.smi", "OCC\nCCO\nC1CC\nc1ccccc1O phenol\n");
    let out = d.path("out.smi");
    let o = molfp(&["canonical", &input, &out, "--on-error", "skip"]);
    assert_eq!(code(&o), 0);
    let text = read(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], lines[1]);
    assert!(lines[2].ends_with("\tphenol"));
    assert!(stderr(&o).contains("line 3"));

    let again = d.path("again.smi");
    assert_eq!(code(&molfp(&["canonical", &out, &again])), 0);
    assert_eq!(read(&again), text);

    assert_eq!(code(&molfp(&["canonical", &input, &d.path("x")])), 1);
}

#[test]
fn search_ranks_identical_record_first() {
    let d = Dir::new();
    let db = d.file("db.smi", "c1ccccc1 benzene\nCCO ethanol\nCCCO propanol\n");
    let o = molfp(&["search", "OCC", &db, "--top-k", "10"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "rank\tline\tname\tscore");
    assert_eq!(lines[1], "1\t2\tethanol\t1.000000");
    assert_eq!(lines.len(), 4);
}

#[test]
fn search_matches_library() {
    let d = Dir::new();
    let db = d.path("db.smi");
    assert_eq!(
        code(&molfp(&["generate", &db, "--count", "80", "--seed", "9"])),
        0
    );
    let query = "c1ccc(CN)cc1";
    let o = molfp(&[
        "search", query, &db, "--metric", "dice", "--top-k", "15", "--length", "1024",
    ]);
    assert_eq!(code(&o), 0);

    let cfg = FingerprintConfig::new(Family::Ecfp).with_length(1024);
    let rows: Vec<_> = read(&db)
        .lines()
        .map(|l| {
            cfg.vector(&mol_from_smiles(l.split('\t').next().unwrap()).unwrap())
                .unwrap()
        })
        .collect();
    let m = molfp::matrix::from_rows(&rows, 1024, cfg.variant, molfp::matrix::OutputForm::Sparse)
        .unwrap();
    let q = cfg.vector(&mol_from_smiles(query).unwrap()).unwrap();
    let hits = bulk_top_k(&q, &m.to_csr(), 15, Metric::Dice).unwrap();
    let expected: Vec<String> = hits
        .iter()
        .enumerate()
        .map(|(i, h)| format!("{}\t{}\tsyn{}\t{:.6}", i + 1, h.row + 1, h.row + 1, h.score))
        .collect();
    let out = stdout(&o);
    let got: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(got, expected);
}

#[test]
fn benchmark_table() {
    let d = Dir::new();
    let input = d.path("c.smi");
    assert_eq!(code(&molfp(&["generate", &input, "--count", "20"])), 0);
    let o = molfp(&["benchmark", &input, "--jobs-list", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "jobs\tmean_seconds\tspeedup");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("1\t") && lines[1].ends_with("\t1.000"));

    let o = molfp(&[
        "benchmark",
        "--synthetic",
        "40",
        "--jobs-list",
        "1,2,4",
        "--fingerprint",
        "substructure",
    ]);
    assert_eq!(code(&o), 0);
    let jobs: Vec<u32> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(jobs, vec![1, 2, 4]);
}

#[test]
fn generate_is_deterministic() {
    let d = Dir::new();
    let (a, b) = (d.path("a.smi"), d.path("b.smi"));
    molfp(&["generate", &a, "--count", "30", "--seed", "5"]);
    molfp(&["generate", &b, "--count", "30", "--seed", "5"]);
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&a).lines().count(), 30);
}

#[test]
fn jobs_from_environment() {
    let d = Dir::new();
    let input = d.file("in.smi", THREE);
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_molfp"))
            .args(["canonical", &input, &d.path("o.smi")])
            .env("MOLFP_JOBS", jobs)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    assert_eq!(code(&run("zero")), 2);
}

#[test]
fn usage_errors_exit_2() {
    let d = Dir::new();
    let input = d.file("in.smi", THREE);
    let out = d.path("o");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["compute", &input],
        vec!["compute", &input, &out, "--fingerprint", "maccs"],
        vec!["compute", &input, &out, "--length", "0"],
        vec![
            "compute",
            &input,
            &out,
            "--fingerprint",
            "path",
            "--min-path",
            "5",
            "--max-path",
            "2",
        ],
        vec![
            "compute",
            &input,
            &out,
            "--fingerprint",
            "atom_pair",
            "--distance-cap",
            "40",
        ],
        vec!["compute", &input, &out, "--variant", "fuzzy"],
        vec!["compute", &input, &out, "--output", "xml"],
        vec!["compute", &input, &out, "--on-error", "ignore"],
        vec!["compute", &input, &out, "--chunk-size", "0"],
        vec!["compute", &input, &out, "--keys", &input],
        vec!["search", "CCO", &input, "--top-k", "0"],
        vec!["search", "CCO", &input, "--fingerprint", "descriptors"],
        vec!["search", "CCO", &input, "--metric", "cosine"],
        vec!["benchmark", &input, "--repeats", "2"],
        vec!["benchmark", &input, "--jobs-list", "1,8"],
    ];
    for args in cases {
        assert_eq!(code(&molfp(&args)), 2, "{args:?}");
    }
}

#[test]
fn data_errors_exit_1() {
    let d = Dir::new();
    let missing = PathBuf::from(d.path("missing.smi"));
    let missing = missing.to_str().unwrap();
    let out = d.path("o");
    let bad_keys = d.file("keys.tsv", "1\t[C\tbroken\n");
    let input = d.file("in.smi", THREE);
    let cases: Vec<Vec<&str>> = vec![
        vec!["compute", missing, &out],
        vec!["canonical", missing, &out],
        vec!["search", "C1CC", &input],
        vec![
            "compute",
            &input,
            &out,
            "--fingerprint",
            "substructure",
            "--keys",
            &bad_keys,
        ],
    ];
    for args in cases {
        assert_eq!(code(&molfp(&args)), 1, "{args:?}");
    }
}

#[test]
fn custom_key_file() {
    let d = Dir::new();
    let input = d.file("in.smi", THREE);
    let keys = d.file(
        "keys.tsv",
        "# id smarts description\n1\t[OX2H]\thydroxyl\n2\tc1ccccc1\tbenzene\n",
    );
    let out = d.path("o.txt");
    let o = molfp(&[
        "compute",
        &input,
        &out,
        "--fingerprint",
        "substructure",
        "--keys",
        &keys,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read(&out), "DENSEv1 3 2 u8\n1 0\n0 1\n1 0\n");
}

#[test]
fn descriptors_are_real_valued() {
    let d = Dir::new();
    let input = d.file("in.smi", "CCO\n");
    let out = d.path("o.txt");
    assert_eq!(
        code(&molfp(&[
            "compute",
            &input,
            &out,
            "--fingerprint",
            "descriptors"
        ])),
        0
    );
    let text = read(&out);
    assert!(text.starts_with("DENSEv1 1 10 f64\n"));
}
