//! Runs the acceptance suite twice (one worker, then several) plus once
//! through the command line, and prints one line per criterion.

use std::collections::BTreeMap;
use std::fs;

use chebdyn::chebfam::FamilyParameter;
use chebdyn_cli::{accept, run, AcceptOptions, Artifact};

fn by_name(a: &[Artifact]) -> BTreeMap<&str, &[u8]> {
    a.iter().map(|x| (x.name.as_str(), x.bytes.as_slice())).collect()
}

fn main() {
    let opts = |threads| AcceptOptions {
        t: FamilyParameter::parse("1/20").unwrap(),
        seed: 0,
        threads,
    };
    let many = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(4);
    let first = accept(&opts(1));
    let second = accept(&opts(many));

    let (a, b) = (by_name(&first.artifacts), by_name(&second.artifacts));
    let mut differing: Vec<&str> = a
        .iter()
        .filter(|(k, v)| b.get(*k) != Some(*v))
        .map(|(k, _)| *k)
        .collect();
    differing.extend(b.keys().filter(|k| !a.contains_key(*k)));

    let dir = tempfile::tempdir().unwrap();
    println!("-- command-line run: chebdyn accept --t 1/20 --seed 0");
    let code = run(["chebdyn", "accept", "--t", "1/20", "--seed", "0", "--out", dir.path().to_str().unwrap()]);
    for (name, bytes) in &a {
        match fs::read(dir.path().join(name)) {
            Ok(written) if written.as_slice() == *bytes => {}
            _ => differing.push(name),
        }
    }

    println!("-- acceptance criteria");
    let mut failed = Vec::new();
    for c in &first.criteria {
        let line = if c.id == 14 {
            let ok = c.passed && differing.is_empty() && second.criteria[13].passed;
            let detail = if differing.is_empty() {
                format!("{} files byte-identical across runs with 1 and {many} threads and the CLI run", a.len())
            } else {
                format!("differing files: {differing:?}")
            };
            if !ok {
                failed.push(14);
            }
            format!("{} 14 determinism: {detail}", if ok { "PASS" } else { "FAIL" })
        } else {
            if !c.passed {
                failed.push(c.id);
            }
            c.line()
        };
        println!("{line}");
    }
    if first.criteria.len() != 14 {
        failed.push(0);
    }
    if code != if first.passed() { 0 } else { 2 } {
        println!("FAIL cli exit code {code} disagrees with the suite");
        failed.push(0);
    }
    println!("acceptance: {} of 14 criteria passed", 14 - failed.iter().filter(|&&c| c > 0).count());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
