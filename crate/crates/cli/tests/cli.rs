use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn chebdyn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chebdyn"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest_value(dir: &Path, key: &str) -> Option<String> {
    let text = fs::read_to_string(dir.join("manifest.txt")).ok()?;
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")).map(str::to_string))
}

#[test]
fn perturbed_member_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let o = chebdyn(dir.path(), &["stability", "--map", "ft", "--t", "1/2", "--depth", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stable_to_depth=12"));
    assert_eq!(manifest_value(dir.path(), "config.seed").as_deref(), Some("0"));
    assert!(manifest_value(dir.path(), "elapsed_seconds").is_some());
    assert!(!dir.path().join("findings.csv").exists() || {
        let f = fs::read_to_string(dir.path().join("findings.csv")).unwrap();
        !f.contains(",fail")
    });
}

#[test]
fn unperturbed_map_fails_at_step_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = chebdyn(dir.path(), &["stability", "--map", "f", "--depth", "12"]);
    assert_eq!(o.status.code(), Some(2));
    let findings = fs::read_to_string(dir.path().join("findings.csv")).unwrap();
    assert!(findings.starts_with("check,expected,observed,tolerance,status\n"));
    assert!(findings.contains("violation at step 1"));
    assert!(findings.trim_end().ends_with(",fail"));
    let v = fs::read_to_string(dir.path().join("violations.csv")).unwrap();
    assert!(v.lines().skip(1).all(|l| l.split(',').nth(2) == Some("1")));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["frobnicate"][..],
        &["stability", "--map", "ft"],
        &["curve-growth", "--t", "3/2"],
        &["topdeg", "--samples", "0"],
        &["realize", "--word", "0124"],
        &["itinerary", "--point", "0.1"],
        &["render-basins", "--size", "12"],
        &["eta-mass", "--method", "simpson"],
        &["render-julia", "--viewport", "1,0,0,1"],
        &["sample-nu", "--t", "1/2"],
    ] {
        let o = chebdyn(dir.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "seed = 5\nsamples = 12\n").unwrap();
    let o = chebdyn(
        dir.path(),
        &["sample-mu", "--seed", "1", "--samples", "3", "--config", conf.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(manifest_value(dir.path(), "config.seed").as_deref(), Some("5"));
    let csv = fs::read_to_string(dir.path().join("mu_cloud.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);

    fs::write(&conf, "colour = red\n").unwrap();
    let o = chebdyn(dir.path(), &["sample-mu", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degrees_of_the_stable_member() {
    let dir = tempfile::tempdir().unwrap();
    let o = chebdyn(dir.path(), &["degrees", "--map", "ft", "--t", "1/2", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("degrees.csv")).unwrap();
    assert_eq!(csv, "n,degree\n1,4\n2,16\n3,64\n");
}

#[test]
fn map_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("square.map");
    fs::write(
        &file,
        "component1 = x1^2\ncomponent2 = x2^2\ncomponent3 = x3^2\ntwo_form_weight = 4\n",
    )
    .unwrap();
    let o = chebdyn(dir.path(), &["degrees", "--map", file.to_str().unwrap(), "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("d^3=8"));
}

#[test]
fn realized_words_come_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = chebdyn(dir.path(), &["realize", "--t", "1/2", "--word", "3102"]);
    assert_eq!(o.status.code(), Some(0));
    let point = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("point=").map(str::to_string))
        .unwrap();
    let o = chebdyn(dir.path(), &["itinerary", "--t", "1/2", "--point", &point, "--length", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("itinerary=3102"));
}

#[test]
fn renders_are_reproducible_across_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["render-partition", "--t", "1/2", "--depth", "2", "--size", "96x64"];
    let oa = chebdyn(a.path(), &[&args[..], &["--threads", "1"]].concat());
    let ob = chebdyn(b.path(), &[&args[..], &["--threads", "3"]].concat());
    assert_eq!((oa.status.code(), ob.status.code()), (Some(0), Some(0)));
    let pa = fs::read(a.path().join("partition.ppm")).unwrap();
    assert!(pa.starts_with(b"P6\n# chebdyn\n96 64\n255\n"));
    assert_eq!(pa.len(), b"P6\n# chebdyn\n96 64\n255\n".len() + 96 * 64 * 3);
    assert_eq!(pa, fs::read(b.path().join("partition.ppm")).unwrap());
}

#[test]
fn stochastic_outputs_follow_the_seed() {
    let runs: Vec<String> = ["7", "7", "8"]
        .iter()
        .map(|seed| {
            let d = tempfile::tempdir().unwrap();
            let o = chebdyn(d.path(), &["sample-nu", "--samples", "20", "--seed", seed]);
            assert_eq!(o.status.code(), Some(0));
            fs::read_to_string(d.path().join("nu_cloud.csv")).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_ne!(runs[0], runs[2]);
}

#[test]
fn custom_palette_missing_a_code_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let pal = dir.path().join("p.txt");
    fs::write(&pal, "0 0 0 0\n1 255 0 0\n").unwrap();
    let o = chebdyn(
        dir.path(),
        &["render-julia", "--size", "40x15", "--iterations", "50", "--palette", pal.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("julia.ppm").exists());
}

#[test]
fn family_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = chebdyn(dir.path(), &["verify-family", "--samples", "2000", "--markov-samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = fs::read_to_string(dir.path().join("findings.csv")).unwrap();
    for check in ["f_two_form_weight", "g_two_form_weight", "h_two_form_weight", "q_pointwise_fixed", "rho_functional_equation"] {
        assert!(f.lines().any(|l| l.starts_with(check) && l.ends_with(",pass")), "{check}");
    }
}
