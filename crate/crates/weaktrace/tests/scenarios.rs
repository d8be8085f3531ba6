use std::fs;

use weaktrace::config::Config;
use weaktrace::manifest::{sha256_hex, verify, RunArtifacts};
use weaktrace::scenarios::{run_danan_original, run_pf_modification, run_scaling, run_zd_sweep};

fn svg_cfg() -> Config {
    Config::parse("format = csv+svg", "test").unwrap()
}

fn csv_files(a: &RunArtifacts) -> Vec<(String, String)> {
    a.files.iter().filter(|(n, _)| n.ends_with(".csv")).cloned().collect()
}

#[test]
fn runs_are_bit_identical_across_worker_counts() {
    let cfg = svg_cfg();
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let one = pool(1).install(|| run_zd_sweep(&cfg).unwrap().artifacts);
    let four = pool(4).install(|| run_zd_sweep(&cfg).unwrap().artifacts);
    assert_eq!(one, four);
    let a = pool(1).install(|| run_scaling(&cfg).unwrap().artifacts);
    let b = pool(3).install(|| run_scaling(&cfg).unwrap().artifacts);
    assert_eq!(csv_files(&a), csv_files(&b));
}

#[test]
fn written_files_match_manifest_and_plots() {
    let root = tempfile::tempdir().unwrap();
    let cfg = svg_cfg();
    let runs = [
        run_danan_original(&cfg).unwrap().artifacts,
        run_pf_modification(&cfg).unwrap().artifacts,
        run_zd_sweep(&cfg).unwrap().artifacts,
        run_scaling(&cfg).unwrap().artifacts,
    ];
    for run in &runs {
        let dir = run.write(root.path()).unwrap();
        assert!(verify(&dir).unwrap().is_empty(), "{}", run.scenario);
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "svg") {
                let svg = fs::read_to_string(&path).unwrap();
                let sources: Vec<&str> = svg.lines().filter(|l| l.starts_with("<!-- data: ")).collect();
                assert!(!sources.is_empty());
                for line in sources {
                    let body = line.trim_start_matches("<!-- data: ").trim_end_matches(" -->");
                    let (file, hash) = body.split_once(" sha256=").unwrap();
                    assert_eq!(sha256_hex(&fs::read(dir.join(file)).unwrap()), hash, "{}", path.display());
                }
            }
        }
        let manifest = fs::read_to_string(dir.join("manifest.txt")).unwrap();
        let listed = manifest.lines().filter(|l| l.len() > 66 && l.as_bytes()[64] == b' ').count();
        assert_eq!(listed, fs::read_dir(&dir).unwrap().count() - 1, "{}", run.scenario);
    }
}

#[test]
fn weak_values_agree_across_scenarios() {
    let cfg = Config::default();
    let rows = |a: &RunArtifacts| a.file("weak_values.csv").unwrap().lines().skip(1).map(String::from).collect::<Vec<_>>();
    let pf = run_pf_modification(&cfg).unwrap().artifacts;
    let sweep = run_zd_sweep(&cfg).unwrap().artifacts;
    assert_eq!(rows(&pf), rows(&sweep));
    let original = run_danan_original(&cfg).unwrap().artifacts;
    let scaling_cfg = Config::parse("phi_c = 0", "t").unwrap();
    let (wv, _) = weaktrace::scenarios::run_weak_values(&scaling_cfg).unwrap();
    assert_eq!(rows(&original), weaktrace::tables::weak_values_csv(&wv).lines().skip(1).map(String::from).collect::<Vec<_>>());
}

#[test]
fn pf_at_finite_distance_nulls_there_only() {
    let near = Config::parse("z_d = 1000", "t").unwrap();
    let run = run_pf_modification(&near).unwrap();
    assert!((run.phi_c - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert!(run.checks.iter().all(|c| c.pass), "{:?}", run.checks);

    // same phase, detector moved to the far field: A and B come back
    let mut moved = near.clone();
    moved.set("z_d", "far", "t").unwrap();
    moved.set("phi_c", "pi/4", "t").unwrap();
    let s = run_pf_modification(&moved).unwrap().spectrum;
    assert!(s.peak_magnitude("A") > 0.5 * s.peak_magnitude("C"));
}

#[test]
fn imbalance_breaks_the_e_null() {
    let cfg = Config::parse("imbalance = 0.2", "t").unwrap();
    let run = run_danan_original(&cfg).unwrap();
    let ratio = run.spectrum.peak_magnitude("E") / run.spectrum.peak_magnitude("C");
    assert!(ratio > 1e-3, "{ratio}");
}
