use std::process::{Command, Output};

fn cuspidal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspidal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_on_small_primes() {
    for theorem in ["gauss-sum", "even", "odd", "jh", "ktype"] {
        let o = cuspidal(&["verify", "--theorem", theorem, "--primes", "3..5", "--jobs", "1"]);
        assert_eq!(o.status.code(), Some(0), "{theorem}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("mismatches 0"), "{theorem}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--theorem", "even", "--primes", "4..4"][..],
        &["verify", "--theorem", "even", "--primes", "3..37"],
        &["verify", "--theorem", "nope"],
        &["verify", "--theorem", "ktype", "--primes", "3..11"],
        &["query", "--p", "5", "--nu", "3,1", "--chi", "3,1"],
        &["query", "--p", "9", "--nu", "3,1", "--chi", "0,0"],
        &["query", "--p", "5", "--nu", "1,1", "--chi", "0,0"],
        &["report", "--format", "xml"],
        &["frobnicate"],
    ] {
        let o = cuspidal(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn query_prints_classification() {
    let o = cuspidal(&["query", "--p", "5", "--nu", "3,1", "--chi", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("type: Type1, t_chi = 1"), "{out}");
    assert!(out.contains("predicted mu = 2 (quadratic) [even/type1/t-odd]"), "{out}");

    let o = cuspidal(&["query", "--p", "5", "--nu", "3,1", "--chi", "2,2", "--mu", "2"]);
    assert!(stdout(&o).contains("char0 true, modp true"));
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |path: &std::path::Path, jobs: &str| {
        let o = cuspidal(&[
            "report",
            "--format",
            "json",
            "--theorem",
            "odd",
            "--primes",
            "3..7",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    };
    run(&a, "1");
    run(&b, "2");
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["context"]["p"], serde_json::json!([3, 5, 7]));
    assert_eq!(v["context"]["psi"], "psi(x)=zeta_p^x");
    assert_eq!(v["summary"]["mismatches"], 0);
}

#[test]
fn csv_report_has_fixed_header() {
    let o = cuspidal(&["report", "--format", "csv", "--primes", "3..5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,nu_a,nu_b,chi_a,chi_b,mu_weight,type,t_chi,eps_chi,eps_nu,predicted,char0_nonzero,modp_nonzero"
    );
    assert!(lines.all(|l| l.split(',').count() == 13));
}
