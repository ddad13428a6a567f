use std::path::PathBuf;
use std::process::{Command, Output};

use thurston::cli::{load_rule_text, parse_config};
use thurston::rules;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thurston")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thurston-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_bundled_rule_is_clean() {
    let o = run(&["validate", "lattes_2x2.rule"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(run(&["validate", "--rule", "pentagon_5"]).status.code(), Some(0));
}

#[test]
fn validate_reports_a_broken_rule() {
    let text = rules::LATTES_2X2.replacen("DEG 4", "DEG 3", 1);
    assert_ne!(text, rules::LATTES_2X2);
    let path = scratch("broken.rule");
    std::fs::write(&path, text).unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stdout.is_empty());
    assert_eq!(run(&["dn", "--rule", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn dn_table_of_lattes() {
    let o = run(&["dn", "--rule", "lattes_2x2.rule", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,Dn,Dn_nthroot\n1,2,2\n2,4,2\n3,8,2\n4,16,2\n");
}

#[test]
fn build_counts_and_export() {
    let path = scratch("level.txt");
    let o = run(&["build", "--rule", "pentagon_5", "--nmax", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,vertices,edges,tiles,euler\n0,3,3,2,2\n1,7,15,10,2\n2,27,75,50,2\n");
    let export = std::fs::read_to_string(path).unwrap();
    assert!(export.starts_with("LEVEL 2\nVERTICES 27\n"));
    assert!(export.contains("\nEDGES 75\n") && export.contains("\nTILES 50\n"));
}

#[test]
fn metric_report_names_constants() {
    let text = stdout(&run(&["metric-cert", "--rule", "lattes_2x2", "--nmax", "2"]));
    for key in ["lambda = 2\n", "C = ", "K = ", "C0 = ", "L_cert = 2\n"] {
        assert!(text.contains(key), "{key}");
    }
    assert_eq!(run(&["metric-cert", "--rule", "lattes_2x2", "--lambda", "1"]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["orbits", "--rule", "pentagon_5", "--pmax", "3"][..],
        &["pressure", "--rule", "lattes_2x2", "--nmax", "2"],
        &["pot-table", "--rule", "lattes_2x2", "--pmax", "4"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn csv_headers() {
    let first = |args: &[&str]| stdout(&run(args)).lines().next().unwrap_or("").to_string();
    assert_eq!(first(&["orbits", "--rule", "lattes_2x2", "--pmax", "1"]), "period,word,length,err,on_skeleton");
    assert_eq!(first(&["pot-table", "--rule", "lattes_2x2", "--pmax", "2"]), "T,pi,Li,ratio,straddling");
    assert_eq!(first(&["sni-radius", "--eps", "0.1", "--c0", "2"]), "eps,alpha,lambda,c0,radius");
}

#[test]
fn radius_arithmetic() {
    let o = run(&["sni-radius", "--eps", "0.1", "--alpha", "1", "--lambda", "2", "--c0", "2"]);
    assert_eq!(stdout(&o), "eps,alpha,lambda,c0,radius\n0.1,1,2,2,6.25e-3\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["dn"]).status.code(), Some(2));
    assert_eq!(run(&["dn", "--rule", "no_such_rule"]).status.code(), Some(2));
    assert_eq!(run(&["dn", "--rule", "lattes_2x2", "--nmax", "0"]).status.code(), Some(2));
    assert_eq!(run(&["pot-table", "--rule", "lattes_2x2", "--potential", "const -1"]).status.code(), Some(2));
    assert_eq!(run(&["orbits", "--rule", "lattes_2x2", "--potential", "const"]).status.code(), Some(2));
    assert_eq!(run(&["sni-radius"]).status.code(), Some(2));
}

#[test]
fn config_file_fills_unset_flags() {
    let path = scratch("run.cfg");
    std::fs::write(&path, "# dn run\nrule = lattes_2x2\nnmax = 2\n").unwrap();
    let cfg = path.to_str().unwrap();
    assert_eq!(stdout(&run(&["dn", "--config", cfg])), "n,Dn,Dn_nthroot\n1,2,2\n2,4,2\n");
    assert_eq!(stdout(&run(&["dn", "--config", cfg, "--nmax", "1"])), "n,Dn,Dn_nthroot\n1,2,2\n");
    assert!(parse_config("nmax 2").is_err());
    std::fs::write(&path, "colour = b\n").unwrap();
    assert_eq!(run(&["dn", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn rule_lookup_prefers_files() {
    assert_eq!(load_rule_text("pentagon_5.rule").unwrap(), rules::PENTAGON_5);
    let path = scratch("lattes_2x2.rule");
    std::fs::write(&path, "# shadow\n").unwrap();
    assert_eq!(load_rule_text(path.to_str().unwrap()).unwrap(), "# shadow\n");
}

#[test]
fn plan_round_trip_and_constant_fails_check() {
    let plan = scratch("plan.txt");
    let plan_s = plan.to_str().unwrap();
    let o = run(&["sni-construct", "--rule", "lattes_2x2", "--alpha", "0.99", "--out", plan_s]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let evidence = scratch("constant.csv");
    let o = run(&["sni-check", "--rule", "lattes_2x2", "--potential", "const 1", "--plan", plan_s, "--out", evidence.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(&evidence).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("color,M,tile,N,quotient,pass,quotient_hi,tiles,sep"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[4] == "0e0" && r[5] == "false" && r[6] == "0e0"));

    let expr = format!("perturbed(const 1, {plan_s})");
    let evidence = scratch("perturbed.csv");
    let o = run(&["sni-check", "--rule", "lattes_2x2", "--potential", &expr, "--out", evidence.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&evidence).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(5) == Some("true")));

    let o = run(&["sni-radius", "--plan", plan_s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",9.470409869606792e-7"));
}
