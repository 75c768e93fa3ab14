use std::process::Command;

use exthyp_cli::json::{report_from_json, report_line};
use exthyp_cli::{run, EXIT_DOMAIN, EXIT_FAIL, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_USAGE};
use exthyp_core::hyp::{eval_hyp, HypSpec, NumericControls};
use exthyp_core::report::{Status, VerificationReport};

fn exthyp(args: &[&str]) -> exthyp_cli::Outcome {
    run(std::iter::once("exthyp").chain(args.iter().copied()))
}

fn first_number(s: &str) -> f64 {
    s.lines().next().unwrap().trim().parse().unwrap()
}

#[test]
fn eval_trivial_points() {
    let out = exthyp(&["eval", "gamma_p", "s=3", "p=0"]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    assert!((first_number(&out.stdout) - 2.0).abs() < 1e-12);

    let out = exthyp(&["eval", "upper", "s=1", "x=1", "p=0"]);
    assert!((first_number(&out.stdout) - (-1.0f64).exp()).abs() < 1e-14);
}

#[test]
fn eval_hyp_matches_library() {
    let out = exthyp(&[
        "eval",
        "hyp",
        "kind=upper",
        "alpha1=1.5",
        "x=1",
        "p=0.5",
        "num=2",
        "den=3",
        "z=0.3",
        "--format",
        "json",
    ]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let v: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
    let spec = HypSpec::upper(1.5, 1.0, 0.5).with_num(&[2.0]).with_den(&[3.0]).at(0.3);
    let lib = eval_hyp(&spec, &NumericControls::default()).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), lib.value);
    assert_eq!(v["series_terms"].as_u64().unwrap() as usize, lib.terms);
}

#[test]
fn eval_csv_has_header_and_lf() {
    let out = exthyp(&["eval", "poch_upper", "lambda=1.5", "nu=2", "x=1", "p=1", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.split('\n').collect();
    assert_eq!(lines[0], "function,value,err_estimate,series_terms,quad_evals");
    assert!(lines[1].starts_with("poch_upper,"));
    assert_eq!(lines[2], "");
    assert!(!out.stdout.contains('\r'));
}

#[test]
fn exit_codes() {
    assert_eq!(exthyp(&["eval", "upper", "s=1", "x=1", "q=2"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["eval", "nosuch", "s=1"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["eval", "upper", "s=1"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["eval", "upper", "s=1", "x=nan"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["verify", "nosuch"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["eval", "gamma_p", "s=1", "p=1", "--max-terms", "0"]).code, EXIT_USAGE);

    assert_eq!(exthyp(&["eval", "upper", "s=1", "x=-1"]).code, EXIT_DOMAIN);
    assert_eq!(exthyp(&["eval", "gamma_p", "s=-2", "p=0"]).code, EXIT_DOMAIN);
    assert_eq!(exthyp(&["eval", "hyp", "alpha1=1", "num=1,1", "den=1", "z=2"]).code, EXIT_DOMAIN);

    let out = exthyp(&["eval", "hyp", "alpha1=1", "den=1", "z=50", "--max-terms", "20"]);
    assert_eq!(out.code, EXIT_NONCONVERGENCE, "{out:?}");
    let out = exthyp(&["eval", "upper", "s=2.5", "x=0.5", "p=1", "--max-subdiv", "1", "--rel-tol", "1e-15"]);
    assert_eq!(out.code, EXIT_NONCONVERGENCE, "{out:?}");

    // Absurdly tight tolerance forces FAIL reports.
    assert_eq!(exthyp(&["verify", "gamma", "tol=1e-30"]).code, EXIT_FAIL);
}

#[test]
fn help_exits_zero() {
    let out = exthyp(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verify"));
}

#[test]
fn table_rows_and_formats() {
    let out = exthyp(&["table", "upper", "s=1", "p=0", "sweep", "x", "0..2", "steps=2", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "x,value,err_estimate,status");
    assert_eq!(lines.len(), 4);
    for (i, line) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].parse::<f64>().unwrap(), i as f64);
        let v: f64 = cols[1].parse().unwrap();
        assert!((v - (-(i as f64)).exp()).abs() < 1e-13, "{line}");
        assert_eq!(cols[3], "ok");
    }

    let out = exthyp(&["table", "gamma_p", "p=1", "sweep=s", "range=1..3", "steps=2", "--format", "json"]);
    let values: Vec<f64> = out
        .stdout
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values.windows(2).all(|w| w[0] > 0.0 && w[1] > w[0]), "{values:?}");
}

#[test]
fn table_with_zero_steps_equals_eval() {
    let t = exthyp(&["table", "lower", "s=2", "p=0.5", "sweep=x", "range=1.5..9", "steps=0", "--format", "csv"]);
    let e = exthyp(&["eval", "lower", "s=2", "p=0.5", "x=1.5", "--format", "csv"]);
    let t_row: Vec<String> = t.stdout.lines().nth(1).unwrap().split(',').map(String::from).collect();
    let e_row: Vec<String> = e.stdout.lines().nth(1).unwrap().split(',').map(String::from).collect();
    assert_eq!(t.stdout.lines().count(), 2);
    assert_eq!(t_row[1], e_row[1]);
}

#[test]
fn table_failed_rows_carry_status() {
    let out = exthyp(&["table", "upper", "s=1", "p=0", "sweep=x", "range=-1..1", "steps=2", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let rows: Vec<&str> = out.stdout.lines().skip(1).collect();
    assert!(rows[0].ends_with(",nan,nan,domain"), "{}", rows[0]);
    assert!(rows[2].ends_with(",ok"));
}

#[test]
fn table_usage_errors() {
    assert_eq!(exthyp(&["table", "upper", "s=1", "p=0", "x=1", "sweep=x", "range=0..1"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["table", "upper", "s=1", "p=0", "sweep=q", "range=0..1"]).code, EXIT_USAGE);
    assert_eq!(exthyp(&["table", "upper", "s=1", "p=0", "x=1"]).code, EXIT_USAGE);
}

#[test]
fn report_json_round_trip() {
    let reports = [
        VerificationReport::compare("a[x=1]", 1.25, 1.2500000001, 1e-6, 17, 420),
        VerificationReport::compare("quote\"d", -3.0e-300, 0.0, 1e-6, 0, 1),
        VerificationReport::skipped("s", 1e-6),
        VerificationReport::failed("f", 1e-9),
    ];
    for r in &reports {
        let back = report_from_json(&report_line(r)).unwrap();
        assert_eq!(back.identity_id, r.identity_id);
        assert_eq!(back.status, r.status);
        assert_eq!((back.series_terms, back.quad_evals), (r.series_terms, r.quad_evals));
        for (x, y) in [
            (back.lhs, r.lhs),
            (back.rhs, r.rhs),
            (back.abs_err, r.abs_err),
            (back.rel_err, r.rel_err),
            (back.tol, r.tol),
        ] {
            assert!(x == y || (x.is_nan() && y.is_nan()), "{x} vs {y}");
        }
    }
}

#[test]
fn verify_stream_round_trips() {
    let out = exthyp(&["verify", "frac", "--format", "json"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let lines: Vec<&str> = out.stdout.lines().collect();
    let (summary, body) = lines.split_last().unwrap();
    for line in body {
        let r = report_from_json(line).unwrap();
        assert_eq!(r.status, Status::Pass, "{line}");
        assert_eq!(report_line(&r), *line);
    }
    let s: serde_json::Value = serde_json::from_str(summary).unwrap();
    assert_eq!(s["passed"].as_u64().unwrap() as usize, body.len());
    assert_eq!(s["failed"], 0);
}

#[test]
fn looser_tolerance_keeps_pass_set() {
    let strict = exthyp(&["verify", "hyp", "--format", "json"]);
    let loose = exthyp(&["verify", "hyp", "tol=1e-2", "--format", "json"]);
    let passed = |o: &exthyp_cli::Outcome| -> Vec<String> {
        let lines: Vec<&str> = o.stdout.lines().collect();
        lines[..lines.len() - 1]
            .iter()
            .map(|l| report_from_json(l).unwrap())
            .filter(|r| r.status == Status::Pass)
            .map(|r| r.identity_id)
            .collect()
    };
    let (a, b) = (passed(&strict), passed(&loose));
    assert!(a.iter().all(|id| b.contains(id)));
}

#[test]
fn binary_output_is_deterministic() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_exthyp"))
            .args([
                "table",
                "hyp",
                "alpha1=1.5",
                "x=1",
                "p=0.5",
                "num=2",
                "den=3",
                "sweep=z",
                "range=-0.5..0.5",
                "steps=8",
                "--format",
                "csv",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn genfun_and_frac_eval() {
    let out = exthyp(&[
        "eval",
        "genfun",
        "theorem=binomial-delta",
        "lambda=1",
        "alpha1=1",
        "den=1",
        "z=0.2",
        "t=0.3",
        "--format",
        "json",
    ]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let v: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
    let (l, r) = (v["value"].as_f64().unwrap(), v["rhs"].as_f64().unwrap());
    assert!((l - r).abs() <= 1e-9 * r.abs());

    // I^1 of e^{ωt} from 0 to y is (e^{ωy} − 1)/ω.
    let out = exthyp(&["eval", "frac", "rho=1", "mu=1", "alpha1=1", "den=1", "omega=0.5", "y=1"]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    assert!((first_number(&out.stdout) - 2.0 * (0.5f64.exp() - 1.0)).abs() < 1e-13);

    let out = exthyp(&["eval", "frac", "op=derivative", "rho=1", "mu=2", "alpha1=1", "den=1", "omega=0.5", "y=1"]);
    assert_eq!(out.code, EXIT_DOMAIN, "{out:?}");
}
