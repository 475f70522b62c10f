//! End-to-end runs of the `cavity-sense` binary.

use cavity_sense::analytic::ideal_qfi;
use cavity_sense::SystemParams;
use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cavity-sense");

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cavity-sense-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("CAVITYSENSE_")) {
        cmd.env_remove(k);
    }
    cmd.envs(envs.iter().copied());
    cmd.output().unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const IDEAL: &str = "n = 51\nalpha = 15\nchi = 1\nsweep = time\ngrid.start = 0.01\ngrid.stop = 0.5\ngrid.points = 25\n";

#[test]
fn config_errors_exit_2_with_location() {
    let dir = workdir("cfgerr");
    let path = dir.join("bad.conf");
    std::fs::write(&path, "n = 10\nalpha = 4\nchi = 1\nsweep = time\ngrid.start = 0\ngrid.stop = 1\ngrid.points = 0\n").unwrap();
    let out = run(&["sensitivity", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.conf:7:"), "{err}");

    std::fs::write(&path, "n = 10\nalpah = 4\n").unwrap();
    let out = run(&["sensitivity", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.conf:2:"));

    let out = run(&["figure", "fig11", "--out", dir.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3() {
    let dir = workdir("numeric");
    let path = dir.join("cap.conf");
    std::fs::write(&path, "n = 10\nalpha = 10\ng = 1\ndynamics.t_stop = 1\nsimulator.max_bytes = 1000\n").unwrap();
    let out = run(&["dynamics", "--config", path.to_str().unwrap(), "--out", dir.join("o.csv").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_is_byte_identical_across_runs_and_thread_counts() {
    let dir = workdir("determinism");
    let cfg = dir.join("ideal.conf");
    std::fs::write(&cfg, IDEAL).unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2", "3"].iter().enumerate() {
        let out = dir.join(format!("run{i}.csv"));
        let o = run(&["sensitivity", "--config", cfg.to_str().unwrap(), "--threads", threads, "--out", out.to_str().unwrap()], &[]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with(&format!("# cavity-sense v{}, scenario ", env!("CARGO_PKG_VERSION"))));
    assert_eq!(first.rsplit(' ').next().unwrap().len(), 64);
    assert!(text.contains("sweep_value,delta_beta_sq,gain_db,qfi_bound_db,validity_flags\n"));
    assert_eq!(data_rows(&text).len(), 25);
    assert!(dir.join("run0.plot.py").exists());
}

#[test]
fn flags_override_file_and_file_overrides_env() {
    let dir = workdir("layers");
    let cfg = dir.join("c.conf");
    std::fs::write(&cfg, IDEAL).unwrap();
    let read_alpha = |args: &[&str], envs: &[(&str, &str)]| {
        let out = dir.join("o.csv");
        let mut full = vec!["sensitivity", "--out", out.to_str().unwrap()];
        full.extend_from_slice(args);
        let o = run(&full, envs);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(out).unwrap();
        let line = text.lines().find(|l| l.contains("alpha = ")).unwrap().to_string();
        line.split("alpha = ").nth(1).unwrap().split(',').next().unwrap().parse::<f64>().unwrap()
    };
    let c = cfg.to_str().unwrap();
    assert_eq!(read_alpha(&["--config", c], &[("CAVITYSENSE_ALPHA", "7")]), 15.0);
    assert_eq!(read_alpha(&["--config", c, "--set", "alpha=9"], &[("CAVITYSENSE_ALPHA", "7")]), 9.0);
    // keys absent from the file come from the environment
    let partial = dir.join("partial.conf");
    std::fs::write(&partial, IDEAL.replace("alpha = 15\n", "")).unwrap();
    assert_eq!(read_alpha(&["--config", partial.to_str().unwrap()], &[("CAVITYSENSE_ALPHA", "7")]), 7.0);
}

#[test]
fn freq_convention_flag_scales_rates() {
    let dir = workdir("freq");
    let cfg = dir.join("c.conf");
    std::fs::write(&cfg, "n = 100\nalpha = 1e3\ng = 1 kHz\nkind = optimize\n").unwrap();
    let chi_of = |conv: &str| {
        let out = dir.join(format!("{conv}.csv"));
        let o = run(
            &[
                "sensitivity",
                "--config",
                cfg.to_str().unwrap(),
                "--freq-convention",
                conv,
                "--set",
                "sweep=time",
                "--set",
                "grid.start=1e-6",
                "--set",
                "grid.stop=1e-5",
                "--set",
                "grid.points=3",
                "--out",
                out.to_str().unwrap(),
            ],
            &[],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(out).unwrap();
        let line = text.lines().find(|l| l.contains("chi = ")).unwrap().to_string();
        line.split("chi = ").nth(1).unwrap().split(',').next().unwrap().parse::<f64>().unwrap()
    };
    let ratio = chi_of("hz2pi") / chi_of("rad");
    assert!((ratio - 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn lossless_qfi_matches_ideal_formula() {
    let dir = workdir("qfi0");
    let cfg = dir.join("q.conf");
    std::fs::write(
        &cfg,
        "n = 8\nalpha = 3\nchi = 1\nkappa = 0\nmethod = both\nsweep = time\ngrid.start = 0.01\ngrid.stop = 1\ngrid.points = 9\n",
    )
    .unwrap();
    let out = dir.join("q.csv");
    let o = run(&["qfi", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let params = SystemParams::with_chi(8, 3.0, 1.0).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 18);
    for r in rows {
        let (t, f): (f64, f64) = (r[0].parse().unwrap(), r[2].parse().unwrap());
        let want = ideal_qfi(&params, t).result.value;
        assert!((f - want).abs() / want < 1e-9, "{} at t = {t}: {f} vs {want}", r[1]);
    }
}

#[test]
fn optimize_reports_closed_form_ratio() {
    let dir = workdir("opt");
    let cfg = dir.join("o.conf");
    std::fs::write(&cfg, "n = 1e6\nalpha = 1e4\ng = 11 kHz\nfreq_convention = hz2pi\nkappa = 5 kHz\nphi = auto\n").unwrap();
    let out = dir.join("o.txt");
    let o = run(&["optimize", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("status = interior"));
    let ratio: f64 = text.lines().find_map(|l| l.strip_prefix("ratio_t = ")).unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "{text}");
}

#[test]
fn wigner_writes_panels_report_and_script() {
    let dir = workdir("wigner");
    let out = dir.join("w.dat");
    let o = run(
        &[
            "wigner",
            "--set",
            "n=4",
            "--set",
            "alpha=2",
            "--set",
            "chi=1",
            "--set",
            "wigner.times=0,0.5",
            "--set",
            "wigner.step=0.1",
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["w.panel0.dat", "w.panel1.dat", "w.report.csv", "w.plot.py"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let report = std::fs::read_to_string(dir.join("w.report.csv")).unwrap();
    for row in data_rows(&report) {
        let integral: f64 = row[2].parse().unwrap();
        let marginal: f64 = row[4].parse().unwrap();
        assert!((integral - 1.0).abs() < 1e-3 && marginal < 1e-6, "{row:?}");
    }
}

#[test]
fn figure_presets_replay_from_committed_files() {
    let dir = workdir("figs");
    let o = run(&["figure", "fig6", "--out", dir.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let peak = |f: &str| {
        let text = std::fs::read_to_string(dir.join(f)).unwrap();
        data_rows(&text).iter().map(|r| r[2].parse::<f64>().unwrap()).filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max)
    };
    let (a, b) = (peak("fig6a.csv"), peak("fig6b.csv"));
    assert!((10.0..=20.0).contains(&a), "{a}");
    assert!(b > a);

    let o = run(&["figure", "fig9", "--out", dir.to_str().unwrap()], &[]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.join("fig9.csv")).unwrap();
    let best = data_rows(&text)
        .iter()
        .map(|r| (r[0].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap()))
        .fold((0.0, f64::NEG_INFINITY), |a, x| if x.1 > a.1 { x } else { a });
    assert!(best.0 > 85e-9, "{best:?}");

    let o = run(&["figure", "fig1", "--out", dir.to_str().unwrap()], &[]);
    assert!(o.status.success());
    assert!(dir.join("fig1.panel2.dat").exists());
    // crescents at the intermediate time: the Wigner function turns negative
    let report = std::fs::read_to_string(dir.join("fig1.report.csv")).unwrap();
    let mins: Vec<f64> = data_rows(&report).iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(mins[0] > -1e-12 && mins[1] < -1e-4 && mins[2] < -1e-4, "{mins:?}");
}
