use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracwave::cli_io::{run, RunConfig, Task};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracwave"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run_cli(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).arg("--quiet").output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.conf");
    std::fs::write(&path, text).unwrap();
    path
}

const ZENER: &str = "model = zener\nmedium.rho0 = 1000 kg/m^3\nmedium.c0 = 1540 m/s\n\
    params.tau_sigma = 1 us\nparams.tau_eps = 1 ns\nparams.alpha = 0.5\n\
    sweep.omega_min = 1e3\nsweep.omega_max = 1e12\nsweep.points_per_decade = 8\ntasks = dispersion\n";

#[test]
fn fig2_produces_the_three_panes() {
    let dir = tempfile::tempdir().unwrap();
    let conf = configs().join("fig2.conf");
    let o = run_cli(&["run", conf.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let attenuation = std::fs::read_to_string(dir.path().join("attenuation.csv")).unwrap();
    let speed = std::fs::read_to_string(dir.path().join("phase_speed.csv")).unwrap();
    let dist = std::fs::read_to_string(dir.path().join("distribution.csv")).unwrap();
    assert!(attenuation.starts_with("omega[rad/s],omega_tau_sigma[1],alpha_k[Np/m]\n"));
    assert!(speed.starts_with("omega[rad/s],omega_tau_sigma[1],c_p[m/s]\n"));
    assert!(dist.starts_with("Omega[rad/s],Omega_tau_sigma[1],kappa_nu[s/Pa]\n"));
    let full = std::fs::read_to_string(dir.path().join("dispersion.csv")).unwrap();
    assert_eq!(
        full.lines().next().unwrap(),
        "omega[rad/s],omega_tau_sigma[1],re_k[1/m],im_k[1/m],alpha_k[Np/m],c_p[m/s]"
    );
    // 12 decades at 20 points per decade
    assert_eq!(attenuation.lines().count(), 1 + 241);
    assert!(!full.contains('\r'));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["tasks"]["causality"]["kind"], "zener");
    assert!(report["tasks"]["causality"]["kk_max_rel_error"].as_f64().unwrap() < 1e-2);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let conf = configs().join("fig2.conf");
    let conf = conf.to_str().unwrap();
    assert!(run_cli(&["run", conf, "--svg"], a.path()).status.success());
    let o = bin()
        .env("FRACWAVE_THREADS", "1")
        .args(["run", conf, "--svg", "--quiet", "--out"])
        .arg(b.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 10);
    for name in names {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert!(x == y, "{name:?} differs");
    }
}

#[test]
fn config_errors_exit_2_with_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (ZENER.replace("sweep.omega_max = 1e12", "sweep.omega_max = 1e3"), "sweep.omega_max"),
        (ZENER.replace("1 ns", "1 parsec"), "line 5: params.tau_eps"),
        (format!("{ZENER}params.gamma = 2\n"), "line 11: params.gamma"),
        (ZENER.replace("tasks = dispersion", "tasks = dispersion, regimes, spectra"), "tasks"),
        (ZENER.replace("params.alpha = 0.5", "params.alpha = 1.5"), "params"),
    ];
    for (text, needle) in cases {
        let conf = write_config(dir.path(), &text);
        let o = run_cli(&["run", conf.to_str().unwrap()], &dir.path().join("out"));
        let stderr = String::from_utf8_lossy(&o.stderr);
        assert_eq!(o.status.code(), Some(2), "{needle}: {stderr}");
        assert!(stderr.contains(needle), "{needle}: {stderr}");
    }
    let conf = write_config(dir.path(), ZENER);
    let o = run_cli(&["run", conf.to_str().unwrap(), "--points-per-decade", "3"], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let o = run_cli(&["fit", conf.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let o = run_cli(&["run", "/nonexistent/run.conf"], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_3_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let text = "model = discrete\nmedium.rho0 = 1\nmedium.kappa0 = 1\n\
        discrete.1.tau = 1\ndiscrete.1.kappa = 2\n\
        sweep.omega_min = 1e-3\nsweep.omega_max = 1e3\ntasks = dispersion\n";
    let conf = write_config(dir.path(), text);
    let o = run_cli(&["run", conf.to_str().unwrap()], &dir.path().join("out"));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(3), "{stderr}");
    assert!(stderr.contains("dispersion") && stderr.contains("omega = "), "{stderr}");
}

#[test]
fn tissue_fit_matches_reference_run() {
    let dir = tempfile::tempdir().unwrap();
    let conf = configs().join("tissue_fit.conf");
    let o = run_cli(&["fit", conf.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let golden: serde_json::Value = serde_json::from_str(include_str!("golden/tissue_fit_report.json")).unwrap();
    let fit = &report["tasks"]["fit"];
    let expected = &golden["tasks"]["fit"];
    assert_eq!(fit["kind"], "discrete");
    assert_eq!(fit["admissible"], true);
    let rms = fit["result"]["residual_rms"].as_f64().unwrap();
    assert!((rms / expected["result"]["residual_rms"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    for (m, e) in fit["result"]["params"]["mechanisms"]
        .as_array()
        .unwrap()
        .iter()
        .zip(expected["result"]["params"]["mechanisms"].as_array().unwrap())
    {
        for key in ["tau", "kappa"] {
            let (x, y) = (m[key].as_f64().unwrap(), e[key].as_f64().unwrap());
            assert!((x / y - 1.0).abs() < 1e-6, "{key}: {x} vs {y}");
        }
    }
    let csv = std::fs::read_to_string(dir.path().join("fit.csv")).unwrap();
    assert!(csv.starts_with("omega[rad/s],alpha_target[Np/m],alpha_fit[Np/m]\n"));
}

#[test]
fn every_model_runs_its_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("dist.txt");
    std::fs::write(&table, "1e-2 1e-3\n1e0 1e-3\n1e2 1e-5\n").unwrap();
    let common = "medium.rho0 = 1\nmedium.kappa0 = 1\nsweep.omega_min = 1e-5\nsweep.omega_max = 1e5\n";
    let models = [
        "model = modified\nparams.tau_sigma = 1\nparams.tau_eps = 1e-2\nparams.alpha = 0.4\nparams.beta = 0.6\ntasks = dispersion, causality\n".to_string(),
        "model = kelvin_voigt\nparams.tau_sigma = 1\nparams.alpha = 0.5\ntasks = dispersion\n".to_string(),
        "model = discrete\ndiscrete.1.tau = 1\ndiscrete.1.kappa = 0.2\ndiscrete.2.tau = 1e-2\ndiscrete.2.kappa = 0.1\ntasks = dispersion, causality\n".to_string(),
        "model = continuum\ncontinuum.distribution = ml\nparams.tau_sigma = 1\nparams.tau_eps = 1e-2\nparams.alpha = 0.5\ncontinuum.omega_min = 1e-3\ncontinuum.omega_max = 1e3\ntasks = dispersion, distribution\n".to_string(),
        format!("model = continuum\ncontinuum.distribution = file\ncontinuum.file = {}\ntasks = distribution, dispersion\n", table.display()),
        "model = zener\nparams.tau_sigma = 1\nparams.tau_eps = 1e-3\nparams.alpha = 0.4\nparams.beta = 0.7\ntasks = distribution, causality\n".to_string(),
    ];
    for (i, m) in models.iter().enumerate() {
        let config = RunConfig::parse(&format!("{m}{common}output.dir = {}\n", dir.path().join(i.to_string()).display())).unwrap();
        let report = run(&config, dir.path()).unwrap_or_else(|e| panic!("{m}: {e}"));
        assert!(report.artifacts.iter().any(|a| a == "report.json"));
        if config.tasks.contains(&Task::Distribution) {
            assert!(dir.path().join(i.to_string()).join("distribution.csv").exists());
        }
    }
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    let model = prop_oneof![
        (1e-9f64..1e3, 1.0f64..1e6, 0.01f64..1.0).prop_map(|(ts, r, a)| format!(
            "model = zener\nparams.tau_sigma = {ts:e}\nparams.tau_eps = {:e}\nparams.alpha = {a:e}\n",
            ts / r
        )),
        (1e-9f64..1e3, 0.01f64..1.0).prop_map(|(ts, a)| format!(
            "model = kelvin_voigt\nparams.tau_sigma = {ts:e} ms\nparams.alpha = {a}\n"
        )),
        proptest::collection::vec((1e-9f64..1e3, 1e-12f64..1e-9), 1..4).prop_map(|ms| {
            let mut s = "model = discrete\n".to_string();
            for (i, (t, k)) in ms.iter().enumerate() {
                s.push_str(&format!("discrete.{}.tau = {t:e} us\ndiscrete.{}.kappa = {k:e}\n", i + 1, i + 1));
            }
            s
        }),
        (0.0f64..1.0, 1.0f64..1e9).prop_map(|(lo, hi)| format!(
            "model = continuum\ncontinuum.distribution = file\ncontinuum.file = t.txt\ncontinuum.omega_min = {lo:e} Hz\ncontinuum.omega_max = {hi:e}\n"
        )),
    ];
    let fit = prop_oneof![
        Just(String::new()),
        (1usize..5).prop_map(|n| format!("fit.model = discrete\nfit.mechanisms = {n}\nfit.target.file = a b.txt\n")),
        (0.0f64..2.0, 1e-9f64..1e-3).prop_map(|(eta, c)| format!(
            "fit.model = discrete\nfit.mechanisms = 1\nfit.target.eta = {eta:e}\nfit.target.coefficient = {c:e}\nfit.target.omega_min = 1 MHz\nfit.target.omega_max = 1e9\nfit.target.samples = 16\n"
        )),
    ];
    (model, fit, 1e-6f64..1.0, 1.0f64..1e8, 4usize..40, any::<bool>(), 500.0f64..2000.0).prop_map(
        |(model, fit, lo, span, ppd, svg, c0)| {
            let text = format!(
                "{model}medium.rho0 = 1 g/cm^3\nmedium.c0 = {c0:e} m/s\n\
                 sweep.omega_min = {lo:e} kHz\nsweep.omega_max = {:e} kHz\nsweep.points_per_decade = {ppd}\n\
                 tasks = dispersion\n{fit}output.dir = out dir\noutput.svg = {svg}\n",
                lo * span
            );
            RunConfig::parse(&text).unwrap()
        },
    )
}

proptest! {
    #[test]
    fn parse_serialize_parse_is_identity(config in arb_config()) {
        let text = config.to_string();
        let again = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&config, &again);
        prop_assert_eq!(text, again.to_string());
    }
}

#[test]
fn bundled_configs_round_trip() {
    for name in ["fig2.conf", "tissue_fit.conf"] {
        let c = RunConfig::parse(&std::fs::read_to_string(configs().join(name)).unwrap()).unwrap();
        assert_eq!(RunConfig::parse(&c.to_string()).unwrap(), c, "{name}");
    }
}
