use std::fs;
use std::path::Path;

use visector_cli::{cmd_antenna, cmd_map, cmd_run, AntennaArgs, MapArgs, ModeArg, RunArgs, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME};
use visector_core::ScenarioConfig;

fn antenna_args(out: &Path) -> AntennaArgs {
    AntennaArgs {
        config: None,
        out: out.to_path_buf(),
        n_x: None,
        n_z: None,
        dx: None,
        dz: None,
        taper_x: None,
        taper_z: None,
        vertical_tilt: 0.0,
        horizontal_tilt: 0.0,
        sll_max: -30.0,
        search: false,
    }
}

fn report_value(dir: &Path, key: &str) -> String {
    fs::read_to_string(dir.join("antenna_report.txt"))
        .unwrap()
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")).map(str::to_owned))
        .unwrap()
}

fn write_config(dir: &Path, cfg: &ScenarioConfig) -> std::path::PathBuf {
    let path = dir.join("test.scenario");
    fs::write(&path, cfg.to_toml_string().unwrap()).unwrap();
    path
}

fn run_args(config: &Path, out: &Path) -> RunArgs {
    RunArgs {
        config: Some(config.to_path_buf()),
        seed: None,
        mode: Some(ModeArg::All),
        out: Some(out.to_path_buf()),
        duration: None,
    }
}

fn quick_config() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::paper();
    cfg.duration_s = 300.0;
    for s in &mut cfg.traffic.profile {
        s.start_s = (s.start_s / 30.0).round();
    }
    cfg
}

#[test]
fn shipped_design_meets_side_lobe_constraint_at_boresight() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cmd_antenna(&antenna_args(dir.path())).unwrap(), EXIT_OK);
    let sll: f64 = report_value(dir.path(), "sll_db").parse().unwrap();
    assert!(sll <= -30.0);
    for f in ["pattern_grid.csv", "cut_e_plane.csv", "cut_h_plane.csv", "antenna_report.txt"] {
        assert!(fs::metadata(dir.path().join(f)).unwrap().len() > 0);
    }
}

#[test]
fn uniform_taper_violates_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let args = AntennaArgs {
        taper_x: Some(1.0),
        taper_z: Some(1.0),
        ..antenna_args(dir.path())
    };
    assert_eq!(cmd_antenna(&args).unwrap(), 2);
}

#[test]
fn oversized_spacing_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let args = AntennaArgs {
        dz: Some(1.5),
        ..antenna_args(dir.path())
    };
    assert_eq!(cmd_antenna(&args).unwrap_err().code, EXIT_CONFIG);
}

#[test]
fn single_element_is_dipole_times_reflector() {
    let dir = tempfile::tempdir().unwrap();
    let args = AntennaArgs {
        n_x: Some(1),
        n_z: Some(1),
        ..antenna_args(dir.path())
    };
    cmd_antenna(&args).unwrap();
    let g0_dbi: f64 = report_value(dir.path(), "g0_dbi").parse().unwrap();
    let text = fs::read_to_string(dir.path().join("cut_e_plane.csv")).unwrap();
    for line in text.lines().skip(1).step_by(37) {
        let (a, g) = line.split_once(',').unwrap();
        let theta = a.parse::<f64>().unwrap().to_radians();
        let f = theta.sin().powi(2) * (std::f64::consts::FRAC_PI_2 * theta.sin()).sin().powi(2);
        let want = if f > 0.0 { (g0_dbi + 10.0 * f.log10()).max(-100.0) } else { -100.0 };
        assert!((g.parse::<f64>().unwrap() - want).abs() < 1e-6, "{line}");
    }
}

#[test]
fn lone_site_map_has_three_regions_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ScenarioConfig::paper();
    cfg.network.rings = 0;
    cfg.vis.clear();
    cfg.map.half_width_m = 300.0;
    let path = write_config(dir.path(), &cfg);
    let args = |o: &str| MapArgs {
        config: Some(path.clone()),
        out: Some(dir.path().join(o)),
        resolution: Some(20.0),
    };
    assert_eq!(cmd_map(&args("a")).unwrap(), EXIT_OK);
    assert_eq!(cmd_map(&args("b")).unwrap(), EXIT_OK);
    let csv = fs::read_to_string(dir.path().join("a/serving_map.csv")).unwrap();
    let mut ids: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids, ["0", "1", "2"]);
    for f in ["serving_map.csv", "serving_map.pgm"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap()
        );
    }
}

#[test]
fn zero_duration_writes_header_only_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &quick_config());
    let out = dir.path().join("run");
    let args = RunArgs {
        duration: Some(0.0),
        ..run_args(&path, &out)
    };
    assert_eq!(cmd_run(&args).unwrap(), EXIT_OK);
    let kpis = fs::read_to_string(out.join("kpis_sharing.csv")).unwrap();
    assert_eq!(kpis.lines().count(), 1);
    assert_eq!(kpis.lines().next().unwrap(), "time_s,mut_bps,cet_bps,max_load,mean_ftt_s,delta_0,delta_1,delta_2");
    assert_eq!(fs::read_to_string(out.join("flows_baseline.csv")).unwrap().lines().count(), 1);
}

#[test]
fn manifest_lists_existing_nonempty_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = quick_config();
    cfg.write_event_log = true;
    let path = write_config(dir.path(), &cfg);
    let out = dir.path().join("run");
    assert_eq!(cmd_run(&run_args(&path, &out)).unwrap(), EXIT_OK);
    let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
    let names: Vec<&str> = manifest.lines().collect();
    assert_eq!(names.len(), 3 * 3 + 2);
    for n in names {
        assert!(fs::metadata(out.join(n)).unwrap().len() > 0, "{n}");
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    let resolved = ScenarioConfig::load(out.join("scenario.toml")).unwrap();
    assert_eq!(resolved.output_dir, out);
}

#[test]
fn seeds_change_flows_but_not_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &quick_config());
    let run = |seed: u64, o: &str| {
        let args = RunArgs {
            seed: Some(seed),
            mode: Some(ModeArg::Baseline),
            ..run_args(&path, &dir.path().join(o))
        };
        cmd_run(&args).unwrap();
        fs::read_to_string(dir.path().join(o).join("flows_baseline.csv")).unwrap()
    };
    let (a, b) = (run(1, "a"), run(2, "b"));
    assert_ne!(a, b);
    assert_eq!(a.lines().next(), b.lines().next());
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scenario");
    fs::write(&bad, "seed = \"x\"").unwrap();
    let args = run_args(&bad, dir.path());
    assert_eq!(cmd_run(&args).unwrap_err().code, EXIT_CONFIG);
    let missing = run_args(&dir.path().join("nope.scenario"), dir.path());
    assert_eq!(cmd_run(&missing).unwrap_err().code, EXIT_CONFIG);
    let path = write_config(dir.path(), &quick_config());
    let negative = RunArgs {
        duration: Some(-1.0),
        ..run_args(&path, dir.path())
    };
    assert_eq!(cmd_run(&negative).unwrap_err().code, EXIT_CONFIG);
}

#[test]
fn runtime_errors_exit_three_with_time() {
    // The sampling square is too small to contain any hotspot area, which
    // only shows up once the first hotspot user arrives.
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = quick_config();
    cfg.traffic.sampling_half_width_m = 2.0;
    for s in &mut cfg.traffic.profile {
        s.uniform_rate = 0.0;
        s.hotspot_rate = 1.0;
    }
    let path = write_config(dir.path(), &cfg);
    let args = RunArgs {
        mode: Some(ModeArg::Baseline),
        ..run_args(&path, &dir.path().join("run"))
    };
    let err = cmd_run(&args).unwrap_err();
    assert_eq!(err.code, EXIT_RUNTIME);
    assert!(err.message.contains("at t ="), "{}", err.message);
}
