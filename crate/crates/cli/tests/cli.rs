use std::path::Path;
use std::process::{Command, Output};

fn softmode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softmode")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Value of `key` in `key = value` text output.
fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sql_is_one_on_resonance_without_quadratic_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "fig2.params",
        "# fig2 conventional curve\nomega_m_hz = 10e6\ngamma_m_hz = 100\ng_l_hz = 215\nkappa_hz = 500e6\n\
         power_uW = 10\nwavelength_nm = 810\ntemperature_K = 0\ng_q_over_g_l = 0\n",
    );
    let o = softmode(&["sql", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("sql = 1.0\n"), "{}", stdout(&o));
}

#[test]
fn flag_overrides_beat_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.params", "POWER_uW = 5\ng_q_over_g_l = -0.3\n");
    let base = stdout(&softmode(&["steady", "--config", &cfg]));
    let overridden = stdout(&softmode(&["steady", "--config", &cfg, "--set", "power_uW=7"]));
    let reference = stdout(&softmode(&["steady", "--set", "g_q_over_g_l=-0.3", "--set", "power_uw=7"]));
    assert_ne!(base, overridden);
    assert_eq!(overridden, reference);

    // photon number is linear in power at zero effective detuning
    let ratio = field(&overridden, "photon_number") / field(&base, "photon_number");
    assert!((ratio - 1.4).abs() < 1e-12, "{ratio}");

    // later --set wins over earlier --set
    let twice =
        stdout(&softmode(&["steady", "--set", "g_q_over_g_l=-0.3", "--set", "power_uW=1", "--set", "power_uW=7"]));
    assert_eq!(twice, reference);
}

#[test]
fn output_files_are_rewritten_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let out = out.to_str().unwrap();
    let args = ["powersweep", "--preset", "fig3", "--points", "41", "--out", out];
    assert!(softmode(&args).status.success());
    let first = std::fs::read(out).unwrap();
    std::fs::write(out, b"stale").unwrap();
    assert!(softmode(&args).status.success());
    assert_eq!(first, std::fs::read(out).unwrap());

    let json = dir.path().join("sweep.json");
    let json = json.to_str().unwrap();
    let args = ["powersweep", "--preset", "fig3", "--points", "41", "--format", "json", "--out", json];
    assert!(softmode(&args).status.success());
    let first = std::fs::read(json).unwrap();
    assert!(softmode(&args).status.success());
    assert_eq!(first, std::fs::read(json).unwrap());
}

#[test]
fn missing_config_is_a_validation_error_naming_the_path() {
    let o = softmode(&["sql", "--config", "/definitely/not/here.params"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/definitely/not/here.params"));
}

#[test]
fn unknown_key_and_bad_values_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.params", "power_uW = 10\nlaser_colour = red\n");
    let o = softmode(&["steady", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("laser_colour") && stderr(&o).contains("bad.params:2"), "{}", stderr(&o));

    let o = softmode(&["steady", "--set", "kappa_hz=-5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("kappa"));

    let o = softmode(&["map", "--preset", "fig9"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(softmode(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn physics_failures_exit_two() {
    // past the soft-mode collapse the effective frequency is negative
    let o = softmode(&["steady", "--preset", "fig2", "--set", "power_uW=100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unphysical") && stderr(&o).contains("g_q/g_l = -0.6"), "{}", stderr(&o));

    let o = softmode(&["spectrum", "--preset", "fig2", "--set", "power_uW=100", "--points", "10"]);
    assert_eq!(o.status.code(), Some(2));

    // the optimum of the conventional curve lies far outside this range
    let o = softmode(&["optimal-power", "--set", "g_q_over_g_l=0", "--p-min-uw", "1", "--p-max-uw", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fig4_map_has_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig4.csv");
    let o = softmode(&["map", "--preset", "fig4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "power,gq_over_gl,status,omega_rad_s,omega_m_eff,thermal,backaction,shot,total,formula"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200 * 200);
    for row in &rows {
        assert_eq!(row.len(), 10);
        match row[2] {
            "stable" => assert!(row[8].parse::<f64>().unwrap() > 0.0),
            "unphysical" | "unstable" | "marginal" | "unresolved" => assert_eq!(row[8], ""),
            other => panic!("status {other}"),
        }
    }
    assert!(rows.iter().any(|r| r[2] == "stable" && r[8].parse::<f64>().unwrap() < 1.0));
    assert!(rows.iter().any(|r| r[2] == "unphysical"));
}

#[test]
fn spectrum_columns_and_hz_flag() {
    let a = softmode(&[
        "spectrum",
        "--preset",
        "fig2",
        "--omega-min",
        "5e6",
        "--omega-max",
        "15e6",
        "--points",
        "5",
        "--hz",
    ]);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "omega_rad_s,omega_over_omega_m,thermal,backaction,shot,total,formula");
    let ratios: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ratios.len(), 5);
    assert!((ratios[0] - 0.5).abs() < 1e-15 && (ratios[4] - 1.5).abs() < 1e-15);

    let w = 2.0 * std::f64::consts::PI * 5e6;
    let b = softmode(&[
        "spectrum",
        "--preset",
        "fig2",
        "--omega-min",
        &w.to_string(),
        "--omega-max",
        &(3.0 * w).to_string(),
        "--points",
        "5",
    ]);
    assert_eq!(stdout(&b), text);

    let full = stdout(&softmode(&["spectrum", "--preset", "fig2", "--points", "5", "--full-formula"]));
    assert!(full.lines().skip(1).all(|l| l.ends_with(",full")));
}

#[test]
fn stability_map_statuses() {
    let o = softmode(&["stability-map", "--power-points", "20", "--ratio-points", "11"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "power,gq_over_gl,status");
    let statuses: Vec<String> = lines.map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
    assert_eq!(statuses.len(), 220);
    assert!(statuses.iter().any(|s| s == "stable"));
    assert!(statuses.iter().any(|s| s == "unphysical"));
}

#[test]
fn single_point_json() {
    let o = softmode(&["stability", "--preset", "fig2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "stable");
    assert_eq!(v["a4"].as_f64(), Some(1.0));

    let o = softmode(&["optimal-power", "--set", "g_q_over_g_l=0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["total"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["power_uW"].as_f64().unwrap() - 104.17).abs() < 0.01);
}
