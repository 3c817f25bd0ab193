use std::path::Path;

use bs_nerve::harness::{net_stats_to_csv, rows_to_csv, run_net_stats, run_sequence, ExperimentConfig};

fn load(name: &str) -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../experiments").join(name);
    let mut c = ExperimentConfig::from_toml(&std::fs::read_to_string(&path).unwrap()).unwrap();
    c.base_dir = path.parent().unwrap().to_path_buf();
    c
}

#[test]
fn shipped_experiment_files_parse() {
    for name in ["torus_tower.toml", "torus_recovery.toml", "cover_tower.toml", "net_stats.toml", "thick_torus.toml"] {
        load(name);
    }
}

#[test]
fn thick_variant_recovers_the_torus() {
    let config = load("thick_torus.toml");
    let rows = run_sequence(&config);
    assert_eq!(rows.len(), config.scales().len() * config.seeds.len());
    for r in &rows {
        assert!(r.error.is_none(), "{:?}", r.error);
        assert_eq!(r.betti, vec![1, 2]);
        assert_eq!(r.vol, (r.scale * r.scale) as f64);
    }
}

#[test]
fn single_point_space_has_no_net_variance() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("point.txt"), "mmspace v1 1 explicit plain\n0 1 NA\ndist\n0\n").unwrap();
    let text = r#"
family = "custom_file"
seeds = [0, 1, 2, 3, 4]
[custom]
paths = ["point.txt"]
[net]
r0 = 0.5
r_soft = 0.75
r1 = 0.75
r2 = 1.5
r3 = 1.65
levels = 1
intensity = 1e9
"#;
    let mut config = ExperimentConfig::from_toml(text).unwrap();
    config.base_dir = dir.path().to_path_buf();
    let rows = run_net_stats(&config).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].mean_size, rows[0].var_size), (1.0, 0.0));
    assert!(net_stats_to_csv(&config, &rows).lines().nth(2).unwrap().ends_with(",NA"));
    let seq = run_sequence(&config);
    assert!(seq.iter().all(|r| r.betti == vec![1, 0, 0]));
}

#[test]
fn seed_offset_changes_poisson_tori() {
    let text = r#"
family = "torus_tower"
seeds = [1]
homology_degrees = [0]
[torus]
base_sides = [1.0, 1.0]
scales = [4]
density = 16.0
sample_mode = "poisson"
[net]
r0 = 0.5
r_soft = 0.75
r1 = 0.75
r2 = 1.5
r3 = 1.65
levels = 2
intensity = 1.0
"#;
    let a = ExperimentConfig::from_toml(text).unwrap();
    let mut b = a.clone();
    b.seed_offset = 1;
    let (ra, rb) = (run_sequence(&a), run_sequence(&b));
    assert_eq!(ra[0].seed, rb[0].seed);
    assert_ne!(rows_to_csv(&a, &ra), rows_to_csv(&b, &rb));
}
