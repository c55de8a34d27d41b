//! Loss of mass across ε on seeded random networks, written as CSV to stdout.

use kappanet::experiment::{load_networks, run_experiment, write_rows, ExperimentConfig};

fn main() {
    let config = ExperimentConfig::parse(
        r#"{"seed": 7, "eps": [0.2, 0.1, 0.01],
            "networks": [{"random": {"count": 5, "cyclic": true}}, {"chain": {"n": 6, "eps": 0.1}}]}"#,
    )
    .unwrap();
    let nets = load_networks(&config, std::path::Path::new("."), config.seed).unwrap();
    let rows = run_experiment(&config, &nets, false).unwrap();
    write_rows(&rows, std::io::stdout()).unwrap();
}
