use clap::Parser;

use cellpath_cli::{exit_status, run_scenario, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig::parse();
    std::process::exit(exit_status(&run_scenario(&cfg)));
}
