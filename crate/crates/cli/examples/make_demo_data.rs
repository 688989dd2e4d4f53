//! Regenerates the bundled demo files under `data/`: a crisp sample of 200
//! draws from K(2, 3) and its fuzzified counterpart under the default
//! information system.
//!
//! Run from the workspace root:
//!
//! ```text
//! cargo run -p fuzzykuma --example make_demo_data
//! ```

use std::fmt::Write as _;
use std::fs;

use fuzzykuma::formats::fuzzy_rows_to_csv;
use fuzzykuma_core::kuma::sample;
use fuzzykuma_core::{default_fis, KumaParams};

fn main() {
    let truth = KumaParams::new(2.0, 3.0).unwrap();
    let crisp = sample(200, truth, 42);
    let fis = default_fis();
    let picks = fis.assign_events(&crisp, 43).unwrap();
    let rows: Vec<_> = picks.into_iter().map(|k| fis.events()[k]).collect();

    fs::create_dir_all("data").unwrap();
    let mut crisp_csv = String::from("x\n");
    for x in &crisp {
        let _ = writeln!(crisp_csv, "{x}");
    }
    fs::write("data/kuma_crisp_200.csv", crisp_csv).unwrap();
    fs::write("data/fuzzy_200.csv", fuzzy_rows_to_csv(&rows)).unwrap();
    println!("wrote data/kuma_crisp_200.csv and data/fuzzy_200.csv");
}
