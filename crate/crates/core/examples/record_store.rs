//! Appending experiment records to a JSONL store and summarizing it.
//!
//!     cargo run --example record_store

use invgen::experiments::{mc_common_size, RunConfig};
use invgen::store::{append_record, read_store, summarize, ExperimentRecord};

fn main() -> invgen::Result<()> {
    let dir = std::env::temp_dir().join(format!("invgen-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let store = dir.join("runs.jsonl");

    for n in [8, 16] {
        for seed in [1, 2] {
            let est = mc_common_size(n, 3, &RunConfig::new(2000, seed), None)?;
            let rec = ExperimentRecord::new("mc_common_size", seed)
                .param("n", n as i64)
                .param("r", 3i64)
                .with_estimate(&est[2]);
            append_record(&store, &rec)?;
        }
    }
    let loaded = read_store(&store)?;
    println!("{} records in {}", loaded.records.len(), store.display());
    println!("first line: {}", loaded.records[0].to_line());

    println!("\ngrouped by n:");
    let keys = vec!["n".to_owned()];
    summarize(&store, &"experiment=mc_common_size".parse()?, Some(&keys), std::io::stdout())?;
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
