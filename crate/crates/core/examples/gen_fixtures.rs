//! Regenerates the bundled corpora under `data/`.
//!
//!     cargo run -p centerline --example gen_fixtures

use std::path::PathBuf;

use centerline::serialize_document;
use centerline::synth::{engineered_corpus, reference_profiles, synthetic_corpus, DEFAULT_SEED};

fn file_name(label: &str) -> String {
    label.to_lowercase().replace('ü', "ue")
}

fn main() -> std::io::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(data.join("engineered"))?;
    std::fs::write(
        data.join("synthetic.ctr"),
        serialize_document(&synthetic_corpus(DEFAULT_SEED, 50)),
    )?;
    for p in reference_profiles() {
        let doc = engineered_corpus(&p).expect("reference profiles are consistent");
        let path = data
            .join("engineered")
            .join(format!("{}.ctr", file_name(&p.label)));
        std::fs::write(path, serialize_document(&doc))?;
    }
    Ok(())
}
