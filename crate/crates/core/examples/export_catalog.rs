//! Writes the built-in graphs as .sgr files: `cargo run --example export_catalog -- <dir>`.

use sepgraph::{catalog, format::serialize};

fn main() -> std::io::Result<()> {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "graphs".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, g) in catalog::named() {
        std::fs::write(dir.join(format!("{name}.sgr")), serialize(&g))?;
    }
    Ok(())
}
