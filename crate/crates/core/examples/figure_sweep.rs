//! Writes the six figure datasets to a directory (default `figures/`).

use geophase::figures::write_figures;
use std::path::PathBuf;

fn main() -> geophase::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| PathBuf::from("figures"), PathBuf::from);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    for path in write_figures(&dir, 2000, threads)? {
        println!("{}", path.display());
    }
    Ok(())
}
