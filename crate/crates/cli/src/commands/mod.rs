pub mod budget;
pub mod curve;
pub mod grid;
pub mod solve_k;

use crate::errors::CliError;
use crate::manifest::RunManifest;
use std::path::Path;
use std::time::Instant;

/// Writes CSV to a file (plus its manifest) or to stdout when no path was
/// given.
pub fn emit_csv(
    text: &str,
    out: Option<&Path>,
    manifest: Option<(&mut RunManifest, Instant)>,
) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text)?;
            if let Some((manifest, started)) = manifest {
                manifest.outputs.push(path.display().to_string());
                manifest.wall_time_secs = started.elapsed().as_secs_f64();
                let mpath = manifest.write(path)?;
                log::info!("wrote {} and {}", path.display(), mpath.display());
            }
            Ok(())
        }
    }
}
