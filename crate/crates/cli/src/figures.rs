use std::io::Write;

use rayon::prelude::*;

use ncfgl_core::error::Error;
use ncfgl_core::symfun::{chern, vieta};

use crate::commands::{commutators, dispatch};
use crate::output::{render, Entry, Report};
use crate::{CliError, Command, RunConfig};

/// Output files written by `reproduce-figures`, without extension, in output order.
pub const FIGURE_FILES: [&str; 6] = ["phi", "upsilon", "fgl", "commutators", "vieta", "chern"];

/// Weight of the published coefficient tables.
const TABLE_WEIGHT: usize = 6;

fn section(name: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let table_cfg = RunConfig { max_weight: Some(TABLE_WEIGHT), ..cfg.clone() };
    let conv = cfg.convention;
    Ok(match name {
        "phi" => dispatch(&Command::Phi { k: None, arg: None }, &table_cfg)?.0,
        "upsilon" => dispatch(&Command::Upsilon { p: None, q: None }, &table_cfg)?.0,
        "fgl" => dispatch(&Command::Fgl { i: None, j: None }, &table_cfg)?.0,
        "commutators" => {
            let mut rep = commutators(cfg, 5)?;
            let gens = dispatch(&Command::Gens, &RunConfig { max_weight: Some(3), topological: false, ..cfg.clone() })?.0;
            let mut entries = gens.entries;
            for e in &mut entries {
                e.label = e.label.split(' ').next().unwrap_or_default().to_string();
            }
            entries.append(&mut rep.entries);
            rep.entries = entries;
            rep.title = "generators X1..X3 and [X_i,X_j] for i + j <= 5".into();
            rep
        }
        "vieta" => {
            let mut rep = Report::new("Vieta coordinates through degree 7");
            for n in [2usize, 3] {
                let frame = vieta(n, 7, conv);
                rep.push(Entry::expansion(format!("y{n}"), format!("y_{{{n}}}"), &frame.y[n - 1]));
            }
            rep
        }
        "chern" => {
            let mut rep = Report::new("Chern classes through degree 8");
            for n in [2usize, 3] {
                rep.push(Entry::qsym(format!("c{n}"), format!("c_{{{n}}}"), &chern(n, n, 8, conv)?));
            }
            rep
        }
        _ => unreachable!("unknown figure {name}"),
    })
}

/// Renders every figure as `(file name, contents)`. Sections are computed in
/// parallel and assembled in a fixed order.
pub fn reproduce_figures(cfg: &RunConfig) -> Result<Vec<(String, String)>, CliError> {
    if cfg.order < TABLE_WEIGHT {
        return Err(Error::PrecisionExhausted(format!("figures need --order >= {TABLE_WEIGHT}")).into());
    }
    let reports: Vec<Result<Report, CliError>> = FIGURE_FILES.par_iter().map(|name| section(name, cfg)).collect();
    FIGURE_FILES
        .iter()
        .zip(reports)
        .map(|(name, r)| Ok((format!("{name}.{}", cfg.format.extension()), render(&r?, cfg))))
        .collect()
}

pub(crate) fn write_figures(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let files = reproduce_figures(cfg)?;
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, text) in files {
                std::fs::write(dir.join(name), text)?;
            }
        }
        None => {
            for (_, text) in files {
                stdout.write_all(text.as_bytes())?;
            }
        }
    }
    Ok(())
}
