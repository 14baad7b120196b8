//! Command-line front end: decompose, slice, factor, verify and the demos.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sarkisov_core::demo;
use sarkisov_core::io::{self, svg, ErrorDoc, FactorDoc, InputDocument, OutputDocument};
use sarkisov_core::Error;

#[derive(Parser)]
#[command(name = "sarkisov", version, about = "Sarkisov links between toric Mori fibre spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Mori chamber decomposition of the effective cone.
    Decompose { input: PathBuf },
    /// Print the generic slice through the two Mori fibre spaces of the input.
    Slice {
        input: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Factor the map between `mfs_src` and `mfs_dst` into Sarkisov links.
    Factor {
        input: PathBuf,
        /// Also draw the slice.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a factorisation produced by `factor` against its input.
    Verify { input: PathBuf, factorization: PathBuf },
    /// Run a worked example: bl2p2, p1xp1, f1 or ivs4fold.
    Demo {
        name: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn write_svg(path: &Path, doc: &FactorDoc) -> Result<(), Error> {
    let f = &doc.factorization;
    let text = match &f.slice {
        Some(s) => svg::render(s, &f.links, &doc.model_names),
        None => return Err(Error::Usage("source and target coincide; there is no slice to draw".into())),
    };
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<String, Failure> {
    let out = match cmd {
        Command::Decompose { input } => io::cmd_decompose(&InputDocument::from_path(&input)?)?,
        Command::Slice { input, seed } => io::cmd_slice(&InputDocument::from_path(&input)?, seed)?,
        Command::Factor { input, svg, seed } => {
            let doc = io::cmd_factor(&InputDocument::from_path(&input)?, seed)?;
            if let Some(path) = svg {
                write_svg(&path, &doc)?;
            }
            OutputDocument::Factor(doc)
        }
        Command::Verify { input, factorization } => {
            let input = InputDocument::from_path(&input)?;
            let doc = match io::parse_json::<OutputDocument>(&io::read_text(&factorization)?)? {
                OutputDocument::Factor(d) => d,
                _ => return Err(Error::Usage("second file is not the output of `factor`".into()).into()),
            };
            let report = io::cmd_verify(&input, &doc)?;
            let text = io::to_json(&OutputDocument::Verify(report.clone()));
            if !report.passed {
                return Err(Failure::Verification(text));
            }
            return Ok(text);
        }
        Command::Demo { name, svg, seed } => {
            let d = demo::run(&name, seed)?;
            let aliases = d
                .decomposition
                .chambers
                .iter()
                .filter_map(|c| demo_alias(&d, c.id).map(|n| (c.model.fingerprint(), n)))
                .collect();
            let doc = FactorDoc::new(d.factorization, &aliases, Some(name));
            if let Some(path) = svg {
                write_svg(&path, &doc)?;
            }
            OutputDocument::Factor(doc)
        }
    };
    Ok(io::to_json(&out))
}

/// Names of the `Bl_2 P^2` models by their numbers of rays and fibre type.
fn demo_alias(d: &demo::Demo, cell: usize) -> Option<String> {
    if d.name != "bl2p2" {
        return None;
    }
    let m = &d.decomposition.chambers[cell].model;
    Some(
        match (m.dim(), m.num_rays()) {
            (0, _) => "pt",
            (1, _) => "P1",
            (2, 3) => "P2",
            (2, 4) if m.fan.rays.iter().all(|r| m.fan.rays.contains(&r.iter().map(|x| -x).collect())) => "P1xP1",
            (2, 4) => "F1",
            (2, 5) => "Bl2P2",
            _ => return None,
        }
        .to_string(),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(text)) => {
            println!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            println!("{}", io::to_json(&ErrorDoc::from(&e)));
            ExitCode::from(2)
        }
    }
}
