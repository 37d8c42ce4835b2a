//! The `legch` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::HeightAssignment;
use crate::augment::{enumerate_augmentations, linearized_differential, Augmentation, LinearizedComplex};
use crate::diagram::{area_inequalities, assign_heights, flood, Tiering};
use crate::io::{parse_barcode_file, parse_knot_file, write_barcode_file, FormatError, KnotFile};
use crate::metrics::{check_strong_morse, interleaving_distance};
use crate::persist::{build_filtered_complex, compute_barcode, Barcode};
use crate::rational::format_rational;
use crate::render::{render_barcode, RenderFormat};

#[derive(Debug, Parser)]
#[command(name = "legch", version, about = "Barcodes of linearized Legendrian contact homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a knot file parses and its differential is valid.
    Validate { file: PathBuf },
    /// List all augmentations with their indices.
    Augment { file: PathBuf },
    /// Print the linearized differential for one augmentation.
    Linearize {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        aug: usize,
    },
    /// Run the flooding algorithm on the area inequalities.
    Flood { file: PathBuf },
    /// Compute the barcode (JSON by default).
    Barcode {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        aug: usize,
        /// Where heights come from; defaults to the file if it has them.
        #[arg(long, value_enum)]
        heights: Option<HeightSource>,
        #[arg(long, value_enum)]
        render: Option<RenderArg>,
    },
    /// Interleaving distance between two barcode files.
    Distance { first: PathBuf, second: PathBuf },
    /// Check the strong Morse identity MC - PC = (z+1) R.
    Morse {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        aug: usize,
        #[arg(long, value_enum)]
        heights: Option<HeightSource>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HeightSource {
    Flood,
    File,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RenderArg {
    Text,
    Svg,
}

enum Failure {
    Input(String),
    Flooding(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(format!("error[{}]: {e}", e.code()))
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("error: {e}"))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn load_knot(path: &Path) -> Result<KnotFile, Failure> {
    Ok(parse_knot_file(&read(path)?)?)
}

fn load_barcode(path: &Path) -> Result<Barcode, Failure> {
    Ok(parse_barcode_file(&read(path)?)?)
}

fn pick_augmentation(knot: &KnotFile, index: usize) -> Result<Augmentation, Failure> {
    let all = enumerate_augmentations(&knot.dga).map_err(input)?;
    let count = all.len();
    all.into_iter()
        .nth(index)
        .ok_or_else(|| input(format!("augmentation index {index} out of range ({count} available)")))
}

fn linearize(knot: &KnotFile, index: usize) -> Result<LinearizedComplex, Failure> {
    let eps = pick_augmentation(knot, index)?;
    linearized_differential(&knot.dga, &eps).map_err(input)
}

fn run_flood(knot: &KnotFile) -> Result<Tiering, Failure> {
    flood(&area_inequalities(&knot.diagram), knot.diagram.crossings()).map_err(input)
}

fn names(knot: &KnotFile, ids: &[usize]) -> String {
    ids.iter().map(|&id| knot.dga.name(id).unwrap_or("?")).collect::<Vec<_>>().join(" ")
}

fn heights_for(knot: &KnotFile, source: Option<HeightSource>) -> Result<HeightAssignment, Failure> {
    let use_file = match source {
        Some(HeightSource::File) => true,
        Some(HeightSource::Flood) => false,
        None => knot.heights.is_some(),
    };
    if use_file {
        return knot.heights.clone().ok_or_else(|| input("the file has no heights; try --heights flood"));
    }
    let tiering = run_flood(knot)?;
    if !tiering.succeeded() {
        return Err(Failure::Flooding(format!(
            "error: flooding failed; unassigned: {}",
            names(knot, &tiering.unassigned)
        )));
    }
    assign_heights(&tiering).map_err(input)
}

fn barcode_of(knot: &KnotFile, aug: usize, source: Option<HeightSource>) -> Result<Barcode, Failure> {
    let lin = linearize(knot, aug)?;
    let heights = heights_for(knot, source)?;
    let fc = build_filtered_complex(&lin, &heights).map_err(input)?;
    Ok(compute_barcode(&fc))
}

fn execute(command: Command, out: &mut dyn Write, color: bool) -> Result<i32, Failure> {
    let mut text = String::new();
    let mut code = 0;
    match command {
        Command::Validate { file } => {
            let knot = load_knot(&file)?;
            text = format!(
                "valid: {} generators, {} patches, heights {}\n",
                knot.dga.len(),
                knot.diagram.patches().len(),
                if knot.heights.is_some() { "given" } else { "absent" }
            );
        }
        Command::Augment { file } => {
            let knot = load_knot(&file)?;
            let augs = enumerate_augmentations(&knot.dga).map_err(input)?;
            let zero_ids: Vec<usize> =
                knot.dga.generators().iter().filter(|g| g.grading == 0).map(|g| g.id).collect();
            let header = if zero_ids.is_empty() { "none".to_string() } else { names(&knot, &zero_ids) };
            let plural = if augs.len() == 1 { "" } else { "s" };
            text.push_str(&format!("{} augmentation{plural} (degree-0 generators: {header})\n", augs.len()));
            for (i, eps) in augs.iter().enumerate() {
                let bits: Vec<&str> =
                    eps.degree_zero_values(&knot.dga).iter().map(|&v| if v { "1" } else { "0" }).collect();
                text.push_str(&format!("{i}: ({})\n", bits.join(",")));
            }
        }
        Command::Linearize { file, aug } => {
            let knot = load_knot(&file)?;
            text = linearize(&knot, aug)?.to_string();
        }
        Command::Flood { file } => {
            let knot = load_knot(&file)?;
            let tiering = run_flood(&knot)?;
            if tiering.succeeded() {
                text.push_str(&format!("flooding succeeded with {} tiers\n", tiering.tiers.len()));
            } else {
                text.push_str(&format!("flooding failed after {} tiers\n", tiering.tiers.len()));
            }
            for (k, tier) in tiering.tiers.iter().enumerate() {
                text.push_str(format!("T{}: {}", k + 1, names(&knot, tier)).trim_end());
                text.push('\n');
            }
            if tiering.succeeded() {
                let heights = assign_heights(&tiering).map_err(input)?;
                let parts: Vec<String> = heights
                    .iter()
                    .map(|(id, h)| format!("{}={}", knot.dga.name(id).unwrap_or("?"), format_rational(h)))
                    .collect();
                text.push_str(&format!("heights: {}\n", parts.join(" ")));
            } else {
                text.push_str(&format!("unassigned: {}\n", names(&knot, &tiering.unassigned)));
                code = 2;
            }
        }
        Command::Barcode { file, aug, heights, render } => {
            let knot = load_knot(&file)?;
            let barcode = barcode_of(&knot, aug, heights)?;
            text = match render {
                None => write_barcode_file(&barcode),
                Some(RenderArg::Text) => render_barcode(&barcode, RenderFormat::Text, color),
                Some(RenderArg::Svg) => render_barcode(&barcode, RenderFormat::Svg, false),
            };
        }
        Command::Distance { first, second } => {
            let a = load_barcode(&first)?;
            let b = load_barcode(&second)?;
            text = format!("{}\n", interleaving_distance(&a, &b));
        }
        Command::Morse { file, aug, heights } => {
            let knot = load_knot(&file)?;
            let barcode = barcode_of(&knot, aug, heights)?;
            let report = check_strong_morse(&knot.dga, &barcode);
            text = format!(
                "MC = {}\nPC = {}\nR = {}\nMC - PC = {}\n(z+1)R = {}\nStrong Morse: {}\n",
                report.mc,
                report.pc,
                report.r,
                report.lhs,
                report.rhs,
                if report.holds { "HOLDS" } else { "FAILS" }
            );
        }
    }
    out.write_all(text.as_bytes()).map_err(input)?;
    Ok(code)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code: 0 on success, 1 on bad input or usage, 2 when flooding fails.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    1
                }
            };
        }
    };
    match execute(cli.command, out, color) {
        Ok(code) => code,
        Err(Failure::Input(message)) => {
            let _ = writeln!(err, "{message}");
            1
        }
        Err(Failure::Flooding(message)) => {
            let _ = writeln!(err, "{message}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(name: &str) -> String {
        format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("legch").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err, false);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn morse_on_trefoil() {
        let (code, out, _) = call(&["morse", &corpus("trefoil.json"), "--aug", "0"]);
        assert_eq!(code, 0);
        for line in ["MC = 2z+3", "PC = z+2", "R = 1", "Strong Morse: HOLDS"] {
            assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
        }
    }

    #[test]
    fn flood_island_exits_two() {
        let (code, out, _) = call(&["flood", &corpus("island.json")]);
        assert_eq!(code, 2);
        assert!(out.contains("T1: q1 q2\nT2: q3\nunassigned: q4 q5 q6 q7 q8 q9\n"), "{out}");
    }

    #[test]
    fn flood_trefoil() {
        let (code, out, _) = call(&["flood", &corpus("trefoil.json")]);
        assert_eq!(code, 0);
        assert!(out.contains("heights: q1=7 q2=7 q3=1 q4=1 q5=1"), "{out}");
    }

    #[test]
    fn augment_lists_trefoil() {
        let (code, out, _) = call(&["augment", &corpus("trefoil.json")]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "5 augmentations (degree-0 generators: q3 q4 q5)\n0: (0,0,1)\n1: (0,1,1)\n2: (1,0,0)\n3: (1,1,0)\n4: (1,1,1)\n"
        );
    }

    #[test]
    fn barcode_text_for_unknot() {
        let (code, out, _) = call(&["barcode", &corpus("unknot.json"), "--render", "text"]);
        assert_eq!(code, 0);
        assert_eq!(out, "# barcode (1 bar)\nH1  [1, inf)  q\n");
    }

    #[test]
    fn barcode_needing_flood_on_island_exits_two() {
        let (code, _, err) = call(&["barcode", &corpus("island.json")]);
        assert_eq!(code, 2);
        assert!(err.contains("unassigned"));
        let (code, _, _) = call(&["barcode", &corpus("island.json"), "--heights", "file"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn input_errors_exit_one() {
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["validate"]).0, 1);
        assert_eq!(call(&["validate", "/nonexistent/knot.json"]).0, 1);
        assert_eq!(call(&["linearize", &corpus("trefoil.json"), "--aug", "9"]).0, 1);
        assert_eq!(call(&["barcode", &corpus("trefoil.json"), "--render", "png"]).0, 1);
        let (code, _, err) = call(&["distance", &corpus("trefoil.json"), &corpus("trefoil.json")]);
        assert_eq!(code, 1);
        assert!(err.contains("MISSING_KEY"), "{err}");
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("barcode"));
    }
}
