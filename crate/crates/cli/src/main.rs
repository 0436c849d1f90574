//! `khmovie`: Khovanov homology of PD codes and KJ numbers of surface movies.

use std::fs;
use std::io::{self, Read};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use khmovie::cobordism::kj_number_with;
use khmovie::fixtures::{fixture_movie, knot_table, named_diagram, MOVIE_FIXTURES};
use khmovie::khcomplex::{KhComplex, DEFAULT_MAX_CROSSINGS};
use khmovie::movie::{matching_windows, parse_movie, ribbon_move_rewrite, Movie};
use khmovie::pdcode::{parse_pd, LinkDiagram};
use khmovie::verify::{self, Report};

#[derive(Parser)]
#[command(name = "khmovie", version, about = "Khovanov homology and Khovanov-Jacobsson numbers of surface movies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Refuse diagrams with more crossings than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CROSSINGS)]
    max_crossings: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Khovanov homology table of a PD code.
    Homology {
        /// PD code, file, bundled diagram name, or `-` for stdin.
        source: String,
    },
    /// Print the unnormalized Jones polynomial of a PD code.
    Jones { source: String },
    /// Print the KJ number of a closed movie.
    Kj {
        /// Movie document, file, or `-` for stdin.
        source: String,
    },
    /// Write a generated movie document.
    Make {
        /// One of sphere, trivial-torus, genus-<g>, spun-trefoil, spun-trefoil-handle, stevedore, stevedore-handle.
        name: String,
        /// Genus of the trivial surface; overrides the name.
        #[arg(long)]
        genus: Option<usize>,
        /// Output file instead of stdout.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Apply a ribbon move at a matching window and print the new movie.
    Rewrite {
        source: String,
        /// Index of the opening finger move; the first window if omitted.
        #[arg(long)]
        open: Option<usize>,
        /// Index of the closing bigon removal.
        #[arg(long, requires = "open")]
        close: Option<usize>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Run a named invariant suite.
    Verify {
        /// ribbon-invariance, figure4, rotation, reidemeister or euler-jones.
        suite: String,
        /// Movies (ribbon-invariance) or PD codes (other suites); bundled defaults if omitted.
        inputs: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// The report and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool)> {
    let max = cli.max_crossings;
    let machine = cli.format == Format::Machine;
    match &cli.command {
        Command::Homology { source } => {
            let d = read_diagram(source)?;
            let table = KhComplex::build(&d, max)?.homology()?;
            Ok((table.render(machine), true))
        }
        Command::Jones { source } => {
            let d = read_diagram(source)?;
            let j = KhComplex::build(&d, max)?.graded_euler_characteristic();
            let out = if machine { j.terms().map(|(e, c)| format!("{e}\t{c}\n")).collect() } else { format!("{j}\n") };
            Ok((out, true))
        }
        Command::Kj { source } => {
            let m = read_movie(source)?;
            let kj = kj_number_with(&m, max)?;
            let out = if machine { format!("{}\t{}\n", kj.value, kj.shift) } else { format!("{kj}\n") };
            Ok((out, true))
        }
        Command::Make { name, genus, output } => {
            let m = match genus {
                Some(g) => fixture_movie(&format!("genus-{g}"))?,
                None => fixture_movie(name)
                    .with_context(|| format!("known fixtures: {}, genus-<g>", MOVIE_FIXTURES.join(", ")))?,
            };
            let label = genus.map_or(name.clone(), |g| format!("genus-{g}"));
            emit(&format!("# khmovie make {label}\n{m}"), output.as_deref())
        }
        Command::Rewrite { source, open, close, output } => {
            let m = read_movie(source)?;
            let windows = matching_windows(&m);
            let w = match (open, close) {
                (Some(i), Some(j)) => (*i, *j),
                (Some(i), None) => {
                    *windows.iter().find(|w| w.0 == *i).with_context(|| format!("no window opens at event {i}"))?
                }
                _ => *windows.first().context("movie has no matching window")?,
            };
            emit(&ribbon_move_rewrite(&m, w)?.to_string(), output.as_deref())
        }
        Command::Verify { suite, inputs } => {
            let report = run_suite(suite, inputs, max)?;
            Ok((render(&report, machine), report.passed()))
        }
    }
}

fn run_suite(suite: &str, inputs: &[String], max: usize) -> Result<Report> {
    let diagrams = |default: Vec<(String, LinkDiagram)>| -> Result<Vec<(String, LinkDiagram)>> {
        if inputs.is_empty() {
            return Ok(default);
        }
        inputs.iter().map(|s| Ok((s.clone(), read_diagram(s)?))).collect()
    };
    Ok(match suite {
        "ribbon-invariance" => {
            let movies: Vec<(String, Movie)> = if inputs.is_empty() {
                vec![("spun-trefoil-handle".into(), fixture_movie("spun-trefoil-handle")?)]
            } else {
                inputs.iter().map(|s| Ok((s.clone(), read_movie(s)?))).collect::<Result<_>>()?
            };
            let mut checks = Vec::new();
            for (name, m) in &movies {
                for mut c in verify::ribbon_invariance(m, max).checks {
                    c.name = format!("{name} {}", c.name);
                    checks.push(c);
                }
            }
            Report { suite: suite.into(), checks }
        }
        "figure4" => verify::figure4(&diagrams(verify::figure4_contexts())?, max),
        "rotation" => verify::rotation(&diagrams(verify::rotation_diagrams())?, max),
        "reidemeister" => verify::reidemeister(&diagrams(verify::reidemeister_diagrams())?, max),
        "euler-jones" => {
            let small = knot_table().into_iter().filter(|(_, d)| d.crossing_count() <= 7).collect();
            verify::euler_jones(&diagrams(small)?, max)
        }
        other => bail!("unknown suite `{other}`; expected one of {}", verify::SUITES.join(", ")),
    })
}

fn render(r: &Report, machine: bool) -> String {
    if !machine {
        return r.to_string();
    }
    r.checks.iter().map(|c| format!("{}\t{}\t{}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)).collect()
}

fn emit(text: &str, output: Option<&str>) -> Result<(String, bool)> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {path}"))?;
            Ok((String::new(), true))
        }
        None => Ok((text.to_string(), true)),
    }
}

/// `-` reads stdin, an existing path reads the file, anything else is the
/// text itself.
fn read_source(source: &str) -> Result<String> {
    if source == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    if Path::new(source).is_file() {
        return fs::read_to_string(source).with_context(|| format!("cannot read {source}"));
    }
    Ok(source.to_string())
}

fn read_diagram(source: &str) -> Result<LinkDiagram> {
    if let Some(d) = named_diagram(source) {
        return Ok(d);
    }
    let text = read_source(source)?;
    let code: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty()).collect();
    parse_pd(&code.join(" ")).with_context(|| format!("`{source}` is not a PD code"))
}

fn read_movie(source: &str) -> Result<Movie> {
    if MOVIE_FIXTURES.contains(&source) {
        return Ok(fixture_movie(source)?);
    }
    let text = read_source(source)?;
    parse_movie(&text).with_context(|| format!("`{source}` is not a movie document"))
}
