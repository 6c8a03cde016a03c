//! `thinset`: check, partition and construct thin subsets of groups.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.

mod commands;
mod manifest;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thinset::constructions::{ConstructionSpec, IndexMode};
use thinset::GroupSpec;

use manifest::RunManifest;
use report::{Failure, Format, Outcome, Report};

#[derive(Parser)]
#[command(name = "thinset", version, about = "Thin subsets of groups")]
struct Cli {
    /// `text` for people, `records` for one JSON object per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the run manifest here before running.
    #[arg(long, global = true, value_name = "PATH")]
    save_manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SetArgs {
    /// e.g. `Z^1`, `Zmod 12`, `Sym 4`, `Free 2`, `DirectSum[Zmod 2; omega]`.
    #[arg(long)]
    group: String,
    /// `explicit {..}`, `evens`, `odds`, `multiples N`, `powers B`, `pairs B^n`,
    /// `random P`, `all`, `file PATH`.
    #[arg(long)]
    set: String,
    /// `F8`, `schedule K` or `{x, y, ..}`; repeatable.
    #[arg(long)]
    radius: Vec<String>,
    /// Points in the enumeration window (default 10000, or the whole group if smaller).
    #[arg(long)]
    window: Option<usize>,
    /// Window positions below this are exempt.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Window check of |Fx ∩ A| <= m for each radius.
    CheckThin {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Also check that violators lie in the cover of the exceptional set.
        #[arg(long)]
        lemma1: bool,
    },
    /// Split an m-thin set into thin parts.
    Partition {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
        /// Subgroup chain depth for the ladder method.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Chained 3-coloring of G_n x G_n for a countable direct sum.
    ColorSquare {
        #[arg(long, default_value = "DirectSum[Zmod 2; omega]")]
        group: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Census of horizontal, vertical and diagonal lines.
        #[arg(long)]
        verify_lines: bool,
        /// List every colored cell.
        #[arg(long)]
        cells: bool,
    },
    /// Build an explicit thin set.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// The thin partition number mu(G, kappa).
    Mu {
        /// |G|, e.g. `aleph omega`, `aleph 3`, `aleph (omega*2+1)`.
        #[arg(long = "sizeG")]
        size_g: String,
        #[arg(long)]
        kappa: String,
        /// Also report whether |G| = gamma^+.
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Rerun a saved manifest.
    Replay { manifest: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Greedy,
    Ladder,
}

#[derive(Clone, Copy, ValueEnum)]
enum Indexing {
    Ordered,
    Unordered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    None,
    TranslateCount,
    Collisions,
    Overlaps,
    All,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum, default_value_t = Verify::None)]
    verify: Verify,
    /// Print every element.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Construct {
    /// 2-thin set in H x K from triples {e, x, y} of a finite group H.
    Bergman {
        #[arg(long = "H")]
        h: String,
        #[arg(long = "K")]
        k: String,
        #[arg(long, value_enum, default_value_t = Indexing::Ordered)]
        indexing: Indexing,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// m-thin set {(x_p, ka + k²b)} in K x Q^d.
    Quadratic {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "K", default_value = "Zmod 10007")]
        k: String,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 12)]
        pairs: usize,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Direct sum of quadratic sets, one summand per m.
    DirectSum {
        /// Comma-separated values of m.
        #[arg(long, default_value = "2,3,4")]
        parts: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "K", default_value = "Zmod 1009")]
        k: String,
        #[arg(long, default_value_t = 5)]
        pairs: usize,
        #[command(flatten)]
        build: BuildArgs,
    },
}

fn group_spec(text: &str) -> Outcome<GroupSpec> {
    Ok(text.parse()?)
}

fn set_fields(man: &mut RunManifest, a: SetArgs) {
    man.group = Some(a.group);
    man.set = Some(a.set);
    man.radius = a.radius;
    man.window = a.window;
    man.bound = a.bound;
    man.seed = a.seed;
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn build_fields(man: &mut RunManifest, b: &BuildArgs, spec: ConstructionSpec) {
    man.construction = Some(spec);
    man.seed = b.seed;
    man.set_opt("verify", value_name(b.verify));
    if b.list {
        man.set_opt("list", true);
    }
}

fn manifest(cli: Cli) -> Outcome<(RunManifest, Option<PathBuf>)> {
    let format = cli.format;
    let mut man = match cli.command {
        Command::Replay { manifest } => {
            let body = std::fs::read_to_string(&manifest)
                .map_err(|e| Failure::Input(format!("{}: {e}", manifest.display())))?;
            let man: RunManifest = serde_json::from_str(&body)
                .map_err(|e| Failure::Input(format!("{}: {e}", manifest.display())))?;
            if man.version != manifest::MANIFEST_VERSION {
                return Err(Failure::Input(format!("unsupported manifest version {}", man.version)));
            }
            return Ok((man, cli.save_manifest));
        }
        Command::CheckThin { set, m, lemma1 } => {
            let mut man = RunManifest::new("check-thin", format);
            set_fields(&mut man, set);
            man.m = Some(m);
            if lemma1 {
                man.set_opt("lemma1", true);
            }
            man
        }
        Command::Partition { set, m, method, depth } => {
            let mut man = RunManifest::new("partition", format);
            set_fields(&mut man, set);
            man.m = Some(m);
            man.set_opt("method", value_name(method));
            if let Some(d) = depth {
                man.set_opt("depth", d);
            }
            man
        }
        Command::ColorSquare { group, depth, verify_lines, cells } => {
            let mut man = RunManifest::new("color-square", format);
            man.group = Some(group);
            man.set_opt("depth", depth);
            if verify_lines {
                man.set_opt("verify-lines", true);
            }
            if cells {
                man.set_opt("cells", true);
            }
            man
        }
        Command::Construct { kind } => {
            let mut man = RunManifest::new("construct", format);
            match kind {
                Construct::Bergman { h, k, indexing, build } => {
                    let mode = match indexing {
                        Indexing::Ordered => IndexMode::Ordered,
                        Indexing::Unordered => IndexMode::Unordered,
                    };
                    let spec = ConstructionSpec::Triples {
                        h: group_spec(&h)?,
                        k: group_spec(&k)?,
                        mode,
                        seed: build.seed,
                    };
                    build_fields(&mut man, &build, spec);
                }
                Construct::Quadratic { d, k, m, pairs, build } => {
                    let spec = ConstructionSpec::Quadratic {
                        d,
                        k: group_spec(&k)?,
                        m,
                        pairs,
                        seed: build.seed,
                    };
                    build_fields(&mut man, &build, spec);
                }
                Construct::DirectSum { parts, d, k, pairs, build } => {
                    let k = group_spec(&k)?;
                    let ms = parts
                        .split(',')
                        .map(|t| t.trim().parse::<u32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| Failure::Input(format!("--parts: expected numbers, found `{parts}`")))?;
                    let parts = ms
                        .iter()
                        .enumerate()
                        .map(|(i, &m)| {
                            let seed = build.seed + 100 * i as u64;
                            (m, ConstructionSpec::Quadratic { d, k: k.clone(), m, pairs, seed })
                        })
                        .collect();
                    build_fields(&mut man, &build, ConstructionSpec::DirectSum { parts });
                }
            }
            man
        }
        Command::Mu { size_g, kappa, gamma } => {
            let mut man = RunManifest::new("mu", format);
            man.set_opt("sizeG", size_g);
            man.set_opt("kappa", kappa);
            if let Some(g) = gamma {
                man.set_opt("gamma", g);
            }
            man
        }
    };
    man.format = format;
    Ok((man, cli.save_manifest))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let (man, save) = match manifest(cli) {
        Ok(x) => x,
        Err(f) => {
            let stub = RunManifest::new("invalid", format);
            let (out, code) = Report::new(&stub).finish(Err(f));
            print!("{out}");
            return ExitCode::from(code as u8);
        }
    };
    if let Some(path) = save {
        let body = serde_json::to_string_pretty(&man).expect("manifest serializes");
        if let Err(e) = std::fs::write(&path, body + "\n") {
            eprintln!("input error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut rep = Report::new(&man);
    let outcome = commands::run(&man, &mut rep);
    let (out, code) = rep.finish(outcome);
    print!("{out}");
    ExitCode::from(code as u8)
}
