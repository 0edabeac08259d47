use cactilab::braid::{eval_braid_word, parse_braid_word, BraidWordValue};
use cactilab::cacti::{random_cactus, Cacti, Cactus};
use cactilab::cells::enumerate_cells;
use cactilab::discs::{random_config, FramedDiscConfig, FramedDiscs};
use cactilab::loops::{omega, CircleGroup, GroupModel, Loop, UniTriangular3};
use cactilab::operad::{check_pushout_suite, check_realization_axioms, HarnessConfig, Operad, Realization};
use cactilab::rational::{parse_csv, ParseError, ParseMode};
use cactilab::segments::{adapted_path, SegmentConfig, SegmentError};
use cactilab::svg::{render_cactus, render_discs};
use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cactilab", version, about = "Framed discs, cacti, ribbon braids and loop-space actions in exact arithmetic")]
struct Cli {
    /// Accept non-canonical rationals such as "2/4" and normalize them.
    #[arg(long, global = true, conflicts_with = "strict")]
    lenient: bool,
    /// Reject non-canonical rationals (the default).
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Discs,
    Cactus,
    Loop,
    Segments,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperadKind {
    Discs,
    Cactus,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupTag {
    S1,
    Ut3,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an element file.
    Validate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Group of the loop, for `--kind loop`.
        #[arg(long, value_enum, default_value = "s1")]
        group: GroupTag,
        file: PathBuf,
    },
    /// Compose elements: `x ∘_i y` with `--at i`, otherwise `γ(x; y_1, …, y_n)`.
    Compose {
        #[arg(long, value_enum)]
        kind: OperadKind,
        /// One-based input slot for partial composition.
        #[arg(long)]
        at: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        outer: PathBuf,
        inners: Vec<PathBuf>,
    },
    /// Run the operad, realization and pasting-pushout checks on random elements.
    Axioms {
        #[arg(long, value_enum)]
        kind: OperadKind,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Circle sample density.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// Number of random pasting squares to check.
        #[arg(long, default_value_t = 50)]
        pushout: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the cell label sequences as CSV `sequence,dimension`.
    Cells {
        #[arg(long)]
        n: usize,
        /// Longest sequence to list; all cells have length at most 2n − 1.
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Evaluate a braid word such as "s1 s2^-1 a13" or "a12 z2".
    Braid {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Print the image of every free generator.
        #[arg(long)]
        show_images: bool,
    },
    /// Compute ω(c; γ_1, …, γ_n) for a cactus and loops in a group.
    Omega {
        #[arg(long, value_enum)]
        group: GroupTag,
        cactus: PathBuf,
        loops: Vec<PathBuf>,
    },
    /// The adapted path between two points of a segment configuration.
    AdaptedPath {
        config: PathBuf,
        /// Start point as comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// End point as comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Draw an element as SVG.
    Render {
        #[arg(long, value_enum)]
        kind: OperadKind,
        #[arg(long)]
        out: Option<PathBuf>,
        file: PathBuf,
    },
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Invalid(String),
    Parse(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Invalid(m) => Failure::Invalid(m),
            other => Failure::Parse(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn load_discs(path: &Path, mode: ParseMode) -> Result<FramedDiscConfig, Failure> {
    Ok(FramedDiscConfig::from_json(&read(path)?, mode)?)
}

fn load_cactus(path: &Path, mode: ParseMode) -> Result<Cactus, Failure> {
    Ok(Cactus::from_json(&read(path)?, mode)?)
}

fn validate(kind: Kind, group: GroupTag, file: &Path, mode: ParseMode) -> Outcome {
    let text = read(file)?;
    let summary = match kind {
        Kind::Discs => format!("valid discs element of arity {}", FramedDiscConfig::from_json(&text, mode)?.arity()),
        Kind::Cactus => {
            let c = Cactus::from_json(&text, mode)?;
            format!("valid cactus of arity {} in cell {}", c.arity(), c.cell_of())
        }
        Kind::Loop => {
            let l = match group {
                GroupTag::S1 => Loop::from_json(&CircleGroup, &text, mode)?,
                GroupTag::Ut3 => Loop::from_json(&UniTriangular3, &text, mode)?,
            };
            format!("valid loop with {} breakpoints", l.breakpoints().len())
        }
        Kind::Segments => {
            let cfg = SegmentConfig::from_json(&text, mode)?;
            if !cfg.validate_connected() {
                return Err(Failure::Invalid(SegmentError::Disconnected.to_string()));
            }
            format!("valid segment configuration with {} segments", cfg.n())
        }
    };
    println!("{summary}");
    Ok(())
}

fn compose_with<O: Operad>(
    op: &O,
    outer: &O::Elem,
    inners: &[O::Elem],
    at: Option<usize>,
) -> Result<O::Elem, Failure> {
    let res = match at {
        Some(i) => {
            let [y] = inners else {
                return Err(Failure::Parse("--at takes exactly one inner element".into()));
            };
            if i == 0 {
                return Err(Failure::Parse("--at is one-based".into()));
            }
            op.compose_at(outer, i - 1, y)
        }
        None => op.gamma(outer, inners),
    };
    res.map_err(|e| Failure::Invalid(e.to_string()))
}

fn compose(kind: OperadKind, at: Option<usize>, outer: &Path, inners: &[PathBuf], out: Option<&Path>, mode: ParseMode) -> Outcome {
    let text = match kind {
        OperadKind::Discs => {
            let x = load_discs(outer, mode)?;
            let ys = inners.iter().map(|p| load_discs(p, mode)).collect::<Result<Vec<_>, _>>()?;
            compose_with(&FramedDiscs, &x, &ys, at)?.to_json()
        }
        OperadKind::Cactus => {
            let x = load_cactus(outer, mode)?;
            let ys = inners.iter().map(|p| load_cactus(p, mode)).collect::<Result<Vec<_>, _>>()?;
            compose_with(&Cacti, &x, &ys, at)?.to_json()
        }
    };
    emit(&text, out)
}

fn run_axioms<R: Realization>(
    re: &R,
    mut src: impl FnMut(&mut ChaCha8Rng, usize) -> R::Elem,
    cfg: &HarnessConfig,
    pushout: usize,
) -> (bool, Value) {
    let report = check_realization_axioms(re, &mut src, cfg);
    let (push_ok, push_json) = match check_pushout_suite(re, &mut src, cfg, pushout) {
        Ok(r) => (r.pass(), serde_json::to_value(&r).expect("serializable")),
        Err(e) => (false, json!({"error": e.to_string()})),
    };
    for e in &report.entries {
        eprintln!("{:<36} {} ({} trials)", e.axiom, if e.pass { "PASS" } else { "FAIL" }, e.trials);
    }
    eprintln!("{:<36} {}", "pasting-pushout", if push_ok { "PASS" } else { "FAIL" });
    let ok = report.passed() && push_ok;
    (ok, json!({"pass": ok, "axioms": report.to_json(), "pushout": push_json}))
}

fn axioms(kind: OperadKind, cfg: &HarnessConfig, pushout: usize, out: Option<&Path>) -> Outcome {
    let (ok, value) = match kind {
        OperadKind::Discs => run_axioms(&FramedDiscs, |rng: &mut ChaCha8Rng, n| random_config(rng, n), cfg, pushout),
        OperadKind::Cactus => run_axioms(&Cacti, |rng: &mut ChaCha8Rng, n| random_cactus(rng, n), cfg, pushout),
    };
    emit(&pretty(&value), out)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Invalid("axiom check failed".into()))
    }
}

fn cells(n: usize, max_length: Option<usize>) -> Outcome {
    if n == 0 {
        return Err(Failure::Parse("--n must be positive".into()));
    }
    let mut csv = String::from("sequence,dimension\n");
    for c in enumerate_cells(n, max_length.unwrap_or(2 * n - 1)) {
        let seq: Vec<String> = c.labels().iter().map(|l| l.to_string()).collect();
        csv.push_str(&format!("{},{}\n", seq.join(" "), c.dimension()));
    }
    emit(&csv, None)
}

fn braid(n: usize, word: &str, show_images: bool) -> Outcome {
    let tokens = parse_braid_word(word).map_err(|e| Failure::Parse(e.to_string()))?;
    let value = eval_braid_word(&tokens, n).map_err(|e| Failure::Parse(e.to_string()))?;
    match value {
        BraidWordValue::Braid(b) => {
            println!("pure: {}", b.is_pure());
            println!("fixes product: {}", b.fixes_product());
            if show_images {
                println!("{}", b.forward());
            }
        }
        BraidWordValue::Ribbon(w) => {
            let twists: Vec<String> = w.twists().iter().map(|t| t.to_string()).collect();
            println!("element: {w}");
            println!("twists: {}", twists.join(" "));
            if show_images {
                println!("{}", w.alpha_endo());
            }
        }
    }
    Ok(())
}

fn omega_in<G: GroupModel>(group: &G, cactus: &Path, loops: &[PathBuf], mode: ParseMode) -> Outcome {
    let c = load_cactus(cactus, mode)?;
    let ls = loops
        .iter()
        .map(|p| Ok(Loop::from_json(group, &read(p)?, mode)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    let l = omega(group, &c, &ls).map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(&l.to_json(group), None)
}

fn adapted(config: &Path, from: &str, to: &str, mode: ParseMode) -> Outcome {
    let cfg = SegmentConfig::from_json(&read(config)?, mode)?;
    let p = parse_csv(from, mode)?;
    let q = parse_csv(to, mode)?;
    if p.len() != cfg.n() || q.len() != cfg.n() {
        return Err(Failure::Parse(format!("points must have {} coordinates", cfg.n())));
    }
    let path = adapted_path(&cfg, &p, &q).map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(&pretty(&path.to_json_value()), None)
}

fn render(kind: OperadKind, file: &Path, out: Option<&Path>, mode: ParseMode) -> Outcome {
    let svg = match kind {
        OperadKind::Discs => render_discs(&load_discs(file, mode)?),
        OperadKind::Cactus => render_cactus(&load_cactus(file, mode)?),
    };
    emit(&svg, out)
}

fn run(cli: Cli) -> Outcome {
    let mode = if cli.lenient { ParseMode::Lenient } else { ParseMode::Strict };
    match cli.command {
        Command::Validate { kind, group, file } => validate(kind, group, &file, mode),
        Command::Compose { kind, at, out, outer, inners } => compose(kind, at, &outer, &inners, out.as_deref(), mode),
        Command::Axioms { kind, trials, samples, seed, max_arity, pushout, report } => {
            let cfg = HarnessConfig {
                trials,
                samples,
                seed,
                max_arity,
                ..HarnessConfig::default()
            };
            axioms(kind, &cfg, pushout, report.as_deref())
        }
        Command::Cells { n, max_length } => cells(n, max_length),
        Command::Braid { n, word, show_images } => braid(n, &word, show_images),
        Command::Omega { group, cactus, loops } => match group {
            GroupTag::S1 => omega_in(&CircleGroup, &cactus, &loops, mode),
            GroupTag::Ut3 => omega_in(&UniTriangular3, &cactus, &loops, mode),
        },
        Command::AdaptedPath { config, from, to } => adapted(&config, &from, &to, mode),
        Command::Render { kind, out, file } => render(kind, &file, out.as_deref(), mode),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
