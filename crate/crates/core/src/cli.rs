//! Command-line front end. Reports go to `out` as `key=value` lines,
//! diagnostics to `err`.
//!
//! Exit codes: 0 success (sat, member, holds), 1 negative answer, 2 unknown,
//! 64 usage, 65 unreadable or invalid input, 70 internal error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::compress::{compress_model_with, CompressError};
use crate::corpus::{self, FormulaParams};
use crate::normal_form::to_normal_form;
use crate::solver::{brute_force_sat, decide_sat, SatResult, Verdict, DEFAULT_CAP};
use crate::structures::{evaluate, parse_structure, Assignment, Structure};
use crate::syntax::{parse_formula_infer, validate_fragment, Formula, Vocabulary};
use crate::tiling::{
    build_grid_encoding, check_torus_tiling, decorate, extract_torus_hom, find_isomorphism, gen_tiling_formula,
    star_projection, torus, TileSet,
};
use crate::translate::{
    equivalence_oracle, to_diagram_normal_form, to_foc2_with, Foc2Options, OffCentre, OracleVerdict, StarMode,
};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "uf1eq", version, about = "Uniform one-dimensional fragment toolkit")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FormulaArg {
    #[arg(long)]
    formula: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify a formula against UF1= (or UFC1= with --counting).
    Check {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long)]
        counting: bool,
    },
    /// Scott-style normal form.
    Normalize {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long, value_name = "PATH")]
        emit_nf: Option<PathBuf>,
    },
    /// Bounded model search on the normal form.
    Sat {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_name = "PATH")]
        emit_model: Option<PathBuf>,
    },
    /// Brute-force model search on the formula itself.
    BruteSat {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long, default_value_t = 4)]
        cap: usize,
        #[arg(long, value_name = "PATH")]
        emit_model: Option<PathBuf>,
    },
    /// Evaluate a formula on a structure.
    ModelCheck {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long)]
        model: PathBuf,
        /// Free variable values, e.g. `x=0,y=2`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Shrink a model of the normal form.
    Compress {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    /// Translate into diagram normal form or two-variable counting logic.
    Translate {
        #[arg(long, value_enum, default_value_t = Target::Foc2)]
        to: Target,
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u8).range(1..=4))]
        verify: Option<u8>,
        #[arg(long, default_value_t = 40)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value_t = OffCentreArg::Corrected)]
        off_centre: OffCentreArg,
        #[arg(long, value_enum, default_value_t = StarArg::Cells)]
        star: StarArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write eta together with the tiling constraints of a tile set.
    GenTiling {
        #[arg(long)]
        tiles: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the encoding of the (2n x 2n)-torus, optionally tiled.
    GenGrid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        tiles: Option<PathBuf>,
    },
    /// Compute the {H,V} projection of an {R,E} structure.
    Project {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a torus homomorphism from a model of eta.
    ExtractHom {
        #[arg(long)]
        model: PathBuf,
        /// Checked to hold in the model first.
        #[arg(long)]
        formula: Option<PathBuf>,
    },
    /// Print the seeded random corpus used by the tests.
    Corpus {
        #[arg(long, value_enum, default_value_t = Kind::Sentences)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated NAME/ARITY list.
        #[arg(long, default_value = "P/1,Q/1,R/2,T/3")]
        vocab: String,
        #[arg(long, default_value_t = 20)]
        max_nodes: usize,
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Foc2,
    Dnf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OffCentreArg {
    Corrected,
    Verbatim,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StarArg {
    Cells,
    Types,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Sentences,
    Formulas,
    NormalForms,
    Structures,
}

enum Failure {
    Usage(String),
    Input(String),
    Internal(String),
}

type Outcome = Result<i32, Failure>;

fn input<E: std::fmt::Display>(what: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", what.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(input(path))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    let text = read(path)?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    parse_formula_infer(&body).map(|(f, _)| f).map_err(input(path))
}

fn read_model(path: &Path) -> Result<Structure, Failure> {
    parse_structure(&read(path)?).map_err(input(path))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(cli.cmd, &mut buf));
                let _ = out.write_all(&buf);
                r
            }
            Err(e) => Err(Failure::Internal(e.to_string())),
        },
        None => dispatch(cli.cmd, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Input(m) => (EXIT_INPUT, m),
                Failure::Internal(m) => (EXIT_INTERNAL, m),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| Failure::Internal(e.to_string()))?
    };
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        Cmd::Check { f, counting } => {
            let phi = read_formula(&f.formula)?;
            let r = validate_fragment(&phi, counting);
            say!(out, "verdict={}", if r.member { "member" } else { "nonmember" });
            say!(out, "fragment={}", r.fragment);
            say!(out, "violations={}", r.violations.len());
            for v in &r.violations {
                say!(out, "violation={} rule={} detail={}", v.path, v.rule, v.detail);
            }
            Ok(if r.member { 0 } else { 1 })
        }
        Cmd::Normalize { f, emit_nf } => {
            let phi = read_formula(&f.formula)?;
            let nf = to_normal_form(&phi).map_err(input(&f.formula))?;
            say!(out, "exist_conjuncts={}", nf.exist.len());
            say!(out, "univ_conjuncts={}", nf.univ.len());
            say!(out, "fresh_symbols={}", nf.fresh_symbols.join(","));
            say!(out, "width={}", nf.width());
            say!(out, "size={}", nf.size());
            match emit_nf {
                Some(p) => write_file(&p, &format!("{nf}\n"))?,
                None => say!(out, "nf={}", nf.to_formula()),
            }
            Ok(0)
        }
        Cmd::Sat { f, cap, emit_model } => {
            if cap == 0 {
                return Err(Failure::Usage("--cap must be at least 1".into()));
            }
            let phi = read_formula(&f.formula)?;
            if phi.uses_counting() {
                return Err(Failure::Input(
                    "counting quantifiers are only accepted by brute-sat".into(),
                ));
            }
            let nf = to_normal_form(&phi).map_err(input(&f.formula))?;
            let r = decide_sat(&nf, Some(cap));
            // the witness interprets the normal form's markers; keep the input's symbols
            let vocab = phi.vocabulary().map_err(input(&f.formula))?;
            report_sat(out, &r, emit_model.as_deref(), Some(&vocab))
        }
        Cmd::BruteSat { f, cap, emit_model } => {
            if cap == 0 {
                return Err(Failure::Usage("--cap must be at least 1".into()));
            }
            let phi = read_formula(&f.formula)?;
            if !phi.free_vars().is_empty() {
                return Err(Failure::Input("brute-sat needs a sentence".into()));
            }
            let r = brute_force_sat(&phi, cap);
            report_sat(out, &r, emit_model.as_deref(), None)
        }
        Cmd::ModelCheck { f, model, assign } => {
            let phi = read_formula(&f.formula)?;
            let a = read_model(&model)?;
            let mut s = Assignment::new();
            for part in assign.iter().flat_map(|t| t.split(',')).filter(|p| !p.is_empty()) {
                let (v, e) = part
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("bad assignment {part}")))?;
                let e: usize = e
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad element in {part}")))?;
                s.insert(v.trim().into(), e);
            }
            let holds = evaluate(&a, &phi, &s).map_err(input(&model))?;
            say!(out, "result={holds}");
            Ok(if holds { 0 } else { 1 })
        }
        Cmd::Compress {
            f,
            model,
            out: dest,
            trace,
        } => {
            let phi = read_formula(&f.formula)?;
            let nf = to_normal_form(&phi).map_err(input(&f.formula))?;
            let a = read_model(&model)?;
            let a = nf.expand_model(&a).map_err(input(&model))?;
            let c = match compress_model_with(&a, &nf, trace) {
                Ok(c) => c,
                Err(e @ (CompressError::Conflict { .. } | CompressError::Internal(_))) => {
                    return Err(Failure::Internal(e.to_string()))
                }
                Err(e) => return Err(Failure::Input(e.to_string())),
            };
            write_file(&dest, &c.structure.to_string())?;
            say!(out, "source_size={}", a.size());
            say!(out, "size={}", c.structure.size());
            say!(out, "court={}", c.court.members.len());
            say!(out, "kings={}", c.court.kings.len());
            say!(out, "court_bound={}", c.court.size_bound());
            say!(out, "size_bound={}", crate::solver::paper_bound(&nf));
            say!(out, "witness_writes={}", c.stats.witness_writes);
            say!(out, "repeated_writes={}", c.stats.repeated_writes);
            say!(out, "completions={}", c.stats.completions);
            say!(out, "conflicts=0");
            for e in &c.trace {
                say!(out, "trace={e}");
            }
            Ok(0)
        }
        Cmd::Translate {
            to,
            f,
            verify,
            max_nodes,
            off_centre,
            star,
            out: dest,
        } => {
            let phi = read_formula(&f.formula)?;
            if phi.node_count() > max_nodes {
                return Err(Failure::Input(format!(
                    "formula has {} nodes, above --max-nodes {max_nodes}",
                    phi.node_count()
                )));
            }
            let opts = Foc2Options {
                off_centre: match off_centre {
                    OffCentreArg::Corrected => OffCentre::Corrected,
                    OffCentreArg::Verbatim => OffCentre::Verbatim,
                },
                star: match star {
                    StarArg::Cells => StarMode::Cells,
                    StarArg::Types => StarMode::Types,
                },
            };
            let g = match to {
                Target::Foc2 => to_foc2_with(&phi, opts),
                Target::Dnf => to_diagram_normal_form(&phi),
            }
            .map_err(input(&f.formula))?;
            say!(out, "nodes={}", g.node_count());
            match dest {
                Some(p) => write_file(&p, &format!("{g}\n"))?,
                None => say!(out, "formula={g}"),
            }
            if let Some(n) = verify {
                match equivalence_oracle(&phi, &g, n as usize).map_err(|e| Failure::Internal(e.to_string()))? {
                    OracleVerdict::Equivalent { max_size, checked } => {
                        say!(out, "verify=equivalent");
                        say!(out, "verified_up_to={max_size}");
                        say!(out, "structures_checked={checked}");
                    }
                    OracleVerdict::Counterexample { structure, assignment } => {
                        say!(out, "verify=counterexample");
                        let vals: Vec<String> = assignment.iter().map(|(v, e)| format!("{v}={e}")).collect();
                        return Err(Failure::Internal(format!(
                            "translation differs from the input under [{}] on\n{structure}",
                            vals.join(",")
                        )));
                    }
                }
            }
            Ok(0)
        }
        Cmd::GenTiling { tiles, out: dest } => {
            let ts: TileSet = read(&tiles)?.parse().map_err(input(&tiles))?;
            let f = gen_tiling_formula(&ts);
            let member = validate_fragment(&f, true).member;
            write_file(&dest, &format!("{f}\n"))?;
            say!(out, "tiles={}", ts.len());
            say!(out, "nodes={}", f.node_count());
            say!(out, "ufc1eq_member={member}");
            Ok(if member { 0 } else { EXIT_INTERNAL })
        }
        Cmd::GenGrid { n, out: dest, tiles } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let mut g = build_grid_encoding(n);
            say!(out, "side={}", 2 * n);
            say!(out, "size={}", g.size());
            if let Some(p) = tiles {
                let ts: TileSet = read(&p)?.parse().map_err(input(&p))?;
                match check_torus_tiling(&ts, 2 * n) {
                    Some(t) => {
                        g = decorate(&g, &ts, &t);
                        say!(out, "tiled=true");
                    }
                    None => {
                        say!(out, "tiled=false");
                        return Ok(1);
                    }
                }
            }
            write_file(&dest, &g.to_string())?;
            Ok(0)
        }
        Cmd::Project { model, out: dest } => {
            let a = read_model(&model)?;
            let s = star_projection(&a).map_err(input(&model))?;
            say!(out, "h_pairs={}", s.tuple_count("H"));
            say!(out, "v_pairs={}", s.tuple_count("V"));
            let side = (1..=a.size()).find(|k| k * k == a.size());
            let iso = side.filter(|&k| find_isomorphism(&s, &torus(k, k)).is_some());
            say!(
                out,
                "square_torus={}",
                iso.map_or("none".to_string(), |k| k.to_string())
            );
            if let Some(p) = dest {
                write_file(&p, &s.to_string())?;
            }
            Ok(0)
        }
        Cmd::ExtractHom { model, formula } => {
            let a = read_model(&model)?;
            if let Some(fp) = formula {
                let phi = read_formula(&fp)?;
                let holds = evaluate(&a, &phi, &Assignment::new()).map_err(input(&fp))?;
                if !holds {
                    return Err(Failure::Input(format!("{} does not hold in the model", fp.display())));
                }
            }
            let h = extract_torus_hom(&a).map_err(input(&model))?;
            say!(out, "p={}", h.p);
            say!(out, "q={}", h.q);
            say!(out, "square={}", h.square);
            let rows: Vec<String> = (0..h.q)
                .map(|y| (0..h.p).map(|x| h.at(x, y).to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            say!(out, "map={}", rows.join(" | "));
            say!(out, "homomorphism=verified");
            Ok(0)
        }
        Cmd::Corpus {
            kind,
            count,
            seed,
            vocab,
            max_nodes,
            size,
        } => {
            let v = parse_vocab(&vocab)?;
            let mut r = corpus::rng(seed);
            let p = FormulaParams::new(v.clone(), max_nodes);
            for i in 0..count {
                match kind {
                    Kind::Sentences => say!(out, "formula={}", corpus::random_sentence(&mut r, &p)),
                    Kind::Formulas => say!(out, "formula={}", corpus::random_formula(&mut r, &p, true)),
                    Kind::NormalForms => {
                        let nf = corpus::random_normal_form(&mut r, &v, max_nodes.min(8));
                        say!(out, "formula={}", nf.to_formula());
                    }
                    Kind::Structures => {
                        let s = corpus::random_structure(&mut r, &v, size.max(1), 0.3);
                        say!(out, "# structure {i}\n{s}");
                    }
                }
            }
            Ok(0)
        }
    }
}

fn parse_vocab(text: &str) -> Result<Vocabulary, Failure> {
    let mut v = Vocabulary::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, k) = item
            .split_once('/')
            .ok_or_else(|| Failure::Usage(format!("expected NAME/ARITY, got {item}")))?;
        let k: usize = k.parse().map_err(|_| Failure::Usage(format!("bad arity in {item}")))?;
        v.insert(name, k).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(v)
}

fn report_sat(out: &mut dyn Write, r: &SatResult, emit: Option<&Path>, keep: Option<&Vocabulary>) -> Outcome {
    say!(out, "verdict={}", r.verdict);
    say!(out, "explored_bound={}", r.explored_bound);
    if let Some(m) = &r.witness {
        let m = match keep {
            Some(v) => m.reduct(|name| v.contains(name)),
            None => m.clone(),
        };
        say!(out, "model_size={}", m.size());
        if let Some(p) = emit {
            write_file(p, &m.to_string())?;
        }
    }
    Ok(match r.verdict {
        Verdict::Sat => 0,
        Verdict::Unsat => 1,
        Verdict::Unknown => 2,
    })
}
