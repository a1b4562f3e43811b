//! `elemsem`: command-line front end for the elementary semantics library.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use elemsem::domain::EnumCfg;

#[derive(Parser, Debug)]
#[command(name = "elemsem", version, about = "Elementary semantics for CBV lambda calculi")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a term and print it back in canonical form.
    Parse(Input),
    /// Evaluate a closed term with the reference interpreters.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Big-step evaluation with closures (the default).
        #[arg(long, conflicts_with = "small")]
        big: bool,
        /// Small-step evaluation by substitution.
        #[arg(long)]
        small: bool,
    },
    /// Enumerate the bounded meaning of a term, one element per line.
    Enum {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
    },
    /// Decide whether an element belongs to the meaning of a term.
    Member {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        elem: String,
    },
    /// Decide whether a closed term has an intersection type.
    Typecheck {
        #[command(flatten)]
        input: Input,
        #[arg(long = "type")]
        ty: String,
    },
    /// Constant-fold and inline.
    Optimize(Input),
    /// Compare a term with its optimized form.
    CheckOpt(Input),
    /// Typecheck a System F term.
    SfTypecheck(Input),
    /// Enumerate the bounded meaning of a System F term.
    SfEnum {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = SeedArg::Zero)]
        seed: SeedArg,
    },
    /// Check that a System F term's meaning lies within its type.
    SfCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = SeedArg::Zero)]
        seed: SeedArg,
    },
    /// Compare integer results with Engeler's semantics.
    CompareEngeler(Input),
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Inline source text.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub source: Option<String>,
    /// Read the source from a file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    /// Integer range as LO..HI.
    #[arg(long, default_value = "-8..8", value_parser = parse_range, allow_hyphen_values = true)]
    pub ints: (i64, i64),
    #[arg(long = "fix-fuel", default_value_t = 5)]
    pub fix_fuel: usize,
    #[arg(long, default_value_t = 10_000)]
    pub fuel: usize,
    /// Inlining budget.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    /// One `key=value` record per line.
    Records,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Universe,
    Exhaustive,
    Maximal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedArg {
    Zero,
    EmptyTable,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

impl Input {
    pub fn text(&self) -> Result<String, String> {
        match (&self.source, &self.file) {
            (Some(s), None) => Ok(s.clone()),
            (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
            _ => Err("give exactly one of SOURCE or --file".into()),
        }
    }

    pub fn cfg(&self) -> EnumCfg {
        EnumCfg::new(self.depth, self.ints.0, self.ints.1, self.width)
            .expect("range validated by the argument parser")
            .with_fix_fuel(self.fix_fuel)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Enumeration and evaluation recurse on term structure.
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || commands::run(&cli.cmd))
        .expect("spawn worker thread");
    let out = worker.join().expect("worker thread panicked");
    print!("{}", out.stdout);
    if !out.stderr.is_empty() {
        eprint!("{}", out.stderr);
    }
    ExitCode::from(out.code)
}
