//! `equicobar`: batch front end over JSON inputs.
//!
//! Exit codes: 0 success or Yes, 1 certified No or a failed check,
//! 2 inconclusive within caps, 3 bad input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equicobar::{Caps, Error};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "equicobar", version, about = "Exact computations for equivariant simplicial sets and coalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArg {
    /// `Q`, `F<p>`, `F<q>` or `F<p>^<k>`.
    #[arg(long, default_value = "Q")]
    pub field: String,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CapArgs {
    /// Homology degree cap `N`.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Cobar word-length cap `L`.
    #[arg(long)]
    pub length: Option<usize>,
    /// Todd–Coxeter coset bound.
    #[arg(long)]
    pub cosets: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and check any supported input file.
    Validate(Input),
    /// Homology of normalized chains.
    Homology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Truncated cobar construction of normalized chains.
    Cobar {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Edge-path presentation and a finiteness certificate.
    Pi1 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Universal cover of a space with finite fundamental group.
    Cover {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Group-likes of a coalgebra, points of a simplicial coalgebra, or the unit check of a space.
    Points {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Fixed points for every subgroup, on spaces and on chains.
    FixedPoints {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// The diagram of fixed points over the orbit category.
    OrbitDiagram {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        group: PathBuf,
    },
    /// Cellularity conditions along an inclusion.
    Cellularity {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    /// Equivalence oracle for a map, optionally for every subgroup.
    Equivalence {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        notion: u8,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Galois descent for a Galois set or a space with a Galois automorphism.
    Descent {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Runs the acceptance suite.
    Corpus,
}

/// How a finished job ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Negative,
    Inconclusive,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
            Status::Inconclusive => 2,
        }
    }
}

/// Exit code for a failed job.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Violation(_) => 1,
        Error::Inconclusive(_) => 2,
        _ => 3,
    }
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: &'static str,
    pub inputs: Vec<PathBuf>,
    pub field: Option<String>,
    pub caps: Caps,
    pub output: Option<PathBuf>,
}

/// Defaults, then `EQUICOBAR_CAPS` (a JSON object of cap overrides), then flags.
fn resolve_caps(flags: &CapArgs) -> Result<Caps, Error> {
    let mut caps = match std::env::var("EQUICOBAR_CAPS") {
        Ok(s) if !s.trim().is_empty() => {
            equicobar::io::from_str::<Caps>(&s).map_err(|e| Error::InvalidInput(format!("EQUICOBAR_CAPS: {e}")))?
        }
        _ => Caps::default(),
    };
    if let Some(n) = flags.degree {
        caps.degree = n;
        caps.cobar_degree = n;
    }
    if let Some(l) = flags.length {
        caps.cobar_length = l;
    }
    if let Some(b) = flags.cosets {
        caps.cosets = b;
    }
    let all = [caps.degree, caps.cobar_degree, caps.cobar_length, caps.cosets, caps.rewrite_rules, caps.rewrite_steps, caps.normal_form_length];
    if all.contains(&0) {
        return Err(Error::InvalidInput("caps must be positive".into()));
    }
    Ok(caps)
}

fn job(cli: &Cli) -> Result<JobSpec, Error> {
    let none = CapArgs::default();
    let (command, inputs, field, caps): (&'static str, Vec<PathBuf>, Option<&FieldArg>, &CapArgs) = match &cli.command {
        Command::Validate(i) => ("validate", vec![i.input.clone()], None, &none),
        Command::Homology { input, field } => ("homology", vec![input.input.clone()], Some(field), &none),
        Command::Cobar { input, field, caps } => ("cobar", vec![input.input.clone()], Some(field), caps),
        Command::Pi1 { input, caps } => ("pi1", vec![input.input.clone()], None, caps),
        Command::Cover { input, field, caps } => ("cover", vec![input.input.clone()], Some(field), caps),
        Command::Points { input, field } => ("points", vec![input.input.clone()], Some(field), &none),
        Command::FixedPoints { input, group, field } => ("fixed-points", vec![input.input.clone(), group.clone()], Some(field), &none),
        Command::OrbitDiagram { input, group } => ("orbit-diagram", vec![input.input.clone(), group.clone()], None, &none),
        Command::Cellularity { map, group } => ("cellularity", vec![map.clone(), group.clone()], None, &none),
        Command::Equivalence { map, group, field, caps, .. } => {
            ("equivalence", std::iter::once(map.clone()).chain(group.clone()).collect(), Some(field), caps)
        }
        Command::Descent { input, group } => ("descent", std::iter::once(input.input.clone()).chain(group.clone()).collect(), None, &none),
        Command::Corpus => ("corpus", Vec::new(), None, &none),
    };
    Ok(JobSpec { command, inputs, field: field.map(|f| f.field.clone()), caps: resolve_caps(caps)?, output: cli.output.clone() })
}

fn emit(report: &Value, output: Option<&PathBuf>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    print!("{text}");
    if let Some(path) = output {
        std::fs::write(path, &text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = job(&cli).and_then(|spec| {
        let (body, status) = commands::run(&cli_command(&cli.command), &spec)?;
        Ok((spec, body, status))
    });
    match outcome {
        Ok((spec, mut body, status)) => {
            let obj = body.as_object_mut().expect("reports are objects");
            obj.insert("schema".into(), json!(equicobar::io::SCHEMA));
            obj.insert("command".into(), json!(spec.command));
            if let Err(e) = emit(&body, spec.output.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            let report = json!({ "schema": equicobar::io::SCHEMA, "error": e.to_string() });
            if let Some(path) = &cli.output {
                let _ = std::fs::write(path, serde_json::to_string_pretty(&report).unwrap() + "\n");
            }
            ExitCode::from(error_code(&e))
        }
    }
}

fn cli_command(c: &Command) -> commands::Job {
    use commands::Job;
    match c {
        Command::Validate(i) => Job::Validate(i.input.clone()),
        Command::Homology { input, .. } => Job::Homology(input.input.clone()),
        Command::Cobar { input, .. } => Job::Cobar(input.input.clone()),
        Command::Pi1 { input, .. } => Job::Pi1(input.input.clone()),
        Command::Cover { input, .. } => Job::Cover(input.input.clone()),
        Command::Points { input, .. } => Job::Points(input.input.clone()),
        Command::FixedPoints { input, group, .. } => Job::FixedPoints(input.input.clone(), group.clone()),
        Command::OrbitDiagram { input, group } => Job::OrbitDiagram(input.input.clone(), group.clone()),
        Command::Cellularity { map, group } => Job::Cellularity(map.clone(), group.clone()),
        Command::Equivalence { notion, map, group, .. } => Job::Equivalence(*notion, map.clone(), group.clone()),
        Command::Descent { input, group } => Job::Descent(input.input.clone(), group.clone()),
        Command::Corpus => Job::Corpus,
    }
}
