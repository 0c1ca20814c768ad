//! The `skograft` command: `prove`, `translate` and `check`.
//!
//! Exit status is 0 on success or acceptance, 1 when the search is
//! exhausted, a translation gives up or a proof is rejected, and 2 on I/O
//! errors and malformed input. With several inputs the worst status wins.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use skograft_core::formula::Formula;
use skograft_core::gs3::{self, GsProof};
use skograft_core::tableau::{prove, ClosedTableau, ProveError, ProverConfig};
use skograft_core::translate::Translator;

use crate::format::{read_gs3, read_tableau, write_gs3, write_tableau};
use crate::pretty::{render_gs3, render_tableau};
use crate::problem::parse_problem;

#[derive(Debug, Parser)]
#[command(name = "skograft", version, about = "Tableau prover with GS3 proof output and checking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refute the formula of each `.p` file and write its proofs.
    Prove(ProveArgs),
    /// Turn each `.tab` tableau proof into a `.gs3` sequent proof.
    Translate(TranslateArgs),
    /// Check each `.gs3` proof.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Tableau,
    Gs3,
    Both,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Directory for the written proofs; defaults to each input's directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also print the proofs in readable form.
    #[arg(long)]
    pub pretty: bool,
    /// Number of input files processed in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Refute the negation of the formula, i.e. prove the formula itself.
    #[arg(long)]
    pub negate: bool,
    #[arg(long, value_enum, default_value_t = Emit::Both)]
    pub emit: Emit,
    /// Instantiations allowed per universal formula on a branch.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub gamma_limit: u32,
    /// Rule applications allowed on a single branch.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth_limit: u32,
    /// Check the accumulated constraints at every closure instead of once
    /// at the end.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub eager_close: bool,
    /// Regrow the whole sequent proof at every Skolem step.
    #[arg(long)]
    pub regrow_from_root: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Regrow the whole sequent proof at every Skolem step.
    #[arg(long)]
    pub regrow_from_root: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

/// What one input produced: an exit status and the text for each stream.
#[derive(Debug, Default)]
struct Report {
    status: u8,
    out: String,
    err: String,
}

impl Report {
    fn fail(status: u8, msg: String) -> Report {
        Report { status, out: String::new(), err: msg + "\n" }
    }

    fn say(&mut self, line: impl AsRef<str>) {
        self.out.push_str(line.as_ref());
        self.out.push('\n');
    }
}

fn read(path: &Path) -> Result<String, Report> {
    fs::read_to_string(path).map_err(|e| Report::fail(2, format!("{}: {e}", path.display())))
}

fn write(report: &mut Report, path: &Path, contents: &str) -> Result<(), ()> {
    match fs::write(path, contents) {
        Ok(()) => {
            report.say(format!("wrote {}", path.display()));
            Ok(())
        }
        Err(e) => {
            report.status = 2;
            report.err.push_str(&format!("{}: {e}\n", path.display()));
            Err(())
        }
    }
}

fn target(input: &Path, out: &Option<PathBuf>, ext: &str) -> PathBuf {
    let dir = match out {
        Some(d) => d.clone(),
        None => input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let stem = input.file_stem().unwrap_or(input.as_os_str());
    dir.join(stem).with_extension(ext)
}

fn translate_checked(closed: &ClosedTableau, from_root: bool) -> Result<GsProof, String> {
    let (proof, _) = Translator::new(closed)
        .and_then(|t| t.regrow_from_root(from_root).finish())
        .map_err(|e| format!("translation failed: {e}"))?;
    gs3::check(&proof).map_err(|r| format!("translated proof rejected: {r}"))?;
    Ok(proof)
}

fn prove_one(input: &Path, args: &ProveArgs) -> Report {
    let text = match read(input) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let formula = match parse_problem(&text) {
        Ok(f) => f,
        Err(e) => return Report::fail(2, format!("{}:{e}", input.display())),
    };
    let goal = if args.negate { Formula::not(formula) } else { formula };
    let config = ProverConfig {
        gamma_limit: args.gamma_limit as usize,
        depth_limit: args.depth_limit as usize,
        eager_close: args.eager_close,
        ..ProverConfig::default()
    };
    let closed = match prove(&[goal], &config) {
        Ok(c) => c,
        Err(ProveError::Exhausted) => {
            return Report::fail(1, format!("{}: exhausted without closing the tableau", input.display()))
        }
        Err(e) => return Report::fail(2, format!("{}: {e}", input.display())),
    };
    let mut report = Report::default();
    report.say(format!("{}: closed tableau with {} rules", input.display(), closed.rule_count()));
    if args.output.pretty {
        report.say(render_tableau(&closed));
    }
    if args.emit != Emit::Gs3 && write(&mut report, &target(input, &args.output.out, "tab"), &write_tableau(&closed)).is_err() {
        return report;
    }
    if args.emit != Emit::Tableau {
        match translate_checked(&closed, args.regrow_from_root) {
            Ok(proof) => {
                report.say(format!("{}: GS3 proof with {} inferences", input.display(), proof.inference_count()));
                if args.output.pretty {
                    report.say(render_gs3(&proof));
                }
                let _ = write(&mut report, &target(input, &args.output.out, "gs3"), &write_gs3(&proof));
            }
            Err(msg) => {
                report.status = 1;
                report.err.push_str(&format!("{}: {msg}\n", input.display()));
            }
        }
    }
    report
}

fn translate_one(input: &Path, args: &TranslateArgs) -> Report {
    let text = match read(input) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let closed = match read_tableau(&text) {
        Ok(c) => c,
        Err(e) => return Report::fail(2, format!("{}: {e}", input.display())),
    };
    let mut report = Report::default();
    match translate_checked(&closed, args.regrow_from_root) {
        Ok(proof) => {
            report.say(format!("{}: GS3 proof with {} inferences", input.display(), proof.inference_count()));
            if args.output.pretty {
                report.say(render_gs3(&proof));
            }
            let _ = write(&mut report, &target(input, &args.output.out, "gs3"), &write_gs3(&proof));
            report
        }
        Err(msg) => Report::fail(1, format!("{}: {msg}", input.display())),
    }
}

fn check_one(input: &Path, named: bool) -> Report {
    let text = match read(input) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let proof = match read_gs3(&text) {
        Ok(p) => p,
        Err(e) => return Report::fail(2, format!("{}: {e}", input.display())),
    };
    let prefix = if named { format!("{}: ", input.display()) } else { String::new() };
    let mut report = Report::default();
    match gs3::check(&proof) {
        Ok(()) => report.say(format!("{prefix}Accepted")),
        Err(r) => {
            report.status = 1;
            report.say(format!("{prefix}Rejected: {r}"));
        }
    }
    report
}

/// Runs `job` on every input with up to `jobs` workers; reports come back
/// in input order.
fn fan_out<F>(inputs: &[PathBuf], jobs: u16, job: F) -> Vec<Report>
where
    F: Fn(&Path) -> Report + Sync,
{
    let workers = (jobs as usize).min(inputs.len()).max(1);
    if workers == 1 {
        return inputs.iter().map(|p| job(p)).collect();
    }
    let mut slots: Vec<Option<Report>> = (0..inputs.len()).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let job = &job;
                s.spawn(move || {
                    inputs.iter().enumerate().skip(w).step_by(workers).map(|(i, p)| (i, job(p))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every input handled")).collect()
}

/// Executes `cli`, writing messages to `out` and `err`, and returns the
/// exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let reports = match &cli.command {
        Command::Prove(a) => fan_out(&a.inputs, a.output.jobs, |p| prove_one(p, a)),
        Command::Translate(a) => fan_out(&a.inputs, a.output.jobs, |p| translate_one(p, a)),
        Command::Check(a) => {
            let named = a.inputs.len() > 1;
            fan_out(&a.inputs, a.jobs, |p| check_one(p, named))
        }
    };
    let mut status = 0;
    for r in reports {
        let _ = out.write_all(r.out.as_bytes());
        let _ = err.write_all(r.err.as_bytes());
        status = status.max(r.status);
    }
    status
}
