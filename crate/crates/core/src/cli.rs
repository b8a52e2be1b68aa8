//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library, and renders a [`RunReport`]; the binary only prints the result.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::equivalence::{self, Ambient, Carrier, IndepSet, Truth};
use crate::error::{Error, Result};
use crate::finitary::{construct_finitary, FinitaryMatroid};
use crate::finite::{check_base_axioms, construct_matroid, FiniteMatroid, MatroidSpec};
use crate::forcing::{self, ClaimStatus};
use crate::format::{
    emit_matroid_file, parse_family_file, parse_matroid_file, parse_task_file, FamilyFile, MatroidDescription,
    MatroidFile, Member, TaskFile,
};
use crate::gentrunc::{self, TruncationFamily, Verdict};
use crate::report::{digest, RunReport, Status};
use crate::selftest;
use crate::set::{ElementSet, SetFamily};
use crate::truncation::{apply_level, classify_truncation, TruncationLevel};

#[derive(Parser, Debug)]
#[command(name = "matroid-forge", version, about = "Finite and finitary matroid workbench for generalised truncations")]
pub struct Cli {
    /// Emit the report as JSON instead of key/value text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to this path instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the base axioms of a finite matroid file.
    Axioms {
        #[command(subcommand)]
        command: AxiomsCommand,
    },
    /// Apply a truncation (`k`, `-n` or `trivial`) and emit the result as an explicit matroid file.
    Truncate {
        #[arg(long, allow_hyphen_values = true)]
        level: String,
        #[arg(long)]
        matroid: PathBuf,
        /// Write the matroid file here; without it the file goes to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide whether `--other` is a truncation of `--matroid`.
    ClassifyTruncation {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Almost spanning and strong equivalence.
    Equiv {
        #[command(subcommand)]
        command: EquivCommand,
    },
    /// Generalised truncations.
    Gentrunc {
        #[command(subcommand)]
        command: GentruncCommand,
    },
    /// Finite-depth forcing step.
    Forcing {
        #[command(subcommand)]
        command: ForcingCommand,
    },
    /// Run the seeded invariant suites.
    Selftest {
        #[command(subcommand)]
        command: SelftestCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum AxiomsCommand {
    Check {
        #[arg(long)]
        matroid: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long)]
    pub matroid: PathBuf,
    /// A family file; its first two members are I and J.
    #[arg(long)]
    pub sets: PathBuf,
    /// Prefix length used to certify infinite sets against a black-box oracle.
    #[arg(long, default_value_t = 64)]
    pub fuel: usize,
}

#[derive(Subcommand, Debug)]
pub enum EquivCommand {
    /// Is I ~ J?
    Strong(PairArgs),
    /// Is I ⊴ J?
    AlmostSpans(PairArgs),
    /// Label the class of the first member.
    Classify {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        sets: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GentruncCommand {
    Verify {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
    Enumerate {
        #[arg(long)]
        matroid: PathBuf,
        /// Brute force over all subsets of the independent sets.
        #[arg(long)]
        raw: bool,
    },
    VerifyFinitary {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        tasks: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct TaskArgs {
    #[arg(long)]
    pub matroid: PathBuf,
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub task: PathBuf,
    /// Which task of the task file to use.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

#[derive(Subcommand, Debug)]
pub enum ForcingCommand {
    Step {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long)]
        depth: usize,
    },
    CheckClaims {
        #[command(flatten)]
        task: TaskArgs,
    },
    Seed {
        #[arg(long)]
        prefix: String,
        /// A finitary matroid file; the free matroid by default.
        #[arg(long)]
        matroid: Option<PathBuf>,
        /// A second prefix whose family is merged with the first.
        #[arg(long)]
        with: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SelftestCommand {
    Lemmas {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
    Oracle {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("matroid-forge".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let started = Instant::now();
    let mut ctx = Context {
        report: RunReport::new(args.join(" ")),
        inputs: vec![],
        primary: None,
    };
    if let Err(e) = dispatch(&cli.command, &mut ctx) {
        ctx.report.set_status(Status::Error);
        ctx.report.push("error", &e.to_string());
    }
    let Context { mut report, inputs, primary } = ctx;
    let refs: Vec<(&str, &[u8])> = inputs.iter().map(|(r, b)| (r.as_str(), b.as_slice())).collect();
    report.inputs_digest = digest(&refs);
    report.elapsed_us = started.elapsed().as_micros() as u64;
    let rendered = if cli.json { report.to_json() } else { report.to_text() };
    let code = report.exit_code;
    let mut out = Outcome {
        code,
        stdout: String::new(),
        stderr: String::new(),
    };
    match (&cli.report, primary) {
        (Some(path), primary) => {
            if let Err(e) = fs::write(path, rendered) {
                out.stderr = format!("cannot write report to {}: {e}\n", path.display());
                out.code = 2;
            }
            out.stdout = primary.unwrap_or_default();
        }
        (None, Some(primary)) => {
            out.stdout = primary;
            if code != 0 {
                out.stderr = rendered;
            }
        }
        (None, None) => out.stdout = rendered,
    }
    out
}

struct Context {
    report: RunReport,
    inputs: Vec<(String, Vec<u8>)>,
    /// Output that replaces the report on standard output (an emitted file).
    primary: Option<String>,
}

impl Context {
    fn read(&mut self, role: &str, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::Precondition(format!("{} is not UTF-8", path.display())))?;
        self.inputs.push((role.to_string(), bytes));
        Ok(text)
    }

    fn matroid(&mut self, role: &str, path: &Path) -> Result<MatroidFile> {
        let text = self.read(role, path)?;
        parse_matroid_file(&text).map_err(|e| in_file(path, e))
    }

    fn finite(&mut self, role: &str, path: &Path) -> Result<FiniteMatroid> {
        match self.matroid(role, path)?.description {
            MatroidDescription::Finite(spec) => construct_matroid(&spec),
            MatroidDescription::Finitary(_) => Err(Error::Precondition(format!("{} describes an infinite matroid", path.display()))),
        }
    }

    fn finitary(&mut self, role: &str, path: &Path) -> Result<FinitaryMatroid> {
        match self.matroid(role, path)?.description {
            MatroidDescription::Finitary(spec) => construct_finitary(&spec),
            MatroidDescription::Finite(_) => Err(Error::Precondition(format!("{} describes a finite matroid", path.display()))),
        }
    }

    fn family(&mut self, role: &str, path: &Path) -> Result<FamilyFile> {
        let text = self.read(role, path)?;
        parse_family_file(&text).map_err(|e| in_file(path, e))
    }

    fn tasks(&mut self, role: &str, path: &Path) -> Result<TaskFile> {
        let text = self.read(role, path)?;
        parse_task_file(&text).map_err(|e| in_file(path, e))
    }

    fn status(&mut self, status: Status) {
        self.report.set_status(status);
    }
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    }
}

fn dispatch(command: &Command, ctx: &mut Context) -> Result<()> {
    match command {
        Command::Axioms {
            command: AxiomsCommand::Check { matroid },
        } => axioms_check(ctx, matroid),
        Command::Truncate { level, matroid, output } => truncate(ctx, level, matroid, output.as_deref()),
        Command::ClassifyTruncation { matroid, other } => {
            let m = ctx.finite("matroid", matroid)?;
            let n = ctx.finite("other", other)?;
            match classify_truncation(&m, &n)? {
                Some(level) => {
                    ctx.report.push("level", &level.to_string());
                    ctx.status(Status::True);
                }
                None => ctx.status(Status::False),
            }
            Ok(())
        }
        Command::Equiv { command } => equiv(ctx, command),
        Command::Gentrunc { command } => gentrunc_cmd(ctx, command),
        Command::Forcing { command } => forcing_cmd(ctx, command),
        Command::Selftest { command } => {
            let (seed, suites) = match command {
                SelftestCommand::Lemmas { seed } => (*seed, selftest::run_lemmas(*seed)),
                SelftestCommand::Oracle { seed } => (*seed, selftest::run_oracle(*seed)?),
            };
            ctx.report.seed = Some(seed);
            let mut ok = true;
            for s in &suites {
                ok &= s.passed();
                let text = format!("{} checked={} failures={}", s.name, s.checked, s.failures.len());
                ctx.report.push_with("suite", text, s);
            }
            ctx.status(if ok { Status::Ok } else { Status::Violation });
            Ok(())
        }
    }
}

fn axioms_check(ctx: &mut Context, path: &Path) -> Result<()> {
    let file = ctx.matroid("matroid", path)?;
    let (ground, family): (ElementSet, SetFamily) = match file.description {
        // explicit base lists are checked as given, before construction
        MatroidDescription::Finite(MatroidSpec::Explicit { ground, bases }) => (
            ground.into_iter().collect(),
            bases.into_iter().map(ElementSet::from).collect(),
        ),
        MatroidDescription::Finite(spec) => {
            let m = construct_matroid(&spec)?;
            (m.ground_set(), m.bases()?)
        }
        MatroidDescription::Finitary(_) => {
            return Err(Error::Precondition("the base axioms are checked on finite matroids only".into()))
        }
    };
    let verdict = check_base_axioms(&ground, &family)?;
    ctx.report.push("bases", &family.len());
    match &verdict {
        crate::finite::AxiomVerdict::Ok => ctx.status(Status::Ok),
        crate::finite::AxiomVerdict::Violation(v) => {
            ctx.report.push("violation", v);
            ctx.status(Status::Violation);
        }
    }
    Ok(())
}

fn truncate(ctx: &mut Context, level: &str, path: &Path, output: Option<&Path>) -> Result<()> {
    let level: TruncationLevel = level.parse()?;
    let file = ctx.matroid("matroid", path)?;
    let MatroidDescription::Finite(spec) = &file.description else {
        return Err(Error::Precondition("truncation applies to finite matroids".into()));
    };
    let m = construct_matroid(spec)?;
    let t = apply_level(&m, level)?;
    let bases = t.bases()?;
    let explicit = MatroidSpec::Explicit {
        ground: t.ground().to_vec(),
        bases: bases.iter().map(ElementSet::to_vec).collect(),
    };
    let text = emit_matroid_file(&format!("{}-level{}", file.name, level), &MatroidDescription::Finite(explicit));
    ctx.report.push("level", &level.to_string());
    ctx.report.push("rank", &t.full_rank());
    ctx.report.push("bases", &bases);
    match output {
        Some(out) => {
            fs::write(out, &text).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", out.display())))?;
            ctx.report.push("output", &out.display().to_string());
        }
        None => ctx.primary = Some(text),
    }
    ctx.status(Status::Ok);
    Ok(())
}

fn carrier(member: &Member) -> Carrier {
    match member {
        Member::Set(s) => Carrier::Finite(s.clone()),
        Member::Class(t) => Carrier::Template(t.clone()),
    }
}

fn equiv(ctx: &mut Context, command: &EquivCommand) -> Result<()> {
    let (matroid, sets, needed, fuel) = match command {
        EquivCommand::Strong(a) | EquivCommand::AlmostSpans(a) => (&a.matroid, &a.sets, 2, a.fuel),
        EquivCommand::Classify { matroid, sets } => (matroid, sets, 1, 0),
    };
    let file = ctx.matroid("matroid", matroid)?;
    let family = ctx.family("sets", sets)?;
    if family.members.len() < needed {
        return Err(Error::Precondition(format!("the set file needs at least {needed} members")));
    }
    let (finite, finitary);
    let ambient = match &file.description {
        MatroidDescription::Finite(spec) => {
            finite = construct_matroid(spec)?;
            Ambient::Finite(&finite)
        }
        MatroidDescription::Finitary(spec) => {
            finitary = construct_finitary(spec)?;
            Ambient::Finitary(&finitary)
        }
    };
    let members = family.members[..needed]
        .iter()
        .map(|m| IndepSet::new(ambient, carrier(m), fuel))
        .collect::<Result<Vec<_>>>()?;
    let truth = match command {
        EquivCommand::Strong(_) => equivalence::strongly_equivalent(ambient, &members[0], &members[1], fuel)?,
        EquivCommand::AlmostSpans(_) => equivalence::almost_spans(ambient, &members[0], &members[1], fuel)?,
        EquivCommand::Classify { .. } => {
            let label = equivalence::classify_class(ambient, &members[0])?;
            ctx.report.push("label", &label);
            ctx.status(Status::Ok);
            return Ok(());
        }
    };
    ctx.report.push("answer", &truth);
    ctx.status(match truth {
        Truth::True => Status::True,
        Truth::False => Status::False,
        Truth::Unknown => Status::Unknown,
    });
    Ok(())
}

fn gentrunc_cmd(ctx: &mut Context, command: &GentruncCommand) -> Result<()> {
    match command {
        GentruncCommand::Verify { matroid, family } => {
            let m = ctx.finite("matroid", matroid)?;
            let f = ctx.family("family", family)?.finite_family()?;
            match gentrunc::verify_family(&m, &f)? {
                Verdict::Ok => ctx.status(Status::Ok),
                Verdict::Violation(v) => {
                    ctx.report.push("violation", &v);
                    ctx.status(Status::Violation);
                }
            }
        }
        GentruncCommand::Enumerate { matroid, raw } => {
            let m = ctx.finite("matroid", matroid)?;
            let families = if *raw {
                gentrunc::enumerate_raw(&m)?
            } else {
                gentrunc::enumerate_gen_truncations(&m)?
            };
            ctx.report.push("count", &families.len());
            for f in &families {
                ctx.report.push("family", f);
            }
            ctx.status(Status::Ok);
        }
        GentruncCommand::VerifyFinitary { matroid, family, tasks } => {
            let mf = ctx.finitary("matroid", matroid)?;
            let reps = ctx.family("family", family)?.templates();
            let tasks = ctx.tasks("tasks", tasks)?;
            let fam = TruncationFamily::new(&mf, reps)?;
            let report = gentrunc::verify_family_finitary(&mf, &fam, &tasks.tasks, 0)?;
            if let Some(v) = &report.violation {
                ctx.report.push("violation", v);
            }
            for (k, t) in report.tasks.iter().enumerate() {
                let text = match t {
                    gentrunc::TaskStatus::Vacuous => format!("{k} vacuous"),
                    gentrunc::TaskStatus::Unmet => format!("{k} unmet"),
                    gentrunc::TaskStatus::Met { class, between, witness } => {
                        let how = if *between { "between" } else { "above" };
                        format!("{k} met class={class} {how} witness=[{witness}]")
                    }
                };
                ctx.report.push_with("task", text, t);
            }
            ctx.status(if report.is_ok() { Status::Ok } else { Status::Violation });
        }
    }
    Ok(())
}

fn load_task(ctx: &mut Context, args: &TaskArgs) -> Result<(FinitaryMatroid, TruncationFamily, forcing::Task)> {
    let mf = ctx.finitary("matroid", &args.matroid)?;
    let reps = ctx.family("family", &args.family)?.templates();
    let tasks = ctx.tasks("task", &args.task)?;
    let (i, j) = tasks
        .tasks
        .get(args.index)
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("task file has no task {}", args.index)))?;
    let family = TruncationFamily::new(&mf, reps)?;
    let task = forcing::make_task(&mf, i, j)?;
    Ok((mf, family, task))
}

fn push_claims(ctx: &mut Context, status: &ClaimStatus) -> bool {
    ctx.report.push("claims", status);
    let holds = !matches!(status, ClaimStatus::Claim1Violated { .. } | ClaimStatus::Claim2Violated { .. });
    if !holds {
        ctx.status(Status::Violation);
    }
    holds
}

fn forcing_cmd(ctx: &mut Context, command: &ForcingCommand) -> Result<()> {
    match command {
        ForcingCommand::CheckClaims { task } => {
            let (mf, family, task) = load_task(ctx, task)?;
            let status = forcing::check_claim_preconditions(&mf, &family, &task)?;
            if push_claims(ctx, &status) {
                ctx.status(Status::Ok);
            }
        }
        ForcingCommand::Step { task, depth } => {
            let (mf, family, task) = load_task(ctx, task)?;
            let status = forcing::check_claim_preconditions(&mf, &family, &task)?;
            if !push_claims(ctx, &status) {
                return Ok(());
            }
            let cert = forcing::forcing_step(&mf, &family, &task, *depth)?;
            ctx.report.push("depth", &cert.depth);
            ctx.report.push_with("r-lower", format!("{:?}", cert.r_lower), &cert.r_lower);
            ctx.report.push_with("r-upper", format!("{:?}", cert.r_upper), &cert.r_upper);
            for m in &cert.met {
                let text = format!("{} fragment={} {}", m.id, m.fragment, m.evidence);
                ctx.report.push_with("met", text, m);
            }
            ctx.report.push("condition", &cert.condition);
            ctx.report.push("b-low", &cert.b_low);
            ctx.report.push("b-excluded", &cert.b_excluded);
            for ineq in &cert.incomparability {
                ctx.report.push("incomparability", ineq);
            }
            let rechecked = cert.recheck(&mf)?;
            ctx.report.push("rechecked", &rechecked);
            ctx.status(if rechecked { Status::Ok } else { Status::Violation });
        }
        ForcingCommand::Seed { prefix, matroid, with } => {
            let mf = match matroid {
                Some(path) => ctx.finitary("matroid", path)?,
                None => FinitaryMatroid::free(),
            };
            let bits = forcing::parse_prefix(prefix)?;
            let family = forcing::seed_family(&mf, &bits)?;
            for r in family.reps() {
                ctx.report.push("class", r);
            }
            if let Some(other) = with {
                let second = forcing::seed_family(&mf, &forcing::parse_prefix(other)?)?;
                let merged = forcing::merge(&family, &second);
                let pairs = forcing::comparable_pairs(&mf, &merged);
                for r in &merged {
                    ctx.report.push("merged-class", r);
                }
                ctx.report.push_with("comparable-pairs", format!("{pairs:?}"), &pairs);
            }
            ctx.status(Status::Ok);
        }
    }
    Ok(())
}
