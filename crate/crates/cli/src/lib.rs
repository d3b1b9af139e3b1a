//! The `roach` command line.
//!
//! [`run`] takes the full argument vector (program name first) and returns
//! the exit code and standard output, so every command can be tested
//! without spawning a process. Exit codes: 0 on success, 1 on a domain
//! error, 2 on a usage error.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use roach_core::census::{self, Mutation};
use roach_core::construct::{roach_to_willow, unravel_to_quasi_tree, UnravelResult};
use roach_core::decide::{decide_lr2, Verdict};
use roach_core::enumerate::{enumerate_frames, FrameFilter};
use roach_core::formula::Formula;
use roach_core::frame::{Frame, World, WorldSet};
use roach_core::jankov::fine_jankov;
use roach_core::json::{frame_to_value, FrameJson};
use roach_core::morphism::{find_onto_p_morphism, is_permissible, PMorphism};
use roach_core::ordinal::{classify_beta, logic_of_ordinal_space, LogicId, Ordinal};
use roach_core::roach::{
    builtin, is_2_roach, is_willow_tree, minimal_forbidden_witness, roach_rank, splitting_certificate, Builtin,
};
use roach_core::semantics::{find_refutation, Model, Valuation, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "roach", version, about = "Roaches, willow trees and the logics of ordinal compactifications")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Reject frame files whose relation is not already reflexive and transitive.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report frame classes and roach certificates.
    Check { frame: String },
    /// Extract a forbidden configuration from a frame that is not a 2-roach.
    Witness { frame: String },
    /// p-morphism search.
    #[command(subcommand)]
    Morphism(MorphismCommand),
    /// Is CONFIG a p-morphic image of a point-generated subframe of HOST?
    Permissible {
        #[arg(long)]
        config: String,
        #[arg(long)]
        host: String,
    },
    /// Evaluate a formula in a model.
    Eval {
        frame: String,
        #[arg(long)]
        formula: String,
        /// Valuation JSON such as `{"p": [0, 2]}`, or a path to one.
        #[arg(long)]
        valuation: Option<String>,
    },
    /// Check frame validity, printing a refuting valuation if there is one.
    Validate {
        frame: String,
        #[arg(long)]
        formula: String,
        /// Largest number of valuations to try.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print the Fine–Jankov formula of a rooted frame.
    FineJankov { frame: String },
    /// Unravel a frame into a quasi-tree or a 2-roach into a willow tree.
    Unravel {
        frame: String,
        #[arg(long, value_enum, default_value_t = UnravelMode::QuasiTree)]
        mode: UnravelMode,
    },
    /// Search 2-roaches up to a size bound for a countermodel.
    Decide {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// List frames of a given size up to isomorphism.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Ordinal classifiers.
    #[command(subcommand)]
    Ordinal(OrdinalCommand),
    /// Run the acceptance census.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
pub enum MorphismCommand {
    /// Find the least onto p-morphism from SOURCE to TARGET.
    Find {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum OrdinalCommand {
    /// Logic of the compactification of the ordinal space.
    Classify { ordinal: String },
    /// Logic of the ordinal space itself.
    LogicOf { ordinal: String },
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Run a single criterion.
    #[arg(long)]
    pub only: Option<String>,
    /// Inject a defect to check that the census catches it.
    #[arg(long, value_enum)]
    pub mutate: Option<MutateArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MutateArg {
    Forth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum UnravelMode {
    QuasiTree,
    Willow,
}

/// Output of one invocation.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<roach_core::Error> for Failure {
    fn from(e: roach_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type CmdResult = Result<(i32, String), Failure>;

fn usage(flag: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for {flag}: {e}"))
}

/// Runs `argv` (program name first) and returns the exit code and stdout.
/// Error messages are appended to the returned text.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let out = execute(argv, &mut std::io::empty());
    (out.code, out.stdout + &out.stderr)
}

/// Like [`run`], reading `-` frames from `stdin` and keeping stderr apart.
pub fn execute<I, S>(argv: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut ctx = Ctx { json: cli.json, strict: cli.strict, stdin };
    match dispatch(&mut ctx, cli.command) {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(e)) => Output { code: 1, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

struct Ctx<'a> {
    json: bool,
    strict: bool,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    /// `builtin:<name>`, `-` for stdin, a path, or a bare builtin name when
    /// no such file exists.
    fn frame(&mut self, flag: &str, spec: &str) -> Result<Frame, Failure> {
        if let Some(name) = spec.strip_prefix("builtin:") {
            let name: Builtin = name.parse().map_err(|e| usage(flag, e))?;
            return Ok(builtin(name)?);
        }
        let text = if spec == "-" {
            let mut buf = String::new();
            self.stdin.read_to_string(&mut buf).context("reading stdin")?;
            buf
        } else if Path::new(spec).exists() {
            std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
        } else if let Ok(name) = spec.parse::<Builtin>() {
            return Ok(builtin(name)?);
        } else {
            return Err(usage(flag, format!("`{spec}` is neither a file nor a builtin frame")));
        };
        let doc: FrameJson = serde_json::from_str(&text).with_context(|| format!("parsing frame JSON from {spec}"))?;
        Ok(doc.to_frame_with(self.strict || doc.strict)?)
    }

    fn emit(&self, value: Value, text: String) -> String {
        if self.json {
            format!("{}\n", serde_json::to_string_pretty(&value).expect("JSON values serialize"))
        } else {
            text
        }
    }
}

fn formula_arg(text: &str) -> Result<Formula, Failure> {
    text.parse().map_err(|e| usage("--formula", e))
}

fn ordinal_arg(text: &str) -> Result<Ordinal, Failure> {
    text.parse().map_err(|e| usage("<ORDINAL>", e))
}

fn show_set(f: &Frame, s: WorldSet) -> String {
    let names: Vec<String> = s.iter().map(|w| f.label(w)).collect();
    format!("{{{}}}", names.join(", "))
}

fn show_map(m: &PMorphism) -> String {
    let parts: Vec<String> = m
        .map
        .iter()
        .enumerate()
        .map(|(w, &v)| format!("{} -> {}", m.source.label(w), m.target.label(v)))
        .collect();
    parts.join(", ")
}

fn labels_json(f: &Frame, ws: impl IntoIterator<Item = World>) -> Value {
    Value::from(ws.into_iter().map(|w| f.label(w)).collect::<Vec<_>>())
}

fn dispatch(ctx: &mut Ctx, command: Command) -> CmdResult {
    match command {
        Command::Check { frame } => check(ctx, &frame),
        Command::Witness { frame } => witness(ctx, &frame),
        Command::Morphism(MorphismCommand::Find { source, target }) => morphism_find(ctx, &source, &target),
        Command::Permissible { config, host } => permissible(ctx, &config, &host),
        Command::Eval { frame, formula, valuation } => eval(ctx, &frame, &formula, valuation.as_deref()),
        Command::Validate { frame, formula, budget } => validate(ctx, &frame, &formula, budget),
        Command::FineJankov { frame } => {
            let f = ctx.frame("<FRAME>", &frame)?;
            let chi = fine_jankov(&f)?;
            Ok((0, ctx.emit(json!({ "formula": chi.to_string() }), format!("{chi}\n"))))
        }
        Command::Unravel { frame, mode } => unravel(ctx, &frame, mode),
        Command::Decide { formula, bound } => decide(ctx, &formula, bound),
        Command::Enumerate { size, filter } => enumerate(ctx, size, &filter),
        Command::Ordinal(OrdinalCommand::Classify { ordinal }) => ordinal_classify(ctx, &ordinal),
        Command::Ordinal(OrdinalCommand::LogicOf { ordinal }) => {
            let gamma = ordinal_arg(&ordinal)?;
            let logic = logic_of_ordinal_space(&gamma)?;
            let value = json!({ "ordinal": gamma.to_string(), "logic": logic.to_string(), "id": logic });
            Ok((0, ctx.emit(value, format!("{logic}\n"))))
        }
        Command::Selftest(args) => selftest(ctx, args),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(ctx: &mut Ctx, spec: &str) -> CmdResult {
    let f = ctx.frame("<FRAME>", spec)?;
    let flags = f.classify();
    let mut text = String::new();
    let names: Vec<String> = f.worlds().map(|w| f.label(w)).collect();
    writeln!(text, "frame: {} worlds ({})", f.size(), names.join(", ")).unwrap();
    writeln!(text, "rooted: {}", yes(flags.rooted)).unwrap();
    writeln!(text, "partial order: {}", yes(flags.partial_order)).unwrap();
    writeln!(text, "quasi-tree: {}", yes(flags.quasi_tree)).unwrap();
    writeln!(text, "S4.1: {}", yes(flags.s41)).unwrap();
    writeln!(text, "S4.1.2: {}", yes(flags.s412)).unwrap();
    let mut value = json!({
        "size": f.size(),
        "flags": {
            "rooted": flags.rooted,
            "partial_order": flags.partial_order,
            "quasi_tree": flags.quasi_tree,
            "tree": flags.tree,
            "s41": flags.s41,
            "s412": flags.s412,
        },
    });
    if f.require_rooted_s41().is_err() {
        writeln!(text, "not a rooted S4.1-frame: roach classes do not apply").unwrap();
        return Ok((0, ctx.emit(value, text)));
    }

    let mut classes = Vec::new();
    for n in 1..=5 {
        let cert = splitting_certificate(&f, n)?;
        match &cert {
            Some(c) => writeln!(text, "R{n}: yes (s = {})", f.label(c.s)).unwrap(),
            None => writeln!(text, "R{n}: no").unwrap(),
        }
        classes.push(json!({ "n": n, "member": cert.is_some(), "s": cert.as_ref().map(|c| c.s) }));
    }
    let rank = roach_rank(&f)?;
    match rank {
        Some(r) => writeln!(text, "roach rank: {r}").unwrap(),
        None => writeln!(text, "roach rank: none (not a roach)").unwrap(),
    }
    let willow = is_willow_tree(&f)?;
    match &willow {
        Some(e) => writeln!(
            text,
            "willow tree: yes (s = {}, body {})",
            f.label(e.certificate.s),
            show_set(&f, e.body)
        )
        .unwrap(),
        None => writeln!(text, "willow tree: no").unwrap(),
    }
    let two = is_2_roach(&f)?;
    let witness = if two.is_none() {
        let w = minimal_forbidden_witness(&f)?;
        writeln!(
            text,
            "not a 2-roach; witness available: {} from the subframe generated by {}",
            w.which,
            f.label(w.generator)
        )
        .unwrap();
        Some(json!({ "which": w.which, "generator": w.generator }))
    } else {
        writeln!(text, "2-roach: yes").unwrap();
        None
    };
    value["roach_classes"] = Value::from(classes);
    value["roach_rank"] = json!(rank);
    value["two_roach"] = json!(two.is_some());
    value["willow"] = json!(willow.map(|e| json!({ "s": e.certificate.s, "body": e.body })));
    value["witness"] = json!(witness);
    Ok((0, ctx.emit(value, text)))
}

fn witness(ctx: &mut Ctx, spec: &str) -> CmdResult {
    let f = ctx.frame("<FRAME>", spec)?;
    let w = minimal_forbidden_witness(&f)?;
    let value = json!({
        "which": w.which,
        "generator": w.generator,
        "generator_label": f.label(w.generator),
        "embedding": w.embedding,
        "map": w.morphism.map,
        "verified": w.verify(&f),
    });
    // The witness is always printed as JSON.
    Ok((0, format!("{}\n", serde_json::to_string_pretty(&value).expect("JSON values serialize"))))
}

fn morphism_find(ctx: &mut Ctx, source: &str, target: &str) -> CmdResult {
    let s = ctx.frame("--source", source)?;
    let t = ctx.frame("--target", target)?;
    match find_onto_p_morphism(&s, &t)? {
        Some(m) => {
            let text = format!("{}\n", show_map(&m));
            Ok((0, ctx.emit(json!({ "map": m.map }), text)))
        }
        None => Ok((0, ctx.emit(json!({ "map": null }), "none\n".into()))),
    }
}

fn permissible(ctx: &mut Ctx, config: &str, host: &str) -> CmdResult {
    let c = ctx.frame("--config", config)?;
    let h = ctx.frame("--host", host)?;
    match is_permissible(&c, &h)? {
        Some(p) => {
            let text = format!(
                "permissible: the subframe generated by {} maps onto it ({})\n",
                h.label(p.generator),
                show_map(&p.morphism)
            );
            let value = json!({
                "permissible": true,
                "generator": p.generator,
                "embedding": p.embedding,
                "map": p.morphism.map,
            });
            Ok((0, ctx.emit(value, text)))
        }
        None => Ok((0, ctx.emit(json!({ "permissible": false }), "forbidden\n".into()))),
    }
}

fn eval(ctx: &mut Ctx, spec: &str, formula: &str, valuation: Option<&str>) -> CmdResult {
    let f = ctx.frame("<FRAME>", spec)?;
    let phi = formula_arg(formula)?;
    let val = match valuation {
        None => Valuation::new(),
        Some(v) => {
            let text = if Path::new(v).exists() {
                std::fs::read_to_string(v).with_context(|| format!("reading {v}"))?
            } else {
                v.to_string()
            };
            serde_json::from_str(&text).map_err(|e| usage("--valuation", e))?
        }
    };
    let model = Model::new(f.clone(), val)?;
    let ext = model.extension(&phi);
    let value = json!({
        "formula": phi.to_string(),
        "extension": ext,
        "labels": labels_json(&f, ext.iter()),
        "true_everywhere": ext == f.all(),
    });
    Ok((0, ctx.emit(value, format!("[[{phi}]] = {}\n", show_set(&f, ext)))))
}

fn validate(ctx: &mut Ctx, spec: &str, formula: &str, budget: u64) -> CmdResult {
    let f = ctx.frame("<FRAME>", spec)?;
    let phi = formula_arg(formula)?;
    match find_refutation(&f, &phi, budget)? {
        None => Ok((0, ctx.emit(json!({ "valid": true }), "valid\n".into()))),
        Some(r) => {
            let text = format!(
                "refuted at {} under {}\n",
                f.label(r.world),
                serde_json::to_string(&r.valuation).expect("valuations serialize")
            );
            let value = json!({ "valid": false, "world": r.world, "valuation": r.valuation });
            Ok((0, ctx.emit(value, text)))
        }
    }
}

fn unravel(ctx: &mut Ctx, spec: &str, mode: UnravelMode) -> CmdResult {
    let f = ctx.frame("<FRAME>", spec)?;
    let r: UnravelResult = match mode {
        UnravelMode::QuasiTree => unravel_to_quasi_tree(&f)?,
        UnravelMode::Willow => roach_to_willow(&f)?,
    };
    let mut value = json!({ "tree": frame_to_value(&r.tree), "map": r.morphism.map });
    if let Some((new_s, old_s)) = r.splitting_point {
        value["splitting_point"] = json!({ "tree": new_s, "input": old_s });
    }
    Ok((0, format!("{}\n", serde_json::to_string(&value).expect("JSON values serialize"))))
}

fn decide(ctx: &mut Ctx, formula: &str, bound: usize) -> CmdResult {
    let phi = formula_arg(formula)?;
    match decide_lr2(&phi, bound)? {
        Verdict::Refuted { model, world } => {
            let frame = frame_to_value(&model.frame);
            let text = format!(
                "Refuted at world {world} of a {}-world 2-roach\nframe: {}\nvaluation: {}\n",
                model.frame.size(),
                frame,
                serde_json::to_string(&model.valuation).expect("valuations serialize")
            );
            let value = json!({
                "verdict": "refuted",
                "world": world,
                "frame": frame,
                "valuation": model.valuation,
            });
            Ok((0, ctx.emit(value, text)))
        }
        Verdict::NoCountermodelUpTo(n) => {
            let text = format!("No countermodel among 2-roaches with at most {n} worlds\n");
            Ok((0, ctx.emit(json!({ "verdict": "no-countermodel", "bound": n }), text)))
        }
    }
}

fn enumerate(ctx: &mut Ctx, size: usize, filter: &str) -> CmdResult {
    let filter: FrameFilter = filter.parse().map_err(|e| usage("--filter", e))?;
    let frames = enumerate_frames(size, filter)?;
    let values: Vec<Value> = frames.iter().map(frame_to_value).collect();
    let mut text = format!("{} frames\n", frames.len());
    for v in &values {
        writeln!(text, "{v}").unwrap();
    }
    Ok((0, ctx.emit(Value::from(values), text)))
}

fn ordinal_classify(ctx: &mut Ctx, text: &str) -> CmdResult {
    let gamma = ordinal_arg(text)?;
    let c = classify_beta(&gamma)?;
    let mut out = format!("gamma = {gamma}\n");
    let mut value = json!({ "ordinal": gamma.to_string(), "logic": c.logic.to_string(), "id": c.logic });
    match &c.tear_off {
        Some(t) => {
            let power = Ordinal::omega_pow(t.alpha1.clone());
            let rebuilt = (t.rest.clone() + Ordinal::one()) + power.clone();
            writeln!(out, "tear-off: gamma' = {}, alpha_1 = {}", t.rest, t.alpha1).unwrap();
            writeln!(out, "check: (gamma' + 1) + {power} = {rebuilt}").unwrap();
            value["tear_off"] = json!({ "rest": t.rest.to_string(), "alpha1": t.alpha1.to_string() });
        }
        None => writeln!(out, "compact: the compactification is the space itself").unwrap(),
    }
    writeln!(out, "logic: {}", c.logic).unwrap();
    if let LogicId::UnknownConjecturedLInf { note } = &c.logic {
        writeln!(out, "note: {note}").unwrap();
    }
    Ok((0, ctx.emit(value, out)))
}

fn selftest(ctx: &mut Ctx, args: SelftestArgs) -> CmdResult {
    let mutation = match args.mutate {
        None => Mutation::None,
        Some(MutateArg::Forth) => Mutation::SkipForth,
    };
    let reports = census::run(args.only.as_deref(), mutation).map_err(|e| usage("--only", e))?;
    let all_passed = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        writeln!(
            text,
            "{verdict} {} ({} cases, {} failures, {} ms)",
            r.id, r.checked, r.failure_count, r.elapsed_ms
        )
        .unwrap();
        for f in &r.failures {
            writeln!(text, "    {f}").unwrap();
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(text, "{passed}/{} criteria passed", reports.len()).unwrap();
    let value = serde_json::to_value(&reports).map_err(|e| anyhow!(e))?;
    Ok((if all_passed { 0 } else { 1 }, ctx.emit(value, text)))
}
