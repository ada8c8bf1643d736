//! Command-line front end. Every subcommand reads a directive file (or a
//! formula), calls one library operation and prints the result.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use argq::bipolar::{self, BipolarNet, DefeasibleTheory};
use argq::cdnet::{self, CDNetwork};
use argq::io::{frame_text, labelling_entries, Document};
use argq::kleene::{equational_extensions, parse_formula, Formula};
use argq::monadic::{self, parse_monadic, parse_s5, MFormula};
use argq::pipeline::{self, InstantiatedFrame};
use argq::topnet::{self, Policy};
use argq::{dot, ArgFrame, Labelling, Tri, Valuation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "argq", version, about = "Semi-instantiated argumentation networks")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plain frames.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Frames containing the truth node.
    #[command(subcommand)]
    Topnet(TopnetCmd),
    /// Networks with joint and disjunctive attacks.
    #[command(subcommand)]
    Cd(CdCmd),
    /// Boolean attack formations.
    #[command(subcommand)]
    Baf(BafCmd),
    /// Instantiated frames.
    #[command(subcommand)]
    Inst(InstCmd),
    /// Monadic predicate logic.
    #[command(subcommand)]
    Mpl(NfCmd),
    /// Modal logic S5.
    #[command(subcommand)]
    S5(NfCmd),
    /// Defeasible theories.
    #[command(subcommand)]
    Defeasible(DefeasibleCmd),
    /// Graphviz export.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Subcommand)]
enum FrameCmd {
    /// Complete labellings.
    Ext { file: PathBuf },
    /// The grounded labelling.
    Grounded { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TopOption {
    I,
    Ii,
    Iii,
    Iv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Strict,
    Lenient,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Strict => Policy::STRICT,
            PolicyArg::Lenient => Policy::LENIENT,
        }
    }
}

#[derive(Subcommand)]
enum TopnetCmd {
    /// Extensions under one of the four readings of the truth node.
    Ext {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "iv")]
        option: TopOption,
        #[arg(long, value_enum, default_value = "lenient")]
        policy: PolicyArg,
    },
}

#[derive(Subcommand)]
enum CdCmd {
    /// CD-extensions by filtering all labellings.
    Ext { file: PathBuf },
    /// Replace joint attacks by fresh auxiliary nodes and print the frame.
    Reduce { file: PathBuf },
    /// Labellings under the single-attack realizations of every set attack.
    Np {
        file: PathBuf,
        /// Keep only labellings without undecided nodes.
        #[arg(long)]
        stable: bool,
    },
}

#[derive(Subcommand)]
enum BafCmd {
    /// Print the formation of a formula as a frame and as DOT.
    Build { formula: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    Prop,
    Monadic,
    S5,
}

#[derive(Args)]
struct InstArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "prop")]
    logic: Logic,
    #[arg(long, value_enum, default_value = "lenient")]
    policy: PolicyArg,
    /// Monadic only: drop valuations in which no type is realized.
    #[arg(long)]
    nonempty: bool,
}

#[derive(Subcommand)]
enum InstCmd {
    /// Valuations whose induced labelling is legitimate.
    Oracle(InstArgs),
    /// Three-valued solutions of the node equations.
    Equational(InstArgs),
    /// Complete labellings of the two-state frame with pattern attacks.
    Pattern(InstArgs),
    /// The syntactic route through attack formations.
    Pipeline(InstArgs),
}

#[derive(Subcommand)]
enum NfCmd {
    /// Normal form of a closed formula.
    Nf { formula: String },
}

#[derive(Subcommand)]
enum DefeasibleCmd {
    /// The compiled network.
    Compile { file: PathBuf },
    /// Ground propagation from the truth node, with its trace.
    Ground { file: PathBuf },
    /// Labellings passing the case table.
    Ext { file: PathBuf },
    /// Path counts from the truth node by length.
    DTable {
        file: PathBuf,
        node: String,
        /// Occurrences allowed per node; defaults to the node count plus one.
        #[arg(long)]
        max: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    /// DOT rendering of a frame file, or of a theory with `--theory`.
    Dot {
        file: PathBuf,
        #[arg(long)]
        theory: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn document(path: &Path) -> Result<Document> {
    Ok(Document::parse(&read(path)?)?)
}

fn theory_net(path: &Path) -> Result<BipolarNet> {
    Ok(bipolar::compile_theory(&DefeasibleTheory::parse(&read(path)?)?)?)
}

fn entries(lam: &Labelling) -> Value {
    json!(labelling_entries(lam))
}

fn value_text(v: Tri) -> &'static str {
    v.label()
}

struct Out {
    json: bool,
}

impl Out {
    fn labellings(&self, ls: &[Labelling]) {
        if self.json {
            println!("{}", Value::Array(ls.iter().map(entries).collect()));
        } else {
            println!("{} labelling(s)", ls.len());
            for l in ls {
                println!("{l}");
            }
        }
    }

    fn pairs(&self, ps: &[(Valuation, Labelling)]) {
        if self.json {
            let v: Vec<Value> =
                ps.iter().map(|(m, l)| json!({"valuation": entries(m), "labelling": entries(l)})).collect();
            println!("{}", Value::Array(v));
        } else {
            println!("{} extension(s)", ps.len());
            for (m, l) in ps {
                println!("{m} => {l}");
            }
        }
    }
}

/// Propositional instantiated frame for any logic, plus the monadic
/// non-emptiness constraint when requested.
fn propositional(doc: &Document, args: &InstArgs) -> Result<(InstantiatedFrame, Option<Formula>)> {
    let frame = doc.frame()?;
    Ok(match args.logic {
        Logic::Prop => (doc.instantiated()?, None),
        Logic::Monadic => {
            let inst = doc.monadic()?;
            let n = inst.values().flat_map(MFormula::predicates).collect::<BTreeSet<_>>().len();
            let prop = monadic::propositionalize_instantiation(&inst)?;
            (InstantiatedFrame::new(frame, prop)?, args.nonempty.then(|| monadic::domain_nonempty(n)))
        }
        Logic::S5 => {
            let prop = monadic::propositionalize_s5_instantiation(&doc.s5()?)?;
            (InstantiatedFrame::new(frame, prop)?, None)
        }
    })
}

fn keep_nonempty(pairs: Vec<(Valuation, Labelling)>, guard: &Option<Formula>) -> Vec<(Valuation, Labelling)> {
    match guard {
        None => pairs,
        Some(g) => pairs.into_iter().filter(|(m, _)| g.eval(m).map_or(true, |v| v != Tri::Zero)).collect(),
    }
}

fn inst_cmd(cmd: InstCmd, out: &Out) -> Result<()> {
    match cmd {
        InstCmd::Oracle(a) => {
            let (inst, guard) = propositional(&document(&a.file)?, &a)?;
            out.pairs(&keep_nonempty(pipeline::oracle_extensions(&inst), &guard));
        }
        InstCmd::Equational(a) => {
            let (inst, guard) = propositional(&document(&a.file)?, &a)?;
            let pairs = equational_extensions(&inst)
                .into_iter()
                .map(|m| Ok((inst.labelling_under(&m)?, m)))
                .map(|r: Result<_>| r.map(|(l, m)| (m, l)))
                .collect::<Result<Vec<_>>>()?;
            out.pairs(&keep_nonempty(pairs, &guard));
        }
        InstCmd::Pattern(a) => {
            let doc = document(&a.file)?;
            let frame = match a.logic {
                Logic::Monadic => pipeline::monadic_pattern_network(&doc.frame()?, &doc.monadic()?)?.0,
                Logic::Prop => pipeline::dnf_pattern_network(&pipeline::to_two_state(&doc.instantiated()?)?)?,
                Logic::S5 => bail!("pattern attacks are defined for propositional and monadic instantiations"),
            };
            out.labellings(&argq::frames::enumerate_complete_labellings(&frame));
        }
        InstCmd::Pipeline(a) => {
            let (inst, guard) = propositional(&document(&a.file)?, &a)?;
            out.pairs(&keep_nonempty(pipeline::pipeline_extensions(&inst, a.policy.into())?, &guard));
        }
    }
    Ok(())
}

fn nf_cmd(logic: Logic, formula: &str, out: &Out) -> Result<()> {
    let bits = |g: &monadic::TypeSet| g.iter().map(|t| monadic::bits(t)).collect::<Vec<_>>();
    match logic {
        Logic::Monadic => {
            let phi = parse_monadic(formula)?;
            let preds: Vec<String> = phi.predicates().into_iter().collect();
            let consts: Vec<String> = phi.constants().into_iter().collect();
            let nf = monadic::normal_form_with_constants(&phi, &preds, &consts)?;
            let prop = monadic::propositionalize(&nf, preds.len());
            if out.json {
                let disjuncts: Vec<Value> =
                    nf.iter().map(|(g, beta)| json!({"types": bits(g), "constants": beta})).collect();
                println!("{}", json!({"predicates": preds, "disjuncts": disjuncts, "formula": prop.to_string()}));
            } else {
                println!("predicates: {}", preds.join(", "));
                for (g, beta) in &nf {
                    let lits: Vec<String> =
                        beta.iter().map(|(a, b)| if *b { a.clone() } else { format!("¬{a}") }).collect();
                    println!("types {{{}}} {}", bits(g).join(", "), lits.join(" "));
                }
                println!("{prop}");
            }
        }
        Logic::S5 => {
            let phi = parse_s5(formula)?;
            let atoms: Vec<String> = phi.atoms().into_iter().collect();
            let nf = monadic::s5_normal_form(&phi, &atoms)?;
            let prop = monadic::propositionalize_s5(&nf, &atoms);
            if out.json {
                let disjuncts: Vec<Value> =
                    nf.iter().map(|(w, g)| json!({"actual": monadic::bits(w), "worlds": bits(g)})).collect();
                println!("{}", json!({"atoms": atoms, "disjuncts": disjuncts, "formula": prop.to_string()}));
            } else {
                println!("atoms: {}", atoms.join(", "));
                for (w, g) in &nf {
                    println!("actual {} worlds {{{}}}", monadic::bits(w), bits(g).join(", "));
                }
                println!("{prop}");
            }
        }
        Logic::Prop => unreachable!("no propositional normal form command"),
    }
    Ok(())
}

/// Labelling without the auxiliary nodes of compiled rules.
fn literals_only(net: &BipolarNet, lam: &Labelling) -> Labelling {
    lam.restrict(|n| !net.aux().iter().any(|z| n == z || net.partner(z) == Some(n)))
}

fn defeasible_cmd(cmd: DefeasibleCmd, out: &Out) -> Result<()> {
    match cmd {
        DefeasibleCmd::Compile { file } => {
            let net = theory_net(&file)?;
            let edges =
                |s: &BTreeSet<(String, String)>| s.iter().map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>();
            if out.json {
                println!(
                    "{}",
                    json!({"nodes": net.nodes(), "strict": edges(net.strict()), "defeasible": edges(net.defeasible())})
                );
            } else {
                println!("nodes: {}", net.nodes().iter().cloned().collect::<Vec<_>>().join(" "));
                for e in edges(net.strict()) {
                    println!("strict {e}");
                }
                for e in edges(net.defeasible()) {
                    println!("defeasible {e}");
                }
            }
        }
        DefeasibleCmd::Ground { file } => {
            let net = theory_net(&file)?;
            let g = bipolar::ground_labelling(&net);
            let lam = literals_only(&net, &g.labelling);
            if out.json {
                println!("{}", json!({"labelling": entries(&lam), "d": g.d, "trace": g.trace}));
            } else {
                println!("{lam}");
                for (i, s) in g.trace.iter().enumerate() {
                    let assigned: Vec<String> =
                        s.assigned.iter().map(|(n, v)| format!("{n}={}", value_text(*v))).collect();
                    let note = if s.overridden { " (overridden)" } else { "" };
                    println!("{:>3}. {} D={} from [{}]{note}", i + 1, assigned.join(" "), s.d, s.from.join(", "));
                }
            }
        }
        DefeasibleCmd::Ext { file } => {
            let net = theory_net(&file)?;
            let ls: BTreeSet<Labelling> = bipolar::cg_labellings(&net).iter().map(|l| literals_only(&net, l)).collect();
            out.labellings(&ls.into_iter().collect::<Vec<_>>());
        }
        DefeasibleCmd::DTable { file, node, max } => {
            let net = theory_net(&file)?;
            let cap = max.unwrap_or(net.nodes().len() + 1);
            let table = bipolar::d_table(&net, &node, cap);
            let idx = bipolar::d_index(&net, &node);
            if out.json {
                println!("{}", json!({"table": table, "index": idx}));
            } else {
                match idx {
                    Some(d) => println!("D({node}) = ({}, {})", d.d1, d.d2),
                    None => println!("D({node}) undefined"),
                }
                for (len, count) in table {
                    println!("length {len}: {count}");
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let out = Out { json: cli.json };
    match cli.command {
        Command::Frame(FrameCmd::Ext { file }) => {
            out.labellings(&argq::frames::enumerate_complete_labellings(&document(&file)?.frame()?))
        }
        Command::Frame(FrameCmd::Grounded { file }) => {
            out.labellings(&[argq::frames::grounded_labelling(&document(&file)?.frame()?)])
        }
        Command::Topnet(TopnetCmd::Ext { file, option, policy }) => {
            let net = document(&file)?.topnet()?;
            let ls = match option {
                TopOption::I => topnet::option_i_extensions(&net),
                TopOption::Ii => topnet::option_ii_extensions(&net),
                TopOption::Iii => topnet::option_iii_extensions(&net),
                TopOption::Iv => topnet::option_iv_extensions(&net, policy.into()),
            };
            out.labellings(&ls);
        }
        Command::Cd(cmd) => cd_cmd(cmd, &out)?,
        Command::Baf(BafCmd::Build { formula }) => {
            let phi = parse_formula(&formula)?;
            let baf = argq::baf::baf_compose(&argq::baf::formula_id(&phi), &phi)?;
            let frame = baf.to_frame()?;
            if out.json {
                println!(
                    "{}",
                    json!({"in": baf.in_node(), "out": baf.out_node(), "frame": frame_text(&frame), "dot": dot::frame_dot(&frame)})
                );
            } else {
                println!("# in {} out {}", baf.in_node(), baf.out_node());
                print!("{}", frame_text(&frame));
                print!("{}", dot::frame_dot(&frame));
            }
        }
        Command::Inst(cmd) => inst_cmd(cmd, &out)?,
        Command::Mpl(NfCmd::Nf { formula }) => nf_cmd(Logic::Monadic, &formula, &out)?,
        Command::S5(NfCmd::Nf { formula }) => nf_cmd(Logic::S5, &formula, &out)?,
        Command::Defeasible(cmd) => defeasible_cmd(cmd, &out)?,
        Command::Export(ExportCmd::Dot { file, theory }) => {
            let text = if theory { dot::bipolar_dot(&theory_net(&file)?) } else { frame_dot_of(&document(&file)?)? };
            print!("{text}");
        }
    }
    Ok(())
}

fn frame_dot_of(doc: &Document) -> Result<String> {
    let frame: ArgFrame = doc.frame()?;
    Ok(dot::frame_dot(&frame))
}

fn cd_cmd(cmd: CdCmd, out: &Out) -> Result<()> {
    match cmd {
        CdCmd::Ext { file } => out.labellings(&cdnet::enumerate_cd_extensions(&document(&file)?.cd_network()?)),
        CdCmd::Reduce { file } => {
            let net: CDNetwork = document(&file)?.cd_network()?;
            let joint = cdnet::rcd_expand(&net);
            let base = ArgFrame::new(net.nodes().iter().cloned(), Vec::<(String, String)>::new())?;
            let reduced = cdnet::eliminate_joint_attacks(&base, &joint)?;
            if out.json {
                let atts: Vec<Value> = reduced.attacks().map(|(a, b)| json!([a, b])).collect();
                println!("{}", json!({"nodes": reduced.nodes(), "attacks": atts}));
            } else {
                print!("{}", frame_text(&reduced));
            }
        }
        CdCmd::Np { file, stable } => {
            let ls = cdnet::np_extensions(&document(&file)?.cd_network()?)?;
            out.labellings(&if stable { cdnet::stable_only(&ls) } else { ls });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<argq::Error>() {
                Some(argq::Error::Parse { .. }) => 2,
                Some(argq::Error::Limit(_)) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
