use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use demazure::dual::{CohStable, KStable, Provenance, StructureTable};
use demazure::fga::{Fga, Law, QElem};
use demazure::report::DiscrepancyReport;
use demazure::root_system::{Lattice, WeylElement};
use demazure::session::{DatumSpec, OutputFormat, Session, SessionConfig};
use demazure::verify::{run_suite, CheckResult, Suite};
use demazure::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "demazure", version, about = "Structure constants, stable-basis constants and restriction coefficients in the formal affine Demazure algebra")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Products of dual classes: Z*_u Z*_v = sum_w c^w_{u,v} Z*_w
    Mult {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        /// Also run the oracle and report disagreements
        #[arg(long)]
        check: bool,
    },
    /// Value of the class Z*_w at the fixed point v
    Restrict {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        w: String,
        #[arg(long)]
        v: String,
    },
    /// Structure constants of the stable bases
    Stab {
        variant: StabVariant,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Compare the closed formula against the oracle
        #[arg(long)]
        check: bool,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: Common,
        /// relations | leibniz | duality | worked-examples | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StabVariant {
    Coh,
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Cartan type such as A2, B3, G2
    #[arg(long = "type", default_value = "A2", conflicts_with = "cartan")]
    ty: String,
    /// JSON file with a Cartan matrix
    #[arg(long)]
    cartan: Option<PathBuf>,
    /// simply-connected (sc) or adjoint (ad)
    #[arg(long, default_value = "sc")]
    lattice: String,
    /// additive or multiplicative
    #[arg(long)]
    fgl: Option<String>,
    /// x | y | t | tau | su | custom:FILE
    #[arg(long, default_value = "x")]
    family: String,
    /// lexmin | jcompat:J | file:PATH
    #[arg(long, default_value = "lexmin")]
    words: String,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn config(&self, family: Option<&str>) -> Result<SessionConfig, Error> {
        let datum = match &self.cartan {
            Some(p) => DatumSpec::CartanFile(p.clone()),
            None => DatumSpec::Type(self.ty.clone()),
        };
        let law = self.fgl.as_deref().map(str::parse::<Law>).transpose()?;
        Ok(SessionConfig {
            datum,
            lattice: self.lattice.parse::<Lattice>()?,
            law,
            family: family.unwrap_or(&self.family).to_string(),
            words: self.words.clone(),
            output: match self.out {
                Out::Text => OutputFormat::Text,
                Out::Json => OutputFormat::Json,
            },
            jobs: self.jobs,
        })
    }
}

/// What a command produced: stdout text, and whether a discrepancy was found.
struct Outcome {
    stdout: String,
    discrepancies: DiscrepancyReport,
    failed_checks: bool,
}

fn to_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn element(session: &Session, s: &str) -> Result<WeylElement, Error> {
    session.basis.group().parse(s)
}

fn show(session: &Session, w: WeylElement) -> String {
    let g = session.basis.group();
    let s = session.basis.word(w).format(g.rank());
    if s.is_empty() {
        "e".into()
    } else {
        s
    }
}

fn value_json(f: &Fga, q: &QElem) -> serde_json::Value {
    f.to_json(q)
}

fn mult(common: &Common, u: Option<String>, v: Option<String>, check: bool) -> Result<Outcome, Error> {
    let session = common.config(None)?.build()?;
    let zb = &session.basis;
    let g = zb.group();
    let us: Vec<WeylElement> = match &u {
        Some(s) => vec![element(&session, s)?],
        None => g.elements().collect(),
    };
    let vs: Vec<WeylElement> = match &v {
        Some(s) => vec![element(&session, s)?],
        None => g.elements().collect(),
    };
    let pairs: Vec<(WeylElement, WeylElement)> = us.iter().flat_map(|&a| vs.iter().map(move |&b| (a, b))).collect();
    let table = StructureTable::compute(zb, Provenance::Formula, Some(pairs.clone()))?;
    let discrepancies = if check {
        let oracle = StructureTable::compute(zb, Provenance::Oracle, Some(pairs))?;
        table.diff(&oracle, zb)
    } else {
        DiscrepancyReport::new()
    };
    let stdout = match session.config.output {
        OutputFormat::Text => table.to_text(zb),
        OutputFormat::Json => to_string(&table.to_json(zb)),
    };
    Ok(Outcome { stdout, discrepancies, failed_checks: false })
}

fn restrict(common: &Common, w: &str, v: &str) -> Result<Outcome, Error> {
    let session = common.config(None)?.build()?;
    let (we, ve) = (element(&session, w)?, element(&session, v)?);
    let f = &session.fga;
    let value = demazure::dual::restriction_coefficient(&session.basis, we, ve);
    let stdout = match session.config.output {
        OutputFormat::Text => format!("{}\n", f.pretty(&value)),
        OutputFormat::Json => to_string(&json!({
            "w": show(&session, we),
            "v": show(&session, ve),
            "family": session.family.name,
            "backend": f.backend().to_string(),
            "value": value_json(f, &value),
        })),
    };
    Ok(Outcome { stdout, discrepancies: DiscrepancyReport::new(), failed_checks: false })
}

fn stab(common: &Common, variant: StabVariant, u: &str, v: &str, check: bool) -> Result<Outcome, Error> {
    let family = match variant {
        StabVariant::Coh => "t",
        StabVariant::K => "tau",
    };
    let session = common.config(Some(family))?.build()?;
    let (ue, ve) = (element(&session, u)?, element(&session, v)?);
    let f = session.fga.clone();
    let g = f.group().clone();
    let mut report = DiscrepancyReport::new();
    let values = match variant {
        StabVariant::Coh => {
            let st = CohStable::new(f.clone())?;
            if check {
                st.constants(ue, ve, &mut report)?
            } else {
                st.constants_oracle(ue, ve)?
            }
        }
        StabVariant::K => {
            let st = KStable::new(f.clone())?;
            if check {
                st.constants(ue, ve, &mut report)?
            } else {
                st.constants_oracle(ue, ve)?
            }
        }
    };
    let rows: Vec<(WeylElement, &QElem)> = g.elements().zip(values.iter()).filter(|(_, c)| !c.is_zero()).collect();
    let stdout = match session.config.output {
        OutputFormat::Text => rows.iter().map(|(w, c)| format!("{} : {}\n", show(&session, *w), f.pretty(c))).collect(),
        OutputFormat::Json => to_string(&serde_json::Value::Array(
            rows.iter()
                .map(|(w, c)| {
                    json!({
                        "u": show(&session, ue),
                        "v": show(&session, ve),
                        "w": show(&session, *w),
                        "family": family,
                        "backend": f.backend().to_string(),
                        "value": value_json(&f, c),
                    })
                })
                .collect(),
        )),
    };
    Ok(Outcome { stdout, discrepancies: report, failed_checks: false })
}

fn verify(common: &Common, suite: &str) -> Result<Outcome, Error> {
    let suite: Suite = suite.parse()?;
    let session = common.config(None)?.build()?;
    let results: Vec<CheckResult> = run_suite(&session.basis, suite)?;
    let failed = results.iter().any(|r| !r.passed);
    let stdout = match session.config.output {
        OutputFormat::Text => results
            .iter()
            .map(|r| {
                let status = if r.passed { "PASS" } else { "FAIL" };
                if r.passed || r.detail.is_empty() {
                    format!("{status} {}\n", r.name)
                } else {
                    format!("{status} {}: {}\n", r.name, r.detail)
                }
            })
            .collect(),
        OutputFormat::Json => to_string(&serde_json::to_value(&results)?),
    };
    Ok(Outcome { stdout, discrepancies: DiscrepancyReport::new(), failed_checks: failed })
}

fn common(cmd: &Cmd) -> &Common {
    match cmd {
        Cmd::Mult { common, .. } | Cmd::Restrict { common, .. } | Cmd::Stab { common, .. } | Cmd::Verify { common, .. } => {
            common
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = common(&cli.cmd);
    if let Some(n) = c.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let json_out = matches!(c.out, Out::Json);
    let result = match &cli.cmd {
        Cmd::Mult { common, u, v, check } => mult(common, u.clone(), v.clone(), *check),
        Cmd::Restrict { common, w, v } => restrict(common, w, v),
        Cmd::Stab { variant, common, u, v, check } => stab(common, *variant, u, v, *check),
        Cmd::Verify { common, suite } => verify(common, suite),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.discrepancies.is_empty() {
                if json_out {
                    eprintln!("{}", serde_json::to_string_pretty(&out.discrepancies).expect("serializable"));
                } else {
                    eprint!("{}", out.discrepancies);
                }
                return ExitCode::from(2);
            }
            if out.failed_checks {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Error::Consistency(msg)) => {
            eprintln!("error: internal consistency failure: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
