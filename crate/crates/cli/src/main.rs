use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use toppling::bijections::{callan_to_vesztergombi, phi, phi_checked, phi_inverse, vesztergombi_to_callan};
use toppling::characterize::{is_all_r_toppleable, is_p_toppleable, is_rp_toppleable};
use toppling::families::{count_acyclic_orientations, validate_r_placement, AoMode, CallanWord, FamilySpec};
use toppling::harness::{self, Caps, Oracle, PolyKind, Table};
use toppling::polybernoulli::{Method, NPiMethod, ToppleCountMethod};
use toppling::{
    lift, stabilize_passes, stabilize_random, Configuration, FinalState, Permutation, PolyBernoulli,
};

#[derive(Parser)]
#[command(name = "toppling", version, about = "Chip toppling with an extra labeled chip, and poly-Bernoulli numbers")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest n for brute force over S(n,p).
    #[arg(long, global = true, default_value_t = Caps::default().config_n)]
    max_config_n: usize,
    /// Largest n for brute force over S_n.
    #[arg(long, global = true, default_value_t = Caps::default().perm_n)]
    max_perm_n: usize,
    /// Largest edge count for acyclic orientation counts.
    #[arg(long, global = true, default_value_t = Caps::default().ao_edges)]
    max_ao_edges: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stabilize a configuration and print its resultant.
    Topple(ToppleArgs),
    /// Closed-form predicates.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Counts by formula or brute force.
    Count {
        #[command(subcommand)]
        what: CountCmd,
    },
    /// Print a table as CSV or JSON.
    Tables(TablesArgs),
    /// Apply one of the bijections.
    Biject(BijectArgs),
    /// Run every identity and print the report.
    Verify(VerifyArgs),
    /// A single poly-Bernoulli number.
    Polybernoulli(PolyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ToppleArgs {
    /// Configuration literal such as "7,3,1,5,(2,4),6,8".
    #[arg(long, conflicts_with_all = ["perm", "r", "p"])]
    config: Option<String>,
    /// Permutation to lift (with --r and --p).
    #[arg(long, requires_all = ["r", "p"])]
    perm: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Use a random schedule with this seed instead of passes.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the pass trace as JSON.
    #[arg(long, conflicts_with = "seed")]
    trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Whether a configuration is p-toppleable.
    Config {
        #[arg(long)]
        config: String,
    },
    /// Whether pi^(r,p) is p-toppleable.
    Rp {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: usize,
    },
    /// Whether pi^(r,p) is p-toppleable for every r.
    AllR {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        p: usize,
    },
    /// Whether pi is a p-resultant (and, with --r, reachable with chip r).
    Resultant {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RpMethod {
    Delta,
    CSum,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Vesztergombi,
    Callan,
    CallanFirst,
    CallanUnderlinedFirst,
    WindowC,
    ExcedanceSet,
}

#[derive(Clone, Copy, ValueEnum)]
enum AoModeArg {
    All,
    UniqueSinkAnywhere,
    UniqueSinkFixedVertex,
}

#[derive(Subcommand)]
enum CountCmd {
    /// Toppleable configurations of S(n,p).
    Toppleable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Enumerate instead of using the formula.
        #[arg(long)]
        brute: bool,
    },
    /// (r,p)-toppleable permutations of S_n.
    Rp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "delta")]
        method: RpMethod,
    },
    /// Permutations of S_n toppleable at p for every r.
    AllR {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        brute: bool,
    },
    /// Configurations toppling to one resultant of class (i,j).
    Class {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// N_pi(r,p).
    Npi {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: usize,
        /// Use the type-C shortcut (r must be n-p or n-p+1).
        #[arg(long)]
        type_c: bool,
    },
    /// Members of a permutation family.
    Family {
        #[arg(long, value_enum)]
        family: FamilyName,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        o: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Print the members, one per line, before the count.
        #[arg(long)]
        list: bool,
    },
    /// Acyclic orientations of K_{n,k}.
    Ao {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "all")]
        mode: AoModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Which {
    #[value(name = "1a")]
    B,
    #[value(name = "1b")]
    C,
    #[value(name = "2")]
    Toppleable,
    #[value(name = "resultant-fibers")]
    ResultantFibers,
    #[value(name = "T-array")]
    TArray,
    #[value(name = "T-counts")]
    TCounts,
    #[value(name = "Npi")]
    Npi,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// Size: largest index for 1a/1b/2, n otherwise.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Enumerate instead of using formulas (2 and T-counts).
    #[arg(long)]
    brute: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BijectMap {
    /// Callan word (--word, --u, --o) to Vesztergombi permutation.
    #[arg(long)]
    callan_to_vesz: bool,
    /// Vesztergombi permutation (--perm, --u, --o) to Callan word.
    #[arg(long)]
    vesz_to_callan: bool,
    /// Reduce a configuration (--config, optional --perm resultant).
    #[arg(long)]
    phi: bool,
    /// Rebuild a configuration from its reduction (--config, --perm, --p).
    #[arg(long)]
    phi_inverse: bool,
}

#[derive(Args)]
struct BijectArgs {
    #[command(flatten)]
    map: BijectMap,
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    perm: Option<String>,
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    o: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    B,
    C,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    InclusionExclusion,
    Recurrence,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(value_enum, ignore_case = true)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "closed")]
    method: MethodArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let caps = Caps {
        config_n: cli.max_config_n,
        perm_n: cli.max_perm_n,
        ao_edges: cli.max_ao_edges,
    };
    let mut out = io::stdout().lock();
    match run(cli.command, &caps, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("missing required flag --{flag}"))
}

fn perm(s: &str) -> Result<Permutation> {
    s.parse().with_context(|| format!("invalid permutation `{s}`"))
}

fn config(s: &str) -> Result<Configuration> {
    s.parse().with_context(|| format!("invalid configuration `{s}`"))
}

fn run(cmd: Command, caps: &Caps, out: &mut impl Write) -> Result<ExitCode> {
    let pb = PolyBernoulli::new();
    match cmd {
        Command::Topple(a) => topple(a, out)?,
        Command::Check { what } => {
            let v = match what {
                CheckCmd::Config { config: c } => is_p_toppleable(&config(&c)?),
                CheckCmd::Rp { perm: s, r, p } => is_rp_toppleable(&perm(&s)?, r, p)?,
                CheckCmd::AllR { perm: s, p } => is_all_r_toppleable(&perm(&s)?, p)?,
                CheckCmd::Resultant { perm: s, p, r } => {
                    let pi = perm(&s)?;
                    match r {
                        Some(r) => validate_r_placement(&pi, p, r)?,
                        None => toppling::families::is_p_resultant(&pi, p),
                    }
                }
            };
            writeln!(out, "{v}")?;
        }
        Command::Count { what } => count(what, caps, &pb, out)?,
        Command::Tables(a) => tables(a, caps, &pb, out)?,
        Command::Biject(a) => biject(a, out)?,
        Command::Verify(a) => {
            let report = harness::verify_identities(a.n_max, caps);
            match a.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
                Format::Text => {
                    for c in &report.claims {
                        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        let status = match c.status {
                            harness::Status::Match => "match",
                            harness::Status::Mismatch => "MISMATCH",
                            harness::Status::DocumentedDiscrepancy => "documented",
                        };
                        write!(out, "{status:<10} {} [{}]", c.id, params.join(","))?;
                        if c.status != harness::Status::Match {
                            write!(out, " expected {} got {}", c.expected, c.actual)?;
                        }
                        writeln!(out)?;
                    }
                    let s = &report.summary;
                    writeln!(
                        out,
                        "{} claims: {} match, {} mismatch, {} documented",
                        s.total, s.matched, s.mismatched, s.documented
                    )?;
                }
            }
            if !report.ok() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Polybernoulli(a) => {
            let m = match a.method {
                MethodArg::Closed => Method::Closed,
                MethodArg::InclusionExclusion => Method::InclusionExclusion,
                MethodArg::Recurrence => Method::Recurrence,
            };
            let v = match a.kind {
                Kind::B => pb.b_with(a.n, a.k, m),
                Kind::C => pb.c_with(a.n, a.k, m),
            };
            writeln!(out, "{v}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ToppleOutput<'a> {
    resultant: String,
    #[serde(flatten)]
    state: &'a FinalState,
    #[serde(skip_serializing_if = "Option::is_none")]
    topples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a toppling::PassTrace>,
}

fn topple(a: ToppleArgs, out: &mut impl Write) -> Result<()> {
    let c = match (&a.config, &a.perm) {
        (Some(s), None) => config(s)?,
        (None, Some(s)) => lift(&perm(s)?, need(a.r, "r")?, need(a.p, "p")?)?.into_config(),
        _ => bail!("give either --config or --perm with --r and --p"),
    };
    let (fin, trace, topples) = match a.seed {
        Some(seed) => {
            let (f, k) = stabilize_random(&c, seed);
            (f, None, Some(k))
        }
        None => {
            let (f, t) = stabilize_passes(&c);
            (f, Some(t), None)
        }
    };
    let shown_trace = if a.trace { trace.as_ref() } else { None };
    match a.format {
        Format::Text => {
            writeln!(out, "resultant: {}, empty-site: {}", fin.resultant(), fin.empty_site())?;
            if let Some(t) = shown_trace {
                writeln!(out, "{}", serde_json::to_string_pretty(t)?)?;
            }
        }
        Format::Json => {
            let o = ToppleOutput {
                resultant: fin.resultant().to_string(),
                state: &fin,
                topples,
                trace: shown_trace,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&o)?)?;
        }
    }
    Ok(())
}

fn count(what: CountCmd, caps: &Caps, pb: &PolyBernoulli, out: &mut impl Write) -> Result<()> {
    let v: String = match what {
        CountCmd::Toppleable { n, p, brute } => {
            if brute {
                harness::brute_count_toppleable(n, p, Oracle::Simulate, caps)?.to_string()
            } else {
                pb.count_toppleable_configs(n, p)?.to_string()
            }
        }
        CountCmd::Rp { n, p, r, method } => match method {
            RpMethod::Delta => pb.count_rp_toppleable(n, p, r, ToppleCountMethod::Delta)?.to_string(),
            RpMethod::CSum => pb.count_rp_toppleable(n, p, r, ToppleCountMethod::CSum)?.to_string(),
            RpMethod::Brute => harness::brute_t(n, p, r, caps)?.to_string(),
        },
        CountCmd::AllR { n, p, brute } => {
            if brute {
                harness::brute_all_r(n, p, caps)?.to_string()
            } else {
                pb.count_all_r_toppleable(n, p)?.to_string()
            }
        }
        CountCmd::Class { i, j } => pb.count_resultant_class(i, j)?.to_string(),
        CountCmd::Npi { perm: s, r, p, type_c } => {
            let m = if type_c { NPiMethod::TypeC } else { NPiMethod::Delta };
            pb.count_n_pi(&perm(&s)?, r, p, m)?.to_string()
        }
        CountCmd::Family { family, n, k, u, o, r, list } => {
            let spec = match family {
                FamilyName::Vesztergombi => FamilySpec::Vesztergombi { k: need(k, "k")?, n: need(n, "n")? },
                FamilyName::Callan => FamilySpec::Callan { u: need(u, "u")?, o: need(o, "o")? },
                FamilyName::CallanFirst => FamilySpec::CallanFirst {
                    u: need(u, "u")?,
                    o: need(o, "o")?,
                    r: need(r, "r")?,
                },
                FamilyName::CallanUnderlinedFirst => {
                    FamilySpec::CallanUnderlinedFirst { u: need(u, "u")?, o: need(o, "o")? }
                }
                FamilyName::WindowC => FamilySpec::WindowC { n: need(n, "n")?, k: need(k, "k")? },
                FamilyName::ExcedanceSet => FamilySpec::ExcedanceSet { n: need(n, "n")?, k: need(k, "k")? },
            };
            if list {
                let mut c = 0u128;
                for pi in spec.enumerate(caps.perm_n)? {
                    writeln!(out, "{pi}")?;
                    c += 1;
                }
                c.to_string()
            } else {
                spec.count(caps.perm_n)?.to_string()
            }
        }
        CountCmd::Ao { n, k, mode } => {
            let mode = match mode {
                AoModeArg::All => AoMode::All,
                AoModeArg::UniqueSinkAnywhere => AoMode::UniqueSinkAnywhere,
                AoModeArg::UniqueSinkFixedVertex => AoMode::UniqueSinkFixedVertex,
            };
            count_acyclic_orientations(n, k, mode, caps.ao_edges)?.to_string()
        }
    };
    writeln!(out, "{v}")?;
    Ok(())
}

fn tables(a: TablesArgs, caps: &Caps, pb: &PolyBernoulli, out: &mut impl Write) -> Result<()> {
    let table = match a.which {
        Which::B => harness::table_poly_bernoulli(PolyKind::B, a.n.unwrap_or(5), pb),
        Which::C => harness::table_poly_bernoulli(PolyKind::C, a.n.unwrap_or(5), pb),
        Which::Toppleable => harness::table_toppleable(a.n.unwrap_or(6), a.brute, caps, pb)?,
        Which::ResultantFibers => harness::table_resultant_fibers(need(a.n, "n")?, need(a.p, "p")?, caps)?,
        Which::TArray => harness::table_t_array(need(a.n, "n")?, need(a.p, "p")?, caps)?,
        Which::TCounts => harness::table_t_counts(need(a.n, "n")?, a.brute, caps, pb)?,
        Which::Npi => harness::table_n_pi(need(a.n, "n")?, need(a.p, "p")?, need(a.r, "r")?, caps, pb)?,
    };
    match a.format {
        TableFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&table)?)?,
        TableFormat::Csv => write_csv(&table, out)?,
    }
    Ok(())
}

fn write_csv(t: &Table, out: &mut impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![t.corner.clone()];
    header.extend(t.columns.iter().cloned());
    w.write_record(&header)?;
    for row in &t.rows {
        w.write_record(std::iter::once(&row.label).chain(&row.cells))?;
    }
    w.flush()?;
    Ok(())
}

fn biject(a: BijectArgs, out: &mut impl Write) -> Result<()> {
    if a.map.callan_to_vesz {
        let w = CallanWord::new(perm(&need(a.word, "word")?)?, need(a.u, "u")?, need(a.o, "o")?)?;
        let sigma = callan_to_vesztergombi(&w);
        writeln!(out, "{sigma}")?;
    } else if a.map.vesz_to_callan {
        let w = vesztergombi_to_callan(&perm(&need(a.perm, "perm")?)?, need(a.u, "u")?, need(a.o, "o")?)?;
        writeln!(out, "{}", w.word())?;
        writeln!(out, "{}", json!({ "blocks": w.blocks() }))?;
    } else if a.map.phi {
        let c = config(&need(a.config, "config")?)?;
        let (img, pi) = match a.perm {
            Some(s) => {
                let pi = perm(&s)?;
                (phi(&c, &pi)?, pi)
            }
            None => phi_checked(&c)?,
        };
        writeln!(out, "{img}")?;
        writeln!(out, "resultant: {pi}")?;
    } else {
        let c = config(&need(a.config, "config")?)?;
        let pi = perm(&need(a.perm, "perm")?)?;
        writeln!(out, "{}", phi_inverse(&c, &pi, need(a.p, "p")?)?)?;
    }
    Ok(())
}
