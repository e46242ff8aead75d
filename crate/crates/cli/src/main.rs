//! Command-line front end: orchestrates the symbolic identity suites, the
//! numeric certification suites, the term-count tables, wall point clouds,
//! and superpotential listings, and writes versioned reports.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
//! 3 sampling exhaustion.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use pseudotoric::combinat;
use pseudotoric::models::{build_chart, Family, VarietyChart};
use pseudotoric::numsym::{run_numeric_case, Tolerances};
use pseudotoric::symverify::{
    contraction_lemma_check, dlog_identity_check, flag_schubert_variant_check, IdentityVerdict,
};
use pseudotoric::{Error, ExecMode, Result};

#[derive(Parser)]
#[command(
    name = "pseudotoric",
    about = "Verification suites for pseudotoric torus fibrations on flag varieties and quadrics",
    version
)]
struct Cli {
    /// Worker threads (default: available parallelism, or PSEUDOTORIC_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact symbolic verification of the contraction and d log identities.
    Verify {
        /// Family: flag, quadric-even, quadric-odd (default: all three).
        #[arg(long)]
        family: Option<String>,
        /// Flag sizes, a single value or inclusive range like 3..5.
        #[arg(long, default_value = "3..7")]
        n: String,
        /// Quadric sizes, a single value or inclusive range like 2..5.
        #[arg(long, default_value = "2..5")]
        m: String,
        /// Divisor index, `sch`, `rie`, or `all`.
        #[arg(long, default_value = "all")]
        divisor: String,
    },
    /// Numeric certification: Poisson brackets, Lagrangian/special residuals,
    /// horizontal proportionality, symbolic-numeric agreement.
    Numcheck {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "3")]
        n: String,
        #[arg(long, default_value = "2")]
        m: String,
        #[arg(long, default_value = "sch")]
        divisor: String,
        /// Seeded points per case.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Residual tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Facet/term-count tables with decompositions.
    Tables {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "3..10")]
        n: String,
        #[arg(long, default_value = "2..8")]
        m: String,
        /// Output format: text, json, or csv.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Wall point cloud of one non-free component, as CSV.
    Walls {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value = "sch")]
        divisor: String,
        /// Component index into the non-free component list.
        #[arg(long)]
        component: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Explicit superpotential term lists (n = 3 or 4).
    Superpotential {
        #[arg(long)]
        n: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    });
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("cannot parse size range `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![s.trim().parse().map_err(|_| bad())?])
    }
}

fn parse_families(family: &Option<String>) -> Result<Vec<Family>> {
    match family {
        None => Ok(vec![Family::Flag, Family::QuadricEven, Family::QuadricOdd]),
        Some(f) => Ok(vec![f.parse()?]),
    }
}

fn divisors_for(chart: &VarietyChart, spec: &str) -> Result<Vec<usize>> {
    match spec.to_ascii_lowercase().as_str() {
        "all" => Ok(chart.divisor_range().collect()),
        "sch" => Ok(vec![chart.schubert_divisor().j]),
        "rie" => Ok(vec![chart.rietsch_divisor().j]),
        other => {
            let j: usize = other
                .parse()
                .map_err(|_| Error::Config(format!("bad divisor `{other}`")))?;
            chart.divisor(j)?;
            Ok(vec![j])
        }
    }
}

fn exec_mode(threads: Option<usize>) -> ExecMode {
    let n = threads.or_else(|| {
        std::env::var("PSEUDOTORIC_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match n {
        Some(1) => ExecMode::Sequential,
        _ => ExecMode::Parallel,
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn sizes_for(family: Family, n: &str, m: &str) -> Result<Vec<usize>> {
    match family {
        Family::Flag => parse_sizes(n),
        Family::QuadricEven | Family::QuadricOdd => parse_sizes(m),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mode = exec_mode(cli.threads);
    match cli.command {
        Command::Verify {
            family,
            n,
            m,
            divisor,
        } => {
            // Assemble (family, size, check) tasks, then run them in the
            // selected execution mode.
            enum Task {
                Contraction(Family, usize),
                Dlog(Family, usize, usize),
                SchVariant(usize),
            }
            let mut tasks = Vec::new();
            for fam in parse_families(&family)? {
                for size in sizes_for(fam, &n, &m)? {
                    let chart = build_chart(fam, size)?;
                    if fam != Family::QuadricOdd {
                        tasks.push(Task::Contraction(fam, size));
                    }
                    for j in divisors_for(&chart, &divisor)? {
                        tasks.push(Task::Dlog(fam, size, j));
                    }
                    if fam == Family::Flag {
                        tasks.push(Task::SchVariant(size));
                    }
                }
            }
            let verdicts: Vec<Result<IdentityVerdict>> = mode.run(tasks.len(), |i| match tasks[i] {
                Task::Contraction(f, s) => contraction_lemma_check(&build_chart(f, s)?),
                Task::Dlog(f, s, j) => {
                    let chart = build_chart(f, s)?;
                    let d = chart.divisor(j)?;
                    dlog_identity_check(&chart, d)
                }
                Task::SchVariant(s) => flag_schubert_variant_check(&build_chart(Family::Flag, s)?),
            });
            let mut report = String::new();
            let mut all = true;
            for v in verdicts {
                let v = v?;
                all &= v.equal;
                writeln!(report, "{}", serde_json::to_string(&v).unwrap()).unwrap();
            }
            emit(&cli.output, &report)?;
            Ok(all)
        }

        Command::Numcheck {
            family,
            n,
            m,
            divisor,
            samples,
            seed,
            tol,
        } => {
            if samples == 0 {
                return Err(Error::Config("--samples must be positive".into()));
            }
            if !(tol > 0.0) {
                return Err(Error::Config("--tol must be positive".into()));
            }
            let tolerances = Tolerances {
                residual: tol,
                agreement: tol.min(1e-8),
                ..Tolerances::default()
            };
            let mut report = String::new();
            let mut all = true;
            for fam in parse_families(&family)? {
                for size in sizes_for(fam, &n, &m)? {
                    let chart = build_chart(fam, size)?;
                    for j in divisors_for(&chart, &divisor)? {
                        let d = chart.divisor(j)?;
                        for r in run_numeric_case(&chart, d, samples, seed, &tolerances, mode)? {
                            all &= r.pass;
                            writeln!(report, "{}", serde_json::to_string(&r).unwrap()).unwrap();
                        }
                    }
                }
            }
            emit(&cli.output, &report)?;
            Ok(all)
        }

        Command::Tables { family, n, m, format } => {
            let mut rows = Vec::new();
            for fam in parse_families(&family)? {
                rows.extend(combinat::term_count_table(fam, sizes_for(fam, &n, &m)?)?);
            }
            let mut report = String::new();
            match format.as_str() {
                "json" => {
                    for r in &rows {
                        writeln!(report, "{}", serde_json::to_string(r).unwrap()).unwrap();
                    }
                }
                "csv" => {
                    writeln!(report, "family,size,givental,schubert,rietsch").unwrap();
                    for r in &rows {
                        writeln!(
                            report,
                            "{},{},{},{},{}",
                            r.family.as_str(),
                            r.size,
                            r.givental,
                            r.schubert,
                            r.rietsch
                        )
                        .unwrap();
                    }
                }
                "text" => {
                    for r in &rows {
                        writeln!(
                            report,
                            "{} {}: givental {} = {}+{}+{}, schubert {} = {}+{}+{}, rietsch {} = {}+{}+{}",
                            r.family.as_str(),
                            r.size,
                            r.givental,
                            r.givental_parts[0],
                            r.givental_parts[1],
                            r.givental_parts[2],
                            r.schubert,
                            r.schubert_parts[0],
                            r.schubert_parts[1],
                            r.schubert_parts[2],
                            r.rietsch,
                            r.rietsch_parts[0],
                            r.rietsch_parts[1],
                            r.rietsch_parts[2],
                        )
                        .unwrap();
                    }
                }
                other => return Err(Error::Config(format!("unknown format `{other}`"))),
            }
            emit(&cli.output, &report)?;
            Ok(true)
        }

        Command::Walls {
            family,
            n,
            m,
            divisor,
            component,
            samples,
            seed,
        } => {
            let fam: Family = family.parse()?;
            let size = match fam {
                Family::Flag => n.ok_or_else(|| Error::Config("--n required for flag".into()))?,
                _ => m.ok_or_else(|| Error::Config("--m required for quadrics".into()))?,
            };
            let chart = build_chart(fam, size)?;
            let j = *divisors_for(&chart, &divisor)?
                .first()
                .ok_or_else(|| Error::Config("no divisor selected".into()))?;
            let d = chart.divisor(j)?;
            let comps = combinat::nonfree_components(&chart);
            let comp = comps.get(component).ok_or_else(|| {
                Error::Config(format!(
                    "component index {component} out of range 0..{}",
                    comps.len()
                ))
            })?;
            let cloud = combinat::wall_point_cloud(&chart, d, comp, samples, seed)?;
            if let Some(w) = &cloud.warning {
                eprintln!("warning: {w}");
            }
            emit(&cli.output, &cloud.to_csv())?;
            Ok(true)
        }

        Command::Superpotential { n } => {
            let w = combinat::rietsch_superpotential(n)?;
            let mut report = String::new();
            writeln!(report, "{}", serde_json::to_string(&w).unwrap()).unwrap();
            for t in &w.terms {
                writeln!(report, "{}", t.display()).unwrap();
            }
            emit(&cli.output, &report)?;
            Ok(true)
        }
    }
}
