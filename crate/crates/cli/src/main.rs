//! `dpk3` — exact queries about curve classes on del Pezzo surfaces and
//! the elliptic fibrations they induce on their K3 double covers.
//!
//! One subcommand per library operation; all inputs are flags, there is no
//! configuration file, and the output is byte-deterministic for a given
//! argument vector regardless of thread count. Exit codes: 0 on success,
//! 1 when `verify` finds a failing check, 2 on usage errors.

mod output;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dpk3_core::curves::{
    bisection_classes, enumerate_conic_classes, enumerate_minus_one_classes, enumerate_roots,
    reducible_fiber_pairs, symmetry_representatives, ClassInventory,
};
use dpk3_core::k3::{
    enumerate_fiber_configurations, invariants_of, FiberConfiguration, FiberPattern,
    InvariantRecord, KodairaType, ReducibleCase,
};
use dpk3_core::lattice::ns_lattice_of;
use dpk3_core::picard::{parse_class, DivisorClass};
use dpk3_core::verify::{self, Status};
use dpk3_core::weyl::{weyl_orbit, DEFAULT_ORBIT_CAP};

use output::{to_json, OutputFormat, Table};

#[derive(Parser)]
#[command(name = "dpk3", version, about = "del Pezzo conic bundles and K3 elliptic fibrations")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: OutputFormat,

    /// Worker threads for the enumeration layer (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DegreeArg {
    /// Surface degree d
    #[arg(long)]
    degree: i64,
}

#[derive(Args)]
struct ClassArg {
    /// A divisor class, compact "(l;a1,...)" or symbolic "2L-E1-E2"
    #[arg(long)]
    class: String,
}

#[derive(Subcommand)]
enum Command {
    /// The (-1)-classes of the degree-d surface
    Lines {
        #[command(flatten)]
        degree: DegreeArg,
        /// Print only the number of classes
        #[arg(long)]
        count_only: bool,
    },
    /// The nef conic classes (conic bundles) of the degree-d surface
    Conics {
        #[command(flatten)]
        degree: DegreeArg,
        #[arg(long)]
        count_only: bool,
    },
    /// The roots (square -2, orthogonal to K) of the degree-d surface
    Roots {
        #[command(flatten)]
        degree: DegreeArg,
        #[arg(long)]
        count_only: bool,
    },
    /// Reflection orbit of a class under the simple roots
    Orbit {
        #[command(flatten)]
        degree: DegreeArg,
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        count_only: bool,
    },
    /// Splittings of a conic class into pairs of (-1)-classes
    Pairs {
        #[command(flatten)]
        degree: DegreeArg,
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        count_only: bool,
    },
    /// The (-1)-classes meeting a conic class once (bisections upstairs)
    Bisections {
        #[command(flatten)]
        degree: DegreeArg,
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        count_only: bool,
    },
    /// Orbit representatives of an inventory under index permutation
    Representatives {
        #[command(flatten)]
        degree: DegreeArg,
        /// Which inventory to reduce
        #[arg(long, value_parser = ["lines", "conics", "roots"], default_value = "conics")]
        kind: String,
    },
    /// Kodaira type of the fiber over a given branch pattern
    ClassifyFiber {
        /// Branch multiplicities on a smooth fiber, e.g. 3,1
        #[arg(long, value_delimiter = ',', conflicts_with = "reducible")]
        smooth: Option<Vec<u32>>,
        /// Reducible-fiber case: transverse, one-tangent, two-tangent,
        /// node-on-branch-transverse, node-on-branch-tangent
        #[arg(long)]
        reducible: Option<ReducibleCase>,
    },
    /// Candidate singular-fiber configurations (necessary conditions)
    Configs {
        #[command(flatten)]
        degree: DegreeArg,
        /// Parity invariant (0 only for the quadric base at degree 8)
        #[arg(long, default_value = "1")]
        delta: u8,
        #[arg(long)]
        count_only: bool,
    },
    /// Strictly elliptic invariants (r, a, g, k, base) of one degree
    Invariants {
        #[command(flatten)]
        degree: DegreeArg,
        #[arg(long, default_value = "1")]
        delta: u8,
    },
    /// Invariant Neron-Severi lattice and its discriminant group
    Ns {
        /// Lattice rank r (1..=9)
        #[arg(long, conflicts_with = "degree")]
        rank: Option<usize>,
        /// Surface degree d (rank is then 10 - d)
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long, default_value = "1")]
        delta: u8,
    },
    /// Re-derive every frozen count and table; exit 1 on any failure
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: could not configure {threads} threads: {err}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, cli.format) {
        Ok(Rendered { stdout, exit }) => {
            // a consumer like `head` may close the pipe early; that is not
            // an error and must not change the exit code
            use std::io::Write;
            let mut sink = std::io::stdout().lock();
            match sink.write_all(stdout.as_bytes()).and_then(|()| sink.flush()) {
                Ok(()) => ExitCode::from(exit),
                Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::from(exit),
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(2)
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

struct Rendered {
    stdout: String,
    exit: u8,
}

impl Rendered {
    fn ok(stdout: String) -> Self {
        Self { stdout, exit: 0 }
    }
}

fn run(command: Command, format: OutputFormat) -> dpk3_core::Result<Rendered> {
    match command {
        Command::Lines { degree, count_only } => {
            let inventory = enumerate_minus_one_classes(degree.degree)?;
            Ok(render_inventory(&inventory, format, count_only))
        }
        Command::Conics { degree, count_only } => {
            let inventory = enumerate_conic_classes(degree.degree)?;
            Ok(render_inventory(&inventory, format, count_only))
        }
        Command::Roots { degree, count_only } => {
            let inventory = enumerate_roots(degree.degree)?;
            Ok(render_inventory(&inventory, format, count_only))
        }
        Command::Orbit { degree, class, count_only } => {
            let seed = parse_for_degree(&class.class, degree.degree)?;
            let orbit = weyl_orbit(&seed, DEFAULT_ORBIT_CAP)?;
            let classes: Vec<DivisorClass> = orbit.into_iter().collect();
            Ok(render_classes(degree.degree, "orbit", &classes, format, count_only))
        }
        Command::Pairs { degree, class, count_only } => {
            let conic = parse_for_degree(&class.class, degree.degree)?;
            let pairs = reducible_fiber_pairs(&conic, degree.degree)?;
            Ok(render_pairs(degree.degree, &conic, &pairs, format, count_only))
        }
        Command::Bisections { degree, class, count_only } => {
            let conic = parse_for_degree(&class.class, degree.degree)?;
            let inventory = bisection_classes(&conic, degree.degree)?;
            Ok(render_classes(
                degree.degree,
                "bisection",
                &inventory.classes,
                format,
                count_only,
            ))
        }
        Command::Representatives { degree, kind } => {
            let inventory = match kind.as_str() {
                "lines" => enumerate_minus_one_classes(degree.degree)?,
                "roots" => enumerate_roots(degree.degree)?,
                _ => enumerate_conic_classes(degree.degree)?,
            };
            Ok(render_representatives(&inventory, format))
        }
        Command::ClassifyFiber { smooth, reducible } => {
            let pattern = match (smooth, reducible) {
                (Some(multiplicities), None) => FiberPattern::smooth(multiplicities)?,
                (None, Some(case)) => FiberPattern::reducible(case),
                _ => {
                    return Err(dpk3_core::Error::InvalidPattern(
                        "pass exactly one of --smooth or --reducible".into(),
                    ))
                }
            };
            Ok(render_fiber(&pattern, format))
        }
        Command::Configs { degree, delta, count_only } => {
            let configs = enumerate_fiber_configurations(degree.degree, delta)?;
            Ok(render_configs(degree.degree, delta, &configs, format, count_only))
        }
        Command::Invariants { degree, delta } => {
            let record = invariants_of(degree.degree, delta)?;
            Ok(render_invariants(&record, format))
        }
        Command::Ns { rank, degree, delta } => {
            let rank = match (rank, degree) {
                (Some(rank), _) => rank,
                (None, Some(degree)) if (1..=9).contains(&degree) => (10 - degree) as usize,
                (None, Some(degree)) => {
                    return Err(dpk3_core::Error::InvalidDegree {
                        degree,
                        reason: "expected 1..=9",
                    })
                }
                (None, None) => {
                    return Err(dpk3_core::Error::InvalidInvariants(
                        "pass --rank or --degree".into(),
                    ))
                }
            };
            render_ns(rank, delta, format)
        }
        Command::Verify => Ok(render_verify(format)),
    }
}

fn parse_for_degree(text: &str, degree: i64) -> dpk3_core::Result<DivisorClass> {
    if !(1..=9).contains(&degree) {
        return Err(dpk3_core::Error::InvalidDegree { degree, reason: "expected 1..=9" });
    }
    parse_class(text, (9 - degree) as usize)
}

#[derive(Serialize)]
struct ClassListView<'a> {
    degree: i64,
    kind: &'a str,
    count: usize,
    classes: &'a [DivisorClass],
}

fn render_inventory(inventory: &ClassInventory, format: OutputFormat, count_only: bool) -> Rendered {
    render_classes(
        inventory.degree,
        inventory.kind.label(),
        &inventory.classes,
        format,
        count_only,
    )
}

fn render_classes(
    degree: i64,
    kind: &str,
    classes: &[DivisorClass],
    format: OutputFormat,
    count_only: bool,
) -> Rendered {
    if count_only {
        return Rendered::ok(format!("{}\n", classes.len()));
    }
    let view = ClassListView { degree, kind, count: classes.len(), classes };
    let text = match format {
        OutputFormat::Json => to_json(&view),
        OutputFormat::Csv => class_table(classes).render_csv(),
        OutputFormat::Markdown => class_table(classes).render_markdown(),
        OutputFormat::Plain => class_table(classes)
            .render_plain(&format!("degree={degree} kind={kind} count={}", classes.len())),
    };
    Rendered::ok(text)
}

fn class_table(classes: &[DivisorClass]) -> Table {
    Table {
        header: vec!["class"],
        rows: classes.iter().map(|class| vec![class.to_string()]).collect(),
    }
}

#[derive(Serialize)]
struct PairsView {
    degree: i64,
    conic: String,
    count: usize,
    pairs: Vec<[String; 2]>,
}

fn render_pairs(
    degree: i64,
    conic: &DivisorClass,
    pairs: &[(DivisorClass, DivisorClass)],
    format: OutputFormat,
    count_only: bool,
) -> Rendered {
    if count_only {
        return Rendered::ok(format!("{}\n", pairs.len()));
    }
    let view = PairsView {
        degree,
        conic: conic.to_string(),
        count: pairs.len(),
        pairs: pairs
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect(),
    };
    let table = Table {
        header: vec!["first", "second"],
        rows: pairs
            .iter()
            .map(|(a, b)| vec![a.to_string(), b.to_string()])
            .collect(),
    };
    let text = match format {
        OutputFormat::Json => to_json(&view),
        OutputFormat::Csv => table.render_csv(),
        OutputFormat::Markdown => table.render_markdown(),
        OutputFormat::Plain => table.render_plain(&format!(
            "degree={degree} conic={conic} singular-fibers={}",
            pairs.len()
        )),
    };
    Rendered::ok(text)
}

#[derive(Serialize)]
struct RepresentativeView {
    class: String,
    orbit_size: usize,
}

fn render_representatives(inventory: &ClassInventory, format: OutputFormat) -> Rendered {
    let representatives = symmetry_representatives(inventory);
    let views: Vec<RepresentativeView> = representatives
        .iter()
        .map(|(class, size)| RepresentativeView { class: class.to_string(), orbit_size: *size })
        .collect();
    let table = Table {
        header: vec!["representative", "orbit_size"],
        rows: representatives
            .iter()
            .map(|(class, size)| vec![class.to_string(), size.to_string()])
            .collect(),
    };
    #[derive(Serialize)]
    struct View<'a> {
        degree: i64,
        kind: &'a str,
        count: usize,
        representatives: &'a [RepresentativeView],
    }
    let text = match format {
        OutputFormat::Json => to_json(&View {
            degree: inventory.degree,
            kind: inventory.kind.label(),
            count: views.len(),
            representatives: &views,
        }),
        OutputFormat::Csv => table.render_csv(),
        OutputFormat::Markdown => table.render_markdown(),
        OutputFormat::Plain => table.render_plain(&format!(
            "degree={} kind={} representatives={}",
            inventory.degree,
            inventory.kind.label(),
            views.len()
        )),
    };
    Rendered::ok(text)
}

fn render_fiber(pattern: &FiberPattern, format: OutputFormat) -> Rendered {
    let fiber = pattern.classify();
    #[derive(Serialize)]
    struct View<'a> {
        pattern: &'a FiberPattern,
        #[serde(rename = "type")]
        fiber: KodairaType,
    }
    let text = match format {
        OutputFormat::Json => to_json(&View { pattern, fiber }),
        OutputFormat::Csv => {
            let table = Table {
                header: vec!["pattern", "type"],
                rows: vec![vec![pattern_text(pattern), fiber.to_string()]],
            };
            table.render_csv()
        }
        OutputFormat::Markdown => {
            let table = Table {
                header: vec!["pattern", "type"],
                rows: vec![vec![pattern_text(pattern), fiber.to_string()]],
            };
            table.render_markdown()
        }
        OutputFormat::Plain => format!("{fiber}\n"),
    };
    Rendered::ok(text)
}

fn pattern_text(pattern: &FiberPattern) -> String {
    match pattern {
        FiberPattern::Smooth(partition) => {
            let parts: Vec<String> = partition.iter().map(u32::to_string).collect();
            format!("[{}]", parts.join(","))
        }
        FiberPattern::Reducible(case) => case.token().to_string(),
    }
}

fn render_configs(
    degree: i64,
    delta: u8,
    configs: &[FiberConfiguration],
    format: OutputFormat,
    count_only: bool,
) -> Rendered {
    if count_only {
        return Rendered::ok(format!("{}\n", configs.len()));
    }
    const NOTE: &str = "candidate (necessary conditions)";
    #[derive(Serialize)]
    struct ConfigView<'a> {
        reducible: &'a BTreeMap<KodairaType, usize>,
        smooth: &'a BTreeMap<KodairaType, usize>,
    }
    #[derive(Serialize)]
    struct View<'a> {
        degree: i64,
        delta: u8,
        note: &'static str,
        count: usize,
        configurations: Vec<ConfigView<'a>>,
    }
    let multiset = |counts: &BTreeMap<KodairaType, usize>| -> String {
        if counts.is_empty() {
            return "-".to_string();
        }
        counts
            .iter()
            .map(|(fiber, count)| format!("{count}x{fiber}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let table = Table {
        header: vec!["reducible", "smooth"],
        rows: configs
            .iter()
            .map(|config| {
                vec![
                    multiset(&config.reducible_fibers),
                    multiset(&config.smooth_locus_fibers),
                ]
            })
            .collect(),
    };
    let text = match format {
        OutputFormat::Json => to_json(&View {
            degree,
            delta,
            note: NOTE,
            count: configs.len(),
            configurations: configs
                .iter()
                .map(|config| ConfigView {
                    reducible: &config.reducible_fibers,
                    smooth: &config.smooth_locus_fibers,
                })
                .collect(),
        }),
        OutputFormat::Csv => table.render_csv(),
        OutputFormat::Markdown => table.render_markdown(),
        OutputFormat::Plain => table.render_plain(&format!(
            "degree={degree} delta={delta} configurations={} ({NOTE})",
            configs.len()
        )),
    };
    Rendered::ok(text)
}

fn render_invariants(record: &InvariantRecord, format: OutputFormat) -> Rendered {
    let base = match record.base {
        dpk3_core::k3::BaseSurface::P2 => "P2".to_string(),
        dpk3_core::k3::BaseSurface::P1xP1 => "P1xP1".to_string(),
        dpk3_core::k3::BaseSurface::BlowUp(p) => format!("Bl_{p}(P2)"),
    };
    let table = Table {
        header: vec!["field", "value"],
        rows: vec![
            vec!["degree".into(), record.degree.to_string()],
            vec!["delta".into(), record.delta.to_string()],
            vec!["ns_rank".into(), record.ns_rank.to_string()],
            vec!["length".into(), record.length.to_string()],
            vec!["genus".into(), record.genus.to_string()],
            vec!["rational_count".into(), record.rational_count.to_string()],
            vec!["base".into(), base],
            vec!["elliptic_fibrations".into(), record.elliptic_fibrations.to_string()],
        ],
    };
    let text = match format {
        OutputFormat::Json => to_json(record),
        OutputFormat::Csv => table.render_csv(),
        OutputFormat::Markdown => table.render_markdown(),
        OutputFormat::Plain => table.render_plain(&format!(
            "strictly elliptic invariants for degree {} (delta {})",
            record.degree, record.delta
        )),
    };
    Rendered::ok(text)
}

fn render_ns(rank: usize, delta: u8, format: OutputFormat) -> dpk3_core::Result<Rendered> {
    let gram = ns_lattice_of(rank, delta)?;
    let data = gram.smith_normal_form();
    #[derive(Serialize)]
    struct View<'a> {
        rank: usize,
        delta: u8,
        gram: &'a dpk3_core::GramMatrix,
        factors: &'a [i64],
        length: usize,
        abs_det: i64,
    }
    let view = View {
        rank,
        delta,
        gram: &gram,
        factors: &data.invariant_factors,
        length: data.length,
        abs_det: data.abs_determinant,
    };
    let factor_text = data
        .invariant_factors
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let table = Table {
        header: vec!["field", "value"],
        rows: vec![
            vec!["rank".into(), rank.to_string()],
            vec!["delta".into(), delta.to_string()],
            vec!["gram".into(), gram_text(&gram)],
            vec!["factors".into(), factor_text.clone()],
            vec!["length".into(), data.length.to_string()],
            vec!["abs_det".into(), data.abs_determinant.to_string()],
        ],
    };
    let text = match format {
        OutputFormat::Json => to_json(&view),
        OutputFormat::Csv => table.render_csv(),
        OutputFormat::Markdown => table.render_markdown(),
        OutputFormat::Plain => {
            table.render_plain(&format!("invariant lattice at rank {rank} (delta {delta})"))
        }
    };
    Ok(Rendered::ok(text))
}

fn gram_text(gram: &dpk3_core::GramMatrix) -> String {
    let rows: Vec<String> = gram
        .entries()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn render_verify(format: OutputFormat) -> Rendered {
    let report = verify::run_report();
    let exit = u8::from(!report.passed());
    let stdout = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct View<'a> {
                passed: usize,
                warned: usize,
                failed: usize,
                checks: &'a [verify::Check],
            }
            let (passed, warned, failed) = report.counts();
            to_json(&View { passed, warned, failed, checks: &report.checks })
        }
        OutputFormat::Csv => {
            let table = Table {
                header: vec!["id", "status", "detail"],
                rows: report
                    .checks
                    .iter()
                    .map(|check| {
                        vec![
                            check.id.clone(),
                            match check.status {
                                Status::Pass => "PASS".into(),
                                Status::Warn => "WARN".into(),
                                Status::Fail => "FAIL".into(),
                            },
                            check.detail.clone(),
                        ]
                    })
                    .collect(),
            };
            table.render_csv()
        }
        OutputFormat::Markdown => {
            let table = Table {
                header: vec!["status", "id", "detail"],
                rows: report
                    .checks
                    .iter()
                    .map(|check| {
                        vec![
                            match check.status {
                                Status::Pass => "PASS".into(),
                                Status::Warn => "WARN".into(),
                                Status::Fail => "FAIL".into(),
                            },
                            check.id.clone(),
                            check.detail.clone(),
                        ]
                    })
                    .collect(),
            };
            table.render_markdown()
        }
        OutputFormat::Plain => report.render_plain(),
    };
    Rendered { stdout, exit }
}
