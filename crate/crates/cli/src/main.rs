//! `dtsp`: lower and upper bounds for the Dubins traveling salesman problem.
//!
//! Exit status is 0 on success, 1 for invalid input or a failed check, and
//! 2 for filesystem errors. Files go to `--out-dir`, which defaults to the
//! `DTSP_OUT_DIR` environment variable and then to the current directory.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dtsp_core::gtsp::transform::AtspInstance;
use dtsp_core::gtsp::tsplib::TsplibMatrix;
use dtsp_core::gtsp::{atsp_to_stsp, noon_bean};
use dtsp_core::pipeline::render::{render_tour, write_svg, TourFile};
use dtsp_core::pipeline::report::{self, CompareOptions};
use dtsp_core::pipeline::{
    etsp, generate_instance, lower_bound, lower_instance, upper_bound, upper_instance, HeadingPlacement,
    ProblemInstance, Strategy,
};
use dtsp_core::verify::{interval_suite, transformation_suite, VERIFY_HEADER};
use dtsp_core::{Error, Mode, TurnRadius};

#[derive(Parser)]
#[command(name = "dtsp", version, about = "Lower and upper bounds for the Dubins traveling salesman problem")]
struct Cli {
    /// Directory for written files [env: DTSP_OUT_DIR, default: .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write random instances with targets uniform in a square.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000.0)]
        extent: f64,
        #[arg(long, default_value_t = 100.0)]
        rho: f64,
        /// Seed of the first instance; further instances use the next seeds.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// File and instance name prefix.
        #[arg(long, default_value = "inst")]
        prefix: String,
    },
    /// Lower bound from m uniform heading intervals per target.
    Lower {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Also write the tour as JSON for `plot`.
        #[arg(long)]
        save_tour: bool,
    },
    /// Feasible tour over k fixed headings per target.
    Upper {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = PlacementArg::Endpoints)]
        placement: PlacementArg,
        #[arg(long)]
        save_tour: bool,
    },
    /// Euclidean TSP optimum.
    Etsp {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Batch report: ETSP, lower bounds for every m, and one upper bound.
    Compare {
        #[arg(long, num_args = 1.., required = true)]
        instances: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        m_list: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        k: usize,
        #[arg(long, value_enum, default_value_t = PlacementArg::Endpoints)]
        placement: PlacementArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Fill the seconds column (makes the report machine dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Write the transformed symmetric (or asymmetric) TSP as a TSPLIB file.
    ExportTsplib {
        #[arg(long)]
        instance: PathBuf,
        /// Intervals (lower) or headings (upper) per target.
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000.0)]
        scale: f64,
        /// Stop after the Noon–Bean step and write the ATSP.
        #[arg(long)]
        atsp: bool,
        #[arg(long, value_enum, default_value_t = PlacementArg::Endpoints)]
        placement: PlacementArg,
    },
    /// Render saved tours as SVG, one file per tour.
    Plot {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        tour: Vec<PathBuf>,
    },
    /// Run the interval-oracle and transformation-equivalence suites.
    Verify {
        /// Random interval problems checked against the grid oracle.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Grid points per axis of the oracle.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Skip the grid-oracle suite.
        #[arg(long)]
        no_grid: bool,
        /// Random instances per transformation.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Exact,
    Relaxed,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlacementArg {
    Endpoints,
    Midpoints,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lower,
    Upper,
}

impl PlacementArg {
    fn get(self) -> HeadingPlacement {
        match self {
            PlacementArg::Endpoints => HeadingPlacement::Endpoints,
            PlacementArg::Midpoints => HeadingPlacement::Midpoints,
        }
    }
}

impl StrategyArg {
    fn get(self, n: usize) -> Strategy {
        match self {
            StrategyArg::Auto => Strategy::auto(n),
            StrategyArg::Exact => Strategy::Exact,
            StrategyArg::Relaxed => Strategy::Relaxed,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os("DTSP_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match run(cli.command, &out_dir) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}

fn io<T>(path: &Path, r: std::io::Result<T>) -> Result<T, Error> {
    r.map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    io(path, std::fs::write(path, text))
}

/// Returns whether every check passed.
fn run(command: Command, out: &Path) -> Result<bool, Error> {
    match command {
        Command::Generate {
            n,
            extent,
            rho,
            seed,
            count,
            prefix,
        } => {
            io(out, std::fs::create_dir_all(out))?;
            let rho = TurnRadius::new(rho)?;
            for s in seed..seed + count {
                let name = format!("{prefix}-n{n}-s{s}");
                let inst = generate_instance(n, extent, rho, s, &name)?;
                let path = out.join(format!("{name}.json"));
                inst.write(&path)?;
                println!("{}", path.display());
            }
        }
        Command::Lower {
            instance,
            m,
            strategy,
            save_tour,
        } => {
            let inst = ProblemInstance::read(&instance)?;
            let strategy = strategy.get(inst.n());
            let lb = lower_bound(&inst, m, strategy)?;
            let kind = match strategy {
                Strategy::Exact => "LB_exact",
                Strategy::Relaxed => "LB_relaxed",
            };
            println!("{} m={m} {kind} {} certified", inst.name, lb.value);
            if let Some(h) = lb.heuristic {
                println!("{} m={m} BP_heuristic {h} not-certified", inst.name);
            }
            if save_tour {
                save(out, &inst, Mode::Lower, m, HeadingPlacement::Endpoints, lb.tour)?;
            }
        }
        Command::Upper {
            instance,
            k,
            placement,
            save_tour,
        } => {
            let inst = ProblemInstance::read(&instance)?;
            let ub = upper_bound(&inst, k, placement.get())?;
            let how = if ub.exact { "optimal-over-headings" } else { "heuristic" };
            println!("{} k={k} UB {} {how}", inst.name, ub.value);
            if save_tour {
                save(out, &inst, Mode::Upper, k, placement.get(), ub.tour)?;
            }
        }
        Command::Etsp { instance } => {
            let inst = ProblemInstance::read(&instance)?;
            let e = etsp(&inst)?;
            let how = if e.exact { "exact" } else { "heuristic" };
            println!("{} ETSP {} {how}", inst.name, e.value);
        }
        Command::Compare {
            instances,
            m_list,
            k,
            placement,
            strategy,
            timings,
        } => {
            let insts = instances
                .iter()
                .map(|p| ProblemInstance::read(p))
                .collect::<Result<Vec<_>, _>>()?;
            let forced = match strategy {
                StrategyArg::Auto => None,
                other => Some(other.get(0)),
            };
            let opts = CompareOptions {
                m_list,
                k,
                placement: placement.get(),
                strategy: forced,
                timings,
            };
            let batch = report::compare(&insts, &opts)?;
            io(out, std::fs::create_dir_all(out))?;
            write(&out.join("compare.csv"), &report::report_csv(&batch.rows)?)?;
            write(&out.join("summary.csv"), &report::summary_csv(&batch.summary)?)?;
            print!("{}", report::summary_text(&batch.summary));
        }
        Command::ExportTsplib {
            instance,
            m,
            mode,
            scale,
            atsp,
            placement,
        } => {
            let inst = ProblemInstance::read(&instance)?;
            let (gtsp, tag) = match mode {
                ModeArg::Lower => (lower_instance(&inst, m)?, "lower"),
                ModeArg::Upper => (upper_instance(&inst, m, placement.get())?, "upper"),
            };
            let asym: AtspInstance = noon_bean(&gtsp)?;
            let name = format!("{}-{tag}-{m}", inst.name);
            let (file, ext) = if atsp {
                (TsplibMatrix::from_atsp(&name, &asym, scale)?, "atsp")
            } else {
                (TsplibMatrix::from_stsp(&name, &atsp_to_stsp(&asym), scale)?, "tsp")
            };
            io(out, std::fs::create_dir_all(out))?;
            let path = out.join(format!("{name}.{ext}"));
            file.write(&path)?;
            println!("{} DIMENSION {}", path.display(), file.dimension);
        }
        Command::Plot { instance, tour } => {
            let inst = ProblemInstance::read(&instance)?;
            io(out, std::fs::create_dir_all(out))?;
            for t in tour {
                let file = TourFile::read(&t)?;
                let svg = render_tour(&inst, &file)?;
                let stem = t.file_name().and_then(|s| s.to_str()).unwrap_or("tour");
                let stem = stem.strip_suffix(".json").unwrap_or(stem);
                let path = out.join(format!("{stem}.svg"));
                write_svg(&path, &svg)?;
                println!("{}", path.display());
            }
        }
        Command::Verify {
            samples,
            grid,
            no_grid,
            trials,
            seed,
        } => {
            let mut rows = if no_grid { Vec::new() } else { interval_suite(samples, grid, seed) };
            rows.extend(transformation_suite(trials, seed));
            io(out, std::fs::create_dir_all(out))?;
            let mut buf = Vec::new();
            report::write_rows(&mut buf, &rows, &VERIFY_HEADER)?;
            write(&out.join("verify.csv"), &String::from_utf8(buf).expect("CSV is UTF-8"))?;
            let mut ok = true;
            for suite in ["interval_vs_grid", "noon_bean", "three_node_split"] {
                let of: Vec<_> = rows.iter().filter(|r| r.suite == suite).collect();
                if of.is_empty() {
                    continue;
                }
                let passed = of.iter().filter(|r| r.pass).count();
                ok &= passed == of.len();
                println!("{suite}: {passed}/{} passed", of.len());
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn save(
    out: &Path,
    inst: &ProblemInstance,
    mode: Mode,
    m_or_k: usize,
    placement: HeadingPlacement,
    tour: dtsp_core::Tour,
) -> Result<(), Error> {
    io(out, std::fs::create_dir_all(out))?;
    let letter = if mode == Mode::Lower { "m" } else { "k" };
    let path = out.join(format!("{}-{}-{letter}{m_or_k}.tour.json", inst.name, mode.as_str()));
    TourFile {
        instance: inst.name.clone(),
        mode,
        m_or_k,
        placement,
        tour,
    }
    .write(&path)?;
    println!("{}", path.display());
    Ok(())
}
