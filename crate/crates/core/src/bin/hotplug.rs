use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use log::info;

use hotplug_core::combinatorics::PointSet;
use hotplug_core::designs::{load_design, resolve_design};
use hotplug_core::harness::{check_all, dominating_rows, sweep, to_csv, SweepConfig};
use hotplug_core::hppda::{verify_all_online_sets, AMap, GeneralizedHpPda};
use hotplug_core::scheme::{
    decode_user, deliver, place, rate, transmissions_csv, users_csv, DemandVector, Library,
};
use num_rational::Ratio;

#[derive(Parser)]
#[command(
    name = "hotplug",
    version,
    about = "Multi-access hotplug coded caching toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// t-design operations.
    #[command(subcommand)]
    Design(DesignCmd),
    /// Generalized HpPDA construction and verification.
    #[command(subcommand)]
    Hppda(HppdaCmd),
    /// Placement, delivery and decoding.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Rate–memory sweep against the baselines, written as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Cross-check every proposed point with one simulated delivery.
        #[arg(long)]
        simulate: bool,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    /// Validate a design file and print its parameters.
    Verify { file: PathBuf },
}

#[derive(Args)]
struct InstanceArgs {
    /// Design file or `catalog:NAME`.
    #[arg(long, default_value = "catalog:steiner-3-8-4-1")]
    design: String,
    /// Maximum intersection size r.
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Copy counts, e.g. `1,2=1,1,1=2,2,1=1`.
    #[arg(long, default_value = "1,2=1,1,1=2,2,1=1")]
    a: String,
}

impl InstanceArgs {
    fn build(&self) -> anyhow::Result<GeneralizedHpPda> {
        let design = resolve_design(&self.design)?;
        let a = AMap::parse(&self.a)?;
        Ok(GeneralizedHpPda::new(design, self.r, a)?)
    }
}

#[derive(Subcommand)]
enum HppdaCmd {
    /// Dump P_c, P and every non-empty B_j.
    #[command(alias = "show")]
    Build(InstanceArgs),
    /// Check every online set against the HpPDA containment conditions.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        all_online_sets: bool,
        /// Single online set, e.g. `246` or `2,4,6`.
        #[arg(long)]
        online: Option<String>,
    },
}

#[derive(Args)]
struct LibraryArgs {
    /// Number of pseudo-random files.
    #[arg(long, default_value_t = 18)]
    files: usize,
    #[arg(long, default_value_t = 64)]
    file_bytes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Read the library from a directory instead.
    #[arg(long)]
    library_dir: Option<PathBuf>,
}

impl LibraryArgs {
    fn load(&self) -> anyhow::Result<Library> {
        Ok(match &self.library_dir {
            Some(dir) => Library::from_dir(dir)?,
            None => Library::random(self.files, self.file_bytes, self.seed)?,
        })
    }
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// One delivery for a given online set, decoded by every active user.
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        library: LibraryArgs,
        #[arg(long)]
        online: String,
        /// `worst`, `seed:N`, or a file of `USER FILE` lines.
        #[arg(long, default_value = "worst")]
        demands: String,
        /// Also print per-transmission and per-user tables.
        #[arg(long)]
        verbose: bool,
    },
    /// Worst-case delivery and decoding for every online set.
    CheckAll {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        library: LibraryArgs,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Design(DesignCmd::Verify { file }) => {
            let d = load_design(&file).with_context(|| format!("design {}", file.display()))?;
            println!(
                "{}-({},{},{}) design with b = {} blocks",
                d.t(),
                d.v(),
                d.k(),
                d.lambda(),
                d.b()
            );
            let params = d.params()?;
            for (s, l) in &params.lambda_s {
                println!("lambda_{s} = {l}");
            }
            for (s, l) in &params.lambda_s_t {
                println!("lambda_{s}^t = {l}");
            }
            Ok(true)
        }
        Command::Hppda(HppdaCmd::Build(args)) => {
            let g = args.build()?;
            println!("# P_c\n{}", g.pc().dump());
            println!("# P (r={})\n{}", g.r(), g.p().dump());
            for j in 1..=g.r() {
                match g.bj(j) {
                    Some(b) => {
                        let p = b.pda.params();
                        println!("# B_{j} ({},{},{},{})\n{}", p.k, p.f, p.z, p.s, b.dump());
                    }
                    None => println!("# B_{j} empty\n"),
                }
            }
            let feas = g.feasibility()?;
            println!("# Y = {:?} feasible = {}", feas.y, feas.passes());
            Ok(feas.passes())
        }
        Command::Hppda(HppdaCmd::Verify {
            instance,
            all_online_sets,
            online,
        }) => {
            let g = instance.build()?;
            let reports = match (all_online_sets, online) {
                (true, _) => verify_all_online_sets(&g)?,
                (false, Some(set)) => vec![hotplug_core::hppda::verify_hppda(
                    &g,
                    &PointSet::parse(&set)?,
                )?],
                (false, None) => bail!("pass --all-online-sets or --online SET"),
            };
            let mut ok = true;
            for rep in &reports {
                println!(
                    "{} {}",
                    if rep.passes() { "PASS" } else { "FAIL" },
                    rep.summary()
                );
                ok &= rep.passes();
            }
            Ok(ok)
        }
        Command::Scheme(SchemeCmd::Simulate {
            instance,
            library,
            online,
            demands,
            verbose,
        }) => {
            let g = instance.build()?;
            let lib = library.load()?;
            let online = PointSet::parse(&online)?;
            let demand = match demands.as_str() {
                "worst" => DemandVector::worst_case(&g, &online, lib.len())?,
                s if s.starts_with("seed:") => {
                    let seed = s[5..].parse().context("seed:N needs an integer")?;
                    DemandVector::random(&g, &online, lib.len(), seed)?
                }
                path => {
                    let text =
                        std::fs::read_to_string(path).with_context(|| format!("demands {path}"))?;
                    DemandVector::parse(&online, &text)?
                }
            };
            let inst = place(g, &lib)?;
            let session = deliver(&inst, &demand)?;
            let mut results = Vec::new();
            let mut ok = true;
            for (user, &file) in &demand.demands {
                let res = decode_user(&inst, &session, user).and_then(|tr| {
                    if tr.file == lib.file(file) {
                        Ok(tr)
                    } else {
                        Err(hotplug_core::Error::DecodeFailure {
                            online: online.to_string(),
                            user: user.to_string(),
                            reason: format!("output differs from file {file}"),
                        })
                    }
                });
                ok &= res.is_ok();
                results.push((user.clone(), res.map_err(|e| e.to_string())));
            }
            let measured = Ratio::new(session.transmissions.len() as u64, inst.code().d() as u64);
            if verbose {
                print!("{}", transmissions_csv(&session));
                print!("{}", users_csv(&results));
            }
            let decoded = results.iter().filter(|(_, r)| r.is_ok()).count();
            println!(
                "online={online} users={} decoded={decoded} transmissions={} D={} rate={measured} formula={}",
                results.len(),
                session.transmissions.len(),
                inst.code().d(),
                rate(inst.hppda())?.rate
            );
            Ok(ok)
        }
        Command::Scheme(SchemeCmd::CheckAll {
            instance,
            library,
            workers,
        }) => {
            let g = instance.build()?;
            let lib = library.load()?;
            let inst = place(g, &lib)?;
            let start = Instant::now();
            let report = check_all(&inst, &lib, workers)?;
            for r in &report.per_online_set {
                println!(
                    "online={} users={} decoded={} transmissions={} rate={}",
                    r.online, r.users, r.decoded, r.transmissions, r.measured_rate
                );
            }
            println!(
                "{} online sets, {} users decoded, formula rate {}, {:.2?}: {}",
                report.online_sets(),
                report.users_decoded(),
                report.formula_rate,
                start.elapsed(),
                if report.passes() { "PASS" } else { "FAIL" }
            );
            Ok(report.passes())
        }
        Command::Sweep {
            config,
            simulate,
            out,
        } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("config {}", config.display()))?;
            let mut cfg = SweepConfig::parse(&text)?;
            cfg.simulate |= simulate;
            let result = sweep(&cfg)?;
            info!(
                "{} rows, {} points skipped",
                result.rows.len(),
                result.skipped.len()
            );
            let csv = to_csv(&result.rows)?;
            match out {
                Some(path) => std::fs::write(&path, csv)?,
                None => print!("{csv}"),
            }
            let best = dominating_rows(&result.rows, Ratio::new(1, 2), Ratio::new(7, 10));
            for row in &best {
                info!("below every baseline in [0.5, 0.7]: {row}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
