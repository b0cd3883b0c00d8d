//! Command-line driver: subgroup analysis rows, shadow enumeration files,
//! groupoid decisions and the Furusho reports.
//!
//! Exit codes: 0 ok, 2 invalid spec or input, 3 element cap exceeded,
//! 4 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use gtshadows::analysis::{abelian_closed_form, abelian_setting, furusho, FurushoMode};
use gtshadows::braidq::{build_quotients, QuotientOptions, Quotients, SubgroupSpec};
use gtshadows::error::Error;
use gtshadows::groupoid::{
    connected_component, intersect, is_isolated, n_sharp, project_shadow, subgroup_leq, survives,
    IsolationScope,
};
use gtshadows::shadows::{
    enumerate_shadows, parse_shadow_line, pentagon_cosets, EnumMode, GtShadow,
};

#[derive(Parser)]
#[command(name = "gtsh", version, about = "Finite braid-group quotients and GT-shadows")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Resources {
    /// Worker threads for enumeration scans (default: GTS_JOBS or all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Cap on enumerated elements (default: GTS_MAX_ELEMENTS or 50000000)
    #[arg(long)]
    cap: Option<usize>,
}

impl Resources {
    fn jobs(&self) -> usize {
        self.jobs
            .or_else(|| std::env::var("GTS_JOBS").ok().and_then(|v| v.parse().ok()))
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }

    fn options(&self) -> QuotientOptions {
        let cap = self
            .cap
            .or_else(|| std::env::var("GTS_MAX_ELEMENTS").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(gtshadows::fingroup::DEFAULT_ELEMENT_CAP);
        let cache_dir = std::env::var("GTS_CACHE_DIR").ok().map(PathBuf::from);
        QuotientOptions { cap, cache_dir }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// One table row of quotient orders and shadow counts for a spec file
    Analyze {
        spec: PathBuf,
        /// Compute every column, including the practical shadow count
        #[arg(long, conflicts_with = "charming_only")]
        full: bool,
        /// Skip the full-quotient enumeration; practical columns print `-`
        #[arg(long)]
        charming_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        resources: Resources,
    },
    /// Enumerate shadows (or pentagon cosets) into a sorted TSV
    Enumerate {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "charming")]
        mode: CliMode,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        resources: Resources,
    },
    /// Kernel-level decisions across one or two specs
    Groupoid {
        #[command(subcommand)]
        sub: GroupoidCmd,
    },
    /// Pentagon-implies-hexagons report for one spec
    Furusho {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "strong")]
        mode: CliFurushoMode,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        resources: Resources,
    },
    /// Closed-form charming list for an abelian-setting spec
    Abelian {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        resources: Resources,
    },
    /// Randomized search for a non-isolated subgroup among specs induced
    /// from random 3-strand homomorphisms (no guaranteed outcome)
    Search {
        /// Degree of the random permutations
        #[arg(long, default_value = "6")]
        degree: usize,
        /// Number of samples
        #[arg(long, default_value = "10")]
        count: u64,
        #[arg(long, default_value = "1")]
        seed: u64,
        /// Where to write any non-isolated spec found
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        resources: Resources,
    },
    /// Write the bundled spec catalog into a directory
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
    /// Write the q-cycle spec to a file or stdout
    MakeCyclic {
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupoidCmd {
    /// Objects of the connected component, with charming shadow counts
    Component {
        spec: PathBuf,
        #[command(flatten)]
        resources: Resources,
    },
    /// Is every charming shadow settled?
    Isolated {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "charming")]
        scope: CliScope,
        #[command(flatten)]
        resources: Resources,
    },
    /// Intersection of the component objects, in spec file format
    Nsharp {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        resources: Resources,
    },
    /// Is the first kernel contained in the second?
    Leq { spec_k: PathBuf, spec_n: PathBuf },
    /// Intersection of two kernels, in spec file format
    Intersect {
        spec_a: PathBuf,
        spec_b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Do shadows over the first spec survive into the second (smaller) one?
    Survive {
        spec_n: PathBuf,
        spec_k: PathBuf,
        /// A single shadow `m=<int> f=<word>`; default: all charming shadows
        #[arg(long)]
        shadow: Option<String>,
        #[command(flatten)]
        resources: Resources,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum CliMode {
    Practical,
    Charming,
    PentagonOnly,
}

#[derive(ValueEnum, Clone, Copy)]
enum CliFurushoMode {
    Strong,
    Weak,
}

#[derive(ValueEnum, Clone, Copy)]
enum CliScope {
    Charming,
    AllPractical,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(4);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::CapExceeded { .. } => 3,
                Error::NotApplicable(_) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn load_quotients(path: &Path, resources: &Resources) -> Result<Quotients, Error> {
    let spec = SubgroupSpec::read_file(path)?;
    build_quotients(spec, resources.options())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::BadSpec(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::BadSpec(format!("stdout: {e}")))
        }
    }
}

fn bool_cell(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Analyze { spec, full, charming_only, out, resources } => {
            // every column is computed unless --charming-only skips the
            // full-quotient work; --full spells out the default explicitly
            let _ = full;
            let q = load_quotients(&spec, &resources)?;
            let jobs = resources.jobs();
            let mut cells: Vec<String> = vec![q.spec().name.clone(), q.q4_order().to_string()];
            let charming: Vec<GtShadow>;
            if charming_only {
                cells.push("-".into());
                cells.push(q.qf2_derived().order().to_string());
                cells.push(q.n_ord().to_string());
                charming = enumerate_shadows(&q, EnumMode::Charming, jobs)?;
                cells.push("-".into());
                cells.push(charming.len().to_string());
            } else {
                cells.push(q.qf2_order().to_string());
                cells.push(q.qf2_derived().order().to_string());
                cells.push(q.n_ord().to_string());
                let practical = enumerate_shadows(&q, EnumMode::Practical, jobs)?;
                charming = practical.iter().filter(|s| s.flags.charming).cloned().collect();
                cells.push(practical.len().to_string());
                cells.push(charming.len().to_string());
            }
            let mut isolated = true;
            for sh in &charming {
                if !gtshadows::groupoid::is_settled(&q, sh)? {
                    isolated = false;
                    break;
                }
            }
            cells.push(bool_cell(isolated).into());
            let mut text = String::from(
                "name\tindex_pb4\tindex_f2\tderived_order\tn_ord\tgt_count\tgt_charming_count\tisolated\n",
            );
            text.push_str(&cells.join("\t"));
            text.push('\n');
            emit(&out, &text)
        }
        Cmd::Enumerate { spec, mode, out, resources } => {
            let q = load_quotients(&spec, &resources)?;
            let jobs = resources.jobs();
            let text = match mode {
                CliMode::PentagonOnly => {
                    let mut text = String::from("f_coset_id\tf_word\n");
                    for (id, word) in pentagon_cosets(&q, jobs)? {
                        text.push_str(&format!("{id}\t{}\n", word.display_f2()));
                    }
                    text
                }
                CliMode::Practical | CliMode::Charming => {
                    let mode = match mode {
                        CliMode::Practical => EnumMode::Practical,
                        _ => EnumMode::Charming,
                    };
                    let mut text = String::from(
                        "m\tf_coset_id\tf_word\tis_pair\tfriendly\tis_shadow\tcharming\n",
                    );
                    for sh in enumerate_shadows(&q, mode, jobs)? {
                        text.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                            sh.m,
                            sh.f_coset_id,
                            sh.f_word.display_f2(),
                            bool_cell(sh.flags.is_pair),
                            bool_cell(sh.flags.friendly),
                            bool_cell(sh.flags.is_shadow),
                            bool_cell(sh.flags.charming),
                        ));
                    }
                    text
                }
            };
            emit(&out, &text)
        }
        Cmd::Groupoid { sub } => run_groupoid(sub),
        Cmd::Furusho { spec, mode, out, resources } => {
            let q = load_quotients(&spec, &resources)?;
            let mode = match mode {
                CliFurushoMode::Strong => FurushoMode::Strong,
                CliFurushoMode::Weak => FurushoMode::Weak,
            };
            let report = furusho(&q, mode, resources.jobs())?;
            let text = format!(
                "spec\tmode\tpentagon_count\textendable_count\tholds\n{}\t{}\t{}\t{}\t{}\n",
                q.spec().name,
                report.mode.name(),
                report.pentagon_count,
                report.extendable_count,
                bool_cell(report.holds),
            );
            emit(&out, &text)
        }
        Cmd::Abelian { spec, out, resources } => {
            let q = load_quotients(&spec, &resources)?;
            if !abelian_setting(&q) {
                return Err(Error::NotApplicable(format!(
                    "{} is not in the abelian setting",
                    q.spec().name
                )));
            }
            let mut text = String::from("m\tf_word\n");
            for sh in abelian_closed_form(&q)? {
                text.push_str(&format!("{}\t{}\n", sh.m, sh.f_word.display_f2()));
            }
            emit(&out, &text)
        }
        Cmd::Search { degree, count, seed, out_dir, resources } => {
            run_search(degree, count, seed, out_dir, resources)
        }
        Cmd::Fixtures { dir } => {
            std::fs::create_dir_all(&dir)
                .map_err(|e| Error::BadSpec(format!("{}: {e}", dir.display())))?;
            let mut specs = vec![SubgroupSpec::philadelphia(), SubgroupSpec::mighty_dandy()];
            for q in 2..=8 {
                specs.push(SubgroupSpec::cyclic(q)?);
            }
            for spec in specs {
                let path = dir.join(format!("{}.txt", spec.name));
                std::fs::write(&path, spec.to_file_string())
                    .map_err(|e| Error::BadSpec(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Cmd::MakeCyclic { q, out } => {
            let spec = SubgroupSpec::cyclic(q)?;
            emit(&out, &spec.to_file_string())
        }
    }
}

fn run_groupoid(sub: GroupoidCmd) -> Result<(), Error> {
    match sub {
        GroupoidCmd::Component { spec, resources } => {
            let q = load_quotients(&spec, &resources)?;
            let component = connected_component(&q, resources.jobs())?;
            let mut text = String::from("object\tcharming_count\n");
            for obj in component {
                text.push_str(&format!("{}\t{}\n", obj.spec.name, obj.charming_count));
            }
            emit(&None, &text)
        }
        GroupoidCmd::Isolated { spec, scope, resources } => {
            let q = load_quotients(&spec, &resources)?;
            let scope = match scope {
                CliScope::Charming => IsolationScope::Charming,
                CliScope::AllPractical => IsolationScope::AllPractical,
            };
            println!("{}", bool_cell(is_isolated(&q, scope, resources.jobs())?));
            Ok(())
        }
        GroupoidCmd::Nsharp { spec, out, resources } => {
            let q = load_quotients(&spec, &resources)?;
            let sharp = n_sharp(&q, resources.jobs())?;
            emit(&out, &sharp.to_file_string())
        }
        GroupoidCmd::Leq { spec_k, spec_n } => {
            let k = SubgroupSpec::read_file(&spec_k)?;
            let n = SubgroupSpec::read_file(&spec_n)?;
            println!("{}", bool_cell(subgroup_leq(&k, &n)));
            Ok(())
        }
        GroupoidCmd::Intersect { spec_a, spec_b, out } => {
            let a = SubgroupSpec::read_file(&spec_a)?;
            let b = SubgroupSpec::read_file(&spec_b)?;
            emit(&out, &intersect(&a, &b).to_file_string())
        }
        GroupoidCmd::Survive { spec_n, spec_k, shadow, resources } => {
            let qn = load_quotients(&spec_n, &resources)?;
            let qk = load_quotients(&spec_k, &resources)?;
            let jobs = resources.jobs();
            match shadow {
                Some(line) => {
                    let sh = parse_shadow_line(&qn, &line)?;
                    println!("{}", bool_cell(survives(&qn, &sh, &qk, jobs)?));
                }
                None => {
                    // project the whole charming set from below and compare
                    if !subgroup_leq(qk.spec(), qn.spec()) {
                        return Err(Error::NotApplicable(format!(
                            "{} is not contained in {}",
                            qk.spec().name,
                            qn.spec().name
                        )));
                    }
                    let mut text = String::from("m\tf_coset_id\tsurvives\n");
                    let over_n = enumerate_shadows(&qn, EnumMode::Charming, jobs)?;
                    let mut projected = std::collections::HashSet::new();
                    for t in enumerate_shadows(&qk, EnumMode::Charming, jobs)? {
                        let p = project_shadow(&qk, &t, &qn)?;
                        projected.insert((p.m, p.f_elt));
                    }
                    for sh in over_n {
                        let hit = projected.contains(&(sh.m, sh.f_elt.clone()));
                        text.push_str(&format!(
                            "{}\t{}\t{}\n",
                            sh.m,
                            sh.f_coset_id,
                            bool_cell(hit)
                        ));
                    }
                    emit(&None, &text)?;
                }
            }
            Ok(())
        }
    }
}

fn run_search(
    degree: usize,
    count: u64,
    seed: u64,
    out_dir: Option<PathBuf>,
    resources: Resources,
) -> Result<(), Error> {
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    if degree < 1 {
        return Err(Error::NotApplicable("search degree must be at least 1".into()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let random_perm = |rng: &mut StdRng| {
        let mut images: Vec<usize> = (0..degree).collect();
        images.shuffle(rng);
        gtshadows::perm::Perm::from_images0(&images).expect("shuffled bijection")
    };
    println!("sample\tname\tindex_pb4\tn_ord\tcharming\tisolated");
    for i in 0..count {
        let a = random_perm(&mut rng);
        let b = random_perm(&mut rng);
        // psi(x13) := (psi(x23) psi(x12))^-1 makes c map to the identity;
        // sending x14, x24, x34 to the identity extends any 3-strand
        // homomorphism to the 4-strand group
        let x13 = b.compose(&a).inverse();
        let id = gtshadows::perm::Perm::identity(degree);
        let spec = SubgroupSpec::new(
            format!("rand_d{degree}_s{seed}_{i}"),
            degree,
            [a, b, x13, id.clone(), id.clone(), id],
        )?;
        debug_assert!(spec.validate().is_empty());
        let q = match build_quotients(spec.clone(), resources.options()) {
            Ok(q) => q,
            Err(Error::CapExceeded { .. }) => {
                println!("{i}\t{}\t-\t-\t-\tskipped(cap)", spec.name);
                continue;
            }
            Err(e) => return Err(e),
        };
        let (charming_count, isolated) =
            match enumerate_shadows(&q, EnumMode::Charming, resources.jobs()) {
                Ok(shadows) => {
                    let mut isolated = true;
                    for sh in &shadows {
                        if !gtshadows::groupoid::is_settled(&q, sh)? {
                            isolated = false;
                            break;
                        }
                    }
                    (shadows.len().to_string(), bool_cell(isolated).to_string())
                }
                Err(Error::CapExceeded { .. }) => ("-".into(), "skipped(cap)".into()),
                Err(e) => return Err(e),
            };
        println!(
            "{i}\t{}\t{}\t{}\t{charming_count}\t{isolated}",
            q.spec().name,
            q.q4_order(),
            q.n_ord()
        );
        if isolated == "false" {
            if let Some(dir) = &out_dir {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::BadSpec(format!("{}: {e}", dir.display())))?;
                let path = dir.join(format!("{}.txt", spec.name));
                std::fs::write(&path, spec.to_file_string())
                    .map_err(|e| Error::BadSpec(format!("{}: {e}", path.display())))?;
                eprintln!("non-isolated spec written to {}", path.display());
            }
        }
    }
    Ok(())
}
