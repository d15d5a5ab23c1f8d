//! `rotgauss` command line: analyze families, classify Gauss maps, run the
//! verification registry, and export meshes.
//!
//! Exit codes: 0 success / all checks pass, 1 at least one check failed,
//! 2 usage or runtime error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rotgauss::checks::{check_ids, run_theorem_check, CheckContext, DEFAULT_SEED};
use rotgauss::classify::{classify, Tolerances};
use rotgauss::families::{make_family, parse_kv, SurfaceFamily};
use rotgauss::geometry::{sample_grid, GeometryOptions, GridSpec};
use rotgauss::report::{
    mesh_json, write_mesh_csv, ClassificationView, Report, ReportFormat, SAMPLE_COLUMNS,
    SAMPLE_COLUMNS_TAIL,
};

#[derive(Parser)]
#[command(
    name = "rotgauss",
    about = "Extrinsic geometry and pointwise 1-type Gauss map classification \
             of rotational surfaces in pseudo-Euclidean 4-space",
    after_help = csv_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn csv_help() -> String {
    format!(
        "CSV column order for `analyze --format csv`:\n  {}\n\
         `mesh --format csv` emits the header s,t,x1,x2,x3,x4.",
        SAMPLE_COLUMNS
            .iter()
            .chain(SAMPLE_COLUMNS_TAIL.iter())
            .copied()
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// Flags shared by the family-driven subcommands. Any flag may also be
/// supplied by a plain-text config file of `key = value` lines; explicit
/// flags override the file.
#[derive(Args, Clone, Default)]
struct FamilyArgs {
    /// Family name: double | m1 | m2 | dsmin | plane | cone.
    #[arg(long)]
    family: Option<String>,
    /// Profile spec, e.g. power:b0=1,exp=2 | conic:l0=1,mu0=2 |
    /// hyperbolic:r0=1 | line:x0=0,x1=0,w0=1,w1=0 | vranceanu:rate=0.1 |
    /// ode:a=1,b=1,x0=1,w0=0,phi0=0,smin=-0.5,smax=0.5,step=1e-3.
    #[arg(long)]
    profile: Option<String>,
    /// Family parameters as k=v pairs, e.g. r0=1,a=1,b=2.
    #[arg(long, default_value = "")]
    params: String,
    /// Grid spec s=lo:hi:n,t=lo:hi:n.
    #[arg(long)]
    grid: Option<String>,
    /// Tolerance overrides as k=v pairs: harm, fit, const, c.
    #[arg(long, default_value = "")]
    tol: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Config file of `key = value` lines supplying any of the above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the full extrinsic geometry over a grid.
    Analyze(FamilyArgs),
    /// Decide the pointwise 1-type class of the Gauss map.
    Classify(FamilyArgs),
    /// Run one registry check or the whole suite.
    Verify {
        /// Check id (see `verify --list`).
        #[arg(long, conflicts_with = "all")]
        id: Option<String>,
        /// Run every registered check.
        #[arg(long)]
        all: bool,
        /// List registered check ids and exit.
        #[arg(long)]
        list: bool,
        /// Seed for the randomized point draws.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Testing hook: corrupt one closed-form coefficient, as
        /// `<coef>:<delta>` with coef in h311|h312|h322|h411|h412|h422|
        /// om12e1|om12e2|om34e1|om34e2 (mutation sensitivity).
        #[arg(long)]
        inject_fault: Option<String>,
        /// Output path for the JSON outcome (stdout table always printed).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit sampled surface coordinates.
    Mesh(FamilyArgs),
    /// List the family catalog.
    Families,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> rotgauss::Result<ExitCode> {
    match cli.command {
        Command::Analyze(args) => {
            let args = args.merged()?;
            let (family, spec) = args.build()?;
            let grid = sample_grid(&family, &spec, &GeometryOptions::default())?;
            let report = Report::new(args.family.as_deref().unwrap_or(""), args.params_map()?, spec)
                .with_grid_samples(&grid);
            args.write(|w| report.emit(args.report_format(), w))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify(args) => {
            let args = args.merged()?;
            let (family, spec) = args.build()?;
            let tol = args.tolerances()?;
            let (result, grid) = classify(&family, &spec, &GeometryOptions::default(), &tol)?;
            let mut report =
                Report::new(args.family.as_deref().unwrap_or(""), args.params_map()?, spec)
                    .with_grid_samples(&grid);
            report.tolerances = tol;
            report.classification = Some(ClassificationView::from(&result));
            args.write(|w| report.emit(args.report_format(), w))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { id, all, list, seed, inject_fault, out } => {
            if list {
                for id in check_ids() {
                    println!("{id}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let ids: Vec<String> = if all {
                check_ids().into_iter().map(String::from).collect()
            } else {
                vec![id.ok_or_else(|| {
                    rotgauss::Error::InvalidParameter("verify needs --id <id> or --all".into())
                })?]
            };
            let mut ctx = CheckContext::seeded(seed);
            if let Some(spec) = inject_fault {
                ctx.perturb = Some(parse_fault(&spec)?);
            }
            let mut outcomes = Vec::new();
            let mut all_pass = true;
            for id in &ids {
                let check = run_theorem_check(id, &ctx)?;
                println!(
                    "[{}] {:<24} {}",
                    if check.pass { "pass" } else { "FAIL" },
                    check.id,
                    check.title
                );
                if !check.pass {
                    for fact in check.facts.iter().filter(|f| !f.pass) {
                        println!("       failed: {} ({})", fact.name, fact.detail);
                    }
                }
                all_pass &= check.pass;
                outcomes.push(check);
            }
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&outcomes)?)?;
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Mesh(args) => {
            let args = args.merged()?;
            let (family, spec) = args.build()?;
            match args.format.as_str() {
                "csv" => args.write(|w| write_mesh_csv(&family, &spec, w))?,
                _ => {
                    let text = mesh_json(&family, &spec)?;
                    args.write(|w| Ok(writeln!(w, "{text}")?))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Families => {
            for (name, desc) in rotgauss::families::catalog() {
                println!("{name:<8} {desc}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

impl FamilyArgs {
    /// Applies config-file values underneath explicit flags.
    fn merged(mut self) -> rotgauss::Result<FamilyArgs> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                rotgauss::Error::InvalidParameter(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let value = value.trim().to_string();
            match key.trim() {
                "family" => self.family.get_or_insert(value),
                "profile" => self.profile.get_or_insert(value),
                "params" => {
                    if self.params.is_empty() {
                        self.params = value;
                    }
                    &mut self.params
                }
                "grid" => self.grid.get_or_insert(value),
                "tol" => {
                    if self.tol.is_empty() {
                        self.tol = value;
                    }
                    &mut self.tol
                }
                "format" => {
                    if self.format == "json" {
                        self.format = value;
                    }
                    &mut self.format
                }
                "out" => {
                    self.out.get_or_insert(PathBuf::from(value));
                    continue;
                }
                other => {
                    return Err(rotgauss::Error::InvalidParameter(format!(
                        "unknown config key '{other}'"
                    )))
                }
            };
        }
        Ok(self)
    }

    fn params_map(&self) -> rotgauss::Result<BTreeMap<String, String>> {
        parse_kv(&self.params)
    }

    fn build(&self) -> rotgauss::Result<(SurfaceFamily, GridSpec)> {
        let family_name = self.family.as_deref().ok_or_else(|| {
            rotgauss::Error::InvalidParameter("missing --family (or config `family =`)".into())
        })?;
        let family = make_family(family_name, self.profile.as_deref(), &self.params)?;
        let grid_text = self.grid.as_deref().ok_or_else(|| {
            rotgauss::Error::InvalidParameter("missing --grid s=lo:hi:n,t=lo:hi:n".into())
        })?;
        Ok((family, parse_grid(grid_text)?))
    }

    fn tolerances(&self) -> rotgauss::Result<Tolerances> {
        let mut tol = Tolerances::default();
        for (k, v) in parse_kv(&self.tol)? {
            let value: f64 = v.parse().map_err(|_| {
                rotgauss::Error::InvalidParameter(format!("cannot parse tolerance {k}='{v}'"))
            })?;
            match k.as_str() {
                "harm" => tol.tau_harm = value,
                "fit" => tol.tau_fit = value,
                "const" => tol.tau_const = value,
                "c" => tol.tau_c = value,
                other => {
                    return Err(rotgauss::Error::InvalidParameter(format!(
                        "unknown tolerance '{other}' (expected harm|fit|const|c)"
                    )))
                }
            }
        }
        Ok(tol)
    }

    fn report_format(&self) -> ReportFormat {
        if self.format == "csv" {
            ReportFormat::Csv
        } else {
            ReportFormat::Json
        }
    }

    fn write<F>(&self, emit: F) -> rotgauss::Result<()>
    where
        F: FnOnce(&mut dyn Write) -> rotgauss::Result<()>,
    {
        match &self.out {
            Some(path) => {
                let mut file = std::fs::File::create(path)?;
                emit(&mut file)
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                emit(&mut lock)
            }
        }
    }
}

fn parse_fault(spec: &str) -> rotgauss::Result<rotgauss::families::Perturbation> {
    use rotgauss::families::CoefKind;
    let (name, delta) = spec.split_once(':').ok_or_else(|| {
        rotgauss::Error::InvalidParameter(format!("fault spec must be <coef>:<delta>, got '{spec}'"))
    })?;
    let kind = match name {
        "h311" => CoefKind::H311,
        "h312" => CoefKind::H312,
        "h322" => CoefKind::H322,
        "h411" => CoefKind::H411,
        "h412" => CoefKind::H412,
        "h422" => CoefKind::H422,
        "om12e1" => CoefKind::Om12E1,
        "om12e2" => CoefKind::Om12E2,
        "om34e1" => CoefKind::Om34E1,
        "om34e2" => CoefKind::Om34E2,
        other => {
            return Err(rotgauss::Error::InvalidParameter(format!("unknown coefficient '{other}'")))
        }
    };
    let delta: f64 = delta.parse().map_err(|_| {
        rotgauss::Error::InvalidParameter(format!("cannot parse fault delta '{delta}'"))
    })?;
    Ok(rotgauss::families::Perturbation { kind, delta })
}

/// Parses `s=lo:hi:n,t=lo:hi:n`.
fn parse_grid(text: &str) -> rotgauss::Result<GridSpec> {
    let mut s = None;
    let mut t = None;
    for part in text.split(',') {
        let (axis, range) = part.split_once('=').ok_or_else(|| {
            rotgauss::Error::InvalidParameter(format!("bad grid component '{part}'"))
        })?;
        let fields: Vec<&str> = range.split(':').collect();
        if fields.len() != 3 {
            return Err(rotgauss::Error::InvalidParameter(format!(
                "grid range must be lo:hi:n, got '{range}'"
            )));
        }
        let lo: f64 = fields[0].parse().map_err(|_| {
            rotgauss::Error::InvalidParameter(format!("bad grid bound '{}'", fields[0]))
        })?;
        let hi: f64 = fields[1].parse().map_err(|_| {
            rotgauss::Error::InvalidParameter(format!("bad grid bound '{}'", fields[1]))
        })?;
        let n: usize = fields[2].parse().map_err(|_| {
            rotgauss::Error::InvalidParameter(format!("bad grid count '{}'", fields[2]))
        })?;
        match axis.trim() {
            "s" => s = Some((lo, hi, n)),
            "t" => t = Some((lo, hi, n)),
            other => {
                return Err(rotgauss::Error::InvalidParameter(format!(
                    "unknown grid axis '{other}'"
                )))
            }
        }
    }
    match (s, t) {
        (Some(s), Some(t)) => GridSpec::new(s, t),
        _ => Err(rotgauss::Error::InvalidParameter(
            "grid needs both s=lo:hi:n and t=lo:hi:n".into(),
        )),
    }
}
