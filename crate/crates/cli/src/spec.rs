//! Experiment configuration and its command-line form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use permzero_core::{Complex64, DistributionKind, EntryDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// log|per(zJ/sqrt(n) + W)| on a grid, plus the roots in z.
    ZerosHeatmap,
    /// Relative error of the truncated expansion about infinity, per degree.
    TruncationGrid,
    /// Monte Carlo E|b_k|^2 of the log-coefficients for k = 1, 2, 3.
    CoeffScaling,
    /// Closed-form second moments of the reweighted permanents against Monte Carlo.
    SecondMoment,
    /// Hardcore, matching, cluster-expansion and pair-model checks.
    HardcoreSuite,
    /// E|per(W + mu J) - per(W)|^2 against its closed form and bound.
    Stability,
    /// E log|per(W)|^2 against log n! - gamma n.
    Anticoncentration,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ZerosHeatmap => "zeros-heatmap",
            Command::TruncationGrid => "truncation-grid",
            Command::CoeffScaling => "coeff-scaling",
            Command::SecondMoment => "second-moment",
            Command::HardcoreSuite => "hardcore-suite",
            Command::Stability => "stability",
            Command::Anticoncentration => "anticoncentration",
        }
    }

    /// Commands whose rows carry a pass column.
    pub fn is_suite(&self) -> bool {
        matches!(
            self,
            Command::SecondMoment | Command::HardcoreSuite | Command::Stability | Command::Anticoncentration
        )
    }

    fn min_samples(&self) -> usize {
        match self {
            Command::ZerosHeatmap | Command::TruncationGrid => 0,
            Command::CoeffScaling => 200,
            _ => 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub resolution: usize,
}

impl Grid {
    /// Grid points in row-major order: imaginary part outer, real part inner.
    pub fn points(&self) -> Vec<Complex64> {
        let r = self.resolution;
        let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (r - 1) as f64;
        let mut out = Vec::with_capacity(r * r);
        for j in 0..r {
            for i in 0..r {
                out.push(Complex64::new(
                    step(self.re_min, self.re_max, i),
                    step(self.im_min, self.im_max, j),
                ));
            }
        }
        out
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err("expected re0,re1,im0,im1,res".into());
        }
        let f = |t: &str| t.parse::<f64>().map_err(|e| format!("bad bound `{t}`: {e}"));
        let grid = Grid {
            re_min: f(parts[0])?,
            re_max: f(parts[1])?,
            im_min: f(parts[2])?,
            im_max: f(parts[3])?,
            resolution: parts[4]
                .parse()
                .map_err(|e| format!("bad resolution `{}`: {e}", parts[4]))?,
        };
        if grid.resolution < 2 {
            return Err("grid resolution must be at least 2".into());
        }
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.re_min, self.re_max, self.im_min, self.im_max, self.resolution
        )
    }
}

/// Complex number written `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let f = |t: &str| t.parse::<f64>().map_err(|e| format!("bad number `{t}`: {e}"));
        match parts.as_slice() {
            [re] => Ok(Self(Complex64::new(f(re)?, 0.0))),
            [re, im] => Ok(Self(Complex64::new(f(re)?, f(im)?))),
            _ => Err("expected `re` or `re,im`".into()),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad entry `{t}`: {e}")))
        .collect()
}

#[derive(Debug, Clone, Parser)]
#[command(name = "permzero", version, about = "Permanent, reweighting and hardcore-model experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Matrix dimension.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Entry distribution.
    #[arg(long, default_value = "complex-gaussian")]
    pub dist: DistributionKind,
    /// Entry variance E|W_ij|^2.
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    /// Master seed; required so every run is reproducible.
    #[arg(long)]
    pub seed: u64,
    /// Grid `re0,re1,im0,im1,res` for the grid commands.
    #[arg(long, default_value = "-3,3,-3,3,41", allow_hyphen_values = true)]
    pub grid: Grid,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Truncation degrees for truncation-grid.
    #[arg(long, default_value = "0,1,2,3,4,5,6,7,8,9", value_parser = parse_list)]
    pub degrees: std::vec::Vec<usize>,
    /// Matrix sizes for coeff-scaling.
    #[arg(long, default_value = "6,10,14", value_parser = parse_list)]
    pub sizes: std::vec::Vec<usize>,
    /// Evaluation point `re[,im]` (default 0.5 for second-moment, 0.3 for hardcore-suite).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<ComplexArg>,
    /// Stability parameter c with |mu| = c/sqrt(n).
    #[arg(long, default_value_t = 0.3)]
    pub c: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    pub n: usize,
    pub dist: EntryDistribution,
    pub seed: u64,
    pub grid: Grid,
    pub samples: usize,
    pub degrees: Vec<usize>,
    pub sizes: Vec<usize>,
    pub z: Complex64,
    pub c: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentSpec {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let dist = EntryDistribution::new(cli.dist, cli.variance).map_err(|e| e.to_string())?;
        let default_z = match cli.command {
            Command::HardcoreSuite => 0.3,
            _ => 0.5,
        };
        let spec = Self {
            command: cli.command,
            n: cli.n,
            dist,
            seed: cli.seed,
            grid: cli.grid,
            samples: cli.samples,
            degrees: cli.degrees,
            sizes: cli.sizes,
            z: cli.z.map_or(Complex64::new(default_z, 0.0), |c| c.0),
            c: cli.c,
            out: cli.out,
            format: cli.format,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("--n must be at least 1".into());
        }
        if self.grid.resolution < 2 {
            return Err("grid resolution must be at least 2".into());
        }
        if self.samples < self.command.min_samples() {
            return Err(format!(
                "{} needs --samples >= {}",
                self.command.name(),
                self.command.min_samples()
            ));
        }
        if self.degrees.is_empty() || self.sizes.is_empty() {
            return Err("--degrees and --sizes must be nonempty".into());
        }
        Ok(())
    }

    /// Full spec echo written at the top of every output.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        vec![
            ("tool".into(), "permzero".into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), self.command.name().into()),
            ("n".into(), self.n.to_string()),
            ("dist".into(), self.dist.kind().name().into()),
            ("variance".into(), self.dist.variance().to_string()),
            ("seed".into(), self.seed.to_string()),
            ("grid".into(), self.grid.to_string()),
            ("samples".into(), self.samples.to_string()),
            ("degrees".into(), list(&self.degrees)),
            ("sizes".into(), list(&self.sizes)),
            ("z".into(), format!("{},{}", self.z.re, self.z.im)),
            ("c".into(), self.c.to_string()),
            (
                "format".into(),
                match self.format {
                    Format::Csv => "csv",
                    Format::Json => "json",
                }
                .into(),
            ),
        ]
    }
}
