use std::fmt;
use std::path::{Path, PathBuf};

use acyclica::exactla::Field;
use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    Koszul,
    Ext,
    Coresolution,
    DualKoszul,
    Concentration,
    StableRange,
    MittagLeffler,
    Dress,
    Universal,
    #[value(name = "remark83", alias = "quasi-iso")]
    #[serde(rename = "remark83", alias = "quasi-iso")]
    QuasiIso,
    All,
}

impl SuiteId {
    pub const EACH: [SuiteId; 10] = [
        SuiteId::Koszul,
        SuiteId::Ext,
        SuiteId::Coresolution,
        SuiteId::DualKoszul,
        SuiteId::Concentration,
        SuiteId::StableRange,
        SuiteId::MittagLeffler,
        SuiteId::Dress,
        SuiteId::Universal,
        SuiteId::QuasiIso,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Koszul => "koszul",
            SuiteId::Ext => "ext",
            SuiteId::Coresolution => "coresolution",
            SuiteId::DualKoszul => "dual-koszul",
            SuiteId::Concentration => "concentration",
            SuiteId::StableRange => "stable-range",
            SuiteId::MittagLeffler => "mittag-leffler",
            SuiteId::Dress => "dress",
            SuiteId::Universal => "universal",
            SuiteId::QuasiIso => "remark83",
            SuiteId::All => "all",
        }
    }

    /// Flags the suite reads; anything else given for a single suite is a usage error.
    fn uses(self) -> &'static [Param] {
        use Param::*;
        match self {
            SuiteId::Koszul | SuiteId::Ext | SuiteId::DualKoszul | SuiteId::QuasiIso => &[M, MaxInternalDegree],
            SuiteId::Coresolution | SuiteId::MittagLeffler => &[A, MaxInternalDegree],
            SuiteId::Concentration => &[A, M, MaxInternalDegree],
            SuiteId::StableRange => &[A, MinPos, MaxPos, MaxInternalDegree],
            SuiteId::Dress => &[Trials, Seed],
            SuiteId::Universal => &[NGens, MaxLength],
            SuiteId::All => &[M, A, MinPos, MaxPos, MaxInternalDegree, NGens, MaxLength, Trials, Seed],
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Param {
    M,
    A,
    MinPos,
    MaxPos,
    MaxInternalDegree,
    NGens,
    MaxLength,
    Trials,
    Seed,
}

impl Param {
    fn flag(self) -> &'static str {
        match self {
            Param::M => "--m",
            Param::A => "--a",
            Param::MinPos => "--min-pos",
            Param::MaxPos => "--max-pos",
            Param::MaxInternalDegree => "--max-internal-degree",
            Param::NGens => "--n-gens",
            Param::MaxLength => "--max-length",
            Param::Trials => "--trials",
            Param::Seed => "--seed",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Run verification suites over exact arithmetic and write a canonical report.
///
/// Every flag may also come from a JSON config file with the same kebab-case keys;
/// flags given on the command line win.
#[derive(Debug, Default, Parser, Deserialize)]
#[command(name = "acyclica", version, allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Args {
    /// JSON config file mirroring the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub suite: Option<SuiteId>,
    /// "Q" or "Fp:<p>".
    #[arg(long)]
    pub field: Option<String>,
    /// Number of polynomial variables, or the stage for the concentration suite.
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension of W.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub min_pos: Option<i64>,
    #[arg(long)]
    pub max_pos: Option<i64>,
    #[arg(long)]
    pub max_internal_degree: Option<i64>,
    /// Generators of the universal example.
    #[arg(long)]
    pub n_gens: Option<u32>,
    /// Word-length truncation of the universal example.
    #[arg(long)]
    pub max_length: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed, decimal or 0x-prefixed hex; recorded verbatim.
    #[arg(long)]
    pub seed: Option<String>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Args {
    fn overlay(self, base: Args) -> Args {
        Args {
            config: None,
            suite: self.suite.or(base.suite),
            field: self.field.or(base.field),
            m: self.m.or(base.m),
            a: self.a.or(base.a),
            min_pos: self.min_pos.or(base.min_pos),
            max_pos: self.max_pos.or(base.max_pos),
            max_internal_degree: self.max_internal_degree.or(base.max_internal_degree),
            n_gens: self.n_gens.or(base.n_gens),
            max_length: self.max_length.or(base.max_length),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }

    fn given(&self, p: Param) -> bool {
        match p {
            Param::M => self.m.is_some(),
            Param::A => self.a.is_some(),
            Param::MinPos => self.min_pos.is_some(),
            Param::MaxPos => self.max_pos.is_some(),
            Param::MaxInternalDegree => self.max_internal_degree.is_some(),
            Param::NGens => self.n_gens.is_some(),
            Param::MaxLength => self.max_length.is_some(),
            Param::Trials => self.trials.is_some(),
            Param::Seed => self.seed.is_some(),
        }
    }
}

pub const DEFAULT_SEED: &str = "0x5eed";

/// A validated configuration. Unset parameters fall back to each suite's defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: SuiteId,
    pub field: Option<Field>,
    pub m: Option<usize>,
    pub a: Option<usize>,
    pub positions: (Option<i64>, Option<i64>),
    pub max_internal_degree: Option<i64>,
    pub n_gens: Option<u32>,
    pub max_length: Option<usize>,
    pub trials: Option<usize>,
    pub seed_text: String,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn parse_seed(s: &str) -> Result<u64> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.with_context(|| format!("invalid seed {s:?}"))
}

fn in_range<T: PartialOrd + fmt::Display + Copy>(flag: &str, v: Option<T>, lo: T, hi: T) -> Result<()> {
    match v {
        Some(x) if x < lo || x > hi => bail!("{flag} must lie in {lo}..={hi}, got {x}"),
        _ => Ok(()),
    }
}

pub fn load_file(path: &Path) -> Result<Args> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl SuiteConfig {
    pub fn from_args(args: Args) -> Result<SuiteConfig> {
        let args = match &args.config {
            Some(path) => {
                let file = load_file(path)?;
                args.overlay(file)
            }
            None => args,
        };
        let suite = args.suite.context("no suite given; use --suite or a config file")?;
        for p in [
            Param::M,
            Param::A,
            Param::MinPos,
            Param::MaxPos,
            Param::MaxInternalDegree,
            Param::NGens,
            Param::MaxLength,
            Param::Trials,
            Param::Seed,
        ] {
            if args.given(p) && !suite.uses().contains(&p) {
                bail!("{} is not used by suite {suite}", p.flag());
            }
        }
        let field = args
            .field
            .as_deref()
            .map(str::parse::<Field>)
            .transpose()
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        in_range("--m", args.m, 1, 6)?;
        in_range("--a", args.a, 1, 6)?;
        in_range("--max-internal-degree", args.max_internal_degree, 0, 16)?;
        in_range("--n-gens", args.n_gens, 1, 8)?;
        in_range("--max-length", args.max_length, 1, 10)?;
        in_range("--trials", args.trials, 1, 100_000)?;
        if let (Some(lo), Some(hi)) = (args.min_pos, args.max_pos) {
            if lo > hi {
                bail!("--min-pos {lo} exceeds --max-pos {hi}");
            }
        }
        if let (SuiteId::Concentration, Some(m), Some(a)) = (suite, args.m, args.a) {
            if m > a {
                bail!("--m {m} exceeds --a {a}");
            }
        }
        let seed_text = args.seed.unwrap_or_else(|| DEFAULT_SEED.to_string());
        let seed = parse_seed(&seed_text)?;
        Ok(SuiteConfig {
            suite,
            field,
            m: args.m,
            a: args.a,
            positions: (args.min_pos, args.max_pos),
            max_internal_degree: args.max_internal_degree,
            n_gens: args.n_gens,
            max_length: args.max_length,
            trials: args.trials,
            seed_text,
            seed,
            out: args.out,
            format: args.format.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(argv: &[&str]) -> Result<SuiteConfig> {
        let mut full = vec!["acyclica"];
        full.extend_from_slice(argv);
        SuiteConfig::from_args(Args::try_parse_from(full)?)
    }

    #[test]
    fn seeds_keep_their_spelling() {
        let c = parse(&["--suite", "dress", "--seed", "0x10"]).unwrap();
        assert_eq!((c.seed, c.seed_text.as_str()), (16, "0x10"));
        assert_eq!(parse(&["--suite", "dress", "--seed", "16"]).unwrap().seed, 16);
        assert!(parse(&["--suite", "dress", "--seed", "sixteen"]).is_err());
    }

    #[test]
    fn per_suite_validation() {
        assert!(parse(&["--suite", "koszul", "--trials", "3"]).is_err());
        assert!(parse(&["--suite", "koszul", "--m", "0"]).is_err());
        assert!(parse(&["--suite", "stable-range", "--min-pos", "2", "--max-pos", "-1"]).is_err());
        assert!(parse(&["--suite", "concentration", "--a", "2", "--m", "3"]).is_err());
        assert!(parse(&["--suite", "koszul", "--field", "Fp:4"]).is_err());
        let c = parse(&["--suite", "stable-range", "--min-pos", "-3"]).unwrap();
        assert_eq!(c.positions, (Some(-3), None));
    }

    #[test]
    fn flags_override_the_file() {
        let file: Args = serde_json::from_str(r#"{"suite": "koszul", "m": 3, "field": "Q"}"#).unwrap();
        let flags = Args {
            m: Some(1),
            ..Args::default()
        };
        let merged = flags.overlay(file);
        assert_eq!(
            (merged.suite, merged.m, merged.field.as_deref()),
            (Some(SuiteId::Koszul), Some(1), Some("Q"))
        );
        assert!(serde_json::from_str::<Args>(r#"{"suite": "koszul", "mm": 3}"#).is_err());
    }
}
