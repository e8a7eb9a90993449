//! Flat JSON experiment configs.
//!
//! A config is one JSON object. The keys `experiment`, `seed`, `output`,
//! `format`, `guards` and `cache_dir` are shared; every other key belongs
//! to the selected experiment and is checked against its parameter type.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ipstar_core::Guards;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    IpstarSubgroup,
    AvoidZx,
    Jdiff,
    CrDiff,
    GoswamiPrimes,
    GoswamiGeneric,
    FreeSemigroup,
    ZxPartition,
    DeltaRPrimes,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::IpstarSubgroup,
        ExperimentKind::AvoidZx,
        ExperimentKind::Jdiff,
        ExperimentKind::CrDiff,
        ExperimentKind::GoswamiPrimes,
        ExperimentKind::GoswamiGeneric,
        ExperimentKind::FreeSemigroup,
        ExperimentKind::ZxPartition,
        ExperimentKind::DeltaRPrimes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::IpstarSubgroup => "ipstar-subgroup",
            ExperimentKind::AvoidZx => "avoid-zx",
            ExperimentKind::Jdiff => "jdiff",
            ExperimentKind::CrDiff => "cr-diff",
            ExperimentKind::GoswamiPrimes => "goswami-primes",
            ExperimentKind::GoswamiGeneric => "goswami-generic",
            ExperimentKind::FreeSemigroup => "freesemigroup",
            ExperimentKind::ZxPartition => "zx-partition",
            ExperimentKind::DeltaRPrimes => "delta-r-primes",
        }
    }

    /// What the experiment checks, for `--explain`.
    pub fn explain(self) -> &'static str {
        match self {
            ExperimentKind::IpstarSubgroup => {
                "A subgroup kZ of index k meets the finite sums of every sequence of length k, by \
                 pigeonhole on prefix sums. The experiment certifies kZ exhaustively at r = k + 1 over \
                 a symmetric window and exhibits the all-ones sequence of length k - 1, whose sums \
                 1..k-1 all miss kZ."
            }
            ExperimentKind::AvoidZx => {
                "A subgroup of infinite index in Z[x], such as xZ[x] or 2Z[x], misses all finite \
                 sums of some infinite sequence. The experiment builds the greedy prefix of such a \
                 sequence and checks every finite sum exhaustively."
            }
            ExperimentKind::Jdiff => {
                "If A is a J-set then A - A meets every finite-sum set. Taking the pair of \
                 sequences y and x + y, a J-witness (a, H) yields sum_H x as a difference of two \
                 members of A. The experiment runs this on seeded random sequences for A = mN."
            }
            ExperimentKind::CrDiff => {
                "If A satisfies the J-set condition with H inside {1..r} for families of k \
                 sequences, then A - A meets the finite sums of every length-r sequence. The \
                 experiment samples families for k = 2 and certifies A - A on a window at r."
            }
            ExperimentKind::GoswamiPrimes => {
                "Some dilation kN lies inside (P - P)(P - P) for the primes P. The experiment \
                 checks every candidate k up to k_max against all multiples up to M, listing the \
                 multiples that have no factorisation through P - P."
            }
            ExperimentKind::GoswamiGeneric => {
                "For A and B with enough finite-sum structure and a sequence b, the set \
                 D = A ∩ ∩_{y in FS(b)} yA multiplies every nonzero x into AB. The experiment \
                 computes D on a window and factors r*x for each r in D."
            }
            ExperimentKind::FreeSemigroup => {
                "In the free semigroup on {a, b} the set A = Fa is a J-set, yet its quotient \
                 A^{-1}A contains no power of b, so it cannot meet the products b, bb, bbb, .... The \
                 experiment computes the quotient exhaustively up to a word length."
            }
            ExperimentKind::ZxPartition => {
                "In Z[x] the cell xZ[x] avoids the finite sums of some sequence, and its \
                 complement is not multiplicatively thick because x times anything lands in xZ[x]. \
                 The experiment produces both diagnostics plus dilation density probes. These are \
                 necessary-condition checks only."
            }
            ExperimentKind::DeltaRPrimes => {
                "Checks, for small r, whether every r-element subset of [1..B] has a positive \
                 pairwise difference in P - P, reporting any subset whose differences all miss it."
            }
        }
    }

    /// Whether the experiment draws from the seeded sampler.
    pub fn is_randomized(self) -> bool {
        matches!(self, ExperimentKind::Jdiff | ExperimentKind::CrDiff)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| LabError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(LabError::InvalidConfig(format!(
                "format: expected json or csv, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IpstarSubgroupParams {
    pub k: i64,
    /// Window is `[-window..window]` without 0.
    pub window: i64,
    /// Also scan every `r` in `1..=k+1`.
    pub scan_min_r: bool,
}

impl Default for IpstarSubgroupParams {
    fn default() -> Self {
        IpstarSubgroupParams {
            k: 3,
            window: 10,
            scan_min_r: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AvoidZxParams {
    /// Generators of the subgroups, as polynomials.
    pub generators: Vec<String>,
    pub n: usize,
}

impl Default for AvoidZxParams {
    fn default() -> Self {
        AvoidZxParams {
            generators: vec!["x".into(), "2".into()],
            n: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JdiffParams {
    /// `A = modulus * N`.
    pub modulus: i64,
    pub samples: usize,
    pub length: usize,
    pub term_min: i64,
    pub term_max: i64,
    /// `y` ranges over `[1..y_max]`.
    pub y_max: i64,
    /// Shifts range over `[0..a_max]`.
    pub a_max: i64,
}

impl Default for JdiffParams {
    fn default() -> Self {
        JdiffParams {
            modulus: 2,
            samples: 100,
            length: 8,
            term_min: 1,
            term_max: 50,
            y_max: 10,
            a_max: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrDiffParams {
    pub modulus: i64,
    pub k: usize,
    pub r: usize,
    pub samples: usize,
    pub term_max: i64,
    pub a_max: i64,
    /// Certification window `[-window..window]` without 0.
    pub window: i64,
    /// `A` is truncated to `[1..bound]` for the difference set.
    pub bound: u64,
}

impl Default for CrDiffParams {
    fn default() -> Self {
        CrDiffParams {
            modulus: 2,
            k: 2,
            r: 2,
            samples: 50,
            term_max: 50,
            a_max: 20,
            window: 10,
            bound: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoswamiPrimesParams {
    pub prime_limit: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub k_max: u64,
}

impl Default for GoswamiPrimesParams {
    fn default() -> Self {
        GoswamiPrimesParams {
            prime_limit: 1_000_000,
            m: 10_000,
            k_max: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoswamiGenericParams {
    /// `A = a_mod * Z`.
    pub a_mod: i64,
    /// `B = b_mod * Z`.
    pub b_mod: i64,
    pub b: Vec<i64>,
    pub x_window: i64,
    pub r_window: i64,
}

impl Default for GoswamiGenericParams {
    fn default() -> Self {
        GoswamiGenericParams {
            a_mod: 2,
            b_mod: 3,
            b: vec![1, 2],
            x_window: 10,
            r_window: 60,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreeSemigroupParams {
    /// Bound on `|u w|` in the quotient scan; quotient words reach `max_len - 2`.
    pub max_len: usize,
    /// Separator words tried by the J-witness search.
    pub witness_window: usize,
}

impl Default for FreeSemigroupParams {
    fn default() -> Self {
        FreeSemigroupParams {
            max_len: 14,
            witness_window: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZxPartitionParams {
    pub n: usize,
    /// Sizes of the canonical windows for the thickness check.
    pub windows: Vec<usize>,
    /// Nonzero polynomials seeding the dilation family.
    pub seed_size: usize,
    pub density_n: usize,
}

impl Default for ZxPartitionParams {
    fn default() -> Self {
        ZxPartitionParams {
            n: 12,
            windows: vec![10, 50, 200, 1000],
            seed_size: 20,
            density_n: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeltaRPrimesParams {
    pub rs: Vec<usize>,
    /// Subsets are drawn from `[1..bound]`.
    pub bound: u64,
    pub prime_limit: u64,
    pub max_examples: usize,
    pub max_subsets: u64,
}

impl Default for DeltaRPrimesParams {
    fn default() -> Self {
        DeltaRPrimesParams {
            rs: vec![2, 3, 4],
            bound: 30,
            prime_limit: 10_000,
            max_examples: 5,
            max_subsets: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    IpstarSubgroup(IpstarSubgroupParams),
    AvoidZx(AvoidZxParams),
    Jdiff(JdiffParams),
    CrDiff(CrDiffParams),
    GoswamiPrimes(GoswamiPrimesParams),
    GoswamiGeneric(GoswamiGenericParams),
    FreeSemigroup(FreeSemigroupParams),
    ZxPartition(ZxPartitionParams),
    DeltaRPrimes(DeltaRPrimesParams),
}

fn parse<T: DeserializeOwned>(kind: ExperimentKind, rest: Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(rest)).map_err(|e| LabError::InvalidConfig(format!("{kind}: {e}")))
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(LabError::InvalidConfig(what.to_string()))
    }
}

impl Params {
    pub fn defaults(kind: ExperimentKind) -> Self {
        Params::parse(kind, Map::new()).expect("defaults parse")
    }

    fn parse(kind: ExperimentKind, rest: Map<String, Value>) -> Result<Self> {
        Ok(match kind {
            ExperimentKind::IpstarSubgroup => Params::IpstarSubgroup(parse(kind, rest)?),
            ExperimentKind::AvoidZx => Params::AvoidZx(parse(kind, rest)?),
            ExperimentKind::Jdiff => Params::Jdiff(parse(kind, rest)?),
            ExperimentKind::CrDiff => Params::CrDiff(parse(kind, rest)?),
            ExperimentKind::GoswamiPrimes => Params::GoswamiPrimes(parse(kind, rest)?),
            ExperimentKind::GoswamiGeneric => Params::GoswamiGeneric(parse(kind, rest)?),
            ExperimentKind::FreeSemigroup => Params::FreeSemigroup(parse(kind, rest)?),
            ExperimentKind::ZxPartition => Params::ZxPartition(parse(kind, rest)?),
            ExperimentKind::DeltaRPrimes => Params::DeltaRPrimes(parse(kind, rest)?),
        })
    }

    fn to_map(&self) -> Map<String, Value> {
        let v = match self {
            Params::IpstarSubgroup(p) => serde_json::to_value(p),
            Params::AvoidZx(p) => serde_json::to_value(p),
            Params::Jdiff(p) => serde_json::to_value(p),
            Params::CrDiff(p) => serde_json::to_value(p),
            Params::GoswamiPrimes(p) => serde_json::to_value(p),
            Params::GoswamiGeneric(p) => serde_json::to_value(p),
            Params::FreeSemigroup(p) => serde_json::to_value(p),
            Params::ZxPartition(p) => serde_json::to_value(p),
            Params::DeltaRPrimes(p) => serde_json::to_value(p),
        };
        match v.expect("params serialize") {
            Value::Object(m) => m,
            _ => unreachable!("params are structs"),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Params::IpstarSubgroup(p) => {
                require(p.k >= 2, "ipstar-subgroup: k must be at least 2")?;
                require(p.window >= 1, "ipstar-subgroup: window must be positive")
            }
            Params::AvoidZx(p) => {
                require(!p.generators.is_empty(), "avoid-zx: generators must be nonempty")?;
                require(p.n >= 1, "avoid-zx: n must be positive")
            }
            Params::Jdiff(p) => {
                require(p.modulus >= 1, "jdiff: modulus must be positive")?;
                require(
                    p.samples >= 1 && p.length >= 1,
                    "jdiff: samples and length must be positive",
                )?;
                require(
                    p.term_min >= 1 && p.term_min <= p.term_max,
                    "jdiff: need 1 <= term_min <= term_max",
                )?;
                require(
                    p.y_max >= 1 && p.a_max >= 0,
                    "jdiff: y_max must be positive and a_max nonnegative",
                )
            }
            Params::CrDiff(p) => {
                require(
                    p.modulus >= 1 && p.k >= 1 && p.r >= 1,
                    "cr-diff: modulus, k and r must be positive",
                )?;
                require(
                    p.samples >= 1 && p.term_max >= 1,
                    "cr-diff: samples and term_max must be positive",
                )?;
                require(
                    p.window >= 1 && p.bound >= 1 && p.a_max >= 0,
                    "cr-diff: window and bound must be positive",
                )
            }
            Params::GoswamiPrimes(p) => {
                require(p.prime_limit >= 2, "goswami-primes: prime_limit must be at least 2")?;
                require(p.m >= 1 && p.k_max >= 1, "goswami-primes: M and k_max must be positive")?;
                require(
                    p.m + 2 <= p.prime_limit,
                    "goswami-primes: prime_limit must exceed M + 1",
                )
            }
            Params::GoswamiGeneric(p) => {
                require(
                    p.a_mod >= 1 && p.b_mod >= 1,
                    "goswami-generic: a_mod and b_mod must be positive",
                )?;
                require(!p.b.is_empty(), "goswami-generic: b must be nonempty")?;
                require(
                    p.x_window >= 1 && p.r_window >= 1,
                    "goswami-generic: windows must be positive",
                )
            }
            Params::FreeSemigroup(p) => {
                require(p.max_len >= 3, "freesemigroup: max_len must be at least 3")?;
                require(p.witness_window >= 1, "freesemigroup: witness_window must be positive")
            }
            Params::ZxPartition(p) => {
                require(
                    p.n >= 1 && !p.windows.is_empty(),
                    "zx-partition: n and windows must be positive",
                )?;
                require(
                    p.windows.iter().all(|&w| w >= 1),
                    "zx-partition: window sizes must be positive",
                )?;
                require(
                    p.seed_size >= 1 && p.density_n >= 1,
                    "zx-partition: seed_size and density_n must be positive",
                )
            }
            Params::DeltaRPrimes(p) => {
                require(
                    !p.rs.is_empty() && p.rs.iter().all(|&r| r >= 2),
                    "delta-r-primes: every r must be at least 2",
                )?;
                require(p.bound >= 2, "delta-r-primes: bound must be at least 2")?;
                require(
                    p.bound + 2 <= p.prime_limit,
                    "delta-r-primes: prime_limit must exceed bound + 1",
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub guards: Guards,
    pub cache_dir: PathBuf,
    pub params: Params,
}

pub const DEFAULT_CACHE_DIR: &str = ".ipstar-cache";

fn take<T: DeserializeOwned>(map: &mut Map<String, Value>, key: &str) -> Result<Option<T>> {
    map.remove(key)
        .filter(|v| !v.is_null())
        .map(|v| serde_json::from_value(v).map_err(|e| LabError::InvalidConfig(format!("{key}: {e}"))))
        .transpose()
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment: kind,
            seed: 0,
            output: None,
            format: Format::Json,
            guards: Guards::default(),
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            params: Params::defaults(kind),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| LabError::InvalidConfig(e.to_string()))?;
        Self::from_value(v)
    }

    pub fn from_value(v: Value) -> Result<Self> {
        let Value::Object(mut map) = v else {
            return Err(LabError::InvalidConfig("config must be a JSON object".into()));
        };
        let name: String =
            take(&mut map, "experiment")?.ok_or_else(|| LabError::InvalidConfig("missing key `experiment`".into()))?;
        let kind: ExperimentKind = name.parse()?;
        let cfg = ExperimentConfig {
            experiment: kind,
            seed: take(&mut map, "seed")?.unwrap_or(0),
            output: take(&mut map, "output")?,
            format: take(&mut map, "format")?.unwrap_or_default(),
            guards: take(&mut map, "guards")?.unwrap_or_default(),
            cache_dir: take(&mut map, "cache_dir")?.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
            params: Params::parse(kind, map)?,
        };
        cfg.params.validate()?;
        Ok(cfg)
    }

    /// Canonical form: every key present, keys sorted.
    pub fn to_value(&self) -> Value {
        let mut map = self.params.to_map();
        map.insert("experiment".into(), Value::from(self.experiment.name()));
        map.insert("seed".into(), Value::from(self.seed));
        map.insert("output".into(), serde_json::to_value(&self.output).expect("path"));
        map.insert("format".into(), serde_json::to_value(self.format).expect("format"));
        map.insert("guards".into(), serde_json::to_value(&self.guards).expect("guards"));
        map.insert("cache_dir".into(), serde_json::to_value(&self.cache_dir).expect("path"));
        Value::Object(map)
    }

    /// The config fields that determine results; output location and
    /// format are excluded so the same run hashes equally in every format.
    pub fn result_value(&self) -> Value {
        let mut v = self.to_value();
        let map = v.as_object_mut().expect("object");
        for key in ["output", "format", "cache_dir"] {
            map.remove(key);
        }
        v
    }

    /// Applies `key=value` overrides; values parse as JSON, else as strings.
    pub fn with_overrides(base: Value, overrides: &[String]) -> Result<Self> {
        let Value::Object(mut map) = base else {
            return Err(LabError::InvalidConfig("config must be a JSON object".into()));
        };
        for o in overrides {
            let (key, raw) = o
                .split_once('=')
                .ok_or_else(|| LabError::InvalidConfig(format!("override `{o}` is not key=value")))?;
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::from(raw));
            map.insert(key.trim().to_string(), value);
        }
        Self::from_value(Value::Object(map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        for kind in ExperimentKind::ALL {
            let cfg = ExperimentConfig::defaults(kind);
            let text = serde_json::to_string(&cfg.to_value()).unwrap();
            assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg, "{kind}");
        }
        let cfg =
            ExperimentConfig::from_json(r#"{"experiment":"ipstar-subgroup","k":4,"seed":9,"format":"csv"}"#).unwrap();
        let again = ExperimentConfig::from_value(cfg.to_value()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_value(), cfg.to_value());
    }

    #[test]
    fn rejects_unknown_keys_and_names() {
        let err = ExperimentConfig::from_json(r#"{"experiment":"ipstar-subgroup","kk":4}"#).unwrap_err();
        assert!(matches!(&err, LabError::InvalidConfig(m) if m.contains("kk")), "{err}");
        let err = ExperimentConfig::from_json(r#"{"experiment":"nope"}"#).unwrap_err();
        assert!(matches!(err, LabError::UnknownExperiment(_)));
        let err = ExperimentConfig::from_json(r#"{"experiment":"jdiff","guards":{"max_q":1}}"#).unwrap_err();
        assert!(matches!(err, LabError::InvalidConfig(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn validates_bounds() {
        for bad in [
            r#"{"experiment":"ipstar-subgroup","k":0}"#,
            r#"{"experiment":"goswami-primes","M":0}"#,
            r#"{"experiment":"jdiff","term_min":5,"term_max":4}"#,
            r#"{"experiment":"delta-r-primes","rs":[1]}"#,
        ] {
            assert!(
                matches!(ExperimentConfig::from_json(bad), Err(LabError::InvalidConfig(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn overrides_parse_values() {
        let base = serde_json::json!({"experiment": "goswami-primes"});
        let cfg = ExperimentConfig::with_overrides(base, &["M=500".into(), "prime_limit=1000".into()]).unwrap();
        let Params::GoswamiPrimes(p) = &cfg.params else {
            panic!()
        };
        assert_eq!((p.m, p.prime_limit), (500, 1000));
        let base = serde_json::json!({"experiment": "avoid-zx"});
        let cfg =
            ExperimentConfig::with_overrides(base, &[r#"generators=["x^2"]"#.into(), "format=csv".into()]).unwrap();
        assert_eq!(cfg.format, Format::Csv);
    }
}
