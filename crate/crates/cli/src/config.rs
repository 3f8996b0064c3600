//! Experiment configuration: JSON file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qsearch::families::{build, parse_schedule, Family, FamilyError, FamilyRequest, Partition, Uncompute};
use qsearch::sim::NoiseModel;
use qsearch::synth::{OracleSpec, OracleStyle};
use qsearch::{Circuit, Pattern};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::CliError;

/// Widest register for which `"all"` oracles may be requested.
pub const MAX_ALL_WIDTH: usize = 6;

/// Keys accepted in a configuration file.
const CONFIG_FIELDS: &[&str] = &[
    "family",
    "n",
    "partition",
    "diffuser_size",
    "diffuser_qubits",
    "oracle_style",
    "uncompute",
    "iterations",
    "schedule",
    "oracle_set",
    "shots",
    "noise",
    "seed",
    "out",
];

/// Which marked elements an experiment runs over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleSet {
    All,
    /// `k` distinct masks drawn without replacement with the given seed.
    Sample { k: usize, seed: u64 },
    Explicit(Vec<Pattern>),
}

impl Default for OracleSet {
    fn default() -> Self {
        OracleSet::All
    }
}

impl fmt::Display for OracleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSet::All => f.write_str("all"),
            OracleSet::Sample { k, seed } => write!(f, "sample:{k}:{seed}"),
            OracleSet::Explicit(masks) => {
                let list: Vec<String> = masks.iter().map(Pattern::to_string).collect();
                f.write_str(&list.join(","))
            }
        }
    }
}

impl FromStr for OracleSet {
    type Err = String;

    /// `all`, `sample:k:seed`, `sample(k, seed)` or a comma-separated mask
    /// list.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "all" {
            return Ok(OracleSet::All);
        }
        let sample = s
            .strip_prefix("sample:")
            .map(|rest| rest.split(':').collect::<Vec<_>>())
            .or_else(|| {
                s.strip_prefix("sample(").and_then(|r| r.strip_suffix(')')).map(|rest| rest.split(',').collect())
            });
        if let Some(parts) = sample {
            let [k, seed] = parts[..] else {
                return Err(format!("expected sample:k:seed, got '{s}'"));
            };
            let k = k.trim().parse().map_err(|_| format!("bad sample size '{k}'"))?;
            let seed = seed.trim().parse().map_err(|_| format!("bad sample seed '{seed}'"))?;
            return Ok(OracleSet::Sample { k, seed });
        }
        s.split(',')
            .map(|m| m.trim().parse::<Pattern>().map_err(|e| format!("bad mask '{m}': {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(OracleSet::Explicit)
    }
}

impl Serialize for OracleSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            OracleSet::Explicit(masks) => masks.serialize(serializer),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for OracleSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            List(Vec<Pattern>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::List(masks) => Ok(OracleSet::Explicit(masks)),
        }
    }
}

fn default_style() -> OracleStyle {
    OracleStyle::AncillaRelphase
}

fn default_uncompute() -> Uncompute {
    Uncompute::Full
}

/// One experiment: a family over a set of oracles, simulated exactly and
/// (when `shots > 0`) with noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffuser_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffuser_qubits: Option<Vec<usize>>,
    #[serde(default = "default_style")]
    pub oracle_style: OracleStyle,
    #[serde(default = "default_uncompute")]
    pub uncompute: Uncompute,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// Block schedule such as `"O G2 O G1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
    #[serde(default)]
    pub oracle_set: OracleSet,
    /// Noisy shots per oracle; 0 runs the exact simulator only.
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub seed: u64,
    /// Output directory (not echoed into reports).
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
}

/// Command-line values that override configuration-file fields.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub partition: Option<String>,
    pub oracle: Option<String>,
    pub oracle_set: Option<String>,
    pub shots: Option<u64>,
    pub noise: Option<String>,
    pub seed: Option<u64>,
    pub style: Option<String>,
    pub uncompute: Option<String>,
    pub diffuser_size: Option<usize>,
    pub iterations: Option<usize>,
    pub schedule: Option<String>,
    pub out: Option<PathBuf>,
}

fn invalid(field: &str, message: impl ToString) -> CliError {
    CliError::Invalid { field: field.to_string(), message: message.to_string() }
}

/// Parses `p1=0,p2=0.01,pm=0.005` (`pm` and `p_meas` are synonyms).
pub fn parse_noise(s: &str) -> Result<NoiseModel, CliError> {
    let mut noise = NoiseModel::noiseless();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (key, value) = item.split_once('=').ok_or_else(|| invalid("noise", format!("expected key=value, got '{item}'")))?;
        let value: f64 = value.trim().parse().map_err(|_| invalid("noise", format!("bad number '{value}'")))?;
        match key.trim() {
            "p1" => noise.p1 = value,
            "p2" => noise.p2 = value,
            "pm" | "p_meas" => noise.p_meas = value,
            other => return Err(invalid("noise", format!("unknown key '{other}' (expected p1, p2, pm)"))),
        }
    }
    Ok(noise)
}

fn serde_field_error(e: serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let path = e.path().to_string();
    let text = e.into_inner().to_string();
    let field = match path.as_str() {
        // missing fields are reported at the root, named in backticks
        "." => text.split('`').nth(1).unwrap_or("config").to_string(),
        p => p.split('.').next().unwrap_or(p).to_string(),
    };
    CliError::Invalid { field, message: text }
}

impl ExperimentConfig {
    /// Reads the optional config file, applies `overrides` and validates.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut map = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(Value::Object(map)) => map,
                    Ok(_) => return Err(invalid("config", "configuration must be a JSON object")),
                    Err(e) => return Err(invalid("config", format!("{}: {e}", p.display()))),
                }
            }
            None => Map::new(),
        };
        if let Some(unknown) = map.keys().find(|k| !CONFIG_FIELDS.contains(&k.as_str())) {
            return Err(invalid(unknown, "unknown configuration field"));
        }
        overrides.apply(&mut map)?;
        let config: ExperimentConfig = serde_path_to_error::deserialize(Value::Object(map)).map_err(serde_field_error)?;
        config.validate()?;
        Ok(config)
    }

    /// Family request for one marked element.
    pub fn request(&self, mask: Pattern) -> Result<FamilyRequest, CliError> {
        let oracle = OracleSpec::new(self.n, mask, self.oracle_style).map_err(|e| invalid("oracle_set", e))?;
        let mut req = FamilyRequest::new(self.family, oracle).uncompute(self.uncompute);
        req.iterations = self.iterations;
        req.partition = self.partition.clone();
        req.diffuser_size = self.diffuser_size;
        req.diffuser_qubits = self.diffuser_qubits.clone();
        if let Some(s) = &self.schedule {
            req.schedule = Some(parse_schedule(s).map_err(|e| invalid("schedule", e))?);
        }
        Ok(req)
    }

    /// Builds the circuit for one marked element; construction failures are
    /// configuration errors.
    pub fn circuit(&self, mask: Pattern) -> Result<Circuit, CliError> {
        build(&self.request(mask)?).map_err(|e| family_error(&e))
    }

    /// The concrete masks, in increasing order.
    pub fn masks(&self) -> Result<Vec<Pattern>, CliError> {
        let n = self.n;
        match &self.oracle_set {
            OracleSet::All => {
                if n > MAX_ALL_WIDTH {
                    return Err(invalid("oracle_set", format!("\"all\" is limited to n <= {MAX_ALL_WIDTH}")));
                }
                Ok(Pattern::all(n).collect())
            }
            OracleSet::Sample { k, seed } => {
                let total = 1usize << n.min(24);
                if *k == 0 || *k > total || n > 24 {
                    return Err(invalid("oracle_set", format!("cannot sample {k} of 2^{n} masks")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut values: Vec<usize> = rand::seq::index::sample(&mut rng, total, *k).into_vec();
                values.sort_unstable();
                Ok(values.into_iter().map(|v| Pattern::new(n, v as u64).expect("value below 2^n")).collect())
            }
            OracleSet::Explicit(masks) => {
                if masks.is_empty() {
                    return Err(invalid("oracle_set", "empty mask list"));
                }
                if let Some(bad) = masks.iter().find(|m| m.width() != n) {
                    return Err(invalid("oracle_set", format!("mask {bad} has width {}, expected n = {n}", bad.width())));
                }
                let mut masks = masks.clone();
                masks.sort();
                masks.dedup();
                Ok(masks)
            }
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(invalid("n", "search register must have at least one qubit"));
        }
        self.noise.validate().map_err(|e| invalid("noise", e))?;
        if self.shots == 0 && !self.noise.is_noiseless() {
            return Err(invalid("shots", "noisy simulation needs shots >= 1"));
        }
        let masks = self.masks()?;
        self.circuit(masks[0])?;
        Ok(())
    }

    /// Short label used in artifact names, e.g. `grover_n3`.
    pub fn label(&self) -> String {
        format!("{}_n{}", self.family, self.n)
    }
}

impl Overrides {
    fn apply(&self, map: &mut Map<String, Value>) -> Result<(), CliError> {
        let mut set = |key: &str, value: Value| map.insert(key.to_string(), value);
        if let Some(v) = &self.family {
            set("family", Value::from(v.as_str()));
        }
        if let Some(v) = self.n {
            set("n", Value::from(v));
        }
        if let Some(v) = &self.partition {
            let p: Partition = v.parse().map_err(|e| invalid("partition", e))?;
            set("partition", serde_json::to_value(p).expect("partition serialises"));
        }
        if let Some(v) = &self.oracle_set {
            let s: OracleSet = v.parse().map_err(|e| invalid("oracle_set", e))?;
            set("oracle_set", serde_json::to_value(s).expect("oracle set serialises"));
        }
        if let Some(v) = &self.oracle {
            let mask: Pattern = v.parse().map_err(|e| invalid("oracle", e))?;
            set("oracle_set", serde_json::to_value(OracleSet::Explicit(vec![mask])).expect("mask serialises"));
        }
        if let Some(v) = self.shots {
            set("shots", Value::from(v));
        }
        if let Some(v) = &self.noise {
            set("noise", serde_json::to_value(parse_noise(v)?).expect("noise serialises"));
        }
        if let Some(v) = self.seed {
            set("seed", Value::from(v));
        }
        if let Some(v) = &self.style {
            set("oracle_style", Value::from(v.as_str()));
        }
        if let Some(v) = &self.uncompute {
            set("uncompute", Value::from(v.as_str()));
        }
        if let Some(v) = self.diffuser_size {
            set("diffuser_size", Value::from(v));
        }
        if let Some(v) = self.iterations {
            set("iterations", Value::from(v));
        }
        if let Some(v) = &self.schedule {
            set("schedule", Value::from(v.as_str()));
        }
        if let Some(v) = &self.out {
            set("out", Value::from(v.to_string_lossy().into_owned()));
        }
        // a single --oracle fixes the register width when nothing else does
        if let (Some(v), false) = (&self.oracle, map.contains_key("n")) {
            let width = v.trim().len();
            map.insert("n".to_string(), Value::from(width));
        }
        Ok(())
    }
}

/// Maps a construction failure onto the configuration field responsible.
pub fn family_error(e: &FamilyError) -> CliError {
    let field = match e {
        FamilyError::BadDiffuserSize { .. } => "diffuser_size",
        FamilyError::BadDiffuserQubits { .. } => "diffuser_qubits",
        FamilyError::PartitionWidth { .. } | FamilyError::UnsupportedPartition(_) => "partition",
        FamilyError::BadWidth { .. } => "n",
        FamilyError::BadIterations => "iterations",
        FamilyError::MissingParameter { parameter, .. } => parameter,
        FamilyError::Unsupported { .. } => "uncompute",
        FamilyError::BadStep { .. } => "schedule",
        FamilyError::Synth(_) => "oracle_style",
        FamilyError::Circuit(_) => "family",
    };
    invalid(field, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_set_forms() {
        assert_eq!("all".parse::<OracleSet>().unwrap(), OracleSet::All);
        assert_eq!("sample:8:42".parse::<OracleSet>().unwrap(), OracleSet::Sample { k: 8, seed: 42 });
        assert_eq!("sample(8, 42)".parse::<OracleSet>().unwrap(), OracleSet::Sample { k: 8, seed: 42 });
        let list: OracleSet = "101,011".parse().unwrap();
        assert_eq!(list.to_string(), "101,011");
        assert!("sample:8".parse::<OracleSet>().is_err());
        assert!("10x".parse::<OracleSet>().is_err());
    }

    #[test]
    fn oracle_set_json() {
        for text in [r#""all""#, r#""sample:3:9""#, r#"["10","01"]"#] {
            let s: OracleSet = serde_json::from_str(text).unwrap();
            assert_eq!(serde_json::to_string(&s).unwrap(), text);
        }
    }

    #[test]
    fn noise_flag() {
        let n = parse_noise("p1=0,p2=0.01,pm=0.005").unwrap();
        assert_eq!((n.p1, n.p2, n.p_meas), (0.0, 0.01, 0.005));
        assert!(parse_noise("p3=1").is_err());
        assert!(parse_noise("p2").is_err());
    }

    #[test]
    fn sampled_masks_are_seeded_and_distinct() {
        let overrides = Overrides {
            family: Some("grover".into()),
            n: Some(5),
            oracle_set: Some("sample:8:42".into()),
            ..Default::default()
        };
        let a = ExperimentConfig::load(None, &overrides).unwrap().masks().unwrap();
        let b = ExperimentConfig::load(None, &overrides).unwrap().masks().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn validation_names_fields() {
        let base = Overrides { family: Some("wojter".into()), n: Some(5), ..Default::default() };
        let bad_partition = Overrides { partition: Some("2,2".into()), ..base.clone() };
        let err = ExperimentConfig::load(None, &bad_partition).unwrap_err();
        assert!(matches!(&err, CliError::Invalid { field, .. } if field == "partition"), "{err}");
        let err = ExperimentConfig::load(None, &base).unwrap_err();
        assert!(matches!(&err, CliError::Invalid { field, .. } if field == "partition"), "{err}");

        let all7 = Overrides { family: Some("grover".into()), n: Some(7), ..Default::default() };
        let err = ExperimentConfig::load(None, &all7).unwrap_err();
        assert!(matches!(&err, CliError::Invalid { field, .. } if field == "oracle_set"), "{err}");

        let noisy_exact = Overrides { family: Some("grover".into()), n: Some(3), noise: Some("p2=0.1".into()), ..Default::default() };
        let err = ExperimentConfig::load(None, &noisy_exact).unwrap_err();
        assert!(matches!(&err, CliError::Invalid { field, .. } if field == "shots"), "{err}");

        let typo = Overrides { family: Some("grovr".into()), n: Some(3), ..Default::default() };
        let err = ExperimentConfig::load(None, &typo).unwrap_err();
        assert!(matches!(&err, CliError::Invalid { field, .. } if field == "family"), "{err}");

        let missing = Overrides { n: Some(3), ..Default::default() };
        let err = ExperimentConfig::load(None, &missing).unwrap_err();
        assert!(matches!(&err, CliError::Invalid { field, .. } if field == "family"), "{err}");
    }

    #[test]
    fn oracle_flag_implies_width() {
        let o = Overrides { family: Some("grover".into()), oracle: Some("10110".into()), ..Default::default() };
        let c = ExperimentConfig::load(None, &o).unwrap();
        assert_eq!(c.n, 5);
        assert_eq!(c.masks().unwrap(), vec!["10110".parse().unwrap()]);
    }
}
