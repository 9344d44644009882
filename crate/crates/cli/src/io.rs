use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use xzsat::hamiltonian::{parse_instance, XZInstance};
use xzsat::{NumericState, RingReal};

pub fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes `text` to `path`, or to standard output without one.
pub fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

pub fn load_instance(path: &Path) -> anyhow::Result<XZInstance> {
    parse_instance(&read(path)?).with_context(|| format!("invalid instance {}", path.display()))
}

/// An amplitude is either a float or an exact ring literal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Numeric(f64),
    Exact(RingReal),
}

impl Amplitude {
    fn value(&self) -> f64 {
        match self {
            Amplitude::Numeric(x) => *x,
            Amplitude::Exact(r) => r.to_f64(),
        }
    }
}

/// `{ "n": …, "amplitudes": [...], "norm_squared": … }`
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<Amplitude>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_squared: Option<f64>,
}

impl StateFile {
    pub fn load(path: &Path) -> anyhow::Result<NumericState> {
        let file: StateFile =
            serde_json::from_str(&read(path)?).with_context(|| format!("invalid state file {}", path.display()))?;
        if file.amplitudes.len() != 1usize.checked_shl(file.n as u32).unwrap_or(0) {
            bail!(
                "state file declares n = {} but has {} amplitudes",
                file.n,
                file.amplitudes.len()
            );
        }
        let state = NumericState::from_amplitudes(file.amplitudes.iter().map(Amplitude::value).collect())?;
        if let Some(declared) = file.norm_squared {
            let actual = state.norm_sqr();
            if (declared - actual).abs() > 1e-9 {
                bail!("state file declares norm_squared {declared} but amplitudes give {actual}");
            }
        }
        Ok(state)
    }
}
