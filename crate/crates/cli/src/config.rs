use aklt_core::oracle::Caps;
use aklt_core::Method;
use serde::Serialize;

use crate::args::{Format, IntRange, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Spectrum,
    Entropy,
    Sweep,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CapsConfig {
    pub max_dim: usize,
    pub max_entries: usize,
}

impl From<CapsConfig> for Caps {
    fn from(c: CapsConfig) -> Caps {
        Caps {
            max_dim: c.max_dim,
            max_entries: c.max_entries,
        }
    }
}

impl CapsConfig {
    pub fn with_max_dim(max_dim: usize) -> Self {
        CapsConfig {
            max_dim,
            max_entries: Caps::default().max_entries,
        }
    }
}

/// Everything that determines a run's output. There is no seed: every
/// computation is deterministic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub spin: Option<IntRange>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<IntRange>,
    #[serde(skip_serializing_if = "Vec::is_empty", serialize_with = "method_names")]
    pub methods: Vec<Method>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_spin: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_length: Option<usize>,
    pub format: Format,
    pub caps: CapsConfig,
}

impl RunConfig {
    pub fn new(command: CommandKind, format: Format, max_dim: usize) -> Self {
        RunConfig {
            command,
            suite: None,
            spin: None,
            length: None,
            methods: Vec::new(),
            alpha: Vec::new(),
            max_spin: None,
            max_length: None,
            format,
            caps: CapsConfig::with_max_dim(max_dim),
        }
    }

    pub fn caps(&self) -> Caps {
        self.caps.into()
    }
}

fn method_names<S: serde::Serializer>(methods: &[Method], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(methods.iter().map(|m| m.as_str()))
}
