use std::fs::File;
use std::path::PathBuf;

use clap::{ArgGroup, Args, ValueEnum};
use greedymod::{load_edge_list, GenMetadata, GenSpec, Graph, LoadOptions};
use serde::{Deserialize, Serialize};

use crate::failure::{Failure, InputContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Barabási–Albert preferential attachment.
    Ba,
    /// Uniform random graph with a fixed edge count.
    Er,
}

#[derive(Debug, Args)]
pub struct GenFlags {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Edges added per new node (ba).
    #[arg(long)]
    pub attach: Option<usize>,
    /// Edge count (er).
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl GenFlags {
    pub fn spec(&self) -> Result<GenSpec, Failure> {
        let missing =
            |flag: &str, model: &str| Failure::Usage(format!("--model {model} needs --{flag}"));
        let seed = self.seed;
        match self.model {
            None => Err(Failure::Usage("--model is required".into())),
            Some(Model::Ba) => Ok(GenSpec::Ba {
                n: self.nodes.ok_or_else(|| missing("nodes", "ba"))?,
                m_attach: self.attach.ok_or_else(|| missing("attach", "ba"))?,
                seed,
            }),
            Some(Model::Er) => Ok(GenSpec::Er {
                n: self.nodes.ok_or_else(|| missing("nodes", "er"))?,
                m: self.edges.ok_or_else(|| missing("edges", "er"))?,
                seed,
            }),
        }
    }

    pub fn generate(&self) -> Result<(Graph, GenMetadata), Failure> {
        let spec = self.spec()?;
        let g = spec.generate().input("generating graph")?;
        let meta = GenMetadata::new(spec, &g);
        Ok((g, meta))
    }
}

/// Where the graph comes from: a file or a generator.
#[derive(Debug, Args)]
#[command(group(ArgGroup::new("graph").required(true).args(["input", "model"])))]
pub struct SourceArgs {
    /// Edge-list file, optionally gzip-compressed.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Compact node ids to 0..n in order of first appearance.
    #[arg(long, requires = "input")]
    pub renumber: bool,
    #[command(flatten)]
    pub gen: GenFlags,
}

/// Provenance recorded in run summaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<GenMetadata>,
}

impl SourceArgs {
    pub fn load(&self) -> Result<(Graph, Provenance), Failure> {
        match &self.input {
            Some(path) => {
                let file = File::open(path).input(format!("opening {}", path.display()))?;
                let options = LoadOptions {
                    renumber: self.renumber,
                };
                let g =
                    load_edge_list(file, options).input(format!("reading {}", path.display()))?;
                let provenance = Provenance {
                    input: Some(path.display().to_string()),
                    generator: None,
                };
                Ok((g, provenance))
            }
            None => {
                let (g, meta) = self.gen.generate()?;
                let provenance = Provenance {
                    input: None,
                    generator: Some(meta),
                };
                Ok((g, provenance))
            }
        }
    }
}
