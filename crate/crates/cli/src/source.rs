use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;

use theta_forge::graph::{self, make_named, parse_graph, Graph, NamedFamily, ProductKind};

use crate::report::CliError;

/// Where a graph comes from and how it is modified.
#[derive(Clone, Debug, Default)]
pub struct GraphSpec {
    pub family: Option<String>,
    pub file: Option<PathBuf>,
    pub complement: bool,
    pub product: Option<(String, String)>,
}

#[derive(Args, Clone, Debug)]
pub struct GraphArgs {
    /// Named graph: K:n, C:n, E:n, petersen or hamming:l:d1,d2,...
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub family: Option<String>,
    /// Edge-list file (`n=<count>` header, then one `u v` pair per line).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Replace the graph by its complement (applied before --product).
    #[arg(long)]
    pub complement: bool,
    /// Product with another graph: strong|disj|lex|cart|hom <family or file>.
    #[arg(long, num_args = 2, value_names = ["KIND", "OTHER"])]
    pub product: Option<Vec<String>>,
}

impl From<&GraphArgs> for GraphSpec {
    fn from(a: &GraphArgs) -> Self {
        GraphSpec {
            family: a.family.clone(),
            file: a.file.clone(),
            complement: a.complement,
            product: a.product.as_ref().map(|p| (p[0].clone(), p[1].clone())),
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct PairArgs {
    /// Source graph as a family.
    #[arg(long, conflicts_with = "g_file", required_unless_present = "g_file")]
    pub g: Option<String>,
    /// Source graph as an edge-list file.
    #[arg(long)]
    pub g_file: Option<PathBuf>,
    /// Use the complement of the source graph.
    #[arg(long)]
    pub g_complement: bool,
    /// Target graph as a family.
    #[arg(long, conflicts_with = "h_file", required_unless_present = "h_file")]
    pub h: Option<String>,
    /// Target graph as an edge-list file.
    #[arg(long)]
    pub h_file: Option<PathBuf>,
    /// Use the complement of the target graph.
    #[arg(long)]
    pub h_complement: bool,
}

impl PairArgs {
    pub fn specs(&self) -> (GraphSpec, GraphSpec) {
        (
            GraphSpec {
                family: self.g.clone(),
                file: self.g_file.clone(),
                complement: self.g_complement,
                product: None,
            },
            GraphSpec {
                family: self.h.clone(),
                file: self.h_file.clone(),
                complement: self.h_complement,
                product: None,
            },
        )
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn family(text: &str) -> Result<Graph, CliError> {
    Ok(make_named(&text.parse::<NamedFamily>()?)?)
}

fn graph_file(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read_file(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// `OTHER` of `--product` is a family when it parses as one, else a file.
fn family_or_file(text: &str) -> Result<Graph, CliError> {
    match text.parse::<NamedFamily>() {
        Ok(f) => Ok(make_named(&f)?),
        Err(e) if Path::new(text).is_file() => graph_file(Path::new(text)).map_err(|f| CliError::input(format!("{e}; {f}"))),
        Err(e) => Err(e.into()),
    }
}

impl GraphSpec {
    pub fn load(&self) -> Result<(Graph, String), CliError> {
        let (mut g, mut label) = match (&self.family, &self.file) {
            (Some(f), None) => (family(f)?, f.clone()),
            (None, Some(p)) => (graph_file(p)?, p.display().to_string()),
            _ => return Err(CliError::input("give exactly one of a family or a file")),
        };
        if self.complement {
            g = g.complement();
            label = format!("complement({label})");
        }
        if let Some((kind, other)) = &self.product {
            let kind: ProductKind = kind.parse()?;
            g = graph::product(&g, &family_or_file(other)?, kind)?;
            label = format!("{label} {kind} {other}");
        }
        Ok((g, label))
    }
}
