//! JSON factor specifications.
//!
//! ```json
//! {"period":2,"layers":[{"type":"complete_bipartite","n":3,"m":3},
//!                       {"type":"alternating_cycle","size":6}]}
//! ```
//!
//! Custom layers list `bottom` and `top` labels and `edges` as label pairs;
//! a label of a product fiber joins its coordinates with commas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Coords, DigraphError, FiniteBipartiteDigraph, LayerPattern, PeriodicLayeredDigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("period is {period} but {layers} layers are given")]
    PeriodMismatch { period: usize, layers: usize },
    #[error("layer {layer}: top fiber does not match the bottom fiber of layer {next}")]
    IncompatibleFibers { layer: usize, next: usize },
    #[error(transparent)]
    Invalid(DigraphError),
}

impl From<DigraphError> for SpecError {
    fn from(e: DigraphError) -> Self {
        match e {
            DigraphError::IncompatibleFibers { layer, next } => SpecError::IncompatibleFibers { layer, next },
            other => SpecError::Invalid(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum LayerSpec {
    CompleteBipartite { n: usize, m: usize },
    AlternatingCycle { size: usize },
    Matching { n: usize },
    Custom {
        bottom: Vec<String>,
        top: Vec<String>,
        edges: Vec<(String, String)>,
    },
}

fn is_zero(x: &i64) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub period: usize,
    pub layers: Vec<LayerSpec>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offset: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn split(label: &str) -> Coords {
    label.split(',').map(str::to_string).collect()
}

impl LayerSpec {
    pub fn to_pattern(&self) -> Result<LayerPattern, DigraphError> {
        Ok(match self {
            LayerSpec::CompleteBipartite { n, m } => LayerPattern::CompleteBipartite { n: *n, m: *m },
            LayerSpec::AlternatingCycle { size } => LayerPattern::AlternatingCycle { size: *size },
            LayerSpec::Matching { n } => LayerPattern::Matching { n: *n },
            LayerSpec::Custom { bottom, top, edges } => LayerPattern::Custom(FiniteBipartiteDigraph::new(
                bottom.iter().map(|l| split(l)).collect(),
                top.iter().map(|l| split(l)).collect(),
                edges.iter().map(|(b, t)| (split(b), split(t))),
            )?),
        })
    }

    pub fn from_pattern(p: &LayerPattern) -> Self {
        match p {
            LayerPattern::CompleteBipartite { n, m } => LayerSpec::CompleteBipartite { n: *n, m: *m },
            LayerPattern::AlternatingCycle { size } => LayerSpec::AlternatingCycle { size: *size },
            LayerPattern::Matching { n } => LayerSpec::Matching { n: *n },
            LayerPattern::Custom(g) => LayerSpec::Custom {
                bottom: g.bottom().iter().map(|c| c.join(",")).collect(),
                top: g.top().iter().map(|c| c.join(",")).collect(),
                edges: g.edges().map(|(b, t)| (b.join(","), t.join(","))).collect(),
            },
        }
    }
}

impl FactorSpec {
    pub fn patterns(&self) -> Result<Vec<LayerPattern>, SpecError> {
        if self.period != self.layers.len() {
            return Err(SpecError::PeriodMismatch {
                period: self.period,
                layers: self.layers.len(),
            });
        }
        Ok(self
            .layers
            .iter()
            .map(LayerSpec::to_pattern)
            .collect::<Result<Vec<_>, _>>()?)
    }

    pub fn from_digraph(g: &PeriodicLayeredDigraph) -> Self {
        FactorSpec {
            period: g.period(),
            layers: g.patterns().iter().map(LayerSpec::from_pattern).collect(),
            offset: g.offset(),
            name: g.name().map(str::to_string),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }
}

/// Parses and validates a factor specification.
pub fn parse_factor_spec(text: &str) -> Result<FactorSpec, SpecError> {
    let spec: FactorSpec = serde_json::from_str(text).map_err(|e| {
        let (line, column, message) = (e.line(), e.column(), e.to_string());
        match e.classify() {
            serde_json::error::Category::Data => SpecError::Schema { line, column, message },
            _ => SpecError::Syntax { line, column, message },
        }
    })?;
    build_periodic(&spec)?;
    Ok(spec)
}

pub fn build_periodic(spec: &FactorSpec) -> Result<PeriodicLayeredDigraph, SpecError> {
    let g = PeriodicLayeredDigraph::new(spec.patterns()?, spec.offset)?;
    Ok(match &spec.name {
        Some(n) => g.with_name(n.clone()),
        None => g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn parses_l() {
        let text = r#"{"period":2,"layers":[{"type":"complete_bipartite","n":3,"m":3},{"type":"alternating_cycle","size":6}]}"#;
        let spec = parse_factor_spec(text).unwrap();
        assert_eq!(build_periodic(&spec).unwrap(), zoo::factor_l());
    }

    #[test]
    fn parses_integer_line() {
        let spec = parse_factor_spec(r#"{"period":1,"layers":[{"type":"matching","n":1}]}"#).unwrap();
        assert_eq!(build_periodic(&spec).unwrap(), zoo::integer_line());
    }

    #[test]
    fn incompatible_fibers() {
        let text = r#"{"period":2,"layers":[{"type":"matching","n":2},{"type":"matching","n":3}]}"#;
        assert!(matches!(parse_factor_spec(text), Err(SpecError::IncompatibleFibers { .. })));
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_factor_spec("{\"period\":"), Err(SpecError::Syntax { .. })));
        let unknown = r#"{"period":1,"layers":[{"type":"matching","n":1}],"colour":3}"#;
        assert!(matches!(parse_factor_spec(unknown), Err(SpecError::Schema { .. })));
        let unknown_field = r#"{"period":1,"layers":[{"type":"matching","n":1,"m":2}]}"#;
        assert!(matches!(parse_factor_spec(unknown_field), Err(SpecError::Schema { .. })));
        let bad_type = r#"{"period":1,"layers":[{"type":"star","n":1}]}"#;
        assert!(matches!(parse_factor_spec(bad_type), Err(SpecError::Schema { line: 1, .. })));
        let mismatch = r#"{"period":2,"layers":[{"type":"matching","n":1}]}"#;
        assert!(matches!(parse_factor_spec(mismatch), Err(SpecError::PeriodMismatch { .. })));
    }

    #[test]
    fn custom_product_layers_survive() {
        let d = zoo::digraph_d();
        let spec = FactorSpec::from_digraph(&d);
        let back = parse_factor_spec(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        assert_eq!(build_periodic(&back).unwrap(), d);
    }
}
