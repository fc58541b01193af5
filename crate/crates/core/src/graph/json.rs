use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Node/edge document for external visualization tools.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<JsonEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonNode {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(flatten)]
    pub attrs: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEdge {
    pub src: String,
    pub dst: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight_wei: Option<String>,
}

impl JsonNode {
    pub fn new(id: impl ToString, kind: impl ToString) -> Self {
        JsonNode {
            id: id.to_string(),
            kind: kind.to_string(),
            attrs: BTreeMap::new(),
        }
    }

    pub fn attr(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.attrs.insert(key.to_string(), value.into());
        self
    }
}

impl JsonEdge {
    pub fn new(src: impl ToString, dst: impl ToString) -> Self {
        JsonEdge {
            src: src.to_string(),
            dst: dst.to_string(),
            weight_wei: None,
        }
    }

    pub fn weighted(src: impl ToString, dst: impl ToString, wei: impl ToString) -> Self {
        JsonEdge {
            weight_wei: Some(wei.to_string()),
            ..JsonEdge::new(src, dst)
        }
    }
}
