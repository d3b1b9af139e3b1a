//! Frame and valuation JSON.
//!
//! A frame reads as `{"size": n, "labels": [..], "le": [[u, w], ..]}`. The
//! `le` pairs are generators and get closed, unless `"strict": true`, in
//! which case the pairs must already be reflexive and transitive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, World};
use crate::semantics::Valuation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameJson {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub le: Vec<(World, World)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
}

impl FrameJson {
    /// Emits the full relation, so the result also reads back in strict mode.
    pub fn from_frame(f: &Frame) -> FrameJson {
        FrameJson {
            size: f.size(),
            labels: f.labels().map(<[String]>::to_vec),
            le: f.pairs(),
            strict: false,
        }
    }

    pub fn to_frame(&self) -> Result<Frame> {
        self.to_frame_with(self.strict)
    }

    /// `strict` overrides the flag stored in the document.
    pub fn to_frame_with(&self, strict: bool) -> Result<Frame> {
        let frame = if strict {
            Frame::from_closed_pairs(self.size, &self.le)?
        } else {
            Frame::from_pairs(self.size, &self.le)?
        };
        match &self.labels {
            None => Ok(frame),
            Some(labels) if labels.len() == self.size => Ok(frame.with_labels(labels.clone())),
            Some(labels) => Err(Error::Json(format!(
                "{} labels given for {} worlds",
                labels.len(),
                self.size
            ))),
        }
    }
}

pub fn frame_from_json(text: &str) -> Result<Frame> {
    serde_json::from_str::<FrameJson>(text)?.to_frame()
}

/// Like [`frame_from_json`], but rejects relations that are not closed
/// regardless of the document's `strict` flag.
pub fn frame_from_json_strict(text: &str) -> Result<Frame> {
    serde_json::from_str::<FrameJson>(text)?.to_frame_with(true)
}

pub fn frame_to_value(f: &Frame) -> serde_json::Value {
    serde_json::to_value(FrameJson::from_frame(f)).expect("frame JSON is always serializable")
}

pub fn frame_to_json(f: &Frame) -> String {
    frame_to_value(f).to_string()
}

/// Reads `{"p": [0, 2], ..}` and checks every world against `f`.
pub fn valuation_from_json(text: &str, f: &Frame) -> Result<Valuation> {
    let val: Valuation = serde_json::from_str(text)?;
    val.check(f)?;
    Ok(val)
}
