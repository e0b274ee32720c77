use serde::{Deserialize, Serialize};

/// A sort key. Valid keys lie in `(0, max_value]` of the active switch
/// configuration.
pub type Value = u64;

/// A key emitted by the switch together with the segment (output port)
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TaggedValue {
    pub segment: usize,
    pub key: Value,
}

impl TaggedValue {
    pub fn new(segment: usize, key: Value) -> Self {
        TaggedValue { segment, key }
    }
}

/// Strips segment tags, keeping arrival order.
pub fn untag(tagged: &[TaggedValue]) -> Vec<Value> {
    tagged.iter().map(|t| t.key).collect()
}
