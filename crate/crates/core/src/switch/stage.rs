//! Stage-by-stage execution of a segment.
//!
//! Each [`Stage`] owns one key, an empty flag and an arrival counter that
//! wraps at the segment length. A stage is the partition stage for a packet
//! when its counter equals its own index. Packets carry the key being
//! inserted, a flag set once the partition stage has been passed, and the key
//! evicted there. Stages never look at each other's state and never divide.

use super::{KeyRange, Pipeline};
use crate::types::Value;

/// Per-packet metadata travelling down the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelinePacket {
    pub carried: Value,
    pub past_partition: bool,
    pub evicted: Option<Value>,
}

impl PipelinePacket {
    pub fn new(carried: Value) -> Self {
        PipelinePacket {
            carried,
            past_partition: false,
            evicted: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FlushPass {
    Older,
    Younger,
}

#[derive(Debug, Clone)]
struct Stage {
    // Set at initialization, read-only afterwards.
    index: usize,
    len: usize,

    value: Value,
    empty: bool,
    arrivals: usize,
}

impl Stage {
    fn process(&mut self, pkt: &mut PipelinePacket) {
        let is_partition = self.arrivals == self.index;
        self.arrivals += 1;
        if self.arrivals == self.len {
            self.arrivals = 0;
        }

        if pkt.past_partition {
            return;
        }
        if is_partition || self.empty {
            debug_assert!(is_partition, "empty stage ahead of the partition stage");
            if !self.empty {
                pkt.evicted = Some(self.value);
            }
            self.value = pkt.carried;
            self.empty = false;
            pkt.past_partition = true;
        } else if self.value > pkt.carried {
            std::mem::swap(&mut self.value, &mut pkt.carried);
        }
    }

    /// Stages from the partition stage onward hold the older run.
    fn flush(&mut self, pass: FlushPass, out: &mut Vec<Value>) {
        if self.empty {
            return;
        }
        let older = self.index >= self.arrivals;
        match pass {
            FlushPass::Older if older => out.push(self.value),
            FlushPass::Younger => {
                if !older {
                    out.push(self.value);
                }
                self.empty = true;
                self.arrivals = 0;
            }
            FlushPass::Older => {}
        }
    }
}

#[derive(Debug, Clone)]
pub struct StagePipeline {
    range: KeyRange,
    stages: Vec<Stage>,
    visits: u64,
}

impl StagePipeline {
    /// Pushes one packet through every stage and returns it on exit.
    pub fn traverse(&mut self, mut pkt: PipelinePacket) -> PipelinePacket {
        for stage in &mut self.stages {
            stage.process(&mut pkt);
            self.visits += 1;
        }
        pkt
    }

    /// Stored keys in stage order, `None` for empty stages.
    pub fn snapshot(&self) -> Vec<Option<Value>> {
        self.stages.iter().map(|s| (!s.empty).then_some(s.value)).collect()
    }
}

impl Pipeline for StagePipeline {
    fn new(range: KeyRange, len: usize) -> Self {
        assert!(len >= 1, "segment needs at least one stage");
        let stages = (0..len)
            .map(|index| Stage {
                index,
                len,
                value: 0,
                empty: true,
                arrivals: 0,
            })
            .collect();
        StagePipeline {
            range,
            stages,
            visits: 0,
        }
    }

    fn range(&self) -> KeyRange {
        self.range
    }

    fn insert(&mut self, v: Value) -> Option<Value> {
        debug_assert!(self.range.contains(v));
        let pkt = self.traverse(PipelinePacket::new(v));
        debug_assert!(pkt.past_partition);
        pkt.evicted
    }

    fn flush_into(&mut self, out: &mut Vec<Value>) {
        for pass in [FlushPass::Older, FlushPass::Younger] {
            for stage in &mut self.stages {
                stage.flush(pass, out);
                self.visits += 1;
            }
        }
    }

    fn stage_visits(&self) -> u64 {
        self.visits
    }
}
