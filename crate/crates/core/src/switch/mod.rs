//! Programmable switch simulator.
//!
//! The switch owns `S` segments (pipelines), each responsible for one
//! contiguous key range and holding `L` stages. Every arriving key is routed
//! to its segment, bubbles into sorted position, and once the segment is
//! full pushes out the head of the older run. At end of stream each segment
//! is flushed older run first, then younger run.
//!
//! Two interchangeable pipeline models are provided:
//!
//! * [`Segment`] keeps the stages in an array and shifts slots, one insert
//!   at a time.
//! * [`StagePipeline`] executes the same algorithm under match-action
//!   constraints: every stage sees only its own slot and the packet passing
//!   through it, and keeps a local arrival counter to decide whether it is
//!   the partition stage.
//!
//! Both produce identical output for every input.

mod ranges;
mod segment;
mod stage;

pub use ranges::{set_ranges, KeyRange};
pub use segment::Segment;
pub use stage::{PipelinePacket, StagePipeline};

use crate::types::{TaggedValue, Value};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwitchError {
    #[error("number of segments must be at least 1")]
    NoSegments,
    #[error("segment length must be at least 1")]
    NoStages,
    #[error("{segments} segments exceed max value {max_value}; some ranges would be empty")]
    TooManySegments { segments: usize, max_value: Value },
    #[error("max value must be below {}", Value::MAX)]
    MaxValueTooLarge,
    #[error("key {value}{} is outside (0, {max_value}]", position_suffix(*.position))]
    OutOfDomain {
        value: Value,
        max_value: Value,
        position: Option<usize>,
    },
}

fn position_suffix(position: Option<usize>) -> String {
    match position {
        Some(p) => format!(" at input position {p}"),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwitchConfig {
    pub segments: usize,
    pub segment_length: usize,
    pub max_value: Value,
}

impl SwitchConfig {
    pub fn new(segments: usize, segment_length: usize, max_value: Value) -> Result<Self, SwitchError> {
        let config = SwitchConfig {
            segments,
            segment_length,
            max_value,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SwitchError> {
        if self.segments == 0 {
            return Err(SwitchError::NoSegments);
        }
        if self.segment_length == 0 {
            return Err(SwitchError::NoStages);
        }
        if self.max_value == Value::MAX {
            return Err(SwitchError::MaxValueTooLarge);
        }
        if self.segments as u128 > self.max_value as u128 {
            return Err(SwitchError::TooManySegments {
                segments: self.segments,
                max_value: self.max_value,
            });
        }
        Ok(())
    }
}

/// One switch pipeline model.
pub trait Pipeline {
    fn new(range: KeyRange, len: usize) -> Self;

    fn range(&self) -> KeyRange;

    /// Inserts a key, returning the key pushed out of the pipeline, if any.
    fn insert(&mut self, v: Value) -> Option<Value>;

    /// Drains the pipeline: older run first, then younger run.
    fn flush_into(&mut self, out: &mut Vec<Value>);

    /// Total stage visits made by packets (including flush passes).
    fn stage_visits(&self) -> u64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Array-backed segments.
    #[default]
    Array,
    /// Per-stage match-action execution.
    StageAccurate,
}

/// A switch instance. Single-threaded; distinct instances are independent.
#[derive(Debug, Clone)]
pub struct Switch<P> {
    config: SwitchConfig,
    ranges: Vec<KeyRange>,
    pipelines: Vec<P>,
}

impl<P: Pipeline> Switch<P> {
    pub fn new(config: SwitchConfig) -> Result<Self, SwitchError> {
        let ranges = set_ranges(&config)?;
        let pipelines = ranges.iter().map(|&r| P::new(r, config.segment_length)).collect();
        Ok(Switch {
            config,
            ranges,
            pipelines,
        })
    }

    pub fn config(&self) -> &SwitchConfig {
        &self.config
    }

    pub fn ranges(&self) -> &[KeyRange] {
        &self.ranges
    }

    pub fn pipelines(&self) -> &[P] {
        &self.pipelines
    }

    /// Index of the unique segment whose range holds `v`.
    pub fn find_segment(&self, v: Value) -> Result<usize, SwitchError> {
        if v == 0 || v > self.config.max_value {
            return Err(SwitchError::OutOfDomain {
                value: v,
                max_value: self.config.max_value,
                position: None,
            });
        }
        // Ranges are ordered and contiguous, so the answer is the last range
        // whose lower bound is <= v.
        Ok(self.ranges.partition_point(|r| r.lo <= v) - 1)
    }

    pub fn insert(&mut self, v: Value) -> Result<Option<TaggedValue>, SwitchError> {
        let segment = self.find_segment(v)?;
        Ok(self.pipelines[segment]
            .insert(v)
            .map(|key| TaggedValue { segment, key }))
    }

    /// Flushes every segment in index order.
    pub fn flush(&mut self) -> Vec<TaggedValue> {
        let mut out = Vec::new();
        let mut keys = Vec::new();
        for (segment, pipeline) in self.pipelines.iter_mut().enumerate() {
            keys.clear();
            pipeline.flush_into(&mut keys);
            out.extend(keys.iter().map(|&key| TaggedValue { segment, key }));
        }
        out
    }

    /// Feeds the whole stream and flushes. Output length equals input length.
    pub fn apply(&mut self, input: &[Value]) -> Result<Vec<TaggedValue>, SwitchError> {
        let mut out = Vec::with_capacity(input.len());
        for (position, &v) in input.iter().enumerate() {
            match self.insert(v) {
                Ok(Some(t)) => out.push(t),
                Ok(None) => {}
                Err(SwitchError::OutOfDomain { value, max_value, .. }) => {
                    return Err(SwitchError::OutOfDomain {
                        value,
                        max_value,
                        position: Some(position),
                    })
                }
                Err(e) => return Err(e),
            }
        }
        out.extend(self.flush());
        Ok(out)
    }

    pub fn stage_visits(&self) -> u64 {
        self.pipelines.iter().map(P::stage_visits).sum()
    }
}

/// Output of a full switch pass plus its simulated work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchOutput {
    pub tagged: Vec<TaggedValue>,
    pub stage_visits: u64,
}

pub fn run_switch(config: SwitchConfig, input: &[Value], mode: Mode) -> Result<SwitchOutput, SwitchError> {
    fn go<P: Pipeline>(config: SwitchConfig, input: &[Value]) -> Result<SwitchOutput, SwitchError> {
        let mut switch = Switch::<P>::new(config)?;
        let tagged = switch.apply(input)?;
        Ok(SwitchOutput {
            tagged,
            stage_visits: switch.stage_visits(),
        })
    }
    match mode {
        Mode::Array => go::<Segment>(config, input),
        Mode::StageAccurate => go::<StagePipeline>(config, input),
    }
}

pub fn apply_switch(config: SwitchConfig, input: &[Value], mode: Mode) -> Result<Vec<TaggedValue>, SwitchError> {
    run_switch(config, input, mode).map(|o| o.tagged)
}

pub fn apply_switch_stage_accurate(config: SwitchConfig, input: &[Value]) -> Result<Vec<TaggedValue>, SwitchError> {
    apply_switch(config, input, Mode::StageAccurate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runs::count_runs;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    /// Two-run model of a segment: a sorted older run drained from the front
    /// and a sorted younger run absorbing arrivals.
    struct RunModel {
        len: usize,
        older: VecDeque<Value>,
        younger: Vec<Value>,
    }

    impl RunModel {
        fn insert(&mut self, v: Value) -> Option<Value> {
            let out = if self.older.len() + self.younger.len() == self.len {
                if self.older.is_empty() {
                    self.older = std::mem::take(&mut self.younger).into();
                }
                self.older.pop_front()
            } else {
                None
            };
            let at = self.younger.iter().position(|&x| x > v).unwrap_or(self.younger.len());
            self.younger.insert(at, v);
            out
        }

        fn flush(&mut self) -> Vec<Value> {
            let mut out: Vec<Value> = self.older.drain(..).collect();
            out.append(&mut self.younger);
            out
        }
    }

    fn reference(config: SwitchConfig, input: &[Value]) -> Vec<TaggedValue> {
        let ranges = set_ranges(&config).unwrap();
        let mut models: Vec<RunModel> = (0..config.segments)
            .map(|_| RunModel {
                len: config.segment_length,
                older: VecDeque::new(),
                younger: Vec::new(),
            })
            .collect();
        let mut out = Vec::new();
        for &v in input {
            let s = ranges.iter().position(|r| r.lo <= v && v < r.hi).unwrap();
            if let Some(key) = models[s].insert(v) {
                out.push(TaggedValue::new(s, key));
            }
        }
        for (s, m) in models.iter_mut().enumerate() {
            out.extend(m.flush().into_iter().map(|key| TaggedValue::new(s, key)));
        }
        out
    }

    fn keys(tagged: &[TaggedValue]) -> Vec<Value> {
        tagged.iter().map(|t| t.key).collect()
    }

    #[test]
    fn config_validation() {
        assert_eq!(SwitchConfig::new(0, 4, 10), Err(SwitchError::NoSegments));
        assert_eq!(SwitchConfig::new(1, 0, 10), Err(SwitchError::NoStages));
        assert!(matches!(
            SwitchConfig::new(11, 4, 10),
            Err(SwitchError::TooManySegments { .. })
        ));
        assert!(SwitchConfig::new(10, 4, 10).is_ok());
    }

    #[test]
    fn find_segment_examples() {
        let sw = Switch::<Segment>::new(SwitchConfig::new(3, 2, 10).unwrap()).unwrap();
        assert_eq!(sw.find_segment(4), Ok(1));
        assert_eq!(sw.find_segment(10), Ok(2));
        assert_eq!(sw.find_segment(3), Ok(0));
        assert!(matches!(
            sw.find_segment(0),
            Err(SwitchError::OutOfDomain { value: 0, .. })
        ));
        assert!(matches!(
            sw.find_segment(11),
            Err(SwitchError::OutOfDomain { value: 11, .. })
        ));

        let single = Switch::<Segment>::new(SwitchConfig::new(1, 2, 1000).unwrap()).unwrap();
        for v in [1, 17, 999, 1000] {
            assert_eq!(single.find_segment(v), Ok(0));
        }
    }

    #[test]
    fn out_of_domain_reports_position() {
        let config = SwitchConfig::new(2, 2, 10).unwrap();
        for mode in [Mode::Array, Mode::StageAccurate] {
            let err = apply_switch(config, &[3, 4, 11, 2], mode).unwrap_err();
            assert_eq!(
                err,
                SwitchError::OutOfDomain {
                    value: 11,
                    max_value: 10,
                    position: Some(2)
                }
            );
            assert_eq!(err.to_string(), "key 11 at input position 2 is outside (0, 10]");
            assert!(apply_switch(config, &[0], mode).is_err());
        }
    }

    #[test]
    fn seven_value_trace_single_segment() {
        let config = SwitchConfig::new(1, 4, 10).unwrap();
        let input = [5, 2, 7, 1, 3, 4, 6];
        for mode in [Mode::Array, Mode::StageAccurate] {
            let out = apply_switch(config, &input, mode).unwrap();
            assert_eq!(keys(&out), vec![1, 2, 5, 7, 3, 4, 6]);
            assert!(out.iter().all(|t| t.segment == 0));
        }
    }

    #[test]
    fn full_length_segment_sorts_everything() {
        let input = [9, 3, 3, 7, 1, 8, 2, 2, 6];
        let config = SwitchConfig::new(1, input.len(), 9).unwrap();
        let mut sorted = input.to_vec();
        sorted.sort();
        for mode in [Mode::Array, Mode::StageAccurate] {
            assert_eq!(keys(&apply_switch(config, &input, mode).unwrap()), sorted);
        }
    }

    #[test]
    fn one_stage_is_a_pass_through() {
        let input = [9, 3, 3, 7, 1, 8, 2, 2, 6];
        let config = SwitchConfig::new(1, 1, 9).unwrap();
        for mode in [Mode::Array, Mode::StageAccurate] {
            assert_eq!(keys(&apply_switch(config, &input, mode).unwrap()), input.to_vec());
        }
    }

    #[test]
    fn two_segments_two_stages() {
        let config = SwitchConfig::new(2, 2, 10).unwrap();
        let input = [9, 1, 8, 2, 7, 3];
        let out = apply_switch(config, &input, Mode::Array).unwrap();
        assert_eq!(out, reference(config, &input));
        assert_eq!(out, apply_switch_stage_accurate(config, &input).unwrap());
        let mut seg0: Vec<_> = out.iter().filter(|t| t.segment == 0).map(|t| t.key).collect();
        let mut seg1: Vec<_> = out.iter().filter(|t| t.segment == 1).map(|t| t.key).collect();
        seg0.sort();
        seg1.sort();
        assert_eq!(seg0, vec![1, 2, 3]);
        assert_eq!(seg1, vec![7, 8, 9]);
    }

    #[test]
    fn stage_visits_agree_between_modes() {
        let config = SwitchConfig::new(3, 5, 100).unwrap();
        let input: Vec<Value> = (1..=60).map(|i| (i * 37) % 100 + 1).collect();
        let a = run_switch(config, &input, Mode::Array).unwrap();
        let b = run_switch(config, &input, Mode::StageAccurate).unwrap();
        assert_eq!(a, b);
        // L visits per packet plus two flush passes per segment.
        assert_eq!(a.stage_visits, 60 * 5 + 3 * 2 * 5);
    }

    fn config_and_input() -> impl Strategy<Value = (SwitchConfig, Vec<Value>)> {
        (1usize..=8, 1usize..=8, 8u64..=300).prop_flat_map(|(s, l, max)| {
            (
                Just(SwitchConfig::new(s, l, max).unwrap()),
                prop::collection::vec(1..=max, 0..200),
            )
        })
    }

    proptest! {
        #[test]
        fn modes_match_reference((config, input) in config_and_input()) {
            let array = apply_switch(config, &input, Mode::Array).unwrap();
            let stage = apply_switch(config, &input, Mode::StageAccurate).unwrap();
            prop_assert_eq!(&array, &stage);
            prop_assert_eq!(&array, &reference(config, &input));
        }

        #[test]
        fn output_is_routed_permutation((config, input) in config_and_input()) {
            let out = apply_switch(config, &input, Mode::Array).unwrap();
            let ranges = set_ranges(&config).unwrap();
            prop_assert!(out.iter().all(|t| ranges[t.segment].contains(t.key)));
            let mut a = keys(&out);
            let mut b = input.clone();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn run_count_bound((config, input) in config_and_input()) {
            let out = apply_switch(config, &input, Mode::Array).unwrap();
            let l = config.segment_length;
            for s in 0..config.segments {
                let seg: Vec<Value> = out.iter().filter(|t| t.segment == s).map(|t| t.key).collect();
                let n = seg.len();
                if n == 0 {
                    continue;
                }
                let runs = count_runs(&seg);
                prop_assert!(runs <= n.div_ceil(l) + 1);
                if n <= l {
                    prop_assert_eq!(runs, 1);
                }
            }
        }
    }
}
