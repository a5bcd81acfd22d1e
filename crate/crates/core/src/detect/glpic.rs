use super::{
    classify_reliability, enumerate_candidates, ml_select, pic_stage, rake_front_end,
    DetectorConfig, EffectiveChannelMatrix, ReliabilityPartition, SoftEstimateVector,
};
use crate::{Complex, Result};

/// Intermediate products of one GL-PIC detection.
#[derive(Debug, Clone, PartialEq)]
pub struct GlPicTrace {
    pub soft: SoftEstimateVector,
    pub partition: ReliabilityPartition,
    pub candidates: usize,
    /// Best candidate list under the ML rule, before PIC refinement.
    pub list_decision: Vec<usize>,
    pub decision: Vec<usize>,
}

/// Greedy list-based PIC: RAKE, reliability split, candidate lists over the
/// `n_q` least reliable users, ML pick, then `pic_iterations` of PIC.
pub fn gl_pic_trace(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    config: &DetectorConfig,
) -> Result<GlPicTrace> {
    let c = &config.constellation;
    let soft = rake_front_end(y, h, c)?;
    let partition = classify_reliability(&soft, config);
    let sliced: Vec<usize> = soft.values.iter().map(|&u| c.slice(u)).collect();
    let candidates = enumerate_candidates(&partition, &sliced, c);
    let list_decision = ml_select(&candidates, y, h, c).to_vec();
    let decision = pic_stage(&list_decision, y, h, c, config.pic_iterations)?;
    Ok(GlPicTrace {
        soft,
        partition,
        candidates: candidates.len(),
        list_decision,
        decision,
    })
}

pub fn gl_pic_detect(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    config: &DetectorConfig,
) -> Result<Vec<usize>> {
    Ok(gl_pic_trace(y, h, config)?.decision)
}
