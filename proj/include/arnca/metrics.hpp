#pragma once

#include <vector>

#include "arnca/grid.hpp"

namespace arnca {

/// Per-cell probability of the target state for one frame.
struct ProbMap {
    int n = 0;
    std::vector<float> p; // n*n in [0,1]
};

/// Mean F1 over frames at a fixed threshold. Cells with p >= threshold are
/// positives (ties positive). A frame with an empty prediction and an empty
/// truth (TP = FP = FN = 0) scores 1.
double f1_score(const std::vector<ProbMap>& maps,
                const std::vector<TargetMask>& masks, double threshold = 0.5);

struct AucResult {
    double value = 0.0;  // NaN when every frame was excluded
    int included_frames = 0;
    int excluded_frames = 0; // single-class frames, ROC undefined
};

/// Mean rank-based (Mann-Whitney, midranks for ties) AUC over frames.
/// Frames whose mask is single-class are excluded from the average.
AucResult auc_roc_detail(const std::vector<ProbMap>& maps,
                         const std::vector<TargetMask>& masks);
double auc_roc(const std::vector<ProbMap>& maps,
               const std::vector<TargetMask>& masks);

} // namespace arnca
