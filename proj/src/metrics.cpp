#include "arnca/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace arnca {

namespace {

void check_pair(const ProbMap& map, const TargetMask& mask) {
    if (map.n != mask.n || map.p.size() != mask.bits.size())
        throw std::invalid_argument(
            "metrics: map " + std::to_string(map.n) + "x" + std::to_string(map.n) +
            " vs mask " + std::to_string(mask.n) + "x" + std::to_string(mask.n));
}

} // namespace

double f1_score(const std::vector<ProbMap>& maps,
                const std::vector<TargetMask>& masks, double threshold) {
    if (maps.size() != masks.size())
        throw std::invalid_argument("f1_score: " + std::to_string(maps.size()) +
                                    " maps vs " + std::to_string(masks.size()) +
                                    " masks");
    if (maps.empty()) throw std::invalid_argument("f1_score: no frames");
    double total = 0.0;
    for (size_t t = 0; t < maps.size(); ++t) {
        check_pair(maps[t], masks[t]);
        long tp = 0, fp = 0, fn = 0;
        for (size_t c = 0; c < maps[t].p.size(); ++c) {
            bool pred = maps[t].p[c] >= threshold;
            bool truth = masks[t].bits[c] != 0;
            tp += pred && truth;
            fp += pred && !truth;
            fn += !pred && truth;
        }
        total += (tp + fp + fn == 0)
                     ? 1.0
                     : 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
    }
    return total / static_cast<double>(maps.size());
}

AucResult auc_roc_detail(const std::vector<ProbMap>& maps,
                         const std::vector<TargetMask>& masks) {
    if (maps.size() != masks.size())
        throw std::invalid_argument("auc_roc: " + std::to_string(maps.size()) +
                                    " maps vs " + std::to_string(masks.size()) +
                                    " masks");
    AucResult result;
    double total = 0.0;
    std::vector<int> order;
    for (size_t t = 0; t < maps.size(); ++t) {
        check_pair(maps[t], masks[t]);
        const auto& p = maps[t].p;
        const auto& y = masks[t].bits;
        const int cells = static_cast<int>(p.size());
        long positives = std::accumulate(y.begin(), y.end(), 0L);
        long negatives = cells - positives;
        if (positives == 0 || negatives == 0) {
            ++result.excluded_frames;
            continue;
        }
        order.resize(cells);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return p[a] < p[b]; });
        // midranks over the ascending score order
        double rank_sum_pos = 0.0;
        int i = 0;
        while (i < cells) {
            int j = i;
            while (j < cells && p[order[j]] == p[order[i]]) ++j;
            double midrank = 0.5 * ((i + 1) + j); // ranks are 1-based
            for (int k = i; k < j; ++k)
                if (y[order[k]]) rank_sum_pos += midrank;
            i = j;
        }
        double auc = (rank_sum_pos - 0.5 * positives * (positives + 1)) /
                     (static_cast<double>(positives) * negatives);
        total += auc;
        ++result.included_frames;
    }
    result.value = result.included_frames
                       ? total / result.included_frames
                       : std::numeric_limits<double>::quiet_NaN();
    return result;
}

double auc_roc(const std::vector<ProbMap>& maps,
               const std::vector<TargetMask>& masks) {
    return auc_roc_detail(maps, masks).value;
}

} // namespace arnca
