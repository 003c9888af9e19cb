#include "relq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relq {

std::vector<std::size_t> InstanceOrdering::positions() const {
    std::vector<std::size_t> pos(order.size(), order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        if (order[p] >= order.size() || pos[order[p]] != order.size()) {
            throw std::invalid_argument("ordering is not a permutation of 0..n-1");
        }
        pos[order[p]] = p;
    }
    return pos;
}

InstanceOrdering order_instances(std::span<const ScoredInstance> scores, RejectDirection direction) {
    if (scores.empty()) {
        throw std::invalid_argument("order_instances: no scores");
    }
    std::vector<ScoredInstance> sorted(scores.begin(), scores.end());
    for (const auto& s : sorted) {
        if (!std::isfinite(s.score)) {
            throw std::invalid_argument("order_instances: non-finite score for instance " + std::to_string(s.index));
        }
    }
    std::sort(sorted.begin(), sorted.end(), [direction](const ScoredInstance& a, const ScoredInstance& b) {
        if (a.score != b.score) {
            return direction == RejectDirection::HighFirst ? a.score > b.score : a.score < b.score;
        }
        return a.index < b.index;
    });
    InstanceOrdering out;
    out.provenance = direction == RejectDirection::HighFirst ? "reject-high-first" : "reject-low-first";
    out.order.reserve(sorted.size());
    for (const auto& s : sorted) {
        out.order.push_back(s.index);
    }
    out.positions(); // validates the permutation
    return out;
}

InstanceOrdering order_instances(std::span<const double> scores, RejectDirection direction) {
    std::vector<ScoredInstance> scored(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scored[i] = {i, scores[i], false};
    }
    return order_instances(std::span<const ScoredInstance>(scored), direction);
}

ArcCurve arc(const InstanceOrdering& ordering, const std::vector<bool>& correct) {
    const std::size_t n = ordering.size();
    if (n == 0) {
        throw std::invalid_argument("arc: empty ordering");
    }
    if (correct.size() != n) {
        throw std::invalid_argument("arc: ordering and correctness differ in length");
    }
    ordering.positions();
    ArcCurve curve;
    curve.accuracies.assign(n, 0.0);
    // Walk from the most reliable end so each entry is a suffix count.
    std::size_t right = 0;
    for (std::size_t k = n; k-- > 0;) {
        right += correct[ordering.order[k]] ? 1 : 0;
        curve.accuracies[k] = static_cast<double>(right) / static_cast<double>(n - k);
    }
    double sum = 0.0;
    for (double a : curve.accuracies) {
        sum += a;
    }
    curve.au_arc = sum / static_cast<double>(n);
    return curve;
}

ArcCurve mean_arc(std::span<const ArcCurve> curves) {
    if (curves.empty()) {
        throw std::invalid_argument("mean_arc: no curves");
    }
    const std::size_t n = curves.front().accuracies.size();
    ArcCurve out;
    out.accuracies.assign(n, 0.0);
    for (const auto& c : curves) {
        if (c.accuracies.size() != n) {
            throw std::invalid_argument("mean_arc: curves differ in length");
        }
        for (std::size_t k = 0; k < n; ++k) {
            out.accuracies[k] += c.accuracies[k];
        }
    }
    double sum = 0.0;
    for (auto& a : out.accuracies) {
        a /= static_cast<double>(curves.size());
        sum += a;
    }
    out.au_arc = n == 0 ? 0.0 : sum / static_cast<double>(n);
    return out;
}

} // namespace relq
