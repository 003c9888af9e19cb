#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace relq {

enum class RejectDirection {
    HighFirst, // uncertainty-style scores: larger = less reliable
    LowFirst,  // robustness-style scores: smaller = less reliable
};

struct ScoredInstance {
    std::size_t index = 0;
    double score = 0.0;
    bool correct = false;
};

// Instance indices, least reliable first.
struct InstanceOrdering {
    std::vector<std::size_t> order;
    std::string provenance;

    std::size_t size() const { return order.size(); }
    // positions()[i] is the 0-based rank of instance i.
    std::vector<std::size_t> positions() const;
};

// Stable sort in the requested direction; equal scores keep index order.
// The indices must form a permutation of 0..n-1.
InstanceOrdering order_instances(std::span<const ScoredInstance> scores, RejectDirection direction);
InstanceOrdering order_instances(std::span<const double> scores, RejectDirection direction);

struct ArcCurve {
    // accuracies[k]: accuracy on the n - k instances left after rejecting the
    // k least reliable, k = 0 .. n-1. Full rejection is excluded.
    std::vector<double> accuracies;
    double au_arc = 0.0; // mean of accuracies
};

// correct[i] tells whether instance i was classified correctly.
ArcCurve arc(const InstanceOrdering& ordering, const std::vector<bool>& correct);

// Pointwise mean of equally long curves.
ArcCurve mean_arc(std::span<const ArcCurve> curves);

} // namespace relq
