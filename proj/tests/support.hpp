#pragma once

// Fixtures and independent reference computations shared by the unit tests
// and the acceptance binary. Nothing here calls the library routine it is
// used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "relq/data.hpp"
#include "relq/evaluation.hpp"
#include "relq/model.hpp"
#include "relq/rng.hpp"

namespace relq::testing {

inline FeatureSchema make_schema(std::vector<std::size_t> cards, std::size_t classes) {
    FeatureSchema s;
    s.cardinalities = std::move(cards);
    s.class_count = classes;
    return s;
}

// Uniformly random instances over a random small schema.
inline CategoricalDataset random_dataset(Rng& rng, std::size_t max_classes, std::size_t max_features,
                                         std::size_t max_card, std::size_t min_rows, std::size_t max_rows) {
    const std::size_t classes = 2 + rng.below(max_classes - 1);
    const std::size_t features = 1 + rng.below(max_features);
    std::vector<std::size_t> cards(features);
    for (auto& c : cards) {
        c = 1 + rng.below(max_card);
    }
    const std::size_t rows = min_rows + rng.below(max_rows - min_rows + 1);
    std::vector<Instance> inst(rows);
    for (auto& r : inst) {
        r.features.resize(features);
        for (std::size_t i = 0; i < features; ++i) {
            r.features[i] = rng.below(cards[i]);
        }
        r.label = rng.below(classes);
    }
    return CategoricalDataset(make_schema(cards, classes), std::move(inst));
}

inline std::vector<std::size_t> random_query(Rng& rng, const FeatureSchema& s) {
    std::vector<std::size_t> f(s.feature_count());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = rng.below(s.cardinalities[i]);
    }
    return f;
}

inline std::vector<double> random_pmf(Rng& rng, std::size_t n, double zero_chance = 0.0) {
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& v : p) {
        v = rng.bernoulli(zero_chance) ? 0.0 : rng.uniform() + 1e-3;
        total += v;
    }
    if (total == 0.0) {
        p[rng.below(n)] = 1.0;
        return p;
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

// Laplace-smoothed naive Bayes parameters counted directly.
struct CountedNbc {
    std::vector<double> prior;
    std::vector<std::vector<std::vector<double>>> cond;
};

inline CountedNbc count_nbc(const CategoricalDataset& d, double alpha) {
    const auto& s = d.schema();
    CountedNbc m;
    std::vector<double> nc(s.class_count, 0.0);
    m.cond.resize(s.class_count);
    for (std::size_t c = 0; c < s.class_count; ++c) {
        for (std::size_t i = 0; i < s.feature_count(); ++i) {
            m.cond[c].push_back(std::vector<double>(s.cardinalities[i], 0.0));
        }
    }
    for (const auto& inst : d.instances()) {
        nc[inst.label] += 1.0;
        for (std::size_t i = 0; i < s.feature_count(); ++i) {
            m.cond[inst.label][i][inst.features[i]] += 1.0;
        }
    }
    const double m_total = static_cast<double>(d.size());
    for (std::size_t c = 0; c < s.class_count; ++c) {
        m.prior.push_back((nc[c] + alpha) / (m_total + alpha * static_cast<double>(s.class_count)));
        for (std::size_t i = 0; i < s.feature_count(); ++i) {
            const double k = static_cast<double>(s.cardinalities[i]);
            for (auto& v : m.cond[c][i]) {
                v = (v + alpha) / (nc[c] + alpha * k);
            }
        }
    }
    return m;
}

// Joint probabilities by plain multiplication.
inline std::vector<double> product_joints(const NbcModel& model, const std::vector<std::size_t>& f) {
    const auto& s = model.schema();
    std::vector<double> j(s.class_count);
    for (std::size_t c = 0; c < s.class_count; ++c) {
        double p = model.prior(c);
        for (std::size_t i = 0; i < f.size(); ++i) {
            p *= model.likelihood(c, i, f[i]);
        }
        j[c] = p;
    }
    return j;
}

inline std::size_t first_max(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) {
            best = i;
        }
    }
    return best;
}

// Worst-case dominance margin of the predicted class over every rival at
// radius eps, written directly from the contamination envelopes and using
// plain products. Positive means robust.
inline double worst_local_margin(const NbcModel& model, const std::vector<std::size_t>& f, double eps) {
    const auto& s = model.schema();
    const std::size_t top = first_max(product_joints(model, f));
    double lower = (1.0 - eps) * model.prior(top);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double p = model.likelihood(top, i, f[i]);
        lower *= s.cardinalities[i] == 1 ? p : (1.0 - eps) * p;
    }
    double worst = INFINITY;
    for (std::size_t c = 0; c < s.class_count; ++c) {
        if (c == top) {
            continue;
        }
        double upper = (1.0 - eps) * model.prior(c) + eps;
        for (std::size_t i = 0; i < f.size(); ++i) {
            upper *= (1.0 - eps) * model.likelihood(c, i, f[i]) + eps;
        }
        worst = std::min(worst, lower - upper);
    }
    return worst;
}

// Root of the worst-case margin on a uniform grid of the given step: the
// first grid point at which the margin is no longer positive. The margin is
// non-increasing in eps, so a coarse pass locates the cell and a fine pass
// scans only that cell.
inline double local_root_by_scan(const NbcModel& model, const std::vector<std::size_t>& f, double step) {
    auto robust = [&](double e) { return worst_local_margin(model, f, e) > 0.0; };
    if (!robust(0.0)) {
        return 0.0;
    }
    const double coarse = 1e-3;
    double lo = 0.0;
    for (std::size_t k = 1; k <= 1000; ++k) {
        const double e = std::min(1.0, static_cast<double>(k) * coarse);
        if (!robust(e)) {
            break;
        }
        lo = e;
    }
    const auto steps = static_cast<std::size_t>(std::llround(coarse / step));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double e = lo + static_cast<double>(k) * step;
        if (e >= 1.0 || !robust(e)) {
            return std::min(e, 1.0);
        }
    }
    return std::min(lo + coarse, 1.0);
}

inline double entropy_reference(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            h -= v * std::log(v) / std::log(2.0);
        }
    }
    return h;
}

// Accuracy after rejecting the first k of `order`, recomputed from scratch.
inline std::vector<double> arc_reference(const std::vector<std::size_t>& order, const std::vector<bool>& correct) {
    std::vector<double> acc;
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::size_t right = 0;
        for (std::size_t j = k; j < order.size(); ++j) {
            right += correct[order[j]] ? 1 : 0;
        }
        acc.push_back(static_cast<double>(right) / static_cast<double>(order.size() - k));
    }
    return acc;
}

inline InstanceOrdering as_ordering(std::vector<std::size_t> order) {
    InstanceOrdering o;
    o.order = std::move(order);
    return o;
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(p));
    return p;
}

} // namespace relq::testing
