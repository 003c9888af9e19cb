#include "relq/robustness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relq {

namespace {

constexpr double kTieTolerance = 1e-12;

double safe_log(double v) { return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity(); }

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("contamination radius must lie in [0, 1]");
    }
}

} // namespace

double global_robustness_from_joints(std::span<const double> joints) {
    if (joints.size() < 2) {
        throw std::invalid_argument("global robustness needs at least two classes");
    }
    const std::size_t top = argmax_lowest(joints);
    double runner_up = -1.0;
    for (std::size_t c = 0; c < joints.size(); ++c) {
        if (c != top && joints[c] > runner_up) {
            runner_up = joints[c];
        }
    }
    const double delta = joints[top] - runner_up;
    return delta / (1.0 + delta);
}

double r_global(const GenerativeClassifier& model, FeatureView f) { return global_robustness_from_joints(model.joints(f)); }

bool is_robust_local(const NbcModel& model, FeatureView f, double epsilon) {
    check_epsilon(epsilon);
    const std::size_t top = model.predict(f);
    const auto& schema = model.schema();
    const double keep = 1.0 - epsilon;

    double log_lower = safe_log(keep * model.prior(top));
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double p = model.likelihood(top, i, f[i]);
        log_lower += safe_log(schema.cardinalities[i] >= 2 ? keep * p : p);
    }
    for (std::size_t rival = 0; rival < schema.class_count; ++rival) {
        if (rival == top) {
            continue;
        }
        double log_upper = safe_log(keep * model.prior(rival) + epsilon);
        for (std::size_t i = 0; i < f.size(); ++i) {
            log_upper += safe_log(keep * model.likelihood(rival, i, f[i]) + epsilon);
        }
        // NaN (both sides zero) fails the comparison as well.
        if (!(log_lower - log_upper > kTieTolerance)) {
            return false;
        }
    }
    return true;
}

double r_local(const NbcModel& model, FeatureView f, double tol, int max_iter) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("r_local: tolerance must be positive");
    }
    if (!is_robust_local(model, f, 0.0)) {
        return 0.0;
    }
    // The lower side decreases and the upper side increases with eps, and the
    // test always fails at eps = 1, so [lo, hi] brackets the boundary.
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (is_robust_local(model, f, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LocalOracleResult local_robustness_oracle(const NbcModel& model, FeatureView f, double epsilon,
                                          std::size_t max_vertices) {
    check_epsilon(epsilon);
    const auto& schema = model.schema();
    const std::size_t n_features = schema.feature_count();
    const std::size_t top = model.predict(f);
    const double keep = 1.0 - epsilon;

    std::size_t combos = schema.class_count;
    for (std::size_t card : schema.cardinalities) {
        if (combos > max_vertices / (card * card)) {
            throw std::length_error("local_robustness_oracle: too many vertices to enumerate");
        }
        combos *= card * card;
    }

    LocalOracleResult result;
    result.robust = true;
    result.worst.margin = std::numeric_limits<double>::infinity();

    // Mixed-radix counter over (prior outcome, predicted outcomes, rival outcomes).
    std::vector<std::size_t> radix;
    radix.push_back(schema.class_count);
    for (std::size_t i = 0; i < n_features; ++i) {
        radix.push_back(schema.cardinalities[i]);
    }
    for (std::size_t i = 0; i < n_features; ++i) {
        radix.push_back(schema.cardinalities[i]);
    }

    for (std::size_t rival = 0; rival < schema.class_count; ++rival) {
        if (rival == top) {
            continue;
        }
        std::vector<std::size_t> digit(radix.size(), 0);
        for (std::size_t n = 0; n < combos; ++n) {
            const std::size_t q_prior = digit[0];
            double lhs = keep * model.prior(top) + (q_prior == top ? epsilon : 0.0);
            double rhs = keep * model.prior(rival) + (q_prior == rival ? epsilon : 0.0);
            for (std::size_t i = 0; i < n_features; ++i) {
                const std::size_t q_top = digit[1 + i];
                const std::size_t q_rival = digit[1 + n_features + i];
                lhs *= keep * model.likelihood(top, i, f[i]) + (q_top == f[i] ? epsilon : 0.0);
                rhs *= keep * model.likelihood(rival, i, f[i]) + (q_rival == f[i] ? epsilon : 0.0);
            }
            const double margin = lhs - rhs;
            if (!(margin > std::expm1(kTieTolerance) * rhs)) {
                result.robust = false;
            }
            if (margin < result.worst.margin) {
                result.worst.predicted = top;
                result.worst.rival = rival;
                result.worst.prior_outcome = q_prior;
                result.worst.predicted_outcomes.assign(digit.begin() + 1, digit.begin() + 1 + static_cast<std::ptrdiff_t>(n_features));
                result.worst.rival_outcomes.assign(digit.begin() + 1 + static_cast<std::ptrdiff_t>(n_features), digit.end());
                result.worst.margin = margin;
            }
            for (std::size_t d = 0; d < digit.size(); ++d) {
                if (++digit[d] < radix[d]) {
                    break;
                }
                digit[d] = 0;
            }
        }
    }
    return result;
}

bool r_local_oracle(const NbcModel& model, FeatureView f, double epsilon) {
    return local_robustness_oracle(model, f, epsilon).robust;
}

NbcModel contaminate(const NbcModel& model, double epsilon, const ContaminationVertex& vertex) {
    check_epsilon(epsilon);
    const auto& schema = model.schema();
    const double keep = 1.0 - epsilon;
    auto mix = [&](std::span<const double> p, std::size_t outcome) {
        std::vector<double> out(p.begin(), p.end());
        for (auto& v : out) {
            v *= keep;
        }
        out.at(outcome) += epsilon;
        return out;
    };
    auto prior = mix(model.class_prior(), vertex.prior_outcome);
    auto table = model.conditionals();
    for (std::size_t i = 0; i < schema.feature_count(); ++i) {
        table.at(vertex.predicted)[i] = mix(model.likelihoods(vertex.predicted, i), vertex.predicted_outcomes.at(i));
        table.at(vertex.rival)[i] = mix(model.likelihoods(vertex.rival, i), vertex.rival_outcomes.at(i));
    }
    return NbcModel(schema, std::move(prior), std::move(table), model.smoothing());
}

} // namespace relq
