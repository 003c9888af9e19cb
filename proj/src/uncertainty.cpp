#include "relq/uncertainty.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "relq/rng.hpp"

namespace relq {

double entropy_bits(std::span<const double> pmf) {
    double h = 0.0;
    for (double p : pmf) {
        if (p >= 1e-300) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

double u_max(std::span<const double> conditional) {
    return 1.0 - conditional[argmax_lowest(conditional)];
}

double u_conf(std::span<const double> conditional) {
    if (conditional.size() < 2) {
        throw std::invalid_argument("u_conf needs at least two classes");
    }
    const std::size_t top = argmax_lowest(conditional);
    double runner_up = -1.0;
    for (std::size_t c = 0; c < conditional.size(); ++c) {
        if (c != top && conditional[c] > runner_up) {
            runner_up = conditional[c];
        }
    }
    return conditional[top] - runner_up;
}

double u_max(const GenerativeClassifier& model, FeatureView f) {
    // The predicted class comes from the joints, which is the same argmax as
    // the conditional up to rounding; use it so every measure agrees on it.
    const auto p = model.conditional(f);
    return 1.0 - p[model.predict(f)];
}

double u_conf(const GenerativeClassifier& model, FeatureView f) {
    const auto p = model.conditional(f);
    const std::size_t top = model.predict(f);
    double runner_up = -1.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (c != top && p[c] > runner_up) {
            runner_up = p[c];
        }
    }
    return p[top] - runner_up;
}

double u_entropy(const GenerativeClassifier& model, FeatureView f) { return entropy_bits(model.conditional(f)); }

Ensemble fit_ensemble(const CategoricalDataset& train, std::size_t members, double alpha, std::uint64_t seed) {
    if (members == 0) {
        throw std::invalid_argument("fit_ensemble: need at least one member");
    }
    Ensemble e;
    e.members.reserve(members);
    for (std::size_t m = 0; m < members; ++m) {
        const auto member_seed = derive_seed(seed, {m});
        e.seeds.push_back(member_seed);
        e.members.push_back(fit(bootstrap_sample(train, member_seed), alpha));
    }
    return e;
}

EnsembleUncertainty decompose_uncertainty(std::span<const std::vector<double>> member_conditionals) {
    if (member_conditionals.empty()) {
        throw std::invalid_argument("decompose_uncertainty: empty ensemble");
    }
    const std::size_t n_classes = member_conditionals.front().size();
    std::vector<double> mean(n_classes, 0.0);
    double aleatoric = 0.0;
    for (const auto& p : member_conditionals) {
        if (p.size() != n_classes) {
            throw std::invalid_argument("decompose_uncertainty: members disagree on class count");
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            mean[c] += p[c];
        }
        aleatoric += entropy_bits(p);
    }
    const double m = static_cast<double>(member_conditionals.size());
    for (auto& v : mean) {
        v /= m;
    }
    EnsembleUncertainty u;
    u.total = entropy_bits(mean);
    u.aleatoric = aleatoric / m;
    u.epistemic = u.total - u.aleatoric;
    if (u.epistemic < 0.0 && u.epistemic >= -1e-12) {
        u.epistemic = 0.0;
    }
    return u;
}

EnsembleUncertainty ensemble_uncertainties(const Ensemble& ensemble, FeatureView f) {
    std::vector<std::vector<double>> conditionals;
    conditionals.reserve(ensemble.size());
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        try {
            conditionals.push_back(ensemble.members[m].conditional(f));
        } catch (const DegenerateEvidenceError& e) {
            throw DegenerateEvidenceError("ensemble member " + std::to_string(m) + ": " + e.what(), m);
        }
    }
    return decompose_uncertainty(conditionals);
}

} // namespace relq
