#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relq/data.hpp"
#include "relq/model.hpp"

namespace relq {

// Shannon entropy in bits. Terms with p below 1e-300 count as zero.
double entropy_bits(std::span<const double> pmf);

// Probability that the predicted class is wrong under the model.
double u_max(const GenerativeClassifier& model, FeatureView f);

// Margin between the top two conditional probabilities. Larger values mean a
// MORE reliable prediction, unlike every other uncertainty measure.
double u_conf(const GenerativeClassifier& model, FeatureView f);

double u_entropy(const GenerativeClassifier& model, FeatureView f);

// Same measures from an already computed conditional distribution.
double u_max(std::span<const double> conditional);
double u_conf(std::span<const double> conditional);

// Bootstrap ensemble of naive Bayes models sharing one smoothing value.
struct Ensemble {
    std::vector<NbcModel> members;
    std::vector<std::uint64_t> seeds;

    std::size_t size() const { return members.size(); }
};

// Member m is fit on bootstrap_sample(train, derive_seed(seed, {m})).
Ensemble fit_ensemble(const CategoricalDataset& train, std::size_t members, double alpha, std::uint64_t seed);

struct EnsembleUncertainty {
    double total = 0.0;      // entropy of the mean conditional
    double aleatoric = 0.0;  // mean of member entropies
    double epistemic = 0.0;  // total - aleatoric
};

// Decomposition from member conditionals (all of equal length). Summation
// runs over members then classes in index order.
EnsembleUncertainty decompose_uncertainty(std::span<const std::vector<double>> member_conditionals);

// Degenerate evidence in a member is rethrown with the member index attached.
EnsembleUncertainty ensemble_uncertainties(const Ensemble& ensemble, FeatureView f);

} // namespace relq
