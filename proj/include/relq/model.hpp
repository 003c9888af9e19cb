#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relq/data.hpp"

namespace relq {

// Every class has zero joint probability for the queried features, so the
// conditional distribution is undefined. Only reachable with zero smoothing.
class DegenerateEvidenceError : public std::domain_error {
public:
    explicit DegenerateEvidenceError(const std::string& what, std::optional<std::size_t> member = std::nullopt)
        : std::domain_error(what), member_(member) {}

    // Ensemble member that raised the error, when applicable.
    std::optional<std::size_t> member() const { return member_; }

private:
    std::optional<std::size_t> member_;
};

// A classifier defined by a joint pmf over classes and discrete features.
// Uncertainty measures and the global robustness measure only need this.
class GenerativeClassifier {
public:
    virtual ~GenerativeClassifier() = default;

    virtual const FeatureSchema& schema() const = 0;

    // log P(c, f); -infinity when the joint is zero.
    virtual double log_joint(std::size_t c, FeatureView f) const = 0;

    double joint_prob(std::size_t c, FeatureView f) const;
    std::vector<double> log_joints(FeatureView f) const;
    std::vector<double> joints(FeatureView f) const;

    // P(. | f) by Bayes' rule, normalised in log space.
    std::vector<double> conditional(FeatureView f) const;

    // Class with the largest joint (equivalently conditional) probability,
    // lowest class index on ties.
    std::size_t predict(FeatureView f) const;

protected:
    void check_query(FeatureView f) const;
};

// Argmax with ties to the lowest index. Used wherever a prediction is taken.
std::size_t argmax_lowest(std::span<const double> values);

// Naive Bayes over categorical features.
class NbcModel final : public GenerativeClassifier {
public:
    using Table = std::vector<std::vector<std::vector<double>>>; // [class][feature][value]

    // Validates shapes and that the prior and every conditional row are pmfs
    // (non-negative, summing to 1 within 1e-9).
    NbcModel(FeatureSchema schema, std::vector<double> class_prior, Table conditionals, double smoothing);

    const FeatureSchema& schema() const override { return schema_; }
    double log_joint(std::size_t c, FeatureView f) const override;

    double smoothing() const { return smoothing_; }
    std::span<const double> class_prior() const { return prior_; }
    double prior(std::size_t c) const { return prior_.at(c); }
    // P(feature = value | class)
    double likelihood(std::size_t c, std::size_t feature, std::size_t value) const;
    std::span<const double> likelihoods(std::size_t c, std::size_t feature) const;
    const Table& conditionals() const { return cond_; }

    bool operator==(const NbcModel& other) const;

private:
    FeatureSchema schema_;
    std::vector<double> prior_;
    Table cond_;
    double smoothing_;
    std::vector<double> log_prior_;
    Table log_cond_;
};

// Laplace-smoothed maximum likelihood:
//   P(c)       = (n_c + a) / (m + a |C|)
//   P(v | c)   = (n_{c,v} + a) / (n_c + a |F_i|)
NbcModel fit(const CategoricalDataset& train, double alpha);

double accuracy(const GenerativeClassifier& model, const CategoricalDataset& data);

struct SmoothingSelection {
    double alpha = 1.0;
    std::vector<double> cv_accuracy; // one entry per grid value, in grid order
};

std::vector<double> default_smoothing_grid();

// k-fold CV accuracy for each candidate; best mean accuracy wins, ties to the
// smaller alpha.
SmoothingSelection tune_smoothing(const CategoricalDataset& train, std::span<const double> grid, std::size_t k,
                                  std::uint64_t seed);

// Plain-text model format. Probabilities are written in shortest round-trip
// decimal form, so write followed by read reproduces the model exactly.
void write_model(std::ostream& out, const NbcModel& model);
NbcModel read_model(std::istream& in);

} // namespace relq
