#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relq/data.hpp"
#include "relq/evaluation.hpp"
#include "relq/measures.hpp"

namespace relq {

// Orders instances by h_i = gamma * pos_u(i) + (1 - gamma) * pos_r(i) with
// 0-based positions. Ties go to the smaller uncertainty position, then to the
// smaller index. gamma = 1 reproduces `by_uncertainty`, gamma = 0 `by_robustness`.
InstanceOrdering hybrid_order(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                              double gamma);

// {0, 0.01, ..., 1} for the default 101 points.
std::vector<double> default_gamma_grid(std::size_t points = 101);
// {-1, -0.9, ..., 1}
std::vector<double> default_mu_grid();

struct GammaSearch {
    double gamma = 0.5;
    double au_arc = 0.0;
    std::vector<double> au_arc_by_gamma; // grid order
};

// AU-ARC of the hybrid ordering for every grid value; the best one wins, ties
// resolved toward 0.5.
GammaSearch search_gamma(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                         const std::vector<bool>& correct, std::span<const double> grid);

// search_gamma on the training instances.
GammaSearch tune_gamma_train(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                             const std::vector<bool>& correct, std::span<const double> grid);

// search_gamma on the test instances: a reference optimum that needs the test
// labels, so it is reported but never deployed.
GammaSearch gamma_opt(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                      const std::vector<bool>& correct, std::span<const double> grid);

// Biased weight: (1 - mu) gamma_train + mu for mu > 0, (1 + mu) gamma_train otherwise.
double gamma_star(double gamma_train, double mu);

struct HybridPair {
    Measure uncertainty = Measure::UAleatoric;
    Measure robustness = Measure::RGlobal;
};

struct MuTuningOptions {
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    std::size_t ensemble_size = 10;
    std::vector<double> gamma_grid = default_gamma_grid();
    std::vector<double> mu_grid = default_mu_grid();
};

struct MuSelection {
    double mu = 0.0;
    std::vector<double> mean_au_arc; // per mu, grid order
};

// k-fold CV over the training set. In each fold the model (and ensemble, when
// the uncertainty measure needs one) is refit on the fold's training part,
// gamma_train is searched on that part, and every mu is scored by the
// held-out AU-ARC at gamma_star(gamma_train, mu). Ties go toward mu = 0.
MuSelection tune_mu(const CategoricalDataset& train, HybridPair pair, const MuTuningOptions& options);

} // namespace relq
