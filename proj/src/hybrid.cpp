#include "relq/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "relq/model.hpp"
#include "relq/rng.hpp"
#include "relq/uncertainty.hpp"

namespace relq {

InstanceOrdering hybrid_order(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                              double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("hybrid_order: gamma must lie in [0, 1]");
    }
    if (by_uncertainty.size() != by_robustness.size()) {
        throw std::invalid_argument("hybrid_order: orderings cover different instance sets");
    }
    const auto pos_u = by_uncertainty.positions();
    const auto pos_r = by_robustness.positions();
    const std::size_t n = pos_u.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = gamma * static_cast<double>(pos_u[i]) + (1.0 - gamma) * static_cast<double>(pos_r[i]);
    }
    InstanceOrdering out;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        if (h[a] != h[b]) {
            return h[a] < h[b];
        }
        if (pos_u[a] != pos_u[b]) {
            return pos_u[a] < pos_u[b];
        }
        return a < b;
    });
    out.provenance = "hybrid gamma=" + std::to_string(gamma) + " of [" + by_uncertainty.provenance + "] and [" +
                     by_robustness.provenance + "]";
    return out;
}

std::vector<double> default_gamma_grid(std::size_t points) {
    if (points < 2) {
        throw std::invalid_argument("gamma grid needs at least two points");
    }
    std::vector<double> grid(points);
    const double steps = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = static_cast<double>(i) / steps;
    }
    return grid;
}

std::vector<double> default_mu_grid() {
    std::vector<double> grid;
    for (int i = -10; i <= 10; ++i) {
        grid.push_back(static_cast<double>(i) / 10.0);
    }
    return grid;
}

GammaSearch search_gamma(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                         const std::vector<bool>& correct, std::span<const double> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("gamma search: empty grid");
    }
    GammaSearch s;
    s.au_arc_by_gamma.reserve(grid.size());
    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        s.au_arc_by_gamma.push_back(arc(hybrid_order(by_uncertainty, by_robustness, grid[g]), correct).au_arc);
        if (g == 0) {
            continue;
        }
        const double a = s.au_arc_by_gamma[g];
        const double b = s.au_arc_by_gamma[best];
        const double da = std::abs(grid[g] - 0.5);
        const double db = std::abs(grid[best] - 0.5);
        if (a > b || (a == b && (da < db || (da == db && grid[g] < grid[best])))) {
            best = g;
        }
    }
    s.gamma = grid[best];
    s.au_arc = s.au_arc_by_gamma[best];
    return s;
}

GammaSearch tune_gamma_train(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                             const std::vector<bool>& correct, std::span<const double> grid) {
    return search_gamma(by_uncertainty, by_robustness, correct, grid);
}

GammaSearch gamma_opt(const InstanceOrdering& by_uncertainty, const InstanceOrdering& by_robustness,
                      const std::vector<bool>& correct, std::span<const double> grid) {
    return search_gamma(by_uncertainty, by_robustness, correct, grid);
}

double gamma_star(double gamma_train, double mu) {
    if (!(gamma_train >= 0.0 && gamma_train <= 1.0)) {
        throw std::invalid_argument("gamma_star: gamma_train must lie in [0, 1]");
    }
    if (!(mu >= -1.0 && mu <= 1.0)) {
        throw std::invalid_argument("gamma_star: mu must lie in [-1, 1]");
    }
    return mu > 0.0 ? (1.0 - mu) * gamma_train + mu : (1.0 + mu) * gamma_train;
}

MuSelection tune_mu(const CategoricalDataset& train, HybridPair pair, const MuTuningOptions& options) {
    if (options.mu_grid.empty()) {
        throw std::invalid_argument("tune_mu: empty mu grid");
    }
    for (double mu : options.mu_grid) {
        if (!(mu >= -1.0 && mu <= 1.0)) {
            throw std::invalid_argument("tune_mu: mu grid must lie in [-1, 1]");
        }
    }
    if (train.size() < options.folds) {
        throw std::invalid_argument("tune_mu: training set smaller than the number of folds");
    }
    const std::vector<Measure> measures = {pair.uncertainty, pair.robustness};
    const bool want_ensemble = needs_ensemble(pair.uncertainty) || needs_ensemble(pair.robustness);

    MuSelection sel;
    sel.mean_au_arc.assign(options.mu_grid.size(), 0.0);
    const auto folds = kfold(train, options.folds, options.seed);
    for (std::size_t k = 0; k < folds.size(); ++k) {
        const auto& fold = folds[k];
        const NbcModel model = fit(fold.train, options.alpha);
        std::optional<Ensemble> ensemble;
        if (want_ensemble) {
            ensemble = fit_ensemble(fold.train, options.ensemble_size, options.alpha,
                                    derive_seed(options.seed, {hash_label("ensemble"), k}));
        }
        const Ensemble* ens = ensemble ? &*ensemble : nullptr;
        const auto fit_scores = score_instances(model, ens, fold.train, measures);
        const auto held_scores = score_instances(model, ens, fold.validation, measures);

        const double gamma_train = tune_gamma_train(fit_scores.ordering(pair.uncertainty),
                                                    fit_scores.ordering(pair.robustness), fit_scores.correct,
                                                    options.gamma_grid)
                                       .gamma;
        const auto held_u = held_scores.ordering(pair.uncertainty);
        const auto held_r = held_scores.ordering(pair.robustness);
        for (std::size_t j = 0; j < options.mu_grid.size(); ++j) {
            const double g = gamma_star(gamma_train, options.mu_grid[j]);
            sel.mean_au_arc[j] += arc(hybrid_order(held_u, held_r, g), held_scores.correct).au_arc;
        }
    }
    std::size_t best = 0;
    for (std::size_t j = 0; j < sel.mean_au_arc.size(); ++j) {
        sel.mean_au_arc[j] /= static_cast<double>(folds.size());
        if (j == 0) {
            continue;
        }
        const double a = sel.mean_au_arc[j];
        const double b = sel.mean_au_arc[best];
        const double da = std::abs(options.mu_grid[j]);
        const double db = std::abs(options.mu_grid[best]);
        if (a > b || (a == b && (da < db || (da == db && options.mu_grid[j] < options.mu_grid[best])))) {
            best = j;
        }
    }
    sel.mu = options.mu_grid[best];
    return sel;
}

} // namespace relq
