#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relq/data.hpp"
#include "relq/model.hpp"

namespace relq {

// Global robustness: the largest epsilon for which every epsilon-contamination
// of the joint pmf keeps the prediction. Closed form Delta / (1 + Delta), with
// Delta the gap between the two largest joint probabilities.
double global_robustness_from_joints(std::span<const double> joints);
double r_global(const GenerativeClassifier& model, FeatureView f);

// Local robustness of a naive Bayes prediction.
//
// Every local pmf of the model (the class prior and each P(F_i | c)) is
// independently replaced by (1 - eps) p + eps q for an arbitrary pmf q. The
// prediction c^ is robust at eps when, for every rival c', all members of
// this neighbourhood give c^ a strictly larger joint than c'.
//
// The dominance margin is multilinear in the free pmfs, so its minimum sits
// at a vertex and separates per pmf:
//   prior:        q = point mass on c'   (lowers c^, raises c')
//   P(F_i | c^):  mass away from f_i     -> (1 - eps) p   (p itself if |F_i| = 1)
//   P(F_i | c'):  mass on f_i            -> (1 - eps) p + eps
// which gives the test
//   (1-eps) P(c^) prod_i low_i  >  ((1-eps) P(c') + eps) prod_i ((1-eps) P(f_i|c') + eps).
// It is evaluated in log space. Margins within a relative 1e-12 count as
// ties and therefore as not robust.
bool is_robust_local(const NbcModel& model, FeatureView f, double epsilon);

// Largest eps in [0, 1] at which is_robust_local holds, by bisection on
// [0, 1] until the bracket is narrower than tol (or max_iter halvings).
// Returns 0 when the prediction is not robust at eps = 0.
double r_local(const NbcModel& model, FeatureView f, double tol = 1e-6, int max_iter = 60);

// A vertex of the contaminated credal set for one rival class: where each
// local pmf puts its eps mass.
struct ContaminationVertex {
    std::size_t predicted = 0;
    std::size_t rival = 0;
    std::size_t prior_outcome = 0;
    std::vector<std::size_t> predicted_outcomes; // per feature, for P(F_i | predicted)
    std::vector<std::size_t> rival_outcomes;     // per feature, for P(F_i | rival)
    double margin = 0.0;                         // joint(predicted) - joint(rival) at this vertex
};

struct LocalOracleResult {
    bool robust = false;
    ContaminationVertex worst; // vertex with the smallest margin over all rivals
};

// Brute-force check: enumerates every vertex combination for every rival and
// evaluates the margin with plain products. Throws std::length_error when a
// rival needs more than max_vertices combinations.
LocalOracleResult local_robustness_oracle(const NbcModel& model, FeatureView f, double epsilon,
                                          std::size_t max_vertices = 1'000'000);

bool r_local_oracle(const NbcModel& model, FeatureView f, double epsilon);

// The naive Bayes model obtained by contaminating at `vertex` with radius
// epsilon. Pmfs not involved in the vertex are left as they are.
NbcModel contaminate(const NbcModel& model, double epsilon, const ContaminationVertex& vertex);

} // namespace relq
