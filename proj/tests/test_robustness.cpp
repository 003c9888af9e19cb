#include <doctest.h>

#include <cmath>

#include "relq/robustness.hpp"
#include "support.hpp"

using namespace relq;
using namespace relq::testing;

namespace {

using V = std::vector<double>;

// prior (0.7, 0.3), P(f=0 | c) = (0.9, 0.2)
NbcModel two_class_model() {
    return NbcModel(make_schema({2}, 2), {0.7, 0.3}, {{{0.9, 0.1}}, {{0.2, 0.8}}}, 0.0);
}

const std::vector<std::size_t> kZero{0};

} // namespace

TEST_CASE("global robustness closed form") {
    CHECK(global_robustness_from_joints(V{0.3, 0.3}) == 0.0);
    CHECK(std::abs(global_robustness_from_joints(V{0.3, 0.1}) - 1.0 / 6.0) <= 1e-12);
    CHECK(global_robustness_from_joints(V{1.0, 0.0}) == 0.5);
    CHECK(global_robustness_from_joints(V{0.1, 0.2, 0.05}) == doctest::Approx(0.1 / 1.1));
    CHECK_THROWS(global_robustness_from_joints(V{1.0}));
}

TEST_CASE("global robustness is strictly increasing in the gap") {
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double d = static_cast<double>(i) / 999.0;
        const double r = global_robustness_from_joints(V{d, 0.0});
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("local dominance hand example") {
    const auto m = two_class_model();
    // 0.9 * 0.7 * 0.9 * 0.9 = 0.5103 against 0.37 * 0.28 = 0.1036
    CHECK(is_robust_local(m, kZero, 0.1));
    CHECK(r_local_oracle(m, kZero, 0.1));
    CHECK_FALSE(r_local_oracle(m, kZero, 0.9));
    CHECK_FALSE(is_robust_local(m, kZero, 0.9));
    CHECK_FALSE(is_robust_local(m, kZero, 1.0));
    CHECK(worst_local_margin(m, {0}, 0.1) == doctest::Approx(0.5103 - 0.1036));
}

TEST_CASE("radius zero reduces to strict joint dominance") {
    Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = random_dataset(rng, 3, 3, 3, 2, 10);
        const auto m = fit(d, trial % 2 ? 1.0 : 0.1);
        const auto f = random_query(rng, m.schema());
        auto joints = m.joints(f);
        const auto top = m.predict(f);
        double second = 0.0;
        for (std::size_t c = 0; c < joints.size(); ++c) {
            if (c != top) {
                second = std::max(second, joints[c]);
            }
        }
        const bool dominates = joints[top] > second * (1.0 + 1e-11);
        const bool tied = std::abs(joints[top] - second) <= 1e-13 * joints[top];
        if (dominates || tied) {
            CHECK(is_robust_local(m, f, 0.0) == dominates);
            CHECK(r_local_oracle(m, f, 0.0) == dominates);
        }
    }
}

TEST_CASE("tied top joints have zero local robustness") {
    const NbcModel m(make_schema({2}, 2), {0.5, 0.5}, {{{0.4, 0.6}}, {{0.4, 0.6}}}, 0.0);
    CHECK(r_local(m, kZero) == 0.0);
    CHECK_FALSE(is_robust_local(m, kZero, 0.0));
}

TEST_CASE("bisection matches a grid scan of the margin") {
    const auto m = two_class_model();
    const double root = local_root_by_scan(m, {0}, 1e-7);
    const double r = r_local(m, kZero);
    CHECK(std::abs(r - root) <= 2e-6);
    CHECK(is_robust_local(m, kZero, r - 2e-6));
    CHECK_FALSE(is_robust_local(m, kZero, r + 2e-6));

    Rng rng(2);
    for (int trial = 0; trial < 60; ++trial) {
        const auto d = random_dataset(rng, 3, 3, 3, 3, 12);
        const auto model = fit(d, trial % 2 ? 1.0 : 0.1);
        const auto f = random_query(rng, model.schema());
        const double scan = local_root_by_scan(model, f, 1e-7);
        const double est = r_local(model, f);
        CHECK(std::abs(est - scan) <= 2e-6);
        if (est > 2e-6 && est < 1.0 - 2e-6) {
            CHECK(is_robust_local(model, f, est - 2e-6));
            CHECK_FALSE(is_robust_local(model, f, est + 2e-6));
        }
    }
}

TEST_CASE("dominance check agrees with vertex enumeration") {
    Rng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const auto d = random_dataset(rng, 3, 3, 3, 2, 15);
        const auto m = fit(d, trial % 2 ? 1.0 : 0.1);
        const auto f = random_query(rng, m.schema());
        for (int k = 0; k < 20; ++k) {
            const double eps = 0.05 * k;
            CHECK(is_robust_local(m, f, eps) == r_local_oracle(m, f, eps));
        }
    }
}

TEST_CASE("the worst vertex is a real counterexample when not robust") {
    Rng rng(4);
    int witnessed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_dataset(rng, 3, 3, 3, 3, 15);
        const auto m = fit(d, 1.0);
        const auto f = random_query(rng, m.schema());
        const double eps = 0.05 + 0.9 * rng.uniform();
        const auto res = local_robustness_oracle(m, f, eps);
        if (res.robust) {
            continue;
        }
        const auto perturbed = contaminate(m, eps, res.worst);
        const auto j = perturbed.joints(f);
        CHECK(j[res.worst.rival] >= j[res.worst.predicted] * (1.0 - 1e-11));
        ++witnessed;
    }
    CHECK(witnessed > 50);
}

TEST_CASE("random members of the neighbourhood never flip a robust prediction") {
    // Independent of the vertex argument: sample arbitrary contaminating pmfs.
    Rng rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        const auto d = random_dataset(rng, 3, 3, 3, 3, 15);
        const auto m = fit(d, 1.0);
        const auto f = random_query(rng, m.schema());
        const double r = r_local(m, f);
        if (r < 1e-3) {
            continue;
        }
        const double eps = r * 0.999;
        const auto& s = m.schema();
        const auto top = m.predict(f);
        for (int draw = 0; draw < 200; ++draw) {
            auto mix = [&](std::span<const double> p) {
                auto q = random_pmf(rng, p.size(), 0.5);
                V out(p.size());
                for (std::size_t v = 0; v < p.size(); ++v) {
                    out[v] = (1.0 - eps) * p[v] + eps * q[v];
                }
                return out;
            };
            auto prior = mix(m.class_prior());
            auto table = m.conditionals();
            for (std::size_t c = 0; c < s.class_count; ++c) {
                for (std::size_t i = 0; i < s.feature_count(); ++i) {
                    table[c][i] = mix(m.likelihoods(c, i));
                }
            }
            const NbcModel p(s, prior, table, 1.0);
            const auto j = p.joints(f);
            for (std::size_t c = 0; c < s.class_count; ++c) {
                if (c != top) {
                    CHECK(j[top] > j[c]);
                }
            }
        }
    }
}

TEST_CASE("local robustness decreases with the radius") {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_dataset(rng, 3, 3, 3, 3, 15);
        const auto m = fit(d, 0.1);
        const auto f = random_query(rng, m.schema());
        bool was_robust = true;
        for (int k = 0; k <= 100; ++k) {
            const bool now = is_robust_local(m, f, k / 100.0);
            CHECK_FALSE((now && !was_robust));
            was_robust = now;
        }
    }
}

TEST_CASE("argument checks") {
    const auto m = two_class_model();
    CHECK_THROWS(is_robust_local(m, kZero, -0.1));
    CHECK_THROWS(is_robust_local(m, kZero, 1.1));
    CHECK_THROWS(r_local(m, kZero, 0.0));
    const NbcModel wide(make_schema({10, 10, 10, 10}, 2), {0.5, 0.5},
                        {std::vector<V>(4, V(10, 0.1)), std::vector<V>(4, V(10, 0.1))}, 1.0);
    CHECK_THROWS_AS(local_robustness_oracle(wide, std::vector<std::size_t>{0, 0, 0, 0}, 0.1, 1000), std::length_error);
}
