#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "relq/data.hpp"
#include "relq/evaluation.hpp"
#include "relq/model.hpp"
#include "relq/uncertainty.hpp"

namespace relq {

enum class Measure {
    UMax,
    UConf,
    UEntropy,
    UTotal,
    UAleatoric,
    UEpistemic,
    RGlobal,
    RLocal,
};

inline constexpr std::array<Measure, 8> kAllMeasures = {
    Measure::UMax,       Measure::UConf,      Measure::UEntropy, Measure::UTotal,
    Measure::UAleatoric, Measure::UEpistemic, Measure::RGlobal,  Measure::RLocal,
};

std::string_view measure_name(Measure m);
std::optional<Measure> parse_measure(std::string_view name);

bool is_robustness(Measure m);
bool needs_ensemble(Measure m);

// Direction that rejects the least reliable instances first. u_conf and the
// robustness measures grow with reliability; the rest shrink.
RejectDirection rejection_direction(Measure m);

// Per-instance values of a set of measures on one dataset, plus whether the
// model's prediction was correct.
struct MeasureTable {
    std::vector<Measure> measures;
    std::vector<std::vector<double>> values; // [measure][instance]
    std::vector<bool> correct;

    std::span<const double> of(Measure m) const;
    InstanceOrdering ordering(Measure m) const;
};

// `ensemble` may be null when no requested measure needs it.
MeasureTable score_instances(const NbcModel& model, const Ensemble* ensemble, const CategoricalDataset& data,
                             std::span<const Measure> measures);

} // namespace relq
