#include "relq/measures.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "relq/robustness.hpp"

namespace relq {

std::string_view measure_name(Measure m) {
    switch (m) {
    case Measure::UMax: return "u_max";
    case Measure::UConf: return "u_conf";
    case Measure::UEntropy: return "u_H";
    case Measure::UTotal: return "u_t";
    case Measure::UAleatoric: return "u_a";
    case Measure::UEpistemic: return "u_e";
    case Measure::RGlobal: return "r_glob";
    case Measure::RLocal: return "r_loc";
    }
    return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
    for (Measure m : kAllMeasures) {
        if (measure_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

bool is_robustness(Measure m) { return m == Measure::RGlobal || m == Measure::RLocal; }

bool needs_ensemble(Measure m) {
    return m == Measure::UTotal || m == Measure::UAleatoric || m == Measure::UEpistemic;
}

RejectDirection rejection_direction(Measure m) {
    return (is_robustness(m) || m == Measure::UConf) ? RejectDirection::LowFirst : RejectDirection::HighFirst;
}

std::span<const double> MeasureTable::of(Measure m) const {
    auto it = std::find(measures.begin(), measures.end(), m);
    if (it == measures.end()) {
        throw std::out_of_range("measure " + std::string(measure_name(m)) + " was not computed");
    }
    return values[static_cast<std::size_t>(it - measures.begin())];
}

InstanceOrdering MeasureTable::ordering(Measure m) const {
    auto o = order_instances(of(m), rejection_direction(m));
    o.provenance = std::string(measure_name(m)) + ", " + o.provenance + ", ties by index";
    return o;
}

MeasureTable score_instances(const NbcModel& model, const Ensemble* ensemble, const CategoricalDataset& data,
                             std::span<const Measure> measures) {
    const bool want_ensemble = std::any_of(measures.begin(), measures.end(), needs_ensemble);
    if (want_ensemble && (ensemble == nullptr || ensemble->size() == 0)) {
        throw std::invalid_argument("score_instances: ensemble measures requested without an ensemble");
    }
    MeasureTable t;
    t.measures.assign(measures.begin(), measures.end());
    t.values.assign(measures.size(), std::vector<double>(data.size(), 0.0));
    t.correct.assign(data.size(), false);
    for (std::size_t n = 0; n < data.size(); ++n) {
        const auto& inst = data[n];
        const FeatureView f = inst.features;
        const auto cond = model.conditional(f);
        const std::size_t predicted = model.predict(f);
        t.correct[n] = predicted == inst.label;
        EnsembleUncertainty eu;
        if (want_ensemble) {
            eu = ensemble_uncertainties(*ensemble, f);
        }
        for (std::size_t j = 0; j < measures.size(); ++j) {
            double v = 0.0;
            switch (measures[j]) {
            case Measure::UMax: v = 1.0 - cond[predicted]; break;
            case Measure::UConf: v = u_conf(model, f); break;
            case Measure::UEntropy: v = entropy_bits(cond); break;
            case Measure::UTotal: v = eu.total; break;
            case Measure::UAleatoric: v = eu.aleatoric; break;
            case Measure::UEpistemic: v = eu.epistemic; break;
            case Measure::RGlobal: v = r_global(model, f); break;
            case Measure::RLocal: v = r_local(model, f); break;
            }
            t.values[j][n] = v;
        }
    }
    return t;
}

} // namespace relq
