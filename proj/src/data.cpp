#include "relq/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "relq/rng.hpp"

namespace relq {

void FeatureSchema::validate() const {
    if (class_count < 2) {
        throw std::invalid_argument("schema needs at least two classes");
    }
    for (std::size_t i = 0; i < cardinalities.size(); ++i) {
        if (cardinalities[i] == 0) {
            throw std::invalid_argument("feature " + std::to_string(i) + " has zero cardinality");
        }
    }
    if (!feature_names.empty() && feature_names.size() != feature_count()) {
        throw std::invalid_argument("feature_names size does not match feature count");
    }
    if (!value_names.empty()) {
        if (value_names.size() != feature_count()) {
            throw std::invalid_argument("value_names size does not match feature count");
        }
        for (std::size_t i = 0; i < value_names.size(); ++i) {
            if (value_names[i].size() != cardinalities[i]) {
                throw std::invalid_argument("value_names for feature " + std::to_string(i) +
                                            " do not match its cardinality");
            }
        }
    }
    if (!class_names.empty() && class_names.size() != class_count) {
        throw std::invalid_argument("class_names size does not match class count");
    }
}

bool FeatureSchema::contains(FeatureView features) const {
    if (features.size() != feature_count()) {
        return false;
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i] >= cardinalities[i]) {
            return false;
        }
    }
    return true;
}

CategoricalDataset::CategoricalDataset(FeatureSchema schema, std::vector<Instance> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {
    schema_.validate();
    for (std::size_t n = 0; n < instances_.size(); ++n) {
        const auto& inst = instances_[n];
        if (!schema_.contains(inst.features)) {
            throw std::invalid_argument("instance " + std::to_string(n) + " has out-of-range feature values");
        }
        if (inst.label >= schema_.class_count) {
            throw std::invalid_argument("instance " + std::to_string(n) + " has out-of-range class label");
        }
    }
}

CategoricalDataset CategoricalDataset::subset(std::span<const std::size_t> indices) const {
    std::vector<Instance> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) {
        picked.push_back(instances_.at(i));
    }
    return CategoricalDataset(schema_, std::move(picked));
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(idx));
    return idx;
}

} // namespace

TrainTestSplit split(const CategoricalDataset& dataset, const SplitSpec& spec) {
    if (dataset.empty()) {
        throw std::invalid_argument("split: empty dataset");
    }
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw std::invalid_argument("split: train_fraction must lie strictly between 0 and 1");
    }
    if (spec.size_cap == 0) {
        throw std::invalid_argument("split: size_cap must be positive");
    }
    Rng rng(spec.seed);
    // A full shuffle followed by truncation is a uniform capped subset that is
    // already in random order.
    auto idx = shuffled_indices(dataset.size(), rng);
    idx.resize(std::min(idx.size(), spec.size_cap));
    const auto m = idx.size();
    auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(m)));
    n_train = std::min(n_train, m);
    std::span<const std::size_t> all(idx);
    return {dataset.subset(all.first(n_train)), dataset.subset(all.subspan(n_train))};
}

CategoricalDataset bootstrap_sample(const CategoricalDataset& dataset, std::uint64_t seed) {
    if (dataset.empty()) {
        throw std::invalid_argument("bootstrap_sample: empty dataset");
    }
    Rng rng(seed);
    std::vector<std::size_t> idx(dataset.size());
    for (auto& i : idx) {
        i = rng.below(dataset.size());
    }
    return dataset.subset(idx);
}

CategoricalDataset subsample(const CategoricalDataset& dataset, std::size_t count, std::uint64_t seed) {
    if (count >= dataset.size()) {
        return dataset;
    }
    Rng rng(seed);
    auto idx = shuffled_indices(dataset.size(), rng);
    idx.resize(count);
    return dataset.subset(idx);
}

CategoricalDataset corrupt_features(const CategoricalDataset& dataset, double beta, std::uint64_t seed) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("corrupt_features: beta must lie in [0, 1]");
    }
    Rng rng(seed);
    const auto& card = dataset.schema().cardinalities;
    std::vector<Instance> out(dataset.instances().begin(), dataset.instances().end());
    for (auto& inst : out) {
        for (std::size_t i = 0; i < inst.features.size(); ++i) {
            if (card[i] < 2 || !rng.bernoulli(beta)) {
                continue;
            }
            std::size_t replacement = rng.below(card[i] - 1);
            if (replacement >= inst.features[i]) {
                ++replacement;
            }
            inst.features[i] = replacement;
        }
    }
    return CategoricalDataset(dataset.schema(), std::move(out));
}

std::vector<FoldIndices> kfold_indices(std::size_t size, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw std::invalid_argument("kfold: k must be at least 2");
    }
    if (size < k) {
        throw std::invalid_argument("kfold: dataset has " + std::to_string(size) + " instances, fewer than k = " +
                                    std::to_string(k));
    }
    Rng rng(seed);
    auto idx = shuffled_indices(size, rng);
    std::vector<FoldIndices> folds(k);
    const std::size_t base = size / k;
    const std::size_t extra = size % k;
    std::size_t start = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(start),
                                   idx.begin() + static_cast<std::ptrdiff_t>(start + len));
        folds[f].train.reserve(size - len);
        folds[f].train.insert(folds[f].train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(start));
        folds[f].train.insert(folds[f].train.end(), idx.begin() + static_cast<std::ptrdiff_t>(start + len), idx.end());
        start += len;
    }
    return folds;
}

std::vector<Fold> kfold(const CategoricalDataset& dataset, std::size_t k, std::uint64_t seed) {
    std::vector<Fold> out;
    for (const auto& f : kfold_indices(dataset.size(), k, seed)) {
        out.push_back({dataset.subset(f.train), dataset.subset(f.validation)});
    }
    return out;
}

// --- loading ----------------------------------------------------------------

DatasetDescriptor DatasetDescriptor::from_key_values(const KeyValues& kv, const std::filesystem::path& base_dir) {
    DatasetDescriptor d;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) {
            return std::nullopt;
        }
        return it->second;
    };
    for (const auto& [key, _] : kv) {
        static const char* known[] = {"name", "file", "delimiter", "header", "class", "drop", "missing", "target"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw std::invalid_argument("dataset descriptor: unknown key '" + key + "'");
        }
    }
    d.name = get("name").value_or("");
    if (auto file = get("file")) {
        std::filesystem::path p(*file);
        d.file = p.is_relative() ? base_dir / p : p;
    }
    if (auto delim = get("delimiter")) {
        if (*delim == "tab" || *delim == "\\t") {
            d.delimiter = '\t';
        } else if (delim->size() == 1) {
            d.delimiter = delim->front();
        } else {
            throw std::invalid_argument("dataset descriptor: delimiter must be one character or 'tab'");
        }
    }
    if (auto header = get("header")) {
        d.header = parse_bool(*header);
    }
    d.class_columns = split_list(get("class").value_or(""));
    if (d.class_columns.empty()) {
        throw std::invalid_argument("dataset descriptor: 'class' is required");
    }
    d.drop_columns = split_list(get("drop").value_or(""));
    if (auto missing = get("missing")) {
        d.missing = *missing;
    }
    const std::string target = get("target").value_or("");
    if (target.empty() || target == "none") {
        d.target = TargetTransform::None;
    } else if (target == "solar-flare-any") {
        d.target = TargetTransform::SolarFlareAny;
    } else if (target.rfind("pass-fail", 0) == 0) {
        d.target = TargetTransform::PassFail;
        auto colon = target.find(':');
        if (colon != std::string::npos) {
            auto list = parse_double_list(std::string_view(target).substr(colon + 1));
            if (list.size() != 1) {
                throw std::invalid_argument("dataset descriptor: pass-fail needs one threshold");
            }
            d.pass_threshold = list.front();
        }
    } else {
        throw std::invalid_argument("dataset descriptor: unknown target transformation '" + target + "'");
    }
    if (d.target != TargetTransform::SolarFlareAny && d.class_columns.size() != 1) {
        throw std::invalid_argument("dataset descriptor: exactly one class column expected");
    }
    return d;
}

DatasetDescriptor DatasetDescriptor::read(const std::filesystem::path& path) {
    return from_key_values(read_key_values(path), path.parent_path());
}

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw std::runtime_error("unterminated quoted field");
    }
    fields.push_back(trim(cur));
    return fields;
}

namespace {

double parse_count(const std::string& raw, const std::string& column) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
        throw std::runtime_error("column '" + column + "': expected a number, got '" + raw + "'");
    }
    return value;
}

struct Coder {
    std::unordered_map<std::string, std::size_t> codes;
    std::vector<std::string> names;

    std::size_t code(const std::string& raw) {
        auto [it, inserted] = codes.try_emplace(raw, names.size());
        if (inserted) {
            names.push_back(raw);
        }
        return it->second;
    }
};

} // namespace

CategoricalDataset load_dataset(std::istream& in, const DatasetDescriptor& d) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_delimited(line, d.delimiter);
        if (d.header && header.empty()) {
            header = std::move(fields);
            continue;
        }
        const std::size_t width = header.empty() ? (rows.empty() ? fields.size() : rows.front().size()) : header.size();
        if (fields.size() != width) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        rows.push_back(std::move(fields));
    }
    if (d.header && header.empty()) {
        throw std::runtime_error("dataset file is empty");
    }
    const std::size_t width = header.empty() ? (rows.empty() ? 0 : rows.front().size()) : header.size();

    auto resolve = [&](const std::string& ref) -> std::size_t {
        if (!header.empty()) {
            auto it = std::find(header.begin(), header.end(), ref);
            if (it != header.end()) {
                return static_cast<std::size_t>(it - header.begin());
            }
        }
        std::size_t idx = 0;
        auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
        if (ec == std::errc{} && ptr == ref.data() + ref.size() && idx < width) {
            return idx;
        }
        throw std::runtime_error("unknown column '" + ref + "'");
    };

    std::vector<std::size_t> class_cols;
    for (const auto& c : d.class_columns) {
        class_cols.push_back(resolve(c));
    }
    std::vector<bool> excluded(width, false);
    for (std::size_t c : class_cols) {
        excluded[c] = true;
    }
    for (const auto& c : d.drop_columns) {
        excluded[resolve(c)] = true;
    }
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < width; ++c) {
        if (!excluded[c]) {
            feature_cols.push_back(c);
        }
    }

    std::vector<Coder> feature_coders(feature_cols.size());
    Coder class_coder;
    if (d.target == TargetTransform::SolarFlareAny) {
        class_coder.names = {"no-flare", "flare"};
    } else if (d.target == TargetTransform::PassFail) {
        class_coder.names = {"fail", "pass"};
    }
    std::vector<bool> class_seen(d.target == TargetTransform::None ? 0 : 2, false);

    std::vector<Instance> instances;
    for (const auto& row : rows) {
        auto is_missing = [&](std::size_t c) { return row[c] == d.missing; };
        if (std::any_of(feature_cols.begin(), feature_cols.end(), is_missing) ||
            std::any_of(class_cols.begin(), class_cols.end(), is_missing)) {
            continue;
        }
        Instance inst;
        inst.features.reserve(feature_cols.size());
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            inst.features.push_back(feature_coders[j].code(row[feature_cols[j]]));
        }
        switch (d.target) {
        case TargetTransform::None:
            inst.label = class_coder.code(row[class_cols.front()]);
            break;
        case TargetTransform::SolarFlareAny: {
            bool any = false;
            for (std::size_t c : class_cols) {
                any = any || parse_count(row[c], header.empty() ? std::to_string(c) : header[c]) > 0.0;
            }
            inst.label = any ? 1 : 0;
            class_seen[inst.label] = true;
            break;
        }
        case TargetTransform::PassFail: {
            std::size_t c = class_cols.front();
            double grade = parse_count(row[c], header.empty() ? std::to_string(c) : header[c]);
            inst.label = grade >= d.pass_threshold ? 1 : 0;
            class_seen[inst.label] = true;
            break;
        }
        }
        instances.push_back(std::move(inst));
    }

    if (instances.empty()) {
        throw std::runtime_error("dataset is empty after removing rows with missing values");
    }
    const bool two_classes = d.target == TargetTransform::None ? class_coder.names.size() >= 2
                                                               : (class_seen[0] && class_seen[1]);
    if (!two_classes) {
        throw std::runtime_error("class column has fewer than two distinct values");
    }

    FeatureSchema schema;
    schema.class_count = class_coder.names.size();
    schema.class_names = std::move(class_coder.names);
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
        schema.cardinalities.push_back(feature_coders[j].names.size());
        schema.feature_names.push_back(header.empty() ? "col" + std::to_string(feature_cols[j])
                                                      : header[feature_cols[j]]);
        schema.value_names.push_back(std::move(feature_coders[j].names));
    }
    return CategoricalDataset(std::move(schema), std::move(instances));
}

CategoricalDataset load_dataset(const std::filesystem::path& path, const DatasetDescriptor& descriptor) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read dataset file " + path.string());
    }
    return load_dataset(in, descriptor);
}

} // namespace relq
