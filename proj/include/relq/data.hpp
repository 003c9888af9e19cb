#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relq/keyvalue.hpp"

namespace relq {

using FeatureView = std::span<const std::size_t>;

// Shape of a discrete classification task. Names are optional and only used
// for reporting.
struct FeatureSchema {
    std::vector<std::size_t> cardinalities;
    std::size_t class_count = 0;
    std::vector<std::string> feature_names;
    std::vector<std::vector<std::string>> value_names;
    std::vector<std::string> class_names;

    std::size_t feature_count() const { return cardinalities.size(); }

    // Throws std::invalid_argument on a zero cardinality, fewer than two
    // classes, or name tables whose sizes disagree with the cardinalities.
    void validate() const;

    bool same_shape(const FeatureSchema& other) const {
        return cardinalities == other.cardinalities && class_count == other.class_count;
    }

    bool contains(FeatureView features) const;
};

struct Instance {
    std::vector<std::size_t> features;
    std::size_t label = 0;

    bool operator==(const Instance&) const = default;
};

class CategoricalDataset {
public:
    // Validates the schema and every instance against it.
    CategoricalDataset(FeatureSchema schema, std::vector<Instance> instances);

    const FeatureSchema& schema() const { return schema_; }
    std::span<const Instance> instances() const { return instances_; }
    std::size_t size() const { return instances_.size(); }
    bool empty() const { return instances_.empty(); }
    const Instance& operator[](std::size_t i) const { return instances_[i]; }

    // Instances at the given positions, in that order (repeats allowed).
    CategoricalDataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const CategoricalDataset& other) const {
        return schema_.same_shape(other.schema_) && instances_ == other.instances_;
    }

private:
    FeatureSchema schema_;
    std::vector<Instance> instances_;
};

struct SplitSpec {
    double train_fraction = 0.6;
    std::size_t size_cap = 3000;
    std::uint64_t seed = 0;
};

struct TrainTestSplit {
    CategoricalDataset train;
    CategoricalDataset test;
};

// Caps the dataset at size_cap by uniform sampling, shuffles, then gives
// round(train_fraction * m) instances to train and the rest to test.
TrainTestSplit split(const CategoricalDataset& dataset, const SplitSpec& spec);

// Sampling with replacement, same size as the input.
CategoricalDataset bootstrap_sample(const CategoricalDataset& dataset, std::uint64_t seed);

// Uniform subset of `count` instances without replacement. A count at or above
// the dataset size returns the dataset unchanged.
CategoricalDataset subsample(const CategoricalDataset& dataset, std::size_t count, std::uint64_t seed);

// Each feature value is replaced with probability beta by a different value of
// the same feature, chosen uniformly. Labels and cardinality-1 features are
// never touched.
CategoricalDataset corrupt_features(const CategoricalDataset& dataset, double beta, std::uint64_t seed);

struct FoldIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

// k disjoint validation parts whose sizes differ by at most one.
std::vector<FoldIndices> kfold_indices(std::size_t size, std::size_t k, std::uint64_t seed);

struct Fold {
    CategoricalDataset train;
    CategoricalDataset validation;
};

std::vector<Fold> kfold(const CategoricalDataset& dataset, std::size_t k, std::uint64_t seed);

enum class TargetTransform {
    None,
    // Class 1 iff any of the listed count columns is positive.
    SolarFlareAny,
    // Class 1 ("pass") iff the single numeric class column is >= pass_threshold.
    PassFail,
};

// How to turn a delimited text file into a CategoricalDataset.
struct DatasetDescriptor {
    std::string name;
    std::filesystem::path file;
    char delimiter = ',';
    bool header = true;
    std::vector<std::string> class_columns;
    std::vector<std::string> drop_columns;
    std::string missing = "?";
    TargetTransform target = TargetTransform::None;
    double pass_threshold = 10.0;

    // Keys: name, file, delimiter, header, class, drop, missing, target.
    // `file` is resolved against base_dir when relative.
    static DatasetDescriptor from_key_values(const KeyValues& kv, const std::filesystem::path& base_dir);
    static DatasetDescriptor read(const std::filesystem::path& path);
};

// Rows with the missing sentinel in any retained column are dropped; raw
// values are coded densely in order of first appearance.
CategoricalDataset load_dataset(const std::filesystem::path& path, const DatasetDescriptor& descriptor);
CategoricalDataset load_dataset(std::istream& in, const DatasetDescriptor& descriptor);

// Splits one delimited line, honouring double-quoted fields.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

} // namespace relq
