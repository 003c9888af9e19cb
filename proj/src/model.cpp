#include "relq/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace relq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

void check_pmf(std::span<const double> p, const std::string& what) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(what + ": probabilities must be finite and non-negative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(what + ": probabilities sum to " + std::to_string(sum));
    }
}

} // namespace

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("argmax of an empty vector");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

void GenerativeClassifier::check_query(FeatureView f) const {
    if (!schema().contains(f)) {
        throw std::out_of_range("feature vector does not match the model schema");
    }
}

double GenerativeClassifier::joint_prob(std::size_t c, FeatureView f) const { return std::exp(log_joint(c, f)); }

std::vector<double> GenerativeClassifier::log_joints(FeatureView f) const {
    std::vector<double> out(schema().class_count);
    for (std::size_t c = 0; c < out.size(); ++c) {
        out[c] = log_joint(c, f);
    }
    return out;
}

std::vector<double> GenerativeClassifier::joints(FeatureView f) const {
    auto out = log_joints(f);
    for (auto& v : out) {
        v = std::exp(v);
    }
    return out;
}

std::vector<double> GenerativeClassifier::conditional(FeatureView f) const {
    auto lj = log_joints(f);
    const double top = *std::max_element(lj.begin(), lj.end());
    if (top == kNegInf) {
        throw DegenerateEvidenceError("every class has zero joint probability for this feature vector");
    }
    double sum = 0.0;
    for (auto& v : lj) {
        v = std::exp(v - top);
        sum += v;
    }
    for (auto& v : lj) {
        v /= sum;
    }
    return lj;
}

std::size_t GenerativeClassifier::predict(FeatureView f) const {
    auto lj = log_joints(f);
    if (*std::max_element(lj.begin(), lj.end()) == kNegInf) {
        throw DegenerateEvidenceError("every class has zero joint probability for this feature vector");
    }
    return argmax_lowest(lj);
}

NbcModel::NbcModel(FeatureSchema schema, std::vector<double> class_prior, Table conditionals, double smoothing)
    : schema_(std::move(schema)), prior_(std::move(class_prior)), cond_(std::move(conditionals)),
      smoothing_(smoothing) {
    schema_.validate();
    if (!(smoothing_ >= 0.0)) {
        throw std::invalid_argument("NbcModel: smoothing must be non-negative");
    }
    if (prior_.size() != schema_.class_count || cond_.size() != schema_.class_count) {
        throw std::invalid_argument("NbcModel: table sizes do not match class count");
    }
    check_pmf(prior_, "class prior");
    log_prior_.resize(prior_.size());
    std::transform(prior_.begin(), prior_.end(), log_prior_.begin(), safe_log);
    log_cond_ = cond_;
    for (std::size_t c = 0; c < cond_.size(); ++c) {
        if (cond_[c].size() != schema_.feature_count()) {
            throw std::invalid_argument("NbcModel: table sizes do not match feature count");
        }
        for (std::size_t i = 0; i < cond_[c].size(); ++i) {
            if (cond_[c][i].size() != schema_.cardinalities[i]) {
                throw std::invalid_argument("NbcModel: table sizes do not match cardinality");
            }
            check_pmf(cond_[c][i], "conditional of feature " + std::to_string(i) + " given class " +
                                       std::to_string(c));
            std::transform(cond_[c][i].begin(), cond_[c][i].end(), log_cond_[c][i].begin(), safe_log);
        }
    }
}

double NbcModel::log_joint(std::size_t c, FeatureView f) const {
    check_query(f);
    if (c >= schema_.class_count) {
        throw std::out_of_range("class index out of range");
    }
    double acc = log_prior_[c];
    for (std::size_t i = 0; i < f.size(); ++i) {
        acc += log_cond_[c][i][f[i]];
    }
    return acc;
}

double NbcModel::likelihood(std::size_t c, std::size_t feature, std::size_t value) const {
    return cond_.at(c).at(feature).at(value);
}

std::span<const double> NbcModel::likelihoods(std::size_t c, std::size_t feature) const {
    return cond_.at(c).at(feature);
}

bool NbcModel::operator==(const NbcModel& other) const {
    return schema_.same_shape(other.schema_) && prior_ == other.prior_ && cond_ == other.cond_ &&
           smoothing_ == other.smoothing_;
}

NbcModel fit(const CategoricalDataset& train, double alpha) {
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("fit: smoothing must be non-negative");
    }
    if (train.empty()) {
        throw std::invalid_argument("fit: empty training set");
    }
    const auto& schema = train.schema();
    const std::size_t n_classes = schema.class_count;
    std::vector<double> class_count(n_classes, 0.0);
    NbcModel::Table counts(n_classes);
    for (auto& per_class : counts) {
        for (std::size_t card : schema.cardinalities) {
            per_class.emplace_back(card, 0.0);
        }
    }
    for (const auto& inst : train.instances()) {
        class_count[inst.label] += 1.0;
        for (std::size_t i = 0; i < inst.features.size(); ++i) {
            counts[inst.label][i][inst.features[i]] += 1.0;
        }
    }
    const double m = static_cast<double>(train.size());
    std::vector<double> prior(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        prior[c] = (class_count[c] + alpha) / (m + alpha * static_cast<double>(n_classes));
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < counts[c].size(); ++i) {
            auto& row = counts[c][i];
            const double denom = class_count[c] + alpha * static_cast<double>(row.size());
            for (auto& v : row) {
                // Unseen class with zero smoothing: the row is irrelevant since
                // the prior is zero, so keep it uniform.
                v = denom > 0.0 ? (v + alpha) / denom : 1.0 / static_cast<double>(row.size());
            }
        }
    }
    return NbcModel(schema, std::move(prior), std::move(counts), alpha);
}

double accuracy(const GenerativeClassifier& model, const CategoricalDataset& data) {
    if (data.empty()) {
        throw std::invalid_argument("accuracy of an empty dataset");
    }
    std::size_t correct = 0;
    for (const auto& inst : data.instances()) {
        correct += model.predict(inst.features) == inst.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<double> default_smoothing_grid() { return {0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}; }

SmoothingSelection tune_smoothing(const CategoricalDataset& train, std::span<const double> grid, std::size_t k,
                                  std::uint64_t seed) {
    if (grid.empty()) {
        throw std::invalid_argument("tune_smoothing: empty grid");
    }
    const auto folds = kfold(train, k, seed);
    SmoothingSelection sel;
    sel.cv_accuracy.assign(grid.size(), 0.0);
    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double total = 0.0;
        for (const auto& fold : folds) {
            total += accuracy(fit(fold.train, grid[g]), fold.validation);
        }
        sel.cv_accuracy[g] = total / static_cast<double>(folds.size());
        if (g > 0 && (sel.cv_accuracy[g] > sel.cv_accuracy[best] ||
                      (sel.cv_accuracy[g] == sel.cv_accuracy[best] && grid[g] < grid[best]))) {
            best = g;
        }
    }
    sel.alpha = grid[best];
    return sel;
}

// --- serialization ------------------------------------------------------------

namespace {

void put_double(std::ostream& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
}

void put_row(std::ostream& out, std::span<const double> row) {
    for (double v : row) {
        out << ' ';
        put_double(out, v);
    }
    out << '\n';
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::istringstream expect(const std::string& keyword) {
        std::string line;
        if (!std::getline(in_, line)) {
            throw std::runtime_error("model file: unexpected end, wanted '" + keyword + "'");
        }
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word != keyword) {
            throw std::runtime_error("model file: expected '" + keyword + "', got '" + word + "'");
        }
        return ss;
    }

private:
    std::istream& in_;
};

std::vector<double> take_doubles(std::istringstream& ss, std::size_t count) {
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw std::runtime_error("model file: bad number '" + tok + "'");
        }
        out.push_back(v);
    }
    if (out.size() != count) {
        throw std::runtime_error("model file: expected " + std::to_string(count) + " numbers, got " +
                                 std::to_string(out.size()));
    }
    return out;
}

} // namespace

void write_model(std::ostream& out, const NbcModel& model) {
    const auto& s = model.schema();
    out << "relq-nbc 1\n";
    out << "smoothing ";
    put_double(out, model.smoothing());
    out << "\nclasses " << s.class_count << "\n";
    out << "cardinalities";
    for (std::size_t c : s.cardinalities) {
        out << ' ' << c;
    }
    out << "\nprior";
    put_row(out, model.class_prior());
    for (std::size_t c = 0; c < s.class_count; ++c) {
        for (std::size_t i = 0; i < s.feature_count(); ++i) {
            out << "likelihood " << c << ' ' << i;
            put_row(out, model.likelihoods(c, i));
        }
    }
}

NbcModel read_model(std::istream& in) {
    LineReader r(in);
    {
        auto ss = r.expect("relq-nbc");
        int version = 0;
        ss >> version;
        if (version != 1) {
            throw std::runtime_error("model file: unsupported version");
        }
    }
    auto ss_smooth = r.expect("smoothing");
    const double smoothing = take_doubles(ss_smooth, 1).front();
    FeatureSchema schema;
    r.expect("classes") >> schema.class_count;
    {
        auto ss = r.expect("cardinalities");
        std::size_t c = 0;
        while (ss >> c) {
            schema.cardinalities.push_back(c);
        }
    }
    schema.validate();
    auto ss_prior = r.expect("prior");
    auto prior = take_doubles(ss_prior, schema.class_count);
    NbcModel::Table table(schema.class_count);
    for (std::size_t c = 0; c < schema.class_count; ++c) {
        for (std::size_t i = 0; i < schema.feature_count(); ++i) {
            auto ss = r.expect("likelihood");
            std::size_t cc = 0;
            std::size_t ii = 0;
            ss >> cc >> ii;
            if (cc != c || ii != i) {
                throw std::runtime_error("model file: likelihood rows out of order");
            }
            table[c].push_back(take_doubles(ss, schema.cardinalities[i]));
        }
    }
    return NbcModel(std::move(schema), std::move(prior), std::move(table), smoothing);
}

} // namespace relq
