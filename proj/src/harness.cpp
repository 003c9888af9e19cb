#include "relq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "relq/rng.hpp"
#include "relq/uncertainty.hpp"

namespace relq {

std::string_view setting_name(Setting s) {
    switch (s) {
    case Setting::Standard: return "standard";
    case Setting::Shift: return "shift";
    case Setting::Hybrid: return "hybrid";
    }
    return "?";
}

// --- configuration ------------------------------------------------------------

namespace {

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += format(items[i]);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not an unsigned integer: '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s) {
    auto list = parse_double_list(s);
    if (list.size() != 1) {
        throw std::invalid_argument("expected one number: '" + s + "'");
    }
    return list.front();
}

Measure measure_or_throw(const std::string& name) {
    auto m = parse_measure(name);
    if (!m) {
        throw std::invalid_argument("unknown measure '" + name + "'");
    }
    return *m;
}

} // namespace

void ExperimentConfig::apply(const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "datasets" || key == "dataset") {
            datasets = split_list(value);
        } else if (key == "data_dir") {
            data_dir = value;
        } else if (key == "out") {
            out_dir = value;
        } else if (key == "seed") {
            seed = parse_u64(value);
        } else if (key == "train_fraction") {
            train_fraction = parse_double(value);
        } else if (key == "size_cap") {
            size_cap = parse_u64(value);
        } else if (key == "alpha_grid") {
            alpha_grid = parse_double_list(value);
        } else if (key == "folds") {
            folds = parse_u64(value);
        } else if (key == "ensemble_size") {
            ensemble_size = parse_u64(value);
        } else if (key == "measures") {
            measures.clear();
            for (const auto& name : split_list(value)) {
                measures.push_back(measure_or_throw(name));
            }
        } else if (key == "standard_reps") {
            standard_repetitions = parse_u64(value);
        } else if (key == "sizes") {
            train_sizes = parse_size_list(value);
        } else if (key == "betas") {
            betas = parse_double_list(value);
        } else if (key == "reps") {
            repetitions = parse_u64(value);
        } else if (key == "hybrid_pairs") {
            hybrid_pairs.clear();
            for (const auto& item : split_list(value)) {
                auto parts = split_list(item, ':');
                if (parts.size() != 2) {
                    throw std::invalid_argument("hybrid pair must look like u_a:r_glob, got '" + item + "'");
                }
                hybrid_pairs.push_back({measure_or_throw(parts[0]), measure_or_throw(parts[1])});
            }
        } else if (key == "gamma_points") {
            gamma_grid = default_gamma_grid(parse_u64(value));
        } else if (key == "mu_grid") {
            mu_grid = parse_double_list(value);
        } else if (key == "threads") {
            threads = parse_u64(value);
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

void ExperimentConfig::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train_fraction must lie strictly between 0 and 1");
    }
    if (repetitions == 0 || standard_repetitions == 0) {
        throw std::invalid_argument("repetitions must be at least 1");
    }
    for (double b : betas) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw std::invalid_argument("betas must lie in [0, 1]");
        }
    }
    if (alpha_grid.empty() || measures.empty() || gamma_grid.empty() || mu_grid.empty()) {
        throw std::invalid_argument("grids and measure set must be nonempty");
    }
    if (folds < 2 || ensemble_size == 0 || size_cap == 0) {
        throw std::invalid_argument("folds >= 2, ensemble_size >= 1 and size_cap >= 1 required");
    }
    for (const auto& p : hybrid_pairs) {
        if (is_robustness(p.uncertainty) || !is_robustness(p.robustness)) {
            throw std::invalid_argument("hybrid pairs combine an uncertainty measure with a robustness measure");
        }
    }
}

std::string ExperimentConfig::echo() const {
    std::ostringstream out;
    out << "datasets = " << join(datasets, [](const std::string& s) { return s; }) << "\n";
    out << "data_dir = " << data_dir.string() << "\n";
    out << "seed = " << seed << "\n";
    out << "train_fraction = " << shortest(train_fraction) << "\n";
    out << "size_cap = " << size_cap << "\n";
    out << "alpha_grid = " << join(alpha_grid, shortest) << "\n";
    out << "folds = " << folds << "\n";
    out << "ensemble_size = " << ensemble_size << "\n";
    out << "measures = " << join(measures, [](Measure m) { return std::string(measure_name(m)); }) << "\n";
    out << "standard_reps = " << standard_repetitions << "\n";
    out << "sizes = " << join(train_sizes, [](std::size_t n) { return std::to_string(n); }) << "\n";
    out << "betas = " << join(betas, shortest) << "\n";
    out << "reps = " << repetitions << "\n";
    out << "hybrid_pairs = "
        << join(hybrid_pairs,
                [](const HybridPair& p) {
                    return std::string(measure_name(p.uncertainty)) + ":" + std::string(measure_name(p.robustness));
                })
        << "\n";
    out << "gamma_points = " << gamma_grid.size() << "\n";
    out << "mu_grid = " << join(mu_grid, shortest) << "\n";
    return out.str();
}

// --- registry -----------------------------------------------------------------

std::vector<RegistryEntry> list_registry(const std::filesystem::path& data_dir) {
    std::vector<RegistryEntry> out;
    if (!std::filesystem::is_directory(data_dir)) {
        throw std::runtime_error("dataset directory not found: " + data_dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
        if (entry.path().extension() != ".cfg") {
            continue;
        }
        RegistryEntry r;
        r.id = entry.path().stem().string();
        r.descriptor_path = entry.path();
        r.descriptor = DatasetDescriptor::read(entry.path());
        r.available = std::filesystem::exists(r.descriptor.file);
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

CategoricalDataset load_registered(const std::filesystem::path& data_dir, const std::string& id) {
    const auto path = data_dir / (id + ".cfg");
    if (!std::filesystem::exists(path)) {
        throw std::runtime_error("no dataset '" + id + "' in " + data_dir.string());
    }
    const auto descriptor = DatasetDescriptor::read(path);
    return load_dataset(descriptor.file, descriptor);
}

// --- experiments ----------------------------------------------------------------

std::uint64_t cell_seed(std::uint64_t master, const std::string& dataset, std::size_t train_size, double beta,
                        std::size_t repetition) {
    const auto beta_key = static_cast<std::uint64_t>(std::llround(beta * 1e6));
    return derive_seed(master, {hash_label(dataset), train_size, beta_key, repetition});
}

SplitEvaluation evaluate_split(const CategoricalDataset& train, const CategoricalDataset& test,
                               const ExperimentConfig& config, std::uint64_t seed) {
    SplitEvaluation ev;
    ev.alpha = tune_smoothing(train, config.alpha_grid, config.folds, derive_seed(seed, {hash_label("alpha")})).alpha;
    const NbcModel model = fit(train, ev.alpha);
    std::optional<Ensemble> ensemble;
    if (std::any_of(config.measures.begin(), config.measures.end(), needs_ensemble)) {
        ensemble = fit_ensemble(train, config.ensemble_size, ev.alpha, derive_seed(seed, {hash_label("ensemble")}));
    }
    ev.test_scores = score_instances(model, ensemble ? &*ensemble : nullptr, test, config.measures);
    ev.accuracy = static_cast<double>(std::count(ev.test_scores.correct.begin(), ev.test_scores.correct.end(), true)) /
                  static_cast<double>(test.size());
    for (Measure m : config.measures) {
        ev.curves.push_back(arc(ev.test_scores.ordering(m), ev.test_scores.correct));
    }
    return ev;
}

std::vector<bool> winner_flags(const std::vector<double>& values) {
    if (values.empty()) {
        return {};
    }
    const double best = *std::max_element(values.begin(), values.end());
    std::vector<bool> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = values[i] == best;
    }
    return out;
}

namespace {

// Runs jobs 0..n-1 on up to `threads` workers. The first exception is rethrown
// after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) {
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::vector<std::string> resolve_datasets(const ExperimentConfig& config) {
    if (!config.datasets.empty()) {
        return config.datasets;
    }
    std::vector<std::string> ids;
    for (const auto& entry : list_registry(config.data_dir)) {
        if (entry.available) {
            ids.push_back(entry.id);
        }
    }
    return ids;
}

struct Repetition {
    std::uint64_t seed = 0;
    std::size_t train_size = 0;
    SplitEvaluation eval;
};

struct CellPlan {
    std::size_t dataset = 0;
    std::size_t train_size = 0; // 0: full training set
    double beta = 0.0;
    std::size_t repetitions = 1;
};

// One repetition: split, optionally shrink and corrupt the training part,
// then evaluate. The test part is never modified.
Repetition run_repetition(const CategoricalDataset& data, const ExperimentConfig& config, std::uint64_t seed,
                          std::size_t train_size, double beta) {
    auto parts = split(data, {config.train_fraction, config.size_cap, derive_seed(seed, {hash_label("split")})});
    CategoricalDataset train = std::move(parts.train);
    if (train_size > 0) {
        if (train_size > train.size()) {
            throw std::length_error("training size " + std::to_string(train_size) + " exceeds the " +
                                    std::to_string(train.size()) + " available training instances");
        }
        train = subsample(train, train_size, derive_seed(seed, {hash_label("subsample")}));
    }
    if (beta > 0.0) {
        train = corrupt_features(train, beta, derive_seed(seed, {hash_label("corrupt")}));
    }
    Repetition rep;
    rep.seed = seed;
    rep.train_size = train.size();
    rep.eval = evaluate_split(train, parts.test, config, derive_seed(seed, {hash_label("pipeline")}));
    return rep;
}

CellResult assemble_cell(const std::string& dataset, Setting setting, const CellPlan& plan,
                         const ExperimentConfig& config, const std::vector<Repetition>& reps) {
    CellResult cell;
    cell.dataset = dataset;
    cell.setting = setting;
    cell.beta = plan.beta;
    cell.train_size = reps.front().train_size;
    cell.test_size = reps.front().eval.test_scores.correct.size();
    cell.measures = config.measures;
    cell.au_arc_reps.assign(config.measures.size(), {});
    for (const auto& rep : reps) {
        cell.seeds.push_back(rep.seed);
        cell.alphas.push_back(rep.eval.alpha);
        cell.accuracies.push_back(rep.eval.accuracy);
    }
    for (std::size_t j = 0; j < config.measures.size(); ++j) {
        std::vector<ArcCurve> curves;
        for (const auto& rep : reps) {
            curves.push_back(rep.eval.curves[j]);
            cell.au_arc_reps[j].push_back(rep.eval.curves[j].au_arc);
        }
        cell.mean_curves.push_back(mean_arc(curves));
        double total = 0.0;
        for (double v : cell.au_arc_reps[j]) {
            total += v;
        }
        cell.au_arc_mean.push_back(total / static_cast<double>(reps.size()));
    }
    cell.winners = winner_flags(cell.au_arc_mean);
    return cell;
}

ExperimentReport run_cells(const ExperimentConfig& config, Setting setting, const std::vector<CellPlan>& plans,
                           const std::vector<std::string>& ids) {
    ExperimentReport report;
    report.setting = setting;
    std::vector<std::optional<CategoricalDataset>> datasets(ids.size());
    std::vector<std::string> load_errors(ids.size());
    for (std::size_t d = 0; d < ids.size(); ++d) {
        try {
            datasets[d] = load_registered(config.data_dir, ids[d]);
        } catch (const std::exception& e) {
            load_errors[d] = e.what();
        }
    }

    struct Job {
        std::size_t plan;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < plans.size(); ++p) {
        if (!datasets[plans[p].dataset]) {
            continue;
        }
        for (std::size_t r = 0; r < plans[p].repetitions; ++r) {
            jobs.push_back({p, r});
        }
    }
    std::vector<std::vector<std::optional<Repetition>>> results(plans.size());
    std::vector<std::vector<std::string>> errors(plans.size());
    for (std::size_t p = 0; p < plans.size(); ++p) {
        results[p].resize(plans[p].repetitions);
        errors[p].resize(plans[p].repetitions);
    }
    parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
        const auto& plan = plans[jobs[j].plan];
        const auto& id = ids[plan.dataset];
        const auto seed = cell_seed(config.seed, id, plan.train_size, plan.beta, jobs[j].rep);
        try {
            results[jobs[j].plan][jobs[j].rep] = run_repetition(*datasets[plan.dataset], config, seed,
                                                                plan.train_size, plan.beta);
        } catch (const std::exception& e) {
            errors[jobs[j].plan][jobs[j].rep] = e.what();
        }
    });

    std::vector<bool> failed(ids.size(), false);
    for (std::size_t d = 0; d < ids.size(); ++d) {
        if (!datasets[d]) {
            report.failures.push_back({ids[d], load_errors[d]});
            failed[d] = true;
        }
    }
    for (std::size_t p = 0; p < plans.size(); ++p) {
        const auto& plan = plans[p];
        if (failed[plan.dataset]) {
            continue;
        }
        const auto& id = ids[plan.dataset];
        auto bad = std::find_if(errors[p].begin(), errors[p].end(), [](const auto& e) { return !e.empty(); });
        if (bad != errors[p].end()) {
            if (setting == Setting::Shift) {
                report.warnings.push_back(id + " n=" + std::to_string(plan.train_size) + " beta=" +
                                          fixed2(plan.beta) + ": cell skipped: " + *bad);
            } else {
                report.failures.push_back({id, *bad});
                failed[plan.dataset] = true;
            }
            continue;
        }
        std::vector<Repetition> reps;
        for (auto& r : results[p]) {
            reps.push_back(std::move(*r));
        }
        report.cells.push_back(assemble_cell(id, setting, plan, config, reps));
    }
    return report;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

ExperimentReport run_standard(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto ids = resolve_datasets(config);
    std::vector<CellPlan> plans;
    for (std::size_t d = 0; d < ids.size(); ++d) {
        plans.push_back({d, 0, 0.0, config.standard_repetitions});
    }
    auto report = run_cells(config, Setting::Standard, plans, ids);
    report.seconds = elapsed_since(start);
    return report;
}

ExperimentReport run_shift(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto ids = resolve_datasets(config);
    std::vector<CellPlan> plans;
    for (std::size_t d = 0; d < ids.size(); ++d) {
        for (std::size_t n : config.train_sizes) {
            for (double beta : config.betas) {
                plans.push_back({d, n, beta, config.repetitions});
            }
        }
    }
    auto report = run_cells(config, Setting::Shift, plans, ids);
    report.seconds = elapsed_since(start);
    return report;
}

ExperimentReport run_hybrid(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto ids = resolve_datasets(config);

    // Measures needed by the pairs plus the configured set, without repeats.
    ExperimentConfig cfg = config;
    for (const auto& p : config.hybrid_pairs) {
        for (Measure m : {p.uncertainty, p.robustness}) {
            if (std::find(cfg.measures.begin(), cfg.measures.end(), m) == cfg.measures.end()) {
                cfg.measures.push_back(m);
            }
        }
    }

    ExperimentReport report;
    report.setting = Setting::Hybrid;
    std::vector<std::vector<HybridRow>> rows(ids.size());
    std::vector<std::optional<CellResult>> cells(ids.size());
    std::vector<std::string> errors(ids.size());
    parallel_for(ids.size(), cfg.threads, [&](std::size_t d) {
        try {
            const auto data = load_registered(cfg.data_dir, ids[d]);
            const auto seed = cell_seed(cfg.seed, ids[d], 0, 0.0, 0);
            auto parts = split(data, {cfg.train_fraction, cfg.size_cap, derive_seed(seed, {hash_label("split")})});
            const auto pipeline_seed = derive_seed(seed, {hash_label("pipeline")});
            Repetition rep;
            rep.seed = seed;
            rep.train_size = parts.train.size();
            rep.eval = evaluate_split(parts.train, parts.test, cfg, pipeline_seed);
            cells[d] = assemble_cell(ids[d], Setting::Hybrid, {d, 0, 0.0, 1}, cfg, {rep});

            // Training-set scores come from the model fit on the full training set.
            const double alpha = rep.eval.alpha;
            const NbcModel model = fit(parts.train, alpha);
            const Ensemble ensemble =
                fit_ensemble(parts.train, cfg.ensemble_size, alpha, derive_seed(pipeline_seed, {hash_label("ensemble")}));
            std::vector<Measure> pair_measures;
            for (const auto& p : cfg.hybrid_pairs) {
                pair_measures.push_back(p.uncertainty);
                pair_measures.push_back(p.robustness);
            }
            const auto train_scores = score_instances(model, &ensemble, parts.train, pair_measures);
            const auto& test_scores = rep.eval.test_scores;

            for (std::size_t k = 0; k < cfg.hybrid_pairs.size(); ++k) {
                const auto& pair = cfg.hybrid_pairs[k];
                HybridRow row;
                row.dataset = ids[d];
                row.pair = pair;
                row.seed = seed;
                row.alpha = alpha;
                MuTuningOptions opts;
                opts.folds = cfg.folds;
                opts.seed = derive_seed(pipeline_seed, {hash_label("mu"), k});
                opts.alpha = alpha;
                opts.ensemble_size = cfg.ensemble_size;
                opts.gamma_grid = cfg.gamma_grid;
                opts.mu_grid = cfg.mu_grid;
                row.mu = tune_mu(parts.train, pair, opts).mu;
                row.gamma_train = tune_gamma_train(train_scores.ordering(pair.uncertainty),
                                                   train_scores.ordering(pair.robustness), train_scores.correct,
                                                   cfg.gamma_grid)
                                      .gamma;
                row.gamma_star = gamma_star(row.gamma_train, row.mu);

                const auto test_u = test_scores.ordering(pair.uncertainty);
                const auto test_r = test_scores.ordering(pair.robustness);
                row.u_au_arc = arc(test_u, test_scores.correct).au_arc;
                row.r_au_arc = arc(test_r, test_scores.correct).au_arc;
                row.hybrid_au_arc = arc(hybrid_order(test_u, test_r, row.gamma_star), test_scores.correct).au_arc;
                // gamma_star is generally off the grid; include it so the
                // reference optimum is an upper bound for the deployed weight.
                auto opt_grid = cfg.gamma_grid;
                opt_grid.push_back(row.gamma_star);
                const auto opt = gamma_opt(test_u, test_r, test_scores.correct, opt_grid);
                row.gamma_opt = opt.gamma;
                row.opt_au_arc = opt.au_arc;
                rows[d].push_back(row);
            }
        } catch (const std::exception& e) {
            errors[d] = e.what();
        }
    });
    for (std::size_t d = 0; d < ids.size(); ++d) {
        if (!errors[d].empty()) {
            report.failures.push_back({ids[d], errors[d]});
            continue;
        }
        report.cells.push_back(std::move(*cells[d]));
        report.hybrid.insert(report.hybrid.end(), rows[d].begin(), rows[d].end());
    }
    report.seconds = elapsed_since(start);
    return report;
}

// --- output -----------------------------------------------------------------------

namespace {

std::string cell_suffix(const CellResult& cell) {
    if (cell.setting != Setting::Shift) {
        return "";
    }
    return ".n" + std::to_string(cell.train_size) + "_b" + fixed2(cell.beta);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

} // namespace

void write_report(const ExperimentReport& report, const ExperimentConfig& config,
                  const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string setting(setting_name(report.setting));
    {
        auto out = open_out(out_dir / "au_arc.csv");
        out << "dataset,setting,train_size,beta,test_size,measure,au_arc,winner\n";
        for (const auto& cell : report.cells) {
            for (std::size_t j = 0; j < cell.measures.size(); ++j) {
                out << cell.dataset << ',' << setting << ',' << cell.train_size << ',' << fixed2(cell.beta) << ','
                    << cell.test_size << ',' << measure_name(cell.measures[j]) << ','
                    << fixed4(cell.au_arc_mean[j]) << ',' << (cell.winners[j] ? 1 : 0) << '\n';
            }
        }
    }
    {
        auto out = open_out(out_dir / "au_arc_full.csv");
        out << "dataset,setting,train_size,beta,measure,repetition,seed,alpha,accuracy,au_arc\n";
        for (const auto& cell : report.cells) {
            for (std::size_t j = 0; j < cell.measures.size(); ++j) {
                const auto prefix = cell.dataset + "," + setting + "," + std::to_string(cell.train_size) + "," +
                                    shortest(cell.beta) + "," + std::string(measure_name(cell.measures[j])) + ",";
                for (std::size_t r = 0; r < cell.seeds.size(); ++r) {
                    out << prefix << r << ',' << cell.seeds[r] << ',' << shortest(cell.alphas[r]) << ','
                        << shortest(cell.accuracies[r]) << ',' << shortest(cell.au_arc_reps[j][r]) << '\n';
                }
                out << prefix << "mean,,,," << shortest(cell.au_arc_mean[j]) << '\n';
            }
        }
    }
    for (const auto& cell : report.cells) {
        for (std::size_t j = 0; j < cell.measures.size(); ++j) {
            const auto name = std::string(measure_name(cell.measures[j])) + cell_suffix(cell) + ".csv";
            auto out = open_out(out_dir / "arc" / cell.dataset / name);
            out << "rejection_count,rejection_rate,accuracy\n";
            const auto& acc = cell.mean_curves[j].accuracies;
            for (std::size_t k = 0; k < acc.size(); ++k) {
                out << k << ',' << shortest(static_cast<double>(k) / static_cast<double>(acc.size())) << ','
                    << shortest(acc[k]) << '\n';
            }
        }
    }
    if (report.setting == Setting::Hybrid) {
        auto out = open_out(out_dir / "hybrid.csv");
        auto full = open_out(out_dir / "hybrid_full.csv");
        const char* header =
            "dataset,uncertainty,robustness,u_au_arc,r_au_arc,hybrid_au_arc,gamma_train,mu,gamma_star,gamma_opt,"
            "opt_au_arc,hybrid_wins\n";
        out << header;
        full << header;
        for (const auto& row : report.hybrid) {
            const bool wins = row.hybrid_au_arc > row.u_au_arc && row.hybrid_au_arc > row.r_au_arc;
            const auto lead = row.dataset + "," + std::string(measure_name(row.pair.uncertainty)) + "," +
                              std::string(measure_name(row.pair.robustness)) + ",";
            out << lead << fixed4(row.u_au_arc) << ',' << fixed4(row.r_au_arc) << ',' << fixed4(row.hybrid_au_arc)
                << ',' << fixed2(row.gamma_train) << ',' << fixed2(row.mu) << ',' << fixed4(row.gamma_star) << ','
                << fixed4(row.gamma_opt) << ',' << fixed4(row.opt_au_arc) << ',' << (wins ? 1 : 0) << '\n';
            full << lead << shortest(row.u_au_arc) << ',' << shortest(row.r_au_arc) << ','
                 << shortest(row.hybrid_au_arc) << ',' << shortest(row.gamma_train) << ',' << shortest(row.mu) << ','
                 << shortest(row.gamma_star) << ',' << shortest(row.gamma_opt) << ',' << shortest(row.opt_au_arc)
                 << ',' << (wins ? 1 : 0) << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "manifest.txt");
        out << "relq " << kVersion << "\n";
        out << "setting = " << setting << "\n";
        out << config.echo();
        out << "\n# seeds (dataset, train_size, beta, repetition, seed, alpha)\n";
        for (const auto& cell : report.cells) {
            for (std::size_t r = 0; r < cell.seeds.size(); ++r) {
                out << cell.dataset << ' ' << cell.train_size << ' ' << fixed2(cell.beta) << ' ' << r << ' '
                    << cell.seeds[r] << ' ' << shortest(cell.alphas[r]) << '\n';
            }
        }
        for (const auto& w : report.warnings) {
            out << "warning: " << w << '\n';
        }
        for (const auto& f : report.failures) {
            out << "failed: " << f.dataset << ": " << f.message << '\n';
        }
    }
}

} // namespace relq
