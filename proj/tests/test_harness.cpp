#include <doctest.h>

#include <fstream>
#include <sstream>

#include "relq/harness.hpp"
#include "relq/rng.hpp"

using namespace relq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("relq-test-" + tag + "-" + std::to_string(mix64(std::hash<std::string>{}(tag))));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

// Two features; the class is a copy of the first, the second is noise.
void add_separable(const fs::path& dir, const std::string& id, std::size_t rows) {
    std::ostringstream csv;
    csv << "a,b,y\n";
    Rng rng(hash_label(id));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t a = rng.below(3);
        csv << "v" << a << ",w" << rng.below(4) << ",c" << a << "\n";
    }
    write_file(dir / (id + ".csv"), csv.str());
    write_file(dir / (id + ".cfg"), "file = " + id + ".csv\nclass = y\n");
}

// Class agrees with a majority of three noisy binary features.
void add_noisy(const fs::path& dir, const std::string& id, std::size_t rows) {
    std::ostringstream csv;
    csv << "a,b,c,d,y\n";
    Rng rng(hash_label(id));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t y = rng.below(2);
        csv << (rng.bernoulli(0.75) ? y : 1 - y) << ',' << (rng.bernoulli(0.7) ? y : 1 - y) << ','
            << (rng.bernoulli(0.6) ? y : 1 - y) << ',' << rng.below(3) << ',' << y << "\n";
    }
    write_file(dir / (id + ".csv"), csv.str());
    write_file(dir / (id + ".cfg"), "file = " + id + ".csv\nclass = y\n");
}

ExperimentConfig small_config(const fs::path& data) {
    ExperimentConfig c;
    c.data_dir = data;
    c.repetitions = 2;
    c.train_sizes = {40, 80};
    c.betas = {0.0, 0.2};
    c.gamma_grid = default_gamma_grid(21);
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("config keys, echo and validation") {
    ExperimentConfig c;
    std::istringstream in("datasets = car, zoo\nseed = 99\nreps = 3\nsizes = 10, 20\nbetas = 0, 0.5\n"
                          "measures = u_max, r_loc\nhybrid_pairs = u_H:r_glob\ngamma_points = 11\nthreads = 2\n");
    c.apply(parse_key_values(in));
    CHECK(c.datasets == std::vector<std::string>{"car", "zoo"});
    CHECK(c.seed == 99);
    CHECK(c.repetitions == 3);
    CHECK(c.train_sizes == std::vector<std::size_t>{10, 20});
    CHECK(c.measures == std::vector<Measure>{Measure::UMax, Measure::RLocal});
    CHECK(c.hybrid_pairs.size() == 1);
    CHECK(c.gamma_grid.size() == 11);
    CHECK_NOTHROW(c.validate());

    ExperimentConfig again;
    std::istringstream echo(c.echo());
    again.apply(parse_key_values(echo));
    CHECK(again.echo() == c.echo());

    ExperimentConfig bad;
    CHECK_THROWS(bad.apply({{"colour", "red"}}));
    CHECK_THROWS(bad.apply({{"measures", "u_q"}}));
    bad.betas = {1.5};
    CHECK_THROWS(bad.validate());
    ExperimentConfig zero;
    zero.repetitions = 0;
    CHECK_THROWS(zero.validate());
    ExperimentConfig pair;
    pair.hybrid_pairs = {{Measure::RGlobal, Measure::UMax}};
    CHECK_THROWS(pair.validate());
}

TEST_CASE("winner flags mark every maximum") {
    CHECK(winner_flags({0.5, 0.7, 0.7, 0.1}) == std::vector<bool>{false, true, true, false});
    CHECK(winner_flags({0.3}) == std::vector<bool>{true});
    CHECK(winner_flags({}).empty());
}

TEST_CASE("cell seeds are distinct per coordinate") {
    const auto base = cell_seed(1, "car", 50, 0.1, 0);
    CHECK(base == cell_seed(1, "car", 50, 0.1, 0));
    CHECK(base != cell_seed(2, "car", 50, 0.1, 0));
    CHECK(base != cell_seed(1, "zoo", 50, 0.1, 0));
    CHECK(base != cell_seed(1, "car", 100, 0.1, 0));
    CHECK(base != cell_seed(1, "car", 50, 0.2, 0));
    CHECK(base != cell_seed(1, "car", 50, 0.1, 1));
}

TEST_CASE("registry listing") {
    TempDir tmp("registry");
    add_separable(tmp.path, "sep", 30);
    write_file(tmp.path / "ghost.cfg", "file = ghost.csv\nclass = y\n");
    const auto reg = list_registry(tmp.path);
    REQUIRE(reg.size() == 2);
    CHECK(reg[0].id == "ghost");
    CHECK_FALSE(reg[0].available);
    CHECK(reg[1].available);
    CHECK(load_registered(tmp.path, "sep").size() == 30);
    CHECK_THROWS(load_registered(tmp.path, "nothing"));
}

TEST_CASE("separable data gives perfect curves for every measure") {
    TempDir tmp("separable");
    add_separable(tmp.path, "sep", 150);
    const auto report = run_standard(small_config(tmp.path));
    REQUIRE(report.cells.size() == 1);
    const auto& cell = report.cells[0];
    CHECK(cell.measures.size() == 8);
    for (std::size_t j = 0; j < cell.measures.size(); ++j) {
        CHECK(cell.au_arc_mean[j] == 1.0);
        CHECK(cell.winners[j]);
        CHECK(cell.mean_curves[j].accuracies.size() == cell.test_size);
    }
}

TEST_CASE("failures are reported per dataset without stopping the batch") {
    TempDir tmp("failure");
    add_noisy(tmp.path, "good", 120);
    write_file(tmp.path / "broken.csv", "a,y\nx,p\nz,p\n");
    write_file(tmp.path / "broken.cfg", "file = broken.csv\nclass = y\n");
    auto c = small_config(tmp.path);
    c.datasets = {"broken", "good", "absent"};
    const auto report = run_standard(c);
    CHECK(report.cells.size() == 1);
    CHECK(report.cells[0].dataset == "good");
    CHECK(report.failures.size() == 2);
}

TEST_CASE("shift grid layout, skipped cells and the identity cell") {
    TempDir tmp("shift");
    add_noisy(tmp.path, "noisy", 200);
    auto c = small_config(tmp.path);
    c.train_sizes = {40, 80, 500};
    const auto report = run_shift(c);
    CHECK(report.cells.size() == 4);
    CHECK(report.warnings.size() == 2);
    for (const auto& cell : report.cells) {
        CHECK(cell.mean_curves.size() == c.measures.size());
        CHECK(cell.seeds.size() == 2);
        for (double v : cell.au_arc_mean) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }

    // Size 0 keeps the full training set; with beta 0 this is the standard run.
    c.train_sizes = {0};
    c.betas = {0.0};
    c.repetitions = 1;
    const auto ident = run_shift(c);
    const auto standard = run_standard(c);
    REQUIRE(ident.cells.size() == 1);
    REQUIRE(standard.cells.size() == 1);
    CHECK(ident.cells[0].au_arc_mean == standard.cells[0].au_arc_mean);
    CHECK(ident.cells[0].seeds == standard.cells[0].seeds);
    CHECK(ident.cells[0].alphas == standard.cells[0].alphas);
}

TEST_CASE("reports are identical across thread counts and reruns") {
    TempDir tmp("determinism");
    add_noisy(tmp.path, "n1", 150);
    add_noisy(tmp.path, "n2", 170);
    auto c = small_config(tmp.path);
    const auto out1 = tmp.path / "out1";
    const auto out2 = tmp.path / "out2";
    write_report(run_shift(c), c, out1);
    c.threads = 4;
    write_report(run_shift(c), c, out2);
    for (const auto& e : fs::recursive_directory_iterator(out1)) {
        if (e.is_regular_file() && e.path().filename() != "manifest.txt") {
            CHECK(slurp(e.path()) == slurp(out2 / fs::relative(e.path(), out1)));
        }
    }
    CHECK(fs::exists(out1 / "au_arc.csv"));
    CHECK(fs::exists(out1 / "au_arc_full.csv"));
    CHECK(fs::exists(out1 / "arc" / "n1" / "r_loc.n40_b0.20.csv"));
}

TEST_CASE("hybrid rows") {
    TempDir tmp("hybrid");
    add_noisy(tmp.path, "noisy", 220);
    auto c = small_config(tmp.path);
    const auto report = run_hybrid(c);
    REQUIRE(report.hybrid.size() == 2);
    for (const auto& row : report.hybrid) {
        CHECK(row.gamma_star >= 0.0);
        CHECK(row.gamma_star <= 1.0);
        CHECK(row.gamma_star == gamma_star(row.gamma_train, row.mu));
        CHECK(row.opt_au_arc >= row.hybrid_au_arc);
        CHECK(row.opt_au_arc >= row.u_au_arc);
        CHECK(row.opt_au_arc >= row.r_au_arc);
        if (row.gamma_star == 1.0) {
            CHECK(row.hybrid_au_arc == row.u_au_arc);
        }
    }
    write_report(report, c, tmp.path / "out");
    CHECK(fs::exists(tmp.path / "out" / "hybrid.csv"));
    const auto text = slurp(tmp.path / "out" / "hybrid.csv");
    CHECK(text.find("gamma_star") != std::string::npos);
    CHECK(text.find("gamma_opt") != std::string::npos);
}
