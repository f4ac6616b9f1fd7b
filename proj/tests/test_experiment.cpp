#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fracnl/csv.hpp"
#include "fracnl/errors.hpp"
#include "fracnl/experiment.hpp"

using namespace fracnl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fracnl_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string parse_error_key(std::string_view text) {
    try {
        parse_spec(text);
    } catch (const ParseError& e) {
        return e.key();
    }
    return "<accepted>";
}

}  // namespace

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    const fs::path dir = scratch_dir("csv");
    fs::create_directories(dir);
    std::vector<double> values{0.1, -0.0, 1e-300, 123456789.123456789, 2.0 / 3.0};
    for (int k = 0; k < 100; ++k) values.push_back(u(rng) * std::pow(10.0, (k % 20) - 10));
    {
        CsvWriter w(dir / "t.csv", {"v"});
        for (double v : values) w.row({v});
    }
    const auto table = read_csv(dir / "t.csv");
    REQUIRE(table.rows.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(table.rows[i][0] == values[i]);
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1).find(',') == std::string::npos);
}

TEST_CASE("CsvWriter rejects rows of the wrong width") {
    const fs::path dir = scratch_dir("csvw");
    fs::create_directories(dir);
    CsvWriter w(dir / "t.csv", {"a", "b"});
    CHECK_THROWS(w.row({1.0}));
}

TEST_CASE("parse_spec defaults") {
    const auto s = parse_spec(R"({"kind": "equilibria", "a": 0.4, "alpha": 0.175})");
    CHECK(s.kind == ExperimentKind::Equilibria);
    ExperimentSpec expected;
    expected.kind = ExperimentKind::Equilibria;
    CHECK(s == expected);
    CHECK(s.params.d == std::array{0.1, 0.1, 0.1});
    CHECK(s.dt == 0.005);
    CHECK(s.n_nodes == 201);
    CHECK(s.slave_ic.kind == SlaveIcRule::Kind::Scale);
    CHECK(s.slave_ic.value == 1.5);
    CHECK(parse_spec("{}", ExperimentKind::Sync).kind == ExperimentKind::Sync);
    CHECK(parse_spec(R"({"kind": "pde", "delta": 0.9})").orders == std::array{0.9, 0.9, 0.9});
    CHECK(parse_error_key(R"({"delta": 0.9})") == "kind");
}

TEST_CASE("parse_spec rejections name the key") {
    CHECK(parse_error_key(R"({"kind": "pde", "delta": 1.2})") == "delta");
    CHECK(parse_error_key(R"({"kind": "pde", "delta": [0.9, 0.0, 0.9]})") == "delta");
    CHECK(parse_error_key(R"({"kind": "pde", "detla": 0.9})") == "detla");
    CHECK(parse_error_key(R"({"kind": "pde", "d": [0.1, -0.1, 0.1]})") == "d");
    CHECK(parse_error_key(R"({"kind": "banana"})") == "kind");
    CHECK(parse_error_key(R"({"kind": "pde", "x_probe": 30})") == "x_probe");
    CHECK(parse_error_key(R"({"kind": "sync", "slave_ic": {"rule": "scale", "extra": 1}})") == "slave_ic.extra");
    CHECK_THROWS_AS(parse_spec("{not json"), ParseError);
    CHECK_THROWS_AS(parse_spec(R"({"kind": "pde"})", ExperimentKind::Sync), ParseError);
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    const auto s = parse_spec(R"({"kind": "sync", "delta": 0.99, "controller": true,
                                   "slave_ic": {"rule": "scale", "value": 1.5}, "memory_window": 400,
                                   "controller_variant": "as_printed", "out": "x"})");
    const auto text = serialize_spec(s);
    CHECK(parse_spec(text) == s);
    CHECK(serialize_spec(parse_spec(text)) == text);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int k = 0; k < 50; ++k) {
        ExperimentSpec r;
        r.kind = static_cast<ExperimentKind>(k % 5);
        r.params.a = u(rng);
        r.params.alpha = u(rng);
        r.orders = {u(rng), u(rng), u(rng)};
        r.dt = 0.001 * u(rng);
        r.x_probe = 19.0 * u(rng);
        if (k % 2) r.memory_window = static_cast<std::size_t>(1000 * u(rng)) + 1;
        CHECK(parse_spec(serialize_spec(r)) == r);
    }
}

TEST_CASE("run equilibria and stability") {
    const fs::path dir = scratch_dir("eq");
    const auto out = run(parse_spec(R"({"kind": "equilibria"})"), dir);
    CHECK(out.exit_code == 0);
    const auto eq = read_csv(dir / "equilibria.csv");
    CHECK(eq.header == std::vector<std::string>{"index", "u1", "u2", "u3", "residual"});
    REQUIRE(eq.rows.size() == 5);
    CHECK(eq.rows[1][eq.column("u1")] == doctest::Approx(-0.031549).epsilon(1e-4 / 0.031549));
    CHECK(fs::exists(dir / "manifest.json"));

    const fs::path sdir = scratch_dir("stab");
    CHECK(run(parse_spec(R"({"kind": "stability", "delta": [0.85, 0.9, 0.8]})"), sdir).exit_code == 0);
    const std::string text = slurp(sdir / "stability.csv");
    CHECK(text.find("O2") != std::string::npos);
    CHECK(text.find("error_system") != std::string::npos);
    CHECK(fs::exists(sdir / "sync_modes.csv"));
}

TEST_CASE("run sync with the controller off and identical states writes zero error") {
    const fs::path dir = scratch_dir("sync0");
    const auto spec = parse_spec(R"({"kind": "sync", "controller": false, "slave_ic": {"rule": "identical"},
                                     "t_end": 0.5, "dt": 0.01, "n_nodes": 21, "snapshot_stride": 10})");
    CHECK(run(spec, dir).exit_code == 0);
    const auto t = read_csv(dir / "sync.csv");
    CHECK(t.header == std::vector<std::string>{"t", "x", "u1", "u2", "u3", "v1", "v2", "v3", "e1", "e2", "e3", "V"});
    for (const auto& row : t.rows)
        for (const char* c : {"e1", "e2", "e3", "V"}) CHECK(row[t.column(c)] == 0.0);
    const auto n = read_csv(dir / "error_norms.csv");
    CHECK(n.header == std::vector<std::string>{"t", "l2", "sup", "e1_sup", "e2_sup", "e3_sup", "V"});
    CHECK(fs::exists(dir / "probe.csv"));
}

TEST_CASE("replaying a manifest reproduces the data bit for bit") {
    const fs::path a = scratch_dir("replay_a"), b = scratch_dir("replay_b");
    const auto spec = parse_spec(R"({"kind": "pde", "delta": 0.95, "t_end": 1.0, "dt": 0.01, "n_nodes": 31,
                                     "snapshot_stride": 5})");
    CHECK(run(spec, a).exit_code == 0);
    const auto replay = parse_spec(slurp(a / "manifest.json"));
    CHECK(replay == spec);
    CHECK(run(replay, b).exit_code == 0);
    CHECK(slurp(a / "pde.csv") == slurp(b / "pde.csv"));
    CHECK(slurp(a / "probe.csv") == slurp(b / "probe.csv"));

    const fs::path c = scratch_dir("replay_c"), d = scratch_dir("replay_d");
    const auto ode = parse_spec(R"({"kind": "ode", "t_end": 2.0, "dt": 0.01})");
    CHECK(run(ode, c).exit_code == 0);
    CHECK(run(parse_spec(slurp(c / "manifest.json")), d).exit_code == 0);
    CHECK(slurp(c / "ode.csv") == slurp(d / "ode.csv"));
}

TEST_CASE("divergent runs exit with status 3") {
    const fs::path dir = scratch_dir("diverge");
    const auto spec = parse_spec(R"({"kind": "ode", "a": -40.0, "alpha": 40.0, "t_end": 50.0, "dt": 0.05})");
    const auto out = run(spec, dir);
    CHECK(out.exit_code == 3);
    CHECK(slurp(dir / "manifest.json").find("diverged") != std::string::npos);
}
