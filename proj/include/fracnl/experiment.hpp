#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracnl/newton_leipnik.hpp"
#include "fracnl/sync.hpp"

namespace fracnl {

enum class ExperimentKind { Ode, Pde, Sync, Stability, Equilibria };

std::string_view to_string(ExperimentKind kind);
ExperimentKind kind_from_string(std::string_view name);

/// How the slave initial field is derived from the master's.
struct SlaveIcRule {
    enum class Kind { Scale, Offset, Identical } kind = Kind::Scale;
    double value = 1.5;

    friend bool operator==(const SlaveIcRule&, const SlaveIcRule&) = default;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Equilibria;
    SystemParams params;
    std::array<double, 3> orders{0.99, 0.99, 0.99};
    State3 initial_state{0.349, 0.0, -0.3};
    double t0 = 0.0;
    double t_end = 50.0;
    double dt = 0.005;
    double length = 20.0;
    std::size_t n_nodes = 201;
    std::size_t snapshot_stride = 20;
    std::optional<std::size_t> memory_window;
    double x_probe = 10.0;
    bool controller = true;
    ControllerVariant controller_variant = ControllerVariant::Consistent;
    SlaveIcRule slave_ic;
    std::size_t error_norm_stride = 1;
    std::size_t n_modes = 200;
    std::int64_t max_denominator = 100;
    std::optional<std::string> out;

    bool commensurate() const { return orders[0] == orders[1] && orders[1] == orders[2]; }
    RDConfig rd_config(unsigned threads = 1) const;
    Field master_ic() const;
    Field slave_ic_field() const;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Parses a JSON config document (or a run manifest, whose echoed spec is used).
/// Defaults are filled in; unknown keys and invariant violations throw ParseError naming the key.
/// With `expected` set, a missing kind defaults to it and a different kind is rejected.
ExperimentSpec parse_spec(std::string_view text, std::optional<ExperimentKind> expected = std::nullopt);

/// Full JSON form of a spec including every defaulted field.
std::string serialize_spec(const ExperimentSpec& spec);

struct RunOutcome {
    int exit_code = 0;
    std::string message;
    std::vector<std::filesystem::path> files;
    std::filesystem::path manifest;
};

struct RunOptions {
    unsigned threads = 1;
};

/// Executes the experiment, writing CSV data plus manifest.json into out_dir.
/// Solver divergence yields exit_code 3 with the last valid time in the message.
RunOutcome run(const ExperimentSpec& spec, const std::filesystem::path& out_dir, const RunOptions& options = {});

std::string_view toolkit_version();

}  // namespace fracnl
