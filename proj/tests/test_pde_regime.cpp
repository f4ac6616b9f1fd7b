// Full-resolution delta = 0.90 run at the default configuration (about 20 s).
#include <doctest.h>

#include "fracnl/experiment.hpp"
#include "fracnl/pde.hpp"

using namespace fracnl;

TEST_CASE("delta = 0.90 run approaches a stable equilibrium by t = 50") {
    const auto spec = parse_spec(R"({"delta": 0.90})", ExperimentKind::Pde);
    const RDConfig cfg = spec.rd_config();
    const auto reaction = newton_leipnik_reaction(spec.params);
    L1Stepper stepper(cfg, spec.master_ic());
    Field r(cfg.grid), previous = stepper.state();
    while (stepper.steps_taken() < cfg.time.n_steps) {
        previous = stepper.state();
        reaction(stepper.next_time(), stepper.state(), r);
        stepper.step(r);
    }
    const Field& last = stepper.state();
    REQUIRE(stepper.time() == doctest::Approx(50.0));

    const auto eq = equilibria(spec.params).points;
    const std::size_t node = cfg.grid.nearest_node(spec.x_probe);
    double probe_dev = 1e300;
    for (const auto& e : eq) probe_dev = std::min(probe_dev, (last.at(node) - e.point).cwiseAbs().maxCoeff());
    CHECK(probe_dev <= 1e-2);

    // Time-derivative surrogate over the final step.
    double rate = 0.0;
    for (std::size_t i = 0; i < last.data().size(); ++i)
        rate = std::max(rate, std::abs(last.data()[i] - previous.data()[i]) / cfg.time.dt);
    CHECK(rate < 1e-3);
}
