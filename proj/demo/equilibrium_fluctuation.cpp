// Two-phase experiment: grow to 500 units of capital, then let ownership
// shuffle under capital-conserving DOWN/UP moves. Prints exact equilibrium
// residuals for a small instance, then compares the ranking at the threshold
// with the terminal ranking at the large scale.

#include <iostream>

#include "polya/polya.hpp"

int main() {
    const polya::ModelParams small(1.0, 3);
    for (const auto& report : {polya::check_stationarity(small, 12),
                               polya::check_detailed_balance(small, 12),
                               polya::check_cross_level_balance(small, 12)}) {
        std::cout << report.check << " residual " << report.residual << "\n";
    }

    polya::ScenarioConfig cfg;
    cfg.params = polya::ModelParams(1.0, 20);
    cfg.mode = polya::ScenarioMode::TwoPhase;
    cfg.total_steps = 2000;
    cfg.threshold_level = 500;
    cfg.seed = 7;
    polya::RngEngine rng = polya::make_engine(cfg.seed);
    const polya::Trajectory traj = polya::run_two_phase(cfg, rng);

    const polya::StabilityReport stats =
        polya::stability_stats(traj, cfg.threshold_level, cfg.total_steps);
    std::cout << "two-phase level " << polya::level(traj.terminal)
              << ", rank correlation threshold vs terminal " << stats.rank_correlation << "\n";

    polya::write_trajectory("fluctuation_trajectory.csv", traj);
    polya::write_curve("fluctuation_curve_threshold.csv",
                       polya::capital_curve(traj.at_step(cfg.threshold_level)));
    polya::write_curve("fluctuation_curve_terminal.csv", polya::capital_curve(traj.terminal));
    polya::svg::write_svg("fluctuation_weights.svg", polya::svg::render_trajectory(traj));
    std::cout << "wrote fluctuation_trajectory.csv, fluctuation_curve_*.csv, "
                 "fluctuation_weights.svg\n";
    return 0;
}
