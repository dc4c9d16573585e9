// Evaluate the steering inequality for one parameter set, then check the
// prediction with a short Monte Carlo run.

#include <cstdio>

#include "photonsteer/mc_sim.hpp"
#include "photonsteer/steering_eval.hpp"

int main() {
  using namespace photonsteer;

  ExperimentParams p;
  p.eta = 0.78;
  p.chi = 0.05;
  p.eta_h = 0.92;
  p.n_settings = 8;

  const SteeringReport r = evaluate_inequality(p);
  std::printf("predicted: lhs %.5f  rhs %.5f  margin %+.5f  %s\n", r.lhs, r.rhs, r.margin, to_string(r.verdict));
  std::printf("sufficient condition %.4f, necessary condition %.4f\n", r.sufficient.lhs_value,
              r.necessary.lhs_value);

  SimConfig cfg;
  cfg.params = p;
  cfg.shots_per_setting = 20000;
  cfg.seed = 2024;
  const SimResult s = run_experiment(cfg);
  std::printf("simulated: lhs %.5f +/- %.5f  rhs %.5f +/- %.5f  %s\n", s.lhs.value, s.lhs.std_error, s.rhs.value,
              s.rhs.std_error, to_string(s.verdict));
  return 0;
}
