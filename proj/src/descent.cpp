#include "descent.hpp"

#include <cmath>
#include <sstream>

#include "optimseed/error.hpp"

namespace optimseed::detail {

DescentResult minimize_batch(std::size_t dim, const EvalFn& evaluate,
                             double tolerance, int max_iterations) {
  std::vector<double> params(dim, 0.0);
  std::vector<double> gradient;
  std::vector<double> trial(dim);

  TrainingDiagnostics diag;
  double objective = evaluate(params, &gradient);
  if (!std::isfinite(objective)) {
    throw NumericError("non-finite objective at initialization");
  }
  diag.objective_trace.push_back(objective);

  double step_hint = 1.0;
  const double armijo = 1e-4;

  while (true) {
    double grad_sq = 0.0;
    for (double g : gradient) grad_sq += g * g;
    if (std::sqrt(grad_sq) < tolerance) {
      diag.converged = true;
      break;
    }
    if (diag.iterations >= max_iterations) {
      break;
    }

    double eta = step_hint;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t i = 0; i < dim; ++i) {
        trial[i] = params[i] - eta * gradient[i];
      }
      const double trial_objective = evaluate(trial, nullptr);
      if (std::isfinite(trial_objective) &&
          trial_objective <= objective - armijo * eta * grad_sq) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      // No descent direction step survives at machine precision.
      break;
    }
    params.swap(trial);
    ++diag.iterations;
    step_hint = std::min(eta * 2.0, 1e4);

    objective = evaluate(params, &gradient);
    if (!std::isfinite(objective)) {
      std::ostringstream msg;
      msg << "non-finite objective at iteration " << diag.iterations
          << " (last finite objective " << diag.objective_trace.back() << ")";
      throw NumericError(msg.str());
    }
    diag.objective_trace.push_back(objective);
  }

  diag.final_objective = objective;
  return {std::move(params), std::move(diag)};
}

}  // namespace optimseed::detail
