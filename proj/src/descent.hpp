#pragma once

#include <functional>
#include <span>
#include <vector>

#include "optimseed/ge_classifier.hpp"

namespace optimseed::detail {

// evaluate(params, grad_or_null) -> objective. Must fill the gradient
// (dim entries) when the pointer is non-null.
using EvalFn =
    std::function<double(std::span<const double>, std::vector<double>*)>;

struct DescentResult {
  std::vector<double> parameters;
  TrainingDiagnostics diagnostics;
};

// Full-batch gradient descent with Armijo backtracking from a zero start.
// Accepted objectives are strictly non-increasing; converged means the
// gradient norm dropped below `tolerance`. Deterministic.
DescentResult minimize_batch(std::size_t dim, const EvalFn& evaluate,
                             double tolerance, int max_iterations);

}  // namespace optimseed::detail
