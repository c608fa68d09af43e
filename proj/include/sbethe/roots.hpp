#pragma once

#include "sbethe/poly.hpp"

namespace sbethe {

struct RootOptions {
  int max_iterations = 400;
  int polish_iterations = 4;
};

/// All complex roots of p with multiplicity, to roughly full working
/// precision.  Aberth-Ehrlich simultaneous iteration from a scaled circle,
/// followed by Newton polishing of each root on the original polynomial.
/// Throws convergence_error when the iteration budget is exhausted.
std::vector<Complex> poly_roots(const Polynomial& p, const RootOptions& opt = {});

}  // namespace sbethe
