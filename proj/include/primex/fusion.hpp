#pragma once

#include <span>
#include <utility>

#include "primex/belief.hpp"
#include "primex/ic_codes.hpp"

namespace primex {

/// A local density together with the code recording its information pedigree.
struct CodedBelief {
  GaussianBelief belief;
  InformationCode ic;
};

/// Solution of the constrained least-squares fit of the shared-information
/// code, min ||w_i*phi_i + w_j*phi_j - min(phi_i, phi_j)||^2 s.t. w_i+w_j=1.
struct WeightSolution {
  double w_i = 0.5;
  double w_j = 0.5;
  double lagrange_multiplier = 0.0;
  double residual_norm_sq = 0.0;
  /// True when the unconstrained-sign solution left [0,1] and was clipped
  /// back onto the simplex.
  bool clamped = false;
};

struct FusionOptions {
  /// When the two pedigrees share nothing, fuse as an exact independent
  /// product instead of applying the least-squares weights uniformly.
  bool exact_product_when_disjoint = false;
};

/// Attribution weights for the shared information between two pedigrees,
/// obtained by solving the bordered 3x3 KKT system of the equality-constrained
/// least-squares problem. A numerically singular system (collinear codes)
/// falls back to the symmetric 0.5/0.5 split. Callers must short-circuit
/// identical codes before calling.
WeightSolution solve_primex_weights(const InformationCode& phi_i, const InformationCode& phi_j);

/// Pairwise memoryless fusion: identical codes are a declared no-op; otherwise
/// the fused density is the weighted geometric mean with exponents
/// (1 - w_i, 1 - w_j) from solve_primex_weights, and the fused code is the
/// element-wise maximum.
CodedBelief primex_pairwise_fuse(const CodedBelief& local, const CodedBelief& received,
                                 const FusionOptions& options = {});

/// Covariance intersection with the scalar weight chosen by golden-section
/// search to minimize the trace of the fused covariance; ties resolve toward
/// w = 0.5.
GaussianBelief ci_pairwise_optimal(const GaussianBelief& a, const GaussianBelief& b);

/// Trace-optimal covariance-intersection weight on [0, 1] (exposed for
/// diagnostics and oracle comparisons).
double ci_optimal_weight(const GaussianBelief& a, const GaussianBelief& b);

/// Covariance intersection of self with any number of received densities,
/// all weighted 1/(n+1).
GaussianBelief ci_uniform_fuse(const GaussianBelief& self,
                               std::span<const GaussianBelief> received);

struct SensorReading {
  Eigen::VectorXd z;
  SensorModel model;
};

/// One step of the centralized information filter: optional prediction, then
/// the additive information update over all readings.
GaussianBelief centralized_step(const GaussianBelief& global,
                                std::span<const SensorReading> readings,
                                const MotionModel& motion, bool do_predict = true);

}  // namespace primex
