#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "primex/belief.hpp"
#include "primex/fusion.hpp"
#include "primex/ic_codes.hpp"

namespace primex::oracles {

/// Element-wise maximum over raw bit vectors, written without the library's
/// code algebra.
InformationCode bitwise_max_reference(std::span<const InformationCode> codes);

/// Least-squares objective of the pairwise weight fit, evaluated with literal
/// scalar loops: sum over entries of (w*a + (1-w)*b - min(a,b))^2.
double weight_objective(const InformationCode& phi_i, const InformationCode& phi_j,
                        double w_i);

/// Exhaustive scan of the weight objective over a uniform grid on [0,1].
/// Returns the minimizing w_i.
double grid_search_weight(const InformationCode& phi_i, const InformationCode& phi_j,
                          double step = 1e-4);

/// Mean and variance of the normalized weighted geometric mean of two scalar
/// Gaussians, obtained by numeric quadrature of the powered densities.
std::pair<double, double> scalar_pool_numeric(double mean_a, double var_a, double mean_b,
                                              double var_b, double weight_a,
                                              double weight_b);

struct FilterState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Moment-form Kalman filter over stacked per-step measurement vectors with a
/// Joseph-form covariance update. Step 1 applies no prediction; the prior is
/// already the predictive density for the first measurement set.
std::vector<FilterState> batch_information_filter(
    const GaussianBelief& prior, const MotionModel& motion, const SensorModel& sensor,
    const std::vector<std::vector<Eigen::VectorXd>>& measurements_by_step);

/// Exhaustive scan for the covariance-intersection weight minimizing the fused
/// covariance trace, using explicit dense inverses.
double ci_grid_weight(const GaussianBelief& a, const GaussianBelief& b, double step = 1e-4);

}  // namespace primex::oracles
