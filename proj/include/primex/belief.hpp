#pragma once

#include <Eigen/Dense>
#include <span>

namespace primex {

/// Linear-Gaussian motion model x' = F x + q, q ~ N(0, Q), at sampling period T.
struct MotionModel {
  Eigen::MatrixXd F;
  Eigen::MatrixXd Q;
  double T = 1.0;

  /// Nearly-constant-velocity model over 2D position and velocity, state
  /// ordered [px, py, vx, vy], with block structure [[1,T],[0,1]] (x) I2 and
  /// Q = intensity * [[T^3/3, T^2/2],[T^2/2, T]] (x) I2.
  static MotionModel nearly_constant_velocity(double T, double intensity);
};

/// Linear-Gaussian measurement model z = H x + r, r ~ N(0, R).
struct SensorModel {
  Eigen::MatrixXd H;
  Eigen::MatrixXd R;

  /// Position-only observation of the [px, py, vx, vy] state with R = variance * I2.
  static SensorModel position_observer(double variance);
};

/// Gaussian density over the target state, stored in information form
/// (Omega = P^-1, eta = Omega * mean) so that measurement updates and
/// geometric-mean pooling are additive. Moment form is derived on demand.
class GaussianBelief {
 public:
  GaussianBelief() = default;

  /// Throws ModelError if `covariance` is not symmetric positive-definite.
  static GaussianBelief from_moments(const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& covariance);
  /// Throws FusionError if `omega` is not symmetric positive-definite.
  static GaussianBelief from_information(const Eigen::MatrixXd& omega,
                                         const Eigen::VectorXd& eta);

  Eigen::Index dim() const { return eta_.size(); }
  const Eigen::MatrixXd& information_matrix() const { return omega_; }
  const Eigen::VectorXd& information_vector() const { return eta_; }
  Eigen::VectorXd mean() const;
  Eigen::MatrixXd covariance() const;

  /// Throws FusionError if the stored information matrix has drifted off the
  /// symmetric positive-definite cone.
  void validate() const;

 private:
  GaussianBelief(Eigen::MatrixXd omega, Eigen::VectorXd eta);

  Eigen::MatrixXd omega_;
  Eigen::VectorXd eta_;
};

/// Chapman-Kolmogorov step in closed form: mean' = F mean, P' = F P F^T + Q.
GaussianBelief predict(const GaussianBelief& belief, const MotionModel& model);

/// Bayes measurement update in information form:
/// Omega' = Omega + H^T R^-1 H, eta' = eta + H^T R^-1 z.
GaussianBelief update(const GaussianBelief& belief, const Eigen::VectorXd& z,
                      const SensorModel& model);

/// Normalized weighted geometric mean of Gaussian densities: the convex (or
/// more generally conic) combination Omega' = sum w_l Omega_l, eta' = sum
/// w_l eta_l. Callers pass exponents directly; throws FusionError if the
/// pooled information matrix is not positive-definite.
GaussianBelief geometric_pool(std::span<const GaussianBelief> beliefs,
                              std::span<const double> weights);

double trace_cov(const GaussianBelief& belief);

/// 0.5 * (M + M^T); applied after covariance-producing operations to suppress
/// asymmetry drift.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

}  // namespace primex
