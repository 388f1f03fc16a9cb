#include "primex/belief.hpp"

#include <string>

#include "primex/errors.hpp"

namespace primex {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

bool is_symmetric(const Eigen::MatrixXd& m, double relative_tolerance) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= relative_tolerance * scale;
}

/// SPD inverse via Cholesky; returns false if the factorization fails.
bool spd_inverse(const Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    return false;
  }
  out = symmetrize(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
  return true;
}

}  // namespace

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

MotionModel MotionModel::nearly_constant_velocity(double T, double intensity) {
  Eigen::Matrix2d block_f;
  block_f << 1.0, T, 0.0, 1.0;
  Eigen::Matrix2d block_q;
  block_q << T * T * T / 3.0, T * T / 2.0, T * T / 2.0, T;
  block_q *= intensity;

  MotionModel model;
  model.T = T;
  model.F = Eigen::MatrixXd::Zero(4, 4);
  model.Q = Eigen::MatrixXd::Zero(4, 4);
  // Kronecker product with I2 under [px, py, vx, vy] ordering.
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      model.F.block<2, 2>(2 * bi, 2 * bj) = block_f(bi, bj) * Eigen::Matrix2d::Identity();
      model.Q.block<2, 2>(2 * bi, 2 * bj) = block_q(bi, bj) * Eigen::Matrix2d::Identity();
    }
  }
  return model;
}

SensorModel SensorModel::position_observer(double variance) {
  SensorModel model;
  model.H = Eigen::MatrixXd::Zero(2, 4);
  model.H.block<2, 2>(0, 0) = Eigen::Matrix2d::Identity();
  model.R = variance * Eigen::Matrix2d::Identity();
  return model;
}

GaussianBelief::GaussianBelief(Eigen::MatrixXd omega, Eigen::VectorXd eta)
    : omega_(std::move(omega)), eta_(std::move(eta)) {}

GaussianBelief GaussianBelief::from_moments(const Eigen::VectorXd& mean,
                                            const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size()) {
    throw DimensionError("mean/covariance dimensions disagree");
  }
  if (!is_symmetric(covariance, kSymmetryTolerance)) {
    throw ModelError("covariance is not symmetric");
  }
  Eigen::MatrixXd omega;
  if (!spd_inverse(symmetrize(covariance), omega)) {
    throw ModelError("covariance is not positive-definite");
  }
  return GaussianBelief(omega, omega * mean);
}

GaussianBelief GaussianBelief::from_information(const Eigen::MatrixXd& omega,
                                                const Eigen::VectorXd& eta) {
  if (omega.rows() != omega.cols() || omega.rows() != eta.size()) {
    throw DimensionError("information matrix/vector dimensions disagree");
  }
  if (!is_symmetric(omega, kSymmetryTolerance)) {
    throw FusionError("information matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = symmetrize(omega);
  if (Eigen::LLT<Eigen::MatrixXd>(sym).info() != Eigen::Success) {
    throw FusionError("information matrix is not positive-definite");
  }
  return GaussianBelief(sym, eta);
}

Eigen::VectorXd GaussianBelief::mean() const {
  return Eigen::LLT<Eigen::MatrixXd>(omega_).solve(eta_);
}

Eigen::MatrixXd GaussianBelief::covariance() const {
  Eigen::MatrixXd cov;
  if (!spd_inverse(omega_, cov)) {
    throw FusionError("information matrix is not invertible");
  }
  return cov;
}

void GaussianBelief::validate() const {
  if (eta_.size() == 0) {
    throw FusionError("belief is uninitialized");
  }
  if (!is_symmetric(omega_, kSymmetryTolerance)) {
    throw FusionError("information matrix drifted off symmetry");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(omega_, Eigen::EigenvaluesOnly);
  if (eigs.eigenvalues().minCoeff() <= 0.0) {
    throw FusionError("information matrix has a non-positive eigenvalue");
  }
}

GaussianBelief predict(const GaussianBelief& belief, const MotionModel& model) {
  const Eigen::Index n = belief.dim();
  if (model.F.rows() != n || model.F.cols() != n || model.Q.rows() != n || model.Q.cols() != n) {
    throw DimensionError("motion model dimensions disagree with the belief");
  }
  const Eigen::MatrixXd cov = belief.covariance();
  const Eigen::VectorXd mean = belief.mean();
  const Eigen::MatrixXd predicted_cov = symmetrize(model.F * cov * model.F.transpose() + model.Q);
  return GaussianBelief::from_moments(model.F * mean, predicted_cov);
}

GaussianBelief update(const GaussianBelief& belief, const Eigen::VectorXd& z,
                      const SensorModel& model) {
  if (model.H.cols() != belief.dim() || model.H.rows() != z.size() ||
      model.R.rows() != z.size() || model.R.cols() != z.size()) {
    throw DimensionError("sensor model dimensions disagree with the belief/measurement");
  }
  Eigen::MatrixXd r_inverse;
  if (!spd_inverse(model.R, r_inverse)) {
    throw ModelError("measurement noise covariance is singular");
  }
  const Eigen::MatrixXd gain = model.H.transpose() * r_inverse;
  const Eigen::MatrixXd omega = symmetrize(belief.information_matrix() + gain * model.H);
  const Eigen::VectorXd eta = belief.information_vector() + gain * z;
  return GaussianBelief::from_information(omega, eta);
}

GaussianBelief geometric_pool(std::span<const GaussianBelief> beliefs,
                              std::span<const double> weights) {
  if (beliefs.empty() || beliefs.size() != weights.size()) {
    throw DimensionError("pooling requires one weight per belief");
  }
  const Eigen::Index n = beliefs[0].dim();
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) {
      throw FusionError("pooling weights must be nonnegative");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw FusionError("pooling requires at least one positive weight");
  }

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  for (std::size_t l = 0; l < beliefs.size(); ++l) {
    if (beliefs[l].dim() != n) {
      throw DimensionError("pooled beliefs must share one dimension");
    }
    omega += weights[l] * beliefs[l].information_matrix();
    eta += weights[l] * beliefs[l].information_vector();
  }
  if (Eigen::LLT<Eigen::MatrixXd>(symmetrize(omega)).info() != Eigen::Success) {
    throw FusionError("pooled information matrix is indefinite");
  }
  return GaussianBelief::from_information(symmetrize(omega), eta);
}

double trace_cov(const GaussianBelief& belief) {
  return belief.covariance().trace();
}

}  // namespace primex
