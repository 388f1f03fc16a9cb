#include "primex/fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "primex/errors.hpp"

namespace primex {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kGoldenTolerance = 1e-4;
constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio

double clamp01(double w) { return std::clamp(w, 0.0, 1.0); }

/// trace((w*Omega_a + (1-w)*Omega_b)^-1) reduced to a rational sum through
/// simultaneous diagonalization: with V^T Omega_a V = diag(lambda) and
/// V^T Omega_b V = I, the objective is sum_j |v_j|^2 / (w*lambda_j + 1 - w).
struct CiTraceObjective {
  Eigen::VectorXd lambda;
  Eigen::VectorXd column_norms_sq;

  static CiTraceObjective build(const GaussianBelief& a, const GaussianBelief& b) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        a.information_matrix(), b.information_matrix());
    if (solver.info() != Eigen::Success) {
      throw FusionError("generalized eigendecomposition failed in CI weight search");
    }
    CiTraceObjective objective;
    objective.lambda = solver.eigenvalues();
    objective.column_norms_sq = solver.eigenvectors().colwise().squaredNorm();
    return objective;
  }

  double operator()(double w) const {
    double total = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      total += column_norms_sq(j) / (w * lambda(j) + (1.0 - w));
    }
    return total;
  }
};

}  // namespace

WeightSolution solve_primex_weights(const InformationCode& phi_i, const InformationCode& phi_j) {
  if (phi_i.length() != phi_j.length()) {
    throw DimensionError("weight solving requires equal-length codes");
  }

  // Gram entries of A = [phi_i phi_j] and A^T b with b = min(phi_i, phi_j).
  // For binary codes these are plain bit counts.
  double gram_ii = 0.0;
  double gram_jj = 0.0;
  double gram_ij = 0.0;
  for (std::size_t t = 0; t < phi_i.length(); ++t) {
    gram_ii += phi_i[t];
    gram_jj += phi_j[t];
    gram_ij += phi_i[t] & phi_j[t];
  }
  // b[t] = 1 only where both codes are 1, so A^T b = [gram_ij, gram_ij].

  Eigen::Matrix3d kkt;
  kkt << 2.0 * gram_ii, 2.0 * gram_ij, 1.0,
         2.0 * gram_ij, 2.0 * gram_jj, 1.0,
         1.0, 1.0, 0.0;
  Eigen::Vector3d rhs(2.0 * gram_ij, 2.0 * gram_ij, 1.0);

  WeightSolution solution;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(kkt);
  const double rcond = lu.rcond();
  if (!lu.isInvertible() || !(rcond > 1.0 / kConditionLimit)) {
    // Collinear codes: any constrained split yields the same fused pedigree.
    solution.w_i = 0.5;
    solution.w_j = 0.5;
    solution.lagrange_multiplier = 0.0;
  } else {
    const Eigen::Vector3d x = lu.solve(rhs);
    solution.w_i = x(0);
    solution.w_j = x(1);
    solution.lagrange_multiplier = x(2);
  }

  const double clipped = clamp01(solution.w_i);
  solution.clamped = clipped != solution.w_i || clamp01(solution.w_j) != solution.w_j;
  solution.w_i = clipped;
  solution.w_j = 1.0 - clipped;

  double residual = 0.0;
  for (std::size_t t = 0; t < phi_i.length(); ++t) {
    const double fit = solution.w_i * phi_i[t] + solution.w_j * phi_j[t] -
                       std::min(phi_i[t], phi_j[t]);
    residual += fit * fit;
  }
  solution.residual_norm_sq = residual;
  return solution;
}

CodedBelief primex_pairwise_fuse(const CodedBelief& local, const CodedBelief& received,
                                 const FusionOptions& options) {
  if (local.ic.length() != received.ic.length()) {
    throw DimensionError("pairwise fusion requires equal-length codes");
  }
  if (local.ic == received.ic) {
    return local;
  }

  if (options.exact_product_when_disjoint) {
    const InformationCode shared = ic_gcd(local.ic, received.ic);
    if (ic_score(shared) == 0) {
      const Eigen::MatrixXd omega = symmetrize(local.belief.information_matrix() +
                                               received.belief.information_matrix());
      const Eigen::VectorXd eta =
          local.belief.information_vector() + received.belief.information_vector();
      return {GaussianBelief::from_information(omega, eta), ic_lcm(local.ic, received.ic)};
    }
  }

  const WeightSolution weights = solve_primex_weights(local.ic, received.ic);
  const std::array<GaussianBelief, 2> beliefs = {local.belief, received.belief};
  const std::array<double, 2> exponents = {1.0 - weights.w_i, 1.0 - weights.w_j};
  return {geometric_pool(beliefs, exponents), ic_lcm(local.ic, received.ic)};
}

double ci_optimal_weight(const GaussianBelief& a, const GaussianBelief& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("CI requires equal-dimension beliefs");
  }
  const CiTraceObjective objective = CiTraceObjective::build(a, b);

  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kGoldenTolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = objective(x2);
    }
  }

  // Consider the interval midpoint plus the exact endpoints and the symmetric
  // split; among near-ties prefer the candidate closest to 0.5.
  const std::array<double, 4> candidates = {0.5 * (lo + hi), 0.0, 0.5, 1.0};
  double best_w = candidates[0];
  double best_value = objective(best_w);
  for (double w : candidates) {
    const double value = objective(w);
    const bool better = value < best_value - 1e-12;
    const bool tied_and_more_central =
        std::abs(value - best_value) <= 1e-12 && std::abs(w - 0.5) < std::abs(best_w - 0.5);
    if (better || tied_and_more_central) {
      best_w = w;
      best_value = value;
    }
  }
  return best_w;
}

GaussianBelief ci_pairwise_optimal(const GaussianBelief& a, const GaussianBelief& b) {
  const double w = ci_optimal_weight(a, b);
  const std::array<GaussianBelief, 2> beliefs = {a, b};
  const std::array<double, 2> weights = {w, 1.0 - w};
  return geometric_pool(beliefs, weights);
}

GaussianBelief ci_uniform_fuse(const GaussianBelief& self,
                               std::span<const GaussianBelief> received) {
  if (received.empty()) {
    return self;
  }
  std::vector<GaussianBelief> beliefs;
  beliefs.reserve(received.size() + 1);
  beliefs.push_back(self);
  beliefs.insert(beliefs.end(), received.begin(), received.end());
  const std::vector<double> weights(beliefs.size(), 1.0 / static_cast<double>(beliefs.size()));
  return geometric_pool(beliefs, weights);
}

GaussianBelief centralized_step(const GaussianBelief& global,
                                std::span<const SensorReading> readings,
                                const MotionModel& motion, bool do_predict) {
  GaussianBelief belief = do_predict ? predict(global, motion) : global;
  Eigen::MatrixXd omega = belief.information_matrix();
  Eigen::VectorXd eta = belief.information_vector();
  for (const SensorReading& reading : readings) {
    if (reading.model.H.cols() != belief.dim() || reading.model.H.rows() != reading.z.size()) {
      throw DimensionError("sensor reading dimensions disagree with the global belief");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(reading.model.R);
    if (llt.info() != Eigen::Success) {
      throw ModelError("measurement noise covariance is singular");
    }
    const Eigen::MatrixXd gain =
        reading.model.H.transpose() *
        llt.solve(Eigen::MatrixXd::Identity(reading.z.size(), reading.z.size()));
    omega += gain * reading.model.H;
    eta += gain * reading.z;
  }
  return GaussianBelief::from_information(symmetrize(omega), eta);
}

}  // namespace primex
