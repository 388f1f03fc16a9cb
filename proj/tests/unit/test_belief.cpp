#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "../oracles/oracles.hpp"
#include "primex/belief.hpp"
#include "primex/errors.hpp"

namespace {

primex::GaussianBelief scalar_belief(double mean, double variance) {
  Eigen::VectorXd m(1);
  m << mean;
  Eigen::MatrixXd p(1, 1);
  p << variance;
  return primex::GaussianBelief::from_moments(m, p);
}

primex::GaussianBelief random_belief(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd mean(dim);
  Eigen::MatrixXd root(dim, dim);
  for (int r = 0; r < dim; ++r) {
    mean(r) = 10.0 * normal(rng);
    for (int c = 0; c < dim; ++c) {
      root(r, c) = normal(rng);
    }
  }
  Eigen::MatrixXd cov = root * root.transpose() + 0.5 * Eigen::MatrixXd::Identity(dim, dim);
  return primex::GaussianBelief::from_moments(mean, cov);
}

}  // namespace

TEST_SUITE("belief") {

using primex::GaussianBelief;
using primex::MotionModel;
using primex::SensorModel;

TEST_CASE("constant-velocity model has the block-Kronecker structure") {
  const MotionModel model = MotionModel::nearly_constant_velocity(1.0, 25.0);
  Eigen::MatrixXd f(4, 4);
  f << 1, 0, 1, 0,
       0, 1, 0, 1,
       0, 0, 1, 0,
       0, 0, 0, 1;
  Eigen::MatrixXd q(4, 4);
  q << 1.0 / 3, 0, 0.5, 0,
       0, 1.0 / 3, 0, 0.5,
       0.5, 0, 1, 0,
       0, 0.5, 0, 1;
  q *= 25.0;
  CHECK((model.F - f).norm() == doctest::Approx(0.0));
  CHECK((model.Q - q).norm() == doctest::Approx(0.0));
  CHECK(model.T == 1.0);
}

TEST_CASE("position observer reads the leading state block") {
  const SensorModel sensor = SensorModel::position_observer(100.0);
  Eigen::MatrixXd h(2, 4);
  h << 1, 0, 0, 0,
       0, 1, 0, 0;
  CHECK((sensor.H - h).norm() == 0.0);
  CHECK((sensor.R - 100.0 * Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("moment and information forms round-trip") {
  std::mt19937_64 rng(7);
  const GaussianBelief b = random_belief(rng, 4);
  const GaussianBelief back =
      GaussianBelief::from_information(b.information_matrix(), b.information_vector());
  CHECK((b.mean() - back.mean()).norm() < 1e-12);
  CHECK((b.covariance() - back.covariance()).norm() < 1e-10);
  const GaussianBelief again = GaussianBelief::from_moments(b.mean(), b.covariance());
  CHECK((b.mean() - again.mean()).norm() < 1e-9);
}

TEST_CASE("construction rejects invalid covariance and information input") {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(GaussianBelief::from_moments(mean, asym), primex::ModelError);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(GaussianBelief::from_moments(mean, indefinite), primex::ModelError);
  CHECK_THROWS_AS(GaussianBelief::from_information(indefinite, mean), primex::FusionError);

  CHECK_THROWS_AS(GaussianBelief::from_moments(Eigen::VectorXd::Zero(3), indefinite),
                  primex::DimensionError);
  CHECK_THROWS_AS(GaussianBelief{}.validate(), primex::FusionError);
}

TEST_CASE("prediction matches the closed-form propagation") {
  MotionModel scalar;
  scalar.F = Eigen::MatrixXd::Constant(1, 1, 2.0);
  scalar.Q = Eigen::MatrixXd::Constant(1, 1, 1.0);
  scalar.T = 1.0;
  const GaussianBelief next = predict(scalar_belief(1.0, 1.0), scalar);
  CHECK(next.mean()(0) == doctest::Approx(2.0));
  CHECK(next.covariance()(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("identity transition with zero noise is a fixed point") {
  std::mt19937_64 rng(11);
  const GaussianBelief b = random_belief(rng, 3);
  MotionModel still;
  still.F = Eigen::MatrixXd::Identity(3, 3);
  still.Q = Eigen::MatrixXd::Zero(3, 3);
  still.T = 1.0;
  const GaussianBelief next = predict(b, still);
  CHECK((next.mean() - b.mean()).norm() < 1e-12);
  CHECK((next.covariance() - b.covariance()).norm() < 1e-10);
}

TEST_CASE("zero-mean prediction under the tracking model") {
  const MotionModel model = MotionModel::nearly_constant_velocity(1.0, 25.0);
  const GaussianBelief prior = GaussianBelief::from_moments(
      Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4));
  const GaussianBelief next = predict(prior, model);
  CHECK(next.mean().norm() < 1e-12);
  const Eigen::MatrixXd expected = model.F * model.F.transpose() + model.Q;
  CHECK((next.covariance() - expected).norm() < 1e-9);
}

TEST_CASE("scalar measurement update is the conjugate posterior") {
  SensorModel sensor;
  sensor.H = Eigen::MatrixXd::Identity(1, 1);
  sensor.R = Eigen::MatrixXd::Identity(1, 1);
  Eigen::VectorXd z(1);
  z << 2.0;
  const GaussianBelief posterior = update(scalar_belief(0.0, 1.0), z, sensor);
  CHECK(posterior.mean()(0) == doctest::Approx(1.0));
  CHECK(posterior.covariance()(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("an uninformative measurement leaves the belief almost unchanged") {
  SensorModel sensor;
  sensor.H = Eigen::MatrixXd::Identity(1, 1);
  sensor.R = Eigen::MatrixXd::Constant(1, 1, 1e12);
  Eigen::VectorXd z(1);
  z << 50.0;
  const GaussianBelief prior = scalar_belief(3.0, 2.0);
  const GaussianBelief posterior = update(prior, z, sensor);
  CHECK(std::abs(posterior.mean()(0) - 3.0) / 3.0 < 1e-5);
  CHECK(std::abs(posterior.covariance()(0, 0) - 2.0) / 2.0 < 1e-5);
}

TEST_CASE("zero-innovation update keeps the mean and shrinks position spread") {
  const SensorModel sensor = SensorModel::position_observer(100.0);
  Eigen::VectorXd mean(4);
  mean << 3.0, -2.0, 1.0, 4.0;
  const GaussianBelief prior = GaussianBelief::from_moments(
      mean, 25.0 * Eigen::MatrixXd::Identity(4, 4));
  const GaussianBelief posterior = update(prior, sensor.H * mean, sensor);
  CHECK((posterior.mean() - mean).norm() < 1e-9);
  CHECK(posterior.covariance()(0, 0) < prior.covariance()(0, 0));
  CHECK(posterior.covariance()(1, 1) < prior.covariance()(1, 1));
  CHECK(posterior.covariance()(2, 2) == doctest::Approx(25.0));
}

TEST_CASE("update rejects singular measurement noise and bad dimensions") {
  SensorModel degenerate;
  degenerate.H = Eigen::MatrixXd::Identity(1, 1);
  degenerate.R = Eigen::MatrixXd::Zero(1, 1);
  Eigen::VectorXd z(1);
  z << 1.0;
  CHECK_THROWS_AS(update(scalar_belief(0.0, 1.0), z, degenerate), primex::ModelError);

  const SensorModel sensor = SensorModel::position_observer(100.0);
  CHECK_THROWS_AS(update(scalar_belief(0.0, 1.0), z, sensor), primex::DimensionError);
}

TEST_CASE("update commutes across independent measurements") {
  std::mt19937_64 rng(13);
  const SensorModel sensor = SensorModel::position_observer(100.0);
  std::normal_distribution<double> normal(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianBelief prior = random_belief(rng, 4);
    Eigen::VectorXd z1(2), z2(2);
    z1 << normal(rng), normal(rng);
    z2 << normal(rng), normal(rng);
    const GaussianBelief ab = update(update(prior, z1, sensor), z2, sensor);
    const GaussianBelief ba = update(update(prior, z2, sensor), z1, sensor);
    CHECK((ab.mean() - ba.mean()).norm() < 1e-9);
    CHECK((ab.covariance() - ba.covariance()).norm() < 1e-9);
  }
}

TEST_CASE("prediction and update keep covariances symmetric positive-definite") {
  std::mt19937_64 rng(17);
  const MotionModel model = MotionModel::nearly_constant_velocity(0.5, 25.0);
  const SensorModel sensor = SensorModel::position_observer(100.0);
  std::normal_distribution<double> normal(0.0, 10.0);
  GaussianBelief b = random_belief(rng, 4);
  for (int step = 0; step < 50; ++step) {
    b = predict(b, model);
    b.validate();
    Eigen::VectorXd z(2);
    z << normal(rng), normal(rng);
    b = update(b, z, sensor);
    b.validate();
    const Eigen::MatrixXd cov = b.covariance();
    CHECK((cov - cov.transpose()).norm() < 1e-9 * cov.norm());
  }
}

TEST_CASE("equal-weight pooling of shifted unit Gaussians lands midway") {
  const std::array<GaussianBelief, 2> inputs = {scalar_belief(0.0, 1.0),
                                                scalar_belief(2.0, 1.0)};
  const std::array<double, 2> weights = {0.5, 0.5};
  const GaussianBelief pooled = geometric_pool(inputs, weights);
  CHECK(pooled.mean()(0) == doctest::Approx(1.0));
  CHECK(pooled.covariance()(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("pooling with all weight on one input returns that input") {
  std::mt19937_64 rng(19);
  const std::array<GaussianBelief, 2> inputs = {random_belief(rng, 3), random_belief(rng, 3)};
  const std::array<double, 2> weights = {1.0, 0.0};
  const GaussianBelief pooled = geometric_pool(inputs, weights);
  CHECK((pooled.mean() - inputs[0].mean()).norm() <= 1e-12 * (1.0 + inputs[0].mean().norm()));
  CHECK((pooled.covariance() - inputs[0].covariance()).norm() <=
        1e-12 * inputs[0].covariance().norm());
}

TEST_CASE("pooling averages information matrices") {
  const std::array<GaussianBelief, 2> inputs = {scalar_belief(0.0, 1.0),
                                                scalar_belief(0.0, 4.0)};
  const std::array<double, 2> weights = {0.5, 0.5};
  const GaussianBelief pooled = geometric_pool(inputs, weights);
  CHECK(pooled.covariance()(0, 0) == doctest::Approx(1.6));
  CHECK(pooled.mean()(0) == doctest::Approx(0.0));
}

TEST_CASE("pooling matches scalar numeric quadrature") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> mean_draw(-5.0, 5.0);
  std::uniform_real_distribution<double> var_draw(0.3, 4.0);
  std::uniform_real_distribution<double> weight_draw(0.05, 0.95);
  for (int trial = 0; trial < 25; ++trial) {
    const double ma = mean_draw(rng);
    const double mb = mean_draw(rng);
    const double va = var_draw(rng);
    const double vb = var_draw(rng);
    const double wa = weight_draw(rng);
    const double wb = 1.0 - wa;
    const std::array<GaussianBelief, 2> inputs = {scalar_belief(ma, va),
                                                  scalar_belief(mb, vb)};
    const std::array<double, 2> weights = {wa, wb};
    const GaussianBelief pooled = geometric_pool(inputs, weights);
    const auto [mean_ref, var_ref] = primex::oracles::scalar_pool_numeric(ma, va, mb, vb, wa, wb);
    CHECK(pooled.mean()(0) == doctest::Approx(mean_ref).epsilon(1e-6));
    CHECK(pooled.covariance()(0, 0) == doctest::Approx(var_ref).epsilon(1e-6));
  }
}

TEST_CASE("pooling rejects weight vectors that cannot form a density") {
  const std::array<GaussianBelief, 2> inputs = {scalar_belief(0.0, 1.0),
                                                scalar_belief(2.0, 1.0)};
  const std::array<double, 2> negative = {1.5, -0.5};
  CHECK_THROWS_AS(geometric_pool(inputs, negative), primex::FusionError);
  const std::array<double, 2> zero = {0.0, 0.0};
  CHECK_THROWS_AS(geometric_pool(inputs, zero), primex::FusionError);
  const std::array<double, 1> short_weights = {1.0};
  CHECK_THROWS_AS(geometric_pool(inputs, short_weights), primex::DimensionError);
}

TEST_CASE("covariance trace accessor") {
  CHECK(primex::trace_cov(GaussianBelief::from_moments(
            Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4))) == doctest::Approx(4.0));
  Eigen::MatrixXd diag = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  CHECK(primex::trace_cov(GaussianBelief::from_moments(Eigen::VectorXd::Zero(3), diag)) ==
        doctest::Approx(6.0));
  CHECK(primex::trace_cov(GaussianBelief::from_moments(
            Eigen::VectorXd::Zero(4), 25.0 * Eigen::MatrixXd::Identity(4, 4))) ==
        doctest::Approx(100.0));
}

}
