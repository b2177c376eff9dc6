#include <cmath>

#include <gtest/gtest.h>

#include "alloyscope/error.hpp"
#include "alloyscope/mlp.hpp"
#include "alloyscope/random.hpp"
#include "oracles.hpp"

namespace alloyscope {
namespace {

const std::vector<std::size_t> kDesk{12, 64, 64, 20};

std::vector<double> random_point(Rng& rng, const MlpModel& m) {
  std::vector<double> x(m.input_dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    x[i] = m.input_mean[ii] + m.input_std[ii] * rng.uniform(-2.0, 2.0);
  }
  return x;
}

Eigen::VectorXd as_vector(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

TEST(Prelu, Branches) {
  EXPECT_EQ(prelu(3.0, 0.25), 3.0);
  EXPECT_EQ(prelu(-2.0, 0.25), -0.5);
  EXPECT_EQ(prelu(0.0, 0.25), 0.0);
  EXPECT_EQ(prelu_derivative(0.0, 0.25), 0.25);
  EXPECT_EQ(prelu_derivative(1e-300, 0.25), 1.0);
  EXPECT_EQ(prelu_derivative(-1.0, 0.25), 0.25);
}

TEST(Forward, BiasOnlyNetworkReturnsDestandardizedOutputBias) {
  auto m = make_zero_model(kDesk);
  oracle::perturb_affine_terms(m, 4);
  for (auto& w : m.weights) w.setZero();
  Rng rng(1);
  const auto x = random_point(rng, m);
  const auto y = forward(m, x);
  const Eigen::VectorXd want =
      m.output_std.cwiseProduct(m.biases.back()) + m.output_mean;
  for (Eigen::Index j = 0; j < y.size(); ++j) EXPECT_DOUBLE_EQ(y[j], want[j]);
  EXPECT_TRUE(input_jacobian(m, x).isZero(0.0));
}

TEST(Forward, MatchesStraightLineImplementation) {
  auto m = make_random_model(kDesk, 7);
  oracle::perturb_affine_terms(m, 8);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_point(rng, m);
    const auto got = forward(m, x);
    const auto want = oracle::forward_loops(m, x);
    for (std::size_t j = 0; j < want.size(); ++j) {
      const double scale = std::max(std::abs(want[j]), 1e-12);
      ASSERT_LE(std::abs(got[static_cast<Eigen::Index>(j)] - want[j]) / scale, 1e-10);
    }
  }
}

TEST(Forward, LinearReductionWhenEverySlopeIsOne) {
  auto m = make_random_model(kDesk, 11, 1.0);
  oracle::perturb_affine_terms(m, 12);
  const Eigen::MatrixXd s_in_inv = m.input_std.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd s_out = m.output_std.asDiagonal();
  const Eigen::MatrixXd chain = m.weights[2] * m.weights[1] * m.weights[0];
  const Eigen::MatrixXd expected_jac = s_out * chain * s_in_inv;
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_point(rng, m);
    const Eigen::VectorXd xhat = (as_vector(x) - m.input_mean).cwiseQuotient(m.input_std);
    const Eigen::VectorXd z =
        m.weights[2] * (m.weights[1] * (m.weights[0] * xhat + m.biases[0]) + m.biases[1]) +
        m.biases[2];
    const Eigen::VectorXd expected = m.output_std.cwiseProduct(z) + m.output_mean;
    const auto eval = evaluate(m, x);
    EXPECT_LE(oracle::max_relative_error(eval.outputs, expected, 1e-300), 1e-10);
    EXPECT_LE(oracle::max_relative_error(eval.jacobian, expected_jac, 1e-300), 1e-10);
  }
}

TEST(Jacobian, MatchesCentralDifferencesAwayFromKinks) {
  auto m = make_random_model(kDesk, 3);
  oracle::perturb_affine_terms(m, 4);
  Rng rng(9);
  const std::vector<double> std_in(m.input_std.data(), m.input_std.data() + m.input_std.size());
  auto f = [&](std::span<const double> x) {
    const auto y = forward(m, x);
    return std::vector<double>(y.data(), y.data() + y.size());
  };
  int checked = 0;
  while (checked < 20) {
    const auto x = random_point(rng, m);
    if (min_abs_preactivation(m, x) < 1e-3) continue;
    const auto fd = oracle::central_difference_jacobian(f, x, std_in, 1e-5);
    EXPECT_LE(oracle::max_relative_error(input_jacobian(m, x), fd, 1e-6), 1e-4);
    ++checked;
  }
}

TEST(Evaluate, AgreesWithSeparateCalls) {
  auto m = make_random_model(kDesk, 5);
  Rng rng(6);
  const auto x = random_point(rng, m);
  const auto eval = evaluate(m, x);
  EXPECT_EQ(eval.outputs, forward(m, x));
  EXPECT_EQ(eval.jacobian, input_jacobian(m, x));
}

TEST(ForwardBatch, ColumnsMatchSinglePoints) {
  auto m = make_random_model(kDesk, 2);
  oracle::perturb_affine_terms(m, 3);
  Rng rng(8);
  Eigen::MatrixXd batch(12, 9);
  for (Eigen::Index c = 0; c < batch.cols(); ++c) {
    const auto x = random_point(rng, m);
    batch.col(c) = as_vector(x);
  }
  const auto out = forward_batch(m, batch);
  for (Eigen::Index c = 0; c < batch.cols(); ++c) {
    const Eigen::VectorXd col = batch.col(c);
    const auto single = forward(m, std::span<const double>(col.data(), 12));
    EXPECT_LE((out.col(c) - single).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + single.cwiseAbs().maxCoeff()));
  }
}

TEST(Forward, ErrorPaths) {
  const auto m = make_random_model(kDesk, 1);
  auto code = [&](std::vector<double> x) {
    try {
      forward(m, x);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadRequest;
  };
  EXPECT_EQ(code(std::vector<double>(11, 0.0)), ErrorCode::DimensionMismatch);
  std::vector<double> bad(12, 0.0);
  bad[3] = std::nan("");
  EXPECT_EQ(code(bad), ErrorCode::NonFiniteInput);
}

TEST(Model, ValidateCatchesBrokenShapes) {
  auto m = make_random_model(kDesk, 1);
  EXPECT_NO_THROW(m.validate());
  auto broken = m;
  broken.weights[1] = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_THROW(broken.validate(), Error);
  broken = m;
  broken.output_std[0] = 0.0;
  EXPECT_THROW(broken.validate(), Error);
  broken = m;
  broken.input_names.pop_back();
  EXPECT_THROW(broken.validate(), Error);
}

TEST(Model, RandomInitIsDeterministic) {
  EXPECT_TRUE(make_random_model(kDesk, 5) == make_random_model(kDesk, 5));
  EXPECT_FALSE(make_random_model(kDesk, 5) == make_random_model(kDesk, 6));
}

}  // namespace
}  // namespace alloyscope
