#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gpstop/errors.hpp"
#include "gpstop/fit.hpp"
#include "gpstop/gp.hpp"
#include "gpstop/kernel.hpp"
#include "gpstop/linalg.hpp"
#include "gpstop/rng.hpp"
#include "oracles.hpp"

using namespace gpstop;

namespace {

KernelSpec random_spec(Rng& rng) {
  KernelSpec spec;
  const KernelFamily families[] = {KernelFamily::Exponential, KernelFamily::SquaredExponential,
                                   KernelFamily::RationalQuadratic, KernelFamily::Linear};
  spec.family = families[rng.index(4)];
  spec.lengthscale = std::exp(rng.uniform(std::log(0.5), std::log(20.0)));
  spec.signal_variance = std::exp(rng.uniform(std::log(0.1), std::log(5.0)));
  spec.extra = std::exp(rng.uniform(std::log(0.5), std::log(3.0)));
  return spec;
}

Eigen::VectorXd random_times(Rng& rng, Eigen::Index n, double span = 20.0) {
  Eigen::VectorXd t(n);
  double at = rng.uniform(0.1, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    t[i] = at;
    at += rng.uniform(0.2, span / static_cast<double>(n));
  }
  return t;
}

}  // namespace

TEST_CASE("kernel evaluation basics") {
  KernelSpec exp_spec{KernelFamily::Exponential, 3.0, 1.7, 1.0};
  CHECK(kernel_eval(exp_spec, 5.0, 5.0) == doctest::Approx(1.7).epsilon(1e-14));

  KernelSpec se{KernelFamily::SquaredExponential, 2.0, 1.0, 1.0};
  CHECK(kernel_eval(se, 1.0, 3.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const KernelSpec spec = random_spec(rng);
    CHECK(kernel_eval(spec, 3.0, 7.0) == kernel_eval(spec, 7.0, 3.0));
  }
}

TEST_CASE("kernel parameter domain") {
  KernelSpec spec;
  spec.lengthscale = 0.0;
  CHECK_THROWS_AS(kernel_eval(spec, 0.0, 1.0), std::domain_error);
  spec = KernelSpec{};
  spec.signal_variance = -1.0;
  CHECK_THROWS_AS(kernel_eval(spec, 0.0, 1.0), std::domain_error);
  spec = KernelSpec{KernelFamily::RationalQuadratic, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(kernel_eval(spec, 0.0, 1.0), std::domain_error);
}

TEST_CASE("gram matrices are positive semi-definite") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const KernelSpec spec = random_spec(rng);
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.index(19));
    const Eigen::VectorXd t = random_times(rng, n);
    const Eigen::MatrixXd k = kernel_matrix(spec, t, t);
    CHECK(k.isApprox(k.transpose(), 1e-12));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * k.trace());
  }
}

TEST_CASE("log marginal likelihood closed forms") {
  // One observation of 0 with unit total variance: a standard normal at zero.
  KernelSpec spec{KernelFamily::SquaredExponential, 1.0, 0.9, 1.0};
  GPModel model(spec, 0.1, Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Zero(1));
  CHECK(model.log_marginal_likelihood() ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("log marginal likelihood is permutation invariant") {
  Rng rng(13);
  Eigen::VectorXd times(5);
  times << 1.0, 2.5, 4.0, 7.0, 9.5;
  Eigen::VectorXd values(5);
  values << 0.3, -0.2, 1.1, 0.7, -0.5;
  const KernelSpec spec{KernelFamily::Exponential, 2.0, 1.0, 1.0};
  GPModel sorted(spec, 0.01, times, values);

  std::vector<Eigen::Index> perm{3, 0, 4, 1, 2};
  Eigen::VectorXd pt(5), pv(5);
  for (Eigen::Index i = 0; i < 5; ++i) {
    pt[i] = times[perm[i]];
    pv[i] = values[perm[i]];
  }
  GPModel shuffled(spec, 0.01, pt, pv);
  CHECK(sorted.log_marginal_likelihood() == shuffled.log_marginal_likelihood());
}

TEST_CASE("log marginal likelihood matches the dense-algebra oracle") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    KernelSpec spec = random_spec(rng);
    const double noise = rng.uniform(1e-3, 0.5);
    const Eigen::VectorXd t = random_times(rng, 4);
    Eigen::VectorXd y(4);
    for (Eigen::Index i = 0; i < 4; ++i) y[i] = rng.normal();
    GPModel model(spec, noise, t, y);
    const double expected = oracles::dense_log_marginal_likelihood(spec, noise, t, y);
    CHECK(model.log_marginal_likelihood() == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("posterior with no conditioning data is the prior") {
  KernelSpec spec{KernelFamily::Exponential, 4.0, 2.0, 1.0};
  GPModel model(spec, 0.25, Eigen::VectorXd(), Eigen::VectorXd());
  const PredictiveMarginal m = model.posterior_marginal(3.0);
  CHECK(m.mean == 0.0);
  CHECK(m.variance == doctest::Approx(2.0 + 0.25).epsilon(1e-14));
}

TEST_CASE("posterior interpolates a single noiseless observation") {
  KernelSpec spec{KernelFamily::SquaredExponential, 1.0, 1.0, 1.0};
  GPModel model(spec, 0.0, Eigen::VectorXd::Constant(1, 5.0),
                Eigen::VectorXd::Constant(1, 1.3));
  const PredictiveMarginal m = model.posterior_marginal(5.0);
  CHECK(m.mean == doctest::Approx(1.3).epsilon(1e-6));
  CHECK(m.variance - model.noise_variance() <= 1e-6);  // latent variance collapses
}

TEST_CASE("posterior matches joint-Gaussian conditioning") {
  Rng rng(19);
  for (int rep = 0; rep < 30; ++rep) {
    const KernelSpec spec = random_spec(rng);
    const double noise = rng.uniform(1e-3, 0.5);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(3));
    const Eigen::VectorXd t = random_times(rng, n);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = rng.normal();
    const double t_star = rng.uniform(0.0, 22.0);

    GPModel model(spec, noise, t, y);
    const PredictiveMarginal got = model.posterior_marginal(t_star);
    const oracles::Marginal expected =
        oracles::condition_joint_gaussian(spec, model.noise_variance(), model.train_times(),
                                          model.train_values(), t_star);
    CHECK(got.mean == doctest::Approx(expected.mean).epsilon(1e-8));
    CHECK(std::abs(got.variance - expected.variance) <= 1e-8);
  }
}

TEST_CASE("batched marginals equal individual calls") {
  Rng rng(23);
  const KernelSpec spec = random_spec(rng);
  Eigen::VectorXd t = random_times(rng, 6);
  Eigen::VectorXd y(6);
  for (Eigen::Index i = 0; i < 6; ++i) y[i] = rng.normal();
  GPModel model(spec, 0.05, t, y);

  Eigen::VectorXd grid(50);
  for (Eigen::Index i = 0; i < 50; ++i) grid[i] = rng.uniform(0.0, 25.0);
  const auto batch = model.posterior_marginals(grid);
  REQUIRE(batch.size() == 50);
  for (Eigen::Index i = 0; i < 50; ++i) {
    const PredictiveMarginal single = model.posterior_marginal(grid[i]);
    CHECK(batch[static_cast<std::size_t>(i)].mean == single.mean);
    CHECK(batch[static_cast<std::size_t>(i)].variance == single.variance);
  }

  const auto one = model.posterior_marginals(grid.head(1));
  CHECK(one.size() == 1);
  CHECK(one[0].mean == model.posterior_marginal(grid[0]).mean);
}

TEST_CASE("conditioning on more data never inflates the latent variance") {
  Rng rng(29);
  for (int rep = 0; rep < 25; ++rep) {
    const KernelSpec spec = random_spec(rng);
    const double noise = rng.uniform(1e-4, 0.2);
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.index(8));
    const Eigen::VectorXd t = random_times(rng, n + 1);
    Eigen::VectorXd y(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) y[i] = rng.normal();

    GPModel small(spec, noise, t.head(n), y.head(n));
    GPModel large(spec, noise, t, y);
    const double t_star = rng.uniform(0.0, 22.0);
    const double v_small = small.posterior_marginal(t_star).variance;
    const double v_large = large.posterior_marginal(t_star).variance;
    CHECK(v_large <= v_small + 1e-10);
  }
}

TEST_CASE("model construction contracts") {
  const KernelSpec spec{};
  Eigen::VectorXd t(2), y(2);
  t << 1.0, 1.0;
  y << 0.0, 1.0;
  CHECK_THROWS_AS(GPModel(spec, 0.1, t, y), std::invalid_argument);
  t << 2.0, 1.0;
  GPModel model(spec, 0.1, t, y);  // unsorted input is sorted on construction
  CHECK(model.train_times()[0] == 1.0);
  CHECK(model.train_values()[0] == 1.0);
  CHECK_THROWS_AS(GPModel(spec, -0.1, t, y), std::domain_error);

  // Factor reconstructs the noisy Gram matrix.
  Eigen::VectorXd t3(3), y3(3);
  t3 << 1.0, 2.0, 4.0;
  y3 << 0.5, -0.5, 0.25;
  GPModel m3(spec, 0.3, t3, y3);
  Eigen::MatrixXd gram = kernel_matrix(spec, m3.train_times(), m3.train_times());
  gram.diagonal().array() += m3.noise_variance();
  const Eigen::MatrixXd rebuilt = m3.chol() * m3.chol().transpose();
  CHECK(rebuilt.isApprox(gram, 1e-10));
}

TEST_CASE("noise variance is floored") {
  const KernelSpec spec{};
  Eigen::VectorXd t(1), y(1);
  t << 1.0;
  y << 0.0;
  GPModel model(spec, 0.0, t, y);
  CHECK(model.noise_variance() == GPModel::kNoiseFloor);
  CHECK(model.posterior_marginal(9.0).variance > 0.0);
}

TEST_CASE("fit requires at least three points") {
  Eigen::VectorXd t(2), y(2);
  t << 1.0, 2.0;
  y << 0.0, 1.0;
  CHECK_THROWS_AS(fit_hyperparams(t, y, KernelFamily::Exponential), std::invalid_argument);
}

TEST_CASE("fit is deterministic and improves with more starts") {
  Rng rng(31);
  Eigen::VectorXd t(12), y(12);
  for (Eigen::Index i = 0; i < 12; ++i) {
    t[i] = static_cast<double>(i + 1);
    y[i] = std::sin(0.4 * t[i]) + 0.05 * rng.normal();
  }
  FitConfig config;
  config.seed = 3;
  config.num_starts = 4;
  config.max_iterations = 120;

  const GPModel a = fit_hyperparams(t, y, KernelFamily::Exponential, config);
  const GPModel b = fit_hyperparams(t, y, KernelFamily::Exponential, config);
  CHECK(a.kernel().lengthscale == b.kernel().lengthscale);
  CHECK(a.kernel().signal_variance == b.kernel().signal_variance);
  CHECK(a.noise_variance() == b.noise_variance());

  // The start list grows by appending, so best-of-more-starts dominates.
  FitConfig one_start = config;
  one_start.num_starts = 1;
  const GPModel single = fit_hyperparams(t, y, KernelFamily::Exponential, one_start);
  CHECK(a.log_marginal_likelihood() >= single.log_marginal_likelihood() - 1e-12);
}

TEST_CASE("fit recovers the lengthscale of exponential-kernel draws") {
  const KernelSpec truth{KernelFamily::Exponential, 10.0, 1.0, 1.0};
  const Eigen::Index n = 200;
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1);
  const Eigen::MatrixXd k = kernel_matrix(truth, t, t);
  Eigen::MatrixXd noisy = k;
  noisy.diagonal().array() += 0.01;
  const Eigen::MatrixXd chol = jittered_cholesky(noisy);

  double log_sum = 0.0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(100 + seed);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    const Eigen::VectorXd y = chol.triangularView<Eigen::Lower>() * z;

    FitConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    config.num_starts = 3;
    config.max_iterations = 60;
    const GPModel fit = fit_hyperparams(t, y, KernelFamily::Exponential, config);
    log_sum += std::log(fit.kernel().lengthscale);
  }
  const double geo_mean = std::exp(log_sum / seeds);
  CHECK(geo_mean > 5.0);
  CHECK(geo_mean < 20.0);
}

TEST_CASE("linear-family fit reproduces a constant series") {
  const Eigen::Index n = 20;
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(n, 3.7);

  FitConfig config;
  config.seed = 5;
  const GPModel model = fit_hyperparams(t, y, KernelFamily::Linear, config);
  for (double t_star : {1.5, 10.0, 25.0}) {
    CHECK(model.posterior_marginal(t_star).mean == doctest::Approx(3.7).epsilon(1e-3));
  }
}

TEST_CASE("jittered cholesky survives a singular matrix") {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(4, 4);  // rank one
  double jitter = -1.0;
  const Eigen::MatrixXd chol = jittered_cholesky(ones, &jitter);
  CHECK(jitter > 0.0);
  CHECK((chol * chol.transpose()).isApprox(
      ones + jitter * Eigen::MatrixXd::Identity(4, 4), 1e-8));

  Eigen::MatrixXd indefinite = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(jittered_cholesky(indefinite), NumericError);
}

TEST_CASE("fit reports failure when no start is evaluable") {
  // Extreme magnitudes overflow the data-scale heuristics, so every start
  // lands outside the evaluable parameter box.
  Eigen::VectorXd t(4), y(4);
  t << 1.0, 2.0, 3.0, 4.0;
  y << 1e160, -1e160, 1e160, -1e160;
  CHECK_THROWS_AS(fit_hyperparams(t, y, KernelFamily::Exponential), NumericError);
}
