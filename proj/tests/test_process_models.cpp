#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fading/errors.hpp"
#include "fading/process_models.hpp"
#include "fading/random.hpp"
#include "fading/sphere_search.hpp"
#include "oracles.hpp"

using namespace fading;

namespace {

CMatrix random_matrix(int n, Engine& e) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = standard_complex_normal(e);
  return m;
}

GaussianVectorProcess random_model(int nt, int order, Engine& e) {
  std::vector<CMatrix> ar;
  for (int i = 0; i < order; ++i) {
    const CMatrix g = random_matrix(nt, e);
    const double norm = Eigen::JacobiSVD<CMatrix>(g).singularValues()(0);
    ar.push_back(g * (0.85 / order / norm));
  }
  const CMatrix b = random_matrix(nt, e);
  CVector mean(nt);
  for (int i = 0; i < nt; ++i) mean(i) = standard_complex_normal(e);
  return GaussianVectorProcess(mean, ar, b * b.adjoint() + 0.2 * CMatrix::Identity(nt, nt));
}

}  // namespace

TEST_CASE("stationary covariance: closed-form cases") {
  const auto white = GaussianVectorProcess::white(CVector::Zero(3), CMatrix::Identity(3, 3));
  CHECK((white.covariance() - CMatrix::Identity(3, 3)).norm() == 0.0);

  const GaussianVectorProcess ar1(CVector::Zero(1), {CMatrix::Constant(1, 1, 0.5)},
                                  CMatrix::Constant(1, 1, 0.75));
  CHECK(ar1.covariance()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(stationary_covariance(ar1)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));

  CMatrix a = CMatrix::Zero(3, 3);
  a.topLeftCorner(2, 2) << 0.5, 0.2, -0.1, 0.3;
  a(2, 2) = Complex(0.4, 0.4);
  CMatrix q = CMatrix::Zero(3, 3);
  q.topLeftCorner(2, 2) << 1.0, 0.3, 0.3, 2.0;
  q(2, 2) = 0.5;
  const GaussianVectorProcess block(CVector::Zero(3), {a}, q);
  CHECK(std::abs(block.covariance()(0, 2)) < 1e-15);
  CHECK(std::abs(block.covariance()(1, 2)) < 1e-15);
  CHECK(block.covariance()(2, 2).real() == doctest::Approx(0.5 / (1.0 - 0.32)).epsilon(1e-13));
}

TEST_CASE("stationary covariance matches the series oracle and the Lyapunov equation") {
  Engine e = make_engine(3, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const GaussianVectorProcess m = random_model(2 + trial % 2, 1 + trial % 3, e);
    const CMatrix oracle_k =
        oracle::stationary_covariance_series(m.ar_coefficients(), m.innovation_covariance());
    CHECK((m.covariance() - oracle_k).norm() <= 1e-10 * oracle_k.norm());
    CHECK((m.covariance() - m.covariance().adjoint()).norm() == 0.0);
  }
  const GaussianVectorProcess m1 = random_model(3, 1, e);
  const CMatrix& a = m1.ar_coefficients()[0];
  const CMatrix fixed = a * m1.covariance() * a.adjoint() + m1.innovation_covariance();
  CHECK((fixed - m1.covariance()).norm() <= 1e-12 * m1.covariance().norm());
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GaussianVectorProcess(CVector::Zero(1), {CMatrix::Constant(1, 1, 1.0)},
                                        CMatrix::Identity(1, 1)),
                  ModelError);
  CMatrix not_hermitian(2, 2);
  not_hermitian << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(GaussianVectorProcess::white(CVector::Zero(2), not_hermitian), ModelError);
  CMatrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(GaussianVectorProcess::white(CVector::Zero(2), indefinite), ModelError);
  CHECK_THROWS_AS(GaussianVectorProcess::white(CVector::Zero(3), CMatrix::Identity(2, 2)),
                  ModelError);
  CHECK_THROWS_AS(GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(2), 1.0), ModelError);
}

TEST_CASE("burn-in follows the memory depth and spectral radius") {
  const auto m = GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(2), 0.5);
  CHECK(m.spectral_radius() == doctest::Approx(0.5));
  CHECK(m.burn_in() == 100);
  const auto slow = GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(1), 1.0 - 1e-9);
  CHECK(slow.burn_in() == 1000000);
}

TEST_CASE("matrix autocovariance satisfies the Yule-Walker recursion") {
  Engine e = make_engine(4, 0);
  const GaussianVectorProcess m = random_model(2, 2, e);
  const auto lags = m.matrix_autocovariance(10);
  for (std::size_t k = 2; k <= 10; ++k) {
    const CMatrix rec = m.ar_coefficients()[0] * lags[k - 1] + m.ar_coefficients()[1] * lags[k - 2];
    CHECK((rec - lags[k]).norm() <= 1e-12);
  }
}

TEST_CASE("projection: mean, autocovariance and preconditions") {
  const auto iid = GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(3), Complex(0.3, 0.4));
  Engine e = make_engine(5, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const CVector x = random_unit_vector(3, e);
    const ScalarProjection g = project(iid, x);
    CHECK(g.variance() == doctest::Approx(1.0).epsilon(1e-12));
    const auto c = g.autocovariance(5);
    for (int k = 0; k <= 5; ++k) {
      CHECK(std::abs(c[k] - std::pow(Complex(0.3, 0.4), k)) < 1e-12);
    }
  }
  CMatrix k(2, 2);
  k << 2.0, Complex(0.5, 0.5), Complex(0.5, -0.5), 1.0;
  const auto white = GaussianVectorProcess::white(CVector::Zero(2), k);
  const CVector x = random_unit_vector(2, e);
  const auto c = project(white, x).autocovariance(3);
  CHECK(c[0].real() == doctest::Approx(x.conjugate().dot(k * x.conjugate()).real()));
  CHECK(std::abs(c[1]) == 0.0);
  CHECK_THROWS_AS(project(white, CVector::Ones(2)), PreconditionError);
}

TEST_CASE("projection phase covariance") {
  Engine e = make_engine(6, 0);
  const GaussianVectorProcess m = random_model(3, 2, e);
  const CVector x = random_unit_vector(3, e);
  const Complex phase = std::polar(1.0, 0.9);
  const ScalarProjection a = project(m, x);
  const ScalarProjection b = project(m, phase * x);
  CHECK(std::abs(b.mean() - phase * a.mean()) < 1e-14);
  const auto ca = a.autocovariance(6);
  const auto cb = b.autocovariance(6);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(ca[k] - cb[k]) < 1e-13);
}

TEST_CASE("projected spectral density is the transform of the autocovariance") {
  Engine e = make_engine(7, 0);
  const GaussianVectorProcess m = random_model(2, 1, e);
  const ScalarProjection g = project(m, random_unit_vector(2, e));
  const auto c = g.autocovariance(400);
  for (double lambda : {-3.0, -1.0, 0.0, 0.5, 2.5}) {
    double s = c[0].real();
    for (int k = 1; k <= 400; ++k) s += 2.0 * (c[k] * std::polar(1.0, -k * lambda)).real();
    CHECK(g.spectral_density(lambda) == doctest::Approx(s).epsilon(1e-9));
    CHECK(g.spectral_density(lambda) > 0.0);
  }
}

TEST_CASE("rotation maps K to U K U^H") {
  Engine e = make_engine(8, 0);
  const GaussianVectorProcess m = random_model(3, 2, e);
  const CMatrix u = random_unitary(3, e);
  const GaussianVectorProcess r = rotate(m, u);
  CHECK((stationary_covariance(r) - u * m.covariance() * u.adjoint()).norm() <= 1e-11);
  CHECK((r.mean() - u * m.mean()).norm() <= 1e-13);
}

TEST_CASE("spatial IID detection") {
  CHECK(GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(2), 0.5).is_spatially_iid());
  Engine e = make_engine(9, 0);
  CHECK_FALSE(random_model(2, 1, e).is_spatially_iid());
}

TEST_CASE("sample paths: determinism and white-noise covariance") {
  CMatrix k(2, 2);
  k << 1.0, Complex(0.3, 0.2), Complex(0.3, -0.2), 2.0;
  CVector d(2);
  d << 1.0, Complex(0.0, -0.5);
  const auto white = GaussianVectorProcess::white(d, k);
  const CMatrix p1 = sample_path(white, 100000, 42);
  const CMatrix p2 = sample_path(white, 100000, 42);
  CHECK(p1 == p2);
  CHECK_FALSE(p1 == sample_path(white, 100000, 43));
  const double n = static_cast<double>(p1.cols());
  const CVector mean = p1.rowwise().mean();
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(mean(i) - d(i)) < 3.0 * std::sqrt(k(i, i).real() / n));
  }
  const CMatrix centered = p1.colwise() - d;
  const CMatrix cov = centered * centered.adjoint() / n;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Var of a product of circular Gaussians is K_ii K_jj.
      const double se = std::sqrt(k(i, i).real() * k(j, j).real() / n);
      CHECK(std::abs(cov(i, j) - k(i, j)) < 3.0 * se * std::sqrt(2.0));
    }
  }
}

TEST_CASE("projected sample autocovariance matches the model") {
  Engine e = make_engine(10, 0);
  const std::size_t n = 100000;
  const int batches = 100;
  int failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianVectorProcess m = random_model(2 + trial % 2, 1 + trial % 2, e);
    const CVector x = random_unit_vector(m.nt(), e);
    const ScalarProjection g = project(m, x);
    const auto path = sample_path(m, n, 100 + static_cast<std::uint64_t>(trial));
    const Eigen::RowVectorXcd proj = x.transpose() * path;
    std::vector<Complex> samples(proj.data(), proj.data() + proj.size());
    const auto c = g.autocovariance(2);
    for (int lag = 0; lag <= 1; ++lag) {
      // Batch means give the standard error under serial correlation.
      const std::size_t len = n / batches;
      std::vector<Complex> est;
      for (int b = 0; b < batches; ++b) {
        std::vector<Complex> chunk(samples.begin() + b * len, samples.begin() + (b + 1) * len);
        est.push_back(oracle::empirical_autocovariance(chunk, g.mean(), lag));
      }
      Complex avg = 0.0;
      for (const Complex& v : est) avg += v;
      avg /= static_cast<double>(batches);
      double var = 0.0;
      for (const Complex& v : est) var += std::norm(v - avg);
      const double se = std::sqrt(var / (batches - 1.0) / batches);
      const Complex full = oracle::empirical_autocovariance(samples, g.mean(), lag);
      if (std::abs(full - c[lag]) > 3.0 * se) ++failures;
    }
  }
  // 20 comparisons of a complex quantity at 3 sigma.
  CHECK(failures <= 1);
}

TEST_CASE("scale-mixture process keeps the second-order structure") {
  const auto base = GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(2), 0.5);
  const auto mix = GeneralFadingProcess::ar_scale_mixture(base, {{0.5, 0.5}, {1.0, 7.0}});
  mix.require_certificates();
  const CMatrix path = mix.sample_path(200000, 3);
  CHECK(path == sample_path(mix, 200000, 3));
  const double n = static_cast<double>(path.cols());
  double power = 0.0;
  double fourth = 0.0;
  for (Eigen::Index t = 0; t < path.cols(); ++t) {
    const double p = std::norm(path(0, t));
    power += p;
    fourth += p * p;
  }
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.03));
  // A Gaussian component has E|h|^4 = 2; the mixture is heavier tailed.
  CHECK(fourth / n > 2.3);
  CHECK_THROWS_AS(GeneralFadingProcess::ar_scale_mixture(base, {{0.5}, {1.0, 2.0}}), ModelError);
}

TEST_CASE("certificates are enforced") {
  const GeneralFadingProcess p(
      1, [](std::size_t n, std::uint64_t) { return CMatrix::Ones(1, static_cast<Eigen::Index>(n)); },
      true, false, "no entropy certificate");
  CHECK_THROWS_AS(p.require_certificates(), ModelError);
}
