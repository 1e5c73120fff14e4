#include "fading/process_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fading/errors.hpp"
#include "fading/random.hpp"

namespace fading {

struct GaussianVectorProcess::State {
  CVector mean;
  std::vector<CMatrix> ar;
  CMatrix innovation_covariance;
  CMatrix innovation_factor;  // lower Cholesky factor of Q
  CMatrix state_covariance;
  CMatrix covariance;
  double spectral_radius = 0.0;
  std::size_t burn_in = 0;
};

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr std::size_t kMaxBurnIn = 1'000'000;

void require_hermitian(const CMatrix& m, const std::string& what) {
  const double scale = 1.0 + m.norm();
  if ((m - m.adjoint()).norm() > kHermitianTol * scale) {
    throw ModelError(what + " is not Hermitian");
  }
}

CMatrix companion_matrix(const std::vector<CMatrix>& ar, int nt) {
  const auto p = static_cast<Eigen::Index>(ar.size());
  CMatrix f = CMatrix::Zero(p * nt, p * nt);
  for (Eigen::Index i = 0; i < p; ++i) {
    f.block(0, i * nt, nt, nt) = ar[static_cast<std::size_t>(i)];
  }
  if (p > 1) {
    f.block(nt, 0, (p - 1) * nt, (p - 1) * nt).setIdentity();
  }
  return f;
}

// P = F P F^H + W by the doubling iteration P <- P + A P A^H, A <- A^2.
CMatrix solve_discrete_lyapunov(const CMatrix& f, const CMatrix& w) {
  CMatrix p = w;
  CMatrix a = f;
  for (int iter = 0; iter < 80; ++iter) {
    const CMatrix increment = a * p * a.adjoint();
    p += increment;
    if (increment.norm() <= 1e-17 * p.norm()) {
      return 0.5 * (p + p.adjoint());
    }
    a = a * a;
  }
  throw NumericError("Lyapunov doubling iteration did not converge");
}

CMatrix cholesky_factor(const CMatrix& m, const std::string& what) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ModelError(what + " is not positive definite");
  }
  return llt.matrixL();
}

// Square-root factor that tolerates semidefinite input.
CMatrix psd_factor(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(m);
  const RVector values = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * values.cast<Complex>().asDiagonal();
}

std::vector<double> normalised_scales(const ScaleMixture& mixture) {
  if (mixture.weights.empty() || mixture.weights.size() != mixture.scales.size()) {
    throw ModelError("scale mixture needs matching, non-empty weights and scales");
  }
  double total_weight = 0.0;
  double mean_scale = 0.0;
  for (std::size_t i = 0; i < mixture.weights.size(); ++i) {
    if (!(mixture.weights[i] >= 0.0) || !(mixture.scales[i] > 0.0) ||
        !std::isfinite(mixture.scales[i])) {
      throw ModelError("scale mixture weights must be >= 0 and scales > 0");
    }
    total_weight += mixture.weights[i];
    mean_scale += mixture.weights[i] * mixture.scales[i];
  }
  if (!(total_weight > 0.0)) {
    throw ModelError("scale mixture weights sum to zero");
  }
  mean_scale /= total_weight;
  std::vector<double> out(mixture.scales.size());
  std::transform(mixture.scales.begin(), mixture.scales.end(), out.begin(),
                 [mean_scale](double s) { return s / mean_scale; });
  return out;
}

// Shared AR simulator. `scale_draw` returns the innovation variance
// multiplier for one time step (1 for the Gaussian model).
template <typename ScaleDraw>
CMatrix simulate(const GaussianVectorProcess& process, std::size_t n, std::uint64_t seed,
                 ScaleDraw&& scale_draw) {
  const int nt = process.nt();
  const auto p = process.memory_depth();
  const auto& ar = process.ar_coefficients();
  Engine engine = make_engine(seed, 0);

  auto draw_standard = [&](Eigen::Index size) {
    CVector z(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      z(i) = standard_complex_normal(engine);
    }
    return z;
  };

  // history[j] holds Ht_{t-1-j}
  std::vector<CVector> history(p, CVector::Zero(nt));
  if (p > 0) {
    const CVector state = psd_factor(process.state_covariance()) *
                          draw_standard(static_cast<Eigen::Index>(p) * nt);
    for (std::size_t j = 0; j < p; ++j) {
      history[j] = state.segment(static_cast<Eigen::Index>(j) * nt, nt);
    }
  }
  const CMatrix factor = psd_factor(process.innovation_covariance());

  CMatrix path(nt, static_cast<Eigen::Index>(n));
  const std::size_t total = process.burn_in() + n;
  for (std::size_t t = 0; t < total; ++t) {
    CVector next = std::sqrt(scale_draw(engine)) * (factor * draw_standard(nt));
    for (std::size_t i = 0; i < p; ++i) {
      next.noalias() += ar[i] * history[i];
    }
    if (p > 0) {
      std::rotate(history.rbegin(), history.rbegin() + 1, history.rend());
      history[0] = next;
    }
    if (t >= process.burn_in()) {
      path.col(static_cast<Eigen::Index>(t - process.burn_in())) = next + process.mean();
    }
  }
  return path;
}

}  // namespace

GaussianVectorProcess::GaussianVectorProcess(CVector mean, std::vector<CMatrix> ar_coefficients,
                                             CMatrix innovation_covariance) {
  auto state = std::make_shared<State>();
  const auto nt = mean.size();
  if (nt < 1) {
    throw ModelError("nt must be positive");
  }
  if (!mean.allFinite()) {
    throw ModelError("mean vector has non-finite entries");
  }
  if (innovation_covariance.rows() != nt || innovation_covariance.cols() != nt) {
    throw ModelError("innovation covariance must be nt x nt");
  }
  for (std::size_t i = 0; i < ar_coefficients.size(); ++i) {
    if (ar_coefficients[i].rows() != nt || ar_coefficients[i].cols() != nt) {
      throw ModelError("AR coefficient " + std::to_string(i) + " must be nt x nt");
    }
    if (!ar_coefficients[i].allFinite()) {
      throw ModelError("AR coefficient " + std::to_string(i) + " has non-finite entries");
    }
  }
  require_hermitian(innovation_covariance, "innovation covariance");
  innovation_covariance = 0.5 * (innovation_covariance + innovation_covariance.adjoint()).eval();
  state->innovation_factor = cholesky_factor(innovation_covariance, "innovation covariance");

  const int n = static_cast<int>(nt);
  const auto p = ar_coefficients.size();
  if (p == 0) {
    state->spectral_radius = 0.0;
    state->state_covariance = CMatrix(0, 0);
    state->covariance = innovation_covariance;
  } else {
    const CMatrix f = companion_matrix(ar_coefficients, n);
    Eigen::ComplexEigenSolver<CMatrix> eig(f, false);
    state->spectral_radius = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(state->spectral_radius < 1.0)) {
      std::ostringstream msg;
      msg << "AR model is not stationary: companion spectral radius " << state->spectral_radius
          << " >= 1";
      throw ModelError(msg.str());
    }
    CMatrix w = CMatrix::Zero(f.rows(), f.cols());
    w.topLeftCorner(nt, nt) = innovation_covariance;
    state->state_covariance = solve_discrete_lyapunov(f, w);
    state->covariance = state->state_covariance.topLeftCorner(nt, nt);
    const double depth = static_cast<double>(p);
    const double burn = std::ceil(50.0 * depth / (1.0 - state->spectral_radius));
    state->burn_in = burn >= static_cast<double>(kMaxBurnIn) ? kMaxBurnIn
                                                             : static_cast<std::size_t>(burn);
  }
  cholesky_factor(state->covariance, "stationary covariance");

  state->mean = std::move(mean);
  state->ar = std::move(ar_coefficients);
  state->innovation_covariance = std::move(innovation_covariance);
  state_ = std::move(state);
}

GaussianVectorProcess GaussianVectorProcess::white(CVector mean, CMatrix covariance) {
  return GaussianVectorProcess(std::move(mean), {}, std::move(covariance));
}

GaussianVectorProcess GaussianVectorProcess::spatially_iid_ar1(CVector mean, Complex alpha) {
  const auto nt = mean.size();
  if (!(std::abs(alpha) < 1.0)) {
    throw ModelError("AR(1) coefficient must satisfy |alpha| < 1");
  }
  if (alpha == Complex(0.0)) {
    return white(std::move(mean), CMatrix::Identity(nt, nt));
  }
  const double innovation = 1.0 - std::norm(alpha);
  return GaussianVectorProcess(std::move(mean), {alpha * CMatrix::Identity(nt, nt)},
                               innovation * CMatrix::Identity(nt, nt));
}

int GaussianVectorProcess::nt() const { return static_cast<int>(state_->mean.size()); }
const CVector& GaussianVectorProcess::mean() const { return state_->mean; }
const std::vector<CMatrix>& GaussianVectorProcess::ar_coefficients() const { return state_->ar; }
const CMatrix& GaussianVectorProcess::innovation_covariance() const {
  return state_->innovation_covariance;
}
std::size_t GaussianVectorProcess::memory_depth() const { return state_->ar.size(); }
const CMatrix& GaussianVectorProcess::covariance() const { return state_->covariance; }
const CMatrix& GaussianVectorProcess::state_covariance() const { return state_->state_covariance; }
double GaussianVectorProcess::spectral_radius() const { return state_->spectral_radius; }
std::size_t GaussianVectorProcess::burn_in() const { return state_->burn_in; }

std::vector<CMatrix> GaussianVectorProcess::matrix_autocovariance(std::size_t max_lag) const {
  const int nt = this->nt();
  const auto p = memory_depth();
  std::vector<CMatrix> c;
  c.reserve(max_lag + 1);
  if (p == 0) {
    c.push_back(state_->covariance);
    for (std::size_t k = 1; k <= max_lag; ++k) {
      c.push_back(CMatrix::Zero(nt, nt));
    }
    return c;
  }
  // C(j) for j < p is the (0, j) block of the state covariance.
  for (std::size_t k = 0; k <= max_lag && k < p; ++k) {
    c.push_back(state_->state_covariance.block(0, static_cast<Eigen::Index>(k) * nt, nt, nt));
  }
  // Yule-Walker: C(k) = sum_i A_i C(k - i), with C(-m) = C(m)^H.
  for (std::size_t k = c.size(); k <= max_lag; ++k) {
    CMatrix next = CMatrix::Zero(nt, nt);
    for (std::size_t i = 1; i <= p; ++i) {
      const CMatrix& lagged = i <= k ? c[k - i] : c[i - k];
      if (i <= k) {
        next.noalias() += state_->ar[i - 1] * lagged;
      } else {
        next.noalias() += state_->ar[i - 1] * lagged.adjoint();
      }
    }
    c.push_back(std::move(next));
  }
  return c;
}

CMatrix GaussianVectorProcess::spectral_density(double lambda) const {
  const int nt = this->nt();
  CMatrix poly = CMatrix::Identity(nt, nt);
  for (std::size_t i = 0; i < state_->ar.size(); ++i) {
    poly -= std::polar(1.0, -lambda * static_cast<double>(i + 1)) * state_->ar[i];
  }
  const CMatrix transfer = poly.partialPivLu().inverse();
  return transfer * state_->innovation_covariance * transfer.adjoint();
}

bool GaussianVectorProcess::is_spatially_iid(double tol) const {
  const int nt = this->nt();
  const std::size_t lags = std::max<std::size_t>(8, 2 * memory_depth() + 2);
  const auto c = matrix_autocovariance(lags);
  const double scale = c[0].norm();
  for (const auto& ck : c) {
    const Complex diag = ck.trace() / static_cast<double>(nt);
    if ((ck - diag * CMatrix::Identity(nt, nt)).norm() > tol * scale) {
      return false;
    }
  }
  return true;
}

CMatrix stationary_covariance(const GaussianVectorProcess& process) {
  return process.covariance();
}

GaussianVectorProcess rotate(const GaussianVectorProcess& process, const CMatrix& unitary) {
  const int nt = process.nt();
  if (unitary.rows() != nt || unitary.cols() != nt) {
    throw PreconditionError("rotation must be nt x nt");
  }
  if ((unitary.adjoint() * unitary - CMatrix::Identity(nt, nt)).norm() > 1e-10) {
    throw PreconditionError("rotation matrix is not unitary");
  }
  std::vector<CMatrix> ar;
  ar.reserve(process.memory_depth());
  for (const auto& a : process.ar_coefficients()) {
    ar.push_back(unitary * a * unitary.adjoint());
  }
  return GaussianVectorProcess(unitary * process.mean(), std::move(ar),
                               unitary * process.innovation_covariance() * unitary.adjoint());
}

ScalarProjection::ScalarProjection(GaussianVectorProcess process, CVector direction)
    : process_(std::move(process)), direction_(std::move(direction)) {
  mean_ = process_.mean().transpose() * direction_;
}

double ScalarProjection::variance() const {
  const CVector w = direction_.conjugate();
  return (w.adjoint() * process_.covariance() * w)(0, 0).real();
}

std::vector<Complex> ScalarProjection::autocovariance(std::size_t max_lag) const {
  const CVector w = direction_.conjugate();
  const auto matrices = process_.matrix_autocovariance(max_lag);
  std::vector<Complex> c;
  c.reserve(matrices.size());
  for (const auto& m : matrices) {
    c.push_back((w.adjoint() * m * w)(0, 0));
  }
  c[0] = c[0].real();
  return c;
}

double ScalarProjection::spectral_density(double lambda) const {
  const CVector w = direction_.conjugate();
  return (w.adjoint() * process_.spectral_density(lambda) * w)(0, 0).real();
}

ScalarProjection project(const GaussianVectorProcess& process, const CVector& direction) {
  if (direction.size() != process.nt()) {
    throw PreconditionError("direction length differs from nt");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw PreconditionError("direction is not a unit vector");
  }
  return ScalarProjection(process, direction);
}

CMatrix sample_path(const GaussianVectorProcess& process, std::size_t n, std::uint64_t seed) {
  if (n < 1) {
    throw PreconditionError("sample path length must be >= 1");
  }
  return simulate(process, n, seed, [](Engine&) { return 1.0; });
}

GeneralFadingProcess::GeneralFadingProcess(int nt, Sampler sampler, bool finite_second_moment,
                                           bool finite_entropy_rate, std::string description)
    : nt_(nt),
      sampler_(std::move(sampler)),
      finite_second_moment_(finite_second_moment),
      finite_entropy_rate_(finite_entropy_rate),
      description_(std::move(description)) {
  if (nt_ < 1) {
    throw ModelError("nt must be positive");
  }
  if (!sampler_) {
    throw ModelError("general fading process needs a sampler");
  }
}

GeneralFadingProcess GeneralFadingProcess::from_gaussian(const GaussianVectorProcess& process) {
  return GeneralFadingProcess(
      process.nt(),
      [process](std::size_t n, std::uint64_t seed) { return fading::sample_path(process, n, seed); },
      true, true, "gaussian");
}

GeneralFadingProcess GeneralFadingProcess::ar_scale_mixture(const GaussianVectorProcess& base,
                                                            ScaleMixture mixture) {
  const std::vector<double> scales = normalised_scales(mixture);
  std::vector<double> cumulative(mixture.weights.size());
  std::partial_sum(mixture.weights.begin(), mixture.weights.end(), cumulative.begin());
  const double total = cumulative.back();
  for (auto& c : cumulative) {
    c /= total;
  }
  auto sampler = [base, scales, cumulative](std::size_t n, std::uint64_t seed) {
    if (n < 1) {
      throw PreconditionError("sample path length must be >= 1");
    }
    return simulate(base, n, seed, [&](Engine& engine) {
      const double u = uniform01(engine);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto index = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), scales.size() - 1);
      return scales[index];
    });
  };
  return GeneralFadingProcess(base.nt(), std::move(sampler), true, true, "ar_scale_mixture");
}

void GeneralFadingProcess::require_certificates() const {
  if (!finite_second_moment_) {
    throw ModelError("process lacks the finite-second-moment certificate");
  }
  if (!finite_entropy_rate_) {
    throw ModelError("process lacks the finite-entropy-rate certificate");
  }
}

CMatrix GeneralFadingProcess::sample_path(std::size_t n, std::uint64_t seed) const {
  CMatrix path = sampler_(n, seed);
  if (path.rows() != nt_ || path.cols() != static_cast<Eigen::Index>(n)) {
    throw ModelError("sampler returned a path of the wrong shape");
  }
  return path;
}

CMatrix sample_path(const GeneralFadingProcess& process, std::size_t n, std::uint64_t seed) {
  return process.sample_path(n, seed);
}

}  // namespace fading
