#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fading/types.hpp"

namespace fading {

/// Row-major set of points in R^dim.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> coords;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

/// Each column of `samples` becomes one point; every complex coordinate
/// contributes its real and imaginary part.
PointSet complex_columns_to_points(const CMatrix& samples);
PointSet complex_scalars_to_points(std::span<const Complex> samples);

struct KnnOptions {
  int k = 4;
  /// Contiguous blocks used for the subsampling standard error.
  int subsamples = 10;
  unsigned workers = 1;
};

struct EntropyEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Kozachenko-Leonenko estimate in nats with the digamma bias correction,
///
///   h = psi(N) - psi(k) + log V_D + (D / N) sum_i log eps_i,
///
/// eps_i the Euclidean distance to the k-th neighbour. The standard error is
/// the spread of the estimate over `subsamples` contiguous blocks divided by
/// sqrt(subsamples). Requires N >= 1000 and k >= 1; throws EstimationError
/// when a neighbour distance is zero (duplicated samples).
EntropyEstimate knn_differential_entropy(const PointSet& points, const KnnOptions& options = {});
EntropyEstimate knn_differential_entropy(std::span<const Complex> samples,
                                         const KnnOptions& options = {});

/// h(joint) - h(marginal) with matched k, blockwise so the standard error
/// accounts for the correlation between the two terms. `marginal` must hold
/// the same samples as `joint` restricted to a subset of coordinates.
EntropyEstimate knn_conditional_entropy(const PointSet& joint, const PointSet& marginal,
                                        const KnnOptions& options = {});

/// The estimate alone, without subsampling.
double knn_entropy_point_estimate(const PointSet& points, int k, unsigned workers = 1);

/// Digamma at a positive integer.
double digamma_integer(std::size_t n);

}  // namespace fading
