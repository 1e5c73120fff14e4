#include "fading/knn_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <thread>

#include "fading/errors.hpp"
#include "fading/special_functions.hpp"

namespace fading {
namespace {

constexpr std::size_t kLeafSize = 16;
constexpr std::size_t kMinSamples = 1000;

class KdTree {
 public:
  explicit KdTree(const PointSet& points) : points_(points), index_(points.size()) {
    std::iota(index_.begin(), index_.end(), std::size_t{0});
    nodes_.reserve(2 * points.size() / kLeafSize + 2);
    build(0, index_.size());
  }

  // Squared distance from point `query` (itself excluded) to its k-th neighbour.
  double kth_neighbour_sq(std::size_t query, int k) const {
    std::priority_queue<double> heap;
    search(0, query, static_cast<std::size_t>(k), heap);
    return heap.top();
  }

 private:
  struct Node {
    std::size_t begin, end;
    std::size_t axis = 0;
    double split = 0.0;
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) {
      return id;
    }
    const std::size_t dim = points_.dim;
    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t a = 0; a < dim; ++a) {
      double lo = points_.coords[index_[begin] * dim + a];
      double hi = lo;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = points_.coords[index_[i] * dim + a];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        axis = a;
      }
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(index_.begin() + static_cast<std::ptrdiff_t>(begin),
                     index_.begin() + static_cast<std::ptrdiff_t>(mid),
                     index_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       return points_.coords[a * dim + axis] < points_.coords[b * dim + axis];
                     });
    const double split = points_.coords[index_[mid] * dim + axis];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].axis = axis;
    nodes_[static_cast<std::size_t>(id)].split = split;
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void search(int node_id, std::size_t query, std::size_t k, std::priority_queue<double>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    const std::size_t dim = points_.dim;
    const double* q = points_.coords.data() + query * dim;
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t other = index_[i];
        if (other == query) {
          continue;
        }
        const double* p = points_.coords.data() + other * dim;
        double d2 = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
          const double diff = p[a] - q[a];
          d2 += diff * diff;
        }
        if (heap.size() < k) {
          heap.push(d2);
        } else if (d2 < heap.top()) {
          heap.pop();
          heap.push(d2);
        }
      }
      return;
    }
    const double offset = q[node.axis] - node.split;
    const int near = offset < 0.0 ? node.left : node.right;
    const int far = offset < 0.0 ? node.right : node.left;
    search(near, query, k, heap);
    if (heap.size() < k || offset * offset < heap.top()) {
      search(far, query, k, heap);
    }
  }

  const PointSet& points_;
  std::vector<std::size_t> index_;
  std::vector<Node> nodes_;
};

double log_unit_ball_volume(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return 0.5 * d * std::log(kPi) - std::lgamma(0.5 * d + 1.0);
}

PointSet slice(const PointSet& points, std::size_t begin, std::size_t end) {
  PointSet out;
  out.dim = points.dim;
  out.coords.assign(points.coords.begin() + static_cast<std::ptrdiff_t>(begin * points.dim),
                    points.coords.begin() + static_cast<std::ptrdiff_t>(end * points.dim));
  return out;
}

double kl_estimate(const PointSet& points, int k, unsigned workers) {
  const std::size_t n = points.size();
  if (n <= static_cast<std::size_t>(k)) {
    throw EstimationError("kNN entropy needs more than k samples");
  }
  const KdTree tree(points);
  std::vector<double> log_dist(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      log_dist[i] = 0.5 * std::log(tree.kth_neighbour_sq(i, k));
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(n, t * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }
  // Fixed-order reduction: independent of the worker count.
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(log_dist[i])) {
      throw EstimationError("degenerate neighbour distance at sample " + std::to_string(i) +
                            " (duplicated samples)");
    }
    sum += log_dist[i];
  }
  const double dim = static_cast<double>(points.dim);
  return digamma_integer(n) - digamma_integer(static_cast<std::size_t>(k)) +
         log_unit_ball_volume(points.dim) + dim * sum / static_cast<double>(n);
}

void check_inputs(const PointSet& points, const KnnOptions& options) {
  if (points.dim == 0 || points.coords.size() % points.dim != 0) {
    throw PreconditionError("malformed point set");
  }
  if (points.size() < kMinSamples) {
    throw PreconditionError("kNN entropy needs at least 1000 samples");
  }
  if (options.k < 1) {
    throw PreconditionError("kNN entropy needs k >= 1");
  }
  if (options.subsamples < 2) {
    throw PreconditionError("kNN entropy needs at least 2 subsamples");
  }
}

double block_stderr(const std::vector<double>& values) {
  const double b = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / b;
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / (b - 1.0)) / std::sqrt(b);
}

}  // namespace

double knn_entropy_point_estimate(const PointSet& points, int k, unsigned workers) {
  if (points.dim == 0 || points.coords.size() % points.dim != 0) {
    throw PreconditionError("malformed point set");
  }
  if (k < 1) {
    throw PreconditionError("kNN entropy needs k >= 1");
  }
  return kl_estimate(points, k, workers);
}

double digamma_integer(std::size_t n) {
  if (n == 0) {
    throw DomainError("digamma is undefined at 0");
  }
  if (n < 64) {
    double sum = -kEulerGamma;
    for (std::size_t j = 1; j < n; ++j) {
      sum += 1.0 / static_cast<double>(j);
    }
    return sum;
  }
  const double x = static_cast<double>(n);
  const double inv2 = 1.0 / (x * x);
  return std::log(x) - 0.5 / x -
         inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
}

PointSet complex_columns_to_points(const CMatrix& samples) {
  PointSet out;
  out.dim = 2 * static_cast<std::size_t>(samples.rows());
  out.coords.reserve(out.dim * static_cast<std::size_t>(samples.cols()));
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
      out.coords.push_back(samples(i, j).real());
      out.coords.push_back(samples(i, j).imag());
    }
  }
  return out;
}

PointSet complex_scalars_to_points(std::span<const Complex> samples) {
  PointSet out;
  out.dim = 2;
  out.coords.reserve(2 * samples.size());
  for (const Complex& z : samples) {
    out.coords.push_back(z.real());
    out.coords.push_back(z.imag());
  }
  return out;
}

EntropyEstimate knn_differential_entropy(const PointSet& points, const KnnOptions& options) {
  check_inputs(points, options);
  const std::size_t n = points.size();
  const auto blocks = static_cast<std::size_t>(options.subsamples);
  std::vector<double> block_values;
  for (std::size_t b = 0; b < blocks; ++b) {
    const PointSet part = slice(points, b * n / blocks, (b + 1) * n / blocks);
    block_values.push_back(kl_estimate(part, options.k, options.workers));
  }
  return {kl_estimate(points, options.k, options.workers), block_stderr(block_values)};
}

EntropyEstimate knn_differential_entropy(std::span<const Complex> samples,
                                         const KnnOptions& options) {
  return knn_differential_entropy(complex_scalars_to_points(samples), options);
}

EntropyEstimate knn_conditional_entropy(const PointSet& joint, const PointSet& marginal,
                                        const KnnOptions& options) {
  check_inputs(joint, options);
  check_inputs(marginal, options);
  if (joint.size() != marginal.size()) {
    throw PreconditionError("joint and marginal sample counts differ");
  }
  const std::size_t n = joint.size();
  const auto blocks = static_cast<std::size_t>(options.subsamples);
  std::vector<double> block_values;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * n / blocks;
    const std::size_t end = (b + 1) * n / blocks;
    block_values.push_back(kl_estimate(slice(joint, begin, end), options.k, options.workers) -
                           kl_estimate(slice(marginal, begin, end), options.k, options.workers));
  }
  const double value = kl_estimate(joint, options.k, options.workers) -
                       kl_estimate(marginal, options.k, options.workers);
  return {value, block_stderr(block_values)};
}

}  // namespace fading
