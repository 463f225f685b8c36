// Copyright 2026  The mrh authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrh/dictionary.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "mrh/rng.hpp"
#include "binary_io.hpp"

namespace mrh {

namespace {

constexpr double kLn2Pi = 1.8378770664093454835606594728112;

// Columns are processed in fixed-size chunks so training memory stays
// bounded for large dictionaries; chunk boundaries are fixed, keeping the
// accumulation order (and hence the result) reproducible.
constexpr Eigen::Index kChunk = 2048;

// Per-column log-sum-exp of a (components x n) log-joint block.
Vector logsumexp_columns(const Matrix& log_joint) {
  const Vector col_max = log_joint.colwise().maxCoeff();
  Vector out(log_joint.cols());
  for (Eigen::Index n = 0; n < log_joint.cols(); ++n) {
    out(n) = col_max(n) +
             std::log((log_joint.col(n).array() - col_max(n)).exp().sum());
  }
  return out;
}

struct KmeansInit {
  Matrix means;      // dim x components
  Matrix variances;  // dim x components
  Vector weights;
};

// Seeded k-means++ followed by Lloyd iterations; used only to initialize the
// mixture, so empty clusters simply keep their previous center.
KmeansInit kmeans_initialize(const Eigen::Ref<const Matrix>& features, int g,
                             Rng& rng, const DictionaryTrainConfig& config) {
  const Eigen::Index dim = features.rows();
  const Eigen::Index n = features.cols();

  Matrix centers(dim, g);
  centers.col(0) = features.col(static_cast<Eigen::Index>(
      rng.next_below(static_cast<std::uint64_t>(n))));
  Vector d2 =
      (features.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
  for (int c = 1; c < g; ++c) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      const double u = rng.next_double() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2(i);
        if (cum > u) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(
          rng.next_below(static_cast<std::uint64_t>(n)));
    }
    centers.col(c) = features.col(pick);
    d2 = d2.cwiseMin(
        (features.colwise() - centers.col(c)).colwise().squaredNorm().transpose());
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < config.kmeans_max_iters; ++iter) {
    const Matrix dots = centers.transpose() * features;  // g x n
    const Vector c2 = centers.colwise().squaredNorm();
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = c2(0) - 2.0 * dots(0, i);
      for (int c = 1; c < g; ++c) {
        const double d = c2(c) - 2.0 * dots(c, i);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Matrix sums = Matrix::Zero(dim, g);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(g);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(assign[static_cast<std::size_t>(i)]) += features.col(i);
      counts(assign[static_cast<std::size_t>(i)]) += 1;
    }
    for (int c = 0; c < g; ++c) {
      if (counts(c) > 0) {
        centers.col(c) = sums.col(c) / static_cast<double>(counts(c));
      }
    }
  }

  const Vector global_mean = features.rowwise().mean();
  Vector global_var =
      ((features.colwise() - global_mean).array().square().rowwise().sum() /
       static_cast<double>(n))
          .matrix();
  global_var = global_var.cwiseMax(config.variance_floor);

  KmeansInit init;
  init.means = centers;
  init.variances = Matrix(dim, g);
  init.weights = Vector(g);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(g);
  Matrix sq_sums = Matrix::Zero(dim, g);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = assign[static_cast<std::size_t>(i)];
    counts(c) += 1;
    sq_sums.col(c) += (features.col(i) - centers.col(c)).array().square().matrix();
  }
  for (int c = 0; c < g; ++c) {
    if (counts(c) >= 2) {
      init.variances.col(c) = (sq_sums.col(c) / static_cast<double>(counts(c)))
                                  .cwiseMax(config.variance_floor);
    } else {
      init.variances.col(c) = global_var;
    }
    init.weights(c) = std::max(static_cast<double>(counts(c)) /
                                   static_cast<double>(n),
                               config.weight_floor);
  }
  init.weights /= init.weights.sum();
  return init;
}

}  // namespace

VisualDictionary::VisualDictionary(Vector weights, Matrix means,
                                   Matrix variances)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      variances_(std::move(variances)) {
  const auto g = weights_.size();
  if (g < 1 || means_.cols() != g || variances_.cols() != g ||
      means_.rows() != variances_.rows() || means_.rows() < 1) {
    throw DataError("inconsistent dictionary shapes");
  }
  if ((weights_.array() <= 0.0).any() ||
      std::abs(weights_.sum() - 1.0) > 1e-9) {
    throw DataError("dictionary weights must be positive and sum to 1");
  }
  if ((variances_.array() <= 0.0).any()) {
    throw DataError("dictionary variances must be positive");
  }
  refresh_cached_terms();
}

void VisualDictionary::refresh_cached_terms() {
  log_weights_ = weights_.array().log();
  inv_variances_ = variances_.array().inverse();
  means_over_var_ = (means_.array() * inv_variances_.array()).matrix();
  const_term_ = ((means_.array().square() * inv_variances_.array()) +
                 variances_.array().log())
                    .colwise()
                    .sum()
                    .transpose();
  const_term_.array() += static_cast<double>(dim()) * kLn2Pi;
}

Matrix VisualDictionary::log_joint(
    const Eigen::Ref<const Matrix>& features) const {
  if (features.rows() != dim()) {
    throw DataError("feature dimension mismatch with dictionary");
  }
  Matrix quad = inv_variances_.transpose() * features.array().square().matrix();
  quad.noalias() -= 2.0 * means_over_var_.transpose() * features;
  quad.colwise() += const_term_;
  quad *= -0.5;
  quad.colwise() += log_weights_;
  return quad;
}

Vector VisualDictionary::posterior(
    const Eigen::Ref<const Vector>& feature) const {
  const Matrix lj = log_joint(feature);
  const double m = lj.maxCoeff();
  Vector p = (lj.array() - m).exp();
  return p / p.sum();
}

Matrix VisualDictionary::posteriors(
    const Eigen::Ref<const Matrix>& features) const {
  Matrix lj = log_joint(features);
  for (Eigen::Index n = 0; n < lj.cols(); ++n) {
    const double m = lj.col(n).maxCoeff();
    lj.col(n) = (lj.col(n).array() - m).exp();
    lj.col(n) /= lj.col(n).sum();
  }
  return lj;
}

double VisualDictionary::log_likelihood(
    const Eigen::Ref<const Matrix>& features) const {
  if (features.cols() == 0) throw DataError("empty feature set");
  double sum = 0.0;
  for (Eigen::Index start = 0; start < features.cols(); start += kChunk) {
    const Eigen::Index len = std::min(kChunk, features.cols() - start);
    sum += logsumexp_columns(log_joint(features.middleCols(start, len))).sum();
  }
  return sum / static_cast<double>(features.cols());
}

VisualDictionary VisualDictionary::train(
    const Eigen::Ref<const Matrix>& features, int components,
    std::uint64_t seed, const DictionaryTrainConfig& config) {
  const Eigen::Index dim = features.rows();
  const Eigen::Index n = features.cols();
  if (components < 1) throw DataError("component count must be >= 1");
  if (n < 10LL * components) {
    throw DataError("too few samples: need at least 10 per component, got " +
                    std::to_string(n) + " for " + std::to_string(components));
  }
  if (!features.allFinite()) throw DataError("non-finite features");

  Rng rng(seed);
  KmeansInit init = kmeans_initialize(features, components, rng, config);
  VisualDictionary dict(std::move(init.weights), std::move(init.means),
                        std::move(init.variances));

  const Vector global_mean = features.rowwise().mean();
  const Vector global_var =
      ((features.colwise() - global_mean).array().square().rowwise().sum() /
       static_cast<double>(n))
          .matrix()
          .cwiseMax(config.variance_floor);

  double prev_ll = dict.log_likelihood(features);
  dict.training_log_likelihoods_.push_back(prev_ll);

  for (int iter = 0; iter < config.max_em_iters; ++iter) {
    // Accumulated E-step statistics, chunk by chunk in fixed order.
    Vector occupancy = Vector::Zero(components);
    Matrix sum_f = Matrix::Zero(dim, components);
    Matrix sum_f2 = Matrix::Zero(dim, components);
    double worst_ll = std::numeric_limits<double>::infinity();
    Eigen::Index worst_idx = 0;
    for (Eigen::Index start = 0; start < n; start += kChunk) {
      const Eigen::Index len = std::min(kChunk, n - start);
      const auto chunk = features.middleCols(start, len);
      Matrix lj = dict.log_joint(chunk);
      const Vector ll = logsumexp_columns(lj);
      for (Eigen::Index i = 0; i < len; ++i) {
        lj.col(i) = (lj.col(i).array() - ll(i)).exp();
        if (ll(i) < worst_ll) {
          worst_ll = ll(i);
          worst_idx = start + i;
        }
      }
      occupancy += lj.rowwise().sum();
      sum_f.noalias() += chunk * lj.transpose();
      sum_f2.noalias() += chunk.array().square().matrix() * lj.transpose();
    }

    Vector new_weights(components);
    Matrix new_means(dim, components);
    Matrix new_vars(dim, components);
    for (int c = 0; c < components; ++c) {
      if (occupancy(c) < 1e-8) {
        // Dead component: restart it on the sample the mixture currently
        // explains worst.
        new_means.col(c) = features.col(worst_idx);
        new_vars.col(c) = global_var;
        new_weights(c) = 1.0 / static_cast<double>(n);
        continue;
      }
      new_weights(c) = occupancy(c) / static_cast<double>(n);
      new_means.col(c) = sum_f.col(c) / occupancy(c);
      new_vars.col(c) = (sum_f2.col(c) / occupancy(c) -
                         new_means.col(c).array().square().matrix())
                            .cwiseMax(config.variance_floor);
    }
    new_weights = new_weights.cwiseMax(config.weight_floor);
    new_weights /= new_weights.sum();

    VisualDictionary updated(std::move(new_weights), std::move(new_means),
                             std::move(new_vars));
    const double ll = updated.log_likelihood(features);
    if (ll < prev_ll - 1e-12) {
      // Flooring or re-seeding can in principle push the likelihood down;
      // keep the better previous model.
      break;
    }
    updated.training_log_likelihoods_ = dict.training_log_likelihoods_;
    updated.training_log_likelihoods_.push_back(ll);
    dict = std::move(updated);
    if (ll - prev_ll < config.tol_per_sample) break;
    prev_ll = ll;
  }
  return dict;
}

void VisualDictionary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write dictionary: " + path);
  out.write("MRHD", 4);
  detail::write_u32_le(out, static_cast<std::uint32_t>(components()));
  detail::write_u32_le(out, static_cast<std::uint32_t>(dim()));
  for (int c = 0; c < components(); ++c) detail::write_f64_le(out, weights_(c));
  for (int c = 0; c < components(); ++c) {
    for (int d = 0; d < dim(); ++d) detail::write_f64_le(out, means_(d, c));
  }
  for (int c = 0; c < components(); ++c) {
    for (int d = 0; d < dim(); ++d) detail::write_f64_le(out, variances_(d, c));
  }
  if (!out) throw DataError("I/O failure writing " + path);
}

VisualDictionary VisualDictionary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dictionary: " + path);
  detail::expect_magic(in, "MRHD", path);
  const auto g = detail::read_u32_le(in, path);
  const auto d = detail::read_u32_le(in, path);
  if (g == 0 || d == 0 || g > (1u << 24) || d > (1u << 16)) {
    throw DataError("implausible dictionary header in " + path);
  }
  Vector weights(g);
  Matrix means(d, g);
  Matrix variances(d, g);
  for (std::uint32_t c = 0; c < g; ++c) {
    weights(c) = detail::read_f64_le(in, path);
  }
  for (std::uint32_t c = 0; c < g; ++c) {
    for (std::uint32_t i = 0; i < d; ++i) {
      means(i, c) = detail::read_f64_le(in, path);
    }
  }
  for (std::uint32_t c = 0; c < g; ++c) {
    for (std::uint32_t i = 0; i < d; ++i) {
      variances(i, c) = detail::read_f64_le(in, path);
    }
  }
  return VisualDictionary(std::move(weights), std::move(means),
                          std::move(variances));
}

}  // namespace mrh
