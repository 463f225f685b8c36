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

#ifndef MRH_DICTIONARY_HPP_
#define MRH_DICTIONARY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mrh/types.hpp"

namespace mrh {

struct DictionaryTrainConfig {
  int max_em_iters = 100;
  // Stop when the mean per-sample log-likelihood improves by less than this.
  double tol_per_sample = 1e-5;
  double variance_floor = 1e-6;
  double weight_floor = 1e-12;
  int kmeans_max_iters = 25;
};

// The visual dictionary: a Gaussian mixture with diagonal covariances over
// block descriptors. Each component acts as one "visual word"; a descriptor
// is expressed as its vector of component posteriors.
class VisualDictionary {
 public:
  VisualDictionary(Vector weights, Matrix means, Matrix variances);

  int components() const { return static_cast<int>(weights_.size()); }
  int dim() const { return static_cast<int>(means_.rows()); }

  const Vector& weights() const { return weights_; }
  const Matrix& means() const { return means_; }        // dim x components
  const Matrix& variances() const { return variances_; }  // dim x components

  // Posterior probability of each component given one descriptor, computed
  // in log space with max subtraction; entries sum to 1 and stay finite for
  // descriptors arbitrarily far from every component.
  Vector posterior(const Eigen::Ref<const Vector>& feature) const;

  // Batch form: one posterior column per input column.
  Matrix posteriors(const Eigen::Ref<const Matrix>& features) const;

  // Mean per-sample log marginal density. Errors on empty input.
  double log_likelihood(const Eigen::Ref<const Matrix>& features) const;

  // Fits a dictionary to descriptor columns: seeded k-means initialization
  // followed by expectation-maximization with a variance floor; empty
  // components are re-seeded to the worst-modelled sample. Deterministic for
  // a fixed (features, components, seed, config).
  static VisualDictionary train(const Eigen::Ref<const Matrix>& features,
                                int components, std::uint64_t seed,
                                const DictionaryTrainConfig& config = {});

  // Mean per-sample log-likelihood after initialization and after each
  // accepted EM update; non-decreasing.
  const std::vector<double>& training_log_likelihoods() const {
    return training_log_likelihoods_;
  }

  void save(const std::string& path) const;
  static VisualDictionary load(const std::string& path);

 private:
  // log(weight * density) per component (rows) and sample (columns).
  Matrix log_joint(const Eigen::Ref<const Matrix>& features) const;
  void refresh_cached_terms();

  Vector weights_;
  Matrix means_;
  Matrix variances_;
  std::vector<double> training_log_likelihoods_;

  // Cached per-component terms for density evaluation.
  Vector log_weights_;
  Matrix inv_variances_;
  Matrix means_over_var_;
  Vector const_term_;
};

}  // namespace mrh

#endif  // MRH_DICTIONARY_HPP_
