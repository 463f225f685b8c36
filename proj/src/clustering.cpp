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

#include "mrh/clustering.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "mrh/matching.hpp"
#include "mrh/signature.hpp"

namespace mrh {

std::string to_string(GalleryClusterMode mode) {
  return mode == GalleryClusterMode::kSingle ? "single" : "multiple";
}

GalleryClusterMode cluster_mode_from_string(const std::string& name) {
  if (name == "single") return GalleryClusterMode::kSingle;
  if (name == "multiple") return GalleryClusterMode::kMultiple;
  throw DataError("unknown cluster mode: '" + name + "'");
}

std::vector<Signature> seed_clusters(const std::vector<Signature>& signatures,
                                     int k) {
  const auto n = signatures.size();
  if (k < 1) throw DataError("cluster count must be >= 1");
  if (static_cast<std::size_t>(k) > n) {
    throw DataError("cluster count " + std::to_string(k) +
                    " exceeds signature count " + std::to_string(n));
  }
  std::vector<Signature> seeds;
  seeds.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const std::size_t idx =
        (static_cast<std::size_t>(i) * n) / static_cast<std::size_t>(k);
    seeds.push_back(signatures[idx]);
  }
  return seeds;
}

namespace {

std::vector<int> assign_nearest(const std::vector<Signature>& signatures,
                                const std::vector<Signature>& centroids) {
  std::vector<int> assign(signatures.size());
  for (std::size_t j = 0; j < signatures.size(); ++j) {
    int best = 0;
    double best_d = d_raw(signatures[j], centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double d = d_raw(signatures[j], centroids[c]);
      if (d < best_d) {  // strict: ties keep the lowest centroid index
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    assign[j] = best;
  }
  return assign;
}

// Gives every empty cluster the member currently farthest from its own
// centroid, stealing only from clusters that keep at least one member.
void repair_empty(std::vector<int>& assign,
                  const std::vector<Signature>& signatures,
                  const std::vector<Signature>& centroids, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int a : assign) counts[static_cast<std::size_t>(a)] += 1;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) continue;
    int farthest = -1;
    double farthest_d = -1.0;
    for (std::size_t j = 0; j < signatures.size(); ++j) {
      const int owner = assign[j];
      if (counts[static_cast<std::size_t>(owner)] < 2) continue;
      const double d =
          d_raw(signatures[j], centroids[static_cast<std::size_t>(owner)]);
      if (d > farthest_d) {
        farthest_d = d;
        farthest = static_cast<int>(j);
      }
    }
    // k <= n guarantees a donor cluster with >= 2 members exists.
    assert(farthest >= 0);
    counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(farthest)])] -= 1;
    assign[static_cast<std::size_t>(farthest)] = c;
    counts[static_cast<std::size_t>(c)] = 1;
  }
}

std::vector<Signature> member_averages(const std::vector<Signature>& signatures,
                                       const std::vector<int>& assign, int k) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < assign.size(); ++j) {
    members[static_cast<std::size_t>(assign[j])].push_back(static_cast<int>(j));
  }
  std::vector<Signature> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    centroids.push_back(
        average_signatures(signatures, members[static_cast<std::size_t>(c)]));
  }
  return centroids;
}

double assignment_objective(const std::vector<Signature>& signatures,
                            const std::vector<Signature>& centroids,
                            const std::vector<int>& assign) {
  double sum = 0.0;
  for (std::size_t j = 0; j < signatures.size(); ++j) {
    sum += d_raw(signatures[j], centroids[static_cast<std::size_t>(assign[j])]);
  }
  return sum;
}

}  // namespace

ClusterModel kmeans_cluster(const std::vector<Signature>& signatures, int k,
                            int max_iter) {
  std::vector<Signature> centroids = seed_clusters(signatures, k);

  ClusterModel model;
  model.k = k;
  model.assignments = assign_nearest(signatures, centroids);
  repair_empty(model.assignments, signatures, centroids, k);
  model.centroids = member_averages(signatures, model.assignments, k);
  model.objective =
      assignment_objective(signatures, model.centroids, model.assignments);
  model.objective_history.push_back(model.objective);
  model.iterations = 1;

  while (model.iterations < max_iter) {
    std::vector<int> assign = assign_nearest(signatures, model.centroids);
    if (assign == model.assignments) break;
    repair_empty(assign, signatures, model.centroids, k);
    std::vector<Signature> centroids_next =
        member_averages(signatures, assign, k);
    const double objective_next =
        assignment_objective(signatures, centroids_next, assign);
    model.iterations += 1;
    // The centroid is the member mean while the metric is L1, so descent is
    // not automatic; a round that does not improve the objective is
    // discarded and iteration stops.
    if (objective_next >= model.objective) break;
    model.assignments = std::move(assign);
    model.centroids = std::move(centroids_next);
    model.objective = objective_next;
    model.objective_history.push_back(model.objective);
  }
  return model;
}

std::vector<Signature> cluster_gallery(
    const std::vector<std::vector<Signature>>& videos, int k,
    GalleryClusterMode mode, int max_iter) {
  if (videos.empty()) throw DataError("no videos to cluster");
  for (const auto& v : videos) {
    if (v.empty()) throw DataError("empty video in gallery clustering");
  }

  std::vector<Signature> representatives;
  if (mode == GalleryClusterMode::kMultiple) {
    std::vector<Signature> all;
    for (const auto& v : videos) all.insert(all.end(), v.begin(), v.end());
    if (static_cast<std::size_t>(k) > all.size()) {
      throw DataError("cluster count exceeds total signature count");
    }
    ClusterModel model = kmeans_cluster(all, k, max_iter);
    representatives = std::move(model.centroids);
  } else {
    for (const auto& v : videos) {
      if (static_cast<std::size_t>(k) > v.size()) {
        throw DataError(
            "cluster count exceeds per-video signature count in single mode");
      }
      ClusterModel model = kmeans_cluster(v, k, max_iter);
      representatives.insert(representatives.end(),
                             std::make_move_iterator(model.centroids.begin()),
                             std::make_move_iterator(model.centroids.end()));
    }
  }
  return representatives;
}

}  // namespace mrh
