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

#ifndef MRH_CLUSTERING_HPP_
#define MRH_CLUSTERING_HPP_

#include <string>
#include <vector>

#include "mrh/types.hpp"

namespace mrh {

struct ClusterModel {
  int k = 0;
  std::vector<Signature> centroids;
  std::vector<int> assignments;  // input index -> centroid index
  double objective = 0.0;        // sum of L1 distances to assigned centroids
  // Objective after each accepted assign/update round; non-increasing.
  std::vector<double> objective_history;
  int iterations = 0;
};

// Initial centroids: the signatures at indices floor(i*N/k), i = 0..k-1,
// i.e. faces spaced at regular intervals through the (chronologically
// ordered) input.
std::vector<Signature> seed_clusters(const std::vector<Signature>& signatures,
                                     int k);

// Lloyd k-means under the L1 signature distance. Assignment ties go to the
// lowest centroid index; centroids are updated to the member average; empty
// clusters are repaired by re-seeding on the signature farthest from its
// centroid. Stops when assignments are stable, when the objective fails to
// decrease, or after max_iter rounds. Deterministic.
ClusterModel kmeans_cluster(const std::vector<Signature>& signatures, int k,
                            int max_iter = 20);

enum class GalleryClusterMode { kSingle, kMultiple };

std::string to_string(GalleryClusterMode mode);
GalleryClusterMode cluster_mode_from_string(const std::string& name);

// Gallery representatives from one person's videos. kMultiple clusters the
// concatenation of all videos (k centroids); kSingle clusters each video
// separately (videos * k centroids). Videos keep their given order and
// frames stay chronological within each video.
std::vector<Signature> cluster_gallery(
    const std::vector<std::vector<Signature>>& videos, int k,
    GalleryClusterMode mode, int max_iter = 20);

}  // namespace mrh

#endif  // MRH_CLUSTERING_HPP_
