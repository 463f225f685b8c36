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

#ifndef MRH_EVALUATION_HPP_
#define MRH_EVALUATION_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mrh/clustering.hpp"
#include "mrh/dictionary.hpp"
#include "mrh/manifest.hpp"
#include "mrh/selection.hpp"
#include "mrh/types.hpp"

namespace mrh {

// One probe-video-versus-gallery-person comparison; genuine when the
// identities match.
struct Trial {
  std::string probe_person;
  std::string probe_video;
  std::string gallery_person;
  bool genuine = false;
};

struct TrialScore {
  std::string probe_id;  // "<person_id>/<video_id>"
  std::string gallery_person;
  bool genuine = false;
  double distance = 0.0;
};

struct TrialSet {
  std::vector<TrialScore> scores;
};

// Every probe video of every enrolled person against every enrolled person's
// gallery. An enrolled person with probe videos but no enrollment videos is
// an error; persons carrying only training videos do not participate.
std::vector<Trial> generate_trials(const DatasetManifest& manifest);

// (false acceptance rate, false rejection rate) at threshold t: the fraction
// of impostor trials with distance <= t and of genuine trials with
// distance > t. Distance <= t means accept.
std::pair<double, double> far_frr(const TrialSet& trials, double t);

struct ErrorReport {
  double mer = 0.0;
  double threshold_star = 0.0;
  double far_at_star = 0.0;
  double frr_at_star = 0.0;
  std::vector<std::pair<double, double>> far_curve;  // (threshold, rate)
  std::vector<std::pair<double, double>> frr_curve;
  std::size_t genuine_count = 0;
  std::size_t impostor_count = 0;
};

// Minimum over thresholds of (FAR + FRR) / 2. Both error rates are piecewise
// constant between observed scores, so sweeping the distinct scores, the
// midpoints between adjacent distinct scores, and one point beyond each end
// is exact. MER ties resolve to the smallest threshold.
ErrorReport mer(const TrialSet& trials);

// How each video is reduced to its signature set before matching.
enum class PipelineKind {
  kAllFacesAverage,  // one signature: the average over all faces
  kSelection,        // per video: average over the selected faces
  kClustering,       // gallery: cluster centroids; probe: average (or
                     // probe_cluster_k centroids)
  kNaive             // no reduction; every face signature kept
};

std::string to_string(PipelineKind kind);

// Which side of a trial face selection applies to; the other side falls
// back to averaging all faces.
enum class SelectionSide { kBoth, kProbe, kGallery };

std::string to_string(SelectionSide side);
SelectionSide selection_side_from_string(const std::string& name);

struct ProtocolConfig {
  PipelineKind pipeline = PipelineKind::kAllFacesAverage;
  SelectionSpec selection;  // used by kSelection
  SelectionSide selection_side = SelectionSide::kBoth;
  int cluster_k = 1;        // used by kClustering
  GalleryClusterMode cluster_mode = GalleryClusterMode::kMultiple;
  int probe_cluster_k = 0;  // 0 = single average probe signature
  int cohort_count = 32;
  int cluster_max_iter = 20;
  int threads = 1;
};

// Operation counts (hardware-independent cost accounting) plus the published
// per-operation timings they are usually combined with.
struct CostReport {
  std::size_t signature_extractions = 0;  // probe + gallery faces processed
  std::size_t cohort_extractions = 0;
  std::size_t distance_evaluations = 0;   // probe-gallery pairs scored
  std::size_t trial_count = 0;
  double extract_seconds_per_face = 0.390;
  double distance_seconds_per_pair = 0.002;
  // Face count at which naive pairwise matching outgrows extraction:
  // extract_seconds_per_face * N = distance_seconds_per_pair * N^2.
  double break_even_faces() const {
    return extract_seconds_per_face / distance_seconds_per_pair;
  }
};

struct ScoredTrials {
  TrialSet trials;
  CostReport cost;
};

// Scoring core: signature extraction per the configured pipeline, cohort
// construction from training-role videos, and per-trial set distances.
// Deterministic for fixed inputs regardless of thread count.
ScoredTrials score_trials(const DatasetManifest& manifest,
                          const VisualDictionary& dict,
                          const ProtocolConfig& config);

struct ExperimentResult {
  ErrorReport report;
  CostReport cost;
  TrialSet trials;
};

// Full protocol: score_trials followed by the error report.
ExperimentResult run_experiment(const DatasetManifest& manifest,
                                const VisualDictionary& dict,
                                const ProtocolConfig& config);

// CSV rows "probe_id,gallery_person_id,is_genuine,distance".
void write_scores_csv(const std::string& path, const TrialSet& trials);

// Pools the block descriptors of every training-role face, one column per
// descriptor, faces in manifest order (dictionary training input).
Matrix collect_training_features(const DatasetManifest& manifest,
                                 int threads = 1);

}  // namespace mrh

#endif  // MRH_EVALUATION_HPP_
