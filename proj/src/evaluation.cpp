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

#include "mrh/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "mrh/align.hpp"
#include "mrh/image.hpp"
#include "mrh/matching.hpp"
#include "mrh/parallel.hpp"
#include "mrh/signature.hpp"

namespace mrh {

std::string to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::kAllFacesAverage:
      return "all-faces-average";
    case PipelineKind::kSelection:
      return "selection";
    case PipelineKind::kClustering:
      return "clustering";
    case PipelineKind::kNaive:
      return "naive";
  }
  return "all-faces-average";
}

namespace {

bool has_role(const PersonEntry& person, VideoRole role) {
  for (const auto& v : person.videos) {
    if (v.role == role) return true;
  }
  return false;
}

bool in_protocol(const PersonEntry& person) {
  return has_role(person, VideoRole::kEnroll) ||
         has_role(person, VideoRole::kProbe);
}

}  // namespace

std::vector<Trial> generate_trials(const DatasetManifest& manifest) {
  std::vector<const PersonEntry*> protocol_persons;
  for (const auto& person : manifest.persons) {
    if (!in_protocol(person)) continue;
    if (!has_role(person, VideoRole::kEnroll)) {
      throw DataError("person '" + person.person_id +
                      "' has probe videos but no enrollment videos");
    }
    protocol_persons.push_back(&person);
  }
  if (protocol_persons.size() < 2) {
    throw DataError("protocol needs at least 2 enrolled persons");
  }

  std::vector<Trial> trials;
  for (const PersonEntry* probe_person : protocol_persons) {
    for (const auto& video : probe_person->videos) {
      if (video.role != VideoRole::kProbe) continue;
      for (const PersonEntry* gallery_person : protocol_persons) {
        trials.push_back(Trial{probe_person->person_id, video.video_id,
                               gallery_person->person_id,
                               probe_person->person_id ==
                                   gallery_person->person_id});
      }
    }
  }
  return trials;
}

std::pair<double, double> far_frr(const TrialSet& trials, double t) {
  std::size_t genuine = 0, impostor = 0, false_accept = 0, false_reject = 0;
  for (const auto& s : trials.scores) {
    if (s.genuine) {
      genuine += 1;
      if (s.distance > t) false_reject += 1;
    } else {
      impostor += 1;
      if (s.distance <= t) false_accept += 1;
    }
  }
  if (genuine == 0 || impostor == 0) {
    throw DataError("need both genuine and impostor trials");
  }
  return {static_cast<double>(false_accept) / static_cast<double>(impostor),
          static_cast<double>(false_reject) / static_cast<double>(genuine)};
}

ErrorReport mer(const TrialSet& trials) {
  std::vector<double> genuine, impostor;
  for (const auto& s : trials.scores) {
    (s.genuine ? genuine : impostor).push_back(s.distance);
  }
  if (genuine.empty() || impostor.empty()) {
    throw DataError("need both genuine and impostor trials");
  }
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> distinct;
  distinct.reserve(genuine.size() + impostor.size());
  std::merge(genuine.begin(), genuine.end(), impostor.begin(), impostor.end(),
             std::back_inserter(distinct));
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());

  std::vector<double> candidates;
  candidates.reserve(2 * distinct.size() + 1);
  candidates.push_back(distinct.front() - 1.0);
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    candidates.push_back(distinct[i]);
    if (i + 1 < distinct.size()) {
      candidates.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    }
  }
  candidates.push_back(distinct.back() + 1.0);

  const double n_gen = static_cast<double>(genuine.size());
  const double n_imp = static_cast<double>(impostor.size());
  auto rates_at = [&](double t) -> std::pair<double, double> {
    const auto accepted_imp =
        std::upper_bound(impostor.begin(), impostor.end(), t) -
        impostor.begin();
    const auto accepted_gen =
        std::upper_bound(genuine.begin(), genuine.end(), t) - genuine.begin();
    return {static_cast<double>(accepted_imp) / n_imp,
            (n_gen - static_cast<double>(accepted_gen)) / n_gen};
  };

  ErrorReport report;
  report.genuine_count = genuine.size();
  report.impostor_count = impostor.size();
  report.mer = std::numeric_limits<double>::infinity();
  for (double t : candidates) {
    const auto [far, frr] = rates_at(t);
    report.far_curve.emplace_back(t, far);
    report.frr_curve.emplace_back(t, frr);
    const double half = 0.5 * (far + frr);
    if (half < report.mer) {  // strict: ties keep the smallest threshold
      report.mer = half;
      report.threshold_star = t;
      report.far_at_star = far;
      report.frr_at_star = frr;
    }
  }
  return report;
}

std::string to_string(SelectionSide side) {
  switch (side) {
    case SelectionSide::kBoth:
      return "both";
    case SelectionSide::kProbe:
      return "probe";
    case SelectionSide::kGallery:
      return "gallery";
  }
  return "both";
}

SelectionSide selection_side_from_string(const std::string& name) {
  if (name == "both") return SelectionSide::kBoth;
  if (name == "probe") return SelectionSide::kProbe;
  if (name == "gallery") return SelectionSide::kGallery;
  throw DataError("unknown selection side: '" + name + "'");
}

namespace {

// Keyed by (person index, video index) into the manifest.
struct VideoKey {
  std::size_t person;
  std::size_t video;
  bool operator==(const VideoKey&) const = default;
};

struct VideoKeyHash {
  std::size_t operator()(const VideoKey& k) const {
    return k.person * 1000003u + k.video;
  }
};

using VideoSignatures =
    std::unordered_map<VideoKey, std::vector<Signature>, VideoKeyHash>;

struct ExtractionJob {
  VideoKey key;
  std::size_t slot;        // index into the video's signature vector
  const FaceRecord* face;
};

bool selection_applies(const ProtocolConfig& config, VideoRole role) {
  if (config.pipeline != PipelineKind::kSelection) return false;
  if (config.selection_side == SelectionSide::kBoth) return true;
  return (role == VideoRole::kProbe) ==
         (config.selection_side == SelectionSide::kProbe);
}

// Which faces of a video the pipeline actually consumes (and therefore
// extracts): the selection subset where selection applies, all faces
// otherwise.
std::vector<int> faces_to_extract(const VideoEntry& video,
                                  const ProtocolConfig& config) {
  if (selection_applies(config, video.role)) {
    return select_faces(video, config.selection).indices;
  }
  const int n = static_cast<int>(video.frames.size());
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  return all;
}

Signature extract_face_signature(const DatasetManifest& manifest,
                                 const FaceRecord& face,
                                 const VisualDictionary& dict) {
  const Image image = load_image(resolve_image_path(manifest, face));
  const auto [left, right] = effective_eyes(face);
  return compute_mrh(align_crop(image, left, right), dict);
}

}  // namespace

ScoredTrials score_trials(const DatasetManifest& manifest,
                          const VisualDictionary& dict,
                          const ProtocolConfig& config) {
  if (config.cohort_count < 1) {
    throw DataError("cohort count must be >= 1");
  }
  ScoredTrials result;

  // Validates the protocol structure up front, before any extraction work.
  const std::vector<Trial> trials = generate_trials(manifest);

  // Gather extraction jobs for every video the protocol touches.
  VideoSignatures video_sigs;
  std::vector<ExtractionJob> jobs;
  for (std::size_t pi = 0; pi < manifest.persons.size(); ++pi) {
    const auto& person = manifest.persons[pi];
    if (!in_protocol(person)) continue;
    for (std::size_t vi = 0; vi < person.videos.size(); ++vi) {
      const auto& video = person.videos[vi];
      if (video.role == VideoRole::kTrain) continue;
      const VideoKey key{pi, vi};
      const std::vector<int> indices = faces_to_extract(video, config);
      auto& slots = video_sigs[key];
      slots.resize(indices.size());
      for (std::size_t s = 0; s < indices.size(); ++s) {
        jobs.push_back(ExtractionJob{
            key, s, &video.frames[static_cast<std::size_t>(indices[s])]});
      }
    }
  }
  parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
    const auto& job = jobs[i];
    video_sigs.at(job.key)[job.slot] =
        extract_face_signature(manifest, *job.face, dict);
  });
  result.cost.signature_extractions = jobs.size();

  // Cohorts: the first training face of each training person, in manifest
  // order, up to the configured count.
  CohortSet cohorts;
  for (const auto& person : manifest.persons) {
    if (static_cast<int>(cohorts.cohorts.size()) >= config.cohort_count) break;
    for (const auto& video : person.videos) {
      if (video.role != VideoRole::kTrain || video.frames.empty()) continue;
      cohorts.cohorts.push_back(
          extract_face_signature(manifest, video.frames.front(), dict));
      break;
    }
  }
  if (cohorts.cohorts.empty()) {
    throw DataError("no training-role videos available for cohorts");
  }
  result.cost.cohort_extractions = cohorts.cohorts.size();

  // Reduce each gallery and probe to its signature set.
  std::unordered_map<std::string, std::vector<Signature>> galleries;
  std::vector<std::pair<const PersonEntry*, const VideoEntry*>> probe_videos;
  std::unordered_map<std::string, std::vector<Signature>> probe_reps;

  for (std::size_t pi = 0; pi < manifest.persons.size(); ++pi) {
    const auto& person = manifest.persons[pi];
    if (!in_protocol(person)) continue;

    std::vector<std::vector<Signature>> enroll_videos;
    for (std::size_t vi = 0; vi < person.videos.size(); ++vi) {
      const auto& video = person.videos[vi];
      if (video.role == VideoRole::kEnroll) {
        enroll_videos.push_back(video_sigs.at(VideoKey{pi, vi}));
      }
    }

    std::vector<Signature> gallery;
    switch (config.pipeline) {
      case PipelineKind::kAllFacesAverage: {
        std::vector<Signature> all;
        for (const auto& v : enroll_videos) {
          all.insert(all.end(), v.begin(), v.end());
        }
        gallery.push_back(average_signatures(all));
        break;
      }
      case PipelineKind::kSelection: {
        for (const auto& v : enroll_videos) {
          gallery.push_back(average_signatures(v));
        }
        break;
      }
      case PipelineKind::kClustering: {
        gallery = cluster_gallery(enroll_videos, config.cluster_k,
                                  config.cluster_mode, config.cluster_max_iter);
        break;
      }
      case PipelineKind::kNaive: {
        for (const auto& v : enroll_videos) {
          gallery.insert(gallery.end(), v.begin(), v.end());
        }
        break;
      }
    }
    galleries[person.person_id] = std::move(gallery);

    for (std::size_t vi = 0; vi < person.videos.size(); ++vi) {
      const auto& video = person.videos[vi];
      if (video.role != VideoRole::kProbe) continue;
      const auto& sigs = video_sigs.at(VideoKey{pi, vi});
      std::vector<Signature> reps;
      if (config.pipeline == PipelineKind::kNaive) {
        reps = sigs;
      } else if (config.pipeline == PipelineKind::kClustering &&
                 config.probe_cluster_k > 0) {
        reps = kmeans_cluster(sigs, config.probe_cluster_k,
                              config.cluster_max_iter)
                   .centroids;
      } else {
        reps.push_back(average_signatures(sigs));
      }
      probe_reps[person.person_id + "/" + video.video_id] = std::move(reps);
      probe_videos.emplace_back(&person, &video);
    }
  }

  // Score every trial; slot-per-trial writes keep the result independent of
  // the thread count.
  result.trials.scores.resize(trials.size());
  std::vector<std::size_t> pair_counts(trials.size(), 0);
  parallel_for(trials.size(), config.threads, [&](std::size_t i) {
    const Trial& trial = trials[i];
    const std::string probe_id = trial.probe_person + "/" + trial.probe_video;
    const auto& probe = probe_reps.at(probe_id);
    const auto& gallery = galleries.at(trial.gallery_person);
    pair_counts[i] = probe.size() * gallery.size();
    result.trials.scores[i] =
        TrialScore{probe_id, trial.gallery_person, trial.genuine,
                   set_distance(probe, gallery, cohorts)};
  });
  for (std::size_t c : pair_counts) result.cost.distance_evaluations += c;
  result.cost.trial_count = trials.size();
  return result;
}

ExperimentResult run_experiment(const DatasetManifest& manifest,
                                const VisualDictionary& dict,
                                const ProtocolConfig& config) {
  ScoredTrials scored = score_trials(manifest, dict, config);
  ExperimentResult result;
  result.report = mer(scored.trials);
  result.cost = scored.cost;
  result.trials = std::move(scored.trials);
  return result;
}

Matrix collect_training_features(const DatasetManifest& manifest,
                                 int threads) {
  std::vector<const FaceRecord*> faces;
  for (const auto& person : manifest.persons) {
    for (const auto& video : person.videos) {
      if (video.role != VideoRole::kTrain) continue;
      for (const auto& rec : video.frames) faces.push_back(&rec);
    }
  }
  if (faces.empty()) {
    throw DataError("no training-role videos in manifest");
  }

  const RegionLayout layout;
  std::vector<Matrix> per_face(faces.size());
  parallel_for(faces.size(), threads, [&](std::size_t i) {
    const Image image =
        load_image(resolve_image_path(manifest, *faces[i]));
    const auto [left, right] = effective_eyes(*faces[i]);
    const auto regions = face_features(align_crop(image, left, right), layout);
    Eigen::Index cols = 0;
    for (const auto& r : regions) cols += r.cols();
    Matrix all(kFeatureDim, cols);
    Eigen::Index at = 0;
    for (const auto& r : regions) {
      all.middleCols(at, r.cols()) = r;
      at += r.cols();
    }
    per_face[i] = std::move(all);
  });

  Eigen::Index total = 0;
  for (const auto& m : per_face) total += m.cols();
  Matrix features(kFeatureDim, total);
  Eigen::Index at = 0;
  for (const auto& m : per_face) {
    features.middleCols(at, m.cols()) = m;
    at += m.cols();
  }
  return features;
}

void write_scores_csv(const std::string& path, const TrialSet& trials) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write scores: " + path);
  out << "probe_id,gallery_person_id,is_genuine,distance\n";
  char buf[64];
  for (const auto& s : trials.scores) {
    std::snprintf(buf, sizeof(buf), "%.17g", s.distance);
    out << s.probe_id << "," << s.gallery_person << ","
        << (s.genuine ? 1 : 0) << "," << buf << "\n";
  }
  if (!out) throw DataError("I/O failure writing " + path);
}

}  // namespace mrh
