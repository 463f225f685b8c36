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

// Command-line front-end: synth, train-dict, extract, select, cluster,
// match, evaluate. Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrh/align.hpp"
#include "mrh/clustering.hpp"
#include "mrh/dictionary.hpp"
#include "mrh/evaluation.hpp"
#include "mrh/image.hpp"
#include "mrh/manifest.hpp"
#include "mrh/matching.hpp"
#include "mrh/parallel.hpp"
#include "mrh/selection.hpp"
#include "mrh/signature.hpp"
#include "mrh/synth.hpp"
#include "mrh/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Options shared by the match and evaluate subcommands.
struct PipelineOptions {
  std::string manifest_path;
  std::string dict_path;
  bool all_faces_average = false;
  bool naive = false;
  std::string select_method;
  int select_m = 0;
  std::string select_side = "both";
  int cluster_k = 0;
  std::string cluster_mode = "multiple";
  int probe_cluster_k = 0;
  int cohorts = 32;
  int max_iter = 20;
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& opts) {
  cmd->add_option("--manifest", opts.manifest_path, "Dataset manifest (JSON)")
      ->required();
  cmd->add_option("--dict", opts.dict_path, "Visual dictionary file")
      ->required();
  cmd->add_flag("--all-faces-average", opts.all_faces_average,
                "Average all faces per video/gallery into one signature");
  cmd->add_flag("--naive", opts.naive,
                "Keep every face signature (no reduction; pairwise matching)");
  cmd->add_option("--select-method", opts.select_method,
                  "Face selection method")
      ->check(CLI::IsMember({"sequential", "random", "confidence"}));
  cmd->add_option("--select-m", opts.select_m, "Faces to select per video")
      ->check(CLI::Range(1, 1000000));
  cmd->add_option("--select-side", opts.select_side,
                  "Apply selection to probe videos, gallery videos, or both")
      ->check(CLI::IsMember({"both", "probe", "gallery"}))
      ->capture_default_str();
  cmd->add_option("--cluster-k", opts.cluster_k, "Cluster count per gallery")
      ->check(CLI::Range(1, 1000000));
  cmd->add_option("--cluster-mode", opts.cluster_mode,
                  "Cluster within each video or across a person's videos")
      ->check(CLI::IsMember({"single", "multiple"}));
  cmd->add_option("--probe-cluster-k", opts.probe_cluster_k,
                  "Cluster probe videos too (0 = single average signature)")
      ->check(CLI::Range(0, 1000000));
  cmd->add_option("--cohorts", opts.cohorts, "Cohort signature count")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd->add_option("--max-iter", opts.max_iter, "k-means iteration cap")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Seed for random selection")
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads, "Worker thread cap")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
}

mrh::ProtocolConfig resolve_pipeline(const PipelineOptions& opts) {
  int chosen = 0;
  chosen += opts.all_faces_average ? 1 : 0;
  chosen += opts.naive ? 1 : 0;
  chosen += opts.select_method.empty() ? 0 : 1;
  chosen += opts.cluster_k > 0 ? 1 : 0;
  if (chosen > 1) {
    throw CLI::ValidationError(
        "pipeline",
        "choose one of --all-faces-average, --naive, --select-method, "
        "--cluster-k");
  }
  mrh::ProtocolConfig config;
  if (opts.naive) {
    config.pipeline = mrh::PipelineKind::kNaive;
  } else if (!opts.select_method.empty()) {
    config.pipeline = mrh::PipelineKind::kSelection;
    config.selection.method =
        mrh::selection_method_from_string(opts.select_method);
    config.selection.m = opts.select_m > 0 ? opts.select_m : 1;
    config.selection.seed = opts.seed;
    config.selection_side = mrh::selection_side_from_string(opts.select_side);
  } else if (opts.cluster_k > 0) {
    config.pipeline = mrh::PipelineKind::kClustering;
    config.cluster_k = opts.cluster_k;
    config.cluster_mode = mrh::cluster_mode_from_string(opts.cluster_mode);
    config.probe_cluster_k = opts.probe_cluster_k;
  } else {
    config.pipeline = mrh::PipelineKind::kAllFacesAverage;
  }
  config.cohort_count = opts.cohorts;
  config.cluster_max_iter = opts.max_iter;
  config.threads = opts.threads;
  return config;
}

json pipeline_config_json(const PipelineOptions& opts,
                          const mrh::ProtocolConfig& config) {
  json j;
  j["manifest"] = opts.manifest_path;
  j["dict"] = opts.dict_path;
  j["pipeline"] = mrh::to_string(config.pipeline);
  if (config.pipeline == mrh::PipelineKind::kSelection) {
    j["select_method"] = mrh::to_string(config.selection.method);
    j["select_m"] = config.selection.m;
    j["select_side"] = mrh::to_string(config.selection_side);
    j["seed"] = config.selection.seed;
  }
  if (config.pipeline == mrh::PipelineKind::kClustering) {
    j["cluster_k"] = config.cluster_k;
    j["cluster_mode"] = mrh::to_string(config.cluster_mode);
    j["probe_cluster_k"] = config.probe_cluster_k;
  }
  // The thread cap is deliberately not echoed: results are independent of
  // it, so reports stay byte-identical across --threads settings.
  j["cohorts"] = config.cohort_count;
  j["max_iter"] = config.cluster_max_iter;
  return j;
}

json cost_json(const mrh::CostReport& cost) {
  return json{{"signature_extractions", cost.signature_extractions},
              {"cohort_extractions", cost.cohort_extractions},
              {"distance_evaluations", cost.distance_evaluations},
              {"trial_count", cost.trial_count},
              {"extract_seconds_per_face", cost.extract_seconds_per_face},
              {"distance_seconds_per_pair", cost.distance_seconds_per_pair},
              {"break_even_faces", cost.break_even_faces()}};
}

json report_json(const mrh::ErrorReport& report) {
  json far = json::array();
  for (const auto& [t, r] : report.far_curve) far.push_back({t, r});
  json frr = json::array();
  for (const auto& [t, r] : report.frr_curve) frr.push_back({t, r});
  return json{{"mer", report.mer},
              {"threshold_star", report.threshold_star},
              {"far_at_star", report.far_at_star},
              {"frr_at_star", report.frr_at_star},
              {"trial_counts",
               {{"genuine", report.genuine_count},
                {"impostor", report.impostor_count},
                {"total", report.genuine_count + report.impostor_count}}},
              {"far_curve", far},
              {"frr_curve", frr}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw mrh::DataError("cannot write " + path);
  out << text;
  if (!out) throw mrh::DataError("I/O failure writing " + path);
}

std::string report_csv(const json& report) {
  std::string csv;
  for (const auto& [key, value] : report.items()) {
    if (key == "far_curve" || key == "frr_curve" || key == "config" ||
        key == "trial_counts" || key == "cost") {
      continue;
    }
    csv += key + "," + value.dump() + "\n";
  }
  for (const char* section : {"config", "trial_counts", "cost"}) {
    if (!report.contains(section)) continue;
    for (const auto& [key, value] : report[section].items()) {
      csv += std::string(section) + "_" + key + "," + value.dump() + "\n";
    }
  }
  for (const char* curve : {"far_curve", "frr_curve"}) {
    for (const auto& point : report[curve]) {
      csv += std::string(curve) + "," + point[0].dump() + "," +
             point[1].dump() + "\n";
    }
  }
  return csv;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Video-to-video face verification with multi-region histogram "
      "signatures"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from an INI/TOML file");

  // ---- synth
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic labelled dataset");
  mrh::SynthSpec synth_spec;
  std::string synth_out;
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--persons", synth_spec.persons)->capture_default_str();
  synth_cmd->add_option("--enroll-videos", synth_spec.enroll_videos_per_person)
      ->capture_default_str();
  synth_cmd->add_option("--probe-videos", synth_spec.probe_videos_per_person)
      ->capture_default_str();
  synth_cmd->add_option("--train-persons", synth_spec.train_persons)
      ->capture_default_str();
  synth_cmd->add_option("--train-videos", synth_spec.train_videos_per_person)
      ->capture_default_str();
  synth_cmd->add_option("--frames", synth_spec.frames_per_video)
      ->capture_default_str();
  synth_cmd->add_option("--noise-sigma", synth_spec.noise_sigma)
      ->capture_default_str();
  synth_cmd->add_option("--crop-jitter", synth_spec.crop_jitter)
      ->capture_default_str();
  synth_cmd->add_option("--scale-modes", synth_spec.scale_modes,
                        "Inter-eye scale factor per mode (e.g. 1.0 1.3)");
  synth_cmd->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth_cmd->callback([&]() {
    mrh::generate_dataset(synth_spec, synth_out);
    json echo{{"command", "synth"},
              {"config",
               {{"out", synth_out},
                {"persons", synth_spec.persons},
                {"enroll_videos", synth_spec.enroll_videos_per_person},
                {"probe_videos", synth_spec.probe_videos_per_person},
                {"train_persons", synth_spec.train_persons},
                {"train_videos", synth_spec.train_videos_per_person},
                {"frames", synth_spec.frames_per_video},
                {"noise_sigma", synth_spec.noise_sigma},
                {"crop_jitter", synth_spec.crop_jitter},
                {"scale_modes", synth_spec.scale_modes},
                {"seed", synth_spec.seed}}},
              {"manifest", (fs::path(synth_out) / "manifest.json").string()}};
    std::cout << echo.dump(2) << "\n";
  });

  // ---- train-dict
  auto* train_cmd = app.add_subcommand(
      "train-dict", "Train the visual dictionary from training-role videos");
  std::string train_manifest, train_out;
  int dict_components = 64;
  std::uint64_t train_seed = 0;
  int train_threads = 1;
  std::size_t max_features = 0;
  train_cmd->add_option("--manifest", train_manifest)->required();
  train_cmd->add_option("--out", train_out, "Dictionary output file")
      ->required();
  train_cmd->add_option("--dict-components", dict_components)
      ->capture_default_str();
  train_cmd->add_option("--seed", train_seed)->capture_default_str();
  train_cmd->add_option("--threads", train_threads)->capture_default_str();
  train_cmd->add_option("--max-features", max_features,
                        "Subsample cap on training descriptors (0 = all)")
      ->capture_default_str();
  train_cmd->callback([&]() {
    const auto manifest = mrh::load_manifest(train_manifest);
    mrh::Matrix features =
        mrh::collect_training_features(manifest, train_threads);
    if (max_features > 0 &&
        static_cast<std::size_t>(features.cols()) > max_features) {
      const Eigen::Index stride =
          (features.cols() + static_cast<Eigen::Index>(max_features) - 1) /
          static_cast<Eigen::Index>(max_features);
      mrh::Matrix sub(features.rows(), (features.cols() + stride - 1) / stride);
      for (Eigen::Index i = 0, j = 0; i < features.cols(); i += stride, ++j) {
        sub.col(j) = features.col(i);
      }
      features = std::move(sub);
    }
    const auto dict =
        mrh::VisualDictionary::train(features, dict_components, train_seed);
    dict.save(train_out);
    json echo{{"command", "train-dict"},
              {"config",
               {{"manifest", train_manifest},
                {"out", train_out},
                {"dict_components", dict_components},
                {"seed", train_seed},
                {"max_features", max_features}}},
              {"training_features", features.cols()},
              {"em_iterations", dict.training_log_likelihoods().size()},
              {"final_log_likelihood", dict.training_log_likelihoods().back()}};
    std::cout << echo.dump(2) << "\n";
  });

  // ---- extract
  auto* extract_cmd = app.add_subcommand(
      "extract", "Compute per-face signatures for every video");
  std::string ex_manifest, ex_dict, ex_out;
  int ex_threads = 1;
  extract_cmd->add_option("--manifest", ex_manifest)->required();
  extract_cmd->add_option("--dict", ex_dict)->required();
  extract_cmd->add_option("--out-dir", ex_out)->required();
  extract_cmd->add_option("--threads", ex_threads)->capture_default_str();
  extract_cmd->callback([&]() {
    const auto manifest = mrh::load_manifest(ex_manifest);
    const auto dict = mrh::VisualDictionary::load(ex_dict);
    fs::create_directories(ex_out);

    struct Job {
      const mrh::PersonEntry* person;
      const mrh::VideoEntry* video;
      std::size_t face;
      std::vector<mrh::Signature>* sink;
    };
    std::vector<std::vector<mrh::Signature>> per_video;
    std::vector<Job> jobs;
    std::vector<std::pair<const mrh::PersonEntry*, const mrh::VideoEntry*>>
        videos;
    for (const auto& person : manifest.persons) {
      for (const auto& video : person.videos) {
        videos.emplace_back(&person, &video);
      }
    }
    per_video.resize(videos.size());
    for (std::size_t v = 0; v < videos.size(); ++v) {
      per_video[v].resize(videos[v].second->frames.size());
      for (std::size_t f = 0; f < videos[v].second->frames.size(); ++f) {
        jobs.push_back(Job{videos[v].first, videos[v].second, f, &per_video[v]});
      }
    }
    mrh::parallel_for(jobs.size(), ex_threads, [&](std::size_t i) {
      const Job& job = jobs[i];
      const auto& rec = job.video->frames[job.face];
      const mrh::Image image =
          mrh::load_image(mrh::resolve_image_path(manifest, rec));
      const auto [left, right] = mrh::effective_eyes(rec);
      (*job.sink)[job.face] =
          mrh::compute_mrh(mrh::align_crop(image, left, right), dict);
    });

    json index;
    index["command"] = "extract";
    index["config"] = {{"manifest", ex_manifest},
                       {"dict", ex_dict},
                       {"out_dir", ex_out}};
    index["videos"] = json::array();
    for (std::size_t v = 0; v < videos.size(); ++v) {
      const auto& [person, video] = videos[v];
      const fs::path dir = fs::path(ex_out) / person->person_id;
      fs::create_directories(dir);
      const fs::path file = dir / (video->video_id + ".sig");
      mrh::save_signatures(file.string(), per_video[v]);
      index["videos"].push_back(
          {{"person_id", person->person_id},
           {"video_id", video->video_id},
           {"role", mrh::to_string(video->role)},
           {"path", fs::relative(file, ex_out).string()},
           {"signatures", per_video[v].size()}});
    }
    write_text((fs::path(ex_out) / "index.json").string(),
               index.dump(2) + "\n");
    std::cout << index.dump(2) << "\n";
  });

  // ---- select
  auto* select_cmd = app.add_subcommand(
      "select", "Select faces per video and report the chosen frames");
  std::string sel_manifest, sel_method = "sequential", sel_out;
  int sel_m = 1;
  std::uint64_t sel_seed = 0;
  select_cmd->add_option("--manifest", sel_manifest)->required();
  select_cmd->add_option("--select-method", sel_method)
      ->check(CLI::IsMember({"sequential", "random", "confidence"}))
      ->capture_default_str();
  select_cmd->add_option("--select-m", sel_m)->capture_default_str();
  select_cmd->add_option("--seed", sel_seed)->capture_default_str();
  select_cmd->add_option("--out", sel_out, "Selection report (JSON)");
  select_cmd->callback([&]() {
    const auto manifest = mrh::load_manifest(sel_manifest);
    mrh::SelectionSpec spec{mrh::selection_method_from_string(sel_method),
                            sel_m, sel_seed};
    json result{{"command", "select"},
                {"config",
                 {{"manifest", sel_manifest},
                  {"select_method", sel_method},
                  {"select_m", sel_m},
                  {"seed", sel_seed}}},
                {"selections", json::array()}};
    for (const auto& person : manifest.persons) {
      for (const auto& video : person.videos) {
        const auto sel = mrh::select_faces(video, spec);
        json frames = json::array();
        for (int idx : sel.indices) {
          frames.push_back(
              video.frames[static_cast<std::size_t>(idx)].frame_index);
        }
        result["selections"].push_back({{"person_id", person.person_id},
                                        {"video_id", video.video_id},
                                        {"indices", sel.indices},
                                        {"frames", frames},
                                        {"truncated", sel.truncated}});
      }
    }
    const std::string text = result.dump(2) + "\n";
    if (!sel_out.empty()) write_text(sel_out, text);
    std::cout << text;
  });

  // ---- cluster
  auto* cluster_cmd = app.add_subcommand(
      "cluster", "k-means over signature files; writes centroids + sidecar");
  std::vector<std::string> cl_inputs;
  std::string cl_out, cl_mode = "multiple";
  int cl_k = 1, cl_max_iter = 20;
  cluster_cmd->add_option("--in", cl_inputs, "Signature file(s), one per video")
      ->required();
  cluster_cmd->add_option("--out", cl_out, "Centroid signature file")
      ->required();
  cluster_cmd->add_option("--cluster-k", cl_k)->capture_default_str();
  cluster_cmd->add_option("--cluster-mode", cl_mode)
      ->check(CLI::IsMember({"single", "multiple"}))
      ->capture_default_str();
  cluster_cmd->add_option("--max-iter", cl_max_iter)->capture_default_str();
  cluster_cmd->callback([&]() {
    std::vector<std::vector<mrh::Signature>> videos;
    for (const auto& path : cl_inputs) {
      videos.push_back(mrh::load_signatures(path));
    }
    const auto mode = mrh::cluster_mode_from_string(cl_mode);
    json sidecar{{"command", "cluster"},
                 {"config",
                  {{"in", cl_inputs},
                   {"out", cl_out},
                   {"cluster_k", cl_k},
                   {"cluster_mode", cl_mode},
                   {"max_iter", cl_max_iter}}},
                 {"models", json::array()}};
    std::vector<mrh::Signature> centroids;
    if (mode == mrh::GalleryClusterMode::kMultiple) {
      std::vector<mrh::Signature> all;
      for (const auto& v : videos) all.insert(all.end(), v.begin(), v.end());
      const auto model = mrh::kmeans_cluster(all, cl_k, cl_max_iter);
      centroids = model.centroids;
      sidecar["models"].push_back({{"video_index", nullptr},
                                   {"assignments", model.assignments},
                                   {"objective", model.objective},
                                   {"objective_history", model.objective_history},
                                   {"iterations", model.iterations}});
    } else {
      for (std::size_t v = 0; v < videos.size(); ++v) {
        const auto model = mrh::kmeans_cluster(videos[v], cl_k, cl_max_iter);
        centroids.insert(centroids.end(), model.centroids.begin(),
                         model.centroids.end());
        sidecar["models"].push_back(
            {{"video_index", v},
             {"assignments", model.assignments},
             {"objective", model.objective},
             {"objective_history", model.objective_history},
             {"iterations", model.iterations}});
      }
    }
    mrh::save_signatures(cl_out, centroids);
    write_text(cl_out + ".json", sidecar.dump(2) + "\n");
    std::cout << sidecar.dump(2) << "\n";
  });

  // ---- match
  auto* match_cmd = app.add_subcommand(
      "match", "Score every probe-gallery trial; writes a scores CSV");
  PipelineOptions match_opts;
  std::string match_scores;
  add_pipeline_options(match_cmd, match_opts);
  match_cmd->add_option("--scores", match_scores, "Scores CSV output")
      ->required();
  match_cmd->callback([&]() {
    const auto manifest = mrh::load_manifest(match_opts.manifest_path);
    const auto dict = mrh::VisualDictionary::load(match_opts.dict_path);
    const auto config = resolve_pipeline(match_opts);
    const auto scored = mrh::score_trials(manifest, dict, config);
    mrh::write_scores_csv(match_scores, scored.trials);
    json echo{{"command", "match"},
              {"config", pipeline_config_json(match_opts, config)},
              {"scores", match_scores},
              {"cost", cost_json(scored.cost)}};
    std::cout << echo.dump(2) << "\n";
  });

  // ---- evaluate
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Run the full verification protocol and report error rates");
  PipelineOptions eval_opts;
  std::string eval_report, eval_scores, eval_format = "json";
  eval_cmd->add_option("--report", eval_report, "Report output file");
  eval_cmd->add_option("--scores", eval_scores, "Scores CSV output");
  eval_cmd->add_option("--format", eval_format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  add_pipeline_options(eval_cmd, eval_opts);
  eval_cmd->callback([&]() {
    const auto manifest = mrh::load_manifest(eval_opts.manifest_path);
    const auto dict = mrh::VisualDictionary::load(eval_opts.dict_path);
    const auto config = resolve_pipeline(eval_opts);
    const auto result = mrh::run_experiment(manifest, dict, config);
    if (!eval_scores.empty()) {
      mrh::write_scores_csv(eval_scores, result.trials);
    }
    json report = report_json(result.report);
    report["command"] = "evaluate";
    report["config"] = pipeline_config_json(eval_opts, config);
    report["config"]["format"] = eval_format;
    report["cost"] = cost_json(result.cost);
    const std::string text = eval_format == "json"
                                 ? report.dump(2) + "\n"
                                 : report_csv(report);
    if (!eval_report.empty()) write_text(eval_report, text);
    std::cout << text;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const mrh::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
