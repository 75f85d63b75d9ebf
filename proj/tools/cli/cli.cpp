#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <opencv2/imgcodecs.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "stereosal/dataset_io.hpp"
#include "stereosal/errors.hpp"
#include "stereosal/evaluation.hpp"
#include "stereosal/version.hpp"

namespace stereosal::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kManifestName = "manifest.json";

DepthTermIndex parse_depth_term(const std::string& name);

// Pipeline flags shared by run and batch. Values given on the command line
// override a --config snapshot, which overrides the built-in defaults.
struct PipelineFlags {
  PipelineConfig values;
  std::string levels = "0.4,0.6";
  std::string config_path;
  std::vector<CLI::Option*> options;
  CLI::Option* levels_opt = nullptr;
  CLI::Option* invert_opt = nullptr;
  CLI::Option* no_diffusion_opt = nullptr;
  CLI::Option* no_drss_opt = nullptr;
  CLI::Option* objectness_opt = nullptr;
  CLI::Option* depth_term_opt = nullptr;
  std::string objectness;
  std::string depth_term = "neighbor";
  bool invert_depth = false;
  bool no_diffusion = false;
  bool no_drss = false;

  void attach(CLI::App& app) {
    const PipelineConfig d;
    values = d;
    options.push_back(app.add_option("--superpixels", values.superpixels, "Requested superpixel count")
                          ->default_val(d.superpixels));
    options.push_back(app.add_option("--sigma2", values.sigma2, "Affinity bandwidth sigma^2")
                          ->default_val(d.sigma2));
    levels_opt = app.add_option("--levels", levels, "Ascending depth level thresholds")
                     ->default_val(levels);
    options.push_back(app.add_option("--tau", values.tau, "Seed threshold on compactness saliency")
                          ->default_val(d.tau));
    options.push_back(app.add_option("--gamma", values.gamma, "Weight of compactness in fusion")
                          ->default_val(d.gamma));
    options.push_back(app.add_option("--alpha", values.alpha, "Manifold ranking alpha")
                          ->default_val(d.alpha));
    options.push_back(app.add_option("--slic-compactness", values.slic_compactness,
                                     "SLIC compactness m")
                          ->default_val(d.slic_compactness));
    options.push_back(app.add_option("--slic-iterations", values.slic_iterations,
                                     "SLIC k-means iterations")
                          ->default_val(d.slic_iterations));
    options.push_back(app.add_option("--ring", values.ring, "Adjacency ring size (1 or 2)")
                          ->default_val(d.ring));
    invert_opt = app.add_flag("--invert-depth", invert_depth, "Depth maps use 0 = nearest");
    no_diffusion_opt =
        app.add_flag("--no-diffusion", no_diffusion, "Use the raw affinity for compactness");
    no_drss_opt = app.add_flag("--no-drss", no_drss, "Skip depth refinement of seeds");
    objectness_opt = app.add_option("--objectness-map", objectness,
                                    "Objectness map (run) or directory of maps (batch)");
    depth_term_opt = app.add_option("--depth-term", depth_term,
                                    "Depth-compactness damping index: neighbor (d_j) or own (d_i)")
                         ->check(CLI::IsMember({"neighbor", "own"}));
    app.add_option("--config", config_path, "Reuse the config snapshot of a run manifest");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw IoError("cannot read config " + config_path);
      json j = json::parse(is);
      cfg = config_from_json(j.contains("config") ? j.at("config") : j);
    }
    const auto given = [](const CLI::Option* o) { return o->count() > 0; };
    // options[] order matches attach()
    if (given(options[0])) cfg.superpixels = values.superpixels;
    if (given(options[1])) cfg.sigma2 = values.sigma2;
    if (given(options[2])) cfg.tau = values.tau;
    if (given(options[3])) cfg.gamma = values.gamma;
    if (given(options[4])) cfg.alpha = values.alpha;
    if (given(options[5])) cfg.slic_compactness = values.slic_compactness;
    if (given(options[6])) cfg.slic_iterations = values.slic_iterations;
    if (given(options[7])) cfg.ring = values.ring;
    if (given(levels_opt)) cfg.levels = parse_levels(levels);
    if (given(invert_opt)) cfg.invert_depth = invert_depth;
    if (given(no_diffusion_opt)) cfg.diffusion = !no_diffusion;
    if (given(no_drss_opt)) cfg.drss = !no_drss;
    if (given(objectness_opt)) cfg.objectness_path = objectness;
    if (given(depth_term_opt)) cfg.depth_term = parse_depth_term(depth_term);
    cfg.validate();
    return cfg;
  }

  static std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("invalid --levels entry '" + item + "'");
      }
    }
    validate_levels(out);
    return out;
  }
};

DepthTermIndex parse_depth_term(const std::string& name) {
  if (name == "own") return DepthTermIndex::Own;
  if (name == "neighbor") return DepthTermIndex::Neighbor;
  throw ConfigError("unknown depth term '" + name + "'");
}

const char* depth_term_name(DepthTermIndex index) {
  return index == DepthTermIndex::Own ? "own" : "neighbor";
}

json timings_json(const std::vector<StageTiming>& timings) {
  json t = json::object();
  double total = 0.0;
  for (const StageTiming& s : timings) {
    t[s.stage] = s.ms;
    total += s.ms;
  }
  t["total"] = total;
  return t;
}

json confidence_json(const DepthConfidence& c) {
  return json{{"lambda_d", c.lambda_d}, {"mean", c.mean},       {"stddev", c.stddev},
              {"cv", c.cv},             {"entropy", c.entropy}, {"level_probs", c.level_probs}};
}

struct SampleOutcome {
  std::string id;
  std::optional<json> row;
  std::string error;
};

// Runs one sample end to end and writes its maps into out_dir.
json process_sample(const DatasetEntry& entry, const PipelineConfig& cfg,
                    const std::optional<cv::Mat_<double>>& objectness, const fs::path& out_dir,
                    bool emit_intermediate) {
  RgbdSample sample = load_rgbd_pair(entry.rgb, entry.depth, cfg.invert_depth);
  sample.id = entry.id;
  const PipelineOutput result = run_pipeline(sample, cfg, objectness);

  json row;
  row["id"] = entry.id;
  row["rgb"] = entry.rgb.string();
  row["depth"] = entry.depth.string();
  const fs::path final_path = out_dir / (entry.id + ".png");
  write_saliency_map(result.final, final_path);
  row["output"] = final_path.string();
  if (emit_intermediate) {
    const fs::path cs = out_dir / (entry.id + "_cs.png");
    const fs::path fs_path = out_dir / (entry.id + "_fs.png");
    const fs::path seeds = out_dir / (entry.id + "_seeds.png");
    write_saliency_map(result.compactness, cs);
    write_saliency_map(result.foreground, fs_path);
    if (!cv::imwrite(seeds.string(), seed_mask(result.seeds, result.segmentation))) {
      throw IoError("cannot write " + seeds.string());
    }
    row["compactness"] = cs.string();
    row["foreground"] = fs_path.string();
    row["seeds"] = seeds.string();
  }
  row["lambda_d"] = result.confidence.lambda_d;
  row["depth_confidence"] = confidence_json(result.confidence);
  row["superpixels"] = result.segmentation.count;
  row["seed_count"] = {{"preliminary", result.seeds.preliminary.size()},
                       {"refined", result.seeds.refined.size()}};
  row["timings_ms"] = timings_json(result.timings);
  return row;
}

json new_manifest(const std::string& command, const PipelineConfig& cfg) {
  return json{{"tool", "stereosal"},
              {"version", kVersion},
              {"command", command},
              {"config", config_to_json(cfg)},
              {"samples", json::array()},
              {"failures", json::array()}};
}

void write_manifest(const json& manifest, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << manifest.dump(2) << '\n';
}

std::optional<cv::Mat_<double>> load_objectness(const fs::path& path) {
  return load_unit_map(path);
}

int cmd_run(const PipelineFlags& flags, const std::string& rgb, const std::string& depth,
            const std::string& out, bool emit_intermediate) {
  const PipelineConfig cfg = flags.resolve();
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  DatasetEntry entry{fs::path(rgb).stem().string(), rgb, depth, std::nullopt};

  std::optional<cv::Mat_<double>> objectness;
  if (cfg.objectness_path) objectness = load_objectness(*cfg.objectness_path);

  json row = process_sample(entry, cfg, objectness, out_dir, emit_intermediate);

  const fs::path manifest_path = out_dir / kManifestName;
  json manifest = new_manifest("run", cfg);
  if (fs::exists(manifest_path)) {
    try {
      std::ifstream is(manifest_path);
      json existing = json::parse(is);
      if (existing.value("config", json()) == manifest["config"]) {
        manifest = std::move(existing);
      } else {
        spdlog::warn("existing manifest has a different config, replacing it");
      }
    } catch (const json::exception&) {
      spdlog::warn("existing manifest unreadable, replacing it");
    }
  }
  json& samples = manifest["samples"];
  auto same_id = [&](const json& r) { return r.value("id", "") == entry.id; };
  samples.erase(std::remove_if(samples.begin(), samples.end(), same_id), samples.end());
  samples.push_back(row);
  std::sort(samples.begin(), samples.end(), [](const json& a, const json& b) {
    return a.value("id", "") < b.value("id", "");
  });
  write_manifest(manifest, manifest_path);
  spdlog::info("{}: lambda_d={:.4f} -> {}", entry.id, row["lambda_d"].get<double>(),
               row["output"].get<std::string>());
  return 0;
}

int cmd_batch(const PipelineFlags& flags, const std::string& dataset, const std::string& out,
              int jobs, bool emit_intermediate) {
  const PipelineConfig cfg = flags.resolve();
  if (jobs < 1) throw ConfigError("--jobs must be >= 1");
  const DatasetScan scan = scan_dataset(dataset);
  const fs::path out_dir(out);
  fs::create_directories(out_dir);

  std::optional<std::map<std::string, fs::path>> objectness_index;
  if (cfg.objectness_path) {
    if (!fs::is_directory(*cfg.objectness_path)) {
      throw ConfigError("batch --objectness-map must be a directory of per-sample maps");
    }
    objectness_index = index_images(*cfg.objectness_path);
  }

  const std::size_t n = scan.entries.size();
  std::vector<SampleOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const DatasetEntry& entry = scan.entries[i];
      SampleOutcome& outcome = outcomes[i];
      outcome.id = entry.id;
      try {
        std::optional<cv::Mat_<double>> objectness;
        if (objectness_index) {
          auto it = objectness_index->find(entry.id);
          if (it == objectness_index->end()) {
            throw IoError("no objectness map for " + entry.id);
          }
          objectness = load_objectness(it->second);
        }
        outcome.row = process_sample(entry, cfg, objectness, out_dir, emit_intermediate);
        spdlog::info("{}: done", entry.id);
      } catch (const std::exception& e) {
        outcome.error = e.what();
        spdlog::error("{}: {}", entry.id, e.what());
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  json manifest = new_manifest("batch", cfg);
  manifest["dataset"] = dataset;
  manifest["skipped"] = scan.skipped;
  std::size_t failed = 0;
  for (const SampleOutcome& o : outcomes) {
    if (o.row) {
      manifest["samples"].push_back(*o.row);
    } else {
      manifest["failures"].push_back({{"id", o.id}, {"error", o.error}});
      ++failed;
    }
  }
  write_manifest(manifest, out_dir / kManifestName);
  spdlog::info("batch finished: {} ok, {} failed, {} skipped", n - failed, failed,
               scan.skipped.size());
  return failed == 0 ? 0 : 1;
}

int cmd_eval(const std::string& pred_dir, const std::string& gt_dir, const std::string& report_path,
             std::string pr_path, double beta2) {
  const auto preds = index_images(pred_dir);
  const auto gts = index_images(gt_dir);
  std::vector<ImageEval> rows;
  std::vector<std::string> excluded;
  std::size_t matched = 0;
  for (const auto& [id, gt_path] : gts) {
    auto p = preds.find(id);
    if (p == preds.end()) continue;
    ++matched;
    try {
      const SaliencyMap pred = read_saliency_map(p->second);
      const cv::Mat_<std::uint8_t> gt = load_mask(gt_path);
      rows.push_back(evaluate_image(id, pred.values, gt, beta2));
    } catch (const Error& e) {
      spdlog::warn("{} excluded: {}", id, e.what());
      excluded.push_back(id);
    }
  }
  if (matched == 0) {
    spdlog::error("no prediction in {} matches a ground truth in {}", pred_dir, gt_dir);
    return 1;
  }
  if (rows.empty()) {
    spdlog::error("all {} matched samples were excluded", matched);
    return 1;
  }
  const EvalReport report = aggregate(std::move(rows), std::move(excluded));
  const fs::path report_file(report_path);
  if (report_file.has_parent_path()) fs::create_directories(report_file.parent_path());
  write_report_csv(report, report_file);
  if (pr_path.empty()) {
    pr_path = (report_file.parent_path() / (report_file.stem().string() + "_pr.csv")).string();
  }
  write_pr_curve_csv(report, pr_path);
  const EvalAggregate& a = report.aggregate;
  std::cout << "images " << report.rows.size() << " excluded " << report.excluded.size()
            << " precision " << a.precision << " recall " << a.recall << " F " << a.f_measure
            << " MAE " << a.mae << '\n';
  return 0;
}

}  // namespace

json config_to_json(const PipelineConfig& cfg) {
  json j{{"superpixels", cfg.superpixels},
         {"sigma2", cfg.sigma2},
         {"levels", cfg.levels},
         {"tau", cfg.tau},
         {"gamma", cfg.gamma},
         {"alpha", cfg.alpha},
         {"slic_compactness", cfg.slic_compactness},
         {"slic_iterations", cfg.slic_iterations},
         {"ring", cfg.ring},
         {"invert_depth", cfg.invert_depth},
         {"diffusion", cfg.diffusion},
         {"drss", cfg.drss},
         {"depth_term", depth_term_name(cfg.depth_term)}};
  j["objectness_path"] = cfg.objectness_path ? json(*cfg.objectness_path) : json(nullptr);
  return j;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  try {
    cfg.superpixels = j.value("superpixels", cfg.superpixels);
    cfg.sigma2 = j.value("sigma2", cfg.sigma2);
    cfg.levels = j.value("levels", cfg.levels);
    cfg.tau = j.value("tau", cfg.tau);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.slic_compactness = j.value("slic_compactness", cfg.slic_compactness);
    cfg.slic_iterations = j.value("slic_iterations", cfg.slic_iterations);
    cfg.ring = j.value("ring", cfg.ring);
    cfg.invert_depth = j.value("invert_depth", cfg.invert_depth);
    cfg.diffusion = j.value("diffusion", cfg.diffusion);
    cfg.drss = j.value("drss", cfg.drss);
    cfg.depth_term = parse_depth_term(j.value("depth_term", std::string("neighbor")));
    if (j.contains("objectness_path") && !j.at("objectness_path").is_null()) {
      cfg.objectness_path = j.at("objectness_path").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config snapshot: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void configure_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("stereosal");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
  });
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("STEREOSAL_LOG")) {
    level = spdlog::level::from_str(env);
  }
  spdlog::set_level(level);
}

int run_cli(int argc, const char* const* argv) {
  configure_logging();
  CLI::App app{"RGB-D saliency detection and evaluation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PipelineFlags run_flags;
  std::string rgb;
  std::string depth;
  std::string run_out;
  bool run_emit = false;
  CLI::App* run = app.add_subcommand("run", "Detect saliency on one RGB-D pair");
  run->add_option("--rgb", rgb, "RGB image")->required();
  run->add_option("--depth", depth, "Depth map")->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_flag("--emit-intermediate", run_emit, "Also write compactness, foreground and seeds");
  run_flags.attach(*run);

  PipelineFlags batch_flags;
  std::string dataset;
  std::string batch_out;
  int jobs = 1;
  bool batch_emit = false;
  CLI::App* batch = app.add_subcommand("batch", "Detect saliency over a dataset directory");
  batch->add_option("--dataset", dataset, "Root holding rgb/, depth/ and optional gt/")
      ->required();
  batch->add_option("--out", batch_out, "Output directory")->required();
  batch->add_option("--jobs", jobs, "Concurrent workers")->default_val(1);
  batch->add_flag("--emit-intermediate", batch_emit,
                  "Also write compactness, foreground and seeds");
  batch_flags.attach(*batch);

  std::string pred_dir;
  std::string gt_dir;
  std::string report;
  std::string pr_curve_path;
  double beta2 = kDefaultBeta2;
  CLI::App* eval = app.add_subcommand("eval", "Score saliency maps against ground truth");
  eval->add_option("--pred-dir", pred_dir, "Directory of predicted maps")->required();
  eval->add_option("--gt-dir", gt_dir, "Directory of ground-truth masks")->required();
  eval->add_option("--report", report, "Per-image report CSV")->required();
  eval->add_option("--pr-curve", pr_curve_path, "PR curve CSV (default <report>_pr.csv)");
  eval->add_option("--beta2", beta2, "F-measure beta^2")->default_val(kDefaultBeta2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(run_flags, rgb, depth, run_out, run_emit);
    if (*batch) return cmd_batch(batch_flags, dataset, batch_out, jobs, batch_emit);
    if (*eval) return cmd_eval(pred_dir, gt_dir, report, pr_curve_path, beta2);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("stereosal");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace stereosal::cli
