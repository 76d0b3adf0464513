// edgescore: score binary edge maps, run edge detectors and parameter sweeps.
//
// Exit codes: 0 success, 2 invalid arguments or configuration, 3 I/O or format failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "edgescore/complexity.hpp"
#include "edgescore/detectors.hpp"
#include "edgescore/error.hpp"
#include "edgescore/pattern_bank.hpp"
#include "edgescore/raster_io.hpp"
#include "edgescore/report.hpp"
#include "edgescore/simd/kernels.hpp"
#include "edgescore/supervised.hpp"
#include "edgescore/sweep.hpp"

namespace fs = std::filesystem;
using namespace edgescore;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

std::string four(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

double rounded4(double v) { return std::round(v * 1e4) / 1e4; }

std::optional<double> optional_threshold(double value, bool given) {
  return given ? std::optional<double>(value) : std::nullopt;
}

std::vector<EdgeMap> load_maps(const std::vector<std::string>& paths, std::optional<double> threshold) {
  std::vector<EdgeMap> maps;
  for (const auto& p : paths) {
    maps.push_back(load_edge_map(p, threshold));
  }
  return maps;
}

std::string describe_params(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty()) {
      out += ' ';
    }
    out += name + "=" + four(value);
  }
  return out;
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + "_" + suffix + path.extension().string());
}

struct DetectOptions {
  std::string input;
  std::string kind = "canny";
  double ht = 0.1;
  std::string lt = "auto";
  std::optional<double> sigma;
  double t = 0.1;
  bool no_thin = false;
  bool luma = false;
  std::string output;
};

int run_detect(const DetectOptions& o) {
  const GrayImage image = load_gray(o.input, {o.luma});
  const DetectorKind kind = parse_detector_kind(o.kind);
  DetectorSpec spec = default_detector(kind);
  if (o.sigma) {
    if (kind == DetectorKind::canny || kind == DetectorKind::log || kind == DetectorKind::zerocross) {
      spec.params["sigma"] = *o.sigma;
    }
  }
  if (kind == DetectorKind::canny) {
    spec.params["ht"] = o.ht;
    spec.params["lt"] = o.lt == "auto" ? 0.4 * o.ht : std::stod(o.lt);
  } else {
    spec.params["t"] = o.t;
    if (o.no_thin && kind != DetectorKind::log && kind != DetectorKind::zerocross) {
      spec.params["thin"] = 0.0;
    }
  }
  const EdgeMap map = detect(image, spec);
  save_edge_map(map, o.output);
  std::cout << to_string(kind) << ' ' << describe_params(spec.params) << " edge_count=" << map.edge_count() << '\n';
  return 0;
}

struct ScoreOptions {
  std::string map;
  std::vector<std::string> gts;
  double threshold = 0.5;
  bool threshold_given = false;
  int window = 7;
  double alpha = kDefaultPrattAlpha;
  std::string format = "json";
};

int run_score(const ScoreOptions& o) {
  const auto threshold = optional_threshold(o.threshold, o.threshold_given);
  const EdgeMap map = load_edge_map(o.map, threshold);
  ScoreRecord record = complexity(map, generate_line_bank(o.window));
  if (!o.gts.empty()) {
    const GroundTruthSet set(load_maps(o.gts, threshold));
    SupervisedScores s;
    if (!map.empty()) {
      s.q_gt = cosine_discrepancy_multi(map, set);
      for (const auto& gt : set.maps()) {
        s.pratt = std::max(s.pratt, pratt_fom(map, gt, o.alpha));
      }
    }
    record.supervised = s;
  }
  if (o.format == "csv") {
    std::cout << "map,edge_count,degenerate,q,H,C" << (record.supervised ? ",q_GT,pratt" : "") << '\n';
    std::cout << o.map << ',' << record.edge_count << ',' << (record.degenerate ? 1 : 0) << ',' << four(record.q)
              << ',' << four(record.H) << ',' << four(record.C);
    if (record.supervised) {
      std::cout << ',' << four(record.supervised->q_gt) << ',' << four(record.supervised->pratt);
    }
    std::cout << '\n';
  } else {
    nlohmann::ordered_json j;
    j["map"] = o.map;
    j["edge_count"] = record.edge_count;
    j["degenerate"] = record.degenerate;
    j["q"] = rounded4(record.q);
    j["H"] = rounded4(record.H);
    j["C"] = rounded4(record.C);
    if (record.supervised) {
      j["q_GT"] = rounded4(record.supervised->q_gt);
      j["pratt"] = rounded4(record.supervised->pratt);
    }
    std::cout << j.dump() << '\n';
  }
  return 0;
}

struct CompareOptions {
  std::string map;
  std::vector<std::string> gts;
  double threshold = 0.5;
  bool threshold_given = false;
  double alpha = kDefaultPrattAlpha;
};

int run_compare(const CompareOptions& o) {
  const auto threshold = optional_threshold(o.threshold, o.threshold_given);
  const EdgeMap map = load_edge_map(o.map, threshold);
  const GroundTruthSet set(load_maps(o.gts, threshold));
  std::cout << "gt,q_GT,pratt\n";
  double best_pratt = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double pratt = pratt_fom(map, set[i], o.alpha);
    best_pratt = std::max(best_pratt, pratt);
    std::cout << o.gts[i] << ',' << four(cosine_discrepancy(map, set[i])) << ',' << four(pratt) << '\n';
  }
  std::cout << "all," << four(cosine_discrepancy_multi(map, set)) << ',' << four(best_pratt) << '\n';
  return 0;
}

struct SweepOptions {
  std::string input;
  std::vector<std::string> detectors{"canny"};
  std::string grid;
  std::optional<double> sigma;
  double lt_ratio = 0.4;
  std::vector<std::string> gts;
  double gt_threshold = 0.5;
  bool gt_threshold_given = false;
  double alpha = kDefaultPrattAlpha;
  int window = 7;
  unsigned threads = 0;
  bool no_thin = false;
  bool luma = false;
  std::string csv;
  std::string plot;
  std::string save_best;
};

SweepConfig make_sweep_config(const SweepOptions& o, DetectorKind kind) {
  SweepConfig config;
  config.detector = default_detector(kind);
  if (o.sigma && config.detector.params.contains("sigma")) {
    config.detector.params["sigma"] = *o.sigma;
  }
  if (o.no_thin && (kind == DetectorKind::sobel || kind == DetectorKind::prewitt || kind == DetectorKind::roberts)) {
    config.detector.params["thin"] = 0.0;
  }
  const std::string swept = default_swept_parameter(kind);
  if (o.grid.empty()) {
    config.grid = GridSpec::unit_thresholds(swept);
  } else {
    config.grid = GridSpec::parse(o.grid);
    if (o.detectors.size() > 1) {
      // One grid shared by several detectors applies to each one's threshold.
      config.grid.parameter = swept;
    }
  }
  config.lt_ratio = o.lt_ratio;
  config.window = o.window;
  config.threads = o.threads;
  return config;
}

void print_record_line(const std::string& label, const ScoreRecord& r) {
  std::cout << label << ',' << describe_params(r.params) << ',' << r.edge_count << ',' << four(r.q) << ','
            << four(r.H) << ',' << four(r.C);
  if (r.supervised) {
    std::cout << ',' << four(r.supervised->pratt) << ',' << four(r.supervised->q_gt);
  }
  std::cout << '\n';
}

int run_sweep_command(const SweepOptions& o) {
  const GrayImage image = load_gray(o.input, {o.luma});
  std::optional<Supervision> supervision;
  if (!o.gts.empty()) {
    supervision = Supervision{
        GroundTruthSet(load_maps(o.gts, optional_threshold(o.gt_threshold, o.gt_threshold_given))), o.alpha};
  }
  std::vector<SweepConfig> configs;
  for (const auto& name : o.detectors) {
    configs.push_back(make_sweep_config(o, parse_detector_kind(name)));
    configs.back().supervision = supervision;
  }
  const DetectorComparison comparison = select_best_per_detector(image, configs);
  const bool several = configs.size() > 1;

  std::cout << "detector,params,edge_count,q,H,C" << (supervision ? ",pratt,q_GT" : "") << '\n';
  for (std::size_t i = 0; i < comparison.rows.size(); ++i) {
    const auto& row = comparison.rows[i];
    print_record_line(std::string(to_string(row.detector.kind)), row.record);
    const auto& sweep = comparison.sweeps[i];
    if (sweep.ties.size() > 1) {
      std::cerr << to_string(row.detector.kind) << ": " << sweep.ties.size() << " grid points within "
                << kTieTolerance << " of the best C\n";
    }
    const std::string suffix(to_string(row.detector.kind));
    if (!o.csv.empty()) {
      emit_csv(sweep, several ? with_suffix(o.csv, suffix) : fs::path(o.csv));
    }
    if (!o.plot.empty()) {
      emit_plot(sweep, several ? with_suffix(o.plot, suffix) : fs::path(o.plot));
    }
  }
  if (several) {
    std::cout << "best," << to_string(comparison.rows[comparison.global_best].detector.kind) << '\n';
  }
  if (!o.save_best.empty()) {
    save_edge_map(comparison.rows[comparison.global_best].map, o.save_best);
  }
  return 0;
}

struct RankOptions {
  std::vector<std::string> gts;
  double threshold = 0.5;
  bool threshold_given = false;
  int window = 7;
};

int run_rank_gt(const RankOptions& o) {
  const GroundTruthSet set(load_maps(o.gts, optional_threshold(o.threshold, o.threshold_given)));
  const auto records = score_gt_set(set, o.window);
  std::cout << "gt,edge_count,q,H,C,rank\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::size_t rank = 1;
    for (const auto& other : records) {
      rank += other.C > records[i].C ? 1 : 0;
    }
    std::cout << o.gts[i] << ',' << records[i].edge_count << ',' << four(records[i].q) << ',' << four(records[i].H)
              << ',' << four(records[i].C) << ',' << rank << '\n';
  }
  return 0;
}

int run_patterns(int window, const std::string& out) {
  const PatternBank bank = generate_line_bank(window);
  dump_bank(bank, out);
  std::cout << bank.count() << " patterns of size " << window << " written to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised and supervised scoring of binary edge maps"};
  app.require_subcommand(1);
  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel instruction set: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  DetectOptions detect_opts;
  auto* detect_cmd = app.add_subcommand("detect", "Run one edge detector and write a PBM edge map");
  detect_cmd->add_option("--in", detect_opts.input, "Grayscale input image (PGM/PNG)")->required();
  detect_cmd->add_option("--kind", detect_opts.kind, "canny, sobel, prewitt, roberts, log or zerocross");
  detect_cmd->add_option("--ht", detect_opts.ht, "Canny high threshold in (0,1)");
  detect_cmd->add_option("--lt", detect_opts.lt, "Canny low threshold, or 'auto' for 0.4*ht");
  detect_cmd->add_option("--sigma", detect_opts.sigma, "Smoothing scale (Canny, LoG, zerocross)");
  detect_cmd->add_option("--t", detect_opts.t, "Threshold for gradient and zero-crossing detectors");
  detect_cmd->add_flag("--no-thin", detect_opts.no_thin, "Disable thinning for gradient detectors");
  detect_cmd->add_flag("--luma", detect_opts.luma, "Accept colour input via Rec. 601 luma");
  detect_cmd->add_option("--out", detect_opts.output, "Output PBM path")->required();

  ScoreOptions score_opts;
  auto* score_cmd = app.add_subcommand("score", "Score one edge map (q, H, C and optional supervised scores)");
  score_cmd->add_option("--map", score_opts.map, "Edge map")->required();
  score_cmd->add_option("--gt", score_opts.gts, "Ground-truth map (repeatable)");
  auto* score_thr = score_cmd->add_option("--threshold", score_opts.threshold, "Binarize grayscale maps at value > T");
  score_cmd->add_option("--window", score_opts.window, "Pattern window size (odd, >= 3)");
  score_cmd->add_option("--alpha", score_opts.alpha, "Pratt alpha");
  score_cmd->add_option("--format", score_opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CompareOptions compare_opts;
  auto* compare_cmd = app.add_subcommand("compare", "Supervised scores of a map against ground truths");
  compare_cmd->add_option("--map", compare_opts.map, "Edge map")->required();
  compare_cmd->add_option("--gt", compare_opts.gts, "Ground-truth map (repeatable)")->required();
  auto* compare_thr = compare_cmd->add_option("--threshold", compare_opts.threshold, "Binarize grayscale maps");
  compare_cmd->add_option("--alpha", compare_opts.alpha, "Pratt alpha");

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep detector thresholds and select the argmax-C map");
  sweep_cmd->add_option("--in", sweep_opts.input, "Grayscale input image")->required();
  sweep_cmd->add_option("--detector", sweep_opts.detectors, "Detector (repeatable)");
  sweep_cmd->add_option("--grid", sweep_opts.grid, "name:count:min:max (default 0.01..0.99 step 0.01 and 0.999)");
  sweep_cmd->add_option("--sigma", sweep_opts.sigma, "Smoothing scale");
  sweep_cmd->add_option("--lt-ratio", sweep_opts.lt_ratio, "Canny low/high threshold ratio");
  sweep_cmd->add_option("--gt", sweep_opts.gts, "Ground-truth map (repeatable)");
  auto* sweep_thr = sweep_cmd->add_option("--gt-threshold", sweep_opts.gt_threshold, "Binarize grayscale GT maps");
  sweep_cmd->add_option("--alpha", sweep_opts.alpha, "Pratt alpha");
  sweep_cmd->add_option("--window", sweep_opts.window, "Pattern window size");
  sweep_cmd->add_option("--threads", sweep_opts.threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_flag("--no-thin", sweep_opts.no_thin, "Disable thinning for gradient detectors");
  sweep_cmd->add_flag("--luma", sweep_opts.luma, "Accept colour input via Rec. 601 luma");
  sweep_cmd->add_option("--csv", sweep_opts.csv, "Write per-grid-point scores as CSV");
  sweep_cmd->add_option("--plot", sweep_opts.plot, "Write q/H/C curves as SVG");
  sweep_cmd->add_option("--save-best", sweep_opts.save_best, "Write the selected map as PBM");

  RankOptions rank_opts;
  auto* rank_cmd = app.add_subcommand("rank-gt", "Score and rank a set of ground-truth maps by C");
  rank_cmd->add_option("--gt", rank_opts.gts, "Ground-truth map (repeatable)")->required();
  auto* rank_thr = rank_cmd->add_option("--threshold", rank_opts.threshold, "Binarize grayscale maps");
  rank_cmd->add_option("--window", rank_opts.window, "Pattern window size");

  int pattern_window = 7;
  std::string pattern_dir;
  auto* patterns_cmd = app.add_subcommand("patterns", "Dump the line pattern bank as PBM files");
  patterns_cmd->add_option("--window", pattern_window, "Window size (odd, >= 3)");
  patterns_cmd->add_option("--out", pattern_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (isa != "auto") {
      simd::set_active_isa(isa == "avx2" ? simd::Isa::avx2 : simd::Isa::scalar);
    }
    if (*detect_cmd) {
      return run_detect(detect_opts);
    }
    if (*score_cmd) {
      score_opts.threshold_given = score_thr->count() > 0;
      return run_score(score_opts);
    }
    if (*compare_cmd) {
      compare_opts.threshold_given = compare_thr->count() > 0;
      return run_compare(compare_opts);
    }
    if (*sweep_cmd) {
      sweep_opts.gt_threshold_given = sweep_thr->count() > 0;
      return run_sweep_command(sweep_opts);
    }
    if (*rank_cmd) {
      rank_opts.threshold_given = rank_thr->count() > 0;
      return run_rank_gt(rank_opts);
    }
    if (*patterns_cmd) {
      return run_patterns(pattern_window, pattern_dir);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid number: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
