#include "edgescore/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "edgescore/error.hpp"

namespace edgescore {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) {
    throw IoError("write failure on " + path.string());
  }
}

double swept_value(const SweepResult& result, std::size_t i) {
  const auto& params = result.records[i].params;
  const auto it = params.find(result.parameter);
  return it != params.end() ? it->second : static_cast<double>(i);
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
  if (result.records.empty()) {
    throw InvalidArgument("sweep result has no records");
  }
  const bool supervised = result.records.front().supervised.has_value();
  for (const auto& [name, value] : result.records.front().params) {
    out << name << ',';
  }
  out << "edge_count,q,H,C";
  if (supervised) {
    out << ",q_GT,pratt";
  }
  out << '\n';
  for (const auto& r : result.records) {
    for (const auto& [name, value] : r.params) {
      out << exact(value) << ',';
    }
    out << r.edge_count << ',' << exact(r.q) << ',' << exact(r.H) << ',' << exact(r.C);
    if (supervised) {
      const SupervisedScores s = r.supervised.value_or(SupervisedScores{});
      out << ',' << exact(s.q_gt) << ',' << exact(s.pratt);
    }
    out << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_csv(result, out);
  check_written(out, path);
}

void write_svg(const SweepResult& result, std::ostream& out) {
  if (result.records.empty()) {
    throw InvalidArgument("sweep result has no records");
  }
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 400.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 20.0;
  constexpr double kBottom = 50.0;

  double lo = swept_value(result, 0);
  double hi = lo;
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    lo = std::min(lo, swept_value(result, i));
    hi = std::max(hi, swept_value(result, i));
  }
  if (hi == lo) {
    hi = lo + 1.0;
  }
  auto px = [&](double v) { return kLeft + (v - lo) / (hi - lo) * (kWidth - kLeft - kRight); };
  auto py = [&](double v) { return kHeight - kBottom - std::clamp(v, 0.0, 1.0) * (kHeight - kTop - kBottom); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << py(0)
      << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\"" << py(1) << "\"/>\n"
      << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = k / 4.0;
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << fixed(v) << "</text>\n";
    const double x = lo + (hi - lo) * v;
    out << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
        << fixed(x, 3) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << result.parameter << "</text>\n";
  out << "</g>\n";

  struct Series {
    const char* name;
    const char* colour;
    double ScoreRecord::*field;
  };
  const Series series[] = {{"q", "#1f77b4", &ScoreRecord::q},
                           {"H", "#2ca02c", &ScoreRecord::H},
                           {"C", "#d62728", &ScoreRecord::C}};
  int legend = 0;
  for (const auto& s : series) {
    out << "<polyline id=\"" << s.name << "\" fill=\"none\" stroke=\"" << s.colour
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < result.records.size(); ++i) {
      out << (i ? " " : "") << fixed(px(swept_value(result, i))) << ',' << fixed(py(result.records[i].*s.field));
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kRight - 40 << "\" y=\"" << kTop + 14 * (++legend)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.colour << "\">" << s.name << "</text>\n";
  }
  const auto& best = result.records[result.best_index];
  out << "<circle id=\"best\" cx=\"" << fixed(px(swept_value(result, result.best_index))) << "\" cy=\""
      << fixed(py(best.C)) << "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "</svg>\n";
}

void emit_plot(const SweepResult& result, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_svg(result, out);
  check_written(out, path);
}

}  // namespace edgescore
