#include "edgescore/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "edgescore/error.hpp"
#include "edgescore/simd/kernels.hpp"

namespace edgescore {

namespace {

// Copies `image` into a buffer extended by the given margins with edge replication.
std::vector<double> pad_replicate(const RealField& image, int margin_x, int margin_y, std::size_t& stride) {
  const int w = image.width();
  const int h = image.height();
  stride = static_cast<std::size_t>(w + 2 * margin_x);
  std::vector<double> padded(stride * static_cast<std::size_t>(h + 2 * margin_y));
  for (int r = -margin_y; r < h + margin_y; ++r) {
    const auto src = image.row(std::clamp(r, 0, h - 1));
    double* dst = padded.data() + static_cast<std::size_t>(r + margin_y) * stride;
    for (int c = -margin_x; c < w + margin_x; ++c) {
      dst[c + margin_x] = src[static_cast<std::size_t>(std::clamp(c, 0, w - 1))];
    }
  }
  return padded;
}

void check_kernel(const Kernel& kernel) {
  if (kernel.width < 1 || kernel.height < 1 || kernel.width % 2 == 0 || kernel.height % 2 == 0) {
    throw InvalidArgument("kernel dimensions must be odd");
  }
  if (kernel.taps.size() != static_cast<std::size_t>(kernel.width) * static_cast<std::size_t>(kernel.height)) {
    throw InvalidArgument("kernel tap count does not match its dimensions");
  }
}

RealField magnitude_of(const RealField& gx, const RealField& gy) {
  RealField out(gx.width(), gx.height());
  simd::kernels().magnitude(gx.values().data(), gy.values().data(), out.values().data(), out.size());
  return out;
}

// Filter responses of a flat patch are not exactly zero after rounding; anything
// at or below this level is treated as zero so it cannot survive normalization.
constexpr double kRoundoffFloor = 1e-12;

void clear_roundoff(RealField& field) {
  for (double& v : field.values()) {
    if (std::abs(v) <= kRoundoffFloor) {
      v = 0.0;
    }
  }
}

double max_value(const RealField& field) {
  double m = 0.0;
  for (double v : field.values()) {
    m = std::max(m, v);
  }
  return m;
}

// Keeps pixels whose magnitude peaks across the gradient direction, quantized
// to 0/45/90/135 degrees. A plateau keeps its first pixel: strictly above the
// backward neighbour, at least the forward one. Outside the image counts as 0.
Grid<std::uint8_t> non_maximum_suppression(const RealField& gx, const RealField& gy, const RealField& mag) {
  const int w = mag.width();
  const int h = mag.height();
  Grid<std::uint8_t> keep(w, h, 0);
  auto at = [&](int r, int c) { return (r < 0 || r >= h || c < 0 || c >= w) ? 0.0 : mag(r, c); };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double m = mag(r, c);
      if (m <= 0.0) {
        continue;
      }
      double angle = std::atan2(gy(r, c), gx(r, c)) * (180.0 / std::numbers::pi);
      if (angle < 0.0) {
        angle += 180.0;
      }
      int dr = 0;
      int dc = 1;
      if (angle >= 22.5 && angle < 67.5) {
        dr = 1;
        dc = 1;
      } else if (angle >= 67.5 && angle < 112.5) {
        dr = 1;
        dc = 0;
      } else if (angle >= 112.5 && angle < 157.5) {
        dr = 1;
        dc = -1;
      }
      if (m > at(r - dr, c - dc) && m >= at(r + dr, c + dc)) {
        keep(r, c) = 1;
      }
    }
  }
  return keep;
}

const Kernel kSobelX{3, 3, {-1, 0, 1, -2, 0, 2, -1, 0, 1}};
const Kernel kSobelY{3, 3, {-1, -2, -1, 0, 0, 0, 1, 2, 1}};
const Kernel kPrewittX{3, 3, {-1, 0, 1, -1, 0, 1, -1, 0, 1}};
const Kernel kPrewittY{3, 3, {-1, -1, -1, 0, 0, 0, 1, 1, 1}};
// Roberts cross anchored at the top-left of its 2x2 support.
const Kernel kRobertsDiagonal{3, 3, {0, 0, 0, 0, 1, 0, 0, 0, -1}};
const Kernel kRobertsAntiDiagonal{3, 3, {0, 0, 0, 0, 0, 1, 0, -1, 0}};

void require_nonnegative_threshold(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("threshold must be finite and >= 0");
  }
}

void require_positive_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sigma must be finite and > 0");
  }
}

}  // namespace

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::canny:
      return "canny";
    case DetectorKind::sobel:
      return "sobel";
    case DetectorKind::prewitt:
      return "prewitt";
    case DetectorKind::roberts:
      return "roberts";
    case DetectorKind::log:
      return "log";
    case DetectorKind::zerocross:
      return "zerocross";
  }
  return "unknown";
}

DetectorKind parse_detector_kind(std::string_view name) {
  for (auto kind : {DetectorKind::canny, DetectorKind::sobel, DetectorKind::prewitt, DetectorKind::roberts,
                    DetectorKind::log, DetectorKind::zerocross}) {
    if (name == to_string(kind)) {
      return kind;
    }
  }
  throw InvalidArgument("unknown detector: " + std::string(name));
}

double DetectorSpec::param(const std::string& name) const {
  const auto it = params.find(name);
  if (it == params.end()) {
    throw InvalidArgument(std::string(to_string(kind)) + " requires parameter '" + name + "'");
  }
  return it->second;
}

void DetectorSpec::validate() const {
  std::set<std::string> allowed;
  switch (kind) {
    case DetectorKind::canny: {
      allowed = {"ht", "lt", "sigma"};
      const double ht = param("ht");
      const double lt = param("lt");
      require_positive_sigma(param("sigma"));
      if (!(lt > 0.0 && lt <= ht && ht < 1.0)) {
        throw InvalidArgument("canny requires 0 < lt <= ht < 1");
      }
      break;
    }
    case DetectorKind::sobel:
    case DetectorKind::prewitt:
    case DetectorKind::roberts:
      allowed = {"t", "thin"};
      require_nonnegative_threshold(param("t"));
      break;
    case DetectorKind::log:
    case DetectorKind::zerocross:
      allowed = {"t", "sigma"};
      require_nonnegative_threshold(param("t"));
      require_positive_sigma(param("sigma"));
      break;
  }
  for (const auto& [name, value] : params) {
    if (!allowed.contains(name)) {
      throw InvalidArgument(std::string(to_string(kind)) + " has no parameter '" + name + "'");
    }
  }
}

RealField convolve(const RealField& image, const Kernel& kernel) {
  check_kernel(kernel);
  std::size_t stride = 0;
  const auto padded = pad_replicate(image, kernel.width / 2, kernel.height / 2, stride);
  RealField out(image.width(), image.height());
  simd::kernels().correlate(padded.data(), stride, static_cast<std::size_t>(image.height()),
                            static_cast<std::size_t>(image.width()), kernel.taps.data(),
                            static_cast<std::size_t>(kernel.width), static_cast<std::size_t>(kernel.height),
                            out.values().data(), static_cast<std::size_t>(image.width()));
  return out;
}

RealField convolve_separable(const RealField& image, std::span<const double> horizontal,
                             std::span<const double> vertical) {
  const Kernel row{static_cast<int>(horizontal.size()), 1, {horizontal.begin(), horizontal.end()}};
  const Kernel column{1, static_cast<int>(vertical.size()), {vertical.begin(), vertical.end()}};
  return convolve(convolve(image, row), column);
}

std::vector<double> gaussian_kernel(double sigma) {
  require_positive_sigma(sigma);
  const int half = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps;
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    taps.push_back(std::exp(-(i * i) / (2.0 * sigma * sigma)));
    sum += taps.back();
  }
  for (double& t : taps) {
    t /= sum;
  }
  return taps;
}

Kernel log_kernel(double sigma) {
  require_positive_sigma(sigma);
  const int half = static_cast<int>(std::ceil(4.0 * sigma));
  const int size = 2 * half + 1;
  const double s2 = sigma * sigma;
  std::vector<double> gauss;
  double gauss_sum = 0.0;
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      gauss.push_back(std::exp(-(x * x + y * y) / (2.0 * s2)));
      gauss_sum += gauss.back();
    }
  }
  Kernel kernel{size, size, {}};
  double sum = 0.0;
  std::size_t i = 0;
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x, ++i) {
      const double r2 = x * x + y * y;
      kernel.taps.push_back(gauss[i] / gauss_sum * (r2 - 2.0 * s2) / (s2 * s2));
      sum += kernel.taps.back();
    }
  }
  const double mean = sum / static_cast<double>(kernel.taps.size());
  for (double& t : kernel.taps) {
    t -= mean;
  }
  return kernel;
}

GradientResponse::GradientResponse(const GrayImage& image, GradientOperator op, bool thin) {
  RealField gx;
  RealField gy;
  RealField mag;
  switch (op) {
    case GradientOperator::sobel:
      gx = convolve(image.field(), kSobelX);
      gy = convolve(image.field(), kSobelY);
      mag = magnitude_of(gx, gy);
      break;
    case GradientOperator::prewitt:
      gx = convolve(image.field(), kPrewittX);
      gy = convolve(image.field(), kPrewittY);
      mag = magnitude_of(gx, gy);
      break;
    case GradientOperator::roberts: {
      const RealField diag = convolve(image.field(), kRobertsDiagonal);
      const RealField anti = convolve(image.field(), kRobertsAntiDiagonal);
      mag = magnitude_of(diag, anti);
      // Rotate the diagonal pair back to column/row derivatives for direction.
      gx = RealField(image.width(), image.height());
      gy = RealField(image.width(), image.height());
      for (std::size_t i = 0; i < mag.size(); ++i) {
        gx.values()[i] = 0.5 * (anti.values()[i] - diag.values()[i]);
        gy.values()[i] = -0.5 * (diag.values()[i] + anti.values()[i]);
      }
      break;
    }
  }
  clear_roundoff(mag);
  const double peak = max_value(mag);
  if (peak > 0.0) {
    for (double& v : mag.values()) {
      v /= peak;
    }
  }
  if (thin) {
    keep_ = non_maximum_suppression(gx, gy, mag);
  } else {
    keep_ = Grid<std::uint8_t>(mag.width(), mag.height(), 0);
    for (std::size_t i = 0; i < mag.size(); ++i) {
      keep_.values()[i] = mag.values()[i] > 0.0 ? 1 : 0;
    }
  }
  magnitude_ = std::move(mag);
}

EdgeMap GradientResponse::threshold(double t) const {
  require_nonnegative_threshold(t);
  std::vector<std::uint8_t> bits(magnitude_.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = (keep_.values()[i] && magnitude_.values()[i] > t) ? 1 : 0;
  }
  return EdgeMap(magnitude_.width(), magnitude_.height(), std::move(bits));
}

EdgeMap gradient_detector(const GrayImage& image, GradientOperator op, double t, bool thin) {
  require_nonnegative_threshold(t);
  return GradientResponse(image, op, thin).threshold(t);
}

ZeroCrossResponse::ZeroCrossResponse(const GrayImage& image, const Kernel& filter)
    : response_(convolve(image.field(), filter)) {
  clear_roundoff(response_);
  double peak = 0.0;
  for (double v : response_.values()) {
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.0) {
    for (double& v : response_.values()) {
      v /= peak;
    }
  }
}

EdgeMap ZeroCrossResponse::threshold(double t) const {
  require_nonnegative_threshold(t);
  const int w = response_.width();
  const int h = response_.height();
  Grid<std::uint8_t> bits(w, h, 0);
  auto opposite = [](double a, double b) { return (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0); };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double p = response_(r, c);
      const int neighbours[2][2] = {{r, c + 1}, {r + 1, c}};
      for (const auto& n : neighbours) {
        if (n[0] >= h || n[1] >= w) {
          continue;
        }
        const double q = response_(n[0], n[1]);
        if (opposite(p, q) && std::abs(p - q) > t) {
          if (std::abs(q) < std::abs(p)) {
            bits(n[0], n[1]) = 1;
          } else {
            bits(r, c) = 1;
          }
        }
      }
      // Exact zero between a sign change.
      if (p == 0.0) {
        if (c > 0 && c + 1 < w && opposite(response_(r, c - 1), response_(r, c + 1)) &&
            std::abs(response_(r, c - 1) - response_(r, c + 1)) > t) {
          bits(r, c) = 1;
        }
        if (r > 0 && r + 1 < h && opposite(response_(r - 1, c), response_(r + 1, c)) &&
            std::abs(response_(r - 1, c) - response_(r + 1, c)) > t) {
          bits(r, c) = 1;
        }
      }
    }
  }
  return EdgeMap(w, h, std::move(bits.values()));
}

EdgeMap zerocross_detector(const GrayImage& image, double t, const Kernel& filter) {
  require_nonnegative_threshold(t);
  return ZeroCrossResponse(image, filter).threshold(t);
}

EdgeMap log_detector(const GrayImage& image, double t, double sigma) {
  require_positive_sigma(sigma);
  return zerocross_detector(image, t, log_kernel(sigma));
}

CannyResponse::CannyResponse(const GrayImage& image, double sigma) {
  const auto gauss = gaussian_kernel(sigma);
  const RealField smooth = convolve_separable(image.field(), gauss, gauss);
  const RealField gx = convolve(smooth, kSobelX);
  const RealField gy = convolve(smooth, kSobelY);
  RealField mag = magnitude_of(gx, gy);
  clear_roundoff(mag);
  const auto keep = non_maximum_suppression(gx, gy, mag);
  const double peak = max_value(mag);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag.values()[i] = (keep.values()[i] && peak > 0.0) ? mag.values()[i] / peak : 0.0;
  }
  suppressed_ = std::move(mag);
}

EdgeMap CannyResponse::hysteresis(double high, double low) const {
  if (!(low > 0.0 && low <= high && high < 1.0)) {
    throw InvalidArgument("canny requires 0 < lt <= ht < 1");
  }
  const int w = suppressed_.width();
  const int h = suppressed_.height();
  Grid<std::uint8_t> bits(w, h, 0);
  struct Pixel {
    int r;
    int c;
  };
  std::vector<Pixel> stack;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (suppressed_(r, c) > high) {
        bits(r, c) = 1;
        stack.push_back({r, c});
      }
    }
  }
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int r = p.r + dr;
        const int c = p.c + dc;
        if (r < 0 || r >= h || c < 0 || c >= w || bits(r, c) || !(suppressed_(r, c) > low)) {
          continue;
        }
        bits(r, c) = 1;
        stack.push_back({r, c});
      }
    }
  }
  return EdgeMap(w, h, std::move(bits.values()));
}

EdgeMap canny(const GrayImage& image, double high, double low, double sigma) {
  require_positive_sigma(sigma);
  if (!(low > 0.0 && low <= high && high < 1.0)) {
    throw InvalidArgument("canny requires 0 < lt <= ht < 1");
  }
  return CannyResponse(image, sigma).hysteresis(high, low);
}

EdgeMap detect(const GrayImage& image, const DetectorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DetectorKind::canny:
      return canny(image, spec.param("ht"), spec.param("lt"), spec.param("sigma"));
    case DetectorKind::sobel:
    case DetectorKind::prewitt:
    case DetectorKind::roberts: {
      const auto op = spec.kind == DetectorKind::sobel     ? GradientOperator::sobel
                      : spec.kind == DetectorKind::prewitt ? GradientOperator::prewitt
                                                           : GradientOperator::roberts;
      const auto thin = spec.params.find("thin");
      return gradient_detector(image, op, spec.param("t"), thin == spec.params.end() || thin->second != 0.0);
    }
    case DetectorKind::log:
      return log_detector(image, spec.param("t"), spec.param("sigma"));
    case DetectorKind::zerocross:
      return zerocross_detector(image, spec.param("t"), log_kernel(spec.param("sigma")));
  }
  throw InvalidArgument("unknown detector kind");
}

}  // namespace edgescore
