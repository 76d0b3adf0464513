#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgescore/raster.hpp"

namespace edgescore {

enum class DetectorKind { canny, sobel, prewitt, roberts, log, zerocross };

std::string_view to_string(DetectorKind kind);
/// Throws InvalidArgument for an unknown name.
DetectorKind parse_detector_kind(std::string_view name);

/// Detector plus named parameters:
///   canny: ht, lt, sigma       sobel/prewitt/roberts: t (and optional thin = 0/1)
///   log/zerocross: t, sigma
struct DetectorSpec {
  DetectorKind kind = DetectorKind::canny;
  std::map<std::string, double> params;

  double param(const std::string& name) const;
  /// Throws InvalidArgument on a missing or out-of-range parameter.
  void validate() const;
};

/// Odd-sized correlation stencil, row-major taps, anchored at its centre.
struct Kernel {
  int width = 1;
  int height = 1;
  std::vector<double> taps{1.0};
};

/// Correlation with replicate-border padding; output has the input's size.
/// Throws InvalidArgument for even kernel dimensions.
RealField convolve(const RealField& image, const Kernel& kernel);
/// Row pass with `horizontal` then column pass with `vertical` (both odd length).
RealField convolve_separable(const RealField& image, std::span<const double> horizontal,
                             std::span<const double> vertical);

/// Sampled Gaussian, half-width ceil(4 sigma), normalized to sum 1.
std::vector<double> gaussian_kernel(double sigma);
/// Laplacian of Gaussian over the same support, shifted to zero mean.
Kernel log_kernel(double sigma);

enum class GradientOperator { sobel, prewitt, roberts };

/// Gradient magnitude normalized by its maximum, optionally thinned by
/// non-maximum suppression. Reusable across thresholds.
class GradientResponse {
 public:
  GradientResponse(const GrayImage& image, GradientOperator op, bool thin = true);
  /// Edge iff normalized magnitude > threshold (and survives thinning).
  EdgeMap threshold(double t) const;
  const RealField& magnitude() const { return magnitude_; }

 private:
  RealField magnitude_;
  Grid<std::uint8_t> keep_;
};

EdgeMap gradient_detector(const GrayImage& image, GradientOperator op, double t, bool thin = true);

/// Zero crossings of a filter response, normalized by the maximum |response|.
class ZeroCrossResponse {
 public:
  ZeroCrossResponse(const GrayImage& image, const Kernel& filter);
  /// Marks a sign change between 4-neighbours whose normalized contrast exceeds
  /// `t`; the pixel closer to zero is marked (the first one on ties).
  EdgeMap threshold(double t) const;
  const RealField& response() const { return response_; }

 private:
  RealField response_;
};

EdgeMap zerocross_detector(const GrayImage& image, double t, const Kernel& filter);
EdgeMap log_detector(const GrayImage& image, double t, double sigma);

/// Gaussian smoothing, Sobel gradients, 4-direction non-maximum suppression and
/// normalization by the maximum magnitude. Reusable across hysteresis thresholds.
class CannyResponse {
 public:
  CannyResponse(const GrayImage& image, double sigma);
  /// Strong: > high. Weak: > low, kept when 8-connected to a strong pixel.
  EdgeMap hysteresis(double high, double low) const;
  const RealField& suppressed() const { return suppressed_; }

 private:
  RealField suppressed_;
};

EdgeMap canny(const GrayImage& image, double high, double low, double sigma);

/// Runs the detector described by `spec`.
EdgeMap detect(const GrayImage& image, const DetectorSpec& spec);

}  // namespace edgescore
