#pragma once

// One- and two-parameter matrix families consumed by the branch tracker.

#include "kreinspec/numkit.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kreinspec {

enum class SpectrumOrder { RealDescending, RealAscending };

/// Which eigenvalues a sweep follows. keep == 0 tracks the whole spectrum;
/// otherwise the first `keep` eigenvalues in `order` at the sweep start are
/// continued.
struct SpectrumWindow {
  std::size_t keep = 0;
  SpectrumOrder order = SpectrumOrder::RealDescending;
};

class MatrixFamily {
 public:
  using Builder = std::function<Eigen::MatrixXcd(double)>;

  MatrixFamily(std::string name, Builder builder, SpectrumWindow window = {});

  const std::string& name() const { return name_; }
  const SpectrumWindow& window() const { return window_; }

  Eigen::MatrixXcd matrix(double parameter) const;

  /// Full spectrum sorted by the window order, ties broken by imaginary part.
  std::vector<cplx> spectrum(double parameter) const;

 private:
  std::string name_;
  Builder builder_;
  SpectrumWindow window_;
};

/// Maps a secondary parameter value to the one-parameter family in the
/// primary parameter.
using TwoParameterFamily = std::function<MatrixFamily(double secondary)>;

/// Sort in place by the window order.
void sort_spectrum(std::vector<cplx>& values, SpectrumOrder order);

}  // namespace kreinspec
