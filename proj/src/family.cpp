#include "kreinspec/family.hpp"

#include "kreinspec/error.hpp"

#include <algorithm>
#include <utility>

namespace kreinspec {

MatrixFamily::MatrixFamily(std::string name, Builder builder, SpectrumWindow window)
    : name_(std::move(name)), builder_(std::move(builder)), window_(window) {
  if (!builder_) throw InvalidInput("MatrixFamily: empty builder");
}

Eigen::MatrixXcd MatrixFamily::matrix(double parameter) const { return builder_(parameter); }

std::vector<cplx> MatrixFamily::spectrum(double parameter) const {
  auto values = dense_eigs(matrix(parameter));
  sort_spectrum(values, window_.order);
  return values;
}

void sort_spectrum(std::vector<cplx>& values, SpectrumOrder order) {
  const bool descending = order == SpectrumOrder::RealDescending;
  std::sort(values.begin(), values.end(), [descending](cplx a, cplx b) {
    if (a.real() != b.real()) return descending ? a.real() > b.real() : a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace kreinspec
