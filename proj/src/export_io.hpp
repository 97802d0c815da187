#ifndef MOPRL_CLI_EXPORT_IO_HPP
#define MOPRL_CLI_EXPORT_IO_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "moprl/matrix.hpp"

namespace moprl::cli {

// Automatic cell rendering: integers stay integers, everything else is
// scientific at 17 significant digits.
template <class T>
std::string render_auto(const T& v) {
  if constexpr (ScalarTraits<T>::is_exact) {
    if (denominator(v) == 1) return numerator(v).str();
    return decimal_string(v, 17);
  } else {
    if (v == floor(v) && abs_value(v) < T(1e15)) {
      std::ostringstream os;
      os << v.template convert_to<long long>();
      return os.str();
    }
    return decimal_string(v, 17);
  }
}

template <class T>
std::string render_fixed(const T& v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits);
  if constexpr (ScalarTraits<T>::is_exact) {
    const unsigned save = BigFloat::default_precision();
    BigFloat::default_precision(static_cast<unsigned>(digits) + 24);
    os << BigFloat(v);
    BigFloat::default_precision(save);
  } else {
    os << v;
  }
  return os.str();
}

// Decimal rows; digits < 0 picks the automatic rendering.
template <class T>
void write_matrix_csv(const std::filesystem::path& path, const Matrix<T>& m, int digits) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << (digits < 0 ? render_auto(m(i, j)) : render_fixed(m(i, j), digits));
    }
    out << "\n";
  }
}

// Structured text: exact rationals as num/den (full-precision decimals on
// the float backend) under a metadata header.
template <class T>
void write_matrix_txt(const std::filesystem::path& path, const std::string& name,
                      const Matrix<T>& m, const std::string& backend, unsigned precision_bits,
                      long N, const std::string& validity) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "# matrix: " << name << "\n";
  out << "# backend: " << backend << "\n";
  if (backend == "float") out << "# precision_bits: " << precision_bits << "\n";
  out << "# N: " << N << "\n";
  out << "# valid: " << validity << "\n";
  const int digits = static_cast<int>(std::ceil(precision_bits * 0.3010299956639812)) + 2;
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      if constexpr (ScalarTraits<T>::is_exact)
        out << exact_string(m(i, j));
      else
        out << decimal_string(m(i, j), digits);
    }
    out << "\n";
  }
}

}  // namespace moprl::cli

#endif
