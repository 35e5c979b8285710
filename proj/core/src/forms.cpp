#include "semiflat/forms.hpp"

#include <algorithm>

namespace semiflat {

Form6 Form6::one_form(const Eigen::Matrix<Complex, 1, 6>& row) {
  Form6 f;
  for (int k = 0; k < kDim; ++k) f.c_[1u << k] = row(k);
  return f;
}

Form6& Form6::operator+=(const Form6& o) {
  for (unsigned m = 0; m < 64; ++m) c_[m] += o.c_[m];
  return *this;
}

Form6 Form6::operator*(Complex s) const {
  Form6 f;
  for (unsigned m = 0; m < 64; ++m) f.c_[m] = c_[m] * s;
  return f;
}

Form6 Form6::conj() const {
  Form6 f;
  for (unsigned m = 0; m < 64; ++m) f.c_[m] = std::conj(c_[m]);
  return f;
}

double Form6::max_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

Form6 wedge(const Form6& a, const Form6& b) {
  Form6 out;
  for (unsigned ma = 0; ma < 64; ++ma) {
    if (a[ma] == Complex(0.0, 0.0)) continue;
    for (unsigned mb = 0; mb < 64; ++mb) {
      if ((ma & mb) != 0u || b[mb] == Complex(0.0, 0.0)) continue;
      // Count inversions: pairs (i in a, j in b) with i > j.
      int inv = 0;
      for (int j = 0; j < Form6::kDim; ++j) {
        if (mb & (1u << j)) inv += std::popcount(ma >> (j + 1));
      }
      const double sign = (inv % 2 == 0) ? 1.0 : -1.0;
      out[ma | mb] += sign * a[ma] * b[mb];
    }
  }
  return out;
}

Form6 exterior_derivative(const std::array<Form6, 6>& partials) {
  Form6 out;
  for (int k = 0; k < Form6::kDim; ++k) {
    const unsigned bit = 1u << k;
    for (unsigned m = 0; m < 64; ++m) {
      if (m & bit) continue;
      const Complex v = partials[k][m];
      if (v == Complex(0.0, 0.0)) continue;
      out[m | bit] += insertion_sign(k, m) * v;
    }
  }
  return out;
}

}  // namespace semiflat
