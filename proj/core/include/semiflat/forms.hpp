#pragma once

#include <array>
#include <bit>
#include <complex>

#include <Eigen/Core>

namespace semiflat {

using Complex = std::complex<double>;

/// Complex differential form on R^6. Coefficient of dx^{i1} ^ ... ^ dx^{ik}
/// (i1 < ... < ik) is stored at the bitmask with those bits set.
class Form6 {
 public:
  static constexpr int kDim = 6;
  static constexpr unsigned kTop = (1u << kDim) - 1u;

  Form6() { c_.fill(Complex(0.0, 0.0)); }
  static Form6 one_form(const Eigen::Matrix<Complex, 1, 6>& row);

  Complex& operator[](unsigned mask) { return c_[mask]; }
  const Complex& operator[](unsigned mask) const { return c_[mask]; }

  Form6& operator+=(const Form6& o);
  Form6 operator+(const Form6& o) const { return Form6(*this) += o; }
  Form6 operator*(Complex s) const;
  Form6 conj() const;
  double max_abs() const;

 private:
  std::array<Complex, 64> c_;
};

/// Sign of moving the basis element k in front of the increasing word `mask`.
inline double insertion_sign(int k, unsigned mask) {
  return (std::popcount(mask & ((1u << k) - 1u)) % 2 == 0) ? 1.0 : -1.0;
}

Form6 wedge(const Form6& a, const Form6& b);

/// d F given the partial derivatives of every coefficient: partials[k][mask]
/// holds d(F_mask)/dx^k.
Form6 exterior_derivative(const std::array<Form6, 6>& partials);

}  // namespace semiflat
