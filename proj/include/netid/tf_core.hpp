#pragma once

// Polynomials and rational transfer functions in the delay operator q^-1.
//
// A polynomial c0 + c1 q^-1 + ... + cn q^-n is stored as {c0, ..., cn}.
// Frequency responses substitute q^-1 -> e^{-j omega}.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace netid {

using Complex = std::complex<double>;

class PolyQ {
 public:
  /// The zero polynomial.
  PolyQ() : c_{0.0} {}
  explicit PolyQ(std::vector<double> coeffs);
  PolyQ(std::initializer_list<double> coeffs) : PolyQ(std::vector<double>(coeffs)) {}

  static PolyQ constant(double c) { return PolyQ({c}); }
  /// c q^-delay
  static PolyQ monomial(double c, std::size_t delay);

  std::span<const double> coeffs() const noexcept { return c_; }
  std::size_t degree() const noexcept { return c_.size() - 1; }
  bool is_zero() const noexcept { return c_.size() == 1 && c_[0] == 0.0; }
  /// Coefficient of q^-k; zero past the degree.
  double operator[](std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }
  /// Index of the first nonzero coefficient, empty for the zero polynomial.
  std::optional<std::size_t> first_nonzero() const noexcept;

  /// Horner evaluation at x = q^-1.
  Complex eval(Complex x) const noexcept;

  PolyQ operator-() const;
  friend PolyQ operator+(const PolyQ& a, const PolyQ& b);
  friend PolyQ operator-(const PolyQ& a, const PolyQ& b);
  friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
  friend PolyQ operator*(double s, const PolyQ& a);
  friend bool operator==(const PolyQ&, const PolyQ&) = default;

 private:
  void normalize();
  std::vector<double> c_;
};

/// num(q^-1) / den(q^-1) with den[0] == 1. Proper by construction.
class RationalTF {
 public:
  RationalTF() : num_(), den_(PolyQ::constant(1.0)) {}
  /// Throws std::invalid_argument when den[0] == 0.
  RationalTF(PolyQ num, PolyQ den);
  explicit RationalTF(PolyQ num) : RationalTF(std::move(num), PolyQ::constant(1.0)) {}

  static RationalTF fir(std::vector<double> taps) { return RationalTF(PolyQ(std::move(taps))); }

  const PolyQ& num() const noexcept { return num_; }
  const PolyQ& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_fir() const noexcept { return den_.degree() == 0; }
  /// Delay before the first nonzero numerator tap; 0 means direct feedthrough.
  std::optional<std::size_t> relative_degree() const noexcept { return num_.first_nonzero(); }
  /// Zero-delay coefficient b0 (den is monic).
  double feedthrough() const noexcept { return num_[0]; }

  /// Divides num and den by den[0]. Idempotent.
  RationalTF normalized() const { return RationalTF(num_, den_); }

  friend bool operator==(const RationalTF&, const RationalTF&) = default;

 private:
  PolyQ num_;
  PolyQ den_;
};

enum class ArithOp { add, sub, mul };

/// Exact polynomial arithmetic; no pole-zero cancellation is attempted.
RationalTF tf_arith(const RationalTF& a, const RationalTF& b, ArithOp op);

inline RationalTF operator+(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::add); }
inline RationalTF operator-(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::sub); }
inline RationalTF operator*(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::mul); }

/// Frequency response at omega. Throws EvaluationError when the denominator
/// vanishes at e^{j omega}.
Complex tf_eval(const RationalTF& tf, double omega);

/// Poles in the z-plane (roots of z^n den(1/z)), via companion-matrix eigenvalues.
std::vector<Complex> poles(const RationalTF& tf);

/// True iff every pole satisfies |p| < 1 - 1e-9.
bool is_stable(const RationalTF& tf);

/// First n impulse-response samples by long division of num by den.
std::vector<double> impulse_response(const RationalTF& tf, std::size_t n);

/// Angular frequencies in [0, 2 pi), strictly increasing.
class FreqGrid {
 public:
  explicit FreqGrid(std::vector<double> omegas);
  /// points equispaced samples 2 pi k / points, k = 0..points-1.
  static FreqGrid equispaced(std::size_t points);

  std::span<const double> omegas() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t k) const noexcept { return w_[k]; }

 private:
  std::vector<double> w_;
};

}  // namespace netid
