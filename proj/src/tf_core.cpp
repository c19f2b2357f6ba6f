#include "netid/tf_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "netid/errors.hpp"

namespace netid {

PolyQ::PolyQ(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
  normalize();
}

PolyQ PolyQ::monomial(double c, std::size_t delay) {
  std::vector<double> v(delay + 1, 0.0);
  v[delay] = c;
  return PolyQ(std::move(v));
}

void PolyQ::normalize() {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

std::optional<std::size_t> PolyQ::first_nonzero() const noexcept {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0.0) return k;
  return std::nullopt;
}

Complex PolyQ::eval(Complex x) const noexcept {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PolyQ PolyQ::operator-() const { return -1.0 * *this; }

PolyQ operator+(const PolyQ& a, const PolyQ& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
  return PolyQ(std::move(out));
}

PolyQ operator-(const PolyQ& a, const PolyQ& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return PolyQ(std::move(out));
}

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[i + k] += a.c_[i] * b.c_[k];
  return PolyQ(std::move(out));
}

PolyQ operator*(double s, const PolyQ& a) {
  std::vector<double> out(a.c_);
  for (double& x : out) x *= s;
  return PolyQ(std::move(out));
}

RationalTF::RationalTF(PolyQ num, PolyQ den) : num_(std::move(num)), den_(std::move(den)) {
  const double d0 = den_[0];
  if (d0 == 0.0) throw std::invalid_argument("RationalTF: denominator constant term must be nonzero");
  if (d0 != 1.0) {
    std::vector<double> n(num_.coeffs().begin(), num_.coeffs().end());
    std::vector<double> d(den_.coeffs().begin(), den_.coeffs().end());
    for (double& c : n) c /= d0;
    for (double& c : d) c /= d0;
    d[0] = 1.0;
    num_ = PolyQ(std::move(n));
    den_ = PolyQ(std::move(d));
  }
}

RationalTF tf_arith(const RationalTF& a, const RationalTF& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return RationalTF(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
    case ArithOp::sub:
      return RationalTF(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
    case ArithOp::mul:
      return RationalTF(a.num() * b.num(), a.den() * b.den());
  }
  throw std::logic_error("tf_arith: unknown op");
}

Complex tf_eval(const RationalTF& tf, double omega) {
  const Complex x = std::polar(1.0, -omega);
  const Complex d = tf.den().eval(x);
  double scale = 0.0;
  for (double c : tf.den().coeffs()) scale += std::abs(c);
  if (std::abs(d) <= 1e-14 * scale)
    throw EvaluationError("tf_eval: denominator vanishes at omega = " + std::to_string(omega), omega);
  return tf.num().eval(x) / d;
}

std::vector<Complex> poles(const RationalTF& tf) {
  const auto d = tf.den().coeffs();
  const auto n = static_cast<Eigen::Index>(d.size() - 1);
  if (n == 0) return {};
  // z^n + d1 z^(n-1) + ... + dn, den is monic
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) companion(0, k) = -d[static_cast<std::size_t>(k) + 1];
  for (Eigen::Index k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  return out;
}

bool is_stable(const RationalTF& tf) {
  return std::ranges::all_of(poles(tf), [](Complex p) { return std::abs(p) < 1.0 - 1e-9; });
}

std::vector<double> impulse_response(const RationalTF& tf, std::size_t n) {
  std::vector<double> h(n, 0.0);
  const auto a = tf.den().coeffs();
  for (std::size_t t = 0; t < n; ++t) {
    double s = tf.num()[t];
    for (std::size_t m = 1; m < a.size() && m <= t; ++m) s -= a[m] * h[t - m];
    h[t] = s;
  }
  return h;
}

FreqGrid::FreqGrid(std::vector<double> omegas) : w_(std::move(omegas)) {
  if (w_.empty()) throw std::invalid_argument("FreqGrid: empty grid");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    if (!(w_[k] >= 0.0 && w_[k] < two_pi)) throw std::invalid_argument("FreqGrid: omega outside [0, 2pi)");
    if (k > 0 && !(w_[k] > w_[k - 1])) throw std::invalid_argument("FreqGrid: omegas must be strictly increasing");
  }
}

FreqGrid FreqGrid::equispaced(std::size_t points) {
  if (points == 0) throw std::invalid_argument("FreqGrid: need at least one point");
  std::vector<double> w(points);
  for (std::size_t k = 0; k < points; ++k)
    w[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
  return FreqGrid(std::move(w));
}

}  // namespace netid
