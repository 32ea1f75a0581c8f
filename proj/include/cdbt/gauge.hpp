#pragma once

// Gauged functions: a non-polynomial prefactor times an exact RationalFn in
// the algebraic variable z. Two gauge families are supported:
//
//   TdptGauge      (1-z)^a (1+z)^b,                 z = cos 2x
//   IsotonicGauge  z^c exp(s z/2) (2 omega)^(k/2),  z = omega x^2 / 2
//
// Exponents a, b, c are multiples of 1/4. Differentiation with respect to x is
// carried out exactly through the chain rule, so Schroedinger operators act on
// GaugedFn values without leaving exact arithmetic.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdbt/ratfn.hpp"

namespace cdbt {

struct GaugeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Gauge exponent stored as an integer number of quarters.
class Exponent {
 public:
  constexpr Exponent() = default;
  static constexpr Exponent quarters(int q) { return Exponent(q); }
  static constexpr Exponent integer(int n) { return Exponent(4 * n); }
  static constexpr Exponent half(int h) { return Exponent(2 * h); }

  constexpr int in_quarters() const { return q_; }
  constexpr bool is_integer() const { return q_ % 4 == 0; }
  constexpr int integer_value() const { return q_ / 4; }
  Rational value() const { return make_rational(q_, 4); }
  double to_double() const { return q_ / 4.0; }

  constexpr Exponent operator+(Exponent o) const { return Exponent(q_ + o.q_); }
  constexpr Exponent operator-(Exponent o) const { return Exponent(q_ - o.q_); }
  constexpr Exponent operator-() const { return Exponent(-q_); }
  constexpr bool operator==(const Exponent&) const = default;
  constexpr auto operator<=>(const Exponent&) const = default;

  std::string to_string() const {
    Rational v = value();
    return v.get_str();
  }

 private:
  constexpr explicit Exponent(int q) : q_(q) {}
  int q_ = 0;
};

/// Numeric binding for quantities that stay symbolic in the exact core.
struct NumericContext {
  double omega = 1.0;
};

/// Result of bringing two gauges to a common one.
template <class G>
struct Alignment {
  G common;
  Poly factor_a;  ///< a = common * factor_a (times a's body)
  Poly factor_b;
};

inline Poly power_of_linear(const Rational& c0, const Rational& c1, int k) {
  return pow(Poly::linear(c0, c1), k);
}

struct TdptGauge {
  Exponent one_minus;  ///< exponent of (1 - z)
  Exponent one_plus;   ///< exponent of (1 + z)

  static constexpr const char* name = "tdpt";

  bool operator==(const TdptGauge&) const = default;

  static TdptGauge trivial() { return {}; }

  friend TdptGauge operator*(const TdptGauge& a, const TdptGauge& b) {
    return {a.one_minus + b.one_minus, a.one_plus + b.one_plus};
  }
  friend TdptGauge operator/(const TdptGauge& a, const TdptGauge& b) {
    return {a.one_minus - b.one_minus, a.one_plus - b.one_plus};
  }

  static Alignment<TdptGauge> align(const TdptGauge& a, const TdptGauge& b) {
    Exponent dm = a.one_minus - b.one_minus;
    Exponent dp = a.one_plus - b.one_plus;
    if (!dm.is_integer() || !dp.is_integer())
      throw GaugeMismatch("tdpt gauges differ by a non-integer power");
    TdptGauge common{std::min(a.one_minus, b.one_minus), std::min(a.one_plus, b.one_plus)};
    auto factor = [&](const TdptGauge& g) {
      return power_of_linear(1, -1, (g.one_minus - common.one_minus).integer_value()) *
             power_of_linear(1, 1, (g.one_plus - common.one_plus).integer_value());
    };
    return {common, factor(a), factor(b)};
  }

  /// d/dz of (1-z)^a (1+z)^b R.
  static std::pair<TdptGauge, RationalFn> d_dz(const TdptGauge& g, const RationalFn& body) {
    const Rational a = g.one_minus.value();
    const Rational b = g.one_plus.value();
    // (1-z)^{a-1} (1+z)^{b-1} [ ((b-a) - (a+b) z) R + (1 - z^2) R' ]
    RationalFn lin(Poly::linear(b - a, -(a + b)));
    RationalFn one_minus_sq(Poly({Rational(1), Rational(0), Rational(-1)}));
    RationalFn out = lin * body + one_minus_sq * derivative(body);
    return {{g.one_minus - Exponent::integer(1), g.one_plus - Exponent::integer(1)}, out};
  }

  /// dz/dx = -2 (1-z)^{1/2} (1+z)^{1/2}
  static std::pair<TdptGauge, RationalFn> d_dx(const TdptGauge& g, const RationalFn& body) {
    auto [gz, bz] = d_dz(g, body);
    return {{gz.one_minus + Exponent::half(1), gz.one_plus + Exponent::half(1)}, bz * Rational(-2)};
  }

  /// Energy unit of the family: energies and potentials are plain numbers.
  static std::pair<TdptGauge, RationalFn> energy_unit() { return {trivial(), RationalFn::constant(1)}; }

  static long double z_of_x(double x, const NumericContext&) { return std::cos(2.0L * x); }
  static double unit_value(const NumericContext&) { return 1.0; }
  static constexpr double x_lo = 0.0;
  static constexpr double x_hi = 1.5707963267948966;

  static long double factor(const TdptGauge& g, long double z, const NumericContext&) {
    return std::pow(1.0L - z, static_cast<long double>(g.one_minus.to_double())) *
           std::pow(1.0L + z, static_cast<long double>(g.one_plus.to_double()));
  }

  /// Multiplies the integer-exponent gauge into the body.
  static RationalFn collapse(const TdptGauge& g, const RationalFn& body) {
    if (!g.one_minus.is_integer() || !g.one_plus.is_integer())
      throw GaugeMismatch("tdpt gauge has fractional exponents; not a rational function of z");
    auto lift = [](const Rational& c1, int k) {
      return k >= 0 ? RationalFn(power_of_linear(1, c1, k))
                    : RationalFn(Poly::constant(1), power_of_linear(1, c1, -k));
    };
    return body * lift(-1, g.one_minus.integer_value()) * lift(1, g.one_plus.integer_value());
  }

  std::string describe() const {
    return "(1-z)^(" + one_minus.to_string() + ") (1+z)^(" + one_plus.to_string() + ")";
  }
};

struct IsotonicGauge {
  Exponent z_power;     ///< exponent of z
  int exp_half = 0;     ///< s in exp(s z / 2)
  int sqrt2omega = 0;   ///< k in (2 omega)^(k/2)

  static constexpr const char* name = "isotonic";

  bool operator==(const IsotonicGauge&) const = default;

  static IsotonicGauge trivial() { return {}; }

  friend IsotonicGauge operator*(const IsotonicGauge& a, const IsotonicGauge& b) {
    return {a.z_power + b.z_power, a.exp_half + b.exp_half, a.sqrt2omega + b.sqrt2omega};
  }
  friend IsotonicGauge operator/(const IsotonicGauge& a, const IsotonicGauge& b) {
    return {a.z_power - b.z_power, a.exp_half - b.exp_half, a.sqrt2omega - b.sqrt2omega};
  }

  static Alignment<IsotonicGauge> align(const IsotonicGauge& a, const IsotonicGauge& b) {
    if (a.exp_half != b.exp_half) throw GaugeMismatch("isotonic gauges carry different exponentials");
    if (a.sqrt2omega != b.sqrt2omega) throw GaugeMismatch("isotonic gauges carry different powers of omega");
    Exponent d = a.z_power - b.z_power;
    if (!d.is_integer()) throw GaugeMismatch("isotonic gauges differ by a non-integer power of z");
    IsotonicGauge common{std::min(a.z_power, b.z_power), a.exp_half, a.sqrt2omega};
    auto factor = [&](const IsotonicGauge& g) {
      return Poly::monomial(1, (g.z_power - common.z_power).integer_value());
    };
    return {common, factor(a), factor(b)};
  }

  /// d/dz of z^c e^{s z/2} R = z^{c-1} e^{s z/2} [ c R + (s/2) z R + z R' ]
  static std::pair<IsotonicGauge, RationalFn> d_dz(const IsotonicGauge& g, const RationalFn& body) {
    const Rational c = g.z_power.value();
    RationalFn lin(Poly::linear(c, make_rational(g.exp_half, 2)));
    RationalFn out = lin * body + RationalFn(Poly::x()) * derivative(body);
    return {{g.z_power - Exponent::integer(1), g.exp_half, g.sqrt2omega}, out};
  }

  /// dz/dx = (2 omega)^{1/2} z^{1/2}
  static std::pair<IsotonicGauge, RationalFn> d_dx(const IsotonicGauge& g, const RationalFn& body) {
    auto [gz, bz] = d_dz(g, body);
    return {{gz.z_power + Exponent::half(1), gz.exp_half, gz.sqrt2omega + 1}, bz};
  }

  /// omega = (2 omega)^{2/2} / 2
  static std::pair<IsotonicGauge, RationalFn> energy_unit() {
    return {{Exponent(), 0, 2}, RationalFn::constant(make_rational(1, 2))};
  }

  static long double z_of_x(double x, const NumericContext& ctx) {
    return static_cast<long double>(ctx.omega) * x * x / 2.0L;
  }
  static double unit_value(const NumericContext& ctx) { return ctx.omega; }
  static constexpr double x_lo = 0.0;
  static constexpr double x_hi = std::numeric_limits<double>::infinity();

  static long double factor(const IsotonicGauge& g, long double z, const NumericContext& ctx) {
    return std::pow(z, static_cast<long double>(g.z_power.to_double())) *
           std::exp(static_cast<long double>(g.exp_half) * z / 2.0L) *
           std::pow(2.0L * ctx.omega, static_cast<long double>(g.sqrt2omega) / 2.0L);
  }

  static RationalFn collapse(const IsotonicGauge& g, const RationalFn& body) {
    if (!g.z_power.is_integer() || g.exp_half != 0 || g.sqrt2omega != 0)
      throw GaugeMismatch("isotonic gauge is not a rational function of z: " + g.describe());
    int k = g.z_power.integer_value();
    return k >= 0 ? body * RationalFn(Poly::monomial(1, k))
                  : body * RationalFn(Poly::constant(1), Poly::monomial(1, -k));
  }

  std::string describe() const {
    return "z^(" + z_power.to_string() + ") exp(" + std::to_string(exp_half) + " z/2) (2w)^(" +
           std::to_string(sqrt2omega) + "/2)";
  }
};

template <class G>
class GaugedFn {
 public:
  using gauge_type = G;

  GaugedFn() : gauge_(G::trivial()), body_() {}
  GaugedFn(G gauge, RationalFn body) : gauge_(std::move(gauge)), body_(std::move(body)) {}

  static GaugedFn scalar(const Rational& c) { return {G::trivial(), RationalFn::constant(c)}; }

  /// The unit energies are measured in (1 for tdpt, omega for isotonic).
  static GaugedFn energy_unit() {
    auto [g, b] = G::energy_unit();
    return {g, b};
  }

  const G& gauge() const { return gauge_; }
  const RationalFn& body() const { return body_; }
  bool is_zero() const { return body_.is_zero(); }

  GaugedFn d_dx() const {
    auto [g, b] = G::d_dx(gauge_, body_);
    return {g, b};
  }

  GaugedFn d_dz() const {
    auto [g, b] = G::d_dz(gauge_, body_);
    return {g, b};
  }

  /// n-th derivative with respect to x.
  GaugedFn d_dx(int order) const {
    GaugedFn r = *this;
    for (int i = 0; i < order; ++i) r = r.d_dx();
    return r;
  }

  /// Rational function of z when the gauge is trivial up to integer powers.
  RationalFn to_rational() const { return G::collapse(gauge_, body_); }

  long double eval_z(long double z, const NumericContext& ctx = {}) const {
    return G::factor(gauge_, z, ctx) * body_.eval(z);
  }

  long double eval_x(double x, const NumericContext& ctx = {}) const {
    return eval_z(G::z_of_x(x, ctx), ctx);
  }

  GaugedFn operator-() const { return {gauge_, -body_}; }

  friend GaugedFn operator+(const GaugedFn& a, const GaugedFn& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    auto al = G::align(a.gauge_, b.gauge_);
    return {al.common, a.body_ * RationalFn(al.factor_a) + b.body_ * RationalFn(al.factor_b)};
  }
  friend GaugedFn operator-(const GaugedFn& a, const GaugedFn& b) { return a + (-b); }

  friend GaugedFn operator*(const GaugedFn& a, const GaugedFn& b) {
    return {a.gauge_ * b.gauge_, a.body_ * b.body_};
  }
  friend GaugedFn operator/(const GaugedFn& a, const GaugedFn& b) {
    return {a.gauge_ / b.gauge_, a.body_ / b.body_};
  }
  friend GaugedFn operator*(const GaugedFn& a, const RationalFn& r) { return {a.gauge_, a.body_ * r}; }
  friend GaugedFn operator*(const RationalFn& r, const GaugedFn& a) { return a * r; }
  friend GaugedFn operator*(const GaugedFn& a, const Rational& s) { return {a.gauge_, a.body_ * s}; }
  friend GaugedFn operator*(const Rational& s, const GaugedFn& a) { return a * s; }

  std::string to_string() const { return gauge_.describe() + " * [" + cdbt::to_string(body_) + "]"; }

 private:
  G gauge_;
  RationalFn body_;
};

/// True when a and b are the same function (compared through a common gauge).
template <class G>
bool equivalent(const GaugedFn<G>& a, const GaugedFn<G>& b) {
  return (a - b).is_zero();
}

namespace detail {

template <class G>
GaugedFn<G> determinant(std::vector<std::vector<GaugedFn<G>>> m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  GaugedFn<G> acc;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<GaugedFn<G>>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<GaugedFn<G>> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    GaugedFn<G> term = m[0][col] * determinant(std::move(minor));
    acc = (col % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace detail

/// Exact Wronskian W(f_1, ..., f_m | x); rows are successive x-derivatives.
template <class G>
GaugedFn<G> wronskian(std::span<const GaugedFn<G>> fs) {
  if (fs.empty()) throw std::invalid_argument("Wronskian of an empty family");
  const std::size_t m = fs.size();
  std::vector<std::vector<GaugedFn<G>>> mat(m, std::vector<GaugedFn<G>>(m));
  for (std::size_t j = 0; j < m; ++j) {
    GaugedFn<G> d = fs[j];
    for (std::size_t i = 0; i < m; ++i) {
      mat[i][j] = d;
      if (i + 1 < m) d = d.d_dx();
    }
  }
  return detail::determinant(std::move(mat));
}

template <class G>
GaugedFn<G> wronskian(std::initializer_list<GaugedFn<G>> fs) {
  std::vector<GaugedFn<G>> v(fs);
  return wronskian(std::span<const GaugedFn<G>>(v));
}

}  // namespace cdbt
