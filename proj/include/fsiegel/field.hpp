#pragma once

// Arithmetic in F = GF(q), q an odd prime, and in E = GF(q^2) = F(s) with s^2 = eps,
// eps the smallest quadratic non-residue mod q.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "fsiegel/errors.hpp"

namespace fsiegel {

constexpr bool is_odd_prime(int q) {
  if (q < 3 || q % 2 == 0) return false;
  for (int d = 3; d * d <= q; d += 2) {
    if (q % d == 0) return false;
  }
  return true;
}

constexpr int mod_pow(int base, int exp, int q) {
  long long result = 1;
  long long b = ((base % q) + q) % q;
  while (exp > 0) {
    if (exp & 1) result = result * b % q;
    b = b * b % q;
    exp >>= 1;
  }
  return static_cast<int>(result);
}

/// Legendre symbol of a mod q for a != 0: +1 or -1.
constexpr int legendre(int a, int q) {
  int r = mod_pow(a, (q - 1) / 2, q);
  return r == 1 ? 1 : -1;
}

constexpr int smallest_nonresidue(int q) {
  for (int a = 2; a < q; ++a) {
    if (legendre(a, q) == -1) return a;
  }
  return 0;
}

struct FieldParams {
  int q = 0;
  int eps = 0;  // s^2 = eps
};

/// Validates q and picks eps as the smallest non-residue.
inline FieldParams make_fields(int q) {
  if (!is_odd_prime(q)) {
    throw ParameterError("q must be an odd prime, got " + std::to_string(q));
  }
  return FieldParams{q, smallest_nonresidue(q)};
}

/// +1 iff -1 is a square in GF(q).
inline int epsilon_F(int q) {
  make_fields(q);
  return legendre(q - 1, q);
}

/// +1 iff -2 is a square in GF(q).
inline int tau_F(int q) {
  make_fields(q);
  return legendre(q - 2, q);
}

/// Element re + im*s of GF(Q^2). Elements with im == 0 form the subfield GF(Q).
template <int Q>
class Fq2 {
  static_assert(is_odd_prime(Q), "Fq2 requires an odd prime");

 public:
  static constexpr int q = Q;
  static constexpr int eps = smallest_nonresidue(Q);
  static constexpr int order = Q * Q;

  constexpr Fq2() = default;
  // Implicit so that Eigen can build Scalar(0) and Scalar(1).
  constexpr Fq2(int a) : re_(reduce(a)), im_(0) {}  // NOLINT(google-explicit-constructor)
  constexpr Fq2(int a, int b) : re_(reduce(a)), im_(reduce(b)) {}

  static constexpr Fq2 s() { return Fq2(0, 1); }

  /// Position in the fixed scan order re + Q*im used by every search in the library.
  constexpr int index() const { return re_ + Q * im_; }
  static constexpr Fq2 from_index(int k) { return Fq2(k % Q, k / Q); }

  constexpr int re() const { return re_; }
  constexpr int im() const { return im_; }
  constexpr bool is_zero() const { return re_ == 0 && im_ == 0; }
  constexpr bool is_rational() const { return im_ == 0; }

  constexpr Fq2 conj() const { return Fq2(re_, -im_); }
  /// N(x) = x * conj(x), an element of GF(Q).
  constexpr Fq2 norm() const { return Fq2(re_ * re_ - eps * im_ * im_); }
  constexpr Fq2 trace() const { return Fq2(2 * re_); }

  Fq2 inverse() const {
    if (is_zero()) throw ParameterError("division by zero in GF(q^2)");
    const int n = norm().re();
    const int n_inv = mod_pow(n, Q - 2, Q);
    return Fq2(re_ * n_inv, -im_ * n_inv);
  }

  constexpr Fq2 pow(long long e) const {
    Fq2 result(1);
    Fq2 b = *this;
    while (e > 0) {
      if (e & 1) result *= b;
      b *= b;
      e >>= 1;
    }
    return result;
  }

  constexpr Fq2& operator+=(const Fq2& o) {
    re_ = static_cast<std::uint16_t>((re_ + o.re_) % Q);
    im_ = static_cast<std::uint16_t>((im_ + o.im_) % Q);
    return *this;
  }
  constexpr Fq2& operator-=(const Fq2& o) {
    re_ = static_cast<std::uint16_t>((re_ + Q - o.re_) % Q);
    im_ = static_cast<std::uint16_t>((im_ + Q - o.im_) % Q);
    return *this;
  }
  constexpr Fq2& operator*=(const Fq2& o) {
    const int r = (re_ * o.re_ + (eps * im_ % Q) * o.im_) % Q;
    const int i = (re_ * o.im_ + im_ * o.re_) % Q;
    re_ = static_cast<std::uint16_t>(r);
    im_ = static_cast<std::uint16_t>(i);
    return *this;
  }
  Fq2& operator/=(const Fq2& o) { return *this *= o.inverse(); }

  friend constexpr Fq2 operator+(Fq2 a, const Fq2& b) { return a += b; }
  friend constexpr Fq2 operator-(Fq2 a, const Fq2& b) { return a -= b; }
  friend constexpr Fq2 operator*(Fq2 a, const Fq2& b) { return a *= b; }
  friend Fq2 operator/(Fq2 a, const Fq2& b) { return a /= b; }
  friend constexpr Fq2 operator-(const Fq2& a) { return Fq2(-a.re_, -a.im_); }
  friend constexpr bool operator==(const Fq2& a, const Fq2& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend constexpr bool operator!=(const Fq2& a, const Fq2& b) { return !(a == b); }

 private:
  static constexpr std::uint16_t reduce(int a) {
    return static_cast<std::uint16_t>(((a % Q) + Q) % Q);
  }

  std::uint16_t re_ = 0;
  std::uint16_t im_ = 0;
};

template <int Q>
constexpr Fq2<Q> conj(const Fq2<Q>& x) {
  return x.conj();
}
template <int Q>
constexpr Fq2<Q> norm(const Fq2<Q>& x) {
  return x.norm();
}
template <int Q>
constexpr Fq2<Q> trace(const Fq2<Q>& x) {
  return x.trace();
}

/// First t in scan order with t^2 = x, if any.
template <int Q>
std::optional<Fq2<Q>> sqrt_in_E(const Fq2<Q>& x) {
  for (int k = 0; k < Fq2<Q>::order; ++k) {
    const auto t = Fq2<Q>::from_index(k);
    if (t * t == x) return t;
  }
  return std::nullopt;
}

/// First t in scan order with N(t) = a, for a in F^x.
template <int Q>
Fq2<Q> solve_norm(const Fq2<Q>& a) {
  if (!a.is_rational() || a.is_zero()) {
    throw ParameterError("solve_norm requires a nonzero element of F");
  }
  for (int k = 1; k < Fq2<Q>::order; ++k) {
    const auto t = Fq2<Q>::from_index(k);
    if (t.norm() == a) return t;
  }
  throw InternalError("norm map not surjective");
}

/// d != 0 with u = d / conj(d), for N(u) = 1.
template <int Q>
Fq2<Q> hilbert90(const Fq2<Q>& u) {
  if (u.norm() != Fq2<Q>(1)) throw ParameterError("hilbert90 requires N(u) = 1");
  if (u == Fq2<Q>(-1)) return Fq2<Q>::s();
  return Fq2<Q>(1) + u;
}

/// `a` for elements of F, `a+b*s` otherwise.
template <int Q>
std::string to_text(const Fq2<Q>& x) {
  if (x.is_rational()) return std::to_string(x.re());
  return std::to_string(x.re()) + "+" + std::to_string(x.im()) + "*s";
}

namespace detail {
inline std::optional<int> parse_coefficient(std::string_view text, int q) {
  if (text.empty() || text.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  // Canonical form only: no leading zeros, range 0..q-1.
  if (text.size() > 1 && text.front() == '0') return std::nullopt;
  if (v >= q) return std::nullopt;
  return v;
}
}  // namespace detail

/// Inverse of to_text; accepts only the canonical encoding.
template <int Q>
Fq2<Q> parse_scalar(std::string_view text) {
  const auto fail = [&] { return ParameterError("bad field element '" + std::string(text) + "'"); };
  const auto plus = text.find('+');
  if (plus == std::string_view::npos) {
    const auto a = detail::parse_coefficient(text, Q);
    if (!a) throw fail();
    return Fq2<Q>(*a);
  }
  const auto head = text.substr(0, plus);
  auto tail = text.substr(plus + 1);
  if (tail.size() < 3 || tail.substr(tail.size() - 2) != "*s") throw fail();
  tail.remove_suffix(2);
  const auto a = detail::parse_coefficient(head, Q);
  const auto b = detail::parse_coefficient(tail, Q);
  if (!a || !b || *b == 0) throw fail();
  return Fq2<Q>(*a, *b);
}

template <int Q>
std::ostream& operator<<(std::ostream& os, const Fq2<Q>& x) {
  return os << to_text(x);
}

}  // namespace fsiegel

template <int Q>
struct std::hash<fsiegel::Fq2<Q>> {
  std::size_t operator()(const fsiegel::Fq2<Q>& x) const noexcept {
    return static_cast<std::size_t>(x.index());
  }
};
