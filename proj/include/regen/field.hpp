#pragma once

// Finite fields for random linear network coding.

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "regen/error.hpp"

namespace regen {

namespace detail {

struct Gf256Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<unsigned, 256> log{};
};

constexpr Gf256Tables build_gf256_tables(unsigned polynomial) {
  Gf256Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= polynomial;
  }
  // Doubled so log[a] + log[b] never needs a modulo.
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Gf256Tables kGf256 = build_gf256_tables(0x11D);

}  // namespace detail

/// GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D).
/// The element 2 generates the multiplicative group.
class Gf256 {
 public:
  using value_type = std::uint8_t;
  static constexpr unsigned order = 256;
  static constexpr unsigned polynomial = 0x11D;
  static constexpr std::string_view name = "gf256";

  static constexpr value_type zero() { return 0; }
  static constexpr value_type one() { return 1; }

  static constexpr value_type add(value_type a, value_type b) { return a ^ b; }
  static constexpr value_type sub(value_type a, value_type b) { return a ^ b; }

  static constexpr value_type mul(value_type a, value_type b) {
    if (a == 0 || b == 0) return 0;
    return detail::kGf256.exp[detail::kGf256.log[a] + detail::kGf256.log[b]];
  }

  static constexpr value_type inv(value_type a) {
    if (a == 0) throw Error(ErrorCode::InvalidArgument, "zero has no inverse");
    return detail::kGf256.exp[255 - detail::kGf256.log[a]];
  }

  static constexpr value_type from_index(unsigned i) { return static_cast<value_type>(i); }
};

/// Integers modulo a prime P.
template <unsigned P>
class PrimeField {
  static_assert(P >= 2 && P < 65536);

 public:
  using value_type = std::uint32_t;
  static constexpr unsigned order = P;
  static constexpr std::string_view name = P == 257 ? "p257" : P == 2 ? "gf2" : "prime";

  static constexpr value_type zero() { return 0; }
  static constexpr value_type one() { return 1; }

  static constexpr value_type add(value_type a, value_type b) { return (a + b) % P; }
  static constexpr value_type sub(value_type a, value_type b) { return (a + P - b) % P; }
  static constexpr value_type mul(value_type a, value_type b) { return (a * b) % P; }

  static constexpr value_type inv(value_type a) {
    if (a % P == 0) throw Error(ErrorCode::InvalidArgument, "zero has no inverse");
    // Fermat: a^(P-2)
    value_type result = 1;
    value_type base = a % P;
    unsigned e = P - 2;
    while (e > 0) {
      if (e & 1u) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  static constexpr value_type from_index(unsigned i) { return i % P; }
};

using Prime257 = PrimeField<257>;
using Gf2 = PrimeField<2>;

template <typename Field, typename Rng>
typename Field::value_type random_element(Rng& rng) {
  std::uniform_int_distribution<unsigned> dist(0, Field::order - 1);
  return Field::from_index(dist(rng));
}

/// Row-major matrix over Field.
template <typename Field>
class Matrix {
 public:
  using value_type = typename Field::value_type;

  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, Field::zero()) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  value_type& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  value_type operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  /// Appends the rows of other (same column count).
  void append_rows(const Matrix& other) {
    if (rows_ == 0 && cols_ == 0) cols_ = other.cols_;
    if (other.cols_ != cols_) throw Error(ErrorCode::InvalidArgument, "column mismatch");
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    rows_ += other.rows_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<value_type> data_;
};

template <typename Field, typename Rng>
Matrix<Field> random_matrix(int rows, int cols, Rng& rng) {
  Matrix<Field> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = random_element<Field>(rng);
  }
  return m;
}

/// Product a * b.
template <typename Field>
Matrix<Field> multiply(const Matrix<Field>& a, const Matrix<Field>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  Matrix<Field> out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int t = 0; t < a.cols(); ++t) {
      const auto s = a(i, t);
      if (s == Field::zero()) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out(i, j) = Field::add(out(i, j), Field::mul(s, b(t, j)));
      }
    }
  }
  return out;
}

/// Rank by Gaussian elimination.
template <typename Field>
int rank(Matrix<Field> m) {
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int pivot = -1;
    for (int i = r; i < m.rows(); ++i) {
      if (m(i, c) != Field::zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(r, j));
    }
    const auto inv = Field::inv(m(r, c));
    for (int i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == Field::zero()) continue;
      const auto factor = Field::mul(m(i, c), inv);
      for (int j = c; j < m.cols(); ++j) {
        m(i, j) = Field::sub(m(i, j), Field::mul(factor, m(r, j)));
      }
    }
    ++r;
  }
  return r;
}

}  // namespace regen
