#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace magbloch {

using BigInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<std::int64_t>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  bool is_zero() const;
  std::vector<BigInt> column(std::size_t c) const;
  std::vector<BigInt> row(std::size_t r) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

std::vector<BigInt> multiply(const IntMatrix& a, std::span<const BigInt> x);
std::vector<BigInt> multiply(const IntMatrix& a, std::span<const std::int64_t> x);

/// Narrowing with overflow detection; throws Error(numeric) if out of range.
std::int64_t to_int64(const BigInt& value);
IntVector to_int64(std::span<const BigInt> values);
std::vector<BigInt> to_big(std::span<const std::int64_t> values);

std::string to_string(const IntMatrix& m);

/// A = U * D * V with U, V unimodular and D diagonal, d_1 | d_2 | ... and d_i >= 0.
/// The inverse transforms are kept alongside: left * A * right = D with
/// left = U^-1 and right = V^-1.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix left;
  IntMatrix right;
  std::size_t rank = 0;

  /// Nonzero diagonal entries of D in order.
  std::vector<BigInt> invariants() const;
};

struct SmithOptions {
  /// Upper bound on either dimension of the input.
  std::size_t max_dimension = 4096;
};

/// Deterministic pivoting: smallest nonzero |entry| in the trailing block,
/// lowest (row, column) on ties.
SmithDecomposition smith_normal_form(const IntMatrix& a, const SmithOptions& options = {});

/// Integer solution x of A x = b (free variables set to zero), or nullopt if none exists.
std::optional<std::vector<BigInt>> solve_integer(const IntMatrix& a, std::span<const BigInt> b);

}  // namespace magbloch
