#include "magbloch/integer_matrix.hpp"

#include <limits>
#include <sstream>
#include <utility>

#include "magbloch/errors.hpp"

namespace magbloch {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorKind::invariant, "IntMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

std::vector<BigInt> IntMatrix::column(std::size_t c) const {
  std::vector<BigInt> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<BigInt> IntMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::invariant, "IntMatrix product: dimension mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<BigInt> multiply(const IntMatrix& a, std::span<const BigInt> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::invariant, "IntMatrix * vector: dimension mismatch");
  std::vector<BigInt> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (x[j] != 0) out[i] += a(i, j) * x[j];
  return out;
}

std::vector<BigInt> multiply(const IntMatrix& a, std::span<const std::int64_t> x) {
  const auto big = to_big(x);
  return multiply(a, std::span<const BigInt>(big));
}

std::int64_t to_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorKind::numeric, "integer overflow: " + value.str() + " does not fit in 64 bits");
  return value.convert_to<std::int64_t>();
}

IntVector to_int64(std::span<const BigInt> values) {
  IntVector out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_int64(v));
  return out;
}

std::vector<BigInt> to_big(std::span<const std::int64_t> values) {
  return {values.begin(), values.end()};
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
    os << "]\n";
  }
  return os.str();
}

std::vector<BigInt> SmithDecomposition::invariants() const {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

namespace {

// Keeps U * D * V == A and left * A * right == D through every elementary step.
class SmithState {
 public:
  explicit SmithState(const IntMatrix& a)
      : d_(a),
        u_(IntMatrix::identity(a.rows())),
        v_(IntMatrix::identity(a.cols())),
        left_(IntMatrix::identity(a.rows())),
        right_(IntMatrix::identity(a.cols())) {}

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < d_.cols(); ++c) std::swap(d_(i, c), d_(j, c));
    for (std::size_t c = 0; c < left_.cols(); ++c) std::swap(left_(i, c), left_(j, c));
    for (std::size_t r = 0; r < u_.rows(); ++r) std::swap(u_(r, i), u_(r, j));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < d_.rows(); ++r) std::swap(d_(r, i), d_(r, j));
    for (std::size_t r = 0; r < right_.rows(); ++r) std::swap(right_(r, i), right_(r, j));
    for (std::size_t c = 0; c < v_.cols(); ++c) std::swap(v_(i, c), v_(j, c));
  }

  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const BigInt& k) {
    for (std::size_t c = 0; c < d_.cols(); ++c) d_(i, c) += k * d_(j, c);
    for (std::size_t c = 0; c < left_.cols(); ++c) left_(i, c) += k * left_(j, c);
    for (std::size_t r = 0; r < u_.rows(); ++r) u_(r, j) -= k * u_(r, i);
  }

  // col_i += k * col_j
  void add_col(std::size_t i, std::size_t j, const BigInt& k) {
    for (std::size_t r = 0; r < d_.rows(); ++r) d_(r, i) += k * d_(r, j);
    for (std::size_t r = 0; r < right_.rows(); ++r) right_(r, i) += k * right_(r, j);
    for (std::size_t c = 0; c < v_.cols(); ++c) v_(j, c) -= k * v_(i, c);
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < d_.cols(); ++c) d_(i, c) = -d_(i, c);
    for (std::size_t c = 0; c < left_.cols(); ++c) left_(i, c) = -left_(i, c);
    for (std::size_t r = 0; r < u_.rows(); ++r) u_(r, i) = -u_(r, i);
  }

  IntMatrix& d() { return d_; }

  SmithDecomposition finish(std::size_t rank) && {
    return {std::move(u_), std::move(d_), std::move(v_), std::move(left_), std::move(right_), rank};
  }

 private:
  IntMatrix d_, u_, v_, left_, right_;
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a, const SmithOptions& options) {
  if (a.rows() > options.max_dimension || a.cols() > options.max_dimension)
    throw Error(ErrorKind::numeric, "smith_normal_form: matrix exceeds the configured dimension bound");

  SmithState state(a);
  IntMatrix& d = state.d();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::size_t rank = 0;

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool empty = false;
    while (true) {
      // Pivot: smallest nonzero magnitude in the trailing block, row-major first hit.
      std::size_t pr = m, pc = n;
      BigInt best;
      for (std::size_t r = t; r < m; ++r)
        for (std::size_t c = t; c < n; ++c) {
          const BigInt& x = d(r, c);
          if (x == 0) continue;
          const BigInt mag = abs(x);
          if (pr == m || mag < best) {
            best = mag;
            pr = r;
            pc = c;
          }
        }
      if (pr == m) {
        empty = true;
        break;
      }
      state.swap_rows(t, pr);
      state.swap_cols(t, pc);

      bool clean = true;
      for (std::size_t r = t + 1; r < m; ++r) {
        if (d(r, t) == 0) continue;
        const BigInt q = d(r, t) / d(t, t);
        if (q != 0) state.add_row(r, t, -q);
        if (d(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        if (d(t, c) == 0) continue;
        const BigInt q = d(t, c) / d(t, t);
        if (q != 0) state.add_col(c, t, -q);
        if (d(t, c) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold a non-divisible row into the pivot row and reduce again.
      bool divisible = true;
      for (std::size_t r = t + 1; r < m && divisible; ++r)
        for (std::size_t c = t + 1; c < n; ++c)
          if (d(r, c) % d(t, t) != 0) {
            state.add_row(t, r, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (empty) break;
    if (d(t, t) < 0) state.negate_row(t);
    ++rank;
  }
  return std::move(state).finish(rank);
}

std::optional<std::vector<BigInt>> solve_integer(const IntMatrix& a, std::span<const BigInt> b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::invariant, "solve_integer: dimension mismatch");
  const SmithDecomposition snf = smith_normal_form(a);
  const std::vector<BigInt> rhs = multiply(snf.left, b);
  std::vector<BigInt> y(a.cols());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (i < snf.rank) {
      const BigInt& di = snf.D(i, i);
      if (rhs[i] % di != 0) return std::nullopt;
      y[i] = rhs[i] / di;
    } else if (rhs[i] != 0) {
      return std::nullopt;
    }
  }
  return multiply(snf.right, std::span<const BigInt>(y));
}

}  // namespace magbloch
