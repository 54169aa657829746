#include "sptri/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <string_view>

#include "sptri/error.hpp"
#include "sptri/mu.hpp"

namespace sptri::lattice {

namespace {

struct OverflowError {};

struct Int64Ring {
  using T = std::int64_t;
  static bool is_unit(T v) { return v == 1 || v == -1; }
  static T unit_inverse(T u) { return u; }
  static T mul(T a, T b) {
    T out;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError{};
    return out;
  }
  static T sub_mul(T acc, T f, T x) {
    T out;
    if (__builtin_sub_overflow(acc, mul(f, x), &out)) throw OverflowError{};
    return out;
  }
  static T from_small(std::int64_t v) { return v; }
  static T from_big(const BigInt& v) {
    if (!v.fits_slong_p()) throw OverflowError{};
    return v.get_si();
  }
  static BigInt to_big(T v) { return BigInt(static_cast<long>(v)); }
  static bool is_zero(T v) { return v == 0; }
};

struct BigRing {
  using T = BigInt;
  static bool is_unit(const T& v) { return v == 1 || v == -1; }
  static T unit_inverse(const T& u) { return u; }
  static T mul(const T& a, const T& b) { return a * b; }
  static T sub_mul(const T& acc, const T& f, const T& x) { return acc - f * x; }
  static T from_small(std::int64_t v) { return BigInt(static_cast<long>(v)); }
  static T from_big(const BigInt& v) { return v; }
  static BigInt to_big(const T& v) { return v; }
  static bool is_zero(const T& v) { return v == 0; }
};

struct F2Ring {
  using T = std::uint8_t;
  static bool is_unit(T v) { return v != 0; }
  static T unit_inverse(T u) { return u; }
  static T mul(T a, T b) { return a & b; }
  static T sub_mul(T acc, T f, T x) { return acc ^ (f & x); }
  static T from_small(std::int64_t v) { return static_cast<T>(v & 1); }
  static bool is_zero(T v) { return v == 0; }
};

// Sparse elimination restricted to unit pivots. Each pivot row is used to
// clear its column from every other row and then retired, so a retired
// row expresses its pivot column through columns that are still live.
template <class Ring>
class UnitEliminator {
 public:
  using T = typename Ring::T;
  using Entry = std::pair<std::uint32_t, T>;

  struct Pivot {
    std::uint32_t col;
    T unit;
    std::vector<Entry> row;
  };

  UnitEliminator(const SparseIntMatrix& m, bool record)
      : cols_(m.cols), record_(record) {
    rows_.resize(m.rows.size());
    active_.assign(m.rows.size(), 0);
    col_rows_.resize(cols_);
    col_done_.assign(cols_, 0);
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      auto& row = rows_[r];
      for (const auto& [c, v] : m.rows[r]) {
        T value = Ring::from_small(v);
        if (Ring::is_zero(value)) continue;
        row.emplace_back(c, std::move(value));
      }
      std::sort(row.begin(), row.end(),
                [](const Entry& a, const Entry& b) { return a.first < b.first; });
      if (!row.empty()) {
        active_[r] = 1;
        for (const auto& e : row) {
          col_rows_[e.first].push_back(static_cast<std::uint32_t>(r));
        }
        heap_.emplace(row.size(), static_cast<std::uint32_t>(r));
      }
    }
  }

  void run() {
    while (!heap_.empty()) {
      const auto [len, r] = heap_.top();
      heap_.pop();
      if (!active_[r] || rows_[r].size() != len) continue;
      std::size_t best = rows_[r].size();
      std::size_t best_count = std::numeric_limits<std::size_t>::max();
      for (std::size_t k = 0; k < rows_[r].size(); ++k) {
        const auto& [c, v] = rows_[r][k];
        if (!Ring::is_unit(v)) continue;
        if (col_rows_[c].size() < best_count) {
          best = k;
          best_count = col_rows_[c].size();
        }
      }
      if (best == rows_[r].size()) continue;  // parked until modified
      eliminate(r, best);
    }
  }

  std::size_t pivot_count() const noexcept { return pivot_count_; }
  std::vector<Pivot>& pivots() { return pivots_; }
  const std::vector<char>& col_done() const { return col_done_; }

  std::vector<std::uint32_t> residual_rows() const {
    std::vector<std::uint32_t> out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (active_[r]) out.push_back(static_cast<std::uint32_t>(r));
    }
    return out;
  }
  const std::vector<Entry>& row(std::uint32_t r) const { return rows_[r]; }

 private:
  void eliminate(std::uint32_t r, std::size_t k) {
    const std::uint32_t c = rows_[r][k].first;
    const T unit = rows_[r][k].second;
    const T inv = Ring::unit_inverse(unit);
    std::vector<std::uint32_t> targets = std::move(col_rows_[c]);
    col_rows_[c] = {};
    active_[r] = 0;
    const auto& prow = rows_[r];
    for (const auto s : targets) {
      if (s == r || !active_[s]) continue;
      auto& srow = rows_[s];
      auto it = std::lower_bound(
          srow.begin(), srow.end(), c,
          [](const Entry& e, std::uint32_t col) { return e.first < col; });
      if (it == srow.end() || it->first != c) continue;
      const T factor = Ring::mul(it->second, inv);
      scratch_.clear();
      scratch_.reserve(srow.size() + prow.size());
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < srow.size() || j < prow.size()) {
        if (j == prow.size() ||
            (i < srow.size() && srow[i].first < prow[j].first)) {
          scratch_.push_back(std::move(srow[i]));
          ++i;
        } else if (i == srow.size() || prow[j].first < srow[i].first) {
          T v = Ring::sub_mul(T{}, factor, prow[j].second);
          if (!Ring::is_zero(v)) {
            col_rows_[prow[j].first].push_back(s);
            scratch_.emplace_back(prow[j].first, std::move(v));
          }
          ++j;
        } else {
          T v = Ring::sub_mul(srow[i].second, factor, prow[j].second);
          if (!Ring::is_zero(v)) scratch_.emplace_back(srow[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      srow.swap(scratch_);
      if (srow.empty()) {
        active_[s] = 0;
        std::vector<Entry>().swap(srow);
      } else {
        heap_.emplace(srow.size(), s);
      }
    }
    col_done_[c] = 1;
    ++pivot_count_;
    if (record_) {
      pivots_.push_back(Pivot{c, unit, std::move(rows_[r])});
    }
    std::vector<Entry>().swap(rows_[r]);
  }

  std::size_t cols_;
  bool record_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<char> active_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<char> col_done_;
  std::vector<Pivot> pivots_;
  std::size_t pivot_count_ = 0;
  std::vector<Entry> scratch_;
  std::priority_queue<std::pair<std::size_t, std::uint32_t>,
                      std::vector<std::pair<std::size_t, std::uint32_t>>,
                      std::greater<>>
      heap_;
};

// Rank by fraction-free elimination.
std::size_t integer_rank(IntMatrix m) {
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t sel = rank;
    while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    m.swap_rows(rank, sel);
    const BigInt pivot = m.at(rank, c);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        m.at(i, j) = (pivot * m.at(i, j) - m.at(i, c) * m.at(rank, j)) / prev;
      }
      m.at(i, c) = 0;
    }
    prev = pivot;
    ++rank;
  }
  return rank;
}

template <class Ring>
LatticePresentation quotient_impl(const SparseIntMatrix& m) {
  using T = typename Ring::T;
  UnitEliminator<Ring> elim(m, true);
  elim.run();

  LatticePresentation out;
  out.points = m.cols;
  out.lines = m.rows.size();
  out.stats.unit_pivots = elim.pivot_count();

  // Residual block on the live columns.
  const auto residual = elim.residual_rows();
  std::vector<std::uint32_t> residual_cols;
  for (auto r : residual) {
    for (const auto& e : elim.row(r)) residual_cols.push_back(e.first);
  }
  std::sort(residual_cols.begin(), residual_cols.end());
  residual_cols.erase(std::unique(residual_cols.begin(), residual_cols.end()),
                      residual_cols.end());
  out.stats.residual_rows = residual.size();
  out.stats.residual_cols = residual_cols.size();

  IntMatrix block(residual.size(), residual_cols.size());
  for (std::size_t i = 0; i < residual.size(); ++i) {
    for (const auto& e : elim.row(residual[i])) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(residual_cols.begin(), residual_cols.end(),
                           e.first) -
          residual_cols.begin());
      if constexpr (std::is_same_v<Ring, Int64Ring>) {
        block.at(i, j) = BigInt(static_cast<long>(e.second));
      } else {
        block.at(i, j) = e.second;
      }
    }
  }
  const auto snf = smith_normal_form(block, true);
  for (const auto& d : snf.diagonal) {
    if (d != 1) out.torsion.push_back(d);
  }
  const std::size_t block_free = residual_cols.size() - snf.rank();

  std::vector<std::uint32_t> loose_cols;  // live, untouched by the residual
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (elim.col_done()[c]) continue;
    if (!std::binary_search(residual_cols.begin(), residual_cols.end(),
                            static_cast<std::uint32_t>(c))) {
      loose_cols.push_back(static_cast<std::uint32_t>(c));
    }
  }
  const std::size_t free_rank = block_free + loose_cols.size();
  out.free_rank = free_rank;

  std::vector<std::vector<T>> coords(m.cols, std::vector<T>(free_rank, T{}));
  for (std::size_t t = 0; t < residual_cols.size(); ++t) {
    for (std::size_t k = 0; k < block_free; ++k) {
      coords[residual_cols[t]][k] = Ring::from_big(snf.right->at(t, snf.rank() + k));
    }
  }
  for (std::size_t k = 0; k < loose_cols.size(); ++k) {
    coords[loose_cols[k]][block_free + k] = Ring::from_small(1);
  }
  auto& pivots = elim.pivots();
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    std::vector<T> acc(free_rank, T{});
    for (const auto& [j, v] : it->row) {
      if (j == it->col) continue;
      const auto& cj = coords[j];
      for (std::size_t k = 0; k < free_rank; ++k) {
        if (!Ring::is_zero(cj[k])) acc[k] = Ring::sub_mul(acc[k], v, cj[k]);
      }
    }
    // unit * x_col + sum v_j x_j = 0  =>  x_col = inv * (-sum v_j x_j).
    const T inv = Ring::unit_inverse(it->unit);
    auto& target = coords[it->col];
    for (std::size_t k = 0; k < free_rank; ++k) {
      target[k] = Ring::mul(inv, acc[k]);
    }
    std::vector<typename UnitEliminator<Ring>::Entry>().swap(it->row);
  }

  std::vector<std::int64_t> flat;
  flat.reserve(m.cols * free_rank);
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (std::size_t k = 0; k < free_rank; ++k) {
      if constexpr (std::is_same_v<Ring, Int64Ring>) {
        flat.push_back(coords[c][k]);
      } else {
        if (!coords[c][k].fits_slong_p()) {
          throw Error(ErrorCode::kOverflow,
                      "lattice coordinates exceed the 64-bit range");
        }
        flat.push_back(coords[c][k].get_si());
      }
    }
  }
  out.set_coordinates(std::move(flat));
  return out;
}

}  // namespace

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw Error(ErrorCode::kInvalidArgument, "IntMatrix: ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) {
    throw Error(ErrorCode::kInvalidArgument, "IntMatrix: shape mismatch");
  }
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const BigInt& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        out.at(i, j) += a * rhs.at(k, j);
      }
    }
  }
  return out;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, a), at(r, b));
}

BigInt determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "determinant: matrix not square");
  }
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix m = input;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t sel = k + 1;
      while (sel < n && m.at(sel, k) == 0) ++sel;
      if (sel == n) return 0;
      m.swap_rows(k, sel);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m.at(i, j) = (m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j)) / prev;
      }
    }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

IntMatrix SNFResult::diagonal_matrix(std::size_t rows, std::size_t cols) const {
  IntMatrix s(rows, cols);
  for (std::size_t i = 0; i < diagonal.size(); ++i) s.at(i, i) = diagonal[i];
  return s;
}

SNFResult smith_normal_form(const IntMatrix& m, bool with_transforms) {
  const std::size_t R = m.rows();
  const std::size_t C = m.cols();
  IntMatrix s = m;
  IntMatrix u;
  IntMatrix v;
  if (with_transforms) {
    u = IntMatrix::identity(R);
    v = IntMatrix::identity(C);
  }
  auto row_axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    // row_dst -= q * row_src
    for (std::size_t c = 0; c < C; ++c) {
      if (s.at(src, c) != 0) s.at(dst, c) -= q * s.at(src, c);
    }
    if (with_transforms) {
      for (std::size_t c = 0; c < R; ++c) {
        if (u.at(src, c) != 0) u.at(dst, c) -= q * u.at(src, c);
      }
    }
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t r = 0; r < R; ++r) {
      if (s.at(r, src) != 0) s.at(r, dst) -= q * s.at(r, src);
    }
    if (with_transforms) {
      for (std::size_t r = 0; r < C; ++r) {
        if (v.at(r, src) != 0) v.at(r, dst) -= q * v.at(r, src);
      }
    }
  };
  auto swap_r = [&](std::size_t a, std::size_t b) {
    s.swap_rows(a, b);
    if (with_transforms) u.swap_rows(a, b);
  };
  auto swap_c = [&](std::size_t a, std::size_t b) {
    s.swap_cols(a, b);
    if (with_transforms) v.swap_cols(a, b);
  };

  SNFResult out;
  const std::size_t lim = std::min(R, C);
  for (std::size_t t = 0; t < lim; ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pr = R;
    std::size_t pc = C;
    BigInt best;
    for (std::size_t i = t; i < R; ++i) {
      for (std::size_t j = t; j < C; ++j) {
        if (s.at(i, j) == 0) continue;
        if (pr == R || abs(s.at(i, j)) < best) {
          best = abs(s.at(i, j));
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == R) break;
    swap_r(t, pr);
    swap_c(t, pc);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (s.at(i, t) == 0) continue;
        BigInt q;
        mpz_tdiv_q(q.get_mpz_t(), s.at(i, t).get_mpz_t(), s.at(t, t).get_mpz_t());
        if (q != 0) row_axpy(i, t, q);
        if (s.at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (s.at(t, j) == 0) continue;
        BigInt q;
        mpz_tdiv_q(q.get_mpz_t(), s.at(t, j).get_mpz_t(), s.at(t, t).get_mpz_t());
        if (q != 0) col_axpy(j, t, q);
        if (s.at(t, j) != 0) clean = false;
      }
      if (!clean) {
        // A remainder smaller than the pivot is left; move it in.
        std::size_t bi = 0;
        std::size_t bj = 0;
        BigInt small = abs(s.at(t, t));
        for (std::size_t i = t + 1; i < R; ++i) {
          if (s.at(i, t) != 0 && abs(s.at(i, t)) < small) {
            small = abs(s.at(i, t));
            bi = i;
            bj = 0;
          }
        }
        for (std::size_t j = t + 1; j < C; ++j) {
          if (s.at(t, j) != 0 && abs(s.at(t, j)) < small) {
            small = abs(s.at(t, j));
            bj = j;
            bi = 0;
          }
        }
        if (bi != 0) swap_r(t, bi);
        if (bj != 0) swap_c(t, bj);
        continue;
      }
      std::size_t bad = 0;
      for (std::size_t i = t + 1; i < R && bad == 0; ++i) {
        for (std::size_t j = t + 1; j < C; ++j) {
          if (!mpz_divisible_p(s.at(i, j).get_mpz_t(), s.at(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
        }
      }
      if (bad == 0) break;
      row_axpy(t, bad, BigInt(-1));
    }
    if (s.at(t, t) < 0) {
      for (std::size_t c = 0; c < C; ++c) s.at(t, c) = -s.at(t, c);
      if (with_transforms) {
        for (std::size_t c = 0; c < R; ++c) u.at(t, c) = -u.at(t, c);
      }
    }
    out.diagonal.push_back(s.at(t, t));
  }
  if (with_transforms) {
    out.left = std::move(u);
    out.right = std::move(v);
  }
  return out;
}

SparseIntMatrix relation_matrix(const dps::DualPolarSpace& space) {
  SparseIntMatrix m;
  m.cols = space.point_count();
  m.rows.reserve(space.line_count());
  for (const auto& l : space.lines()) {
    m.rows.push_back({{l[0], 1}, {l[1], 1}, {l[2], 1}});
  }
  return m;
}

std::size_t f2_rank(const SparseIntMatrix& m) {
  UnitEliminator<F2Ring> elim(m, false);
  elim.run();
  return elim.pivot_count();
}

std::span<const std::int64_t> LatticePresentation::coordinates(
    dps::PointIndex p) const {
  if (p >= points) {
    throw Error(ErrorCode::kInvalidArgument, "point index out of range");
  }
  return std::span(coords_).subspan(static_cast<std::size_t>(p) * free_rank,
                                    free_rank);
}

void LatticePresentation::set_coordinates(std::vector<std::int64_t> coords) {
  if (coords.size() != points * free_rank) {
    throw Error(ErrorCode::kInternal, "coordinate table has the wrong size");
  }
  coords_ = std::move(coords);
}

LatticePresentation quotient(const SparseIntMatrix& m) {
  try {
    return quotient_impl<Int64Ring>(m);
  } catch (const OverflowError&) {
    auto out = quotient_impl<BigRing>(m);
    out.stats.used_bigint = true;
    return out;
  }
}

LatticePresentation build_lattice(const dps::DualPolarSpace& space) {
  auto out = quotient(relation_matrix(space));
  out.genus = space.genus();
  out.method = "snf";
  return out;
}

namespace {

// Coordinates in Z^{generators}: generators are unit vectors, a point
// completed from two known points on a line gets minus their sum.
std::vector<std::int64_t> propagate(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators) {
  const std::size_t n = generators.size();
  const std::size_t points = space.point_count();
  std::vector<std::int64_t> coords(points * n, 0);
  std::vector<char> known(points, 0);
  std::deque<dps::PointIndex> queue;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = generators[i];
    if (p >= points) {
      throw Error(ErrorCode::kInvalidArgument, "generator out of range");
    }
    if (known[p]) {
      throw Error(ErrorCode::kInvalidArgument, "repeated generator");
    }
    known[p] = 1;
    coords[p * n + i] = 1;
    queue.push_back(p);
  }
  const auto& lines = space.lines();
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (auto li : space.lines_through(p)) {
      const auto& l = lines[li];
      int inside = 0;
      dps::PointIndex missing = 0;
      for (auto r : l) {
        if (known[r]) {
          ++inside;
        } else {
          missing = r;
        }
      }
      if (inside != 2) continue;
      std::int64_t* dst = &coords[static_cast<std::size_t>(missing) * n];
      for (auto r : l) {
        if (r == missing) continue;
        const std::int64_t* src = &coords[static_cast<std::size_t>(r) * n];
        for (std::size_t k = 0; k < n; ++k) {
          if (__builtin_sub_overflow(dst[k], src[k], &dst[k])) {
            throw Error(ErrorCode::kOverflow,
                        "closure coordinates exceed the 64-bit range");
          }
        }
      }
      known[missing] = 1;
      queue.push_back(missing);
    }
  }
  if (std::find(known.begin(), known.end(), 0) != known.end()) {
    throw Error(ErrorCode::kBasisNotVerified,
                "generators do not span every point");
  }
  return coords;
}

// Distinct nonzero line sums of the propagated coordinates.
SparseIntMatrix line_residuals(const dps::DualPolarSpace& space,
                               const std::vector<std::int64_t>& coords,
                               std::size_t n) {
  std::set<std::vector<std::pair<std::uint32_t, std::int64_t>>> seen;
  for (const auto& l : space.lines()) {
    std::vector<std::pair<std::uint32_t, std::int64_t>> row;
    for (std::size_t k = 0; k < n; ++k) {
      std::int64_t sum = 0;
      for (auto r : l) {
        if (__builtin_add_overflow(
                sum, coords[static_cast<std::size_t>(r) * n + k], &sum)) {
          throw Error(ErrorCode::kOverflow, "line residual overflow");
        }
      }
      if (sum != 0) row.emplace_back(static_cast<std::uint32_t>(k), sum);
    }
    if (!row.empty()) seen.insert(std::move(row));
  }
  SparseIntMatrix m;
  m.cols = n;
  m.rows.assign(seen.begin(), seen.end());
  return m;
}

}  // namespace

LatticePresentation lattice_from_spanning_set(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators) {
  const std::size_t n = generators.size();
  const auto raw = propagate(space, generators);
  const auto residuals = line_residuals(space, raw, n);

  LatticePresentation out;
  out.genus = space.genus();
  out.points = space.point_count();
  out.lines = space.line_count();
  if (residuals.rows.empty()) {
    out.free_rank = n;
    out.method = "closure-certificate";
    out.set_coordinates(raw);
    return out;
  }
  // L = Z^{generators} / <residuals>; compose with that quotient's section.
  const auto small = quotient(residuals);
  out.free_rank = small.free_rank;
  out.torsion = small.torsion;
  out.stats = small.stats;
  out.method = "closure-quotient";
  const std::size_t f = small.free_rank;
  std::vector<std::int64_t> coords(out.points * f, 0);
  for (std::size_t p = 0; p < out.points; ++p) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = raw[p * n + k];
      if (c == 0) continue;
      const auto img = small.coordinates(static_cast<dps::PointIndex>(k));
      for (std::size_t j = 0; j < f; ++j) {
        std::int64_t t;
        if (__builtin_mul_overflow(c, img[j], &t) ||
            __builtin_add_overflow(coords[p * f + j], t, &coords[p * f + j])) {
          throw Error(ErrorCode::kOverflow, "section coordinates overflow");
        }
      }
    }
  }
  out.set_coordinates(std::move(coords));
  return out;
}

std::size_t f2_rank_from_spanning_set(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators) {
  const std::size_t n = generators.size();
  const std::size_t points = space.point_count();
  std::vector<gf2::BitVec> coords(points);
  std::vector<char> known(points, 0);
  std::deque<dps::PointIndex> queue;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = generators[i];
    if (p >= points || known[p]) {
      throw Error(ErrorCode::kInvalidArgument, "bad or repeated generator");
    }
    known[p] = 1;
    coords[p] = gf2::BitVec::unit(n, i);
    queue.push_back(p);
  }
  const auto& lines = space.lines();
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (auto li : space.lines_through(p)) {
      const auto& l = lines[li];
      int inside = 0;
      dps::PointIndex missing = 0;
      for (auto r : l) {
        if (known[r]) {
          ++inside;
        } else {
          missing = r;
        }
      }
      if (inside != 2) continue;
      gf2::BitVec v(n);
      for (auto r : l) {
        if (r != missing) v ^= coords[r];
      }
      coords[missing] = std::move(v);
      known[missing] = 1;
      queue.push_back(missing);
    }
  }
  if (std::find(known.begin(), known.end(), 0) != known.end()) {
    throw Error(ErrorCode::kBasisNotVerified,
                "generators do not span every point");
  }
  std::set<gf2::BitVec> residuals;
  for (const auto& l : lines) {
    auto v = coords[l[0]];
    v ^= coords[l[1]];
    v ^= coords[l[2]];
    if (!v.is_zero()) residuals.insert(std::move(v));
  }
  gf2::BitMatrix k(n);
  for (const auto& v : residuals) k.append_row(v);
  // dim F2^P / rowspace = n - rank(K)
  return points - (n - gf2::rank(k));
}

LatticePresentation lattice_from_basis(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators) {
  std::vector<std::int64_t> raw;
  try {
    raw = propagate(space, generators);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument &&
        std::string_view(e.what()) == "repeated generator") {
      throw Error(ErrorCode::kBasisNotVerified, e.what());
    }
    throw;
  }
  if (!line_residuals(space, raw, generators.size()).rows.empty()) {
    throw Error(ErrorCode::kBasisNotVerified,
                "propagated coordinates violate a line relation");
  }
  LatticePresentation out;
  out.genus = space.genus();
  out.points = space.point_count();
  out.lines = space.line_count();
  out.free_rank = generators.size();
  out.method = "closure-certificate";
  out.set_coordinates(std::move(raw));
  return out;
}

const char* verdict_name(BasisVerdict v) noexcept {
  switch (v) {
    case BasisVerdict::kUnimodular:
      return "unimodular";
    case BasisVerdict::kRankDeficient:
      return "rank-deficient";
    case BasisVerdict::kNonIntegralInverse:
      return "non-integral-inverse";
  }
  return "unknown";
}

namespace {

IntMatrix coordinate_matrix(std::span<const dps::PointIndex> images,
                            const LatticePresentation& lat) {
  IntMatrix m(images.size(), lat.free_rank);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto c = lat.coordinates(images[i]);
    for (std::size_t k = 0; k < lat.free_rank; ++k) {
      m.at(i, k) = static_cast<long>(c[k]);
    }
  }
  return m;
}

}  // namespace

BasisCheck verify_basis(std::span<const dps::PointIndex> images,
                        const LatticePresentation& lat) {
  if (images.size() != lat.free_rank) {
    throw Error(ErrorCode::kInvalidArgument,
                "verify_basis: " + std::to_string(images.size()) +
                    " images for free rank " + std::to_string(lat.free_rank));
  }
  BasisCheck out;
  std::set<dps::PointIndex> distinct(images.begin(), images.end());
  if (distinct.size() != images.size()) {
    out.verdict = BasisVerdict::kRankDeficient;
    out.determinant = 0;
    return out;
  }
  out.determinant = determinant(coordinate_matrix(images, lat));
  if (out.determinant == 0) {
    out.verdict = BasisVerdict::kRankDeficient;
  } else if (abs(out.determinant) == 1) {
    out.verdict = BasisVerdict::kUnimodular;
  } else {
    out.verdict = BasisVerdict::kNonIntegralInverse;
  }
  return out;
}

std::size_t coordinate_rank(std::span<const dps::PointIndex> images,
                            const LatticePresentation& lat) {
  return integer_rank(coordinate_matrix(images, lat));
}

Expression express_point(dps::PointIndex target,
                         std::span<const dps::PointIndex> basis,
                         const LatticePresentation& lat) {
  if (verify_basis(basis, lat).verdict != BasisVerdict::kUnimodular) {
    throw Error(ErrorCode::kBasisNotVerified,
                "express: basis is not unimodular in the lattice");
  }
  const std::size_t n = basis.size();
  // Solve B^T c = t over Q; B's rows are the basis coordinates.
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = lat.coordinates(basis[i]);
    for (std::size_t j = 0; j < n; ++j) a[j][i] = static_cast<long>(ci[j]);
  }
  const auto t = lat.coordinates(target);
  for (std::size_t j = 0; j < n; ++j) a[j][n] = static_cast<long>(t[j]);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a[sel][col] == 0) ++sel;
    if (sel == n) {
      throw Error(ErrorCode::kInternal, "express: singular system");
    }
    std::swap(a[col], a[sel]);
    const mpq_class pivot = a[col][col];
    for (std::size_t k = col; k <= n; ++k) a[col][k] /= pivot;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  Expression out;
  out.coefficients.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i][n].canonicalize();
    if (a[i][n].get_den() != 1) {
      throw Error(ErrorCode::kInvariantViolation,
                  "express: non-integral coefficient for a unimodular basis");
    }
    out.coefficients.push_back(a[i][n].get_num());
  }
  bool zero = true;
  for (std::size_t j = 0; j < n && zero; ++j) {
    BigInt acc = -BigInt(static_cast<long>(t[j]));
    for (std::size_t i = 0; i < n; ++i) {
      acc += out.coefficients[i] *
             static_cast<long>(lat.coordinates(basis[i])[j]);
    }
    zero = acc == 0;
  }
  out.residual_zero = zero;
  return out;
}

Expression express(const diagram::CrossinglessDiagram& d,
                   std::span<const diagram::CrossinglessDiagram> basis,
                   const dps::DualPolarSpace& space,
                   const LatticePresentation& lat) {
  std::vector<dps::PointIndex> images;
  images.reserve(basis.size());
  for (const auto& b : basis) {
    images.push_back(space.index_of(mu::mu(b).point));
  }
  return express_point(space.index_of(mu::mu(d).point), images, lat);
}

}  // namespace sptri::lattice
