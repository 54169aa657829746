#include "sptri/gf2.hpp"

#include <algorithm>
#include <bit>

#include "sptri/error.hpp"

namespace sptri::gf2 {

namespace {

std::uint64_t tail_mask(std::size_t length) {
  const std::size_t rem = length & 63;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw Error(ErrorCode::kSyntax,
                  "bit string may only contain '0' and '1': " +
                      std::string(bits));
    }
  }
  return v;
}

BitVec BitVec::from_word(std::uint64_t word, std::size_t length) {
  if (length > 64) {
    throw Error(ErrorCode::kInvalidArgument, "from_word: length exceeds 64");
  }
  BitVec v(length);
  if (length > 0) {
    v.words_[0] = word & tail_mask(length);
  }
  return v;
}

BitVec BitVec::unit(std::size_t length, std::size_t index) {
  BitVec v(length);
  v.set(index);
  return v;
}

bool BitVec::is_zero() const noexcept {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVec::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitVec::lowest_set() const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] != 0) {
      return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    }
  }
  return length_;
}

bool BitVec::dot(const BitVec& other) const {
  if (other.length_ != length_) {
    throw Error(ErrorCode::kInvalidArgument, "dot: length mismatch");
  }
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    acc ^= words_[k] & other.words_[k];
  }
  return std::popcount(acc) & 1;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  if (other.length_ != length_) {
    throw Error(ErrorCode::kInvalidArgument, "xor: length mismatch");
  }
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
  return *this;
}

bool operator<(const BitVec& lhs, const BitVec& rhs) {
  const std::size_t common = std::min(lhs.words_.size(), rhs.words_.size());
  for (std::size_t k = 0; k < common; ++k) {
    const std::uint64_t diff = lhs.words_[k] ^ rhs.words_[k];
    if (diff != 0) {
      const std::uint64_t low = diff & (~diff + 1);
      return (rhs.words_[k] & low) != 0;
    }
  }
  return lhs.length_ < rhs.length_;
}

std::string BitVec::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVec> rows, std::size_t cols) {
  for (const auto& r : rows) {
    if (r.length() != cols) {
      throw Error(ErrorCode::kInvalidArgument,
                  "BitMatrix: rows must share the column count");
    }
  }
  BitMatrix m(cols);
  m.rows_ = std::move(rows);
  return m;
}

BitMatrix BitMatrix::from_strings(std::span<const std::string> rows) {
  if (rows.empty()) return BitMatrix(0);
  std::vector<BitVec> parsed;
  parsed.reserve(rows.size());
  for (const auto& r : rows) parsed.push_back(BitVec::from_string(r));
  return from_rows(std::move(parsed), rows.front().size());
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void BitMatrix::append_row(BitVec row) {
  if (row.length() != cols_) {
    throw Error(ErrorCode::kInvalidArgument, "append_row: length mismatch");
  }
  rows_.push_back(std::move(row));
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (rows_[r].get(c)) t.set(c, r);
    }
  }
  return t;
}

BitMatrix BitMatrix::multiply(const BitMatrix& other) const {
  if (other.rows() != cols_) {
    throw Error(ErrorCode::kInvalidArgument, "multiply: shape mismatch");
  }
  BitMatrix out(rows_.size(), other.cols());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (rows_[r].get(k)) out.rows_[r] ^= other.rows_[k];
    }
  }
  return out;
}

BitVec BitMatrix::apply(const BitVec& v) const {
  BitVec out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].dot(v)) out.set(r);
  }
  return out;
}

std::vector<std::string> BitMatrix::to_strings() const {
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.to_string());
  return out;
}

RrefResult rref(const BitMatrix& m) {
  std::vector<BitVec> rows = m.row_list();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols && next < rows.size(); ++c) {
    std::size_t sel = next;
    while (sel < rows.size() && !rows[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[next], rows[sel]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != next && rows[r].get(c)) rows[r] ^= rows[next];
    }
    pivots.push_back(c);
    ++next;
  }
  rows.resize(next);
  RrefResult out;
  out.rank = next;
  out.pivots = std::move(pivots);
  out.matrix = BitMatrix::from_rows(std::move(rows), cols);
  return out;
}

std::size_t rank(const BitMatrix& m) { return rref(m).rank; }

BitMatrix kernel(const BitMatrix& m) {
  const auto red = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : red.pivots) is_pivot[p] = true;
  BitMatrix basis(cols);
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    BitVec v(cols);
    v.set(f);
    for (std::size_t i = 0; i < red.rank; ++i) {
      if (red.matrix.get(i, f)) v.set(red.pivots[i]);
    }
    basis.append_row(std::move(v));
  }
  return rref(basis).matrix;
}

std::optional<BitVec> solve(const BitMatrix& m, const BitVec& b) {
  if (b.length() != m.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "solve: rhs length mismatch");
  }
  // Row reduce the augmented system [m | b].
  const std::size_t cols = m.cols();
  std::vector<BitVec> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    BitVec aug(cols + 1);
    for (std::size_t c = 0; c < cols; ++c) {
      if (m.get(r, c)) aug.set(c);
    }
    if (b.get(r)) aug.set(cols);
    rows.push_back(std::move(aug));
  }
  const auto red = rref(BitMatrix::from_rows(std::move(rows), cols + 1));
  if (!red.pivots.empty() && red.pivots.back() == cols) return std::nullopt;
  BitVec x(cols);
  for (std::size_t i = 0; i < red.rank; ++i) {
    if (red.matrix.get(i, cols)) x.set(red.pivots[i]);
  }
  return x;
}

bool in_row_space(const BitMatrix& m, const BitVec& v) {
  if (v.length() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "in_row_space: length mismatch");
  }
  const auto red = rref(m);
  BitVec w = v;
  for (std::size_t i = 0; i < red.rank; ++i) {
    if (w.get(red.pivots[i])) w ^= red.matrix.row(i);
  }
  return w.is_zero();
}

BitMatrix row_space_sum(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "row_space_sum: column mismatch");
  }
  std::vector<BitVec> rows = a.row_list();
  rows.insert(rows.end(), b.row_list().begin(), b.row_list().end());
  return rref(BitMatrix::from_rows(std::move(rows), a.cols())).matrix;
}

BitMatrix row_space_intersection(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "row_space_intersection: column mismatch");
  }
  // x*A = y*B  <=>  (x, y) lies in the left kernel of [A; B]; the shared
  // vectors are x*A.
  const auto ra = rref(a).matrix;
  const auto rb = rref(b).matrix;
  const std::size_t ka = ra.rows();
  const std::size_t kb = rb.rows();
  BitMatrix stacked_t(a.cols(), ka + kb);
  for (std::size_t i = 0; i < ka; ++i) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (ra.get(i, c)) stacked_t.set(c, i);
    }
  }
  for (std::size_t j = 0; j < kb; ++j) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (rb.get(j, c)) stacked_t.set(c, ka + j);
    }
  }
  const auto ker = kernel(stacked_t);
  BitMatrix shared(a.cols());
  for (std::size_t k = 0; k < ker.rows(); ++k) {
    BitVec v(a.cols());
    for (std::size_t i = 0; i < ka; ++i) {
      if (ker.get(k, i)) v ^= ra.row(i);
    }
    shared.append_row(std::move(v));
  }
  return rref(shared).matrix;
}

bool symplectic_pairing(const BitVec& u, const BitVec& v, std::size_t genus) {
  if (u.length() != 2 * genus || v.length() != 2 * genus) {
    throw Error(ErrorCode::kInvalidArgument,
                "symplectic_pairing: vectors must have length 2g");
  }
  bool acc = false;
  for (std::size_t i = 0; i < genus; ++i) {
    acc ^= (u.get(i) && v.get(genus + i));
    acc ^= (u.get(genus + i) && v.get(i));
  }
  return acc;
}

bool is_isotropic(const BitMatrix& m, std::size_t genus) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.rows(); ++j) {
      if (symplectic_pairing(m.row(i), m.row(j), genus)) return false;
    }
  }
  return true;
}

}  // namespace sptri::gf2
