#ifndef SPTRI_GF2_HPP
#define SPTRI_GF2_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sptri::gf2 {

/// A vector over the two-element field, packed 64 coordinates per word.
/// Coordinates at or beyond length() are always zero in the packed words.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t length)
      : length_(length), words_((length + 63) / 64, 0) {}

  /// Parses a string of '0'/'1'; character i is coordinate i.
  static BitVec from_string(std::string_view bits);
  /// Low `length` bits of `word` (length <= 64).
  static BitVec from_word(std::uint64_t word, std::size_t length);
  static BitVec unit(std::size_t length, std::size_t index);

  std::size_t length() const noexcept { return length_; }
  bool get(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) noexcept {
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  bool is_zero() const noexcept;
  std::size_t popcount() const noexcept;
  /// Index of the lowest set coordinate, or length() if zero.
  std::size_t lowest_set() const noexcept;
  /// Standard dot product mod 2.
  bool dot(const BitVec& other) const;

  BitVec& operator^=(const BitVec& other);
  friend BitVec operator^(BitVec lhs, const BitVec& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  friend bool operator==(const BitVec&, const BitVec&) = default;
  /// Orders by the serialized string form ('0' < '1', coordinate 0 first).
  friend bool operator<(const BitVec& lhs, const BitVec& rhs);

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  std::string to_string() const;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense matrix over F2 stored as a list of BitVec rows sharing `cols`.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : cols_(cols), rows_(rows, BitVec(cols)) {}
  explicit BitMatrix(std::size_t cols) : cols_(cols) {}

  /// Throws if the rows do not all have the same length.
  static BitMatrix from_rows(std::vector<BitVec> rows, std::size_t cols);
  static BitMatrix from_strings(std::span<const std::string> rows);
  static BitMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const BitVec& row(std::size_t i) const { return rows_[i]; }
  BitVec& row(std::size_t i) { return rows_[i]; }
  const std::vector<BitVec>& row_list() const noexcept { return rows_; }
  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }

  void append_row(BitVec row);
  BitMatrix transpose() const;
  /// Ordinary product (rows x cols) * (cols x k).
  BitMatrix multiply(const BitMatrix& other) const;
  /// Matrix-vector product m * v for a column vector v of length cols().
  BitVec apply(const BitVec& v) const;

  std::vector<std::string> to_strings() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVec> rows_;
};

struct RrefResult {
  BitMatrix matrix;  // nonzero rows only
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form of the row space. Pivots are always taken at the
/// lowest available column, so equal row spaces give identical output.
RrefResult rref(const BitMatrix& m);
std::size_t rank(const BitMatrix& m);

/// Basis of {v : m * v = 0}, returned in reduced row echelon form.
BitMatrix kernel(const BitMatrix& m);

/// Some x with m * x = b, or nullopt when the system is inconsistent.
std::optional<BitVec> solve(const BitMatrix& m, const BitVec& b);

/// Whether v lies in the row space of m.
bool in_row_space(const BitMatrix& m, const BitVec& v);

/// Intersection of the row spaces of a and b, in rref.
BitMatrix row_space_intersection(const BitMatrix& a, const BitMatrix& b);

/// Sum (join) of the row spaces of a and b, in rref.
BitMatrix row_space_sum(const BitMatrix& a, const BitMatrix& b);

/// Standard symplectic form on F2^{2g} with coordinates a_1..a_g, b_1..b_g:
/// <a_i, b_j> = delta_ij and <a_i, a_j> = <b_i, b_j> = 0.
bool symplectic_pairing(const BitVec& u, const BitVec& v, std::size_t genus);

/// Whether every pair of rows (including a row with itself) pairs to zero.
bool is_isotropic(const BitMatrix& m, std::size_t genus);

}  // namespace sptri::gf2

#endif  // SPTRI_GF2_HPP
