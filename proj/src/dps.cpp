#include "sptri/dps.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <thread>

#include "sptri/error.hpp"

namespace sptri::dps {

namespace {

using Packed = std::uint32_t;

bool pair_packed(Packed u, Packed v, std::size_t g) {
  const Packed low = (Packed{1} << g) - 1;
  const Packed swapped = ((v >> g) & low) | ((v & low) << g);
  return std::popcount(u & swapped) & 1;
}

Packed swap_halves(Packed v, std::size_t g) {
  const Packed low = (Packed{1} << g) - 1;
  return ((v >> g) & low) | ((v & low) << g);
}

// In-place reduced row echelon form with lowest-column pivots; returns rank
// and leaves the nonzero rows first, in pivot order.
std::size_t rref_packed(std::span<Packed> rows, std::size_t ncols) {
  std::size_t next = 0;
  for (std::size_t c = 0; c < ncols && next < rows.size(); ++c) {
    const Packed bit = Packed{1} << c;
    std::size_t sel = next;
    while (sel < rows.size() && !(rows[sel] & bit)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[next], rows[sel]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != next && (rows[r] & bit)) rows[r] ^= rows[next];
    }
    ++next;
  }
  return next;
}

// Basis of {v : <row, v>_std = 0 for all rows}.
std::vector<Packed> kernel_packed(std::vector<Packed> rows, std::size_t ncols) {
  const std::size_t rank = rref_packed(rows, ncols);
  std::vector<std::size_t> pivots;
  Packed pivot_mask = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    const auto p = static_cast<std::size_t>(std::countr_zero(rows[i]));
    pivots.push_back(p);
    pivot_mask |= Packed{1} << p;
  }
  std::vector<Packed> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (pivot_mask & (Packed{1} << f)) continue;
    Packed v = Packed{1} << f;
    for (std::size_t i = 0; i < rank; ++i) {
      if (rows[i] & (Packed{1} << f)) v |= Packed{1} << pivots[i];
    }
    out.push_back(v);
  }
  return out;
}

Packed reverse_bits(Packed v, std::size_t width) {
  Packed out = 0;
  for (std::size_t i = 0; i < width; ++i) {
    if (v & (Packed{1} << i)) out |= Packed{1} << (width - 1 - i);
  }
  return out;
}

// Sort/hash key whose numeric order equals the lexicographic order of the
// serialized basis strings.
unsigned __int128 key_of(std::span<const Packed> rows, std::size_t g) {
  unsigned __int128 key = 0;
  for (auto r : rows) {
    key = (key << (2 * g)) | reverse_bits(r, 2 * g);
  }
  return key;
}

gf2::BitMatrix to_bitmatrix(std::span<const Packed> rows, std::size_t ncols) {
  gf2::BitMatrix m(ncols);
  for (auto r : rows) m.append_row(gf2::BitVec::from_word(r, ncols));
  return m;
}

std::vector<Packed> to_packed(const gf2::BitMatrix& m) {
  if (m.cols() > 32) {
    throw Error(ErrorCode::kInvalidArgument, "matrix too wide for genus cap");
  }
  std::vector<Packed> rows;
  rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(m.row(i).length() == 0
                       ? Packed{0}
                       : static_cast<Packed>(m.row(i).words()[0]));
  }
  return rows;
}

void check_genus(std::size_t genus, const Limits& limits) {
  if (genus > kMaxGenus) {
    throw Error(ErrorCode::kResourceLimit,
                "genus " + std::to_string(genus) + " exceeds the supported " +
                    "maximum of " + std::to_string(kMaxGenus));
  }
  if (lagrangian_count(genus) > limits.max_points) {
    throw Error(ErrorCode::kResourceLimit,
                "genus " + std::to_string(genus) + " has " +
                    std::to_string(lagrangian_count(genus)) +
                    " Lagrangians, above the point cap of " +
                    std::to_string(limits.max_points));
  }
}

// Depth-first extension of isotropic rref rows for a fixed pivot set.
void extend_rows(std::size_t g, const std::vector<std::size_t>& pivots,
                 Packed pivot_mask, std::vector<Packed>& current,
                 std::vector<Packed>& out_rows) {
  const std::size_t i = current.size();
  if (i == g) {
    out_rows.insert(out_rows.end(), current.begin(), current.end());
    return;
  }
  const std::size_t n = 2 * g;
  const std::size_t p = pivots[i];
  std::vector<std::size_t> free_cols;
  for (std::size_t c = p + 1; c < n; ++c) {
    if (!(pivot_mask & (Packed{1} << c))) free_cols.push_back(c);
  }
  const std::size_t combos = std::size_t{1} << free_cols.size();
  for (std::size_t s = 0; s < combos; ++s) {
    Packed row = Packed{1} << p;
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      if (s & (std::size_t{1} << k)) row |= Packed{1} << free_cols[k];
    }
    bool ok = true;
    for (auto prev : current) {
      if (pair_packed(prev, row, g)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    current.push_back(row);
    extend_rows(g, pivots, pivot_mask, current, out_rows);
    current.pop_back();
  }
}

}  // namespace

Lagrangian Lagrangian::from_span(const gf2::BitMatrix& span,
                                 std::size_t genus) {
  if (span.cols() != 2 * genus) {
    throw Error(ErrorCode::kInvariantViolation,
                "Lagrangian: ambient dimension must be 2g");
  }
  auto red = gf2::rref(span);
  if (red.rank != genus) {
    throw Error(ErrorCode::kInvariantViolation,
                "Lagrangian: dimension " + std::to_string(red.rank) +
                    " differs from genus " + std::to_string(genus));
  }
  if (!gf2::is_isotropic(red.matrix, genus)) {
    throw Error(ErrorCode::kInvariantViolation,
                "Lagrangian: subspace is not isotropic");
  }
  return Lagrangian(genus, std::move(red.matrix));
}

bool Lagrangian::contains(const gf2::BitVec& v) const {
  return gf2::in_row_space(basis_, v);
}

bool operator<(const Lagrangian& lhs, const Lagrangian& rhs) {
  if (lhs.genus_ != rhs.genus_) return lhs.genus_ < rhs.genus_;
  for (std::size_t i = 0; i < lhs.basis_.rows(); ++i) {
    if (lhs.basis_.row(i) < rhs.basis_.row(i)) return true;
    if (rhs.basis_.row(i) < lhs.basis_.row(i)) return false;
  }
  return false;
}

std::uint64_t lagrangian_count(std::size_t genus) {
  std::uint64_t n = 1;
  for (std::size_t i = 1; i <= genus; ++i) n *= (std::uint64_t{1} << i) + 1;
  return n;
}

std::uint64_t line_count(std::size_t genus) {
  if (genus == 0) return 0;
  return lagrangian_count(genus) * ((std::uint64_t{1} << genus) - 1) / 3;
}

Lagrangian third_point(const Lagrangian& p, const Lagrangian& q) {
  if (p.genus() != q.genus()) {
    throw Error(ErrorCode::kInvalidArgument, "third_point: genus mismatch");
  }
  const std::size_t g = p.genus();
  const auto axis = gf2::row_space_intersection(p.basis(), q.basis());
  if (g == 0 || axis.rows() + 1 != g) {
    throw Error(ErrorCode::kNotCollinear,
                "third_point: intersection has dimension " +
                    std::to_string(axis.rows()) + ", expected g-1");
  }
  // p = S + x and q = S + y; the third point is S + (x + y).
  auto outside = [&](const Lagrangian& l) {
    for (std::size_t i = 0; i < l.basis().rows(); ++i) {
      if (!gf2::in_row_space(axis, l.basis().row(i))) return l.basis().row(i);
    }
    throw Error(ErrorCode::kInternal, "third_point: no vector outside axis");
  };
  gf2::BitMatrix span = axis;
  span.append_row(outside(p) ^ outside(q));
  return Lagrangian::from_span(span, g);
}

DualPolarSpace DualPolarSpace::build(std::size_t genus, const Limits& limits,
                                     unsigned threads) {
  check_genus(genus, limits);
  const std::size_t g = genus;
  const std::size_t n = 2 * g;
  DualPolarSpace space;
  space.genus_ = g;

  std::vector<Packed> rows;
  if (g == 0) {
    space.keys_.push_back(0);
  } else {
    for (Packed mask = 0; mask < (Packed{1} << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != g) continue;
      std::vector<std::size_t> pivots;
      for (std::size_t c = 0; c < n; ++c) {
        if (mask & (Packed{1} << c)) pivots.push_back(c);
      }
      std::vector<Packed> current;
      extend_rows(g, pivots, mask, current, rows);
    }
    const std::size_t count = rows.size() / g;
    std::vector<std::pair<unsigned __int128, std::size_t>> order(count);
    for (std::size_t i = 0; i < count; ++i) {
      order[i] = {key_of(std::span(rows).subspan(i * g, g), g), i};
    }
    std::sort(order.begin(), order.end());
    space.rows_.resize(rows.size());
    space.keys_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      space.keys_[i] = order[i].first;
      std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(order[i].second * g),
                  g, space.rows_.begin() + static_cast<std::ptrdiff_t>(i * g));
    }
  }
  if (space.keys_.size() != lagrangian_count(g)) {
    throw Error(ErrorCode::kInvariantViolation,
                "Lagrangian enumeration count mismatch");
  }
  space.index_.reserve(space.keys_.size());
  for (std::size_t i = 0; i < space.keys_.size(); ++i) {
    space.index_.emplace(space.keys_[i], static_cast<PointIndex>(i));
  }

  if (g >= 1) {
    const std::size_t points = space.point_count();
    const unsigned workers = std::max(1u, threads);
    std::vector<std::vector<std::array<PointIndex, 3>>> found(workers);
    auto scan = [&](unsigned w) {
      const std::size_t begin = points * w / workers;
      const std::size_t end = points * (w + 1) / workers;
      auto& out = found[w];
      std::vector<Packed> axis(g - 1);
      std::vector<Packed> swapped(g - 1);
      std::vector<Packed> span(g);
      for (std::size_t pi = begin; pi < end; ++pi) {
        const Packed* prow = &space.rows_[pi * g];
        for (Packed phi = 1; phi < (Packed{1} << g); ++phi) {
          const auto j0 = static_cast<std::size_t>(std::countr_zero(phi));
          std::size_t k = 0;
          for (std::size_t j = 0; j < g; ++j) {
            if (j == j0) continue;
            axis[k++] = (phi & (Packed{1} << j)) ? prow[j] ^ prow[j0] : prow[j];
          }
          const Packed x = prow[j0];
          for (std::size_t j = 0; j + 1 < g; ++j) {
            swapped[j] = swap_halves(axis[j], g);
          }
          const auto perp = kernel_packed(swapped, n);
          Packed w = 0;
          for (auto v : perp) {
            Packed r = v;
            for (std::size_t j = 0; j < g; ++j) {
              const Packed pivot_bit = prow[j] & (~prow[j] + 1);
              if (r & pivot_bit) r ^= prow[j];
            }
            if (r != 0) {
              w = v;
              break;
            }
          }
          PointIndex other[2];
          const Packed tops[2] = {w, w ^ x};
          for (int t = 0; t < 2; ++t) {
            std::copy(axis.begin(), axis.end(), span.begin());
            span[g - 1] = tops[t];
            rref_packed(span, n);
            auto idx = space.lookup_packed(span);
            if (!idx) {
              throw Error(ErrorCode::kInternal,
                          "line completion produced an unknown point");
            }
            other[t] = *idx;
          }
          const auto self = static_cast<PointIndex>(pi);
          if (self < other[0] && self < other[1]) {
            std::array<PointIndex, 3> tri{self, other[0], other[1]};
            std::sort(tri.begin(), tri.end());
            out.push_back(tri);
          }
        }
      }
    };
    if (workers == 1) {
      scan(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
      for (auto& t : pool) t.join();
    }
    for (auto& part : found) {
      space.lines_.insert(space.lines_.end(), part.begin(), part.end());
    }
    std::sort(space.lines_.begin(), space.lines_.end());
    if (space.lines_.size() != dps::line_count(g)) {
      throw Error(ErrorCode::kInvariantViolation, "line count mismatch");
    }

    space.incidence_offsets_.assign(points + 1, 0);
    for (const auto& l : space.lines_) {
      for (auto p : l) ++space.incidence_offsets_[p + 1];
    }
    for (std::size_t i = 0; i < points; ++i) {
      space.incidence_offsets_[i + 1] += space.incidence_offsets_[i];
    }
    space.incidence_.resize(space.lines_.size() * 3);
    std::vector<std::uint32_t> fill(space.incidence_offsets_.begin(),
                                    space.incidence_offsets_.end() - 1);
    for (std::size_t li = 0; li < space.lines_.size(); ++li) {
      for (auto p : space.lines_[li]) {
        space.incidence_[fill[p]++] = static_cast<std::uint32_t>(li);
      }
    }
  } else {
    space.incidence_offsets_.assign(2, 0);
  }
  return space;
}

std::optional<PointIndex> DualPolarSpace::lookup_packed(
    std::span<const std::uint32_t> rows) const {
  auto it = index_.find(key_of(rows, genus_));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Lagrangian DualPolarSpace::point(PointIndex i) const {
  if (i >= point_count()) {
    throw Error(ErrorCode::kInvalidArgument, "point index out of range");
  }
  const std::size_t g = genus_;
  return Lagrangian::from_span(
      to_bitmatrix(std::span(rows_).subspan(static_cast<std::size_t>(i) * g, g),
                   2 * g),
      g);
}

std::optional<PointIndex> DualPolarSpace::index_of(
    const gf2::BitMatrix& span) const {
  if (span.cols() != 2 * genus_) return std::nullopt;
  auto red = gf2::rref(span);
  if (red.rank != genus_) return std::nullopt;
  return lookup_packed(to_packed(red.matrix));
}

PointIndex DualPolarSpace::index_of(const Lagrangian& l) const {
  auto idx = index_of(l.basis());
  if (!idx) {
    throw Error(ErrorCode::kInvalidArgument,
                "Lagrangian does not belong to this space");
  }
  return *idx;
}

IsotropicLine DualPolarSpace::line(std::size_t i) const {
  const auto& pts = lines_.at(i);
  const auto p = point(pts[0]);
  const auto q = point(pts[1]);
  return IsotropicLine{gf2::row_space_intersection(p.basis(), q.basis()), pts};
}

std::span<const std::uint32_t> DualPolarSpace::lines_through(
    PointIndex p) const {
  if (p >= point_count()) {
    throw Error(ErrorCode::kInvalidArgument, "point index out of range");
  }
  const auto begin = incidence_offsets_[p];
  const auto end = incidence_offsets_[p + 1];
  return std::span(incidence_).subspan(begin, end - begin);
}

PointIndex DualPolarSpace::third_point(PointIndex p, PointIndex q) const {
  return index_of(dps::third_point(point(p), point(q)));
}

std::vector<PointIndex> DualPolarSpace::closure(
    std::span<const PointIndex> seed) const {
  std::vector<char> member(point_count(), 0);
  std::deque<PointIndex> queue;
  for (auto p : seed) {
    if (p >= point_count()) {
      throw Error(ErrorCode::kInvalidArgument, "seed point out of range");
    }
    if (!member[p]) {
      member[p] = 1;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    const PointIndex p = queue.front();
    queue.pop_front();
    for (auto li : lines_through(p)) {
      const auto& l = lines_[li];
      int inside = 0;
      PointIndex missing = 0;
      for (auto r : l) {
        if (member[r]) {
          ++inside;
        } else {
          missing = r;
        }
      }
      if (inside == 2) {
        member[missing] = 1;
        queue.push_back(missing);
      }
    }
  }
  std::vector<PointIndex> out;
  for (std::size_t i = 0; i < member.size(); ++i) {
    if (member[i]) out.push_back(static_cast<PointIndex>(i));
  }
  return out;
}

std::vector<Lagrangian> enumerate_lagrangians(std::size_t genus,
                                              const Limits& limits) {
  check_genus(genus, limits);
  // Points only; lines are not needed here.
  const std::size_t g = genus;
  std::vector<Packed> rows;
  for (Packed mask = 0; mask < (Packed{1} << (2 * g)); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != g) continue;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < 2 * g; ++c) {
      if (mask & (Packed{1} << c)) pivots.push_back(c);
    }
    std::vector<Packed> current;
    extend_rows(g, pivots, mask, current, rows);
  }
  std::vector<Lagrangian> out;
  if (g == 0) {
    out.push_back(Lagrangian::from_span(gf2::BitMatrix(0), 0));
    return out;
  }
  for (std::size_t i = 0; i < rows.size(); i += g) {
    out.push_back(Lagrangian::from_span(
        to_bitmatrix(std::span(rows).subspan(i, g), 2 * g), g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IsotropicLine> enumerate_lines(std::size_t genus,
                                           const Limits& limits) {
  if (genus == 0) {
    throw Error(ErrorCode::kInvalidArgument, "enumerate_lines requires g >= 1");
  }
  const auto space = DualPolarSpace::build(genus, limits);
  std::vector<IsotropicLine> out;
  out.reserve(space.line_count());
  for (std::size_t i = 0; i < space.line_count(); ++i) {
    out.push_back(space.line(i));
  }
  return out;
}

std::vector<PointIndex> geometric_closure(const DualPolarSpace& space,
                                          std::span<const PointIndex> seed) {
  return space.closure(seed);
}

}  // namespace sptri::dps
