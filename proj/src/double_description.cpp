#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"

namespace pidkit {
namespace {

using IntVector = std::vector<mpz_class>;

class Bitset {
 public:
  explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  static Bitset intersect(const Bitset& a, const Bitset& b) {
    Bitset out;
    out.words_.resize(a.words_.size());
    for (std::size_t w = 0; w < a.words_.size(); ++w) out.words_[w] = a.words_[w] & b.words_[w];
    return out;
  }
  static std::size_t intersect_count(const Bitset& a, const Bitset& b) {
    std::size_t n = 0;
    for (std::size_t w = 0; w < a.words_.size(); ++w) n += std::popcount(a.words_[w] & b.words_[w]);
    return n;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  IntVector coords;
  Bitset zeros;  // processed constraints tight at this ray
};

/// Scales a rational vector to the primitive integer vector on the same ray.
IntVector primitive(const RationalVector& v) {
  mpz_class lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  IntVector out(v.size());
  mpz_class g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].get_num() * (lcm / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1) {
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

void make_primitive(IntVector& v) {
  mpz_class g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1) {
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
}

mpz_class dot(const IntVector& a, const IntVector& b) {
  mpz_class out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) out += a[i] * b[i];
  }
  return out;
}

/// Exact rank via fraction-free (Bareiss) elimination.
std::size_t integer_rank(std::vector<IntVector> rows, std::size_t cols) {
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && sgn(rows[pivot][c]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        rows[r][k] = rows[rank][c] * rows[r][k] - rows[r][c] * rows[rank][k];
        mpz_divexact(rows[r][k].get_mpz_t(), rows[r][k].get_mpz_t(), prev.get_mpz_t());
      }
      rows[r][c] = 0;
    }
    prev = rows[rank][c];
    ++rank;
  }
  return rank;
}

/// Rank modulo a 61-bit prime: a lower bound on the rational rank.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::size_t modular_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols,
                         std::size_t stop_at) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size() && rank < stop_at; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const std::uint64_t inv = powmod(rows[rank][c], kPrime - 2);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const std::uint64_t f = mulmod(rows[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) {
        rows[r][k] = (rows[r][k] + kPrime - mulmod(f, rows[rank][k])) % kPrime;
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<std::uint64_t> reduce_mod(const IntVector& v) {
  static const mpz_class prime(std::to_string(kPrime), 10);
  std::vector<std::uint64_t> out(v.size());
  mpz_class r;
  for (std::size_t i = 0; i < v.size(); ++i) {
    mpz_fdiv_r(r.get_mpz_t(), v[i].get_mpz_t(), prime.get_mpz_t());
    out[i] = mpz_get_ui(r.get_mpz_t());
  }
  return out;
}

/// Equality system in reduced row echelon form: x = x0 + N t, t = x[free].
struct AffineParametrization {
  bool consistent = true;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
  std::vector<RationalVector> rows;  // row r: x[pivot r] + sum_f rows[r][f] x[f] = rhs[r]
  RationalVector rhs;
};

AffineParametrization reduce_equalities(const HPolytope& poly) {
  const std::size_t d = poly.dimension();
  std::vector<RationalVector> m;
  RationalVector rhs;
  for (const auto& e : poly.equalities()) {
    m.push_back(e.normal);
    rhs.push_back(e.value);
  }
  AffineParametrization out;
  std::size_t rank = 0;
  std::vector<bool> is_pivot(d, false);
  for (std::size_t c = 0; c < d && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && sgn(m[pivot][c]) == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    std::swap(rhs[pivot], rhs[rank]);
    const Rational inv = 1 / m[rank][c];
    for (auto& v : m[rank]) v *= inv;
    rhs[rank] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || sgn(m[r][c]) == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = c; k < d; ++k) {
        if (sgn(m[rank][k]) != 0) m[r][k] -= f * m[rank][k];
      }
      rhs[r] -= f * rhs[rank];
    }
    out.pivot_cols.push_back(c);
    is_pivot[c] = true;
    ++rank;
  }
  for (std::size_t r = rank; r < m.size(); ++r) {
    if (sgn(rhs[r]) != 0) out.consistent = false;
  }
  for (std::size_t c = 0; c < d; ++c) {
    if (!is_pivot[c]) out.free_cols.push_back(c);
  }
  m.resize(rank);
  rhs.resize(rank);
  out.rows = std::move(m);
  out.rhs = std::move(rhs);
  return out;
}

RationalVector lift(const AffineParametrization& param, std::size_t d, const RationalVector& t) {
  RationalVector x(d, Rational(0));
  for (std::size_t f = 0; f < param.free_cols.size(); ++f) x[param.free_cols[f]] = t[f];
  for (std::size_t r = 0; r < param.rows.size(); ++r) {
    Rational v = param.rhs[r];
    for (std::size_t f = 0; f < param.free_cols.size(); ++f) {
      const Rational& coef = param.rows[r][param.free_cols[f]];
      if (sgn(coef) != 0) v -= coef * t[f];
    }
    x[param.pivot_cols[r]] = std::move(v);
  }
  return x;
}

class DoubleDescription {
 public:
  DoubleDescription(std::vector<IntVector> rows, std::size_t width, std::size_t cap)
      : rows_(std::move(rows)), width_(width), cap_(cap) {
    for (const auto& r : rows_) rows_mod_.push_back(reduce_mod(r));
  }

  /// Returns false if the homogenised system has a lineality space.
  bool run() {
    std::vector<std::size_t> basis_rows;
    {
      std::vector<RationalVector> echelon;
      std::vector<std::size_t> lead;
      for (std::size_t i = 0; i < rows_.size() && basis_rows.size() < width_; ++i) {
        RationalVector v(width_);
        for (std::size_t k = 0; k < width_; ++k) v[k] = rows_[i][k];
        for (std::size_t e = 0; e < echelon.size(); ++e) {
          if (sgn(v[lead[e]]) == 0) continue;
          const Rational f = v[lead[e]] / echelon[e][lead[e]];
          for (std::size_t k = 0; k < width_; ++k) v[k] -= f * echelon[e][k];
        }
        auto nz = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
        if (nz == v.end()) continue;
        lead.push_back(static_cast<std::size_t>(nz - v.begin()));
        echelon.push_back(std::move(v));
        basis_rows.push_back(i);
      }
    }
    if (basis_rows.size() < width_) return false;

    // Initial simplicial cone {z : B z <= 0}; its rays are the columns of -B^{-1}.
    const std::size_t n = width_;
    std::vector<RationalVector> aug(n, RationalVector(2 * n, Rational(0)));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) aug[r][c] = rows_[basis_rows[r]][c];
      aug[r][n + r] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (sgn(aug[p][c]) == 0) ++p;
      std::swap(aug[p], aug[c]);
      const Rational inv = 1 / aug[c][c];
      for (auto& v : aug[c]) v *= inv;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || sgn(aug[r][c]) == 0) continue;
        const Rational f = aug[r][c];
        for (std::size_t k = 0; k < 2 * n; ++k) aug[r][k] -= f * aug[c][k];
      }
    }
    std::vector<bool> processed(rows_.size(), false);
    for (std::size_t i : basis_rows) processed[i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      RationalVector col(n);
      for (std::size_t r = 0; r < n; ++r) col[r] = -aug[r][n + j];
      Ray ray{primitive(col), Bitset(rows_.size())};
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) ray.zeros.set(basis_rows[k]);
      }
      rays_.push_back(std::move(ray));
    }

    for (std::size_t i = 0; i < rows_.size() && !rays_.empty(); ++i) {
      if (!processed[i]) add_constraint(i);
    }
    return true;
  }

  const std::vector<Ray>& rays() const { return rays_; }

 private:
  void add_constraint(std::size_t row) {
    std::vector<std::size_t> pos, neg, zero;
    std::vector<mpz_class> value(rays_.size());
    for (std::size_t r = 0; r < rays_.size(); ++r) {
      value[r] = dot(rows_[row], rays_[r].coords);
      const int s = sgn(value[r]);
      (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
    }
    std::vector<Ray> next;
    next.reserve(neg.size() + zero.size());
    for (std::size_t r : neg) next.push_back(rays_[r]);
    for (std::size_t r : zero) {
      next.push_back(rays_[r]);
      next.back().zeros.set(row);
    }
    if (!pos.empty()) {
      for (std::size_t p : pos) {
        for (std::size_t q : neg) {
          if (!adjacent(rays_[p], rays_[q])) continue;
          IntVector coords(width_);
          for (std::size_t k = 0; k < width_; ++k) {
            coords[k] = value[p] * rays_[q].coords[k] - value[q] * rays_[p].coords[k];
          }
          make_primitive(coords);
          Ray ray{std::move(coords), Bitset::intersect(rays_[p].zeros, rays_[q].zeros)};
          ray.zeros.set(row);
          next.push_back(std::move(ray));
          if (next.size() > cap_) {
            throw ResourceError("vertex enumeration exceeded the cap of " + std::to_string(cap_) +
                                    " rays",
                                cap_);
          }
        }
      }
    }
    rays_ = std::move(next);
  }

  /// Algebraic adjacency: the constraints tight at both rays have rank
  /// width - 2.
  bool adjacent(const Ray& a, const Ray& b) const {
    const std::size_t need = width_ - 2;
    if (need == 0) return true;
    if (Bitset::intersect_count(a.zeros, b.zeros) < need) return false;
    const Bitset common = Bitset::intersect(a.zeros, b.zeros);
    std::vector<std::vector<std::uint64_t>> mod_rows;
    common.for_each([&](std::size_t i) { mod_rows.push_back(rows_mod_[i]); });
    // The rank over Q is at most `need` because both rays lie in the null
    // space, and the modular rank is a lower bound on it.
    if (modular_rank(mod_rows, width_, need) >= need) return true;
    std::vector<IntVector> exact_rows;
    common.for_each([&](std::size_t i) { exact_rows.push_back(rows_[i]); });
    return integer_rank(std::move(exact_rows), width_) >= need;
  }

  std::vector<IntVector> rows_;
  std::vector<std::vector<std::uint64_t>> rows_mod_;
  std::size_t width_;
  std::size_t cap_;
  std::vector<Ray> rays_;
};

}  // namespace

VertexSet enumerate_vertices(const HPolytope& poly, const EnumerationOptions& options) {
  const std::size_t d = poly.dimension();
  VertexSet out;
  out.dimension = d;

  const AffineParametrization param = reduce_equalities(poly);
  if (!param.consistent) return out;
  const std::size_t k = param.free_cols.size();

  // Project every inequality onto the free coordinates: a'.t <= b'.
  std::vector<RationalVector> projected;
  for (const auto& h : poly.inequalities()) {
    RationalVector row(k + 1, Rational(0));
    Rational offset = 0;
    for (std::size_t f = 0; f < k; ++f) row[f] = h.normal[param.free_cols[f]];
    for (std::size_t r = 0; r < param.rows.size(); ++r) {
      const Rational& a = h.normal[param.pivot_cols[r]];
      if (sgn(a) == 0) continue;
      offset += a * param.rhs[r];
      for (std::size_t f = 0; f < k; ++f) {
        const Rational& coef = param.rows[r][param.free_cols[f]];
        if (sgn(coef) != 0) row[f] -= a * coef;
      }
    }
    const Rational bound = h.bound - offset;
    const bool trivial = std::all_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k),
                                     [](const Rational& x) { return sgn(x) == 0; });
    if (trivial) {
      if (sgn(bound) < 0) return out;
      continue;
    }
    row[k] = -bound;  // homogenised: a'.t - b' lambda <= 0
    projected.push_back(std::move(row));
  }

  if (k == 0) {
    out.points.push_back(lift(param, d, {}));
    return out;
  }

  std::vector<IntVector> rows;
  for (const auto& r : projected) rows.push_back(primitive(r));
  IntVector lambda_row(k + 1, mpz_class(0));
  lambda_row[k] = -1;
  rows.push_back(std::move(lambda_row));
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  DoubleDescription dd(std::move(rows), k + 1, options.vertex_cap);
  if (!dd.run()) {
    LinearProgram feasibility{poly, RationalVector(d, Rational(0)), Sense::minimize};
    // An infeasible system with a lineality space is still just empty.
    try {
      if (!lp_solve(feasibility).feasible()) return out;
    } catch (const InputError&) {
    }
    throw InputError("polytope is unbounded");
  }

  bool has_vertex = false, has_direction = false;
  for (const auto& ray : dd.rays()) {
    if (sgn(ray.coords[k]) > 0) {
      has_vertex = true;
    } else {
      has_direction = true;
    }
  }
  if (has_vertex && has_direction) throw InputError("polytope is unbounded");
  if (!has_vertex) return out;
  if (dd.rays().size() > options.vertex_cap) {
    throw ResourceError("vertex enumeration exceeded the cap of " +
                            std::to_string(options.vertex_cap) + " vertices",
                        options.vertex_cap);
  }

  for (const auto& ray : dd.rays()) {
    RationalVector t(k);
    for (std::size_t f = 0; f < k; ++f) {
      t[f] = Rational(ray.coords[f], ray.coords[k]);
      t[f].canonicalize();
    }
    out.points.push_back(lift(param, d, t));
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

}  // namespace pidkit
