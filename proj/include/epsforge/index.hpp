#pragma once

#include <cstdint>
#include <vector>

#include "epsforge/critical.hpp"
#include "epsforge/eval.hpp"
#include "epsforge/ordinal.hpp"

namespace epsforge {

// One position of an index vector: an element of w+1.
struct IndexCoord {
  bool is_omega = false;
  uint64_t n = 0;

  bool operator==(const IndexCoord& o) const {
    return is_omega == o.is_omega && (is_omega || n == o.n);
  }
};

inline int coord_cmp(const IndexCoord& a, const IndexCoord& b) {
  if (a.is_omega || b.is_omega) {
    if (a.is_omega && b.is_omega) return 0;
    return a.is_omega ? 1 : -1;
  }
  if (a.n != b.n) return a.n < b.n ? -1 : 1;
  return 0;
}

// ind(S) as a mixed-radix base-(w+1) vector over the closed eps terms of Cr.
// coords[i] tracks cl_eps()[i]; the most significant coordinate is the last
// one (the innermost term). Lexicographic order from the most significant
// coordinate coincides with the order of the positional ordinal values.
struct IndexVector {
  std::vector<IndexCoord> coords;

  std::size_t size() const { return coords.size(); }
  bool operator==(const IndexVector& o) const { return coords == o.coords; }
  bool operator!=(const IndexVector& o) const { return !(*this == o); }
};

inline int iv_cmp(const IndexVector& a, const IndexVector& b) {
  if (a.size() != b.size()) throw SeriesError("iv_cmp: mismatched index-vector lengths");
  for (std::size_t i = a.size(); i-- > 0;) {
    int c = coord_cmp(a.coords[i], b.coords[i]);
    if (c != 0) return c;
  }
  return 0;
}

inline IndexVector zero_index(std::size_t n) {
  IndexVector iv;
  iv.coords.assign(n, IndexCoord{false, 0});
  return iv;
}

inline IndexVector index_of(const Substitution& s, const CriticalFormulaSet& cr) {
  IndexVector iv;
  iv.coords.reserve(cr.n_cl_eps());
  for (const Expr& e : cr.cl_eps()) {
    uint64_t v = reduce_nat(e, s);
    iv.coords.push_back(v == 0 ? IndexCoord{true, 0} : IndexCoord{false, v - 1});
  }
  return iv;
}

namespace detail {
// (w+1)^i * phi for phi in w+1:
//   phi = w  ->  w^(i+1)
//   phi = c  ->  w^i*c + w^(i-1) + ... + 1   (0 for c = 0)
inline Ordinal positional_term(std::size_t i, const IndexCoord& phi) {
  if (phi.is_omega) return Ordinal::single(Ordinal::finite(i + 1), 1);
  if (phi.n == 0) return Ordinal();
  std::vector<OrdinalTerm> ts;
  ts.reserve(i + 1);
  ts.push_back(OrdinalTerm{Ordinal::finite(i), phi.n});
  for (std::size_t j = i; j-- > 0;) ts.push_back(OrdinalTerm{Ordinal::finite(j), 1});
  return Ordinal::from_terms(std::move(ts));
}
}  // namespace detail

// Positional ordinal value, summed from the most significant coordinate.
inline Ordinal index_ordinal(const IndexVector& iv) {
  Ordinal acc;
  for (std::size_t i = iv.size(); i-- > 0;) acc = ord_add(acc, detail::positional_term(i, iv.coords[i]));
  return acc;
}

}  // namespace epsforge
