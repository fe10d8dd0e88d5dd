#pragma once

// Integral homology of finite simplicial complexes, in particular order
// complexes of finite posets. Boundary matrices are reduced by sparse unit
// pivots first; whatever is left goes through a dense Smith normal form.

#include "tropix/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace tropix {

struct HomologyGroups {
  /// betti[k] = rank of H_k; torsion[k] = invariant factors > 1 of H_k.
  std::vector<std::size_t> betti;
  std::vector<std::vector<Integer>> torsion;

  std::size_t reduced_betti(std::size_t k) const {
    if (k >= betti.size()) return 0;
    return k == 0 ? betti[0] - 1 : betti[k];
  }
  bool torsion_free() const {
    for (const auto& t : torsion)
      if (!t.empty()) return false;
    return true;
  }
};

namespace detail {

struct Overflow {};

inline std::int64_t checked_fma(std::int64_t a, std::int64_t b, std::int64_t c) {
  std::int64_t prod, out;
  if (__builtin_mul_overflow(b, c, &prod) || __builtin_add_overflow(a, prod, &out)) throw Overflow{};
  return out;
}

/// Sparse integer matrix given by columns of (row, value) entries.
using SparseColumns = std::vector<std::map<std::size_t, std::int64_t>>;

struct ReducedBoundary {
  std::size_t rank = 0;
  std::vector<Integer> torsion;
};

inline ReducedBoundary dense_reduce(const SparseColumns& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, x] : cols[c]) m(r, c) = x;
  ReducedBoundary out;
  for (const auto& d : smith_invariants(m)) {
    ++out.rank;
    if (abs_value(d) != 1) out.torsion.push_back(abs_value(d));
  }
  return out;
}

/// Rank and invariant factors > 1 of a sparse integer matrix.
inline ReducedBoundary reduce_boundary(SparseColumns cols, std::size_t rows) {
  const SparseColumns original = cols;
  try {
    std::vector<std::set<std::size_t>> row_cols(rows);
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (const auto& [r, x] : cols[c]) row_cols[r].insert(c);
    std::vector<bool> col_alive(cols.size(), true);
    std::size_t pivots = 0;
    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<std::size_t> order;
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (col_alive[c] && !cols[c].empty()) order.push_back(c);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cols[a].size() < cols[b].size(); });
      for (auto c : order) {
        if (!col_alive[c] || cols[c].empty()) continue;
        std::size_t best_row = rows;
        for (const auto& [r, x] : cols[c])
          if ((x == 1 || x == -1) && (best_row == rows || row_cols[r].size() < row_cols[best_row].size())) best_row = r;
        if (best_row == rows) continue;
        const std::size_t r = best_row;
        const std::int64_t p = cols[c].at(r);
        std::vector<std::size_t> others(row_cols[r].begin(), row_cols[r].end());
        for (auto j : others) {
          if (j == c) continue;
          // col_j -= (a_rj / p) col_c, and 1/p = p for a unit.
          const std::int64_t factor = -cols[j].at(r) * p;
          for (const auto& [i, x] : cols[c]) {
            auto it = cols[j].find(i);
            std::int64_t value = checked_fma(it == cols[j].end() ? 0 : it->second, factor, x);
            if (value == 0) {
              if (it != cols[j].end()) cols[j].erase(it);
              row_cols[i].erase(j);
            } else {
              cols[j][i] = value;
              row_cols[i].insert(j);
            }
          }
        }
        for (const auto& [i, x] : cols[c]) row_cols[i].erase(c);
        cols[c].clear();
        col_alive[c] = false;
        ++pivots;
        progress = true;
      }
    }
    // Remaining block, re-indexed densely.
    std::map<std::size_t, std::size_t> row_index;
    SparseColumns rest;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (!col_alive[c] || cols[c].empty()) continue;
      std::map<std::size_t, std::int64_t> col;
      for (const auto& [r, x] : cols[c]) col[row_index.emplace(r, row_index.size()).first->second] = x;
      rest.push_back(std::move(col));
    }
    auto tail = dense_reduce(rest, row_index.size());
    tail.rank += pivots;
    return tail;
  } catch (const Overflow&) {
    return dense_reduce(original, rows);
  }
}

}  // namespace detail

/// Homology of the simplicial complex spanned by the given simplices (each a
/// vertex list); all faces are added automatically.
inline HomologyGroups simplicial_homology(const std::vector<std::vector<std::size_t>>& top) {
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> by_dim;
  for (auto s : top) {
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("simplex with repeated vertex");
    // Enumerate all nonempty faces via bitmasks; simplices here stay small.
    if (s.size() > 20) throw std::invalid_argument("simplex too large");
    for (std::uint32_t mask = 1; mask < (1u << s.size()); ++mask) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      if (by_dim.size() < f.size()) by_dim.resize(f.size());
      by_dim[f.size() - 1].emplace(f, 0);
    }
  }
  HomologyGroups out;
  if (by_dim.empty()) return out;
  for (auto& layer : by_dim) {
    std::size_t i = 0;
    for (auto& [f, idx] : layer) idx = i++;
  }
  const std::size_t top_dim = by_dim.size() - 1;
  // boundary[k] : C_k -> C_{k-1}, for k >= 1.
  std::vector<detail::ReducedBoundary> red(top_dim + 2);
  for (std::size_t k = 1; k <= top_dim; ++k) {
    detail::SparseColumns cols(by_dim[k].size());
    for (const auto& [f, idx] : by_dim[k])
      for (std::size_t i = 0; i < f.size(); ++i) {
        std::vector<std::size_t> face = f;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        cols[idx][by_dim[k - 1].at(face)] = (i % 2 == 0) ? 1 : -1;
      }
    red[k] = detail::reduce_boundary(std::move(cols), by_dim[k - 1].size());
  }
  for (std::size_t k = 0; k <= top_dim; ++k) {
    out.betti.push_back(by_dim[k].size() - red[k].rank - red[k + 1].rank);
    out.torsion.push_back(red[k + 1].torsion);
  }
  return out;
}

/// Homology of the order complex of a finite poset given by strict down-sets:
/// below[i] lists every element strictly less than i.
inline HomologyGroups order_complex_homology(const std::vector<std::vector<std::size_t>>& below) {
  const std::size_t count = below.size();
  std::vector<std::set<std::size_t>> down(count);
  std::vector<bool> is_below(count, false);
  for (std::size_t i = 0; i < count; ++i)
    for (auto x : below[i]) {
      if (x >= count || x == i) throw std::invalid_argument("poset down-set out of range or reflexive");
      down[i].insert(x);
      is_below[x] = true;
    }
  // Maximal chains follow covering relations from maximal to minimal elements.
  std::vector<std::vector<std::size_t>> covers(count);
  for (std::size_t i = 0; i < count; ++i)
    for (auto b : down[i]) {
      bool cover = true;
      for (auto c : down[i])
        if (down[c].count(b)) {
          cover = false;
          break;
        }
      if (cover) covers[i].push_back(b);
    }
  std::vector<std::vector<std::size_t>> chains;
  std::vector<std::size_t> chain;
  std::function<void(std::size_t)> walk = [&](std::size_t top) {
    chain.push_back(top);
    if (covers[top].empty()) chains.push_back(chain);
    for (auto b : covers[top]) walk(b);
    chain.pop_back();
  };
  for (std::size_t i = 0; i < count; ++i)
    if (!is_below[i]) walk(i);
  return simplicial_homology(chains);
}

}  // namespace tropix
