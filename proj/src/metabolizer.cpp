#include "slicekit/metabolizer.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "slicekit/jsonutil.hpp"
#include "slicekit/modp.hpp"

namespace slicekit {

namespace {

std::vector<Z> unit_vec(int k, int i) {
  std::vector<Z> v(k, Z(0));
  v[i] = 1;
  return v;
}

std::vector<std::pair<Z, int>> factor_order(Z n) {
  std::vector<std::pair<Z, int>> out;
  for (Z d = 2; d * d <= n && d <= 1000000; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
      out.emplace_back(n, 1);
    } else if (mpz_perfect_square_p(n.get_mpz_t())) {
      Z r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      if (mpz_probab_prime_p(r.get_mpz_t(), 30) == 0)
        throw std::domain_error("cannot factor group order");
      out.emplace_back(r, 2);
    } else {
      throw std::domain_error("cannot factor group order");
    }
  }
  return out;
}

// p-primary component: basis f_i = (d_i / p^{a_i}) g_i of order p^{a_i}.
struct Part {
  Z p;
  std::vector<int> idx;
  std::vector<int> exp;
  std::vector<Z> mod;  // p^{a_i}
  bool elementary = true;
  Z size = 1;
  int total_exp = 0;
};

Part primary_part(const CoverHomology& h, const Z& p) {
  Part part;
  part.p = p;
  for (size_t i = 0; i < h.factors.size(); ++i) {
    Z d = h.factors[i];
    int e = 0;
    Z m = 1;
    while (d % p == 0) {
      d /= p;
      ++e;
      m *= p;
    }
    if (e == 0) continue;
    part.idx.push_back(static_cast<int>(i));
    part.exp.push_back(e);
    part.mod.push_back(m);
    part.size *= m;
    part.total_exp += e;
    if (e > 1) part.elementary = false;
  }
  return part;
}

Character part_vector_to_character(const CoverHomology& h, const Part& part,
                                   const std::vector<Z>& x) {
  Character c;
  c.coeffs.assign(h.factors.size(), Z(0));
  for (size_t i = 0; i < part.idx.size(); ++i)
    c.coeffs[part.idx[i]] =
        mod_floor(x[i], part.mod[i]) * (h.factors[part.idx[i]] / part.mod[i]);
  return c;
}

MatQ part_linking(const CoverHomology& h, const Part& part) {
  int k = static_cast<int>(part.idx.size());
  MatQ l(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      l.at(i, j) = linking_pair(h, part_vector_to_character(h, part, unit_vec(k, i)),
                                part_vector_to_character(h, part, unit_vec(k, j)));
  return l;
}

// A single primary component's metabolizer candidate, elements in part
// coordinates.
using PartSubgroup = std::vector<std::vector<Z>>;  // sorted element list

std::vector<std::vector<Z>> part_closure(const Part& part,
                                         const std::vector<std::vector<Z>>& gens,
                                         size_t cap) {
  int k = static_cast<int>(part.idx.size());
  std::set<std::vector<Z>> seen;
  std::vector<std::vector<Z>> queue;
  std::vector<Z> zero(k, Z(0));
  seen.insert(zero);
  queue.push_back(zero);
  while (!queue.empty()) {
    std::vector<Z> cur = queue.back();
    queue.pop_back();
    for (const auto& g : gens) {
      std::vector<Z> nxt(k);
      for (int i = 0; i < k; ++i) nxt[i] = mod_floor(cur[i] + g[i], part.mod[i]);
      if (seen.insert(nxt).second) {
        if (seen.size() > cap) throw std::domain_error("metabolizer enumeration budget exhausted");
        queue.push_back(nxt);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

// Z_p-valued form for an elementary part: p * linking as integers mod p.
MatZ elementary_form(const Part& part, const MatQ& l) {
  int k = static_cast<int>(part.idx.size());
  MatZ f(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Q v = l.at(i, j) * Q(part.p);
      if (v.get_den() != 1) throw std::logic_error("linking form denominator exceeds p");
      f.at(i, j) = mod_floor(v.get_num(), part.p);
    }
  return f;
}

Z gaussian_binomial(int k, int m, const Z& p) {
  Q acc(1);
  for (int i = 0; i < m; ++i) {
    Z num, den;
    // (p^{k-i} - 1) / (p^{m-i} - 1)
    mpz_pow_ui(num.get_mpz_t(), p.get_mpz_t(), k - i);
    mpz_pow_ui(den.get_mpz_t(), p.get_mpz_t(), m - i);
    acc *= Q(num - 1) / Q(den - 1);
  }
  acc.canonicalize();
  if (acc.get_den() != 1) throw std::logic_error("gaussian binomial not integral");
  return acc.get_num();
}

// All rank-m reduced-row-echelon bases over Z_p with k columns, streamed in a
// deterministic order: pivot-column combinations lexicographically, then free
// entries as a base-p counter.
struct RrefStream {
  int k, m;
  Z p;
  std::vector<int> pivots;
  std::vector<std::pair<int, int>> free_pos;  // (row, col)
  std::vector<Z> counter;
  bool done = false;

  RrefStream(int k_, int m_, Z p_) : k(k_), m(m_), p(std::move(p_)) {
    for (int i = 0; i < m; ++i) pivots.push_back(i);
    reset_free();
  }

  void reset_free() {
    free_pos.clear();
    std::vector<bool> is_pivot(k, false);
    for (int c : pivots) is_pivot[c] = true;
    for (int r = 0; r < m; ++r)
      for (int c = pivots[r] + 1; c < k; ++c)
        if (!is_pivot[c]) free_pos.emplace_back(r, c);
    counter.assign(free_pos.size(), Z(0));
  }

  bool next_pivots() {
    // Lexicographically next m-combination of {0..k-1}.
    int i = m - 1;
    while (i >= 0 && pivots[i] == k - m + i) --i;
    if (i < 0) return false;
    ++pivots[i];
    for (int j = i + 1; j < m; ++j) pivots[j] = pivots[j - 1] + 1;
    return true;
  }

  // Fills basis (m x k); returns false when exhausted.
  bool next(MatZ& basis) {
    if (done) return false;
    basis = MatZ(m, k);
    for (int r = 0; r < m; ++r) basis.at(r, pivots[r]) = 1;
    for (size_t t = 0; t < free_pos.size(); ++t)
      basis.at(free_pos[t].first, free_pos[t].second) = counter[t];
    // Advance the counter.
    size_t t = 0;
    for (; t < counter.size(); ++t) {
      ++counter[t];
      if (counter[t] < p) break;
      counter[t] = 0;
    }
    if (t == counter.size()) {
      if (!next_pivots())
        done = true;
      else
        reset_free();
    }
    return true;
  }
};

bool is_isotropic_basis(const MatZ& basis, const MatZ& form, const Z& p) {
  int m = basis.rows(), k = basis.cols();
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      Z acc = 0;
      for (int i = 0; i < k; ++i) {
        if (basis.at(a, i) == 0) continue;
        for (int j = 0; j < k; ++j)
          acc += basis.at(a, i) * form.at(i, j) * basis.at(b, j);
      }
      if (mod_floor(acc, p) != 0) return false;
    }
  return true;
}

std::vector<std::vector<Z>> span_elements(const MatZ& basis, const Part& part) {
  int m = basis.rows(), k = basis.cols();
  std::vector<std::vector<Z>> gens;
  for (int r = 0; r < m; ++r) {
    std::vector<Z> g(k);
    for (int c = 0; c < k; ++c) g[c] = basis.at(r, c);
    gens.push_back(std::move(g));
  }
  return part_closure(part, gens, 1u << 24);
}

std::vector<PartSubgroup> enumerate_part_elementary(const CoverHomology& h, const Part& part,
                                                    long long budget, int workers) {
  int k = static_cast<int>(part.idx.size());
  int m = k / 2;
  Z count = gaussian_binomial(k, m, part.p);
  if (count > Z(static_cast<long>(budget)))
    throw std::domain_error("metabolizer enumeration budget exhausted");
  MatZ form = elementary_form(part, part_linking(h, part));
  // Materialize candidates (bounded by the budget check above), then test
  // isotropy, optionally across workers.
  std::vector<MatZ> candidates;
  RrefStream stream(k, m, part.p);
  MatZ basis;
  while (stream.next(basis)) candidates.push_back(basis);
  std::vector<char> accepted(candidates.size(), 0);
  auto run = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i)
      accepted[i] = is_isotropic_basis(candidates[i], form, part.p) ? 1 : 0;
  };
  if (workers <= 1) {
    run(0, candidates.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (candidates.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      size_t lo = std::min(candidates.size(), w * chunk);
      size_t hi = std::min(candidates.size(), lo + chunk);
      pool.emplace_back(run, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  std::vector<PartSubgroup> out;
  for (size_t i = 0; i < candidates.size(); ++i)
    if (accepted[i]) out.push_back(span_elements(candidates[i], part));
  return out;
}

std::vector<PartSubgroup> enumerate_part_generic(const CoverHomology& h, const Part& part,
                                                 long long budget) {
  // Breadth-first closure over isotropic subgroups, deduplicated by element
  // list. Reaches every metabolizer since subgroups grow one generator at a
  // time.
  int k = static_cast<int>(part.idx.size());
  if (part.total_exp % 2 != 0) return {};
  Z target;
  mpz_pow_ui(target.get_mpz_t(), part.p.get_mpz_t(), part.total_exp / 2);
  // All elements of the part.
  std::vector<std::vector<Z>> all;
  {
    std::vector<Z> cur(k, Z(0));
    while (true) {
      all.push_back(cur);
      int i = 0;
      for (; i < k; ++i) {
        ++cur[i];
        if (cur[i] < part.mod[i]) break;
        cur[i] = 0;
      }
      if (i == k) break;
      if (static_cast<long long>(all.size()) > budget)
        throw std::domain_error("metabolizer enumeration budget exhausted");
    }
  }
  MatQ l = part_linking(h, part);
  auto pair_of = [&](const std::vector<Z>& x, const std::vector<Z>& y) {
    Q acc(0);
    for (int i = 0; i < k; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < k; ++j) {
        if (y[j] == 0) continue;
        acc += Q(x[i] * y[j]) * l.at(i, j);
      }
    }
    return mod1(acc);
  };
  std::set<PartSubgroup> seen;
  std::vector<PartSubgroup> queue;
  std::vector<PartSubgroup> out;
  PartSubgroup zero{std::vector<Z>(k, Z(0))};
  seen.insert(zero);
  queue.push_back(zero);
  if (Z(1) == target) return {zero};
  long long work = 0;
  while (!queue.empty()) {
    PartSubgroup s = queue.back();
    queue.pop_back();
    for (const auto& x : all) {
      if (++work > budget) throw std::domain_error("metabolizer enumeration budget exhausted");
      if (std::binary_search(s.begin(), s.end(), x)) continue;
      if (pair_of(x, x) != 0) continue;
      bool ok = true;
      for (const auto& e : s)
        if (pair_of(x, e) != 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      std::vector<std::vector<Z>> gens(s.begin(), s.end());
      gens.push_back(x);
      PartSubgroup t = part_closure(part, gens, 1u << 24);
      Z tsize(static_cast<long>(t.size()));
      if (tsize > target) continue;
      if (!seen.insert(t).second) continue;
      if (tsize == target)
        out.push_back(t);
      else
        queue.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Minimal-ish generator list for a sorted element set: greedily add elements
// not yet in the running closure.
std::vector<std::vector<Z>> pick_generators(const Part& part, const PartSubgroup& elems) {
  std::vector<std::vector<Z>> gens;
  std::vector<std::vector<Z>> have{std::vector<Z>(part.idx.size(), Z(0))};
  for (const auto& e : elems) {
    if (std::binary_search(have.begin(), have.end(), e)) continue;
    gens.push_back(e);
    have = part_closure(part, gens, 1u << 24);
  }
  return gens;
}

}  // namespace

void assert_metabolizer(const CoverHomology& h, const Metabolizer& m) {
  Z sq = Z(static_cast<long>(m.elements.size()));
  if (sq * sq != h.order) throw std::logic_error("metabolizer order condition violated");
  if (m.elements.size() <= 256) {
    for (size_t a = 0; a < m.elements.size(); ++a)
      for (size_t b = a; b < m.elements.size(); ++b)
        if (linking_pair(h, Character{m.elements[a]}, Character{m.elements[b]}) != 0)
          throw std::logic_error("metabolizer is not self-annihilating");
  } else {
    for (size_t a = 0; a < m.generators.size(); ++a)
      for (size_t b = a; b < m.generators.size(); ++b)
        if (linking_pair(h, m.generators[a], m.generators[b]) != 0)
          throw std::logic_error("metabolizer is not self-annihilating");
  }
}

bool metabolizer_contains(const Metabolizer& m, const CoverHomology& h, const Character& x) {
  return std::binary_search(m.elements.begin(), m.elements.end(), reduce_coeffs(h, x.coeffs));
}

std::vector<Metabolizer> enumerate_metabolizers(const CoverHomology& h, long long budget,
                                                int workers) {
  size_t k = h.factors.size();
  auto primes = factor_order(h.order);
  for (const auto& [p, e] : primes)
    if (e % 2 != 0)
      throw std::domain_error("group order is not a perfect square; no metabolizer exists");
  // Per-prime lists, then the cartesian product across primes.
  std::vector<Part> parts;
  std::vector<std::vector<PartSubgroup>> lists;
  for (const auto& [p, e] : primes) {
    Part part = primary_part(h, p);
    std::vector<PartSubgroup> ms =
        part.elementary ? enumerate_part_elementary(h, part, budget, workers)
                        : enumerate_part_generic(h, part, budget);
    if (ms.empty()) return {};
    parts.push_back(std::move(part));
    lists.push_back(std::move(ms));
  }
  std::vector<Metabolizer> out;
  std::vector<size_t> pick(parts.size(), 0);
  while (true) {
    Metabolizer m;
    // Element list: sums across primary components.
    std::vector<std::vector<Z>> elems{std::vector<Z>(k, Z(0))};
    for (size_t t = 0; t < parts.size(); ++t) {
      const PartSubgroup& sub = lists[t][pick[t]];
      std::vector<std::vector<Z>> next;
      next.reserve(elems.size() * sub.size());
      for (const auto& base : elems)
        for (const auto& pv : sub) {
          Character c = part_vector_to_character(h, parts[t], pv);
          std::vector<Z> sum(k);
          for (size_t i = 0; i < k; ++i) sum[i] = mod_floor(base[i] + c.coeffs[i], h.factors[i]);
          next.push_back(std::move(sum));
        }
      elems = std::move(next);
      for (const auto& g : pick_generators(parts[t], sub))
        m.generators.push_back(part_vector_to_character(h, parts[t], g));
    }
    std::sort(elems.begin(), elems.end());
    m.elements = std::move(elems);
    assert_metabolizer(h, m);
    out.push_back(std::move(m));
    // Advance the multi-index.
    size_t t = 0;
    for (; t < parts.size(); ++t) {
      if (++pick[t] < lists[t].size()) break;
      pick[t] = 0;
    }
    if (t == parts.size()) break;
    if (parts.empty()) break;
  }
  std::sort(out.begin(), out.end(),
            [](const Metabolizer& a, const Metabolizer& b) { return a.elements < b.elements; });
  return out;
}

std::vector<Metabolizer> equivariant_filter(const CoverHomology& h, std::vector<Metabolizer> ms) {
  std::vector<Metabolizer> out;
  for (Metabolizer& m : ms) {
    bool stable = true;
    for (const Character& g : m.generators)
      if (!metabolizer_contains(m, h, apply_deck(h, g))) {
        stable = false;
        break;
      }
    if (!stable) continue;
    m.equivariant = true;
    // Eigen-split annotation where the primary part is elementary.
    for (const auto& [p, e] : factor_order(h.order)) {
      Part part = primary_part(h, p);
      if (!part.elementary) continue;
      std::vector<Eigenspace> es;
      try {
        es = eigenspaces(h, p);
      } catch (const std::domain_error&) {
        continue;
      }
      int pk = static_cast<int>(part.idx.size());
      // Basis of M's p-part in part coordinates.
      std::vector<std::vector<Z>> pgens;
      for (const auto& el : m.elements) {
        bool in_part = true;
        std::vector<Z> pv(pk);
        for (size_t i = 0; i < h.factors.size(); ++i) {
          auto pos = std::find(part.idx.begin(), part.idx.end(), static_cast<int>(i));
          if (pos == part.idx.end()) {
            if (el[i] != 0) in_part = false;
          } else {
            Z unit = h.factors[i] / part.p;
            if (el[i] % unit != 0)
              in_part = false;
            else
              pv[pos - part.idx.begin()] = mod_floor(el[i] / unit, part.p);
          }
          if (!in_part) break;
        }
        if (in_part) pgens.push_back(std::move(pv));
      }
      MatZ mb(static_cast<int>(pgens.size()), pk);
      for (size_t r = 0; r < pgens.size(); ++r)
        for (int c = 0; c < pk; ++c) mb.at(static_cast<int>(r), c) = pgens[r][c];
      int mdim = rank_mod_p(mb, part.p);
      for (const Eigenspace& esp : es) {
        int edim = static_cast<int>(esp.basis.size());
        MatZ stacked(mb.rows() + edim, pk);
        for (int r = 0; r < mb.rows(); ++r)
          for (int c = 0; c < pk; ++c) stacked.at(r, c) = mb.at(r, c);
        for (int r = 0; r < edim; ++r)
          for (int c = 0; c < pk; ++c) {
            Z unit = h.factors[part.idx[c]] / part.p;
            stacked.at(mb.rows() + r, c) = mod_floor(esp.basis[r].coeffs[part.idx[c]] / unit, part.p);
          }
        int inter = mdim + edim - rank_mod_p(stacked, part.p);
        m.eigen_split.emplace_back(p, esp.eigenvalue, inter);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Metabolizer> brute_force_metabolizers(const CoverHomology& h) {
  if (h.order > 625) throw std::domain_error("brute-force scan limited to order <= 625");
  size_t k = h.factors.size();
  // Every element of the group.
  std::vector<std::vector<Z>> all;
  {
    std::vector<Z> cur(k, Z(0));
    while (true) {
      all.push_back(cur);
      size_t i = 0;
      for (; i < k; ++i) {
        ++cur[i];
        if (cur[i] < h.factors[i]) break;
        cur[i] = 0;
      }
      if (i == k) break;
    }
  }
  auto closure = [&](std::vector<std::vector<Z>> gens) {
    std::set<std::vector<Z>> seen;
    std::vector<std::vector<Z>> queue;
    std::vector<Z> zero(k, Z(0));
    seen.insert(zero);
    queue.push_back(zero);
    while (!queue.empty()) {
      auto cur = queue.back();
      queue.pop_back();
      for (const auto& g : gens) {
        std::vector<Z> nxt(k);
        for (size_t i = 0; i < k; ++i) nxt[i] = mod_floor(cur[i] + g[i], h.factors[i]);
        if (seen.insert(nxt).second) queue.push_back(nxt);
      }
    }
    return std::vector<std::vector<Z>>(seen.begin(), seen.end());
  };
  // Full subgroup lattice by closure BFS.
  std::map<std::vector<std::vector<Z>>, std::vector<std::vector<Z>>> seen;  // elements -> gens
  std::vector<std::vector<std::vector<Z>>> queue;
  std::vector<std::vector<Z>> zero{std::vector<Z>(k, Z(0))};
  seen[zero] = {};
  queue.push_back(zero);
  while (!queue.empty()) {
    auto s = queue.back();
    queue.pop_back();
    auto gens = seen[s];
    for (const auto& x : all) {
      if (std::binary_search(s.begin(), s.end(), x)) continue;
      auto g2 = gens;
      g2.push_back(x);
      auto t = closure(g2);
      if (seen.emplace(t, g2).second) queue.push_back(t);
    }
  }
  std::vector<Metabolizer> out;
  for (const auto& [elems, gens] : seen) {
    // M^perp over the whole group, literally.
    std::vector<std::vector<Z>> perp;
    for (const auto& x : all) {
      bool ann = true;
      for (const auto& e : elems)
        if (linking_pair(h, Character{x}, Character{e}) != 0) {
          ann = false;
          break;
        }
      if (ann) perp.push_back(x);
    }
    std::sort(perp.begin(), perp.end());
    if (perp == elems) {
      Metabolizer m;
      m.elements = elems;
      for (const auto& g : gens) m.generators.push_back(Character{g});
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Metabolizer& a, const Metabolizer& b) { return a.elements < b.elements; });
  return out;
}

MetabolizerFamily classify(const Metabolizer& m, const CoverHomology& h, const EigenFrame& f) {
  if (!m.equivariant) throw std::domain_error("classify expects an equivariant metabolizer");
  Part part = primary_part(h, f.p);
  int pk = static_cast<int>(part.idx.size());
  if (!part.elementary || pk != 4)
    throw std::domain_error("classification requires a 4-dimensional elementary part");
  const Z& p = f.p;
  // Frame matrix: columns alpha, beta, alpha2, beta2 in part coordinates.
  MatZ frame(4, 4);
  const Character* cols[4] = {&f.alpha, &f.beta, &f.alpha2, &f.beta2};
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i) {
      Z unit = h.factors[part.idx[i]] / p;
      Z v = cols[c]->coeffs[part.idx[i]];
      if (v % unit != 0) throw std::domain_error("frame character outside the p-torsion");
      frame.at(i, c) = mod_floor(v / unit, p);
    }
  // Invert mod p.
  MatZ aug = frame;
  MatZ inv = MatZ::identity(4);
  for (int c = 0; c < 4; ++c) {
    int sel = -1;
    for (int i = c; i < 4; ++i)
      if (mod_floor(aug.at(i, c), p) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) throw std::domain_error("frame characters are dependent");
    aug.swap_rows(c, sel);
    inv.swap_rows(c, sel);
    Z s = mod_inverse(mod_floor(aug.at(c, c), p), p);
    for (int j = 0; j < 4; ++j) {
      aug.at(c, j) = mod_floor(aug.at(c, j) * s, p);
      inv.at(c, j) = mod_floor(inv.at(c, j) * s, p);
    }
    for (int i = 0; i < 4; ++i) {
      if (i == c) continue;
      Z t = mod_floor(aug.at(i, c), p);
      if (t == 0) continue;
      for (int j = 0; j < 4; ++j) {
        aug.at(i, j) = mod_floor(aug.at(i, j) - t * aug.at(c, j), p);
        inv.at(i, j) = mod_floor(inv.at(i, j) - t * inv.at(c, j), p);
      }
    }
  }
  // M's p-part basis in frame coordinates (u, v, u2, v2).
  std::vector<std::vector<Z>> rows;
  for (const auto& el : m.elements) {
    std::vector<Z> pv(4);
    bool in_part = true;
    for (size_t i = 0; i < h.factors.size(); ++i) {
      auto pos = std::find(part.idx.begin(), part.idx.end(), static_cast<int>(i));
      if (pos == part.idx.end()) {
        if (el[i] != 0) in_part = false;
      } else {
        Z unit = h.factors[i] / p;
        if (el[i] % unit != 0)
          in_part = false;
        else
          pv[pos - part.idx.begin()] = mod_floor(el[i] / unit, p);
      }
      if (!in_part) break;
    }
    if (in_part) rows.push_back(std::move(pv));
  }
  MatZ raw(static_cast<int>(rows.size()), 4);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < 4; ++c) {
      Z acc = 0;
      for (int i = 0; i < 4; ++i) acc += inv.at(c, i) * rows[r][i];
      raw.at(static_cast<int>(r), c) = mod_floor(acc, p);
    }
  std::vector<int> piv = rref_mod_p(raw, p);
  if (piv.size() != 2) throw std::domain_error("metabolizer p-part is not half-dimensional");
  MatZ b(2, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) b.at(r, c) = raw.at(r, c);
  // Columns: 0 = alpha, 1 = beta, 2 = alpha2, 3 = beta2. E2 frame columns are
  // {0, 3}, E4 frame columns are {1, 2}.
  auto restricted_kernel = [&](int c0, int c1) {
    MatZ sub(2, 2);
    for (int r = 0; r < 2; ++r) {
      sub.at(r, 0) = b.at(r, c0);
      sub.at(r, 1) = b.at(r, c1);
    }
    return kernel_mod_p(sub.transposed(), p);
  };
  // Combination coefficients c with (c . rows restricted to E4-cols) = 0 give
  // M limited to E2, and vice versa.
  auto ker_e2 = restricted_kernel(1, 2);
  auto ker_e4 = restricted_kernel(0, 3);
  int d2 = static_cast<int>(ker_e2.size());
  int d4 = static_cast<int>(ker_e4.size());
  MetabolizerFamily fam;
  if (d2 == 2 && d4 == 0) {
    fam.tag = "pure-2-eigenspace";
    return fam;
  }
  if (d4 == 2 && d2 == 0) {
    fam.tag = "pure-4-eigenspace";
    return fam;
  }
  if (d2 != 1 || d4 != 1) throw std::domain_error("metabolizer does not split by eigenspace");
  auto line_of = [&](const std::vector<Z>& comb) {
    std::vector<Z> v(4, Z(0));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 4; ++c) v[c] = mod_floor(v[c] + comb[r] * b.at(r, c), p);
    return v;
  };
  std::vector<Z> l2 = line_of(ker_e2[0]);  // components on (alpha, beta2)
  std::vector<Z> l4 = line_of(ker_e4[0]);  // components on (beta, alpha2)
  bool l2_alpha_axis = l2[3] == 0, l2_beta2_axis = l2[0] == 0;
  bool l4_beta_axis = l4[2] == 0, l4_alpha2_axis = l4[1] == 0;
  if ((l2_alpha_axis || l2_beta2_axis) && (l4_beta_axis || l4_alpha2_axis)) {
    fam.tag = "mixed-pure-pair";
    fam.axes.push_back(l2_alpha_axis ? "alpha" : "beta2");
    fam.axes.push_back(l4_beta_axis ? "beta" : "alpha2");
    return fam;
  }
  if (!l2_alpha_axis && !l2_beta2_axis && !l4_beta_axis && !l4_alpha2_axis) {
    Z r = mod_floor(l2[3] * mod_inverse(l2[0], p), p);
    Z rp = mod_floor(l4[2] * mod_inverse(l4[1], p), p);
    if (mod_floor(r * rp, p) != 1)
      throw std::domain_error("graph-type parameters fail r * r' = 1");
    fam.tag = "graph-type";
    fam.r = r;
    return fam;
  }
  throw std::domain_error("metabolizer lines inconsistent with the expected taxonomy");
}

nlohmann::ordered_json metabolizer_to_json(const Metabolizer& m) {
  nlohmann::ordered_json j;
  j["generators"] = nlohmann::ordered_json::array();
  for (const Character& g : m.generators) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const Z& c : g.coeffs) row.push_back(z_to_json(c));
    j["generators"].push_back(row);
  }
  j["order"] = z_to_json(Z(static_cast<long>(m.elements.size())));
  j["equivariant"] = m.equivariant;
  if (!m.eigen_split.empty()) {
    j["eigen_split"] = nlohmann::ordered_json::array();
    for (const auto& [p, lambda, dim] : m.eigen_split) {
      nlohmann::ordered_json e;
      e["p"] = z_to_json(p);
      e["eigenvalue"] = z_to_json(lambda);
      e["dim"] = dim;
      j["eigen_split"].push_back(e);
    }
  }
  return j;
}

}  // namespace slicekit
