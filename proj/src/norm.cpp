#include "mts/norm.hpp"

#include <algorithm>
#include <bit>
#include <exception>

#include "mts/errors.hpp"
#include "mts/scanner.hpp"

namespace mts {

namespace {

/// Support points of x with |a_k| and prefix sums for interval l1 bounds.
struct Support {
  FiniteSet index;
  std::vector<Rational> mag;
  std::vector<Rational> prefix;  // prefix[i] = sum of mag[0..i)

  explicit Support(const Vector& x) {
    prefix.emplace_back(0);
    for (const auto& [k, a] : x.entries()) {
      index.push_back(k);
      mag.push_back(abs(a));
      prefix.push_back(prefix.back() + mag.back());
    }
  }
  int size() const { return static_cast<int>(index.size()); }
  Rational l1(int i, int j) const { return prefix[static_cast<std::size_t>(j) + 1] - prefix[static_cast<std::size_t>(i)]; }
  Rational c0(int i, int j) const {
    return *std::max_element(mag.begin() + i, mag.begin() + j + 1);
  }
  FiniteSet slice(int i, int j) const { return FiniteSet(index.begin() + i, index.begin() + j + 1); }
};

struct Cell {
  Rational value;
  int level = 0;  // 0: leaf
  std::vector<int> breaks;
};

class Table {
 public:
  explicit Table(int k) : k_(k), cells_(static_cast<std::size_t>(k) * static_cast<std::size_t>(k)) {}
  Cell& at(int i, int j) { return cells_[static_cast<std::size_t>(i) * k_ + j]; }
  const Cell& at(int i, int j) const { return cells_[static_cast<std::size_t>(i) * k_ + j]; }
  const Rational& value(int i, int j) const { return at(i, j).value; }

 private:
  std::size_t k_;
  std::vector<Cell> cells_;
};

/// Best F-admissible decomposition of support positions [i..j] into
/// consecutive pieces [b_1, b_2-1], ..., [b_r, j] with r >= min_pieces,
/// scored theta * sum piece(a, b). Updates (best, best_breaks) on strict
/// improvement only; candidates are visited in lexicographic order of the
/// breakpoint sequence.
template <class PieceFn>
bool search_split(const Support& sup, int i, int j, const Family& fam, const Rational& theta, std::size_t min_pieces,
                  PieceFn&& piece, Rational& best, std::vector<int>& best_breaks) {
  bool improved = false;
  std::vector<int> breaks;
  auto dfs = [&](auto&& self, const AdmissibilityScanner& sc, const Rational& partial) -> void {
    const int last = breaks.back();
    if (breaks.size() >= min_pieces) {
      Rational cand = theta * (partial + piece(last, j));
      if (cand > best) {
        best = std::move(cand);
        best_breaks = breaks;
        improved = true;
      }
    }
    for (int b = last + 1; b <= j; ++b) {
      Rational next_partial = partial + piece(last, b - 1);
      if (theta * (next_partial + sup.l1(b, j)) <= best) continue;
      AdmissibilityScanner next = sc;
      if (!next.extend(sup.index[static_cast<std::size_t>(b)])) continue;
      breaks.push_back(b);
      self(self, next, next_partial);
      breaks.pop_back();
    }
  };
  const AdmissibilityScanner empty(fam);
  for (int b = i; b <= j; ++b) {
    if (theta * sup.l1(b, j) <= best) continue;
    AdmissibilityScanner sc = empty;
    if (!sc.extend(sup.index[static_cast<std::size_t>(b)])) continue;
    breaks.assign(1, b);
    dfs(dfs, sc, Rational(0));
  }
  return improved;
}

void fill_cell(const Support& sup, const SpaceSpec& sp, Table& table, int i, int j) {
  Cell& cell = table.at(i, j);
  cell.value = sup.c0(i, j);
  cell.level = 0;
  cell.breaks.clear();
  if (i == j) return;
  const Rational l1 = sup.l1(i, j);
  auto piece = [&table](int a, int b) -> const Rational& { return table.value(a, b); };
  for (int n = 1;; ++n) {
    const Rational theta = sp.theta(n);
    if (theta * l1 <= cell.value) break;
    if (search_split(sup, i, j, sp.family(n), theta, 2, piece, cell.value, cell.breaks)) cell.level = n;
  }
}

/// Runs body(i) for i in [0, count), in parallel when requested; the first
/// exception (by index) is rethrown after the loop.
template <class Body>
void for_each_index(int count, bool parallel, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic) if (parallel && count > 1)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Table compute_table(const Support& sup, const SpaceSpec& sp, bool parallel) {
  const int k = sup.size();
  Table table(k);
  for (int len = 1; len <= k; ++len) {
    for_each_index(k - len + 1, parallel, [&](int i) { fill_cell(sup, sp, table, i, i + len - 1); });
  }
  return table;
}

CertNode build_node(const Support& sup, const SpaceSpec& sp, const Table& table, int i, int j, const Rational& tag) {
  const Cell& cell = table.at(i, j);
  CertNode node;
  node.set = sup.slice(i, j);
  node.tag = tag;
  if (cell.level == 0) return node;
  node.level = cell.level;
  const Rational child_tag = tag * sp.theta(cell.level);
  for (std::size_t t = 0; t < cell.breaks.size(); ++t) {
    const int a = cell.breaks[t];
    const int b = t + 1 < cell.breaks.size() ? cell.breaks[t + 1] - 1 : j;
    node.children.push_back(build_node(sup, sp, table, a, b, child_tag));
  }
  return node;
}

NormResult run_norm(const Vector& x, const SpaceSpec& sp, bool parallel) {
  if (x.is_zero()) return {Rational(0), NormCertificate{CertNode{}}};
  const Support sup(x);
  const Table table = compute_table(sup, sp, parallel);
  const int last = sup.size() - 1;
  return {table.value(0, last), NormCertificate{build_node(sup, sp, table, 0, last, Rational(1))}};
}

std::vector<NormResult> run_batch(std::span<const Vector> xs, const SpaceSpec& sp, bool parallel) {
  std::vector<NormResult> out(xs.size());
  for_each_index(static_cast<int>(xs.size()), parallel,
                 [&](int i) { out[static_cast<std::size_t>(i)] = run_norm(xs[static_cast<std::size_t>(i)], sp, false); });
  return out;
}

}  // namespace

NormResult norm(const Vector& x, const SpaceSpec& sp) { return run_norm(x, sp, true); }
NormResult norm_serial(const Vector& x, const SpaceSpec& sp) { return run_norm(x, sp, false); }

std::vector<NormResult> norm_batch(std::span<const Vector> xs, const SpaceSpec& sp) { return run_batch(xs, sp, true); }
std::vector<NormResult> norm_batch_serial(std::span<const Vector> xs, const SpaceSpec& sp) {
  return run_batch(xs, sp, false);
}

Rational level_norm(const Vector& x, const SpaceSpec& sp, int m) {
  if (m < 0) throw DomainError("level_norm: m must be nonnegative");
  if (x.is_zero()) return 0;
  const Support sup(x);
  const int k = sup.size();
  Table prev(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) prev.at(i, j).value = sup.c0(i, j);
  for (int step = 0; step < m; ++step) {
    Table next = prev;
    bool changed = false;
    auto piece = [&prev](int a, int b) -> const Rational& { return prev.value(a, b); };
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        Cell& cell = next.at(i, j);
        const Rational l1 = sup.l1(i, j);
        for (int n = 1;; ++n) {
          const Rational theta = sp.theta(n);
          if (theta * l1 <= cell.value) break;
          if (search_split(sup, i, j, sp.family(n), theta, 2, piece, cell.value, cell.breaks)) changed = true;
        }
      }
    }
    prev = std::move(next);
    if (!changed) break;
  }
  return prev.value(0, k - 1);
}

namespace {

Rational brute_force(const Support& sup, unsigned mask, const SpaceSpec& sp) {
  if (mask == 0) return 0;
  Rational c0 = 0, l1 = 0;
  for (int p = 0; p < sup.size(); ++p) {
    if (mask >> p & 1U) {
      c0 = std::max(c0, sup.mag[static_cast<std::size_t>(p)]);
      l1 += sup.mag[static_cast<std::size_t>(p)];
    }
  }
  Rational best = c0;
  for (int n = 1; sp.theta(n) * l1 > c0; ++n) {
    const Rational theta = sp.theta(n);
    const Family fam = sp.family(n);
    FiniteSet minima;
    // Sequences E_1 < E_2 < ... of nonempty subsets of `mask`; E_1 = mask
    // alone is the equation's own left side and is skipped.
    auto extend = [&](auto&& self, int start, const Rational& acc) -> void {
      if (!minima.empty()) best = std::max(best, Rational(theta * acc));
      const unsigned avail = mask & ~((1U << start) - 1U);
      // Each block is worth at most its l1 mass, so nothing past here can win.
      Rational rest = acc;
      for (int p = start; p < sup.size(); ++p)
        if (avail >> p & 1U) rest += sup.mag[static_cast<std::size_t>(p)];
      if (theta * rest <= best) return;
      for (unsigned sub = avail; sub != 0; sub = (sub - 1) & avail) {
        if (minima.empty() && sub == mask) continue;
        const int lo = std::countr_zero(sub);
        const int hi = 31 - std::countl_zero(sub);
        minima.push_back(sup.index[static_cast<std::size_t>(lo)]);
        if (member(fam, minima)) self(self, hi + 1, acc + brute_force(sup, sub, sp));
        minima.pop_back();
      }
    };
    extend(extend, 0, Rational(0));
  }
  return best;
}

}  // namespace

Rational brute_force_norm(const Vector& x, const SpaceSpec& sp) {
  if (x.support_size() > kBruteForceMaxSupport)
    throw DomainError("brute_force_norm: support larger than " + std::to_string(kBruteForceMaxSupport));
  const Support sup(x);
  return brute_force(sup, (1U << sup.size()) - 1U, sp);
}

Rational distortion_norm(const Vector& x, const SpaceSpec& sp, int n) {
  if (n < 1) throw DomainError("distortion_norm: n must be >= 1");
  if (x.is_zero()) return 0;
  const Support sup(x);
  const Table table = compute_table(sup, sp, true);
  auto piece = [&table](int a, int b) -> const Rational& { return table.value(a, b); };
  Rational best = 0;
  std::vector<int> breaks;
  search_split(sup, 0, sup.size() - 1, sp.family(n), Rational(1), 1, piece, best, breaks);
  return best;
}

}  // namespace mts
