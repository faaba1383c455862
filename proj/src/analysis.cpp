#include "mts/analysis.hpp"

#include <algorithm>
#include <exception>

#include "mts/errors.hpp"

namespace mts {

OrdinalRule OrdinalRule::parse(std::string_view text, char var) {
  std::string pattern(text);
  auto expand = [pattern, var](int n) {
    std::string s;
    for (char c : pattern) {
      if (c == var)
        s += std::to_string(n);
      else
        s += c;
    }
    return parse_ordinal(s);
  };
  expand(1);
  OrdinalRule r;
  r.name_ = pattern;
  r.fn_ = expand;
  return r;
}

OrdinalRule OrdinalRule::custom(std::string name, std::function<Ordinal(int)> fn) {
  OrdinalRule r;
  r.name_ = std::move(name);
  r.fn_ = std::move(fn);
  return r;
}

namespace {

Ordinal tail_of(const Ordinal& a) {
  std::vector<OrdinalTerm> rest(a.terms().begin() + 1, a.terms().end());
  return Ordinal::from_terms(std::move(rest));
}

/// Order of a multiset of ordinals maximizing the left-to-right sum.
std::vector<std::size_t> best_order(const std::vector<Ordinal>& items) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!items[i].is_zero()) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const Ordinal la = leading_data(items[a]).ell, lb = leading_data(items[b]).ell;
    if (la != lb) return la > lb;
    return tail_of(items[a]) < tail_of(items[b]);
  });
  return idx;
}

void check_theta(const ThetaRule& theta, int upto) {
  Rational prev = 1;
  for (int n = 1; n <= upto; ++n) {
    const Rational t = theta(n);
    if (t <= 0 || t >= 1) throw ConfigError("theta_" + std::to_string(n) + " = " + to_string(t) + " is not in (0,1)");
    if (t > prev) throw ConfigError("theta increases at n = " + std::to_string(n));
    prev = t;
  }
}

}  // namespace

GammaResult gamma_ordinal(const Rational& eps, int m, const GammaConfig& cfg) {
  if (eps <= 0) throw DomainError("gamma: eps must be positive");
  if (m < 1) throw DomainError("gamma: m must be >= 1");
  if (cfg.horizon < 1) throw ConfigError("gamma: horizon must be >= 1");

  const Rational theta_m = cfg.theta(m);
  GammaResult out;
  out.horizon_used = cfg.horizon;
  for (int h = 1; h <= cfg.horizon; ++h) {
    if (eps * cfg.theta(h + 1) <= theta_m) {
      out.horizon_used = h;
      out.complete = true;
      break;
    }
  }
  const int cap = cfg.horizon;
  if (eps * pow(cfg.theta(1), static_cast<unsigned long>(cap) + 1) > theta_m) out.complete = false;

  const int H = out.horizon_used;
  check_theta(cfg.theta, H + 1);
  std::vector<Rational> theta(static_cast<std::size_t>(H) + 1);
  std::vector<Ordinal> contrib(static_cast<std::size_t>(H) + 1);
  for (int n = 1; n <= H; ++n) {
    theta[static_cast<std::size_t>(n)] = cfg.theta(n);
    Ordinal v = cfg.seq(n);
    if (cfg.mode == GammaMode::ell_of_product) {
      if (v.is_zero()) throw DomainError("gamma: alpha_" + std::to_string(n) + " is 0");
      v = leading_data(v).ell;
    }
    contrib[static_cast<std::size_t>(n)] = std::move(v);
  }

  std::vector<int> multiset;
  Ordinal best;
  std::vector<int> best_tuple;
  auto evaluate = [&] {
    std::vector<Ordinal> items;
    for (int n : multiset) items.push_back(contrib[static_cast<std::size_t>(n)]);
    const auto order = best_order(items);
    Ordinal sum;
    for (std::size_t i : order) sum = add(sum, items[i]);
    if (sum > best) {
      best = sum;
      best_tuple.clear();
      for (std::size_t i : order) best_tuple.push_back(multiset[i]);
      // absorbed (zero) entries still belong to the tuple
      for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i].is_zero()) best_tuple.push_back(multiset[i]);
    }
  };
  auto dfs = [&](auto&& self, int start, const Rational& prod) -> void {
    const bool saturated = eps * prod * theta[1] <= theta_m || static_cast<int>(multiset.size()) == cap;
    if (saturated) {
      if (!multiset.empty()) evaluate();
      return;
    }
    for (int n = start; n <= H; ++n) {
      Rational next = prod * theta[static_cast<std::size_t>(n)];
      if (eps * next <= theta_m) break;
      multiset.push_back(n);
      self(self, n, next);
      multiset.pop_back();
    }
  };
  if (H >= 1) dfs(dfs, 1, Rational(1));
  out.value = best;
  out.tuple = best_tuple;
  return out;
}

DaggerReport dagger_probe(const Rational& eps, const std::vector<Ordinal>& betas, int horizon,
                          const GammaConfig& cfg, const OrdinalRule& ell_alpha) {
  if (horizon < 1) throw DomainError("dagger: horizon must be >= 1");
  DaggerReport rep;
  if (betas.empty()) return rep;
  rep.gammas.resize(static_cast<std::size_t>(horizon));
  std::vector<Ordinal> ells(static_cast<std::size_t>(horizon));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(horizon));
#pragma omp parallel for schedule(dynamic)
  for (int m = 1; m <= horizon; ++m) {
    try {
      rep.gammas[static_cast<std::size_t>(m) - 1] = gamma_ordinal(eps, m, cfg);
      ells[static_cast<std::size_t>(m) - 1] = ell_alpha(m);
    } catch (...) {
      errors[static_cast<std::size_t>(m) - 1] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& g : rep.gammas) rep.all_complete = rep.all_complete && g.complete;

  const Ordinal two = Ordinal::finite(2);
  for (const Ordinal& beta : betas) {
    DaggerEntry entry{beta, std::nullopt};
    for (int m = 1; m <= horizon; ++m) {
      const GammaResult& g = rep.gammas[static_cast<std::size_t>(m) - 1];
      if (!g.complete) continue;
      if (add(add(g.value, two), beta) < ells[static_cast<std::size_t>(m) - 1]) {
        entry.witness = m;
        break;
      }
    }
    rep.entries.push_back(std::move(entry));
  }
  return rep;
}

DiagnosticsReport theta_diagnostics(const ThetaRule& theta_rule, int horizon) {
  if (horizon < 2) throw DomainError("diagnostics: horizon must be >= 2");
  const int H = horizon;
  std::vector<Rational> th(2 * static_cast<std::size_t>(H) + 1);
  for (int n = 1; n <= 2 * H; ++n) th[static_cast<std::size_t>(n)] = theta_rule(n);
  auto theta = [&](int n) -> const Rational& { return th[static_cast<std::size_t>(n)]; };

  DiagnosticsReport rep;
  rep.horizon = H;
  const int tail_lo = (H + 1) / 2;
  for (int m = 1; m <= H; ++m) {
    RatioEntry e;
    e.m = m;
    for (int n = 1; n <= H; ++n) {
      Rational r = theta(m + n) / theta(n);
      if (n == 1 || r > e.sup) e.sup = r;
      if (n == tail_lo || (n > tail_lo && r > e.tail)) e.tail = r;
    }
    rep.ratio_profile.push_back(std::move(e));
  }

  const Rational width_target(1, 1 << 20);
  for (int n = 1; n <= H; ++n) {
    Rational lo = 0, hi = 1;
    while (hi - lo > width_target) {
      Rational mid = (lo + hi) / 2;
      if (pow(mid, static_cast<unsigned long>(n)) <= theta(n))
        lo = mid;
      else
        hi = mid;
    }
    rep.root_profile.push_back({n, lo, hi});
  }

  for (int m = 1; m <= H && !rep.violation; ++m) {
    for (int n = m; m + n <= H; ++n) {
      const Rational prod = theta(m) * theta(n);
      if (theta(m + n) < prod) {
        rep.submultiplicative = false;
        rep.submultiplicative_equality = false;
        rep.violation = std::make_pair(m, n);
        break;
      }
      if (theta(m + n) != prod) rep.submultiplicative_equality = false;
    }
  }

  const int M = std::max(1, H / 4);
  const int half = std::max(1, (M + 1) / 2);
  const Rational& rM = rep.ratio_profile[static_cast<std::size_t>(M) - 1].tail;
  const Rational& rHalf = rep.ratio_profile[static_cast<std::size_t>(half) - 1].tail;
  rep.ratio_limit_positive = rM > 0 && 2 * rM >= rHalf;
  return rep;
}

DiagnosticsReport theta_diagnostics(const SpaceSpec& sp, int horizon) {
  return theta_diagnostics(sp.theta_rule(), horizon);
}

TameResult tame_check(const std::function<Family(int)>& families, int n0, int n_max, int universe,
                      std::optional<int> probe_bound) {
  if (n0 < 1 || n_max < 1 || universe < 1) throw DomainError("tame: n0, n_max and N must be positive");
  const MemberOptions opts{probe_bound.value_or(universe)};
  const Family base = families(n0);
  for (int n = 1; n <= n_max; ++n) {
    const Family f = families(n);
    if (f.kind() != Family::Kind::ank) {
      auto r = subset_check(Family::apply(f, Family::ank(3)), Family::power(f, 2), universe, opts);
      if (!r.holds) return {false, n, 1, r.counterexample};
    }
    if (n > n0) {
      auto r = subset_check(Family::apply(Family::minus(f, base), Family::ank(2)), f, universe, opts);
      if (!r.holds) return {false, n, 2, r.counterexample};
    }
  }
  return {};
}

SpreadingResult spreading_constant(const std::vector<Vector>& blocks, const Family& family, std::pair<int, int> window,
                                   const std::vector<Rational>& coeffs, const SpaceSpec& sp) {
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].is_zero()) throw DomainError("spread: block " + std::to_string(k + 1) + " is zero");
    if (k > 0 && !(blocks[k - 1].entries().back().first < blocks[k].entries().front().first))
      throw DomainError("spread: blocks " + std::to_string(k) + " and " + std::to_string(k + 1) + " are not ordered");
  }
  if (!coeffs.empty() && coeffs.size() < blocks.size())
    throw DomainError("spread: fewer coefficients than blocks");
  const int lo = std::max(window.first, 1);
  const int hi = std::min(window.second, static_cast<int>(blocks.size()));
  auto coeff = [&](int k) { return coeffs.empty() ? Rational(1) : coeffs[static_cast<std::size_t>(k) - 1]; };

  std::vector<FiniteSet> sets;
  std::vector<Vector> sums;
  std::vector<Rational> weights;
  if (hi >= lo) {
    for (FiniteSet& s : enumerate_members(family, hi)) {
      if (s.empty() || s.front() < lo) continue;
      Rational w = 0;
      Vector v;
      for (int k : s) {
        w += abs(coeff(k));
        v = v + blocks[static_cast<std::size_t>(k) - 1].scaled(coeff(k));
      }
      if (w == 0) continue;
      sets.push_back(std::move(s));
      sums.push_back(std::move(v));
      weights.push_back(std::move(w));
    }
  }
  if (sets.empty()) throw DomainError("spread: no nonempty member of the family inside the window");
  const auto norms = norm_batch(sums, sp);
  SpreadingResult out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Rational r = norms[i].value / weights[i];
    if (i == 0 || r < out.value) {
      out.value = r;
      out.argmin = sets[i];
    }
  }
  return out;
}

std::pair<Vector, Vector> lemma1_pair(const std::vector<Rational>& coeffs, const std::vector<int>& indices) {
  if (indices.size() != coeffs.size() + 1)
    throw DomainError("lemma1: need one more index than coefficients");
  validate_set(indices);
  std::vector<Vector::Entry> xe, ye;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    ye.emplace_back(indices[k], coeffs[k]);
    xe.emplace_back(indices[k + 1], coeffs[k]);
  }
  return {Vector(std::move(xe)), Vector(std::move(ye))};
}

std::optional<Lemma1Witness> lemma1_witness(const Vector& x, const Vector& y, int m, const SpaceSpec& sp,
                                            std::pair<int, int> universe) {
  const auto& xe = x.entries();
  const auto& ye = y.entries();
  if (xe.size() != ye.size()) throw DomainError("lemma1: x and y have different support sizes");
  for (std::size_t k = 0; k < ye.size(); ++k) {
    if (xe[k].second != ye[k].second) throw DomainError("lemma1: coefficient sequences differ");
    if (!(ye[k].first < xe[k].first) || (k + 1 < ye.size() && xe[k].first > ye[k + 1].first))
      throw DomainError("lemma1: x is not the shift of y");
    if (ye[k].first < universe.first || ye[k].first > universe.second)
      throw DomainError("lemma1: support of y leaves the universe");
  }
  if (x.is_zero()) return std::nullopt;

  const Rational lhs = level_norm(x, sp, m);
  const FiniteSet ys = y.support();
  const int k = static_cast<int>(ys.size());
  auto piece = [&](int a, int b) { return FiniteSet(ys.begin() + a, ys.begin() + b); };
  // value[a][b] = ||E y||_m for E = support positions [a, b)
  std::vector<std::vector<Rational>> value(static_cast<std::size_t>(k) + 1,
                                           std::vector<Rational>(static_cast<std::size_t>(k) + 1));
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b <= k; ++b)
      value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = level_norm(y.restricted(piece(a, b)), sp, m);

  for (int a = k; a >= 0; --a) {
    for (int b = k; b >= a; --b) {
      Rational rhs = value[0][static_cast<std::size_t>(a)] + value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
                     value[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
      if (lhs <= rhs) return Lemma1Witness{piece(0, a), piece(a, b), piece(b, k), lhs, rhs};
    }
  }
  return std::nullopt;
}

namespace {

/// P(s) = max theta-product over compositions of s, filled on demand.
class PiTable {
 public:
  explicit PiTable(const ThetaRule& theta) : theta_(theta) { best_.emplace_back(1); }
  /// max over compositions of exactly s.
  const Rational& exact(int s) {
    while (static_cast<int>(best_.size()) <= s) {
      const int t = static_cast<int>(best_.size());
      Rational b = theta_(t);
      for (int a = 1; a < t; ++a) b = std::max(b, Rational(best_[static_cast<std::size_t>(a)] * best_[static_cast<std::size_t>(t - a)]));
      best_.push_back(std::move(b));
    }
    return best_[static_cast<std::size_t>(s)];
  }
  // Shrinking an entry only raises the product (theta nonincreasing), and
  // dropping entries does too, so an optimal tuple sums to exactly n + 1.
  const Rational& pi(int n) { return exact(n + 1); }

 private:
  const ThetaRule& theta_;
  std::vector<Rational> best_;
};

void compositions(int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.push_back(cur);
    return;
  }
  for (int first = 1; first <= total; ++first) {
    cur.push_back(first);
    compositions(total - first, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Rational schreier_pi(const ThetaRule& theta, int n) {
  if (n < 0) throw DomainError("pi: n must be nonnegative");
  PiTable t(theta);
  return t.pi(n);
}

std::vector<int> default_schedule(const ThetaRule& theta, int terms) {
  PiTable t(theta);
  std::vector<int> out;
  int n = 0;
  Rational target = 1;
  for (int i = 1; i <= terms; ++i) {
    target /= 2;
    ++n;
    const int give_up = n + 4096;
    while (!(t.pi(n) < target)) {
      if (++n > give_up) throw ConfigError("ssum: no n with pi(n) < 2^-" + std::to_string(i));
    }
    out.push_back(n);
  }
  return out;
}

SchreierSumReport schreier_sum_bound(const Vector& x, const SpaceSpec& sp, std::vector<int> schedule) {
  SchreierSumReport rep;
  if (schedule.empty()) schedule = default_schedule(sp.theta_rule(), static_cast<int>(x.support_size()) + 1);
  PiTable table(sp.theta_rule());
  rep.pi.emplace_back(1);
  Rational target = 1;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    target /= 2;
    if (schedule[i] < 1 || (i > 0 && schedule[i] <= schedule[i - 1]))
      throw DomainError("ssum: schedule must be strictly increasing positive integers");
    const Rational& p = table.pi(schedule[i]);
    if (!(p < target))
      throw DomainError("ssum: pi(" + std::to_string(schedule[i]) + ") = " + to_string(p) + " is not below 2^-" +
                        std::to_string(i + 1));
    rep.pi.push_back(p);
  }
  rep.schedule = schedule;

  // Subsets of supp x by decreasing weight; rho_i is the first one found
  // in some family of G_i.
  const auto& entries = x.entries();
  const std::size_t k = entries.size();
  if (k > 20) throw DomainError("ssum: support too large");
  std::vector<std::pair<Rational, FiniteSet>> subsets;
  for (unsigned mask = 1; mask < (1U << k); ++mask) {
    Rational w = 0;
    FiniteSet s;
    for (std::size_t b = 0; b < k; ++b) {
      if (mask >> b & 1U) {
        w += abs(entries[b].second);
        s.push_back(entries[b].first);
      }
    }
    subsets.emplace_back(std::move(w), std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  // Singletons belong to every G_i.
  Rational rho = x.c0_norm();
  std::vector<Family> fams;
  int covered = 0;
  for (int n_i : schedule) {
    for (int total = covered + 1; total <= n_i; ++total) {
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      compositions(total, cur, comps);
      for (const auto& c : comps) {
        // [F_{m_r}, ..., F_{m_1}] = F_{m_r}[[F_{m_{r-1}}, ..., F_{m_1}]]
        Family g = sp.family(c.front());
        for (std::size_t j = 1; j < c.size(); ++j) g = Family::apply(sp.family(c[j]), g);
        fams.push_back(std::move(g));
      }
    }
    covered = n_i;
    for (const auto& [w, s] : subsets) {
      if (w <= rho) break;
      bool hit = false;
      for (const Family& g : fams) {
        if (member(g, s)) {
          hit = true;
          break;
        }
      }
      if (hit) {
        rho = w;
        break;
      }
    }
    rep.rho.push_back(rho);
  }

  rep.norm = norm(x, sp).value;
  rep.partial = 0;
  for (std::size_t i = 0; i < rep.rho.size(); ++i) rep.partial += rep.pi[i] * rep.rho[i];
  rep.tail = x.l1_norm();
  for (std::size_t i = 1; i < schedule.size(); ++i) rep.tail /= 2;
  rep.bound = rep.partial + rep.tail;
  rep.holds = rep.norm <= rep.bound;
  rep.partial_holds = rep.norm <= rep.partial;
  return rep;
}

}  // namespace mts
