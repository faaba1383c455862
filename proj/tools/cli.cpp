#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mts/analysis.hpp"
#include "mts/certificate.hpp"
#include "mts/errors.hpp"
#include "mts/family.hpp"
#include "mts/norm.hpp"
#include "mts/space.hpp"

namespace mts::cli {

using nlohmann::json;

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_rational(t));
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const auto& t : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw ParseError("expected an integer, got '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::pair<int, int> parse_interval(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), '.', ',');
  auto v = parse_ints(t);
  if (v.size() != 2 || v[0] > v[1]) throw ParseError("expected an interval 'lo,hi' or 'lo..hi', got '" + text + "'");
  return {v[0], v[1]};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json set_json(const FiniteSet& s) { return json(s); }

struct SpaceOptions {
  std::string file;
  std::string theta;
  std::string family;
  std::optional<int> horizon;

  void attach(CLI::App* app) {
    app->add_option("--space", file, "Space config file (theta/family/horizon lines)");
    app->add_option("--theta", theta, "Inline theta rule, e.g. 'geometric 1/2'");
    app->add_option("--family-rule", family, "Inline family rule, e.g. 'schreier n'");
    app->add_option("--horizon", horizon, "Validation horizon for the space");
  }

  SpaceSpec build() const {
    if (!file.empty()) {
      SpaceSpec sp = parse_space_spec(read_file(file));
      if (!horizon) return sp;
      return SpaceSpec(sp.theta_rule(), sp.family_rule(), *horizon);
    }
    if (theta.empty() || family.empty()) throw ParseError("give --space FILE or both --theta and --family-rule");
    return SpaceSpec(parse_theta_rule(theta), parse_family_rule(family), horizon.value_or(64));
  }
};

class Runner {
 public:
  Runner(std::ostream& out) : out_(out) {}

  int run(const std::vector<std::string>& args, std::ostream& err) {
    CLI::App app{"Exact norms, families and ordinal diagnostics for mixed Tsirelson spaces", "mts"};
    app.require_subcommand(1);
    app.add_flag("--json", json_, "Machine-readable output");
    build(app);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      err << e.what() << "\n\n" << app.help();
      return 2;
    }
    try {
      action_();
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }

 private:
  std::ostream& out_;
  bool json_ = false;
  std::function<void()> action_;

  // Storage for option values, shared by the subcommands.
  SpaceOptions space_;
  std::string vec_, set_, sets_, family_, other_, cert_ = "certificate.json", eps_, theta_ = "geometric 1/2";
  std::string beta_ = "n", alpha_, ell_ = "m", betas_, blocks_, window_, coeffs_, indices_, universe_range_;
  std::string schedule_, family_rule_;
  int m_ = 0, n_ = 1, universe_ = 10, n0_ = 1, n_max_ = 3;
  std::optional<int> probe_bound_, horizon_, gamma_horizon_;
  bool serial_ = false;

  void emit(const json& j) { out_ << j.dump(2) << "\n"; }

  void build(CLI::App& app) {
    auto verb = [&](const char* name, const char* help, std::function<void()> fn) {
      CLI::App* sub = app.add_subcommand(name, help);
      sub->callback([this, fn] { action_ = fn; });
      sub->add_flag("--json", json_, "Machine-readable output");
      return sub;
    };

    // ----- norm engine
    auto* norm_cmd = verb("norm", "Exact norm with a norming-tree certificate", [this] { do_norm(); });
    space_.attach(norm_cmd);
    norm_cmd->add_option("--vec", vec_, "Vector, e.g. '2:1 3:1 5:3/2'")->required();
    norm_cmd->add_option("--cert", cert_, "Where to write the certificate JSON")->capture_default_str();
    norm_cmd->add_flag("--serial", serial_, "Single-threaded evaluation");

    auto* level = verb("level-norm", "m-th iterated norm", [this] { do_level_norm(); });
    space_.attach(level);
    level->add_option("--vec", vec_)->required();
    level->add_option("--m", m_)->required()->check(CLI::NonNegativeNumber);

    auto* verify = verb("cert-verify", "Check a certificate against a vector", [this] { do_cert_verify(); });
    space_.attach(verify);
    verify->add_option("--vec", vec_)->required();
    verify->add_option("--cert", cert_, "Certificate JSON file")->required();

    auto* distort = verb("distort", "|||x|||_n", [this] { do_distort(); });
    space_.attach(distort);
    distort->add_option("--vec", vec_)->required();
    distort->add_option("--n", n_)->required()->check(CLI::PositiveNumber);

    // ----- families
    auto* member_cmd = verb("member", "Membership of a set in a family", [this] { do_member(); });
    member_cmd->add_option("--family", family_, "Family expression, e.g. 'S[1]'")->required();
    member_cmd->add_option("--set", set_, "Set, e.g. '3,5,9'")->required();
    member_cmd->add_option("--probe-bound", probe_bound_, "Maximality probes for F-G");

    auto* maximal = verb("maximal", "Maximality of a member", [this] { do_maximal(); });
    maximal->add_option("--family", family_)->required();
    maximal->add_option("--set", set_)->required();
    maximal->add_option("--probe-bound", probe_bound_, "Extensions tested up to max(s)+bound (default 16)");

    auto* admissible = verb("admissible", "F-admissibility of a sequence of sets", [this] { do_admissible(); });
    admissible->add_option("--family", family_)->required();
    admissible->add_option("--sets", sets_, "Sets separated by ';', e.g. '3,4;7'")->required();
    admissible->add_option("--probe-bound", probe_bound_);

    auto* enumerate = verb("enumerate", "Members inside {1..N}", [this] { do_enumerate(); });
    enumerate->add_option("--family", family_)->required();
    enumerate->add_option("--universe", universe_, "N")->required()->check(CLI::PositiveNumber);
    enumerate->add_option("--probe-bound", probe_bound_, "Default: N");

    auto* subset = verb("subset", "F restricted to {1..N} contained in G", [this] { do_subset(); });
    subset->add_option("--family", family_, "F")->required();
    subset->add_option("--of", other_, "G")->required();
    subset->add_option("--universe", universe_, "N")->required()->check(CLI::PositiveNumber);
    subset->add_option("--probe-bound", probe_bound_, "Default: N");

    auto* index = verb("index", "Symbolic index bound", [this] { do_index(); });
    index->add_option("--family", family_)->required();

    // ----- analysis
    auto* gamma = verb("gamma", "gamma(eps, m)", [this] { do_gamma(); });
    gamma->add_option("--eps", eps_)->required();
    gamma->add_option("--m", m_)->required()->check(CLI::PositiveNumber);
    gamma->add_option("--theta", theta_)->capture_default_str();
    gamma->add_option("--beta", beta_, "beta_n rule, e.g. 'n' or 'w^{n}'")->capture_default_str();
    gamma->add_option("--alpha", alpha_, "alpha_n rule; switches to l(product) mode");
    gamma->add_option("--horizon", horizon_, "Cap on tuple entries and length (default 256)");

    auto* dagger = verb("dagger", "Finite probe of condition (dagger)", [this] { do_dagger(); });
    dagger->add_option("--eps", eps_)->required();
    dagger->add_option("--theta", theta_)->capture_default_str();
    dagger->add_option("--beta", beta_, "beta_n rule")->capture_default_str();
    dagger->add_option("--alpha", alpha_, "alpha_n rule; switches gamma to l(product) mode");
    dagger->add_option("--ell", ell_, "l(alpha_m) rule in m")->capture_default_str();
    dagger->add_option("--betas", betas_, "Ordinals to test, comma separated")->required();
    dagger->add_option("--horizon", horizon_, "Largest m probed (default 30)");
    dagger->add_option("--gamma-horizon", gamma_horizon_, "Cap for each gamma search (default 256)");

    auto* diagnose = verb("diagnose", "theta-sequence diagnostics", [this] { do_diagnose(); });
    diagnose->add_option("--theta", theta_)->capture_default_str();
    diagnose->add_option("--space", space_.file, "Take theta from a space config");
    diagnose->add_option("--horizon", horizon_, "Default 50");

    auto* tame = verb("tame", "Tameness clauses on a finite universe", [this] { do_tame(); });
    tame->add_option("--family-rule", family_rule_, "e.g. 'schreier n', 'ank n+1', 'const S[1]'")->required();
    tame->add_option("--n0", n0_)->capture_default_str()->check(CLI::PositiveNumber);
    tame->add_option("--n-max", n_max_)->capture_default_str()->check(CLI::PositiveNumber);
    tame->add_option("--universe", universe_, "N")->capture_default_str()->check(CLI::PositiveNumber);
    tame->add_option("--probe-bound", probe_bound_, "Default: N");

    auto* spread = verb("spread", "Best l1 spreading constant on a window", [this] { do_spread(); });
    space_.attach(spread);
    spread->add_option("--blocks", blocks_, "Block vectors separated by ';'")->required();
    spread->add_option("--family", family_)->required();
    spread->add_option("--window", window_, "Block indices 'lo,hi'")->required();
    spread->add_option("--coeffs", coeffs_, "Comma separated; default all 1");

    auto* lemma1 = verb("lemma1", "Three-set witness for the shift inequality", [this] { do_lemma1(); });
    space_.attach(lemma1);
    lemma1->add_option("--coeffs", coeffs_, "a_1,...,a_r")->required();
    lemma1->add_option("--indices", indices_, "i_1,...,i_{r+1}")->required();
    lemma1->add_option("--m", m_)->required()->check(CLI::NonNegativeNumber);
    lemma1->add_option("--universe", universe_range_, "'lo,hi'; default spans the indices");

    auto* ssum = verb("ssum", "Schreier-sum domination bound", [this] { do_ssum(); });
    space_.attach(ssum);
    ssum->add_option("--vec", vec_)->required();
    ssum->add_option("--schedule", schedule_, "n_1,n_2,...; default: least valid");
  }

  MemberOptions member_opts(int fallback) const { return MemberOptions{probe_bound_.value_or(fallback)}; }

  // ------------------------------------------------------------------ norm

  void do_norm() {
    const SpaceSpec sp = space_.build();
    const Vector x = parse_vector(vec_);
    const NormResult r = serial_ ? norm_serial(x, sp) : norm(x, sp);
    {
      std::ofstream f(cert_);
      if (!f) throw ConfigError("cannot write " + cert_);
      f << certificate_to_json(r.cert) << "\n";
    }
    if (json_) {
      emit({{"value", to_string(r.value)}, {"certificate", cert_}});
    } else {
      out_ << to_string(r.value) << "\n" << "certificate: " << cert_ << "\n";
    }
  }

  void do_level_norm() {
    const SpaceSpec sp = space_.build();
    const Rational v = level_norm(parse_vector(vec_), sp, m_);
    if (json_)
      emit({{"value", to_string(v)}, {"m", m_}});
    else
      out_ << to_string(v) << "\n";
  }

  void do_cert_verify() {
    const SpaceSpec sp = space_.build();
    const Vector x = parse_vector(vec_);
    const NormCertificate cert = certificate_from_json(read_file(cert_));
    const CertificateCheck c = verify_certificate(cert, x, sp);
    if (json_) {
      json j = {{"valid", c.valid}, {"value", to_string(c.value)}};
      if (!c.valid) j["reason"] = c.reason;
      emit(j);
    } else {
      out_ << (c.valid ? "valid " : "invalid ") << to_string(c.value) << "\n";
      if (!c.valid) out_ << "reason: " << c.reason << "\n";
    }
  }

  void do_distort() {
    const SpaceSpec sp = space_.build();
    const Rational v = distortion_norm(parse_vector(vec_), sp, n_);
    if (json_)
      emit({{"value", to_string(v)}, {"n", n_}});
    else
      out_ << to_string(v) << "\n";
  }

  // -------------------------------------------------------------- families

  void do_member() {
    const Family f = parse_family(family_);
    const FiniteSet s = parse_set(set_);
    const bool r = member(f, s, member_opts(MemberOptions{}.probe_bound));
    if (json_)
      emit({{"member", r}, {"family", to_string(f)}, {"set", set_json(s)}});
    else
      out_ << (r ? "true" : "false") << "\n";
  }

  void do_maximal() {
    const Family f = parse_family(family_);
    const FiniteSet s = parse_set(set_);
    const int bound = probe_bound_.value_or(MemberOptions{}.probe_bound);
    const bool r = is_maximal(f, s, bound, MemberOptions{bound});
    if (json_)
      emit({{"maximal", r}, {"probe_bound", bound}});
    else
      out_ << (r ? "true" : "false") << "\n" << "probe bound: " << bound << "\n";
  }

  void do_admissible() {
    const Family f = parse_family(family_);
    std::vector<FiniteSet> sets;
    for (const auto& t : split(sets_, ';')) sets.push_back(parse_set(t));
    const bool r = is_admissible(f, sets, member_opts(MemberOptions{}.probe_bound));
    if (json_)
      emit({{"admissible", r}});
    else
      out_ << (r ? "true" : "false") << "\n";
  }

  void do_enumerate() {
    const Family f = parse_family(family_);
    const auto sets = enumerate_members(f, universe_, member_opts(universe_));
    if (json_) {
      emit({{"count", sets.size()}, {"sets", sets}});
    } else {
      for (const auto& s : sets) out_ << to_string(s) << "\n";
      out_ << "count: " << sets.size() << "\n";
    }
  }

  void do_subset() {
    const Family f = parse_family(family_);
    const Family g = parse_family(other_);
    const SubsetResult r = subset_check(f, g, universe_, member_opts(universe_));
    if (json_) {
      json j = {{"holds", r.holds}, {"universe", universe_}};
      if (r.counterexample) j["counterexample"] = *r.counterexample;
      emit(j);
    } else {
      out_ << (r.holds ? "holds" : "fails " + to_string(*r.counterexample)) << "\n";
    }
  }

  void do_index() {
    const IndexBound b = index_bound(parse_family(family_));
    if (json_)
      emit({{"bound", to_string(b.value)}, {"exact", b.exact}});
    else
      out_ << (b.exact ? "" : "<= ") << to_string(b.value) << "\n";
  }

  // -------------------------------------------------------------- analysis

  GammaConfig gamma_config() const {
    GammaConfig cfg;
    cfg.theta = parse_theta_rule(theta_);
    if (!alpha_.empty()) {
      cfg.mode = GammaMode::ell_of_product;
      cfg.seq = OrdinalRule::parse(alpha_, 'n');
    } else {
      cfg.seq = OrdinalRule::parse(beta_, 'n');
    }
    return cfg;
  }

  void do_gamma() {
    GammaConfig cfg = gamma_config();
    if (horizon_) cfg.horizon = *horizon_;
    const GammaResult r = gamma_ordinal(parse_rational(eps_), m_, cfg);
    if (json_) {
      emit({{"value", to_string(r.value)},
            {"certainty", r.complete ? "exact" : "horizon"},
            {"horizon", r.horizon_used},
            {"tuple", r.tuple}});
    } else {
      out_ << to_string(r.value) << "\n";
      if (!r.complete) out_ << "certainty: horizon (lower bound, entries <= " << r.horizon_used << ")\n";
    }
  }

  void do_dagger() {
    GammaConfig cfg = gamma_config();
    if (gamma_horizon_) cfg.horizon = *gamma_horizon_;
    std::vector<Ordinal> betas;
    for (const auto& t : split(betas_, ',')) betas.push_back(parse_ordinal(t));
    const int horizon = horizon_.value_or(30);
    const DaggerReport rep = dagger_probe(parse_rational(eps_), betas, horizon, cfg, OrdinalRule::parse(ell_, 'm'));
    if (json_) {
      json entries = json::array();
      for (const auto& e : rep.entries) {
        json j = {{"beta", to_string(e.beta)}};
        j["witness"] = e.witness ? json(*e.witness) : json(nullptr);
        entries.push_back(j);
      }
      emit({{"entries", entries}, {"horizon", horizon}, {"gamma_complete", rep.all_complete}, {"certainty", "horizon"}});
    } else {
      for (const auto& e : rep.entries) {
        out_ << "beta " << to_string(e.beta) << ": ";
        if (e.witness)
          out_ << "m = " << *e.witness << "\n";
        else
          out_ << "none <= " << horizon << "\n";
      }
      out_ << "certainty: horizon\n";
    }
  }

  void do_diagnose() {
    const ThetaRule theta = space_.file.empty() ? parse_theta_rule(theta_) : parse_space_spec(read_file(space_.file)).theta_rule();
    const int horizon = horizon_.value_or(50);
    const DiagnosticsReport rep = theta_diagnostics(theta, horizon);
    if (json_) {
      json ratios = json::array(), roots = json::array();
      for (const auto& e : rep.ratio_profile)
        ratios.push_back({{"m", e.m}, {"sup", to_string(e.sup)}, {"tail", to_string(e.tail)}});
      for (const auto& e : rep.root_profile)
        roots.push_back({{"n", e.n}, {"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}});
      json j = {{"horizon", rep.horizon},
                {"ratio_profile", ratios},
                {"root_profile", roots},
                {"submultiplicative", rep.submultiplicative},
                {"submultiplicative_equality", rep.submultiplicative_equality},
                {"ratio_limit_positive", rep.ratio_limit_positive},
                {"certainty", rep.certainty}};
      if (rep.violation) j["violation"] = {rep.violation->first, rep.violation->second};
      emit(j);
      return;
    }
    out_ << "ratio profile (m, sup_n, tail)\n";
    for (const auto& e : rep.ratio_profile) out_ << e.m << " " << to_string(e.sup) << " " << to_string(e.tail) << "\n";
    out_ << "root profile (n, lo, hi)\n";
    for (const auto& e : rep.root_profile) out_ << e.n << " " << to_string(e.lo) << " " << to_string(e.hi) << "\n";
    out_ << "submultiplicative: " << (rep.submultiplicative ? "true" : "false");
    if (rep.violation) out_ << " (first violation m=" << rep.violation->first << " n=" << rep.violation->second << ")";
    if (rep.submultiplicative && rep.submultiplicative_equality) out_ << " (equality)";
    out_ << "\n";
    out_ << "ratio limit: " << (rep.ratio_limit_positive ? "positive" : "0") << "\n";
    out_ << "certainty: " << rep.certainty << "\n";
  }

  void do_tame() {
    const FamilyRule rule = parse_family_rule(family_rule_);
    const TameResult r = tame_check(rule, n0_, n_max_, universe_, probe_bound_);
    if (json_) {
      json j = {{"pass", r.pass}, {"universe", universe_}, {"probe_bound", probe_bound_.value_or(universe_)}};
      if (!r.pass) {
        j["n"] = r.n;
        j["clause"] = r.clause;
        j["counterexample"] = *r.counterexample;
      }
      emit(j);
    } else if (r.pass) {
      out_ << "pass\n";
    } else {
      out_ << "fail n=" << r.n << " clause " << r.clause << " " << to_string(*r.counterexample) << "\n";
    }
  }

  void do_spread() {
    const SpaceSpec sp = space_.build();
    std::vector<Vector> blocks;
    for (const auto& t : split(blocks_, ';')) blocks.push_back(parse_vector(t));
    const SpreadingResult r =
        spreading_constant(blocks, parse_family(family_), parse_interval(window_), parse_rationals(coeffs_), sp);
    if (json_)
      emit({{"value", to_string(r.value)}, {"argmin", r.argmin}});
    else
      out_ << to_string(r.value) << "\n" << "attained at " << to_string(r.argmin) << "\n";
  }

  void do_lemma1() {
    const SpaceSpec sp = space_.build();
    const auto coeffs = parse_rationals(coeffs_);
    const auto indices = parse_ints(indices_);
    const auto [x, y] = lemma1_pair(coeffs, indices);
    std::pair<int, int> universe{1, 1};
    if (!universe_range_.empty())
      universe = parse_interval(universe_range_);
    else if (!indices.empty())
      universe = {indices.front(), indices.back()};
    const auto w = lemma1_witness(x, y, m_, sp, universe);
    if (json_) {
      json j = {{"found", w.has_value()}};
      if (w) {
        j["sets"] = {w->e1, w->e2, w->e3};
        j["lhs"] = to_string(w->lhs);
        j["rhs"] = to_string(w->rhs);
      }
      emit(j);
    } else if (w) {
      out_ << to_string(w->e1) << " " << to_string(w->e2) << " " << to_string(w->e3) << "\n";
      out_ << to_string(w->lhs) << " <= " << to_string(w->rhs) << "\n";
    } else {
      out_ << "none\n";
    }
  }

  void do_ssum() {
    const SpaceSpec sp = space_.build();
    const SchreierSumReport r = schreier_sum_bound(parse_vector(vec_), sp, parse_ints(schedule_));
    auto strs = [](const std::vector<Rational>& v) {
      std::vector<std::string> s;
      for (const auto& q : v) s.push_back(to_string(q));
      return s;
    };
    if (json_) {
      emit({{"schedule", r.schedule},
            {"pi", strs(r.pi)},
            {"rho", strs(r.rho)},
            {"norm", to_string(r.norm)},
            {"partial", to_string(r.partial)},
            {"tail", to_string(r.tail)},
            {"bound", to_string(r.bound)},
            {"holds", r.holds}});
      return;
    }
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& t : v) s += (s.empty() ? "" : " ") + t;
      return s;
    };
    std::vector<std::string> sched;
    for (int n : r.schedule) sched.push_back(std::to_string(n));
    out_ << "schedule: " << join(sched) << "\n";
    out_ << "pi: " << join(strs(r.pi)) << "\n";
    out_ << "rho: " << join(strs(r.rho)) << "\n";
    out_ << "norm: " << to_string(r.norm) << "\n";
    out_ << "bound: " << to_string(r.bound) << " (partial " << to_string(r.partial) << " + tail " << to_string(r.tail)
         << ")\n";
    out_ << (r.holds ? "holds" : "fails") << "\n";
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner runner(out);
  return runner.run(args, err);
}

}  // namespace mts::cli
