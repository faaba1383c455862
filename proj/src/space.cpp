#include "mts/space.hpp"

#include <cctype>
#include <sstream>

#include "mts/errors.hpp"

namespace mts {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool in_open_unit(const Rational& q) { return q > 0 && q < 1; }

std::string rational_text(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : to_string(q);
}

}  // namespace

// ---------------------------------------------------------------------------

ThetaRule ThetaRule::geometric(Rational ratio) {
  if (!in_open_unit(ratio)) throw ConfigError("theta: geometric ratio " + to_string(ratio) + " not in (0,1)");
  ThetaRule t;
  t.kind_ = Kind::geometric;
  t.param_ = std::move(ratio);
  return t;
}

ThetaRule ThetaRule::harmonic(Rational shift) {
  if (shift <= 0) throw ConfigError("theta: harmonic shift must be > 0 so that theta_1 < 1");
  ThetaRule t;
  t.kind_ = Kind::harmonic;
  t.param_ = std::move(shift);
  return t;
}

ThetaRule ThetaRule::list(std::vector<Rational> head, Rational tail_ratio) {
  if (head.empty()) throw ConfigError("theta: empty list");
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (!in_open_unit(head[i]))
      throw ConfigError("theta: theta_" + std::to_string(i + 1) + " = " + to_string(head[i]) + " not in (0,1)");
    if (i > 0 && head[i] > head[i - 1])
      throw ConfigError("theta: not nonincreasing at n = " + std::to_string(i + 1));
  }
  if (!in_open_unit(tail_ratio)) throw ConfigError("theta: tail ratio " + to_string(tail_ratio) + " not in (0,1)");
  ThetaRule t;
  t.kind_ = Kind::list;
  t.head_ = std::move(head);
  t.param_ = std::move(tail_ratio);
  return t;
}

Rational ThetaRule::operator()(int n) const {
  if (n < 1) throw DomainError("theta index starts at 1");
  switch (kind_) {
    case Kind::geometric:
      return pow(param_, static_cast<unsigned>(n));
    case Kind::harmonic:
      return Rational(1) / (Rational(n) + param_);
    case Kind::list:
      if (static_cast<std::size_t>(n) <= head_.size()) return head_[static_cast<std::size_t>(n) - 1];
      return head_.back() * pow(param_, static_cast<unsigned>(n - static_cast<int>(head_.size())));
  }
  return {};
}

std::string to_string(const ThetaRule& t) {
  switch (t.kind_) {
    case ThetaRule::Kind::geometric:
      return "geometric " + rational_text(t.param_);
    case ThetaRule::Kind::harmonic:
      return "harmonic " + rational_text(t.param_);
    case ThetaRule::Kind::list: {
      std::string out = "list ";
      for (std::size_t i = 0; i < t.head_.size(); ++i) {
        if (i) out += ',';
        out += rational_text(t.head_[i]);
      }
      return out + " tail geometric " + rational_text(t.param_);
    }
  }
  return {};
}

ThetaRule parse_theta_rule(std::string_view text) {
  auto w = words(text);
  if (w.size() == 2 && w[0] == "geometric") return ThetaRule::geometric(parse_rational(w[1]));
  if (w.size() == 2 && w[0] == "harmonic") return ThetaRule::harmonic(parse_rational(w[1]));
  if (w.size() == 5 && w[0] == "list" && w[2] == "tail" && w[3] == "geometric") {
    std::vector<Rational> head;
    std::string item;
    std::istringstream in(w[1]);
    while (std::getline(in, item, ',')) head.push_back(parse_rational(item));
    return ThetaRule::list(std::move(head), parse_rational(w[4]));
  }
  throw ParseError("theta: expected 'geometric r', 'harmonic c' or 'list a,b,... tail geometric r', got '" +
                   trim(text) + "'");
}

// ---------------------------------------------------------------------------

FamilyRule FamilyRule::schreier(int shift) {
  FamilyRule r;
  r.name_ = shift == 0 ? "schreier n" : "schreier n+" + std::to_string(shift);
  r.fn_ = [shift](int n) { return Family::schreier(Ordinal::finite(static_cast<std::uint64_t>(n + shift))); };
  return r;
}

FamilyRule FamilyRule::ank(int scale, int shift) {
  if (scale < 0 || (scale == 0 && shift < 1)) throw ConfigError("family: ank rule must give k >= 1");
  FamilyRule r;
  std::string lin = scale == 1 ? "n" : std::to_string(scale) + "*n";
  if (scale == 0) lin = std::to_string(shift);
  else if (shift != 0) lin += "+" + std::to_string(shift);
  r.name_ = "ank " + lin;
  r.fn_ = [scale, shift](int n) { return Family::ank(scale * n + shift); };
  return r;
}

FamilyRule FamilyRule::constant(Family f) {
  FamilyRule r;
  r.name_ = "const " + to_string(f);
  r.fn_ = [f](int) { return f; };
  return r;
}

FamilyRule FamilyRule::custom(std::string name, std::function<Family(int)> fn) {
  FamilyRule r;
  r.name_ = std::move(name);
  r.fn_ = std::move(fn);
  return r;
}

namespace {

/// `n`, `n+c`, `a*n`, `a*n+b`, or a constant `b`.
std::pair<int, int> parse_affine(const std::string& s) {
  int scale = 0, shift = 0;
  auto plus = s.find('+');
  std::string lin = s.substr(0, plus);
  try {
    if (plus != std::string::npos) shift = std::stoi(s.substr(plus + 1));
    if (lin == "n") {
      scale = 1;
    } else if (lin.size() > 2 && lin.substr(lin.size() - 2) == "*n") {
      scale = std::stoi(lin.substr(0, lin.size() - 2));
    } else {
      if (plus != std::string::npos) throw std::invalid_argument("");
      shift = std::stoi(lin);
    }
  } catch (const std::exception&) {
    throw ParseError("family: bad index expression '" + s + "'");
  }
  return {scale, shift};
}

}  // namespace

FamilyRule parse_family_rule(std::string_view text) {
  std::string t = trim(text);
  auto space = t.find(' ');
  std::string head = t.substr(0, space);
  std::string rest = space == std::string::npos ? "" : trim(std::string_view(t).substr(space));
  if (head == "const") return FamilyRule::constant(parse_family(rest));
  std::string compact;
  for (char c : rest)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  if (head == "schreier") {
    auto [scale, shift] = parse_affine(compact);
    if (scale != 1) throw ParseError("family: schreier rule must be 'schreier n' or 'schreier n+c'");
    return FamilyRule::schreier(shift);
  }
  if (head == "ank") {
    auto [scale, shift] = parse_affine(compact);
    try {
      return FamilyRule::ank(scale, shift);
    } catch (const ConfigError& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("family: expected 'schreier n[+c]', 'ank [a*]n[+b]' or 'const <family>', got '" + t + "'");
}

// ---------------------------------------------------------------------------

SpaceSpec::SpaceSpec(ThetaRule theta, FamilyRule families, int horizon)
    : theta_rule_(std::move(theta)),
      family_rule_(std::move(families)),
      horizon_(horizon),
      cache_(std::make_shared<Cache>()) {
  if (horizon_ < 1) throw ConfigError("horizon must be >= 1");
  Rational prev = 1;
  for (int n = 1; n <= horizon_; ++n) {
    Rational t = this->theta(n);
    if (!in_open_unit(t)) throw ConfigError("theta_" + std::to_string(n) + " = " + to_string(t) + " not in (0,1)");
    if (t > prev) throw ConfigError("theta not nonincreasing at n = " + std::to_string(n));
    prev = t;
    Family f = family(n);
    if (!f.norm_grade()) throw ConfigError("F_" + std::to_string(n) + " = " + to_string(f) + " is not norm-grade");
    if (index_bound(f).value <= Ordinal::finite(1))
      throw ConfigError("F_" + std::to_string(n) + " = " + to_string(f) + " has index 1 (singletons only)");
  }
}

Rational SpaceSpec::theta(int n) const {
  if (n < 1) throw DomainError("theta index starts at 1");
  std::lock_guard lock(cache_->mu);
  auto& v = cache_->theta;
  while (v.size() < static_cast<std::size_t>(n)) v.push_back(theta_rule_(static_cast<int>(v.size()) + 1));
  return v[static_cast<std::size_t>(n) - 1];
}

Family SpaceSpec::family(int n) const {
  if (n < 1) throw DomainError("family index starts at 1");
  std::lock_guard lock(cache_->mu);
  auto it = cache_->families.find(n);
  if (it == cache_->families.end()) it = cache_->families.emplace(n, family_rule_(n)).first;
  return it->second;
}

std::string SpaceSpec::to_config() const {
  return "theta = " + to_string(theta_rule_) + "\nfamily = " + family_rule_.name() +
         "\nhorizon = " + std::to_string(horizon_) + "\n";
}

SpaceSpec parse_space_spec(std::string_view text) {
  std::optional<ThetaRule> theta;
  std::optional<FamilyRule> family;
  int horizon = 64;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    const int col = static_cast<int>(line.find_first_not_of(" \t", eq + 1)) + 1;
    try {
      if (key == "theta") {
        theta = parse_theta_rule(value);
      } else if (key == "family") {
        family = parse_family_rule(value);
      } else if (key == "horizon") {
        std::size_t used = 0;
        horizon = std::stoi(value, &used);
        if (used != value.size()) throw ParseError("horizon: expected an integer");
      } else {
        throw ParseError("unknown key '" + key + "'", line_no, 1);
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no, col);
    } catch (const std::invalid_argument&) {
      throw ParseError("horizon: expected an integer", line_no, col);
    } catch (const std::out_of_range&) {
      throw ParseError("horizon: out of range", line_no, col);
    }
  }
  if (!theta) throw ParseError("missing 'theta' line");
  if (!family) throw ParseError("missing 'family' line");
  return SpaceSpec(*theta, *family, horizon);
}

SpaceSpec schreier_space() { return SpaceSpec(ThetaRule::geometric(Rational(1, 2)), FamilyRule::schreier(0)); }

SpaceSpec harmonic_s1_space() {
  return SpaceSpec(ThetaRule::harmonic(1), FamilyRule::constant(Family::schreier(Ordinal::finite(1))));
}

SpaceSpec ank_space() { return SpaceSpec(ThetaRule::geometric(Rational(1, 2)), FamilyRule::ank(1, 1)); }

}  // namespace mts
