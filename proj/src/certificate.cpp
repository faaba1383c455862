#include "mts/certificate.hpp"

#include <algorithm>

#include "json.hpp"
#include "mts/errors.hpp"

namespace mts {

using nlohmann::json;

namespace {

Rational leaf_sum(const CertNode& node, const Vector& x) {
  if (node.is_leaf()) return node.tag * x.restricted(node.set).c0_norm();
  Rational s = 0;
  for (const auto& c : node.children) s += leaf_sum(c, x);
  return s;
}

bool check_node(const CertNode& node, const SpaceSpec& sp, std::string& reason) {
  try {
    validate_set(node.set);
  } catch (const DomainError& e) {
    reason = e.what();
    return false;
  }
  if (node.is_leaf()) {
    if (node.level) {
      reason = "leaf " + to_string(node.set) + " records a level";
      return false;
    }
    return true;
  }
  if (!node.level || *node.level < 1) {
    reason = "node " + to_string(node.set) + " has children but no level";
    return false;
  }
  const Rational theta = sp.theta(*node.level);
  FiniteSet minima;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const CertNode& c = node.children[i];
    if (c.set.empty()) {
      reason = "empty child under " + to_string(node.set);
      return false;
    }
    if (!std::includes(node.set.begin(), node.set.end(), c.set.begin(), c.set.end())) {
      reason = "child " + to_string(c.set) + " not contained in " + to_string(node.set);
      return false;
    }
    if (i > 0 && !(node.children[i - 1].set.back() < c.set.front())) {
      reason = "children not ordered under " + to_string(node.set);
      return false;
    }
    if (c.tag != theta * node.tag) {
      reason = "tag of " + to_string(c.set) + " is " + to_string(c.tag) + ", expected " + to_string(theta * node.tag);
      return false;
    }
    minima.push_back(c.set.front());
  }
  if (!member(sp.family(*node.level), minima)) {
    reason = "children of " + to_string(node.set) + " not F_" + std::to_string(*node.level) + "-admissible (minima " +
             to_string(minima) + ")";
    return false;
  }
  for (const auto& c : node.children) {
    if (!check_node(c, sp, reason)) return false;
  }
  return true;
}

json to_json(const CertNode& node) {
  json j;
  j["set"] = node.set;
  if (node.level) j["level"] = *node.level;
  j["tag"] = to_string(node.tag);
  j["children"] = json::array();
  for (const auto& c : node.children) j["children"].push_back(to_json(c));
  return j;
}

CertNode from_json(const json& j) {
  if (!j.is_object()) throw ParseError("certificate: node is not an object");
  CertNode node;
  if (!j.contains("set") || !j["set"].is_array()) throw ParseError("certificate: node without 'set' array");
  node.set = j["set"].get<FiniteSet>();
  if (j.contains("level") && !j["level"].is_null()) node.level = j["level"].get<int>();
  if (!j.contains("tag") || !j["tag"].is_string()) throw ParseError("certificate: node without 'tag' string");
  node.tag = parse_rational(j["tag"].get<std::string>());
  if (j.contains("children")) {
    if (!j["children"].is_array()) throw ParseError("certificate: 'children' is not an array");
    for (const auto& c : j["children"]) node.children.push_back(from_json(c));
  }
  return node;
}

}  // namespace

Rational evaluate(const NormCertificate& cert, const Vector& x) { return leaf_sum(cert.root, x); }

CertificateCheck verify_certificate(const NormCertificate& cert, const Vector& x, const SpaceSpec& sp) {
  CertificateCheck out;
  out.value = evaluate(cert, x);
  if (cert.root.tag != 1) {
    out.reason = "root tag is " + to_string(cert.root.tag) + ", expected 1/1";
    return out;
  }
  out.valid = check_node(cert.root, sp, out.reason);
  return out;
}

std::string certificate_to_json(const NormCertificate& cert, int indent) {
  return to_json(cert.root).dump(indent);
}

NormCertificate certificate_from_json(const std::string& text) {
  try {
    return NormCertificate{from_json(json::parse(text))};
  } catch (const json::exception& e) {
    throw ParseError(std::string("certificate: ") + e.what());
  }
}

}  // namespace mts
