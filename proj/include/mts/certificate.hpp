#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mts/family.hpp"
#include "mts/rational.hpp"
#include "mts/space.hpp"
#include "mts/vector.hpp"

namespace mts {

/// Node of an admissible (norming) tree. A node with children records the
/// level n whose family F_n makes the children admissible; each child's
/// tag is theta_n times the parent's. Leaves carry no level.
struct CertNode {
  FiniteSet set;
  std::optional<int> level;
  Rational tag = 1;
  std::vector<CertNode> children;

  bool is_leaf() const { return children.empty(); }
};

struct NormCertificate {
  CertNode root;
};

/// Sum over leaves of tag * ||Ex||_{c0}.
Rational evaluate(const NormCertificate& cert, const Vector& x);

struct CertificateCheck {
  bool valid = false;
  Rational value;
  /// First failed condition, empty when valid.
  std::string reason;
};

/// Checks the admissible-tree conditions (root tag 1, children ordered,
/// nested, F_n-admissible, tags recomputed exactly) and evaluates the tree
/// whether or not it is valid.
CertificateCheck verify_certificate(const NormCertificate& cert, const Vector& x, const SpaceSpec& sp);

/// JSON tree with fields set, level (omitted on leaves), tag ("num/den"),
/// children.
std::string certificate_to_json(const NormCertificate& cert, int indent = 2);
/// Throws ParseError on malformed input.
NormCertificate certificate_from_json(const std::string& text);

}  // namespace mts
