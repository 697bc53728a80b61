#pragma once

// Isomorphism of one-relator groups with at least one side in the class:
// isomorphic exactly when the relators lie in one Aut(F)-orbit up to
// inversion, as cyclic words.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "aog/genericity.hpp"
#include "aog/smallcancel.hpp"
#include "aog/whitehead.hpp"

namespace aog {

enum class IsoKind { Isomorphic, NotIsomorphic, Inapplicable };

inline const char* to_string(IsoKind k) {
  switch (k) {
    case IsoKind::Isomorphic: return "Isomorphic";
    case IsoKind::NotIsomorphic: return "NotIsomorphic";
    case IsoKind::Inapplicable: return "Inapplicable";
  }
  return "?";
}

struct IsoVerdict {
  IsoKind kind = IsoKind::Inapplicable;
  std::optional<OrbitCertificate> certificate;
  std::string reason;
  // Membership was assumed rather than certified; NotIsomorphic then rests
  // on that assumption. Isomorphic never does.
  bool conditional = false;
  std::optional<MembershipReport> first_membership;
  std::optional<MembershipReport> second_membership;
};

inline IsoVerdict decide_isomorphic(const Presentation& p1, const Presentation& p2, const ClassParams& params,
                                    std::optional<std::uint64_t> node_budget, bool assume_in_class) {
  if (p1.relators.size() != 1 || p2.relators.size() != 1)
    throw std::invalid_argument("isomorphism test needs one-relator presentations");
  if (p1.rank != p2.rank) throw std::invalid_argument("presentations have different generator counts");
  p1.validate();
  p2.validate();
  const int m = p1.rank;

  IsoVerdict out;
  out.conditional = assume_in_class;
  if (!assume_in_class) {
    out.first_membership = check_membership(p1, params, node_budget);
    if (out.first_membership->verdict != Membership::InClass) {
      out.second_membership = check_membership(p2, params, node_budget);
      if (out.second_membership->verdict != Membership::InClass) {
        out.kind = IsoKind::Inapplicable;
        const bool unknown = out.first_membership->verdict == Membership::Undetermined ||
                             out.second_membership->verdict == Membership::Undetermined;
        out.reason = unknown ? "membership undetermined for both presentations"
                             : "neither presentation is in the class";
        return out;
      }
    }
  }
  out.certificate = same_orbit(p1.relators[0], p2.relators[0], m);
  if (out.certificate) {
    out.kind = IsoKind::Isomorphic;
    out.reason = "relators related by an automorphism";
  } else {
    out.kind = IsoKind::NotIsomorphic;
    out.reason = "distinct Aut(F)-orbits of relators";
  }
  return out;
}

}  // namespace aog
