#pragma once

// Operator-sum representation of a single-qubit channel.

#include <string>
#include <variant>
#include <vector>

#include "fmosim/qcore.hpp"

namespace fmosim {

enum class CptpStatus { verified, violated, unchecked };

inline std::string to_string(CptpStatus s) {
  switch (s) {
    case CptpStatus::verified: return "verified";
    case CptpStatus::violated: return "violated";
    case CptpStatus::unchecked: return "unchecked";
  }
  return "unchecked";
}

namespace provenance {
struct Angles {
  double upsilon;
  double mu;
};
struct Dissipation {
  double rate;
  double time;
};
struct DephasingPaper {
  double rate;
  double time;
};
struct DephasingCorrected {
  double rate;
  double time;
};
struct Explicit {};
}  // namespace provenance

using Provenance = std::variant<provenance::Explicit, provenance::Angles, provenance::Dissipation,
                                provenance::DephasingPaper, provenance::DephasingCorrected>;

inline std::string provenance_name(const Provenance& p) {
  struct Visitor {
    std::string operator()(const provenance::Explicit&) const { return "explicit"; }
    std::string operator()(const provenance::Angles&) const { return "angles"; }
    std::string operator()(const provenance::Dissipation&) const { return "dissipation"; }
    std::string operator()(const provenance::DephasingPaper&) const { return "dephasing-paper"; }
    std::string operator()(const provenance::DephasingCorrected&) const { return "dephasing-corrected"; }
  };
  return std::visit(Visitor{}, p);
}

/// max-norm of sum_k K_k^dagger K_k - I
inline double completeness_deficit(const std::vector<Matrix2>& ops) {
  Matrix2 sum = Matrix2::Zero();
  for (const auto& k : ops) sum += k.adjoint() * k;
  return (sum - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

struct KrausChannel {
  std::vector<Matrix2> ops;
  CptpStatus cptp = CptpStatus::unchecked;
  double deficit = 0.0;
  Provenance provenance = provenance::Explicit{};

  /// Builds a channel and classifies it against tol::cptp.
  static KrausChannel audited(std::vector<Matrix2> ops, Provenance prov = provenance::Explicit{}) {
    KrausChannel ch;
    ch.deficit = completeness_deficit(ops);
    ch.cptp = ch.deficit <= tol::cptp ? CptpStatus::verified : CptpStatus::violated;
    ch.ops = std::move(ops);
    ch.provenance = prov;
    return ch;
  }
};

}  // namespace fmosim
