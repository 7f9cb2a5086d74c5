#include "multpim/gates.hpp"

#include <algorithm>

namespace multpim {

std::size_t arity(GateKind kind) {
  switch (kind) {
    case GateKind::NOT:
    case GateKind::COPY:
      return 1;
    case GateKind::NOR2:
    case GateKind::OR2:
    case GateKind::NAND2:
      return 2;
    case GateKind::MIN3:
      return 3;
  }
  throw GateError("unknown gate kind");
}

Bit eval(GateKind kind, std::span<const Bit> in) {
  if (in.size() != arity(kind)) {
    throw GateError(std::string(to_string(kind)) + " expects " + std::to_string(arity(kind)) +
                    " inputs, got " + std::to_string(in.size()));
  }
  switch (kind) {
    case GateKind::NOT:
      return in[0] ? 0 : 1;
    case GateKind::COPY:
      return in[0] ? 1 : 0;
    case GateKind::NOR2:
      return (in[0] | in[1]) ? 0 : 1;
    case GateKind::OR2:
      return (in[0] | in[1]) ? 1 : 0;
    case GateKind::NAND2:
      return (in[0] & in[1]) ? 0 : 1;
    case GateKind::MIN3:
      // 1 iff at most one input is set
      return (static_cast<int>(in[0] != 0) + (in[1] != 0) + (in[2] != 0)) <= 1 ? 1 : 0;
  }
  throw GateError("unknown gate kind");
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::NOT: return "NOT";
    case GateKind::NOR2: return "NOR2";
    case GateKind::OR2: return "OR2";
    case GateKind::NAND2: return "NAND2";
    case GateKind::MIN3: return "MIN3";
    case GateKind::COPY: return "COPY";
  }
  return "?";
}

GateKind gate_from_string(std::string_view name) {
  for (auto k : {GateKind::NOT, GateKind::NOR2, GateKind::OR2, GateKind::NAND2, GateKind::MIN3,
                 GateKind::COPY}) {
    if (to_string(k) == name) return k;
  }
  throw GateError("unknown gate '" + std::string(name) + "'");
}

std::vector<GateKind> gate_profile(GateProfile profile) {
  switch (profile) {
    case GateProfile::NotMin3:
      return {GateKind::NOT, GateKind::MIN3};
    case GateProfile::Extended:
      return {GateKind::NOT, GateKind::NOR2, GateKind::OR2, GateKind::NAND2, GateKind::MIN3};
  }
  throw GateError("unknown gate profile");
}

GateProfile profile_from_string(std::string_view name) {
  if (name == "not_min3") return GateProfile::NotMin3;
  if (name == "extended") return GateProfile::Extended;
  throw GateError("unknown gate profile '" + std::string(name) + "'");
}

bool profile_allows(GateProfile profile, GateKind kind) {
  auto allowed = gate_profile(profile);
  return std::find(allowed.begin(), allowed.end(), kind) != allowed.end();
}

}  // namespace multpim
