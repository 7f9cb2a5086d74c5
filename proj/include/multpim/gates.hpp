#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace multpim {

using Bit = std::uint8_t;

/// Stateful gates a schedule may emit. COPY exists only for illustrating the
/// partition techniques; production multiplier schedules never use it.
enum class GateKind : std::uint8_t { NOT, NOR2, OR2, NAND2, MIN3, COPY };

class GateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::size_t arity(GateKind kind);

/// Truth function of `kind`. Throws GateError on arity mismatch.
Bit eval(GateKind kind, std::span<const Bit> inputs);

std::string_view to_string(GateKind kind);
GateKind gate_from_string(std::string_view name);

enum class GateProfile : std::uint8_t { NotMin3, Extended };

/// Allowed gate set for a profile: not_min3 -> {NOT, MIN3};
/// extended -> {NOT, NOR2, OR2, NAND2, MIN3}.
std::vector<GateKind> gate_profile(GateProfile profile);
GateProfile profile_from_string(std::string_view name);
bool profile_allows(GateProfile profile, GateKind kind);

}  // namespace multpim
