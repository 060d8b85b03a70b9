#pragma once

#include <cstdint>
#include <string>

#include "mmplan/scenario_io.hpp"

namespace mmplan {

// Synthetic scenario size classes.
//   Tiny:  B <= 10,  G <= 50    (oracle suites, exhaustive enumeration)
//   Small: B <= 40,  G <= 400   (coverage/Monte Carlo suites)
//   Demo:  B <= 130, G <= 2000  (CLI demos)
enum class SizeClass { Tiny, Small, Demo };

SizeClass parse_size_class(const std::string& name);  // "tiny" | "small" | "demo"

// Deterministically generates a Manhattan-style scenario: building blocks,
// wall-mounted candidate sites plus street poles, striped UE-density regions,
// and a constrained core carrying the outage tolerance.  Two calls with the
// same (class, seed) produce identical bytes.
std::string generate_scenario_text(SizeClass size_class, std::uint64_t seed);

ScenarioBundle generate_scenario(SizeClass size_class, std::uint64_t seed);

}  // namespace mmplan
