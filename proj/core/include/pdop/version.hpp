#pragma once

namespace pdop {

inline constexpr const char* kToolVersion = "1.0.0";

/// Version of the scenario file schema accepted by the loader.
inline constexpr int kScenarioSchemaVersion = 1;

}  // namespace pdop
