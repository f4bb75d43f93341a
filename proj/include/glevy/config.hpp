#pragma once

#include "glevy/fnspace.hpp"
#include "glevy/pide.hpp"
#include "glevy/region.hpp"
#include "glevy/simulate.hpp"
#include "glevy/uncertainty.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace glevy::config {

using Json = nlohmann::json;

/// Reads and parses a JSON document; InvalidInput on I/O or syntax errors.
Json load(const std::filesystem::path& file);

/// FNV-1a (64 bit) of the canonical dump, as 16 hex digits.
std::string hash(const Json& doc);

/// Region syntax:
///   {"type": "interval", "lo": a, "hi": b, "closedLo": false, "closedHi": true}
///   {"type": "open" | "closed" | "halfOpen", "lo": a, "hi": b}
///   {"type": "annulus", "inner": r, "outer": R}
///   {"type": "points", "points": [x, ...]} or {"type": "point", "x": x}
///   {"type": "punctured", "dim": d}, {"type": "empty"}
///   {"type": "union", "of": [region, ...]}
Region region(const Json& j);

/// A measure is either [[z, w], ...] (scalar atoms) or [{"z": [..], "w": w}, ...].
DiscreteLevyMeasure measure(const Json& j, std::optional<std::size_t> dim = std::nullopt);

/// Either {"triples": [{"atoms": measure, "drift": p, "Q": q}, ...]} or
/// {"family": {"rule": name, ...}} with the rules
///   scaledDirac:     lambda delta_location,          lambda over a range
///   diracLocation:   weight delta_x,                  x over a range
///   twoPointMixture: total (a delta_x + (1-a) delta_y), a over a range
/// A range is {"lo", "hi", "count"} or {"values": [...]}. Family members share
/// "drift" and "Q" (scalars, default 0).
UncertaintySet uncertainty(const Json& j);

/// {"xMin", "xMax", "nx", "dt", "T"}, missing keys keep their defaults.
Grid1D grid(const Json& j, const Grid1D& defaults = {});

struct McConfig {
    std::size_t nPaths = 10000;
    std::optional<std::uint64_t> seed;
    /// Equal control intervals for the candidate grid; 1 means constant controls.
    std::size_t controlIntervals = 1;
    std::size_t maxPolicies = 4096;
    MonteCarloSetup setup;
};

/// {"nPaths", "seed", "dt", "threads", "chunkSize", "controlIntervals", "maxPolicies"}.
McConfig mc(const Json& j);

/// Payoff syntax on the real line:
///   linear(slope = 1, intercept = 0), clampedLinear(slope = 1, lo, hi),
///   antitone(lo, hi): clamp(-x, lo, hi), smoothIndicator(lo, hi, width),
///   constant(value), table(x: [..], y: [..]) piecewise linear, flat outside,
///   indicator(region): 1 on the region.
ScalarFunction payoff(const Json& j);

/// A payoff with optional "discontinuities" and "support" regions.
TestFunction testFunction(const Json& j);

/// Path events for capacity estimates:
///   {"type": "jumpIn", "region": A}: some jump lies in A
///   {"type": "countAtLeast", "region": A, "k": k}: at least k jumps in A
///   {"type": "kthJumpIn", "region": A, "target": B, "k": k, "lo": a, "hi": b}
PathEvent event(const Json& j);

}  // namespace glevy::config
