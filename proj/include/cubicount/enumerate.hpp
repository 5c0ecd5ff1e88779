#pragma once

// ============================================================================
// Orbit enumeration: one canonical representative per twisted GL2(Z)-orbit of
// integral binary cubic forms with 0 < +-disc < X.
//
// Three disjoint strata are scanned with per-coefficient windows derived from
// reduction theory (each window is proved complete in the implementation
// banners); every candidate passes exact integer filters before emission, so
// the floating-point window arithmetic only ever wastes a few iterations and
// never loses an orbit.  Output is deterministic: sorted by |disc|, then by
// the canonical representative's coefficient tuple.
//
// The parallel entry point partitions the scans by leading coefficient and
// merges per-thread buffers before the final sort, so its output is
// byte-identical to the serial reference implementation.
// ============================================================================

#include <vector>

#include "cubicount/forms.hpp"

namespace cubic {

// Configured overflow-safe ceiling for the discriminant bound X.  All scan
// intermediates stay far inside checked 128-bit arithmetic below this.
inline constexpr i64 kMaxEnumerationBound = 100000000;

// One representative per orbit with 0 < sign*disc < X, sorted by |disc| and
// then by coefficient tuple.  sign is +1 (totally real resolvent) or -1.
// Throws std::invalid_argument for X < 1, X > kMaxEnumerationBound, or a
// sign outside {+1,-1}.  Parallel when OpenMP is available.
std::vector<OrbitRecord> enumerate_orbits(i64 X, int sign);

// Serial reference implementation (identical output, kept for testing and
// benchmarking the parallel kernel against).
std::vector<OrbitRecord> enumerate_orbits_serial(i64 X, int sign);

}  // namespace cubic
