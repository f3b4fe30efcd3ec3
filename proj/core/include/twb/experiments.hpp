#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twb/fragment.hpp"

namespace twb {

/// Parameter families for the type-counting experiment.
///  - chain: the chain n0 < n1 < ... of 8m nodes (levels 0..8m-1), parameters n4, n12, ..., one per block of 8;
///  - binary: the full binary tree of depth 5 (ids are binary labels, "e" for the root),
///    parameters the first m leaves of even index in id order.
enum class VcFamily { chain, binary };
const char* vc_family_name(VcFamily f);
VcFamily parse_vc_family(const std::string& s);

struct VcInstance {
  Fragment fragment;
  std::vector<Node> params;
};

/// Member with m parameters, 1 <= m <= 8 (16 for the binary family).
VcInstance vc_instance(VcFamily family, int m);

using CountSeries = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

/// (m, number of rank-k 1-type classes over the m parameters) for m = 1..max_params.
CountSeries vc_series(VcFamily family, int k, int max_params = 8);

}  // namespace twb
