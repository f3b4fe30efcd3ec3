#pragma once

#include "twb/fragment.hpp"
#include "twb/partition.hpp"

namespace twb {

/// Three sorts in a chain. Sort 0 holds an increasing chain s0..s4 at levels
/// w*(i+1)+1; G sends it to a matching chain in sort 1, whose G collapses onto
/// siblings at level 1 in sort 2. Valid in classT mode; completed to rank 2.
Fragment h_iteration_sample();

/// The nodes s0..s4 of h_iteration_sample, in order.
std::vector<Node> h_iteration_window(const Fragment& f);

/// Levels 0, 1, w, w+1, w*2, w*2+1 of the six-node chain behind hard6_sample.
std::vector<Ordinal> hard6_levels();

/// The six-node chain with three Suc_lim nodes and the first pair coloring (in
/// a fixed enumeration order) that leaves no constant increasing Suc_lim triple.
PTriple hard6_sample();

}  // namespace twb
