#pragma once

#include <map>
#include <string>
#include <vector>

#include "twb/fragment.hpp"
#include "twb/types.hpp"

namespace twb {

/// Input to the gluing construction.
///
/// `inner` lists the indices of `shape` that the base fragment lives on; it
/// must be downward closed. Each child of an inner index that is itself not
/// inner is a boundary slot. A boundary fragment is attached to a slot by its
/// root sort; its deeper sorts follow child position (the k-th child of a
/// sort goes to the k-th child of that sort's image). Slots without an entry
/// stay empty. Connectors name, by node id, the value of G from a base node
/// into the slot's sort.
struct GlueSpec {
  Shape shape;
  std::vector<int> inner;
  Fragment base;
  std::map<int, Fragment> boundary;
  std::map<int, std::map<std::string, std::string>> connectors;
};

struct GlueResult {
  Fragment model;
  std::vector<Node> base_nodes;                    ///< output node of each base node
  std::map<int, std::vector<Node>> boundary_nodes;  ///< per slot: output node of each boundary node
  std::map<int, std::vector<int>> boundary_sorts;   ///< per slot: output sort of each boundary sort
};

/// Glues the base and the boundary fragments into one theta-mode fragment over
/// `shape`. Ids are kept. Constants of a base sort whose slot holds a constant
/// with the same number get that constant as their G value unless a connector
/// says otherwise.
///
/// Throws DisjointnessViolated when two parts share a node id, AxiomViolated
/// when the result fails validation (for instance a connector that is not
/// regressive), and InputError when the parts do not fit the shape.
GlueResult star_construct(const GlueSpec& g);

/// Mask selecting the output sorts that a slot's boundary fragment occupies.
SortMask boundary_mask(const GlueResult& r, int slot);

/// Whether the two boundary tuples have equal rank-k types in the source
/// exactly when their images have equal rank-k types in the glued model
/// (read through boundary_mask).
bool transfer_agrees(const GlueResult& r, int slot, const Fragment& source, const std::vector<Node>& a,
                     const std::vector<Node>& b, int k);

enum class WitnessCase { theta, singular, regular, inaccessible };
const char* witness_case_name(WitnessCase c);
/// Accepts "theta", "singular", "regular", "inaccessible" and the aliases case1..case3, inacc.
WitnessCase parse_witness_case(const std::string& s);

struct WitnessParams {
  /// Constants in the theta witness (and in the sub-witnesses of the regular case).
  int theta_bound = 8;
  /// Block ends for the singular case; the base has one limb per element of the last block end.
  std::vector<int> block_ends{3, 5};
  /// Branching depth of the binary sample in the regular case (levels 0, 1, w, w+1, w*2, ...).
  int binary_depth = 3;
  /// Limbs of the base chain and the length of the sequences its coloring must avoid (inaccessible case).
  int limbs = 6;
  int delta = 4;
  /// Size of the sub-witness that receives the per-class connectors (inaccessible case).
  int sub_witness = 8;
  /// Build the control instead: same number of nodes, connectors that do not separate anything.
  bool control = false;
};

struct WitnessModel {
  Fragment model;
  std::vector<Node> A;
};

/// Desk-scale witness for the chosen case. Throws InsufficientSubwitness when a
/// sub-witness is too small for the connectors it has to receive.
WitnessModel build_witness(WitnessCase c, const WitnessParams& p = {});

}  // namespace twb
