#include "twb/experiments.hpp"

#include "twb/error.hpp"
#include "twb/types.hpp"

namespace twb {

namespace {

Fragment chain_of(int n) {
  std::vector<TreeNodeSpec> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"n" + std::to_string(i), Ordinal::nat(static_cast<std::uint64_t>(i))});
    if (i > 0) edges.push_back({nodes[i - 1].id, nodes[i].id});
  }
  return from_standard_tree(nodes, edges);
}

Fragment binary_of(int depth) {
  std::vector<TreeNodeSpec> nodes{{"e", Ordinal()}};
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> layer{""};
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> next;
    for (const auto& s : layer) {
      for (char c : {'0', '1'}) {
        next.push_back(s + c);
        nodes.push_back({next.back(), Ordinal::nat(static_cast<std::uint64_t>(d))});
        edges.push_back({s.empty() ? "e" : s, next.back()});
      }
    }
    layer = std::move(next);
  }
  return from_standard_tree(nodes, edges);
}

}  // namespace

const char* vc_family_name(VcFamily f) { return f == VcFamily::chain ? "chain" : "binary"; }

VcFamily parse_vc_family(const std::string& s) {
  if (s == "chain") return VcFamily::chain;
  if (s == "binary") return VcFamily::binary;
  throw Error(ErrorKind::InputError, "unknown family '" + s + "' (chain or binary)");
}

VcInstance vc_instance(VcFamily family, int m) {
  constexpr int kDepth = 5;
  const int most = family == VcFamily::chain ? 8 : (1 << kDepth) / 2;
  if (m < 1 || m > most) throw Error(ErrorKind::InputError, "parameter count out of range");
  VcInstance out;
  if (family == VcFamily::chain) {
    out.fragment = chain_of(8 * m);
    for (int i = 0; i < m; ++i) out.params.push_back(out.fragment.node("n" + std::to_string(8 * i + 4)));
  } else {
    out.fragment = binary_of(kDepth);
    std::vector<Node> leaves;
    for (Node x : out.fragment.nodes_by_id()) {
      if (out.fragment.id(x).size() == kDepth) leaves.push_back(x);
    }
    for (int i = 0; i < m; ++i) out.params.push_back(leaves[static_cast<std::size_t>(2 * i)]);
  }
  return out;
}

CountSeries vc_series(VcFamily family, int k, int max_params) {
  CountSeries s;
  for (int m = 1; m <= max_params; ++m) {
    const auto inst = vc_instance(family, m);
    s.emplace_back(m, count_type_classes(inst.fragment, inst.params, k, 1));
  }
  return s;
}

}  // namespace twb
