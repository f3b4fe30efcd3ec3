#pragma once

#include <filesystem>
#include <string>

#include "twb/fragment.hpp"
#include "twb/glue.hpp"
#include "twb/partition.hpp"
#include "twb/term.hpp"

namespace twb {

// JSON documents for the workbench's inputs. Writers are canonical (nodes and
// tables sorted by id, keys sorted) so that files diff cleanly. Readers throw
// InputError naming the offending field, e.g. "nodes[2].level: bad ordinal
// literal 'w^'", or the line of a syntax error.

std::string shape_to_json(const Shape& s);
Shape shape_from_json(const std::string& text);

/// Sections: shape, mode, theta_bound, meet_closed, nodes [{id, sort?, level}],
/// order [[lo, hi]] (covering pairs), meet [[a, b, m]], suc [[x, y, s]],
/// pre [[x, p]], lim [[x, l]], g [[x, sort, v]], constants [[sort, i, c]].
std::string fragment_to_json(const Fragment& f);
Fragment fragment_from_json(const std::string& text);

/// {N, arity, default, entries: [[[i, j, ...], color], ...]}.
std::string coloring_to_json(const Coloring& c);
Coloring coloring_from_json(const std::string& text);

/// {fragment, arity, d: [[[ids...], color]], E: {id: class}, source, source_levels}.
std::string ptriple_to_json(const PTriple& p);
PTriple ptriple_from_json(const std::string& text);

/// Quantifier-free formula over `shape`. Terms: {"var": i, "sort": id},
/// {"const": id, "i": n}, {"meet": [t, t]}, {"suc": [t, t]}, {"pre": t},
/// {"lim": t}, {"g": t, "to": id}. Formulas: true, {"eq": [t, t]},
/// {"less": [t, t]}, {"in": t, "sort": id}, {"not": f}, {"and": [...]}, {"or": [...]}.
Formula formula_from_json(const std::string& text, const Shape& shape);

/// {shape, inner: [ids], base, boundary: {id: fragment}, connectors: {id: {from: to}}}.
/// Fragments are inline objects or paths, resolved against `dir`.
GlueSpec glue_spec_from_json(const std::string& text, const std::filesystem::path& dir = {});

/// Whole file as a string; InputError when it cannot be read.
std::string read_text_file(const std::filesystem::path& p);

}  // namespace twb
