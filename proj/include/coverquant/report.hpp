#pragma once

// Shared front-end plumbing: loading root data from JSON config files and
// the acceptance suite (one pass/fail line per criterion), used both by the
// `acceptance` test binary and by `coverquant verify all`.

#include <iosfwd>

#include "coverquant/rootdatum.hpp"

namespace coverquant {

// Parse a root datum from the JSON config text with fields
//   I (rank or index list), dot, parity, X_rank, Y_rank, pairing,
//   embed_X, embed_Y.
// Throws std::runtime_error with a readable message on malformed input.
RootDatum datum_from_json(const std::string& json_text);

// Resolve a --datum argument: a builtin name ("osp(1|2)", "osp(1|4)") or a
// path to a JSON config file.
RootDatum resolve_datum(const std::string& name_or_path);

// Run the acceptance suite.  `data_dir` must contain the higher-rank
// canonical basis data files (osp1-4_cb.json).  Prints one line per
// criterion to `out`; returns the number of failed criteria.
int run_acceptance(const std::string& data_dir, std::ostream& out);

}  // namespace coverquant
