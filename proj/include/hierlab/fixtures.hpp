#pragma once

#include <filesystem>
#include <string>

#include "hierlab/io.hpp"

namespace hierlab {

/// Deterministic stand-ins for the standard citation benchmarks, used when
/// the raw datasets are not on disk: node/edge/class counts, edge homophily
/// and the heavy-tailed attachment structure match the published statistics;
/// features are class-correlated sparse bags of words.
///
/// Recognized names: "cora" (2708 nodes, 5429 edges, 7 classes, H=0.83),
/// "citeseer" (3327 nodes, 4732 edges, 6 classes, H=0.72).
Dataset make_citation_fixture(const std::string& name);

/// Writes a dataset in the raw citation format (`<name>.content` +
/// `<name>.cites`) with synthetic string ids.
void write_citation_raw(const std::filesystem::path& dir, const std::string& name,
                        const Dataset& ds);

/// Loads `data/<name>/<name>.content`+`.cites` when present under `data_root`,
/// otherwise the CSV layout `data_root/<name>/edges.csv`, otherwise falls back
/// to make_citation_fixture.
Dataset load_benchmark(const std::string& name,
                       const std::filesystem::path& data_root);

}  // namespace hierlab
