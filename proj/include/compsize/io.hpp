#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "compsize/asymptotics.hpp"
#include "compsize/degree_model.hpp"
#include "compsize/mc_oracle.hpp"
#include "compsize/size_dist.hpp"

namespace compsize {

// Shortest text form of v that parses back to the identical bits (%.17g).
// Every number this project writes goes through here, so emitted files are
// byte-identical across runs and parse back exactly.
std::string format_double(double v);

// Degree input, two interchangeable forms, auto-detected by first non-space
// byte ('{' selects JSON):
//   text: one "k value" pair per line, '#' starts a comment. Degrees may be
//         listed in any order; missing k get probability 0.
//   json: {"pmf": [u0, u1, ...], "tail": {"s": .., "beta": ..}?, "label": ..?,
//          "normalize": bool?}
// The text form cannot carry a tail annotation.
DegreeDistribution read_degree_file(const std::string& path);
DegreeDistribution parse_degree_text(std::istream& in, bool auto_normalize = true);
DegreeDistribution parse_degree_json(const nlohmann::json& j);
void write_degree_text(std::ostream& out, const DegreeDistribution& u);
nlohmann::json degree_json(const DegreeDistribution& u);

// Size series, CSV: a versioned comment, a column header, then one
// "n,w,log_w" row per size.
void write_size_series_csv(std::ostream& out, const ComponentSizeResult& r);
nlohmann::json size_series_json(const ComponentSizeResult& r);
// Reads either form back (bit-exact against what was written).
ComponentSizeResult read_size_series(const std::string& path);

nlohmann::json ensemble_json(const EnsembleEstimate& e);

// JSON carries the classification, the constants, and (when a horizon is
// given) the evaluated series. CSV puts classification and constants in
// header comments followed by "n,asymptote,log_asymptote" rows.
nlohmann::json asymptote_json(const AsymptoteModel& m, std::size_t horizon = 0);
void write_asymptote_csv(std::ostream& out, const AsymptoteModel& m, std::size_t horizon);

} // namespace compsize
