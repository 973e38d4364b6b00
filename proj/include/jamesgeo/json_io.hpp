#pragma once

// JSON interchange:
//   vector      {"entries": [[index, value], ...]}
//   functional  {"kind": "dual", "entries": [[index, value], ...]}
//   direct sum  [{"p": value, "vector": <vector>}, ...]
//   pair        {"x": <vector>, "y": <vector>}
//   graph map   {"k": k, "ground_set": [...], "images": [{"vertex": [...], "image": <direct sum>}]}
// Parse errors name the offending field path.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "jamesgeo/core.hpp"
#include "jamesgeo/dual_norms.hpp"
#include "jamesgeo/kr_graphs.hpp"
#include "jamesgeo/midpoint.hpp"
#include "jamesgeo/pvar_norm.hpp"

namespace jamesgeo::io {

using Json = nlohmann::ordered_json;

class JsonError : public std::runtime_error {
 public:
  JsonError(const std::string& field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Reads and parses a file; syntax errors are reported against `<file>`.
Json read_file(const std::string& path);

SeqVector vector_from_json(const Json& j, const std::string& field = "$");
DualFunctional functional_from_json(const Json& j, const std::string& field = "$");
DirectSumVector direct_sum_from_json(const Json& j, const std::string& field = "$");
std::pair<SeqVector, SeqVector> pair_from_json(const Json& j, const std::string& field = "$");
GraphMap graph_map_from_json(const Json& j, const std::string& field = "$");

Json to_json(const SeqVector& x);
Json to_json(const DualFunctional& f);
Json to_json(const DirectSumVector& v);
Json to_json(const GraphVertex& v);
Json to_json(const GraphMap& gm);

Json to_json(const NormResult& r);
Json to_json(const DualNormResult& r);
Json to_json(const PartitionResult& r);
Json to_json(const PrimalNormResult& r);
Json to_json(const BlockRatioReport& r);
Json to_json(const SuperadditivityReport& r);
Json to_json(const PSubadditivityReport& r);
Json to_json(const MembershipResult& r);
Json to_json(const MidpointReport& r);
Json to_json(const ProbeReport& r);
Json to_json(const LipschitzResult& r);
Json to_json(const DisplacementResult& r);
Json to_json(const RamseyResult& r);
Json to_json(const GrowthTable& t);
Json to_json(const SumDemoTable& t);

std::string growth_csv(const GrowthTable& t);
std::string sumdemo_csv(const SumDemoTable& t);

}  // namespace jamesgeo::io
