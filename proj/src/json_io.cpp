#include "jamesgeo/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace jamesgeo::io {

namespace {

const Json& member(const Json& j, const std::string& field, const char* key) {
  if (!j.is_object()) throw JsonError(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw JsonError(field + "." + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw JsonError(field, "expected a number");
  return j.get<double>();
}

Index index(const Json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<Index>();
  if (j.is_number_integer()) {
    if (j.get<long long>() >= 0) return static_cast<Index>(j.get<long long>());
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0.0 && v == std::floor(v) && v < 9.0e15) return static_cast<Index>(v);
  }
  throw JsonError(field, "expected a natural number index");
}

std::vector<std::pair<Index, double>> entries_from_json(const Json& j, const std::string& field) {
  const Json& e = member(j, field, "entries");
  const std::string ef = field + ".entries";
  if (!e.is_array()) throw JsonError(ef, "expected an array of [index, value] pairs");
  std::vector<std::pair<Index, double>> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string f = ef + "[" + std::to_string(i) + "]";
    if (!e[i].is_array() || e[i].size() != 2) throw JsonError(f, "expected [index, value]");
    const double v = number(e[i][1], f + "[1]");
    if (!std::isfinite(v)) throw JsonError(f + "[1]", "value is not finite");
    out.emplace_back(index(e[i][0], f + "[0]"), v);
  }
  return out;
}

std::string kind_of(const Json& j, const std::string& field) {
  if (!j.is_object()) throw JsonError(field, "expected an object");
  auto it = j.find("kind");
  if (it == j.end()) return "primal";
  if (!it->is_string()) throw JsonError(field + ".kind", "expected a string");
  return it->get<std::string>();
}

template <class Seq>
Json entries_json(const Seq& s) {
  Json e = Json::array();
  for (const auto& [i, v] : s.entries()) e.push_back(Json::array({i, v}));
  return e;
}

Json optional_vertex(const std::optional<GraphVertex>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

std::string fmt(double v) {
  // shortest round-trip representation, as in the JSON output
  return Json(v).dump();
}

}  // namespace

JsonError::JsonError(const std::string& field, const std::string& what)
    : std::runtime_error(field + ": " + what), field_(field) {}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonError(path, std::string("malformed JSON: ") + e.what());
  }
}

SeqVector vector_from_json(const Json& j, const std::string& field) {
  const std::string kind = kind_of(j, field);
  if (kind != "primal") throw JsonError(field + ".kind", "expected a vector, got kind '" + kind + "'");
  return SeqVector(entries_from_json(j, field));
}

DualFunctional functional_from_json(const Json& j, const std::string& field) {
  const std::string kind = kind_of(j, field);
  if (kind != "dual") throw JsonError(field + ".kind", "expected \"dual\" for a functional");
  return DualFunctional(entries_from_json(j, field));
}

DirectSumVector direct_sum_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw JsonError(field, "expected a nonempty array of components");
  std::vector<DirectSumComponent> comps;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const double p = number(member(j[i], f, "p"), f + ".p");
    if (!(p > 1.0) || !std::isfinite(p)) throw JsonError(f + ".p", "exponent must be > 1");
    comps.push_back({Exponent(p), vector_from_json(member(j[i], f, "vector"), f + ".vector")});
  }
  return DirectSumVector(std::move(comps));
}

std::pair<SeqVector, SeqVector> pair_from_json(const Json& j, const std::string& field) {
  return {vector_from_json(member(j, field, "x"), field + ".x"),
          vector_from_json(member(j, field, "y"), field + ".y")};
}

GraphMap graph_map_from_json(const Json& j, const std::string& field) {
  const Json& kj = member(j, field, "k");
  const std::size_t k = index(kj, field + ".k");
  const Json& mj = member(j, field, "ground_set");
  if (!mj.is_array()) throw JsonError(field + ".ground_set", "expected an array");
  std::vector<Index> m;
  for (std::size_t i = 0; i < mj.size(); ++i) {
    m.push_back(index(mj[i], field + ".ground_set[" + std::to_string(i) + "]"));
  }
  const Json& ij = member(j, field, "images");
  if (!ij.is_array()) throw JsonError(field + ".images", "expected an array");
  std::map<GraphVertex, DirectSumVector> table;
  for (std::size_t i = 0; i < ij.size(); ++i) {
    const std::string f = field + ".images[" + std::to_string(i) + "]";
    const Json& vj = member(ij[i], f, "vertex");
    if (!vj.is_array()) throw JsonError(f + ".vertex", "expected an array");
    std::vector<Index> idx;
    for (std::size_t t = 0; t < vj.size(); ++t) {
      idx.push_back(index(vj[t], f + ".vertex[" + std::to_string(t) + "]"));
    }
    if (idx.size() != k) throw JsonError(f + ".vertex", "expected " + std::to_string(k) + " indices");
    try {
      GraphVertex v(std::move(idx));
      DirectSumVector img = direct_sum_from_json(member(ij[i], f, "image"), f + ".image");
      if (!table.emplace(std::move(v), std::move(img)).second) {
        throw JsonError(f + ".vertex", "duplicate vertex");
      }
    } catch (const PreconditionError& e) {
      throw JsonError(f, e.what());
    }
  }
  try {
    return GraphMap(k, std::move(m), std::move(table));
  } catch (const PreconditionError& e) {
    throw JsonError(field, e.what());
  }
}

Json to_json(const SeqVector& x) { return Json{{"entries", entries_json(x)}}; }

Json to_json(const DualFunctional& f) {
  return Json{{"kind", "dual"}, {"entries", entries_json(f)}};
}

Json to_json(const DirectSumVector& v) {
  Json out = Json::array();
  for (const auto& c : v.components()) {
    out.push_back(Json{{"p", c.exponent.p()}, {"vector", to_json(c.vector)}});
  }
  return out;
}

Json to_json(const GraphVertex& v) { return Json(v.indices()); }

Json to_json(const GraphMap& gm) {
  Json images = Json::array();
  for (const auto& v : gm.vertices()) {
    images.push_back(Json{{"vertex", to_json(v)}, {"image", to_json(gm(v))}});
  }
  return Json{{"k", gm.k()}, {"ground_set", gm.ground_set()}, {"images", images}};
}

Json to_json(const NormResult& r) { return Json{{"value", r.value}, {"witness", r.witness}}; }

Json to_json(const DualNormResult& r) {
  return Json{{"lower", r.lower},
              {"upper", r.upper},
              {"gap", r.gap()},
              {"iterations", r.iterations},
              {"witness", to_json(r.witness)}};
}

Json to_json(const PartitionResult& r) {
  return Json{{"lower", r.value},
              {"upper", r.upper},
              {"value", r.value},
              {"cuts", r.cuts},
              {"block_values", r.block_values}};
}

Json to_json(const PrimalNormResult& r) {
  Json atoms = Json::array();
  for (const auto& a : r.decomposition) {
    atoms.push_back(Json{{"weight", a.weight}, {"bound", a.bound}, {"vector", to_json(a.vector)}});
  }
  return Json{{"lower", r.lower},
              {"upper", r.upper},
              {"gap", r.gap()},
              {"iterations", r.iterations},
              {"witness", to_json(r.witness)},
              {"decomposition", atoms}};
}

Json to_json(const BlockRatioReport& r) {
  return Json{{"norm_of_sum_pow", r.norm_of_sum_pow},
              {"sum_of_norm_pows", r.sum_of_norm_pows},
              {"ratio", r.ratio},
              {"bound", r.bound},
              {"within_bound", r.within_bound}};
}

Json to_json(const SuperadditivityReport& r) {
  return Json{{"lhs", r.lhs},
              {"rhs", r.rhs},
              {"tolerance", r.tolerance},
              {"passed", r.passed},
              {"first", to_json(r.first)},
              {"second", to_json(r.second)},
              {"sum", to_json(r.sum)}};
}

Json to_json(const PSubadditivityReport& r) {
  auto bounds = [](const PrimalNormResult& b) { return Json{{"lower", b.lower}, {"upper", b.upper}}; };
  return Json{{"lhs", r.lhs},
              {"rhs", r.rhs},
              {"tau_cert", r.tau_cert},
              {"passed", r.passed},
              {"x", bounds(r.first)},
              {"y", bounds(r.second)},
              {"sum", bounds(r.sum)}};
}

Json to_json(const MembershipResult& r) {
  return Json{{"member", r.member}, {"dist_x", r.dist_x}, {"dist_y", r.dist_y}, {"radius", r.radius}};
}

Json to_json(const MidpointReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back(Json{{"check", x.check}, {"value", x.value}, {"bound", x.bound}, {"z", to_json(x.z)}});
  }
  return Json{{"passed", r.passed()},
              {"samples_tested", r.samples_tested},
              {"n_used", r.n_used},
              {"theta", r.theta},
              {"slack", r.slack},
              {"v_norm", r.v_norm},
              {"seed", r.seed},
              {"violations", v}};
}

Json to_json(const ProbeReport& r) {
  Json out{{"map", r.map}, {"inconclusive", r.inconclusive}};
  if (!r.inconclusive) {
    out["x"] = to_json(r.x);
    out["y"] = to_json(r.y);
  }
  out["distance"] = r.distance;
  out["stretch"] = r.stretch;
  out["lip_estimate"] = r.lip_estimate;
  out["pairs_above_threshold"] = r.pairs_above_threshold;
  out["samples"] = r.samples;
  out["failures"] = r.failures;
  out["failure_rate"] = r.failure_rate;
  out["observational"] = true;
  return out;
}

Json to_json(const LipschitzResult& r) {
  return Json{{"value", r.value},
              {"a", optional_vertex(r.a)},
              {"b", optional_vertex(r.b)},
              {"pairs", r.pairs},
              {"bound_side", r.bound_side}};
}

Json to_json(const DisplacementResult& r) {
  return Json{{"min_value", r.min_value},
              {"a", optional_vertex(r.a)},
              {"b", optional_vertex(r.b)},
              {"lipschitz", r.lipschitz},
              {"bound", r.bound},
              {"within_bound", r.within_bound},
              {"interlaced_pairs", r.interlaced_pairs},
              {"bound_side", r.bound_side},
              {"observational", true},
              {"note", "finite-support images only; the constant-sequence direction of the bidual is not represented"}};
}

Json to_json(const RamseyResult& r) {
  return Json{{"subset", r.subset}, {"diameter", r.diameter}, {"exact", r.exact}};
}

Json to_json(const GrowthTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(Json{{"k", r.k}, {"p_norm", r.p_norm}, {"q_norm", r.q_norm}, {"ratio", r.ratio}});
  }
  return Json{{"p", t.p}, {"q", t.q}, {"slope", t.slope}, {"expected", t.expected}, {"rows", rows}};
}

Json to_json(const SumDemoTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(Json{{"k", r.k},
                        {"component_bound", r.component_bound},
                        {"separation", r.separation},
                        {"epsilon", r.epsilon},
                        {"crossed", r.crossed}});
  }
  return Json{{"p", t.p},       {"q", t.q},         {"r", t.r},
              {"theta", t.theta}, {"c", t.c},       {"gamma", t.gamma},
              {"epsilon", t.epsilon}, {"crossing_k", t.crossing_k}, {"rows", rows}};
}

std::string growth_csv(const GrowthTable& t) {
  std::ostringstream out;
  out << "# p=" << fmt(t.p) << " q=" << fmt(t.q) << " slope=" << fmt(t.slope)
      << " expected=" << fmt(t.expected) << "\n";
  out << "k,p_norm,q_norm,ratio\n";
  for (const auto& r : t.rows) {
    out << r.k << "," << fmt(r.p_norm) << "," << fmt(r.q_norm) << "," << fmt(r.ratio) << "\n";
  }
  return out.str();
}

std::string sumdemo_csv(const SumDemoTable& t) {
  std::ostringstream out;
  out << "# p=" << fmt(t.p) << " q=" << fmt(t.q) << " r=" << fmt(t.r) << " theta=" << fmt(t.theta)
      << " C=" << fmt(t.c) << " gamma=" << fmt(t.gamma) << " epsilon=" << fmt(t.epsilon)
      << " crossing_k=" << fmt(t.crossing_k) << "\n";
  out << "k,component_bound,separation,epsilon,component_bound_theta,separation_theta,"
         "epsilon_theta,crossed\n";
  for (const auto& r : t.rows) {
    out << r.k << "," << fmt(r.component_bound) << "," << fmt(r.separation) << ","
        << fmt(r.epsilon) << "," << fmt(r.component_bound * t.theta) << ","
        << fmt(r.separation * t.theta) << "," << fmt(r.epsilon * t.theta) << ","
        << (r.crossed ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace jamesgeo::io
