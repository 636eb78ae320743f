#include "qmc/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qmc/expr.hpp"

namespace qmc {

namespace {

using nlohmann::json;

double eval_entry_component(const json& j, const std::map<std::string, double>& bindings,
                            const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      const ExprPtr e = parse_expr(j.get<std::string>());
      return eval_expr(*e, bindings);
    } catch (const std::exception& ex) {
      throw ModelIoError(where + ": " + ex.what());
    }
  }
  throw ModelIoError(where + ": entry component must be a number or string");
}

Cx eval_entry(const json& j, const std::map<std::string, double>& bindings,
              const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ModelIoError(where + ": entry must be a [re, im] pair");
  return Cx(eval_entry_component(j[0], bindings, where),
            eval_entry_component(j[1], bindings, where));
}

LoadedModel parse_document(const json& doc, const std::string& fallback_name,
                           const std::string& digest,
                           const std::map<std::string, double>& overrides) {
  if (!doc.is_object()) throw ModelIoError("model document must be a JSON object");
  if (!doc.contains("schema") || doc["schema"] != "qmc-model/1")
    throw ModelIoError("missing or unsupported schema (expected \"qmc-model/1\")");
  for (const char* key : {"vertices", "internal_dim", "maps"})
    if (!doc.contains(key))
      throw ModelIoError(std::string("missing required field \"") + key + "\"");

  const int n = doc["vertices"].get<int>();
  const int k = doc["internal_dim"].get<int>();
  if (n < 1 || k < 1) throw ModelIoError("vertices and internal_dim must be >= 1");

  std::map<std::string, double> bindings;
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw ModelIoError("params must be an object");
    for (const auto& [key, value] : doc["params"].items()) {
      if (!value.is_number()) throw ModelIoError("param \"" + key + "\" must be a number");
      bindings[key] = value.get<double>();
    }
  }
  for (const auto& [key, value] : overrides) bindings[key] = value;

  QmcModel model;
  model.n = n;
  model.k = k;
  model.name = doc.contains("name") ? doc["name"].get<std::string>() : fallback_name;
  model.maps.assign(static_cast<size_t>(n), std::vector<KrausList>(static_cast<size_t>(n)));

  if (!doc["maps"].is_array()) throw ModelIoError("maps must be an array");
  std::vector<bool> seen(static_cast<size_t>(n) * n, false);
  for (const auto& entry : doc["maps"]) {
    if (!entry.is_object() || !entry.contains("from") || !entry.contains("to") ||
        !entry.contains("kraus"))
      throw ModelIoError("each map needs {from, to, kraus}");
    const int from = entry["from"].get<int>();
    const int to = entry["to"].get<int>();
    if (from < 0 || from >= n || to < 0 || to >= n)
      throw ModelIoError("map vertex index out of range (vertices are 0-based)");
    const size_t slot = static_cast<size_t>(to) * n + from;
    if (seen[slot])
      throw ModelIoError("duplicate map for (from=" + std::to_string(from) +
                         ", to=" + std::to_string(to) + ")");
    seen[slot] = true;
    KrausList& target = model.maps[static_cast<size_t>(to)][static_cast<size_t>(from)];

    if (!entry["kraus"].is_array()) throw ModelIoError("kraus must be an array of matrices");
    KrausList kraus;
    int mi = 0;
    for (const auto& mat : entry["kraus"]) {
      const std::string where = "map (" + std::to_string(from) + "->" +
                                std::to_string(to) + ") kraus[" + std::to_string(mi) + "]";
      if (!mat.is_array() || static_cast<int>(mat.size()) != k)
        throw ModelIoError(where + ": matrix must have " + std::to_string(k) + " rows");
      ComplexMatrix V(k, k);
      for (int r = 0; r < k; ++r) {
        if (!mat[r].is_array() || static_cast<int>(mat[r].size()) != k)
          throw ModelIoError(where + ": row " + std::to_string(r) + " must have " +
                             std::to_string(k) + " entries");
        for (int c = 0; c < k; ++c)
          V(r, c) = eval_entry(mat[r][c], bindings,
                               where + " entry (" + std::to_string(r) + "," +
                                   std::to_string(c) + ")");
      }
      kraus.push_back(std::move(V));
      ++mi;
    }
    target = std::move(kraus);
  }

  const ValidationReport report = validate(model);
  if (!report.ok) {
    std::ostringstream msg;
    msg << "model is not trace preserving (tolerance " << report.tolerance << "):";
    for (int j = 0; j < n; ++j)
      msg << " column " << j << " residual " << report.column_residuals[j] << ";";
    throw ModelValidationError(msg.str(), report);
  }

  LoadedModel loaded;
  loaded.model = std::move(model);
  loaded.name = loaded.model.name;
  loaded.digest = digest;
  loaded.params = std::move(bindings);
  return loaded;
}

}  // namespace

ModelValidationError::ModelValidationError(std::string message, ValidationReport report)
    : std::runtime_error(std::move(message)), report_(std::move(report)) {}

std::string fnv1a64_hex(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LoadedModel parse_model(const std::string& path,
                        const std::map<std::string, double>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_model_text(text, std::filesystem::path(path).stem().string(), overrides);
}

LoadedModel parse_model_text(const std::string& text, const std::string& name,
                             const std::map<std::string, double>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ModelIoError(std::string("JSON parse error: ") + ex.what());
  }
  return parse_document(doc, name, fnv1a64_hex(text), overrides);
}

DensitySpec parse_density_spec(const std::string& text) {
  DensitySpec spec;
  if (text == "mixed") {
    spec.kind = DensitySpec::Kind::mixed;
    return spec;
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ModelIoError("unknown density spec \"" + text +
                       "\" (use mixed | basis:a | file:<path> | stationary:i)");
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (head == "file") {
    spec.kind = DensitySpec::Kind::file;
    spec.path = rest;
    return spec;
  }
  if (head == "basis" || head == "stationary") {
    spec.kind = head == "basis" ? DensitySpec::Kind::basis : DensitySpec::Kind::stationary;
    try {
      size_t used = 0;
      spec.index = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ModelIoError("density spec \"" + text + "\": index must be an integer");
    }
    return spec;
  }
  throw ModelIoError("unknown density spec \"" + text +
                     "\" (use mixed | basis:a | file:<path> | stationary:i)");
}

ComplexMatrix resolve_density(const DensitySpec& spec, const QmcModel& model,
                              const StationaryResult* pi) {
  const int k = model.k;
  switch (spec.kind) {
    case DensitySpec::Kind::mixed:
      return maximally_mixed(k);
    case DensitySpec::Kind::basis: {
      if (spec.index < 0 || spec.index >= k)
        throw ModelIoError("basis index out of range [0, " + std::to_string(k) + ")");
      ComplexMatrix rho(k, k);
      rho(spec.index, spec.index) = 1.0;
      return rho;
    }
    case DensitySpec::Kind::stationary: {
      if (pi == nullptr)
        throw ModelIoError("stationary density spec needs a computed fixed point");
      if (spec.index < 0 || spec.index >= model.n)
        throw ModelIoError("stationary vertex out of range [0, " +
                           std::to_string(model.n) + ")");
      const ComplexMatrix& block = pi->pi.blocks[spec.index];
      Cx tr = 0.0;
      for (int a = 0; a < k; ++a) tr += block(a, a);
      if (std::abs(tr) < 1e-14)
        throw ModelIoError("stationary block has vanishing trace");
      return (1.0 / tr) * block;
    }
    case DensitySpec::Kind::file: {
      std::ifstream in(spec.path, std::ios::binary);
      if (!in) throw ModelIoError("cannot open density file: " + spec.path);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& ex) {
        throw ModelIoError(std::string("density JSON parse error: ") + ex.what());
      }
      if (!doc.is_array() || static_cast<int>(doc.size()) != k)
        throw ModelIoError("density file must hold a " + std::to_string(k) + "x" +
                           std::to_string(k) + " matrix");
      ComplexMatrix rho(k, k);
      for (int r = 0; r < k; ++r) {
        if (!doc[r].is_array() || static_cast<int>(doc[r].size()) != k)
          throw ModelIoError("density row " + std::to_string(r) + " must have " +
                             std::to_string(k) + " entries");
        for (int c = 0; c < k; ++c) {
          const json& cell = doc[r][c];
          if (cell.is_number()) {
            rho(r, c) = cell.get<double>();
          } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                     cell[1].is_number()) {
            rho(r, c) = Cx(cell[0].get<double>(), cell[1].get<double>());
          } else {
            throw ModelIoError("density entries must be numbers or [re, im] pairs");
          }
        }
      }
      const DensityCheck check = check_density(QmcDensity::point(1, k, 0, rho));
      if (!check.ok) {
        std::ostringstream msg;
        msg << "density file is not a density matrix (hermiticity "
            << check.hermiticity << ", min eigenvalue " << check.min_eigenvalue
            << ", trace deviation " << check.trace_deviation << ")";
        throw ModelIoError(msg.str());
      }
      return rho;
    }
  }
  throw ModelIoError("unreachable density kind");
}

}  // namespace qmc
