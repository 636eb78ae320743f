#pragma once

// JSON model files (schema "qmc-model/1") and CLI density specs.
//
// A model file is a UTF-8 JSON document:
//   {
//     "schema": "qmc-model/1",
//     "name": "...",                  // optional, defaults to file stem
//     "vertices": n,                  // 0-based vertex indices
//     "internal_dim": k,
//     "params": {"p": 0.5, ...},      // optional real bindings
//     "maps": [
//       {"from": j, "to": i, "kraus": [ [[ [re,im], ... ], ...], ... ]},
//       ...
//     ]
//   }
// Each matrix is k x k, row-major; each entry is a [re, im] pair whose
// elements are numbers or expression strings (see expr.hpp). Pairs
// (from, to) not listed default to the zero map.

#include <map>
#include <optional>
#include <string>

#include "qmc/model.hpp"
#include "qmc/stationary.hpp"

namespace qmc {

// File/schema/expression problems: the caller should treat these as usage
// errors (CLI exit code 2).
class ModelIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The file parsed but the evaluated model is not trace preserving.
class ModelValidationError : public std::runtime_error {
 public:
  ModelValidationError(std::string message, ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct LoadedModel {
  QmcModel model;
  std::string name;
  std::string digest;                    // FNV-1a 64 over the raw file bytes
  std::map<std::string, double> params;  // effective bindings used
};

LoadedModel parse_model(const std::string& path,
                        const std::map<std::string, double>& overrides = {});

// Same pipeline for in-memory documents (used by tests).
LoadedModel parse_model_text(const std::string& text, const std::string& name,
                             const std::map<std::string, double>& overrides = {});

std::string fnv1a64_hex(const std::string& bytes);

// Density specs: "mixed" (I_k/k), "basis:a", "file:<path>", "stationary:i".
struct DensitySpec {
  enum class Kind { mixed, basis, file, stationary };
  Kind kind = Kind::mixed;
  int index = 0;     // basis level or stationary vertex
  std::string path;  // file density
};

DensitySpec parse_density_spec(const std::string& text);

// Resolves a spec to a k x k density block. "stationary:i" needs the chain's
// fixed point; pass it when available, else the spec is rejected.
ComplexMatrix resolve_density(const DensitySpec& spec, const QmcModel& model,
                              const StationaryResult* pi = nullptr);

}  // namespace qmc
