#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fschubert/dual.hpp"

namespace fschubert {

using Json = nlohmann::json;

struct RunOptions {
    std::optional<int> trunc;  // overrides the job's "trunc"
    unsigned threads = 1;
    bool verify_representatives = false;
    bool timing = false;
    std::filesystem::path base_dir;  // class files are resolved against it
};

/// Everything a job needs, built once from the descriptive part of a job.
struct Setup {
    RootDatumPtr rd;
    WeylGroupPtr W;
    FglPtr F;
    AlgebraPtr S;
    ContextPtr ctx;
    std::shared_ptr<Dual> dual;
    int N = 0;
    Json echo;  // resolved configuration, including the defaulted N
};

/// N = #Σ⁻ + ℓ(w₀) + 2.
int default_truncation(const RootDatum& rd);

RingPtr parse_ring(const Json& j);
RootDatumPtr parse_root_datum(const Json& job);
Setup build_setup(const Json& job, const RunOptions& opts);

// Serialization.  Words are 1-based; coefficients are decimal strings.
Json word_to_json(const std::vector<int>& word);
std::vector<int> word_from_json(const Json& j, std::size_t rank);
Parabolic parabolic_from_json(const Json& j, std::size_t rank);
Json parabolic_to_json(Parabolic xi);
Json series_to_json(const Series& s);
Series series_from_json(const Json& j, const FormalGroupAlgebra& S);
Json qelem_to_json(const QElem& q, const Context& ctx);
Json qwelem_to_json(const QWElem& z, const Context& ctx);
Json class_to_json(const DualElem& f, const Dual& D);
Json class_to_json(const ParabolicDualElem& g, const Dual& D);
/// Parses a serialized class; the result is in the Borel model when
/// "model" is "borel", otherwise in the parabolic model.
ParabolicDualElem class_from_json(const Json& j, const Dual& D);

/// Pretty JSON with sorted keys; arrays without objects that fit on one
/// line are kept inline.
std::string dump_canonical(const Json& j);

/// Runs one job and returns the output document.
Json run_job(const Json& job, const RunOptions& opts);

/// The invariant suite behind the "verify" command.
Json run_verify(const Setup& setup, const RunOptions& opts);

/// 2 validation, 3 arithmetic or precision, 4 resource, 1 otherwise.
int exit_code_for(const std::exception& e);

} // namespace fschubert
