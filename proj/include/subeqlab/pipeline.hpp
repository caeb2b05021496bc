#ifndef SUBEQLAB_PIPELINE_HPP
#define SUBEQLAB_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subeqlab/residues.hpp"
#include "subeqlab/solutions.hpp"

namespace subeqlab {

struct config_error : std::invalid_argument {
    explicit config_error(const std::string& m) : std::invalid_argument(m) {}
};

struct PipelineConfig {
    OdeInstance ode;
    int depth = 24;
    std::vector<int> degrees = {1, 2, 3};
    int kmax = 4;
    int nmax = 10;
    double tol = 1e-9;
    int points = 20;
    std::uint64_t seed = 1;
    std::optional<Cyclo> e0;
    cd z0 = 0.0;

    /// Throws config_error when an invariant is violated (a != 0, degrees
    /// within {1,2,3}, depth >= 2 max(degrees) + 10, tol > 0, points > 0).
    void validate() const;
};

struct BranchSummary {
    Cyclo residue;
    LaurentSeries series;
};

struct PipelineReport {
    PipelineConfig cfg;
    std::vector<BranchSummary> branches;
    Poly indicial;
    FuchsReport fuchs;
    std::vector<ResidueCondition> violated_conditions;
    EllipticFamily elliptic = EllipticFamily::none;
    std::map<int, FitReport> fits;  // keyed by degree
    Classification classification;
    std::optional<ClosedForm> closed_form;
    std::optional<std::string> build_failure;
    std::optional<VerificationReport> verification;
    int exit_status = 0;  // 0 ok, 1 verification/build failed
};

/// Runs the full chain expand -> indices -> residue-conditions -> fit ->
/// classify -> solve -> verify.  Stage failures are recorded in the report
/// and later stages still run where meaningful.
PipelineReport run_pipeline(const PipelineConfig& cfg);

enum class ReportFormat { json, text };

/// Serializes the report; the JSON form is schema-versioned ("schema": 1)
/// and byte-identical for identical configs.
std::string emit_report(const PipelineReport& r, ReportFormat format);

// --- JSON building blocks shared with the CLI subcommands -------------------
// Exactness tagging convention: exact values are {"exact": "<string>"},
// floating-point values are {"float": [re, im]}.

nlohmann::ordered_json json_exact(const Cyclo& x);
nlohmann::ordered_json json_float(cd x);
nlohmann::ordered_json json_series(const LaurentSeries& s);
nlohmann::ordered_json json_poly(const Poly& p);
nlohmann::ordered_json json_fuchs(const FuchsReport& f);
nlohmann::ordered_json json_conditions(const std::vector<ResidueCondition>& cs);
nlohmann::ordered_json json_subequation(const Subequation& s);
nlohmann::ordered_json json_fit(const FitReport& f);
nlohmann::ordered_json json_classification(const Classification& c);
nlohmann::ordered_json json_closed_form(const ClosedForm& cf);
nlohmann::ordered_json json_verification(const VerificationReport& v);
nlohmann::ordered_json json_ode(const OdeInstance& ode);

}  // namespace subeqlab

#endif
