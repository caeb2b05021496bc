#ifndef SUBEQLAB_SOLUTIONS_HPP
#define SUBEQLAB_SOLUTIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subeqlab/jet.hpp"
#include "subeqlab/subeq.hpp"
#include "subeqlab/wp.hpp"

namespace subeqlab {

struct near_singularity : std::domain_error {
    near_singularity() : std::domain_error("evaluation point too close to a singularity") {}
};

struct build_error : std::runtime_error {
    explicit build_error(const std::string& m) : std::runtime_error(m) {}
};

enum class Family { S3a, S3b, S2A, S2B, S1, none };

std::string family_name(Family f);

// ---------------------------------------------------------------------------
// Closed forms

/// 1/(u - e0) = (pe'(z-z0; 0, g3) - A)/N1  (binomial Briot-Bouquet case).
struct EllipticBinomial {
    cd e0, g3, N1, A;
    cd z0;
    std::optional<Cyclo> e0_exact, g3_exact, N1_exact, A_exact;
};

/// u recovered from w = 2 k1/e0 + A/(pe - B) through the birational map
/// u = (-3 a w w' - e0 w^3 + 6 k1 w^2 + 2 e0) / (2 (w^3 + 1)).
struct EllipticBB {
    cd a, k1, e0, g2, g3, A, B;
    cd z0;
    std::optional<Cyclo> k1_exact, e0_exact, g2_exact, g3_exact, A_exact, B_exact;
};

/// u = C + sum_i r_i / (e^{k (z - z0)} - Z_i).
struct ExpTerm {
    cd r, Z;
};
struct ExpRational {
    cd k, C;
    cd z0;
    std::vector<ExpTerm> terms;
};

/// u = C + sum_i r_i / (z - z0 - s_i).
struct RationalTerm {
    cd r, s;
};
struct RationalForm {
    cd C;
    cd z0;
    std::vector<RationalTerm> poles;
    std::optional<Cyclo> C_exact;
};

struct ClosedForm {
    Family family = Family::none;
    std::variant<EllipticBinomial, EllipticBB, ExpRational, RationalForm> form;
    std::vector<std::string> notes;
};

// ---------------------------------------------------------------------------
// Classification

struct Classification {
    Family primary = Family::none;
    std::vector<Family> all;  // every family matched, most specific first
    // family parameters, exact (meaning depends on primary):
    std::optional<Cyclo> k1, k5sq, k6, bsq, b, b1, b0;
    std::vector<std::string> notes;
};

/// Exact test of the instance against the Theorem-1 families, precedence
/// S3b > S3a > S2A > S2B > S1 when several match degenerately.
Classification classify_family(const OdeInstance& ode);

// ---------------------------------------------------------------------------
// Construction / evaluation / verification

struct BuildOptions {
    std::optional<Cyclo> e0;  // exact root of the S3 cubic, if the caller has one
    cd z0 = 0.0;
    double tol = 1e-9;     // branch choices are gated on verification at this tol
    int points = 20;
    std::uint64_t seed = 1;
};

/// Builds the explicit solution for the classified family.  Where a formula
/// admits a sign or branch choice the candidate passing numeric verification
/// is selected; the choice is recorded in the form's notes.
ClosedForm build_closed_form(const OdeInstance& ode, const Classification& cls,
                             const std::optional<FitReport>& fit = std::nullopt,
                             const BuildOptions& opts = {});

struct Derivs {
    cd u, u1, u2, u3;
};

/// Value and first three derivatives at z, all analytic (jet arithmetic).
/// Throws near_singularity close to a pole of the form.
Derivs eval_closed_form(const ClosedForm& cf, cd z);

struct VerificationReport {
    std::vector<cd> points;
    double max_rel_ode_residual = 0;
    double max_rel_subeq_residual = 0;
    bool passed = false;
    std::vector<std::string> notes;
};

VerificationReport verify_numeric(const ClosedForm& cf, const OdeInstance& ode,
                                  const Subequation* s, const std::vector<cd>& points,
                                  double tol);

/// Deterministic sample points in the annulus 0.05 <= |z - z0| <= 0.4,
/// skipping points that fall near singularities of cf.
std::vector<cd> sample_points(const ClosedForm& cf, int count, std::uint64_t seed);

struct PoleInfo {
    cd z;
    cd residue;
};

/// The `count` poles of cf nearest z0, with residues from small contour
/// integrals.  For elliptic forms the poles are located by a grid + Newton
/// search inside the pe series disk.
std::vector<PoleInfo> find_poles(const ClosedForm& cf, int count = 3);

}  // namespace subeqlab

#endif
