#include "subeqlab/pipeline.hpp"

#include <algorithm>
#include <sstream>

namespace subeqlab {

using nlohmann::ordered_json;

void PipelineConfig::validate() const {
    if (ode.a.is_zero()) throw config_error("invariant violated: a != 0");
    if (degrees.empty()) throw config_error("invariant violated: degrees nonempty");
    int mmax = 0;
    for (int d : degrees) {
        if (d < 1 || d > 3) throw config_error("invariant violated: degrees within {1,2,3}");
        mmax = std::max(mmax, d);
    }
    if (depth < 2 * mmax + 10)
        throw config_error("invariant violated: depth >= 2*max(degrees) + 10");
    if (!(tol > 0)) throw config_error("invariant violated: tol > 0");
    if (points <= 0) throw config_error("invariant violated: points > 0");
    if (kmax < 0 || nmax < 1) throw config_error("invariant violated: kmax >= 0, nmax >= 1");
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    PipelineReport rep;
    rep.cfg = cfg;

    // expand + indices
    for (const Cyclo& r : cfg.ode.residues()) {
        rep.branches.push_back({r, expand_laurent(cfg.ode, r, cfg.depth)});
    }
    rep.indicial = indicial_polynomial(cfg.ode, cfg.ode.a);
    rep.fuchs = check_fuchs_indices(rep.indicial);

    // residue conditions
    rep.violated_conditions = enumerate_conditions(cfg.ode, cfg.kmax, cfg.nmax);
    rep.elliptic = match_elliptic_families(cfg.ode);

    // fit per degree
    for (int m : cfg.degrees) rep.fits[m] = fit_subequation_auto(cfg.ode, m);

    // classify
    rep.classification = classify_family(cfg.ode);

    // solve + verify
    if (rep.classification.primary != Family::none) {
        std::optional<FitReport> fit;
        int m = 0;
        switch (rep.classification.primary) {
            case Family::S3a:
            case Family::S3b: m = 3; break;
            case Family::S2A:
            case Family::S2B: m = 2; break;
            default: m = 1; break;
        }
        if (auto it = rep.fits.find(m); it != rep.fits.end()) fit = it->second;

        BuildOptions opts;
        opts.e0 = cfg.e0;
        opts.z0 = cfg.z0;
        opts.tol = cfg.tol;
        opts.points = cfg.points;
        opts.seed = cfg.seed;
        try {
            rep.closed_form = build_closed_form(cfg.ode, rep.classification, fit, opts);
            const Subequation* sub = nullptr;
            if (fit && fit->status == FitStatus::fitted) sub = &*fit->subequation;
            std::vector<cd> pts = sample_points(*rep.closed_form, cfg.points, cfg.seed);
            rep.verification = verify_numeric(*rep.closed_form, cfg.ode, sub, pts, cfg.tol);
            if (!rep.verification->passed) rep.exit_status = 1;
        } catch (const build_error& e) {
            rep.build_failure = e.what();
            rep.exit_status = 1;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON building blocks

ordered_json json_exact(const Cyclo& x) { return ordered_json{{"exact", to_string(x)}}; }

ordered_json json_float(cd x) { return ordered_json{{"float", {x.real(), x.imag()}}}; }

ordered_json json_series(const LaurentSeries& s) {
    ordered_json coeffs = ordered_json::array();
    for (int e = s.lo; e <= s.hi; ++e) coeffs.push_back(to_string(s.coeff(e)));
    return ordered_json{{"lead", s.lo}, {"coeffs", std::move(coeffs)}};
}

ordered_json json_poly(const Poly& p) {
    ordered_json c = ordered_json::array();
    for (const Cyclo& x : p.c) c.push_back(to_string(x));
    return ordered_json{{"coeffs", std::move(c)}};
}

ordered_json json_fuchs(const FuchsReport& f) {
    return ordered_json{{"integer_roots", f.integer_roots},
                        {"has_nonneg_integer", f.has_nonneg_integer}};
}

ordered_json json_conditions(const std::vector<ResidueCondition>& cs) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : cs)
        arr.push_back(ordered_json{{"k", c.k}, {"n", c.n}, {"value", json_exact(c.value)}});
    return arr;
}

ordered_json json_subequation(const Subequation& s) {
    ordered_json terms = ordered_json::array();
    for (int k = 0; k <= s.m; ++k)
        for (int j = 0; j <= 2 * s.m - 2 * k; ++j)
            if (!s.at(j, k).is_zero())
                terms.push_back(
                    ordered_json{{"j", j}, {"k", k}, {"coeff", json_exact(s.at(j, k))}});
    return ordered_json{{"m", s.m}, {"terms", std::move(terms)}};
}

ordered_json json_fit(const FitReport& f) {
    ordered_json j;
    switch (f.status) {
        case FitStatus::fitted: j["status"] = "fitted"; break;
        case FitStatus::infeasible: j["status"] = "infeasible"; break;
        case FitStatus::underdetermined: j["status"] = "underdetermined"; break;
    }
    j["branches"] = f.branches;
    j["orders_checked"] = f.orders_checked;
    if (f.violated_order) j["violated_order"] = *f.violated_order;
    if (f.subequation) j["subequation"] = json_subequation(*f.subequation);
    return j;
}

ordered_json json_classification(const Classification& c) {
    ordered_json j;
    j["primary"] = family_name(c.primary);
    ordered_json all = ordered_json::array();
    for (Family f : c.all) all.push_back(family_name(f));
    j["all"] = std::move(all);
    ordered_json params;
    auto put = [&](const char* name, const std::optional<Cyclo>& v) {
        if (v) params[name] = json_exact(*v);
    };
    put("k1", c.k1);
    put("k5sq", c.k5sq);
    put("k6", c.k6);
    put("bsq", c.bsq);
    put("b", c.b);
    put("b1", c.b1);
    put("b0", c.b0);
    j["parameters"] = params.is_null() ? ordered_json::object() : params;
    j["notes"] = c.notes;
    return j;
}

namespace {

ordered_json json_param(cd value, const std::optional<Cyclo>& exact) {
    return exact ? json_exact(*exact) : json_float(value);
}

}  // namespace

ordered_json json_closed_form(const ClosedForm& cf) {
    ordered_json j;
    j["family"] = family_name(cf.family);
    if (const auto* f = std::get_if<EllipticBinomial>(&cf.form)) {
        j["type"] = "elliptic_binomial";
        j["e0"] = json_param(f->e0, f->e0_exact);
        j["g2"] = json_exact(Cyclo{});
        j["g3"] = json_param(f->g3, f->g3_exact);
        j["N1"] = json_param(f->N1, f->N1_exact);
        j["A"] = json_param(f->A, f->A_exact);
        j["z0"] = json_float(f->z0);
    } else if (const auto* f2 = std::get_if<EllipticBB>(&cf.form)) {
        j["type"] = "elliptic_birational";
        j["k1"] = json_param(f2->k1, f2->k1_exact);
        j["e0"] = json_param(f2->e0, f2->e0_exact);
        j["g2"] = json_param(f2->g2, f2->g2_exact);
        j["g3"] = json_param(f2->g3, f2->g3_exact);
        j["A"] = json_param(f2->A, f2->A_exact);
        j["B"] = json_param(f2->B, f2->B_exact);
        j["z0"] = json_float(f2->z0);
    } else if (const auto* f3 = std::get_if<ExpRational>(&cf.form)) {
        j["type"] = "exp_rational";
        j["k"] = json_float(f3->k);
        j["C"] = json_float(f3->C);
        j["z0"] = json_float(f3->z0);
        ordered_json terms = ordered_json::array();
        for (const auto& t : f3->terms)
            terms.push_back(ordered_json{{"r", json_float(t.r)}, {"Z", json_float(t.Z)}});
        j["terms"] = std::move(terms);
    } else if (const auto* f4 = std::get_if<RationalForm>(&cf.form)) {
        j["type"] = "rational";
        j["C"] = json_param(f4->C, f4->C_exact);
        j["z0"] = json_float(f4->z0);
        ordered_json poles = ordered_json::array();
        for (const auto& t : f4->poles)
            poles.push_back(ordered_json{{"r", json_float(t.r)}, {"s", json_float(t.s)}});
        j["poles"] = std::move(poles);
    }
    j["notes"] = cf.notes;
    return j;
}

ordered_json json_verification(const VerificationReport& v) {
    ordered_json pts = ordered_json::array();
    for (cd z : v.points) pts.push_back(json_float(z));
    return ordered_json{{"passed", v.passed},
                        {"max_rel_ode_residual", v.max_rel_ode_residual},
                        {"max_rel_subeq_residual", v.max_rel_subeq_residual},
                        {"points", std::move(pts)},
                        {"notes", v.notes}};
}

ordered_json json_ode(const OdeInstance& ode) {
    return ordered_json{{"a", json_exact(ode.a)},       {"c0", json_exact(ode.c0())},
                        {"c1", json_exact(ode.c1)},     {"c2", json_exact(ode.c2)},
                        {"c4", json_exact(ode.c4)},     {"c5", json_exact(ode.c5)},
                        {"c6", json_exact(ode.c6)},     {"c7", json_exact(ode.c7)}};
}

// ---------------------------------------------------------------------------
// Report emission

namespace {

const char* elliptic_name(EllipticFamily f) {
    switch (f) {
        case EllipticFamily::A: return "A";
        case EllipticFamily::B: return "B";
        case EllipticFamily::C: return "C";
        case EllipticFamily::none: return "none";
    }
    return "?";
}

ordered_json report_json(const PipelineReport& r) {
    ordered_json j;
    j["schema"] = 1;
    j["config"] = ordered_json{{"ode", json_ode(r.cfg.ode)},
                               {"depth", r.cfg.depth},
                               {"degrees", r.cfg.degrees},
                               {"kmax", r.cfg.kmax},
                               {"nmax", r.cfg.nmax},
                               {"tol", r.cfg.tol},
                               {"points", r.cfg.points},
                               {"seed", r.cfg.seed}};
    ordered_json branches = ordered_json::array();
    for (const auto& b : r.branches)
        branches.push_back(ordered_json{{"residue", json_exact(b.residue)},
                                        {"series", json_series(b.series)}});
    j["laurent"] = std::move(branches);
    j["indicial"] = json_poly(r.indicial);
    j["fuchs"] = json_fuchs(r.fuchs);
    j["residue_conditions"] = ordered_json{
        {"violated", json_conditions(r.violated_conditions)},
        {"elliptic_family", elliptic_name(r.elliptic)}};
    ordered_json fits;
    for (const auto& [m, f] : r.fits) fits["degree_" + std::to_string(m)] = json_fit(f);
    j["fits"] = fits.is_null() ? ordered_json::object() : fits;
    j["classification"] = json_classification(r.classification);
    if (r.closed_form) j["closed_form"] = json_closed_form(*r.closed_form);
    if (r.build_failure) j["build_failure"] = *r.build_failure;
    if (r.verification) j["verification"] = json_verification(*r.verification);
    j["exit_status"] = r.exit_status;
    return j;
}

std::string report_text(const PipelineReport& r) {
    std::ostringstream os;
    os << "ode: a = " << to_string(r.cfg.ode.a) << ", c0 = " << to_string(r.cfg.ode.c0())
       << ", c1 = " << to_string(r.cfg.ode.c1) << ", c2 = " << to_string(r.cfg.ode.c2)
       << ", c4 = " << to_string(r.cfg.ode.c4) << ", c5 = " << to_string(r.cfg.ode.c5)
       << ", c6 = " << to_string(r.cfg.ode.c6) << ", c7 = " << to_string(r.cfg.ode.c7) << "\n";
    os << "fuchs integer indices:";
    for (long x : r.fuchs.integer_roots) os << " " << x;
    os << "\n";
    os << "violated residue conditions: " << r.violated_conditions.size();
    for (const auto& c : r.violated_conditions)
        os << " (k=" << c.k << ",n=" << c.n << ")";
    os << "\n";
    os << "elliptic residue family: " << elliptic_name(r.elliptic) << "\n";
    for (const auto& [m, f] : r.fits) {
        os << "degree " << m << " fit: ";
        switch (f.status) {
            case FitStatus::fitted: os << "fitted"; break;
            case FitStatus::infeasible:
                os << "infeasible";
                if (f.violated_order) os << " (first violated order " << *f.violated_order << ")";
                break;
            case FitStatus::underdetermined: os << "underdetermined"; break;
        }
        os << "\n";
    }
    os << "family: " << family_name(r.classification.primary) << "\n";
    auto param = [&](const char* name, const std::optional<Cyclo>& v) {
        if (v) os << "  " << name << " = " << to_string(*v) << "\n";
    };
    param("k1", r.classification.k1);
    param("k5^2", r.classification.k5sq);
    param("k6", r.classification.k6);
    param("b^2", r.classification.bsq);
    param("b", r.classification.b);
    param("b1", r.classification.b1);
    param("b0", r.classification.b0);
    if (r.build_failure) os << "closed form: FAILED (" << *r.build_failure << ")\n";
    if (r.closed_form) {
        os << "closed form built";
        for (const auto& n : r.closed_form->notes) os << "; " << n;
        os << "\n";
    }
    if (r.verification) {
        os << "verification: " << (r.verification->passed ? "passed" : "FAILED")
           << " (max ODE residual " << r.verification->max_rel_ode_residual << ")\n";
    }
    if (r.classification.primary == Family::none)
        os << "no meromorphic solution family matched\n";
    os << "exit status: " << r.exit_status << "\n";
    return os.str();
}

}  // namespace

std::string emit_report(const PipelineReport& r, ReportFormat format) {
    if (format == ReportFormat::text) return report_text(r);
    return report_json(r).dump(2) + "\n";
}

}  // namespace subeqlab
