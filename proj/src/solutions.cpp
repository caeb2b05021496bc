#include "subeqlab/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace subeqlab {

namespace {
void fill_family_params(Classification& cls, const OdeInstance& ode, Family family);
}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::S3a: return "S3a";
        case Family::S3b: return "S3b";
        case Family::S2A: return "S2A";
        case Family::S2B: return "S2B";
        case Family::S1: return "S1";
        case Family::none: return "none";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Classification

namespace {

bool matches_s3b(const OdeInstance& o) {
    return o.c1.is_zero() && o.c2.is_zero() && o.c4.is_zero() &&
           Cyclo{128} * o.c7 == o.c5 * o.c5;
}

bool matches_s3a(const OdeInstance& o) {
    return o.c2.is_zero() && o.c5.is_zero() && o.c7.is_zero() &&
           Cyclo{12} * o.c0() * o.c4 == o.c1 * o.c1;
}

bool matches_s2a(const OdeInstance& o) {
    Cyclo a3 = pow(o.a, 3), a4 = pow(o.a, 4), a6 = pow(o.a, 6), a8 = pow(o.a, 8);
    Cyclo t = Cyclo{12} * a3 * o.c4;  // 12 a^3 c4
    return o.c2.is_zero() &&
           Cyclo{4} * a4 * o.c5 == o.c1 * o.c1 - t &&
           Cyclo{144} * a6 * o.c6 == -o.c1 * (o.c1 * o.c1 + Cyclo{3} * t) &&
           Cyclo{1536} * a8 * o.c7 == (t - o.c1 * o.c1) * (Cyclo{3} * t - Cyclo{11} * o.c1 * o.c1);
}

bool matches_s2b(const OdeInstance& o) {
    const Cyclo &a = o.a, &c1 = o.c1, &c2 = o.c2;
    Cyclo a2 = a * a;
    Cyclo c11 = c1 * c1, c12 = a * c1 * c2, c22 = a2 * c2 * c2;
    return Cyclo{144} * pow(a, 3) * o.c4 == Cyclo{44} * c11 + Cyclo{8} * c12 - c22 &&
           Cyclo{48} * pow(a, 4) * o.c5 == Cyclo{-32} * c11 - Cyclo{24} * c12 - Cyclo{7} * c22 &&
           Cyclo{144} * pow(a, 6) * o.c6 ==
               -(c1 + a * c2) * (Cyclo{12} * c11 + Cyclo{6} * c12 + c22) &&
           Cyclo{55296} * pow(a, 7) * o.c7 ==
               -c2 * (Cyclo{4} * c1 + Cyclo{3} * a * c2) * (Cyclo{48} * c11 + Cyclo{20} * c12 + c22);
}

bool matches_s1(const OdeInstance& o) {
    const Cyclo &a = o.a, &c1 = o.c1, &c2 = o.c2, &c4 = o.c4, &c5 = o.c5;
    Cyclo a2 = a * a, a3 = pow(a, 3), a4 = pow(a, 4), a5 = pow(a, 5);
    Cyclo rhs6 = Cyclo{-56} * pow(c1, 3) + Cyclo{60} * a * c1 * c1 * c2 -
                 Cyclo{18} * a2 * c1 * c2 * c2 + a3 * pow(c2, 3) + Cyclo{288} * a3 * c1 * c4 -
                 Cyclo{144} * a4 * c2 * c4 - Cyclo{96} * a4 * c1 * c5 + Cyclo{48} * a5 * c2 * c5;
    if (Cyclo{1152} * pow(a, 6) * o.c6 != rhs6) return false;
    Cyclo rhs7 = Cyclo{-176} * pow(c1, 4) + Cyclo{128} * a * pow(c1, 3) * c2 +
                 Cyclo{24} * a2 * c1 * c1 * c2 * c2 - Cyclo{32} * a3 * c1 * pow(c2, 3) +
                 Cyclo{5} * a4 * pow(c2, 4) + Cyclo{2688} * a3 * c1 * c1 * c4 -
                 Cyclo{1536} * a4 * c1 * c2 * c4 + Cyclo{96} * a5 * c2 * c2 * c4 -
                 Cyclo{6912} * pow(a, 6) * c4 * c4 + Cyclo{128} * a4 * c1 * c1 * c5 -
                 Cyclo{512} * a5 * c1 * c2 * c5 + Cyclo{224} * pow(a, 6) * c2 * c2 * c5 +
                 Cyclo{4608} * pow(a, 7) * c4 * c5 + Cyclo{2304} * pow(a, 8) * c5 * c5;
    return Cyclo{73728} * pow(a, 8) * o.c7 == rhs7;
}

}  // namespace

Classification classify_family(const OdeInstance& ode) {
    Classification cls;
    if (matches_s3b(ode)) cls.all.push_back(Family::S3b);
    if (matches_s3a(ode)) cls.all.push_back(Family::S3a);
    if (matches_s2a(ode)) cls.all.push_back(Family::S2A);
    if (matches_s2b(ode)) cls.all.push_back(Family::S2B);
    if (matches_s1(ode)) cls.all.push_back(Family::S1);
    if (cls.all.empty()) return cls;
    cls.primary = cls.all.front();
    if (cls.all.size() > 1) cls.notes.push_back("degenerate overlap: instance matches several families");

    fill_family_params(cls, ode, cls.primary);
    return cls;
}

namespace {
void fill_family_params(Classification& cls, const OdeInstance& ode, Family family) {
    const Cyclo &a = ode.a, &c1 = ode.c1, &c2 = ode.c2;
    Cyclo a2 = a * a;
    switch (family) {
        case Family::S3a:
            cls.k1 = c1 / (Cyclo{12} * a2);
            cls.k6 = ode.c6 / Cyclo{4};
            break;
        case Family::S3b:
            cls.k5sq = -ode.c5 / Cyclo{16};
            cls.k6 = ode.c6 / Cyclo{4};
            break;
        case Family::S2A: {
            Cyclo k1 = -c1 / (Cyclo{3} * a2);
            cls.k1 = k1;
            cls.bsq = ode.c4 / (Cyclo{2} * a) - Cyclo{Rational(3, 8)} * k1 * k1;
            break;
        }
        case Family::S2B:
            cls.b = (a * c2 + Cyclo{2} * c1) / (Cyclo{6} * a2);
            break;
        case Family::S1: {
            cls.b1 = (Cyclo{2} * c1 - a * c2) / (Cyclo{12} * a2);
            Cyclo a3 = pow(a, 3), a4 = pow(a, 4);
            cls.b0 = (Cyclo{44} * c1 * c1 - Cyclo{32} * a * c1 * c2 + Cyclo{5} * a2 * c2 * c2 -
                      Cyclo{144} * a3 * ode.c4 + Cyclo{144} * a4 * ode.c5) /
                     (Cyclo{1152} * a4);
            break;
        }
        case Family::none: break;
    }
}
}  // namespace

// ---------------------------------------------------------------------------
// Small complex polynomial / rational-function helpers (exp-family reduction)

namespace {

struct CPoly {
    std::vector<cd> c;  // c[i] * E^i

    int degree() const {
        int d = static_cast<int>(c.size()) - 1;
        double scale = 0;
        for (const cd& v : c) scale = std::max(scale, std::abs(v));
        while (d > 0 && std::abs(c[static_cast<std::size_t>(d)]) <= 1e-12 * scale) --d;
        return d;
    }
    cd eval(cd x) const {
        cd r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
        return r;
    }
    CPoly deriv() const {
        CPoly r;
        for (std::size_t i = 1; i < c.size(); ++i) r.c.push_back(static_cast<double>(i) * c[i]);
        if (r.c.empty()) r.c.push_back(0);
        return r;
    }
};

CPoly cp_add(const CPoly& x, const CPoly& y) {
    CPoly r;
    r.c.resize(std::max(x.c.size(), y.c.size()), 0.0);
    for (std::size_t i = 0; i < x.c.size(); ++i) r.c[i] += x.c[i];
    for (std::size_t i = 0; i < y.c.size(); ++i) r.c[i] += y.c[i];
    return r;
}

CPoly cp_mul(const CPoly& x, const CPoly& y) {
    CPoly r;
    r.c.assign(x.c.size() + y.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.c.size(); ++i)
        for (std::size_t j = 0; j < y.c.size(); ++j) r.c[i + j] += x.c[i] * y.c[j];
    return r;
}

CPoly cp_scale(cd s, const CPoly& x) {
    CPoly r = x;
    for (auto& v : r.c) v *= s;
    return r;
}

std::vector<cd> cp_roots(const CPoly& p) {
    int d = p.degree();
    if (d < 1) return {};
    std::vector<cd> a(p.c.begin(), p.c.begin() + d + 1);
    cd lead = a[static_cast<std::size_t>(d)];
    for (auto& v : a) v /= lead;
    std::vector<cd> r(static_cast<std::size_t>(d));
    cd seed(0.4, 0.9);
    cd w = 1;
    for (auto& x : r) {
        x = w;
        w *= seed;
        w += seed;
    }
    for (int it = 0; it < 500; ++it) {
        double move = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            cd num = a[static_cast<std::size_t>(d)];
            for (int k = d - 1; k >= 0; --k) num = num * r[i] + a[static_cast<std::size_t>(k)];
            cd den = 1;
            for (std::size_t j = 0; j < r.size(); ++j)
                if (j != i) den *= (r[i] - r[j]);
            cd step = num / den;
            r[i] -= step;
            move = std::max(move, std::abs(step));
        }
        if (move < 1e-14) break;
    }
    return r;
}

struct CRat {
    CPoly n, d;

    static CRat constant(cd c) { return {{{c}}, {{1.0}}}; }
    static CRat variable() { return {{{0.0, 1.0}}, {{1.0}}}; }
    cd eval(cd x) const { return n.eval(x) / d.eval(x); }
};

CRat cr_add(const CRat& x, const CRat& y) {
    return {cp_add(cp_mul(x.n, y.d), cp_mul(y.n, x.d)), cp_mul(x.d, y.d)};
}
CRat cr_mul(const CRat& x, const CRat& y) { return {cp_mul(x.n, y.n), cp_mul(x.d, y.d)}; }
CRat cr_inv(const CRat& x) { return {x.d, x.n}; }
CRat cr_scale(cd s, const CRat& x) { return {cp_scale(s, x.n), x.d}; }

/// Decomposes u(E) = C + sum r_i/(E - E_i) (simple poles assumed); validated
/// against direct evaluation at off-pole sample points.
struct ExpDecomp {
    cd C;
    std::vector<ExpTerm> terms;
};

ExpDecomp partial_fractions(const CRat& u) {
    ExpDecomp out;
    int dn = u.n.degree(), dd = u.d.degree();
    if (dn > dd) throw build_error("partial_fractions: numerator degree exceeds denominator");
    out.C = dn == dd ? u.n.c[static_cast<std::size_t>(dn)] / u.d.c[static_cast<std::size_t>(dd)] : cd(0);
    CPoly dprime = u.d.deriv();
    double nscale = 0;
    for (const cd& v : u.n.c) nscale = std::max(nscale, std::abs(v));
    for (cd root : cp_roots(u.d)) {
        cd num = u.n.eval(root);
        if (std::abs(num) < 1e-9 * (nscale + 1.0) * std::pow(1.0 + std::abs(root), dn))
            continue;  // removable (common factor)
        cd dp = dprime.eval(root);
        if (std::abs(dp) == 0.0) throw build_error("partial_fractions: multiple pole");
        out.terms.push_back({num / dp, root});
    }
    for (cd probe : {cd(0.313, 0.741), cd(-1.62, 0.55)}) {
        cd direct = u.eval(probe);
        cd rebuilt = out.C;
        for (const auto& t : out.terms) rebuilt += t.r / (probe - t.Z);
        if (std::abs(direct - rebuilt) > 1e-7 * (1.0 + std::abs(direct)))
            throw build_error("partial_fractions: decomposition check failed");
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Jet eval_jet(const EllipticBinomial& f, cd z) {
    WeierstrassP wp(0.0, f.g3);
    Jet P = wp.jet(z - f.z0);
    Jet Q = jet_shift(P);  // pe'
    cd den = Q.value() - f.A;
    if (std::abs(den) < 1e-8 * (1.0 + std::abs(Q.value()))) throw near_singularity{};
    return Jet::constant(f.e0) + f.N1 * (Jet::constant(1.0) / (Q - f.A));
}

Jet eval_jet(const EllipticBB& f, cd z) {
    WeierstrassP wp(f.g2, f.g3);
    Jet P = wp.jet(z - f.z0);
    if (std::abs(P.value() - f.B) < 1e-10 * (1.0 + std::abs(P.value()))) throw near_singularity{};
    Jet w = Jet::constant(2.0 * f.k1 / f.e0) + f.A * (Jet::constant(1.0) / (P - f.B));
    Jet wp_prime = jet_shift(w);
    Jet w2 = w * w;
    Jet w3 = w2 * w;
    Jet den = 2.0 * (w3 + cd(1.0));
    if (std::abs(den.value()) < 1e-8 * (1.0 + std::abs(w3.value()))) throw near_singularity{};
    Jet num = (-3.0 * f.a) * (w * wp_prime) + (-f.e0) * w3 + (6.0 * f.k1) * w2 + Jet::constant(2.0 * f.e0);
    return num / den;
}

Jet eval_jet(const ExpRational& f, cd z) {
    Jet E = jet_exp(f.k, z - f.z0);
    Jet u = Jet::constant(f.C);
    for (const auto& t : f.terms) {
        if (std::abs(E.value() - t.Z) < 1e-6 * (1.0 + std::abs(t.Z))) throw near_singularity{};
        u = u + t.r * (Jet::constant(1.0) / (E - t.Z));
    }
    return u;
}

Jet eval_jet(const RationalForm& f, cd z) {
    Jet u = Jet::constant(f.C);
    for (const auto& t : f.poles) {
        cd d = z - f.z0 - t.s;
        if (std::abs(d) < 1e-3) throw near_singularity{};
        Jet lin;
        lin.v[0] = d;
        lin.v[1] = 1.0;
        u = u + t.r * (Jet::constant(1.0) / lin);
    }
    return u;
}

Jet eval_jet(const ClosedForm& cf, cd z) {
    return std::visit([&](const auto& f) { return eval_jet(f, z); }, cf.form);
}

}  // namespace

Derivs eval_closed_form(const ClosedForm& cf, cd z) {
    Jet j = eval_jet(cf, z);
    return {j.value(), j.d1(), j.d2(), j.d3()};
}

// ---------------------------------------------------------------------------
// Sampling and verification

namespace {

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

cd form_z0(const ClosedForm& cf) {
    return std::visit([](const auto& f) { return f.z0; }, cf.form);
}

double safe_radius(const ClosedForm& cf) {
    if (const auto* eb = std::get_if<EllipticBinomial>(&cf.form))
        return WeierstrassP(0.0, eb->g3).safety_radius();
    if (const auto* bb = std::get_if<EllipticBB>(&cf.form))
        return WeierstrassP(bb->g2, bb->g3).safety_radius();
    return 1e9;
}

}  // namespace

std::vector<cd> sample_points(const ClosedForm& cf, int count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    cd z0 = form_z0(cf);
    double rmax = 0.4, rmin = 0.05;
    double rc = safe_radius(cf);
    if (0.45 > rc) {
        rmax = 0.85 * rc;
        rmin = rmax / 8.0;
    }
    std::vector<cd> pts;
    constexpr double kTwoPi = 6.283185307179586476925287;
    for (int attempt = 0; attempt < 10000 && static_cast<int>(pts.size()) < count; ++attempt) {
        double r = rmin + (rmax - rmin) * uniform01(gen);
        double th = kTwoPi * uniform01(gen);
        cd z = z0 + std::polar(r, th);
        try {
            Derivs d = eval_closed_form(cf, z);
            if (std::abs(d.u) > 1e8) continue;
            pts.push_back(z);
        } catch (const std::domain_error&) {
            continue;
        }
    }
    return pts;
}

VerificationReport verify_numeric(const ClosedForm& cf, const OdeInstance& ode,
                                  const Subequation* s, const std::vector<cd>& points,
                                  double tol) {
    VerificationReport rep;
    rep.points = points;
    bool eval_ok = true;
    cd a = embed_complex(ode.a);
    cd c0 = a * a * a;
    for (cd z : points) {
        Derivs d;
        try {
            d = eval_closed_form(cf, z);
        } catch (const std::domain_error&) {
            rep.notes.push_back("evaluation failed near a singularity");
            eval_ok = false;
            continue;
        }
        cd terms[8] = {c0 * d.u3,
                       6.0 * d.u * d.u * d.u * d.u,
                       embed_complex(ode.c1) * d.u2,
                       embed_complex(ode.c2) * d.u * d.u1,
                       embed_complex(ode.c4) * d.u1,
                       embed_complex(ode.c5) * d.u * d.u,
                       embed_complex(ode.c6) * d.u,
                       embed_complex(ode.c7)};
        cd sum = 0;
        double scale = 0;
        for (const cd& t : terms) {
            sum += t;
            scale = std::max(scale, std::abs(t));
        }
        rep.max_rel_ode_residual =
            std::max(rep.max_rel_ode_residual, std::abs(sum) / std::max(scale, 1e-30));

        if (s) {
            cd fsum = 0;
            double fscale = 0;
            for (int k = 0; k <= s->m; ++k)
                for (int j = 0; j <= 2 * s->m - 2 * k; ++j) {
                    const Cyclo& c = s->at(j, k);
                    if (c.is_zero()) continue;
                    cd t = embed_complex(c) * std::pow(d.u, j) * std::pow(d.u1, k);
                    fsum += t;
                    fscale = std::max(fscale, std::abs(t));
                }
            rep.max_rel_subeq_residual =
                std::max(rep.max_rel_subeq_residual, std::abs(fsum) / std::max(fscale, 1e-30));
        }
    }
    rep.passed = eval_ok && !points.empty() && rep.max_rel_ode_residual <= tol &&
                 (!s || rep.max_rel_subeq_residual <= tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

bool candidate_passes(ClosedForm& cf, const OdeInstance& ode, const BuildOptions& opts) {
    std::vector<cd> pts = sample_points(cf, opts.points, opts.seed);
    if (static_cast<int>(pts.size()) < opts.points) return false;
    return verify_numeric(cf, ode, nullptr, pts, opts.tol).passed;
}

std::optional<Rational> find_rational_root(const Poly& p) {
    // rational root theorem on the rational-part polynomial (cubics here are
    // rational whenever the instance parameters are)
    std::vector<Rational> rc;
    for (const auto& c : p.c) {
        if (c.q != 0) return std::nullopt;
        rc.push_back(c.p);
    }
    while (!rc.empty() && rc.back() == 0) rc.pop_back();
    if (rc.empty()) return std::nullopt;
    Int den_lcm = 1;
    for (const auto& r : rc) den_lcm = lcm(den_lcm, denominator(r));
    std::vector<Int> ic;
    for (const auto& r : rc) ic.push_back(numerator(r) * (den_lcm / denominator(r)));
    auto eval_at = [&](const Rational& x) {
        Rational v = 0;
        for (auto it = ic.rbegin(); it != ic.rend(); ++it) v = v * x + Rational(*it);
        return v;
    };
    if (ic[0] == 0) return Rational(0);
    Int a0 = abs(ic[0]), an = abs(ic.back());
    if (a0 > 1000000 || an > 1000000) return std::nullopt;
    long A0 = static_cast<long>(a0), An = static_cast<long>(an);
    for (long p_ = 1; p_ <= A0; ++p_) {
        if (A0 % p_) continue;
        for (long q_ = 1; q_ <= An; ++q_) {
            if (An % q_) continue;
            Rational cand(p_, q_);
            if (eval_at(cand) == 0) return cand;
            if (eval_at(-cand) == 0) return -cand;
        }
    }
    return std::nullopt;
}

cd numeric_cubic_root(const Poly& p) {
    CPoly cp;
    for (const auto& c : p.c) cp.c.push_back(embed_complex(c));
    std::vector<cd> roots = cp_roots(cp);
    if (roots.empty()) throw build_error("no root of the e0 cubic");
    // prefer an (almost) real root for readability
    std::sort(roots.begin(), roots.end(),
              [](cd x, cd y) { return std::abs(x.imag()) < std::abs(y.imag()); });
    return roots.front();
}

ClosedForm build_s3b(const OdeInstance& ode, const Classification& cls, const BuildOptions& opts) {
    Cyclo k5sq = *cls.k5sq, k6 = *cls.k6;
    Poly cubic;  // e0^3 - 3 k5^2 e0 + k6
    cubic.c = {k6, Cyclo{-3} * k5sq, Cyclo{}, Cyclo{1}};

    std::optional<Cyclo> e0_exact;
    cd e0;
    std::vector<std::string> notes;
    if (opts.e0) {
        if (!cubic.eval(*opts.e0).is_zero())
            throw build_error("supplied e0 does not satisfy e0^3 - 3 k5^2 e0 + k6 = 0");
        e0_exact = *opts.e0;
        e0 = embed_complex(*opts.e0);
    } else if (auto r = find_rational_root(cubic)) {
        e0_exact = Cyclo{*r};
        e0 = embed_complex(*e0_exact);
    } else {
        e0 = numeric_cubic_root(cubic);
        notes.push_back("e0 obtained numerically (no rational root)");
    }

    Cyclo a3 = pow(ode.a, 3), a6 = a3 * a3;
    ClosedForm cf;
    cf.family = Family::S3b;
    EllipticBinomial f;
    f.z0 = opts.z0;
    f.e0 = e0;
    if (e0_exact) {
        Cyclo e2 = *e0_exact * *e0_exact;
        Cyclo d = e2 - k5sq;
        // substituting 1/(u - e0) = (pe' - A)/N1 into a^3 u'^3 + (u^3 - 3 k5^2 u + k6)^2 = 0
        // forces 3 d g3 = d^3 (4 d - 3 e0^2) / (9 a^6), i.e. a 27 in the denominator
        f.g3_exact = d * d * (e2 - Cyclo{4} * k5sq) / (Cyclo{27} * a6);
        f.N1_exact = Cyclo{2} * d * d / (Cyclo{3} * a3);
        f.A_exact = *e0_exact * d / (Cyclo{3} * a3);
        f.e0_exact = e0_exact;
        f.g3 = embed_complex(*f.g3_exact);
        f.N1 = embed_complex(*f.N1_exact);
        f.A = embed_complex(*f.A_exact);
    } else {
        cd k5c = embed_complex(k5sq), a3c = embed_complex(a3);
        cd e2 = e0 * e0, d = e2 - k5c;
        f.g3 = d * d * (e2 - 4.0 * k5c) / (27.0 * a3c * a3c);
        f.N1 = 2.0 * d * d / (3.0 * a3c);
        f.A = e0 * d / (3.0 * a3c);
    }
    if (std::abs(f.N1) < 1e-12) throw build_error("degenerate S3b parameters (e0^2 = k5^2)");

    struct Cand { double sn, sa; const char* label; };
    for (Cand c : {Cand{1, 1, nullptr}, Cand{-1, 1, "sign of N1 flipped"},
                   Cand{1, -1, "sign of A flipped"}, Cand{-1, -1, "signs of N1 and A flipped"}}) {
        ClosedForm trial = cf;
        EllipticBinomial g = f;
        g.N1 *= c.sn;
        g.A *= c.sa;
        if (c.label) {
            g.N1_exact.reset();
            g.A_exact.reset();
        }
        trial.form = g;
        trial.notes = notes;
        if (c.label) trial.notes.push_back(c.label);
        if (candidate_passes(trial, ode, opts)) return trial;
    }
    throw build_error("S3b closed form failed verification for all sign branches");
}

ClosedForm build_s3a(const OdeInstance& ode, const Classification& cls, const BuildOptions& opts) {
    Cyclo k1 = *cls.k1, k6 = *cls.k6;
    Poly cubic;  // e0^3 + 20 k1^3 + k6
    cubic.c = {Cyclo{20} * pow(k1, 3) + k6, Cyclo{}, Cyclo{}, Cyclo{1}};

    std::optional<Cyclo> e0_exact;
    cd e0;
    std::vector<std::string> notes;
    if (opts.e0) {
        if (!cubic.eval(*opts.e0).is_zero())
            throw build_error("supplied e0 does not satisfy e0^3 + 20 k1^3 + k6 = 0");
        e0_exact = *opts.e0;
        e0 = embed_complex(*opts.e0);
    } else if (auto r = find_rational_root(cubic)) {
        e0_exact = Cyclo{*r};
        e0 = embed_complex(*e0_exact);
    } else {
        e0 = numeric_cubic_root(cubic);
        notes.push_back("e0 obtained numerically (no rational root)");
    }
    if (std::abs(e0) < 1e-12) throw build_error("S3a requires e0 != 0 (k6 = -20 k1^3 is degenerate)");

    Cyclo a2 = ode.a * ode.a, a4 = a2 * a2, a6 = a4 * a2;
    ClosedForm base;
    base.family = Family::S3a;
    EllipticBB f;
    f.z0 = opts.z0;
    f.a = embed_complex(ode.a);
    f.k1 = embed_complex(k1);
    f.e0 = e0;
    // Substituting w = 2 k1/e0 + A/(pe - B) into the first-order equation for w,
    //   3 a^2 w'^2 = -(e0 w^3 + 6 k1 w^2 + 4 e0)(e0 w - 2 k1),
    // and matching powers of (pe - B) forces
    //   A = -(e0^3 + 8 k1^3)/(3 a^2 e0),  B = -k1^2/a^2,
    //   g2 = 4 k1 (k1^3 - e0^3)/(3 a^4),
    //   g3 = (e0^6 - 20 e0^3 k1^3 - 8 k1^6)/(27 a^6).
    if (e0_exact) {
        Cyclo e3 = pow(*e0_exact, 3), k13 = pow(k1, 3);
        f.g2_exact = Cyclo{4} * k1 * (k13 - e3) / (Cyclo{3} * a4);
        f.A_exact = -(e3 + Cyclo{8} * k13) / (Cyclo{3} * a2 * *e0_exact);
        f.B_exact = -(k1 * k1) / a2;
        f.g3_exact = (e3 * e3 - Cyclo{20} * e3 * k13 - Cyclo{8} * k13 * k13) / (Cyclo{27} * a6);
        f.k1_exact = k1;
        f.e0_exact = e0_exact;
        f.g2 = embed_complex(*f.g2_exact);
        f.A = embed_complex(*f.A_exact);
        f.B = embed_complex(*f.B_exact);
        f.g3 = embed_complex(*f.g3_exact);
    } else {
        cd k1c = f.k1, a2c = embed_complex(a2);
        cd e3 = e0 * e0 * e0, k13 = k1c * k1c * k1c;
        f.g2 = 4.0 * k1c * (k13 - e3) / (3.0 * a2c * a2c);
        f.A = -(e3 + 8.0 * k13) / (3.0 * a2c * e0);
        f.B = -k1c * k1c / a2c;
        f.g3 = (e3 * e3 - 20.0 * e3 * k13 - 8.0 * k13 * k13) / (27.0 * embed_complex(a6));
    }
    ClosedForm trial = base;
    trial.form = f;
    trial.notes = notes;
    if (candidate_passes(trial, ode, opts)) return trial;
    throw build_error("S3a closed form failed verification");
}

ClosedForm build_s2a(const OdeInstance& ode, const Classification& cls, const BuildOptions& opts) {
    cd a = embed_complex(ode.a);
    cd k1 = embed_complex(*cls.k1);
    cd bsq = embed_complex(*cls.bsq);
    cd b = std::sqrt(bsq);
    if (std::abs(bsq) < 1e-14) throw build_error("S2A requires b != 0");
    cd den0 = k1 * k1 - bsq;
    if (std::abs(den0) < 1e-12) throw build_error("S2A requires k1^2 != b^2 (degenerate case is S2B)");
    cd gamma = bsq / (4.0 * den0);
    // Completing the square on (2 a w' + Q)^2 + 3 Q = 0, Q = (k1^2 - b^2) w^2 + 2 k1 w + 1,
    // gives S^2 + 3 (k1^2 - b^2) (w + k1/(k1^2 - b^2))^2 = 3 b^2/(k1^2 - b^2), whose
    // (lambda - 1/lambda) parameterization has offset -k1/(k1^2 - b^2) and amplitude N/2.
    cd w0 = -k1 / den0;

    for (double sn : {1.0, -1.0})
        for (double sm : {1.0, -1.0}) {
            cd N = sn * cd(0, 1) * b / den0;            // N^2 = -b^2/(k1^2-b^2)^2
            cd M = sm * std::sqrt(3.0 * bsq / (4.0 * den0));
            cd disc = std::sqrt(M * M - 4.0 * gamma * gamma);
            if (std::abs(disc) < 1e-12) continue;
            cd r1 = (-M + disc) / (2.0 * gamma);
            cd r2 = (-M - disc) / (2.0 * gamma);
            cd sigma = gamma * (r1 - r2) / (a * N);

            // lambda = (r1 - r2 E)/(1 - E),  E = e^{sigma (z - z0)}
            CRat E = CRat::variable();
            CRat lambda = cr_mul(cr_add(CRat::constant(r1), cr_scale(-r2, E)),
                                 cr_inv(cr_add(CRat::constant(1.0), cr_scale(-1.0, E))));
            CRat w = cr_add(CRat::constant(w0),
                            cr_scale(N / 2.0, cr_add(lambda, cr_scale(-1.0, cr_inv(lambda)))));
            CRat v = cr_add(CRat::constant(k1), cr_inv(w));
            CRat u = cr_add(v, CRat::constant(-k1 / 2.0));

            ExpDecomp dec;
            try {
                dec = partial_fractions(u);
            } catch (const build_error&) {
                continue;
            }
            ClosedForm cf;
            cf.family = Family::S2A;
            ExpRational f;
            f.k = sigma;
            f.C = dec.C;
            f.z0 = opts.z0;
            f.terms = dec.terms;
            cf.form = f;
            cf.notes.push_back(std::string("branch signs: N ") + (sn > 0 ? "+" : "-") + ", M " +
                               (sm > 0 ? "+" : "-"));
            if (candidate_passes(cf, ode, opts)) return cf;
        }
    throw build_error("S2A closed form failed verification for all sign branches");
}

ClosedForm build_s2b(const OdeInstance& ode, const Classification& cls, const BuildOptions& opts) {
    Cyclo b_exact = *cls.b;
    if (b_exact.is_zero()) throw build_error("S2B requires b != 0");
    cd a = embed_complex(ode.a);
    cd b = embed_complex(b_exact);
    cd shift = embed_complex(ode.c1) / (12.0 * a * a) + b / 4.0;

    // u = shift - b + 2b/w,  w = 1 + 3 (1 + E)^2 = 3E^2 + 6E + 4
    CPoly wpoly{{4.0, 6.0, 3.0}};
    CRat u = cr_add(CRat::constant(shift - b), cr_scale(2.0 * b, cr_inv(CRat{wpoly, {{1.0}}})));

    for (double sk : {1.0, -1.0}) {
        CRat ur = u;
        if (sk < 0) {  // E -> 1/E
            ur.n.c = std::vector<cd>(u.n.c.rbegin(), u.n.c.rend());
            ur.d.c = std::vector<cd>(u.d.c.rbegin(), u.d.c.rend());
            while (ur.n.c.size() < ur.d.c.size()) ur.n.c.insert(ur.n.c.begin(), 0.0);
            while (ur.d.c.size() < ur.n.c.size()) ur.d.c.insert(ur.d.c.begin(), 0.0);
        }
        ExpDecomp dec;
        try {
            dec = partial_fractions(ur);
        } catch (const build_error&) {
            continue;
        }
        ClosedForm cf;
        cf.family = Family::S2B;
        ExpRational f;
        f.k = sk * b / (2.0 * a);
        f.C = dec.C;
        f.z0 = opts.z0;
        f.terms = dec.terms;
        cf.form = f;
        if (sk < 0) cf.notes.push_back("exponent sign flipped");
        if (candidate_passes(cf, ode, opts)) return cf;
    }
    throw build_error("S2B closed form failed verification");
}

ClosedForm build_s1(const OdeInstance& ode, const Classification& cls,
                    const std::optional<FitReport>& fit, const BuildOptions& opts) {
    Cyclo b1 = *cls.b1, b0 = *cls.b0;
    std::vector<std::string> notes;
    if (fit && fit->status == FitStatus::fitted && fit->subequation->m == 1) {
        const Subequation& s = *fit->subequation;
        if (s.at(1, 0) / s.at(0, 1) * ode.a != b1 || s.at(0, 0) / s.at(0, 1) * ode.a != b0)
            notes.push_back("warning: fitted degree-1 coefficients disagree with the family formulas");
    }
    Cyclo delta = b1 * b1 - Cyclo{4} * b0;
    cd a = embed_complex(ode.a);

    if (delta.is_zero()) {
        ClosedForm cf;
        cf.family = Family::S1;
        RationalForm f;
        f.z0 = opts.z0;
        f.C = embed_complex(-b1 / Cyclo{2});
        f.C_exact = -b1 / Cyclo{2};
        f.poles = {{a, 0.0}};
        cf.form = f;
        cf.notes = notes;
        cf.notes.push_back("rational branch (b1^2 - 4 b0 = 0)");
        return cf;
    }

    cd dc = embed_complex(delta);
    struct Norm { double den; const char* label; };
    for (Norm nm : {Norm{1.0, "k^2 = (b1^2 - 4 b0)/a^2"},
                    Norm{2.0, "k^2 = (b1^2 - 4 b0)/(2 a^2) (printed value)"}}) {
        cd k = std::sqrt(dc / (nm.den * a * a));
        // u = -b1/2 + a k/2 coth(k (z-z0)/2) = (-b1/2 + ak/2) + ak/(E - 1)
        ClosedForm cf;
        cf.family = Family::S1;
        ExpRational f;
        f.k = k;
        f.z0 = opts.z0;
        f.C = embed_complex(-b1 / Cyclo{2}) + a * k / 2.0;
        f.terms = {{a * k, 1.0}};
        cf.form = f;
        cf.notes = notes;
        cf.notes.push_back(std::string("k normalization selected: ") + nm.label);
        if (candidate_passes(cf, ode, opts)) return cf;
    }
    throw build_error("S1 coth form failed verification for both k normalizations");
}

}  // namespace

ClosedForm build_closed_form(const OdeInstance& ode, const Classification& cls,
                             const std::optional<FitReport>& fit, const BuildOptions& opts) {
    if (cls.all.empty()) throw build_error("no family to build");
    // on degenerate overlaps a more specific family can fail to build (e.g. a
    // vanishing normalization constant); fall back to the next matched family
    std::vector<std::string> fallback_notes;
    for (std::size_t i = 0; i < cls.all.size(); ++i) {
        Family fam = cls.all[i];
        Classification local = cls;
        if (fam != cls.primary) fill_family_params(local, ode, fam);
        try {
            ClosedForm cf;
            switch (fam) {
                case Family::S3b: cf = build_s3b(ode, local, opts); break;
                case Family::S3a: cf = build_s3a(ode, local, opts); break;
                case Family::S2A: cf = build_s2a(ode, local, opts); break;
                case Family::S2B: cf = build_s2b(ode, local, opts); break;
                case Family::S1: cf = build_s1(ode, local, fit, opts); break;
                case Family::none: continue;
            }
            cf.notes.insert(cf.notes.begin(), fallback_notes.begin(), fallback_notes.end());
            return cf;
        } catch (const build_error& e) {
            if (i + 1 == cls.all.size()) throw;
            fallback_notes.push_back(family_name(fam) + std::string(" build failed (") + e.what() +
                                     "); trying the next matched family");
        }
    }
    throw build_error("no family to build");
}

// ---------------------------------------------------------------------------
// Pole location and residues

namespace {

cd contour_residue(const ClosedForm& cf, cd pole, double radius) {
    constexpr int N = 256;
    constexpr double kTwoPi = 6.283185307179586476925287;
    cd sum = 0;
    for (int j = 0; j < N; ++j) {
        double th = kTwoPi * (j + 0.5) / N;
        cd e = std::polar(1.0, th);
        sum += eval_closed_form(cf, pole + radius * e).u * e;
    }
    return sum * radius / static_cast<double>(N);
}

std::vector<PoleInfo> elliptic_pole_search(const ClosedForm& cf, int count) {
    cd z0 = form_z0(cf);
    double R = safe_radius(cf);
    double rsearch = 0.95 * R;
    std::vector<cd> candidates;
    const int nr = 28, nth = 64;
    for (int ir = 1; ir <= nr; ++ir) {
        double r = rsearch * ir / nr;
        if (r < 0.02 * R) continue;
        for (int it = 0; it < nth; ++it) {
            cd z = z0 + std::polar(r, 6.283185307179586 * it / nth);
            // Newton for a zero of 1/u: z <- z + u/u'
            bool converged = false;
            double last_delta = R;
            for (int step = 0; step < 40; ++step) {
                Derivs d;
                try {
                    d = eval_closed_form(cf, z);
                } catch (const std::domain_error&) {
                    // inside the singularity guard band: z is already within
                    // ~1e-8 of a pole, which is ample for the contour step
                    converged = last_delta < 1e-3 * R || step == 0;
                    break;
                }
                if (std::abs(d.u1) < 1e-14) break;
                cd delta = d.u / d.u1;
                z += delta;
                last_delta = std::abs(delta);
                if (std::abs(z - z0) > rsearch) break;
                if (last_delta < 1e-9) {
                    converged = true;
                    break;
                }
            }
            if (!converged) continue;
            bool dup = false;
            for (cd c : candidates)
                if (std::abs(c - z) < 1e-5) dup = true;
            if (!dup) candidates.push_back(z);
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](cd x, cd y) { return std::abs(x - z0) < std::abs(y - z0); });
    std::vector<PoleInfo> poles;
    for (cd z : candidates) {
        double sep = R;
        for (const auto& p : poles) sep = std::min(sep, std::abs(p.z - z));
        double rad = std::min({0.02 * R, 0.25 * sep, 0.45 * (rsearch - std::abs(z - z0)) + 1e-9});
        if (rad <= 0) continue;
        cd res;
        try {
            res = contour_residue(cf, z, rad);
        } catch (const std::domain_error&) {
            continue;
        }
        if (std::abs(res) < 1e-4) continue;  // not actually a (simple) pole
        poles.push_back({z, res});
        if (static_cast<int>(poles.size()) == count) break;
    }
    return poles;
}

}  // namespace

std::vector<PoleInfo> find_poles(const ClosedForm& cf, int count) {
    if (const auto* rf = std::get_if<RationalForm>(&cf.form)) {
        std::vector<PoleInfo> poles;
        for (const auto& t : rf->poles) poles.push_back({rf->z0 + t.s, t.r});
        std::sort(poles.begin(), poles.end(), [&](const PoleInfo& x, const PoleInfo& y) {
            return std::abs(x.z - rf->z0) < std::abs(y.z - rf->z0);
        });
        if (static_cast<int>(poles.size()) > count) poles.resize(static_cast<std::size_t>(count));
        return poles;
    }
    if (const auto* ef = std::get_if<ExpRational>(&cf.form)) {
        std::vector<PoleInfo> poles;
        constexpr double kTwoPi = 6.283185307179586476925287;
        for (const auto& t : ef->terms) {
            cd base = std::log(t.Z);
            for (int m = -6; m <= 6; ++m) {
                cd z = ef->z0 + (base + cd(0, kTwoPi * m)) / ef->k;
                poles.push_back({z, t.r / (ef->k * t.Z)});
            }
        }
        std::sort(poles.begin(), poles.end(), [&](const PoleInfo& x, const PoleInfo& y) {
            return std::abs(x.z - ef->z0) < std::abs(y.z - ef->z0);
        });
        if (static_cast<int>(poles.size()) > count) poles.resize(static_cast<std::size_t>(count));
        return poles;
    }
    return elliptic_pole_search(cf, count);
}

}  // namespace subeqlab
