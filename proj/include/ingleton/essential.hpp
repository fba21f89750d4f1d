#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include "ingleton/ci.hpp"
#include "ingleton/dist.hpp"
#include "ingleton/entropy.hpp"
#include "ingleton/ingleton_expr.hpp"
#include "ingleton/numeric.hpp"

namespace ingleton {

struct BadPartition : std::runtime_error {
    explicit BadPartition(const std::string& what) : std::runtime_error(what) {}
};
struct LimitViolatesAssumptions : std::runtime_error {
    explicit LimitViolatesAssumptions(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Exact values of the form q0 + sum_p q_p log p over prime p.

/// Log-linear number: rational constant plus a rational combination of logs
/// of primes (stored in increasing order, no zero coefficients).
struct LogLin {
    Rational constant;
    std::map<long long, Rational> logs;

    bool is_zero() const { return constant == 0 && logs.empty(); }

    LogLin& operator+=(const LogLin& o) {
        constant += o.constant;
        for (const auto& [p, q] : o.logs) add_log(p, q);
        return *this;
    }
    LogLin& operator-=(const LogLin& o) {
        constant -= o.constant;
        for (const auto& [p, q] : o.logs) add_log(p, -q);
        return *this;
    }
    LogLin& operator*=(const Rational& s) {
        if (s == 0) return *this = LogLin{};
        constant *= s;
        for (auto& [p, q] : logs) q *= s;
        return *this;
    }
    friend LogLin operator+(LogLin a, const LogLin& b) { return a += b; }
    friend LogLin operator-(LogLin a, const LogLin& b) { return a -= b; }
    friend LogLin operator*(const Rational& s, LogLin x) { return x *= s; }

    bool operator==(const LogLin&) const = default;

    void add_log(long long p, const Rational& q) {
        auto [it, fresh] = logs.emplace(p, q);
        if (!fresh && (it->second += q) == 0) logs.erase(it);
    }

    double value() const {
        double v = to_double(constant);
        for (const auto& [p, q] : logs) v += to_double(q) * std::log(double(p));
        return v;
    }

    std::string str() const {
        std::string out = rational_str(constant);
        for (const auto& [p, q] : logs)
            out += " + (" + rational_str(q) + ")*log(" + std::to_string(p) + ")";
        return out;
    }
};

/// log of a positive rational, prime-decomposed.
inline LogLin log_of_rational(const Rational& r) {
    if (r <= 0) throw std::domain_error("log of non-positive rational");
    LogLin out;
    auto factor_into = [&](Integer n, int sgn) {
        if (n > Integer(std::uint64_t(1) << 62))
            throw std::domain_error("log argument too large to factor: " + n.str());
        long long m = n.convert_to<long long>();
        for (long long p = 2; p * p <= m; ++p)
            while (m % p == 0) {
                out.add_log(p, sgn);
                m /= p;
            }
        if (m > 1) out.add_log(m, sgn);
    };
    factor_into(numerator(r), +1);
    factor_into(denominator(r), -1);
    return out;
}

namespace detail {

template <unsigned Digits>
int interval_sign(const LogLin& x) {
    using F = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;
    F v = F(numerator(x.constant)) / F(denominator(x.constant));
    F mag = abs(v);
    for (const auto& [p, q] : x.logs) {
        F term = F(numerator(q)) / F(denominator(q)) * log(F(p));
        v += term;
        mag += abs(term);
    }
    F slop = (mag + 1) * std::numeric_limits<F>::epsilon() * 1024;
    if (v > slop) return 1;
    if (v < -slop) return -1;
    return 0;  // undecided at this precision
}

}  // namespace detail

/// Exact sign.  Zero only when the representation is identically zero
/// ({1} and {log p} are linearly independent over Q); a pure log
/// combination is compared by big-integer products, and the mixed case by
/// interval evaluation with doubling precision, which terminates because
/// such a value is provably nonzero.
inline int loglin_sign(const LogLin& x) {
    if (x.logs.empty()) return sign_of(x.constant);
    if (x.constant == 0) {
        Integer L = 1;
        for (const auto& [p, q] : x.logs) L = boost::multiprecision::lcm(L, denominator(q));
        Integer above = 1, below = 1;
        for (const auto& [p, q] : x.logs) {
            Integer e = numerator(q) * (L / denominator(q));
            Integer pw = boost::multiprecision::pow(Integer(p),
                                                    boost::multiprecision::abs(e).convert_to<unsigned long>());
            if (e > 0) above *= pw; else below *= pw;
        }
        return above > below ? 1 : (above < below ? -1 : 0);
    }
    if (int s = detail::interval_sign<20>(x)) return s;
    if (int s = detail::interval_sign<40>(x)) return s;
    if (int s = detail::interval_sign<80>(x)) return s;
    if (int s = detail::interval_sign<160>(x)) return s;
    if (int s = detail::interval_sign<320>(x)) return s;
    if (int s = detail::interval_sign<640>(x)) return s;
    if (int s = detail::interval_sign<1280>(x)) return s;
    throw std::logic_error("loglin_sign: undecided at 1280 digits: " + x.str());
}

inline nlohmann::json loglin_to_json(const LogLin& x) {
    nlohmann::json logs = nlohmann::json::object();
    for (const auto& [p, q] : x.logs) logs[std::to_string(p)] = rational_str(q);
    return nlohmann::json{{"const", rational_str(x.constant)}, {"logs", logs}};
}

// ---------------------------------------------------------------------------
// Truncated expansions sum_k (c_k + d_k log eps) eps^k.

struct EpsSeries {
    int order = 0;                // truncation order K
    std::vector<LogLin> c;        // analytic coefficients, index 0..K
    std::vector<Rational> d;      // log-eps coefficients, index 0..K

    explicit EpsSeries(int K = 0) : order(K), c(K + 1), d(K + 1) {}

    bool term_zero(int k) const { return c[k].is_zero() && d[k] == 0; }

    double eval(double eps) const {
        double v = 0, ek = 1;
        for (int k = 0; k <= order; ++k) {
            v += (c[k].value() + to_double(d[k]) * std::log(eps)) * ek;
            ek *= eps;
        }
        return v;
    }
};

// ---------------------------------------------------------------------------
// Curve families: partitions of the 16 atoms into A, B, C, D with atom
// values 1/(|A|+|B|), 1/(|A|+|B|) - eps, (|B|/|C|) eps and 0.

enum class AtomClass : std::uint8_t { A, B, C, D };

struct CurveFamily {
    std::array<AtomClass, kNumAtoms> part;

    CurveFamily() { part.fill(AtomClass::D); }
    explicit CurveFamily(std::array<AtomClass, kNumAtoms> p) : part(p) { validate(); }

    int count(AtomClass cls) const {
        int n = 0;
        for (AtomClass c : part)
            if (c == cls) ++n;
        return n;
    }

    void validate() const {
        if (count(AtomClass::A) + count(AtomClass::B) == 0)
            throw BadPartition("recipe requires |A u B| > 0");
        if (count(AtomClass::C) == 0) throw BadPartition("recipe requires |C| > 0");
    }
};

/// Atom value alpha + beta*eps.
struct AffineForm {
    Rational alpha, beta;
};

using SymbolicTable = std::array<AffineForm, kNumAtoms>;

inline SymbolicTable family_table(const CurveFamily& fam) {
    fam.validate();
    const int nab = fam.count(AtomClass::A) + fam.count(AtomClass::B);
    const Rational uniform(1, nab);
    const Rational slope(fam.count(AtomClass::B), fam.count(AtomClass::C));
    SymbolicTable t;
    for (int a = 0; a < kNumAtoms; ++a) {
        switch (fam.part[a]) {
            case AtomClass::A: t[a] = {uniform, 0}; break;
            case AtomClass::B: t[a] = {uniform, -1}; break;
            case AtomClass::C: t[a] = {0, slope}; break;
            case AtomClass::D: t[a] = {0, 0}; break;
        }
    }
    return t;
}

/// The eps = 0 endpoint, uniform on A u B.
inline JointTable limit_table(const CurveFamily& fam) {
    SymbolicTable sym = family_table(fam);
    std::array<Rational, kNumAtoms> atoms;
    for (int a = 0; a < kNumAtoms; ++a) atoms[a] = sym[a].alpha;
    return make_table(std::move(atoms));
}

/// The sparse family witnessing essential conditionality of the inequality
/// with assumptions X_|_Z|U and Y_|_Z|U.
inline CurveFamily reference_family() {
    std::array<AtomClass, kNumAtoms> p;
    p.fill(AtomClass::D);
    for (const char* name : {"0110", "1010", "1101", "1111"}) p[atom_from_name(name)] = AtomClass::A;
    p[atom_from_name("0010")] = AtomClass::B;
    p[atom_from_name("1100")] = AtomClass::C;
    return CurveFamily(p);
}

/// Expands f on the family's entropy vector as an exact series in eps and
/// eps*log(eps) around eps = 0, truncated at order K.
inline EpsSeries functional_series(const LinFunctional& f, const CurveFamily& fam, int K) {
    if (K < 1) throw std::invalid_argument("series order must be >= 1");
    SymbolicTable sym = family_table(fam);
    EpsSeries out(K);

    for (VarSet I = 0; I < kNumSubsets; ++I) {
        if (f.coeff[I] == 0) continue;
        const Rational scale(f.coeff[I], 1);

        // marginal cells are affine in eps
        std::array<AffineForm, kNumSubsets> cells{};
        for (int a = 0; a < kNumAtoms; ++a) {
            cells[project_atom(a, I)].alpha += sym[a].alpha;
            cells[project_atom(a, I)].beta += sym[a].beta;
        }

        const int ncells = 1 << set_size(I);
        for (int ci = 0; ci < ncells; ++ci) {
            const Rational alpha = cells[ci].alpha, beta = cells[ci].beta;
            if (alpha == 0 && beta == 0) continue;
            if (alpha < 0 || (alpha == 0 && beta < 0))
                throw std::domain_error("marginal cell negative near eps = 0");
            // contribution of -m log m for m = alpha + beta*eps
            if (alpha == 0) {
                // -beta*eps*log(beta) - beta*eps*log(eps)
                out.c[1] += scale * (Rational(-1) * beta * log_of_rational(beta));
                out.d[1] += scale * -beta;
                continue;
            }
            LogLin la = log_of_rational(alpha);
            out.c[0] += scale * (Rational(-1) * alpha * la);
            if (beta == 0) continue;
            LogLin c1 = Rational(-1) * beta * la;
            c1.constant -= beta;
            out.c[1] += scale * c1;
            // k >= 2: (-1)^(k+1) beta^k / (alpha^(k-1) k (k-1))
            Rational ratio = beta;
            for (int k = 2; k <= K; ++k) {
                ratio *= beta / alpha;
                Rational term = ratio / Rational(k * (k - 1));
                if (k % 2 == 1) out.c[k].constant += scale * term;
                else            out.c[k].constant -= scale * term;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Essential conditionality certificates.

/// Witness that box + lambda * sum of assumption deltas is negative for all
/// sufficiently small eps, for every fixed lambda >= 0: at the leading
/// order k the conclusion carries a positive log-eps coefficient while the
/// assumptions are analytic, so eps^k log(eps) -> 0^- dominates.
struct EssentialCertificate {
    int order = 0;                          // leading order k
    Rational d;                             // log-eps coefficient of the conclusion, > 0
    std::vector<LogLin> assumption_coeffs;  // order-k analytic coefficients per assumption
};

inline std::optional<EssentialCertificate> prove_essential(
    const std::vector<CIStatement>& assumptions, const CurveFamily& fam, int K = 4) {
    JointTable limit = limit_table(fam);
    for (const CIStatement& s : assumptions)
        if (!holds_exact(limit, s))
            throw LimitViolatesAssumptions("limit table violates " + s.str());

    EpsSeries conclusion = functional_series(ingleton_xyzu(), fam, K);
    std::vector<EpsSeries> deltas;
    for (const CIStatement& s : assumptions)
        deltas.push_back(functional_series(delta_functional(s), fam, K));

    int k = -1;
    for (int o = 0; o <= K; ++o)
        if (!conclusion.term_zero(o)) { k = o; break; }
    if (k < 0) return std::nullopt;  // conclusion series identically zero up to K

    for (int o = 0; o < k; ++o)
        for (const EpsSeries& ds : deltas)
            if (!ds.term_zero(o)) return std::nullopt;
    if (!(conclusion.d[k] > 0)) return std::nullopt;
    for (const EpsSeries& ds : deltas)
        if (ds.d[k] != 0) return std::nullopt;

    EssentialCertificate cert;
    cert.order = k;
    cert.d = conclusion.d[k];
    for (const EpsSeries& ds : deltas) cert.assumption_coeffs.push_back(ds.c[k]);
    return cert;
}

/// Deterministic stream of valid recipe partitions.  Classes are drawn with
/// a sparse profile (expected sizes |D| = 10, |A| = 4, |B| = |C| = 1):
/// dense supports almost never satisfy the CI assumptions in the limit, so
/// uniform class assignment finds no witnesses in practice.
inline std::vector<CurveFamily> sample_families(std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<CurveFamily> out;
    while (int(out.size()) < count) {
        std::array<AtomClass, kNumAtoms> p;
        for (int a = 0; a < kNumAtoms; ++a) {
            unsigned r = rng() & 15;
            p[a] = r < 10 ? AtomClass::D : r < 14 ? AtomClass::A : r < 15 ? AtomClass::B : AtomClass::C;
        }
        CurveFamily fam;
        fam.part = p;
        if (fam.count(AtomClass::A) + fam.count(AtomClass::B) == 0 || fam.count(AtomClass::C) == 0)
            continue;
        out.push_back(fam);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization.

inline nlohmann::json family_to_json(const CurveFamily& fam) {
    nlohmann::json out;
    for (AtomClass cls : {AtomClass::A, AtomClass::B, AtomClass::C, AtomClass::D}) {
        nlohmann::json list = nlohmann::json::array();
        for (int a = 0; a < kNumAtoms; ++a)
            if (fam.part[a] == cls) list.push_back(atom_name(a));
        out[std::string(1, "ABCD"[int(cls)])] = list;
    }
    return out;
}

inline CurveFamily family_from_json(const nlohmann::json& j) {
    std::array<AtomClass, kNumAtoms> p;
    p.fill(AtomClass::D);
    for (AtomClass cls : {AtomClass::A, AtomClass::B, AtomClass::C, AtomClass::D}) {
        std::string key(1, "ABCD"[int(cls)]);
        if (!j.contains(key)) continue;
        for (const auto& name : j[key]) p[atom_from_name(name.get<std::string>())] = cls;
    }
    return CurveFamily(p);
}

inline nlohmann::json certificate_to_json(const EssentialCertificate& cert) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const LogLin& x : cert.assumption_coeffs) coeffs.push_back(loglin_to_json(x));
    return nlohmann::json{
        {"order", cert.order}, {"d", rational_str(cert.d)}, {"assumption_coeffs", coeffs}};
}

}  // namespace ingleton
