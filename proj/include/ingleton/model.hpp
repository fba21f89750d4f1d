#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ingleton/ci.hpp"
#include "ingleton/dist.hpp"
#include "ingleton/entropy.hpp"
#include "ingleton/ingleton_expr.hpp"
#include "ingleton/nelder_mead.hpp"
#include "ingleton/numeric.hpp"
#include "ingleton/parallel.hpp"
#include "ingleton/poly.hpp"

namespace ingleton {

struct OutsideModel : std::runtime_error {
    explicit OutsideModel(const std::string& what) : std::runtime_error(what) {}
};
struct NegativeDiscriminant : std::runtime_error {
    explicit NegativeDiscriminant(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateQuadratic : std::runtime_error {
    explicit DegenerateQuadratic(const std::string& what) : std::runtime_error(what) {}
};
struct StartOutsideRegion : std::runtime_error {
    explicit StartOutsideRegion(const std::string& what) : std::runtime_error(what) {}
};

/// Point in the three free parameters of the support-constrained model.
template <class T>
struct ParamPointT {
    T p0110, p1011, p1111;
};
using ParamPoint = ParamPointT<Rational>;
using ParamPointF = ParamPointT<double>;

namespace detail {

// Evaluates the rational parametrization of the support-constrained model
// in dependency order (p1001 first; later formulas consume earlier values).
// Returns false if a denominator vanishes or any derived atom is <= 0.
template <class T>
bool eval_param_atoms(const ParamPointT<T>& pt, std::array<T, kNumAtoms>& out) {
    const T x = pt.p0110, y = pt.p1011, z = pt.p1111;
    if (!(x > 0 && x < 1 && y > 0 && y < 1 && z > 0 && z < 1)) return false;

    const T yz = y + z;
    const T den1001 = (x + y) * (2 * y + z);
    if (!(den1001 > 0 && yz > 0)) return false;
    const T p1001 = (y * y * (1 - 2 * x - 2 * y) + y * z * (1 - x - 3 * y - z)) / den1001;
    if (!(p1001 > 0)) return false;
    const T p0101 = p1001 * y / yz;
    const T p1010 = x * y / yz;
    const T p0000 = x * p1001 * z / (y * yz);
    const T p0111 = p0101 * yz / p1001;
    const T p0100 = p0101 * x / p0111;
    const T p1000 = p1001 * p1010 / y;
    // remaining positivity is automatic in exact arithmetic; the checks
    // guard the floating instantiation
    for (const T& v : {p0101, p1010, p0000, p0111, p0100, p1000})
        if (!(v > 0)) return false;

    out.fill(T(0));
    out[0b0000] = p0000;
    out[0b0100] = p0100;
    out[0b0101] = p0101;
    out[0b0110] = x;
    out[0b0111] = p0111;
    out[0b1000] = p1000;
    out[0b1001] = p1001;
    out[0b1010] = p1010;
    out[0b1011] = y;
    out[0b1111] = z;
    return true;
}

inline double eval_on_atoms(const LinFunctional& f, const std::array<double, kNumAtoms>& atoms) {
    double v = 0;
    for (VarSet I = 0; I < kNumSubsets; ++I) {
        if (f.coeff[I] == 0) continue;
        double cells[kNumSubsets] = {};
        for (int a = 0; a < kNumAtoms; ++a) cells[project_atom(a, I)] += atoms[a];
        double h = 0;
        for (int ci = 0; ci < (1 << set_size(I)); ++ci)
            if (cells[ci] > 0) h -= cells[ci] * std::log(cells[ci]);
        v += f.coeff[I] * h;
    }
    return v;
}

}  // namespace detail

inline JointTable param_to_table(const ParamPoint& pt) {
    std::array<Rational, kNumAtoms> atoms;
    if (!detail::eval_param_atoms(pt, atoms))
        throw OutsideModel("parameters (" + rational_str(pt.p0110) + ", " + rational_str(pt.p1011) +
                           ", " + rational_str(pt.p1111) + ") leave the model");
    Rational sum = 0;
    for (const Rational& a : atoms) sum += a;
    if (sum != 1) throw OutsideModel("derived atoms do not sum to 1");  // unreachable for the exact formulas
    return make_table(std::move(atoms));
}

inline bool membership_T1(const ParamPoint& pt) {
    std::array<Rational, kNumAtoms> atoms;
    return detail::eval_param_atoms(pt, atoms);
}

inline bool membership_T1(const ParamPointF& pt) {
    std::array<double, kNumAtoms> atoms;
    return detail::eval_param_atoms(pt, atoms);
}

// ---------------------------------------------------------------------------
// The independence constraint for X _|_ Y under the parametrization, as a
// polynomial identity in (p0110, p1011, p1111) = (x, y, z).

/// Coefficients of the constraint as a quadratic A x^2 + B x + C in p0110,
/// with A, B, C integer polynomials in (p1011, p1111).
struct ConstraintQuadratic {
    Poly<2> A, B, C;  // variables: 0 = p1011 (y), 1 = p1111 (z)
};

inline const ConstraintQuadratic& constraint_quadratic() {
    static const ConstraintQuadratic q = [] {
        using P = Poly<3>;  // 0 = x, 1 = y, 2 = z
        const P x = P::var(0), y = P::var(1), z = P::var(2), one = P::constant(1);
        P lhs = y * y * ((y + z) * (y + z) * (y + z)) +
                x * x * z *
                    (2 * (y * y * y) + z * z * z * z + y * (z * z) * (one + 4 * z) +
                     y * y * z * (P::constant(3) + 4 * z)) +
                x * (y * y * y * y + 5 * y * (z * z * z * z * z) + z * z * z * z * z * z +
                     2 * (y * y * y) * (z + 2 * (z * z * z)) + y * y * (z * z + 8 * (z * z * z * z)));
        P rhs = z * (2 * (y * y) + 3 * (y * z) + z * z) * (y * y * y + y * y * z + x * (z * z));
        P full = lhs - rhs;

        // collect powers of x
        ConstraintQuadratic out;
        for (const auto& [m, c] : full.terms) {
            Poly<2>::Monomial yz{m[1], m[2]};
            Poly<2>* dst = m[0] == 2 ? &out.A : (m[0] == 1 ? &out.B : &out.C);
            if (m[0] > 2) throw std::logic_error("constraint is not quadratic in p0110");
            dst->terms[yz] += c;
        }
        return out;
    }();
    return q;
}

/// LHS minus RHS of the constraint identity; zero on points of the model
/// whose image table satisfies X _|_ Y.
inline Rational xy_constraint_residual(const ParamPoint& pt) {
    const ConstraintQuadratic& q = constraint_quadratic();
    std::array<Rational, 2> yz{pt.p1011, pt.p1111};
    return q.A.eval(yz) * pt.p0110 * pt.p0110 + q.B.eval(yz) * pt.p0110 + q.C.eval(yz);
}

/// Discriminant of the constraint quadratic, derived symbolically as
/// B^2 - 4AC.
inline const Poly<2>& discriminant_poly() {
    static const Poly<2> d = [] {
        const ConstraintQuadratic& q = constraint_quadratic();
        return q.B * q.B - 4ll * (q.A * q.C);
    }();
    return d;
}

/// The integer under the square root for p1011 = a/b, p1111 = c/d: the
/// discriminant times the square (b^4 d^6)^2.
inline Integer discriminant_numerator(const Integer& a, const Integer& b, const Integer& c,
                                      const Integer& d) {
    if (!(a > 0 && c > 0 && a < b && c < d))
        throw std::invalid_argument("discriminant_numerator expects 0 < a/b < 1 and 0 < c/d < 1");
    const Poly<2>& dp = discriminant_poly();
    const int ydeg = dp.degree_in(0), zdeg = dp.degree_in(1);  // 8 and 12
    Integer out = 0;
    for (const auto& [m, coef] : dp.terms) {
        Integer t = coef;
        t *= boost::multiprecision::pow(a, unsigned(m[0]));
        t *= boost::multiprecision::pow(b, unsigned(ydeg - m[0]));
        t *= boost::multiprecision::pow(c, unsigned(m[1]));
        t *= boost::multiprecision::pow(d, unsigned(zdeg - m[1]));
        out += t;
    }
    return out;
}

/// Roots of the constraint quadratic in p0110 at exact (p1011, p1111):
/// rational_part +- sqrt_multiple * sqrt(disc_num).
struct P0110Solution {
    Rational rational_part;
    Rational sqrt_multiple;
    Integer disc_num;
    bool exact = false;              // discriminant is a perfect rational square
    std::vector<Rational> roots;     // ascending, filled when exact
    std::optional<Rational> f;       // root in (0,1) inside the model; smaller if both
};

inline P0110Solution solve_p0110(const Rational& p1011, const Rational& p1111) {
    const ConstraintQuadratic& q = constraint_quadratic();
    std::array<Rational, 2> yz{p1011, p1111};
    const Rational A = q.A.eval(yz), B = q.B.eval(yz), C = q.C.eval(yz);
    if (A == 0) throw DegenerateQuadratic("leading coefficient vanishes at (" +
                                          rational_str(p1011) + ", " + rational_str(p1111) + ")");
    const Rational disc = B * B - 4 * A * C;
    if (disc < 0) throw NegativeDiscriminant("no real root at (" + rational_str(p1011) + ", " +
                                             rational_str(p1111) + ")");

    P0110Solution sol;
    sol.rational_part = -B / (2 * A);
    const Integer b4d6 = boost::multiprecision::pow(denominator(p1011), 4) *
                         boost::multiprecision::pow(denominator(p1111), 6);
    sol.sqrt_multiple = Rational(1, 2 * boost::multiprecision::abs(numerator(A)) * b4d6) *
                        Rational(denominator(A), 1);
    sol.disc_num = disc == 0 ? Integer(0) : numerator(disc) * (b4d6 * b4d6 / denominator(disc));

    Integer rn, rd;
    if (is_perfect_square(numerator(disc), &rn) && is_perfect_square(denominator(disc), &rd)) {
        sol.exact = true;
        Rational s(rn, rd);
        sol.roots = {(-B - s) / (2 * A), (-B + s) / (2 * A)};
        std::sort(sol.roots.begin(), sol.roots.end());
        for (const Rational& r : sol.roots) {
            if (r <= 0 || r >= 1) continue;
            if (membership_T1(ParamPoint{r, p1011, p1111})) { sol.f = r; break; }
        }
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Non-Ingleton scores.

enum class Score { Rho1, Rho2 };

/// rho1 = H(Y|XZ) + H(X|YU) - H(XY|ZU); equals -box on the model with
/// Z_|_U|XY and the bracketing pair of assumptions.
inline LinFunctional rho1_functional() {
    LinFunctional f;
    const VarSet X = var_bit(VarX), Y = var_bit(VarY), Z = var_bit(VarZ), U = var_bit(VarU);
    f[X | Y | Z] += 1;
    f[X | Z] -= 1;
    f[X | Y | U] += 1;
    f[Y | U] -= 1;
    f[X | Y | Z | U] -= 1;
    f[Z | U] += 1;
    return f;
}

/// rho2 = H(ZU) - H(Z|X) - H(U|Y); equals -box on the model with X_|_Y and
/// the bracketing pair of assumptions.
inline LinFunctional rho2_functional() {
    LinFunctional f;
    const VarSet X = var_bit(VarX), Y = var_bit(VarY), Z = var_bit(VarZ), U = var_bit(VarU);
    f[Z | U] += 1;
    f[X | Z] -= 1;
    f[X] += 1;
    f[Y | U] -= 1;
    f[Y] += 1;
    return f;
}

inline LinFunctional score_functional(Score which) {
    return which == Score::Rho1 ? rho1_functional() : rho2_functional();
}

inline double score(const JointTable& t, Score which) {
    return eval(score_functional(which), entropy_vector(t));
}

inline double score(const ParamPoint& pt, Score which) { return score(param_to_table(pt), which); }

// ---------------------------------------------------------------------------
// Exhaustive search for rational counterexamples.

struct SearchBounds {
    Rational lo0110, hi0110;
    Rational lo1011, hi1011;
    Rational lo1111, hi1111;
    long max_b = 99;  // denominator bound for p1011
    long max_d = 11;  // denominator bound for p1111
};

/// The search box, inflated by pct percent on each side (lo scaled down,
/// hi scaled up).  The found point p1011 = 2/99 lies slightly above the
/// nominal upper bound 3/160, so a 10% inflation is the default; final
/// validation is exact, so inflation cannot admit false positives.
inline SearchBounds default_search_bounds(int inflate_pct = 10, long max_b = 99, long max_d = 11) {
    SearchBounds b;
    const Rational lo = Rational(100 - inflate_pct, 100), hi = Rational(100 + inflate_pct, 100);
    b.lo0110 = lo * Rational(1, 6);
    b.hi0110 = hi * Rational(3, 6);
    b.lo1011 = lo * Rational(1, 160);
    b.hi1011 = hi * Rational(3, 160);
    b.lo1111 = lo * Rational(1, 8);
    b.hi1111 = hi * Rational(3, 8);
    b.max_b = max_b;
    b.max_d = max_d;
    return b;
}

struct SearchCandidate {
    long a, b, c, d;     // p1011 = a/b, p1111 = c/d
    Rational p0110;
    JointTable table;
    SignCertificate certificate;
};

/// Enumerates reduced fractions a/b, c/d in the configured rectangles with
/// b <= max_b, d <= max_d, keeps pairs whose discriminant numerator is a
/// perfect square, and fully verifies each rational root: membership in the
/// model, vanishing residual and a negative exact Ingleton sign.
inline std::vector<SearchCandidate> search_rational(const SearchBounds& bounds,
                                                    unsigned threads = 1) {
    auto numerators_in = [](const Rational& lo, const Rational& hi, long den) {
        std::vector<long> out;
        const Integer d(den);
        Integer first = numerator(lo) * d / denominator(lo);
        while (Rational(first, d) < lo) ++first;
        for (Integer n = first; Rational(n, d) <= hi; ++n)
            if (n > 0 && n < d && boost::multiprecision::gcd(n, d) == 1)
                out.push_back(n.convert_to<long>());
        return out;
    };

    const LinFunctional box = ingleton_xyzu();
    std::vector<std::vector<SearchCandidate>> partial(bounds.max_b);
    parallel_for(size_t(bounds.max_b), threads, [&](size_t bi) {
        const long b = long(bi) + 1;
        for (long a : numerators_in(bounds.lo1011, bounds.hi1011, b)) {
            const Rational y(a, b);
            for (long d = 1; d <= bounds.max_d; ++d) {
                for (long c : numerators_in(bounds.lo1111, bounds.hi1111, d)) {
                    const Rational z(c, d);
                    if (!is_perfect_square(discriminant_numerator(a, b, c, d))) continue;
                    P0110Solution sol = solve_p0110(y, z);
                    for (const Rational& r : sol.roots) {
                        if (r <= 0 || r >= 1) continue;
                        ParamPoint pt{r, y, z};
                        if (!membership_T1(pt)) continue;
                        if (xy_constraint_residual(pt) != 0)
                            throw std::logic_error("quadratic root with nonzero residual");
                        JointTable t = param_to_table(pt);
                        SignCertificate cert = exact_sign(box, t);
                        if (cert.sign == -1)
                            partial[bi].push_back({a, b, c, d, r, t, cert});
                    }
                }
            }
        }
    });

    std::vector<SearchCandidate> out;
    for (auto& p : partial)
        out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    std::sort(out.begin(), out.end(), [](const SearchCandidate& l, const SearchCandidate& r) {
        return std::tie(l.b, l.d, l.a, l.c, l.p0110) < std::tie(r.b, r.d, r.a, r.c, r.p0110);
    });
    return out;
}

inline nlohmann::json search_results_json(const std::vector<SearchCandidate>& cs) {
    nlohmann::json out = nlohmann::json::array();
    for (const SearchCandidate& c : cs)
        out.push_back({{"a", c.a},
                       {"b", c.b},
                       {"c", c.c},
                       {"d", c.d},
                       {"p0110", rational_str(c.p0110)},
                       {"certificate", certificate_to_json(c.certificate)}});
    return out;
}

// ---------------------------------------------------------------------------
// Score map over the (p1111, p1011) parameter plane.

enum class CellStatus { Invalid, Neg, Pos };

inline const char* status_name(CellStatus s) {
    switch (s) {
        case CellStatus::Invalid: return "INVALID";
        case CellStatus::Neg: return "NEG";
        default: return "POS";
    }
}

/// Solves the constraint numerically at one parameter point and classifies
/// the resulting model member by the sign of rho2.
inline std::pair<CellStatus, double> classify_point(double p1111, double p1011) {
    const ConstraintQuadratic& q = constraint_quadratic();
    std::array<double, 2> yz{p1011, p1111};
    const double A = q.A.eval(yz), B = q.B.eval(yz), C = q.C.eval(yz);
    if (std::abs(A) < 1e-14) return {CellStatus::Invalid, std::nan("")};
    const double disc = B * B - 4 * A * C;
    if (disc < 0) return {CellStatus::Invalid, std::nan("")};
    const double s = std::sqrt(disc);
    for (double root : {(-B - s) / (2 * A), (-B + s) / (2 * A)}) {
        ParamPointF pt{root, p1011, p1111};
        std::array<double, kNumAtoms> atoms;
        if (!(root > 0 && root < 1) || !detail::eval_param_atoms(pt, atoms)) continue;
        double sc = detail::eval_on_atoms(rho2_functional(), atoms);
        return {sc > 0 ? CellStatus::Pos : CellStatus::Neg, sc};
    }
    return {CellStatus::Invalid, std::nan("")};
}

struct HeatmapCell {
    double p1111, p1011;
    CellStatus status;
    double score;
};

/// Evenly spaced resolution x resolution grid over the given ranges,
/// endpoints included.
inline std::vector<HeatmapCell> heatmap(double x_lo, double x_hi, double y_lo, double y_hi,
                                        int resolution, unsigned threads = 1) {
    if (resolution < 2) throw std::invalid_argument("heatmap resolution must be >= 2");
    std::vector<HeatmapCell> grid(size_t(resolution) * resolution);
    parallel_for(size_t(resolution), threads, [&](size_t row) {
        double p1011 = y_lo + (y_hi - y_lo) * double(row) / (resolution - 1);
        for (int col = 0; col < resolution; ++col) {
            double p1111 = x_lo + (x_hi - x_lo) * double(col) / (resolution - 1);
            auto [status, sc] = classify_point(p1111, p1011);
            grid[row * resolution + col] = {p1111, p1011, status, sc};
        }
    });
    return grid;
}

inline std::string heatmap_csv(const std::vector<HeatmapCell>& grid) {
    std::string out = "p1111,p1011,status,score\n";
    char buf[128];
    for (const HeatmapCell& c : grid) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%s,%.10g\n", c.p1111, c.p1011,
                      status_name(c.status), c.score);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Local score optimization.

enum class OptimizeMode { Max, Min };

struct Box3 {
    std::array<double, 3> lo, hi;

    bool contains(const std::array<double, 3>& p) const {
        for (int k = 0; k < 3; ++k)
            if (p[k] < lo[k] || p[k] > hi[k]) return false;
        return true;
    }
};

/// The nominal search box of the counterexample hunt.
inline Box3 score_box() {
    return Box3{{1.0 / 6, 1.0 / 160, 1.0 / 8}, {3.0 / 6, 3.0 / 160, 3.0 / 8}};
}

struct OptimizeResult {
    ParamPointF point;
    double value;
};

/// Derivative-free local search of a score over the model, optionally
/// restricted to a box; leaving the feasible set is penalized by distance.
inline OptimizeResult optimize_score(const ParamPointF& start, Score which, OptimizeMode mode,
                                     const std::optional<Box3>& region = std::nullopt) {
    auto feasible = [&](const std::array<double, 3>& p) {
        if (region && !region->contains(p)) return false;
        return membership_T1(ParamPointF{p[0], p[1], p[2]});
    };
    std::array<double, 3> x0{start.p0110, start.p1011, start.p1111};
    if (!feasible(x0)) throw StartOutsideRegion("start point is not in the feasible region");

    const double flip = mode == OptimizeMode::Max ? -1.0 : 1.0;
    auto objective = [&](const std::array<double, 3>& p) {
        if (!feasible(p)) {
            double pen = 1e3;
            if (region)
                for (int k = 0; k < 3; ++k) {
                    if (p[k] < region->lo[k]) pen += (region->lo[k] - p[k]) * (region->lo[k] - p[k]);
                    if (p[k] > region->hi[k]) pen += (p[k] - region->hi[k]) * (p[k] - region->hi[k]);
                }
            return pen;
        }
        std::array<double, kNumAtoms> atoms;
        detail::eval_param_atoms(ParamPointF{p[0], p[1], p[2]}, atoms);
        return flip * detail::eval_on_atoms(score_functional(which), atoms);
    };

    NelderMead<3> nm;
    auto [best, value] = nm.minimize(objective, x0);
    return {ParamPointF{best[0], best[1], best[2]}, flip * value};
}

}  // namespace ingleton
