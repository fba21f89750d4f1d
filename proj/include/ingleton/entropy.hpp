#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>

#include <json.hpp>

#include "ingleton/dist.hpp"
#include "ingleton/numeric.hpp"
#include "ingleton/vars.hpp"

namespace ingleton {

/// Entropy vector in natural-log units, indexed by variable subsets.
using EntropyVector = std::array<double, kNumSubsets>;

/// Integer linear functional on R^16; the coefficient of the empty set may
/// be nonzero (difference expressions use it).
struct LinFunctional {
    std::array<int, kNumSubsets> coeff{};

    int& operator[](VarSet I) { return coeff[I]; }
    int operator[](VarSet I) const { return coeff[I]; }

    LinFunctional& operator+=(const LinFunctional& o) {
        for (int i = 0; i < kNumSubsets; ++i) coeff[i] += o.coeff[i];
        return *this;
    }
    LinFunctional& operator-=(const LinFunctional& o) {
        for (int i = 0; i < kNumSubsets; ++i) coeff[i] -= o.coeff[i];
        return *this;
    }
    LinFunctional& operator*=(int s) {
        for (int& c : coeff) c *= s;
        return *this;
    }
    friend LinFunctional operator+(LinFunctional a, const LinFunctional& b) { return a += b; }
    friend LinFunctional operator-(LinFunctional a, const LinFunctional& b) { return a -= b; }
    friend LinFunctional operator*(int s, LinFunctional f) { return f *= s; }

    bool operator==(const LinFunctional&) const = default;

    std::string str() const {
        std::string out;
        for (int i = 0; i < kNumSubsets; ++i) {
            if (coeff[i] == 0) continue;
            if (!out.empty() || coeff[i] < 0) out += coeff[i] < 0 ? " - " : " + ";
            if (std::abs(coeff[i]) != 1) out += std::to_string(std::abs(coeff[i])) + "*";
            out += "h(" + subset_name(VarSet(i)) + ")";
        }
        return out.empty() ? "0" : out;
    }
};

inline EntropyVector entropy_vector(const JointTable& t) {
    EntropyVector h{};
    for (VarSet I = 0; I < kNumSubsets; ++I) {
        double s = 0;
        for (const Rational& cell : marginal(t, I).cells) {
            if (cell == 0) continue;  // 0 log 0 = 0
            double p = to_double(cell);
            s -= p * std::log(p);
        }
        h[I] = s;
    }
    return h;
}

inline double eval(const LinFunctional& f, const EntropyVector& v) {
    double s = 0;
    for (int i = 0; i < kNumSubsets; ++i)
        if (f.coeff[i] != 0) s += f.coeff[i] * v[i];
    return s;
}

inline bool is_polymatroid(const EntropyVector& v, double tol) {
    if (!(std::abs(v[0]) <= tol)) return false;
    for (VarSet I = 0; I < kNumSubsets; ++I)
        for (VarSet J = 0; J < kNumSubsets; ++J) {
            if ((I & J) == I && !(v[I] <= v[J] + tol)) return false;  // monotone on I <= J
            if (!(v[I] + v[J] >= v[I | J] + v[I & J] - tol)) return false;
        }
    return true;
}

/// Exact sign certificate for the value of an integer functional on the
/// entropy vector of a rational table: with D the common denominator,
/// exp(D * f.h) is the positive rational num/den, stored in lowest terms.
struct SignCertificate {
    int sign = 0;    // comparison of num vs den
    Integer scale;   // D
    Integer num;
    Integer den;
};

inline SignCertificate exact_sign(const LinFunctional& f, const JointTable& t) {
    const Integer D = t.common_denominator();

    // D*(f.h) = (sum_I c_I) * D*log D - sum_I c_I * sum_cells m*log m
    // with every marginal cell equal to m/D.  Collect integer exponents
    // per base and exponentiate.
    std::map<Integer, Integer> expo;
    long long coeff_sum = 0;
    for (int i = 0; i < kNumSubsets; ++i) coeff_sum += f.coeff[i];
    expo[D] += Integer(coeff_sum) * D;

    for (VarSet I = 0; I < kNumSubsets; ++I) {
        if (f.coeff[I] == 0) continue;
        for (const Rational& cell : marginal(t, I).cells) {
            Integer m = numerator(cell) * (D / denominator(cell));
            if (m >= 2) expo[m] -= f.coeff[I] * m;
        }
    }

    SignCertificate cert;
    cert.scale = D;
    cert.num = 1;
    cert.den = 1;
    for (const auto& [base, e] : expo) {
        if (base <= 1 || e == 0) continue;
        unsigned long ee = boost::multiprecision::abs(e).convert_to<unsigned long>();
        Integer p = boost::multiprecision::pow(base, ee);
        if (e > 0) cert.num *= p; else cert.den *= p;
    }
    Integer g = boost::multiprecision::gcd(cert.num, cert.den);
    cert.num /= g;
    cert.den /= g;
    cert.sign = cert.num > cert.den ? 1 : (cert.num < cert.den ? -1 : 0);
    return cert;
}

inline nlohmann::json certificate_to_json(const SignCertificate& c) {
    std::string num = c.num.str(), den = c.den.str();
    return nlohmann::json{
        {"sign", c.sign},          {"scale", c.scale.str()},
        {"num_digits", num.size()}, {"den_digits", den.size()},
        {"num", num},              {"den", den},
    };
}

}  // namespace ingleton
