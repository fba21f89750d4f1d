#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace ingleton {

/// Sparse integer polynomial in N variables; plumbing for the constraint
/// quadratic and its discriminant.
template <int N>
struct Poly {
    using Monomial = std::array<int, N>;
    std::map<Monomial, long long> terms;

    static Poly constant(long long c) {
        Poly p;
        if (c != 0) p.terms[Monomial{}] = c;
        return p;
    }
    static Poly var(int k, int power = 1, long long c = 1) {
        Poly p;
        Monomial m{};
        m[k] = power;
        if (c != 0) p.terms[m] = c;
        return p;
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms) add(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms) add(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) {
                Monomial m;
                for (int k = 0; k < N; ++k) m[k] = ma[k] + mb[k];
                out.add(m, ca * cb);
            }
        return out;
    }
    friend Poly operator*(long long s, const Poly& p) { return Poly::constant(s) * p; }

    bool operator==(const Poly&) const = default;

    long long coefficient(const Monomial& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? 0 : it->second;
    }

    int degree_in(int k) const {
        int d = 0;
        for (const auto& [m, c] : terms) d = std::max(d, m[k]);
        return d;
    }

    template <class T>
    T eval(const std::array<T, N>& x) const {
        T out = T(0);
        for (const auto& [m, c] : terms) {
            T t = T(c);
            for (int k = 0; k < N; ++k)
                for (int e = 0; e < m[k]; ++e) t *= x[k];
            out += t;
        }
        return out;
    }

  private:
    void add(const Monomial& m, long long c) {
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh && (it->second += c) == 0) terms.erase(it);
    }
};

}  // namespace ingleton
