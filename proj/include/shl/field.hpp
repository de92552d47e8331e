#pragma once

// Exact arithmetic in the real cyclotomic field Q(theta), theta = 2cos(pi/N).
// Values are power-basis vectors of rationals reduced mod the minimal
// polynomial of theta; sign determination refines an exact isolating interval
// for theta until the interval evaluation of the value excludes zero.

#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "common.hpp"

namespace shl {

namespace detail {

// ---- dense univariate polynomials, little-endian coefficient vectors ----

template <class C>
inline void poly_trim(std::vector<C>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class C>
inline std::vector<C> poly_mul(const std::vector<C>& a, const std::vector<C>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<C> r(a.size() + b.size() - 1, C(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

// Exact division over Z, throws if the division leaves a remainder.
inline std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
    if (den.empty()) throw InternalError("poly_div_exact: zero divisor");
    std::vector<Int> q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Int(0));
    for (size_t k = q.size(); k-- > 0;) {
        if (num.size() < den.size() + k) continue;
        Int c = num[den.size() - 1 + k];
        if (c == 0) continue;
        if (c % den.back() != 0) throw InternalError("poly_div_exact: not divisible");
        Int f = c / den.back();
        q[k] = f;
        for (size_t i = 0; i < den.size(); ++i) num[i + k] -= f * den[i];
    }
    poly_trim(num);
    if (!num.empty()) throw InternalError("poly_div_exact: nonzero remainder");
    return q;
}

inline const std::vector<Int>& cyclotomic(unsigned n, std::vector<std::vector<Int>>& memo) {
    if (memo.size() <= n) memo.resize(n + 1);
    if (!memo[n].empty()) return memo[n];
    std::vector<Int> p(n + 1, Int(0));
    p[0] = -1;
    p[n] = 1;  // x^n - 1
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0) p = poly_div_exact(std::move(p), cyclotomic(d, memo));
    memo[n] = std::move(p);
    return memo[n];
}

// Dickson polynomials: D_0 = 2, D_1 = x, D_{k+1} = x D_k - D_{k-1};
// they satisfy D_k(2cos t) = 2cos(kt).
inline std::vector<Int> dickson(unsigned k) {
    std::vector<Int> a{Int(2)}, b{Int(0), Int(1)};
    if (k == 0) return a;
    for (unsigned i = 1; i < k; ++i) {
        std::vector<Int> c(b.size() + 1, Int(0));
        for (size_t j = 0; j < b.size(); ++j) c[j + 1] = b[j];
        for (size_t j = 0; j < a.size(); ++j) c[j] -= a[j];
        poly_trim(c);
        a = std::move(b);
        b = std::move(c);
    }
    return b;
}

template <class C>
inline Rat poly_eval(const std::vector<C>& p, const Rat& x) {
    Rat r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + Rat(p[i]);
    return r;
}

// Sturm chain root counting for a squarefree rational polynomial.
inline std::vector<std::vector<Rat>> sturm_chain(std::vector<Rat> p) {
    std::vector<std::vector<Rat>> chain;
    poly_trim(p);
    if (p.empty()) return chain;
    chain.push_back(p);
    std::vector<Rat> d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = Rat(static_cast<long>(i)) * p[i];
    poly_trim(d);
    if (!d.empty()) chain.push_back(d);
    while (chain.back().size() > 1) {
        // negated remainder of the previous two entries
        std::vector<Rat> r = chain[chain.size() - 2];
        const std::vector<Rat>& g = chain.back();
        while (r.size() >= g.size()) {
            Rat f = r.back() / g.back();
            size_t off = r.size() - g.size();
            for (size_t i = 0; i < g.size(); ++i) r[i + off] -= f * g[i];
            poly_trim(r);
            if (r.empty()) break;
        }
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sturm_variations(const std::vector<std::vector<Rat>>& chain, const Rat& x) {
    int v = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sgn(poly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

// number of distinct real roots in (a, b]
inline int sturm_count(const std::vector<std::vector<Rat>>& chain, const Rat& a, const Rat& b) {
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

}  // namespace detail

class FieldDescriptor;
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

class FieldDescriptor : public std::enable_shared_from_this<FieldDescriptor> {
public:
    // theta = 2cos(pi/N); N >= 1
    static FieldPtr create(unsigned N) {
        if (N == 0) throw InputError("field conductor must be >= 1");
        return FieldPtr(new FieldDescriptor(N));
    }

    unsigned conductor() const { return N_; }
    unsigned degree() const { return deg_; }

    // monic minimal polynomial of theta over Q, little-endian, integer coeffs
    const std::vector<Int>& minimal_polynomial() const { return minpoly_; }

    // current isolating interval (refined on demand, only ever shrinks)
    std::pair<Rat, Rat> isolating_interval() const {
        std::lock_guard<std::mutex> g(mu_);
        return {lo_, hi_};
    }

    // shrink the isolating interval below a requested width
    std::pair<Rat, Rat> isolating_interval(const Rat& width) const {
        std::lock_guard<std::mutex> g(mu_);
        while (hi_ - lo_ > width) refine_locked();
        return {lo_, hi_};
    }

    // Sign of sum c_k theta^k for a reduced coefficient vector.
    int sign_of(const std::vector<Rat>& c) const {
        bool zero = true;
        for (const auto& q : c)
            if (sgn(q) != 0) {
                zero = false;
                break;
            }
        if (zero) return 0;
        if (deg_ == 1) {
            // theta itself is rational: value = c0 + c1*theta with deg 1 means c has length 1
            return sgn(c[0]);
        }
        std::lock_guard<std::mutex> g(mu_);
        for (;;) {
            auto [vlo, vhi] = interval_eval(c);
            if (sgn(vlo) > 0) return 1;
            if (sgn(vhi) < 0) return -1;
            refine_locked();
            refine_locked();
        }
    }

    // reduce an arbitrary power-basis vector mod the minimal polynomial
    std::vector<Rat> reduce(std::vector<Rat> c) const {
        if (c.size() <= deg_) {
            c.resize(deg_, Rat(0));
            return c;
        }
        for (size_t k = c.size(); k-- > deg_;) {
            Rat f = c[k];
            if (sgn(f) != 0) {
                // theta^k = theta^{k-deg} * (-(lower part of minpoly))
                for (unsigned i = 0; i < deg_; ++i)
                    c[k - deg_ + i] -= f * Rat(minpoly_[i]);
            }
            c.pop_back();
        }
        c.resize(deg_, Rat(0));
        return c;
    }

private:
    explicit FieldDescriptor(unsigned N) : N_(N) {
        if (N == 1) {
            minpoly_ = {Int(2), Int(1)};  // x + 2, theta = -2
        } else {
            std::vector<std::vector<Int>> memo;
            const auto& phi = detail::cyclotomic(2 * N, memo);
            // phi has even degree 2d and is palindromic; fold z^k + z^-k = D_k(x)
            size_t d = (phi.size() - 1) / 2;
            std::vector<Int> q{phi[d]};
            for (size_t k = 1; k <= d; ++k) {
                auto dk = detail::dickson(static_cast<unsigned>(k));
                for (auto& cc : dk) cc *= phi[d + k];
                if (dk.size() > q.size()) q.resize(dk.size(), Int(0));
                for (size_t i = 0; i < dk.size(); ++i) q[i] += dk[i];
            }
            detail::poly_trim(q);
            minpoly_ = std::move(q);
        }
        deg_ = static_cast<unsigned>(minpoly_.size() - 1);
        isolate_largest_root();
    }

    // Largest real root of the minimal polynomial is 2cos(pi/N) (its conjugates
    // are 2cos(k pi/N) for the other admissible k). Sturm bisection from [-3,3].
    void isolate_largest_root() {
        if (deg_ == 1) {
            lo_ = hi_ = Rat(-minpoly_[0]) / Rat(minpoly_[1]);
            sign_at_lo_ = 0;
            return;
        }
        std::vector<Rat> p(minpoly_.size());
        for (size_t i = 0; i < minpoly_.size(); ++i) p[i] = Rat(minpoly_[i]);
        auto chain = detail::sturm_chain(p);
        Rat a(-3), b(3);
        while (detail::sturm_count(chain, a, b) > 1) {
            Rat m = (a + b) / 2;
            if (detail::sturm_count(chain, m, b) >= 1)
                a = m;
            else
                b = m;
        }
        lo_ = a;
        hi_ = b;
        sign_at_lo_ = sgn(detail::poly_eval(minpoly_, lo_));
        if (sign_at_lo_ == 0) throw InternalError("rational root of an irreducible minpoly");
    }

    void refine_locked() const {
        if (deg_ == 1) return;
        Rat m = (lo_ + hi_) / 2;
        int sm = sgn(detail::poly_eval(minpoly_, m));
        if (sm == 0) throw InternalError("rational root of an irreducible minpoly");
        if (sm == sign_at_lo_)
            lo_ = m;
        else
            hi_ = m;
    }

    // interval Horner evaluation of c at [lo_, hi_]
    std::pair<Rat, Rat> interval_eval(const std::vector<Rat>& c) const {
        Rat rlo(0), rhi(0);
        for (size_t i = c.size(); i-- > 0;) {
            // [rlo,rhi] * [lo_,hi_] + c[i]
            Rat p1 = rlo * lo_, p2 = rlo * hi_, p3 = rhi * lo_, p4 = rhi * hi_;
            Rat nlo = std::min(std::min(p1, p2), std::min(p3, p4));
            Rat nhi = std::max(std::max(p1, p2), std::max(p3, p4));
            rlo = nlo + c[i];
            rhi = nhi + c[i];
        }
        return {rlo, rhi};
    }

    unsigned N_ = 1;
    unsigned deg_ = 1;
    std::vector<Int> minpoly_;
    mutable std::mutex mu_;
    mutable Rat lo_, hi_;
    mutable int sign_at_lo_ = 0;
};

// An element of Q(theta) in canonical reduced power-basis form.
class AlgebraicReal {
public:
    AlgebraicReal() = default;
    AlgebraicReal(FieldPtr f, std::vector<Rat> coeffs) : field_(std::move(f)) {
        c_ = field_->reduce(std::move(coeffs));
        canonicalize();
    }

    static AlgebraicReal rational(const FieldPtr& f, const Rat& q) {
        std::vector<Rat> c(f->degree(), Rat(0));
        c[0] = q;
        return AlgebraicReal(f, std::move(c));
    }
    static AlgebraicReal zero(const FieldPtr& f) { return rational(f, Rat(0)); }
    static AlgebraicReal one(const FieldPtr& f) { return rational(f, Rat(1)); }

    // theta itself
    static AlgebraicReal generator(const FieldPtr& f) {
        std::vector<Rat> c(f->degree(), Rat(0));
        if (f->degree() == 1) {
            c[0] = Rat(-f->minimal_polynomial()[0]) / Rat(f->minimal_polynomial()[1]);
        } else {
            c[1] = 1;
        }
        return AlgebraicReal(f, std::move(c));
    }

    // 2cos(pi/m) as an element of this field; m in {1,2,3} is rational,
    // otherwise m must divide the conductor.
    static AlgebraicReal embed(const FieldPtr& f, unsigned m) {
        if (m == 0) throw InputError("embed: m must be >= 1");
        if (f->conductor() % m == 0) {
            auto dk = detail::dickson(f->conductor() / m);
            std::vector<Rat> c(dk.size());
            for (size_t i = 0; i < dk.size(); ++i) c[i] = Rat(dk[i]);
            // evaluate D_k at theta by power-basis composition
            return eval_poly_at_generator(f, c);
        }
        switch (m) {
            case 1: return rational(f, Rat(-2));
            case 2: return rational(f, Rat(0));
            case 3: return rational(f, Rat(1));
            default: throw InputError("embed: 2cos(pi/" + std::to_string(m) + ") does not lie in this field");
        }
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (sgn(q) != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) return false;
        return true;
    }
    const Rat& rational_part() const { return c_[0]; }

    int sign() const { return field_->sign_of(c_); }

    friend AlgebraicReal operator+(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same(b);
        std::vector<Rat> c(a.c_);
        for (size_t i = 0; i < c.size(); ++i) c[i] += b.c_[i];
        return AlgebraicReal(a.field_, std::move(c), tag{});
    }
    friend AlgebraicReal operator-(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same(b);
        std::vector<Rat> c(a.c_);
        for (size_t i = 0; i < c.size(); ++i) c[i] -= b.c_[i];
        return AlgebraicReal(a.field_, std::move(c), tag{});
    }
    AlgebraicReal operator-() const {
        std::vector<Rat> c(c_);
        for (auto& q : c) q = -q;
        return AlgebraicReal(field_, std::move(c), tag{});
    }
    friend AlgebraicReal operator*(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same(b);
        std::vector<Rat> c = detail::poly_mul(a.c_, b.c_);
        return AlgebraicReal(a.field_, a.field_->reduce(std::move(c)), tag{});
    }
    friend AlgebraicReal operator*(const Rat& q, const AlgebraicReal& a) {
        std::vector<Rat> c(a.c_);
        for (auto& x : c) x *= q;
        return AlgebraicReal(a.field_, std::move(c), tag{});
    }
    friend AlgebraicReal operator/(const AlgebraicReal& a, const AlgebraicReal& b) { return a * b.inverse(); }

    AlgebraicReal& operator+=(const AlgebraicReal& b) { return *this = *this + b; }
    AlgebraicReal& operator-=(const AlgebraicReal& b) { return *this = *this - b; }
    AlgebraicReal& operator*=(const AlgebraicReal& b) { return *this = *this * b; }

    AlgebraicReal inverse() const {
        if (is_zero()) throw InputError("division by zero field element");
        if (is_rational()) {
            std::vector<Rat> c(c_.size(), Rat(0));
            c[0] = Rat(1) / c_[0];
            return AlgebraicReal(field_, std::move(c), tag{});
        }
        // extended Euclid: u * this + v * minpoly = 1
        std::vector<Rat> r0(field_->minimal_polynomial().size());
        for (size_t i = 0; i < r0.size(); ++i) r0[i] = Rat(field_->minimal_polynomial()[i]);
        std::vector<Rat> r1(c_);
        detail::poly_trim(r1);
        std::vector<Rat> u0{}, u1{Rat(1)};  // coefficients of `this`
        while (true) {
            // divide r0 by r1
            std::vector<Rat> q;
            while (r0.size() >= r1.size() && !r0.empty()) {
                Rat f = r0.back() / r1.back();
                size_t off = r0.size() - r1.size();
                if (q.size() < off + 1) q.resize(off + 1, Rat(0));
                q[off] += f;
                for (size_t i = 0; i < r1.size(); ++i) r0[i + off] -= f * r1[i];
                detail::poly_trim(r0);
            }
            // r0 is now the remainder; u_new = u0 - q*u1
            std::vector<Rat> qu = detail::poly_mul(q, u1);
            if (u0.size() < qu.size()) u0.resize(qu.size(), Rat(0));
            for (size_t i = 0; i < qu.size(); ++i) u0[i] -= qu[i];
            detail::poly_trim(u0);
            if (r0.empty()) throw InternalError("inverse: gcd degenerate");
            if (r0.size() == 1) {
                for (auto& x : u0) x /= r0[0];
                return AlgebraicReal(field_, field_->reduce(std::move(u0)), tag{});
            }
            std::swap(r0, r1);
            std::swap(u0, u1);
        }
    }

    friend bool operator==(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const AlgebraicReal& a, const AlgebraicReal& b) { return !(a == b); }

    // order via exact sign of the difference
    int compare(const AlgebraicReal& b) const { return (*this - b).sign(); }

    // stable text form: "q0,q1,...,q{d-1}"
    std::string key() const {
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += rat_str(c_[i]);
        }
        return s;
    }

    std::string str() const {
        if (is_rational()) return rat_str(c_[0]);
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            if (!first) os << " + ";
            os << rat_str(c_[i]);
            if (i >= 1) os << "*theta";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

    // double approximation, diagnostics only (never on a certified path)
    double approx() const {
        auto [lo, hi] = field_->isolating_interval(Rat(1, Int(1) << 48));
        double th = (lo.get_d() + hi.get_d()) / 2;
        double r = 0;
        for (size_t i = c_.size(); i-- > 0;) r = r * th + c_[i].get_d();
        return r;
    }

private:
    struct tag {};
    AlgebraicReal(FieldPtr f, std::vector<Rat> c, tag) : field_(std::move(f)), c_(std::move(c)) { canonicalize(); }

    static AlgebraicReal eval_poly_at_generator(const FieldPtr& f, const std::vector<Rat>& p) {
        AlgebraicReal th = generator(f), r = zero(f);
        for (size_t i = p.size(); i-- > 0;) r = r * th + rational(f, p[i]);
        return r;
    }

    void canonicalize() {
        for (auto& q : c_) q.canonicalize();
    }
    void check_same(const AlgebraicReal& b) const {
        if (field_.get() != b.field_.get()) throw InternalError("mixed field descriptors");
    }

    FieldPtr field_;
    std::vector<Rat> c_;
};

}  // namespace shl
