#pragma once

// Polynomial functions on the reflection representation: the ring R the
// bimodule theory lives over. Variables are the coordinate functions on h, so
// for s < rank the variable x_s is the simple root alpha_s. Group elements act
// by substitution, Demazure operators divide the difference f - s.f by the
// root alpha_s (an exact monomial-wise division).

#include "coxeter.hpp"

namespace shl {

using Mono = std::vector<std::uint8_t>;  // exponent vector

class Poly {
public:
    Poly() = default;
    Poly(FieldPtr f, size_t nvars) : field_(std::move(f)), nvars_(nvars) {}

    static Poly zero(const FieldPtr& f, size_t n) { return Poly(f, n); }

    static Poly constant(const FieldPtr& f, size_t n, AlgebraicReal c) {
        Poly p(f, n);
        if (!c.is_zero()) p.terms_.emplace(Mono(n, 0), std::move(c));
        return p;
    }

    static Poly one(const FieldPtr& f, size_t n) { return constant(f, n, AlgebraicReal::one(f)); }

    static Poly variable(const FieldPtr& f, size_t n, size_t i) {
        Poly p(f, n);
        Mono m(n, 0);
        m[i] = 1;
        p.terms_.emplace(std::move(m), AlgebraicReal::one(f));
        return p;
    }

    static Poly from_terms(const FieldPtr& f, size_t n, std::map<Mono, AlgebraicReal> terms) {
        Poly p(f, n);
        p.terms_ = std::move(terms);
        for (auto it = p.terms_.begin(); it != p.terms_.end();)
            it = it->second.is_zero() ? p.terms_.erase(it) : std::next(it);
        return p;
    }

    static Poly linear_form(const FieldPtr& f, const std::vector<AlgebraicReal>& row) {
        Poly p(f, row.size());
        for (size_t i = 0; i < row.size(); ++i) {
            if (row[i].is_zero()) continue;
            Mono m(row.size(), 0);
            m[i] = 1;
            p.terms_.emplace(std::move(m), row[i]);
        }
        return p;
    }

    const FieldPtr& field() const { return field_; }
    size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t num_terms() const { return terms_.size(); }
    const std::map<Mono, AlgebraicReal>& terms() const { return terms_; }

    // total degree; -1 for the zero polynomial
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, total(m));
        return d;
    }

    bool is_homogeneous() const {
        int d = -2;
        for (const auto& [m, c] : terms_) {
            if (d == -2)
                d = total(m);
            else if (total(m) != d)
                return false;
        }
        return true;
    }

    Poly homogeneous_component(int d) const {
        Poly p(field_, nvars_);
        for (const auto& [m, c] : terms_)
            if (total(m) == d) p.terms_.emplace(m, c);
        return p;
    }

    AlgebraicReal coefficient(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? AlgebraicReal::zero(field_) : it->second;
    }

    AlgebraicReal constant_term() const { return coefficient(Mono(nvars_, 0)); }

    // coefficient row of the degree-one part
    std::vector<AlgebraicReal> linear_part() const {
        std::vector<AlgebraicReal> row(nvars_, AlgebraicReal::zero(field_));
        for (const auto& [m, c] : terms_) {
            if (total(m) != 1) continue;
            for (size_t i = 0; i < nvars_; ++i)
                if (m[i] == 1) row[i] = c;
        }
        return row;
    }

    Poly& operator+=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    Poly operator-() const {
        Poly p(field_, nvars_);
        for (const auto& [m, c] : terms_) p.terms_.emplace(m, -c);
        return p;
    }

    Poly& operator*=(const AlgebraicReal& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const AlgebraicReal& c) { return a *= c; }
    friend Poly operator*(const AlgebraicReal& c, Poly a) { return a *= c; }
    friend Poly operator*(const Rat& q, Poly a) {
        return a *= AlgebraicReal::rational(a.field_, q);
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly p(a.field_, a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Mono m(a.nvars_);
                for (size_t i = 0; i < a.nvars_; ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
                p.add_term(std::move(m), ca * cb);
            }
        return p;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // ring endomorphism sending x_i to images[i]
    Poly subst(const std::vector<Poly>& images) const {
        if (images.size() != nvars_) throw InternalError("substitution needs one image per variable");
        std::vector<std::vector<Poly>> pw(nvars_);
        Poly out(field_, images.empty() ? nvars_ : images[0].nvars());
        for (const auto& [m, c] : terms_) {
            Poly t = constant(field_, out.nvars_, c);
            for (size_t i = 0; i < nvars_; ++i) {
                if (m[i] == 0) continue;
                t *= power_of(pw[i], images[i], m[i], out.nvars_);
            }
            out += t;
        }
        return out;
    }

    std::string str(const CoxeterSystem* W = nullptr) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            std::string mono;
            for (size_t i = 0; i < nvars_; ++i) {
                if (m[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += (W && i < W->rank()) ? "a" + W->letter_name(i) : "x" + std::to_string(i);
                if (m[i] > 1) mono += "^" + std::to_string(m[i]);
            }
            if (mono.empty())
                out += c.str();
            else if (c == AlgebraicReal::one(field_))
                out += mono;
            else
                out += "(" + c.str() + ")*" + mono;
        }
        return out;
    }

    std::string key() const {
        std::string out;
        for (const auto& [m, c] : terms_) {
            for (auto e : m) {
                out += std::to_string(e);
                out += '.';
            }
            out += c.key();
            out += ';';
        }
        return out;
    }

private:
    void check(const Poly& o) const {
        if (nvars_ != o.nvars_) throw InternalError("polynomial variable-count mismatch");
    }

    static int total(const Mono& m) {
        int d = 0;
        for (auto e : m) d += e;
        return d;
    }

    void add_term(Mono m, AlgebraicReal c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    static const Poly& power_of(std::vector<Poly>& cache, const Poly& base, unsigned e, size_t nv) {
        if (cache.empty()) {
            cache.push_back(Poly::one(base.field(), nv));
            cache.push_back(base);
        }
        while (cache.size() <= e) cache.push_back(cache.back() * base);
        return cache[e];
    }

    FieldPtr field_;
    size_t nvars_ = 0;
    std::map<Mono, AlgebraicReal> terms_;
};

// ---- Coxeter action and Demazure operators ----

// w . f by substitution: the image of x_i is row i of the matrix of w^{-1}
inline Poly act(const CoxeterSystem& W, ElementId w, const Poly& f) {
    const FMatrix& m = W.inverse_matrix(w);
    std::vector<Poly> images;
    images.reserve(W.rep_dim());
    for (size_t i = 0; i < W.rep_dim(); ++i) {
        std::vector<AlgebraicReal> row(W.rep_dim(), AlgebraicReal::zero(W.field()));
        for (size_t j = 0; j < W.rep_dim(); ++j) row[j] = m.at(i, j);
        images.push_back(Poly::linear_form(W.field(), row));
    }
    return f.subst(images);
}

inline Poly act_gen(const CoxeterSystem& W, size_t s, const Poly& f) {
    // s . x_i = x_i - pairing(i, s) x_s for i < rank; doubled coordinates use
    // the full matrix row, so go through the generic path
    std::vector<Poly> images;
    images.reserve(W.rep_dim());
    const FieldPtr& F = W.field();
    for (size_t i = 0; i < W.rep_dim(); ++i) {
        std::vector<AlgebraicReal> row(W.rep_dim(), AlgebraicReal::zero(F));
        row[i] = AlgebraicReal::one(F);
        // matrix of s is I - coroot_s e_s^T; its transpose acts on rows
        row[s] -= W.coroot(s)[i];
        images.push_back(Poly::linear_form(F, row));
    }
    return f.subst(images);
}

// Demazure operator: (f - s.f) / alpha_s, degree -2
inline Poly demazure(const CoxeterSystem& W, size_t s, const Poly& f) {
    Poly g = f - act_gen(W, s, f);
    // every monomial of f - s.f is divisible by x_s
    std::map<Mono, AlgebraicReal> shifted;
    for (const auto& [m, c] : g.terms()) {
        if (m[s] == 0) throw InternalError("difference not divisible by the simple root");
        Mono n = m;
        --n[s];
        shifted.emplace(std::move(n), c);
    }
    return Poly::from_terms(W.field(), f.nvars(), std::move(shifted));
}

// all exponent vectors of total degree d, lexicographically ordered
inline void monomials_of_degree(size_t nvars, unsigned d, std::vector<Mono>& out) {
    Mono cur(nvars, 0);
    // recursive lex generation
    auto rec = [&](auto&& self, size_t i, unsigned rem) -> void {
        if (i + 1 == nvars) {
            cur[i] = static_cast<std::uint8_t>(rem);
            out.push_back(cur);
            return;
        }
        for (unsigned e = rem + 1; e-- > 0;) {
            cur[i] = static_cast<std::uint8_t>(e);
            self(self, i + 1, rem - e);
        }
    };
    if (nvars == 0) {
        if (d == 0) out.push_back({});
        return;
    }
    rec(rec, 0, d);
}

}  // namespace shl
