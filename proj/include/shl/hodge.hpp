#pragma once

// Lefschetz-package linear algebra over the ordered coefficient field:
// one-sided reductions of bimodules packaged as graded spaces with a form and
// a degree two operator, hard Lefschetz rank checks, exact signature
// certificates for the primitive forms, local intersection forms, the
// bottom-class isometry, zeta families, and the coinvariant-ring analogue.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "invariants.hpp"
#include "soergel.hpp"

namespace shl {

// response to a degenerate graded form while building a datum
enum class FormCheck {
    none,      // skip the check
    internal,  // degeneracy is a bug in the caller
    certify    // degeneracy is a certified mathematical failure
};

struct HLRow {
    int i = 0;  // operator power, from degree -i to degree i
    size_t dim = 0;
    size_t rank = 0;
};

struct HLReport {
    bool pass = true;
    std::string witness;
    std::vector<HLRow> table;  // one row per nonpositive degree, lowest first
};

struct SignatureDegree {
    int i = 0;  // degree -i block
    size_t dim = 0;
    size_t rank = 0;       // rank of the i-th operator power
    size_t prim_dim = 0;   // kernel of the (i+1)-st power
    size_t pos = 0, neg = 0, zero = 0;  // signature on the primitive part
    int expected_sign = 0;
};

struct SignatureReport {
    bool pass = true;
    std::string witness;
    std::vector<SignatureDegree> degrees;
};

// A finite dimensional graded space with a bilinear form pairing degree d
// against degree -d and a degree +2 operator self-adjoint for the form.
// Blocks are stored per degree; only degrees of nonzero dimension appear.
struct LefschetzDatum {
    FieldPtr f;
    std::string name;
    std::map<int, size_t> dims;
    std::map<int, FMatrix> form;  // degree d: dims(d) x dims(-d), <e_r, e_c>
    std::map<int, FMatrix> op;    // degree d: dims(d+2) x dims(d)

    size_t dim(int d) const {
        auto it = dims.find(d);
        return it == dims.end() ? 0 : it->second;
    }
    int lowest() const { return dims.empty() ? 0 : dims.begin()->first; }
    int highest() const { return dims.empty() ? 0 : dims.rbegin()->first; }
    size_t total_dim() const {
        size_t n = 0;
        for (const auto& [d, k] : dims) n += k;
        return n;
    }

    // matrix of the k-th operator power from degree d to degree d + 2k
    FMatrix op_power(int d, unsigned k) const {
        FMatrix m = FMatrix::identity(f, dim(d));
        int cur = d;
        for (unsigned t = 0; t < k; ++t) {
            auto it = op.find(cur);
            if (it == op.end()) {
                m = FMatrix(f, 0, dim(d));
                break;
            }
            m = it->second * m;
            cur += 2;
        }
        int tgt = d + 2 * int(k);
        if (m.rows() != dim(tgt)) return FMatrix(f, dim(tgt), dim(d));
        return m;
    }
};

namespace detail {

// incremental row echelon filter; insert keeps a vector iff it grows the span
struct RowReducer {
    std::vector<std::vector<AlgebraicReal>> rows;
    std::vector<size_t> lead;

    bool insert(std::vector<AlgebraicReal> v) {
        for (size_t i = 0; i < rows.size(); ++i) {
            if (lead[i] >= v.size() || v[lead[i]].is_zero()) continue;
            AlgebraicReal fct = v[lead[i]];
            for (size_t j = lead[i]; j < v.size(); ++j) v[j] -= fct * rows[i][j];
        }
        size_t p = 0;
        while (p < v.size() && v[p].is_zero()) ++p;
        if (p == v.size()) return false;
        AlgebraicReal inv = v[p].inverse();
        for (size_t j = p; j < v.size(); ++j) v[j] = inv * v[j];
        rows.push_back(std::move(v));
        lead.push_back(p);
        return true;
    }
};

inline void validate_datum(const LefschetzDatum& d, FormCheck fc) {
    for (const auto& [deg, k] : d.dims) {
        auto itf = d.form.find(deg);
        if (itf == d.form.end() || itf->second.rows() != k || itf->second.cols() != d.dim(-deg))
            throw InternalError(d.name + ": malformed form block at degree " + std::to_string(deg));
        auto ito = d.op.find(deg);
        if (ito == d.op.end() || ito->second.rows() != d.dim(deg + 2) || ito->second.cols() != k)
            throw InternalError(d.name + ": malformed operator block at degree " + std::to_string(deg));
    }
    for (const auto& [deg, k] : d.dims) {
        if (d.dim(-deg) && !(d.form.at(-deg) == d.form.at(deg).transpose()))
            throw InternalError(d.name + ": graded form is not symmetric");
        // self-adjointness: <L a, b> = <a, L b> for a of degree deg, b of degree -deg-2
        size_t kb = d.dim(-deg - 2);
        if (!kb) continue;
        FMatrix lhs = d.dim(deg + 2) ? d.op.at(deg).transpose() * d.form.at(deg + 2)
                                     : FMatrix(d.f, k, kb);
        FMatrix rhs = d.form.at(deg) * d.op.at(-deg - 2);
        if (!(lhs == rhs)) throw InternalError(d.name + ": operator is not self-adjoint");
    }
    if (fc == FormCheck::none) return;
    for (const auto& [deg, k] : d.dims) {
        if (d.dim(-deg) == k && d.form.at(deg).rank() == k) continue;
        std::string msg = d.name + ": graded form degenerate in degree " + std::to_string(deg);
        if (fc == FormCheck::internal) throw InternalError(msg);
        throw MathFailure(msg);
    }
}

}  // namespace detail

// Assemble a datum from coordinate data on an ambient space: a degree per
// coordinate, the Gram matrix of the form, the operator matrix, and an
// optional degree zero projector whose image carves out the subspace.
inline LefschetzDatum make_datum(const FieldPtr& f, const std::vector<int>& coord_degree,
                                 const FMatrix& gram, const FMatrix& L, const FMatrix* projector,
                                 FormCheck fc, std::string name) {
    size_t n = coord_degree.size();
    if (gram.rows() != n || gram.cols() != n || L.rows() != n || L.cols() != n)
        throw InternalError(name + ": datum shape mismatch");
    LefschetzDatum d;
    d.f = f;
    d.name = std::move(name);

    std::map<int, std::vector<std::vector<AlgebraicReal>>> basis;
    if (projector) {
        if (projector->rows() != n || projector->cols() != n)
            throw InternalError(d.name + ": projector shape mismatch");
        std::map<int, detail::RowReducer> red;
        for (size_t c = 0; c < n; ++c) {
            std::vector<AlgebraicReal> col(n, AlgebraicReal::zero(f));
            bool nz = false;
            for (size_t r = 0; r < n; ++r) {
                col[r] = projector->at(r, c);
                if (!col[r].is_zero()) nz = true;
            }
            if (!nz) continue;
            int deg = coord_degree[c];
            for (size_t r = 0; r < n; ++r)
                if (!col[r].is_zero() && coord_degree[r] != deg)
                    throw InternalError(d.name + ": projector does not preserve degree");
            auto probe = col;
            if (red[deg].insert(std::move(probe))) basis[deg].push_back(std::move(col));
        }
    } else {
        for (size_t c = 0; c < n; ++c) {
            std::vector<AlgebraicReal> col(n, AlgebraicReal::zero(f));
            col[c] = AlgebraicReal::one(f);
            basis[coord_degree[c]].push_back(std::move(col));
        }
    }
    for (const auto& [deg, vecs] : basis) d.dims[deg] = vecs.size();

    for (const auto& [deg, vecs] : basis) {
        size_t kneg = d.dim(-deg);
        FMatrix blk(f, vecs.size(), kneg);
        if (kneg) {
            const auto& neg = basis.at(-deg);
            std::vector<std::vector<AlgebraicReal>> gw;
            gw.reserve(kneg);
            for (const auto& w : neg) gw.push_back(gram.apply(w));
            for (size_t a = 0; a < vecs.size(); ++a)
                for (size_t b = 0; b < kneg; ++b) {
                    AlgebraicReal t = AlgebraicReal::zero(f);
                    for (size_t r = 0; r < n; ++r)
                        if (!vecs[a][r].is_zero() && !gw[b][r].is_zero()) t += vecs[a][r] * gw[b][r];
                    blk.at(a, b) = t;
                }
        }
        d.form[deg] = std::move(blk);
    }

    for (const auto& [deg, vecs] : basis) {
        size_t kt = d.dim(deg + 2);
        FMatrix blk(f, kt, vecs.size());
        FMatrix tgt(f, n, kt);
        if (kt) {
            const auto& tv = basis.at(deg + 2);
            for (size_t b = 0; b < kt; ++b)
                for (size_t r = 0; r < n; ++r) tgt.at(r, b) = tv[b][r];
        }
        for (size_t a = 0; a < vecs.size(); ++a) {
            std::vector<AlgebraicReal> img = L.apply(vecs[a]);
            bool nz = false;
            for (const auto& v : img)
                if (!v.is_zero()) {
                    nz = true;
                    break;
                }
            if (!kt) {
                if (nz) throw InternalError(d.name + ": operator leaves the subspace");
                continue;
            }
            auto sol = tgt.solve(img);
            if (!sol) throw InternalError(d.name + ": operator leaves the subspace");
            for (size_t b = 0; b < kt; ++b) blk.at(b, a) = (*sol)[b];
        }
        d.op[deg] = std::move(blk);
    }

    detail::validate_datum(d, fc);
    return d;
}

// One-sided reduction of a full Bott-Samelson bimodule with its intersection
// form and left multiplication by the chosen linear form.
inline LefschetzDatum reduce(const BSBimodule& B, const std::vector<AlgebraicReal>& rho,
                             size_t cap = 4000) {
    if (B.dim() > cap) throw InputError("reduction dimension above the configured cap");
    const FieldPtr& f = B.group()->field();
    std::vector<int> degs(B.dim());
    for (size_t m = 0; m < B.dim(); ++m) degs[m] = B.basis_degree(BSBimodule::Mask(m));
    return make_datum(f, degs, B.reduced_gram(), B.reduced_linear_op(0, rho), nullptr,
                      FormCheck::internal,
                      "reduced BS(" + detail::word_text(*B.group(), B.word()) + ")");
}

// One-sided reduction of an indecomposable summand inside its ambient space.
inline LefschetzDatum reduce(const Summand& Z, const std::vector<AlgebraicReal>& rho,
                             size_t cap = 4000) {
    if (Z.ambient.dim() > cap) throw InputError("reduction dimension above the configured cap");
    const CoxeterPtr& W = Z.ambient.group();
    std::vector<int> degs(Z.ambient.dim());
    for (size_t m = 0; m < Z.ambient.dim(); ++m)
        degs[m] = Z.ambient.basis_degree(BSBimodule::Mask(m));
    return make_datum(W->field(), degs, Z.ambient.reduced_gram(),
                      Z.ambient.reduced_linear_op(0, rho), &Z.ebar, FormCheck::certify,
                      "reduced B(" + detail::word_text(*W, Z.word) + ")");
}

// Reduction of B(x) tensor B(s) with the deformed operator: left
// multiplication by rho plus zeta times multiplication by rho in the middle
// slot. The middle action commutes with the projector exactly, so the image
// is the reduction of the x-summand tensored with B(s).
inline LefschetzDatum lefschetz_zeta(SoergelCatalogue& cat, ElementId x, size_t s, const Rat& zeta,
                                     const std::vector<AlgebraicReal>& rho, size_t cap = 4000) {
    if (zeta < 0) throw InputError("zeta must be nonnegative");
    const Summand& X = cat.at(x);
    const CoxeterPtr& W = cat.group();
    std::vector<std::uint8_t> wd = X.word;
    wd.push_back(std::uint8_t(s));
    BSBimodule E(W, wd);
    if (E.dim() > cap) throw InputError("reduction dimension above the configured cap");
    const FieldPtr& f = W->field();
    FMatrix ebar = tensor_id_right(X.ambient, X.ambient, X.e, s).reduced(f);
    FMatrix L = E.reduced_linear_op(0, rho);
    if (zeta != 0)
        L = L + AlgebraicReal::rational(f, zeta) * E.reduced_linear_op(X.word.size(), rho);
    std::vector<int> degs(E.dim());
    for (size_t m = 0; m < E.dim(); ++m) degs[m] = E.basis_degree(BSBimodule::Mask(m));
    return make_datum(f, degs, E.reduced_gram(), L, &ebar, FormCheck::certify,
                      "reduced B(" + detail::word_text(*W, X.word) + ") " +
                          W->letter_name(s) + "-deformed");
}

// Hard Lefschetz: the i-th operator power is a bijection from degree -i onto
// degree i for every i at which the space is supported.
inline HLReport hard_lefschetz_check(const LefschetzDatum& d) {
    HLReport rep;
    for (const auto& [deg, k] : d.dims)
        if (d.dim(-deg) != k) {
            rep.pass = false;
            rep.witness = d.name + ": graded dimensions are not symmetric at degree " +
                          std::to_string(deg);
            return rep;
        }
    for (auto it = d.dims.begin(); it != d.dims.end() && it->first <= 0; ++it) {
        unsigned i = unsigned(-it->first);
        size_t r = d.op_power(it->first, i).rank();
        rep.table.push_back({int(i), it->second, r});
        if (r != it->second) {
            rep.pass = false;
            if (rep.witness.empty())
                rep.witness = d.name + ": operator power " + std::to_string(i) + " has rank " +
                              std::to_string(r) + " on a block of dimension " +
                              std::to_string(it->second);
        }
    }
    return rep;
}

// Hodge-Riemann: on the primitive part of each degree -i block the Lefschetz
// form <a, L^i b> is definite, of sign alternating from plus at the lowest
// degree.
inline SignatureReport hodge_riemann_check(const LefschetzDatum& d) {
    SignatureReport rep;
    if (d.dims.empty()) return rep;
    int lo = d.lowest();
    for (const auto& [deg, k] : d.dims)
        if ((deg - lo) % 2 != 0) {
            rep.pass = false;
            rep.witness = d.name + ": degrees of mixed parity";
            return rep;
        }
    int walk = 1;
    for (auto it = d.dims.begin(); it != d.dims.end() && it->first <= 0; ++it) {
        int deg = it->first;
        unsigned i = unsigned(-deg);
        int expected = ((deg - lo) / 2) % 2 == 0 ? 1 : -1;
        if (expected != walk) throw InternalError(d.name + ": sign conventions disagree");
        walk = -walk;

        FMatrix Mi = d.op_power(deg, i);
        FMatrix Q = d.form.at(deg) * Mi;
        auto prim = d.op_power(deg, i + 1).nullspace();
        size_t pk = prim.size();
        FMatrix Qp(d.f, pk, pk);
        for (size_t b = 0; b < pk; ++b) {
            std::vector<AlgebraicReal> qb = Q.apply(prim[b]);
            for (size_t a = 0; a < pk; ++a) {
                AlgebraicReal t = AlgebraicReal::zero(d.f);
                for (size_t r = 0; r < qb.size(); ++r)
                    if (!prim[a][r].is_zero() && !qb[r].is_zero()) t += prim[a][r] * qb[r];
                Qp.at(a, b) = t;
            }
        }
        if (!(Qp == Qp.transpose()))
            throw InternalError(d.name + ": primitive Lefschetz form is not symmetric");
        auto [p, n, z] = Qp.signature();
        rep.degrees.push_back({int(i), it->second, Mi.rank(), pk, p, n, z, expected});
        bool ok = z == 0 && (expected > 0 ? n == 0 : p == 0);
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.witness = d.name + ": primitive form at degree " + std::to_string(deg) +
                          " has signature (" + std::to_string(p) + ", " + std::to_string(n) +
                          ", " + std::to_string(z) + "), expected sign " +
                          (expected > 0 ? "+" : "-");
        }
    }
    return rep;
}

namespace detail {

// independent subset of polynomial matrices, flattened over (row, col, monomial)
inline std::vector<size_t> independent_maps(const FieldPtr& f, const std::vector<PolyMatrix>& ms) {
    std::map<std::tuple<size_t, size_t, Mono>, size_t> key;
    for (const auto& g : ms)
        for (size_t r = 0; r < g.rows(); ++r)
            for (size_t c = 0; c < g.cols(); ++c)
                for (const auto& [mono, cf] : g.m[r][c].terms())
                    if (!cf.is_zero()) key.try_emplace({r, c, mono}, key.size());
    RowReducer red;
    std::vector<size_t> keep;
    for (size_t i = 0; i < ms.size(); ++i) {
        std::vector<AlgebraicReal> v(key.size(), AlgebraicReal::zero(f));
        const auto& g = ms[i];
        for (size_t r = 0; r < g.rows(); ++r)
            for (size_t c = 0; c < g.cols(); ++c)
                for (const auto& [mono, cf] : g.m[r][c].terms())
                    if (!cf.is_zero()) v[key.at({r, c, mono})] = cf;
        if (red.insert(std::move(v))) keep.push_back(i);
    }
    return keep;
}

// degree zero maps from B(y) into B(x) tensor B(s), sandwiched between the
// idempotents and filtered to an independent spanning set
struct LocalMaps {
    BSBimodule E;
    PolyMatrix proj;
    std::vector<PolyMatrix> maps;
};

inline LocalMaps local_maps(SoergelCatalogue& cat, ElementId y, ElementId x, size_t s) {
    const CoxeterPtr& W = cat.group();
    if (W->length(W->right(x, s)) <= W->length(x))
        throw InputError("local form needs an ascent of x");
    const Summand& Y = cat.at(y);
    const Summand& X = cat.at(x);
    std::vector<std::uint8_t> wd = X.word;
    wd.push_back(std::uint8_t(s));
    LocalMaps lm{BSBimodule(W, wd), tensor_id_right(X.ambient, X.ambient, X.e, s), {}};
    std::vector<PolyMatrix> cand = hom_space(Y.ambient, lm.E, 0);
    std::vector<PolyMatrix> sand;
    sand.reserve(cand.size());
    for (const auto& F : cand) sand.push_back((lm.proj * F) * Y.e);
    for (size_t i : independent_maps(W->field(), sand)) lm.maps.push_back(sand[i]);
    return lm;
}

// Gram matrix of the local composition pairing: c with gbar . f = c id on
// B(y), read off against the bottom class u and a top-degree class v through
// c(f, g) <u, v> = <f(u), g(v)>.
inline FMatrix local_gram(const FieldPtr& f, const std::vector<PolyMatrix>& maps,
                          const FMatrix& Gy, const FMatrix& GE, const FMatrix& yebar,
                          const std::string& ctx) {
    size_t k = maps.size();
    FMatrix gram(f, k, k);
    if (!k) return gram;
    size_t ny = Gy.rows();
    std::vector<AlgebraicReal> v;
    AlgebraicReal den = AlgebraicReal::zero(f);
    for (size_t c = 0; c < yebar.cols() && den.is_zero(); ++c) {
        std::vector<AlgebraicReal> col(ny, AlgebraicReal::zero(f));
        AlgebraicReal t = AlgebraicReal::zero(f);
        for (size_t r = 0; r < ny; ++r) {
            col[r] = yebar.at(r, c);
            if (!Gy.at(0, r).is_zero() && !col[r].is_zero()) t += Gy.at(0, r) * col[r];
        }
        if (!t.is_zero()) {
            den = t;
            v = std::move(col);
        }
    }
    if (den.is_zero()) throw MathFailure(ctx + ": bottom class pairs with nothing");
    std::vector<FMatrix> mr;
    mr.reserve(k);
    for (const auto& g : maps) mr.push_back(g.reduced(f));
    std::vector<std::vector<AlgebraicReal>> gw(k);
    for (size_t j = 0; j < k; ++j) gw[j] = GE.apply(mr[j].apply(v));
    AlgebraicReal di = den.inverse();
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            AlgebraicReal t = AlgebraicReal::zero(f);
            for (size_t r = 0; r < gw[j].size(); ++r)
                if (!mr[i].at(r, 0).is_zero() && !gw[j][r].is_zero()) t += mr[i].at(r, 0) * gw[j][r];
            gram.at(i, j) = di * t;
        }
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j)
            if (!(gram.at(i, j) - gram.at(j, i)).is_zero())
                throw InternalError(ctx + ": local form is not symmetric");
    return gram;
}

}  // namespace detail

struct LocalFormReport {
    ElementId y = 0;
    ElementId x = 0;
    size_t s = 0;
    size_t dim = 0;
    int expected_sign = 0;
    FMatrix gram;
    bool pass = false;
    std::string witness;
};

// Local intersection form on the degree zero maps from B(y) into
// B(x) tensor B(s), for an ascent xs > x: the form must be definite of sign
// determined by the length gap, and its dimension must match the character
// formula for the hom space.
inline LocalFormReport local_intersection_form(SoergelCatalogue& cat, ElementId y, ElementId x,
                                               size_t s) {
    const CoxeterPtr& W = cat.group();
    LocalFormReport rep;
    rep.y = y;
    rep.x = x;
    rep.s = s;
    std::string ctx = "local form (y = " + detail::word_text(*W, W->word(y)) + ", x = " +
                      detail::word_text(*W, W->word(x)) + ", s = " + W->letter_name(s) + ")";
    detail::LocalMaps lm = detail::local_maps(cat, y, x, s);
    const Summand& Y = cat.at(y);

    ElementId se = W->right(W->identity_id(), s);
    CanonicalBasis& C = cat.basis();
    LaurentPoly hom = C.kl(y).pairing(C.kl(x) * C.kl(se));
    Int expected = graded_free_dim(hom, 0, W->rep_dim());
    if (Int(lm.maps.size()) != expected)
        throw MathFailure(ctx + ": hom space dimension " + std::to_string(lm.maps.size()) +
                          " does not match the character formula");

    rep.dim = lm.maps.size();
    int gap = int(W->length(x)) + 1 - int(W->length(y));
    rep.gram = detail::local_gram(W->field(), lm.maps, Y.ambient.reduced_gram(),
                                  lm.E.reduced_gram(), Y.ebar, ctx);
    if (rep.dim == 0) {
        rep.pass = true;
        return rep;
    }
    if (gap % 2 != 0) {
        rep.witness = ctx + ": nonzero hom space at odd length gap";
        return rep;
    }
    rep.expected_sign = (gap / 2) % 2 == 0 ? 1 : -1;
    auto [p, n, z] = rep.gram.signature();
    rep.pass = z == 0 && (rep.expected_sign > 0 ? n == 0 : p == 0);
    if (!rep.pass)
        rep.witness = ctx + ": signature (" + std::to_string(p) + ", " + std::to_string(n) + ", " +
                      std::to_string(z) + "), expected sign " + (rep.expected_sign > 0 ? "+" : "-");
    return rep;
}

// The bottom classes of the local maps embed the hom space into the reduction
// of B(x) tensor B(s); the embedding kills the (length(y)+1)-st operator
// power and carries the local form, scaled by the bottom Lefschetz value of
// B(y), onto the Lefschetz form of the ambient reduction.
inline bool embedding_isometry_check(SoergelCatalogue& cat, ElementId y, ElementId x, size_t s,
                                     const std::vector<AlgebraicReal>& rho,
                                     std::string* witness = nullptr) {
    const CoxeterPtr& W = cat.group();
    const FieldPtr& f = W->field();
    std::string ctx = "embedding (y = " + detail::word_text(*W, W->word(y)) + ", x = " +
                      detail::word_text(*W, W->word(x)) + ", s = " + W->letter_name(s) + ")";
    auto fail = [&](const std::string& msg) {
        if (witness) *witness = ctx + ": " + msg;
        return false;
    };
    detail::LocalMaps lm = detail::local_maps(cat, y, x, s);
    const Summand& Y = cat.at(y);
    unsigned l = W->length(y);
    FMatrix Gy = Y.ambient.reduced_gram();
    FMatrix GE = lm.E.reduced_gram();
    FMatrix gram = detail::local_gram(f, lm.maps, Gy, GE, Y.ebar, ctx);

    FMatrix Ly = Y.ambient.reduced_linear_op(0, rho);
    std::vector<AlgebraicReal> w(Y.ambient.dim(), AlgebraicReal::zero(f));
    w[0] = AlgebraicReal::one(f);
    for (unsigned t = 0; t < l; ++t) w = Ly.apply(w);
    AlgebraicReal N = AlgebraicReal::zero(f);
    for (size_t r = 0; r < w.size(); ++r)
        if (!w[r].is_zero() && !Gy.at(r, 0).is_zero()) N += w[r] * Gy.at(r, 0);
    if (N.sign() <= 0) return fail("bottom Lefschetz value is not positive");

    size_t k = lm.maps.size();
    if (k == 0) return true;
    std::vector<FMatrix> mr;
    mr.reserve(k);
    for (const auto& g : lm.maps) mr.push_back(g.reduced(f));
    size_t ne = lm.E.dim();
    FMatrix io(f, ne, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t r = 0; r < ne; ++r) io.at(r, i) = mr[i].at(r, 0);
    if (io.rank() != k) return fail("bottom classes are linearly dependent");

    FMatrix LE = lm.E.reduced_linear_op(0, rho);
    std::vector<std::vector<AlgebraicReal>> li(k);
    for (size_t i = 0; i < k; ++i) {
        std::vector<AlgebraicReal> z(ne, AlgebraicReal::zero(f));
        for (size_t r = 0; r < ne; ++r) z[r] = io.at(r, i);
        for (unsigned t = 0; t < l; ++t) z = LE.apply(z);
        li[i] = z;
        z = LE.apply(z);
        for (const auto& c : z)
            if (!c.is_zero()) return fail("bottom class is not primitive");
    }
    for (size_t j = 0; j < k; ++j) {
        std::vector<AlgebraicReal> gw = GE.apply(li[j]);
        for (size_t i = 0; i < k; ++i) {
            AlgebraicReal rhs = AlgebraicReal::zero(f);
            for (size_t r = 0; r < ne; ++r)
                if (!io.at(r, i).is_zero() && !gw[r].is_zero()) rhs += io.at(r, i) * gw[r];
            if (!(N * gram.at(i, j) - rhs).is_zero()) return fail("embedding is not an isometry");
        }
    }
    return true;
}

// Coinvariant ring of a finite group as a Lefschetz datum: degree 2k sits at
// 2k - top, the form is the top-degree pairing, the operator is
// multiplication by the linear form, and the form is oriented so the bottom
// Lefschetz value is positive.
inline LefschetzDatum coinvariant_datum(const CoxeterPtr& W, const std::vector<AlgebraicReal>& rho,
                                        size_t cap = 4000) {
    auto all = W->enumerate_group();
    ElementId w0 = all.front();
    for (ElementId w : all)
        if (W->length(w) > W->length(w0)) w0 = w;
    CoinvariantRing C(W, w0);
    if (C.total_dim() > cap) throw InputError("coinvariant dimension above the configured cap");
    const FieldPtr& f = W->field();
    int top = int(C.top_degree());
    LefschetzDatum d;
    d.f = f;
    d.name = "coinvariant ring";
    for (unsigned k = 0; k <= C.top_degree(); ++k)
        if (C.dim(k)) d.dims[2 * int(k) - top] = C.dim(k);
    Poly lin = Poly::linear_form(f, rho);
    for (const auto& [deg, kk] : d.dims) {
        unsigned k = unsigned((deg + top) / 2);
        d.form[deg] = C.top_pairing(k);
        d.op[deg] = C.multiplication_matrix(k, lin);
    }
    AlgebraicReal t = (d.form.at(-top) * d.op_power(-top, unsigned(top))).at(0, 0);
    if (t.is_zero()) throw InternalError("coinvariant ring: zero top pairing");
    if (t.sign() < 0) {
        AlgebraicReal m1 = AlgebraicReal::rational(f, Rat(-1));
        for (auto& [deg, blk] : d.form) blk = m1 * blk;
    }
    detail::validate_datum(d, FormCheck::internal);
    return d;
}

struct DegreeSignature {
    int deg = 0;
    size_t pos = 0, neg = 0, zero = 0;
    friend bool operator==(const DegreeSignature&, const DegreeSignature&) = default;
};

// exact signature of the full Lefschetz form <a, L^i b> on each degree -i block
inline std::vector<DegreeSignature> full_form_signatures(const LefschetzDatum& d) {
    std::vector<DegreeSignature> out;
    for (auto it = d.dims.begin(); it != d.dims.end() && it->first <= 0; ++it) {
        int deg = it->first;
        FMatrix Q = d.form.at(deg) * d.op_power(deg, unsigned(-deg));
        if (!(Q == Q.transpose()))
            throw InternalError(d.name + ": Lefschetz form is not symmetric");
        auto [p, n, z] = Q.signature();
        out.push_back({deg, p, n, z});
    }
    return out;
}

struct ZetaPoint {
    Rat zeta;
    bool relevant = false;
    bool hl = false;
    std::vector<DegreeSignature> signatures;
};

struct ZetaScanReport {
    ElementId x = 0;
    size_t s = 0;
    bool ascent = true;
    bool pass = false;
    bool inconclusive = false;
    std::string witness;
    std::vector<ZetaPoint> points;
    SignatureReport endpoint_hr;
    std::optional<SignatureReport> zero_hr;
};

// Scan the deformed operator family over a grid of zeta values: hard
// Lefschetz and constant full-form signatures at every relevant point, the
// signature certificate at the largest point (doubling the endpoint when the
// primitive check has not settled), and at zeta zero also the signature
// certificate when s is an ascent of x.
inline ZetaScanReport zeta_family_scan(SoergelCatalogue& cat, ElementId x, size_t s,
                                       const std::vector<AlgebraicReal>& rho,
                                       std::vector<Rat> grid = {Rat(0), Rat(1, 2), Rat(1), Rat(2),
                                                                Rat(10)},
                                       unsigned max_retries = 3, size_t cap = 4000) {
    ZetaScanReport rep;
    rep.x = x;
    rep.s = s;
    const CoxeterPtr& W = cat.group();
    rep.ascent = W->length(W->right(x, s)) > W->length(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty() || grid.front() < 0) throw InputError("zeta grid must be nonnegative");
    if (grid.front() != 0) throw InputError("zeta grid must contain zero");
    if (!rep.ascent && grid.back() == 0)
        throw InputError("zeta grid needs a positive point at a descent");

    std::vector<LefschetzDatum> data;
    auto push_point = [&](const Rat& z) {
        data.push_back(lefschetz_zeta(cat, x, s, z, rho, cap));
        ZetaPoint pt;
        pt.zeta = z;
        pt.relevant = rep.ascent || z > 0;
        pt.hl = hard_lefschetz_check(data.back()).pass;
        pt.signatures = full_form_signatures(data.back());
        rep.points.push_back(std::move(pt));
    };
    for (const auto& z : grid) push_point(z);

    auto check_all = [&]() -> bool {
        const std::vector<DegreeSignature>* ref = nullptr;
        for (const auto& pt : rep.points) {
            if (!pt.relevant) continue;
            if (!pt.hl) {
                rep.witness = "hard Lefschetz fails at zeta = " + pt.zeta.get_str();
                return false;
            }
            if (!ref)
                ref = &pt.signatures;
            else if (!(*ref == pt.signatures)) {
                rep.witness = "Lefschetz signatures jump within the family at zeta = " +
                              pt.zeta.get_str();
                return false;
            }
        }
        return true;
    };
    if (!check_all()) return rep;

    for (unsigned attempt = 0;; ++attempt) {
        rep.endpoint_hr = hodge_riemann_check(data.back());
        if (rep.endpoint_hr.pass) break;
        if (attempt >= max_retries) {
            rep.inconclusive = true;
            rep.witness = "signature not settled on the sampled grid";
            return rep;
        }
        push_point(rep.points.back().zeta * 2);
        if (!check_all()) return rep;
    }
    if (rep.ascent) {
        rep.zero_hr = hodge_riemann_check(data.front());
        if (!rep.zero_hr->pass) {
            rep.witness = "signature certificate fails at zeta = 0";
            return rep;
        }
    }
    rep.pass = true;
    return rep;
}

// At a descent zs < z the product B(z) tensor B(s) splits as two shifted
// copies of B(z); the image of the split inclusion of the down-shifted copy
// is stable under left multiplication, and hard Lefschetz on B(z) forces the
// Lefschetz form of the product to vanish on it in every nonpositive degree.
inline bool shifted_vanishing_check(SoergelCatalogue& cat, ElementId z, size_t s,
                                    const std::vector<AlgebraicReal>& rho,
                                    std::string* witness = nullptr) {
    const CoxeterPtr& W = cat.group();
    if (W->length(W->right(z, s)) >= W->length(z))
        throw InputError("shifted vanishing needs a descent");
    const Summand& Z = cat.at(z);
    std::string ctx = "shifted copy (z = " + detail::word_text(*W, Z.word) + ", s = " +
                      W->letter_name(s) + ")";
    auto fail = [&](const std::string& msg) {
        if (witness) *witness = ctx + ": " + msg;
        return false;
    };
    HLReport hl = hard_lefschetz_check(reduce(Z, rho));
    if (!hl.pass) return fail(hl.witness);

    std::vector<std::uint8_t> wd = Z.word;
    wd.push_back(std::uint8_t(s));
    BSBimodule E(W, wd);
    const FieldPtr& f = W->field();
    FMatrix ebar = tensor_id_right(Z.ambient, Z.ambient, Z.e, s).reduced(f);

    // split inclusion of the down-shifted copy: a degree -1 map whose
    // composite with some degree +1 projection is a nonzero multiple of the
    // identity on B(z)
    detail::HomPairing hp(Z, -1, E);
    FMatrix C = hp.pairing_matrix(E, ebar, Z);
    size_t pi = C.cols();
    for (size_t j = 0; j < C.rows() && pi == C.cols(); ++j)
        for (size_t i = 0; i < C.cols(); ++i)
            if (!C.at(j, i).is_zero()) {
                pi = i;
                break;
            }
    if (pi == C.cols()) throw MathFailure(ctx + ": down-shifted copy not found");
    FMatrix inc = ebar * hp.Fr[pi] * Z.ebar;

    FMatrix LE = E.reduced_linear_op(0, rho);
    FMatrix GE = E.reduced_gram();
    std::vector<std::vector<AlgebraicReal>> vecs;
    std::vector<int> vdeg;
    for (size_t c = 0; c < inc.cols(); ++c) {
        std::vector<AlgebraicReal> u(E.dim(), AlgebraicReal::zero(f));
        bool nzc = false;
        for (size_t r = 0; r < E.dim(); ++r) {
            u[r] = inc.at(r, c);
            if (!u[r].is_zero()) nzc = true;
        }
        if (!nzc) continue;
        vecs.push_back(std::move(u));
        vdeg.push_back(Z.ambient.basis_degree(BSBimodule::Mask(c)) - 1);
    }
    for (size_t a = 0; a < vecs.size(); ++a)
        for (size_t b = a; b < vecs.size(); ++b) {
            if (vdeg[a] != vdeg[b] || vdeg[a] > 0) continue;
            std::vector<AlgebraicReal> w = vecs[b];
            for (int t = 0; t < -vdeg[a]; ++t) w = LE.apply(w);
            std::vector<AlgebraicReal> gw = GE.apply(w);
            AlgebraicReal t = AlgebraicReal::zero(f);
            for (size_t r = 0; r < gw.size(); ++r)
                if (!vecs[a][r].is_zero() && !gw[r].is_zero()) t += vecs[a][r] * gw[r];
            if (!t.is_zero())
                return fail("Lefschetz form does not vanish at degree " + std::to_string(vdeg[a]));
        }
    return true;
}

// strict dominance of a linear form: positive on every simple coroot
inline bool is_dominant(const CoxeterSystem& W, const std::vector<AlgebraicReal>& rho) {
    for (size_t s = 0; s < W.rank(); ++s)
        if (W.eval_on_coroot(rho, s).sign() <= 0) return false;
    return true;
}

}  // namespace shl
