#pragma once

// Indecomposable summands of Bott-Samelson bimodules, realized as exact
// idempotents. The catalogue grows by induction on length: B_x is cut out of
// B_y B_s (y = x with the last letter of its shortlex word removed) by
// peeling the smaller summands predicted by the canonical basis. Every peel
// is certified by an invertible composition scalar, the number of peels per
// summand must match the composition-pairing rank, and the remainder must
// have the Betti numbers and endomorphism count of the canonical basis
// element. A certificate miss raises MathFailure with a witness.
//
// Shift bookkeeping: a summand labelled (z, k) has reduction concentrated in
// degrees [k - len(z), k + len(z)]; its character contributes v^k times the
// canonical basis element under the v^{-len} specialization. Inclusions of
// (z, k) are degree-k morphisms from BS(word(z)).

#include <algorithm>
#include <tuple>

#include "hecke.hpp"
#include "homspace.hpp"

namespace shl {

// greedy expansion of h in the canonical basis, peeling maximal support
inline std::map<ElementId, LaurentPoly> canonical_expansion(CanonicalBasis& C, HeckeElt h) {
    const CoxeterPtr& W = C.group();
    std::map<ElementId, LaurentPoly> out;
    while (!h.is_zero()) {
        ElementId top = kNoElement;
        unsigned best = 0;
        for (const auto& [x, p] : h.terms())
            if (top == kNoElement || W->length(x) > best) {
                top = x;
                best = W->length(x);
            }
        LaurentPoly c = h.coeff(top);
        h -= c * C.kl(top);
        out.emplace(top, std::move(c));
    }
    return out;
}

struct PeelStep {
    ElementId z;
    int shift;
    size_t f_index, g_index;  // hom basis indices of the split pair
    AlgebraicReal scalar;     // the invertible composition scalar
};

struct Summand {
    ElementId x = 0;
    std::vector<std::uint8_t> word;  // shortlex reduced word; the ambient is BS(word)
    BSBimodule ambient;
    PolyMatrix e;     // exact idempotent cutting out B_x
    FMatrix ebar;     // induced projector on the reduction
    HeckeElt character;
    std::map<int, Int> betti;     // graded dimensions of the reduced image
    std::vector<PeelStep> peeled;  // what was removed from B_y B_s
};

// graded ranks of the blocks of a degree-zero projector on the reduction
inline std::map<int, Int> reduced_betti(const BSBimodule& B, const FMatrix& ebar) {
    std::map<int, std::vector<size_t>> by_deg;
    for (size_t m = 0; m < B.dim(); ++m) by_deg[B.basis_degree(static_cast<BSBimodule::Mask>(m))].push_back(m);
    std::map<int, Int> out;
    for (const auto& [d, idx] : by_deg) {
        FMatrix blk(B.field(), idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) blk.at(i, j) = ebar.at(idx[i], idx[j]);
        size_t r = blk.rank();
        if (r) out[d] = Int(static_cast<unsigned long>(r));
    }
    return out;
}

inline LaurentPoly betti_poly(const std::map<int, Int>& b) {
    LaurentPoly p;
    for (const auto& [d, n] : b) p += LaurentPoly::monomial(d, n);
    return p;
}

namespace detail {

inline std::string word_text(const CoxeterSystem& W, const std::vector<std::uint8_t>& word) {
    if (word.empty()) return "e";
    std::string s;
    for (auto t : word) s += W.letter_name(t);
    return s;
}

// inclusion/projection candidates for the summand (z, shift) inside the image
// of an idempotent on B, with the reduced data needed for pairing scalars
struct HomPairing {
    std::vector<PolyMatrix> F;  // degree +shift maps BS(word(z)) -> B
    std::vector<PolyMatrix> G;  // degree -shift maps B -> BS(word(z))
    std::vector<FMatrix> Fr;
    std::vector<FMatrix> Gr;  // composed with the reduced projector of z on the left

    HomPairing(const Summand& Z, int shift, const BSBimodule& B) {
        F = hom_space(Z.ambient, B, shift);
        G = hom_space(B, Z.ambient, -shift);
        const FieldPtr& f = B.field();
        for (const auto& M : F) Fr.push_back(M.reduced(f));
        for (const auto& M : G) Gr.push_back(Z.ebar * M.reduced(f));
    }

    // entry (j, i): the bottom-class scalar of e_z G_j e F_i e_z on BS(word(z))
    FMatrix pairing_matrix(const BSBimodule& B, const FMatrix& ebar, const Summand& Z) const {
        const FieldPtr& f = B.field();
        FMatrix C(f, G.size(), F.size());
        std::vector<std::vector<AlgebraicReal>> img;
        std::vector<AlgebraicReal> bot(Z.ambient.dim(), AlgebraicReal::zero(f));
        bot[0] = AlgebraicReal::one(f);
        for (const auto& m : Fr) img.push_back(ebar.apply(m.apply(bot)));
        for (size_t j = 0; j < G.size(); ++j)
            for (size_t i = 0; i < F.size(); ++i) {
                AlgebraicReal s = AlgebraicReal::zero(f);
                for (size_t t = 0; t < B.dim(); ++t) {
                    if (Gr[j].at(0, t).is_zero() || img[i][t].is_zero()) continue;
                    s += Gr[j].at(0, t) * img[i][t];
                }
                C.at(j, i) = s;
            }
        return C;
    }
};

}  // namespace detail

// rank of the degree-zero composition pairing between the summand cut out by
// e on B and the catalogue summand Z placed in shift k: the number of copies
// of (Z, k) inside the image of e
inline size_t composition_pairing_rank(const Summand& Z, int shift, const BSBimodule& B, const PolyMatrix& e) {
    detail::HomPairing hp(Z, shift, B);
    return hp.pairing_matrix(B, e.reduced(B.field()), Z).rank();
}

// peel `mult` copies of the summand (Z, shift) out of the image of e on B.
// The composition pairing must have rank mult - t after t peels and rank zero
// at the end; each peel uses a split pair with invertible scalar.
inline void peel_copies(const Summand& Z, int shift, const Int& mult, const BSBimodule& B, PolyMatrix& e,
                        std::vector<PeelStep>& log, const std::string& ctx) {
    detail::HomPairing hp(Z, shift, B);
    Int remaining = mult;
    for (;;) {
        FMatrix C = hp.pairing_matrix(B, e.reduced(B.field()), Z);
        if (Int(static_cast<unsigned long>(C.rank())) != remaining)
            throw MathFailure(ctx + ": composition pairing with (" + B.group()->word_str(Z.x) + ", " +
                              std::to_string(shift) + ") has rank " + std::to_string(C.rank()) + ", expected " +
                              remaining.get_str());
        if (remaining == 0) return;
        size_t pi = SIZE_MAX, pj = SIZE_MAX;
        for (size_t j = 0; j < C.rows() && pi == SIZE_MAX; ++j)
            for (size_t i = 0; i < C.cols(); ++i)
                if (!C.at(j, i).is_zero()) {
                    pj = j;
                    pi = i;
                    break;
                }
        if (pi == SIZE_MAX) throw InternalError("positive pairing rank without a nonzero scalar");
        const AlgebraicReal c = C.at(pj, pi);
        PolyMatrix u = e * (hp.F[pi] * Z.e);
        PolyMatrix v = (Z.e * hp.G[pj]) * e;
        e = e - c.inverse() * (u * v);
        log.push_back({Z.x, shift, pi, pj, c});
        remaining -= 1;
    }
}

class SoergelCatalogue {
public:
    explicit SoergelCatalogue(CoxeterPtr W) : W_(std::move(W)), C_(W_) {}

    const CoxeterPtr& group() const { return W_; }
    CanonicalBasis& basis() { return C_; }

    bool has(ElementId x) const { return table_.count(x) != 0; }

    const Summand& at(ElementId x) {
        auto it = table_.find(x);
        if (it == table_.end()) {
            realize(x);
            it = table_.find(x);
        }
        return it->second;
    }

    // realize every element of length <= max_len
    void build(unsigned max_len, size_t element_cap = 2000000) {
        for (ElementId x : W_->enumerate_ideal(max_len, element_cap)) at(x);
    }

    std::vector<ElementId> realized() const {
        std::vector<ElementId> out;
        for (const auto& [x, sm] : table_) out.push_back(x);
        return out;
    }

private:
    void realize(ElementId x) {
        if (table_.count(x)) return;
        if (x == W_->identity_id()) {
            BSBimodule B(W_, {});
            PolyMatrix e = PolyMatrix::identity(W_->field(), W_->rep_dim(), 1);
            FMatrix ebar = e.reduced(W_->field());
            table_.emplace(x, Summand{x,
                                      {},
                                      std::move(B),
                                      std::move(e),
                                      std::move(ebar),
                                      HeckeElt::unit(W_),
                                      {{0, Int(1)}},
                                      {}});
            return;
        }
        std::vector<std::uint8_t> wd = W_->word(x);
        size_t s = wd.back();
        ElementId y = W_->right(x, s);
        realize(y);
        const Summand& Y = table_.at(y);
        if (Y.word.size() + 1 != wd.size() || !std::equal(Y.word.begin(), Y.word.end(), wd.begin()))
            throw InternalError("catalogue parent word is not a prefix");

        const std::string ctx = "summand " + W_->word_str(x);
        BSBimodule B(W_, wd);
        PolyMatrix e = tensor_id_right(Y.ambient, Y.ambient, Y.e, s);
        HeckeElt prod = Y.character * C_.kl(W_->element_of_word({static_cast<std::uint8_t>(s)}));
        auto expansion = canonical_expansion(C_, prod);

        auto self = expansion.find(x);
        if (self == expansion.end() || self->second != LaurentPoly::one())
            throw MathFailure(ctx + ": product character has no unit leading coefficient");
        std::vector<std::pair<ElementId, Int>> targets;
        for (const auto& [z, p] : expansion) {
            if (z == x) continue;
            if (p.min_exp() != 0 || p.max_exp() != 0 || p.coeff(0) < 0)
                throw MathFailure(ctx + ": multiplicity of " + W_->word_str(z) + " is " + p.str() +
                                  ", not a nonnegative constant");
            targets.emplace_back(z, p.coeff(0));
        }
        std::sort(targets.begin(), targets.end(), [&](const auto& a, const auto& b) {
            unsigned la = W_->length(a.first), lb = W_->length(b.first);
            return la != lb ? la > lb : a.first < b.first;
        });

        std::vector<PeelStep> log;
        for (const auto& [z, m] : targets) {
            realize(z);
            peel_copies(table_.at(z), 0, m, B, e, log, ctx);
        }

        if (!((e * e) == e)) throw InternalError(ctx + ": projector is not idempotent");
        for (size_t r = 0; r < B.dim(); ++r) {
            const Poly& q = e.m[r][0];
            if (r == 0 ? !(q == Poly::one(B.field(), B.nvars())) : !q.is_zero())
                throw InternalError(ctx + ": projector moves the bottom class");
        }

        // remainder character by additivity over the certified peels
        HeckeElt rem = prod;
        for (const auto& st : log) rem -= LaurentPoly::monomial(st.shift) * table_.at(st.z).character;
        const HeckeElt& bx = C_.kl(x);
        if (rem != bx) throw MathFailure(ctx + ": remainder character differs from the canonical basis element");

        FMatrix ebar = e.reduced(W_->field());
        auto betti = reduced_betti(B, ebar);
        if (betti_poly(betti) != bx.graded_dim())
            throw MathFailure(ctx + ": Betti numbers " + betti_poly(betti).str() + " differ from " +
                              bx.graded_dim().str());
        if (graded_free_dim(bx.pairing(bx), 0, W_->rep_dim()) != 1)
            throw MathFailure(ctx + ": degree-zero endomorphism ring is not one-dimensional");

        table_.emplace(x, Summand{x, std::move(wd), std::move(B), std::move(e), std::move(ebar), bx,
                                  std::move(betti), std::move(log)});
    }

    CoxeterPtr W_;
    CanonicalBasis C_;
    std::map<ElementId, Summand> table_;
};

struct SummandLabel {
    ElementId z;
    int shift;
    Int mult;
};

struct Decomposition {
    std::vector<std::uint8_t> word;
    std::vector<SummandLabel> pieces;  // the full predicted multiset, top included
    ElementId top;
    int top_shift;
    PolyMatrix top_projector;
    std::map<int, Int> top_betti;
    std::vector<PeelStep> peeled;
};

// split an arbitrary Bott-Samelson bimodule into catalogue summands: peel
// everything the character predicts except the top piece, then certify the
// remainder against the catalogue entry for the top
inline Decomposition decompose(SoergelCatalogue& cat, const std::vector<std::uint8_t>& word) {
    const CoxeterPtr& W = cat.group();
    BSBimodule B(W, word);
    const std::string ctx = "decomposition of BS(" + detail::word_text(*W, word) + ")";

    HeckeElt ch = HeckeElt::unit(W);
    for (auto s : word) ch = ch * cat.basis().kl(W->element_of_word({s}));
    auto expansion = canonical_expansion(cat.basis(), ch);

    ElementId delta = W->identity_id();
    for (auto s : word) {
        ElementId d = W->right(delta, s);
        if (W->length(d) > W->length(delta)) delta = d;
    }
    int top_shift = static_cast<int>(W->length(delta)) - static_cast<int>(word.size());
    auto dit = expansion.find(delta);
    if (dit == expansion.end() || dit->second.coeff(top_shift) != 1)
        throw InternalError(ctx + ": top coefficient is not 1");

    std::vector<SummandLabel> pieces;
    std::vector<std::tuple<ElementId, int, Int>> targets;
    for (const auto& [z, p] : expansion)
        for (const auto& [k, c] : p.terms()) {
            if (c < 0)
                throw MathFailure(ctx + ": negative multiplicity at (" + W->word_str(z) + ", " + std::to_string(k) +
                                  ")");
            pieces.push_back({z, k, c});
            Int m = c;
            if (z == delta && k == top_shift) m -= 1;
            if (m > 0) targets.emplace_back(z, k, m);
        }
    std::sort(targets.begin(), targets.end(), [&](const auto& a, const auto& b) {
        unsigned la = W->length(std::get<0>(a)), lb = W->length(std::get<0>(b));
        if (la != lb) return la > lb;
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        int ka = std::get<1>(a), kb = std::get<1>(b);
        if (std::abs(ka) != std::abs(kb)) return std::abs(ka) < std::abs(kb);
        return ka > kb;
    });

    PolyMatrix e = PolyMatrix::identity(W->field(), W->rep_dim(), B.dim());
    std::vector<PeelStep> log;
    for (const auto& [z, k, m] : targets) peel_copies(cat.at(z), k, m, B, e, log, ctx);

    if (!((e * e) == e)) throw InternalError(ctx + ": remainder projector is not idempotent");
    FMatrix ebar = e.reduced(W->field());
    auto betti = reduced_betti(B, ebar);
    LaurentPoly want = LaurentPoly::monomial(top_shift) * cat.at(delta).character.graded_dim();
    if (betti_poly(betti) != want)
        throw MathFailure(ctx + ": top Betti numbers " + betti_poly(betti).str() + " differ from " + want.str());
    if (composition_pairing_rank(cat.at(delta), top_shift, B, e) != 1)
        throw MathFailure(ctx + ": top remainder is not a single copy of " + W->word_str(delta));

    return Decomposition{word, std::move(pieces), delta, top_shift, std::move(e), std::move(betti), std::move(log)};
}

// exact coordinates on the span of a list of morphisms, via one row reduction
class MorphismChart {
public:
    MorphismChart(const FieldPtr& f, const std::vector<PolyMatrix>& basis) : f_(f), n_(basis.size()) {
        using Key = std::tuple<size_t, size_t, Mono>;
        std::map<Key, size_t> index;
        for (const auto& M : basis)
            for (size_t r = 0; r < M.rows(); ++r)
                for (size_t c = 0; c < M.cols(); ++c)
                    for (const auto& [mono, cf] : M.m[r][c].terms()) index.try_emplace(Key{r, c, mono}, 0);
        len_ = 0;
        for (auto& [k, v] : index) v = len_++;
        index_ = std::move(index);

        // row reduce [flattened basis | I]; pivots must exhaust all n_ rows
        FMatrix A(f_, n_, len_ + n_);
        for (size_t i = 0; i < n_; ++i) {
            std::vector<AlgebraicReal> flat(len_, AlgebraicReal::zero(f_));
            flatten_into(basis[i], flat);
            for (size_t j = 0; j < len_; ++j) A.at(i, j) = flat[j];
            A.at(i, len_ + i) = AlgebraicReal::one(f_);
        }
        size_t rank = 0;
        for (size_t col = 0; col < len_ && rank < n_; ++col) {
            size_t piv = rank;
            while (piv < n_ && A.at(piv, col).is_zero()) ++piv;
            if (piv == n_) continue;
            A.swap_rows(piv, rank);
            AlgebraicReal inv = A.at(rank, col).inverse();
            for (size_t j = col; j < len_ + n_; ++j) A.at(rank, j) = inv * A.at(rank, j);
            for (size_t i = 0; i < n_; ++i) {
                if (i == rank || A.at(i, col).is_zero()) continue;
                AlgebraicReal fct = A.at(i, col);
                for (size_t j = col; j < len_ + n_; ++j) A.at(i, j) -= fct * A.at(rank, j);
            }
            pivots_.push_back(col);
            ++rank;
        }
        if (rank != n_) throw InternalError("morphism chart basis is linearly dependent");
        rref_ = std::move(A);
    }

    size_t dim() const { return n_; }

    std::vector<AlgebraicReal> coords(const PolyMatrix& g) const {
        std::vector<AlgebraicReal> w(len_, AlgebraicReal::zero(f_));
        flatten_into(g, w);
        std::vector<AlgebraicReal> x(n_, AlgebraicReal::zero(f_));
        for (size_t k = 0; k < n_; ++k) {
            const AlgebraicReal& c = w[pivots_[k]];
            if (c.is_zero()) continue;
            for (size_t i = 0; i < n_; ++i) x[i] += c * rref_.at(k, len_ + i);
        }
        // membership check: the residual after eliminating all pivots is zero
        std::vector<AlgebraicReal> res = w;
        for (size_t k = 0; k < n_; ++k) {
            const AlgebraicReal c = res[pivots_[k]];
            if (c.is_zero()) continue;
            for (size_t j = 0; j < len_; ++j) res[j] -= c * rref_.at(k, j);
        }
        for (const auto& v : res)
            if (!v.is_zero()) throw InternalError("morphism is outside the chart span");
        return x;
    }

private:
    void flatten_into(const PolyMatrix& M, std::vector<AlgebraicReal>& out) const {
        for (size_t r = 0; r < M.rows(); ++r)
            for (size_t c = 0; c < M.cols(); ++c)
                for (const auto& [mono, cf] : M.m[r][c].terms()) {
                    auto it = index_.find(std::tuple<size_t, size_t, Mono>{r, c, mono});
                    if (it == index_.end()) throw InternalError("morphism is outside the chart span");
                    out[it->second] += cf;
                }
    }

    FieldPtr f_;
    size_t n_ = 0, len_ = 0;
    std::map<std::tuple<size_t, size_t, Mono>, size_t> index_;
    std::vector<size_t> pivots_;
    FMatrix rref_;
};

struct End0Algebra {
    std::vector<PolyMatrix> basis;
    // prod[i][j]: coordinates of basis[i] * basis[j] in the basis
    std::vector<std::vector<std::vector<AlgebraicReal>>> prod;
    FMatrix trace_form;  // of the left regular representation
    std::vector<std::vector<AlgebraicReal>> radical;
};

// the degree-zero endomorphism algebra with its radical, computed as the
// kernel of the regular trace form (valid in characteristic zero)
inline End0Algebra end0_radical(const BSBimodule& B) {
    const FieldPtr& f = B.field();
    End0Algebra A;
    A.basis = hom_space(B, B, 0);
    size_t n = A.basis.size();
    A.trace_form = FMatrix(f, n, n);
    if (n == 0) return A;
    MorphismChart chart(f, A.basis);
    A.prod.assign(n, std::vector<std::vector<AlgebraicReal>>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) A.prod[i][j] = chart.coords(A.basis[i] * A.basis[j]);
    std::vector<AlgebraicReal> tr(n, AlgebraicReal::zero(f));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) tr[i] += A.prod[i][k][k];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            AlgebraicReal s = AlgebraicReal::zero(f);
            for (size_t m = 0; m < n; ++m)
                if (!A.prod[i][j][m].is_zero()) s += A.prod[i][j][m] * tr[m];
            A.trace_form.at(i, j) = s;
        }
    A.radical = A.trace_form.nullspace();
    return A;
}

// the idempotent projecting onto the indecomposable summand that contains the
// bottom class: lift the unit of the one-dimensional quotient factor singled
// out by the bottom-class character, then sharpen by the cubic iteration
inline PolyMatrix top_idempotent(const BSBimodule& B) {
    const FieldPtr& f = B.field();
    End0Algebra A = end0_radical(B);
    size_t n = A.basis.size();
    if (n == 0) throw InternalError("empty endomorphism algebra");

    std::vector<AlgebraicReal> chi;
    chi.reserve(n);
    for (const auto& M : A.basis) chi.push_back(M.m[0][0].constant_term());

    // central modulo the radical: every commutator [z, b_k] pairs to zero
    // under the trace form
    FMatrix cz(f, n * n, n);
    for (size_t k = 0; k < n; ++k)
        for (size_t t = 0; t < n; ++t)
            for (size_t i = 0; i < n; ++i) {
                AlgebraicReal s = AlgebraicReal::zero(f);
                for (size_t u = 0; u < n; ++u) {
                    AlgebraicReal comm = A.prod[i][k][u] - A.prod[k][i][u];
                    if (!comm.is_zero()) s += A.trace_form.at(t, u) * comm;
                }
                cz.at(k * n + t, i) = s;
            }
    auto Zt = cz.nullspace();
    size_t m = Zt.size();
    if (m == 0) throw InternalError("center of the endomorphism algebra is empty");

    FMatrix chirow(f, 1, m);
    for (size_t j = 0; j < m; ++j) {
        AlgebraicReal s = AlgebraicReal::zero(f);
        for (size_t i = 0; i < n; ++i)
            if (!Zt[j][i].is_zero()) s += Zt[j][i] * chi[i];
        chirow.at(0, j) = s;
    }
    std::vector<std::vector<AlgebraicReal>> K;
    for (const auto& kc : chirow.nullspace()) {
        std::vector<AlgebraicReal> kappa(n, AlgebraicReal::zero(f));
        for (size_t j = 0; j < m; ++j)
            for (size_t i = 0; i < n; ++i) kappa[i] += kc[j] * Zt[j][i];
        K.push_back(std::move(kappa));
    }

    // z0 central mod radical, chi(z0) = 1, z0 K inside the radical
    FMatrix sys(f, 1 + K.size() * n, m);
    std::vector<AlgebraicReal> rhs(1 + K.size() * n, AlgebraicReal::zero(f));
    rhs[0] = AlgebraicReal::one(f);
    for (size_t j = 0; j < m; ++j) sys.at(0, j) = chirow.at(0, j);
    for (size_t ki = 0; ki < K.size(); ++ki) {
        // coordinates of Zt_j * kappa, then pair with the trace form
        for (size_t j = 0; j < m; ++j) {
            std::vector<AlgebraicReal> pc(n, AlgebraicReal::zero(f));
            for (size_t i = 0; i < n; ++i) {
                if (Zt[j][i].is_zero()) continue;
                for (size_t u = 0; u < n; ++u) {
                    if (K[ki][u].is_zero()) continue;
                    AlgebraicReal w = Zt[j][i] * K[ki][u];
                    for (size_t q = 0; q < n; ++q)
                        if (!A.prod[i][u][q].is_zero()) pc[q] += w * A.prod[i][u][q];
                }
            }
            for (size_t t = 0; t < n; ++t) {
                AlgebraicReal s = AlgebraicReal::zero(f);
                for (size_t q = 0; q < n; ++q)
                    if (!pc[q].is_zero()) s += A.trace_form.at(t, q) * pc[q];
                sys.at(1 + ki * n + t, j) = s;
            }
        }
    }
    auto sol = sys.solve(rhs);
    if (!sol) throw InternalError("no candidate idempotent over the radical");

    PolyMatrix e(f, B.nvars(), B.dim(), B.dim());
    for (size_t i = 0; i < n; ++i) {
        AlgebraicReal c = AlgebraicReal::zero(f);
        for (size_t j = 0; j < m; ++j)
            if (!(*sol)[j].is_zero()) c += (*sol)[j] * Zt[j][i];
        if (!c.is_zero()) e = e + c * A.basis[i];
    }
    AlgebraicReal three = AlgebraicReal::rational(f, Rat(3));
    AlgebraicReal two = AlgebraicReal::rational(f, Rat(2));
    for (int it = 0; it < 64; ++it) {
        PolyMatrix e2 = e * e;
        if (e2 == e) return e;
        e = three * e2 - two * (e2 * e);
    }
    throw InternalError("idempotent sharpening did not terminate");
}

// the indecomposable summand of BS(word) containing the bottom class, for a
// reduced word, certified against the catalogue entry of its element
inline std::pair<PolyMatrix, std::map<int, Int>> split_top(SoergelCatalogue& cat,
                                                           const std::vector<std::uint8_t>& word) {
    const CoxeterPtr& W = cat.group();
    if (!W->is_reduced(word)) throw InputError("split_top needs a reduced word");
    BSBimodule B(W, word);
    PolyMatrix e = top_idempotent(B);
    ElementId x = W->element_of_word(word);
    const Summand& X = cat.at(x);
    auto betti = reduced_betti(B, e.reduced(W->field()));
    const std::string ctx = "top summand of BS(" + detail::word_text(*W, word) + ")";
    if (betti_poly(betti) != X.character.graded_dim())
        throw MathFailure(ctx + ": Betti numbers " + betti_poly(betti).str() + " differ from " +
                          X.character.graded_dim().str());
    if (composition_pairing_rank(X, 0, B, e) != 1)
        throw MathFailure(ctx + ": image is not a single copy of " + W->word_str(x));
    return {std::move(e), std::move(betti)};
}

// the relations tying the intersection form of B(word + s) to the form of
// B(word), checked on the whole basis through independent ring arithmetic,
// plus non-degeneracy of the reduced form
inline bool induced_form_check(const BSBimodule& B, size_t s, std::string* witness = nullptr) {
    const CoxeterPtr& W = B.group();
    std::vector<std::uint8_t> wd = B.word();
    wd.push_back(static_cast<std::uint8_t>(s));
    BSBimodule E(W, wd);
    BSBimodule Bs(W, {static_cast<std::uint8_t>(s)});
    Poly alpha_s = Poly::linear_form(W->field(), W->simple_root_row(s));

    auto fail = [&](const std::string& msg) {
        if (witness) *witness = msg;
        return false;
    };
    for (size_t a = 0; a < B.dim(); ++a)
        for (size_t b = 0; b < B.dim(); ++b) {
            auto ea = B.basis_elt(static_cast<BSBimodule::Mask>(a));
            auto eb = B.basis_elt(static_cast<BSBimodule::Mask>(b));
            Poly base = B.trace(B.multiply(ea, eb));
            auto aa = BSBimodule::tensor(B, ea, Bs, Bs.basis_elt(0)).second;
            auto ab = BSBimodule::tensor(B, eb, Bs, Bs.basis_elt(0)).second;
            auto ba = BSBimodule::tensor(B, ea, Bs, Bs.basis_elt(1)).second;
            auto bb = BSBimodule::tensor(B, eb, Bs, Bs.basis_elt(1)).second;
            std::string tag = B.basis_str(static_cast<BSBimodule::Mask>(a)) + ", " +
                              B.basis_str(static_cast<BSBimodule::Mask>(b));
            if (E.trace(E.multiply(aa, ab)) != demazure(*W, s, base))
                return fail("appended-identity pairing differs from the Demazure image at " + tag);
            if (E.trace(E.multiply(aa, bb)) != base || E.trace(E.multiply(ba, ab)) != base)
                return fail("mixed pairing differs from the base form at " + tag);
            if (E.trace(E.multiply(ba, bb)) != base * alpha_s)
                return fail("appended-generator pairing differs from the root multiple at " + tag);
        }
    if (E.reduced_gram().rank() != E.dim()) return fail("reduced intersection form is degenerate");
    return true;
}

}  // namespace shl
