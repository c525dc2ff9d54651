#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgcat.hpp"
#include "errors.hpp"
#include "homotopy.hpp"
#include "matrix.hpp"
#include "twisted.hpp"

namespace twistlab {

// ---- finite-dimensional algebras -------------------------------------------

// A unital associative algebra on an ordered basis, together with the data the
// heart machinery needs: a complete set of orthogonal idempotents and a basis
// of the radical. The radical is user-supplied and verified, never computed.
// Covers additionally need the semisimple quotient to be split with one simple
// per idempotent, so the idempotents are required to complement the radical.
template <class F>
struct AlgebraPresentation {
    using Mat = Matrix<F>;

    F k;
    std::size_t dim = 0;
    std::vector<Mat> lmult;        // left multiplication by each basis element
    Mat unit;                      // coordinates of 1, dim x 1
    std::vector<Mat> idempotents;  // orthogonal, summing to the unit
    Mat radical;                   // basis of the radical, columns

    Mat basis_elt(std::size_t a) const {
        Mat v(k, dim, 1);
        v.at(a, 0) = k.one();
        return v;
    }

    // x -> v x as a matrix on coordinates
    Mat lm(const Mat& v) const {
        require_shape(v.rows() == dim && v.cols() == 1, "algebra element shape");
        Mat r(k, dim, dim);
        for (std::size_t a = 0; a < dim; ++a)
            if (!k.is_zero(v.at(a, 0))) r = r + lmult[a].scaled(v.at(a, 0));
        return r;
    }

    // x -> x v; column b is e_b v
    Mat rm(const Mat& v) const {
        require_shape(v.rows() == dim && v.cols() == 1, "algebra element shape");
        Mat r(k, dim, dim);
        for (std::size_t b = 0; b < dim; ++b) r.paste(0, b, lmult[b] * v);
        return r;
    }

    Mat mult(const Mat& x, const Mat& y) const { return lm(x) * y; }

    Mat idem_combination(const std::vector<std::size_t>& which) const {
        Mat e(k, dim, 1);
        for (std::size_t i : which) {
            require_shape(i < idempotents.size(), "idempotent index out of range");
            e = e + idempotents[i];
        }
        return e;
    }

    ValidationReport validate() const {
        require_shape(lmult.size() == dim, "one multiplication matrix per basis element");
        for (const Mat& m : lmult)
            require_shape(m.rows() == dim && m.cols() == dim, "multiplication matrix shape");
        require_shape(unit.rows() == dim && unit.cols() == 1, "unit coordinate shape");
        for (const Mat& e : idempotents)
            require_shape(e.rows() == dim && e.cols() == 1, "idempotent coordinate shape");
        require_shape(radical.rows() == dim, "radical basis shape");

        ValidationReport rep;
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) {
                Mat lhs = lm(lmult[a].col(b));          // (e_a e_b) . -
                Mat rhs = lmult[a] * lmult[b];          // e_a . (e_b . -)
                if (lhs != rhs)
                    rep.add("associativity",
                            "(" + std::to_string(a) + "," + std::to_string(b) + ")",
                            (lhs - rhs).to_string());
            }
        Mat id = Mat::identity(k, dim);
        if (lm(unit) != id || rm(unit) != id)
            rep.add("unit law", "1", (lm(unit) - id).to_string());

        Mat esum(k, dim, 1);
        for (std::size_t i = 0; i < idempotents.size(); ++i) {
            esum = esum + idempotents[i];
            for (std::size_t j = 0; j < idempotents.size(); ++j) {
                Mat p = mult(idempotents[i], idempotents[j]);
                Mat want = i == j ? idempotents[i] : Mat(k, dim, 1);
                if (p != want)
                    rep.add("idempotent orthogonality",
                            "(" + std::to_string(i) + "," + std::to_string(j) + ")",
                            (p - want).to_string());
            }
        }
        if (esum != unit)
            rep.add("idempotent completeness", "sum", (esum - unit).to_string());

        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t r = 0; r < radical.cols(); ++r) {
                bool left = express_in(radical, mult(basis_elt(a), radical.col(r))).has_value();
                bool right = express_in(radical, mult(radical.col(r), basis_elt(a))).has_value();
                if (!left || !right)
                    rep.add("radical ideal",
                            "(" + std::to_string(a) + "," + std::to_string(r) + ")",
                            left ? "right product escapes" : "left product escapes");
            }
        Mat power = radical;
        for (std::size_t step = 0; step < dim && power.cols(); ++step) {
            Mat prods(k, dim, 0);
            for (std::size_t i = 0; i < power.cols(); ++i)
                for (std::size_t j = 0; j < radical.cols(); ++j)
                    prods = Mat::hcat(prods, mult(power.col(i), radical.col(j)));
            power = column_basis(prods);
        }
        if (power.cols())
            rep.add("radical nilpotency", "radical", "powers do not vanish");

        Mat frame(k, dim, 0);
        for (const Mat& e : idempotents) frame = Mat::hcat(frame, e);
        frame = Mat::hcat(frame, radical);
        if (idempotents.size() + radical.cols() != dim || rank(frame) != dim)
            rep.add("radical complement", "basis",
                    "idempotents and radical do not form a basis");
        return rep;
    }
};

// ---- finite-dimensional right modules ---------------------------------------

// A projective presentation P1 -> P0 in Proj(R), stored as the module matrix
// of the degree 0 map; the cokernel is the module it presents.
template <class F>
struct ModulePresentation {
    Obj p1, p0;
    Matrix<F> map;
};

template <class F>
struct FpModule {
    using Mat = Matrix<F>;

    std::shared_ptr<const AlgebraPresentation<F>> alg;
    std::size_t dim = 0;
    std::vector<Mat> action;  // right action by each algebra basis element
    std::optional<ModulePresentation<F>> presentation;

    // right action by an arbitrary element, coordinates in the algebra basis
    Mat act(const Mat& v) const {
        require_shape(v.rows() == alg->dim && v.cols() == 1, "algebra element shape");
        Mat r(alg->k, dim, dim);
        for (std::size_t a = 0; a < alg->dim; ++a)
            if (!alg->k.is_zero(v.at(a, 0))) r = r + action[a].scaled(v.at(a, 0));
        return r;
    }

    ValidationReport validate() const {
        require_shape(alg != nullptr, "module needs an algebra");
        require_shape(action.size() == alg->dim, "one action matrix per basis element");
        for (const Mat& m : action)
            require_shape(m.rows() == dim && m.cols() == dim, "action matrix shape");
        ValidationReport rep;
        if (act(alg->unit) != Mat::identity(alg->k, dim))
            rep.add("unital action", "1", (act(alg->unit) - Mat::identity(alg->k, dim)).to_string());
        // m (e_a e_b) = (m e_a) e_b
        for (std::size_t a = 0; a < alg->dim; ++a)
            for (std::size_t b = 0; b < alg->dim; ++b) {
                Mat lhs = act(alg->lmult[a].col(b));
                Mat rhs = action[b] * action[a];
                if (lhs != rhs)
                    rep.add("action associativity",
                            "(" + std::to_string(a) + "," + std::to_string(b) + ")",
                            (lhs - rhs).to_string());
            }
        return rep;
    }
};

// dimension of M e_i for each idempotent
template <class F>
std::vector<std::size_t> dimension_vector(const FpModule<F>& m) {
    std::vector<std::size_t> r;
    for (const auto& e : m.alg->idempotents) r.push_back(rank(m.act(e)));
    return r;
}

template <class F>
FpModule<F> zero_module(std::shared_ptr<const AlgebraPresentation<F>> alg) {
    return {alg, 0, std::vector<Matrix<F>>(alg->dim, Matrix<F>(alg->k, 0, 0)), {}};
}

template <class F>
FpModule<F> direct_sum(const FpModule<F>& a, const FpModule<F>& b) {
    require_shape(a.alg.get() == b.alg.get(), "sum of modules over different algebras");
    FpModule<F> r{a.alg, a.dim + b.dim, {}, {}};
    for (std::size_t c = 0; c < a.alg->dim; ++c) {
        Matrix<F> m(a.alg->k, r.dim, r.dim);
        m.paste(0, 0, a.action[c]);
        m.paste(a.dim, a.dim, b.action[c]);
        r.action.push_back(std::move(m));
    }
    return r;
}

// the submodule spanned by `basis` (columns, independent), action restricted
template <class F>
FpModule<F> submodule(const FpModule<F>& m, const Matrix<F>& basis) {
    require_shape(basis.rows() == m.dim, "submodule basis shape");
    FpModule<F> r{m.alg, basis.cols(), {}, {}};
    for (std::size_t c = 0; c < m.alg->dim; ++c) {
        auto rest = express_in(basis, m.action[c] * basis);
        require_contract(rest.has_value(), "span is not closed under the algebra action");
        r.action.push_back(std::move(*rest));
    }
    return r;
}

// ---- projectives as a dg-category -------------------------------------------

namespace detail {

template <class F>
Matrix<F> vec(const Matrix<F>& m) {
    Matrix<F> v(m.field(), m.rows() * m.cols(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.at(i * m.cols() + j, 0) = m.at(i, j);
    return v;
}

} // namespace detail

// The category of chosen projectives e R, presented in degree 0. Morphism
// spaces are Hom_R(e_a R, e_b R) = e_b R e_a; the stored bookkeeping converts
// between coordinate vectors over the category and honest module matrices,
// which is what the truncation machinery computes with.
template <class F>
struct ProjCategory {
    using Mat = Matrix<F>;

    std::shared_ptr<const AlgebraPresentation<F>> alg;
    std::shared_ptr<const DgCat<F>> cat;
    std::vector<std::vector<std::size_t>> generators;   // idempotent indices per object
    std::vector<Mat> gen_basis;                         // basis of e_g R inside R
    std::vector<std::vector<Mat>> gen_action;           // right action on e_g R, per basis elt
    std::map<std::pair<int, int>, Mat> hom_elems;       // basis of e_b R e_a, columns in R
    std::map<std::pair<int, int>, std::vector<Mat>> hom_mats;  // their module matrices
    std::vector<std::optional<int>> idem_to_gen;        // single-idempotent objects

    std::size_t module_dim(int g) const { return gen_basis[std::size_t(g)].cols(); }
    std::size_t module_dim(const Obj& s) const {
        std::size_t n = 0;
        for (int g : s) n += module_dim(g);
        return n;
    }

    FpModule<F> module_of(const Obj& s) const {
        cat->check_tuple(s);
        FpModule<F> r = zero_module(alg);
        for (int g : s) {
            FpModule<F> part{alg, module_dim(g), gen_action[std::size_t(g)], {}};
            r = direct_sum(r, part);
        }
        return r;
    }

    // degree 0 coordinate vector over the category -> module map matrix
    Mat module_matrix(const Obj& s, const Obj& t, const Mat& v) const {
        require_shape(v.rows() == cat->tdim(s, t, 0) && v.cols() == 1,
                      "module matrix: coordinate shape");
        Mat r(alg->k, module_dim(t), module_dim(s));
        std::size_t coff = 0;
        for (std::size_t si = 0; si < s.size(); ++si) {
            std::size_t roff = 0;
            for (std::size_t ti = 0; ti < t.size(); ++ti) {
                Mat c = cat->block_of(s, t, 0, v, si, ti);
                if (c.rows()) {
                    const auto& mats = hom_mats.at({s[si], t[ti]});
                    Mat blk(alg->k, module_dim(t[ti]), module_dim(s[si]));
                    for (std::size_t x = 0; x < c.rows(); ++x)
                        if (!alg->k.is_zero(c.at(x, 0))) blk = blk + mats[x].scaled(c.at(x, 0));
                    r.paste(roff, coff, blk);
                }
                roff += module_dim(t[ti]);
            }
            coff += module_dim(s[si]);
        }
        return r;
    }

    // inverse of module_matrix; rejects matrices that are not module maps
    Mat hom_coords(const Obj& s, const Obj& t, const Mat& m) const {
        require_shape(m.rows() == module_dim(t) && m.cols() == module_dim(s),
                      "hom coordinates: matrix shape");
        Mat v(alg->k, cat->tdim(s, t, 0), 1);
        std::size_t coff = 0;
        for (std::size_t si = 0; si < s.size(); ++si) {
            std::size_t roff = 0;
            for (std::size_t ti = 0; ti < t.size(); ++ti) {
                Mat blk = m.block(roff, coff, module_dim(t[ti]), module_dim(s[si]));
                const auto& mats = hom_mats.at({s[si], t[ti]});
                if (mats.empty()) {
                    require_contract(blk.is_zero(),
                                     "matrix is not a module map between these projectives");
                } else {
                    Mat sys(alg->k, blk.rows() * blk.cols(), mats.size());
                    for (std::size_t x = 0; x < mats.size(); ++x)
                        sys.paste(0, x, detail::vec(mats[x]));
                    auto sol = solve_linear(sys, detail::vec(blk));
                    require_contract(sol.has_value(),
                                     "matrix is not a module map between these projectives");
                    v.paste(cat->toffset(s, t, 0, si, ti), 0, *sol);
                }
                roff += module_dim(t[ti]);
            }
            coff += module_dim(s[si]);
        }
        return v;
    }
};

template <class F>
ProjCategory<F> proj_category(std::shared_ptr<const AlgebraPresentation<F>> alg,
                              std::vector<std::vector<std::size_t>> generators) {
    require_shape(alg != nullptr, "projective category needs an algebra");
    {
        ValidationReport rep = alg->validate();
        require_contract(rep.passed(), "algebra presentation rejected: " + rep.to_string());
    }
    require_shape(!generators.empty(), "projective category needs generators");
    for (const auto& g : generators) {
        require_shape(!g.empty(), "a generator needs at least one idempotent");
        std::vector<std::size_t> s = g;
        std::sort(s.begin(), s.end());
        require_shape(std::adjacent_find(s.begin(), s.end()) == s.end(),
                      "repeated idempotent in a generator");
    }

    ProjCategory<F> pc;
    pc.alg = alg;
    pc.generators = generators;
    const F& k = alg->k;
    int n = int(generators.size());

    auto c = std::make_shared<DgCat<F>>(k);
    std::vector<Matrix<F>> idem;
    for (int a = 0; a < n; ++a) {
        std::string nm = "P";
        for (std::size_t i : generators[std::size_t(a)]) nm += std::to_string(i + 1);
        c->add_object(nm);
        idem.push_back(alg->idem_combination(generators[std::size_t(a)]));
        pc.gen_basis.push_back(column_basis(alg->lm(idem.back())));
    }
    for (int g = 0; g < n; ++g) {
        std::vector<Matrix<F>> acts;
        for (std::size_t a = 0; a < alg->dim; ++a) {
            auto r = express_in(pc.gen_basis[std::size_t(g)],
                                alg->rm(alg->basis_elt(a)) * pc.gen_basis[std::size_t(g)]);
            internal_check(r.has_value(), "projective category: e R is not a right ideal");
            acts.push_back(std::move(*r));
        }
        pc.gen_action.push_back(std::move(acts));
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Matrix<F> span = column_basis(alg->lm(idem[std::size_t(b)]) *
                                          alg->rm(idem[std::size_t(a)]));
            std::vector<Matrix<F>> mats;
            for (std::size_t t = 0; t < span.cols(); ++t) {
                auto m = express_in(pc.gen_basis[std::size_t(b)],
                                    alg->lm(span.col(t)) * pc.gen_basis[std::size_t(a)]);
                internal_check(m.has_value(), "projective category: hom element acts badly");
                mats.push_back(std::move(*m));
            }
            if (span.cols()) c->set_dim(a, b, 0, span.cols());
            pc.hom_elems.emplace(std::make_pair(a, b), std::move(span));
            pc.hom_mats.emplace(std::make_pair(a, b), std::move(mats));
        }
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m)
            for (int b = 0; b < n; ++b) {
                const Matrix<F>& hf = pc.hom_elems.at({a, m});
                const Matrix<F>& hg = pc.hom_elems.at({m, b});
                const Matrix<F>& ht = pc.hom_elems.at({a, b});
                if (!hf.cols() || !hg.cols()) continue;
                Matrix<F> cm(k, ht.cols(), hg.cols() * hf.cols());
                for (std::size_t gi = 0; gi < hg.cols(); ++gi)
                    for (std::size_t fi = 0; fi < hf.cols(); ++fi) {
                        Matrix<F> w = alg->mult(hg.col(gi), hf.col(fi));
                        auto coords = express_in(ht, w);
                        internal_check(coords.has_value(),
                                       "projective category: composite escapes its hom space");
                        cm.paste(0, gi * hf.cols() + fi, *coords);
                    }
                if (ht.cols()) c->set_comp(a, m, b, 0, 0, cm);
            }
    for (int a = 0; a < n; ++a) {
        auto u = express_in(pc.hom_elems.at({a, a}), idem[std::size_t(a)]);
        internal_check(u.has_value(), "projective category: unit escapes its hom space");
        c->set_unit(a, *u);
    }
    c->nonpositive = true;
    pc.cat = c;

    pc.idem_to_gen.assign(alg->idempotents.size(), std::nullopt);
    for (int a = 0; a < n; ++a)
        if (generators[std::size_t(a)].size() == 1)
            pc.idem_to_gen[generators[std::size_t(a)][0]] = a;
    return pc;
}

template <class F>
Tw<F> embed_object(const ProjCategory<F>& pc, int g) {
    require_shape(g >= 0 && std::size_t(g) < pc.generators.size(), "unknown projective");
    return tw_point(pc.cat, Obj{g}, 0, TwFlavor::minus);
}

namespace detail {

template <class F>
void require_over(const ProjCategory<F>& pc, const Tw<F>& x) {
    require_shape(x.cat_ptr().get() == pc.cat.get() || *x.cat_ptr() == *pc.cat,
                  "complex is not over this projective category");
}

// differential X^i -> X^{i+1} of the underlying complex of modules
template <class F>
Matrix<F> module_diff(const ProjCategory<F>& pc, const Tw<F>& x, int i) {
    return pc.module_matrix(x.obj(i), x.obj(i + 1), x.twist(i, i + 1));
}

} // namespace detail

// the presentation is accepted when its cokernel has the dimension vector of
// the module; that rank check is all the later constructions rely on
template <class F>
ValidationReport check_presentation(const ProjCategory<F>& pc, const FpModule<F>& m) {
    ValidationReport rep;
    if (!m.presentation) {
        rep.add("presentation", "module", "no presentation attached");
        return rep;
    }
    const auto& pr = *m.presentation;
    pc.hom_coords(pr.p1, pr.p0, pr.map);  // throws unless it is a module map
    FpModule<F> p0 = pc.module_of(pr.p0);
    auto dv = dimension_vector(m);
    for (std::size_t i = 0; i < m.alg->idempotents.size(); ++i) {
        Matrix<F> e = p0.act(m.alg->idempotents[i]);
        std::size_t coker = rank(e) - rank(e * pr.map);
        if (coker != dv[i])
            rep.add("presentation rank", "idempotent " + std::to_string(i),
                    std::to_string(coker) + " vs " + std::to_string(dv[i]));
    }
    return rep;
}

// ---- heart cohomology --------------------------------------------------------

template <class F>
struct HeartCohomology {
    FpModule<F> mod;   // H^n as a module
    Matrix<F> reps;    // representative cycles in the module coordinates of X^n
};

template <class F>
HeartCohomology<F> heart_cohomology(const ProjCategory<F>& pc, const Tw<F>& xin, int n) {
    detail::require_over(pc, xin);
    Tw<F> x = xin.normalized();
    Matrix<F> d_in = detail::module_diff(pc, x, n - 1);
    Matrix<F> d_out = detail::module_diff(pc, x, n);
    Cohomology<F> h(d_in, d_out);
    FpModule<F> amb = pc.module_of(x.obj(n));
    FpModule<F> r{pc.alg, h.dim(), {}, {}};
    for (std::size_t c = 0; c < pc.alg->dim; ++c) {
        Matrix<F> m(pc.alg->k, h.dim(), h.dim());
        for (std::size_t j = 0; j < h.dim(); ++j)
            m.paste(0, j, h.decompose(amb.action[c] * h.rep(j)).first);
        r.action.push_back(std::move(m));
    }
    return {std::move(r), h.reps()};
}

// ---- projective covers -------------------------------------------------------

template <class F>
struct ProjectiveCover {
    Obj p;                                 // sum of basic projectives
    Matrix<F> epi;                         // module map P -> M, module coordinates
    std::vector<std::size_t> multiplicities;
};

template <class F>
ProjectiveCover<F> projective_cover(const ProjCategory<F>& pc, const FpModule<F>& m) {
    require_shape(m.alg.get() == pc.alg.get(), "module over a different algebra");
    const F& k = pc.alg->k;

    Matrix<F> rad_img(k, m.dim, 0);  // spans M rad
    for (std::size_t r = 0; r < pc.alg->radical.cols(); ++r)
        rad_img = Matrix<F>::hcat(rad_img, m.act(pc.alg->radical.col(r)));
    rad_img = column_basis(rad_img);

    ProjectiveCover<F> cov{{}, Matrix<F>(k, m.dim, 0), {}};
    Matrix<F> picked = rad_img;
    for (std::size_t i = 0; i < pc.alg->idempotents.size(); ++i) {
        Matrix<F> part = m.act(pc.alg->idempotents[i]);
        std::size_t mi = rank(part) - rank(part * rad_img);
        cov.multiplicities.push_back(mi);
        if (!mi) continue;
        require_contract(pc.idem_to_gen[i].has_value(),
                         "cover needs the basic projective for idempotent " +
                             std::to_string(i) + " among the generators");
        int g = *pc.idem_to_gen[i];
        Matrix<F> cands = column_basis(part);
        std::size_t found = 0;
        for (std::size_t c = 0; c < cands.cols() && found < mi; ++c) {
            Matrix<F> trial = Matrix<F>::hcat(picked, cands.col(c));
            if (rank(trial) == picked.cols() + 1) {
                picked = trial;
                ++found;
                cov.p.push_back(g);
                // the copy of e_g R mapping through this generator of M
                const Matrix<F>& gb = pc.gen_basis[std::size_t(g)];
                Matrix<F> cols(k, m.dim, gb.cols());
                for (std::size_t s = 0; s < gb.cols(); ++s)
                    cols.paste(0, s, m.act(gb.col(s)) * cands.col(c));
                cov.epi = Matrix<F>::hcat(cov.epi, cols);
            }
        }
        internal_check(found == mi, "projective cover: generator search came up short");
    }
    internal_check(rank(cov.epi) == m.dim, "projective cover: not onto");
    return cov;
}

// ---- t-truncation --------------------------------------------------------------

template <class F>
struct TTriangle {
    Tw<F> x, lower, upper;          // X, tau_{<=n} X, tau_{>=n+1} X
    TwMor<F> counit;                // lower -> x
    TwMor<F> unit;                  // x -> upper
    TwMor<F> htpy;                  // nullhomotopy of unit . counit
    bool exact = true;
    std::optional<int> valid_from;  // heart degrees >= this are certified; absent when exact
};

// Replace the candidate [X^{<n} -> cycles at n] by projective covers, degree by
// degree downward. Each stage covers the module of compatible pairs, which
// keeps the counit a quasi-isomorphism as far as the stages reach. depth_cap
// bounds how far below the support of X the covers may continue; hitting the
// cap downgrades the result from exact to a window with explicit validity.
template <class F>
TTriangle<F> t_truncate(const ProjCategory<F>& pc, const Tw<F>& xin, int n, int depth_cap) {
    require_contract(depth_cap >= 1, "t truncation needs depth_cap >= 1");
    require_contract(xin.flavor() == TwFlavor::minus,
                     "t truncation wants its input marked bounded above");
    detail::require_over(pc, xin);
    Tw<F> x = xin.normalized();
    const F& k = pc.alg->k;

    std::map<int, FpModule<F>> tmod;  // the candidate truncation, as modules
    std::map<int, Matrix<F>> tdf;     // its differentials T^i -> T^{i+1}
    Matrix<F> cyc(k, 0, 0);           // basis of the cycles inside X^n
    int lo = x.lo();
    int top = std::min(n, x.hi());

    if (n >= lo && !x.is_zero_complex()) {
        for (int i = lo; i < top; ++i) tmod.emplace(i, pc.module_of(x.obj(i)));
        if (n <= x.hi()) {
            cyc = kernel_basis(detail::module_diff(pc, x, n));
            tmod.emplace(n, submodule(pc.module_of(x.obj(n)), cyc));
        } else {
            tmod.emplace(top, pc.module_of(x.obj(top)));
        }
        for (int i = lo; i < top; ++i) {
            Matrix<F> d = detail::module_diff(pc, x, i);
            if (i + 1 == n && n <= x.hi()) {
                auto into = express_in(cyc, d);
                internal_check(into.has_value(), "t truncation: image misses the cycles");
                d = std::move(*into);
            }
            tdf.emplace(i, d);
        }
    }

    auto tdim = [&](int i) { return tmod.count(i) ? tmod.at(i).dim : 0; };
    auto tdiff_at = [&](int i) {
        return tdf.count(i) ? tdf.at(i) : Matrix<F>(k, tdim(i + 1), tdim(i));
    };

    std::map<int, Obj> qobj;
    std::map<int, Matrix<F>> qmap;   // Q^i -> T^i in module coordinates
    std::map<int, Matrix<F>> qdiff;  // Q^i -> Q^{i+1}
    bool exact = true;
    int qlo = 0, qhi = -1;

    if (!tmod.empty()) {
        auto cov = projective_cover(pc, tmod.at(top));
        qobj[top] = cov.p;
        qmap.insert_or_assign(top, cov.epi);
        qhi = qlo = top;
        for (int i = top - 1;; --i) {
            std::size_t qd = pc.module_dim(qobj.at(i + 1));
            Matrix<F> row1 = Matrix<F>::hcat(tdiff_at(i), -qmap.at(i + 1));
            Matrix<F> row2 = Matrix<F>::hcat(
                Matrix<F>(k, qdiff.count(i + 1) ? qdiff.at(i + 1).rows() : 0, tdim(i)),
                qdiff.count(i + 1) ? qdiff.at(i + 1) : Matrix<F>(k, 0, qd));
            Matrix<F> w = kernel_basis(Matrix<F>::vcat(row1, row2));
            if (i < lo && w.cols() == 0) break;
            if (i < lo - depth_cap) {
                exact = false;
                break;
            }
            FpModule<F> amb = tmod.count(i)
                                  ? direct_sum(tmod.at(i), pc.module_of(qobj.at(i + 1)))
                                  : pc.module_of(qobj.at(i + 1));
            Matrix<F> wb = tmod.count(i) ? w : w.block(tdim(i), 0, qd, w.cols());
            auto cv = projective_cover(pc, submodule(amb, wb));
            Matrix<F> pi = w * cv.epi;
            qobj[i] = cv.p;
            qmap.insert_or_assign(i, pi.block(0, 0, tdim(i), pi.cols()));
            qdiff.insert_or_assign(i, pi.block(tdim(i), 0, qd, pi.cols()));
            qlo = i;
        }
    }

    Tw<F> lower = [&] {
        if (qhi < qlo) return Tw<F>(pc.cat, 0, -1, {}, TwFlavor::minus);
        std::vector<Obj> comps;
        for (int i = qlo; i <= qhi; ++i) comps.push_back(qobj.at(i));
        Tw<F> r(pc.cat, qlo, qhi, std::move(comps), TwFlavor::minus);
        for (int i = qlo; i < qhi; ++i)
            r.set_twist(i, i + 1, pc.hom_coords(qobj.at(i), qobj.at(i + 1), qdiff.at(i)));
        return r;
    }();
    internal_check(lower.validate().passed(), "t truncation: output fails Maurer-Cartan");

    TwMor<F> counit(lower, x, 0);
    for (int i = std::max(qlo, lo); i <= qhi; ++i) {
        Matrix<F> ci = (i == n && n <= x.hi()) ? cyc * qmap.at(i) : qmap.at(i);
        counit.set_comp(i, i, pc.hom_coords(qobj.at(i), x.obj(i), ci));
    }
    internal_check(tw_is_closed(counit), "t truncation: counit is not closed");

    Pretriangle<F> pt = tw_cone(counit);
    std::optional<int> valid_from;
    if (!exact) valid_from = qlo + 1;
    return {x, lower, pt.cone, counit, pt.j, jf_nullhomotopy(pt), exact, valid_from};
}

// ---- unbounded input through sigma-truncation towers --------------------------

template <class F>
struct UnboundedTruncation {
    TTriangle<F> tri;
    Tower<F> tower;     // tau_{<=n} sigma_{<=c} X, inverse over the cutoff c
    int stabilized_at;  // first cutoff whose truncation equals the limit
};

// tau_{<=n} only reads degrees <= n+1, so the tower over increasing brutal
// cutoffs is constant on the nose; stabilization is still detected by literal
// comparison and cross-checked against truncating the whole complex directly.
template <class F>
UnboundedTruncation<F> proj_t_truncate_unbounded(const ProjCategory<F>& pc, const Tw<F>& xin,
                                                 int n) {
    require_contract(xin.flavor() == TwFlavor::minus,
                     "t truncation wants its input marked bounded above");
    detail::require_over(pc, xin);
    Tw<F> x = xin.normalized();
    int cap = x.hi() - x.lo() + 2;
    int cmax = std::max(n + 1, x.hi()) + 1;

    std::vector<Tw<F>> entries;
    for (int c = n + 1; c <= cmax; ++c) {
        Tw<F> cut = tw_trunc_leq(x, c).t;
        cut.set_flavor(TwFlavor::minus);  // a brutal cutoff is bounded above
        entries.push_back(t_truncate(pc, cut, n, cap).lower);
    }
    for (std::size_t s = 0; s + 1 < entries.size(); ++s)
        internal_check(entries[s] == entries[s + 1],
                       "unbounded truncation: tower failed to stabilize");

    Tower<F> tower{TowerDirection::inverse, entries, {}, 0};
    for (std::size_t s = 0; s + 1 < entries.size(); ++s)
        tower.transitions.push_back(tw_id(entries[s]));
    validate_tower(tower);

    TTriangle<F> direct = t_truncate(pc, x, n, cap);
    internal_check(tower_lim(tower) == direct.lower,
                   "unbounded truncation: limit differs from the direct answer");
    return {std::move(direct), std::move(tower), n + 1};
}

// ---- aisle membership ----------------------------------------------------------

enum class Aisle { weight_leq, weight_geq, t_leq, t_geq };
enum class AisleVerdict { member, not_member, not_certified };

template <class F>
struct AisleReport {
    AisleVerdict verdict = AisleVerdict::not_certified;
    std::string detail;
    std::optional<IsoCertificate<F>> witness;  // equivalence with a brutal truncation
    std::optional<TwMor<F>> contraction;       // when membership comes from X ~ 0
};

// t-aisles are decided outright from heart cohomology. Weight aisles only get
// a sound search: an equivalence onto the brutal truncation, then a
// contraction; when both fail the answer is "not certified", never "false".
template <class F>
AisleReport<F> aisle_membership(const ProjCategory<F>& pc, const Tw<F>& xin, Aisle which,
                                int n) {
    detail::require_over(pc, xin);
    Tw<F> x = xin.normalized();
    AisleReport<F> r;

    if (which == Aisle::t_leq || which == Aisle::t_geq) {
        int klo = which == Aisle::t_leq ? n + 1 : x.lo();
        int khi = which == Aisle::t_leq ? x.hi() : n - 1;
        for (int d = klo; d <= khi; ++d) {
            std::size_t h = heart_cohomology(pc, x, d).mod.dim;
            if (h) {
                r.verdict = AisleVerdict::not_member;
                r.detail = "heart cohomology has dimension " + std::to_string(h) +
                           " at degree " + std::to_string(d);
                return r;
            }
        }
        r.verdict = AisleVerdict::member;
        r.detail = "heart cohomology vanishes outside the aisle window";
        return r;
    }

    IsoDecision<F> d = which == Aisle::weight_geq
                           ? h0_iso_decide(tw_trunc_geq(x, n).incl)
                           : h0_iso_decide(tw_trunc_leq(x, n).proj);
    if (d.iso) {
        r.verdict = AisleVerdict::member;
        r.witness = d.certificate;
        r.detail = d.certificate ? "equivalent to the brutal truncation"
                                 : "equivalent to the brutal truncation (" + d.note + ")";
        // no componentwise certificate: a contraction still makes the report checkable
        if (!r.witness) r.contraction = nullhomotopy(tw_id(x));
        return r;
    }
    if (auto c = nullhomotopy(tw_id(x))) {
        r.verdict = AisleVerdict::member;
        r.contraction = std::move(c);
        r.detail = "contractible";
        return r;
    }
    r.verdict = AisleVerdict::not_certified;
    r.detail = "no equivalence with the brutal truncation was found; membership undecided";
    return r;
}

// ---- derived projectivity -------------------------------------------------------

template <class F>
struct DerivedProjReport {
    bool certified = false;
    AisleReport<F> coaisle;                      // Q in t<=0
    std::vector<std::size_t> obstruction_dims;   // dim H^0 Hom(Q, Z[1]) per test object
    std::optional<TwMor<F>> obstruction;         // a nonzero class, when one exists
    FpModule<F> heart;                           // H^0_t(Q)
    bool heart_projective = false;
    std::string detail;
};

// Certifies Q as projective relative to the supplied family: Q sits in t<=0,
// every H^0 Hom(Q, Z[1]) vanishes, and H^0_t(Q) has a cover with zero kernel.
// The certificate is scoped to the family; a failure ships a witness cocycle.
template <class F>
DerivedProjReport<F> derived_projective_cert(const ProjCategory<F>& pc, const Tw<F>& q,
                                             const std::vector<Tw<F>>& tests) {
    detail::require_over(pc, q);
    for (const Tw<F>& z : tests)
        require_contract(
            aisle_membership(pc, z, Aisle::t_leq, 0).verdict == AisleVerdict::member,
            "derived projectivity: every test object must sit in t<=0");

    DerivedProjReport<F> r{false, aisle_membership(pc, q, Aisle::t_leq, 0),
                           {},    {},
                           heart_cohomology(pc, q, 0).mod,
                           false, ""};
    bool orthogonal = true;
    for (const Tw<F>& z : tests) {
        auto h = tw_hom_cohomology(q, tw_shift(z, 1), 0);
        r.obstruction_dims.push_back(h.dim);
        if (h.dim && !r.obstruction) r.obstruction = h.reps[0];
        if (h.dim) orthogonal = false;
    }
    ProjectiveCover<F> cov = projective_cover(pc, r.heart);
    r.heart_projective = pc.module_dim(cov.p) == r.heart.dim;
    r.certified = r.coaisle.verdict == AisleVerdict::member && orthogonal && r.heart_projective;
    r.detail = r.certified              ? "projective relative to the supplied family"
               : !r.heart_projective    ? "H^0_t has a proper cover"
               : !orthogonal            ? "a shifted test object receives a nonzero class"
                                        : "not in t<=0: " + r.coaisle.detail;
    return r;
}

} // namespace twistlab
