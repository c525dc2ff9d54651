#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twisted.hpp"

namespace twistlab {

// The hom complex of a pair of twisted complexes on their finite windows.
// Basis: component spaces hom^{i-j+p}(X^i, Y^j), i outer, j inner, so every
// vectorization is reproducible.
template <class F>
class HomWindowComplex {
public:
    HomWindowComplex(const Tw<F>& x, const Tw<F>& y)
        : x_(x.normalized()), y_(y.normalized()) {}

    const Tw<F>& src() const { return x_; }
    const Tw<F>& tgt() const { return y_; }

    struct Slot {
        int i, j;
        std::size_t dim, off;
    };

    std::vector<Slot> slots(int p) const {
        std::vector<Slot> r;
        std::size_t off = 0;
        for (int i = x_.lo(); i <= x_.hi(); ++i)
            for (int j = y_.lo(); j <= y_.hi(); ++j) {
                if (i - j + p > 0) continue;
                std::size_t d = x_.cat().tdim(x_.obj(i), y_.obj(j), i - j + p);
                if (!d) continue;
                r.push_back({i, j, d, off});
                off += d;
            }
        return r;
    }

    std::size_t dim(int p) const {
        auto s = slots(p);
        return s.empty() ? 0 : s.back().off + s.back().dim;
    }

    Matrix<F> to_vec(const TwMor<F>& f) const {
        require_shape(f.src() == x_ && f.tgt() == y_, "to_vec: endpoint mismatch");
        int p = f.degree();
        Matrix<F> r(x_.cat().k, dim(p), 1);
        for (const Slot& s : slots(p)) r.paste(s.off, 0, f.comp(s.i, s.j));
        return r;
    }

    TwMor<F> from_vec(int p, const Matrix<F>& v) const {
        require_shape(v.rows() == dim(p) && v.cols() == 1, "from_vec: size mismatch");
        TwMor<F> f(x_, y_, p);
        for (const Slot& s : slots(p))
            f.set_comp(s.i, s.j, v.block(s.off, 0, s.dim, 1));
        return f;
    }

    // matrix of tw_diff : Hom^p -> Hom^{p+1}, assembled column by column
    Matrix<F> d_matrix(int p) const {
        auto dom = slots(p);
        Matrix<F> r(x_.cat().k, dim(p + 1), dim(p));
        for (const Slot& s : dom)
            for (std::size_t l = 0; l < s.dim; ++l) {
                TwMor<F> e(x_, y_, p);
                Matrix<F> col(x_.cat().k, s.dim, 1);
                col.at(l, 0) = x_.cat().k.one();
                e.set_comp(s.i, s.j, col);
                r.paste(0, s.off + l, to_vec(tw_diff(e)));
            }
        return r;
    }

private:
    Tw<F> x_, y_;
};

template <class F>
struct TwHomCohomology {
    std::size_t dim;
    std::vector<TwMor<F>> reps;
};

template <class F>
TwHomCohomology<F> tw_hom_cohomology(const Tw<F>& x, const Tw<F>& y, int n) {
    HomWindowComplex<F> hc(x, y);
    Cohomology<F> c(hc.d_matrix(n - 1), hc.d_matrix(n));
    TwHomCohomology<F> r{c.dim(), {}};
    for (std::size_t j = 0; j < c.dim(); ++j) r.reps.push_back(hc.from_vec(n, c.rep(j)));
    return r;
}

// dh = f, by one exact linear solve; absence is a proof, not a timeout
template <class F>
std::optional<TwMor<F>> nullhomotopy(const TwMor<F>& f) {
    HomWindowComplex<F> hc(f.src(), f.tgt());
    int p = f.degree();
    auto sol = solve_linear(hc.d_matrix(p - 1), hc.to_vec(f));
    if (!sol) return std::nullopt;
    return hc.from_vec(p - 1, *sol);
}

// ---- block morphisms between cones ----------------------------------------

// W : cone(f) -> cone(f') with components [[a_{i+1}^{j+1}, 0],
// [c_{i+1}^j, b_i^j]]; plain reindexing, no signs
template <class F>
TwMor<F> cone_block_mor(const Pretriangle<F>& c1, const Pretriangle<F>& c2,
                        const TwMor<F>& a, const TwMor<F>& b, const TwMor<F>& c) {
    int p = a.degree();
    require_shape(b.degree() == p && c.degree() == p - 1,
                  "cone block: degrees of the three blocks disagree");
    require_shape(a.src() == c1.f.src() && a.tgt() == c2.f.src() &&
                      b.src() == c1.f.tgt() && b.tgt() == c2.f.tgt() &&
                      c.src() == c1.f.src() && c.tgt() == c2.f.tgt(),
                  "cone block: endpoint mismatch");
    const DgCat<F>& cat = c1.cone.cat();
    const Tw<F>&A1 = c1.f.src(), &B1 = c1.f.tgt(), &A2 = c2.f.src(), &B2 = c2.f.tgt();
    TwMor<F> w(c1.cone, c2.cone, p);
    for (int i = c1.cone.lo(); i <= c1.cone.hi(); ++i)
        for (int j = c2.cone.lo(); j <= c2.cone.hi(); ++j) {
            int d = i - j + p;
            if (d > 0) continue;
            Matrix<F> v(cat.k, cat.tdim(c1.cone.obj(i), c2.cone.obj(j), d), 1);
            Matrix<F> ab = a.comp(i + 1, j + 1);
            if (!ab.is_zero())
                v = v + cat.embed_elt(A1.obj(i + 1), c1.cone.obj(i), 0, A2.obj(j + 1),
                                      c2.cone.obj(j), 0, d, ab);
            Matrix<F> cb = c.comp(i + 1, j);
            if (!cb.is_zero())
                v = v + cat.embed_elt(A1.obj(i + 1), c1.cone.obj(i), 0, B2.obj(j),
                                      c2.cone.obj(j), A2.obj(j + 1).size(), d, cb);
            Matrix<F> bb = b.comp(i, j);
            if (!bb.is_zero())
                v = v + cat.embed_elt(B1.obj(i), c1.cone.obj(i), A1.obj(i + 1).size(),
                                      B2.obj(j), c2.cone.obj(j), A2.obj(j + 1).size(),
                                      d, bb);
            w.set_comp(i, j, v);
        }
    return w;
}

// ---- inverse transfer across cones -----------------------------------------

// data for transferring homotopy inverses of u, v to the cones of f, f':
// dh = v f - f' u, u' u = 1 - d util, u u' = 1 - d utilprime,
// v' v = 1 + d vtil, v v' = 1 + d vtilprime
template <class F>
struct ConeTransferInput {
    TwMor<F> f, fprime;
    TwMor<F> u, v, h;
    TwMor<F> uprime, util, utilprime;
    TwMor<F> vprime, vtil, vtilprime;
};

template <class F>
struct ConeTransfer {
    Pretriangle<F> src, tgt; // cones of f and f'
    TwMor<F> w;              // [[u,0],[h,v]] : cone(f) -> cone(f')
    TwMor<F> wl, wr;         // wl w = 1 + d hl, w wr = 1 + d hr
    TwMor<F> hl, hr;
};

template <class F>
ConeTransfer<F> cone_iso_transfer(const ConeTransferInput<F>& in) {
    auto req = [](bool ok, const char* what) {
        require_contract(ok, std::string("cone transfer: ") + what);
    };
    const TwMor<F>&f = in.f, &fp = in.fprime, &u = in.u, &v = in.v, &h = in.h;
    req(f.degree() == 0 && fp.degree() == 0 && u.degree() == 0 && v.degree() == 0 &&
            in.uprime.degree() == 0 && in.vprime.degree() == 0,
        "strict maps must have degree 0");
    req(h.degree() == -1 && in.util.degree() == -1 && in.utilprime.degree() == -1 &&
            in.vtil.degree() == -1 && in.vtilprime.degree() == -1,
        "homotopy witnesses must have degree -1");
    require_shape(u.src() == f.src() && u.tgt() == fp.src() && v.src() == f.tgt() &&
                      v.tgt() == fp.tgt() && h.src() == f.src() && h.tgt() == fp.tgt(),
                  "cone transfer: endpoint mismatch");
    req(tw_is_closed(f), "df = 0 fails");
    req(tw_is_closed(fp), "df' = 0 fails");
    req(tw_is_closed(u), "du = 0 fails");
    req(tw_is_closed(v), "dv = 0 fails");
    req(tw_is_closed(in.uprime), "du' = 0 fails");
    req(tw_is_closed(in.vprime), "dv' = 0 fails");
    req(tw_diff(h) == tw_compose(v, f) - tw_compose(fp, u), "dh = vf - f'u fails");
    req(tw_compose(in.uprime, u) == tw_id(f.src()) - tw_diff(in.util),
        "u'u = 1 - d util fails");
    req(tw_compose(u, in.uprime) == tw_id(fp.src()) - tw_diff(in.utilprime),
        "uu' = 1 - d utilprime fails");
    req(tw_compose(in.vprime, v) == tw_id(f.tgt()) + tw_diff(in.vtil),
        "v'v = 1 + d vtil fails");
    req(tw_compose(v, in.vprime) == tw_id(fp.tgt()) + tw_diff(in.vtilprime),
        "vv' = 1 + d vtilprime fails");

    Pretriangle<F> c1 = tw_cone(f), c2 = tw_cone(fp);

    TwMor<F> h0 = tw_compose(in.vtil, tw_compose(f, in.uprime)) -
                  tw_compose(in.vprime, tw_compose(h, in.uprime)) +
                  tw_compose(in.vprime, tw_compose(fp, in.utilprime));
    internal_check(tw_diff(h0) == tw_compose(in.vprime, fp) - tw_compose(f, in.uprime),
                   "cone transfer: dh0 equation");
    TwMor<F> r = tw_compose(f, in.util) + tw_compose(in.vtil, f) -
                 tw_compose(h0, u) - tw_compose(in.vprime, h);
    internal_check(tw_is_closed(r), "cone transfer: r not closed");
    TwMor<F> rp = tw_compose(fp, in.utilprime) + tw_compose(in.vtilprime, fp) -
                  tw_compose(h, in.uprime) - tw_compose(v, h0);
    internal_check(tw_is_closed(rp), "cone transfer: r' not closed");

    TwMor<F> z0 = tw_compose(r, in.uprime);
    TwMor<F> z1 = tw_compose(in.vprime, rp);
    TwMor<F> htil = tw_compose(r, in.util);
    TwMor<F> htilp = tw_compose(in.vtilprime, rp);

    TwMor<F> w = cone_block_mor(c1, c2, u, v, h);
    TwMor<F> wl = cone_block_mor(c2, c1, in.uprime, in.vprime, h0 + z0);
    TwMor<F> wr = cone_block_mor(c2, c1, in.uprime, in.vprime, h0 + z1);
    TwMor<F> hl = cone_block_mor(c1, c1, in.util, in.vtil, htil);
    TwMor<F> hr = cone_block_mor(c2, c2, in.utilprime, in.vtilprime, htilp);

    internal_check(tw_is_closed(w), "cone transfer: w not closed");
    internal_check(tw_compose(wl, w) == tw_id(c1.cone) + tw_diff(hl),
                   "cone transfer: left inverse equation");
    internal_check(tw_compose(w, wr) == tw_id(c2.cone) + tw_diff(hr),
                   "cone transfer: right inverse equation");
    internal_check(tw_compose(w, c1.j) == tw_compose(c2.j, v),
                   "cone transfer: middle square");
    internal_check(tw_compose(c2.p, w) == tw_compose(tw_shift_mor(u, 1), c1.p),
                   "cone transfer: right square");
    return {c1, c2, w, wl, wr, hl, hr};
}

// ---- isomorphism decision ---------------------------------------------------

template <class F>
struct IsoCertificate {
    TwMor<F> f, g, h_l, h_r; // g f = 1 + d h_l, f g = 1 + d h_r
};

template <class F>
bool check_iso_certificate(const IsoCertificate<F>& c) {
    return tw_is_closed(c.g) &&
           tw_compose(c.g, c.f) == tw_id(c.f.src()) + tw_diff(c.h_l) &&
           tw_compose(c.f, c.g) == tw_id(c.f.tgt()) + tw_diff(c.h_r);
}

template <class F>
struct IsoDecision {
    bool iso;
    std::optional<IsoCertificate<F>> certificate;
    std::string note;
};

// merge a left inverse (l w = 1 + d a) and a right inverse (w r = 1 + d b)
// into a two-sided homotopy inverse of w
template <class F>
IsoCertificate<F> combine_one_sided(const TwMor<F>& w, const TwMor<F>& l,
                                    const TwMor<F>& r, const TwMor<F>& a,
                                    const TwMor<F>& b) {
    TwMor<F> gamma = tw_compose(l, b) - tw_compose(a, r);
    return {w, l, a, b - tw_compose(w, gamma)};
}

namespace detail {

// solve, for one degree i, the three conditions g f = 1 + d h1,
// f g = 1 + d h2 on the component f_i^i, phrased so that d matches the
// (-1)^i convention of the morphism differential at slot (i,i)
template <class F>
struct DiagonalInverse {
    Matrix<F> g, h1, h2;
};

template <class F>
std::optional<DiagonalInverse<F>> diagonal_inverse(const DgCat<F>& c, const Obj& xi,
                                                   const Obj& yi, int i,
                                                   const Matrix<F>& fi) {
    std::size_t ng = c.tdim(yi, xi, 0), n1 = c.tdim(xi, xi, -1), n2 = c.tdim(yi, yi, -1);
    Matrix<F> dg = c.tdiff(yi, xi, 0);
    // g f : first f : X^i -> Y^i, then the unknown g : Y^i -> X^i
    Matrix<F> rf = c.right_op(xi, yi, xi, 0, 0, fi);
    Matrix<F> lf = c.left_op(yi, xi, yi, 0, 0, fi);
    Matrix<F> d1 = c.tdiff(xi, xi, -1).scaled(sign_pow(c.k, i + 1));
    Matrix<F> d2 = c.tdiff(yi, yi, -1).scaled(sign_pow(c.k, i + 1));
    std::size_t r0 = dg.rows(), r1 = rf.rows(), r2 = lf.rows();
    Matrix<F> m(c.k, r0 + r1 + r2, ng + n1 + n2);
    m.paste(0, 0, dg);
    m.paste(r0, 0, rf);
    m.paste(r0, ng, d1);
    m.paste(r0 + r1, 0, lf);
    m.paste(r0 + r1, ng + n1, d2);
    Matrix<F> b(c.k, r0 + r1 + r2, 1);
    b.paste(r0, 0, c.tunit(xi));
    b.paste(r0 + r1, 0, c.tunit(yi));
    auto sol = solve_linear(m, b);
    if (!sol) return std::nullopt;
    return DiagonalInverse<F>{sol->block(0, 0, ng, 1), sol->block(ng, 0, n1, 1),
                              sol->block(ng + n1, 0, n2, 1)};
}

} // namespace detail

// Decide whether a closed degree-0 morphism becomes an isomorphism in H^0,
// by contractibility of its cone. When every diagonal component is
// H^0-invertible, a two-sided inverse certificate is built by a finite
// induction over the weight filtration; otherwise the verdict stands alone.
template <class F>
IsoDecision<F> h0_iso_decide(const TwMor<F>& f) {
    require_shape(f.degree() == 0, "iso decision needs a degree-0 morphism");
    require_contract(tw_is_closed(f), "iso decision needs a closed morphism");

    Pretriangle<F> pt = tw_cone(f);
    bool iso = nullhomotopy(tw_id(pt.cone)).has_value();
    if (!iso) return {false, std::nullopt, "cone identity is not nullhomotopic"};

    Tw<F> x = f.src().normalized(), y = f.tgt().normalized();
    int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
    if (lo > hi) {
        TwMor<F> g(y, x, 0);
        return {true, IsoCertificate<F>{f, g, TwMor<F>(x, x, -1), TwMor<F>(y, y, -1)},
                ""};
    }

    const DgCat<F>& c = x.cat();
    std::map<int, TwMor<F>> gd, h1d, h2d; // one-slot morphisms per degree
    for (int i = lo; i <= hi; ++i) {
        auto sol = detail::diagonal_inverse(c, x.obj(i), y.obj(i), i, f.comp(i, i));
        if (!sol)
            return {true, std::nullopt,
                    "diagonal component at degree " + std::to_string(i) +
                        " is not H^0-invertible; verdict from cone contractibility"};
        Tw<F> xi = tw_trunc_window(x, i, i), yi = tw_trunc_window(y, i, i);
        TwMor<F> g(yi, xi, 0), h1(xi, xi, -1), h2(yi, yi, -1);
        g.set_comp(i, i, sol->g);
        h1.set_comp(i, i, sol->h1);
        h2.set_comp(i, i, sol->h2);
        gd.emplace(i, std::move(g));
        h1d.emplace(i, std::move(h1));
        h2d.emplace(i, std::move(h2));
    }

    IsoCertificate<F> cur{tw_mor_window(f, hi, hi), gd.at(hi), h1d.at(hi), h2d.at(hi)};
    internal_check(check_iso_certificate(cur), "iso decision: base certificate");
    for (int k = hi - 1; k >= lo; --k) {
        Tw<F> xw = tw_trunc_window(x, k, hi), yw = tw_trunc_window(y, k, hi);
        TwMor<F> fw = tw_mor_window(f, k, hi);
        auto wtx = weight_triangle(xw, k + 1), wty = weight_triangle(yw, k + 1);
        ConeTransferInput<F> in{
            wtx.xt,
            wty.xt,
            tw_shift_mor(tw_mor_window(f, k, k), -1),
            cur.f,
            connecting_homotopy(fw, k + 1),
            tw_shift_mor(gd.at(k), -1),
            -tw_shift_mor(h1d.at(k), -1),
            -tw_shift_mor(h2d.at(k), -1),
            cur.g,
            cur.h_l,
            cur.h_r,
        };
        ConeTransfer<F> ct = cone_iso_transfer(in);
        internal_check(ct.w == fw, "iso decision: transferred map differs from f");
        cur = combine_one_sided(fw, ct.wl, ct.wr, ct.hl, ct.hr);
    }
    internal_check(check_iso_certificate(cur), "iso decision: certificate equations");
    return {true, cur, ""};
}

// ---- quasi-isomorphism witnesses on plain complexes ------------------------

template <class F>
struct VectComplex {
    F k;
    std::map<int, std::size_t> dims;
    std::map<int, Matrix<F>> d;

    std::size_t dim(int n) const {
        auto it = dims.find(n);
        return it == dims.end() ? 0 : it->second;
    }
    Matrix<F> diff(int n) const {
        auto it = d.find(n);
        if (it != d.end()) return it->second;
        return Matrix<F>(k, dim(n + 1), dim(n));
    }
    void validate() const {
        for (const auto& [n, m] : d) {
            require_shape(m.rows() == dim(n + 1) && m.cols() == dim(n),
                          "complex: differential shape at degree " + std::to_string(n));
            require_contract((diff(n + 1) * m).is_zero(),
                             "complex: d^2 != 0 at degree " + std::to_string(n));
        }
    }
};

template <class F>
struct VectChainMap {
    VectComplex<F> src, tgt;
    std::map<int, Matrix<F>> comp;

    Matrix<F> at(int n) const {
        auto it = comp.find(n);
        if (it != comp.end()) return it->second;
        return Matrix<F>(src.k, tgt.dim(n), src.dim(n));
    }
    bool is_chain_map() const {
        int lo = 0, hi = 0;
        for (const auto& [n, m] : src.dims) lo = std::min(lo, n), hi = std::max(hi, n);
        for (const auto& [n, m] : tgt.dims) lo = std::min(lo, n), hi = std::max(hi, n);
        for (int n = lo - 1; n <= hi + 1; ++n)
            if (tgt.diff(n) * at(n) != at(n + 1) * src.diff(n)) return false;
        return true;
    }
    // H^n iso for all n in [nlo, nhi], by rank of the induced map on
    // chosen representatives
    bool is_quasi_iso(int nlo, int nhi) const {
        for (int n = nlo; n <= nhi; ++n) {
            Cohomology<F> hs(src.diff(n - 1), src.diff(n));
            Cohomology<F> ht(tgt.diff(n - 1), tgt.diff(n));
            if (hs.dim() != ht.dim()) return false;
            if (!hs.dim()) continue;
            Matrix<F> m(src.k, ht.dim(), hs.dim());
            for (std::size_t j = 0; j < hs.dim(); ++j) {
                auto dec = ht.decompose(at(n) * hs.rep(j));
                m.paste(0, j, dec.first);
            }
            if (rank(m) != hs.dim()) return false;
        }
        return true;
    }
};

template <class F>
struct QuasiIsoWitness {
    Matrix<F> x, z; // d x = x', y - d z = f(x)
};

// the lifting characterization of quasi-isomorphisms, as one joint solve
template <class F>
std::optional<QuasiIsoWitness<F>> quasiiso_lift(const VectChainMap<F>& fm, int n,
                                                const Matrix<F>& y,
                                                const Matrix<F>& xprime) {
    require_shape(y.rows() == fm.tgt.dim(n) && xprime.rows() == fm.src.dim(n + 1),
                  "quasiiso_lift: input degrees off");
    require_contract(fm.tgt.diff(n) * y == fm.at(n + 1) * xprime,
                     "quasiiso_lift: dy = f(x') fails");
    std::size_t nx = fm.src.dim(n), nz = fm.tgt.dim(n - 1);
    Matrix<F> dv = fm.src.diff(n), dw = fm.tgt.diff(n - 1), fn = fm.at(n);
    Matrix<F> m(fm.src.k, dv.rows() + fn.rows(), nx + nz);
    m.paste(0, 0, dv);
    m.paste(dv.rows(), 0, fn);
    m.paste(dv.rows(), nx, dw);
    Matrix<F> b(fm.src.k, dv.rows() + fn.rows(), 1);
    b.paste(0, 0, xprime);
    b.paste(dv.rows(), 0, y);
    auto sol = solve_linear(m, b);
    if (!sol) return std::nullopt;
    return QuasiIsoWitness<F>{sol->block(0, 0, nx, 1), sol->block(nx, 0, nz, 1)};
}

// ---- towers and Milnor (co)limits -------------------------------------------

enum class TowerDirection { inverse, direct };

// finite list standing for an eventually constant tower; inverse transitions
// point down (entries[n+1] -> entries[n]), direct ones up
template <class F>
struct Tower {
    TowerDirection direction = TowerDirection::inverse;
    std::vector<Tw<F>> entries;
    std::vector<TwMor<F>> transitions;
    std::optional<std::size_t> stabilization_index;
};

template <class F>
void validate_tower(const Tower<F>& t) {
    require_shape(!t.entries.empty(), "tower needs at least one entry");
    require_shape(t.transitions.size() + 1 == t.entries.size(),
                  "tower transition count off");
    for (std::size_t n = 0; n < t.transitions.size(); ++n) {
        const TwMor<F>& f = t.transitions[n];
        bool ok = t.direction == TowerDirection::inverse
                      ? f.src() == t.entries[n + 1] && f.tgt() == t.entries[n]
                      : f.src() == t.entries[n] && f.tgt() == t.entries[n + 1];
        require_shape(ok, "tower transition " + std::to_string(n) + " endpoints off");
        require_contract(f.degree() == 0 && tw_is_closed(f),
                         "tower transitions must be closed degree 0");
    }
    require_contract(t.stabilization_index.has_value(),
                     "tower must declare a stabilization index");
    std::size_t s = *t.stabilization_index;
    require_shape(s < t.entries.size(), "stabilization index out of range");
    for (std::size_t n = s; n + 1 < t.entries.size(); ++n) {
        require_contract(t.entries[n + 1] == t.entries[s],
                         "tower not constant beyond its stabilization index");
        require_contract(t.transitions[n] ==
                             tw_id(t.direction == TowerDirection::inverse
                                       ? t.entries[n]
                                       : t.entries[n + 1]),
                         "tower transitions beyond stabilization are not identities");
    }
}

template <class F>
Tw<F> tower_lim(const Tower<F>& t) {
    validate_tower(t);
    return t.entries[*t.stabilization_index];
}

template <class F>
struct MilnorResult {
    Tw<F> value;         // holim (inverse) or hocolim (direct)
    Tw<F> limit;         // the eventual entry
    TwMor<F> comparison; // inverse: limit -> value; direct: value -> limit
};

namespace detail {

template <class F>
MilnorResult<F> milnor_inverse(const Tower<F>& t) {
    std::size_t n1 = t.entries.size();
    Tw<F> lim = t.entries[*t.stabilization_index];
    if (n1 == 1) return {t.entries[0], lim, tw_id(t.entries[0])};
    auto big = tw_sum(t.entries);
    std::vector<Tw<F>> head(t.entries.begin(), t.entries.end() - 1);
    auto small = tw_sum(head);
    // g = 1 - nu : slot n of the image is x_n - t_n(x_{n+1})
    TwMor<F> g(big.total, small.total, 0);
    for (std::size_t n = 0; n + 1 < n1; ++n)
        g = g + tw_compose(small.incl[n], big.proj[n]) -
            tw_compose(small.incl[n],
                       tw_compose(t.transitions[n], big.proj[n + 1]));
    Pretriangle<F> pt = tw_cone(g);
    Tw<F> holim = tw_shift(pt.cone, -1);
    // compatible cone of projections out of the limit
    std::vector<TwMor<F>> lam(n1, tw_id(lim));
    for (std::size_t n = n1 - 1; n-- > 0;)
        lam[n] = tw_compose(t.transitions[n], lam[n + 1]);
    TwMor<F> lambda(lim, big.total, 0);
    for (std::size_t n = 0; n < n1; ++n)
        lambda = lambda + tw_compose(big.incl[n], lam[n]);
    internal_check(tw_compose(g, lambda).is_zero(),
                   "Milnor limit: projections not compatible");
    TwMor<F> m = tw_compose(tw_shift_mor(pt.i, -1), lambda);
    internal_check(tw_is_closed(m), "Milnor limit: comparison map not closed");
    return {holim, lim, m};
}

} // namespace detail

template <class F>
MilnorResult<F> tower_holim(const Tower<F>& t) {
    validate_tower(t);
    if (t.direction == TowerDirection::inverse) return detail::milnor_inverse(t);
    // direct towers by duality: reverse through the opposite category
    Tower<F> op;
    op.direction = TowerDirection::inverse;
    for (const Tw<F>& e : t.entries) op.entries.push_back(opposite_tw(e));
    for (const TwMor<F>& f : t.transitions)
        op.transitions.push_back(opposite_tw_mor(f));
    op.stabilization_index = t.stabilization_index;
    MilnorResult<F> r = detail::milnor_inverse(op);
    return {opposite_tw(r.value), opposite_tw(r.limit), opposite_tw_mor(r.comparison)};
}

// the brutal truncation towers that reconstruct a finite-support complex
template <class F>
Tower<F> leq_truncation_tower(const Tw<F>& x) {
    Tw<F> xn = x.normalized();
    Tower<F> t;
    t.direction = TowerDirection::inverse;
    if (xn.lo() > xn.hi()) {
        t.entries = {xn};
        t.stabilization_index = 0;
        return t;
    }
    for (int k = xn.lo(); k <= xn.hi(); ++k)
        t.entries.push_back(tw_trunc_leq(xn, k).t);
    for (int k = xn.lo() + 1; k <= xn.hi(); ++k)
        t.transitions.push_back(tw_leq_step(xn, k));
    t.stabilization_index = t.entries.size() - 1;
    return t;
}

template <class F>
Tower<F> geq_truncation_tower(const Tw<F>& x) {
    Tw<F> xn = x.normalized();
    Tower<F> t;
    t.direction = TowerDirection::direct;
    if (xn.lo() > xn.hi()) {
        t.entries = {xn};
        t.stabilization_index = 0;
        return t;
    }
    for (int k = xn.hi(); k >= xn.lo(); --k)
        t.entries.push_back(tw_trunc_geq(xn, k).t);
    for (int k = xn.hi(); k > xn.lo(); --k)
        t.transitions.push_back(tw_geq_step(xn, k));
    t.stabilization_index = t.entries.size() - 1;
    return t;
}

// ---- lifting along quasi-fully-faithful functors ---------------------------

template <class F>
struct QffReport {
    bool ok = true;
    std::vector<std::tuple<int, int, int>> failures; // (a, b, degree)
};

// certify that H^n(u) : H^n hom_A(a,b) -> H^n hom_B(u a, u b) is an
// isomorphism for every base pair in the given degree range
template <class F>
QffReport<F> qff_certify(const DgFunctor<F>& u, int dlo, int dhi) {
    QffReport<F> rep;
    const DgCat<F>&a = *u.src, &b = *u.tgt;
    for (int s = 0; s < int(a.nobj()); ++s)
        for (int t = 0; t < int(a.nobj()); ++t)
            for (int n = dlo; n <= dhi; ++n) {
                Obj sa{s}, ta{t};
                Obj sb = u.apply_obj(sa), tb = u.apply_obj(ta);
                Cohomology<F> ha(a.tdiff(sa, ta, n - 1), a.tdiff(sa, ta, n));
                Cohomology<F> hb(b.tdiff(sb, tb, n - 1), b.tdiff(sb, tb, n));
                bool good = ha.dim() == hb.dim();
                if (good && ha.dim()) {
                    Matrix<F> m(a.k, hb.dim(), ha.dim());
                    for (std::size_t j = 0; j < ha.dim(); ++j) {
                        auto dec = hb.decompose(u.apply_elt(sa, ta, n, ha.rep(j)));
                        m.paste(0, j, dec.first);
                    }
                    good = rank(m) == ha.dim();
                }
                if (!good) {
                    rep.ok = false;
                    rep.failures.emplace_back(s, t, n);
                }
            }
    return rep;
}

template <class F>
struct QffLift {
    TwMor<F> f;     // X -> Y over the source category, closed degree 0
    TwMor<F> alpha; // u(X) -> u(Y), degree -1, with u(f) + d alpha = g
};

namespace detail {

template <class F>
bool functor_is_strict_identity(const DgFunctor<F>& u) {
    if (!(*u.src == *u.tgt)) return false;
    const DgCat<F>& c = *u.src;
    for (int a = 0; a < int(c.nobj()); ++a) {
        if (u.obj_map[a] != Obj{a}) return false;
        for (int b = 0; b < int(c.nobj()); ++b)
            for (int d : c.degrees(a, b))
                if (u.hom_matrix(a, b, d) !=
                    Matrix<F>::identity(c.k, c.dim(a, b, d)))
                    return false;
    }
    return true;
}

} // namespace detail

// Lift a closed degree-0 morphism g : u(X) -> u(Y) through a
// quasi-fully-faithful u, by the double induction over anti-diagonals:
// at each component, one solve repairs closedness over the source and a
// joint solve matches u(f) to g up to the correction d alpha.
template <class F>
QffLift<F> qff_lift(const DgFunctor<F>& u, const Tw<F>& x, const Tw<F>& y,
                    const TwMor<F>& g) {
    require_shape(g.degree() == 0, "qff_lift expects a degree-0 morphism");
    Tw<F> ux = tw_map(u, x), uy = tw_map(u, y);
    require_shape(g.src() == ux && g.tgt() == uy, "qff_lift: g endpoints are not u(X), u(Y)");
    require_contract(tw_is_closed(g), "qff_lift expects a closed morphism");

    if (detail::functor_is_strict_identity(u)) {
        TwMor<F> f(x, y, 0);
        for (const auto& [key, v] : g.components()) f.set_comp(key.first, key.second, v);
        return {f, TwMor<F>(ux, uy, -1)};
    }

    const DgCat<F>&a = *u.src, &b = *u.tgt;
    TwMor<F> f(x, y, 0);
    TwMor<F> alpha(ux, uy, -1);
    for (int n = 0; n <= y.hi() - x.lo(); ++n)
        for (int i = x.lo(); i <= x.hi(); ++i) {
            int j = i + n;
            if (j < y.lo() || j > y.hi()) continue;
            const Obj&xi = x.obj(i), &yj = y.obj(j);
            Obj uxi = u.apply_obj(xi), uyj = u.apply_obj(yj);
            // closedness defect from the already chosen components
            Matrix<F> e = tw_diff(f).comp(i, j);
            auto phi = solve_linear(a.tdiff(xi, yj, -n),
                                    e.scaled(sign_pow(a.k, j + 1)));
            if (!phi)
                throw contract_error(
                    "qff_lift: no closed lift at (i=" + std::to_string(i) +
                    ", n=" + std::to_string(n) + "); u is not quasi-fully-faithful there");
            // match u(f) to g after the known corrections
            Matrix<F> rhs = u.apply_elt(xi, yj, -n, *phi) -
                            (g.comp(i, j) - tw_diff(alpha).comp(i, j));
            std::size_t nx = a.tdim(xi, yj, -n), na = b.tdim(uxi, uyj, -n - 1);
            Matrix<F> da = a.tdiff(xi, yj, -n);
            Matrix<F> uop(a.k, b.tdim(uxi, uyj, -n), nx);
            for (std::size_t l = 0; l < nx; ++l) {
                Matrix<F> col(a.k, nx, 1);
                col.at(l, 0) = a.k.one();
                uop.paste(0, l, u.apply_elt(xi, yj, -n, col));
            }
            Matrix<F> db = b.tdiff(uxi, uyj, -n - 1).scaled(sign_pow(b.k, j + 1));
            Matrix<F> m(a.k, da.rows() + uop.rows(), nx + na);
            m.paste(0, 0, da);
            m.paste(da.rows(), 0, uop);
            m.paste(da.rows(), nx, db);
            Matrix<F> bb(a.k, da.rows() + uop.rows(), 1);
            bb.paste(da.rows(), 0, rhs);
            auto sol = solve_linear(m, bb);
            if (!sol)
                throw contract_error(
                    "qff_lift: matching solve failed at (i=" + std::to_string(i) +
                    ", n=" + std::to_string(n) + "); u is not quasi-fully-faithful there");
            f.set_comp(i, j, *phi - sol->block(0, 0, nx, 1));
            alpha.set_comp(i, j, sol->block(nx, 0, na, 1));
        }
    internal_check(tw_is_closed(f), "qff_lift: lifted morphism not closed");
    internal_check(tw_map_mor(u, f) + tw_diff(alpha) == g, "qff_lift: residual not d alpha");
    return {f, alpha};
}

} // namespace twistlab
