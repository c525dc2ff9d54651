#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "dgcat.hpp"

namespace twistlab {

// Tw- / Tw+ / Tw markers. Finite support always; the marker records which
// side is allowed to grow, which is what the t-structure layer cares about.
enum class TwFlavor { unbounded, minus, plus };

inline TwFlavor combine_flavor(TwFlavor a, TwFlavor b) {
    return a == b ? a : TwFlavor::unbounded;
}

// One-sided twisted complex: components X^i (tuples over the base category)
// on a finite window, twist maps x_i^j of degree i-j+1 for j > i, subject to
// the Maurer-Cartan equation (-1)^j dx_i^j + sum_k x_k^j x_i^k = 0.
template <class F>
class Tw {
public:
    using Mat = Matrix<F>;

    Tw(std::shared_ptr<const DgCat<F>> cat, int lo, int hi, std::vector<Obj> comps,
       TwFlavor flavor = TwFlavor::unbounded)
        : cat_(std::move(cat)), lo_(lo), hi_(hi), comps_(std::move(comps)),
          flavor_(flavor) {
        require_shape(cat_ != nullptr, "twisted complex needs a category");
        require_contract(cat_->nonpositive,
                         "twisted complexes live over nonpositive categories");
        if (hi_ < lo_) {
            lo_ = 0;
            hi_ = -1;
            comps_.clear();
        }
        require_shape(comps_.size() == std::size_t(hi_ - lo_ + 1),
                      "component count does not match window");
        for (const Obj& o : comps_) cat_->check_tuple(o);
    }

    const std::shared_ptr<const DgCat<F>>& cat_ptr() const { return cat_; }
    const DgCat<F>& cat() const { return *cat_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    TwFlavor flavor() const { return flavor_; }
    void set_flavor(TwFlavor fl) { flavor_ = fl; }

    const Obj& obj(int i) const {
        static const Obj empty{};
        if (i < lo_ || i > hi_) return empty;
        return comps_[std::size_t(i - lo_)];
    }

    Mat twist(int i, int j) const {
        auto it = twist_.find({i, j});
        if (it != twist_.end()) return it->second;
        return Mat(cat_->k, cat_->tdim(obj(i), obj(j), i - j + 1), 1);
    }

    void set_twist(int i, int j, Mat v) {
        require_shape(j > i, "twist entries need j > i");
        require_shape(v.rows() == cat_->tdim(obj(i), obj(j), i - j + 1) && v.cols() == 1,
                      "twist entry shape mismatch at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
        if (v.is_zero()) twist_.erase({i, j});
        else twist_.insert_or_assign({i, j}, std::move(v));
    }

    const std::map<std::pair<int, int>, Mat>& twists() const { return twist_; }

    bool is_zero_complex() const {
        for (const Obj& o : comps_)
            if (!o.empty()) return false;
        return true;
    }

    // trim empty components off both ends (twists touching them live in
    // zero-dimensional spaces, so nothing is lost)
    Tw normalized() const {
        int a = lo_, b = hi_;
        while (a <= b && obj(a).empty()) ++a;
        while (b >= a && obj(b).empty()) --b;
        std::vector<Obj> comps;
        for (int i = a; i <= b; ++i) comps.push_back(obj(i));
        Tw r(cat_, a, b, std::move(comps), flavor_);
        for (const auto& [key, v] : twist_)
            if (key.first >= a && key.second <= b) r.set_twist(key.first, key.second, v);
        return r;
    }

    bool operator==(const Tw& o) const {
        if (!same_cat(o)) return false;
        Tw a = normalized(), b = o.normalized();
        return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.comps_ == b.comps_ &&
               a.twist_ == b.twist_;
    }
    bool operator!=(const Tw& o) const { return !(*this == o); }

    bool same_cat(const Tw& o) const {
        return cat_.get() == o.cat_.get() || *cat_ == *o.cat_;
    }

    ValidationReport validate() const {
        ValidationReport rep;
        for (int i = lo_; i <= hi_; ++i)
            for (int j = i + 1; j <= hi_; ++j) {
                Mat r = mc_residual(i, j);
                if (!r.is_zero())
                    rep.add("Maurer-Cartan",
                            "(" + std::to_string(i) + "," + std::to_string(j) + ")",
                            r.to_string());
            }
        return rep;
    }

    // (-1)^j d x_i^j + sum_k x_k^j x_i^k, an element of hom^{i-j+2}(X^i, X^j)
    Mat mc_residual(int i, int j) const {
        const DgCat<F>& c = *cat_;
        Mat r = (c.tdiff(obj(i), obj(j), i - j + 1) * twist(i, j))
                    .scaled(sign_pow(c.k, j));
        for (int k = i + 1; k < j; ++k)
            r = r + c.tcompose(obj(i), obj(k), obj(j), i - k + 1, k - j + 1,
                               twist(k, j), twist(i, k));
        return r;
    }

private:
    std::shared_ptr<const DgCat<F>> cat_;
    int lo_, hi_;
    std::vector<Obj> comps_;
    std::map<std::pair<int, int>, Mat> twist_;
    TwFlavor flavor_;
};

// single object placed in one degree, no twists
template <class F>
Tw<F> tw_point(std::shared_ptr<const DgCat<F>> cat, Obj o, int degree,
               TwFlavor fl = TwFlavor::unbounded) {
    return Tw<F>(std::move(cat), degree, degree, {std::move(o)}, fl);
}

template <class F>
Tw<F> tw_zero(std::shared_ptr<const DgCat<F>> cat) {
    return Tw<F>(std::move(cat), 0, -1, {});
}

// Morphism of twisted complexes: components f_i^j of degree i-j+p, stored
// only for j >= i+p and inside both windows.
template <class F>
class TwMor {
public:
    using Mat = Matrix<F>;

    TwMor(Tw<F> src, Tw<F> tgt, int degree)
        : src_(std::move(src)), tgt_(std::move(tgt)), deg_(degree) {
        require_shape(src_.same_cat(tgt_), "morphism endpoints over different categories");
    }

    const Tw<F>& src() const { return src_; }
    const Tw<F>& tgt() const { return tgt_; }
    int degree() const { return deg_; }
    const DgCat<F>& cat() const { return src_.cat(); }

    Mat comp(int i, int j) const {
        auto it = comps_.find({i, j});
        if (it != comps_.end()) return it->second;
        return Mat(cat().k, cat().tdim(src_.obj(i), tgt_.obj(j), i - j + deg_), 1);
    }

    void set_comp(int i, int j, Mat v) {
        require_shape(i - j + deg_ <= 0,
                      "component (" + std::to_string(i) + "," + std::to_string(j) +
                          ") violates one-sided degree bookkeeping");
        require_shape(v.rows() == cat().tdim(src_.obj(i), tgt_.obj(j), i - j + deg_) &&
                          v.cols() == 1,
                      "component shape mismatch at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
        if (v.is_zero()) comps_.erase({i, j});
        else comps_.insert_or_assign({i, j}, std::move(v));
    }

    const std::map<std::pair<int, int>, Mat>& components() const { return comps_; }

    bool is_zero() const { return comps_.empty(); }

    TwMor operator+(const TwMor& o) const {
        require_shape(deg_ == o.deg_ && src_ == o.src_ && tgt_ == o.tgt_,
                      "morphism sum: endpoint or degree mismatch");
        TwMor r = *this;
        for (const auto& [key, v] : o.comps_)
            r.set_comp(key.first, key.second, r.comp(key.first, key.second) + v);
        return r;
    }
    TwMor operator-(const TwMor& o) const { return *this + o.scaled(cat().k.neg(cat().k.one())); }
    TwMor scaled(const typename F::Elt& c) const {
        TwMor r(src_, tgt_, deg_);
        for (const auto& [key, v] : comps_) r.set_comp(key.first, key.second, v.scaled(c));
        return r;
    }
    TwMor operator-() const { return scaled(cat().k.neg(cat().k.one())); }

    bool operator==(const TwMor& o) const {
        return deg_ == o.deg_ && src_ == o.src_ && tgt_ == o.tgt_ && comps_ == o.comps_;
    }
    bool operator!=(const TwMor& o) const { return !(*this == o); }

private:
    Tw<F> src_, tgt_;
    int deg_;
    std::map<std::pair<int, int>, Mat> comps_;
};

template <class F>
TwMor<F> tw_zero_mor(const Tw<F>& x, const Tw<F>& y, int degree) {
    return TwMor<F>(x, y, degree);
}

template <class F>
TwMor<F> tw_id(const Tw<F>& x) {
    TwMor<F> r(x, x, 0);
    for (int i = x.lo(); i <= x.hi(); ++i)
        if (!x.obj(i).empty()) r.set_comp(i, i, x.cat().tunit(x.obj(i)));
    return r;
}

// (df)_i^j = (-1)^j d f_i^j + sum_k ( y_k^j f_i^k - (-1)^p f_k^j x_i^k )
template <class F>
TwMor<F> tw_diff(const TwMor<F>& f) {
    const DgCat<F>& c = f.cat();
    const Tw<F>&x = f.src(), &y = f.tgt();
    int p = f.degree();
    TwMor<F> r(x, y, p + 1);
    for (int i = x.lo(); i <= x.hi(); ++i)
        for (int j = y.lo(); j <= y.hi(); ++j) {
            if (i - j + p + 1 > 0) continue;
            Matrix<F> m = (c.tdiff(x.obj(i), y.obj(j), i - j + p) * f.comp(i, j))
                              .scaled(sign_pow(c.k, j));
            for (int k = y.lo(); k < j; ++k)
                if (i - k + p <= 0)
                    m = m + c.tcompose(x.obj(i), y.obj(k), y.obj(j), i - k + p, k - j + 1,
                                       y.twist(k, j), f.comp(i, k));
            for (int k = i + 1; k <= x.hi(); ++k)
                if (k - j + p <= 0)
                    m = m - c.tcompose(x.obj(i), x.obj(k), y.obj(j), i - k + 1, k - j + p,
                                       f.comp(k, j), x.twist(i, k))
                                .scaled(sign_pow(c.k, p));
            r.set_comp(i, j, m);
        }
    return r;
}

template <class F>
bool tw_is_closed(const TwMor<F>& f) {
    return tw_diff(f).is_zero();
}

// (g o f)_i^j = sum_k g_k^j f_i^k
template <class F>
TwMor<F> tw_compose(const TwMor<F>& g, const TwMor<F>& f) {
    require_shape(f.tgt() == g.src(), "composition: endpoints do not match");
    const DgCat<F>& c = f.cat();
    const Tw<F>&x = f.src(), &m = f.tgt(), &z = g.tgt();
    int p = f.degree(), q = g.degree();
    TwMor<F> r(x, z, p + q);
    for (int i = x.lo(); i <= x.hi(); ++i)
        for (int j = z.lo(); j <= z.hi(); ++j) {
            if (i - j + p + q > 0) continue;
            Matrix<F> acc(c.k, c.tdim(x.obj(i), z.obj(j), i - j + p + q), 1);
            for (int k = m.lo(); k <= m.hi(); ++k) {
                if (i - k + p > 0 || k - j + q > 0) continue;
                acc = acc + c.tcompose(x.obj(i), m.obj(k), z.obj(j), i - k + p, k - j + q,
                                       g.comp(k, j), f.comp(i, k));
            }
            r.set_comp(i, j, acc);
        }
    return r;
}

// ---- shifts -----------------------------------------------------------

// X[n]^i = X^{i+n}, x[n]_i^j = (-1)^n x_{i+n}^{j+n}
template <class F>
Tw<F> tw_shift(const Tw<F>& x, int n) {
    std::vector<Obj> comps;
    for (int i = x.lo(); i <= x.hi(); ++i) comps.push_back(x.obj(i));
    Tw<F> r(x.cat_ptr(), x.lo() - n, x.hi() - n, std::move(comps), x.flavor());
    for (const auto& [key, v] : x.twists())
        r.set_twist(key.first - n, key.second - n, v.scaled(sign_pow(x.cat().k, n)));
    return r;
}

// f[n]_i^j = (-1)^{np} f_{i+n}^{j+n}; the sign keeps d(f[n]) = (df)[n]
// while the shift stays functorial and fixes identities.
template <class F>
TwMor<F> tw_shift_mor(const TwMor<F>& f, int n) {
    int p = f.degree();
    TwMor<F> r(tw_shift(f.src(), n), tw_shift(f.tgt(), n), p);
    for (const auto& [key, v] : f.components())
        r.set_comp(key.first - n, key.second - n,
                   v.scaled(sign_pow(f.cat().k, n * p)));
    return r;
}

// canonical degree n-m morphism X[n] -> X[m] with unit components,
// written 1_{(X,n,m)}; closed, and composing two of them reindexes
template <class F>
TwMor<F> shifted_identity(const Tw<F>& x, int n, int m) {
    TwMor<F> r(tw_shift(x, n), tw_shift(x, m), n - m);
    for (int i = x.lo() - n; i <= x.hi() - n; ++i)
        if (!x.obj(i + n).empty()) r.set_comp(i, i + n - m, x.cat().tunit(x.obj(i + n)));
    return r;
}

// Hom(X, Y[n]) = Hom(X, Y)[n]: the bijection is the identity on component
// matrices, only the (i,j) bookkeeping moves.
template <class F>
TwMor<F> unshift_target(const TwMor<F>& f, const Tw<F>& y, int n) {
    require_shape(f.tgt() == tw_shift(y, n), "unshift_target: target is not Y[n]");
    TwMor<F> r(f.src(), y, f.degree() + n);
    for (const auto& [key, v] : f.components()) r.set_comp(key.first, key.second + n, v);
    return r;
}

template <class F>
TwMor<F> shift_target(const TwMor<F>& g, const Tw<F>& y, int n) {
    require_shape(g.tgt() == y, "shift_target: target is not Y");
    TwMor<F> r(g.src(), tw_shift(y, n), g.degree() - n);
    for (const auto& [key, v] : g.components()) r.set_comp(key.first, key.second - n, v);
    return r;
}

// ---- sums and cones ---------------------------------------------------

template <class F>
struct TwSum {
    Tw<F> total;
    std::vector<TwMor<F>> incl, proj;
};

template <class F>
TwSum<F> tw_sum(const std::vector<Tw<F>>& parts) {
    require_shape(!parts.empty(), "empty sum: pass the zero complex instead");
    const auto& cat = parts[0].cat_ptr();
    TwFlavor fl = parts[0].flavor();
    int lo = parts[0].lo(), hi = parts[0].hi();
    for (const auto& x : parts) {
        require_shape(parts[0].same_cat(x), "sum over mixed categories");
        lo = std::min(lo, x.lo());
        hi = std::max(hi, x.hi());
        fl = combine_flavor(fl, x.flavor());
    }
    std::vector<Obj> comps;
    // entry offset of part s inside the degree-i tuple
    auto offset = [&](std::size_t s, int i) {
        std::size_t off = 0;
        for (std::size_t r = 0; r < s; ++r) off += parts[r].obj(i).size();
        return off;
    };
    for (int i = lo; i <= hi; ++i) {
        Obj o;
        for (const auto& x : parts) {
            const Obj& xo = x.obj(i);
            o.insert(o.end(), xo.begin(), xo.end());
        }
        comps.push_back(std::move(o));
    }
    Tw<F> total(cat, lo, hi, std::move(comps), fl);
    for (int i = lo; i <= hi; ++i)
        for (int j = i + 1; j <= hi; ++j) {
            Matrix<F> v(cat->k, cat->tdim(total.obj(i), total.obj(j), i - j + 1), 1);
            bool any = false;
            for (std::size_t s = 0; s < parts.size(); ++s) {
                Matrix<F> xs = parts[s].twist(i, j);
                if (xs.is_zero()) continue;
                any = true;
                v = v + cat->embed_elt(parts[s].obj(i), total.obj(i), offset(s, i),
                                       parts[s].obj(j), total.obj(j), offset(s, j),
                                       i - j + 1, xs);
            }
            if (any) total.set_twist(i, j, v);
        }
    TwSum<F> r{total, {}, {}};
    for (std::size_t s = 0; s < parts.size(); ++s) {
        TwMor<F> in(parts[s], total, 0), pr(total, parts[s], 0);
        for (int i = lo; i <= hi; ++i) {
            if (parts[s].obj(i).empty()) continue;
            in.set_comp(i, i, cat->incl_elt(parts[s].obj(i), total.obj(i), offset(s, i)));
            pr.set_comp(i, i, cat->proj_elt(total.obj(i), parts[s].obj(i), offset(s, i)));
        }
        r.incl.push_back(std::move(in));
        r.proj.push_back(std::move(pr));
    }
    return r;
}

// The strict cone diagram: j : Y -> cone, p : cone -> X[1], i : X[1] -> cone,
// s : cone -> Y, with dj = 0, dp = 0, di = j f 1_{(X,1,0)}, ds = -f 1_{(X,1,0)} p.
template <class F>
struct Pretriangle {
    TwMor<F> f;
    Tw<F> cone;
    TwMor<F> j, p, i, s;
};

template <class F>
Pretriangle<F> tw_cone(const TwMor<F>& f) {
    require_shape(f.degree() == 0, "cone of a nonzero-degree morphism");
    require_contract(tw_is_closed(f), "cone needs a closed morphism");
    const Tw<F>&x = f.src(), &y = f.tgt();
    const auto& cat = x.cat_ptr();
    int lo = std::min(x.lo() - 1, y.lo()), hi = std::max(x.hi() - 1, y.hi());
    std::vector<Obj> comps;
    for (int i = lo; i <= hi; ++i) {
        Obj o = x.obj(i + 1);
        const Obj& yo = y.obj(i);
        o.insert(o.end(), yo.begin(), yo.end());
        comps.push_back(std::move(o));
    }
    Tw<F> cone(cat, lo, hi, std::move(comps), combine_flavor(x.flavor(), y.flavor()));
    for (int i = lo; i <= hi; ++i)
        for (int j = i + 1; j <= hi; ++j) {
            int d = i - j + 1;
            Matrix<F> v(cat->k, cat->tdim(cone.obj(i), cone.obj(j), d), 1);
            Matrix<F> xt = x.twist(i + 1, j + 1);
            if (!xt.is_zero())
                v = v + cat->embed_elt(x.obj(i + 1), cone.obj(i), 0, x.obj(j + 1),
                                       cone.obj(j), 0, d, -xt);
            Matrix<F> fc = f.comp(i + 1, j);
            if (!fc.is_zero())
                v = v + cat->embed_elt(x.obj(i + 1), cone.obj(i), 0, y.obj(j),
                                       cone.obj(j), x.obj(j + 1).size(), d, fc);
            Matrix<F> yt = y.twist(i, j);
            if (!yt.is_zero())
                v = v + cat->embed_elt(y.obj(i), cone.obj(i), x.obj(i + 1).size(),
                                       y.obj(j), cone.obj(j), x.obj(j + 1).size(), d, yt);
            cone.set_twist(i, j, v);
        }
    Tw<F> x1 = tw_shift(x, 1);
    TwMor<F> j(y, cone, 0), p(cone, x1, 0), i(x1, cone, 0), s(cone, y, 0);
    for (int d = lo; d <= hi; ++d) {
        if (!y.obj(d).empty()) {
            j.set_comp(d, d, cat->incl_elt(y.obj(d), cone.obj(d), x.obj(d + 1).size()));
            s.set_comp(d, d, cat->proj_elt(cone.obj(d), y.obj(d), x.obj(d + 1).size()));
        }
        if (!x.obj(d + 1).empty()) {
            p.set_comp(d, d, cat->proj_elt(cone.obj(d), x.obj(d + 1), 0));
            i.set_comp(d, d, cat->incl_elt(x.obj(d + 1), cone.obj(d), 0));
        }
    }
    Pretriangle<F> pt{f, cone, j, p, i, s};
    TwMor<F> unit10 = shifted_identity(x, 1, 0);
    internal_check(tw_diff(pt.j).is_zero(), "pretriangle: dj != 0");
    internal_check(tw_diff(pt.p).is_zero(), "pretriangle: dp != 0");
    internal_check(tw_diff(pt.i) == tw_compose(pt.j, tw_compose(f, unit10)),
                   "pretriangle: di != j f 1");
    internal_check(tw_diff(pt.s) == -tw_compose(tw_compose(f, unit10), pt.p),
                   "pretriangle: ds != -f 1 p");
    return pt;
}

// dH = j o f for the canonical H = i o 1_{(X,0,1)}
template <class F>
TwMor<F> jf_nullhomotopy(const Pretriangle<F>& pt) {
    return tw_compose(pt.i, shifted_identity(pt.f.src(), 0, 1));
}

// ---- brutal truncations -------------------------------------------------

template <class F>
Tw<F> tw_trunc_window(const Tw<F>& x, int n, int m) {
    int lo = std::max(x.lo(), n), hi = std::min(x.hi(), m);
    if (lo > hi) return tw_zero(x.cat_ptr());
    std::vector<Obj> comps;
    for (int i = lo; i <= hi; ++i) comps.push_back(x.obj(i));
    Tw<F> r(x.cat_ptr(), lo, hi, std::move(comps), x.flavor());
    for (const auto& [key, v] : x.twists())
        if (key.first >= lo && key.second <= hi) r.set_twist(key.first, key.second, v);
    return r;
}

template <class F>
struct TruncGeq {
    Tw<F> t;
    TwMor<F> incl; // j_n : t -> X, identity components on the window
};

template <class F>
struct TruncLeq {
    Tw<F> t;
    TwMor<F> proj; // p_m : X -> t
};

template <class F>
TruncGeq<F> tw_trunc_geq(const Tw<F>& x, int n) {
    Tw<F> t = tw_trunc_window(x, n, x.hi());
    TwMor<F> incl(t, x, 0);
    for (int i = t.lo(); i <= t.hi(); ++i)
        if (!t.obj(i).empty()) incl.set_comp(i, i, x.cat().tunit(t.obj(i)));
    return {t, incl};
}

template <class F>
TruncLeq<F> tw_trunc_leq(const Tw<F>& x, int m) {
    Tw<F> t = tw_trunc_window(x, x.lo(), m);
    TwMor<F> proj(x, t, 0);
    for (int i = t.lo(); i <= t.hi(); ++i)
        if (!t.obj(i).empty()) proj.set_comp(i, i, x.cat().tunit(t.obj(i)));
    return {t, proj};
}

// step maps of the truncation towers
template <class F>
TwMor<F> tw_geq_step(const Tw<F>& x, int n) { // sigma_{>=n}X -> sigma_{>=n-1}X
    Tw<F> a = tw_trunc_window(x, n, x.hi()), b = tw_trunc_window(x, n - 1, x.hi());
    TwMor<F> r(a, b, 0);
    for (int i = a.lo(); i <= a.hi(); ++i)
        if (!a.obj(i).empty()) r.set_comp(i, i, x.cat().tunit(a.obj(i)));
    return r;
}

template <class F>
TwMor<F> tw_leq_step(const Tw<F>& x, int m) { // sigma_{<=m}X -> sigma_{<=m-1}X
    Tw<F> a = tw_trunc_window(x, x.lo(), m), b = tw_trunc_window(x, x.lo(), m - 1);
    TwMor<F> r(a, b, 0);
    for (int i = b.lo(); i <= b.hi(); ++i)
        if (!b.obj(i).empty()) r.set_comp(i, i, x.cat().tunit(b.obj(i)));
    return r;
}

// componentwise truncation of morphisms (functorial on closed degree 0)
template <class F>
TwMor<F> tw_mor_window(const TwMor<F>& f, int n, int m) {
    TwMor<F> r(tw_trunc_window(f.src(), n, m), tw_trunc_window(f.tgt(), n, m), f.degree());
    for (const auto& [key, v] : f.components())
        if (key.first >= n && key.first <= m && key.second >= n && key.second <= m)
            r.set_comp(key.first, key.second, v);
    return r;
}

template <class F>
TwMor<F> tw_mor_geq(const TwMor<F>& f, int n) {
    return tw_mor_window(f, n, std::max(f.src().hi(), f.tgt().hi()));
}

template <class F>
TwMor<F> tw_mor_leq(const TwMor<F>& f, int m) {
    return tw_mor_window(f, std::min(f.src().lo(), f.tgt().lo()), m);
}

// ---- weight triangle ----------------------------------------------------

// sigma_{>=n}X -> X -> sigma_{<=n-1}X glued by xt : (sigma_{<=n-1}X)[-1] ->
// sigma_{>=n}X with components xt_i^j = x_{i-1}^j; cone(xt) is X literally.
template <class F>
struct WeightTriangle {
    Tw<F> geq, leq;
    TwMor<F> xt;
    TwMor<F> j, p; // j_n : geq -> X, p_{n-1} : X -> leq
    Pretriangle<F> pt;
};

template <class F>
WeightTriangle<F> weight_triangle(const Tw<F>& x, int n) {
    auto g = tw_trunc_geq(x, n);
    auto l = tw_trunc_leq(x, n - 1);
    Tw<F> shifted = tw_shift(l.t, -1);
    TwMor<F> xt(shifted, g.t, 0);
    for (int i = shifted.lo(); i <= shifted.hi(); ++i)
        for (int j = g.t.lo(); j <= g.t.hi(); ++j) {
            Matrix<F> v = x.twist(i - 1, j);
            if (!v.is_zero()) xt.set_comp(i, j, v);
        }
    internal_check(tw_is_closed(xt), "weight triangle: glue map is not closed");
    Pretriangle<F> pt = tw_cone(xt);
    internal_check(pt.cone == x, "weight triangle: cone does not rebuild X");
    return {g.t, l.t, xt, g.incl, l.proj, pt};
}

// degree -1 map h : (sigma_{<=n-1}X)[-1] -> sigma_{>=n}Y with components
// h_i^j = f_{i-1}^j; measures how f fails to respect the weight split:
// dh = f_{>=n} xt_X - xt_Y (f_{<=n-1}[-1])
template <class F>
TwMor<F> connecting_homotopy(const TwMor<F>& f, int n) {
    require_shape(f.degree() == 0, "connecting homotopy needs degree 0");
    require_contract(tw_is_closed(f), "connecting homotopy needs a closed morphism");
    const Tw<F>&x = f.src(), &y = f.tgt();
    auto wx = weight_triangle(x, n), wy = weight_triangle(y, n);
    TwMor<F> h(wx.xt.src(), wy.xt.tgt(), -1);
    for (int i = h.src().lo(); i <= h.src().hi(); ++i)
        for (int j = h.tgt().lo(); j <= h.tgt().hi(); ++j) {
            Matrix<F> v = f.comp(i - 1, j);
            if (!v.is_zero()) h.set_comp(i, j, v);
        }
    TwMor<F> rhs = tw_compose(tw_mor_geq(f, n), wx.xt) -
                   tw_compose(wy.xt, tw_shift_mor(tw_mor_leq(f, n - 1), -1));
    internal_check(tw_diff(h) == rhs, "connecting homotopy: dh mismatch");
    return h;
}

// ---- iterated extensions -------------------------------------------------

template <class F>
struct Extension {
    Tw<F> x; // attach.src sits one slot below X0, rest is X0 on the nose
    Pretriangle<F> pt;
};

// attach : P -> X0 closed degree 0, P concentrated in one degree d0 with
// d0 <= lo(X0); the result adjoins P at d0 - 1
template <class F>
Extension<F> extend_below(const Tw<F>& x0, const TwMor<F>& attach) {
    const Tw<F>& p = attach.src();
    require_shape(attach.degree() == 0, "extension attach map must have degree 0");
    Tw<F> pn = p.normalized();
    require_shape(pn.lo() == pn.hi(), "attach source must sit in a single degree");
    require_shape(x0.normalized().lo() >= pn.lo(),
                  "attach source must not sit above the complex");
    require_shape(attach.tgt() == x0, "attach target mismatch");
    Pretriangle<F> pt = tw_cone(attach);
    internal_check(tw_trunc_window(pt.cone, pn.lo(), pt.cone.hi()) == x0,
                   "extension: upper truncation does not return X0");
    return {pt.cone, pt};
}

// ---- functor image --------------------------------------------------------

template <class F>
Tw<F> tw_map(const DgFunctor<F>& u, const Tw<F>& x) {
    require_shape(*u.src == x.cat(), "functor source does not match the complex");
    require_contract(u.tgt->nonpositive, "functor target must stay nonpositive");
    std::vector<Obj> comps;
    for (int i = x.lo(); i <= x.hi(); ++i) comps.push_back(u.apply_obj(x.obj(i)));
    Tw<F> r(u.tgt, x.lo(), x.hi(), std::move(comps), x.flavor());
    for (const auto& [key, v] : x.twists())
        r.set_twist(key.first, key.second,
                    u.apply_elt(x.obj(key.first), x.obj(key.second),
                                key.first - key.second + 1, v));
    return r;
}

template <class F>
TwMor<F> tw_map_mor(const DgFunctor<F>& u, const TwMor<F>& f) {
    TwMor<F> r(tw_map(u, f.src()), tw_map(u, f.tgt()), f.degree());
    for (const auto& [key, v] : f.components())
        r.set_comp(key.first, key.second,
                   u.apply_elt(f.src().obj(key.first), f.tgt().obj(key.second),
                               key.first - key.second + f.degree(), v));
    return r;
}

// ---- opposites ------------------------------------------------------------

inline long triangle_number(long n) { return n * (n + 1) / 2; }

// reorder an element of Hom_A(t,s) into the block layout of Hom_{A^op}(s,t)
template <class F>
Matrix<F> op_layout(const DgCat<F>& a, const DgCat<F>& aop, const Obj& s, const Obj& t,
                    int d, const Matrix<F>& v) {
    Matrix<F> r(aop.k, aop.tdim(s, t, d), 1);
    for (std::size_t si = 0; si < s.size(); ++si)
        for (std::size_t ti = 0; ti < t.size(); ++ti)
            r.paste(aop.toffset(s, t, d, si, ti), 0, a.block_of(t, s, d, v, ti, si));
    return r;
}

// (X^op)^i = X^{-i} with (x^op)_i^j = -(-1)^{T(j-i)} x_{-j}^{-i}; T is the
// triangle number. Position-only signs cannot satisfy the opposite MC
// equation against the Koszul composition; this correction can.
template <class F>
Tw<F> opposite_tw(const Tw<F>& x) {
    auto aop = opposite_cat(x.cat_ptr());
    std::vector<Obj> comps;
    for (int i = -x.hi(); i <= -x.lo(); ++i) comps.push_back(x.obj(-i));
    TwFlavor fl = x.flavor() == TwFlavor::minus  ? TwFlavor::plus
                  : x.flavor() == TwFlavor::plus ? TwFlavor::minus
                                                 : TwFlavor::unbounded;
    Tw<F> r(aop, -x.hi(), -x.lo(), std::move(comps), fl);
    for (const auto& [key, v] : x.twists()) {
        int i = -key.second, j = -key.first;
        r.set_twist(i, j,
                    op_layout(x.cat(), *aop, r.obj(i), r.obj(j), i - j + 1, v)
                        .scaled(x.cat().k.neg(
                            sign_pow(x.cat().k, triangle_number(j - i)))));
    }
    return r;
}

// contravariant on morphisms: f : X -> Y yields f^op : Y^op -> X^op with
// (f^op)_i^j = (-1)^{(j-i)p + T(j-i) + (j-i)} f_{-j}^{-i}
template <class F>
TwMor<F> opposite_tw_mor(const TwMor<F>& f) {
    Tw<F> xop = opposite_tw(f.src()), yop = opposite_tw(f.tgt());
    int p = f.degree();
    TwMor<F> r(yop, xop, p);
    for (const auto& [key, v] : f.components()) {
        int i = -key.second, j = -key.first;
        long n = j - i;
        r.set_comp(i, j,
                   op_layout(f.cat(), xop.cat(), yop.obj(i), xop.obj(j), i - j + p, v)
                       .scaled(sign_pow(f.cat().k, n * p + triangle_number(n) + n)));
    }
    return r;
}

} // namespace twistlab
