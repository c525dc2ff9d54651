#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "matrix.hpp"

namespace twistlab {

// Semantic objects are finite tuples of base objects; the empty tuple is the
// zero object. All constructions that need direct sums (cones, weight
// triangles, towers) concatenate tuples, which is what makes their strict
// identities hold on the nose rather than up to isomorphism.
using Obj = std::vector<int>;

struct Violation {
    std::string axiom;
    std::string where;
    std::string residual;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
    void add(std::string axiom, std::string where, std::string residual) {
        violations.push_back({std::move(axiom), std::move(where), std::move(residual)});
    }
    std::string to_string() const {
        if (passed()) return "passed";
        std::string s;
        for (const auto& v : violations)
            s += v.axiom + " at " + v.where + ": residual " + v.residual + "\n";
        return s;
    }
};

// A presented dg-category: finitely many base objects, graded hom spaces
// with chosen bases, differentials d^n per pair, composition structure
// constants per triple and degree pair, unit coordinates per object.
//
// comp matrix layout for (a -f-> m -g-> b), deg f = p, deg g = q:
//   column index = g_idx * dim_f + f_idx, rows = basis of hom^{p+q}(a,b).
// Zero matrices are never stored, so presentations compare structurally.
template <class F>
class DgCat {
public:
    using Elt = typename F::Elt;
    using Mat = Matrix<F>;

    F k;
    bool nonpositive = false;
    std::optional<int> zero_obj;

    explicit DgCat(F field) : k(std::move(field)) {}

    int add_object(std::string name) {
        names_.push_back(std::move(name));
        return int(names_.size()) - 1;
    }
    std::size_t nobj() const { return names_.size(); }
    const std::string& name(int a) const { return names_.at(std::size_t(a)); }
    const std::vector<std::string>& object_names() const { return names_; }

    void set_dim(int a, int b, int d, std::size_t n) {
        check_obj(a); check_obj(b);
        if (n == 0) {
            auto it = dims_.find({a, b});
            if (it != dims_.end()) { it->second.erase(d); if (it->second.empty()) dims_.erase(it); }
        } else {
            dims_[{a, b}][d] = n;
        }
    }
    std::size_t dim(int a, int b, int d) const {
        auto it = dims_.find({a, b});
        if (it == dims_.end()) return 0;
        auto jt = it->second.find(d);
        return jt == it->second.end() ? 0 : jt->second;
    }
    std::vector<int> degrees(int a, int b) const {
        std::vector<int> r;
        auto it = dims_.find({a, b});
        if (it != dims_.end())
            for (const auto& [d, n] : it->second)
                if (n) r.push_back(d);
        return r;
    }

    void set_diff(int a, int b, int d, Mat m) {
        if (m.is_zero()) diff_.erase({a, b, d});
        else diff_.insert_or_assign({a, b, d}, std::move(m));
    }
    Mat diff(int a, int b, int d) const {
        auto it = diff_.find({a, b, d});
        if (it != diff_.end()) return it->second;
        return Mat(k, dim(a, b, d + 1), dim(a, b, d));
    }

    void set_comp(int a, int m, int b, int p, int q, Mat c) {
        if (c.is_zero()) comp_.erase({a, m, b, p, q});
        else comp_.insert_or_assign({a, m, b, p, q}, std::move(c));
    }
    Mat comp(int a, int m, int b, int p, int q) const {
        auto it = comp_.find({a, m, b, p, q});
        if (it != comp_.end()) return it->second;
        return Mat(k, dim(a, b, p + q), dim(m, b, q) * dim(a, m, p));
    }

    void set_unit(int a, Mat u) { unit_.insert_or_assign(a, std::move(u)); }
    Mat unit(int a) const {
        auto it = unit_.find(a);
        if (it != unit_.end()) return it->second;
        return Mat(k, dim(a, a, 0), 1);
    }

    // comp applied to concrete coefficient columns g, f
    Mat comp_apply(int a, int m, int b, int p, int q, const Mat& g, const Mat& f) const {
        return comp(a, m, b, p, q) * tensor_col(g, f);
    }

    Mat tensor_col(const Mat& g, const Mat& f) const {
        Mat v(k, g.rows() * f.rows(), 1);
        for (std::size_t gi = 0; gi < g.rows(); ++gi)
            for (std::size_t fi = 0; fi < f.rows(); ++fi)
                v.at(gi * f.rows() + fi, 0) = k.mul(g.at(gi, 0), f.at(fi, 0));
        return v;
    }

    bool operator==(const DgCat& o) const {
        if (!(k == o.k) || names_ != o.names_ || nonpositive != o.nonpositive ||
            zero_obj != o.zero_obj || dims_ != o.dims_ || diff_ != o.diff_ ||
            comp_ != o.comp_)
            return false;
        for (std::size_t a = 0; a < nobj(); ++a)
            if (unit(int(a)) != o.unit(int(a))) return false;
        return true;
    }

    // ---- tuple layer -------------------------------------------------

    bool obj_ok(const Obj& s) const {
        for (int a : s)
            if (a < 0 || std::size_t(a) >= nobj()) return false;
        return true;
    }
    void check_tuple(const Obj& s) const {
        require_shape(obj_ok(s), "unknown object id in tuple");
    }

    // Hom(S,T)^d basis layout: source entry outer, target entry inner.
    std::size_t tdim(const Obj& s, const Obj& t, int d) const {
        std::size_t n = 0;
        for (int a : s)
            for (int b : t) n += dim(a, b, d);
        return n;
    }
    std::size_t toffset(const Obj& s, const Obj& t, int d,
                        std::size_t si, std::size_t ti) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < si; ++i)
            for (int b : t) off += dim(s[i], b, d);
        for (std::size_t j = 0; j < ti; ++j) off += dim(s[si], t[j], d);
        return off;
    }
    std::vector<int> tdegrees(const Obj& s, const Obj& t) const {
        std::map<int, bool> seen;
        for (int a : s)
            for (int b : t)
                for (int d : degrees(a, b)) seen[d] = true;
        std::vector<int> r;
        for (const auto& [d, _] : seen) r.push_back(d);
        return r;
    }

    Mat tdiff(const Obj& s, const Obj& t, int d) const {
        Mat r(k, tdim(s, t, d + 1), tdim(s, t, d));
        for (std::size_t si = 0; si < s.size(); ++si)
            for (std::size_t ti = 0; ti < t.size(); ++ti)
                r.paste(toffset(s, t, d + 1, si, ti), toffset(s, t, d, si, ti),
                        diff(s[si], t[ti], d));
        return r;
    }

    Mat tunit(const Obj& s) const {
        Mat r(k, tdim(s, s, 0), 1);
        for (std::size_t si = 0; si < s.size(); ++si)
            r.paste(toffset(s, s, 0, si, si), 0, unit(s[si]));
        return r;
    }

    Mat block_of(const Obj& s, const Obj& t, int d, const Mat& v,
                 std::size_t si, std::size_t ti) const {
        return v.block(toffset(s, t, d, si, ti), 0, dim(s[si], t[ti], d), 1);
    }

    // (g o f) for g in Hom(M,T)^q, f in Hom(S,M)^p, as coefficient columns
    Mat tcompose(const Obj& s, const Obj& m, const Obj& t, int p, int q,
                 const Mat& g, const Mat& f) const {
        require_shape(g.rows() == tdim(m, t, q) && f.rows() == tdim(s, m, p),
                      "tcompose: element shape mismatch");
        Mat r(k, tdim(s, t, p + q), 1);
        for (std::size_t si = 0; si < s.size(); ++si)
            for (std::size_t ti = 0; ti < t.size(); ++ti) {
                Mat acc(k, dim(s[si], t[ti], p + q), 1);
                for (std::size_t mi = 0; mi < m.size(); ++mi) {
                    Mat gb = block_of(m, t, q, g, mi, ti);
                    Mat fb = block_of(s, m, p, f, si, mi);
                    acc = acc + comp_apply(s[si], m[mi], t[ti], p, q, gb, fb);
                }
                r.paste(toffset(s, t, p + q, si, ti), 0, acc);
            }
        return r;
    }

    // compose-with-fixed-g as a linear operator Hom(S,M)^p -> Hom(S,T)^{p+q}
    Mat left_op(const Obj& s, const Obj& m, const Obj& t, int p, int q,
                const Mat& g) const {
        require_shape(g.rows() == tdim(m, t, q), "left_op: element shape mismatch");
        Mat r(k, tdim(s, t, p + q), tdim(s, m, p));
        for (std::size_t si = 0; si < s.size(); ++si)
            for (std::size_t ti = 0; ti < t.size(); ++ti)
                for (std::size_t mi = 0; mi < m.size(); ++mi) {
                    Mat gb = block_of(m, t, q, g, mi, ti);
                    Mat c = comp(s[si], m[mi], t[ti], p, q);
                    std::size_t df = dim(s[si], m[mi], p);
                    Mat blk(k, c.rows(), df);
                    for (std::size_t gi = 0; gi < gb.rows(); ++gi) {
                        if (k.is_zero(gb.at(gi, 0))) continue;
                        for (std::size_t fi = 0; fi < df; ++fi)
                            for (std::size_t rr = 0; rr < c.rows(); ++rr)
                                blk.at(rr, fi) = k.add(blk.at(rr, fi),
                                    k.mul(gb.at(gi, 0), c.at(rr, gi * df + fi)));
                    }
                    add_block(r, toffset(s, t, p + q, si, ti),
                              toffset(s, m, p, si, mi), blk);
                }
        return r;
    }

    // compose-with-fixed-f as a linear operator Hom(M,T)^q -> Hom(S,T)^{p+q}
    Mat right_op(const Obj& s, const Obj& m, const Obj& t, int p, int q,
                 const Mat& f) const {
        require_shape(f.rows() == tdim(s, m, p), "right_op: element shape mismatch");
        Mat r(k, tdim(s, t, p + q), tdim(m, t, q));
        for (std::size_t si = 0; si < s.size(); ++si)
            for (std::size_t ti = 0; ti < t.size(); ++ti)
                for (std::size_t mi = 0; mi < m.size(); ++mi) {
                    Mat fb = block_of(s, m, p, f, si, mi);
                    Mat c = comp(s[si], m[mi], t[ti], p, q);
                    std::size_t df = fb.rows(), dg = dim(m[mi], t[ti], q);
                    Mat blk(k, c.rows(), dg);
                    for (std::size_t fi = 0; fi < df; ++fi) {
                        if (k.is_zero(fb.at(fi, 0))) continue;
                        for (std::size_t gi = 0; gi < dg; ++gi)
                            for (std::size_t rr = 0; rr < c.rows(); ++rr)
                                blk.at(rr, gi) = k.add(blk.at(rr, gi),
                                    k.mul(fb.at(fi, 0), c.at(rr, gi * df + fi)));
                    }
                    add_block(r, toffset(s, t, p + q, si, ti),
                              toffset(m, t, q, mi, ti), blk);
                }
        return r;
    }

    // embed an element of Hom(A,B)^d into Hom(S,T)^d where A sits inside S at
    // entry offset oa and B inside T at ob; other blocks stay zero
    Mat embed_elt(const Obj& a, const Obj& s, std::size_t oa,
                  const Obj& b, const Obj& t, std::size_t ob,
                  int d, const Mat& v) const {
        check_embed(a, s, oa);
        check_embed(b, t, ob);
        Mat r(k, tdim(s, t, d), 1);
        for (std::size_t ai = 0; ai < a.size(); ++ai)
            for (std::size_t bi = 0; bi < b.size(); ++bi)
                r.paste(toffset(s, t, d, oa + ai, ob + bi), 0,
                        block_of(a, b, d, v, ai, bi));
        return r;
    }

    // the reverse extraction
    Mat restrict_elt(const Obj& a, const Obj& s, std::size_t oa,
                     const Obj& b, const Obj& t, std::size_t ob,
                     int d, const Mat& v) const {
        check_embed(a, s, oa);
        check_embed(b, t, ob);
        Mat r(k, tdim(a, b, d), 1);
        for (std::size_t ai = 0; ai < a.size(); ++ai)
            for (std::size_t bi = 0; bi < b.size(); ++bi)
                r.paste(toffset(a, b, d, ai, bi), 0,
                        v.block(toffset(s, t, d, oa + ai, ob + bi), 0,
                                dim(a[ai], b[bi], d), 1));
        return r;
    }

    // canonical inclusion of S into T = prefix ++ S ++ suffix, as an element
    // of Hom(S,T)^0; `off` is the entry offset of S inside T
    Mat incl_elt(const Obj& s, const Obj& t, std::size_t off) const {
        check_embed(s, t, off);
        Mat r(k, tdim(s, t, 0), 1);
        for (std::size_t a = 0; a < s.size(); ++a)
            r.paste(toffset(s, t, 0, a, off + a), 0, unit(s[a]));
        return r;
    }
    // canonical projection of T onto its sub-tuple S, element of Hom(T,S)^0
    Mat proj_elt(const Obj& t, const Obj& s, std::size_t off) const {
        check_embed(s, t, off);
        Mat r(k, tdim(t, s, 0), 1);
        for (std::size_t a = 0; a < s.size(); ++a)
            r.paste(toffset(t, s, 0, off + a, a), 0, unit(s[a]));
        return r;
    }

    // ---- validation --------------------------------------------------

    void check_shapes() const {
        for (const auto& [key, m] : diff_) {
            auto [a, b, d] = key;
            require_shape(a >= 0 && std::size_t(a) < nobj() && b >= 0 && std::size_t(b) < nobj(),
                          "diff tensor on unknown object pair");
            require_shape(m.rows() == dim(a, b, d + 1) && m.cols() == dim(a, b, d),
                          "diff tensor shape mismatch at (" + name(a) + "->" + name(b) +
                              ") deg " + std::to_string(d));
        }
        for (const auto& [key, m] : comp_) {
            auto [a, mm, b, p, q] = key;
            require_shape(m.rows() == dim(a, b, p + q) &&
                              m.cols() == dim(mm, b, q) * dim(a, mm, p),
                          "comp tensor shape mismatch at (" + name(a) + "," + name(mm) +
                              "," + name(b) + ") degs (" + std::to_string(p) + "," +
                              std::to_string(q) + ")");
        }
        for (const auto& [a, u] : unit_)
            require_shape(u.rows() == dim(a, a, 0) && u.cols() == 1,
                          "unit shape mismatch at " + name(a));
    }

    ValidationReport validate() const {
        check_shapes();
        ValidationReport rep;
        int n = int(nobj());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int d : degrees(a, b)) {
                    Mat dd = diff(a, b, d + 1) * diff(a, b, d);
                    if (!dd.is_zero())
                        rep.add("d^2=0", pair_loc(a, b, d), dd.to_string());
                }
        for (int a = 0; a < n; ++a)
            for (int m = 0; m < n; ++m)
                for (int b = 0; b < n; ++b)
                    for (int p : degrees(a, m))
                        for (int q : degrees(m, b))
                            check_leibniz(rep, a, m, b, p, q);
        for (int a = 0; a < n; ++a)
            for (int m1 = 0; m1 < n; ++m1)
                for (int m2 = 0; m2 < n; ++m2)
                    for (int b = 0; b < n; ++b)
                        for (int p : degrees(a, m1))
                            for (int q : degrees(m1, m2))
                                for (int r : degrees(m2, b))
                                    check_assoc(rep, a, m1, m2, b, p, q, r);
        for (int a = 0; a < n; ++a) {
            Mat du = diff(a, a, 0) * unit(a);
            if (!du.is_zero())
                rep.add("unit closed", name(a), du.to_string());
            if (dim(a, a, 0) > 0 && unit(a).is_zero() && !obj_has_no_homs(a))
                rep.add("unit law", name(a), "unit coordinates are zero");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int d : degrees(a, b))
                    check_unit_action(rep, a, b, d);
        if (zero_obj) {
            int z = *zero_obj;
            for (int b = 0; b < n; ++b) {
                if (!degrees(z, b).empty())
                    rep.add("zero object", name(z) + "->" + name(b), "nonzero hom space");
                if (b != z && !degrees(b, z).empty())
                    rep.add("zero object", name(b) + "->" + name(z), "nonzero hom space");
            }
        }
        if (nonpositive)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int d : degrees(a, b))
                        if (d > 0)
                            rep.add("nonpositive", pair_loc(a, b, d),
                                    std::to_string(dim(a, b, d)) + " dims above degree 0");
        return rep;
    }

private:
    std::vector<std::string> names_;
    std::map<std::pair<int, int>, std::map<int, std::size_t>> dims_;
    std::map<std::tuple<int, int, int>, Mat> diff_;
    std::map<std::tuple<int, int, int, int, int>, Mat> comp_;
    std::map<int, Mat> unit_;

    void check_obj(int a) const {
        require_shape(a >= 0 && std::size_t(a) < nobj(), "unknown object id");
    }
    void check_embed(const Obj& s, const Obj& t, std::size_t off) const {
        require_shape(off + s.size() <= t.size(), "sub-tuple out of range");
        for (std::size_t a = 0; a < s.size(); ++a)
            require_shape(s[a] == t[off + a], "sub-tuple entries do not match");
    }
    static void add_block(Mat& r, std::size_t i0, std::size_t j0, const Mat& blk) {
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j)
                r.at(i0 + i, j0 + j) =
                    r.field().add(r.at(i0 + i, j0 + j), blk.at(i, j));
    }
    bool obj_has_no_homs(int a) const {
        for (int b = 0; b < int(nobj()); ++b)
            if (!degrees(a, b).empty() || !degrees(b, a).empty()) return false;
        return true;
    }
    std::string pair_loc(int a, int b, int d) const {
        return "(" + name(a) + "->" + name(b) + ") deg " + std::to_string(d);
    }

    void check_leibniz(ValidationReport& rep, int a, int m, int b, int p, int q) const {
        std::size_t df = dim(a, m, p), dg = dim(m, b, q);
        for (std::size_t gi = 0; gi < dg; ++gi)
            for (std::size_t fi = 0; fi < df; ++fi) {
                Mat f(k, df, 1), g(k, dg, 1);
                f.at(fi, 0) = k.one();
                g.at(gi, 0) = k.one();
                Mat lhs = diff(a, b, p + q) * comp_apply(a, m, b, p, q, g, f);
                Mat rhs = comp_apply(a, m, b, p, q + 1, diff(m, b, q) * g, f) +
                          comp_apply(a, m, b, p + 1, q, g, diff(a, m, p) * f)
                              .scaled(sign_pow(k, q));
                if (lhs != rhs)
                    rep.add("Leibniz",
                            "(" + name(a) + "," + name(m) + "," + name(b) + ") degs (" +
                                std::to_string(p) + "," + std::to_string(q) + ") basis (" +
                                std::to_string(gi) + "," + std::to_string(fi) + ")",
                            (lhs - rhs).to_string());
            }
    }

    void check_assoc(ValidationReport& rep, int a, int m1, int m2, int b,
                     int p, int q, int r) const {
        std::size_t df = dim(a, m1, p), dg = dim(m1, m2, q), dh = dim(m2, b, r);
        for (std::size_t hi = 0; hi < dh; ++hi)
            for (std::size_t gi = 0; gi < dg; ++gi)
                for (std::size_t fi = 0; fi < df; ++fi) {
                    Mat f(k, df, 1), g(k, dg, 1), h(k, dh, 1);
                    f.at(fi, 0) = k.one();
                    g.at(gi, 0) = k.one();
                    h.at(hi, 0) = k.one();
                    Mat lhs = comp_apply(a, m2, b, p + q, r, h,
                                         comp_apply(a, m1, m2, p, q, g, f));
                    Mat rhs = comp_apply(a, m1, b, p, q + r,
                                         comp_apply(m1, m2, b, q, r, h, g), f);
                    if (lhs != rhs)
                        rep.add("associativity",
                                "(" + name(a) + "," + name(m1) + "," + name(m2) + "," +
                                    name(b) + ") degs (" + std::to_string(p) + "," +
                                    std::to_string(q) + "," + std::to_string(r) + ")",
                                (lhs - rhs).to_string());
                }
    }

    void check_unit_action(ValidationReport& rep, int a, int b, int d) const {
        std::size_t n = dim(a, b, d);
        for (std::size_t i = 0; i < n; ++i) {
            Mat f(k, n, 1);
            f.at(i, 0) = k.one();
            Mat right = comp_apply(a, a, b, 0, d, f, unit(a));
            Mat left = comp_apply(a, b, b, d, 0, unit(b), f);
            if (right != f)
                rep.add("unit law", pair_loc(a, b, d) + " basis " + std::to_string(i) +
                                         " (right)",
                        (right - f).to_string());
            if (left != f)
                rep.add("unit law", pair_loc(a, b, d) + " basis " + std::to_string(i) +
                                         " (left)",
                        (left - f).to_string());
        }
    }
};

// Dg-functor data: base objects map to tuples of the target, hom spaces map
// by explicit matrices per (pair, degree). Tuple inputs are handled blockwise.
template <class F>
struct DgFunctor {
    using Mat = Matrix<F>;

    std::shared_ptr<const DgCat<F>> src, tgt;
    std::vector<Obj> obj_map;
    std::map<std::tuple<int, int, int>, Mat> hom_map;

    Mat hom_matrix(int a, int b, int d) const {
        auto it = hom_map.find({a, b, d});
        if (it != hom_map.end()) return it->second;
        return Mat(src->k, tgt->tdim(apply_base(a), apply_base(b), d), src->dim(a, b, d));
    }

    const Obj& apply_base(int a) const { return obj_map.at(std::size_t(a)); }

    Obj apply_obj(const Obj& s) const {
        Obj r;
        for (int a : s) {
            const Obj& ua = apply_base(a);
            r.insert(r.end(), ua.begin(), ua.end());
        }
        return r;
    }

    Mat apply_elt(const Obj& s, const Obj& t, int d, const Mat& v) const {
        require_shape(v.rows() == src->tdim(s, t, d) && v.cols() == 1,
                      "functor: element shape mismatch");
        Obj us = apply_obj(s), ut = apply_obj(t);
        Mat out(tgt->k, tgt->tdim(us, ut, d), 1);
        std::size_t srow = 0;
        for (std::size_t si = 0; si < s.size(); ++si) {
            const Obj& us1 = apply_base(s[si]);
            std::size_t trow = 0;
            for (std::size_t ti = 0; ti < t.size(); ++ti) {
                const Obj& ut1 = apply_base(t[ti]);
                Mat img = hom_matrix(s[si], t[ti], d) * src->block_of(s, t, d, v, si, ti);
                std::size_t pos = 0;
                for (std::size_t a = 0; a < us1.size(); ++a)
                    for (std::size_t b = 0; b < ut1.size(); ++b) {
                        std::size_t nn = tgt->dim(us1[a], ut1[b], d);
                        if (nn)
                            out.paste(tgt->toffset(us, ut, d, srow + a, trow + b), 0,
                                      img.block(pos, 0, nn, 1));
                        pos += nn;
                    }
                trow += ut1.size();
            }
            srow += us1.size();
        }
        return out;
    }

    ValidationReport validate() const {
        require_shape(obj_map.size() == src->nobj(), "functor: object map size mismatch");
        for (const Obj& o : obj_map) tgt->check_tuple(o);
        ValidationReport rep;
        int n = int(src->nobj());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int d : src->degrees(a, b)) {
                    Mat lhs = tgt->tdiff(apply_base(a), apply_base(b), d) * hom_matrix(a, b, d);
                    Mat rhs = hom_matrix(a, b, d + 1) * src->diff(a, b, d);
                    if (lhs != rhs)
                        rep.add("functor d-compat",
                                "(" + src->name(a) + "->" + src->name(b) + ") deg " +
                                    std::to_string(d),
                                (lhs - rhs).to_string());
                }
        for (int a = 0; a < n; ++a) {
            Obj sa{a};
            Mat lhs = apply_elt(sa, sa, 0, src->unit(a));
            Mat rhs = tgt->tunit(apply_base(a));
            if (lhs != rhs)
                rep.add("functor unit", src->name(a), (lhs - rhs).to_string());
        }
        for (int a = 0; a < n; ++a)
            for (int m = 0; m < n; ++m)
                for (int b = 0; b < n; ++b)
                    for (int p : src->degrees(a, m))
                        for (int q : src->degrees(m, b)) {
                            std::size_t df = src->dim(a, m, p), dg = src->dim(m, b, q);
                            for (std::size_t gi = 0; gi < dg; ++gi)
                                for (std::size_t fi = 0; fi < df; ++fi) {
                                    Mat f(src->k, df, 1), g(src->k, dg, 1);
                                    f.at(fi, 0) = src->k.one();
                                    g.at(gi, 0) = src->k.one();
                                    Mat lhs = apply_elt({a}, {b}, p + q,
                                                        src->comp_apply(a, m, b, p, q, g, f));
                                    Mat rhs = tgt->tcompose(
                                        apply_base(a), apply_base(m), apply_base(b), p, q,
                                        apply_elt({m}, {b}, q, g), apply_elt({a}, {m}, p, f));
                                    if (lhs != rhs)
                                        rep.add("functor comp",
                                                "(" + src->name(a) + "," + src->name(m) + "," +
                                                    src->name(b) + ") degs (" +
                                                    std::to_string(p) + "," +
                                                    std::to_string(q) + ")",
                                                (lhs - rhs).to_string());
                                }
                        }
        return rep;
    }
};

template <class F>
DgFunctor<F> identity_functor(std::shared_ptr<const DgCat<F>> cat) {
    DgFunctor<F> u{cat, cat, {}, {}};
    for (int a = 0; a < int(cat->nobj()); ++a) {
        u.obj_map.push_back({a});
        for (int b = 0; b < int(cat->nobj()); ++b)
            for (int d : cat->degrees(a, b))
                u.hom_map.insert_or_assign(
                    {a, b, d}, Matrix<F>::identity(cat->k, cat->dim(a, b, d)));
    }
    return u;
}

template <class F>
DgFunctor<F> compose_functors(const DgFunctor<F>& v, const DgFunctor<F>& u) {
    require_shape(*u.tgt == *v.src, "functor composition: categories do not match");
    DgFunctor<F> r{u.src, v.tgt, {}, {}};
    for (std::size_t a = 0; a < u.obj_map.size(); ++a)
        r.obj_map.push_back(v.apply_obj(u.obj_map[a]));
    int n = int(u.src->nobj());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d : u.src->degrees(a, b)) {
                std::size_t nn = u.src->dim(a, b, d);
                Matrix<F> m(u.src->k, v.tgt->tdim(r.apply_base(a), r.apply_base(b), d), nn);
                for (std::size_t j = 0; j < nn; ++j) {
                    Matrix<F> e(u.src->k, nn, 1);
                    e.at(j, 0) = u.src->k.one();
                    m.paste(0, j,
                            v.apply_elt(u.apply_base(a), u.apply_base(b), d,
                                        u.apply_elt({a}, {b}, d, e)));
                }
                r.hom_map.insert_or_assign({a, b, d}, m);
            }
    return r;
}

// ---- constructions on presentations ----------------------------------

template <class F>
struct TruncatedCat {
    std::shared_ptr<const DgCat<F>> cat; // strictly nonpositive
    DgFunctor<F> incl;                   // truncated -> original
};

// Left truncation: degree < 0 kept, degree 0 replaced by the kernel of d^0,
// positive degrees dropped. Composition and units are re-expressed in the
// kernel bases.
template <class F>
TruncatedCat<F> truncate_leq0(std::shared_ptr<const DgCat<F>> cat) {
    using Mat = Matrix<F>;
    const DgCat<F>& c = *cat;
    auto out = std::make_shared<DgCat<F>>(c.k);
    for (const auto& nm : c.object_names()) out->add_object(nm);
    out->nonpositive = true;
    out->zero_obj = c.zero_obj;

    int n = int(c.nobj());
    std::map<std::pair<int, int>, Mat> ker; // degree-0 kernel basis per pair
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (c.dim(a, b, 0))
                ker.emplace(std::make_pair(a, b), kernel_basis(c.diff(a, b, 0)));
            for (int d : c.degrees(a, b)) {
                if (d > 0) continue;
                if (d == 0)
                    out->set_dim(a, b, 0, ker.at({a, b}).cols());
                else
                    out->set_dim(a, b, d, c.dim(a, b, d));
                if (d < -1) out->set_diff(a, b, d, c.diff(a, b, d));
            }
        }
    auto in_new_basis = [&](int a, int b, int d, const Mat& m) -> Mat {
        if (d != 0) return m;
        auto x = express_in(ker.at({a, b}), m);
        internal_check(x.has_value(), "truncation: cocycle not in kernel basis span");
        return *x;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (c.dim(a, b, -1) && c.dim(a, b, 0))
                out->set_diff(a, b, -1, in_new_basis(a, b, 0, c.diff(a, b, -1)));
        }
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m)
            for (int b = 0; b < n; ++b)
                for (int p : c.degrees(a, m)) {
                    if (p > 0) continue;
                    for (int q : c.degrees(m, b)) {
                        if (q > 0) continue;
                        std::size_t df = out->dim(a, m, p), dg = out->dim(m, b, q);
                        if (!df || !dg || !out->dim(a, b, p + q)) continue;
                        Mat fb = p == 0 ? ker.at({a, m}) : Mat::identity(c.k, df);
                        Mat gb = q == 0 ? ker.at({m, b}) : Mat::identity(c.k, dg);
                        Mat cm(c.k, out->dim(a, b, p + q), dg * df);
                        for (std::size_t gi = 0; gi < dg; ++gi)
                            for (std::size_t fi = 0; fi < df; ++fi)
                                cm.paste(0, gi * df + fi,
                                         in_new_basis(a, b, p + q,
                                                      c.comp_apply(a, m, b, p, q,
                                                                   gb.col(gi), fb.col(fi))));
                        out->set_comp(a, m, b, p, q, cm);
                    }
                }
    for (int a = 0; a < n; ++a)
        if (c.dim(a, a, 0)) out->set_unit(a, in_new_basis(a, a, 0, c.unit(a)));

    DgFunctor<F> incl{out, cat, {}, {}};
    for (int a = 0; a < n; ++a) incl.obj_map.push_back({a});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d : out->degrees(a, b))
                incl.hom_map.insert_or_assign(
                    {a, b, d},
                    d == 0 ? ker.at({a, b}) : Mat::identity(c.k, out->dim(a, b, d)));
    return {out, std::move(incl)};
}

// Adds one formal-zero base object (all homs zero). Idempotent.
template <class F>
std::shared_ptr<const DgCat<F>> adjoin_zero(std::shared_ptr<const DgCat<F>> cat) {
    if (cat->zero_obj) return cat;
    auto out = std::make_shared<DgCat<F>>(*cat);
    out->zero_obj = out->add_object("0");
    return out;
}

template <class F>
struct AdditiveClosure {
    std::shared_ptr<const DgCat<F>> cat;
    DgFunctor<F> embed; // base objects as 1-tuples
};

// Direct-sum closure. Tuple objects, blockwise homs and composition are
// built into DgCat itself, so the closure returns the same presentation
// together with the embedding; Obj tuples are the formal sums.
template <class F>
AdditiveClosure<F> additive_closure(std::shared_ptr<const DgCat<F>> cat) {
    return {cat, identity_functor(cat)};
}

// Opposite category with the Koszul sign: comp^op(g,f) = (-1)^{|f||g|} comp(f,g).
template <class F>
std::shared_ptr<const DgCat<F>> opposite_cat(std::shared_ptr<const DgCat<F>> cat) {
    using Mat = Matrix<F>;
    const DgCat<F>& c = *cat;
    auto out = std::make_shared<DgCat<F>>(c.k);
    for (const auto& nm : c.object_names()) out->add_object(nm);
    out->nonpositive = c.nonpositive;
    out->zero_obj = c.zero_obj;
    int n = int(c.nobj());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d : c.degrees(b, a)) {
                out->set_dim(a, b, d, c.dim(b, a, d));
                out->set_diff(a, b, d, c.diff(b, a, d));
            }
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m)
            for (int b = 0; b < n; ++b)
                for (int p : out->degrees(a, m))
                    for (int q : out->degrees(m, b)) {
                        std::size_t df = out->dim(a, m, p), dg = out->dim(m, b, q);
                        std::size_t dr = out->dim(a, b, p + q);
                        if (!df || !dg || !dr) continue;
                        Mat src = c.comp(b, m, a, q, p); // inner b->m deg q, outer m->a deg p
                        Mat cm(c.k, dr, dg * df);
                        for (std::size_t gi = 0; gi < dg; ++gi)
                            for (std::size_t fi = 0; fi < df; ++fi)
                                cm.paste(0, gi * df + fi,
                                         src.col(fi * dg + gi).scaled(sign_pow(c.k, p * q)));
                        out->set_comp(a, m, b, p, q, cm);
                    }
    for (int a = 0; a < n; ++a) out->set_unit(a, c.unit(a));
    return out;
}

template <class F>
struct HomCohomology {
    std::size_t dim;
    Matrix<F> reps; // columns are representative cocycles in hom^n(S,T)
};

template <class F>
HomCohomology<F> hom_cohomology(const DgCat<F>& cat, const Obj& s, const Obj& t, int n) {
    cat.check_tuple(s);
    cat.check_tuple(t);
    Cohomology<F> h(cat.tdiff(s, t, n - 1), cat.tdiff(s, t, n));
    return {h.dim(), h.reps()};
}

} // namespace twistlab
