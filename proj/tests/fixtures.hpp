#pragma once

#include <memory>
#include <string>

#include "support.hpp"
#include "twistlab/dgcat.hpp"

namespace tsupport {

using twistlab::DgCat;
using twistlab::Matrix;

// the base field as a one-object dg-category, concentrated in degree 0
template <class F>
std::shared_ptr<const DgCat<F>> field_cat(F k, const std::string& nm = "k") {
    auto c = std::make_shared<DgCat<F>>(k);
    int a = c->add_object(nm);
    c->set_dim(a, a, 0, 1);
    c->set_comp(a, a, a, 0, 0, mat(k, {{1}}));
    c->set_unit(a, mat(k, {{1}}));
    c->nonpositive = true;
    return c;
}

// endomorphism dg-algebra of the two-term complex [k ->1 k]:
// degree -1 basis s, degree 0 basis e0,e1, degree 1 basis t;
// ds = e0+e1, de0 = t, de1 = -t; st = e0, ts = e1, e0 s = s = s e1,
// t e0 = t = e1 t, all other products of non-units vanish; 1 = e0+e1.
template <class F>
std::shared_ptr<const DgCat<F>> e_cat(F k) {
    auto c = std::make_shared<DgCat<F>>(k);
    int a = c->add_object("V");
    c->set_dim(a, a, -1, 1);
    c->set_dim(a, a, 0, 2);
    c->set_dim(a, a, 1, 1);
    c->set_diff(a, a, -1, mat(k, {{1}, {1}}));
    c->set_diff(a, a, 0, mat(k, {{1, -1}}));
    c->set_comp(a, a, a, 0, 0, mat(k, {{1, 0, 0, 0}, {0, 0, 0, 1}}));
    c->set_comp(a, a, a, 1, -1, mat(k, {{1}, {0}}));  // s after t
    c->set_comp(a, a, a, -1, 1, mat(k, {{0}, {1}}));  // t after s
    c->set_comp(a, a, a, -1, 0, mat(k, {{1, 0}}));    // e_i after s
    c->set_comp(a, a, a, 0, -1, mat(k, {{0, 1}}));    // s after e_i
    c->set_comp(a, a, a, 0, 1, mat(k, {{1, 0}}));     // t after e_i
    c->set_comp(a, a, a, 1, 0, mat(k, {{0, 1}}));     // e_i after t
    c->set_unit(a, mat(k, {{1}, {1}}));
    return c;
}

// left truncation of e_cat, built by hand: degree -1 basis s, degree 0
// basis u = e0+e1 with ds = u. Contractible, and every sign mistake in the
// twisted-complex formulas shows up against it.
template <class F>
std::shared_ptr<const DgCat<F>> c_cat(F k) {
    auto c = std::make_shared<DgCat<F>>(k);
    int a = c->add_object("V");
    c->set_dim(a, a, -1, 1);
    c->set_dim(a, a, 0, 1);
    c->set_diff(a, a, -1, mat(k, {{1}}));
    c->set_comp(a, a, a, 0, 0, mat(k, {{1}}));
    c->set_comp(a, a, a, -1, 0, mat(k, {{1}}));
    c->set_comp(a, a, a, 0, -1, mat(k, {{1}}));
    c->set_unit(a, mat(k, {{1}}));
    c->nonpositive = true;
    return c;
}

// one object, hom^0 = {1, z}, hom^{-1} = {w} with dw = z and all products
// of non-unit elements zero; H^0 = k, H^{-1} = 0, so the unit inclusion of
// the field is quasi-fully-faithful with nontrivial correction terms.
template <class F>
std::shared_ptr<const DgCat<F>> b_cat(F k) {
    auto c = std::make_shared<DgCat<F>>(k);
    int a = c->add_object("B");
    c->set_dim(a, a, 0, 2);
    c->set_dim(a, a, -1, 1);
    c->set_diff(a, a, -1, mat(k, {{0}, {1}}));
    c->set_comp(a, a, a, 0, 0, mat(k, {{1, 0, 0, 0}, {0, 1, 1, 0}}));
    c->set_comp(a, a, a, -1, 0, mat(k, {{1, 0}}));
    c->set_comp(a, a, a, 0, -1, mat(k, {{1, 0}}));
    c->set_unit(a, mat(k, {{1}, {0}}));
    c->nonpositive = true;
    return c;
}

// one object with hom in degrees 0 and 1, zero differential: H^1 = k, used
// to watch truncation kill positive cohomology
template <class F>
std::shared_ptr<const DgCat<F>> pos_cat(F k) {
    auto c = std::make_shared<DgCat<F>>(k);
    int a = c->add_object("D");
    c->set_dim(a, a, 0, 1);
    c->set_dim(a, a, 1, 1);
    c->set_comp(a, a, a, 0, 0, mat(k, {{1}}));
    c->set_comp(a, a, a, 0, 1, mat(k, {{1}}));
    c->set_comp(a, a, a, 1, 0, mat(k, {{1}}));
    c->set_unit(a, mat(k, {{1}}));
    return c;
}

} // namespace tsupport
