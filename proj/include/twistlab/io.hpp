#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dgcat.hpp"
#include "errors.hpp"
#include "tstruct.hpp"
#include "twisted.hpp"

// File formats. Every file is a JSON object with a "schema" version and a
// "field" header; rationals travel as canonical "p/q" strings, prime-field
// entries as plain integers. nlohmann's default map keeps keys sorted, so
// dump() output is byte-deterministic.

namespace twistlab::io {

using json = nlohmann::json;

inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

inline json parse_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    require_shape(!j.is_discarded(), what + ": not valid JSON");
    require_shape(j.is_object(), what + ": expected a JSON object");
    return j;
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    require_shape(bool(in), "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

inline void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    require_shape(bool(out), "cannot write " + path);
    out << dump_canonical(j);
}

inline void require_schema(const json& j, const std::string& want) {
    require_shape(j.contains("schema") && j["schema"].is_string(),
                  "missing schema header");
    std::string got = j["schema"].get<std::string>();
    require_shape(got == want, "schema mismatch: expected " + want + ", got " + got);
}

// ---- fields ---------------------------------------------------------------------

template <class F>
std::string field_tag(const F& k) {
    return k.name();
}

inline void require_field(const json& j, const std::string& tag) {
    require_shape(j.contains("field") && j["field"].is_string(), "missing field header");
    std::string got = j["field"].get<std::string>();
    require_shape(got == tag, "field mismatch: file says " + got + ", expected " + tag);
}

inline std::string field_tag_of(const json& j) {
    require_shape(j.contains("field") && j["field"].is_string(), "missing field header");
    return j["field"].get<std::string>();
}

// dispatch a callable on the field named by a tag ("Q" or "Fp:<p>")
template <class Fn>
decltype(auto) with_field(const std::string& tag, Fn&& fn) {
    if (tag == "Q") return fn(Rationals{});
    if (tag.rfind("Fp:", 0) == 0) {
        std::size_t pos = 0;
        unsigned long p = 0;
        try {
            p = std::stoul(tag.substr(3), &pos);
        } catch (const std::exception&) {
            throw shape_error("bad field tag: " + tag);
        }
        require_shape(pos == tag.size() - 3 && p < (1ul << 31), "bad field tag: " + tag);
        return fn(PrimeField(std::uint32_t(p)));
    }
    throw shape_error("unknown field tag: " + tag);
}

inline json scalar_to_json(const Rationals& k, const mpq_class& v) {
    return k.to_string(v);
}
inline json scalar_to_json(const PrimeField& k, PrimeField::Elt v) {
    return std::uint32_t(v % k.p);
}
inline mpq_class scalar_from_json(const Rationals& k, const json& j) {
    require_shape(j.is_string(), "rational entries are \"p/q\" strings");
    return k.parse(j.get<std::string>());
}
inline PrimeField::Elt scalar_from_json(const PrimeField& k, const json& j) {
    require_shape(j.is_number_integer(), "prime-field entries are integers");
    return k.from_int(j.get<long>());
}

// ---- matrices -------------------------------------------------------------------

// dense: shape + row-major entry rows (exact even for 0 x n shapes)
template <class F>
json matrix_to_json(const Matrix<F>& m) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(scalar_to_json(m.field(), m.at(i, j)));
        entries.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

template <class F>
Matrix<F> matrix_from_json(const F& k, const json& j) {
    require_shape(j.is_object() && j.contains("rows") && j.contains("cols") &&
                      j.contains("entries") && j["entries"].is_array(),
                  "matrix: expected {rows, cols, entries}");
    std::size_t r = j["rows"].get<std::size_t>(), c = j["cols"].get<std::size_t>();
    const json& e = j["entries"];
    require_shape(e.size() == r, "matrix: row count mismatch");
    Matrix<F> m(k, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        require_shape(e[i].is_array() && e[i].size() == c, "matrix: column count mismatch");
        for (std::size_t l = 0; l < c; ++l) m.at(i, l) = scalar_from_json(k, e[i][l]);
    }
    return m;
}

// sparse triples [row, col, value], used for composition tensors
template <class F>
json sparse_matrix_to_json(const Matrix<F>& m) {
    json triples = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m.field().is_zero(m.at(i, j)))
                triples.push_back(json::array({i, j, scalar_to_json(m.field(), m.at(i, j))}));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"triples", std::move(triples)}};
}

template <class F>
Matrix<F> sparse_matrix_from_json(const F& k, const json& j) {
    require_shape(j.is_object() && j.contains("rows") && j.contains("cols") &&
                      j.contains("triples") && j["triples"].is_array(),
                  "sparse matrix: expected {rows, cols, triples}");
    Matrix<F> m(k, j["rows"].get<std::size_t>(), j["cols"].get<std::size_t>());
    for (const json& t : j["triples"]) {
        require_shape(t.is_array() && t.size() == 3, "sparse matrix: triples are [r,c,v]");
        std::size_t r = t[0].get<std::size_t>(), c = t[1].get<std::size_t>();
        require_shape(r < m.rows() && c < m.cols(), "sparse matrix: index out of range");
        m.at(r, c) = scalar_from_json(k, t[2]);
    }
    return m;
}

// ---- dgcat-v1 -------------------------------------------------------------------

template <class F>
json dgcat_to_json(const DgCat<F>& c) {
    json j;
    j["schema"] = "dgcat-v1";
    j["field"] = field_tag(c.k);
    j["nonpositive"] = c.nonpositive;
    if (c.zero_obj) j["zero_object"] = *c.zero_obj;
    j["objects"] = c.object_names();

    json homs = json::array(), diffs = json::array();
    for (int a = 0; a < int(c.nobj()); ++a)
        for (int b = 0; b < int(c.nobj()); ++b)
            for (int d : c.degrees(a, b)) {
                homs.push_back(json{{"source", a}, {"target", b}, {"degree", d},
                                    {"dim", c.dim(a, b, d)}});
                Matrix<F> m = c.diff(a, b, d);
                if (!m.is_zero())
                    diffs.push_back(json{{"source", a}, {"target", b}, {"degree", d},
                                         {"matrix", matrix_to_json(m)}});
            }
    j["homs"] = std::move(homs);
    j["differentials"] = std::move(diffs);

    json comps = json::array();
    for (int a = 0; a < int(c.nobj()); ++a)
        for (int m = 0; m < int(c.nobj()); ++m)
            for (int b = 0; b < int(c.nobj()); ++b)
                for (int p : c.degrees(a, m))
                    for (int q : c.degrees(m, b)) {
                        Matrix<F> t = c.comp(a, m, b, p, q);
                        if (t.is_zero()) continue;
                        comps.push_back(json{{"source", a}, {"middle", m}, {"target", b},
                                             {"p", p}, {"q", q},
                                             {"tensor", sparse_matrix_to_json(t)}});
                    }
    j["compositions"] = std::move(comps);

    json units = json::array();
    for (int a = 0; a < int(c.nobj()); ++a)
        if (c.dim(a, a, 0) > 0)
            units.push_back(json{{"object", a}, {"coords", matrix_to_json(c.unit(a))}});
    j["units"] = std::move(units);
    return j;
}

template <class F>
std::shared_ptr<const DgCat<F>> dgcat_from_json(const F& k, const json& j) {
    require_schema(j, "dgcat-v1");
    require_field(j, field_tag(k));
    auto c = std::make_shared<DgCat<F>>(k);
    require_shape(j.contains("objects") && j["objects"].is_array(), "dgcat: missing objects");
    for (const json& name : j["objects"]) c->add_object(name.get<std::string>());
    c->nonpositive = j.value("nonpositive", false);
    if (j.contains("zero_object")) c->zero_obj = j["zero_object"].get<int>();

    auto obj_id = [&](const json& entry, const char* key) {
        int a = entry.at(key).get<int>();
        require_shape(a >= 0 && std::size_t(a) < c->nobj(), "dgcat: object id out of range");
        return a;
    };
    for (const json& h : j.value("homs", json::array()))
        c->set_dim(obj_id(h, "source"), obj_id(h, "target"), h.at("degree").get<int>(),
                   h.at("dim").get<std::size_t>());
    for (const json& e : j.value("differentials", json::array())) {
        int a = obj_id(e, "source"), b = obj_id(e, "target"), d = e.at("degree").get<int>();
        Matrix<F> m = matrix_from_json(k, e.at("matrix"));
        require_shape(m.rows() == c->dim(a, b, d + 1) && m.cols() == c->dim(a, b, d),
                      "dgcat: differential shape mismatch");
        c->set_diff(a, b, d, std::move(m));
    }
    for (const json& e : j.value("compositions", json::array())) {
        int a = obj_id(e, "source"), m = obj_id(e, "middle"), b = obj_id(e, "target");
        int p = e.at("p").get<int>(), q = e.at("q").get<int>();
        Matrix<F> t = sparse_matrix_from_json(k, e.at("tensor"));
        require_shape(t.rows() == c->dim(a, b, p + q) &&
                          t.cols() == c->dim(m, b, q) * c->dim(a, m, p),
                      "dgcat: composition tensor shape mismatch");
        c->set_comp(a, m, b, p, q, std::move(t));
    }
    for (const json& e : j.value("units", json::array())) {
        int a = obj_id(e, "object");
        Matrix<F> u = matrix_from_json(k, e.at("coords"));
        require_shape(u.rows() == c->dim(a, a, 0) && u.cols() == 1,
                      "dgcat: unit shape mismatch");
        c->set_unit(a, std::move(u));
    }
    return c;
}

// ---- tw-v1 ----------------------------------------------------------------------

inline std::string flavor_tag(TwFlavor f) {
    switch (f) {
        case TwFlavor::minus: return "minus";
        case TwFlavor::plus: return "plus";
        default: return "unbounded";
    }
}
inline TwFlavor flavor_from_tag(const std::string& s) {
    if (s == "minus") return TwFlavor::minus;
    if (s == "plus") return TwFlavor::plus;
    if (s == "unbounded") return TwFlavor::unbounded;
    throw shape_error("unknown flavor: " + s);
}

// the window/components/twists block, shared by complex files and the
// endpoint blocks of morphism files
template <class F>
json tw_body_to_json(const Tw<F>& x) {
    json j;
    j["window"] = json::array({x.lo(), x.hi()});
    j["flavor"] = flavor_tag(x.flavor());
    json comps = json::array();
    for (int i = x.lo(); i <= x.hi(); ++i) comps.push_back(x.obj(i));
    j["components"] = std::move(comps);
    json twists = json::array();
    for (const auto& [key, v] : x.twists())
        twists.push_back(json{{"i", key.first}, {"j", key.second},
                              {"coords", matrix_to_json(v)}});
    j["twists"] = std::move(twists);
    return j;
}

inline Obj obj_from_json(const json& j) {
    if (j.is_number_integer()) return Obj{j.get<int>()};  // bare id = 1-tuple
    require_shape(j.is_array(), "component objects are id arrays");
    return j.get<Obj>();
}

template <class F>
Tw<F> tw_body_from_json(std::shared_ptr<const DgCat<F>> cat, const json& j) {
    require_shape(j.contains("window") && j["window"].is_array() && j["window"].size() == 2,
                  "tw: window is [lo, hi]");
    int lo = j["window"][0].get<int>(), hi = j["window"][1].get<int>();
    std::vector<Obj> comps;
    for (const json& e : j.value("components", json::array()))
        comps.push_back(obj_from_json(e));
    require_shape(hi < lo || comps.size() == std::size_t(hi - lo + 1),
                  "tw: component count does not match window");
    Tw<F> x(std::move(cat), lo, hi, std::move(comps),
            flavor_from_tag(j.value("flavor", "unbounded")));
    for (const json& e : j.value("twists", json::array()))
        x.set_twist(e.at("i").get<int>(), e.at("j").get<int>(),
                    matrix_from_json(x.cat().k, e.at("coords")));
    return x;
}

template <class F>
json tw_to_json(const Tw<F>& x, const std::string& dgcat_ref) {
    json j = tw_body_to_json(x);
    j["schema"] = "tw-v1";
    j["kind"] = "complex";
    j["field"] = field_tag(x.cat().k);
    j["dgcat"] = dgcat_ref;
    return j;
}

template <class F>
Tw<F> tw_from_json(std::shared_ptr<const DgCat<F>> cat, const json& j) {
    require_schema(j, "tw-v1");
    require_field(j, field_tag(cat->k));
    require_shape(j.value("kind", "complex") == "complex", "expected a complex file");
    return tw_body_from_json(std::move(cat), j);
}

template <class F>
json tw_mor_to_json(const TwMor<F>& f, const std::string& dgcat_ref) {
    json j;
    j["schema"] = "tw-v1";
    j["kind"] = "morphism";
    j["field"] = field_tag(f.cat().k);
    j["dgcat"] = dgcat_ref;
    j["degree"] = f.degree();
    j["src"] = tw_body_to_json(f.src());
    j["tgt"] = tw_body_to_json(f.tgt());
    json comps = json::array();
    for (const auto& [key, v] : f.components())
        comps.push_back(json{{"i", key.first}, {"j", key.second},
                             {"coords", matrix_to_json(v)}});
    j["components"] = std::move(comps);
    return j;
}

template <class F>
TwMor<F> tw_mor_from_json(std::shared_ptr<const DgCat<F>> cat, const json& j) {
    require_schema(j, "tw-v1");
    require_field(j, field_tag(cat->k));
    require_shape(j.value("kind", "") == "morphism", "expected a morphism file");
    Tw<F> src = tw_body_from_json(cat, j.at("src"));
    Tw<F> tgt = tw_body_from_json(cat, j.at("tgt"));
    TwMor<F> f(std::move(src), std::move(tgt), j.at("degree").get<int>());
    for (const json& e : j.value("components", json::array()))
        f.set_comp(e.at("i").get<int>(), e.at("j").get<int>(),
                   matrix_from_json(cat->k, e.at("coords")));
    return f;
}

// ---- alg-v1 / mod-v1 ------------------------------------------------------------

template <class F>
json algebra_to_json(const AlgebraPresentation<F>& a) {
    json j;
    j["schema"] = "alg-v1";
    j["field"] = field_tag(a.k);
    j["dim"] = a.dim;
    json lm = json::array();
    for (const auto& m : a.lmult) lm.push_back(matrix_to_json(m));
    j["lmult"] = std::move(lm);
    j["unit"] = matrix_to_json(a.unit);
    json idem = json::array();
    for (const auto& e : a.idempotents) idem.push_back(matrix_to_json(e));
    j["idempotents"] = std::move(idem);
    j["radical"] = matrix_to_json(a.radical);
    return j;
}

template <class F>
std::shared_ptr<const AlgebraPresentation<F>> algebra_from_json(const F& k, const json& j) {
    require_schema(j, "alg-v1");
    require_field(j, field_tag(k));
    std::size_t dim = j.at("dim").get<std::size_t>();
    AlgebraPresentation<F> a{k, dim, {}, Matrix<F>(k, dim, 1), {}, Matrix<F>(k, dim, 0)};
    require_shape(j.contains("lmult") && j["lmult"].is_array() && j["lmult"].size() == dim,
                  "alg: one lmult matrix per basis element");
    for (const json& e : j["lmult"]) {
        Matrix<F> m = matrix_from_json(k, e);
        require_shape(m.rows() == dim && m.cols() == dim, "alg: lmult shape mismatch");
        a.lmult.push_back(std::move(m));
    }
    a.unit = matrix_from_json(k, j.at("unit"));
    require_shape(a.unit.rows() == dim && a.unit.cols() == 1, "alg: unit shape mismatch");
    for (const json& e : j.value("idempotents", json::array())) {
        Matrix<F> v = matrix_from_json(k, e);
        require_shape(v.rows() == dim && v.cols() == 1, "alg: idempotent shape mismatch");
        a.idempotents.push_back(std::move(v));
    }
    a.radical = matrix_from_json(k, j.at("radical"));
    require_shape(a.radical.rows() == dim, "alg: radical shape mismatch");
    return std::make_shared<const AlgebraPresentation<F>>(std::move(a));
}

template <class F>
json module_to_json(const FpModule<F>& m, const std::string& alg_ref) {
    json j;
    j["schema"] = "mod-v1";
    j["field"] = field_tag(m.alg->k);
    j["algebra"] = alg_ref;
    j["dim"] = m.dim;
    json act = json::array();
    for (const auto& a : m.action) act.push_back(matrix_to_json(a));
    j["action"] = std::move(act);
    if (m.presentation) {
        j["presentation"] = json{{"p1", m.presentation->p1}, {"p0", m.presentation->p0},
                                 {"map", matrix_to_json(m.presentation->map)}};
    }
    return j;
}

template <class F>
FpModule<F> module_from_json(std::shared_ptr<const AlgebraPresentation<F>> alg,
                             const json& j) {
    require_schema(j, "mod-v1");
    require_field(j, field_tag(alg->k));
    FpModule<F> m{alg, j.at("dim").get<std::size_t>(), {}, {}};
    require_shape(j.contains("action") && j["action"].is_array() &&
                      j["action"].size() == alg->dim,
                  "mod: one action matrix per algebra basis element");
    for (const json& e : j["action"]) {
        Matrix<F> a = matrix_from_json(alg->k, e);
        require_shape(a.rows() == m.dim && a.cols() == m.dim, "mod: action shape mismatch");
        m.action.push_back(std::move(a));
    }
    if (j.contains("presentation")) {
        const json& p = j["presentation"];
        m.presentation = ModulePresentation<F>{obj_from_json(p.at("p1")),
                                               obj_from_json(p.at("p0")),
                                               matrix_from_json(alg->k, p.at("map"))};
    }
    return m;
}

// ---- cert-v1 --------------------------------------------------------------------

// Accumulates checked equations (with residuals), witness matrices and named
// facts; verdict is "pass" exactly when every residual is zero.
template <class F>
class CertReport {
public:
    CertReport(const F& k, std::string title) : k_(k) {
        j_["schema"] = "cert-v1";
        j_["field"] = field_tag(k);
        j_["title"] = std::move(title);
        j_["equations"] = json::array();
        j_["witnesses"] = json::array();
        j_["facts"] = json::array();
    }

    void equation(const std::string& name, const Matrix<F>& residual) {
        bool zero = residual.is_zero();
        all_zero_ = all_zero_ && zero;
        j_["equations"].push_back(
            json{{"name", name}, {"residual", matrix_to_json(residual)}, {"zero", zero}});
    }
    void equation(const std::string& name, bool holds) {
        all_zero_ = all_zero_ && holds;
        j_["equations"].push_back(json{{"name", name}, {"zero", holds}});
    }
    void witness(const std::string& name, const Matrix<F>& m) {
        j_["witnesses"].push_back(json{{"name", name}, {"matrix", matrix_to_json(m)}});
    }
    template <class V>
    void fact(const std::string& name, const V& value) {
        j_["facts"].push_back(json{{"name", name}, {"value", value}});
    }

    bool passed() const { return all_zero_; }
    json finish() const {
        json j = j_;
        j["verdict"] = all_zero_ ? "pass" : "fail";
        return j;
    }

private:
    F k_;
    json j_;
    bool all_zero_ = true;
};

} // namespace twistlab::io
