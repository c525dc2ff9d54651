// Batch front end: reads presentation / complex / morphism files, runs one
// operation, prints a human summary plus a machine report (cert-v1) with the
// same content, optionally writes constructed objects back to disk.
//
// Exit codes: 0 all checks passed / construction succeeded, 1 a mathematical
// check failed, 2 input or schema error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twistlab/homotopy.hpp"
#include "twistlab/io.hpp"
#include "twistlab/tstruct.hpp"

using namespace twistlab;
namespace io = twistlab::io;

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::optional<int> n;
    std::optional<int> k;
    std::optional<int> degree;
    int depth_cap = 4;
    std::string dir = "leq";
    std::string direction = "inverse";
    std::string field;
    std::string out;
};

std::string sibling(const std::string& path, const std::string& ref) {
    if (!ref.empty() && ref.front() == '/') return ref;
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? ref : path.substr(0, slash + 1) + ref;
}

// field tag for a run: the --field flag when given, else the first input's
// header; every input header must agree with it
std::string pick_field_tag(const Options& o) {
    std::string tag = o.field;
    for (const std::string& p : o.inputs) {
        std::string got = io::field_tag_of(io::read_file(p));
        if (tag.empty()) tag = got;
        require_shape(got == tag, p + ": field " + got + " does not match " + tag);
    }
    require_shape(!tag.empty(), "no input files and no --field");
    return tag;
}

int emit(const io::json& report) {
    std::cout << report["title"].get<std::string>() << ": "
              << report["verdict"].get<std::string>() << "\n";
    for (const io::json& f : report["facts"])
        std::cout << "  " << f["name"].get<std::string>() << " = " << f["value"].dump()
                  << "\n";
    for (const io::json& e : report["equations"]) {
        std::cout << "  [" << (e["zero"].get<bool>() ? "ok" : "FAIL") << "] "
                  << e["name"].get<std::string>() << "\n";
        if (!e["zero"].get<bool>() && e.contains("residual"))
            std::cout << "        residual " << e["residual"].dump() << "\n";
    }
    std::cout << "--- machine report ---\n" << io::dump_canonical(report);
    return report["verdict"] == "pass" ? 0 : 1;
}

// ---- loading --------------------------------------------------------------------

template <class F>
ProjCategory<F> pc_from_algebra_json(const F& k, const io::json& aj) {
    auto alg = io::algebra_from_json(k, aj);
    std::vector<std::vector<std::size_t>> gens;
    for (std::size_t i = 0; i < alg->idempotents.size(); ++i) gens.push_back({i});
    return proj_category(alg, gens);
}

// resolve a tw file's dgcat reference: either a dgcat-v1 presentation or an
// alg-v1 file standing for its category of projectives
template <class F>
std::shared_ptr<const DgCat<F>> resolve_cat(const F& k, const std::string& tw_path,
                                            const io::json& tw_json) {
    require_shape(tw_json.contains("dgcat") && tw_json["dgcat"].is_string(),
                  tw_path + ": missing dgcat reference");
    std::string ref = sibling(tw_path, tw_json["dgcat"].get<std::string>());
    io::json cj = io::read_file(ref);
    require_shape(cj.contains("schema") && cj["schema"].is_string(),
                  ref + ": missing schema header");
    if (cj["schema"] == "alg-v1") return pc_from_algebra_json(k, cj).cat;
    return io::dgcat_from_json(k, cj);
}

template <class F>
Tw<F> load_complex(const F& k, const std::string& path) {
    io::json j = io::read_file(path);
    return io::tw_from_json(resolve_cat(k, path, j), j);
}

template <class F>
TwMor<F> load_morphism(const F& k, const std::string& path) {
    io::json j = io::read_file(path);
    return io::tw_mor_from_json(resolve_cat(k, path, j), j);
}

inline std::string dgcat_ref_of(const std::string& path) {
    io::json j = io::read_file(path);
    return j.value("dgcat", "");
}

// file complexes parse over their own category instance; put them over the
// (value-equal) category of the algebra's projectives so tstruct ops apply
template <class F>
Tw<F> rebase_onto(const ProjCategory<F>& pc, const Tw<F>& t) {
    require_shape(*pc.cat == t.cat(),
                  "complex does not live over the algebra's projectives");
    std::vector<Obj> comps;
    for (int i = t.lo(); i <= t.hi(); ++i) comps.push_back(t.obj(i));
    Tw<F> r(pc.cat, t.lo(), t.hi(), std::move(comps), t.flavor());
    for (const auto& [key, v] : t.twists()) r.set_twist(key.first, key.second, v);
    return r;
}

// ---- verbs ----------------------------------------------------------------------

template <class F>
void report_violations(io::CertReport<F>& rep, const std::string& prefix,
                       const ValidationReport& v) {
    if (v.passed()) {
        rep.equation(prefix + ": all axioms hold", true);
        return;
    }
    for (const Violation& x : v.violations) {
        rep.equation(prefix + ": " + x.axiom + " at " + x.where, false);
        rep.fact(prefix + ": residual at " + x.where, x.residual);
    }
}

template <class F>
int run_validate(const F& k, const Options& o) {
    io::CertReport<F> rep(k, "validate");
    for (const std::string& path : o.inputs) {
        io::json j = io::read_file(path);
        require_shape(j.contains("schema") && j["schema"].is_string(),
                      path + ": missing schema header");
        std::string schema = j["schema"].get<std::string>();
        io::require_field(j, io::field_tag(k));
        if (schema == "dgcat-v1") {
            auto c = io::dgcat_from_json(k, j);
            rep.fact(path + ": objects", c->nobj());
            report_violations(rep, path, c->validate());
        } else if (schema == "alg-v1") {
            auto a = io::algebra_from_json(k, j);
            rep.fact(path + ": dimension", a->dim);
            report_violations(rep, path, a->validate());
        } else if (schema == "mod-v1") {
            require_shape(j.contains("algebra") && j["algebra"].is_string(),
                          path + ": missing algebra reference");
            io::json aj = io::read_file(sibling(path, j["algebra"].get<std::string>()));
            auto pc = pc_from_algebra_json(k, aj);
            FpModule<F> m = io::module_from_json(pc.alg, j);
            rep.fact(path + ": dimension vector", dimension_vector(m));
            report_violations(rep, path, m.validate());
            if (m.presentation)
                report_violations(rep, path + " (presentation)", check_presentation(pc, m));
        } else if (schema == "tw-v1" && j.value("kind", "complex") == "complex") {
            Tw<F> x = io::tw_from_json(resolve_cat(k, path, j), j);
            rep.fact(path + ": window", io::json::array({x.lo(), x.hi()}));
            report_violations(rep, path, x.validate());
        } else if (schema == "tw-v1") {
            TwMor<F> f = io::tw_mor_from_json(resolve_cat(k, path, j), j);
            rep.fact(path + ": degree", f.degree());
            rep.equation(path + ": morphism is closed", tw_is_closed(f));
        } else {
            throw shape_error(path + ": unknown schema " + schema);
        }
    }
    return emit(rep.finish());
}

template <class F>
int run_cone(const F& k, const Options& o) {
    TwMor<F> f = load_morphism(k, o.inputs[0]);
    io::CertReport<F> rep(k, "cone");
    rep.equation("input is closed of degree 0", f.degree() == 0 && tw_is_closed(f));
    if (!rep.passed()) return emit(rep.finish());
    Pretriangle<F> pt = tw_cone(f);
    rep.fact("cone window", io::json::array({pt.cone.lo(), pt.cone.hi()}));
    report_violations(rep, "cone", pt.cone.validate());
    rep.equation("dj = 0", tw_diff(pt.j).is_zero());
    rep.equation("dp = 0", tw_diff(pt.p).is_zero());
    if (!o.out.empty())
        io::write_file(o.out, io::tw_to_json(pt.cone, dgcat_ref_of(o.inputs[0])));
    return emit(rep.finish());
}

template <class F>
int run_shift(const F& k, const Options& o) {
    require_shape(o.n.has_value(), "shift needs --n");
    Tw<F> x = load_complex(k, o.inputs[0]);
    Tw<F> y = tw_shift(x, *o.n);
    io::CertReport<F> rep(k, "shift");
    rep.fact("n", *o.n);
    rep.fact("window", io::json::array({y.lo(), y.hi()}));
    report_violations(rep, "shifted complex", y.validate());
    if (!o.out.empty()) io::write_file(o.out, io::tw_to_json(y, dgcat_ref_of(o.inputs[0])));
    return emit(rep.finish());
}

template <class F>
int run_truncate(const F& k, const Options& o) {
    require_shape(o.n.has_value(), "truncate needs --n");
    Tw<F> x = load_complex(k, o.inputs[0]);
    io::CertReport<F> rep(k, "truncate");
    Tw<F> t = tw_zero(x.cat_ptr());
    if (o.k.has_value()) {
        t = tw_trunc_window(x, *o.n, *o.k);
        rep.fact("window kept", io::json::array({*o.n, *o.k}));
    } else if (o.dir == "geq") {
        auto g = tw_trunc_geq(x, *o.n);
        t = g.t;
        rep.equation("inclusion is closed", tw_is_closed(g.incl));
    } else {
        auto l = tw_trunc_leq(x, *o.n);
        t = l.t;
        rep.equation("projection is closed", tw_is_closed(l.proj));
    }
    rep.fact("result window", io::json::array({t.lo(), t.hi()}));
    report_violations(rep, "truncation", t.validate());
    if (!o.out.empty()) io::write_file(o.out, io::tw_to_json(t, dgcat_ref_of(o.inputs[0])));
    return emit(rep.finish());
}

template <class F>
int run_weight_triangle(const F& k, const Options& o) {
    require_shape(o.n.has_value(), "weight-triangle needs --n");
    Tw<F> x = load_complex(k, o.inputs[0]);
    WeightTriangle<F> wt = weight_triangle(x, *o.n);
    io::CertReport<F> rep(k, "weight-triangle");
    rep.fact("upper window", io::json::array({wt.geq.lo(), wt.geq.hi()}));
    rep.fact("lower window", io::json::array({wt.leq.lo(), wt.leq.hi()}));
    rep.equation("glue map is closed", tw_is_closed(wt.xt));
    rep.equation("cone of the glue map rebuilds the input", wt.pt.cone == x);
    if (!o.out.empty()) {
        std::string ref = dgcat_ref_of(o.inputs[0]);
        io::write_file(o.out + ".geq.json", io::tw_to_json(wt.geq, ref));
        io::write_file(o.out + ".leq.json", io::tw_to_json(wt.leq, ref));
        io::write_file(o.out + ".glue.json", io::tw_mor_to_json(wt.xt, ref));
    }
    return emit(rep.finish());
}

template <class F>
int run_cohomology(const F& k, const Options& o) {
    require_shape(o.degree.has_value(), "cohomology needs --degree");
    Tw<F> x = load_complex(k, o.inputs[0]);
    Tw<F> y = o.inputs.size() > 1 ? load_complex(k, o.inputs[1]) : x;
    require_shape(x.same_cat(y), "complexes live over different categories");
    auto h = tw_hom_cohomology(x, y, *o.degree);
    io::CertReport<F> rep(k, "cohomology");
    rep.fact("degree", *o.degree);
    rep.fact("dim H(Hom)", h.dim);
    for (const TwMor<F>& r : h.reps)
        rep.equation("representative is closed", tw_is_closed(r));
    return emit(rep.finish());
}

template <class F>
int run_iso_check(const F& k, const Options& o) {
    TwMor<F> f = load_morphism(k, o.inputs[0]);
    io::CertReport<F> rep(k, "iso-check");
    IsoDecision<F> d = h0_iso_decide(f);
    rep.fact("iso", d.iso);
    if (!d.note.empty()) rep.fact("note", d.note);
    rep.equation("cone of the morphism is contractible", d.iso);
    if (d.certificate)
        rep.equation("certificate equations hold", check_iso_certificate(*d.certificate));
    return emit(rep.finish());
}

template <class F>
int run_t_truncate(const F& k, const Options& o) {
    require_shape(o.inputs.size() >= 2, "t-truncate needs an algebra and a complex");
    require_shape(o.n.has_value(), "t-truncate needs --n");
    io::json aj = io::read_file(o.inputs[0]);
    ProjCategory<F> pc = pc_from_algebra_json(k, aj);
    Tw<F> x = rebase_onto(pc, load_complex(k, o.inputs[1]));

    TTriangle<F> tri = t_truncate(pc, x, *o.n, o.depth_cap);
    io::CertReport<F> rep(k, "t-truncate");
    rep.fact("n", *o.n);
    rep.fact("exact", tri.exact);
    if (tri.valid_from) rep.fact("valid from", *tri.valid_from);
    rep.fact("lower window", io::json::array({tri.lower.lo(), tri.lower.hi()}));
    rep.fact("dim H^n_t(lower)", dimension_vector(heart_cohomology(pc, tri.lower, *o.n).mod));
    rep.fact("dim H^{n+1}_t(upper)",
             dimension_vector(heart_cohomology(pc, tri.upper, *o.n + 1).mod));
    rep.equation("counit is closed", tw_is_closed(tri.counit));
    rep.equation("unit is closed", tw_is_closed(tri.unit));
    rep.equation("homotopy bounds unit after counit",
                 tw_diff(tri.htpy) == tw_compose(tri.unit, tri.counit));
    report_violations(rep, "lower", tri.lower.validate());
    report_violations(rep, "upper", tri.upper.validate());
    if (!o.out.empty()) {
        std::string ref = dgcat_ref_of(o.inputs[1]);
        io::write_file(o.out + ".lower.json", io::tw_to_json(tri.lower, ref));
        io::write_file(o.out + ".upper.json", io::tw_to_json(tri.upper, ref));
        io::write_file(o.out + ".counit.json", io::tw_mor_to_json(tri.counit, ref));
    }
    return emit(rep.finish());
}

template <class F>
int run_holim(const F& k, const Options& o) {
    Tw<F> x = load_complex(k, o.inputs[0]);
    Tower<F> t = o.direction == "direct" ? geq_truncation_tower(x) : leq_truncation_tower(x);
    MilnorResult<F> r = tower_holim(t);
    io::CertReport<F> rep(k, "holim");
    rep.fact("direction", o.direction);
    rep.fact("tower entries", t.entries.size());
    rep.fact("value window", io::json::array({r.value.lo(), r.value.hi()}));
    rep.equation("comparison map is closed", tw_is_closed(r.comparison));
    rep.equation("eventual entry is the input", r.limit == x);
    rep.equation("comparison is an H^0-isomorphism", h0_iso_decide(r.comparison).iso);
    if (!o.out.empty()) {
        std::string ref = dgcat_ref_of(o.inputs[0]);
        io::write_file(o.out + ".value.json", io::tw_to_json(r.value, ref));
        io::write_file(o.out + ".comparison.json", io::tw_mor_to_json(r.comparison, ref));
    }
    return emit(rep.finish());
}

template <class F>
int run_cert_derived_proj(const F& k, const Options& o) {
    require_shape(o.inputs.size() >= 2, "cert-derived-proj needs an algebra and a complex");
    io::json aj = io::read_file(o.inputs[0]);
    ProjCategory<F> pc = pc_from_algebra_json(k, aj);
    Tw<F> q = rebase_onto(pc, load_complex(k, o.inputs[1]));
    std::vector<Tw<F>> tests;
    for (std::size_t i = 2; i < o.inputs.size(); ++i)
        tests.push_back(rebase_onto(pc, load_complex(k, o.inputs[i])));
    if (tests.empty())
        for (std::size_t g = 0; g < pc.generators.size(); ++g)
            tests.push_back(embed_object(pc, int(g)));

    DerivedProjReport<F> r = derived_projective_cert(pc, q, tests);
    io::CertReport<F> rep(k, "cert-derived-proj");
    rep.fact("test objects", tests.size());
    rep.fact("detail", r.detail);
    rep.fact("dim H^0_t", dimension_vector(r.heart));
    rep.fact("obstruction dims", r.obstruction_dims);
    rep.equation("H^0_t is projective", r.heart_projective);
    bool obstructions_vanish = true;
    for (std::size_t d : r.obstruction_dims) obstructions_vanish = obstructions_vanish && d == 0;
    rep.equation("maps into shifted test objects vanish", obstructions_vanish);
    if (r.obstruction && !o.out.empty())
        io::write_file(o.out + ".obstruction.json",
                       io::tw_mor_to_json(*r.obstruction, dgcat_ref_of(o.inputs[1])));
    return emit(rep.finish());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact calculator for one-sided twisted complexes"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool out_opt) {
        sub->add_option("--field", o.field, "field tag (Q or Fp:<p>), checked against headers");
        if (out_opt) sub->add_option("--out", o.out, "write constructed objects here");
    };

    CLI::App* validate = app.add_subcommand("validate", "check axioms of presentation/complex/morphism files");
    validate->add_option("files", o.inputs, "input files")->required()->expected(-1);
    add_common(validate, false);

    CLI::App* cone = app.add_subcommand("cone", "mapping cone of a closed degree-0 morphism");
    cone->add_option("morphism", o.inputs, "morphism file")->required()->expected(1);
    add_common(cone, true);

    CLI::App* shift = app.add_subcommand("shift", "shift a complex by --n");
    shift->add_option("complex", o.inputs, "complex file")->required()->expected(1);
    shift->add_option("--n", o.n, "shift amount")->required();
    add_common(shift, true);

    CLI::App* trunc = app.add_subcommand("truncate", "brutal truncation");
    trunc->add_option("complex", o.inputs, "complex file")->required()->expected(1);
    trunc->add_option("--n", o.n, "degree bound")->required();
    trunc->add_option("--k", o.k, "upper bound: keep the window [n, k]");
    trunc->add_option("--dir", o.dir, "leq or geq")->check(CLI::IsMember({"leq", "geq"}));
    add_common(trunc, true);

    CLI::App* wt = app.add_subcommand("weight-triangle", "sigma_{>=n} X -> X -> sigma_{<=n-1} X");
    wt->add_option("complex", o.inputs, "complex file")->required()->expected(1);
    wt->add_option("--n", o.n, "weight cut")->required();
    add_common(wt, true);

    CLI::App* coh = app.add_subcommand("cohomology", "dim H of the hom complex between two complexes");
    coh->add_option("complexes", o.inputs, "one or two complex files")->required()->expected(1, 2);
    coh->add_option("--degree", o.degree, "cohomological degree")->required();
    add_common(coh, false);

    CLI::App* iso = app.add_subcommand("iso-check", "decide H^0-invertibility of a closed degree-0 morphism");
    iso->add_option("morphism", o.inputs, "morphism file")->required()->expected(1);
    add_common(iso, false);

    CLI::App* tt = app.add_subcommand("t-truncate", "t-structure truncation triangle at --n");
    tt->add_option("files", o.inputs, "algebra file, then complex file")->required()->expected(2);
    tt->add_option("--n", o.n, "truncation degree")->required();
    tt->add_option("--depth-cap", o.depth_cap, "resolution budget below the support")
        ->check(CLI::PositiveNumber);
    add_common(tt, true);

    CLI::App* hl = app.add_subcommand("holim", "Milnor (co)limit of the brutal truncation tower");
    hl->add_option("complex", o.inputs, "complex file")->required()->expected(1);
    hl->add_option("--direction", o.direction, "inverse or direct")
        ->check(CLI::IsMember({"inverse", "direct"}));
    add_common(hl, true);

    CLI::App* dp = app.add_subcommand("cert-derived-proj",
                                      "derived projectivity certificate against a test family");
    dp->add_option("files", o.inputs, "algebra, candidate complex, then test complexes")
        ->required()
        ->expected(-2);
    add_common(dp, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::string tag = pick_field_tag(o);
        return io::with_field(tag, [&](auto k) -> int {
            if (validate->parsed()) return run_validate(k, o);
            if (cone->parsed()) return run_cone(k, o);
            if (shift->parsed()) return run_shift(k, o);
            if (trunc->parsed()) return run_truncate(k, o);
            if (wt->parsed()) return run_weight_triangle(k, o);
            if (coh->parsed()) return run_cohomology(k, o);
            if (iso->parsed()) return run_iso_check(k, o);
            if (tt->parsed()) return run_t_truncate(k, o);
            if (hl->parsed()) return run_holim(k, o);
            if (dp->parsed()) return run_cert_derived_proj(k, o);
            return 2;
        });
    } catch (const shape_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const contract_error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
