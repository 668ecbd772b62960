#include "vweb/json_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "vweb/error.hpp"

namespace vweb {

namespace {

const Json& need(const Json& j, const char* key, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string(what) + ": missing key '" + key + "'");
    return *it;
}

std::string need_string(const Json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + ": expected a string");
    return j.get<std::string>();
}

std::uint64_t need_uint(const Json& j, const char* what) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        throw ParseError(std::string(what) + ": expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

bool need_bool(const Json& j, const char* what) {
    if (!j.is_boolean()) throw ParseError(std::string(what) + ": expected a boolean");
    return j.get<bool>();
}

const Json& need_array(const Json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
    return j;
}

Json index_tuple_to_json(const IndexTuple& idx) {
    Json out = Json::array();
    for (auto i : idx) out.push_back(i);
    return out;
}

std::vector<std::uint32_t> uint_vector(const Json& j, const char* what) {
    std::vector<std::uint32_t> out;
    out.reserve(need_array(j, what).size());
    for (const auto& v : j) out.push_back(static_cast<std::uint32_t>(need_uint(v, what)));
    return out;
}

} // namespace

Json poly_to_json(const Poly& p) {
    Json out = Json::array();
    for (const auto& [exps, coeff] : p.terms()) {
        Json term;
        term["num"] = int_str(coeff.get_num());
        term["den"] = int_str(coeff.get_den());
        term["exps"] = index_tuple_to_json(exps);
        out.push_back(std::move(term));
    }
    return out;
}

Poly poly_from_json(const Json& j, const ChartPtr& chart) {
    need_array(j, "polynomial");
    Poly p(chart);
    for (const auto& t : j) {
        const std::string num = need_string(need(t, "num", "polynomial term"), "numerator");
        const std::string den = need_string(need(t, "den", "polynomial term"), "denominator");
        const Rat coeff = rat_parse(num + "/" + den);
        const auto exps = uint_vector(need(t, "exps", "polynomial term"), "exponent vector");
        if (exps.size() != chart->dim())
            throw ParseError("polynomial term: exponent vector length " +
                             std::to_string(exps.size()) + " does not match chart dimension " +
                             std::to_string(chart->dim()));
        p.add_term(exps, coeff);
    }
    return p;
}

Json form_to_json(const DForm& f) {
    Json out;
    out["degree"] = f.degree();
    Json terms = Json::array();
    for (const auto& [idx, coeff] : f.terms()) {
        Json term;
        term["covectors"] = index_tuple_to_json(idx);
        term["poly"] = poly_to_json(coeff);
        terms.push_back(std::move(term));
    }
    out["terms"] = std::move(terms);
    return out;
}

DForm form_from_json(const Json& j, const ChartPtr& chart) {
    const auto degree = static_cast<unsigned>(need_uint(need(j, "degree", "form"), "form degree"));
    DForm f(chart, degree);
    for (const auto& t : need_array(need(j, "terms", "form"), "form terms")) {
        const auto idx = uint_vector(need(t, "covectors", "form term"), "covector tuple");
        if (idx.size() != degree)
            throw ParseError("form term: covector tuple length does not match the form degree");
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            if (idx[i] >= idx[i + 1])
                throw ParseError("form term: covector indices are not strictly increasing");
        for (auto i : idx)
            if (i >= chart->dim())
                throw ParseError("form term: covector index " + std::to_string(i) +
                                 " exceeds the chart dimension");
        f.add_term(idx, poly_from_json(need(t, "poly", "form term"), chart));
    }
    return f;
}

Json manifest_to_json(const GroundTruth& g) {
    Json out;
    out["generator"] = g.generator;
    out["seed"] = g.seed;
    if (g.locus_all) {
        out["locus"] = "all";
    } else {
        Json pts = Json::array();
        for (const auto& p : g.locus) pts.push_back(p.str());
        out["locus"] = std::move(pts);
    }
    out["residual"] = g.residual;
    out["adapted_chart"] = g.adapted_chart;
    out["absorbed"] = g.absorbed;
    out["param_map"] = Json::array({rat_str(g.param_map.a), rat_str(g.param_map.b),
                                    rat_str(g.param_map.c), rat_str(g.param_map.d)});
    if (g.first_integrals) {
        Json groups = Json::array();
        for (const auto& group : *g.first_integrals) {
            Json polys = Json::array();
            for (const auto& p : group) polys.push_back(poly_to_json(p));
            groups.push_back(std::move(polys));
        }
        out["first_integrals"] = std::move(groups);
    } else {
        out["first_integrals"] = nullptr;
    }
    if (g.adapted_chart_map) {
        Json polys = Json::array();
        for (const auto& p : *g.adapted_chart_map) polys.push_back(poly_to_json(p));
        out["adapted_chart_map"] = std::move(polys);
    } else {
        out["adapted_chart_map"] = nullptr;
    }
    return out;
}

GroundTruth manifest_from_json(const Json& j, const ChartPtr& chart) {
    GroundTruth g;
    g.generator = need_string(need(j, "generator", "manifest"), "generator");
    g.seed = need_uint(need(j, "seed", "manifest"), "seed");
    const Json& locus = need(j, "locus", "manifest");
    if (locus.is_string()) {
        if (locus.get<std::string>() != "all")
            throw ParseError("manifest: locus must be \"all\" or an array of points");
        g.locus_all = true;
    } else {
        for (const auto& p : need_array(locus, "manifest locus"))
            g.locus.push_back(ProjPoint::parse(need_string(p, "locus point")));
    }
    g.residual = need_bool(need(j, "residual", "manifest"), "residual");
    g.adapted_chart = need_bool(need(j, "adapted_chart", "manifest"), "adapted_chart");
    g.absorbed = need_bool(need(j, "absorbed", "manifest"), "absorbed");
    const Json& pm = need_array(need(j, "param_map", "manifest"), "param_map");
    if (pm.size() != 4) throw ParseError("manifest: param_map needs four entries");
    g.param_map =
        Moebius::of(rat_parse(need_string(pm[0], "param_map entry")),
                    rat_parse(need_string(pm[1], "param_map entry")),
                    rat_parse(need_string(pm[2], "param_map entry")),
                    rat_parse(need_string(pm[3], "param_map entry")));
    const Json& fi = need(j, "first_integrals", "manifest");
    if (!fi.is_null()) {
        std::vector<std::vector<Poly>> groups;
        for (const auto& group : need_array(fi, "first_integrals")) {
            std::vector<Poly> polys;
            for (const auto& p : need_array(group, "first_integrals group"))
                polys.push_back(poly_from_json(p, chart));
            groups.push_back(std::move(polys));
        }
        g.first_integrals = std::move(groups);
    }
    const Json& acm = need(j, "adapted_chart_map", "manifest");
    if (!acm.is_null()) {
        std::vector<Poly> polys;
        for (const auto& p : need_array(acm, "adapted_chart_map"))
            polys.push_back(poly_from_json(p, chart));
        g.adapted_chart_map = std::move(polys);
    }
    return g;
}

Json curve_to_json(const VeroneseCurve& c) {
    Json out;
    out["k"] = c.k();
    out["n"] = c.n();
    Json vars = Json::array();
    for (const auto& v : c.chart()->vars) vars.push_back(v);
    out["variables"] = std::move(vars);
    Json pencils = Json::array();
    for (const auto& pencil : c.pencils()) {
        Json coeffs = Json::array();
        for (const auto& form : pencil.coeffs()) coeffs.push_back(form_to_json(form));
        pencils.push_back(std::move(coeffs));
    }
    out["pencils"] = std::move(pencils);
    Json bp = Json::array();
    for (const auto& q : c.basepoint()) bp.push_back(rat_str(q));
    out["basepoint"] = std::move(bp);
    out["manifest"] = c.manifest() ? manifest_to_json(*c.manifest()) : Json(nullptr);
    return out;
}

VeroneseCurve curve_from_json(const Json& j) {
    const auto k = static_cast<unsigned>(need_uint(need(j, "k", "curve"), "k"));
    const auto n = static_cast<unsigned>(need_uint(need(j, "n", "curve"), "n"));
    std::vector<std::string> vars;
    for (const auto& v : need_array(need(j, "variables", "curve"), "variables"))
        vars.push_back(need_string(v, "variable name"));
    const ChartPtr chart = make_chart("curve", std::move(vars));
    std::vector<FormPencil> pencils;
    for (const auto& pj : need_array(need(j, "pencils", "curve"), "pencils")) {
        std::vector<DForm> coeffs;
        for (const auto& fj : need_array(pj, "pencil")) {
            DForm f = form_from_json(fj, chart);
            if (f.degree() != 1)
                throw ParseError("curve pencil: coefficient form degree is not 1");
            coeffs.push_back(std::move(f));
        }
        pencils.emplace_back(chart, 1, std::move(coeffs));
    }
    std::vector<Rat> basepoint;
    for (const auto& q : need_array(need(j, "basepoint", "curve"), "basepoint"))
        basepoint.push_back(rat_parse(need_string(q, "basepoint entry")));
    std::optional<GroundTruth> manifest;
    if (const auto it = j.find("manifest"); it != j.end() && !it->is_null())
        manifest = manifest_from_json(*it, chart);
    return VeroneseCurve(k, n, chart, std::move(pencils), std::move(basepoint),
                         std::move(manifest));
}

Json report_to_json(const IntegrabilityReport& r, bool with_volatile) {
    Json out;
    out["verdict"] = verdict_str(r.verdict);
    out["mode"] = r.mode;
    out["basis"] = r.basis;
    out["theorem_based"] = r.theorem_based;
    out["pencil_param_degree"] = r.pencil_param_degree;
    out["max_coeff_terms"] = r.max_coeff_terms;
    Json points = Json::array();
    for (const auto& pc : r.points) {
        Json e;
        e["point"] = pc.point.str();
        e["ok"] = pc.ok;
        points.push_back(std::move(e));
    }
    out["points"] = std::move(points);
    Json witnesses = Json::array();
    for (const auto& w : r.witnesses) {
        Json e;
        e["pencil"] = w.pencil;
        e["coeff_index"] = w.coeff_index;
        e["covectors"] = index_tuple_to_json(w.covectors);
        e["poly"] = poly_to_json(w.poly);
        if (w.point) {
            Json pt = Json::array();
            for (const auto& q : *w.point) pt.push_back(rat_str(q));
            e["point"] = std::move(pt);
        }
        if (w.value) e["value"] = rat_str(*w.value);
        witnesses.push_back(std::move(e));
    }
    out["witnesses"] = std::move(witnesses);
    if (r.sz) {
        Json sz;
        sz["degree"] = r.sz->degree;
        sz["grid"] = r.sz->grid;
        sz["samples"] = r.sz->samples;
        out["sz"] = std::move(sz);
    } else {
        out["sz"] = nullptr;
    }
    if (with_volatile) out["volatile"] = Json{{"elapsed_ms", r.elapsed_ms}};
    return out;
}

Json complexify_report_to_json(const ComplexifyReport& r) {
    Json out;
    Json anchors = Json::array();
    for (const auto& a : r.anchors) anchors.push_back(a.str());
    out["anchors"] = std::move(anchors);
    out["rank_F"] = r.rank_f;
    out["redundancy_ok"] = r.redundancy_ok;
    Json items;
    Json witnesses = Json::array();
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        Json checks = Json::array();
        for (const auto& c : r.items[i]) {
            Json e;
            e["t"] = c.t.str();
            e["ok"] = c.ok;
            checks.push_back(std::move(e));
            if (!c.witness.empty())
                witnesses.push_back("item " + std::to_string(i + 1) + " at t = " + c.t.str() +
                                    ": " + c.witness);
        }
        items[std::to_string(i + 1)] = std::move(checks);
    }
    out["items"] = std::move(items);
    out["witnesses"] = std::move(witnesses);
    return out;
}

std::string json_hash(const Json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream hex;
    hex << std::hex << std::nouppercase;
    hex.width(16);
    hex.fill('0');
    hex << h;
    return hex.str();
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

} // namespace vweb
