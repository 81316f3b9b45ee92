#include "monores/serialize.hpp"

#include <sstream>

namespace monores {
namespace {

using nlohmann::json;

json rat_j(const Rat& r) { return to_string(r); }
Rat rat_p(const json& j) { return rat_from_string(j.get<std::string>()); }

json multiindex_j(const MultiIndex& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) a.push_back(m[i]);
    return a;
}

MultiIndex multiindex_p(const json& j) {
    MultiIndex m(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) m[i] = j[i].get<int>();
    return m;
}

json monomial_j(const MonomialData& m) {
    return json{{"coefficient", rat_j(m.coefficient)}, {"exponents", multiindex_j(m.exponents)}};
}

MonomialData monomial_p(const json& j) {
    MonomialData m;
    m.coefficient = rat_p(j.at("coefficient"));
    m.exponents = multiindex_p(j.at("exponents"));
    return m;
}

json inequality_j(const RegionInequality& iq) {
    return json::array({monomial_j(iq.p), monomial_j(iq.q), rat_j(iq.bound)});
}

RegionInequality inequality_p(const json& j) {
    RegionInequality iq;
    iq.p = monomial_p(j.at(0));
    iq.q = monomial_p(j.at(1));
    iq.bound = rat_p(j.at(2));
    return iq;
}

json region_j(const RegionDescription& r) {
    json j;
    j["dimension"] = r.dimension;
    j["eta"] = rat_j(r.eta);
    j["orthant"] = r.orthant;
    json iqs = json::array();
    for (auto& iq : r.inequalities) iqs.push_back(inequality_j(iq));
    j["inequalities"] = std::move(iqs);
    json holes = json::array();
    for (auto& h : r.holes) {
        json c = json::array();
        for (auto& v : h.center) c.push_back(rat_j(v));
        holes.push_back(json{{"center", std::move(c)}, {"radius", rat_j(h.radius)}});
    }
    j["holes"] = std::move(holes);
    return j;
}

RegionDescription region_p(const json& j) {
    RegionDescription r;
    r.dimension = j.at("dimension").get<std::size_t>();
    r.eta = rat_p(j.at("eta"));
    r.orthant = j.at("orthant").get<std::vector<int>>();
    for (auto& e : j.at("inequalities")) r.inequalities.push_back(inequality_p(e));
    for (auto& e : j.at("holes")) {
        RegionHole h;
        for (auto& c : e.at("center")) h.center.push_back(rat_p(c));
        h.radius = rat_p(e.at("radius"));
        r.holes.push_back(std::move(h));
    }
    return r;
}

std::string series_key(const MultiIndex& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (i) os << ",";
        os << m[i];
    }
    return os.str();
}

MultiIndex series_key_p(const std::string& key) {
    std::vector<int> e;
    std::istringstream is(key);
    std::string tok;
    while (std::getline(is, tok, ',')) e.push_back(std::stoi(tok));
    MultiIndex m(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) m[i] = e[i];
    return m;
}

json step_j(const CoordinateChange& s) {
    if (auto* r = std::get_if<Reflection>(&s)) return json{{"reflection", r->axes}};
    if (auto* t = std::get_if<Translation>(&s)) {
        json w = json::array();
        for (auto& v : t->w) w.push_back(rat_j(v));
        return json{{"translation", std::move(w)}};
    }
    if (auto* q = std::get_if<QuasiTranslationStep>(&s)) {
        json series = json::object();
        for (auto& [m, c] : q->r.terms()) series[series_key(m)] = rat_j(c);
        json body{{"axis", q->axis},
                  {"series", std::move(series)},
                  {"series_dim", q->r.dim()}};
        if (q->r.truncation()) body["series_truncation"] = *q->r.truncation();
        return json{{"quasi_translation", std::move(body)}};
    }
    return json{{"monomial_map", std::get<MonomialMapStep>(s).a}};
}

CoordinateChange step_p(const json& j) {
    if (j.contains("reflection")) {
        Reflection r;
        r.axes = j.at("reflection").get<std::vector<std::size_t>>();
        return r;
    }
    if (j.contains("translation")) {
        Translation t;
        for (auto& v : j.at("translation")) t.w.push_back(rat_p(v));
        return t;
    }
    if (j.contains("quasi_translation")) {
        const json& body = j.at("quasi_translation");
        QuasiTranslationStep q;
        q.axis = body.at("axis").get<std::size_t>();
        std::optional<int> trunc;
        if (body.contains("series_truncation"))
            trunc = body.at("series_truncation").get<int>();
        Jet r(body.at("series_dim").get<std::size_t>(), trunc);
        for (auto& [key, val] : body.at("series").items())
            r.add_term(series_key_p(key), rat_p(val));
        q.r = std::move(r);
        return q;
    }
    MonomialMapStep m;
    m.a = j.at("monomial_map").get<IMatrix>();
    return m;
}

json cutoff_j(const CutoffFactor& f) {
    switch (f.kind) {
        case CutoffFactor::Ratio:
            return json{{"ratio", inequality_j(f.ineq)}};
        case CutoffFactor::Box: {
            json c = json::array();
            for (auto& v : f.center) c.push_back(rat_j(v));
            return json{{"box", json{{"center", std::move(c)}, {"radius", rat_j(f.radius)}}}};
        }
        default:
            return json{{"orthant", f.signs}};
    }
}

CutoffFactor cutoff_p(const json& j) {
    CutoffFactor f;
    if (j.contains("ratio")) {
        f.kind = CutoffFactor::Ratio;
        f.ineq = inequality_p(j.at("ratio"));
    } else if (j.contains("box")) {
        f.kind = CutoffFactor::Box;
        for (auto& c : j.at("box").at("center")) f.center.push_back(rat_p(c));
        f.radius = rat_p(j.at("box").at("radius"));
    } else {
        f.kind = CutoffFactor::Orthant;
        f.signs = j.at("orthant").get<std::vector<int>>();
    }
    return f;
}

json weight_j(const PartitionWeight& w) {
    json own = json::array();
    for (auto& f : w.own) own.push_back(cutoff_j(f));
    json comp = json::array();
    for (auto& grp : w.complemented) {
        json g = json::array();
        for (auto& f : grp) g.push_back(cutoff_j(f));
        comp.push_back(std::move(g));
    }
    return json{{"smoothing_c", rat_j(w.smoothing_c)},
                {"own", std::move(own)},
                {"complemented", std::move(comp)}};
}

PartitionWeight weight_p(const json& j) {
    PartitionWeight w;
    w.smoothing_c = rat_p(j.at("smoothing_c"));
    for (auto& f : j.at("own")) w.own.push_back(cutoff_p(f));
    for (auto& grp : j.at("complemented")) {
        std::vector<CutoffFactor> g;
        for (auto& f : grp) g.push_back(cutoff_p(f));
        w.complemented.push_back(std::move(g));
    }
    return w;
}

json form_j(const MonomializedForm& f) {
    return json{{"exponents", multiindex_j(f.exponents)},
                {"unit_bounds", json::array({f.lo, f.hi})}};
}

MonomializedForm form_p(const json& j) {
    MonomializedForm f;
    f.exponents = multiindex_p(j.at("exponents"));
    f.lo = j.at("unit_bounds").at(0).get<double>();
    f.hi = j.at("unit_bounds").at(1).get<double>();
    return f;
}

const char* status_name(ChartStatus s) {
    switch (s) {
        case ChartStatus::Internal: return "internal";
        case ChartStatus::Terminal: return "terminal";
        default: return "unresolved";
    }
}

ChartStatus status_p(const std::string& s) {
    if (s == "internal") return ChartStatus::Internal;
    if (s == "terminal") return ChartStatus::Terminal;
    if (s == "unresolved") return ChartStatus::Unresolved;
    throw std::invalid_argument("unknown chart status: " + s);
}

json node_j(const ChartNode& n) {
    json j;
    j["status"] = status_name(n.status);
    j["depth"] = n.depth;
    json steps = json::array();
    for (auto& s : n.steps) steps.push_back(step_j(s));
    j["steps"] = std::move(steps);
    j["region"] = region_j(n.region);
    j["weight"] = weight_j(n.weight);
    if (n.status == ChartStatus::Terminal) {
        json forms = json::array();
        for (auto& f : n.f_forms) forms.push_back(form_j(f));
        j["f_forms"] = std::move(forms);
        j["jac_form"] = form_j(n.jac_form);
        json comps = json::array();
        for (auto& f : n.component_forms) comps.push_back(form_j(f));
        j["component_forms"] = std::move(comps);
    }
    if (!n.diagnostic.empty()) j["diagnostic"] = n.diagnostic;
    json kids = json::array();
    for (auto& c : n.children) kids.push_back(node_j(*c));
    j["children"] = std::move(kids);
    return j;
}

std::unique_ptr<ChartNode> node_p(const json& j) {
    auto n = std::make_unique<ChartNode>();
    n->status = status_p(j.at("status").get<std::string>());
    n->depth = j.at("depth").get<int>();
    for (auto& s : j.at("steps")) n->steps.push_back(step_p(s));
    n->region = region_p(j.at("region"));
    n->weight = weight_p(j.at("weight"));
    if (n->status == ChartStatus::Terminal) {
        for (auto& f : j.at("f_forms")) n->f_forms.push_back(form_p(f));
        n->jac_form = form_p(j.at("jac_form"));
        for (auto& f : j.at("component_forms")) n->component_forms.push_back(form_p(f));
    }
    if (j.contains("diagnostic")) n->diagnostic = j.at("diagnostic").get<std::string>();
    for (auto& c : j.at("children")) n->children.push_back(node_p(c));
    return n;
}

}  // namespace

json to_json(const ChartTreeDoc& doc) {
    json j;
    j["dimension"] = doc.dimension;
    j["variables"] = doc.variables;
    j["functions"] = doc.functions;
    const ResolutionConfig& c = doc.config;
    j["config"] = json{{"seed", c.seed},
                       {"D", c.working_degree},
                       {"depth", c.max_depth},
                       {"unit_samples", c.unit_samples},
                       {"zero_search_samples", c.zero_search_samples},
                       {"orthants", c.positive_orthant_only ? "positive" : "all"},
                       {"jobs", c.jobs},
                       {"constants", json{{"eta", rat_j(c.eta)},
                                          {"smoothing_c", rat_j(c.smoothing_c)},
                                          {"escalation_retries", c.escalation_retries},
                                          {"eta_halvings", c.eta_halvings}}}};
    j["eta_used"] = rat_j(doc.eta_used);
    j["root"] = node_j(*doc.root);
    return j;
}

ChartTreeDoc doc_from_json(const json& j) {
    ChartTreeDoc doc;
    doc.dimension = j.at("dimension").get<std::size_t>();
    doc.variables = j.at("variables").get<std::vector<std::string>>();
    doc.functions = j.at("functions").get<std::vector<std::string>>();
    const json& c = j.at("config");
    doc.config.seed = c.at("seed").get<unsigned long long>();
    doc.config.working_degree = c.at("D").get<int>();
    doc.config.max_depth = c.at("depth").get<int>();
    doc.config.unit_samples = c.at("unit_samples").get<std::size_t>();
    doc.config.zero_search_samples = c.at("zero_search_samples").get<std::size_t>();
    doc.config.positive_orthant_only = c.at("orthants").get<std::string>() == "positive";
    doc.config.jobs = c.at("jobs").get<int>();
    const json& k = c.at("constants");
    doc.config.eta = rat_p(k.at("eta"));
    doc.config.smoothing_c = rat_p(k.at("smoothing_c"));
    doc.config.escalation_retries = k.at("escalation_retries").get<int>();
    doc.config.eta_halvings = k.at("eta_halvings").get<int>();
    doc.eta_used = rat_p(j.at("eta_used"));
    doc.root = node_p(j.at("root"));
    return doc;
}

ChartTreeDoc make_doc(ResolutionResult&& res, std::vector<std::string> variables,
                      std::vector<std::string> sources) {
    ChartTreeDoc doc;
    doc.dimension = res.product.dim();
    doc.variables = std::move(variables);
    doc.functions = std::move(sources);
    doc.config = res.config;
    doc.eta_used = res.eta_used;
    doc.root = std::move(res.root);
    return doc;
}

}  // namespace monores
