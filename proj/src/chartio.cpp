#include "trip/chartio.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace trip {

using nlohmann::json;

namespace {

int signPow(long e) { return (e & 1) ? -1 : +1; }

}  // namespace

Chart ChartDocument::poissonChart() const {
    Chart ch;
    ch.table = table;
    ch.epsilon = spec.epsilon;
    ch.trunc = std::nullopt;
    for (VarId v : q) ch.coords.push_back(v);
    for (VarId v : p) ch.coords.push_back(v);
    for (VarId v : c) ch.coords.push_back(v);
    return ch;
}

PoissonPencil ChartDocument::makePencil() const {
    Chart ch = poissonChart();
    return PoissonPencil{PoissonStructure(ch, pi1), PoissonStructure(ch, pi2)};
}

TriplecticChart ChartDocument::makeTriplecticChart() const {
    return TriplecticChart::fromPencil(spec, table, q, p, c, pi1, pi2);
}

ChartDocument parseChartJson(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("ParseError", std::string("invalid JSON: ") + e.what());
    }

    ChartDocument doc;
    if (!j.contains("variables") || !j["variables"].is_array())
        throw Error("ParseError", "missing 'variables' array");
    doc.spec.epsilon = j.value("epsilon", 0);
    if (j.contains("truncationDegree")) doc.spec.truncationDegree = j["truncationDegree"].get<int>();

    VariableTable t;
    for (const auto& v : j["variables"]) {
        GradedVariable gv;
        gv.name = v.at("name").get<std::string>();
        gv.parity = v.value("parity", 0);
        gv.formDegree = v.value("formDegree", 0);
        gv.role = roleFromName(v.value("role", std::string("auxiliary")));
        gv.index = v.value("index", 0);
        t.add(gv);
    }
    doc.table = freeze(std::move(t));

    for (VarId v = 0; v < static_cast<VarId>(doc.table->size()); ++v) {
        switch (doc.table->at(v).role) {
            case VarRole::Position: doc.q.push_back(v); break;
            case VarRole::Momentum: doc.p.push_back(v); break;
            case VarRole::Casimir: doc.c.push_back(v); break;
            default: break;
        }
    }
    if (doc.q.size() != doc.p.size() || doc.p.size() != doc.c.size())
        throw Error("ParseError", "need equal numbers of position, momentum, casimir variables");
    doc.spec.n = static_cast<int>(doc.q.size());
    for (VarId v : doc.q) doc.spec.positionParities.push_back(doc.table->at(v).parity);

    size_t dim = 3 * doc.q.size();
    doc.pi1 = zeroPolyMatrix(dim, dim, doc.table);
    doc.pi2 = zeroPolyMatrix(dim, dim, doc.table);

    std::vector<VarId> coords;
    for (VarId v : doc.q) coords.push_back(v);
    for (VarId v : doc.p) coords.push_back(v);
    for (VarId v : doc.c) coords.push_back(v);
    auto coordIndex = [&](const std::string& name) -> size_t {
        VarId v = doc.table->idOf(name);
        for (size_t k = 0; k < coords.size(); ++k)
            if (coords[k] == v) return k;
        throw Error("ParseError", "variable " + name + " is not a coordinate");
    };

    auto fillBracket = [&](const char* key, PolyMatrix& pi) {
        if (!j.contains(key)) return;
        std::vector<std::vector<bool>> given(dim, std::vector<bool>(dim, false));
        for (const auto& entry : j[key]) {
            size_t A = coordIndex(entry.at("A").get<std::string>());
            size_t B = coordIndex(entry.at("B").get<std::string>());
            SuperPoly e = parseExpression(entry.at("expression").get<std::string>(), doc.table);
            pi.at(A, B) = e;
            given[A][B] = true;
        }
        // fill graded mirrors for entries only given one way
        for (size_t A = 0; A < dim; ++A)
            for (size_t B = 0; B < dim; ++B) {
                if (!given[A][B] || given[B][A]) continue;
                if (A == B) continue;
                int ea = doc.table->at(coords[A]).parity;
                int eb = doc.table->at(coords[B]).parity;
                int s = -signPow((ea + doc.spec.epsilon) * (eb + doc.spec.epsilon));
                pi.at(B, A) = pi.at(A, B) * Rational(s);
            }
    };
    fillBracket("bracket1", doc.pi1);
    fillBracket("bracket2", doc.pi2);

    if (j.contains("basePoint")) {
        BodyPoint point;
        for (const auto& [name, value] : j["basePoint"].items())
            point[doc.table->idOf(name)] = parseRational(value.get<std::string>());
        doc.basePoint = point;
    }
    return doc;
}

ChartDocument loadChart(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("FileError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parseChartJson(ss.str());
}

ChartDocument fromTriplecticChart(const TriplecticChart& chart,
                                  std::optional<BodyPoint> basePoint) {
    ChartDocument doc;
    doc.spec = chart.spec();
    doc.table = chart.table();
    doc.q = chart.qIds();
    doc.p = chart.pIds();
    doc.c = chart.cIds();
    doc.pi1 = chart.pencil().first.pi();
    doc.pi2 = chart.pencil().second.pi();
    doc.basePoint = std::move(basePoint);
    return doc;
}

std::string chartToJson(const ChartDocument& doc) {
    json j;
    j["epsilon"] = doc.spec.epsilon;
    if (doc.spec.truncationDegree) j["truncationDegree"] = *doc.spec.truncationDegree;
    j["variables"] = json::array();
    for (size_t k = 0; k < doc.table->size(); ++k) {
        const auto& gv = doc.table->at(static_cast<VarId>(k));
        j["variables"].push_back({{"name", gv.name},
                                  {"parity", gv.parity},
                                  {"formDegree", gv.formDegree},
                                  {"role", roleName(gv.role)},
                                  {"index", gv.index}});
    }

    std::vector<VarId> coords;
    for (VarId v : doc.q) coords.push_back(v);
    for (VarId v : doc.p) coords.push_back(v);
    for (VarId v : doc.c) coords.push_back(v);

    auto dump = [&](const PolyMatrix& pi) {
        json arr = json::array();
        for (size_t A = 0; A < pi.rows(); ++A)
            for (size_t B = A; B < pi.cols(); ++B) {
                if (pi.at(A, B).isZero()) continue;
                arr.push_back({{"A", doc.table->at(coords[A]).name},
                               {"B", doc.table->at(coords[B]).name},
                               {"expression", printExpression(pi.at(A, B))}});
            }
        return arr;
    };
    j["bracket1"] = dump(doc.pi1);
    j["bracket2"] = dump(doc.pi2);

    if (doc.basePoint) {
        json bp = json::object();
        for (const auto& [v, val] : *doc.basePoint) bp[doc.table->at(v).name] = toString(val);
        j["basePoint"] = bp;
    }
    return j.dump(2) + "\n";
}

void saveChart(const ChartDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("FileError", "cannot write " + path);
    out << chartToJson(doc);
}

std::string roleName(VarRole role) {
    switch (role) {
        case VarRole::Position: return "position";
        case VarRole::Momentum: return "momentum";
        case VarRole::Casimir: return "casimir";
        case VarRole::FormGen: return "formGenerator";
        case VarRole::Auxiliary: return "auxiliary";
    }
    return "auxiliary";
}

VarRole roleFromName(const std::string& name) {
    if (name == "position") return VarRole::Position;
    if (name == "momentum") return VarRole::Momentum;
    if (name == "casimir") return VarRole::Casimir;
    if (name == "formGenerator") return VarRole::FormGen;
    if (name == "auxiliary") return VarRole::Auxiliary;
    throw Error("ParseError", "unknown variable role: " + name);
}

std::string Report::toJson() const {
    json j;
    j["command"] = command;
    j["status"] = status;
    j["checks"] = json::array();
    for (const auto& c : checks)
        j["checks"].push_back(
            {{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
    json d = json::object();
    for (const auto& [k, v] : data) d[k] = v;
    j["data"] = d;
    return j.dump(2) + "\n";
}

std::string Report::toText() const {
    std::ostringstream os;
    os << command << ": " << status << "\n";
    for (const auto& c : checks)
        os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name
           << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    for (const auto& [k, v] : data) os << "  " << k << " = " << v << "\n";
    return os.str();
}

}  // namespace trip
