// Command-line front end: verify chart files, construct bi-Darboux
// coordinates, and expose the factorization / homotopy / parity-structure /
// Lorentz subcommands.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "trip/chartio.hpp"
#include "trip/homotopy.hpp"
#include "trip/liegroup.hpp"
#include "trip/parahyper.hpp"
#include "trip/parser.hpp"
#include "trip/triplectic.hpp"

using namespace trip;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int defaultDegree() {
    if (const char* env = std::getenv("TRIPLECTIC_DEGREE")) {
        int d = std::atoi(env);
        if (d > 0) return d;
    }
    return 8;
}

void emit(const Report& report, const std::string& format) {
    if (format == "json")
        std::cout << report.toJson();
    else
        std::cout << report.toText();
}

BodyPoint parseBasePoint(const std::string& text, const TablePtr& table) {
    BodyPoint point;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error("UsageError", "base point entries look like p1=0");
        std::string name = item.substr(0, eq);
        point[table->idOf(name)] = parseRational(item.substr(eq + 1));
    }
    return point;
}

int runVerify(const std::string& file, const std::string& format) {
    Report report;
    report.command = "verify";
    ChartDocument doc = loadChart(file);

    // graded antisymmetry and the parity rule, reported rather than thrown
    bool antisym = true;
    std::string antisymDetail;
    std::optional<PoissonPencil> pencil;
    try {
        pencil = doc.makePencil();
    } catch (const Error& e) {
        antisym = false;
        antisymDetail = e.what();
    }
    report.checks.push_back({"antisymmetry", antisym, antisymDetail});
    if (!pencil) {
        report.status = "fail";
        emit(report, format);
        return kExitFail;
    }

    JacobiReport j1 = checkJacobi(pencil->first);
    report.checks.push_back(
        {"jacobi-bracket1", j1.pass(),
         j1.pass() ? "" : "residual " + j1.violations.front().residual.str()});
    JacobiReport j2 = checkJacobi(pencil->second);
    report.checks.push_back(
        {"jacobi-bracket2", j2.pass(),
         j2.pass() ? "" : "residual " + j2.violations.front().residual.str()});
    JacobiReport sym = checkSymmetrizedJacobi(*pencil);
    report.checks.push_back(
        {"symmetrized-jacobi", sym.pass(),
         sym.pass() ? "" : "residual " + sym.violations.front().residual.str()});

    bool casimirP = true, casimirC = true;
    for (VarId v : doc.p)
        if (!isCasimir(SuperPoly::variable(doc.table, v), pencil->second)) casimirP = false;
    for (VarId v : doc.c)
        if (!isCasimir(SuperPoly::variable(doc.table, v), pencil->first)) casimirC = false;
    report.checks.push_back({"casimir-momenta", casimirP,
                             casimirP ? "" : "a p variable is not a Casimir of bracket 2"});
    report.checks.push_back({"casimir-second", casimirC,
                             casimirC ? "" : "a c variable is not a Casimir of bracket 1"});

    bool involutive = true;
    std::string involutiveDetail;
    if (casimirP && casimirC) {
        std::vector<SuperPoly> cas1, cas2;
        for (VarId v : doc.p) cas1.push_back(SuperPoly::variable(doc.table, v));
        for (VarId v : doc.c) cas2.push_back(SuperPoly::variable(doc.table, v));
        try {
            InvolutivityReport inv = checkMutualInvolutivity(*pencil, cas1, cas2);
            involutive = inv.pass();
            if (!involutive) involutiveDetail = inv.failures.front();
        } catch (const Error& e) {
            involutive = false;
            involutiveDetail = e.what();
        }
    } else {
        involutive = false;
        involutiveDetail = "skipped: Casimir precheck failed";
    }
    report.checks.push_back({"mutual-involutivity", involutive, involutiveDetail});

    BodyPoint point;
    if (doc.basePoint) point = *doc.basePoint;
    for (VarId v : doc.p)
        if (!point.count(v)) point[v] = Rational(0);
    for (VarId v : doc.c)
        if (!point.count(v)) point[v] = Rational(0);
    for (VarId v : doc.q)
        if (!point.count(v)) point[v] = Rational(0);
    int want = 2 * doc.spec.n;
    bool rankOk = true;
    std::string rankDetail;
    try {
        int r1 = bodyRank(pencil->first, point);
        int r2 = bodyRank(pencil->second, point);
        rankOk = (r1 == want && r2 == want);
        rankDetail = "rank1=" + std::to_string(r1) + " rank2=" + std::to_string(r2) +
                     " expected " + std::to_string(want);
    } catch (const Error& e) {
        rankOk = false;
        rankDetail = e.what();
    }
    report.checks.push_back({"body-rank", rankOk, rankDetail});

    bool nondegenerate = true;
    std::string nondegDetail;
    try {
        size_t n = static_cast<size_t>(doc.spec.n);
        FnMatrix e1(n, n), e2(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                e1.at(i, j) = RationalFn(doc.pi1.at(i, n + j));
                e2.at(i, j) = RationalFn(doc.pi2.at(i, 2 * n + j));
            }
        invertMatrix(e1);
        invertMatrix(e2);
    } catch (const Error& e) {
        nondegenerate = false;
        nondegDetail = e.what();
    }
    report.checks.push_back({"joint-nondegeneracy", nondegenerate, nondegDetail});

    report.status = report.allPass() ? "pass" : "fail";
    emit(report, format);
    return report.allPass() ? kExitPass : kExitFail;
}

int runDarbouxify(const std::string& file, const std::string& output, std::string basePointText,
                  int degree, const std::string& format) {
    Report report;
    report.command = "darbouxify";
    ChartDocument doc = loadChart(file);

    TriplecticChart chart;
    try {
        chart = doc.makeTriplecticChart();
    } catch (const Error& e) {
        report.status = "obstructed";
        report.checks.push_back({"chart-axioms", false, e.what()});
        emit(report, format);
        return kExitFail;
    }
    report.checks.push_back({"chart-axioms", true, ""});

    std::optional<BodyPoint> base;
    if (!basePointText.empty())
        base = parseBasePoint(basePointText, doc.table);
    else if (doc.basePoint)
        base = doc.basePoint;

    PipelineResult result = biDarbouxPipeline(chart, base, degree);
    for (const auto& s : result.stages) report.checks.push_back({s.stage, true, s.detail});

    if (!result.success) {
        report.status = "obstructed";
        report.checks.push_back({result.obstructionStage, false, result.obstruction});
        if (result.factorizationResidual) {
            std::ostringstream os;
            for (size_t i = 0; i < result.factorizationResidual->rows(); ++i)
                for (size_t j = 0; j < result.factorizationResidual->cols(); ++j)
                    if (!result.factorizationResidual->at(i, j).isZero())
                        os << "residual[" << i << "][" << j << "] = "
                           << result.factorizationResidual->at(i, j).str() << "; ";
            report.data.push_back({"factorizationResidual", os.str()});
        }
        if (!result.curvatureWitness.empty()) {
            std::ostringstream os;
            for (const auto& w : result.curvatureWitness) os << w << "; ";
            report.data.push_back({"obataCurvatureWitness", os.str()});
        }
        emit(report, format);
        return kExitFail;
    }

    report.status = "pass";
    report.data.push_back({"exact", result.exact ? "true" : "false"});
    if (!result.exact)
        report.data.push_back({"verifiedDegree", std::to_string(result.verifiedDegree)});
    if (result.factors) {
        for (size_t i = 0; i < result.factors->P.rows(); ++i)
            for (size_t j = 0; j < result.factors->P.cols(); ++j) {
                report.data.push_back({"P[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                       result.factors->P.at(i, j).str()});
                report.data.push_back({"C[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                       result.factors->C.at(i, j).str()});
            }
    }
    if (!result.gaugeB.isZero()) report.data.push_back({"gaugeB", result.gaugeB.str()});
    if (!output.empty() && result.chart) {
        saveChart(fromTriplecticChart(*result.chart), output);
        report.data.push_back({"output", output});
    }
    emit(report, format);
    return kExitPass;
}

int runFactorize(const std::string& file, std::string basePointText, const std::string& format) {
    Report report;
    report.command = "factorize";
    ChartDocument doc = loadChart(file);
    TriplecticChart chart = doc.makeTriplecticChart();

    BodyPoint base;
    if (!basePointText.empty())
        base = parseBasePoint(basePointText, doc.table);
    else if (doc.basePoint)
        base = *doc.basePoint;
    else
        base = defaultBasePoint(chart);

    auto factors = factorize(chart, base);
    if (!factors) {
        report.status = "fail";
        report.checks.push_back({"factorization", false, "not factorizable"});
        report.checks.push_back({"differential-condition", checkDifferentialFactorization(chart),
                                 ""});
        emit(report, format);
        return kExitFail;
    }
    report.status = "pass";
    report.checks.push_back({"factorization", true, "E = P(p) C(c)"});
    for (size_t i = 0; i < factors->P.rows(); ++i)
        for (size_t j = 0; j < factors->P.cols(); ++j) {
            report.data.push_back({"P[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                   factors->P.at(i, j).str()});
            report.data.push_back({"C[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                   factors->C.at(i, j).str()});
        }
    emit(report, format);
    return kExitPass;
}

int runHomotopy(int n, const std::string& paritiesText, const std::string& omegaText,
                const std::string& format) {
    Report report;
    report.command = "homotopy";
    std::vector<int> parities;
    {
        std::stringstream ss(paritiesText);
        std::string item;
        while (std::getline(ss, item, ',')) parities.push_back(std::stoi(item));
    }
    if (parities.empty()) parities.assign(static_cast<size_t>(n), 0);
    if (static_cast<int>(parities.size()) != n)
        throw Error("UsageError", "need one parity per index");

    TriAlgebra algebra = TriAlgebra::make(n, parities);
    SuperPoly omega = parseExpression(omegaText, algebra.table());
    HomotopyResult h = biPoincareHomotopy(algebra, omega);
    report.status = "pass";
    report.data.push_back({"eta", h.eta.str()});
    for (const auto& b : h.blocks) {
        std::string key = "block(" + std::to_string(b.n1) + "," + std::to_string(b.n2) + "," +
                          std::to_string(b.n3) + ")";
        report.data.push_back({key + ".dim", std::to_string(b.dim)});
        report.data.push_back({key + ".det", toString(b.det)});
    }
    emit(report, format);
    return kExitPass;
}

int runNijenhuis(const std::string& file, const std::string& format) {
    Report report;
    report.command = "nijenhuis";
    ChartDocument doc = loadChart(file);
    TriplecticChart chart = doc.makeTriplecticChart();
    ParityStructure p = buildPfromE(chart.E(), chart.pIds(), chart.cIds());
    NijenhuisTensor nij = nijenhuis(p);
    bool zero = nij.isZero();
    report.checks.push_back({"nijenhuis-vanishes", zero, ""});
    if (!zero) {
        for (size_t K = 0; K < nij.comp.size(); ++K)
            for (size_t I = 0; I < nij.comp[K].rows(); ++I)
                for (size_t J = 0; J < nij.comp[K].cols(); ++J)
                    if (!nij.comp[K].at(I, J).isZero())
                        report.data.push_back({"N^" + std::to_string(K) + "_" +
                                                   std::to_string(I) + std::to_string(J),
                                               nij.comp[K].at(I, J).str()});
    }
    report.status = zero ? "pass" : "fail";
    emit(report, format);
    return zero ? kExitPass : kExitFail;
}

int runObata(const std::string& file, const std::string& format) {
    Report report;
    report.command = "obata";
    ChartDocument doc = loadChart(file);
    TriplecticChart chart = doc.makeTriplecticChart();
    ObataConnection conn = obataConnection(chart.E(), chart.pIds(), chart.cIds());
    size_t n = static_cast<size_t>(chart.n());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t m = 0; m < n; ++m) {
                if (!conn.gammaP[i].at(j, m).isZero())
                    report.data.push_back(
                        {"GammaP[" + std::to_string(i) + "]^" + std::to_string(j) + "_" +
                             std::to_string(m),
                         conn.gammaP[i].at(j, m).str()});
                if (!conn.gammaC[i].at(j, m).isZero())
                    report.data.push_back(
                        {"GammaC[" + std::to_string(i) + "]^" + std::to_string(j) + "_" +
                             std::to_string(m),
                         conn.gammaC[i].at(j, m).str()});
            }
    ObataCurvature curv = obataCurvature(conn);
    report.checks.push_back({"obata-flat", curv.isFlat, ""});
    for (const auto& [label, value] : curv.componentList)
        report.data.push_back({label, value.str()});
    report.status = curv.isFlat ? "pass" : "fail";
    emit(report, format);
    return curv.isFlat ? kExitPass : kExitFail;
}

RatMatrix parseMatrix(const std::string& text) {
    std::vector<std::vector<Rational>> rows;
    std::stringstream ss(text);
    std::string rowText;
    while (std::getline(ss, rowText, ';')) {
        std::vector<Rational> row;
        std::stringstream rs(rowText);
        std::string cell;
        while (std::getline(rs, cell, ',')) row.push_back(parseRational(cell));
        rows.push_back(row);
    }
    if (rows.empty()) throw Error("UsageError", "empty matrix");
    RatMatrix m(rows.size(), rows[0].size(), Rational(0));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw Error("UsageError", "ragged matrix");
        for (size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

int runLorentz(const std::string& gText, const std::string& lambdaText,
               const std::string& format) {
    Report report;
    report.command = "lorentz";
    if (!gText.empty()) {
        RatMatrix g = parseMatrix(gText);
        RatMatrix lambda = lie::adjointMap(g);
        report.checks.push_back({"unit-determinant", true, ""});
        report.checks.push_back({"adjoint-in-restricted-lorentz",
                                 lie::isRestrictedLorentz(lambda), ""});
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j)
                if (lambda.at(i, j) != 0)
                    report.data.push_back({"Ad[" + std::to_string(i) + "][" + std::to_string(j) +
                                               "]",
                                           toString(lambda.at(i, j))});
    } else if (!lambdaText.empty()) {
        RatMatrix lambda = parseMatrix(lambdaText);
        report.checks.push_back({"lorentz", lie::isLorentz(lambda), ""});
        report.checks.push_back({"restricted-lorentz", lie::isRestrictedLorentz(lambda), ""});
    } else {
        throw Error("UsageError", "provide --g or --lambda");
    }
    report.status = report.allPass() ? "pass" : "fail";
    emit(report, format);
    return report.allPass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for triplectic charts and bi-Darboux coordinates"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));

    std::string file, output, basePointText, omegaText, paritiesText, gText, lambdaText;
    int degree = defaultDegree();
    int homotopyN = 1;

    auto* verify = app.add_subcommand("verify", "run the triplectic axiom checks on a chart file");
    verify->add_option("file", file)->required();

    auto* darbouxify =
        app.add_subcommand("darbouxify", "construct bi-Darboux coordinates where possible");
    darbouxify->add_option("file", file)->required();
    darbouxify->add_option("--output", output, "write the transformed chart here");
    darbouxify->add_option("--base-point", basePointText, "like p1=0,c1=1");
    darbouxify->add_option("--degree", degree, "series truncation degree");

    auto* factorizeCmd = app.add_subcommand("factorize", "decide E(p,c) = P(p) C(c)");
    factorizeCmd->add_option("file", file)->required();
    factorizeCmd->add_option("--base-point", basePointText, "like p1=0,c1=1");

    auto* homotopyCmd =
        app.add_subcommand("homotopy", "apply the bi-Poincare homotopy to a closed form");
    homotopyCmd->add_option("--n", homotopyN, "number of index triples")->required();
    homotopyCmd->add_option("--parities", paritiesText, "like 0,0,1");
    homotopyCmd->add_option("--omega", omegaText, "form in x1_i, x2_i, x3_i")->required();

    auto* nijenhuisCmd = app.add_subcommand("nijenhuis", "Nijenhuis tensor of P built from E");
    nijenhuisCmd->add_option("file", file)->required();

    auto* obataCmd = app.add_subcommand("obata", "Obata connection and curvature");
    obataCmd->add_option("file", file)->required();

    auto* lorentzCmd = app.add_subcommand("lorentz", "adjoint map and Lorentz membership");
    lorentzCmd->add_option("--g", gText, "2x2 matrix like 2,0;0,1/2");
    lorentzCmd->add_option("--lambda", lambdaText, "3x3 matrix, rows separated by ;");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return runVerify(file, format);
        if (darbouxify->parsed())
            return runDarbouxify(file, output, basePointText, degree, format);
        if (factorizeCmd->parsed()) return runFactorize(file, basePointText, format);
        if (homotopyCmd->parsed())
            return runHomotopy(homotopyN, paritiesText, omegaText, format);
        if (nijenhuisCmd->parsed()) return runNijenhuis(file, format);
        if (obataCmd->parsed()) return runObata(file, format);
        if (lorentzCmd->parsed()) return runLorentz(gText, lambdaText, format);
    } catch (const Error& e) {
        std::string code = e.code();
        Report report;
        report.command = "error";
        report.status = "error";
        report.checks.push_back({code, false, e.what()});
        emit(report, format);
        bool usage = code == "UsageError" || code == "ParseError" || code == "FileError" ||
                     code == "SyntaxError" || code == "UnknownIdentifier" ||
                     code == "UnknownVariable";
        return usage ? kExitUsage : kExitFail;
    }
    return kExitUsage;
}
