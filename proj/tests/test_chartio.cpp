#include <cstdio>
#include <fstream>

#include "corpus.hpp"
#include "doctest.h"
#include "trip/chartio.hpp"

using namespace trip;

TEST_CASE("chart files load with mirrored bracket entries") {
    ChartDocument doc = loadChart("fixtures/example3d.json");
    CHECK(doc.spec.n == 1);
    CHECK(doc.spec.epsilon == 0);
    CHECK(doc.pi2.at(0, 2) == parseExpression("p1+c1", doc.table));
    CHECK(doc.pi2.at(2, 0) == parseExpression("-p1-c1", doc.table));
    REQUIRE(doc.basePoint.has_value());
    CHECK(doc.basePoint->at(doc.table->idOf("p1")) == Rational(1));

    // the triplectic construction accepts it
    TriplecticChart chart = doc.makeTriplecticChart();
    CHECK(chart.E().at(0, 0) == parseExpression("p1+c1", doc.table));
}

TEST_CASE("round trip load -> save -> load is structurally identical") {
    for (const char* path :
         {"fixtures/canonical_n1.json", "fixtures/example3d.json",
          "fixtures/factorizable_n1.json"}) {
        INFO(path);
        ChartDocument doc = loadChart(path);
        std::string once = chartToJson(doc);
        ChartDocument reloaded = parseChartJson(once);
        CHECK(chartToJson(reloaded) == once);
    }

    // corpus charts survive the document round trip as well
    for (const auto& c : triptest::corpus()) {
        INFO(c.name);
        ChartDocument doc = fromTriplecticChart(c.chart);
        ChartDocument reloaded = parseChartJson(chartToJson(doc));
        CHECK(chartToJson(reloaded) == chartToJson(doc));
        TriplecticChart rebuilt = reloaded.makeTriplecticChart();
        CHECK(rebuilt.E().rows() == c.chart.E().rows());
        for (size_t i = 0; i < rebuilt.E().rows(); ++i)
            for (size_t j = 0; j < rebuilt.E().cols(); ++j)
                CHECK(printExpression(rebuilt.E().at(i, j)) ==
                      printExpression(c.chart.E().at(i, j)));
    }
}

TEST_CASE("parse errors carry locations and stable codes") {
    CHECK_THROWS_WITH_AS(parseChartJson("{ not json"), doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(parseChartJson("{}"), doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(loadChart("fixtures/nonexistent.json"),
                         doctest::Contains("FileError"), Error);
}

TEST_CASE("reports serialize deterministically") {
    Report report;
    report.command = "verify";
    report.status = "pass";
    report.checks.push_back({"antisymmetry", true, ""});
    report.checks.push_back({"jacobi-bracket1", true, ""});
    report.data.push_back({"rank", "2"});
    std::string a = report.toJson();
    std::string b = report.toJson();
    CHECK(a == b);
    CHECK(a.find("\"status\": \"pass\"") != std::string::npos);
    CHECK(report.toText().find("[pass] antisymmetry") != std::string::npos);
}
