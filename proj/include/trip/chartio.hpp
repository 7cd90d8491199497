#ifndef TRIP_CHARTIO_HPP
#define TRIP_CHARTIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "trip/triplectic.hpp"

namespace trip {

// In-memory form of a chart file: declared variables, intrinsic parity,
// sparse bracket matrices and an optional base point. Loading validates the
// expressions; the algebraic checks are run by the commands.
struct ChartDocument {
    ChartSpec spec;
    TablePtr table;
    std::vector<VarId> q, p, c;
    PolyMatrix pi1, pi2;
    std::optional<BodyPoint> basePoint;

    Chart poissonChart() const;
    PoissonPencil makePencil() const;           // verifies antisymmetry and parity
    TriplecticChart makeTriplecticChart() const;  // verifies the full axioms
};

ChartDocument loadChart(const std::string& path);
ChartDocument parseChartJson(const std::string& text);
ChartDocument fromTriplecticChart(const TriplecticChart& chart,
                                  std::optional<BodyPoint> basePoint = std::nullopt);
std::string chartToJson(const ChartDocument& doc);
void saveChart(const ChartDocument& doc, const std::string& path);

// machine-readable command report
struct ReportCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct Report {
    std::string command;
    std::string status;  // pass | fail | obstructed | error
    std::vector<ReportCheck> checks;
    std::vector<std::pair<std::string, std::string>> data;  // certificates etc.

    bool allPass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::string toJson() const;
    std::string toText() const;
};

}  // namespace trip

#endif
