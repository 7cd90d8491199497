#include "corpus.hpp"

#include "trip/parser.hpp"

namespace triptest {

using namespace trip;

TriplecticChart chartEF(const ChartSpec& spec, const std::vector<std::vector<std::string>>& e,
                        const std::vector<std::vector<std::string>>& f) {
    TriplecticChart base = TriplecticChart::canonical(spec);
    size_t n = static_cast<size_t>(spec.n);
    PolyMatrix E = zeroPolyMatrix(n, n, base.table());
    PolyMatrix F = zeroPolyMatrix(n, n, base.table());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            E.at(i, j) = parseExpression(e[i][j], base.table());
            if (!f.empty()) F.at(i, j) = parseExpression(f[i][j], base.table());
        }
    return base.withEF(std::move(E), std::move(F));
}

TriplecticChart chartPC(const ChartSpec& spec, const std::vector<std::vector<std::string>>& pFactor,
                        const std::vector<std::vector<std::string>>& cFactor,
                        const std::vector<std::vector<std::string>>& f) {
    TriplecticChart base = TriplecticChart::canonical(spec);
    size_t n = static_cast<size_t>(spec.n);
    PolyMatrix P = zeroPolyMatrix(n, n, base.table());
    PolyMatrix C = zeroPolyMatrix(n, n, base.table());
    PolyMatrix F = zeroPolyMatrix(n, n, base.table());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            P.at(i, j) = parseExpression(pFactor[i][j], base.table());
            C.at(i, j) = parseExpression(cFactor[i][j], base.table());
            if (!f.empty()) F.at(i, j) = parseExpression(f[i][j], base.table());
        }
    return base.withEF(P * C, std::move(F));
}

TriplecticChart example3d() {
    return chartEF({1, 0, {0}}, {{"p1+c1"}});
}

const std::vector<CorpusChart>& corpus() {
    static const std::vector<CorpusChart> charts = [] {
        std::vector<CorpusChart> out;

        // ---- factorizable, even intrinsic parity ----
        out.push_back({"even-n1-canonical", TriplecticChart::canonical({1, 0, {0}}), true, true});
        out.push_back({"even-n1-P-linear", chartEF({1, 0, {0}}, {{"2+2*p1"}}), true, true});
        out.push_back({"even-n1-P-quadratic", chartEF({1, 0, {0}}, {{"1+p1+p1^2"}}), true, true});
        out.push_back({"even-n2-C-unipotent",
                       chartEF({2, 0, {0, 0}}, {{"1", "c1"}, {"0", "1"}}), true, true});
        out.push_back({"even-n2-P-unipotent",
                       chartEF({2, 0, {0, 0}}, {{"1", "p1"}, {"0", "1"}}), true, true});
        out.push_back({"even-n2-PC-product",
                       chartEF({2, 0, {0, 0}}, {{"1", "p1+c1"}, {"0", "1"}}), true, true});
        out.push_back({"even-n2-F-constant",
                       chartEF({2, 0, {0, 0}}, {{"1", "0"}, {"0", "1"}},
                               {{"0", "1"}, {"-1", "0"}}),
                       true, true});
        out.push_back({"even-n2-F-linear",
                       chartEF({2, 0, {0, 0}}, {{"1", "0"}, {"0", "1"}},
                               {{"0", "p1"}, {"-p1", "0"}}),
                       true, true});
        out.push_back({"even-n2-E-and-F",
                       chartEF({2, 0, {0, 0}}, {{"1", "c1"}, {"0", "1"}},
                               {{"0", "1"}, {"-1", "0"}}),
                       true, true});
        // P from A = (p1, p2 + p1^2/2, p3 + p1 p2), C inverse to the Jacobian
        // of (c1, c2 + c1^2/2, c3 + c1 c2)
        out.push_back({"even-n3-PC-unipotent",
                       chartPC({3, 0, {0, 0, 0}},
                               {{"1", "p1", "p2"}, {"0", "1", "p1"}, {"0", "0", "1"}},
                               {{"1", "-c1", "c1^2-c2"}, {"0", "1", "-c1"}, {"0", "0", "1"}}),
                       true, true});

        // ---- factorizable, odd intrinsic parity (antibrackets) ----
        out.push_back({"odd-n1-canonical", TriplecticChart::canonical({1, 1, {0}}), true, true});
        out.push_back({"odd-n1-scaled", chartEF({1, 1, {0}}, {{"2"}}), true, true});
        out.push_back({"odd-n3-P-cubic",
                       chartEF({3, 1, {0, 0, 0}},
                               {{"1+p2*p3", "0", "0"}, {"-p1*p3", "1", "0"}, {"p1*p2", "0", "1"}}),
                       true, true});
        out.push_back({"odd-n3-C-cubic",
                       chartEF({3, 1, {0, 0, 0}},
                               {{"1-c2*c3", "0", "0"}, {"c1*c3", "1", "0"}, {"-c1*c2", "0", "1"}}),
                       true, true});

        // ---- factorizable, mixed position parities ----
        out.push_back({"mixed-n2-P-block",
                       chartEF({2, 0, {0, 1}}, {{"1", "p2"}, {"0", "1+p1"}}), true, true});

        // ---- not factorizable ----
        out.push_back({"even-n1-sum", example3d(), false, false});
        out.push_back({"even-n1-product-mixed", chartEF({1, 0, {0}}, {{"1+p1*c1"}}), false, false});
        out.push_back({"odd-n1-product-mixed", chartEF({1, 1, {0}}, {{"1+p1*c1"}}), false, false});
        out.push_back({"even-n2-sum-block",
                       chartEF({2, 0, {0, 0}}, {{"p1+c1", "0"}, {"0", "1"}}), false, false});

        return out;
    }();
    return charts;
}

std::vector<CorpusChart> factorizableCorpus() {
    std::vector<CorpusChart> out;
    for (const auto& c : corpus())
        if (c.factorizable) out.push_back(c);
    return out;
}

}  // namespace triptest
