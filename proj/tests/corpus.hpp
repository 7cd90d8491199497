#ifndef TRIP_TESTS_CORPUS_HPP
#define TRIP_TESTS_CORPUS_HPP

#include <string>
#include <vector>

#include "trip/triplectic.hpp"

namespace triptest {

struct CorpusChart {
    std::string name;
    trip::TriplecticChart chart;
    bool factorizable;
    bool exactPipeline;  // every pipeline stage closes in the polynomial ring
};

// chart with E, F entries parsed on the canonical (q,p,c) table
trip::TriplecticChart chartEF(const trip::ChartSpec& spec,
                              const std::vector<std::vector<std::string>>& e,
                              const std::vector<std::vector<std::string>>& f = {});

// chart with E = P(p) C(c) assembled from the parsed factors
trip::TriplecticChart chartPC(const trip::ChartSpec& spec,
                              const std::vector<std::vector<std::string>>& pFactor,
                              const std::vector<std::vector<std::string>>& cFactor,
                              const std::vector<std::vector<std::string>>& f = {});

// the 3-dimensional counterexample with E = p1 + c1
trip::TriplecticChart example3d();

// full corpus: factorizable and non-factorizable charts over n in {1,2,3},
// both intrinsic parities, including mixed position parities
const std::vector<CorpusChart>& corpus();

std::vector<CorpusChart> factorizableCorpus();

}  // namespace triptest

#endif
