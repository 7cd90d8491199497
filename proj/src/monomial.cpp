#include "trip/monomial.hpp"

namespace trip {

namespace {

// parity of the sign picked up when swapping adjacent u and v
inline int commFactor(const GradedVariable& u, const GradedVariable& v) {
    return (u.parity * v.parity + u.formDegree * v.formDegree) & 1;
}

}  // namespace

std::optional<SignedMonomial> mulMonomials(const Monomial& a, const Monomial& b,
                                           const VariableTable& t) {
    // Moving each generator of b left past the generators of a with larger id
    // accumulates the sign; merging equal generators kills odd squares.
    int signExp = 0;
    for (const auto& [vb, kb] : b.entries()) {
        const auto& gvb = t.at(vb);
        for (const auto& [va, ka] : a.entries()) {
            if (va > vb) signExp += ka * kb * commFactor(t.at(va), gvb);
        }
    }

    std::vector<Monomial::Entry> out;
    out.reserve(a.entries().size() + b.entries().size());
    size_t i = 0, j = 0;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    while (i < ea.size() || j < eb.size()) {
        if (i < ea.size() && j < eb.size() && ea[i].first == eb[j].first) {
            VarId v = ea[i].first;
            int k = ea[i].second + eb[j].second;
            if (t.at(v).selfSign() && k > 1) return std::nullopt;
            out.push_back({v, k});
            ++i;
            ++j;
        } else if (j >= eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            out.push_back(ea[i++]);
        } else {
            out.push_back(eb[j++]);
        }
    }
    return SignedMonomial{Monomial::fromSortedEntries(std::move(out)),
                          (signExp & 1) ? -1 : +1};
}

std::optional<SignedMonomial> leftDerivMonomial(const Monomial& m, VarId v,
                                                const VariableTable& t, int& multiplicity) {
    const auto& gv = t.at(v);
    const auto& es = m.entries();
    int signExp = 0;
    size_t pos = es.size();
    for (size_t i = 0; i < es.size(); ++i) {
        if (es[i].first == v) {
            pos = i;
            break;
        }
        if (es[i].first < v) signExp += es[i].second * commFactor(t.at(es[i].first), gv);
    }
    if (pos == es.size()) return std::nullopt;
    multiplicity = es[pos].second;
    auto out = es;
    if (--out[pos].second == 0) out.erase(out.begin() + static_cast<long>(pos));
    return SignedMonomial{Monomial::fromSortedEntries(std::move(out)),
                          (signExp & 1) ? -1 : +1};
}

std::optional<SignedMonomial> rightDerivMonomial(const Monomial& m, VarId v,
                                                 const VariableTable& t, int& multiplicity) {
    const auto& gv = t.at(v);
    const auto& es = m.entries();
    int signExp = 0;
    size_t pos = es.size();
    for (size_t i = 0; i < es.size(); ++i) {
        if (es[i].first == v) pos = i;
        if (es[i].first > v) signExp += es[i].second * commFactor(t.at(es[i].first), gv);
    }
    if (pos == es.size()) return std::nullopt;
    multiplicity = es[pos].second;
    auto out = es;
    if (--out[pos].second == 0) out.erase(out.begin() + static_cast<long>(pos));
    return SignedMonomial{Monomial::fromSortedEntries(std::move(out)),
                          (signExp & 1) ? -1 : +1};
}

std::optional<Monomial> divideMonomials(const Monomial& a, const Monomial& b) {
    std::vector<Monomial::Entry> out;
    const auto& ea = a.entries();
    size_t j = 0;
    for (const auto& [vb, kb] : b.entries()) {
        while (j < ea.size() && ea[j].first < vb) out.push_back(ea[j++]);
        if (j >= ea.size() || ea[j].first != vb || ea[j].second < kb) return std::nullopt;
        int k = ea[j].second - kb;
        if (k > 0) out.push_back({vb, k});
        ++j;
    }
    while (j < ea.size()) out.push_back(ea[j++]);
    return Monomial::fromSortedEntries(std::move(out));
}

}  // namespace trip
