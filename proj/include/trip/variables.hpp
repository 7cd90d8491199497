#ifndef TRIP_VARIABLES_HPP
#define TRIP_VARIABLES_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "trip/error.hpp"

namespace trip {

using VarId = int;

enum class VarRole { Position, Momentum, Casimir, FormGen, Auxiliary };

std::string roleName(VarRole role);
VarRole roleFromName(const std::string& name);

// A generator of the supercommutative algebra. Two generators x, y obey
//   x y = (-1)^(eps_x eps_y + p_x p_y) y x,
// where eps is the Grassmann parity and p the form degree. A generator with
// eps + p odd squares to zero.
struct GradedVariable {
    std::string name;
    int parity = 0;      // Grassmann parity, 0 or 1
    int formDegree = 0;  // exterior form degree, >= 0
    VarRole role = VarRole::Auxiliary;
    int index = 0;

    // parity of the self-commutation sign; odd means the square vanishes
    int selfSign() const { return (parity + formDegree) & 1; }
};

// Immutable ordered set of generators; the insertion order is the canonical
// generator order used to normalize monomial signs.
class VariableTable {
  public:
    VarId add(GradedVariable v) {
        if (v.parity != 0 && v.parity != 1)
            throw Error("BadParity", "parity of " + v.name + " must be 0 or 1");
        if (v.formDegree < 0)
            throw Error("BadFormDegree", "negative form degree on " + v.name);
        if (byName_.count(v.name))
            throw Error("DuplicateVariable", "variable " + v.name + " already declared");
        VarId id = static_cast<VarId>(vars_.size());
        byName_[v.name] = id;
        vars_.push_back(std::move(v));
        return id;
    }

    VarId add(const std::string& name, int parity, int formDegree = 0,
              VarRole role = VarRole::Auxiliary, int index = 0) {
        return add(GradedVariable{name, parity, formDegree, role, index});
    }

    const GradedVariable& at(VarId id) const { return vars_.at(static_cast<size_t>(id)); }
    size_t size() const { return vars_.size(); }

    VarId idOf(const std::string& name) const {
        auto it = byName_.find(name);
        if (it == byName_.end()) throw Error("UnknownVariable", "no variable named " + name);
        return it->second;
    }

    bool has(const std::string& name) const { return byName_.count(name) != 0; }

    std::vector<VarId> idsWithRole(VarRole role) const {
        std::vector<VarId> out;
        for (VarId i = 0; i < static_cast<VarId>(vars_.size()); ++i)
            if (vars_[static_cast<size_t>(i)].role == role) out.push_back(i);
        return out;
    }

    // true when `other` lists exactly the same generators in the same order
    // as a prefix; polynomials over a prefix table embed verbatim.
    bool extends(const VariableTable& other) const {
        if (other.size() > size()) return false;
        for (size_t i = 0; i < other.size(); ++i) {
            const auto& a = vars_[i];
            const auto& b = other.vars_[i];
            if (a.name != b.name || a.parity != b.parity || a.formDegree != b.formDegree)
                return false;
        }
        return true;
    }

  private:
    std::vector<GradedVariable> vars_;
    std::map<std::string, VarId> byName_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

inline TablePtr freeze(VariableTable&& t) {
    return std::make_shared<const VariableTable>(std::move(t));
}

}  // namespace trip

#endif
