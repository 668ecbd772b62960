#include "vweb/chart.hpp"

#include <set>

#include "vweb/error.hpp"

namespace vweb {

ChartPtr make_chart(std::string name, std::vector<std::string> vars) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (v.empty()) throw StructuralError("chart '" + name + "': empty variable name");
        if (!seen.insert(v).second)
            throw StructuralError("chart '" + name + "': duplicate variable '" + v + "'");
    }
    auto c = std::make_shared<Chart>();
    c->name = std::move(name);
    c->vars = std::move(vars);
    return c;
}

ChartPtr make_coordinate_chart(std::string name, std::size_t n, std::string_view prefix) {
    std::vector<std::string> vars;
    vars.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        vars.push_back(std::string(prefix) + std::to_string(i));
    return make_chart(std::move(name), std::move(vars));
}

ChartPtr make_doubled_chart(const ChartPtr& base) {
    if (!base) throw StructuralError("doubled chart of null chart");
    std::vector<std::string> vars = base->vars;
    for (const auto& v : base->vars) {
        if (v.size() > 1 && v[0] == 'x')
            vars.push_back("y" + v.substr(1));
        else
            vars.push_back(v + "_im");
    }
    return make_chart(base->name + "_doubled", std::move(vars));
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) noexcept {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->name == b->name && a->vars == b->vars;
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
    if (!same_chart(a, b))
        throw StructuralError(std::string(what) + ": operands live on different charts ('" +
                              (a ? a->name : "<null>") + "' vs '" + (b ? b->name : "<null>") +
                              "')");
}

} // namespace vweb
