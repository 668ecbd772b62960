#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vweb {

// A coordinate chart: an ordered list of variable names.  Polynomials,
// forms and vector fields each carry a ChartPtr; operations mixing
// different charts are rejected.  Charts compare by content, so two
// independently built charts with the same name and variables are
// interchangeable.
struct Chart {
    std::string name;
    std::vector<std::string> vars;

    std::size_t dim() const noexcept { return vars.size(); }
};

using ChartPtr = std::shared_ptr<const Chart>;

// Validates that variable names are nonempty and pairwise distinct.
ChartPtr make_chart(std::string name, std::vector<std::string> vars);

// Chart with variables prefix0..prefix{n-1}.
ChartPtr make_coordinate_chart(std::string name, std::size_t n,
                               std::string_view prefix = "x");

// Chart of twice the dimension: the base variables followed by partner
// variables ("x..." -> "y...", otherwise suffixed with "_im").
ChartPtr make_doubled_chart(const ChartPtr& base);

bool same_chart(const ChartPtr& a, const ChartPtr& b) noexcept;

// Throws StructuralError naming the offending operation.
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what);

} // namespace vweb
