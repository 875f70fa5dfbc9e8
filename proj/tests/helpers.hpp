#pragma once

#include <doctest.h>

#include "mf/harness.hpp"
#include "mf/io.hpp"
#include "mf/oracle.hpp"
#include "mf/outer.hpp"
#include "mf/product.hpp"
#include "mf/spaces.hpp"
#include "mf/theorem.hpp"

namespace mf::test {

inline Rational q(const char* text) { return parse_rational(text); }
inline ExtReal x(const char* text) { return ExtReal::parse(text); }
inline SetExpr iv(const char* lo, const char* hi) { return SetExpr::interval(q(lo), q(hi)); }

inline MeasureSpace line() { return {Universe::interval(), SemiringDesc::intervals(), MeasureDesc::length()}; }

inline MeasureSpace point_masses(std::vector<ExtReal> w) {
    const std::size_t n = w.size();
    return {Universe::finite(n), SemiringDesc::power_set(n), MeasureDesc::point_mass(std::move(w))};
}

inline MeasureSpace counting(std::size_t n) { return point_masses(std::vector<ExtReal>(n, ExtReal(1))); }

inline MeasureSpace tabulated(std::size_t n, std::vector<std::pair<FiniteSet, ExtReal>> table) {
    std::vector<FiniteSet> family;
    for (const auto& [s, v] : table) family.push_back(s);
    return {Universe::finite(n), SemiringDesc::explicit_family(n, family), MeasureDesc::tabulated(std::move(table))};
}

inline Rect rect(SetExpr b, SetExpr s) { return {std::move(b), std::move(s)}; }

}  // namespace mf::test
