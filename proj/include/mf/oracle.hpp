#pragma once

// Reference checkers that share no code with the kernel: sets are point
// lists or membership vectors, arithmetic is Boost cpp_rational, and report
// checks read only JSON.

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace mf::oracle {

using Q = boost::multiprecision::cpp_rational;
using nlohmann::json;

/// A value in [0, inf].
struct XQ {
    bool inf = false;
    Q q = 0;

    static XQ infinity() { return {true, 0}; }
    friend XQ operator+(const XQ& a, const XQ& b);
    friend XQ operator*(const XQ& a, const XQ& b);
    friend bool operator==(const XQ& a, const XQ& b);
    friend bool operator<(const XQ& a, const XQ& b);
};

XQ parse_xq(const json& j);
std::string str(const XQ& x);

using Members = std::vector<bool>;

struct SemiringVerdict {
    bool valid = false;
    bool algebra = false;
    std::string failed_clause;
};

/// Semiring and algebra axioms by exhaustive scan of a family of point lists.
SemiringVerdict classify_family(std::size_t n, const std::vector<std::vector<std::size_t>>& family);

/// mu* of every subset of {0..n-1} as the minimum over all subfamilies that
/// cover it (inf when none does). Keyed by the sorted point list. At most
/// 20 members.
std::map<std::vector<std::size_t>, XQ> all_covers_outer(std::size_t n,
                                                        const std::vector<std::vector<std::size_t>>& family,
                                                        const std::vector<XQ>& values);

/// mu(set) for a space descriptor and a set, both as JSON.
XQ measure_of(const json& space, const json& set);

struct Recheck {
    bool ok = true;
    std::string reason;
};

/// Re-derives r s < sum_{n in F} mu_X(B_n) mu_Y(C_n) from an instance
/// {"x", "y", "cover"} and a witness report.
Recheck recheck_witness(const json& instance, const json& witness);

/// Sum of product measures over a finite family against the product of the
/// whole, from {"x", "y", "whole", "parts"}.
Recheck recheck_exact_sum(const json& instance);

/// (mu_X x mu_Y)*(D) for point masses on power sets: sum of w_x w_y over D.
XQ point_mass_product_outer(const std::vector<XQ>& wx, const std::vector<XQ>& wy,
                            const std::vector<std::pair<std::size_t, std::size_t>>& d);
/// mu_X{x : mu_Y(D^x) > 0} for point masses on power sets.
XQ point_mass_exceptional(const std::vector<XQ>& wx, const std::vector<XQ>& wy,
                          const std::vector<std::pair<std::size_t, std::size_t>>& d);

}  // namespace mf::oracle
