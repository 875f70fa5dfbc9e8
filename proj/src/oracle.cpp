#include "mf/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mf::oracle {

namespace {

using boost::multiprecision::cpp_int;

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("oracle: " + what); }

Q parse_q(const json& j) {
    if (j.is_number_integer()) return Q(cpp_int(j.get<long long>()));
    if (!j.is_string()) fail("expected a rational, got " + j.dump());
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos) return Q(cpp_int(s));
    cpp_int den(s.substr(slash + 1));
    if (den == 0) fail("zero denominator in " + s);
    return Q(cpp_int(s.substr(0, slash)), den);
}

std::vector<std::size_t> point_list(const json& set) {
    std::vector<std::size_t> out;
    for (const auto& p : set) out.push_back(p.get<std::size_t>());
    std::sort(out.begin(), out.end());
    return out;
}

struct Piece {
    Q lo, hi;
};

std::vector<Piece> interval_list(const json& set) {
    std::vector<Piece> out;
    for (const auto& iv : set) {
        Piece p{parse_q(iv[0]), parse_q(iv[1])};
        if (p.lo < p.hi) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    std::vector<Piece> merged;
    for (const auto& p : out) {
        if (!merged.empty() && p.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, p.hi);
        } else {
            merged.push_back(p);
        }
    }
    return merged;
}

bool is_length(const json& space) { return space.at("measure") == "length"; }

bool point_in(const json& space, const json& set, const json& x) {
    if (is_length(space)) {
        Q q = parse_q(x);
        for (const auto& p : interval_list(set))
            if (p.lo <= q && q < p.hi) return true;
        return false;
    }
    auto pts = point_list(set);
    return std::binary_search(pts.begin(), pts.end(), x.get<std::size_t>());
}

json cover_rect(const json& cover, std::size_t n) {
    const json& rects = cover.is_object() ? cover.at("rects") : cover;
    if (n < rects.size()) return rects[n];
    if (!cover.is_object() || !cover.contains("tail")) fail("cover index " + std::to_string(n) + " out of range");
    const json& tail = cover.at("tail");
    std::size_t k = n - rects.size();
    Q lo = parse_q(tail.at("lo")), hi = parse_q(tail.at("hi"));
    Q w = hi - lo;
    Q a = hi - w / Q(cpp_int(1) << k);
    Q b = hi - w / Q(cpp_int(1) << (k + 1));
    auto str_q = [](const Q& q) {
        return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
    };
    json piece = json::array({json::array({str_q(a), str_q(b)})});
    if (tail.at("axis") == "base") return {{"base", piece}, {"side", tail.at("fixed")}};
    return {{"base", tail.at("fixed")}, {"side", piece}};
}

}  // namespace

XQ operator+(const XQ& a, const XQ& b) {
    if (a.inf || b.inf) return XQ::infinity();
    return {false, a.q + b.q};
}

XQ operator*(const XQ& a, const XQ& b) {
    if ((!a.inf && a.q == 0) || (!b.inf && b.q == 0)) return {};
    if (a.inf || b.inf) return XQ::infinity();
    return {false, a.q * b.q};
}

bool operator==(const XQ& a, const XQ& b) { return a.inf == b.inf && (a.inf || a.q == b.q); }

bool operator<(const XQ& a, const XQ& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.q < b.q;
}

XQ parse_xq(const json& j) {
    if (j == "inf") return XQ::infinity();
    XQ x{false, parse_q(j)};
    if (x.q < 0) fail("negative value " + j.dump());
    return x;
}

std::string str(const XQ& x) {
    if (x.inf) return "inf";
    return boost::multiprecision::numerator(x.q).str() + "/" + boost::multiprecision::denominator(x.q).str();
}

SemiringVerdict classify_family(std::size_t n, const std::vector<std::vector<std::size_t>>& family) {
    std::vector<Members> sets;
    for (const auto& f : family) {
        Members m(n, false);
        for (auto p : f) m.at(p) = true;
        sets.push_back(m);
    }
    const std::set<Members> lookup(sets.begin(), sets.end());
    const Members none(n, false), all(n, true);
    auto op = [n](const Members& a, const Members& b, auto f) {
        Members out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = f(a[i], b[i]);
        return out;
    };

    // Exact cover of `rest` by disjoint members, branching on its first point.
    std::set<Members> dead;
    auto decomposable = [&](auto&& self, const Members& rest) -> bool {
        auto first = std::find(rest.begin(), rest.end(), true);
        if (first == rest.end()) return true;
        if (dead.count(rest)) return false;
        const std::size_t p = static_cast<std::size_t>(first - rest.begin());
        for (const auto& m : sets) {
            if (!m[p]) continue;
            bool inside = true;
            for (std::size_t i = 0; i < n && inside; ++i) inside = !m[i] || rest[i];
            if (inside && self(self, op(rest, m, [](bool r, bool x) { return r && !x; }))) return true;
        }
        dead.insert(rest);
        return false;
    };

    SemiringVerdict v;
    v.valid = true;
    if (!lookup.count(none)) {
        v.valid = false;
        v.failed_clause = "contains_empty";
    }
    for (const auto& a : sets) {
        for (const auto& b : sets) {
            if (!v.valid) break;
            if (!lookup.count(op(a, b, [](bool x, bool y) { return x && y; }))) {
                v.valid = false;
                v.failed_clause = "intersection";
            } else if (!decomposable(decomposable, op(a, b, [](bool x, bool y) { return x && !y; }))) {
                v.valid = false;
                v.failed_clause = "difference";
            }
        }
    }
    v.algebra = lookup.count(none) && lookup.count(all);
    for (const auto& a : sets) {
        if (!v.algebra) break;
        if (!lookup.count(op(all, a, [](bool x, bool y) { return x && !y; }))) v.algebra = false;
        for (const auto& b : sets)
            if (!lookup.count(op(a, b, [](bool x, bool y) { return x || y; }))) v.algebra = false;
    }
    return v;
}

std::map<std::vector<std::size_t>, XQ> all_covers_outer(std::size_t n,
                                                        const std::vector<std::vector<std::size_t>>& family,
                                                        const std::vector<XQ>& values) {
    const std::size_t k = family.size();
    if (k > 20) fail("all-covers oracle limited to 20 members");
    std::vector<Members> sets;
    for (const auto& f : family) {
        Members m(n, false);
        for (auto p : f) m.at(p) = true;
        sets.push_back(m);
    }
    // Cheapest subfamily for each exact union.
    std::map<Members, XQ> best;
    std::vector<XQ> cost(std::size_t{1} << k);
    std::vector<Members> uni(std::size_t{1} << k, Members(n, false));
    best[Members(n, false)] = XQ{};
    for (std::size_t s = 1; s < cost.size(); ++s) {
        std::size_t low = 0;
        while (!((s >> low) & 1u)) ++low;
        const std::size_t prev = s & (s - 1);
        cost[s] = cost[prev] + values[low];
        uni[s] = uni[prev];
        for (std::size_t i = 0; i < n; ++i) uni[s][i] = uni[s][i] || sets[low][i];
        auto it = best.find(uni[s]);
        if (it == best.end()) {
            best.emplace(uni[s], cost[s]);
        } else if (cost[s] < it->second) {
            it->second = cost[s];
        }
    }
    std::map<std::vector<std::size_t>, XQ> out;
    for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
        std::vector<std::size_t> pts;
        for (std::size_t i = 0; i < n; ++i)
            if ((code >> i) & 1u) pts.push_back(i);
        XQ v = XQ::infinity();
        for (const auto& [u, c] : best) {
            bool covers = true;
            for (auto p : pts) covers = covers && u[p];
            if (covers && c < v) v = c;
        }
        out[pts] = v;
    }
    return out;
}

XQ measure_of(const json& space, const json& set) {
    const json& m = space.at("measure");
    if (m == "length") {
        Q total = 0;
        for (const auto& p : interval_list(set)) total += p.hi - p.lo;
        return {false, total};
    }
    if (m.contains("point_mass")) {
        const json& w = m.at("point_mass");
        XQ total;
        for (auto p : point_list(set)) total = total + parse_xq(w.is_array() ? w.at(p) : w.value(std::to_string(p), json("0")));
        return total;
    }
    if (m.contains("tabulated")) {
        auto pts = point_list(set);
        if (pts.empty()) return {};
        for (const auto& entry : m.at("tabulated"))
            if (point_list(entry.at("set")) == pts) return parse_xq(entry.at("value"));
        fail("set " + set.dump() + " is not tabulated");
    }
    fail("unknown measure " + m.dump());
}

Recheck recheck_witness(const json& instance, const json& witness) {
    Recheck out;
    auto reject = [&](std::string why) {
        out.ok = false;
        out.reason = std::move(why);
        return out;
    };
    try {
        const json& sx = instance.at("x");
        const json& sy = instance.at("y");
        const json& cover = instance.at("cover");
        XQ r = parse_xq(witness.at("r")), s = parse_xq(witness.at("s"));
        if (r.inf || s.inf || r.q <= 0 || s.q <= 0) return reject("r and s must be finite and positive");

        std::vector<std::size_t> f = witness.at("F").get<std::vector<std::size_t>>();
        if (f.empty()) return reject("F is empty");
        for (std::size_t i = 1; i < f.size(); ++i)
            if (f[i - 1] >= f[i]) return reject("F is not strictly increasing");

        std::set<std::size_t> from_m;
        for (const auto& choice : witness.at("M")) {
            XQ side;
            for (const auto& nj : choice.at("M_x")) {
                std::size_t n = nj.get<std::size_t>();
                json rect = cover_rect(cover, n);
                if (!point_in(sx, rect.at("base"), choice.at("x")))
                    return reject("x = " + choice.at("x").dump() + " is not in B_" + std::to_string(n));
                side = side + measure_of(sy, rect.at("side"));
                from_m.insert(n);
            }
            if (!(r < side)) return reject("sum of mu_Y(C_n) over M_x does not exceed r at x = " + choice.at("x").dump());
        }
        if (std::vector<std::size_t>(from_m.begin(), from_m.end()) != f) return reject("F is not the union of the M_x");

        const json& terms = witness.at("terms");
        if (terms.size() != f.size()) return reject("terms do not match F");
        XQ sum;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (terms[i].at("n").get<std::size_t>() != f[i]) return reject("terms do not match F");
            json rect = cover_rect(cover, f[i]);
            XQ mx = measure_of(sx, rect.at("base")), my = measure_of(sy, rect.at("side"));
            if (!(mx == parse_xq(terms[i].at("mu_x"))) || !(my == parse_xq(terms[i].at("mu_y"))))
                return reject("reported measures of term " + std::to_string(f[i]) + " are wrong");
            sum = sum + mx * my;
        }
        XQ lhs = r * s;
        if (!(lhs == parse_xq(witness.at("lhs")))) return reject("lhs is not r s");
        if (!(sum == parse_xq(witness.at("rhs")))) return reject("rhs is not the sum over F");
        if (!(lhs < sum)) return reject("r s = " + str(lhs) + " is not below " + str(sum));
    } catch (const std::exception& e) {
        return reject(std::string("malformed report: ") + e.what());
    }
    return out;
}

Recheck recheck_exact_sum(const json& instance) {
    Recheck out;
    try {
        const json& sx = instance.at("x");
        const json& sy = instance.at("y");
        const json& whole = instance.at("whole");
        XQ product = measure_of(sx, whole.at("base")) * measure_of(sy, whole.at("side"));
        XQ sum;
        const json& parts = instance.at("parts");
        for (const auto& rect : parts.is_object() ? parts.at("rects") : parts)
            sum = sum + measure_of(sx, rect.at("base")) * measure_of(sy, rect.at("side"));
        if (!(sum == product)) {
            out.ok = false;
            out.reason = "parts sum to " + str(sum) + ", product is " + str(product);
        }
    } catch (const std::exception& e) {
        out.ok = false;
        out.reason = std::string("malformed instance: ") + e.what();
    }
    return out;
}

XQ point_mass_product_outer(const std::vector<XQ>& wx, const std::vector<XQ>& wy,
                            const std::vector<std::pair<std::size_t, std::size_t>>& d) {
    XQ total;
    for (const auto& [x, y] : d) total = total + wx.at(x) * wy.at(y);
    return total;
}

XQ point_mass_exceptional(const std::vector<XQ>& wx, const std::vector<XQ>& wy,
                          const std::vector<std::pair<std::size_t, std::size_t>>& d) {
    std::vector<XQ> sec(wx.size());
    for (const auto& [x, y] : d) sec.at(x) = sec.at(x) + wy.at(y);
    XQ total;
    for (std::size_t x = 0; x < wx.size(); ++x)
        if (XQ{} < sec[x]) total = total + wx[x];
    return total;
}

}  // namespace mf::oracle
