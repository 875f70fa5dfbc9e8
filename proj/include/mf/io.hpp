#pragma once

// JSON encoding of spaces, sets, families and reports.
//
// Sets are written against a universe:
//   finite        [0, 2, 5]
//   rational line [["0/1", "1/2"], ["1/1", "2/1"]]     list of [lo, hi)
// Rationals are strings "p/q" (lowest terms), "k", or JSON integers; values
// in [0, inf] add "inf".
//
// Space descriptor:
//   { "universe":  {"finite": n} | "interval",
//     "semiring":  {"explicit": [set, ...]} | "power_set" | "interval",
//     "measure":   {"point_mass": [w0, w1, ...] | {"id": w, ...}}
//                | {"tabulated": [{"set": set, "value": v}, ...]}
//                | "length",
//     "sigma_finite": [set, ...] }                          (optional)
//
// Rectangle {"base": set, "side": set}. Family [rect, ...] or
// {"rects": [...], "tail": {"kind": "dyadic", "axis": "base"|"side",
//  "fixed": set, "lo": q, "hi": q}}. Product set [rect, ...],
// {"blocks": [...]} or {"points": [[x, y], ...]}.

#include <json.hpp>

#include "mf/outer.hpp"
#include "mf/product.hpp"
#include "mf/spaces.hpp"
#include "mf/theorem.hpp"

namespace mf::io {

using nlohmann::json;

Rational rational_from_json(const json& j);
ExtReal ext_from_json(const json& j);
json to_json(const ExtReal& x);
json to_json(const Rational& q);
json to_json(const Point& p);

SetExpr set_from_json(const json& j, const Universe& u);
json to_json(const SetExpr& s);

Universe universe_from_json(const json& j);
SemiringDesc semiring_from_json(const json& j, const Universe& u);
MeasureSpace space_from_json(const json& j);
json to_json(const Universe& u);
json to_json(const SemiringDesc& sr);
json to_json(const MeasureSpace& space);

Rect rect_from_json(const json& j, const Universe& x, const Universe& y);
RectFamily family_from_json(const json& j, const Universe& x, const Universe& y);
ProductSet product_set_from_json(const json& j, const Universe& x, const Universe& y);
json to_json(const Rect& r);
json to_json(const RectFamily& f);
json to_json(const ProductSet& d);

json to_json(const Violation& v);
json to_json(const CheckReport& r);
json to_json(const ValidationReport& r);
json to_json(const OuterValue& v);
json to_json(const Witness& w);
json to_json(const CertReport& r);
json to_json(const NullSectionVerdict& v);

}  // namespace mf::io
