#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mixmono/iteration.hpp"
#include "mixmono/serialize.hpp"
#include "mixmono/solver.hpp"

namespace mixmono {

/// Trace CSV: header row n,x0..x{d-1},y0..y{d-1},gap; floats carry 17
/// significant digits. The gap column is empty on non-numeric universes.
template <class E>
std::string trace_to_csv(const CoupledTrace<E>& t, const Universe<E>& u,
                         const std::function<std::vector<double>(const E&)>& coords) {
    std::string out = "n";
    if (t.count == 0) return out + ",gap\n";
    const std::size_t dim = coords(t.at(t.window_start).first).size();
    for (std::size_t i = 0; i < dim; ++i) out += ",x" + std::to_string(i);
    for (std::size_t i = 0; i < dim; ++i) out += ",y" + std::to_string(i);
    out += ",gap\n";
    for (std::size_t n = t.window_start; n < t.count; ++n) {
        const auto& [x, y] = t.at(n);
        out += std::to_string(n);
        for (double c : coords(x)) out += "," + fmt_double(c);
        for (double c : coords(y)) out += "," + fmt_double(c);
        out += ",";
        if (u.numeric()) out += fmt_double(u.distance(x, y));
        out += "\n";
    }
    return out;
}

template <class E>
std::string verdict_to_json(const AttractionVerdict<E>& v, const CoupledTrace<E>& t,
                            const std::function<std::vector<double>(const E&)>& coords) {
    JsonWriter w;
    auto element = [&](const std::optional<E>& e) {
        if (!e) {
            w.null();
            return;
        }
        w.begin_array();
        for (double c : coords(*e)) w.value(c);
        w.end_array();
    };
    w.begin_object();
    w.key("verdict").value(to_string(v.kind));
    w.key("x_star");
    element(v.x_star);
    w.key("fixed_point_confirmed").value(v.fixed_point_confirmed);
    w.key("fixed_point_image");
    element(v.certificate.fixed_point_image);
    w.key("fixed_point_residual");
    if (v.certificate.fixed_point_residual) {
        w.value(*v.certificate.fixed_point_residual);
    } else {
        w.null();
    }
    w.key("steps").value(static_cast<std::int64_t>(t.count));
    w.key("horizon_complete").value(t.horizon_complete);
    auto index = [&](const std::optional<std::size_t>& i) {
        if (i) {
            w.value(static_cast<std::int64_t>(*i));
        } else {
            w.null();
        }
    };
    w.key("lu_onset");
    index(t.lu_onset);
    w.key("equal_at");
    index(t.equal_at);
    w.key("empty_intersection_at");
    index(t.empty_intersection_at);
    w.key("method").value(v.certificate.method);
    w.key("intersection_size");
    index(v.certificate.intersection_size);
    w.key("note").value(v.certificate.note);
    w.end_object();
    return w.str();
}

inline std::string solve_report_to_json(const SolveReport& r) {
    JsonWriter w;
    w.begin_object();
    w.key("x_star").begin_array();
    for (double c : r.x_star.coords()) w.value(c);
    w.end_array();
    w.key("residual").value(r.residual);
    w.key("lambda0").value(r.lambda0);
    w.key("k0").value(r.k0);
    w.key("n0").value(r.n0);
    w.key("iterations").value(static_cast<std::int64_t>(r.iterations));
    w.key("lambda_final").value(r.lambda_final);
    w.end_object();
    return w.str();
}

}  // namespace mixmono
