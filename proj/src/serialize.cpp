#include "zrp/serialize.hpp"

#include <cinttypes>
#include <cstdio>

namespace zrp {

namespace {

std::string format_double(double v) {
    if (v == 0.0) return "0"; // avoid "-0"
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void dump17_impl(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump17_impl(it.value(), out);
            }
            out += '}';
            return;
        }
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump17_impl(v, out);
            }
            out += ']';
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(what + ": expected a number or [re, im]");
}

Json exppoly_to_json(const PiecewiseExpPoly& f) {
    auto side = [](const std::vector<ExpTerm>& terms) {
        Json arr = Json::array();
        for (const auto& t : terms)
            arr.push_back({{"c", complex_to_json(t.coeff)},
                           {"n", t.power},
                           {"mu", complex_to_json(t.rate)}});
        return arr;
    };
    return {{"right", side(f.right())}, {"left", side(f.left())}};
}

PiecewiseExpPoly exppoly_from_json(const Json& j) {
    auto side = [](const Json& arr, const char* what) {
        if (!arr.is_array()) throw Error(std::string(what) + ": expected an array of terms");
        std::vector<ExpTerm> terms;
        for (const auto& t : arr) {
            ExpTerm term;
            term.coeff = complex_from_json(t.at("c"), "term coefficient");
            term.power = t.at("n").get<int>();
            term.rate = complex_from_json(t.at("mu"), "term rate");
            terms.push_back(term);
        }
        return terms;
    };
    return PiecewiseExpPoly(side(j.value("right", Json::array()), "right"),
                            side(j.value("left", Json::array()), "left"));
}

Json distributional_to_json(const DistributionalValue& v) {
    Json deltas = Json::array();
    for (const auto& d : v.delta_coeffs) deltas.push_back(complex_to_json(d));
    return {{"regular", exppoly_to_json(v.regular)}, {"delta", deltas}};
}

Json boundary_data_to_json(const BoundaryData& b) {
    Json g0 = Json::array(), g1 = Json::array();
    for (int i = 0; i < b.gamma0.size(); ++i) g0.push_back(complex_to_json(b.gamma0(i)));
    for (int i = 0; i < b.gamma1.size(); ++i) g1.push_back(complex_to_json(b.gamma1(i)));
    return {{"gamma0", g0}, {"gamma1", g1}};
}

Json matrix_to_json(const Eigen::MatrixXcd& M) {
    Json rows = Json::array();
    for (int i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < M.cols(); ++j) {
            if (M(i, j).imag() == 0.0)
                row.push_back(M(i, j).real());
            else
                row.push_back(complex_to_json(M(i, j)));
        }
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw Error(what + ": expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = j[0].is_array() && (j[0].empty() || j[0][0].is_number() || j[0][0].is_array())
                         ? static_cast<int>(j[0].size())
                         : -1;
    if (cols <= 0) throw Error(what + ": expected rows to be arrays");
    Eigen::MatrixXcd M(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
            throw Error(what + ": ragged rows");
        for (int c = 0; c < cols; ++c) M(r, c) = complex_from_json(j[r][c], what);
    }
    return M;
}

Eigen::VectorXcd vector_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw Error(what + ": expected an array");
    Eigen::VectorXcd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i], what);
    return v;
}

Json spec_to_json(const ExtensionSpec& spec) {
    Json j;
    switch (spec.family) {
        case Family::L2PointInteraction: j["family"] = "l2"; break;
        case Family::StackedPower: j["family"] = "powers"; break;
        case Family::Sobolev: j["family"] = "sobolev"; break;
        case Family::Nonlocal: j["family"] = "nonlocal"; break;
        case Family::Point3D: j["family"] = "3d"; break;
        case Family::RankOneRegular: j["family"] = "rank1"; break;
    }
    j["B"] = matrix_to_json(spec.B);
    j["R"] = matrix_to_json(spec.R);
    if (spec.family == Family::Sobolev || spec.family == Family::StackedPower) j["p"] = spec.p;
    if (spec.family == Family::Nonlocal) j["k"] = spec.k;
    if (spec.family == Family::Point3D) j["mu"] = spec.mu;
    if (spec.family == Family::RankOneRegular) {
        j["alpha"] = spec.alpha;
        j["r"] = spec.r;
    }
    return j;
}

Json spectrum_report_to_json(const SpectrumReport& rep) {
    Json j;
    j["family"] = spec_to_json(rep.family);
    j["scan"] = {{"e_min", rep.scan.e_min},
                 {"e_max", rep.scan.e_max},
                 {"step", rep.scan.step},
                 {"refinement_tol", rep.scan.refinement_tol}};
    j["eigenvalues"] = rep.eigenvalues;
    Json funcs = Json::array();
    for (const auto& f : rep.eigenfunctions) funcs.push_back(exppoly_to_json(f));
    j["eigenfunctions"] = funcs;
    j["residuals"] = rep.residuals;
    Json tangent = Json::array();
    for (bool t : rep.tangent_roots) tangent.push_back(t);
    j["tangent_roots"] = tangent;
    j["rejected_roots"] = rep.rejected_roots;
    return j;
}

std::string dump17(const Json& j) {
    std::string out;
    dump17_impl(j, out);
    return out;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

} // namespace zrp
