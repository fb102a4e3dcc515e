#include "qd/json_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "qd/errors.hpp"

namespace qd {

using nlohmann::json;

json bloch_to_json(const BlochTensor& n) {
    json entries = json::array();
    const auto& c = n.raw();
    for (std::size_t a = 1; a < c.size(); ++a) {
        if (c[a] == 0.0) continue;
        entries.push_back({{"a", index_to_string(a, n.n_qubits())}, {"value", c[a]}});
    }
    return {{"n_qubits", n.n_qubits()}, {"entries", entries}};
}

BlochTensor bloch_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n_qubits") || !j.contains("entries"))
        throw argument_error("Bloch tensor JSON needs 'n_qubits' and 'entries'");
    const int N = j.at("n_qubits").get<int>();
    BlochTensor n(N);
    std::set<std::size_t> seen;
    for (const auto& e : j.at("entries")) {
        const std::string key = e.at("a").get<std::string>();
        const std::size_t a = index_from_string(key, N);
        if (a == 0) throw argument_error("the all-identity word '" + key + "' is implicit and not storable");
        if (!seen.insert(a).second) throw argument_error("duplicate entry for word '" + key + "'");
        n.set_coeff(a, e.at("value").get<double>());
    }
    return n;
}

json density_to_json(const DensityMatrix& rho) {
    json entries = json::array();
    const auto& m = rho.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            entries.push_back({m(r, c).real(), m(r, c).imag()});
    return {{"n_qubits", rho.n_qubits()}, {"entries", entries}};
}

DensityMatrix density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n_qubits") || !j.contains("entries"))
        throw argument_error("density matrix JSON needs 'n_qubits' and 'entries'");
    const int N = j.at("n_qubits").get<int>();
    if (N < 1 || N > 12) throw argument_error("n_qubits out of the supported range");
    const Eigen::Index dim = Eigen::Index{1} << N;
    const auto& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != dim * dim)
        throw argument_error("entry count must be 4^N (row-major complex pairs)");
    Eigen::MatrixXcd m(dim, dim);
    Eigen::Index idx = 0;
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2) throw argument_error("entries must be [re, im] pairs");
        m(idx / dim, idx % dim) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
        ++idx;
    }
    return DensityMatrix::from_matrix(N, std::move(m));
}

json frame_to_json(const MeasurementFrame& f) {
    json axes = json::array();
    for (const auto& v : f.axes) axes.push_back({v[0], v[1], v[2]});
    return axes;
}

json norm_result_to_json(const NormResult& r) {
    return {{"value", r.value},
            {"frame", frame_to_json(r.frame)},
            {"converged", r.converged},
            {"iterations", r.iterations_used},
            {"restart_index", r.restart_index}};
}

json discord_result_to_json(const DiscordResult& r) {
    json out{{"ggqd", r.ggqd},
             {"max_C", r.max_C},
             {"frame", frame_to_json(r.optimal_frame)},
             {"method", to_string(r.method)}};
    if (r.gqd)
        out["gqd"] = *r.gqd;
    else
        out["gqd"] = nullptr;
    return out;
}

json transition_report_to_json(const TransitionReport& r) {
    json out{{"kind", to_string(r.kind)},
             {"min_gap", r.min_gap},
             {"raw_min_gap", r.raw_min_gap},
             {"slope_jump", r.slope_jump},
             {"slope_tol", r.slope_tol},
             {"dip_found", r.dip_found}};
    if (r.p_c)
        out["p_c"] = *r.p_c;
    else
        out["p_c"] = nullptr;
    return out;
}

json mc_report_to_json(const McReport& r) {
    json eps = json::array();
    for (const auto& st : r.stats)
        eps.push_back({{"epsilon", st.epsilon},
                       {"hits", st.hits},
                       {"probability", st.probability},
                       {"ci_low", st.ci_low},
                       {"ci_high", st.ci_high}});
    json out{{"n_qubits", r.config.n_qubits},
             {"spectrum", {r.config.spectrum[0], r.config.spectrum[1], r.config.spectrum[2]}},
             {"samples", r.config.samples},
             {"seed", r.config.seed},
             {"grid_points", r.config.grid_points},
             {"raw_unphysical_count", r.raw_unphysical_count},
             {"epsilons", eps}};
    if (r.slope)
        out["slope"] = {{"value", r.slope->slope},
                        {"std_error", r.slope->std_error},
                        {"points_used", r.slope->points_used}};
    else
        out["slope"] = nullptr;
    return out;
}

json energy_tensor_to_json(const EnergyTensor& t) {
    json coeffs = json::array();
    for (const auto& [vars, c] : t.coeffs)
        coeffs.push_back({{"vars", vars}, {"value", -c}}); // H-form
    return {{"num_vars", t.num_vars}, {"energy_constant", -t.constant}, {"coefficients", coeffs}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw argument_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw argument_error("cannot open '" + path + "'");
    std::uint64_t h = 1469598103934665603ull;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(chunk[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex;
    for (int i = 15; i >= 0; --i) os << "0123456789abcdef"[(h >> (4 * i)) & 0xf];
    return os.str();
}

} // namespace qd
