#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zrp/oracle.hpp"
#include "zrp/random.hpp"
#include "zrp/selftest.hpp"
#include "zrp/serialize.hpp"
#include "zrp/spectral.hpp"

namespace {

using zrp::Complex;
using zrp::Json;

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::vector<std::string> outputs;
    std::map<std::string, double> timings; // reported on stderr only

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["seed"] = seed;
        j["config_digest"] = config_digest;
        j["outputs"] = outputs;
        return j;
    }
};

class Timer {
public:
    explicit Timer(Manifest& m, std::string key) : m_(m), key_(std::move(key)), t0_(clock::now()) {}
    ~Timer() {
        m_.timings[key_] =
            std::chrono::duration_cast<std::chrono::duration<double>>(clock::now() - t0_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    Manifest& m_;
    std::string key_;
    clock::time_point t0_;
};

int env_threads() {
    if (const char* v = std::getenv("ZRP_THREADS")) {
        const int n = std::atoi(v);
        if (n >= 1) return n;
    }
    return 1;
}

Eigen::MatrixXcd parse_hermitian(const std::string& text, const std::string& what) {
    const Json j = Json::parse(text);
    const Eigen::MatrixXcd M = zrp::matrix_from_json(j, what);
    if (M.rows() != M.cols()) throw zrp::Error(what + " must be square");
    // locate the worst entry so the error names it instead of symmetrizing
    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int r = 0; r < M.rows(); ++r)
        for (int c = 0; c < M.cols(); ++c) {
            const double d = std::abs(M(r, c) - std::conj(M(c, r)));
            if (d > worst) {
                worst = d;
                wi = r;
                wj = c;
            }
        }
    if (worst > 1e-12)
        throw zrp::NonHermitian(what + " is not Hermitian: entry (" + std::to_string(wi) + "," +
                                std::to_string(wj) + ") differs from the conjugate of (" +
                                std::to_string(wj) + "," + std::to_string(wi) + ") by " +
                                std::to_string(worst));
    return M;
}

void emit(const Json& doc, const Manifest& manifest) {
    Json out = doc;
    out["manifest"] = manifest.to_json();
    std::cout << zrp::dump17(out) << "\n";
    Json timings;
    for (const auto& [k, v] : manifest.timings) timings[k] = v;
    std::cerr << "timings " << timings.dump() << "\n";
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, Manifest& manifest) {
    std::ofstream out(path);
    if (!out) throw zrp::Error("cannot open " + path + " for writing");
    out << header << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
    manifest.outputs.push_back(path);
}

struct Defaults {
    double e_min = -10.0;
    double e_max = 0.99;
    double step = 0.01;
    double L = 20.0;
    double h = 0.01;
};

Defaults load_config(const std::string& path, std::string& digest) {
    Defaults d;
    if (path.empty()) {
        digest = zrp::fnv1a_hex("");
        return d;
    }
    std::ifstream in(path);
    if (!in) throw zrp::Error("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    digest = zrp::fnv1a_hex(text);
    const Json j = Json::parse(text);
    if (j.contains("scan")) {
        const Json& s = j["scan"];
        d.e_min = s.value("e_min", d.e_min);
        d.e_max = s.value("e_max", d.e_max);
        d.step = s.value("step", d.step);
    }
    if (j.contains("oracle")) {
        const Json& o = j["oracle"];
        d.L = o.value("L", d.L);
        d.h = o.value("h", d.h);
    }
    return d;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zrp: zero-range perturbations of -d^2/dx^2 + 1 via boundary triples"};
    app.set_help_flag("--help", "print help"); // keep -h free for oracle-compare --h
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config with default scan windows");

    // msol
    auto* msol = app.add_subcommand("msol", "fundamental solution m_j in closed form");
    int msol_index = 2;
    std::string msol_grid, msol_csv;
    msol->add_option("--index", msol_index, "index j of m_j")->required();
    msol->add_option("--grid", msol_grid, "comma-separated sample points");
    msol->add_option("--csv", msol_csv, "write samples as CSV (columns x,value)");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "bound states of a realization");
    std::string sp_family = "l2", sp_B = "[[0,0],[0,0]]", sp_csv;
    int sp_p = 2;
    double sp_mu = 1.0, sp_emin = 0, sp_emax = 0, sp_step = 0, sp_b3d = 1.0;
    int sp_k = 1;
    spectrum->add_option("--family", sp_family, "l2|sobolev|3d|nonlocal")->required();
    spectrum->add_option("--B", sp_B, "Hermitian coupling matrix (JSON)");
    spectrum->add_option("--p", sp_p, "Sobolev order (even)");
    spectrum->add_option("--mu", sp_mu, "3d: A = -Delta + mu^2");
    spectrum->add_option("--b", sp_b3d, "3d: coupling b");
    spectrum->add_option("--k", sp_k, "nonlocal: q = m_{2k}");
    spectrum->add_option("--emin", sp_emin, "scan window lower edge");
    spectrum->add_option("--emax", sp_emax, "scan window upper edge");
    spectrum->add_option("--step", sp_step, "scan step");
    spectrum->add_option("--csv", sp_csv, "write eigenvalue rows as CSV");

    // green-check
    auto* green = app.add_subcommand("green-check", "max Green-identity residual over random pairs");
    std::string gc_family = "l2";
    int gc_p = 1, gc_trials = 100;
    std::uint64_t gc_seed = 7;
    green->add_option("--family", gc_family, "l2|powers|sobolev")->required();
    green->add_option("--p", gc_p, "power/Sobolev order");
    green->add_option("--trials", gc_trials, "number of random pairs");
    green->add_option("--seed", gc_seed, "RNG seed");

    // admissible
    auto* adm = app.add_subcommand("admissible", "admissibility of B for (N, Gamma_0^R, Gamma_1)");
    std::string adm_B, adm_R, adm_gram;
    adm->add_option("--B", adm_B, "Hermitian B (JSON)")->required();
    adm->add_option("--R", adm_R, "Hermitian R (JSON)")->required();
    adm->add_option("--gram", adm_gram, "Hermitian gram matrix of P_N A on the intersection")->required();

    // invert
    auto* invert = app.add_subcommand("invert", "recover the singular potential basis");
    std::string inv_family = "l2", inv_R;
    int inv_p = 2;
    invert->add_option("--family", inv_family, "l2|sobolev")->required();
    invert->add_option("--p", inv_p, "Sobolev order (even)");
    invert->add_option("--R", inv_R, "regularization matrix (JSON; default canonical)");

    // oracle-compare
    auto* oc = app.add_subcommand("oracle-compare", "analytic spectra vs finite differences");
    oc->set_help_flag("--help", "print help");
    std::string oc_family = "l2-delta", oc_B = "[[-2,0],[0,0]]";
    double oc_L = 0, oc_h = 0;
    int oc_k = 3, oc_kq = 1;
    oc->add_option("--family", oc_family, "l2-delta|nonlocal")->required();
    oc->add_option("--B", oc_B, "Hermitian coupling matrix (JSON)");
    oc->add_option("--L", oc_L, "half-width of the grid");
    oc->add_option("--h", oc_h, "grid step");
    oc->add_option("--k", oc_k, "number of eigenvalues to compare");
    oc->add_option("--kq", oc_kq, "nonlocal: q = m_{2k}");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run every randomized property suite");
    std::uint64_t st_seed = 7;
    selftest->add_option("--seed", st_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    Manifest manifest;
    for (int i = 1; i < argc; ++i) manifest.command += std::string(i > 1 ? " " : "") + argv[i];

    try {
        Defaults defaults = load_config(config_path, manifest.config_digest);

        if (msol->parsed()) {
            Timer timer(manifest, "msol");
            const zrp::PiecewiseExpPoly m = zrp::fundamental_solution(msol_index);
            Json doc;
            doc["index"] = msol_index;
            doc["closed_form"] = zrp::exppoly_to_json(m);
            std::vector<std::vector<double>> rows;
            if (!msol_grid.empty()) {
                Json samples = Json::array();
                std::stringstream ss(msol_grid);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    const double x = std::stod(tok);
                    const Complex v = m(x == 0.0 ? 1e-300 : x);
                    samples.push_back(Json::array({x, v.real(), v.imag()}));
                    rows.push_back({x, v.real()});
                }
                doc["samples"] = samples;
            }
            if (!msol_csv.empty()) write_csv(msol_csv, "x,value", rows, manifest);
            emit(doc, manifest);
            return 0;
        }

        if (spectrum->parsed()) {
            Timer timer(manifest, "spectrum");
            zrp::ScanParams scan;
            scan.e_min = spectrum->count("--emin") ? sp_emin : defaults.e_min;
            scan.e_max = spectrum->count("--emax") ? sp_emax : defaults.e_max;
            scan.step = spectrum->count("--step") ? sp_step : defaults.step;
            scan.threads = env_threads();
            zrp::SpectrumReport rep;
            if (sp_family == "l2") {
                rep = zrp::bound_states_l2(zrp::l2_spec(parse_hermitian(sp_B, "B")), scan);
            } else if (sp_family == "sobolev") {
                rep = zrp::bound_states_sobolev(zrp::sobolev_spec(sp_p, parse_hermitian(sp_B, "B")),
                                                scan);
            } else if (sp_family == "nonlocal") {
                rep = zrp::bound_states_nonlocal(zrp::nonlocal_spec(sp_k, parse_hermitian(sp_B, "B")),
                                                 scan);
            } else if (sp_family == "3d") {
                rep = zrp::bound_state_3d(sp_b3d, sp_mu);
            } else {
                throw zrp::Error("unknown spectrum family " + sp_family);
            }
            Json doc = zrp::spectrum_report_to_json(rep);
            if (!sp_csv.empty()) {
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
                    rows.push_back({rep.eigenvalues[i], rep.residuals[i]});
                write_csv(sp_csv, "eigenvalue,residual", rows, manifest);
            }
            emit(doc, manifest);
            return 0;
        }

        if (green->parsed()) {
            Timer timer(manifest, "green_check");
            manifest.seed = gc_seed;
            zrp::Rng rng(gc_seed);
            double worst = 0.0;
            for (int t = 0; t < gc_trials; ++t) {
                if (gc_family == "l2") {
                    const zrp::PiecewiseExpPoly f = zrp::random_exppoly(rng);
                    const zrp::PiecewiseExpPoly g = zrp::random_exppoly(rng);
                    const Eigen::Matrix2cd R = (t % 2 == 0)
                                                   ? Eigen::Matrix2cd(zrp::canonical_r_l2())
                                                   : Eigen::Matrix2cd(zrp::random_hermitian(rng, 2));
                    worst = std::max(worst, zrp::green_residual_l2(f, g, R) /
                                                zrp::green_scale_l2(f, g, R));
                } else if (gc_family == "powers") {
                    const zrp::PiecewiseExpPoly f = zrp::random_exppoly(rng);
                    const zrp::PiecewiseExpPoly g = zrp::random_exppoly(rng);
                    worst = std::max(worst, zrp::green_residual_powers(f, g, gc_p) /
                                                zrp::green_scale_powers(f, g, gc_p));
                } else if (gc_family == "sobolev") {
                    const zrp::PiecewiseExpPoly f = zrp::random_scale_element(rng, gc_p);
                    const zrp::PiecewiseExpPoly g = zrp::random_scale_element(rng, gc_p);
                    worst = std::max(worst, zrp::green_residual_sobolev(f, g, gc_p) /
                                                zrp::green_scale_sobolev(f, g, gc_p));
                } else {
                    throw zrp::Error("unknown green-check family " + gc_family);
                }
            }
            Json doc;
            doc["family"] = gc_family;
            doc["p"] = gc_p;
            doc["trials"] = gc_trials;
            doc["max_residual"] = worst;
            emit(doc, manifest);
            return 0;
        }

        if (adm->parsed()) {
            Timer timer(manifest, "admissible");
            zrp::AdmissibilityData data;
            data.gram = parse_hermitian(adm_gram, "gram");
            data.dim_intersection = static_cast<int>(data.gram.rows());
            const auto result =
                zrp::admissible(parse_hermitian(adm_B, "B"), parse_hermitian(adm_R, "R"), data);
            Json doc;
            doc["admissible"] = result.admissible;
            if (!result.admissible) {
                Json w = Json::array();
                for (int i = 0; i < result.witness.size(); ++i)
                    w.push_back(zrp::complex_to_json(result.witness(i)));
                doc["witness"] = w;
            }
            emit(doc, manifest);
            return 0;
        }

        if (invert->parsed()) {
            Timer timer(manifest, "invert");
            zrp::TripleSpec triple;
            if (inv_family == "l2") {
                triple.family = zrp::TripleFamily::L2PointInteraction;
                triple.R = inv_R.empty() ? Eigen::MatrixXcd(zrp::canonical_r_l2())
                                         : parse_hermitian(inv_R, "R");
            } else if (inv_family == "sobolev") {
                triple.family = zrp::TripleFamily::Sobolev;
                triple.p = inv_p;
                triple.R = inv_R.empty() ? Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(inv_p + 2, inv_p + 2))
                                         : parse_hermitian(inv_R, "R");
            } else {
                throw zrp::Error("unknown invert family " + inv_family);
            }
            const zrp::RecoveredPotential rec = zrp::recover_potential(triple);
            Json basis = Json::array();
            for (const auto& psi : rec.psi_basis) basis.push_back(zrp::distributional_to_json(psi));
            Json doc;
            doc["psi_basis"] = basis;
            doc["effective_b_map"] = rec.effective_b_map;
            emit(doc, manifest);
            return 0;
        }

        if (oc->parsed()) {
            Timer timer(manifest, "oracle_compare");
            const double L = oc->count("--L") ? oc_L : defaults.L;
            const double h = oc->count("--h") ? oc_h : defaults.h;
            zrp::ScanParams scan;
            scan.e_min = defaults.e_min;
            scan.e_max = defaults.e_max;
            scan.step = defaults.step;
            scan.threads = env_threads();
            zrp::ExtensionSpec spec;
            zrp::SpectrumReport rep;
            if (oc_family == "l2-delta") {
                spec = zrp::l2_spec(parse_hermitian(oc_B, "B"));
                const double beta = spec.B(0, 0).real();
                scan.e_min = std::min(scan.e_min, -beta * beta / 4.0 - 2.0);
                rep = zrp::bound_states_l2(spec, scan);
            } else if (oc_family == "nonlocal") {
                spec = zrp::nonlocal_spec(oc_kq, parse_hermitian(oc_B, "B"));
                rep = zrp::bound_states_nonlocal(spec, scan);
            } else {
                throw zrp::Error("unknown oracle-compare family " + oc_family);
            }
            const zrp::GridOperator gop = zrp::discretize(spec, L, h);
            const auto oracle_evs = zrp::lowest_eigenvalues(gop, oc_k);
            Json doc;
            doc["analytic"] = rep.eigenvalues;
            doc["oracle"] = oracle_evs;
            Json diffs = Json::array();
            for (std::size_t i = 0; i < std::min(rep.eigenvalues.size(), oracle_evs.size()); ++i)
                diffs.push_back(std::abs(rep.eigenvalues[i] - oracle_evs[i]));
            doc["diffs"] = diffs;
            emit(doc, manifest);
            return 0;
        }

        if (selftest->parsed()) {
            Timer timer(manifest, "selftest");
            manifest.seed = st_seed;
            const auto results = zrp::run_selftest(st_seed);
            Json suites = Json::array();
            for (const auto& r : results)
                suites.push_back({{"name", r.name},
                                  {"trials", r.trials},
                                  {"max_residual", r.max_residual},
                                  {"tolerance", r.tolerance},
                                  {"pass", r.pass}});
            Json doc;
            doc["seed"] = st_seed;
            doc["suites"] = suites;
            doc["all_pass"] = zrp::all_pass(results);
            emit(doc, manifest);
            return zrp::all_pass(results) ? 0 : 3;
        }
    } catch (const zrp::NonHermitian& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zrp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
