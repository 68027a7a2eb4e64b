#include "qstab/bessel.hpp"
#include "qstab/contour.hpp"
#include "qstab/curves.hpp"
#include "qstab/gw_model.hpp"
#include "qstab/io.hpp"
#include "qstab/mutation.hpp"
#include "qstab/qde.hpp"
#include "qstab/sod.hpp"
#include "qstab/stab_p1.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qstab;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // internal / numerical failure
constexpr int kExitBoundary = 2;  // mathematically meaningful boundary case
constexpr int kExitBadInput = 3;

// "0.5", "pi", "pi/2", "-pi/3", "0.75pi"
double parse_angle(const std::string& text) {
    std::string s = text;
    double sign = 1.0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        if (s[0] == '-') sign = -1.0;
        s = s.substr(1);
    }
    const double pi = 3.14159265358979323846;
    const auto pos = s.find("pi");
    if (pos == std::string::npos) return sign * std::stod(s);
    const std::string pre = s.substr(0, pos);
    const std::string post = s.substr(pos + 2);
    double value = pre.empty() ? pi : std::stod(pre) * pi;
    if (!post.empty()) {
        if (post[0] != '/') throw CLI::ConversionError("angle", text);
        value /= std::stod(post.substr(1));
    }
    return sign * value;
}

// "1.5" or "1.5,-2" as re,im
Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

gw::CohModel resolve_model(const std::string& source, Complex a) {
    if (source == "builtin:p1") return gw::builtin_p1(a);
    if (source.rfind("builtin:curve:", 0) == 0)
        return gw::builtin_curve(std::stoi(source.substr(14)));
    return io::load_model(source);
}

std::filesystem::path out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / name;
}

struct P1Options {
    std::string a_text = "0", b_text = "0", phase_text;
    double t0 = 1.0, t1 = 60.0;
    int points = 2048;
    std::string output_dir = ".";
    double cluster_tol = 1e-4;
    double fit_tol = 1e-3;
    bool verify_glue = false;
};

int run_p1_path(const P1Options& opt) {
    if (opt.verify_glue) {
        double max_res = 0.0;
        std::ostringstream table;
        table << "x,re_residual,im_residual\n";
        for (int i = 0; i < 100; ++i) {
            const double x = -3.0 + 6.0 * i / 99.0;
            const Complex res = p1::glue_check(x);
            max_res = std::max(max_res, std::abs(res));
            table << x << "," << res.real() << "," << res.imag() << "\n";
        }
        io::write_text_file(out_path(opt.output_dir, "glue_check.csv").string(), table.str());
        std::cout << "glue identity residual over 100 points of [-3,3]: max |res| = " << max_res
                  << "\n";
        return max_res < 1e-9 ? kExitOk : kExitFailure;
    }

    Complex a = parse_complex(opt.a_text);
    Complex b = parse_complex(opt.b_text);
    if (!opt.phase_text.empty()) b += Complex(0.0, parse_angle(opt.phase_text));

    const Grid grid(opt.t0, opt.t1, opt.points);
    const p1::Path path = p1::qde_path(b, a, grid);

    {
        std::ofstream trace(out_path(opt.output_dir, "p1_path.csv"));
        io::write_p1_trace(trace, path);
    }
    std::cout << "chart k = " << path.chart_k << ", kappa = " << io::format_complex(path.kappa)
              << ", tail-law residual " << path.tail_law_residual << "\n";

    if (path.boundary_case) {
        std::cout << "boundary case: kappa is real, the path converges only in the partial\n"
                     "compactification; no Key-Lemma semiorthogonal decomposition is extracted\n";
        return kExitBoundary;
    }
    if (!path.eventual_t_star) {
        std::cout << "path never entered the eventual regime Im phi_k > pi on this grid\n";
        return kExitFailure;
    }

    const auto objects = p1::eventual_objects(path);
    std::vector<sod::ChargeSeries> series;
    for (const auto& obj : objects) {
        sod::ChargeSeries s;
        s.label = obj.label;
        s.class_v = obj.class_v;
        s.t = path.t;
        const bool low = obj.alpha == -path.kappa;
        for (std::size_t i = 0; i < path.samples.size(); ++i)
            s.Z.push_back(low ? path.samples[i].Z_line
                              : bessel::k0_plus_i_pi_i0(path.kappa * path.t[i]).value);
        series.push_back(std::move(s));
    }

    std::vector<sod::AsymptoticFit> fits;
    for (const auto& s : series) fits.push_back(sod::fit_asymptotics(s, {opt.fit_tol, false}));

    sod::SODResult result;
    try {
        result = sod::cluster_and_order(fits, opt.cluster_tol);
    } catch (const sod::GenericityViolation& violation) {
        std::cout << violation.what() << "\n";
        return kExitBoundary;
    }
    sod::build_sod(result, series);

    // spanning report at every distinct exponent level
    std::vector<double> levels;
    for (const auto& c : result.clusters) {
        bool seen = false;
        for (double r : levels) seen = seen || std::abs(r - c.alpha.real()) < 1e-9;
        if (!seen) levels.push_back(c.alpha.real());
    }
    qde::FundamentalSolution phi;
    phi.kind = qde::SolutionKind::numeric;
    for (std::size_t i = 0; i < path.t.size(); ++i)
        phi.samples.push_back({path.t[i], p1::matched_fundamental_solution(path, path.t[i]), 0.0});
    const gw::CohModel model = gw::builtin_p1(a);
    for (double r : levels)
        result.spanning.push_back(sod::spanning_check(phi, qde::integration_row(model), fits, r));

    const io::Json j = io::sod_to_json(result);
    io::write_text_file(out_path(opt.output_dir, "p1_sod.json").string(), j.dump(2) + "\n");
    std::cout << "clusters:";
    for (const auto& c : result.clusters) std::cout << " " << io::format_complex(c.alpha);
    std::cout << "\nsod report written to "
              << out_path(opt.output_dir, "p1_sod.json").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum differential equation paths on stability manifolds"};
    app.require_subcommand(1);

    P1Options p1opt;
    auto* p1cmd = app.add_subcommand("p1-path", "trace a QDE path through Stab(P1)/G_a");
    p1cmd->add_option("--a", p1opt.a_text, "parameter a (re or re,im)");
    p1cmd->add_option("--b", p1opt.b_text, "parameter b (re or re,im)");
    p1cmd->add_option("--phase", p1opt.phase_text, "adds i*angle to b (accepts pi/2 etc.)");
    p1cmd->add_option("--t0", p1opt.t0, "grid start");
    p1cmd->add_option("--t1", p1opt.t1, "grid end");
    p1cmd->add_option("--points", p1opt.points, "grid points");
    p1cmd->add_option("--output-dir", p1opt.output_dir, "artifact directory");
    p1cmd->add_option("--cluster-tol", p1opt.cluster_tol, "alpha clustering tolerance");
    p1cmd->add_option("--fit-tol", p1opt.fit_tol, "fit acceptance tolerance");
    p1cmd->add_flag("--verify-glue", p1opt.verify_glue, "run the 100-point gluing residual table");

    struct {
        int genus = 2;
        std::string theta_text = "0";
        bool canonical = false, safe = false;
        std::string a_text = "1", tau0_text = "0,1", tau_inf_text = "0,1";
        double s0 = 0.0, s1 = 1e6;
        int points = 512;
        std::string output_dir = ".";
    } cv;
    auto* cvcmd = app.add_subcommand("curve-path", "closed-form paths for genus >= 1 curves");
    cvcmd->add_option("--genus", cv.genus)->required();
    cvcmd->add_option("--theta", cv.theta_text, "angle (accepts pi/2 etc.)");
    cvcmd->add_flag("--canonical", cv.canonical, "Gamma-class path");
    cvcmd->add_flag("--safe", cv.safe, "segment path with a = e^{-i theta}");
    cvcmd->add_option("--a", cv.a_text, "path parameter a (re or re,im)");
    cvcmd->add_option("--tau0", cv.tau0_text, "tau_0 (re,im)");
    cvcmd->add_option("--tau-inf", cv.tau_inf_text, "tau_inf (re,im)");
    cvcmd->add_option("--s0", cv.s0);
    cvcmd->add_option("--s1", cv.s1);
    cvcmd->add_option("--points", cv.points);
    cvcmd->add_option("--output-dir", cv.output_dir);

    struct {
        std::string model = "builtin:p1";
        std::string a_text = "0", z_text = "1";
        double scale_omega = 1.0;
        std::string form = "modified";
        double t0 = 1.0, t1 = 60.0;
        int points = 256;
        std::string output_dir = ".";
    } qd;
    auto* qdcmd = app.add_subcommand("qde", "integrate the truncated quantum differential equation");
    qdcmd->add_option("--model", qd.model, "builtin:p1, builtin:curve:<g>, or a model file");
    qdcmd->add_option("--a", qd.a_text, "builtin:p1 parameter a");
    qdcmd->add_option("--z", qd.z_text, "parameter z (re or re,im)");
    qdcmd->add_option("--scale-omega", qd.scale_omega, "global omega multiplier r");
    qdcmd->add_option("--form", qd.form)->check(CLI::IsMember({"raw", "modified"}));
    qdcmd->add_option("--t0", qd.t0);
    qdcmd->add_option("--t1", qd.t1);
    qdcmd->add_option("--points", qd.points);
    qdcmd->add_option("--output-dir", qd.output_dir);

    struct {
        std::string kind = "line";
        std::string kappa_t_text = "1";
        std::string theta_text = "0";
    } ct;
    auto* ctcmd = app.add_subcommand("contour", "mirror contour integrals vs the Bessel oracle");
    ctcmd->add_option("--kind", ct.kind)->check(CLI::IsMember({"point", "line"}));
    ctcmd->add_option("--kappa-t", ct.kappa_t_text, "the product kappa*t (re or re,im)");
    ctcmd->add_option("--theta", ct.theta_text, "contour angle for the line contour");

    struct {
        std::string file;
        std::string word;
        std::string output = "mutated.json";
    } mt;
    auto* mtcmd = app.add_subcommand("mutate", "lattice mutations of an ordered decomposition");
    mtcmd->add_option("--file", mt.file, "decomposition JSON")->required();
    mtcmd->add_option("--word", mt.word, "braid word, e.g. L1,R2");
    mtcmd->add_option("--output", mt.output, "output JSON path");

    struct {
        std::string model;
        std::string a_text = "0";
    } vm;
    auto* vmcmd = app.add_subcommand("validate-model", "check the gw model invariants");
    vmcmd->add_option("--model", vm.model, "builtin:p1, builtin:curve:<g>, or a model file")
        ->required();
    vmcmd->add_option("--a", vm.a_text, "builtin:p1 parameter a");

    struct {
        std::string trace;
        std::string classes_file;
        std::string semistable = "*";
        double cluster_tol = 1e-4;
        double fit_tol = 1e-3;
        std::string output = "sod.json";
    } st;
    auto* stcmd = app.add_subcommand("sod-from-trace", "run the extractor on a charge-trace CSV");
    stcmd->add_option("--trace", st.trace, "CSV with t, re_<label>, im_<label> columns")
        ->required();
    stcmd->add_option("--classes-file", st.classes_file,
                      "JSON {label: [[re,im],...]} of lattice classes; unit vectors by default");
    stcmd->add_option("--declare-semistable", st.semistable,
                      "comma-separated labels, or * for all");
    stcmd->add_option("--cluster-tol", st.cluster_tol);
    stcmd->add_option("--fit-tol", st.fit_tol);
    stcmd->add_option("--output", st.output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (p1cmd->parsed()) return run_p1_path(p1opt);

        if (cvcmd->parsed()) {
            const double theta = parse_angle(cv.theta_text);
            std::vector<double> s_grid(cv.points);
            for (int i = 0; i < cv.points; ++i)
                s_grid[i] = cv.s0 + (cv.s1 - cv.s0) * i / (cv.points - 1);
            curves::HgPath path;
            if (cv.canonical) {
                path = curves::canonical_path(cv.genus, theta, s_grid);
            } else if (cv.safe) {
                path = curves::safe_path(cv.genus, theta, parse_complex(cv.tau0_text),
                                         parse_complex(cv.tau_inf_text), s_grid);
            } else {
                path = curves::path_tau(cv.genus, theta, parse_complex(cv.a_text),
                                        parse_complex(cv.tau0_text),
                                        parse_complex(cv.tau_inf_text), s_grid);
            }
            std::ofstream trace(out_path(cv.output_dir, "curve_path.csv"));
            io::write_curve_trace(trace, path);
            std::cout << "lifts = " << (path.lifts ? "true" : "false")
                      << ", min Im tau = " << path.min_im_tau
                      << ", |tau(s1)| = " << std::abs(path.tau.back()) << "\n";
            if (path.output == curves::OutputKind::two_step_filtration)
                std::cout << "output: two-step filtration 0 < torsion < all "
                             "(boundary limit, no SOD)\n";
            return kExitOk;
        }

        if (qdcmd->parsed()) {
            const gw::CohModel model = resolve_model(qd.model, parse_complex(qd.a_text));
            const auto report = gw::validate_model(model);
            if (!report.pass) {
                for (const auto& v : report.violations) std::cerr << "invalid model: " << v << "\n";
                return kExitBadInput;
            }
            const gw::TruncationParams params(parse_complex(qd.z_text), qd.scale_omega);
            const Grid grid(qd.t0, qd.t1, qd.points);
            const Matrix phi0 = Matrix::Identity(model.dim(), model.dim());
            const auto sol = qd.form == "raw"
                                 ? qde::integrate_raw(model, params, phi0, grid)
                                 : qde::integrate_modified(model, params, phi0, grid);
            std::ofstream trace(out_path(qd.output_dir, "qde_trace.csv"));
            io::write_qde_trace(trace, sol);
            const auto spec = qde::asymptotic_spectrum(model, params);
            std::cout << "asymptotic spectrum of -(1/z)E_psi(1):";
            for (int i = 0; i < spec.eigenvalues.size(); ++i)
                std::cout << " " << io::format_complex(spec.eigenvalues(i));
            std::cout << "\nramification order p = "
                      << (spec.ramification_order == 1 ? "1" : "unknown") << "\n";
            return kExitOk;
        }

        if (ctcmd->parsed()) {
            const Complex kt = parse_complex(ct.kappa_t_text);
            if (ct.kind == "point") {
                const auto q = contour::skyscraper_charge(kt, 1.0);
                const Complex oracle = Complex(0, 3.14159265358979323846) * bessel::i0(kt).value;
                std::cout << "contour value  " << io::format_complex(q.value) << "\n"
                          << "i pi I0(kt)    " << io::format_complex(oracle) << "\n"
                          << "abs difference " << std::abs(q.value - oracle) << "\n";
            } else {
                const double theta = parse_angle(ct.theta_text);
                const auto q = contour::linebundle_charge(kt, 1.0, theta);
                const Complex oracle = bessel::k0(kt).value;
                std::cout << "contour value  " << io::format_complex(q.value) << "\n"
                          << "K0(kt)         " << io::format_complex(oracle) << "\n"
                          << "abs difference " << std::abs(q.value - oracle) << "\n";
            }
            return kExitOk;
        }

        if (mtcmd->parsed()) {
            mutation::PairedLattice dec = io::load_decomposition(mt.file);
            std::vector<mutation::BraidLetter> word;
            std::stringstream ws(mt.word);
            std::string letter;
            while (std::getline(ws, letter, ',')) {
                if (letter.empty()) continue;
                if (letter[0] != 'L' && letter[0] != 'R')
                    throw std::invalid_argument("braid letters look like L1 or R2");
                word.push_back({std::stoi(letter.substr(1)) - 1, letter[0] == 'L'});
            }
            dec = mutation::braid_apply(dec, word);
            io::write_text_file(mt.output, io::decomposition_to_json(dec).dump(2) + "\n");
            std::cout << "mutated decomposition written to " << mt.output << "\n";
            return kExitOk;
        }

        if (vmcmd->parsed()) {
            const gw::CohModel model = resolve_model(vm.model, parse_complex(vm.a_text));
            const auto report = gw::validate_model(model);
            if (report.pass) {
                std::cout << "pass: all invariants hold\n";
                return kExitOk;
            }
            for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
            return kExitBadInput;
        }

        if (stcmd->parsed()) {
            auto series = io::load_charges(st.trace);
            if (!st.classes_file.empty()) {
                std::ifstream in(st.classes_file);
                if (!in) throw std::runtime_error("cannot open " + st.classes_file);
                io::Json j;
                in >> j;
                for (auto& s : series) {
                    if (!j.contains(s.label)) continue;
                    const auto& arr = j.at(s.label);
                    s.class_v = Vector(arr.size());
                    for (std::size_t i = 0; i < arr.size(); ++i)
                        s.class_v(i) = Complex(arr[i][0].get<double>(), arr[i][1].get<double>());
                }
            }
            for (std::size_t k = 0; k < series.size(); ++k) {
                if (series[k].class_v.size() == 0) {
                    series[k].class_v = Vector::Zero(series.size());
                    series[k].class_v(k) = 1.0;
                }
                series[k].eventually_semistable =
                    st.semistable == "*" ||
                    (("," + st.semistable + ",").find("," + series[k].label + ",") !=
                     std::string::npos);
            }
            std::vector<sod::AsymptoticFit> fits;
            for (const auto& s : series)
                fits.push_back(sod::fit_asymptotics(s, {st.fit_tol, false}));
            sod::SODResult result;
            try {
                result = sod::cluster_and_order(fits, st.cluster_tol);
            } catch (const sod::GenericityViolation& violation) {
                std::cout << violation.what() << "\n";
                return kExitBoundary;
            }
            sod::build_sod(result, series);
            io::write_text_file(st.output, io::sod_to_json(result).dump(2) + "\n");
            std::cout << "sod report written to " << st.output << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& err) {
        std::cerr << "bad input: " << err.what() << "\n";
        return kExitBadInput;
    } catch (const std::domain_error& err) {
        std::cerr << "bad input: " << err.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& err) {
        std::cerr << "failure: " << err.what() << "\n";
        return kExitFailure;
    }
    return kExitBadInput;
}
