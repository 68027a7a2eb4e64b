#include "qstab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qstab::io {

namespace {

Rational rational_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("model file: rational entries are [num, den] pairs");
    return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
}

RationalMatrix matrix_from_json(const Json& j, int n, const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != n * n)
        throw std::invalid_argument("model file: " + name + " must hold " + std::to_string(n * n) +
                                    " row-major entries");
    RationalMatrix m(n);
    for (int i = 0; i < n * n; ++i) m.entries[i] = rational_from_json(j[i]);
    return m;
}

Json matrix_to_json(const RationalMatrix& m) {
    Json j = Json::array();
    for (const auto& e : m.entries) j.push_back({e.num, e.den});
    return j;
}

Json complex_to_json(Complex z) {
    return Json{{"re", z.real()}, {"im", z.imag()}};
}

// fixed float formatting: shortest round-trip via printf %.17g
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

gw::CohModel model_from_json(const Json& j) {
    gw::CohModel m;
    m.dim_x = j.at("dim_x").get<int>();
    for (const auto& b : j.at("basis"))
        m.basis.push_back({b.at("label").get<std::string>(), b.at("deg").get<int>()});
    const int n = m.dim();
    m.pairing = matrix_from_json(j.at("pairing"), n, "pairing");
    m.c1_cup = matrix_from_json(j.at("c1_cup"), n, "c1_cup");
    for (const auto& e : j.at("mu_diag")) m.mu_diag.push_back(rational_from_json(e));
    if (static_cast<int>(m.mu_diag.size()) != n)
        throw std::invalid_argument("model file: mu_diag length mismatch");
    if (j.contains("curve_classes"))
        for (const auto& c : j.at("curve_classes")) {
            gw::CurveClass cc;
            cc.label = c.at("label").get<std::string>();
            cc.c1_dot_d = c.at("c1_dot_d").get<int>();
            cc.omega_dot_d = c.at("omega_dot_d").get<double>();
            cc.b_dot_d = c.at("b_dot_d").get<double>();
            cc.t_d = matrix_from_json(c.at("t_d"), n, "t_d");
            m.curve_classes.push_back(std::move(cc));
        }
    return m;
}

gw::CohModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file " + path);
    Json j;
    in >> j;
    return model_from_json(j);
}

Json model_to_json(const gw::CohModel& model) {
    Json j;
    j["dim_x"] = model.dim_x;
    j["basis"] = Json::array();
    for (const auto& b : model.basis) j["basis"].push_back({{"label", b.label}, {"deg", b.deg}});
    j["pairing"] = matrix_to_json(model.pairing);
    j["c1_cup"] = matrix_to_json(model.c1_cup);
    j["mu_diag"] = Json::array();
    for (const auto& e : model.mu_diag) j["mu_diag"].push_back({e.num, e.den});
    j["curve_classes"] = Json::array();
    for (const auto& c : model.curve_classes)
        j["curve_classes"].push_back({{"label", c.label},
                                      {"c1_dot_d", c.c1_dot_d},
                                      {"omega_dot_d", c.omega_dot_d},
                                      {"b_dot_d", c.b_dot_d},
                                      {"t_d", matrix_to_json(c.t_d)}});
    return j;
}

mutation::PairedLattice decomposition_from_json(const Json& j) {
    mutation::PairedLattice dec;
    dec.rank = j.at("rank").get<int>();
    for (const auto& row : j.at("gram"))
        dec.gram.push_back(row.get<mutation::IntVector>());
    for (const auto& s : j.at("summands")) {
        std::vector<mutation::IntVector> basis;
        for (const auto& v : s) basis.push_back(v.get<mutation::IntVector>());
        dec.summands.push_back(std::move(basis));
    }
    if (j.contains("history"))
        for (const auto& h : j.at("history")) {
            const std::string s = h.get<std::string>();
            if (s.size() < 2 || (s[0] != 'L' && s[0] != 'R'))
                throw std::invalid_argument("decomposition file: history letters look like L1, R2");
            dec.history.push_back({std::stoi(s.substr(1)) - 1, s[0] == 'L'});
        }
    mutation::validate(dec);
    return dec;
}

mutation::PairedLattice load_decomposition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open decomposition file " + path);
    Json j;
    in >> j;
    return decomposition_from_json(j);
}

Json decomposition_to_json(const mutation::PairedLattice& dec) {
    Json j;
    j["rank"] = dec.rank;
    j["gram"] = dec.gram;
    Json summands = Json::array();
    for (const auto& s : dec.summands) summands.push_back(s);
    j["summands"] = summands;
    Json history = Json::array();
    for (const auto& h : dec.history)
        history.push_back(std::string(h.left ? "L" : "R") + std::to_string(h.index + 1));
    j["history"] = history;
    return j;
}

Json sod_to_json(const sod::SODResult& result) {
    Json j;
    j["clusters"] = Json::array();
    for (const auto& c : result.clusters) {
        Json jc;
        jc["alpha"] = complex_to_json(c.alpha);
        jc["gamma"] = complex_to_json(c.gamma);
        jc["members"] = Json::array();
        for (const auto& m : c.members) {
            Json jm;
            jm["label"] = m.label;
            Json cls = Json::array();
            for (int i = 0; i < m.class_v.size(); ++i) cls.push_back(complex_to_json(m.class_v(i)));
            jm["class"] = cls;
            jm["beta"] = complex_to_json(m.beta);
            jm["limit_Z"] = complex_to_json(m.limit_Z);
            jc["members"].push_back(jm);
        }
        j["clusters"].push_back(jc);
    }
    j["lattice_check"] = result.lattice_direct_sum ? "direct_sum" : "dependent";
    j["genericity"] = result.genericity_ok ? "ok" : "violated";
    j["spanning"] = Json::array();
    for (const auto& s : result.spanning)
        j["spanning"].push_back({{"r", s.r},
                                 {"dim_F", s.dim_f},
                                 {"dim_span", s.dim_span},
                                 {"status", s.holds ? "holds" : "deficient"}});
    return j;
}

void write_qde_trace(std::ostream& os, const qde::FundamentalSolution& sol) {
    if (sol.samples.empty()) return;
    const int n = static_cast<int>(sol.samples[0].phi.rows());
    os << "t";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) os << ",re_" << i << j << ",im_" << i << j;
    os << ",log_gauge\n";
    for (const auto& s : sol.samples) {
        os << fmt(s.t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                os << "," << fmt(s.phi(i, j).real()) << "," << fmt(s.phi(i, j).imag());
        os << "," << fmt(s.log_gauge) << "\n";
    }
}

void write_p1_trace(std::ostream& os, const p1::Path& path) {
    os << "t,re_tau,im_tau,k,re_phi_k,im_phi_k,re_Z_point,im_Z_point,re_Z_line,im_Z_line,"
          "in_eventual_regime\n";
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        const auto& p = path.samples[i];
        const bool eventual = path.eventual_t_star && path.t[i] >= *path.eventual_t_star;
        os << fmt(path.t[i]) << "," << fmt(p.tau.real()) << "," << fmt(p.tau.imag()) << ","
           << p.chart_k << "," << fmt(p.phi_k.real()) << "," << fmt(p.phi_k.imag()) << ","
           << fmt(p.Z_point.real()) << "," << fmt(p.Z_point.imag()) << "," << fmt(p.Z_line.real())
           << "," << fmt(p.Z_line.imag()) << "," << (eventual ? 1 : 0) << "\n";
    }
}

void write_curve_trace(std::ostream& os, const curves::HgPath& path) {
    os << "s,re_tau,im_tau,lifts_so_far\n";
    bool so_far = true;
    for (std::size_t i = 0; i < path.s.size(); ++i) {
        so_far = so_far && path.tau[i].imag() > 0.0;
        os << fmt(path.s[i]) << "," << fmt(path.tau[i].real()) << "," << fmt(path.tau[i].imag())
           << "," << (so_far ? 1 : 0) << "\n";
    }
}

void write_charges(std::ostream& os, const std::vector<sod::ChargeSeries>& series) {
    if (series.empty()) return;
    os << "t";
    for (const auto& s : series) os << ",re_" << s.label << ",im_" << s.label;
    os << "\n";
    for (std::size_t i = 0; i < series[0].t.size(); ++i) {
        os << fmt(series[0].t[i]);
        for (const auto& s : series) os << "," << fmt(s.Z[i].real()) << "," << fmt(s.Z[i].imag());
        os << "\n";
    }
}

std::vector<sod::ChargeSeries> load_charges(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open charge trace " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty charge trace " + path);

    std::vector<std::string> cols;
    std::stringstream hs(header);
    std::string field;
    while (std::getline(hs, field, ',')) cols.push_back(field);
    if (cols.size() < 3 || cols[0] != "t" || (cols.size() - 1) % 2 != 0)
        throw std::runtime_error("charge trace needs columns t, re_<label>, im_<label>, ...");

    std::vector<sod::ChargeSeries> series((cols.size() - 1) / 2);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const std::string& re_col = cols[1 + 2 * k];
        if (re_col.rfind("re_", 0) != 0)
            throw std::runtime_error("charge trace: expected re_<label>, got " + re_col);
        series[k].label = re_col.substr(3);
    }

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> vals;
        while (std::getline(ls, field, ',')) vals.push_back(std::stod(field));
        if (vals.size() != cols.size())
            throw std::runtime_error("charge trace: ragged row");
        for (std::size_t k = 0; k < series.size(); ++k) {
            series[k].t.push_back(vals[0]);
            series[k].Z.emplace_back(vals[1 + 2 * k], vals[2 + 2 * k]);
        }
    }
    return series;
}

Json csv_to_json(const std::string& csv_text) {
    std::stringstream in(csv_text);
    std::string line;
    Json j;
    j["columns"] = Json::array();
    j["rows"] = Json::array();
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string field;
        if (header) {
            while (std::getline(ls, field, ',')) j["columns"].push_back(field);
            header = false;
            continue;
        }
        Json row = Json::array();
        while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
        j["rows"].push_back(row);
    }
    return j;
}

std::string format_complex(Complex z) {
    std::string s = fmt(z.real());
    s += z.imag() < 0.0 ? " - " : " + ";
    s += fmt(std::abs(z.imag()));
    s += "i";
    return s;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
}

}  // namespace qstab::io
