#ifndef QSTAB_IO_HPP
#define QSTAB_IO_HPP

#include "qstab/curves.hpp"
#include "qstab/gw_model.hpp"
#include "qstab/mutation.hpp"
#include "qstab/qde.hpp"
#include "qstab/sod.hpp"
#include "qstab/stab_p1.hpp"

#include <json.hpp>
#include <iosfwd>

namespace qstab::io {

using Json = nlohmann::ordered_json;

/// Model file: {dim_x, basis:[{label,deg}], pairing, c1_cup, mu_diag,
/// curve_classes:[{label, c1_dot_d, omega_dot_d, b_dot_d, t_d}]} with
/// matrices flat row-major and every exact entry a [num, den] pair.
gw::CohModel load_model(const std::string& path);
gw::CohModel model_from_json(const Json& j);
Json model_to_json(const gw::CohModel& model);

/// Decomposition file: {rank, gram, summands:[[vec,...],...], history:[...]}.
mutation::PairedLattice load_decomposition(const std::string& path);
mutation::PairedLattice decomposition_from_json(const Json& j);
Json decomposition_to_json(const mutation::PairedLattice& dec);

Json sod_to_json(const sod::SODResult& result);

/// Trace CSV: t, Re/Im of each matrix entry (row-major), gauge scalar.
void write_qde_trace(std::ostream& os, const qde::FundamentalSolution& sol);

/// Path trace CSV: t, Re/Im tau, k, Re/Im phi_k, Re/Im Z_point, Re/Im Z_line,
/// in_eventual_regime flag.
void write_p1_trace(std::ostream& os, const p1::Path& path);

/// Curve path CSV: s, Re/Im tau, lifts_so_far.
void write_curve_trace(std::ostream& os, const curves::HgPath& path);

/// Charge series CSV with one t column and Re/Im pairs per labeled object;
/// the loader accepts the same layout for sod-from-trace.
void write_charges(std::ostream& os, const std::vector<sod::ChargeSeries>& series);
std::vector<sod::ChargeSeries> load_charges(const std::string& path);

/// The --format json variant of any trace: {"columns": [...], "rows": [[...]]},
/// built from the CSV text so the two formats never drift apart.
Json csv_to_json(const std::string& csv_text);

std::string format_complex(Complex z);
void write_text_file(const std::string& path, const std::string& body);

}  // namespace qstab::io

#endif
