#include "nfce/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace nfce {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       const std::optional<std::string>& banner) {
  if (banner) out << "# " << *banner << '\n';
  out << "n_h,n_v,spacing_wavelengths,estimator,hardware,mean_nmse,mean_kept_fraction,trials,seed\n";
  for (const auto& r : rows) {
    out << r.n_h << ',' << r.n_v << ',' << format_number(r.spacing) << ',' << to_string(r.estimator) << ','
        << to_string(r.hardware) << ',' << format_number(r.mean_nmse) << ','
        << (r.mean_kept_fraction ? format_number(*r.mean_kept_fraction) : std::string()) << ',' << r.trials
        << ',' << r.seed << '\n';
  }
}

std::string results_json(const std::vector<SummaryRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n_h"] = r.n_h;
    j["n_v"] = r.n_v;
    j["spacing_wavelengths"] = r.spacing;
    j["estimator"] = std::string(to_string(r.estimator));
    j["hardware"] = std::string(to_string(r.hardware));
    j["mean_nmse"] = r.mean_nmse;
    j["mean_kept_fraction"] = r.mean_kept_fraction ? nlohmann::ordered_json(*r.mean_kept_fraction) : nullptr;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

void write_spectrum_csv(std::ostream& out, const CenteredSpectrum& spectrum,
                        const std::optional<std::string>& banner) {
  if (banner) out << "# " << *banner << '\n';
  out << "row_bin,col_bin,normalized_power\n";
  for (int a = 0; a < spectrum.rows(); ++a)
    for (int b = 0; b < spectrum.cols(); ++b)
      out << spectrum.row_bin(a) << ',' << spectrum.col_bin(b) << ',' << format_number(spectrum.power(a, b))
          << '\n';
}

KeptFractionTable kept_fraction_table(const ExperimentResult& result, const std::vector<SubarraySize>& sizes,
                                      const std::vector<double>& spacings) {
  KeptFractionTable t{sizes, spacings, {}};
  for (double sp : spacings) {
    auto& row = t.fraction.emplace_back();
    for (const auto& s : sizes) row.push_back(result.cell(s, sp).mean_kept_fraction());
  }
  return t;
}

void write_kept_fraction_csv(std::ostream& out, const KeptFractionTable& table,
                             const std::optional<std::string>& banner) {
  if (banner) out << "# " << *banner << '\n';
  out << "spacing_wavelengths";
  for (const auto& s : table.sizes) out << ',' << s.n_h << 'x' << s.n_v;
  out << '\n';
  for (std::size_t r = 0; r < table.spacings.size(); ++r) {
    out << format_number(table.spacings[r]);
    for (double v : table.fraction[r]) out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace nfce
