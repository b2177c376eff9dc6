#include "alloyscope/synthetic.hpp"

#include <cmath>
#include <string>

#include "alloyscope/error.hpp"
#include "alloyscope/random.hpp"

namespace alloyscope {

namespace {

constexpr ElementRange kElements[kSyntheticInputs] = {
    {"Si", 0.0, 13.0},  {"Fe", 0.0, 1.2},  {"Cu", 0.0, 5.0},
    {"Mn", 0.0, 0.8},   {"Mg", 0.0, 1.5},  {"Cr", 0.0, 0.35},
    {"Ni", 0.0, 2.5},   {"Zn", 0.0, 3.0},  {"Ti", 0.0, 0.25},
    {"Zr", 0.0, 0.25},  {"V", 0.0, 0.15},  {"Sr", 0.0, 0.05},
};

// Reference means and standard deviations of a simulated Al casting-alloy
// population.
constexpr OutputReference kOutputs[kSyntheticOutputs] = {
    {"CSC", ColumnGroup::Property, "", 0.4562, 0.0637},
    {"YS", ColumnGroup::Property, "MPa", 277.798, 41.7141},
    {"hardness", ColumnGroup::Property, "HV", 84.986, 12.7542},
    {"CTEvol", ColumnGroup::Property, "1/K", 7.73e-5, 2.24e-6},
    {"density", ColumnGroup::Property, "g/cm3", 2.6964, 0.0162},
    {"volume", ColumnGroup::Property, "m3/mol", 1.02e-5, 3.59e-8},
    {"el_conductivity", ColumnGroup::Property, "S/m", 1.28e7, 6.79e5},
    {"el_resistivity", ColumnGroup::Property, "Ohm m", 7.83e-8, 4.20e-9},
    {"heat_capacity", ColumnGroup::Property, "J/(mol K)", 27.6340, 0.0910},
    {"therm_conductivity", ColumnGroup::Property, "W/(m K)", 176.168, 8.0090},
    {"therm_diffusivity", ColumnGroup::Property, "m2/s", 6.51e-5, 2.65e-6},
    {"therm_resistivity", ColumnGroup::Property, "m K/W", 5.69e-3, 2.61e-4},
    {"lin_thermal_exp", ColumnGroup::Property, "1/K", 2.58e-5, 7.48e-7},
    {"tech_thermal_exp", ColumnGroup::Property, "1/K", 2.35e-5, 6.82e-7},
    {"Vf_FCC_A1", ColumnGroup::Microstructure, "%", 88.4799, 3.5077},
    {"delta_T", ColumnGroup::Microstructure, "K", 120.2042, 9.5306},
    {"T_liq", ColumnGroup::Microstructure, "C", 658.3913, 6.4341},
    {"eut_frac", ColumnGroup::Microstructure, "%", 57.3786, 18.1783},
    {"Vf_DIAMOND_A4", ColumnGroup::Microstructure, "%", 3.1701, 1.9947},
    {"Vf_AL15SI2M4", ColumnGroup::Microstructure, "%", 2.2810, 0.5720},
};

constexpr std::string_view kScrap[kSyntheticScrapInputs] = {
    "scrap_primary", "scrap_cast", "scrap_wrought"};

double mixing_coefficient(std::size_t j, std::size_t i) {
  return std::cos(0.7 * static_cast<double>((i + 1) * (j + 1)) +
                  0.3 * static_cast<double>(j));
}

}  // namespace

std::span<const ElementRange, kSyntheticInputs> synthetic_elements() noexcept {
  return kElements;
}

std::span<const OutputReference, kSyntheticOutputs> synthetic_outputs() noexcept {
  return kOutputs;
}

Schema synthetic_schema() {
  Schema schema;
  for (auto name : kScrap) {
    schema.push_back({std::string(name), ColumnGroup::ScrapInput, "fraction"});
  }
  for (const auto& e : kElements) {
    schema.push_back({std::string(e.name), ColumnGroup::ElementFraction, "wt.%"});
  }
  for (const auto& o : kOutputs) {
    schema.push_back({std::string(o.name), o.group, std::string(o.units)});
  }
  return schema;
}

std::array<double, kSyntheticOutputs> synthetic_response(
    std::span<const double, kSyntheticInputs> elements,
    SyntheticResponse response) {
  std::array<double, kSyntheticInputs> centered{};
  for (std::size_t i = 0; i < kSyntheticInputs; ++i) {
    const auto& e = kElements[i];
    centered[i] = (elements[i] - e.lo) / (e.hi - e.lo) - 0.5;
  }
  std::array<double, kSyntheticOutputs> out{};
  for (std::size_t j = 0; j < kSyntheticOutputs; ++j) {
    double lin = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < kSyntheticInputs; ++i) {
      const double a = mixing_coefficient(j, i);
      lin += a * centered[i];
      norm2 += a * a;
    }
    const double scale = std::sqrt(norm2 / 12.0);
    double g = lin;
    if (response == SyntheticResponse::Nonlinear) {
      const auto p = j % kSyntheticInputs;
      const auto q = (j + 5) % kSyntheticInputs;
      g += 0.4 * std::sin(3.0 * lin) + 4.0 * centered[p] * centered[q];
    }
    out[j] = kOutputs[j].mean + kOutputs[j].std * g / scale;
  }
  return out;
}

Dataset synthesize_dataset(std::size_t n, std::uint64_t seed,
                           const SyntheticOptions& options) {
  if (n == 0) throw Error(ErrorCode::InvalidCount, "synthetic row count must be >= 1");
  auto schema = synthetic_schema();
  const auto cols = schema.size();
  std::vector<double> values;
  values.reserve(n * cols);
  std::vector<std::int64_t> ids(n);

  Rng rng(seed);
  std::array<double, kSyntheticInputs> elements{};
  for (std::size_t r = 0; r < n; ++r) {
    ids[r] = static_cast<std::int64_t>(r);

    // Scrap fractions: flat Dirichlet via normalized exponentials.
    std::array<double, kSyntheticScrapInputs> scrap{};
    double total = 0.0;
    for (auto& s : scrap) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      s = -std::log(u);
      total += s;
    }
    for (double s : scrap) values.push_back(s / total);

    for (std::size_t i = 0; i < kSyntheticInputs; ++i) {
      elements[i] = rng.uniform(kElements[i].lo, kElements[i].hi);
      values.push_back(elements[i]);
    }
    const auto y = synthetic_response(elements, options.response);
    for (std::size_t j = 0; j < kSyntheticOutputs; ++j) {
      double v = y[j];
      if (options.response == SyntheticResponse::Nonlinear && options.noise > 0.0) {
        v += kOutputs[j].std * options.noise * rng.normal();
      }
      values.push_back(v);
    }
  }
  return Dataset(std::move(schema), std::move(values), std::move(ids));
}

}  // namespace alloyscope
