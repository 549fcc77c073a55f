#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matchrobust/model.hpp"

namespace matchrobust {

enum class CultureKind {
  IC,
  TwoIC,
  Euclid1D,
  Euclid2D,
  RevEuc,
  FameEuc,
  ExEuc,
  Attributes,
  NormMallows,
  MalEuc,
  MalMD,
  MalROB,
  Identity,
  MutualAgreement,
  MutualDisagreement,
  Robust,
};

/// Short name used on the command line and in manifests ("ic", "2ic", "robust", ...).
std::string culture_name(CultureKind kind);
std::optional<CultureKind> parse_culture(std::string_view name);
std::vector<CultureKind> all_cultures();

bool culture_has_param(CultureKind kind);

/// Parameter values of the standard mix; empty for unparameterized cultures.
std::vector<double> standard_params(CultureKind kind);

/// param: p for TwoIC/RevEuc, f for FameEuc, sigma for ExEuc, dimension for
/// Attributes, norm-phi for the Mallows cultures; ignored otherwise.
struct CultureSpec {
  CultureKind kind = CultureKind::IC;
  double param = 0;
  std::size_t n = 10;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument for out-of-range parameters or n = 0.
void validate(const CultureSpec& spec);

/// Instance plus the points or vectors it was derived from, per agent.
struct GeneratedInstance {
  CultureSpec spec;
  Instance instance;
  std::vector<std::vector<double>> men_coords;
  std::vector<std::vector<double>> women_coords;
};

Instance generate(const CultureSpec& spec);
GeneratedInstance generate_with_coordinates(const CultureSpec& spec);

/// "side,index,c0,c1,..." rows; empty body for cultures without coordinates.
std::string coordinates_csv(const GeneratedInstance& g);

struct DatasetEntry {
  std::string id;
  CultureSpec spec;
  Instance instance;
};

/// Named presets:
///  "full"        20 instances per parameter value of every culture plus the four extremes (544);
///  "per-culture" `per_culture` instances per culture, cycling through its parameter values, plus the extremes;
///  "smoke"       one instance per culture at its first parameter value plus the extremes.
/// Instance seeds derive from `master_seed`, so equal arguments give equal datasets.
std::vector<DatasetEntry> dataset(std::string_view preset, std::size_t n, std::uint64_t master_seed,
                                  std::size_t per_culture = 10, unsigned threads = 1);

/// "# matchrobust-csv v1" header, then id,culture,param,n,seed,file.
std::string manifest_csv(const std::vector<DatasetEntry>& entries, std::string_view extension = ".sm");

}  // namespace matchrobust
