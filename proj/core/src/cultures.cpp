#include "matchrobust/cultures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "matchrobust/mallows.hpp"
#include "matchrobust/parallel.hpp"
#include "matchrobust/rng.hpp"

namespace matchrobust {

namespace {

struct CultureInfo {
  CultureKind kind;
  const char* name;
  std::vector<double> params;
};

const std::vector<CultureInfo>& culture_table() {
  static const std::vector<CultureInfo> table = {
      {CultureKind::IC, "ic", {}},
      {CultureKind::TwoIC, "2ic", {0.25, 0.5}},
      {CultureKind::Euclid1D, "1d", {}},
      {CultureKind::Euclid2D, "2d", {}},
      {CultureKind::RevEuc, "reveuc", {0.05, 0.15, 0.25}},
      {CultureKind::FameEuc, "fameeuc", {0.2, 0.4}},
      {CultureKind::ExEuc, "exeuc", {0.2, 0.4}},
      {CultureKind::Attributes, "attributes", {2, 5}},
      {CultureKind::NormMallows, "nmallows", {0.2, 0.4, 0.6, 0.8}},
      {CultureKind::MalEuc, "maleuc", {0.2, 0.4}},
      {CultureKind::MalMD, "malmd", {0.2, 0.4, 0.6}},
      {CultureKind::MalROB, "malrob", {0.2, 0.4, 0.6, 0.8}},
      {CultureKind::Identity, "identity", {}},
      {CultureKind::MutualAgreement, "ma", {}},
      {CultureKind::MutualDisagreement, "md", {}},
      {CultureKind::Robust, "robust", {}},
  };
  return table;
}

const CultureInfo& info(CultureKind kind) {
  for (const auto& c : culture_table()) {
    if (c.kind == kind) return c;
  }
  throw std::invalid_argument("unknown culture");
}

bool is_extreme(CultureKind k) {
  return k == CultureKind::Identity || k == CultureKind::MutualAgreement ||
         k == CultureKind::MutualDisagreement || k == CultureKind::Robust;
}

using Lists = std::vector<std::vector<std::size_t>>;
using Points = std::vector<std::vector<double>>;

// Orders 0..count-1 by ascending key, ties by index.
template <class Key>
std::vector<std::size_t> rank_by(std::size_t count, Key&& key) {
  std::vector<double> keys(count);
  for (std::size_t b = 0; b < count; ++b) keys[b] = key(b);
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
  return order;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  shuffle(p.begin(), p.end(), rng);
  return p;
}

Points random_points(std::size_t count, std::size_t dim, Rng& rng) {
  Points pts(count, std::vector<double>(dim));
  for (auto& p : pts) {
    for (auto& x : p) x = uniform01(rng);
  }
  return pts;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Instance cyclic(std::size_t n, bool women_reversed, bool women_forward) {
  Lists men(n, std::vector<std::size_t>(n)), women(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) men[i][k] = (i + k) % n;
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (women_forward) women[j][k] = (j + k) % n;           // u_j, u_{j+1}, ...
      else if (women_reversed) women[j][k] = (j + 1 + k) % n;  // u_{j+1}, u_{j+2}, ..., u_j
      else women[j][k] = (j + n - k) % n;                     // u_j, u_{j-1}, ...
    }
  }
  return Instance(std::move(men), std::move(women));
}

Instance identity_instance(std::size_t n) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  return Instance(Lists(n, id), Lists(n, id));
}

Instance robust_instance(std::size_t n) { return cyclic(n, false, true); }
Instance agreement_instance(std::size_t n) { return cyclic(n, false, false); }
Instance disagreement_instance(std::size_t n) { return cyclic(n, true, false); }

// Lists from a key over (agent, opponent) pairs, ascending.
template <class MenKey, class WomenKey>
Instance from_keys(std::size_t n, MenKey&& men_key, WomenKey&& women_key) {
  Lists men(n), women(n);
  for (std::size_t a = 0; a < n; ++a) men[a] = rank_by(n, [&](std::size_t b) { return men_key(a, b); });
  for (std::size_t a = 0; a < n; ++a) women[a] = rank_by(n, [&](std::size_t b) { return women_key(a, b); });
  return Instance(std::move(men), std::move(women));
}

// Random subset of round(fraction * n) agents.
std::vector<bool> random_subset(std::size_t n, double fraction, Rng& rng) {
  const auto size = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  const auto order = random_permutation(n, rng);
  std::vector<bool> in(n, false);
  for (std::size_t i = 0; i < size && i < n; ++i) in[order[i]] = true;
  return in;
}

GeneratedInstance build(const CultureSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  auto rng = make_stream(spec.seed, {static_cast<std::uint64_t>(spec.kind)});
  GeneratedInstance g;
  g.spec = spec;

  auto euclid = [&](std::size_t dim) {
    g.men_coords = random_points(n, dim, rng);
    g.women_coords = random_points(n, dim, rng);
    return from_keys(
        n, [&](std::size_t a, std::size_t b) { return distance(g.men_coords[a], g.women_coords[b]); },
        [&](std::size_t a, std::size_t b) { return distance(g.women_coords[a], g.men_coords[b]); });
  };

  switch (spec.kind) {
    case CultureKind::IC: {
      Lists men(n), women(n);
      for (auto& l : men) l = random_permutation(n, rng);
      for (auto& l : women) l = random_permutation(n, rng);
      g.instance = Instance(std::move(men), std::move(women));
      break;
    }
    case CultureKind::TwoIC: {
      const auto men_group = random_subset(n, spec.param, rng);
      const auto women_group = random_subset(n, spec.param, rng);
      auto make = [&](const std::vector<bool>& own, const std::vector<bool>& other) {
        Lists lists(n);
        for (std::size_t a = 0; a < n; ++a) {
          std::vector<std::size_t> same, rest;
          for (std::size_t b = 0; b < n; ++b) (other[b] == own[a] ? same : rest).push_back(b);
          shuffle(same.begin(), same.end(), rng);
          shuffle(rest.begin(), rest.end(), rng);
          same.insert(same.end(), rest.begin(), rest.end());
          lists[a] = std::move(same);
        }
        return lists;
      };
      auto men = make(men_group, women_group);
      auto women = make(women_group, men_group);
      g.instance = Instance(std::move(men), std::move(women));
      for (std::size_t a = 0; a < n; ++a) {
        g.men_coords.push_back({men_group[a] ? 1.0 : 2.0});
        g.women_coords.push_back({women_group[a] ? 1.0 : 2.0});
      }
      break;
    }
    case CultureKind::Euclid1D:
      g.instance = euclid(1);
      break;
    case CultureKind::Euclid2D:
      g.instance = euclid(2);
      break;
    case CultureKind::RevEuc: {
      g.men_coords = random_points(n, 2, rng);
      g.women_coords = random_points(n, 2, rng);
      const auto men_rev = random_subset(n, spec.param, rng);
      const auto women_rev = random_subset(n, spec.param, rng);
      g.instance = from_keys(
          n,
          [&](std::size_t a, std::size_t b) {
            const double d = distance(g.men_coords[a], g.women_coords[b]);
            return men_rev[a] ? -d : d;
          },
          [&](std::size_t a, std::size_t b) {
            const double d = distance(g.women_coords[a], g.men_coords[b]);
            return women_rev[a] ? -d : d;
          });
      for (std::size_t a = 0; a < n; ++a) {
        g.men_coords[a].push_back(men_rev[a] ? 1.0 : 0.0);
        g.women_coords[a].push_back(women_rev[a] ? 1.0 : 0.0);
      }
      break;
    }
    case CultureKind::FameEuc: {
      g.men_coords = random_points(n, 2, rng);
      g.women_coords = random_points(n, 2, rng);
      for (auto& p : g.men_coords) p.push_back(spec.param * uniform01(rng));
      for (auto& p : g.women_coords) p.push_back(spec.param * uniform01(rng));
      // The fame of the evaluated agent lowers its distance.
      auto key = [](const std::vector<double>& a, const std::vector<double>& b) {
        return std::hypot(a[0] - b[0], a[1] - b[1]) - b[2];
      };
      g.instance = from_keys(
          n, [&](std::size_t a, std::size_t b) { return key(g.men_coords[a], g.women_coords[b]); },
          [&](std::size_t a, std::size_t b) { return key(g.women_coords[a], g.men_coords[b]); });
      break;
    }
    case CultureKind::ExEuc: {
      g.men_coords = random_points(n, 2, rng);
      g.women_coords = random_points(n, 2, rng);
      // Columns: wished-for location (x, y), actual location (x, y).
      for (auto* side : {&g.men_coords, &g.women_coords}) {
        for (auto& p : *side) {
          const double qx = p[0] + spec.param * standard_normal(rng);
          const double qy = p[1] + spec.param * standard_normal(rng);
          p.push_back(qx);
          p.push_back(qy);
        }
      }
      auto key = [](const std::vector<double>& a, const std::vector<double>& b) {
        return std::hypot(a[0] - b[2], a[1] - b[3]);
      };
      g.instance = from_keys(
          n, [&](std::size_t a, std::size_t b) { return key(g.men_coords[a], g.women_coords[b]); },
          [&](std::size_t a, std::size_t b) { return key(g.women_coords[a], g.men_coords[b]); });
      break;
    }
    case CultureKind::Attributes: {
      const auto d = static_cast<std::size_t>(std::llround(spec.param));
      // Columns: d attribute values, then d weights.
      g.men_coords = random_points(n, 2 * d, rng);
      g.women_coords = random_points(n, 2 * d, rng);
      auto key = [d](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < d; ++i) s += a[d + i] * b[i];
        return -s;
      };
      g.instance = from_keys(
          n, [&](std::size_t a, std::size_t b) { return key(g.men_coords[a], g.women_coords[b]); },
          [&](std::size_t a, std::size_t b) { return key(g.women_coords[a], g.men_coords[b]); });
      break;
    }
    case CultureKind::NormMallows: {
      const auto women_order = random_permutation(n, rng);  // center for men
      const auto men_order = random_permutation(n, rng);    // center for women
      const double phi = normalize(spec.param, n);
      Lists men(n), women(n);
      for (auto& l : men) l = sample_list(women_order, phi, rng);
      for (auto& l : women) l = sample_list(men_order, phi, rng);
      g.instance = Instance(std::move(men), std::move(women));
      break;
    }
    case CultureKind::MalEuc: {
      const auto base = euclid(2);
      g.instance = MallowsNoise(spec.param).perturb(base, rng);
      break;
    }
    case CultureKind::MalMD:
      g.instance = MallowsNoise(spec.param).perturb(disagreement_instance(n), rng);
      break;
    case CultureKind::MalROB:
      g.instance = MallowsNoise(spec.param).perturb(robust_instance(n), rng);
      break;
    case CultureKind::Identity:
      g.instance = identity_instance(n);
      break;
    case CultureKind::MutualAgreement:
      g.instance = agreement_instance(n);
      break;
    case CultureKind::MutualDisagreement:
      g.instance = disagreement_instance(n);
      break;
    case CultureKind::Robust:
      g.instance = robust_instance(n);
      break;
  }
  return g;
}

std::string format_param(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string culture_name(CultureKind kind) { return info(kind).name; }

std::optional<CultureKind> parse_culture(std::string_view name) {
  for (const auto& c : culture_table()) {
    if (name == c.name) return c.kind;
  }
  return std::nullopt;
}

std::vector<CultureKind> all_cultures() {
  std::vector<CultureKind> out;
  for (const auto& c : culture_table()) out.push_back(c.kind);
  return out;
}

bool culture_has_param(CultureKind kind) {
  return !info(kind).params.empty();
}

std::vector<double> standard_params(CultureKind kind) { return info(kind).params; }

void validate(const CultureSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("n must be positive");
  const double x = spec.param;
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(culture_name(spec.kind) + ": " + what);
  };
  switch (spec.kind) {
    case CultureKind::TwoIC:
      require(x >= 0 && x <= 0.5, "p must lie in [0, 0.5]");
      break;
    case CultureKind::RevEuc:
      require(x >= 0 && x <= 1, "p must lie in [0, 1]");
      break;
    case CultureKind::FameEuc:
      require(x >= 0 && x <= 1, "f must lie in [0, 1]");
      break;
    case CultureKind::ExEuc:
      require(x >= 0 && std::isfinite(x), "sigma must be non-negative");
      break;
    case CultureKind::Attributes:
      require(x >= 1 && x <= 1000 && x == std::floor(x), "dimension must be a positive integer");
      break;
    case CultureKind::NormMallows:
    case CultureKind::MalEuc:
    case CultureKind::MalMD:
    case CultureKind::MalROB:
      require(x >= 0 && x <= 1, "norm-phi must lie in [0, 1]");
      break;
    default:
      break;
  }
}

Instance generate(const CultureSpec& spec) { return build(spec).instance; }

GeneratedInstance generate_with_coordinates(const CultureSpec& spec) { return build(spec); }

std::string coordinates_csv(const GeneratedInstance& g) {
  std::ostringstream os;
  os.precision(17);
  os << "# matchrobust-csv v1\nside,index,values\n";
  auto emit = [&](const char* side, const Points& pts) {
    for (std::size_t a = 0; a < pts.size(); ++a) {
      os << side << ',' << a;
      for (auto x : pts[a]) os << ',' << x;
      os << '\n';
    }
  };
  emit("man", g.men_coords);
  emit("woman", g.women_coords);
  return os.str();
}

std::vector<DatasetEntry> dataset(std::string_view preset, std::size_t n, std::uint64_t master_seed,
                                  std::size_t per_culture, unsigned threads) {
  struct Job {
    std::string id;
    CultureSpec spec;
  };
  std::vector<Job> jobs;
  const auto& table = culture_table();
  for (std::size_t c = 0; c < table.size(); ++c) {
    const auto& culture = table[c];
    const std::vector<double> params = culture.params.empty() ? std::vector<double>{0.0} : culture.params;
    std::vector<std::pair<std::size_t, std::size_t>> picks;  // (param index, replicate)
    if (is_extreme(culture.kind)) {
      picks.push_back({0, 0});
    } else if (preset == "full") {
      for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t r = 0; r < 20; ++r) picks.push_back({p, r});
      }
    } else if (preset == "per-culture") {
      for (std::size_t r = 0; r < per_culture; ++r) picks.push_back({r % params.size(), r / params.size()});
    } else if (preset == "smoke") {
      picks.push_back({0, 0});
    } else {
      throw std::invalid_argument("unknown dataset preset: " + std::string(preset));
    }
    for (const auto& [p, r] : picks) {
      CultureSpec spec{culture.kind, params[p], n, derive_seed(master_seed, {c, p, r})};
      std::string id = culture.name;
      if (!culture.params.empty()) id += "-" + format_param(params[p]);
      if (!is_extreme(culture.kind)) id += "-" + std::to_string(r);
      jobs.push_back({std::move(id), spec});
    }
  }
  std::vector<DatasetEntry> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    out[i] = {jobs[i].id, jobs[i].spec, generate(jobs[i].spec)};
  });
  return out;
}

std::string manifest_csv(const std::vector<DatasetEntry>& entries, std::string_view extension) {
  std::ostringstream os;
  os << "# matchrobust-csv v1\nid,culture,param,n,seed,file\n";
  for (const auto& e : entries) {
    os << e.id << ',' << culture_name(e.spec.kind) << ',' << format_param(e.spec.param) << ',' << e.spec.n
       << ',' << e.spec.seed << ',' << e.id << extension << '\n';
  }
  return os.str();
}

}  // namespace matchrobust
