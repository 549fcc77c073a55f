#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include "matchrobust/matchrobust.hpp"

namespace matchrobust::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kCsvHeader = "# matchrobust-csv v1\n";

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t trials = 1000;
  std::string grid = "default";
  std::size_t guard = oracle::kDefaultGuard;
  std::size_t cap = kDefaultEnumerationCap;
};

class BadInput : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw BadInput(what + ": not a number: '" + text + "'");
  }
  return v;
}

std::size_t parse_index(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw BadInput(what + ": not an index: '" + text + "'");
  }
  return std::stoull(text);
}

// "default", "coarse", "a:step:b" or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text == "default") {
    grid = default_grid();
  } else if (text == "coarse") {
    grid = coarse_grid();
  } else if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw BadInput("grid: expected start:step:end");
    const double a = parse_double(parts[0], "grid"), step = parse_double(parts[1], "grid"),
                 b = parse_double(parts[2], "grid");
    if (!(step > 0) || b < a) throw BadInput("grid: need step > 0 and start <= end");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(std::round((a + i * step) * 1e10) / 1e10);
  } else {
    for (const auto& p : split(text, ',')) grid.push_back(parse_double(p, "grid"));
  }
  if (grid.empty()) throw BadInput("grid: empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0 || grid[i] > 1) throw BadInput("grid: values must lie in [0, 1]");
    if (i && grid[i] <= grid[i - 1]) throw BadInput("grid: values must be strictly ascending");
  }
  return grid;
}

Pair parse_pair(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw BadInput("pair: expected 'man,woman'");
  return {parse_index(parts[0], "pair"), parse_index(parts[1], "pair")};
}

AgentId parse_agent(const std::string& text) {
  if (text.size() < 2 || (text[0] != 'm' && text[0] != 'w')) throw BadInput("agent: expected m<i> or w<i>");
  const auto i = parse_index(text.substr(1), "agent");
  return text[0] == 'm' ? AgentId::man(i) : AgentId::woman(i);
}

std::string agent_text(AgentId a) { return (a.side == Side::Man ? "m" : "w") + std::to_string(a.index); }

void check_pair(const Instance& inst, Pair p) {
  if (p.man >= inst.num_men() || p.woman >= inst.num_women()) throw BadInput("pair out of range");
}

void check_agent(const Instance& inst, AgentId a) {
  if (a.index >= inst.size(a.side)) throw BadInput("agent out of range");
}

const std::vector<std::string> kMatchingKinds{"men-opt", "women-opt", "summed-rank", "robust"};

Matching resolve_matching(const Instance& inst, const std::string& spec, const Globals& g) {
  if (spec == "men-opt") return gale_shapley(inst, Side::Man);
  if (spec == "women-opt") return gale_shapley(inst, Side::Woman);
  if (spec == "summed-rank") return summed_rank_min_matching(inst);
  if (spec == "robust") return proximity_robust_matching(inst, 5, g.cap);
  return parse_matching(read_text_file(spec), inst.num_men(), inst.num_women());
}

std::string matching_text(const Matching& m) {
  std::string out;
  for (const auto& p : m.pairs()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(p.man) + ":" + std::to_string(p.woman);
  }
  return out;
}

std::string optional_text(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

struct LoadedInstance {
  std::string id;
  std::string culture;
  Instance instance;
};

// Rows of manifest.csv in `dir`, instances loaded from the listed files.
std::vector<LoadedInstance> load_dataset(const std::string& dir) {
  const auto text = read_text_file((fs::path(dir) / "manifest.csv").string());
  std::vector<LoadedInstance> out;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line != "id,culture,param,n,seed,file") throw BadInput("manifest: unexpected header '" + line + "'");
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 6) throw BadInput("manifest line " + std::to_string(number) + ": expected 6 columns");
    out.push_back({cols[0], cols[1], read_instance_file((fs::path(dir) / cols[5]).string())});
  }
  if (out.empty()) throw BadInput("empty dataset: " + dir);
  return out;
}

std::vector<LoadedInstance> load_inputs(const std::string& dataset, const std::string& instance) {
  if (!dataset.empty()) return load_dataset(dataset);
  return {{fs::path(instance).stem().string(), "", read_instance_file(instance)}};
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Csv read_csv(const std::string& path) {
  Csv csv;
  std::istringstream is(read_text_file(path));
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, ',');
    if (csv.header.empty()) {
      csv.header = std::move(cols);
    } else {
      if (cols.size() != csv.header.size()) throw BadInput("csv: ragged row '" + line + "'");
      csv.rows.push_back(std::move(cols));
    }
  }
  if (csv.header.empty()) throw BadInput("csv: no header in " + path);
  return csv;
}

std::size_t column(const Csv& csv, const std::string& name) {
  for (std::size_t i = 0; i < csv.header.size(); ++i) {
    if (csv.header[i] == name) return i;
  }
  throw BadInput("csv: no column '" + name + "'");
}

MonteCarloConfig mc_config(const Globals& g, unsigned threads) {
  MonteCarloConfig cfg;
  cfg.trials = g.trials;
  cfg.seed = g.seed;
  cfg.threads = threads;
  return cfg;
}

// Commands.

struct GenerateOptions {
  std::string culture, preset, out, outdir, coords;
  std::optional<double> param;
  std::size_t n = 10;
  std::size_t per_culture = 10;
};

void cmd_generate(const GenerateOptions& o, const Globals& g, std::ostream& out) {
  if (o.preset.empty() == o.culture.empty()) throw BadInput("generate: give exactly one of --culture and --preset");
  if (!o.preset.empty()) {
    if (o.outdir.empty()) throw BadInput("generate: --preset needs --outdir");
    const auto entries = dataset(o.preset, o.n, g.seed, o.per_culture, g.threads);
    fs::create_directories(o.outdir);
    for (const auto& e : entries) {
      write_text_file((fs::path(o.outdir) / (e.id + ".sm")).string(), serialize_instance(e.instance));
    }
    write_text_file((fs::path(o.outdir) / "manifest.csv").string(), manifest_csv(entries));
    out << "wrote " << entries.size() << " instances to " << o.outdir << "\n";
    return;
  }
  const auto kind = parse_culture(o.culture);
  if (!kind) throw BadInput("unknown culture '" + o.culture + "'");
  CultureSpec spec{*kind, 0, o.n, g.seed};
  if (o.param) spec.param = *o.param;
  else if (culture_has_param(*kind)) spec.param = standard_params(*kind).front();
  const auto gen = generate_with_coordinates(spec);
  const auto text = serialize_instance(gen.instance);
  if (o.out.empty()) out << text;
  else write_text_file(o.out, text);
  if (!o.coords.empty()) write_text_file(o.coords, coordinates_csv(gen));
}

struct StableOptions {
  std::string instance, kind = "all";
  bool pairs = false, agents = false;
};

void cmd_stable(const StableOptions& o, const Globals& g, std::ostream& out) {
  const auto inst = read_instance_file(o.instance);
  if (o.pairs) {
    for (const auto& p : stable_pairs(inst)) out << p.man << ':' << p.woman << '\n';
    return;
  }
  if (o.agents) {
    for (const auto& a : stable_agents(inst)) out << agent_text(a) << '\n';
    return;
  }
  if (o.kind != "all") {
    out << matching_text(resolve_matching(inst, o.kind, g)) << '\n';
    return;
  }
  std::size_t count = 0;
  for_each_stable_matching(inst, g.cap, [&](const Matching& m) {
    out << matching_text(m) << '\n';
    ++count;
  });
  out << "count=" << count << '\n';
}

struct WorstcaseOptions {
  std::string instance, matching = "men-opt", mode = "matching", pair, agent;
  std::size_t blocking_pairs = 1;
  bool exactly = false, exhaustive = false, witness = false;
  std::optional<std::size_t> max_budget;
};

void print_witness(const WorstCaseResult& r, const char* label, std::ostream& out) {
  out << label << "-witness:";
  for (const auto& s : r.swaps) out << ' ' << agent_text(s.agent) << '@' << s.position;
  for (const auto& d : r.deletions) out << ' ' << agent_text(d);
  if (r.blocking) out << " blocking=" << r.blocking->man << ',' << r.blocking->woman;
  out << '\n';
}

void cmd_worstcase(const WorstcaseOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto inst = read_instance_file(o.instance);
  if (o.mode == "matching" && !o.exhaustive) {
    const auto m = resolve_matching(inst, o.matching, g);
    const auto s = matching_swap_robustness(inst, m);
    const auto d = matching_delete_robustness(inst, m);
    out << "swap=" << optional_text(s.budget) << " delete=" << optional_text(d.budget) << '\n';
    if (o.witness) {
      print_witness(s, "swap", out);
      print_witness(d, "delete", out);
    }
    return;
  }
  if (!o.exhaustive) throw BadInput("worstcase: mode '" + o.mode + "' needs --exact-exhaustive");

  oracle::WorstCaseTarget target;
  if (o.mode == "matching") {
    target = resolve_matching(inst, o.matching, g);
  } else if (o.mode == "pair") {
    const auto p = parse_pair(o.pair);
    check_pair(inst, p);
    target = p;
  } else if (o.mode == "agent") {
    const auto a = parse_agent(o.agent);
    check_agent(inst, a);
    target = a;
  } else if (o.mode == "blocking") {
    target = oracle::BlockingPairsTarget{resolve_matching(inst, o.matching, g), o.blocking_pairs, o.exactly};
  } else {
    throw BadInput("worstcase: unknown mode '" + o.mode + "'");
  }
  const auto budget = o.max_budget.value_or(inst.num_men() + inst.num_women());
  err << "note: exhaustive search up to budget " << budget << ", guard " << g.guard << '\n';
  const auto s = oracle::exhaustive_worstcase(inst, target, PerturbationMode::Swap, budget, g.guard);
  const auto d = oracle::exhaustive_worstcase(inst, target, PerturbationMode::Delete, budget, g.guard);
  out << "swap=" << optional_text(s.budget) << " delete=" << optional_text(d.budget) << '\n';
  if (o.witness) {
    print_witness(s, "swap", out);
    print_witness(d, "delete", out);
  }
}

struct ObjectOptions {
  std::string matching, pair, agent;
};

StabilityObject resolve_object(const Instance& inst, const ObjectOptions& o, const Globals& g) {
  const int given = !o.matching.empty() + !o.pair.empty() + !o.agent.empty();
  if (given > 1) throw BadInput("give at most one of --matching, --pair and --agent");
  if (!o.pair.empty()) {
    const auto p = parse_pair(o.pair);
    check_pair(inst, p);
    return p;
  }
  if (!o.agent.empty()) {
    const auto a = parse_agent(o.agent);
    check_agent(inst, a);
    return a;
  }
  return resolve_matching(inst, o.matching.empty() ? "men-opt" : o.matching, g);
}

struct CurveOptions {
  std::string instance;
  ObjectOptions object;
};

void cmd_curve(const CurveOptions& o, const Globals& g, std::ostream& out) {
  const auto inst = read_instance_file(o.instance);
  const auto grid = parse_grid(g.grid);
  const auto obj = resolve_object(inst, o.object, g);
  const auto curve = stability_curve(inst, obj, grid, mc_config(g, g.threads));
  out << kCsvHeader << "norm_phi,probability,trials\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << fmt(curve.grid[i]) << ',' << fmt(curve.probs[i]) << ',' << curve.trials << '\n';
  }
}

struct ThresholdOptions {
  std::string dataset, instance, kinds = "men-opt,summed-rank,robust";
  double avg_phi = 0.1;
  std::size_t depth = 5;
};

void cmd_thresholds(const ThresholdOptions& o, const Globals& g, std::ostream& out) {
  if (o.dataset.empty() == o.instance.empty()) throw BadInput("thresholds: give exactly one of --dataset and --instance");
  const auto kinds = split(o.kinds, ',');
  for (const auto& k : kinds) {
    if (std::find(kMatchingKinds.begin(), kMatchingKinds.end(), k) == kMatchingKinds.end()) {
      throw BadInput("thresholds: unknown matching kind '" + k + "'");
    }
  }
  const auto grid = parse_grid(g.grid);
  const auto inputs = load_inputs(o.dataset, o.instance);
  std::vector<std::string> rows(inputs.size());
  parallel_for(inputs.size(), g.threads, [&](std::size_t i) {
    const auto& in = inputs[i];
    std::vector<Matching> ms;
    for (const auto& k : kinds) ms.push_back(resolve_matching(in.instance, k, g));
    // Distinct matchings share perturbed instances.
    std::vector<StabilityObject> objects;
    std::vector<std::size_t> slot;
    for (const auto& m : ms) {
      std::size_t s = 0;
      while (s < objects.size() && std::get<Matching>(objects[s]) != m) ++s;
      if (s == objects.size()) objects.emplace_back(m);
      slot.push_back(s);
    }
    const auto cfg = mc_config(g, 1);
    const auto thresholds = fifty_percent_thresholds(in.instance, objects, grid, cfg);
    std::ostringstream os;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const auto prox = blocking_pair_proximity(in.instance, ms[k], o.depth).proximity;
      os << in.id << ',' << in.culture << ',' << kinds[k] << ',' << fmt(threshold_value(thresholds[slot[k]], grid))
         << ',' << (prox ? fmt(*prox) : "") << ',' << fmt(avg_blocking_pairs(in.instance, ms[k], o.avg_phi, cfg))
         << '\n';
    }
    rows[i] = os.str();
  });
  out << kCsvHeader << "id,culture,matching,threshold,proximity,avg_bp_at_" << fmt(o.avg_phi) << '\n';
  for (const auto& r : rows) out << r;
}

struct PairsOptions {
  std::string dataset, instance;
};

void cmd_pairs(const PairsOptions& o, const Globals& g, std::ostream& out) {
  if (o.dataset.empty() == o.instance.empty()) throw BadInput("pairs: give exactly one of --dataset and --instance");
  const auto grid = parse_grid(g.grid);
  if (!o.instance.empty()) {
    const auto inst = read_instance_file(o.instance);
    const auto stats = pair_statistics(inst, grid, mc_config(g, g.threads));
    out << kCsvHeader << "man,woman,threshold\n";
    for (std::size_t i = 0; i < stats.pairs.size(); ++i) {
      out << stats.pairs[i].man << ',' << stats.pairs[i].woman << ','
          << fmt(threshold_value(stats.thresholds[i], grid)) << '\n';
    }
    return;
  }
  const auto inputs = load_dataset(o.dataset);
  std::vector<std::string> rows(inputs.size());
  parallel_for(inputs.size(), g.threads, [&](std::size_t i) {
    const auto s = pair_statistics(inputs[i].instance, grid, mc_config(g, 1));
    std::ostringstream os;
    os << inputs[i].id << ',' << inputs[i].culture << ',' << s.pairs.size() << ',' << fmt(s.average) << ','
       << fmt(s.variance) << ',' << fmt(s.max) << ',' << fmt(s.min) << '\n';
    rows[i] = os.str();
  });
  out << kCsvHeader << "id,culture,pairs,average,variance,max,min\n";
  for (const auto& r : rows) out << r;
}

struct CountOptions {
  std::string instance, matching = "men-opt";
  std::size_t l = 0;
  double epsilon = 0.2;
  bool at_most = false, no_exact = false;
};

void cmd_count(const CountOptions& o, const Globals& g, std::ostream& out) {
  const auto inst = read_instance_file(o.instance);
  const auto m = resolve_matching(inst, o.matching, g);
  const std::size_t first = o.at_most ? 0 : o.l;
  BigCount sigma = 0, upper = 0, exact = 0;
  BigRational fpras = 0;
  std::size_t samples = 0;
  bool have_exact = !o.no_exact;
  for (std::size_t l = first; l <= o.l; ++l) {
    sigma += profiles_at_swap_distance(inst, l);
    upper += unstable_profiles_upper(inst, m, l);
    auto rng = make_stream(g.seed, {l});
    const auto est = fpras_unstable_count(inst, m, l, o.epsilon, rng);
    fpras += est.estimate;
    samples += est.samples;
    if (have_exact) {
      try {
        exact += oracle::exact_unstable_count(inst, m, l, g.guard);
      } catch (const GuardExceeded&) {
        have_exact = false;
      }
    }
  }
  out << "sigma=" << sigma << '\n';
  out << "b=" << upper << '\n';
  out << "fpras=" << fmt(fpras.convert_to<double>()) << '\n';
  out << "fpras_samples=" << samples << '\n';
  if (have_exact) out << "exact=" << exact << '\n';
  else out << "exact=unavailable\n";
}

struct CorrelateOptions {
  std::string csv, x, y;
  std::vector<std::string> where;
};

void cmd_correlate(const CorrelateOptions& o, std::ostream& out) {
  const auto csv = read_csv(o.csv);
  const auto xi = column(csv, o.x), yi = column(csv, o.y);
  std::vector<std::pair<std::size_t, std::string>> filters;
  for (const auto& w : o.where) {
    const auto eq = w.find('=');
    if (eq == std::string::npos) throw BadInput("--where: expected column=value");
    filters.emplace_back(column(csv, w.substr(0, eq)), w.substr(eq + 1));
  }
  std::vector<double> xs, ys;
  for (const auto& row : csv.rows) {
    bool keep = true;
    for (const auto& [c, v] : filters) keep = keep && row[c] == v;
    // Empty cells are sentinels (e.g. no proximity within depth).
    if (!keep || row[xi].empty() || row[yi].empty()) continue;
    xs.push_back(parse_double(row[xi], o.x));
    ys.push_back(parse_double(row[yi], o.y));
  }
  out << "pcc=" << fmt(pearson_correlation(xs, ys)) << '\n';
  out << "rows=" << xs.size() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness of stable matchings under swaps, deletions and Mallows noise", "matchrobust"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed; every command is deterministic under it");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware); output does not depend on it");
  app.add_option("--trials", g.trials, "Monte-Carlo trials per grid point")->check(CLI::PositiveNumber);
  app.add_option("--grid", g.grid, "norm-phi grid: default, coarse, start:step:end or a comma list");
  app.add_option("--guard", g.guard, "Work limit for exhaustive searches");
  app.add_option("--cap", g.cap, "Limit on enumerated stable matchings")->check(CLI::PositiveNumber);

  std::function<void()> action;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  GenerateOptions gen;
  auto* s_gen = sub("generate", "Write one instance or a named dataset (instances plus manifest.csv)");
  s_gen->add_option("--culture", gen.culture, "Culture name (ic, 2ic, 1d, 2d, reveuc, fameeuc, exeuc, attributes, "
                                              "nmallows, maleuc, malmd, malrob, identity, ma, md, robust)");
  s_gen->add_option("--param", gen.param, "Culture parameter (default: first standard value)");
  s_gen->add_option("--n", gen.n, "Agents per side")->check(CLI::PositiveNumber);
  s_gen->add_option("--out", gen.out, "Instance file (default: stdout)");
  s_gen->add_option("--coords", gen.coords, "Also write agent coordinates as CSV");
  s_gen->add_option("--preset", gen.preset, "Dataset preset: full, per-culture or smoke");
  s_gen->add_option("--outdir", gen.outdir, "Dataset directory");
  s_gen->add_option("--per-culture", gen.per_culture, "Instances per culture for the per-culture preset");
  s_gen->callback([&] { action = [&] { cmd_generate(gen, g, out); }; });

  StableOptions st;
  auto* s_st = sub("stable", "List stable matchings, stable pairs or stable agents");
  s_st->add_option("--instance", st.instance, "Instance file")->required();
  s_st->add_option("--kind", st.kind, "all, men-opt, women-opt, summed-rank or robust");
  s_st->add_flag("--pairs", st.pairs, "List stable pairs as man:woman");
  s_st->add_flag("--agents", st.agents, "List stable agents");
  s_st->callback([&] { action = [&] { cmd_stable(st, g, out); }; });

  WorstcaseOptions wc;
  auto* s_wc = sub("worstcase", "Worst-case robustness: minimum swaps and deletions that break an object");
  s_wc->add_option("--instance", wc.instance, "Instance file")->required();
  s_wc->add_option("--matching", wc.matching, "men-opt, women-opt, summed-rank, robust or a matching file");
  s_wc->add_option("--mode", wc.mode, "matching, pair, agent or blocking");
  s_wc->add_option("--pair", wc.pair, "Pair man,woman for --mode pair");
  s_wc->add_option("--agent", wc.agent, "Agent m<i> or w<i> for --mode agent");
  s_wc->add_option("--blocking-pairs", wc.blocking_pairs, "Blocking pairs to create for --mode blocking");
  s_wc->add_flag("--exactly", wc.exactly, "Require exactly --blocking-pairs blocking pairs");
  s_wc->add_flag("--exact-exhaustive", wc.exhaustive, "Use the guarded exhaustive search");
  s_wc->add_option("--max-budget", wc.max_budget, "Largest budget the exhaustive search tries (default n + m)");
  s_wc->add_flag("--witness", wc.witness, "Print the swaps or deletions found");
  s_wc->callback([&] { action = [&] { cmd_worstcase(wc, g, out, err); }; });

  CurveOptions cv;
  auto* s_cv = sub("curve", "CSV norm_phi,probability,trials for one object");
  s_cv->add_option("--instance", cv.instance, "Instance file")->required();
  s_cv->add_option("--matching", cv.object.matching, "Matching object (default men-opt)");
  s_cv->add_option("--pair", cv.object.pair, "Pair object man,woman");
  s_cv->add_option("--agent", cv.object.agent, "Agent object m<i> or w<i>");
  s_cv->callback([&] { action = [&] { cmd_curve(cv, g, out); }; });

  ThresholdOptions th;
  auto* s_th = sub("thresholds",
                   "CSV id,culture,matching,threshold,proximity,avg_bp_at_<phi>; a threshold that is never "
                   "reached is reported as the last grid value, a proximity with no pair within depth as empty");
  s_th->add_option("--dataset", th.dataset, "Dataset directory with manifest.csv");
  s_th->add_option("--instance", th.instance, "Single instance file");
  s_th->add_option("--kinds", th.kinds, "Comma list of matching kinds");
  s_th->add_option("--avg-phi", th.avg_phi, "norm-phi for the average blocking pairs column");
  s_th->add_option("--depth", th.depth, "Blocking-pair proximity depth");
  s_th->callback([&] { action = [&] { cmd_thresholds(th, g, out); }; });

  PairsOptions pr;
  auto* s_pr = sub("pairs",
                   "Stable-pair 50%-thresholds: CSV man,woman,threshold for --instance, "
                   "id,culture,pairs,average,variance,max,min for --dataset");
  s_pr->add_option("--dataset", pr.dataset, "Dataset directory with manifest.csv");
  s_pr->add_option("--instance", pr.instance, "Single instance file");
  s_pr->callback([&] { action = [&] { cmd_pairs(pr, g, out); }; });

  CountOptions ct;
  auto* s_ct = sub("count", "Profile counts at swap distance l: sigma, b, FPRAS estimate, exact count");
  s_ct->add_option("--instance", ct.instance, "Instance file")->required();
  s_ct->add_option("--matching", ct.matching, "men-opt, women-opt, summed-rank, robust or a matching file");
  s_ct->add_option("--l", ct.l, "Swap distance")->required();
  s_ct->add_option("--epsilon", ct.epsilon, "FPRAS relative error");
  s_ct->add_flag("--at-most", ct.at_most, "Sum over distances 0..l");
  s_ct->add_flag("--no-exact", ct.no_exact, "Skip the exhaustive exact count");
  s_ct->callback([&] { action = [&] { cmd_count(ct, g, out); }; });

  CorrelateOptions co;
  auto* s_co = sub("correlate", "Pearson correlation of two CSV columns; rows with an empty cell are skipped");
  s_co->add_option("--csv", co.csv, "CSV file")->required();
  s_co->add_option("--x", co.x, "First column")->required();
  s_co->add_option("--y", co.y, "Second column")->required();
  s_co->add_option("--where", co.where, "Keep rows with column=value (repeatable)");
  s_co->callback([&] { action = [&] { cmd_correlate(co, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kGuardExceeded;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << " (raise --cap)\n";
    return kGuardExceeded;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    // Parse errors, bad flags and precondition violations are all bad input.
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace matchrobust::cli
