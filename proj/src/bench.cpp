#include "grmapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "grmapf/io.hpp"
#include "grmapf/refine.hpp"
#include "json.hpp"

namespace grmapf {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

std::vector<Vertex> free_vertices(const GridSpec& g) {
  std::vector<Vertex> out;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (!g.blocked(v)) out.push_back(g.at(v));
  }
  return out;
}

std::vector<Vertex> sample(std::vector<Vertex> pool, int n, std::mt19937_64& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(idx(n));
  return pool;
}

Instance random_on(const GridSpec& g, double density, std::mt19937_64& rng, int total) {
  const auto pool = free_vertices(g);
  const int n = static_cast<int>(std::floor(density * total + 1e-9));
  if (n > static_cast<int>(pool.size())) throw PreconditionError("density exceeds the free vertex count");
  auto s = sample(pool, n, rng);
  auto t = sample(pool, n, rng);
  return Instance(g, std::move(s), std::move(t));
}

}  // namespace

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::kRandom: return "random";
    case Pattern::kSquares: return "squares";
    case Pattern::kBlocks: return "blocks";
    case Pattern::kSortation: return "sortation";
  }
  return "?";
}

Pattern parse_pattern(const std::string& s) {
  for (auto p : {Pattern::kRandom, Pattern::kSquares, Pattern::kBlocks, Pattern::kSortation}) {
    if (to_string(p) == s) return p;
  }
  throw PreconditionError("unknown pattern '" + s + "'");
}

InstanceSpec parse_dims(const std::string& dims) {
  InstanceSpec s;
  std::vector<int> v;
  std::stringstream ss(dims);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw PreconditionError("bad dimensions '" + dims + "'");
    }
  }
  if (v.size() < 2 || v.size() > 3 || *std::min_element(v.begin(), v.end()) <= 0) {
    throw PreconditionError("dimensions must look like 12x9 or 12x6x6");
  }
  s.rows = v[0];
  s.cols = v[1];
  s.layers = v.size() == 3 ? v[2] : 1;
  return s;
}

Instance generate_instance(const InstanceSpec& spec) {
  if (spec.density < 0.0 || spec.density > 1.0) throw PreconditionError("density must lie in [0, 1]");
  if (spec.rows <= 0 || spec.cols <= 0 || spec.layers <= 0) throw PreconditionError("dimensions must be positive");
  std::mt19937_64 rng(spec.seed);
  const int total = spec.rows * spec.cols * spec.layers;
  switch (spec.pattern) {
    case Pattern::kRandom:
      return random_on(GridSpec(spec.rows, spec.cols, spec.layers), spec.density, rng, total);
    case Pattern::kSortation: {
      if (spec.layers != 1) throw PreconditionError("sortation pattern is 2D");
      if (spec.density > 2.0 / 9.0 + 1e-12) throw PreconditionError("sortation density is at most 2/9");
      std::vector<Vertex> obs;
      for (int a = 0; a < spec.rows / 3; ++a) {
        for (int b = 0; b < spec.cols / 3; ++b) obs.push_back({3 * a + 1, 3 * b + 1, 0});
      }
      return random_on(GridSpec(spec.rows, spec.cols, 1, obs), spec.density, rng, total);
    }
    case Pattern::kSquares: {
      GridSpec g(spec.rows, spec.cols, spec.layers);
      std::vector<Vertex> s, t;
      if (spec.density > 0.0) {
        const int every = std::max(1, static_cast<int>(std::lround(1.0 / spec.density)));
        for (int z = 0; z < spec.layers; ++z) {
          for (int x = 0; x < spec.rows; ++x) {
            for (int y = 0; y < spec.cols; ++y) {
              const int ring = std::min({x, y, spec.rows - 1 - x, spec.cols - 1 - y});
              if (ring % every != 0) continue;
              s.push_back({x, y, z});
              t.push_back({spec.rows - 1 - x, spec.cols - 1 - y, z});
            }
          }
        }
      }
      return Instance(g, std::move(s), std::move(t));
    }
    case Pattern::kBlocks: {
      constexpr int kSide = 4;
      GridSpec g(spec.rows, spec.cols, spec.layers);
      const int br = spec.rows / kSide, bc = spec.cols / kSide;
      const int blocks = br * bc * spec.layers;
      const int per = static_cast<int>(std::lround(spec.density * kSide * kSide));
      std::vector<int> perm(idx(blocks));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      auto origin = [&](int b) {
        const int z = b % spec.layers;
        const int cell = b / spec.layers;
        return Vertex{(cell / bc) * kSide, (cell % bc) * kSide, z};
      };
      std::vector<int> offsets(kSide * kSide);
      std::vector<Vertex> s, t;
      for (int b = 0; b < blocks; ++b) {
        std::iota(offsets.begin(), offsets.end(), 0);
        std::shuffle(offsets.begin(), offsets.end(), rng);
        const Vertex o = origin(b), d = origin(perm[idx(b)]);
        for (int k = 0; k < per; ++k) {
          const int dx = offsets[idx(k)] / kSide, dy = offsets[idx(k)] % kSide;
          s.push_back({o.x + dx, o.y + dy, o.z});
          t.push_back({d.x + dx, d.y + dy, d.z});
        }
      }
      return Instance(g, std::move(s), std::move(t));
    }
  }
  throw PreconditionError("unknown pattern");
}

std::string config_label(const SolverConfig& c) {
  std::string s = to_string(c.algorithm);
  if (c.dimension == 3) s += "3d";
  if (c.matching == MatchingMode::kLba) s += "+lba";
  if (c.column_first) s += "+ll";
  if (c.refine) s += "+refine";
  return s;
}

BenchmarkRecord run_cell(const InstanceSpec& spec, const SolverConfig& config) {
  using clock = std::chrono::steady_clock;
  BenchmarkRecord r;
  r.spec = spec;
  r.config = config;
  r.label = config_label(config);
  try {
    const Instance inst = generate_instance(spec);
    r.agents = inst.size();
    SolverConfig base = config;
    base.refine = false;
    const auto t0 = clock::now();
    SolveResult res = solve(inst, base);
    const auto t1 = clock::now();
    r.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    r.synchronized_makespan = res.synchronized_makespan;
    r.shuffle_makespan = res.trace.shuffle_makespan();
    Plan plan = std::move(res.plan);
    if (config.refine) {
      const auto t2 = clock::now();
      plan = refine(inst, plan).plan;
      r.refine_ms = std::chrono::duration<double, std::milli>(clock::now() - t2).count();
    }
    const auto report = validate_plan(inst, plan);
    if (!report.ok()) {
      r.status = "invalid";
      r.error = report.summary(3);
      return r;
    }
    const auto m = compute_metrics(inst, plan);
    r.makespan = m.makespan;
    r.soc = m.soc;
    r.manhattan_lb = m.manhattan_lb;
    r.ratio = m.optimality_ratio;
    r.status = "valid";
  } catch (const std::exception& e) {
    r.status = "error";
    r.error = e.what();
  }
  return r;
}

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkSweep& sweep) {
  std::vector<std::pair<InstanceSpec, SolverConfig>> cells;
  for (const auto& shape : sweep.shapes) {
    for (const auto& cfg : sweep.configs) {
      for (int k = 0; k < sweep.seeds; ++k) {
        InstanceSpec s = shape;
        s.seed = sweep.base_seed + static_cast<std::uint64_t>(k);
        SolverConfig c = cfg;
        c.seed = s.seed;
        cells.emplace_back(s, c);
      }
    }
  }
  std::vector<BenchmarkRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) out[i] = run_cell(cells[i].first, cells[i].second);
  };
  const int jobs = std::max(1, sweep.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string record_to_json(const BenchmarkRecord& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["dims"] = std::to_string(r.spec.rows) + "x" + std::to_string(r.spec.cols) +
              (r.spec.layers > 1 ? "x" + std::to_string(r.spec.layers) : "");
  j["density"] = r.spec.density;
  j["pattern"] = to_string(r.spec.pattern);
  j["seed"] = r.spec.seed;
  j["algorithm"] = r.label;
  j["agents"] = r.agents;
  j["status"] = r.status;
  if (r.status == "valid") {
    j["makespan"] = r.makespan;
    j["synchronized_makespan"] = r.synchronized_makespan;
    j["soc"] = r.soc;
    j["manhattan_lb"] = r.manhattan_lb;
    if (r.ratio) j["optimality_ratio"] = *r.ratio;
    else j["optimality_ratio"] = "undefined";
    j["shuffle_makespan"] = r.shuffle_makespan;
  } else {
    j["error"] = r.error;
  }
  if (with_timing) {
    j["solve_ms"] = r.solve_ms;
    j["refine_ms"] = r.refine_ms;
  }
  return j.dump();
}

std::string summary_table(const std::vector<BenchmarkRecord>& records, bool with_timing) {
  struct Agg {
    int runs = 0, valid = 0, max_makespan = 0;
    double makespan = 0, ratio = 0, solve_ms = 0;
    int ratio_n = 0;
  };
  std::map<std::tuple<std::string, double, std::string, std::string>, Agg> cells;
  std::vector<std::tuple<std::string, double, std::string, std::string>> order;
  for (const auto& r : records) {
    const std::string dims = std::to_string(r.spec.rows) + "x" + std::to_string(r.spec.cols) +
                             (r.spec.layers > 1 ? "x" + std::to_string(r.spec.layers) : "");
    const auto key = std::make_tuple(dims, r.spec.density, to_string(r.spec.pattern), r.label);
    auto [it, fresh] = cells.try_emplace(key);
    if (fresh) order.push_back(key);
    Agg& a = it->second;
    ++a.runs;
    if (r.status != "valid") continue;
    ++a.valid;
    a.makespan += r.makespan;
    a.max_makespan = std::max(a.max_makespan, r.makespan);
    a.solve_ms += r.solve_ms + r.refine_ms;
    if (r.ratio) {
      a.ratio += *r.ratio;
      ++a.ratio_n;
    }
  }
  std::ostringstream os;
  os << std::left << std::setw(10) << "dims" << std::setw(9) << "density" << std::setw(11) << "pattern"
     << std::setw(22) << "algorithm" << std::right << std::setw(7) << "valid" << std::setw(11) << "mean_T"
     << std::setw(9) << "max_T" << std::setw(8) << "ratio";
  if (with_timing) os << std::setw(10) << "time_ms";
  os << "\n";
  os << std::fixed;
  for (const auto& key : order) {
    const Agg& a = cells.at(key);
    os << std::left << std::setw(10) << std::get<0>(key) << std::setw(9) << std::setprecision(4) << std::get<1>(key)
       << std::setw(11) << std::get<2>(key) << std::setw(22) << std::get<3>(key) << std::right << std::setw(7)
       << (std::to_string(a.valid) + "/" + std::to_string(a.runs));
    if (a.valid > 0) {
      os << std::setw(11) << std::setprecision(2) << a.makespan / a.valid << std::setw(9) << a.max_makespan;
      if (a.ratio_n > 0) os << std::setw(8) << std::setprecision(3) << a.ratio / a.ratio_n;
      else os << std::setw(8) << "-";
      if (with_timing) os << std::setw(10) << std::setprecision(1) << a.solve_ms / a.valid;
    }
    os << "\n";
  }
  return os.str();
}

void write_benchmark(const std::vector<BenchmarkRecord>& records, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::string results, timing;
  for (const auto& r : records) {
    results += record_to_json(r, false) + "\n";
    timing += record_to_json(r, true) + "\n";
  }
  const std::filesystem::path d(dir);
  write_file((d / "results.jsonl").string(), results);
  write_file((d / "timing.jsonl").string(), timing);
  write_file((d / "summary.txt").string(), summary_table(records));
}

}  // namespace grmapf
