#include "qswitch/cli.hpp"

#include "qswitch/correlation.hpp"
#include "qswitch/noise.hpp"
#include "qswitch/optics.hpp"
#include "qswitch/polytope.hpp"
#include "qswitch/spacetime.hpp"
#include "qswitch/statistics.hpp"
#include "qswitch/switch_model.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace qswitch::cli {

namespace {

using nlohmann::json;

constexpr double kOpticsTolerance = 1e-9;

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json config_to_json(const RunConfig& c) {
  json j = {{"command", c.command},   {"shots", c.shots},
            {"seed", c.seed},         {"visibility", round_sig12(c.visibility)},
            {"dephasing", round_sig12(c.dephasing)}, {"jitter", round_sig12(c.jitter)},
            {"format", c.format},     {"output", c.output},
            {"threads", c.threads}};
  if (c.command == "bound") j["restricted"] = c.restricted;
  if (c.command == "sweep") j["grid"] = c.grid;
  if (c.command == "spacetime") j["events"] = c.events;
  if (c.command == "optics-check") {
    j["dump_network"] = c.dump_network;
    if (c.corrupt_angle != 0.0) j["corrupt_angle"] = round_sig12(c.corrupt_angle);
  }
  return j;
}

NoiseParams noise_params(const RunConfig& c) {
  NoiseParams p{c.visibility, c.dephasing, c.jitter};
  p.validate();
  return p;
}

json estimate_json(const Estimate& e) {
  return {{"value", round_sig12(e.value)}, {"std_error", round_sig12(e.std_error)}};
}

json strategy_json(const DeterministicStrategy& s) {
  return {{"index", s.index()},
          {"order", s.order() == CausalOrder::kAlice1First ? "A1<A2" : "A2<A1"},
          {"f1", s.f1()},
          {"f2", s.f2()},
          {"h", s.h()},
          {"k", s.k()}};
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

std::string cmd_predict(const RunConfig& c) {
  const CorrelationTable table = noisy_table(noise_params(c), c.seed);
  if (c.format == "csv") return table_to_csv(table);
  return render({{"config", config_to_json(c)},
                 {"terms", breakdown_to_json(vbc_terms(table))},
                 {"classical_bound", "7/4"},
                 {"table", table_to_json(table)}});
}

std::string cmd_bound(const RunConfig& c) {
  const StrategyClass cls = c.restricted ? StrategyClass::kRestricted : StrategyClass::kFull;
  const ClassicalMaxResult result = classical_max(cls, c.threads);

  if (c.format == "csv") {
    std::ostringstream os;
    os << "index,order,f1,f2,h,k,total\n";
    for (std::uint32_t idx : result.optima) {
      const DeterministicStrategy s(idx);
      os << idx << ',' << static_cast<int>(s.order()) << ',' << s.f1() << ',' << s.f2() << ','
         << s.h() << ',' << s.k() << ',' << to_string(exact_terms(s).total) << '\n';
    }
    return os.str();
  }

  // The textbook optimum: order A1<A2, a1 = 0, a2 = x1, b = 0, c = 0.
  DeterministicStrategy witness(CausalOrder::kAlice1First, 0x0, 0xCC, 0x0, 0x0);
  if (cls == StrategyClass::kRestricted) witness = DeterministicStrategy(result.optima.front());
  const ExactBreakdown w = exact_terms(witness);
  json witness_json = strategy_json(witness);
  witness_json["terms"] = {{"term1", to_string(w.term1)},
                           {"term2", to_string(w.term2)},
                           {"term3", to_string(w.term3)},
                           {"total", to_string(w.total)}};
  witness_json["evaluation"] =
      to_string(w.term1) + " + " + to_string(w.term2) + " + " + to_string(w.term3) + " = " +
      to_string(w.total);
  witness_json["is_optimal"] = w.total == result.max;

  json sample = json::array();
  for (std::size_t i = 0; i < result.optima.size() && i < 8; ++i) {
    sample.push_back(strategy_json(DeterministicStrategy(result.optima[i])));
  }
  return render({{"config", config_to_json(c)},
                 {"class", c.restricted ? "restricted" : "full"},
                 {"enumerated", result.enumerated},
                 {"max", to_string(result.max)},
                 {"max_float", round_sig12(boost::rational_cast<double>(result.max))},
                 {"optimal_count", result.optima.size()},
                 {"sample_optima", std::move(sample)},
                 {"witness", std::move(witness_json)}});
}

std::string cmd_simulate(const RunConfig& c) {
  const CorrelationTable table = noisy_table(noise_params(c), c.seed);
  const CountsTable counts = sample_counts(table, c.shots, c.seed, uniform_weights(), c.threads);
  if (c.format == "csv") return "# " + counts_header(counts).dump() + "\n" + counts_to_csv(counts);

  const VbcEstimate est = estimate_vbc(counts);
  json sig = nullptr;
  if (est.total.std_error > 0.0) sig = round_sig12(significance(est.total, kClassicalBound));
  return render({{"config", config_to_json(c)},
                 {"counts", counts_header(counts)},
                 {"expected", breakdown_to_json(vbc_terms(table))},
                 {"estimate",
                  {{"term1", estimate_json(est.term1)},
                   {"term2", estimate_json(est.term2)},
                   {"term3", estimate_json(est.term3)},
                   {"total", estimate_json(est.total)},
                   {"cov_term1_term2", round_sig12(est.cov12)}}},
                 {"classical_bound", round_sig12(kClassicalBound)},
                 {"significance_sigma", sig}});
}

std::string cmd_optics_check(const RunConfig& c, bool& passed) {
  if (c.dephasing != 0.0 || c.jitter != 0.0) {
    throw std::invalid_argument("optics-check supports --visibility only");
  }
  const LinearOperator state = werner_state(c.visibility);
  const optics::NetworkOptions options{c.corrupt_angle};
  const CorrelationTable abstract = full_table(state);
  const CorrelationTable optical = optics::simulate_table(state, {}, options);

  double worst = 0.0;
  json per_setting = json::array();
  std::ostringstream csv;
  csv << "x1,x2,y,z,max_deviation\n";
  for (int s = 0; s < kNumSettings; ++s) {
    double dev = 0.0;
    for (int o = 0; o < kNumOutcomes; ++o) {
      dev = std::max(dev, std::abs(abstract.row(s)[o] - optical.row(s)[o]));
    }
    worst = std::max(worst, dev);
    const Setting set = Setting::from_index(s);
    per_setting.push_back({{"setting", set.key()}, {"max_deviation", round_sig12(dev)}});
    csv << set.x1 << ',' << set.x2 << ',' << set.y << ',' << set.z << ',' << format_sig12(dev)
        << '\n';
  }
  passed = worst < kOpticsTolerance;
  if (c.format == "csv") return csv.str();

  json report = {{"config", config_to_json(c)},
                 {"max_deviation", round_sig12(worst)},
                 {"tolerance", kOpticsTolerance},
                 {"pass", passed},
                 {"per_setting", std::move(per_setting)}};
  if (c.dump_network) {
    json nets = json::array();
    for (int x = 0; x < 4; ++x) {
      nets.push_back(optics::network_to_json(optics::build_switch_network(x >> 1, x & 1, options)));
    }
    report["networks"] = std::move(nets);
  }
  return render(report);
}

std::string cmd_sweep(const RunConfig& c) {
  if (c.grid < 2) throw std::invalid_argument("--grid must be at least 2");
  const int n = c.grid;
  auto axis = [n](int i) { return static_cast<double>(i) / (n - 1); };

  struct Row {
    double v, gamma;
    VbcBreakdown terms;
  };
  std::vector<Row> rows;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rows.push_back({axis(i), axis(j), {}});
  for (auto& r : rows) r.terms = vbc_under_noise({r.v, r.gamma, c.jitter}, c.seed);

  std::vector<std::pair<double, json>> thresholds;
  for (int j = 0; j < n; ++j) {
    json v = nullptr;
    try {
      v = round_sig12(threshold_visibility(axis(j), c.jitter, c.seed));
    } catch (const NoCrossing&) {
    }
    thresholds.emplace_back(axis(j), v);
  }

  if (c.format == "json") {
    json jr = json::array();
    for (const auto& r : rows) {
      json row = breakdown_to_json(r.terms);
      row["v"] = round_sig12(r.v);
      row["gamma"] = round_sig12(r.gamma);
      row["sigma_theta"] = round_sig12(c.jitter);
      jr.push_back(std::move(row));
    }
    json jt = json::array();
    for (const auto& [gamma, v] : thresholds) {
      jt.push_back({{"gamma", round_sig12(gamma)}, {"threshold_visibility", v}});
    }
    return render({{"config", config_to_json(c)}, {"rows", jr}, {"thresholds", jt}});
  }

  std::ostringstream os;
  os << "v,gamma,sigma_theta,term1,term2,term3,total\n";
  for (const auto& r : rows) {
    os << format_sig12(r.v) << ',' << format_sig12(r.gamma) << ',' << format_sig12(c.jitter) << ','
       << format_sig12(r.terms.term1) << ',' << format_sig12(r.terms.term2) << ','
       << format_sig12(r.terms.term3) << ',' << format_sig12(r.terms.total) << '\n';
  }
  for (const auto& [gamma, v] : thresholds) {
    os << "# threshold_visibility gamma=" << format_sig12(gamma)
       << " v=" << (v.is_null() ? std::string("none") : format_sig12(v.get<double>())) << '\n';
  }
  return os.str();
}

std::string cmd_spacetime(const RunConfig& c) {
  std::vector<SpacetimeEvent> events;
  if (c.events.empty()) {
    events = reference_geometry();
  } else {
    std::ifstream in(c.events);
    if (!in) throw std::runtime_error("cannot open events file '" + c.events + "'");
    events = events_from_json(json::parse(in));
  }
  const json pairs = classify_all(events);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "a,b,distance_m,light_distance_m,separation\n";
    for (const auto& p : pairs) {
      os << p["a"].get<std::string>() << ',' << p["b"].get<std::string>() << ','
         << format_sig12(p["distance_m"].get<double>()) << ','
         << format_sig12(p["light_distance_m"].get<double>()) << ','
         << p["separation"].get<std::string>() << '\n';
    }
    return os.str();
  }
  json ev = json::array();
  for (const auto& e : events) {
    ev.push_back({{"name", e.name},
                  {"t", round_sig12(e.t)},
                  {"position",
                   {round_sig12(e.position[0]), round_sig12(e.position[1]),
                    round_sig12(e.position[2])}}});
  }
  return render({{"config", config_to_json(c)},
                 {"speed_of_light", kSpeedOfLight},
                 {"events", std::move(ev)},
                 {"pairs", pairs}});
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::filesystem::path path(c.output);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / path;
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write output file '" + path.string() + "'");
  f << text;
}

void write_error(std::ostream& err, const std::string& type, const std::string& message) {
  err << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Quantum switch causal-order certification toolkit", "qswitch"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--visibility", c.visibility, "Werner visibility v")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--dephasing", c.dephasing, "Control dephasing gamma")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--jitter", c.jitter, "Measurement angle jitter (radians)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", c.output, "Output file (relative paths use $QSWITCH_OUTPUT_DIR)");
    sub->add_option("--threads", c.threads, "Worker thread cap")->check(CLI::PositiveNumber);
    sub->add_option("--shots", c.shots, "Number of trials");
  };

  CLI::App* predict = app.add_subcommand("predict", "Exact correlation table and functional value");
  CLI::App* bound = app.add_subcommand("bound", "Exhaustive classical bound");
  CLI::App* simulate = app.add_subcommand("simulate", "Sample counts, estimate, significance");
  CLI::App* optics_check = app.add_subcommand("optics-check", "Optical network vs abstract model");
  CLI::App* sweep = app.add_subcommand("sweep", "Noise grid sweep");
  CLI::App* spacetime = app.add_subcommand("spacetime", "Classify event separations");
  for (CLI::App* sub : {predict, bound, simulate, optics_check, sweep, spacetime}) add_common(sub);
  bound->add_flag("--restricted", c.restricted,
                  "Constant Bob, second Alice blind to the first Alice");
  sweep->add_option("--grid", c.grid, "Points per axis");
  spacetime->add_option("--events", c.events, "JSON events file");
  optics_check->add_flag("--dump-network", c.dump_network, "Include the element lists");
  optics_check->add_option("--corrupt-angle", c.corrupt_angle)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return 2;
  }

  c.command = app.get_subcommands().front()->get_name();
  if (c.format.empty()) c.format = c.command == "sweep" ? "csv" : "json";

  try {
    std::string text;
    bool passed = true;
    if (c.command == "predict") text = cmd_predict(c);
    else if (c.command == "bound") text = cmd_bound(c);
    else if (c.command == "simulate") text = cmd_simulate(c);
    else if (c.command == "optics-check") text = cmd_optics_check(c, passed);
    else if (c.command == "sweep") text = cmd_sweep(c);
    else if (c.command == "spacetime") text = cmd_spacetime(c);
    emit(c, text, out);
    if (!passed) {
      write_error(err, "check_failed", "optical network deviates from the abstract switch");
      return 1;
    }
    return 0;
  } catch (const EstimationError& e) {
    write_error(err, "estimation", e.what());
  } catch (const std::invalid_argument& e) {
    write_error(err, "invalid_argument", e.what());
  } catch (const std::exception& e) {
    write_error(err, "runtime", e.what());
  }
  return 1;
}

}  // namespace qswitch::cli
