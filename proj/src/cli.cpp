#include "memf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "memf/instance_io.hpp"
#include "memf/ishikawa.hpp"
#include "memf/memf_block.hpp"
#include "memf/memf_poly.hpp"

namespace memf {

namespace {

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  auto end = std::chrono::steady_clock::now();
  return std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
}

Regularizer parse_reg(const std::string& name) {
  if (name == "linear") return Regularizer::kLinear;
  if (name == "quadratic") return Regularizer::kQuadratic;
  if (name == "huber") return Regularizer::kHuber;
  throw InvalidArgumentError("unknown regularizer '" + name + "'");
}

void apply_scale(EnergyModel& model, Value scale) {
  if (scale == 1) return;
  if (scale < 1) throw InvalidArgumentError("--scale must be >= 1");
  for (auto& u : model.unary) {
    for (Value& x : u) x *= scale;
  }
  for (PairwiseSpec& spec : model.pairwise) {
    if (spec.is_table) {
      for (Value& x : spec.values) x *= scale;
    } else {
      spec.weight *= scale;
    }
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

}  // namespace

SolveReport run_solver(const std::string& name, const EnergyModel& model, bool diagnostics) {
  auto start = std::chrono::steady_clock::now();
  SolveReport report;
  if (name == "bruteforce") {
    auto [labeling, energy] = brute_force_minimize(model);
    report.solver = "bruteforce";
    report.energy = energy;
    report.flow_total = energy;
    report.constant = 0;
    report.labeling = std::move(labeling);
  } else if (name == "reference") {
    IshikawaCapacities caps = build_capacities(model);
    ReferenceResult result = reference_maxflow(caps);
    report.solver = "reference";
    report.flow_total = result.flow_total;
    report.constant = caps.constant;
    report.energy = result.flow_total + caps.constant;
    report.augmentations = result.augmentations;
    report.stored_values_peak = result.stored_values;
    report.labeling = std::move(result.labeling);
  } else if (name == "poly") {
    report = solve_poly(model, diagnostics);
  } else if (name == "block") {
    report = solve_block(model, diagnostics);
  } else {
    throw InvalidArgumentError("unknown solver '" + name + "'");
  }
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

void write_pgm(std::ostream& out, const Labeling& labeling, int width, int height, int ell) {
  if (labeling.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgumentError("labeling size does not match grid dimensions");
  }
  out << "P5\n" << width << ' ' << height << "\n255\n";
  for (int label : labeling) {
    long v = (2L * 255 * label + (ell - 1)) / (2L * (ell - 1));
    out.put(static_cast<char>(static_cast<unsigned char>(v)));
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory-efficient max-flow for multi-label submodular MRFs"};
  app.allow_extras(false);

  std::vector<std::string> gen_args;
  std::string input_file;
  int labels = 4;
  std::string reg_name = "quadratic";
  Value huber_delta = 1;
  Value weight = 1;
  Value unary_max = 16;
  std::uint64_t seed = 0;
  Value scale = 1;
  std::string solver_name = "block";
  bool verify = false;
  bool diagnostics = false;
  std::string labeling_out;
  std::string report_out;
  std::string solvers_list;
  int instances = 1;

  app.add_option("--gen", gen_args, "Generate an instance: --gen grid WxH")->expected(2);
  app.add_option("--input", input_file, "Read an instance file");
  app.add_option("--labels", labels, "Label count for --gen");
  app.add_option("--reg", reg_name, "Regularizer: linear|quadratic|huber");
  app.add_option("--huber-delta", huber_delta, "Huber threshold (doubled-Huber form)");
  app.add_option("--weight", weight, "Pairwise weight for --gen");
  app.add_option("--unary-max", unary_max, "Unaries drawn from [0, U)");
  app.add_option("--seed", seed, "PRNG seed for --gen");
  app.add_option("--scale", scale, "Multiply all potentials by an integer factor");
  app.add_option("--solver", solver_name, "bruteforce|reference|poly|block");
  app.add_flag("--verify", verify, "Run all solvers and require equal energies");
  app.add_flag("--diagnostics", diagnostics, "Collect distance traces / path-length stats");
  app.add_option("--labeling-out", labeling_out, "Write the labeling as binary PGM (grids only)");
  app.add_option("--report-out", report_out, "Write the key=value report to a file");
  app.add_option("--solvers", solvers_list, "Comma list of solvers to compare (>= 2)");
  app.add_option("--instances", instances, "Number of seeded instances for --solvers");

  std::vector<const char*> argv;
  argv.push_back("memf");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    bool have_gen = !gen_args.empty();
    bool have_input = !input_file.empty();
    if (have_gen == have_input) {
      err << "error: exactly one of --gen or --input is required\n";
      return 1;
    }

    int grid_w = 0, grid_h = 0;
    auto make_model = [&](std::uint64_t instance_seed) {
      if (have_input) {
        std::ifstream in(input_file);
        if (!in) throw InvalidArgumentError("cannot open input file '" + input_file + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        EnergyModel m = parse_instance(buffer.str());
        apply_scale(m, scale);
        return m;
      }
      if (gen_args[0] != "grid") {
        throw InvalidArgumentError("unknown generator '" + gen_args[0] + "' (expected 'grid')");
      }
      std::size_t x = gen_args[1].find('x');
      if (x == std::string::npos) {
        throw InvalidArgumentError("grid size must look like WxH, got '" + gen_args[1] + "'");
      }
      grid_w = std::stoi(gen_args[1].substr(0, x));
      grid_h = std::stoi(gen_args[1].substr(x + 1));
      EnergyModel m = generate_grid_instance(grid_w, grid_h, labels, parse_reg(reg_name), weight,
                                             unary_max, instance_seed, huber_delta);
      apply_scale(m, scale);
      return m;
    };

    if (!solvers_list.empty()) {
      std::vector<std::string> solvers = split_list(solvers_list);
      if (solvers.size() < 2) {
        err << "error: --solvers needs at least two solver names\n";
        return 1;
      }
      if (have_input && instances != 1) {
        err << "error: --instances requires --gen\n";
        return 1;
      }
      out << "# instance solver energy augmentations stored_values_peak wall_time_ms\n";
      bool disagreement = false;
      std::vector<double> aug_ratios;
      int block_wins = 0, paired = 0;
      std::vector<int> all_path_lengths;
      for (int t = 0; t < instances; ++t) {
        EnergyModel model = make_model(seed + static_cast<std::uint64_t>(t));
        std::map<std::string, SolveReport> reports;
        for (const std::string& name : solvers) {
          if (name == "block" && diagnostics) {
            auto start = std::chrono::steady_clock::now();
            BlockSolver solver(model, true);
            while (solver.step()) {
            }
            SolveReport r = solver.report(false);
            r.wall_time_ms = elapsed_ms(start);
            all_path_lengths.insert(all_path_lengths.end(), solver.path_lengths().begin(),
                                    solver.path_lengths().end());
            reports[name] = std::move(r);
          } else {
            reports[name] = run_solver(name, model, diagnostics);
          }
          const SolveReport& r = reports[name];
          out << t << ' ' << name << ' ' << r.energy << ' ' << r.augmentations << ' '
              << r.stored_values_peak << ' ' << r.wall_time_ms << '\n';
        }
        Value first_energy = reports[solvers[0]].energy;
        for (const std::string& name : solvers) {
          if (reports[name].energy != first_energy) {
            disagreement = true;
            err << "energy disagreement on instance " << t << ": " << solvers[0] << '='
                << first_energy << " vs " << name << '=' << reports[name].energy << '\n';
          }
        }
        if (reports.count("reference") && reports.count("block")) {
          ++paired;
          long ra = reports["reference"].augmentations;
          long ba = reports["block"].augmentations;
          if (ba < ra) ++block_wins;
          if (ra > 0) aug_ratios.push_back(static_cast<double>(ba) / static_cast<double>(ra));
        }
      }
      if (paired > 0) {
        std::sort(aug_ratios.begin(), aug_ratios.end());
        double median = aug_ratios.empty() ? 0.0 : aug_ratios[aug_ratios.size() / 2];
        out << "block_wins=" << block_wins << "/" << paired << '\n';
        out << "aug_ratio_median=" << median << '\n';
      }
      if (diagnostics && !all_path_lengths.empty()) {
        std::sort(all_path_lengths.begin(), all_path_lengths.end());
        std::map<int, int> histogram;
        for (int len : all_path_lengths) ++histogram[len];
        out << "block_path_length_median=" << all_path_lengths[all_path_lengths.size() / 2]
            << '\n';
        for (auto [len, count] : histogram) {
          out << "block_path_length_" << len << '=' << count << '\n';
        }
      }
      return disagreement ? 2 : 0;
    }

    EnergyModel model = make_model(seed);
    SolveReport report = run_solver(solver_name, model, diagnostics);

    int exit_code = 0;
    if (verify) {
      std::vector<std::string> names = {"reference", "poly", "block"};
      std::uint64_t count = 1;
      bool brute_ok = true;
      for (int v = 0; v < model.num_vertices && brute_ok; ++v) {
        if (count > kDefaultBruteForceCap / static_cast<std::uint64_t>(model.num_labels)) {
          brute_ok = false;
        } else {
          count *= static_cast<std::uint64_t>(model.num_labels);
        }
      }
      if (brute_ok) names.insert(names.begin(), "bruteforce");
      for (const std::string& name : names) {
        if (name == report.solver) continue;
        SolveReport other = run_solver(name, model, false);
        if (other.energy != report.energy) {
          err << "verify: " << name << " energy " << other.energy << " != " << report.solver
              << " energy " << report.energy << '\n';
          exit_code = 2;
        }
      }
      if (exit_code == 0) out << "verify=ok\n";
    }

    if (!labeling_out.empty()) {
      if (!have_gen) {
        err << "error: --labeling-out requires a --gen grid instance\n";
        return 1;
      }
      if (!report.labeling) {
        err << "error: solver produced no labeling\n";
        return 1;
      }
      std::ofstream pgm(labeling_out, std::ios::binary);
      if (!pgm) {
        err << "error: cannot write '" << labeling_out << "'\n";
        return 1;
      }
      write_pgm(pgm, *report.labeling, grid_w, grid_h, model.num_labels);
    }

    std::string formatted = format_report(report);
    if (!report_out.empty()) {
      std::ofstream rf(report_out);
      if (!rf) {
        err << "error: cannot write '" << report_out << "'\n";
        return 1;
      }
      rf << formatted;
    }
    out << formatted;
    return exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace memf
