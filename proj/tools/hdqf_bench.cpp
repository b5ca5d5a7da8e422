// Experiment runner: each subcommand writes CSV, SVG and a run manifest to --out-dir.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hdqf/bench/experiments.hpp"

namespace {

using namespace hdqf;
using namespace hdqf::bench;

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string mode;
  std::size_t shots = 0;
  std::size_t runs = 0;
  std::string config;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out-dir", f.out_dir, "output directory (default out/<subcommand>)");
  cmd->add_option("--mode", f.mode, "quantum engine")->check(CLI::IsMember({"circuit", "implicit"}));
  cmd->add_option("--shots", f.shots, "measurement shots")->check(CLI::PositiveNumber);
  cmd->add_option("--runs", f.runs, "single-shot runs per decode")->check(CLI::PositiveNumber);
  cmd->add_option("--config", f.config, "key = value parameter file")->check(CLI::ExistingFile);
  cmd->add_option("--set", f.set, "override a parameter, key=value (repeatable)");
}

Config resolve(const std::string& name, const CLI::App* cmd, const CommonFlags& f, std::vector<std::string>& notices) {
  const Config defaults = default_config(name);
  const Config file = f.config.empty() ? Config{} : load_config(f.config);
  Config cli;
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    cli.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  auto flag = [&](const char* opt, const std::string& key, const std::string& value) {
    if (cmd->count(opt) == 0) return;
    if (defaults.has(key)) {
      cli.set(key, value);
    } else {
      notices.push_back(std::string(opt) + " has no effect on " + name);
    }
  };
  flag("--seed", "seed", std::to_string(f.seed));
  flag("--mode", "mode", f.mode);
  flag("--shots", "shots", std::to_string(f.shots));
  flag("--runs", "runs", std::to_string(f.runs));
  for (const Config* src : {&file, static_cast<const Config*>(&cli)}) {
    for (const auto& [k, v] : src->values()) {
      if (!defaults.has(k)) throw std::invalid_argument("unknown parameter '" + k + "' for " + name);
    }
  }
  return resolve_config(defaults, file, cli);
}

void print_fixed(const std::string& label, double v) { std::cout << label << format_number(v) << '\n'; }

void run(const std::string& name, const Config& c, OutputDir& out, std::vector<std::string>& notices) {
  if (name == "prob-vs-iter") {
    const auto r = run_prob_vs_iter(c);
    notices.insert(notices.end(), r.notices.begin(), r.notices.end());
    write_prob_vs_iter(r, c, out);
    for (const auto& cell : r.cells) {
      std::cout << "F=" << cell.factors << " N=" << cell.size << " t=" << cell.instance.solutions
                << " mode=" << to_string(cell.mode) << " optimal=" << cell.optimal
                << " first_peak=" << cell.trace.peak_iteration << " max_p=" << format_number(cell.trace.max_success())
                << '\n';
    }
  } else if (name == "scaling") {
    const auto r = run_scaling(c);
    notices.insert(notices.end(), r.notices.begin(), r.notices.end());
    write_scaling(r, c, out);
    for (const auto& f : r.fits) {
      std::cout << "F=" << f.factors << " quantum_slope=" << format_number(f.quantum_slope)
                << " classical_slope=" << format_number(f.classical_slope) << '\n';
    }
  } else if (name == "noise") {
    const auto r = run_noise(c);
    notices.insert(notices.end(), r.notices.begin(), r.notices.end());
    write_noise(r, c, out);
    for (const auto& nc : r.cases) {
      std::cout << "N=" << nc.size << " spearman(tv,T1)=" << format_number(nc.tv_vs_t1.rho)
                << " p=" << format_number(nc.tv_vs_t1.p_value)
                << " spearman(tv,iterations)=" << format_number(nc.tv_vs_iteration.rho)
                << " p=" << format_number(nc.tv_vs_iteration.p_value) << '\n';
    }
  } else if (name == "image-decode") {
    const auto r = run_image_decode(c);
    notices.insert(notices.end(), r.notices.begin(), r.notices.end());
    write_image_decode(r, c, out);
    for (const auto& m : r.methods) {
      std::cout << to_string(m.method) << " mean_pixel_accuracy=" << format_number(m.mean_accuracy())
                << " exact=" << (m.all_exact() ? "yes" : "no") << '\n';
    }
  } else if (name == "non-unique") {
    const auto r = run_non_unique(c);
    notices.insert(notices.end(), r.notices.begin(), r.notices.end());
    write_non_unique(r, c, out);
    for (const auto& t : r.targets) {
      std::cout << "t=" << t.t << " optimal=" << t.optimal << " peak=" << t.peak
                << " first_correct=" << (t.first_correct ? std::to_string(*t.first_correct) : "none")
                << " stable_from=" << (t.stable_begin ? std::to_string(*t.stable_begin) : "none")
                << " modal_solutions=" << t.modal_solutions.size() << '\n';
    }
  } else if (name == "table1") {
    const auto rows = run_table1(c);
    write_table1(rows, c, out);
    for (const auto& r : rows) {
      std::cout << "(" << r.dim << "," << r.factors << "," << r.size << ") quantum_ns=" << r.quantum_ns
                << " resonator_ps=" << format_number(r.resonator.p_success())
                << " resonator_ns=" << format_number(r.resonator.effective_steps()) << '\n';
    }
  } else if (name == "gen-codebook") {
    const auto books = gen_codebooks(c.u64("seed"), c.size("factors"), c.size("size"), c.size("dim"));
    std::ostringstream bin;
    write_codebooks(bin, books);
    out.write(c.str("file"), bin.str());
    std::vector<std::vector<std::string>> rows;
    for (std::size_t f = 0; f < books.factors(); ++f) {
      for (std::size_t i = 0; i < books.size(); ++i) {
        std::string v;
        for (auto e : books.row(f, i)) v += e > 0 ? '+' : '-';
        rows.push_back({c.str("seed"), format_number(f), format_number(i), v});
      }
    }
    out.write("codebooks.csv", csv_text({"seed", "factor", "index", "codevector"}, rows));
    print_fixed("rows_distinct=", books.rows_distinct() ? 1.0 : 0.0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDQF experiment runner"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"prob-vs-iter", "success probability per iteration against the closed form"},
      {"scaling", "first-peak iterations and brute-force comparisons against codebook size"},
      {"noise", "thermal relaxation error against T1 and iteration count"},
      {"image-decode", "recover bound images section by section"},
      {"non-unique", "decode traces for targets with one and two factorizations"},
      {"table1", "quantum and resonator effective steps"},
      {"gen-codebook", "write a seeded codebook file"}};
  std::vector<CommonFlags> flags(commands.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    cmds.push_back(app.add_subcommand(commands[i].first, commands[i].second));
    add_common(cmds.back(), flags[i]);
  }
  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!cmds[i]->parsed()) continue;
    const auto& name = commands[i].first;
    try {
      std::vector<std::string> notices;
      const auto cfg = resolve(name, cmds[i], flags[i], notices);
      OutputDir out(flags[i].out_dir.empty() ? "out/" + name : flags[i].out_dir);
      run(name, cfg, out, notices);
      write_manifest(out, name, cfg, notices);
      for (const auto& n : notices) std::cerr << "notice: " << n << '\n';
      std::cout << "wrote " << out.files().size() << " files to " << out.path().string() << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
