#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dshock/dshock.hpp>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dshock::IoError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (!f && !f.eof()) throw dshock::IoError("read failed: " + path);
  return ss.str();
}

std::vector<double> parse_sweep_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw dshock::ParseError("bad sweep value: '" + tok + "'");
    }
  }
  if (out.empty()) throw dshock::ParseError("empty sweep list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"damped pressureless-flow Riemann experiments"};
  std::string mode, config_path, out_path, format, sweep;
  app.add_option("mode", mode, "exact | profile | simulate | convergence-eps | convergence-dx | limit-alpha")
      ->required();
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_path, "output path override");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--sweep", sweep, "comma-separated sweep values override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    dshock::ExperimentConfig cfg = dshock::parse_config(read_file(config_path));
    cfg.mode = dshock::mode_from_string(mode);
    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.output_format = format;
    if (!sweep.empty()) cfg.sweep = parse_sweep_list(sweep);
    dshock::validate_config(cfg);

    const dshock::Report report = dshock::run_experiment(cfg);
    dshock::write_report(report, cfg.output_path, cfg.output_format);
    std::cerr << "wrote " << cfg.output_path << " (" << report.rows.size() << " rows)\n";
    return 0;
  } catch (const dshock::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dshock::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
