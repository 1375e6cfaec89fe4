#include "oscrad/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace oscrad {

std::vector<double> GridSpec::build() const {
  if (points < 1) throw config_error("grid.points must be >= 1");
  std::vector<double> t(static_cast<size_t>(points), 0.0);
  if (spacing == "log") {
    if (!(start > 0.0) || !(stop > start)) throw config_error("log grid needs 0 < start < stop");
    const double ratio = std::log(stop / start);
    for (int i = 0; i < points; ++i)
      t[size_t(i)] = start * std::exp(ratio * (points == 1 ? 0.0 : double(i) / (points - 1)));
  } else if (spacing == "linear") {
    if (!(stop > start)) throw config_error("linear grid needs start < stop");
    for (int i = 0; i < points; ++i)
      t[size_t(i)] = start + (stop - start) * (points == 1 ? 0.0 : double(i) / (points - 1));
  } else {
    throw config_error("grid.spacing must be linear or log");
  }
  for (double v : t)
    if (v == 0.0) throw config_error("grid must exclude t = 0");
  return t;
}

void RunConfig::validate() const {
  try {
    physical.validate();
  } catch (const std::exception& ex) {
    throw config_error(ex.what());
  }
  if (!(photon.nu > 0.0)) throw config_error("photon.nu must be positive");
  if (photon.eps < 0.0) throw config_error("photon.eps must be nonnegative");
  if (std::abs(norm3(photon.k) - 1.0) > 1e-9) throw config_error("photon.k must be a unit vector");
  if (!(tolerance_abs > 0.0) || !(tolerance_rel > 0.0))
    throw config_error("tolerances must be positive");
  grid.build();
}

RunConfig RunConfig::defaults() { return RunConfig{}; }

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw config_error("");
    return x;
  } catch (...) {
    throw config_error("invalid numeric value for " + key + ": '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw config_error("");
    return x;
  } catch (...) {
    throw config_error("invalid integer value for " + key + ": '" + v + "'");
  }
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    if (key.empty() || val.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key or value");

    if (key == "physical.e") cfg.physical.e = to_double(key, val);
    else if (key == "physical.m") cfg.physical.m = to_double(key, val);
    else if (key == "physical.c") cfg.physical.c = to_double(key, val);
    else if (key == "physical.omega0") cfg.physical.omega0 = to_double(key, val);
    else if (key == "physical.hbar") cfg.physical.hbar = to_double(key, val);
    else if (key == "photon.nu") cfg.photon.nu = to_double(key, val);
    else if (key == "photon.eps") cfg.photon.eps = to_double(key, val);
    else if (key == "photon.k_x") cfg.photon.k[0] = to_double(key, val);
    else if (key == "photon.k_y") cfg.photon.k[1] = to_double(key, val);
    else if (key == "photon.k_z") cfg.photon.k[2] = to_double(key, val);
    else if (key == "photon.zeta_re_x") cfg.photon.zeta[0].real(to_double(key, val));
    else if (key == "photon.zeta_im_x") cfg.photon.zeta[0].imag(to_double(key, val));
    else if (key == "photon.zeta_re_y") cfg.photon.zeta[1].real(to_double(key, val));
    else if (key == "photon.zeta_im_y") cfg.photon.zeta[1].imag(to_double(key, val));
    else if (key == "photon.zeta_re_z") cfg.photon.zeta[2].real(to_double(key, val));
    else if (key == "photon.zeta_im_z") cfg.photon.zeta[2].imag(to_double(key, val));
    else if (key == "grid.start") cfg.grid.start = to_double(key, val);
    else if (key == "grid.stop") cfg.grid.stop = to_double(key, val);
    else if (key == "grid.points") cfg.grid.points = to_int(key, val);
    else if (key == "grid.spacing") cfg.grid.spacing = val;
    else if (key == "output.path") cfg.output_path = val;
    else if (key == "tolerance.abs") cfg.tolerance_abs = to_double(key, val);
    else if (key == "tolerance.rel") cfg.tolerance_rel = to_double(key, val);
    else throw config_error("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw std::logic_error("CsvWriter: column count mismatch");
  rows_.push_back(cells);
}

std::string CsvWriter::to_string() const {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(header_);
  for (const auto& row : rows_) emit(row);
  return out.str();
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);  // keep LF endings everywhere
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << to_string();
}

}  // namespace oscrad
