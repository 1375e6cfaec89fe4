#ifndef OSCRAD_CONFIG_HPP
#define OSCRAD_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "oscrad/model.hpp"
#include "oscrad/resolvent.hpp"

namespace oscrad {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double start = 0.1;
  double stop = 10.0;
  int points = 100;
  std::string spacing = "log";  // linear | log

  std::vector<double> build() const;
};

// Flat key=value configuration with section prefixes, e.g.
//   physical.e=0.3
//   photon.nu=1.0
//   grid.points=100
struct RunConfig {
  PhysicalParams physical;
  PhotonSpec photon;
  GridSpec grid;
  std::string output_path;
  double tolerance_abs = 1e-9;
  double tolerance_rel = 1e-8;

  void validate() const;

  static RunConfig defaults();
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);
};

// full-precision formatting used by every emitter ("%.17g")
std::string format_double(double v);

struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  // LF line endings, comma separated, header row first
  void write(const std::string& path) const;
  std::string to_string() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace oscrad

#endif
